//! Scenario configuration from a JSON file and command-line flags.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use qcorr_core::{ChannelFamily, Family, FanoForm, Scenario, Sign};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Mazzola,
    Pure,
    Werner,
    Custom,
}

impl FamilyName {
    fn as_str(self) -> &'static str {
        match self {
            FamilyName::Mazzola => "mazzola",
            FamilyName::Pure => "pure",
            FamilyName::Werner => "werner",
            FamilyName::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelName {
    #[value(name = "phase_damping")]
    PhaseDamping,
    #[value(name = "depolarizing")]
    Depolarizing,
    #[value(name = "amplitude_damping")]
    AmplitudeDamping,
}

impl From<ChannelName> for ChannelFamily {
    fn from(c: ChannelName) -> Self {
        match c {
            ChannelName::PhaseDamping => ChannelFamily::PhaseDamping,
            ChannelName::Depolarizing => ChannelFamily::Depolarizing,
            ChannelName::AmplitudeDamping => ChannelFamily::AmplitudeDamping,
        }
    }
}

/// Accepts `+`/`-` as well as `plus`/`minus`.
pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        other => Err(format!("sign must be `+` or `-`, got `{other}`")),
    }
}

/// Every scenario field, all optional. Flags and file contents merge into this.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub family: Option<FamilyName>,
    pub c3: Option<f64>,
    #[serde(alias = "sign_variant")]
    pub sign: Option<Sign>,
    pub theta: Option<f64>,
    pub beta: Option<f64>,
    pub fano: Option<FanoForm>,
    pub gamma: Option<f64>,
    pub channel: Option<ChannelName>,
    pub t_max: Option<f64>,
    pub n_points: Option<usize>,
}

const DEFAULT_C3: f64 = 0.6;
const DEFAULT_GAMMA: f64 = 1.0;

impl ScenarioConfig {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ScenarioConfig) -> Self {
        Self {
            family: over.family.or(self.family),
            c3: over.c3.or(self.c3),
            sign: over.sign.or(self.sign),
            theta: over.theta.or(self.theta),
            beta: over.beta.or(self.beta),
            fano: over.fano.or(self.fano),
            gamma: over.gamma.or(self.gamma),
            channel: over.channel.or(self.channel),
            t_max: over.t_max.or(self.t_max),
            n_points: over.n_points.or(self.n_points),
        }
    }

    /// Builds the scenario, rejecting fields that do not belong to the family.
    pub fn to_scenario(&self) -> Result<Scenario, Vec<String>> {
        let family_name = self.family.unwrap_or(FamilyName::Mazzola);
        let present = [
            ("c3", self.c3.is_some(), FamilyName::Mazzola),
            ("sign", self.sign.is_some(), FamilyName::Mazzola),
            ("theta", self.theta.is_some(), FamilyName::Pure),
            ("beta", self.beta.is_some(), FamilyName::Werner),
            ("fano", self.fano.is_some(), FamilyName::Custom),
        ];
        let mut errors: Vec<String> = present
            .iter()
            .filter(|(_, set, owner)| *set && *owner != family_name)
            .map(|(field, _, _)| format!("`{field}` is not a parameter of family {}", family_name.as_str()))
            .collect();
        let missing = |field: &str| format!("family {} requires `{field}`", family_name.as_str());
        let family = match family_name {
            FamilyName::Mazzola => Some(Family::Mazzola {
                c3: self.c3.unwrap_or(DEFAULT_C3),
                sign: self.sign.unwrap_or(Sign::Plus),
            }),
            FamilyName::Pure => self.theta.map(|theta| Family::Pure { theta }),
            FamilyName::Werner => self.beta.map(|beta| Family::Werner { beta }),
            FamilyName::Custom => self.fano.map(|fano| Family::Custom { fano }),
        };
        let Some(family) = family else {
            let field = match family_name {
                FamilyName::Pure => "theta",
                FamilyName::Werner => "beta",
                _ => "fano",
            };
            errors.push(missing(field));
            return Err(errors);
        };
        if !errors.is_empty() {
            return Err(errors);
        }
        let mut scenario = Scenario::new(family, self.gamma.unwrap_or(DEFAULT_GAMMA));
        if let Some(channel) = self.channel {
            scenario = scenario.with_channel(channel.into());
        }
        if let Some(t_max) = self.t_max {
            scenario.t_max = t_max;
        }
        if let Some(n) = self.n_points {
            scenario.n_points = n;
        }
        Ok(scenario)
    }
}

/// Full dry-run check: configuration shape plus every engine invariant.
pub fn validate(config: &ScenarioConfig) -> Result<Scenario, Vec<String>> {
    let scenario = config.to_scenario()?;
    let issues = scenario.issues();
    if issues.is_empty() {
        Ok(scenario)
    } else {
        Err(issues)
    }
}
