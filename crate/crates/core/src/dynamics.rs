//! Correlation trajectories under local Markovian noise.
//!
//! Each sample is evolved twice: once through the Kraus operators and once by
//! decaying the Fano coefficients in closed form. The two routes must agree
//! before any correlation measure is computed.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_local_unchecked, channel_at_time, BlochAffine, ChannelFamily};
use crate::correlations::{complementary_correlation, discord, p_function, p_sum, MeasurementDirection};
use crate::error::{CoreError, Result};
use crate::states::{bell_diagonal, extract_fano, from_fano, schmidt_pure, werner, BellDiagonalCoeffs, DensityMatrix, FanoForm};

/// Maximum entrywise disagreement allowed between the Kraus and closed-form routes.
pub const ROUTE_TOL: f64 = 1e-9;
pub const DEFAULT_POINTS: usize = 801;
/// Kink significance: the largest second difference must exceed this multiple of the median.
pub const KINK_MEDIAN_FACTOR: f64 = 10.0;
/// Second differences below this are optimizer noise, never a kink.
pub const KINK_FLOOR: f64 = 1e-6;
/// A candidate kink must exceed the second differences this many samples away
/// on either side by [`KINK_ISOLATION_FACTOR`].
pub const KINK_ISOLATION_GAP: usize = 2;
pub const KINK_ISOLATION_FACTOR: f64 = 3.0;
pub const MIN_DETECTION_SAMPLES: usize = 8;

/// Selects c1(0) = ±1, c2(0) = ∓c3 for the dephasing-transition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Initial-state family of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Bell-diagonal with c = (±1, ∓c3, c3).
    Mazzola { c3: f64, sign: Sign },
    /// cos θ |00> + sin θ |11>.
    Pure { theta: f64 },
    /// Singlet fraction β mixed with white noise.
    Werner { beta: f64 },
    Custom { fano: FanoForm },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Mazzola { .. } => "mazzola",
            Family::Pure { .. } => "pure",
            Family::Werner { .. } => "werner",
            Family::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub family: Family,
    pub gamma: f64,
    pub channel: ChannelFamily,
    pub t_max: f64,
    pub n_points: usize,
}

impl Scenario {
    /// Phase damping at rate `gamma` on the grid `[0, 2/γ]` with 801 points.
    pub fn new(family: Family, gamma: f64) -> Self {
        let t_max = if gamma > 0.0 { 2.0 / gamma } else { 2.0 };
        Self {
            family,
            gamma,
            channel: ChannelFamily::PhaseDamping,
            t_max,
            n_points: DEFAULT_POINTS,
        }
    }

    pub fn mazzola(c3: f64, sign: Sign, gamma: f64) -> Self {
        Self::new(Family::Mazzola { c3, sign }, gamma)
    }

    pub fn pure(theta: f64, gamma: f64) -> Self {
        Self::new(Family::Pure { theta }, gamma)
    }

    pub fn werner(beta: f64, gamma: f64) -> Self {
        Self::new(Family::Werner { beta }, gamma)
    }

    pub fn with_grid(mut self, t_max: f64, n_points: usize) -> Self {
        self.t_max = t_max;
        self.n_points = n_points;
        self
    }

    pub fn with_channel(mut self, channel: ChannelFamily) -> Self {
        self.channel = channel;
        self
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        match &self.family {
            Family::Mazzola { c3, sign } => {
                if !(c3.abs() <= 1.0) {
                    return Err(CoreError::parameter("|c₃| ≤ 1 violated"));
                }
                let s = sign.value();
                bell_diagonal(&BellDiagonalCoeffs::new(s, -s * c3, *c3)?)
            }
            Family::Pure { theta } => {
                if !theta.is_finite() {
                    return Err(CoreError::parameter("θ must be finite"));
                }
                Ok(schmidt_pure(*theta))
            }
            Family::Werner { beta } => werner(*beta),
            Family::Custom { fano } => from_fano(fano),
        }
    }

    /// Dry-run check of every scenario invariant; empty when valid.
    pub fn issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            issues.push(format!("γ = {} must be finite and >= 0", self.gamma));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            issues.push(format!("t_max = {} must be finite and > 0", self.t_max));
        }
        if self.n_points < 2 {
            issues.push(format!("n_points = {} must be >= 2", self.n_points));
        }
        if matches!(self.channel, ChannelFamily::Custom) {
            issues.push("custom Kraus channels have no time parametrization".into());
        }
        if let Err(e) = self.initial_state() {
            issues.push(match e {
                CoreError::Parameter(msg) => msg,
                other => other.to_string(),
            });
        }
        issues
    }

    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.n_points.max(2);
        let dt = self.t_max / (n - 1) as f64;
        (0..n).map(|i| i as f64 * dt).collect()
    }

    /// Analytic crossing time of the dominant correlation for Bell-diagonal states
    /// under phase damping, when one exists.
    pub fn analytic_transition_time(&self) -> Option<f64> {
        if self.channel != ChannelFamily::PhaseDamping || !(self.gamma > 0.0) {
            return None;
        }
        let f = extract_fano(&self.initial_state().ok()?);
        let bell_diagonal = f.a.iter().chain(&f.b).all(|x| x.abs() < 1e-12) && f.max_off_diagonal() < 1e-12;
        if !bell_diagonal {
            return None;
        }
        let [c1, c2, c3] = f.diagonal();
        let decaying = c1.abs().max(c2.abs());
        if c3.abs() < 1e-12 || decaying <= c3.abs() {
            return None;
        }
        Some((decaying / c3.abs()).ln() / (2.0 * self.gamma))
    }
}

/// Correlation measures at one time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSample {
    pub t: f64,
    #[serde(rename = "I")]
    pub mutual_information: f64,
    #[serde(rename = "C")]
    pub classical_correlation: f64,
    #[serde(rename = "D")]
    pub discord: f64,
    #[serde(rename = "Icomp")]
    pub complementary: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scenario: Scenario,
    pub samples: Vec<CorrelationSample>,
    /// Largest disagreement seen between the Kraus and closed-form routes.
    pub max_route_deviation: f64,
}

pub fn evolve_trajectory(scenario: &Scenario) -> Result<Trajectory> {
    let issues = scenario.issues();
    if !issues.is_empty() {
        return Err(CoreError::Parameter(issues.join("; ")));
    }
    let rho0 = scenario.initial_state()?;
    let fano0 = extract_fano(&rho0);
    let evolved: Vec<(CorrelationSample, f64)> = scenario
        .time_grid()
        .into_par_iter()
        .map(|t| evolve_sample(scenario, &rho0, &fano0, t))
        .collect::<Result<_>>()?;
    let max_route_deviation = evolved.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(Trajectory {
        scenario: scenario.clone(),
        samples: evolved.into_iter().map(|(s, _)| s).collect(),
        max_route_deviation,
    })
}

/// Evolves the initial state to time `t` along both routes and checks they agree.
pub fn evolve_state(scenario: &Scenario, rho0: &DensityMatrix, t: f64) -> Result<(DensityMatrix, f64)> {
    evolve_state_from(scenario, rho0, &extract_fano(rho0), t)
}

fn evolve_state_from(
    scenario: &Scenario,
    rho0: &DensityMatrix,
    fano0: &FanoForm,
    t: f64,
) -> Result<(DensityMatrix, f64)> {
    let channel = channel_at_time(scenario.channel, scenario.gamma, t)?;
    let by_kraus = apply_local_unchecked(rho0.matrix(), &channel, &channel);
    let affine = channel
        .bloch_affine()
        .ok_or_else(|| CoreError::parameter("channel has no closed-form Bloch action"))?;
    let by_decay = BlochAffine::apply_local(fano0, &affine, &affine).to_matrix();
    let deviation = by_kraus.max_abs_diff(&by_decay);
    if !(deviation <= ROUTE_TOL) {
        return Err(CoreError::Consistency(format!(
            "Kraus and closed-form evolution differ by {deviation:e} at t = {t}"
        )));
    }
    Ok((DensityMatrix::new(by_kraus)?, deviation))
}

fn evolve_sample(
    scenario: &Scenario,
    rho0: &DensityMatrix,
    fano0: &FanoForm,
    t: f64,
) -> Result<(CorrelationSample, f64)> {
    let (state, deviation) = evolve_state_from(scenario, rho0, fano0, t)?;
    let report = discord(&state);
    let icomp = complementary_correlation(&state, (MeasurementDirection::x(), MeasurementDirection::z()))?;
    let split = report.mutual_information - report.classical_correlation;
    if (report.discord - split).abs() >= 1e-8 {
        return Err(CoreError::Consistency(format!(
            "D = {} but I - C = {split} at t = {t}",
            report.discord
        )));
    }
    let [c1, c2, c3] = extract_fano(&state).diagonal();
    Ok((
        CorrelationSample {
            t,
            mutual_information: report.mutual_information,
            classical_correlation: report.classical_correlation,
            discord: report.discord,
            complementary: icomp,
            c1,
            c2,
            c3,
        },
        deviation,
    ))
}

/// `-ln|c3| / (2γ)`; `None` when c3 = 0.
pub fn analytic_transition_time(c3: f64, gamma: f64) -> Result<Option<f64>> {
    if !(gamma > 0.0) {
        return Err(CoreError::parameter(format!("γ = {gamma} must be > 0")));
    }
    if !(c3.abs() <= 1.0) {
        return Err(CoreError::parameter("|c₃| ≤ 1 violated"));
    }
    if c3 == 0.0 {
        return Ok(None);
    }
    Ok(Some(-c3.abs().ln() / (2.0 * gamma)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionResult {
    pub detected_t: Option<f64>,
    pub analytic_t: Option<f64>,
    #[serde(skip)]
    pub method: String,
}

/// Locates a kink in C(t) from second differences on the sample grid.
///
/// Kinks within a few samples of either end of the grid are not resolvable.
pub fn detect_transition(traj: &Trajectory) -> Result<TransitionResult> {
    let n = traj.samples.len();
    if n < MIN_DETECTION_SAMPLES {
        return Err(CoreError::parameter(format!(
            "transition detection needs at least {MIN_DETECTION_SAMPLES} samples, got {n}"
        )));
    }
    let c: Vec<f64> = traj.samples.iter().map(|s| s.classical_correlation).collect();
    let second: Vec<f64> = (1..n - 1)
        .map(|i| (c[i + 1] - 2.0 * c[i] + c[i - 1]).abs())
        .collect();
    // A kink is a spike in |Δ²C| that stands above the curvature on both sides.
    // Steep but smooth stretches (C ~ t log t next to a pure conditional state)
    // have comparable second differences nearby and are skipped.
    let isolated = |i: usize| {
        i >= KINK_ISOLATION_GAP
            && i + KINK_ISOLATION_GAP < second.len()
            && second[i]
                >= KINK_ISOLATION_FACTOR
                    * second[i - KINK_ISOLATION_GAP].max(second[i + KINK_ISOLATION_GAP])
    };
    let (peak_offset, peak) = (0..second.len())
        .filter(|&i| isolated(i))
        .fold((0, 0.0), |(bi, bv), i| if second[i] > bv { (i, second[i]) } else { (bi, bv) });
    let mut sorted = second.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let significant = peak > KINK_MEDIAN_FACTOR * median && peak > KINK_FLOOR;
    Ok(TransitionResult {
        detected_t: significant.then(|| traj.samples[peak_offset + 1].t),
        analytic_t: traj.scenario.analytic_transition_time(),
        method: format!(
            "isolated argmax |Δ²C| = {peak:.3e} vs {KINK_MEDIAN_FACTOR}x median {median:.3e} (floor {KINK_FLOOR:e})"
        ),
    })
}

/// Reference Werner-family closed forms `(C, D)` for correlation magnitude `k`.
///
/// Evaluated verbatim for comparison; the optimizer is the reference.
pub fn werner_reference_closed_forms(k: f64, gamma: f64, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&k) {
        return Err(CoreError::parameter(format!("k = {k} must lie in [0, 1]")));
    }
    if !(gamma >= 0.0) || !(t >= 0.0) {
        return Err(CoreError::parameter("γ and t must be >= 0"));
    }
    let c = p_sum(k)?;
    let decay = 2.0 * k * (-2.0 * gamma * t).exp();
    let (hi, lo) = (k + decay, k - decay);
    for arg in [hi, lo] {
        if !(-1.0..=1.0).contains(&arg) {
            return Err(CoreError::FormulaDomain(format!(
                "P-argument {arg:.6} outside [-1, 1] (k = {k}, γt = {})",
                gamma * t
            )));
        }
    }
    let d = 0.5 * (p_function(hi)? + p_function(lo)? - 2.0 * p_function(k)?);
    Ok((c, d))
}

/// Reference Werner formulas set against the optimizer on the evolved state.
#[derive(Debug, Clone, PartialEq)]
pub struct WernerComparison {
    pub t: f64,
    pub c_closed_form: f64,
    pub d_closed_form: Option<f64>,
    pub domain_error: Option<String>,
    pub c_optimizer: f64,
    pub d_optimizer: f64,
}

impl WernerComparison {
    pub fn c_discrepancy(&self) -> f64 {
        (self.c_closed_form - self.c_optimizer).abs()
    }

    pub fn d_discrepancy(&self) -> Option<f64> {
        self.d_closed_form.map(|d| (d - self.d_optimizer).abs())
    }
}

pub fn compare_werner(beta: f64, gamma: f64, t: f64) -> Result<WernerComparison> {
    let scenario = Scenario::werner(beta, gamma);
    let rho0 = scenario.initial_state()?;
    let (state, _) = evolve_state(&scenario, &rho0, t)?;
    let report = discord(&state);
    let k = beta.abs();
    let (c_closed_form, d_closed_form, domain_error) = match werner_reference_closed_forms(k, gamma, t) {
        Ok((c, d)) => (c, Some(d), None),
        Err(CoreError::FormulaDomain(msg)) => (p_sum(k)?, None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(WernerComparison {
        t,
        c_closed_form,
        d_closed_form,
        domain_error,
        c_optimizer: report.classical_correlation,
        d_optimizer: report.discord,
    })
}
