//! Single-qubit CPTP maps in Kraus form and their local action on two qubits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::{pauli, tensor_product, ComplexMatrix};
use crate::states::{DensityMatrix, FanoForm};

pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelFamily {
    Identity,
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    Custom,
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChannelFamily::Identity => "identity",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::AmplitudeDamping => "amplitude_damping",
            ChannelFamily::PhaseDamping => "phase_damping",
            ChannelFamily::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Affine action `r -> M r + shift` of a qubit channel on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAffine {
    pub m: [[f64; 3]; 3],
    pub shift: [f64; 3],
}

impl BlochAffine {
    pub fn identity() -> Self {
        Self::diagonal([1.0; 3], [0.0; 3])
    }

    pub fn diagonal(d: [f64; 3], shift: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Self { m, shift }
    }

    // [[1, 0], [shift, M]] acting on (1, r)
    fn extended(&self) -> [[f64; 4]; 4] {
        let mut e = [[0.0; 4]; 4];
        e[0][0] = 1.0;
        for i in 0..3 {
            e[i + 1][0] = self.shift[i];
            for j in 0..3 {
                e[i + 1][j + 1] = self.m[i][j];
            }
        }
        e
    }

    /// Applies `Λ_A ⊗ Λ_B` to a Fano form: `R' = E_A R E_B^T`.
    pub fn apply_local(fano: &FanoForm, on_a: &Self, on_b: &Self) -> FanoForm {
        let r = fano.coefficients();
        let ea = on_a.extended();
        let eb = on_b.extended();
        let mut out = [[0.0; 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    for l in 0..4 {
                        acc += ea[mu][k] * r[k][l] * eb[nu][l];
                    }
                }
                out[mu][nu] = acc;
            }
        }
        FanoForm::from_coefficients(&out)
    }
}

/// Ordered Kraus operators of a single-qubit channel.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    family: ChannelFamily,
    p: f64,
}

impl KrausChannel {
    /// Validates completeness and rank; exactly-zero operators are dropped.
    pub fn new(ops: Vec<ComplexMatrix>, family: ChannelFamily, p: f64) -> Result<Self> {
        let ops: Vec<ComplexMatrix> = ops
            .into_iter()
            .filter(|k| k.as_slice().iter().any(|z| z.norm() > 0.0))
            .collect();
        if ops.is_empty() || ops.len() > 4 {
            return Err(CoreError::parameter(format!(
                "Kraus rank must be in 1..=4, got {}",
                ops.len()
            )));
        }
        if let Some(k) = ops.iter().find(|k| k.dims() != (2, 2)) {
            return Err(CoreError::Dimension {
                expected: "2x2 Kraus operators".into(),
                got: format!("{}x{}", k.rows(), k.cols()),
            });
        }
        let channel = Self { ops, family, p };
        let defect = channel.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(CoreError::parameter(format!(
                "Kraus operators are not trace preserving: max |Σ K^dagger K - 1| = {defect:e}"
            )));
        }
        Ok(channel)
    }

    pub fn custom(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(ops, ChannelFamily::Custom, f64::NAN)
    }

    pub fn identity() -> Self {
        Self {
            ops: vec![ComplexMatrix::identity(2)],
            family: ChannelFamily::Identity,
            p: 0.0,
        }
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn rank(&self) -> usize {
        self.ops.len()
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `max |Σ K^dagger K - 1|`.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// `Σ K ρ K^dagger` on a 2x2 operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for k in &self.ops {
            out = &out + &rho.conjugate_by(k);
        }
        out
    }

    /// Closed-form Bloch-vector action for the named families.
    pub fn bloch_affine(&self) -> Option<BlochAffine> {
        let p = self.p;
        match self.family {
            ChannelFamily::Identity => Some(BlochAffine::identity()),
            ChannelFamily::PhaseDamping => Some(BlochAffine::diagonal([1.0 - p, 1.0 - p, 1.0], [0.0; 3])),
            ChannelFamily::Depolarizing => {
                let s = 1.0 - 4.0 * p / 3.0;
                Some(BlochAffine::diagonal([s; 3], [0.0; 3]))
            }
            ChannelFamily::AmplitudeDamping => {
                let s = (1.0 - p).sqrt();
                Some(BlochAffine::diagonal([s, s, 1.0 - p], [0.0, 0.0, p]))
            }
            ChannelFamily::Custom => None,
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::parameter(format!("{name}: p = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// `√(1-p) 1, √(p/3) σx, √(p/3) σy, √(p/3) σz`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_probability("depolarizing", p)?;
    let mut ops = vec![ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt())];
    ops.extend((0..3).map(|i| pauli(i).scale_real((p / 3.0).sqrt())));
    KrausChannel::new(ops, ChannelFamily::Depolarizing, p)
}

pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    check_probability("amplitude damping", p)?;
    let g0 = ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - p).sqrt()]);
    let mut g1 = ComplexMatrix::zeros(2, 2);
    g1[(0, 1)] = p.sqrt().into();
    KrausChannel::new(vec![g0, g1], ChannelFamily::AmplitudeDamping, p)
}

/// `√(1-p/2) 1, √(p/2) σz`; coherences shrink by `1 - p`.
pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    check_probability("phase damping", p)?;
    let g0 = ComplexMatrix::identity(2).scale_real((1.0 - p / 2.0).sqrt());
    let g1 = pauli(2).scale_real((p / 2.0).sqrt());
    KrausChannel::new(vec![g0, g1], ChannelFamily::PhaseDamping, p)
}

/// Noise strength after time `t` at rate `gamma`: `1 - exp(-γ t)`.
pub fn noise_parameter_at_time(gamma: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(CoreError::parameter(format!("rate γ = {gamma} must be finite and >= 0")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(CoreError::parameter(format!("time t = {t} must be finite and >= 0")));
    }
    Ok(-(-gamma * t).exp_m1())
}

/// Phase damping after time `t`; applied to both qubits it scales c1, c2 by `exp(-2γt)`.
pub fn phase_damping_at_time(gamma: f64, t: f64) -> Result<KrausChannel> {
    phase_damping(noise_parameter_at_time(gamma, t)?)
}

/// Builds the family member at strength `1 - exp(-γ t)`.
pub fn channel_at_time(family: ChannelFamily, gamma: f64, t: f64) -> Result<KrausChannel> {
    let p = noise_parameter_at_time(gamma, t)?;
    match family {
        ChannelFamily::PhaseDamping => phase_damping(p),
        ChannelFamily::Depolarizing => depolarizing(p),
        ChannelFamily::AmplitudeDamping => amplitude_damping(p),
        ChannelFamily::Identity => Ok(KrausChannel::identity()),
        ChannelFamily::Custom => Err(CoreError::parameter(
            "custom Kraus channels have no time parametrization",
        )),
    }
}

/// `Σ_{j,k} (Γj ⊗ Γk) ρ (Γj ⊗ Γk)^dagger`.
pub fn apply_local(
    rho: &DensityMatrix,
    on_a: &KrausChannel,
    on_b: &KrausChannel,
) -> Result<DensityMatrix> {
    DensityMatrix::new(apply_local_unchecked(rho.matrix(), on_a, on_b))
}

pub(crate) fn apply_local_unchecked(
    rho: &ComplexMatrix,
    on_a: &KrausChannel,
    on_b: &KrausChannel,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for ka in &on_a.ops {
        for kb in &on_b.ops {
            out = &out + &rho.conjugate_by(&tensor_product(ka, kb));
        }
    }
    out
}
