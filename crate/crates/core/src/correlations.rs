//! Correlation measures for two-qubit states.
//!
//! Classical correlation follows the one-sided measurement definition: a rank-1
//! projective measurement is made on one qubit (B unless stated otherwise) and
//! the remaining entropy of the other qubit is minimized over the Bloch sphere.
//! Discord is mutual information minus classical correlation. All values are in
//! bits.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::{
    bloch_operator, partial_trace, qubit_entropy_from_bloch_length, shannon_entropy,
    tensor_product, von_neumann_entropy, ComplexMatrix, Subsystem,
};
use crate::states::{extract_fano, BellDiagonalCoeffs, DensityMatrix};

/// Negative results no smaller than this are reported as exactly zero.
pub const CLAMP_TOL: f64 = 1e-9;
/// Outcomes rarer than this contribute nothing to conditional entropies.
pub const MIN_OUTCOME_PROB: f64 = 1e-12;

pub const GRID_THETA: usize = 64;
pub const GRID_PHI: usize = 128;
const RESTARTS: usize = 3;

/// Unit Bloch vector `(sin θ cos φ, sin θ sin φ, cos θ)` defining projectors `(1 ± n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementDirection {
    /// Canonicalizes any angle pair to θ in [0, π], φ in [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Self {
        let v = spherical(theta, phi);
        Self::from_unit(v)
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = norm(v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(CoreError::parameter("measurement direction must be a nonzero vector"));
        }
        Ok(Self::from_unit(v.map(|x| x / n)))
    }

    fn from_unit(v: [f64; 3]) -> Self {
        let theta = v[2].clamp(-1.0, 1.0).acos();
        let mut phi = v[1].atan2(v[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn x() -> Self {
        Self { theta: PI / 2.0, phi: 0.0 }
    }

    pub fn y() -> Self {
        Self { theta: PI / 2.0, phi: PI / 2.0 }
    }

    pub fn z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn vector(&self) -> [f64; 3] {
        spherical(self.theta, self.phi)
    }

    /// `(Π+, Π-)`.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let id = ComplexMatrix::identity(2);
        let n = bloch_operator(self.vector());
        [
            (&id + &n).scale_real(0.5),
            (&id - &n).scale_real(0.5),
        ]
    }
}

fn spherical(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn clamp_small_negative(x: f64) -> f64 {
    if x < 0.0 && x >= -CLAMP_TOL {
        0.0
    } else {
        x
    }
}

/// `S(ρ_A) + S(ρ_B) - S(ρ_AB)`.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let s_a = entropy_of(&rho.reduced(Subsystem::A));
    let s_b = entropy_of(&rho.reduced(Subsystem::B));
    let s_ab = entropy_of(rho.matrix());
    clamp_small_negative(s_a + s_b - s_ab)
}

fn entropy_of(m: &ComplexMatrix) -> f64 {
    von_neumann_entropy(m).expect("reduced states of a valid state are valid")
}

/// `Σ_j p_j S(ρ_A^j)` after measuring B along `dir`.
pub fn conditional_entropy_after_measurement(rho: &DensityMatrix, dir: &MeasurementDirection) -> f64 {
    conditional_entropy_after_measurement_on(rho, dir, Subsystem::B)
}

/// Same as [`conditional_entropy_after_measurement`] with an explicit measured qubit.
pub fn conditional_entropy_after_measurement_on(
    rho: &DensityMatrix,
    dir: &MeasurementDirection,
    measured: Subsystem,
) -> f64 {
    let id = ComplexMatrix::identity(2);
    let mut total = 0.0;
    for proj in dir.projectors() {
        let lifted = match measured {
            Subsystem::B => tensor_product(&id, &proj),
            Subsystem::A => tensor_product(&proj, &id),
        };
        let post = &(&lifted * rho.matrix()) * &lifted;
        let p = post.trace().re;
        if p < MIN_OUTCOME_PROB {
            continue;
        }
        let conditional = partial_trace(&post, measured.other())
            .expect("4x4")
            .scale_real(1.0 / p);
        total += p * entropy_of(&conditional);
    }
    total
}

/// Bloch-picture evaluation of the post-measurement conditional entropy.
///
/// Outcome `s = ±1` along `n` on the measured qubit occurs with probability
/// `(1 + s m·n)/2` and leaves the other qubit with Bloch vector
/// `(u + s T n)/(1 + s m·n)`, where `u`, `m` are the local Bloch vectors and `T`
/// is the correlation tensor with rows on the unmeasured side.
#[derive(Debug, Clone, Copy)]
struct ConditionalEntropy {
    unmeasured: [f64; 3],
    measured: [f64; 3],
    t: [[f64; 3]; 3],
}

impl ConditionalEntropy {
    fn new(rho: &DensityMatrix, measured: Subsystem) -> Self {
        let f = extract_fano(rho);
        match measured {
            Subsystem::B => Self {
                unmeasured: f.a,
                measured: f.b,
                t: f.t,
            },
            Subsystem::A => Self {
                unmeasured: f.b,
                measured: f.a,
                t: std::array::from_fn(|i| std::array::from_fn(|j| f.t[j][i])),
            },
        }
    }

    fn at(&self, theta: f64, phi: f64) -> f64 {
        let n = spherical(theta, phi);
        let mn = dot(self.measured, n);
        let tn: [f64; 3] = std::array::from_fn(|i| dot(self.t[i], n));
        let mut total = 0.0;
        for s in [1.0, -1.0] {
            let weight = 1.0 + s * mn;
            let p = 0.5 * weight;
            if p < MIN_OUTCOME_PROB {
                continue;
            }
            let r: [f64; 3] = std::array::from_fn(|i| self.unmeasured[i] + s * tn[i]);
            total += p * qubit_entropy_from_bloch_length(norm(r) / weight);
        }
        total
    }
}

/// Maximal classical correlation and the measurement direction achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub direction: MeasurementDirection,
    /// Minimal post-measurement conditional entropy.
    pub conditional_entropy: f64,
}

/// Classical correlation with the measurement on B.
pub fn classical_correlation(rho: &DensityMatrix) -> ClassicalCorrelation {
    classical_correlation_on(rho, Subsystem::B)
}

pub fn classical_correlation_on(rho: &DensityMatrix, measured: Subsystem) -> ClassicalCorrelation {
    let objective = ConditionalEntropy::new(rho, measured);
    let s_unmeasured = entropy_of(&rho.reduced(measured.other()));
    let best = minimize_on_sphere(|th, ph| objective.at(th, ph));
    let value = clamp_small_negative(s_unmeasured - best.value).max(0.0);
    ClassicalCorrelation {
        value,
        direction: MeasurementDirection::new(best.theta, best.phi),
        conditional_entropy: best.value,
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    theta: f64,
    phi: f64,
}

impl Candidate {
    // by value, then smaller θ, then smaller φ
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.theta.total_cmp(&other.theta))
            .then(self.phi.total_cmp(&other.phi))
    }
}

fn minimize_on_sphere<F>(f: F) -> Candidate
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let d_theta = PI / GRID_THETA as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let mut grid: Vec<Candidate> = (0..GRID_THETA * GRID_PHI)
        .into_par_iter()
        .map(|k| {
            let theta = (k / GRID_PHI) as f64 * d_theta + 0.5 * d_theta;
            let phi = (k % GRID_PHI) as f64 * d_phi;
            Candidate {
                value: f(theta, phi),
                theta,
                phi,
            }
        })
        .collect();
    grid.sort_by(Candidate::cmp);

    let mut best = grid[0];
    for start in grid.iter().take(RESTARTS) {
        let refined = nelder_mead(&f, [start.theta, start.phi], [d_theta, d_phi]);
        let dir = MeasurementDirection::new(refined.theta, refined.phi);
        let refined = Candidate {
            value: refined.value,
            theta: dir.theta,
            phi: dir.phi,
        };
        if refined.cmp(&best) == Ordering::Less {
            best = refined;
        }
    }
    best
}

const NM_MAX_ITER: usize = 2000;
const NM_FTOL: f64 = 1e-13;
const NM_XTOL: f64 = 1e-10;

/// Two-dimensional Nelder-Mead minimization in (θ, φ).
fn nelder_mead<F>(f: &F, start: [f64; 2], step: [f64; 2]) -> Candidate
where
    F: Fn(f64, f64) -> f64,
{
    let eval = |x: [f64; 2]| (f(x[0], x[1]), x);
    let mut simplex = [
        eval(start),
        eval([start[0] + step[0], start[1]]),
        eval([start[0], start[1] + step[1]]),
    ];
    for _ in 0..NM_MAX_ITER {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spread = simplex[2].0 - simplex[0].0;
        let size = simplex[1..]
            .iter()
            .map(|(_, x)| (x[0] - simplex[0].1[0]).abs().max((x[1] - simplex[0].1[1]).abs()))
            .fold(0.0, f64::max);
        if spread <= NM_FTOL && size <= NM_XTOL {
            break;
        }
        let (f_best, _) = simplex[0];
        let (f_second, _) = simplex[1];
        let (f_worst, x_worst) = simplex[2];
        let centroid = [
            0.5 * (simplex[0].1[0] + simplex[1].1[0]),
            0.5 * (simplex[0].1[1] + simplex[1].1[1]),
        ];
        let toward = |coef: f64| {
            [
                centroid[0] + coef * (x_worst[0] - centroid[0]),
                centroid[1] + coef * (x_worst[1] - centroid[1]),
            ]
        };
        let reflected = eval(toward(-1.0));
        if reflected.0 < f_best {
            let expanded = eval(toward(-2.0));
            simplex[2] = if expanded.0 < reflected.0 { expanded } else { reflected };
        } else if reflected.0 < f_second {
            simplex[2] = reflected;
        } else {
            let contracted = if reflected.0 < f_worst {
                eval(toward(-0.5))
            } else {
                eval(toward(0.5))
            };
            if contracted.0 < f_worst.min(reflected.0) {
                simplex[2] = contracted;
            } else {
                let x0 = simplex[0].1;
                for vertex in simplex.iter_mut().skip(1) {
                    let x = [
                        x0[0] + 0.5 * (vertex.1[0] - x0[0]),
                        x0[1] + 0.5 * (vertex.1[1] - x0[1]),
                    ];
                    *vertex = eval(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    Candidate {
        value: simplex[0].0,
        theta: simplex[0].1[0],
        phi: simplex[0].1[1],
    }
}

/// Mutual information split into classical and quantum parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub optimal_direction: MeasurementDirection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complementary: Option<f64>,
}

/// Discord with the measurement on B.
pub fn discord(rho: &DensityMatrix) -> CorrelationReport {
    discord_on(rho, Subsystem::B)
}

pub fn discord_on(rho: &DensityMatrix, measured: Subsystem) -> CorrelationReport {
    let mutual = mutual_information(rho);
    let classical = classical_correlation_on(rho, measured);
    // C <= I holds analytically; optimizer overshoot is within the clamp band.
    let c = classical.value.min(mutual);
    CorrelationReport {
        mutual_information: mutual,
        classical_correlation: c,
        discord: clamp_small_negative(mutual - c).max(0.0),
        optimal_direction: classical.direction,
        complementary: None,
    }
}

/// `(1+α)/2 · log2(1+α)` for α in [-1, 1].
pub fn p_function(alpha: f64) -> Result<f64> {
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&alpha) {
        return Err(CoreError::parameter(format!("P[α] needs α in [-1, 1], got {alpha}")));
    }
    let x = 1.0 + alpha.clamp(-1.0, 1.0);
    Ok(if x <= 0.0 { 0.0 } else { 0.5 * x * x.log2() })
}

/// `P[α] + P[-α]`, the mutual information of a binary symmetric channel with bias α.
pub fn p_sum(alpha: f64) -> Result<f64> {
    Ok(p_function(alpha)? + p_function(-alpha)?)
}

/// Closed-form classical correlation of a Bell-diagonal state: `P[K] + P[-K]`.
pub fn bell_diagonal_classical_correlation(c: &BellDiagonalCoeffs) -> f64 {
    let k = c.as_array().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    p_sum(k).expect("|c_i| <= 1 for valid states")
}

/// Closed-form mutual information of a Bell-diagonal state: `2 - H(weights)`.
pub fn bell_diagonal_mutual_information(c: &BellDiagonalCoeffs) -> f64 {
    let w = c.weights().map(|x| x.max(0.0));
    let total: f64 = w.iter().sum();
    let h = shannon_entropy(&w.map(|x| x / total)).expect("normalized");
    2.0 - h
}

/// Joint outcome distribution `p(i, j) = Tr[ρ (Π_i ⊗ Π_j)]`.
pub fn joint_outcome_distribution(
    rho: &DensityMatrix,
    dir_a: &MeasurementDirection,
    dir_b: &MeasurementDirection,
) -> [[f64; 2]; 2] {
    let pa = dir_a.projectors();
    let pb = dir_b.projectors();
    let mut p = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            p[i][j] = rho.matrix().expectation(&tensor_product(&pa[i], &pb[j])).max(0.0);
        }
    }
    p
}

/// Classical mutual information of local measurement outcomes.
pub fn measurement_mutual_information(
    rho: &DensityMatrix,
    dir_a: &MeasurementDirection,
    dir_b: &MeasurementDirection,
) -> f64 {
    let p = joint_outcome_distribution(rho, dir_a, dir_b);
    let total: f64 = p.iter().flatten().sum();
    let joint: Vec<f64> = p.iter().flatten().map(|x| x / total).collect();
    let marg_a = [joint[0] + joint[1], joint[2] + joint[3]];
    let marg_b = [joint[0] + joint[2], joint[1] + joint[3]];
    let h = |q: &[f64]| shannon_entropy(q).expect("normalized distribution");
    clamp_small_negative(h(&marg_a) + h(&marg_b) - h(&joint)).max(0.0)
}

/// Sum of same-observable outcome mutual informations for two orthogonal Bloch axes.
pub fn complementary_correlation(
    rho: &DensityMatrix,
    axes: (MeasurementDirection, MeasurementDirection),
) -> Result<f64> {
    let overlap = dot(axes.0.vector(), axes.1.vector()).abs();
    if overlap > 1e-9 {
        return Err(CoreError::Complementarity { overlap });
    }
    Ok(measurement_mutual_information(rho, &axes.0, &axes.0)
        + measurement_mutual_information(rho, &axes.1, &axes.1))
}

/// Entanglement verdict from the complementary-correlation value of a qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    MaximallyEntangled,
    Entangled,
    AtClassicalBoundary,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::MaximallyEntangled => "maximally-entangled",
            Classification::Entangled => "entangled",
            Classification::AtClassicalBoundary => "at-classical-boundary",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

/// Thresholds at `2 log2 d = 2` and `log2 d = 1` bits.
pub fn classify_by_complementary_correlations(icomp: f64) -> Result<Classification> {
    const TOL: f64 = 1e-9;
    if !(-TOL..=2.0 + TOL).contains(&icomp) {
        return Err(CoreError::parameter(format!(
            "complementary correlation {icomp} outside [0, 2]"
        )));
    }
    Ok(if icomp >= 2.0 - TOL {
        Classification::MaximallyEntangled
    } else if icomp > 1.0 + TOL {
        Classification::Entangled
    } else if (icomp - 1.0).abs() <= TOL {
        Classification::AtClassicalBoundary
    } else {
        Classification::Inconclusive
    })
}
