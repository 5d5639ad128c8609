//! Random states, unitaries and channels for property tests and benchmarks.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channels::KrausChannel;
use crate::correlations::MeasurementDirection;
use crate::linalg::{tensor_product, ComplexMatrix, C64};
use crate::states::{BellDiagonalCoeffs, DensityMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(gaussian(rng), gaussian(rng)))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("sized")
}

/// Hilbert-Schmidt random mixed state on `dim` levels (unvalidated).
fn hilbert_schmidt<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr)
}

pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    DensityMatrix::new(hilbert_schmidt(rng, 4)).expect("Ginibre states are valid")
}

/// Haar-random pure two-qubit state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let amps: [C64; 4] = std::array::from_fn(|_| C64::new(gaussian(rng), gaussian(rng)));
    DensityMatrix::from_pure(amps).expect("nonzero vector")
}

pub fn random_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    hilbert_schmidt(rng, 2)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n, n).hermitian_part()
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| (0..n).map(|r| g[(r, c)]).collect()).collect();
    for c in 0..n {
        for prev in 0..c {
            let overlap: C64 = (0..n).map(|r| cols[prev][r].conj() * cols[c][r]).sum();
            for r in 0..n {
                let v = cols[prev][r];
                cols[c][r] -= overlap * v;
            }
        }
        let norm: f64 = cols[c].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[c].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            u[(r, c)] = cols[c][r];
        }
    }
    u
}

/// Uniformly random proper rotation of R^3.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let mut cols = [[0.0; 3]; 3];
    for c in 0..3 {
        let mut v: [f64; 3] = std::array::from_fn(|_| gaussian(rng));
        for prev in cols.iter().take(c) {
            let d: f64 = (0..3).map(|i| prev[i] * v[i]).sum();
            for i in 0..3 {
                v[i] -= d * prev[i];
            }
        }
        let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        cols[c] = v.map(|x| x / n);
    }
    let det = cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
        - cols[1][0] * (cols[0][1] * cols[2][2] - cols[0][2] * cols[2][1])
        + cols[2][0] * (cols[0][1] * cols[1][2] - cols[0][2] * cols[1][1]);
    if det < 0.0 {
        cols[2] = cols[2].map(|x| -x);
    }
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> MeasurementDirection {
    let v: [f64; 3] = std::array::from_fn(|_| gaussian(rng));
    MeasurementDirection::from_vector(v).expect("nonzero vector")
}

/// Uniform point of the Bell-diagonal tetrahedron.
pub fn random_bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> BellDiagonalCoeffs {
    let e: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let total: f64 = e.iter().sum();
    let w = e.map(|x| x / total);
    // rows: Φ+, Φ-, Ψ+, Ψ- correlation diagonals
    let corners = [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ];
    let c: [f64; 3] = std::array::from_fn(|n| (0..4).map(|k| w[k] * corners[k][n]).sum());
    BellDiagonalCoeffs::new(c[0], c[1], c[2]).expect("convex combination of Bell states")
}

/// `Σ p_i ρ_A^i ⊗ |i><i|` with a random orthonormal basis on B.
pub fn random_qc_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let basis = random_unitary(rng, 2);
    let p0: f64 = rng.random_range(0.05..0.95);
    let mut m = ComplexMatrix::zeros(4, 4);
    for (i, p) in [p0, 1.0 - p0].into_iter().enumerate() {
        let ket = [basis[(0, i)], basis[(1, i)]];
        let proj = ComplexMatrix::projector(&ket);
        let rho_a = random_qubit_state(rng);
        m = &m + &tensor_product(&rho_a, &proj).scale_real(p);
    }
    DensityMatrix::new(m).expect("mixture of product states")
}

/// Random CPTP map of Kraus rank 1..=4 from a random isometry.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R) -> KrausChannel {
    let rank = rng.random_range(1..=4usize);
    let u = random_unitary(rng, 2 * rank);
    let ops = (0..rank)
        .map(|j| {
            let data = vec![u[(2 * j, 0)], u[(2 * j, 1)], u[(2 * j + 1, 0)], u[(2 * j + 1, 1)]];
            ComplexMatrix::from_row_major(2, 2, data).expect("2x2")
        })
        .collect();
    KrausChannel::custom(ops).expect("isometry blocks are complete")
}
