//! Two-qubit density matrices and their Pauli (Fano) decomposition.
//!
//! Basis order is |00>, |01>, |10>, |11>; Pauli order is (σx, σy, σz).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::{
    hermitian_eigen, pauli, tensor_product, ComplexMatrix, Subsystem, C64, EIGEN_CLAMP,
    HERMITIAN_TOL,
};

pub const TRACE_TOL: f64 = 1e-10;

/// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dims() != (4, 4) {
            return Err(CoreError::Dimension {
                expected: "4x4".into(),
                got: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        let defect = mat.hermiticity_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(CoreError::NotHermitian { deviation: defect });
        }
        let mat = mat.hermitian_part();
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(CoreError::not_a_state(format!("trace is {trace}, not 1")));
        }
        let eig = hermitian_eigen(&mat)?;
        let min = eig.values[eig.values.len() - 1];
        if min < EIGEN_CLAMP {
            return Err(CoreError::not_a_state(format!(
                "state not PSD: eigenvalue {min:.6e} < 0"
            )));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(CoreError::not_a_state("zero state vector"));
        }
        let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&v))
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::identity(4).scale_real(0.25),
        }
    }

    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        Self::new(tensor_product(rho_a, rho_b))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn reduced(&self, keep: Subsystem) -> ComplexMatrix {
        crate::linalg::partial_trace(&self.mat, keep).expect("density matrix is 4x4")
    }

    pub fn purity(&self) -> f64 {
        self.mat.expectation(&self.mat)
    }

    /// `(U1 ⊗ U2) ρ (U1 ⊗ U2)^dagger`.
    pub fn local_unitary(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<Self> {
        let u = tensor_product(u1, u2);
        Self::new(self.mat.conjugate_by(&u))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}

/// Local Bloch vectors and correlation tensor of a two-qubit state.
///
/// `t[n][m] = Tr(ρ σn ⊗ σm)`, rows indexing qubit A.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanoForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl FanoForm {
    pub fn bell_diagonal(c1: f64, c2: f64, c3: f64) -> Self {
        Self {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[c1, 0.0, 0.0], [0.0, c2, 0.0], [0.0, 0.0, c3]],
        }
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.t[0][0], self.t[1][1], self.t[2][2]]
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for n in 0..3 {
            for k in 0..3 {
                if n != k {
                    m = m.max(self.t[n][k].abs());
                }
            }
        }
        m
    }

    /// The 4x4 real coefficient array `R[μ][ν] = Tr(ρ σμ ⊗ σν)` with σ0 = 1.
    pub fn coefficients(&self) -> [[f64; 4]; 4] {
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        for i in 0..3 {
            r[i + 1][0] = self.a[i];
            r[0][i + 1] = self.b[i];
            for j in 0..3 {
                r[i + 1][j + 1] = self.t[i][j];
            }
        }
        r
    }

    pub fn from_coefficients(r: &[[f64; 4]; 4]) -> Self {
        let mut f = Self {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            f.a[i] = r[i + 1][0];
            f.b[i] = r[0][i + 1];
            for j in 0..3 {
                f.t[i][j] = r[i + 1][j + 1];
            }
        }
        f
    }

    /// Expands `¼(1⊗1 + a·σ⊗1 + 1⊗b·σ + Σ t_nm σn⊗σm)` without validation.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let basis: Vec<ComplexMatrix> = std::iter::once(ComplexMatrix::identity(2))
            .chain((0..3).map(pauli))
            .collect();
        let r = self.coefficients();
        let mut out = ComplexMatrix::zeros(4, 4);
        for mu in 0..4 {
            for nu in 0..4 {
                if r[mu][nu] != 0.0 {
                    let term = tensor_product(&basis[mu], &basis[nu]).scale_real(r[mu][nu]);
                    out = &out + &term;
                }
            }
        }
        out.scale_real(0.25)
    }
}

pub fn from_fano(f: &FanoForm) -> Result<DensityMatrix> {
    DensityMatrix::new(f.to_matrix())
}

pub fn extract_fano(rho: &DensityMatrix) -> FanoForm {
    let id = ComplexMatrix::identity(2);
    let sigma: Vec<ComplexMatrix> = (0..3).map(pauli).collect();
    let m = rho.matrix();
    let mut f = FanoForm {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for n in 0..3 {
        f.a[n] = m.expectation(&tensor_product(&sigma[n], &id));
        f.b[n] = m.expectation(&tensor_product(&id, &sigma[n]));
        for k in 0..3 {
            f.t[n][k] = m.expectation(&tensor_product(&sigma[n], &sigma[k]));
        }
    }
    f
}

/// Correlation-tensor diagonal of a Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalCoeffs {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c = Self { c1, c2, c3 };
        for (name, w) in ["Φ+", "Φ-", "Ψ+", "Ψ-"].iter().zip(c.weights()) {
            if w < -1e-12 {
                return Err(CoreError::not_a_state(format!(
                    "Bell weight on {name} is {w:.6e} < 0"
                )));
            }
        }
        Ok(c)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Weight on |Φ+> = (|00> + |11>)/√2.
    pub fn weight_phi_plus(&self) -> f64 {
        0.25 * (1.0 + self.c1 - self.c2 + self.c3)
    }

    /// Weight on |Φ-> = (|00> - |11>)/√2.
    pub fn weight_phi_minus(&self) -> f64 {
        0.25 * (1.0 - self.c1 + self.c2 + self.c3)
    }

    /// Weight on |Ψ+> = (|01> + |10>)/√2.
    pub fn weight_psi_plus(&self) -> f64 {
        0.25 * (1.0 + self.c1 + self.c2 - self.c3)
    }

    /// Weight on |Ψ-> = (|01> - |10>)/√2.
    pub fn weight_psi_minus(&self) -> f64 {
        0.25 * (1.0 - self.c1 - self.c2 - self.c3)
    }

    /// Weights in the order (Φ+, Φ-, Ψ+, Ψ-).
    pub fn weights(&self) -> [f64; 4] {
        [
            self.weight_phi_plus(),
            self.weight_phi_minus(),
            self.weight_psi_plus(),
            self.weight_psi_minus(),
        ]
    }
}

/// Bell basis vectors in the order (Φ+, Φ-, Ψ+, Ψ-).
pub fn bell_basis() -> [[C64; 4]; 4] {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [
        [s, z, z, s],
        [s, z, z, -s],
        [z, s, s, z],
        [z, s, -s, z],
    ]
}

pub fn bell_diagonal(c: &BellDiagonalCoeffs) -> Result<DensityMatrix> {
    let c = BellDiagonalCoeffs::new(c.c1, c.c2, c.c3)?;
    let mut m = ComplexMatrix::zeros(4, 4);
    for (v, w) in bell_basis().iter().zip(c.weights()) {
        m = &m + &ComplexMatrix::projector(v).scale_real(w.max(0.0));
    }
    DensityMatrix::new(m)
}

/// `β |ψ-><ψ-| + (1 - β) 1/4`, valid for β in [-1/3, 1].
pub fn werner(beta: f64) -> Result<DensityMatrix> {
    let low = (1.0 + 3.0 * beta) / 4.0;
    let high = (1.0 - beta) / 4.0;
    if !(low >= -1e-12 && high >= -1e-12) {
        return Err(CoreError::not_a_state(format!(
            "state not PSD: Werner eigenvalues (1+3β)/4 = {low:.6}, (1-β)/4 = {high:.6} for β = {beta}"
        )));
    }
    let singlet = ComplexMatrix::projector(&bell_basis()[3]);
    let m = &singlet.scale_real(beta) + &ComplexMatrix::identity(4).scale_real((1.0 - beta) / 4.0);
    DensityMatrix::new(m)
}

/// `cos θ |00> + sin θ |11>`.
pub fn schmidt_pure(theta: f64) -> DensityMatrix {
    let z = C64::new(0.0, 0.0);
    let amps = [C64::new(theta.cos(), 0.0), z, z, C64::new(theta.sin(), 0.0)];
    DensityMatrix::from_pure(amps).expect("unit vector")
}

/// Result of rotating a state so its correlation tensor is diagonal.
#[derive(Clone, Debug)]
pub struct DiagonalizedState {
    pub state: DensityMatrix,
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    /// Proper rotations with `T' = o1 T o2^T`.
    pub o1: [[f64; 3]; 3],
    pub o2: [[f64; 3]; 3],
}

pub fn diagonalize_correlation_tensor(rho: &DensityMatrix) -> Result<DiagonalizedState> {
    let f = extract_fano(rho);
    let t = Matrix3::from_fn(|i, j| f.t[i][j]);
    let svd = t.svd(true, true);
    let mut u = svd.u.expect("requested U");
    let mut v_t = svd.v_t.expect("requested V^T");
    // Make both factors proper rotations; a sign flip moves onto the singular value.
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
    }
    if v_t.determinant() < 0.0 {
        v_t.row_mut(2).neg_mut();
    }
    let o1 = u.transpose();
    let o2 = v_t;
    let o1a: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| o1[(i, j)]));
    let o2a: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| o2[(i, j)]));
    let u1 = rotation_to_unitary(&o1a);
    let u2 = rotation_to_unitary(&o2a);
    let state = rho.local_unitary(&u1, &u2)?;
    Ok(DiagonalizedState {
        state,
        u1,
        u2,
        o1: o1a,
        o2: o2a,
    })
}

/// SU(2) element `U` with `U (n·σ) U^dagger = (R n)·σ` for a proper rotation `R`.
pub fn rotation_to_unitary(r: &[[f64; 3]; 3]) -> ComplexMatrix {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
    // w 1 - i (x σx + y σy + z σz)
    ComplexMatrix::from_row_major(
        2,
        2,
        vec![
            C64::new(w, -z),
            C64::new(-y, -x),
            C64::new(y, -x),
            C64::new(w, z),
        ],
    )
    .expect("2x2")
}
