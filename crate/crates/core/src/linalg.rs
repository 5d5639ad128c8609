//! Small dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here is sized for 2x2 and 4x4 matrices. Entropies are in bits.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub type C64 = Complex64;

/// Tolerance used when deciding whether an input is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) threshold are treated as numerical noise.
pub const EIGEN_CLAMP: f64 = -1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CoreError::Dimension {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product |v><v|.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<C64> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dims(), other.dims(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M - M^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// Returns `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `U M U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Real part of `Tr(self * other)`, the expectation value of a Hermitian observable.
    pub fn expectation(&self, observable: &Self) -> f64 {
        assert_eq!(self.cols, observable.rows, "shape mismatch");
        assert_eq!(self.rows, observable.cols, "shape mismatch");
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * observable[(k, i)];
            }
        }
        acc.re
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dims(), rhs.dims(), "shape mismatch in sum");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dims(), rhs.dims(), "shape mismatch in difference");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices in the order (sigma_x, sigma_y, sigma_z).
pub fn pauli(index: usize) -> ComplexMatrix {
    let data = match index {
        0 => vec![ZERO, ONE, ONE, ZERO],
        1 => vec![ZERO, -I, I, ZERO],
        2 => vec![ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {index} out of range 0..3"),
    };
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data,
    }
}

/// `n . sigma` for a real 3-vector `n`.
pub fn bloch_operator(n: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(n[2], 0.0);
    m[(1, 1)] = C64::new(-n[2], 0.0);
    m[(0, 1)] = C64::new(n[0], -n[1]);
    m[(1, 0)] = C64::new(n[0], n[1]);
    m
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Which qubit of a two-qubit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Reduces a 4x4 operator to the 2x2 operator on `keep`.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dims() != (4, 4) {
        return Err(CoreError::Dimension {
            expected: "4x4".into(),
            got: format!("{}x{}", rho.rows, rho.cols),
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::A => (0..2).map(|k| rho[(2 * i + k, 2 * j + k)]).sum(),
                Subsystem::B => (0..2).map(|k| rho[(2 * k + i, 2 * k + j)]).sum(),
            };
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `i` is the normalized eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|r| self.vectors[(r, i)]).collect()
    }

    /// `Σ λ_i v_i v_i^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.rows;
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lambda) in self.values.iter().enumerate() {
            let p = ComplexMatrix::projector(&self.vector(i));
            out = &out + &p.scale_real(lambda);
        }
        out
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Eigen> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(CoreError::NotHermitian { deviation: defect });
    }
    let n = m.rows;
    let decomposition = m.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomposition.eigenvalues[j].total_cmp(&decomposition.eigenvalues[i])
    });
    let values = order.iter().map(|&i| decomposition.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = decomposition.eigenvectors[(r, i)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues of a density operator, clamped at zero and renormalized.
pub fn state_spectrum(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigen(rho)?;
    if let Some(&bad) = eig.values.iter().find(|&&v| v < EIGEN_CLAMP) {
        return Err(CoreError::not_a_state(format!("negative eigenvalue {bad:e}")));
    }
    let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 {
        return Err(CoreError::not_a_state("zero trace"));
    }
    Ok(clamped.into_iter().map(|v| v / total).collect())
}

/// `-Tr ρ log2 ρ`.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spectrum = state_spectrum(rho)?;
    Ok(entropy_bits(&spectrum))
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| !(x >= -1e-12)) {
        return Err(CoreError::Distribution(format!("entry {bad:e} is negative")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(CoreError::Distribution(format!(
            "entries sum to {total}, not 1"
        )));
    }
    let clamped: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
    Ok(entropy_bits(&clamped))
}

/// Binary entropy `h(p)` in bits; `p` is clamped into [0, 1].
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlog2x(p) + xlog2x(1.0 - p)
}

/// Entropy of a qubit state with Bloch vector length `r`.
pub fn qubit_entropy_from_bloch_length(r: f64) -> f64 {
    binary_entropy((1.0 + r.min(1.0)) / 2.0)
}

fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().map(|&x| xlog2x(x)).sum::<f64>().max(0.0)
}

// -x log2 x with 0 log 0 = 0
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}
