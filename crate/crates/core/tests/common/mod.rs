//! Independent brute-force oracles shared by integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use qcorr_core::{ComplexMatrix, DensityMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues of a 2x2 Hermitian matrix from its trace and determinant.
fn eig2(m: [[C64; 2]; 2]) -> [f64; 2] {
    let tr = m[0][0].re + m[1][1].re;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    [0.5 * tr + disc, 0.5 * tr - disc]
}

fn h(values: &[f64]) -> f64 {
    let total: f64 = values.iter().map(|v| v.max(0.0)).sum();
    values
        .iter()
        .map(|v| v.max(0.0) / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Entropy of the reduced state of A, from its 2x2 spectrum.
pub fn entropy_a(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            r[i][k] = m[(2 * i, 2 * k)] + m[(2 * i + 1, 2 * k + 1)];
        }
    }
    h(&eig2(r))
}

/// Conditional entropy of A after projecting B onto `(1 ± n·σ)/2`, by explicit
/// contraction of the 4x4 density matrix with the projector.
pub fn conditional_entropy_bruteforce(m: &ComplexMatrix, n: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for s in [1.0, -1.0] {
        // Π = (1 + s n·σ)/2
        let pi = [
            [C64::new(0.5 * (1.0 + s * n[2]), 0.0), C64::new(0.5 * s * n[0], -0.5 * s * n[1])],
            [C64::new(0.5 * s * n[0], 0.5 * s * n[1]), C64::new(0.5 * (1.0 - s * n[2]), 0.0)],
        ];
        // Tr_B[(1 ⊗ Π) ρ] with ρ indexed ((i,m),(k,n))
        let mut cond = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for mm in 0..2 {
                    for nn in 0..2 {
                        acc += pi[nn][mm] * m[(2 * i + mm, 2 * k + nn)];
                    }
                }
                cond[i][k] = acc;
            }
        }
        let p = cond[0][0].re + cond[1][1].re;
        if p < 1e-12 {
            continue;
        }
        total += p * h(&eig2(cond));
    }
    total
}

/// Classical correlation by exhaustive evaluation on a `n_theta x n_phi` grid
/// (poles included) with the measurement on B.
pub fn classical_correlation_grid(rho: &DensityMatrix, n_theta: usize, n_phi: usize) -> f64 {
    let m = rho.matrix().clone();
    let min = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * PI / (n_theta - 1) as f64;
            let (st, ct) = theta.sin_cos();
            (0..n_phi)
                .map(|j| {
                    let phi = j as f64 * 2.0 * PI / n_phi as f64;
                    let n = [st * phi.cos(), st * phi.sin(), ct];
                    conditional_entropy_bruteforce(&m, n)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    entropy_a(rho) - min
}

