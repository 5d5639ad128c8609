mod common;

use std::f64::consts::PI;

use qcorr_core::channels::{apply_local, KrausChannel};
use qcorr_core::correlations::{bell_diagonal_classical_correlation, discord_on};
use qcorr_core::dynamics::compare_werner;
use qcorr_core::linalg::binary_entropy;
use qcorr_core::random::{
    random_bell_diagonal, random_channel, random_density_matrix, random_direction, random_pure_state,
    random_unitary,
};
use qcorr_core::{
    bell_diagonal, classical_correlation, conditional_entropy_after_measurement,
    detect_transition, diagonalize_correlation_tensor, discord, evolve_trajectory, extract_fano,
    from_fano, ChannelFamily, CorrelationReport, DensityMatrix, FanoForm, Scenario, Sign,
    Subsystem, Trajectory,
};
use rand::Rng;

use common::{classical_correlation_grid, conditional_entropy_bruteforce, rng};

const SLACK: f64 = 1e-9;

fn random_state(r: &mut impl Rng) -> DensityMatrix {
    if r.random_bool(0.2) {
        random_pure_state(r)
    } else {
        random_density_matrix(r)
    }
}

fn assert_bounds(rep: &CorrelationReport) {
    let (i, c, d) = (rep.mutual_information, rep.classical_correlation, rep.discord);
    assert!(d >= -SLACK, "D = {d}");
    assert!(c >= -SLACK, "C = {c}");
    assert!(d <= i + SLACK, "D = {d} > I = {i}");
    assert!(c <= i + SLACK, "C = {c} > I = {i}");
    assert!(i <= 2.0 + SLACK, "I = {i}");
}

fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (|Δ| = {:.2e})", (a - b).abs());
}

#[test]
fn measures_respect_bounds_on_random_states() {
    let mut r = rng(11);
    for _ in 0..500 {
        assert_bounds(&discord(&random_state(&mut r)));
    }
}

#[test]
fn measures_invariant_under_local_unitaries() {
    let mut r = rng(12);
    for _ in 0..40 {
        let rho = random_state(&mut r);
        let (u1, u2) = (random_unitary(&mut r, 2), random_unitary(&mut r, 2));
        let rotated = rho.local_unitary(&u1, &u2).unwrap();
        let (before, after) = (discord(&rho), discord(&rotated));
        assert_close(before.mutual_information, after.mutual_information, 1e-9, "I");
        assert_close(before.classical_correlation, after.classical_correlation, 1e-8, "C");
        assert_close(before.discord, after.discord, 1e-8, "D");
    }
}

fn swapped(rho: &DensityMatrix) -> DensityMatrix {
    let f = extract_fano(rho);
    let t = std::array::from_fn(|i| std::array::from_fn(|j| f.t[j][i]));
    from_fano(&FanoForm { a: f.b, b: f.a, t }).unwrap()
}

#[test]
fn measuring_a_equals_measuring_b_of_swapped_state() {
    let mut r = rng(13);
    for _ in 0..30 {
        let rho = random_state(&mut r);
        let on_a = discord_on(&rho, Subsystem::A);
        let on_b = discord(&swapped(&rho));
        assert_close(on_a.classical_correlation, on_b.classical_correlation, 1e-8, "C");
        assert_close(on_a.discord, on_b.discord, 1e-8, "D");
    }
}

#[test]
fn conditional_entropy_matches_bruteforce_contraction() {
    let mut r = rng(14);
    for _ in 0..200 {
        let rho = random_state(&mut r);
        let dir = random_direction(&mut r);
        let fast = conditional_entropy_after_measurement(&rho, &dir);
        let slow = conditional_entropy_bruteforce(rho.matrix(), dir.vector());
        assert_close(fast, slow, 1e-10, "S(A|Π_n)");
    }
}

#[test]
fn optimizer_never_loses_to_grid_oracle() {
    let mut r = rng(15);
    for _ in 0..20 {
        let rho = random_state(&mut r);
        let opt = classical_correlation(&rho).value;
        let grid = classical_correlation_grid(&rho, 91, 180);
        assert!(opt >= grid - SLACK, "optimizer {opt} below grid {grid}");
        assert!(opt - grid < 1e-3, "optimizer {opt} far above coarse grid {grid}");
    }
}

#[test]
fn bell_diagonal_optimum_lies_on_dominant_axis() {
    let mut r = rng(16);
    for _ in 0..100 {
        let coeffs = random_bell_diagonal(&mut r);
        let c = coeffs.as_array();
        let k = (0..3).max_by(|&i, &j| c[i].abs().total_cmp(&c[j].abs())).unwrap();
        let mut sorted = c.map(f64::abs);
        sorted.sort_by(f64::total_cmp);
        let cc = classical_correlation(&bell_diagonal(&coeffs).unwrap());
        assert_close(cc.value, bell_diagonal_classical_correlation(&coeffs), 1e-9, "C");
        if sorted[2] - sorted[1] > 1e-3 {
            let n = cc.direction.vector();
            assert!(n[k].abs() > 1.0 - 1e-6, "direction {n:?} not along axis {k} for c = {c:?}");
        }
    }
}

#[test]
fn diagonalization_preserves_correlations() {
    let mut r = rng(17);
    for _ in 0..40 {
        let rho = random_state(&mut r);
        let diag = diagonalize_correlation_tensor(&rho).unwrap();
        assert!(extract_fano(&diag.state).max_off_diagonal() < 1e-10);
        let (before, after) = (discord(&rho), discord(&diag.state));
        assert_close(before.mutual_information, after.mutual_information, 1e-6, "I");
        assert_close(before.classical_correlation, after.classical_correlation, 1e-6, "C");
        assert_close(before.discord, after.discord, 1e-6, "D");
    }
}

fn identity_or(r: &mut impl Rng) -> KrausChannel {
    if r.random_bool(0.3) {
        KrausChannel::identity()
    } else {
        random_channel(r)
    }
}

#[test]
fn classical_correlation_never_grows_under_local_channels() {
    let mut r = rng(18);
    for _ in 0..100 {
        let rho = random_state(&mut r);
        let (ea, eb) = (identity_or(&mut r), identity_or(&mut r));
        let out = apply_local(&rho, &ea, &eb).unwrap();
        let (before, after) = (classical_correlation(&rho).value, classical_correlation(&out).value);
        assert!(after <= before + 1e-8, "C grew from {before} to {after}");
    }
}

fn split_at(traj: &Trajectory, t_prime: f64, margin: f64) -> (Vec<usize>, Vec<usize>) {
    let idx = 0..traj.samples.len();
    let before = idx.clone().filter(|&i| traj.samples[i].t < t_prime - margin).collect();
    let after = idx.filter(|&i| traj.samples[i].t > t_prime + margin).collect();
    (before, after)
}

fn strictly_decreasing(idx: &[usize], f: impl Fn(usize) -> f64) -> bool {
    idx.windows(2).all(|w| f(w[1]) < f(w[0]))
}

fn drift(idx: &[usize], f: impl Fn(usize) -> f64) -> f64 {
    let first = f(idx[0]);
    idx.iter().map(|&i| (f(i) - first).abs()).fold(0.0, f64::max)
}

#[test]
fn dephasing_family_freezes_then_decays() {
    for (c3, sign, gamma) in [(0.6, Sign::Plus, 1.0), (0.6, Sign::Minus, 1.0), (0.3, Sign::Plus, 2.0), (0.85, Sign::Minus, 0.5)] {
        let traj = evolve_trajectory(&Scenario::mazzola(c3, sign, gamma)).unwrap();
        let t_prime = traj.scenario.analytic_transition_time().unwrap();
        let (before, after) = split_at(&traj, t_prime, 1e-9);
        let s = &traj.samples;
        assert!(drift(&before, |i| s[i].discord) < 1e-6, "D not frozen for c3 = {c3}");
        assert!(drift(&after, |i| s[i].classical_correlation) < 1e-6, "C not frozen for c3 = {c3}");
        assert!(strictly_decreasing(&before, |i| s[i].classical_correlation));
        assert!(strictly_decreasing(&after, |i| s[i].discord));
        for sample in s {
            assert_close(sample.complementary, sample.mutual_information, 1e-8, "Icomp");
        }
        let detected = detect_transition(&traj).unwrap().detected_t.expect("kink detected");
        assert!((detected - t_prime).abs() < 0.01, "detected {detected}, expected {t_prime}");
    }
}

#[test]
fn pure_states_keep_classical_correlation() {
    for theta in [PI / 8.0, PI / 6.0, PI / 4.0, PI / 3.0] {
        let traj = evolve_trajectory(&Scenario::pure(theta, 1.0)).unwrap();
        let s = &traj.samples;
        let expected = binary_entropy(theta.cos().powi(2));
        for sample in s {
            assert_close(sample.classical_correlation, expected, 1e-6, "C");
        }
        let all: Vec<usize> = (0..s.len()).collect();
        assert!(strictly_decreasing(&all, |i| s[i].discord), "θ = {theta}");
        assert!(detect_transition(&traj).unwrap().detected_t.is_none());
    }
    let quarter = evolve_trajectory(&Scenario::pure(PI / 4.0, 1.0)).unwrap();
    assert!(quarter.samples.iter().all(|s| (s.classical_correlation - 1.0).abs() < 1e-6));
}

#[test]
fn werner_states_decay_smoothly() {
    for beta in [0.2, 0.5, 0.8, 1.0] {
        let traj = evolve_trajectory(&Scenario::werner(beta, 1.0)).unwrap();
        let s = &traj.samples;
        let all: Vec<usize> = (0..s.len()).collect();
        assert!(drift(&all, |i| s[i].classical_correlation) < 1e-6, "β = {beta}");
        assert!(s.windows(2).all(|w| w[1].discord <= w[0].discord + 1e-12), "β = {beta}");
        assert!(detect_transition(&traj).unwrap().detected_t.is_none(), "β = {beta}");
    }
}

#[test]
fn werner_closed_forms_are_reported_against_optimizer() {
    let far = compare_werner(0.8, 1.0, 0.5).unwrap();
    assert!(far.domain_error.is_some() && far.d_closed_form.is_none());
    assert!(far.c_discrepancy() < 1e-8);

    let near = compare_werner(0.3, 1.0, 0.5).unwrap();
    assert!(near.domain_error.is_none());
    let gap = near.d_discrepancy().unwrap();
    assert!(gap.is_finite());
    assert!(near.d_optimizer >= 0.0);
}

#[test]
fn every_channel_family_yields_consistent_trajectories() {
    for channel in [ChannelFamily::PhaseDamping, ChannelFamily::Depolarizing, ChannelFamily::AmplitudeDamping] {
        for scenario in [
            Scenario::mazzola(0.6, Sign::Plus, 1.0),
            Scenario::werner(0.7, 1.0),
            Scenario::pure(PI / 5.0, 1.0),
        ] {
            let traj = evolve_trajectory(&scenario.with_channel(channel).with_grid(2.0, 81)).unwrap();
            assert!(traj.max_route_deviation <= 1e-9, "{channel}: {}", traj.max_route_deviation);
            for s in &traj.samples {
                assert!(s.discord >= -SLACK && s.discord <= s.mutual_information + SLACK);
                assert!(s.classical_correlation >= -SLACK);
                assert!(s.classical_correlation <= s.mutual_information + SLACK);
                assert!(s.mutual_information <= 2.0 + SLACK);
            }
        }
    }
}

#[test]
fn trajectories_are_deterministic() {
    let scenario = Scenario::mazzola(0.6, Sign::Plus, 1.0).with_grid(1.0, 201);
    let (a, b) = (evolve_trajectory(&scenario).unwrap(), evolve_trajectory(&scenario).unwrap());
    assert_eq!(a.samples, b.samples);
}
