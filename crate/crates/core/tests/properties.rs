//! Structural invariants checked over randomized inputs.

use std::f64::consts::PI;

use kicked_spectra::effective::{
    heff_delta_kicked, heff_general, kick_fourier_coefficients, micromotion_kick, KickedSystem, MicromotionOrder,
};
use kicked_spectra::floquet::{
    dkt_floquet, folded_energies, max_phase_mismatch, quasienergy_spectrum, unitarity_defect, unitary_from_hermitian,
    DktParams,
};
use kicked_spectra::harper::{self, Boundary, EffectiveMode, HarperParams};
use kicked_spectra::linalg::{self, max_abs_diff, CMatrix};
use kicked_spectra::multifractal::{
    box_probabilities, eigenvector_tau, participation_ratio, spectral_histogram, tau_spectrum, tau_spectrum_weighted,
    ScalingConfig,
};
use kicked_spectra::su2::{self, spin_operators, SpinLabel, TableCase};
use kicked_spectra::HermitianOperator;
use num_complex::Complex64;
use proptest::prelude::*;

const SPINS: [u32; 4] = [1, 2, 20, 200];

fn hermitian_from(entries: &[f64], d: usize) -> HermitianOperator {
    let m = CMatrix::from_fn(d, d, |r, c| {
        let (a, b) = (r.min(c), r.max(c));
        let k = 2 * (a * d + b);
        let re = entries[k % entries.len()];
        let im = if r == c { 0.0 } else { entries[(k + 1) % entries.len()] };
        Complex64::new(re, if r < c { im } else { -im })
    });
    HermitianOperator::new(m).unwrap()
}

#[test]
fn spin_algebra_at_reference_spins() {
    for twice in SPINS {
        let spin = SpinLabel::from_twice(twice);
        let j = spin.j();
        let ops = spin_operators(spin);
        let (jx, jy, jz) = (ops.jx.matrix(), ops.jy.matrix(), ops.jz.matrix());
        let comm = linalg::commutator(jx, jy).unwrap();
        let ijz = linalg::scale(jz, Complex64::new(0.0, 1.0));
        assert!(max_abs_diff(&comm, &ijz) <= 1e-12 * j.max(1.0), "commutator at j = {j}");

        let sq = |m: &CMatrix| linalg::matmul(m, m).unwrap();
        let casimir = linalg::add(&linalg::add(&sq(jx), &sq(jy)).unwrap(), &sq(jz)).unwrap();
        let expect = linalg::scale_real(&linalg::identity(spin.dim()), j * (j + 1.0));
        assert!(max_abs_diff(&casimir, &expect) <= 1e-10 * j * (j + 1.0), "Casimir at j = {j}");

        for m in [jx, jy, jz] {
            assert!(linalg::hermiticity_defect(m) == 0.0);
        }
    }
}

#[test]
fn commutation_at_largest_spin() {
    let spin = SpinLabel::integer(2500);
    let ops = spin_operators(spin);
    let comm = linalg::commutator(ops.jx.matrix(), ops.jy.matrix()).unwrap();
    let jz = ops.jz.diagonal();
    let mut worst: f64 = 0.0;
    for r in 0..spin.dim() {
        for c in r.saturating_sub(2)..(r + 3).min(spin.dim()) {
            let expect = if r == c { Complex64::new(0.0, jz[r]) } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((comm[(r, c)] - expect).norm());
        }
    }
    // the product of two tridiagonal matrices is pentadiagonal
    assert!(linalg::bandwidth(&comm) <= 2);
    assert!(worst <= 1e-12 * 2500.0, "{worst}");
}

#[test]
fn dkt_operators_are_hermitian_and_unitary_at_reference_spins() {
    for twice in SPINS {
        let spin = SpinLabel::from_twice(twice);
        let (alpha, eta) = (1.0 / spin.j(), kicked_spectra::GOLDEN_RATIO * spin.j());
        let p = DktParams::new(alpha, eta, spin);
        let h = p.effective_hamiltonian().unwrap();
        assert!(h.hermiticity_defect() <= 1e-12 * h.max_abs().max(1.0));
        if spin.dim() <= 41 {
            let u = dkt_floquet(alpha, eta, spin).unwrap();
            assert!(unitarity_defect(u.matrix()) < 1e-10);
        }
    }
}

fn case_strategy() -> impl Strategy<Value = TableCase> {
    prop::sample::select(TableCase::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn su2_family_is_periodic_in_eta(j in 1u32..40, eta in -20.0f64..20.0, case in case_strategy()) {
        let spin = SpinLabel::integer(j);
        let alpha = 1.0 / j as f64;
        let shifted = eta + 4.0 * PI * j as f64;
        let h = su2::general_su2_hamiltonian(&case.params(spin, alpha, eta, Some(0.5)).unwrap()).unwrap();
        let g = su2::general_su2_hamiltonian(&case.params(spin, alpha, shifted, Some(0.5)).unwrap()).unwrap();
        let scale = h.max_abs().max(1.0);
        prop_assert!(max_abs_diff(h.matrix(), g.matrix()) <= 1e-12 * scale * (1.0 + shifted.abs()));
    }

    #[test]
    fn su2_family_is_even_in_eta(twice in 1u32..60, eta in -20.0f64..20.0, case in case_strategy()) {
        let spin = SpinLabel::from_twice(twice);
        let h = su2::general_su2_hamiltonian(&case.params(spin, 0.3, eta, Some(0.5)).unwrap()).unwrap();
        let g = su2::general_su2_hamiltonian(&case.params(spin, 0.3, -eta, Some(0.5)).unwrap()).unwrap();
        prop_assert_eq!(max_abs_diff(h.matrix(), g.matrix()), 0.0);
    }

    #[test]
    fn dkt_floquet_spectrum_is_periodic_in_eta(j in 1u32..8, alpha in 0.01f64..1.5, eta in -6.0f64..6.0) {
        let spin = SpinLabel::integer(j);
        let a = quasienergy_spectrum(&dkt_floquet(alpha, eta, spin).unwrap()).unwrap();
        let b = quasienergy_spectrum(&dkt_floquet(alpha, eta + 4.0 * PI * j as f64, spin).unwrap()).unwrap();
        prop_assert!(max_phase_mismatch(&a.phases, &b.phases).unwrap() < 1e-10);
    }

    #[test]
    fn quasienergies_round_trip(d in 2usize..8, entries in prop::collection::vec(-1.5f64..1.5, 64), t in 0.1f64..3.0) {
        let h = hermitian_from(&entries, d);
        let u = unitary_from_hermitian(&h, t).unwrap();
        prop_assert!(unitarity_defect(u.matrix()) < 1e-10);
        let phases = quasienergy_spectrum(&u).unwrap().phases;
        let folded = folded_energies(&h.eigenvalues().unwrap(), t);
        prop_assert!(max_phase_mismatch(&phases, &folded).unwrap() < 1e-10);
    }

    #[test]
    fn heff_is_affine_in_h0(
        d in 2usize..6,
        a in prop::collection::vec(-1.0f64..1.0, 36),
        b in prop::collection::vec(-1.0f64..1.0, 36),
        v in prop::collection::vec(-1.0f64..1.0, 36),
        lambda in -2.0f64..2.0,
        t in 0.2f64..2.0,
    ) {
        let (ha, hb, kick) = (hermitian_from(&a, d), hermitian_from(&b, d), hermitian_from(&v, d));
        let mix = ha.scaled(lambda).add(&hb.scaled(1.0 - lambda)).unwrap();
        let heff = |h0: &HermitianOperator| heff_delta_kicked(&KickedSystem::new(h0.clone(), kick.clone(), t).unwrap()).unwrap();
        let lhs = heff(&mix);
        let rhs = heff(&ha).scaled(lambda).add(&heff(&hb).scaled(1.0 - lambda)).unwrap();
        prop_assert!(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-11 * (1.0 + lhs.max_abs()));
        prop_assert!(lhs.hermiticity_defect() == 0.0 || lhs.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn micromotion_is_periodic(
        d in 2usize..5,
        a in prop::collection::vec(-1.0f64..1.0, 25),
        v in prop::collection::vec(-1.0f64..1.0, 25),
        t in 0.0f64..1.0,
        second in any::<bool>(),
    ) {
        let sys = KickedSystem::new(hermitian_from(&a, d), hermitian_from(&v, d), 1.0).unwrap();
        let f = kick_fourier_coefficients(sys.kick(), 1.0, 64).unwrap();
        let order = if second { MicromotionOrder::Second } else { MicromotionOrder::First };
        let f0 = micromotion_kick(&sys, &f, t, order).unwrap();
        let f3 = micromotion_kick(&sys, &f, t + 3.0, order).unwrap();
        prop_assert!(max_abs_diff(f0.matrix(), f3.matrix()) < 1e-9 * (1.0 + f0.max_abs()));
        prop_assert!(f0.hermiticity_defect() < 1e-12 * (1.0 + f0.max_abs()));
    }

    #[test]
    fn box_counting_is_affine_invariant(
        values in prop::collection::vec(0.0f64..1.0, 300..600),
        a in prop_oneof![0.01f64..100.0, -100.0f64..-0.01],
        b in -50.0f64..50.0,
    ) {
        let cfg = ScalingConfig::new(vec![0.0, 2.0, 3.5, 5.0, 8.0], vec![4, 8, 16, 32, 64]);
        let s = tau_spectrum(&values, &cfg).unwrap();
        let moved: Vec<f64> = values.iter().map(|x| a * x + b).collect();
        let t = tau_spectrum(&moved, &cfg).unwrap();
        for (x, y) in s.tau.iter().zip(&t.tau) {
            prop_assert!((x - y).abs() < 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn partition_function_is_monotone(values in prop::collection::vec(-5.0f64..5.0, 2..200), bins in 2usize..64) {
        prop_assume!(values.iter().any(|&v| v != values[0]));
        let m = box_probabilities(&values, bins).unwrap();
        prop_assert_eq!(m.partition_function(0.0), m.occupied() as f64);
        prop_assert!((m.partition_function(1.0) - 1.0).abs() < 1e-12);
        let qs = [0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0];
        for w in qs.windows(2) {
            prop_assert!(m.partition_function(w[1]) < m.partition_function(w[0]));
        }
    }

    #[test]
    fn dimension_ordering_on_cascades(p in 0.05f64..0.5, depth in 10u32..13) {
        let w = cascade(p, depth);
        let n = w.len();
        let centers: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let cfg = ScalingConfig::new(vec![2.0, 5.0], vec![16, 32, 64, 128, 256, 512]);
        let s = tau_spectrum_weighted(&centers, Some(&w), &cfg).unwrap();
        prop_assert!(s.dimension(2.0).unwrap() >= s.dimension(5.0).unwrap() - 0.02);
    }

    #[test]
    fn participation_ratio_ignores_order(raw in prop::collection::vec(0.0f64..1.0, 2..64), seed in any::<u64>()) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let mut shuffled = w.clone();
        // deterministic Fisher-Yates driven by a small LCG
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let (a, b) = (participation_ratio(&w).unwrap(), participation_ratio(&shuffled).unwrap());
        prop_assert!((a - b).abs() < 1e-9 * a);
        prop_assert!(a >= 1.0 - 1e-12 && a <= w.len() as f64 + 1e-9);
    }

    #[test]
    fn harper_outputs_hermitian_with_shared_diagonal(length in 2usize..80, sigma in 0.0f64..1.0, periodic in any::<bool>()) {
        let mut p = HarperParams::new(length, sigma);
        if periodic && length > 2 {
            p.boundary = Boundary::Periodic;
        }
        let h = harper::harper_hamiltonian(&p).unwrap();
        let c = harper::kicked_harper_effective(&p, EffectiveMode::ClosedForm).unwrap();
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
        prop_assert_eq!(c.hermiticity_defect(), 0.0);
        prop_assert_eq!(h.diagonal(), c.diagonal());
        // Gershgorin bound from the matrix rows
        let m = h.matrix();
        let bound = (0..length)
            .map(|r| (0..length).map(|k| m[(r, k)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        for e in h.eigenvalues().unwrap() {
            prop_assert!(e.abs() <= bound + 1e-12);
        }
    }
}

/// Weights of a binomial cascade: each level sends `p` left and `1 - p` right.
fn cascade(p: f64, depth: u32) -> Vec<f64> {
    let mut w = vec![1.0];
    for _ in 0..depth {
        w = w.iter().flat_map(|&x| [x * p, x * (1.0 - p)]).collect();
    }
    w
}

#[test]
fn eigenvector_tau_depspread_on_component_order() {
    // the same 32 equal weights, evenly spread versus packed into one block
    let d = 1024;
    let mut spread = vec![0.0; d];
    for k in 0..32 {
        spread[k * 32] = 1.0 / 32.0;
    }
    let mut packed = vec![0.0; d];
    for k in 0..32 {
        packed[d / 2 + k] = 1.0 / 32.0;
    }
    let cfg = ScalingConfig::for_eigenvectors(d);
    let a = eigenvector_tau(&spread, &cfg).unwrap();
    let b = eigenvector_tau(&packed, &cfg).unwrap();
    assert_eq!(participation_ratio(&spread).unwrap(), participation_ratio(&packed).unwrap());
    assert!((a.scaling.tau_at(2.0).unwrap() - b.scaling.tau_at(2.0).unwrap()).abs() > 1e-3);
}

#[test]
fn heff_general_converges_monotonically() {
    let d = 6;
    let entries: Vec<f64> = (0..72).map(|k| ((k * 37 % 101) as f64 / 50.0) - 1.0).collect();
    let h0 = hermitian_from(&entries, d);
    let kick = hermitian_from(&entries[7..], d);
    let period = 0.7;
    let omega = 2.0 * PI / period;
    let at = |n: usize| heff_general(&h0, &kick_fourier_coefficients(&kick, period, n).unwrap(), omega).unwrap();
    let mut prev = f64::INFINITY;
    let mut n = 16;
    while n <= 4096 {
        let step = max_abs_diff(at(2 * n).matrix(), at(n).matrix());
        assert!(step < prev, "N = {n}: {step} !< {prev}");
        prev = step;
        n *= 2;
    }
}

#[test]
fn micromotion_has_zero_time_average() {
    let d = 4;
    let entries: Vec<f64> = (0..40).map(|k| ((k * 53 % 97) as f64 / 48.0) - 1.0).collect();
    let sys = KickedSystem::new(hermitian_from(&entries, d), hermitian_from(&entries[3..], d), 1.0).unwrap();
    let f = kick_fourier_coefficients(sys.kick(), 1.0, 64).unwrap();
    let samples = 1024;
    for order in [MicromotionOrder::First, MicromotionOrder::Second] {
        let mut acc = linalg::zeros(d);
        for k in 0..samples {
            let fk = micromotion_kick(&sys, &f, k as f64 / samples as f64, order).unwrap();
            linalg::axpy(&mut acc, Complex64::new(1.0 / samples as f64, 0.0), fk.matrix());
        }
        assert!(linalg::max_abs(&acc) < 1e-12, "{order:?}: {}", linalg::max_abs(&acc));
    }
}

/// Midpoints of the `k` widest gaps between consecutive eigenvalues, in energy order.
fn widest_gaps(e: &[f64], k: usize) -> Vec<f64> {
    let mut gaps: Vec<(f64, f64)> = e.windows(2).map(|w| (w[1] - w[0], 0.5 * (w[0] + w[1]))).collect();
    gaps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut mids: Vec<f64> = gaps[..k].iter().map(|g| g.1).collect();
    mids.sort_by(f64::total_cmp);
    mids
}

#[test]
fn harper_gap_structure_is_reproducible_across_scales() {
    let p = HarperParams::new(1000, kicked_spectra::GOLDEN_RATIO);
    let first = harper::harper_hamiltonian(&p).unwrap().eigenvalues().unwrap();
    let again = harper::harper_hamiltonian(&p).unwrap().eigenvalues().unwrap();
    for (a, b) in widest_gaps(&first, 5).iter().zip(widest_gaps(&again, 5)) {
        assert!((a - b).abs() <= 1e-10);
    }

    // gaps show up at full range and again inside the central band
    let full = spectral_histogram(&first, 200, None).unwrap();
    assert!(full.counts.iter().any(|&c| c == 0));
    let n = first.len();
    let zoom = spectral_histogram(&first, 200, Some((first[2 * n / 5], first[3 * n / 5]))).unwrap();
    assert!(zoom.counts.iter().any(|&c| c == 0));
    assert!(zoom.counts.iter().sum::<usize>() > n / 10);
}
