mod common;

use common::{distance_to_multiple, max_diff, naive_dft};
use proptest::prelude::*;
use qftent::qft::{inverse_qft, periodic_qft_amplitudes, qft};
use qftent::states::{basis_state, complete_es, ghz, periodic_state, phased_es, random_state, PeriodicSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(q: usize, r: usize, l: usize) -> PeriodicSpec {
    PeriodicSpec::new(q, r, l).unwrap()
}

#[test]
fn delta_and_flat_spectrum() {
    for q in 1..=6 {
        let flat = complete_es(q).unwrap();
        assert!(qft(&basis_state(q, 0).unwrap()).max_deviation(&flat) < 1e-12);
        assert!(qft(&flat).max_deviation(&basis_state(q, 0).unwrap()) < 1e-12);
    }
}

#[test]
fn round_trips() {
    let states = [
        basis_state(3, 5).unwrap(),
        random_state(6, &mut ChaCha8Rng::seed_from_u64(1)).unwrap(),
        ghz(4).unwrap(),
    ];
    for psi in &states {
        assert!(inverse_qft(&qft(psi)).max_deviation(psi) < 1e-10);
        assert!(qft(&inverse_qft(psi)).max_deviation(psi) < 1e-10);
    }
}

#[test]
fn square_reverses_indices() {
    let psi = random_state(5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let twice = qft(&qft(&psi));
    for k in 0..32 {
        assert!((twice.amplitude(k) - psi.amplitude((32 - k) % 32)).norm() < 1e-12);
    }
}

#[test]
fn concentrates_near_multiples() {
    let out = qft(&periodic_state(&spec(8, 13, 3)));
    let step = 256.0 / 13.0;
    let mut peaks: Vec<(f64, usize)> = (0..256).map(|j| (out.amplitude(j).norm(), j)).collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(_, j) in &peaks[..13] {
        assert!(distance_to_multiple(j, step) <= 1.0, "{j}");
    }
}

#[test]
fn closed_form_zero_frequency() {
    for &(q, r, l) in &[(8, 13, 3), (5, 7, 0), (10, 1000, 999), (4, 16, 0)] {
        let s = spec(q, r, l);
        let y = periodic_qft_amplitudes(&s);
        let want = (s.terms() as f64 / s.dim() as f64).sqrt();
        assert!((y[0].re - want).abs() < 1e-14 && y[0].im.abs() < 1e-14);
    }
}

#[test]
fn closed_form_matches_transform_small_odd_periods() {
    for r in (1..64).step_by(2) {
        for l in [0, 6] {
            if l >= r {
                continue;
            }
            let s = spec(8, r, l);
            let direct = qft(&periodic_state(&s));
            assert!(max_diff(&periodic_qft_amplitudes(&s), direct.amplitudes()) < 1e-10, "r={r} l={l}");
        }
    }
}

#[test]
fn exact_divisor_maps_to_phased_periodic() {
    for q in 1..=10 {
        let dim = 1usize << q;
        for e in 0..=q {
            let r = 1 << e;
            let out = qft(&periodic_state(&spec(q, r, 0)));
            let target = phased_es(&spec(q, dim / r, 0).to_es(), 0.0);
            assert!(out.max_deviation(&target) < 1e-12, "q={q} r={r}");
        }
    }
}

proptest! {
    #[test]
    fn fast_matches_naive(seed in any::<u64>(), q in 1..=8usize) {
        let psi = random_state(q, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let fast = qft(&psi);
        prop_assert!(max_diff(fast.amplitudes(), &naive_dft(psi.amplitudes())) < 1e-10);
        prop_assert!((fast.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_naive((q, r, l) in (1..=9usize).prop_flat_map(|q| (Just(q), 1..=(1usize << q)))
        .prop_flat_map(|(q, r)| (Just(q), Just(r), 0..r)))
    {
        let s = spec(q, r, l);
        let naive = naive_dft(periodic_state(&s).amplitudes());
        prop_assert!(max_diff(&periodic_qft_amplitudes(&s), &naive) < 1e-10);
    }

    #[test]
    fn magnitudes_depend_on_shift_only_through_terms(
        (q, r, l1, l2) in (2..=10usize).prop_flat_map(|q| (Just(q), 2..=(1usize << (q - 1))))
            .prop_flat_map(|(q, r)| (Just(q), Just(r), 0..r, 0..r)))
    {
        let (a, b) = (spec(q, r, l1), spec(q, r, l2));
        prop_assume!(a.terms() == b.terms());
        let (ya, yb) = (periodic_qft_amplitudes(&a), periodic_qft_amplitudes(&b));
        for (u, v) in ya.iter().zip(&yb) {
            prop_assert!((u.norm() - v.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_near_multiples_of_inverse_period(
        (q, r, l) in (4..=12usize).prop_flat_map(|q| (Just(q), 2..=(1usize << (q / 2))))
            .prop_flat_map(|(q, r)| (Just(q), Just(r), 0..r)))
    {
        let s = spec(q, r, l);
        let step = s.dim() as f64 / r as f64;
        let mass: f64 = periodic_qft_amplitudes(&s)
            .iter()
            .enumerate()
            .filter(|(j, _)| distance_to_multiple(*j, step) <= 1.0)
            .map(|(_, y)| y.norm_sqr())
            .sum();
        prop_assert!(mass >= 0.9, "mass {}", mass);
    }
}
