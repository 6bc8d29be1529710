//! Quantum Fourier transform on dense states.
//!
//! Forward kernel is `exp(-2 pi i j k / Q) / sqrt(Q)`; the inverse uses the
//! conjugate kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::states::PeriodicSpec;
use crate::statevec::StateVector;

fn transform(psi: &StateVector, direction: FftDirection) -> StateVector {
    let mut buf = psi.amplitudes().to_vec();
    let fft = FftPlanner::new().plan_fft(buf.len(), direction);
    fft.process(&mut buf);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    buf.iter_mut().for_each(|a| *a *= scale);
    StateVector::from_normalized(psi.qubits(), buf)
}

pub fn qft(psi: &StateVector) -> StateVector {
    transform(psi, FftDirection::Forward)
}

pub fn inverse_qft(psi: &StateVector) -> StateVector {
    transform(psi, FftDirection::Inverse)
}

/// `sin(pi n / Q)` with `n` reduced modulo `2Q` in integer arithmetic.
fn sin_pi_over(n: u128, dim: u128) -> f64 {
    let n = n % (2 * dim);
    (PI * n as f64 / dim as f64).sin()
}

/// Closed-form QFT amplitudes of a periodic state:
///
/// `y_j = sin(pi j r A / Q) / sin(pi j r / Q) * exp(-2 pi i j (l + r (A-1)/2) / Q) / sqrt(Q A)`
///
/// When `j r` is a multiple of `Q` the ratio of sines is replaced by its limit;
/// the geometric sum then collapses to `A exp(-2 pi i j l / Q)`.
pub fn periodic_qft_amplitudes(spec: &PeriodicSpec) -> Vec<Complex64> {
    let dim = spec.dim() as u128;
    let (r, l, terms) = (
        spec.period() as u128,
        spec.shift() as u128,
        spec.terms() as u128,
    );
    let norm = 1.0 / ((dim * terms) as f64).sqrt();
    // Twice the phase centre, l + r(A-1)/2, kept integral.
    let centre2 = 2 * l + r * (terms - 1);
    (0..dim)
        .map(|j| {
            if (j * r) % dim == 0 {
                let turns = (j * l) % dim;
                let angle = -2.0 * PI * turns as f64 / dim as f64;
                return Complex64::from_polar(norm * terms as f64, angle);
            }
            let ratio = sin_pi_over(j * r * terms, dim) / sin_pi_over(j * r, dim);
            // exp(-2 pi i j centre2 / (2Q)) = exp(-pi i (j centre2 mod 2Q) / Q)
            let angle = -PI * ((j * centre2) % (2 * dim)) as f64 / dim as f64;
            Complex64::from_polar(norm * ratio, angle)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{basis_state, complete_es, ghz, periodic_state, random_state};
    use rand::SeedableRng;

    fn naive_dft(psi: &StateVector) -> Vec<Complex64> {
        let n = psi.dim();
        let scale = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|j| {
                psi.amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(k, &a)| {
                        let t = ((j * k) % n) as f64 / n as f64;
                        a * Complex64::from_polar(scale, -2.0 * PI * t)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn delta_and_flat() {
        for q in 1..6 {
            let d = basis_state(q, 0).unwrap();
            let flat = complete_es(q).unwrap();
            assert!(qft(&d).max_deviation(&flat) < 1e-12);
            assert!(qft(&flat).max_deviation(&d) < 1e-12);
        }
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for q in 1..8 {
            let psi = random_state(q, &mut rng).unwrap();
            let fast = qft(&psi);
            let slow = naive_dft(&psi);
            let err = fast
                .amplitudes()
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "q={q} err={err}");
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let states = [
            basis_state(3, 5).unwrap(),
            random_state(6, &mut rng).unwrap(),
            ghz(4).unwrap(),
        ];
        for psi in &states {
            assert!(inverse_qft(&qft(psi)).max_deviation(psi) < 1e-10);
            assert!((qft(psi).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_at_zero_frequency() {
        for (q, r, l) in [(8, 13, 3), (6, 5, 0), (5, 32, 7)] {
            let spec = PeriodicSpec::new(q, r, l).unwrap();
            let y = periodic_qft_amplitudes(&spec);
            let want = (spec.terms() as f64 / spec.dim() as f64).sqrt();
            assert!((y[0] - Complex64::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_transform_small() {
        for q in 1..7 {
            for r in 1..=(1usize << q) {
                for l in 0..r {
                    let spec = PeriodicSpec::new(q, r, l).unwrap();
                    let y = periodic_qft_amplitudes(&spec);
                    let f = qft(&periodic_state(&spec));
                    let err = f
                        .amplitudes()
                        .iter()
                        .zip(&y)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-10, "({q},{r},{l}) err {err}");
                }
            }
        }
    }
}
