//! Reference implementations used only by tests. None of them share code
//! with the library routines they check.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qftent::StateVector;

/// `|<phi|psi>|^2` straight from the per-index product formula.
pub fn naive_p(psi: &StateVector, x: &[f64], theta: &[f64]) -> f64 {
    naive_overlap(psi, x, theta).norm_sqr()
}

pub fn naive_overlap(psi: &StateVector, x: &[f64], theta: &[f64]) -> Complex64 {
    naive_product(x, theta)
        .iter()
        .zip(psi.amplitudes())
        .map(|(p, a)| p.conj() * a)
        .sum()
}

/// Product-state amplitudes, qubit 0 as the most significant bit.
pub fn naive_product(x: &[f64], theta: &[f64]) -> Vec<Complex64> {
    let q = x.len();
    (0..1usize << q)
        .map(|k| {
            let mut mag = 1.0;
            let mut phase = 0.0;
            for m in 0..q {
                if (k >> (q - 1 - m)) & 1 == 1 {
                    mag *= x[m].sqrt();
                    phase += theta[m];
                } else {
                    mag *= (1.0 - x[m]).sqrt();
                }
            }
            Complex64::from_polar(mag, phase)
        })
        .collect()
}

/// `O(Q^2)` DFT with kernel `exp(-2 pi i j k / Q) / sqrt(Q)`.
pub fn naive_dft(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|j| {
            a.iter()
                .enumerate()
                .map(|(k, &v)| v * Complex64::from_polar(s, -2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

fn next_digit(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exhaustive-grid estimate of `P_max` for at most 4 qubits.
///
/// Scans `x_m` on `grid_n + 1` points and `theta_m` on `phase_grid_n` points
/// (skipped for nonnegative real states), then polishes the best point with a
/// shrinking compass search.
pub fn grid_oracle(psi: &StateVector, grid_n: usize, phase_grid_n: usize) -> f64 {
    let q = psi.qubits();
    assert!(q <= 4, "grid oracle supports at most 4 qubits");
    assert!(grid_n > 0);
    let use_phase = !psi.is_real_nonnegative(1e-14);
    let phase_n = if use_phase { phase_grid_n.max(1) } else { 1 };
    let xs: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).collect();
    let ts: Vec<f64> = (0..phase_n).map(|i| -PI + 2.0 * PI * i as f64 / phase_n as f64).collect();

    let mut best = (-1.0, vec![0.0; q], vec![0.0; q]);
    let mut xi = vec![0usize; q];
    loop {
        let x: Vec<f64> = xi.iter().map(|&i| xs[i]).collect();
        let mut ti = vec![0usize; q];
        loop {
            let theta: Vec<f64> = ti.iter().map(|&i| if use_phase { ts[i] } else { 0.0 }).collect();
            let p = naive_p(psi, &x, &theta);
            if p > best.0 {
                best = (p, x.clone(), theta);
            }
            if !next_digit(&mut ti, phase_n) {
                break;
            }
        }
        if !next_digit(&mut xi, grid_n + 1) {
            break;
        }
    }

    let (mut p, mut x, mut theta) = best;
    let mut step_x = 1.0 / grid_n as f64;
    let mut step_t = 2.0 * PI / phase_n as f64;
    while step_x > 1e-12 {
        let mut moved = false;
        for m in 0..q {
            for dir in [-1.0, 1.0] {
                let mut cand = x.clone();
                cand[m] = (cand[m] + dir * step_x).clamp(0.0, 1.0);
                let pc = naive_p(psi, &cand, &theta);
                if pc > p {
                    p = pc;
                    x = cand;
                    moved = true;
                }
                if use_phase {
                    let mut cand = theta.clone();
                    cand[m] += dir * step_t;
                    let pc = naive_p(psi, &x, &cand);
                    if pc > p {
                        p = pc;
                        theta = cand;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            step_x *= 0.5;
            step_t *= 0.5;
        }
    }
    p
}

/// Dense ES vector built by hand.
pub fn es_vector(q: usize, set: &[usize]) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << q];
    let a = 1.0 / (set.len() as f64).sqrt();
    for &k in set {
        v[k] = Complex64::new(a, 0.0);
    }
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Distance from `j` to the nearest real multiple of `step`.
pub fn distance_to_multiple(j: usize, step: f64) -> f64 {
    let t = j as f64 / step;
    (t - t.round()).abs() * step
}

/// Runs the CLI binary with `args`.
pub fn run_cli(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_qftent"))
        .args(args)
        .output()
        .expect("failed to launch qftent")
}
