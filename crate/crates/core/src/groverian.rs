//! Groverian entanglement: the largest squared overlap `P_max` of a state with
//! any fully separable state, and `G = -ln P_max`.
//!
//! `P_max` is found by coordinate ascent over the product-state parameters.
//! Each single-qubit step fixes every other qubit and maximizes over the
//! remaining one in closed form; the optional pair step maximizes over two
//! qubits at once through the top singular pair of a 2x2 matrix. Several
//! restarts guard against the many local maxima of the overlap landscape.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{partial_overlaps, overlap, ProductState, StateVector};

/// Below this squared partial-overlap mass a step is treated as degenerate.
const DEGENERATE: f64 = 1e-30;
/// Restarts whose results are within this margin count as ties.
const TIE_MARGIN: f64 = 1e-12;

/// Starting points used by the restarts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InitPolicy {
    /// Restart 0 at `|+>^q`, restart 1 at the largest-amplitude basis state,
    /// the rest uniformly random.
    #[default]
    Standard,
    /// Every restart uniformly random.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Number of restarts; `None` means `8 + q`.
    pub restarts: Option<usize>,
    pub max_sweeps: usize,
    /// A restart stops once a full sweep improves `P` by less than this.
    pub tol: f64,
    pub pair_step: bool,
    pub init: InitPolicy,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: None,
            max_sweeps: 200,
            tol: 1e-10,
            pair_step: true,
            init: InitPolicy::Standard,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn restarts_for(&self, q: usize) -> usize {
        self.restarts.unwrap_or(8 + q).max(1)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == Some(0) {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a `P_max` search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerResult {
    pub p_max: f64,
    pub g: f64,
    pub nearest: ProductState,
    /// Sweeps used by the winning restart.
    pub sweeps_used: usize,
    pub restart_index: usize,
    pub restarts: usize,
    /// `P` after initialization and after every sweep, one list per restart.
    pub traces: Vec<Vec<f64>>,
}

/// Outcome of one analytic step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// New squared overlap.
    pub p: f64,
    /// Both branches had zero overlap; parameters were left unchanged.
    pub degenerate: bool,
}

/// Maximizes `|<phi|psi>|^2` over the parameters of one qubit, updating `phi`.
///
/// With `a_0`, `a_1` the overlaps of `psi` with `phi` where the qubit is
/// replaced by `|0>` and `|1>`, the optimum is `x = |a_1|^2 / (|a_0|^2 + |a_1|^2)`,
/// `theta = arg a_1 - arg a_0`, reaching `|a_0|^2 + |a_1|^2`.
pub fn single_qubit_max(
    psi: &StateVector,
    phi: &mut ProductState,
    qubit: usize,
) -> Result<StepOutcome> {
    let a = partial_overlaps(phi, psi, &[qubit])?;
    let mass = a[0].norm_sqr() + a[1].norm_sqr();
    if mass < DEGENERATE {
        return Ok(StepOutcome {
            p: 0.0,
            degenerate: true,
        });
    }
    phi.set_from_vector(qubit, a[0], a[1]);
    Ok(StepOutcome {
        p: mass,
        degenerate: false,
    })
}

/// Top singular triple of a 2x2 matrix: `(sigma^2, u, v)` with `u^† m v = sigma`.
pub(crate) fn top_singular(m: &[Complex64; 4]) -> (f64, [Complex64; 2], [Complex64; 2]) {
    let [m00, m01, m10, m11] = *m;
    // H = M M^†
    let a = m00.norm_sqr() + m01.norm_sqr();
    let d = m10.norm_sqr() + m11.norm_sqr();
    let b = m00 * m10.conj() + m01 * m11.conj();
    let half_gap = 0.5 * (a - d);
    let lambda = 0.5 * (a + d) + (half_gap * half_gap + b.norm_sqr()).sqrt();
    let c1 = [b, Complex64::new(lambda - a, 0.0)];
    let c2 = [Complex64::new(lambda - d, 0.0), b.conj()];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let (u, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    let u = if n > 0.0 {
        let s = 1.0 / n.sqrt();
        [u[0] * s, u[1] * s]
    } else {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    };
    let sigma = lambda.max(0.0).sqrt();
    // v = M^† u / sigma
    let v = if sigma > 0.0 {
        [
            (m00.conj() * u[0] + m10.conj() * u[1]) / sigma,
            (m01.conj() * u[0] + m11.conj() * u[1]) / sigma,
        ]
    } else {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    };
    (lambda.max(0.0), u, v)
}

/// Maximizes `|<phi|psi>|^2` jointly over two qubits, updating `phi`.
pub fn two_qubit_max(
    psi: &StateVector,
    phi: &mut ProductState,
    m1: usize,
    m2: usize,
) -> Result<StepOutcome> {
    if m1 == m2 {
        return Err(Error::InvalidParameter("pair step needs two distinct qubits".into()));
    }
    let (lo, hi) = (m1.min(m2), m1.max(m2));
    let a = partial_overlaps(phi, psi, &[lo, hi])?;
    let (p, u, v) = top_singular(&[a[0], a[1], a[2], a[3]]);
    if p < DEGENERATE {
        return Ok(StepOutcome {
            p: 0.0,
            degenerate: true,
        });
    }
    // <phi|psi> = c^† M conj(d): c = u on `lo`, d = conj(v) on `hi`.
    phi.set_from_vector(lo, u[0], u[1]);
    phi.set_from_vector(hi, v[0].conj(), v[1].conj());
    Ok(StepOutcome {
        p,
        degenerate: false,
    })
}

/// Pairs visited in a sweep: `(0,1),(2,3),...` on even sweeps and
/// `(1,2),(3,4),...` on odd ones.
pub fn pair_schedule(q: usize, sweep: usize) -> Vec<(usize, usize)> {
    if q < 2 {
        return Vec::new();
    }
    let offset = if q == 2 { 0 } else { sweep % 2 };
    (offset..q - 1).step_by(2).map(|m| (m, m + 1)).collect()
}

fn seed_for_restart(seed: u64, restart: usize) -> u64 {
    crate::splitmix64(seed ^ crate::splitmix64(restart as u64))
}

fn random_point(q: usize, rng: &mut ChaCha8Rng) -> ProductState {
    let x = (0..q).map(|_| rng.gen::<f64>()).collect();
    let theta = (0..q).map(|_| rng.gen_range(-PI..PI)).collect();
    ProductState::new(x, theta).expect("sampled parameters are in range")
}

fn initial_point(psi: &StateVector, config: &OptimizerConfig, restart: usize) -> ProductState {
    let q = psi.qubits();
    match (config.init, restart) {
        (InitPolicy::Standard, 0) => ProductState::uniform(q, 0.5, 0.0).expect("valid"),
        (InitPolicy::Standard, 1) => {
            let amps = psi.amplitudes();
            let mut best = 0;
            for (k, a) in amps.iter().enumerate() {
                if a.norm_sqr() > amps[best].norm_sqr() {
                    best = k;
                }
            }
            ProductState::basis(q, best).expect("index in range")
        }
        _ => random_point(
            q,
            &mut ChaCha8Rng::seed_from_u64(seed_for_restart(config.seed, restart)),
        ),
    }
}

struct RestartOutcome {
    p: f64,
    phi: ProductState,
    sweeps: usize,
    trace: Vec<f64>,
}

/// Applies a step on a scratch copy and keeps it only if `P` does not drop.
fn accept_if_better<F>(phi: &mut ProductState, p: &mut f64, step: F) -> Result<()>
where
    F: FnOnce(&mut ProductState) -> Result<StepOutcome>,
{
    let mut trial = phi.clone();
    let out = step(&mut trial)?;
    if !out.degenerate && out.p >= *p {
        *phi = trial;
        *p = out.p;
    }
    Ok(())
}

fn run_restart(
    psi: &StateVector,
    mut phi: ProductState,
    config: &OptimizerConfig,
) -> Result<RestartOutcome> {
    let q = psi.qubits();
    let mut p = overlap(&phi, psi)?.norm_sqr();
    let mut trace = vec![p];
    let mut sweeps = 0;
    while sweeps < config.max_sweeps {
        let before = p;
        for m in 0..q {
            accept_if_better(&mut phi, &mut p, |t| single_qubit_max(psi, t, m))?;
        }
        if config.pair_step {
            for (m1, m2) in pair_schedule(q, sweeps) {
                accept_if_better(&mut phi, &mut p, |t| two_qubit_max(psi, t, m1, m2))?;
            }
        }
        sweeps += 1;
        trace.push(p);
        if p - before < config.tol {
            break;
        }
    }
    Ok(RestartOutcome {
        p,
        phi,
        sweeps,
        trace,
    })
}

/// Estimates `P_max` by multi-restart coordinate ascent.
pub fn p_max(psi: &StateVector, config: &OptimizerConfig) -> Result<OptimizerResult> {
    config.validate()?;
    let restarts = config.restarts_for(psi.qubits());
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(psi, initial_point(psi, config, i), config))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.p > outcomes[best].p + TIE_MARGIN {
            best = i;
        }
    }
    let traces = outcomes.iter().map(|o| o.trace.clone()).collect();
    let winner = &outcomes[best];
    // Report the overlap of the returned state itself, not the step bookkeeping.
    let p_final = overlap(&winner.phi, psi)?.norm_sqr().min(1.0);
    Ok(OptimizerResult {
        p_max: p_final,
        g: log_measure(p_final),
        nearest: winner.phi.clone(),
        sweeps_used: winner.sweeps,
        restart_index: best,
        restarts,
        traces,
    })
}

/// `G = -ln P`, with `-0.0` mapped to `0.0`.
pub fn log_measure(p: f64) -> f64 {
    let g = -p.ln();
    if g == 0.0 {
        0.0
    } else {
        g
    }
}

/// Logarithmic Groverian measure `G = -ln P_max`.
pub fn groverian(psi: &StateVector, config: &OptimizerConfig) -> Result<f64> {
    Ok(p_max(psi, config)?.g)
}

/// Exact `P_max` of a two-qubit state: the largest squared Schmidt coefficient,
/// `(1 + sqrt(1 - 4 |det M|^2)) / 2` for the amplitude matrix `M`.
pub fn p_max_two_qubit_exact(psi: &StateVector) -> Result<f64> {
    if psi.qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: psi.qubits(),
        });
    }
    let a = psi.amplitudes();
    let trace: f64 = a.iter().map(|v| v.norm_sqr()).sum();
    let det = (a[0] * a[3] - a[1] * a[2]).norm_sqr();
    let disc = (trace * trace - 4.0 * det).max(0.0);
    Ok(0.5 * (trace + disc.sqrt()))
}
