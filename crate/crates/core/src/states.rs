//! Constructors for the named state families: basis, equal superposition,
//! periodic, GHZ, W, balanced W, phased ES and Haar-random states.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{check_qubits, StateVector, DEFAULT_MAX_QUBITS};

/// Arithmetic progression `l, l + r, ...` inside `[0, 2^q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicSpec {
    q: usize,
    r: usize,
    l: usize,
}

impl PeriodicSpec {
    /// Requires `1 <= r <= 2^q` and `0 <= l < r`.
    pub fn new(q: usize, r: usize, l: usize) -> Result<Self> {
        check_qubits(q, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << q;
        let invalid = |reason| Error::InvalidPeriodic { q, r, l, reason };
        if r == 0 {
            return Err(invalid("period must be at least 1"));
        }
        if r > dim {
            return Err(invalid("period exceeds 2^q"));
        }
        if l >= r {
            return Err(invalid("shift must be smaller than the period"));
        }
        Ok(Self { q, r, l })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn period(&self) -> usize {
        self.r
    }

    pub fn shift(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        1 << self.q
    }

    /// Number of terms `A = ceil((Q - l) / r)`.
    pub fn terms(&self) -> usize {
        (self.dim() - self.l).div_ceil(self.r)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        let (l, r) = (self.l, self.r);
        (0..self.terms()).map(move |t| l + t * r)
    }

    pub fn to_es(&self) -> EsSpec {
        EsSpec {
            q: self.q,
            set: self.indices().collect(),
        }
    }
}

/// Nonempty set of distinct basis indices of a `q`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EsSpec {
    q: usize,
    set: Vec<usize>,
}

impl EsSpec {
    /// Sorts and deduplicates `indices`.
    pub fn new(q: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_qubits(q, DEFAULT_MAX_QUBITS)?;
        let mut set: Vec<usize> = indices.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(&bad) = set.iter().find(|&&k| k >> q != 0) {
            return Err(Error::IndexOutOfRange { index: bad, q });
        }
        Ok(Self { q, set })
    }

    /// Set whose members are the one bits of `mask` (bit `k` selects index `k`).
    pub fn from_mask(q: usize, mask: u64) -> Result<Self> {
        Self::new(q, (0..64).filter(|k| mask >> k & 1 == 1))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn indices(&self) -> &[usize] {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// True when some qubit has the same value across the whole set.
    pub fn is_reducible(&self) -> bool {
        let all_and = self.set.iter().fold(usize::MAX, |acc, &k| acc & k);
        let all_or = self.set.iter().fold(0, |acc, &k| acc | k);
        let mask = (1usize << self.q) - 1;
        // A qubit is constant if it is one everywhere or zero everywhere.
        (all_and & mask) != 0 || (all_or & mask) != mask
    }
}

pub fn basis_state(q: usize, k: usize) -> Result<StateVector> {
    check_qubits(q, DEFAULT_MAX_QUBITS)?;
    if k >> q != 0 {
        return Err(Error::IndexOutOfRange { index: k, q });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
    amps[k] = Complex64::new(1.0, 0.0);
    Ok(StateVector::from_normalized(q, amps))
}

pub fn es_state(spec: &EsSpec) -> StateVector {
    let amp = Complex64::new(1.0 / (spec.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << spec.q];
    for &k in &spec.set {
        amps[k] = amp;
    }
    StateVector::from_normalized(spec.q, amps)
}

pub fn periodic_state(spec: &PeriodicSpec) -> StateVector {
    let amp = Complex64::new(1.0 / (spec.terms() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); spec.dim()];
    for k in spec.indices() {
        amps[k] = amp;
    }
    StateVector::from_normalized(spec.q, amps)
}

/// `|+>^q`.
pub fn complete_es(q: usize) -> Result<StateVector> {
    check_qubits(q, DEFAULT_MAX_QUBITS)?;
    Ok(periodic_state(&PeriodicSpec::new(q, 1, 0)?))
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

pub fn ghz(q: usize) -> Result<StateVector> {
    require(q >= 2, "GHZ needs at least 2 qubits")?;
    Ok(es_state(&EsSpec::new(q, [0, (1 << q) - 1])?))
}

pub fn w(q: usize) -> Result<StateVector> {
    require(q >= 2, "W needs at least 2 qubits")?;
    Ok(es_state(&EsSpec::new(q, (0..q).map(|m| 1 << m))?))
}

/// Equal superposition of all `2n`-bit strings with exactly `n` ones.
pub fn balanced_w(n: usize) -> Result<StateVector> {
    require(n >= 1, "balanced W needs n >= 1")?;
    let q = 2 * n;
    check_qubits(q, DEFAULT_MAX_QUBITS)?;
    Ok(es_state(&EsSpec::new(
        q,
        (0..1usize << q).filter(|k| k.count_ones() as usize == n),
    )?))
}

/// ES state with relative phases `exp(-2 pi i p k / Q)`.
pub fn phased_es(spec: &EsSpec, p: f64) -> StateVector {
    let dim = 1usize << spec.q;
    let norm = 1.0 / (spec.len() as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for &k in &spec.set {
        // Reduce p*k mod Q before scaling to keep the phase argument small.
        let turns = (p * k as f64).rem_euclid(dim as f64) / dim as f64;
        amps[k] = Complex64::from_polar(norm, -2.0 * PI * turns);
    }
    StateVector::from_normalized(spec.q, amps)
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians.
pub fn random_state<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Result<StateVector> {
    check_qubits(q, DEFAULT_MAX_QUBITS)?;
    let amps: Vec<Complex64> = (0..1usize << q)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(amps)
}
