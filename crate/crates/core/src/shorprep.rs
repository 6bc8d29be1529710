//! Desk-scale Shor preprocessing: modular exponentiation table, auxiliary and
//! main register measurements, continued-fraction period recovery, and an
//! end-to-end factoring loop.
//!
//! The auxiliary measurement is simulated on the residue table, never on the
//! joint two-register vector; the outcome distribution is the same.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qft::qft;
use crate::states::{periodic_state, PeriodicSpec};
use crate::statevec::{StateVector, DEFAULT_MAX_QUBITS};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `y` modulo `n`, by repeated multiplication.
pub fn order(y: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("modulus {n} below 2")));
    }
    if gcd(y % n, n) != 1 {
        return Err(Error::NotCoprime { y, n });
    }
    let y = (y % n) as u128;
    let mut v = y;
    let mut r = 1;
    while v != 1 % n as u128 {
        v = v * y % n as u128;
        r += 1;
    }
    Ok(r)
}

/// Indices `a` sharing one residue `y^a mod N`: `l, l + r, ...` below `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueClass {
    pub shift: usize,
    pub count: usize,
}

/// Residues of `y^a mod N` for `a in [0, 2^q)`, grouped into arithmetic
/// progressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModExpTable {
    pub n: u64,
    pub y: u64,
    pub q: usize,
    pub order: u64,
    pub classes: BTreeMap<u64, ResidueClass>,
}

impl ModExpTable {
    pub fn dim(&self) -> usize {
        1 << self.q
    }

    /// Main-register indices whose residue is `z`.
    pub fn indices(&self, z: u64) -> Vec<usize> {
        match self.classes.get(&z) {
            None => Vec::new(),
            Some(c) => (0..c.count)
                .map(|t| c.shift + t * self.order as usize)
                .collect(),
        }
    }

    pub fn periodic_spec(&self, z: u64) -> Option<PeriodicSpec> {
        let class = self.classes.get(&z)?;
        PeriodicSpec::new(self.q, self.order as usize, class.shift).ok()
    }
}

/// Tabulates `y^a mod N` over the main register. Each residue `y^l`,
/// `0 <= l < r`, owns the progression starting at `l`.
pub fn modexp_superposition(n: u64, y: u64, q: usize) -> Result<ModExpTable> {
    if q == 0 || q > DEFAULT_MAX_QUBITS {
        return Err(Error::QubitCount {
            q,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    let dim = 1usize << q;
    if (dim as u64) < n {
        return Err(Error::InvalidParameter(format!(
            "register of {q} qubits cannot hold residues of {n}"
        )));
    }
    let r = order(y, n)?;
    let mut classes = BTreeMap::new();
    let mut z = 1 % n;
    for l in 0..(r as usize).min(dim) {
        classes.insert(
            z,
            ResidueClass {
                shift: l,
                count: (dim - l).div_ceil(r as usize),
            },
        );
        z = ((z as u128 * y as u128) % n as u128) as u64;
    }
    Ok(ModExpTable {
        n,
        y: y % n,
        q,
        order: r,
        classes,
    })
}

/// Samples the auxiliary register: `z` with probability `|indices(z)| / Q`.
pub fn measure_auxiliary<R: Rng + ?Sized>(table: &ModExpTable, rng: &mut R) -> (u64, PeriodicSpec) {
    let a = rng.gen_range(0..table.dim());
    let l = a % table.order as usize;
    let z = mod_pow(table.y, l as u64, table.n);
    let spec = PeriodicSpec::new(table.q, table.order as usize, l).expect("class is a valid progression");
    (z, spec)
}

/// Samples a basis index with probability `|amplitude|^2`.
pub fn measure_register<R: Rng + ?Sized>(psi: &StateVector, rng: &mut R) -> usize {
    let weights: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    WeightedIndex::new(&weights)
        .expect("a normalized state has positive total weight")
        .sample(rng)
}

/// Continued-fraction expansion of `j / Q`; returns the denominator of the
/// last convergent below `n`, or `None` for `j = 0`.
pub fn extract_period(j: u64, dim: u64, n: u64) -> Option<u64> {
    if j == 0 || dim == 0 {
        return None;
    }
    let (mut num, mut den) = (j, dim);
    // Convergent denominators: k_n = a_n k_{n-1} + k_{n-2}, k_{-2} = 1, k_{-1} = 0.
    let (mut k_prev, mut k_cur) = (1u128, 0u128);
    let mut best = None;
    while den != 0 {
        let a = (num / den) as u128;
        (num, den) = (den, num % den);
        let k_next = a * k_cur + k_prev;
        (k_prev, k_cur) = (k_cur, k_next);
        if k_cur >= n as u128 {
            break;
        }
        if k_cur > 0 {
            best = Some(k_cur as u64);
        }
    }
    best
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest `p` with `n = p^k`, `k >= 2`, if any.
fn prime_power_base(n: u64) -> Option<u64> {
    for k in 2..64u32 {
        let root = (n as f64).powf(1.0 / k as f64).round() as u64;
        if root < 2 {
            break;
        }
        for cand in root.saturating_sub(1)..=root + 1 {
            if cand >= 2 && cand.checked_pow(k) == Some(n) && is_prime(cand) {
                return Some(cand);
            }
        }
    }
    None
}

/// One pass of the quantum-assisted loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttemptRecord {
    pub y: u64,
    pub z: Option<u64>,
    pub l: Option<usize>,
    pub r_true: Option<u64>,
    pub j: Option<usize>,
    pub r_candidate: Option<u64>,
    pub factor: Option<u64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShorReport {
    pub n: u64,
    pub q: usize,
    pub factor: Option<u64>,
    /// How the factor was found: `classical` or `order-finding`.
    pub method: Option<String>,
    pub attempts: Vec<AttemptRecord>,
}

impl ShorReport {
    pub fn succeeded(&self) -> bool {
        self.factor.is_some()
    }
}

/// Smallest `q` with `2^q >= n^2`.
pub fn default_register_width(n: u64) -> usize {
    let sq = (n as u128) * (n as u128);
    let mut q = 1;
    while (1u128 << q) < sq {
        q += 1;
    }
    q
}

fn classical(n: u64, q: usize, factor: u64) -> ShorReport {
    ShorReport {
        n,
        q,
        factor: Some(factor),
        method: Some("classical".into()),
        attempts: Vec::new(),
    }
}

fn attempt<R: Rng + ?Sized>(n: u64, q: usize, rng: &mut R) -> Result<AttemptRecord> {
    let y = rng.gen_range(2..n);
    let mut rec = AttemptRecord {
        y,
        z: None,
        l: None,
        r_true: None,
        j: None,
        r_candidate: None,
        factor: None,
        note: String::new(),
    };
    let g = gcd(y, n);
    if g != 1 {
        rec.factor = Some(g);
        rec.note = "gcd shortcut".into();
        return Ok(rec);
    }
    let table = modexp_superposition(n, y, q)?;
    let (z, spec) = measure_auxiliary(&table, rng);
    rec.z = Some(z);
    rec.l = Some(spec.shift());
    rec.r_true = Some(table.order);
    let spectrum = qft(&periodic_state(&spec));
    let j = measure_register(&spectrum, rng);
    rec.j = Some(j);
    let Some(r) = extract_period(j as u64, spectrum.dim() as u64, n) else {
        rec.note = "measured zero".into();
        return Ok(rec);
    };
    rec.r_candidate = Some(r);
    if mod_pow(y, r, n) != 1 {
        rec.note = "candidate is not the order".into();
        return Ok(rec);
    }
    if r % 2 != 0 {
        rec.note = "odd order".into();
        return Ok(rec);
    }
    let half = mod_pow(y, r / 2, n);
    if half == n - 1 {
        rec.note = "y^(r/2) = -1 mod N".into();
        return Ok(rec);
    }
    for cand in [gcd(half + n - 1, n), gcd(half + 1, n)] {
        if cand != 1 && cand != n {
            rec.factor = Some(cand);
            rec.note = "order found".into();
            return Ok(rec);
        }
    }
    rec.note = "trivial gcd".into();
    Ok(rec)
}

/// Factors `n` with simulated order finding, trying at most `attempts` bases.
///
/// Even numbers and prime powers are answered classically. `q` defaults to
/// the smallest width with `2^q >= n^2`.
pub fn shor_demo<R: Rng + ?Sized>(
    n: u64,
    q: Option<usize>,
    rng: &mut R,
    attempts: usize,
) -> Result<ShorReport> {
    if n <= 3 {
        return Err(Error::InvalidParameter(format!("{n} is too small to factor")));
    }
    if is_prime(n) {
        return Err(Error::Prime(n));
    }
    let q = q.unwrap_or_else(|| default_register_width(n));
    if n % 2 == 0 {
        return Ok(classical(n, q, 2));
    }
    if let Some(p) = prime_power_base(n) {
        return Ok(classical(n, q, p));
    }
    let mut report = ShorReport {
        n,
        q,
        factor: None,
        method: None,
        attempts: Vec::new(),
    };
    for _ in 0..attempts {
        let rec = attempt(n, q, rng)?;
        let found = rec.factor;
        let via_gcd = rec.note == "gcd shortcut";
        report.attempts.push(rec);
        if let Some(f) = found {
            report.factor = Some(f);
            report.method = Some(if via_gcd { "classical" } else { "order-finding" }.into());
            break;
        }
    }
    Ok(report)
}
