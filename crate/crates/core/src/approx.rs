//! Closed-form and approximate entanglement values for equal-superposition
//! and periodic states, with the structural decompositions of periodic
//! states used to check them.
//!
//! Nothing here builds a state vector; all routines are integer or real
//! arithmetic on the index sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::PeriodicSpec;
use crate::statevec::hamming;

/// Which candidate product state the approximation picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Many terms: the complete ES state `|+>^q` is the nearest product state.
    Ascending,
    /// Few terms: a single basis state from the set is the nearest product state.
    Descending,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Ascending => "ascending",
            Branch::Descending => "descending",
        }
    }
}

/// Branch label plus the `sqrt(Q)` boundary it was decided against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchTag {
    pub branch: Branch,
    pub boundary: f64,
}

/// `s * s <= Q` without floating point.
fn at_most_sqrt(s: usize, dim: usize) -> bool {
    (s as u128) * (s as u128) <= dim as u128
}

/// Estimated `P_max` of an ES state with `s` terms: `1/s` if `s <= sqrt(Q)`,
/// otherwise `s/Q`.
pub fn approx_p_es(q: usize, s: usize) -> Result<f64> {
    let dim = 1usize << q;
    if s == 0 || s > dim {
        return Err(Error::InvalidParameter(format!(
            "set size {s} outside 1..={dim}"
        )));
    }
    Ok(if at_most_sqrt(s, dim) {
        1.0 / s as f64
    } else {
        s as f64 / dim as f64
    })
}

/// Estimated `P_max` of a periodic state from its exact term count `A`.
pub fn approx_p_periodic(spec: &PeriodicSpec) -> (f64, BranchTag) {
    let dim = spec.dim();
    let terms = spec.terms();
    let boundary = (dim as f64).sqrt();
    if at_most_sqrt(terms, dim) {
        (
            1.0 / terms as f64,
            BranchTag {
                branch: Branch::Descending,
                boundary,
            },
        )
    } else {
        (
            terms as f64 / dim as f64,
            BranchTag {
                branch: Branch::Ascending,
                boundary,
            },
        )
    }
}

/// Branch of the period-only formula: ascending iff `r < sqrt(Q)`.
pub fn period_branch(q: usize, r: usize) -> Branch {
    let dim = 1usize << q;
    if (r as u128) * (r as u128) < dim as u128 {
        Branch::Ascending
    } else {
        Branch::Descending
    }
}

/// Period-only estimate of `G`: `ln r` if `r < sqrt(Q)`, else `ln(Q/r)`.
pub fn approx_g_periodic(q: usize, r: usize) -> Result<f64> {
    let dim = 1usize << q;
    if r == 0 || r > dim {
        return Err(Error::InvalidParameter(format!("period {r} outside 1..={dim}")));
    }
    Ok(match period_branch(q, r) {
        Branch::Ascending => (r as f64).ln(),
        Branch::Descending => (dim as f64 / r as f64).ln(),
    })
}

/// Families with a known exact `P_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    Ghz(usize),
    W(usize),
    BalancedW(usize),
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn closed_form_p(state: NamedState) -> Result<f64> {
    match state {
        NamedState::Ghz(q) if q >= 2 => Ok(0.5),
        NamedState::W(q) if q >= 2 => {
            let q = q as f64;
            Ok(((q - 1.0) / q).powf(q - 1.0))
        }
        NamedState::BalancedW(n) if n >= 1 => {
            let n = n as u64;
            Ok(binomial(2 * n, n) * 0.25f64.powi(n as i32))
        }
        other => Err(Error::InvalidParameter(format!("{other:?} below minimum size"))),
    }
}

/// Result of stripping even factors from the period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Odd period (or a single qubit left); nothing to factor out.
    Unchanged(PeriodicSpec),
    /// `state(original) = state(reduced) ⊗ |bits[n-1]> ⊗ ... ⊗ |bits[0]>`:
    /// `bits[0]` is the first detached (least significant) qubit.
    Reduced { spec: PeriodicSpec, bits: Vec<u8> },
}

impl Reduction {
    pub fn spec(&self) -> &PeriodicSpec {
        match self {
            Reduction::Unchanged(s) => s,
            Reduction::Reduced { spec, .. } => spec,
        }
    }

    pub fn bits(&self) -> &[u8] {
        match self {
            Reduction::Unchanged(_) => &[],
            Reduction::Reduced { bits, .. } => bits,
        }
    }
}

fn reduce_once(spec: &PeriodicSpec) -> Option<(PeriodicSpec, u8)> {
    let (q, r, l) = (spec.q(), spec.period(), spec.shift());
    if r % 2 != 0 || q < 2 {
        return None;
    }
    let reduced = PeriodicSpec::new(q - 1, r / 2, l / 2).expect("halving keeps the spec valid");
    Some((reduced, (l % 2) as u8))
}

/// Factors out the constant least significant qubit of an even-period state.
/// With `full`, repeats until the period is odd.
pub fn reduce_even_period(spec: &PeriodicSpec, full: bool) -> Reduction {
    let mut current = *spec;
    let mut bits = Vec::new();
    while let Some((next, bit)) = reduce_once(&current) {
        current = next;
        bits.push(bit);
        if !full {
            break;
        }
    }
    if bits.is_empty() {
        Reduction::Unchanged(current)
    } else {
        Reduction::Reduced {
            spec: current,
            bits,
        }
    }
}

/// Split of a periodic state by its most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Terms with the top bit clear.
    pub a0: usize,
    /// Terms with the top bit set.
    pub a1: usize,
    /// Shift of the high component, `min{k in S : k >= Q/2} - Q/2`;
    /// `None` when the high component is empty.
    pub high_shift: Option<usize>,
    /// `-2^(q-1) mod r`, the high-component shift that ignores `l`.
    pub formula_shift: usize,
}

impl Decomposition {
    /// Both components are nonempty.
    pub fn is_proper(&self) -> bool {
        self.a0 > 0 && self.a1 > 0
    }

    pub fn formula_matches(&self) -> Option<bool> {
        self.high_shift.map(|s| s == self.formula_shift)
    }
}

/// Splits the index set of a periodic state on its top bit, by enumeration.
pub fn decompose_recursive(spec: &PeriodicSpec) -> Result<Decomposition> {
    let q = spec.q();
    if q < 2 {
        return Err(Error::InvalidParameter("decomposition needs q >= 2".into()));
    }
    let half = 1usize << (q - 1);
    let mut a0 = 0;
    let mut a1 = 0;
    let mut high_shift = None;
    for k in spec.indices() {
        if k < half {
            a0 += 1;
        } else {
            a1 += 1;
            if high_shift.is_none() {
                high_shift = Some(k - half);
            }
        }
    }
    let r = spec.period();
    let formula_shift = (r - half % r) % r;
    Ok(Decomposition {
        a0,
        a1,
        high_shift,
        formula_shift,
    })
}

/// `|S_m|` for `m = 0..=q`: members of `set` at Hamming distance `m` from `k0`.
pub fn hamming_shells(q: usize, set: &[usize], k0: usize) -> Result<Vec<usize>> {
    if k0 >> q != 0 {
        return Err(Error::IndexOutOfRange { index: k0, q });
    }
    let mut shells = vec![0; q + 1];
    for &k in set {
        if k >> q != 0 {
            return Err(Error::IndexOutOfRange { index: k, q });
        }
        shells[hamming(k, k0) as usize] += 1;
    }
    Ok(shells)
}
