//! Dense pure states over `q` qubits and product-state parametrizations.
//!
//! Bit convention: basis index `k` is read as the binary string `j_1 ... j_q`
//! with `j_1` the most significant bit. Qubit indices in this crate are
//! zero-based, so qubit `0` is the most significant bit of `k` and qubit
//! `q - 1` the least significant one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest qubit count accepted by the default constructors.
pub const DEFAULT_MAX_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

/// A 2x2 complex matrix, row major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Unit-norm amplitude vector of `q` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    q: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, renormalizing when needed.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        Self::from_amplitudes_with_max(amps, DEFAULT_MAX_QUBITS)
    }

    pub fn from_amplitudes_with_max(mut amps: Vec<Complex64>, max_qubits: usize) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let q = len.trailing_zeros() as usize;
        check_qubits(q, max_qubits)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            let inv = 1.0 / norm;
            amps.iter_mut().for_each(|a| *a *= inv);
        }
        Ok(Self { q, amps })
    }

    /// Wraps amplitudes that are known to be normalized.
    pub(crate) fn from_normalized(q: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << q);
        Self { q, amps }
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    /// Hilbert space dimension `2^q`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.q != other.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                actual: other.q,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.amps[k].norm() > tol)
            .collect()
    }

    /// True when every amplitude is a nonnegative real number.
    pub fn is_real_nonnegative(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= tol && a.re >= -tol)
    }

    /// Largest per-amplitude deviation from `other`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        assert_eq!(self.q, other.q, "qubit counts differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_qubits(q: usize, max: usize) -> Result<()> {
    if q == 0 || q > max {
        return Err(Error::QubitCount { q, max });
    }
    Ok(())
}

/// Separable state `prod_m (sqrt(1 - x_m)|0> + sqrt(x_m) e^{i theta_m}|1>)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    x: Vec<f64>,
    theta: Vec<f64>,
}

/// Maps an angle into `[-pi, pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta - 2.0 * PI * ((theta + PI) / (2.0 * PI)).floor();
    if t >= PI {
        t -= 2.0 * PI;
    }
    if t < -PI {
        t = -PI;
    }
    t
}

impl ProductState {
    pub fn new(x: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidProductState("no qubits".into()));
        }
        if x.len() != theta.len() {
            return Err(Error::InvalidProductState(format!(
                "{} balances but {} phases",
                x.len(),
                theta.len()
            )));
        }
        if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidProductState(format!(
                "balance {bad} outside [0, 1]"
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidProductState("non-finite phase".into()));
        }
        let theta = theta.into_iter().map(wrap_phase).collect();
        Ok(Self { x, theta })
    }

    /// Every qubit in the same single-qubit state.
    pub fn uniform(q: usize, x: f64, theta: f64) -> Result<Self> {
        Self::new(vec![x; q], vec![theta; q])
    }

    /// The computational basis state `|k>`.
    pub fn basis(q: usize, k: usize) -> Result<Self> {
        if q == 0 || q > 63 || k >> q != 0 {
            return Err(Error::IndexOutOfRange { index: k, q });
        }
        let x = (0..q).map(|m| bit_of(k, q, m) as f64).collect();
        Ok(Self {
            x,
            theta: vec![0.0; q],
        })
    }

    pub fn qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Sets one qubit's parameters; `x` is clamped into `[0, 1]`.
    pub fn set(&mut self, qubit: usize, x: f64, theta: f64) {
        self.x[qubit] = x.clamp(0.0, 1.0);
        self.theta[qubit] = wrap_phase(theta);
    }

    /// Sets a qubit from an unnormalized single-qubit vector `c0|0> + c1|1>`,
    /// dropping its global phase.
    pub fn set_from_vector(&mut self, qubit: usize, c0: Complex64, c1: Complex64) {
        let n0 = c0.norm_sqr();
        let n1 = c1.norm_sqr();
        let total = n0 + n1;
        if total == 0.0 {
            return;
        }
        let theta = if n1 == 0.0 || n0 == 0.0 {
            0.0
        } else {
            c1.arg() - c0.arg()
        };
        self.set(qubit, n1 / total, theta);
    }

    /// Amplitudes `(C_0, C_1 e^{i theta})` of qubit `m`.
    pub fn coefficients(&self, m: usize) -> (Complex64, Complex64) {
        let x = self.x[m];
        (
            Complex64::new((1.0 - x).sqrt(), 0.0),
            Complex64::from_polar(x.sqrt(), self.theta[m]),
        )
    }
}

/// Value of qubit `m` (0 = most significant) in index `k`.
#[inline]
pub fn bit_of(k: usize, q: usize, m: usize) -> usize {
    (k >> (q - 1 - m)) & 1
}

/// Expands a product state into its dense amplitude vector.
pub fn expand(phi: &ProductState) -> StateVector {
    let q = phi.qubits();
    let mut amps = Vec::with_capacity(1 << q);
    amps.push(Complex64::new(1.0, 0.0));
    for m in 0..q {
        let (c0, c1) = phi.coefficients(m);
        amps = amps.iter().flat_map(|&a| [a * c0, a * c1]).collect();
    }
    StateVector::from_normalized(q, amps)
}

/// Contracts `psi` with the conjugated single-qubit factors of `phi` on every
/// qubit not listed in `keep`.
///
/// `keep` must be strictly increasing. The result has `2^keep.len()` entries
/// indexed by the kept qubits' bits, first kept qubit most significant. With
/// an empty `keep` the single entry is `<phi|psi>`. Runs in `O(2^q)`.
pub fn partial_overlaps(
    phi: &ProductState,
    psi: &StateVector,
    keep: &[usize],
) -> Result<Vec<Complex64>> {
    let q = psi.qubits();
    if phi.qubits() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            actual: phi.qubits(),
        });
    }
    if let Some(&bad) = keep.iter().find(|&&m| m >= q) {
        return Err(Error::QubitOutOfRange { qubit: bad, q });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "kept qubits must be strictly increasing".into(),
        ));
    }
    let mut buf = psi.amplitudes().to_vec();
    let mut len = buf.len();
    let mut keep_iter = keep.iter().peekable();
    for m in 0..q {
        if keep_iter.peek() == Some(&&m) {
            keep_iter.next();
            continue;
        }
        let (c0, c1) = phi.coefficients(m);
        let (c0, c1) = (c0.conj(), c1.conj());
        // Qubits below m are untouched, so qubit m sits at bit q-1-m.
        let block = 1usize << (q - 1 - m);
        let groups = len / (2 * block);
        for hi in 0..groups {
            let base = hi * 2 * block;
            for lo in 0..block {
                let v = c0 * buf[base + lo] + c1 * buf[base + block + lo];
                buf[hi * block + lo] = v;
            }
        }
        len /= 2;
    }
    buf.truncate(len);
    Ok(buf)
}

/// `<phi|psi>` without materializing the product state.
pub fn overlap(phi: &ProductState, psi: &StateVector) -> Result<Complex64> {
    Ok(partial_overlaps(phi, psi, &[])?[0])
}

/// `psi_a ⊗ psi_b`, with `psi_a` on the most significant qubits.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amplitudes()
        .iter()
        .flat_map(|&x| b.amplitudes().iter().map(move |&y| x * y))
        .collect();
    StateVector::from_normalized(a.qubits() + b.qubits(), amps)
}

fn unitarity_defect(u: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let entry: Complex64 = (0..2).map(|k| u[i][k] * u[j][k].conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((entry - target).norm());
        }
    }
    worst
}

/// Applies `u` to one qubit.
pub fn apply_local_unitary(psi: &StateVector, qubit: usize, u: &Matrix2) -> Result<StateVector> {
    let q = psi.qubits();
    if qubit >= q {
        return Err(Error::QubitOutOfRange { qubit, q });
    }
    let defect = unitarity_defect(u);
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let stride = 1usize << (q - 1 - qubit);
    let mut amps = psi.amplitudes().to_vec();
    for base in (0..amps.len()).step_by(2 * stride) {
        for k in base..base + stride {
            let (a0, a1) = (amps[k], amps[k + stride]);
            amps[k] = u[0][0] * a0 + u[0][1] * a1;
            amps[k + stride] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    Ok(StateVector::from_normalized(q, amps))
}

/// Number of bits in which two basis indices differ.
#[inline]
pub fn hamming(k1: usize, k2: usize) -> u32 {
    (k1 ^ k2).count_ones()
}

#[derive(Serialize, Deserialize)]
struct StateVectorJson {
    q: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorJson {
            q: self.q,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StateVectorJson::deserialize(deserializer)?;
        if raw.amplitudes.len() != 1usize.checked_shl(raw.q as u32).unwrap_or(0) {
            return Err(D::Error::custom(format!(
                "expected 2^{} amplitudes, found {}",
                raw.q,
                raw.amplitudes.len()
            )));
        }
        let amps = raw
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(amps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn expand_single_qubit() {
        let zero = expand(&ProductState::new(vec![0.0], vec![0.0]).unwrap());
        assert!(close(zero.amplitude(0), c(1.0)) && close(zero.amplitude(1), c(0.0)));

        let plus = expand(&ProductState::new(vec![0.5], vec![0.0]).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(plus.amplitude(0), c(h)) && close(plus.amplitude(1), c(h)));
    }

    #[test]
    fn expand_phase_on_second_qubit() {
        let phi = ProductState::new(vec![0.5, 0.5], vec![0.0, PI]).unwrap();
        let v = expand(&phi);
        let want = [0.5, -0.5, 0.5, -0.5];
        for (a, w) in v.amplitudes().iter().zip(want) {
            assert!(close(*a, c(w)), "{a} vs {w}");
        }
    }

    #[test]
    fn first_qubit_is_most_significant() {
        let phi = ProductState::basis(3, 0b100).unwrap();
        assert_eq!(phi.x(), &[1.0, 0.0, 0.0]);
        let v = expand(&phi);
        assert!(close(v.amplitude(4), c(1.0)));
        assert_eq!(bit_of(0b100, 3, 0), 1);
    }

    #[test]
    fn overlap_with_basis() {
        let phi = ProductState::uniform(3, 0.0, 0.0).unwrap();
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(1.0);
        let psi = StateVector::from_amplitudes(amps).unwrap();
        assert!(close(overlap(&phi, &psi).unwrap(), c(1.0)));
    }

    #[test]
    fn overlap_plus_with_ghz2() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = StateVector::from_amplitudes(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let phi = ProductState::uniform(2, 0.5, 0.0).unwrap();
        let p = overlap(&phi, &ghz).unwrap().norm_sqr();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_overlaps_keep_everything_is_conjugate_free_copy() {
        let psi = StateVector::from_amplitudes(vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        let phi = ProductState::uniform(2, 0.3, 1.0).unwrap();
        let all = partial_overlaps(&phi, &psi, &[0, 1]).unwrap();
        assert_eq!(all, psi.amplitudes());
        assert!(partial_overlaps(&phi, &psi, &[1, 0]).is_err());
        assert!(partial_overlaps(&phi, &psi, &[2]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let zero = StateVector::from_amplitudes(vec![c(1.0), c(0.0)]).unwrap();
        let one = StateVector::from_amplitudes(vec![c(0.0), c(1.0)]).unwrap();
        let t = tensor(&zero, &one);
        assert_eq!(t.qubits(), 2);
        assert!(close(t.amplitude(1), c(1.0)));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = StateVector::from_amplitudes(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let t = tensor(&ghz, &zero);
        assert_eq!(t.support(1e-12), vec![0, 6]);
    }

    #[test]
    fn not_gate_on_first_qubit() {
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(1.0);
        let psi = StateVector::from_amplitudes(amps).unwrap();
        let not = [[c(0.0), c(1.0)], [c(1.0), c(0.0)]];
        let out = apply_local_unitary(&psi, 0, &not).unwrap();
        assert!(close(out.amplitude(0b100), c(1.0)));
    }

    #[test]
    fn rejects_non_unitary() {
        let psi = StateVector::from_amplitudes(vec![c(1.0), c(0.0)]).unwrap();
        let m = [[c(1.0), c(1.0)], [c(0.0), c(1.0)]];
        assert!(matches!(
            apply_local_unitary(&psi, 0, &m),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(0, 0), 0);
        assert_eq!(hamming(0b0101, 0b0110), 2);
    }

    #[test]
    fn hamming_is_a_metric_exhaustively() {
        let q = 6;
        let n = 1usize << q;
        for a in 0..n {
            for b in 0..n {
                assert_eq!(hamming(a, b), hamming(b, a));
                assert_eq!(hamming(a, b) == 0, a == b);
                for c in (0..n).step_by(7) {
                    assert!(hamming(a, c) <= hamming(a, b) + hamming(b, c));
                }
            }
        }
    }

    #[test]
    fn constructor_normalizes_and_rejects_zero() {
        let s = StateVector::from_amplitudes(vec![c(3.0), c(4.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(
            StateVector::from_amplitudes(vec![c(0.0), c(0.0)]),
            Err(Error::ZeroNorm)
        );
        assert_eq!(
            StateVector::from_amplitudes(vec![c(1.0); 3]),
            Err(Error::NotPowerOfTwo(3))
        );
        assert!(StateVector::from_amplitudes_with_max(vec![c(1.0); 8], 2).is_err());
    }

    #[test]
    fn product_state_validation() {
        assert!(ProductState::new(vec![1.5], vec![0.0]).is_err());
        assert!(ProductState::new(vec![0.5], vec![]).is_err());
        let p = ProductState::new(vec![0.5], vec![3.0 * PI]).unwrap();
        assert!((p.theta()[0] + PI).abs() < 1e-12);
    }

    #[test]
    fn wrap_phase_range() {
        for t in [-10.0, -PI, 0.0, PI, 7.5, 1e3] {
            let w = wrap_phase(t);
            assert!((-PI..PI).contains(&w), "{t} -> {w}");
            assert!(((t - w) / (2.0 * PI)).fract().abs() < 1e-9 || ((t - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn json_shape() {
        let s = StateVector::from_amplitudes(vec![c(1.0), c(0.0)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"q":1,"amplitudes":[[1.0,0.0],[0.0,0.0]]}"#);
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<StateVector>(r#"{"q":2,"amplitudes":[[1,0]]}"#).is_err());
    }
}
