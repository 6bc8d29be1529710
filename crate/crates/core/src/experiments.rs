//! Sweeps over periodic and random states, the QFT-induced change `ΔG`, and
//! CSV emission.
//!
//! Seeds: record `i` of a run with master seed `s` evaluates `G` before the
//! QFT with optimizer seed `splitmix64(s + 2i)` and after it with
//! `splitmix64(s + 2i + 1)`. Random states draw their own seed from a
//! ChaCha8 stream seeded with `s`, stored in the record's `seed` column.
//! Records are evaluated in parallel but always emitted in input order.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{approx_g_periodic, approx_p_periodic};
use crate::error::{Error, Result};
use crate::groverian::{log_measure, p_max, OptimizerConfig, OptimizerResult};
use crate::qft::qft;
use crate::shorprep::gcd;
use crate::states::{periodic_state, random_state, PeriodicSpec};
use crate::statevec::StateVector;
use crate::splitmix64;

/// One CSV row. Column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub kind: String,
    pub q: usize,
    pub r: Option<usize>,
    pub l: Option<usize>,
    pub seed: Option<u64>,
    pub g_before: f64,
    pub g_after: Option<f64>,
    pub delta_g: Option<f64>,
    pub g_accurate: Option<f64>,
    pub g_simple: Option<f64>,
    pub branch: Option<String>,
    pub restarts: usize,
    pub sweeps: usize,
}

pub const CSV_HEADER: &str =
    "experiment,kind,q,r,l,seed,g_before,g_after,delta_g,g_accurate,g_simple,branch,restarts,sweeps";

/// Optimizer seed for evaluation `eval` (0 before, 1 after) of record `index`.
pub fn derived_seed(master: u64, index: usize, eval: usize) -> u64 {
    splitmix64(master.wrapping_add(2 * index as u64 + eval as u64))
}

/// `G` before and after the QFT.
#[derive(Debug, Clone)]
pub struct DeltaG {
    pub before: OptimizerResult,
    pub after: OptimizerResult,
}

impl DeltaG {
    pub fn g_before(&self) -> f64 {
        self.before.g
    }

    pub fn g_after(&self) -> f64 {
        self.after.g
    }

    /// `G(QFT ψ) - G(ψ)`.
    pub fn delta(&self) -> f64 {
        self.after.g - self.before.g
    }
}

fn delta_g_indexed(psi: &StateVector, config: &OptimizerConfig, index: usize) -> Result<DeltaG> {
    let before = p_max(psi, &config.clone().with_seed(derived_seed(config.seed, index, 0)))?;
    let after = p_max(
        &qft(psi),
        &config.clone().with_seed(derived_seed(config.seed, index, 1)),
    )?;
    Ok(DeltaG { before, after })
}

/// `ΔG(ψ) = G(QFT ψ) - G(ψ)` with one optimizer config for both sides.
pub fn delta_g(psi: &StateVector, config: &OptimizerConfig) -> Result<DeltaG> {
    delta_g_indexed(psi, config, 0)
}

fn periodic_approximations(spec: &PeriodicSpec) -> (f64, f64, String) {
    let (p, tag) = approx_p_periodic(spec);
    let g_simple = approx_g_periodic(spec.q(), spec.period()).expect("valid period");
    (log_measure(p), g_simple, tag.branch.as_str().to_string())
}

/// Numeric and approximate `G` for every odd period `r` in `(l, Q]`.
pub fn sweep_periods(q: usize, l: usize, config: &OptimizerConfig) -> Result<Vec<ExperimentRecord>> {
    let dim = 1usize << q;
    let specs: Vec<PeriodicSpec> = (l + 1..=dim)
        .filter(|r| r % 2 == 1)
        .map(|r| PeriodicSpec::new(q, r, l))
        .collect::<Result<_>>()?;
    specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let cfg = config.clone().with_seed(derived_seed(config.seed, i, 0));
            let res = p_max(&periodic_state(spec), &cfg)?;
            let (g_accurate, g_simple, branch) = periodic_approximations(spec);
            Ok(ExperimentRecord {
                experiment: "sweep".into(),
                kind: "periodic".into(),
                q,
                r: Some(spec.period()),
                l: Some(l),
                seed: Some(config.seed),
                g_before: res.g,
                g_after: None,
                delta_g: None,
                g_accurate: Some(g_accurate),
                g_simple: Some(g_simple),
                branch: Some(branch),
                restarts: res.restarts,
                sweeps: res.sweeps_used,
            })
        })
        .collect()
}

/// Summary of `ΔG` over a family of states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSummary {
    /// Mean of `|ΔG|`.
    pub mean_abs: f64,
    pub max_abs: f64,
    /// Mean of the signed `ΔG`.
    pub mean: f64,
    /// Sample standard deviation of the signed `ΔG`.
    pub std: f64,
    /// States evaluated.
    pub count: usize,
    /// States in the family before subsampling.
    pub population: usize,
    pub records: Vec<ExperimentRecord>,
}

fn summarize(records: Vec<ExperimentRecord>, population: usize) -> DeltaSummary {
    let deltas: Vec<f64> = records.iter().filter_map(|r| r.delta_g).collect();
    let n = deltas.len();
    let mean_abs = deltas.iter().map(|d| d.abs()).sum::<f64>() / n as f64;
    let max_abs = deltas.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mean = deltas.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    DeltaSummary {
        mean_abs,
        max_abs,
        mean,
        std,
        count: n,
        population,
        records,
    }
}

/// All `(r, l)` with odd `r <= Q` and `0 <= l < r`, ordered by `r` then `l`.
pub fn odd_periodic_family(q: usize) -> Vec<(usize, usize)> {
    let dim = 1usize << q;
    (1..=dim)
        .step_by(2)
        .flat_map(|r| (0..r).map(move |l| (r, l)))
        .collect()
}

/// Every `stride`-th element, with the stride chosen so at most `cap` remain.
pub fn stride_subsample<T: Clone>(items: &[T], cap: Option<usize>) -> Vec<T> {
    match cap {
        Some(cap) if cap > 0 && items.len() > cap => {
            let stride = items.len().div_ceil(cap);
            items.iter().step_by(stride).cloned().collect()
        }
        _ => items.to_vec(),
    }
}

fn periodic_delta_record(
    q: usize,
    r: usize,
    l: usize,
    index: usize,
    config: &OptimizerConfig,
) -> Result<ExperimentRecord> {
    let spec = PeriodicSpec::new(q, r, l)?;
    let d = delta_g_indexed(&periodic_state(&spec), config, index)?;
    let (g_accurate, g_simple, branch) = periodic_approximations(&spec);
    Ok(ExperimentRecord {
        experiment: "delta-g".into(),
        kind: "periodic".into(),
        q,
        r: Some(r),
        l: Some(l),
        seed: Some(config.seed),
        g_before: d.g_before(),
        g_after: Some(d.g_after()),
        delta_g: Some(d.delta()),
        g_accurate: Some(g_accurate),
        g_simple: Some(g_simple),
        branch: Some(branch),
        restarts: d.before.restarts,
        sweeps: d.before.sweeps_used + d.after.sweeps_used,
    })
}

/// `|ΔG|` statistics over the odd-period periodic states of `q` qubits.
///
/// Even periods are not enumerated: they factor into an odd-period state of
/// fewer qubits times a basis qubit. `cap` bounds the number of states by a
/// deterministic stride subsample.
pub fn delta_g_periodic_average(
    q: usize,
    config: &OptimizerConfig,
    cap: Option<usize>,
) -> Result<DeltaSummary> {
    if q < 2 {
        return Err(Error::InvalidParameter("need at least 2 qubits".into()));
    }
    let family = odd_periodic_family(q);
    let chosen = stride_subsample(&family, cap);
    let records = chosen
        .par_iter()
        .enumerate()
        .map(|(i, &(r, l))| periodic_delta_record(q, r, l, i, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(records, family.len()))
}

/// `ΔG` statistics over Haar-random states.
pub fn delta_g_random<R: Rng + ?Sized>(
    q: usize,
    samples: usize,
    config: &OptimizerConfig,
    rng: &mut R,
) -> Result<DeltaSummary> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let seeds: Vec<u64> = (0..samples).map(|_| rng.next_u64()).collect();
    let records = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let psi = random_state(q, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let d = delta_g_indexed(&psi, config, i)?;
            Ok(ExperimentRecord {
                experiment: "delta-g".into(),
                kind: "random".into(),
                q,
                r: None,
                l: None,
                seed: Some(seed),
                g_before: d.g_before(),
                g_after: Some(d.g_after()),
                delta_g: Some(d.delta()),
                g_accurate: None,
                g_simple: None,
                branch: None,
                restarts: d.before.restarts,
                sweeps: d.before.sweeps_used + d.after.sweeps_used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(records, samples))
}

/// Reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Amplitude magnitudes of a periodic state before and after the QFT.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig1Data {
    pub spec: PeriodicSpec,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// Multiples of `r` below `Q`.
    pub markers_before: Vec<Rational>,
    /// Multiples of `Q / r` below `Q`.
    pub markers_after: Vec<Rational>,
}

pub fn fig1_data(spec: &PeriodicSpec) -> Fig1Data {
    let psi = periodic_state(spec);
    let out = qft(&psi);
    let dim = spec.dim() as u64;
    let r = spec.period() as u64;
    let markers_before = (0..).map(|n| n * r).take_while(|&m| m < dim).map(|m| Rational::new(m, 1)).collect();
    let markers_after = (0..r).map(|n| Rational::new(n * dim, r)).collect();
    Fig1Data {
        spec: *spec,
        before: psi.amplitudes().iter().map(|a| a.norm()).collect(),
        after: out.amplitudes().iter().map(|a| a.norm()).collect(),
        markers_before,
        markers_after,
    }
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    if records.is_empty() {
        wtr.write_record(CSV_HEADER.split(','))
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    for rec in records {
        wtr.serialize(rec)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
}

pub fn read_records<R: std::io::Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Fig. 1 data as `series,index,value,num,den` rows. Amplitude rows use the
/// series names `before` and `after`; marker rows `marker_r` and
/// `marker_q_over_r` carry the exact position in `num/den`.
pub fn write_fig1<W: Write>(data: &Fig1Data, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::InvalidParameter(e.to_string());
    wtr.write_record(["series", "index", "value", "num", "den"]).map_err(err)?;
    for (series, values) in [("before", &data.before), ("after", &data.after)] {
        for (i, v) in values.iter().enumerate() {
            wtr.write_record([series, &i.to_string(), &v.to_string(), "", ""]).map_err(err)?;
        }
    }
    for (series, marks) in [
        ("marker_r", &data.markers_before),
        ("marker_q_over_r", &data.markers_after),
    ] {
        for (i, m) in marks.iter().enumerate() {
            wtr.write_record([
                series,
                &i.to_string(),
                &m.value().to_string(),
                &m.num.to_string(),
                &m.den.to_string(),
            ])
            .map_err(err)?;
        }
    }
    wtr.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Settings shared by the CLI subcommands, loadable from a TOML file.
///
/// Every key is optional and mirrors a command-line flag of the same name;
/// flags override file values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub restarts: Option<usize>,
    pub sweeps: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub no_pair_step: Option<bool>,
    pub samples: Option<usize>,
    pub cap: Option<usize>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// Values set in `flags` win over those in `self`.
    pub fn merged_with(&self, flags: &RunConfig) -> RunConfig {
        RunConfig {
            restarts: flags.restarts.or(self.restarts),
            sweeps: flags.sweeps.or(self.sweeps),
            tol: flags.tol.or(self.tol),
            seed: flags.seed.or(self.seed),
            no_pair_step: flags.no_pair_step.or(self.no_pair_step),
            samples: flags.samples.or(self.samples),
            cap: flags.cap.or(self.cap),
        }
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts.or(d.restarts),
            max_sweeps: self.sweeps.unwrap_or(d.max_sweeps),
            tol: self.tol.unwrap_or(d.tol),
            pair_step: !self.no_pair_step.unwrap_or(false),
            init: d.init,
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::basis_state;

    #[test]
    fn basis_state_has_no_change() {
        let d = delta_g(&basis_state(5, 0).unwrap(), &OptimizerConfig::default()).unwrap();
        assert!(d.g_before().abs() < 1e-12);
        assert!(d.g_after().abs() < 1e-12);
        assert!(d.delta().abs() < 1e-12);
    }

    #[test]
    fn sweep_covers_odd_periods_above_shift() {
        let recs = sweep_periods(4, 3, &OptimizerConfig::default()).unwrap();
        let rs: Vec<usize> = recs.iter().map(|r| r.r.unwrap()).collect();
        assert_eq!(rs, vec![5, 7, 9, 11, 13, 15]);
    }

    #[test]
    fn sweep_first_record_is_zero() {
        let recs = sweep_periods(5, 0, &OptimizerConfig::default()).unwrap();
        let first = &recs[0];
        assert_eq!(first.r, Some(1));
        assert_eq!(first.g_before, 0.0);
        assert_eq!(first.g_accurate, Some(0.0));
        assert_eq!(first.g_simple, Some(0.0));
    }

    #[test]
    fn subsample_is_strided() {
        let v: Vec<usize> = (0..10).collect();
        assert_eq!(stride_subsample(&v, Some(4)), vec![0, 3, 6, 9]);
        assert_eq!(stride_subsample(&v, None), v);
        assert_eq!(stride_subsample(&v, Some(20)), v);
    }

    #[test]
    fn family_size() {
        // Sum of odd r up to 2^q is (2^(q-1))^2.
        for q in 1..8 {
            assert_eq!(odd_periodic_family(q).len(), 1 << (2 * (q - 1)));
        }
    }

    #[test]
    fn fig1_exact_divisor() {
        let d = fig1_data(&PeriodicSpec::new(3, 2, 0).unwrap());
        let support: Vec<usize> = (0..8).filter(|&j| d.after[j] > 1e-12).collect();
        assert_eq!(support, vec![0, 4]);
        assert_eq!(d.markers_after, vec![Rational::new(0, 1), Rational::new(4, 1)]);
    }

    #[test]
    fn empty_csv_has_header() {
        let mut buf = Vec::new();
        write_records(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), CSV_HEADER);
    }

    #[test]
    fn missing_fields_are_empty() {
        let rec = ExperimentRecord {
            experiment: "x".into(),
            kind: "random".into(),
            q: 3,
            r: None,
            l: None,
            seed: Some(9),
            g_before: 0.5,
            g_after: Some(0.75),
            delta_g: Some(0.25),
            g_accurate: None,
            g_simple: None,
            branch: None,
            restarts: 11,
            sweeps: 4,
        };
        let mut buf = Vec::new();
        write_records(std::slice::from_ref(&rec), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("x,random,3,,,9,0.5,0.75,0.25,,,,11,4"));
        assert_eq!(read_records(text.as_bytes()).unwrap(), vec![rec]);
    }

    #[test]
    fn run_config_merge() {
        let file = RunConfig::from_toml("restarts = 3\nseed = 5\ntol = 1e-8\n").unwrap();
        let flags = RunConfig {
            seed: Some(7),
            ..Default::default()
        };
        let merged = file.merged_with(&flags);
        assert_eq!(merged.restarts, Some(3));
        assert_eq!(merged.seed, Some(7));
        let opt = merged.optimizer();
        assert_eq!(opt.tol, 1e-8);
        assert!(opt.pair_step);
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }
}
