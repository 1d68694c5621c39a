//! Test-matrix generation and the timing/accuracy comparison of the sketched
//! pseudoinverse against the randomized-SVD and direct SVD pseudoinverses.
//!
//! Relative error is `‖Ĝ − A⁺‖_F / ‖A⁺‖_F` with `A⁺` from the direct SVD.
//! Only the method call is timed; matrix generation and the reference
//! pseudoinverse (when `direct` is not among the methods) are not.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;
use crate::random::{derive_seed, gaussian_matrix, rng_from_seed};
use crate::scalar::relative_residual;
use crate::sketch::{rsvd_pinv, sketch_product, SketchPair};
use crate::svd::{householder_qr, pinv_from_svd, svd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularValueProfile {
    /// σᵢ = κ^(−i/(n−1)), so σ₁ = 1, σₙ = 1/κ and consecutive ratios agree.
    #[default]
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandSvdSpec {
    pub n: usize,
    pub condition: f64,
    pub mode: SingularValueProfile,
    pub seed: u64,
}

impl RandSvdSpec {
    pub fn new(n: usize, condition: f64, seed: u64) -> Self {
        Self {
            n,
            condition,
            mode: SingularValueProfile::Geometric,
            seed,
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        match self.mode {
            SingularValueProfile::Geometric => (0..n)
                .map(|i| self.condition.powf(-(i as f64) / (n - 1) as f64))
                .collect(),
        }
    }
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
fn random_orthogonal(n: usize, g: &FloatMatrix) -> Result<FloatMatrix> {
    let (q, r) = householder_qr(g)?;
    Ok(FloatMatrix::from_fn(n, n, |i, j| {
        if r[(j, j)] < 0.0 {
            -q[(i, j)]
        } else {
            q[(i, j)]
        }
    }))
}

/// `U·diag(σ)·Vᵀ` with random orthogonal U, V and σ from `spec.singular_values()`.
pub fn gen_randsvd(spec: &RandSvdSpec) -> Result<FloatMatrix> {
    if spec.n < 2 {
        return Err(Error::InvalidArgument(format!("randsvd needs n >= 2, got {}", spec.n)));
    }
    if !(spec.condition >= 1.0 && spec.condition.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "condition number must be finite and >= 1, got {}",
            spec.condition
        )));
    }
    let n = spec.n;
    let mut rng = rng_from_seed(spec.seed);
    let gu = gaussian_matrix(n, n, &mut rng);
    let gv = gaussian_matrix(n, n, &mut rng);
    let u = random_orthogonal(n, &gu)?;
    let v = random_orthogonal(n, &gv)?;
    let sigma = spec.singular_values();
    let us = FloatMatrix::from_fn(n, n, |i, j| u[(i, j)] * sigma[j]);
    Ok(&us * &v.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BenchMethod {
    Rpinv,
    Rsvd,
    Direct,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 3] = [Self::Rpinv, Self::Rsvd, Self::Direct];

    fn stream(self) -> u64 {
        match self {
            Self::Rpinv => 1,
            Self::Rsvd => 2,
            Self::Direct => 3,
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rpinv => "rpinv",
            Self::Rsvd => "rsvd",
            Self::Direct => "direct",
        })
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rpinv" => Ok(Self::Rpinv),
            "rsvd" => Ok(Self::Rsvd),
            "direct" => Ok(Self::Direct),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Sketch fraction: p = q = ⌈α·n⌉.
    pub alpha: f64,
    pub condition: f64,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<BenchMethod>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![100, 200, 400],
            alpha: 0.4,
            condition: 1e8,
            trials: 5,
            seed: 42,
            methods: BenchMethod::ALL.to_vec(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("sizes must be non-empty and each >= 2".into()));
        }
        if !(self.condition >= 1.0 && self.condition.is_finite()) {
            return Err(Error::InvalidArgument(format!("condition must be >= 1, got {}", self.condition)));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("no methods selected".into()));
        }
        Ok(())
    }
}

/// `⌈α·n⌉`, kept within `1..=n`.
pub fn sketch_size(alpha: f64, n: usize) -> usize {
    ((alpha * n as f64).ceil() as usize).clamp(1, n)
}

/// FLOP proxy of the sketched method: the two sketch products plus SVD-style
/// pseudoinverses of the p×n and m×q sketches.
pub fn rpinv_cost(m: usize, n: usize, p: usize, q: usize) -> f64 {
    let (m, n, p, q) = (m as f64, n as f64, p as f64, q as f64);
    p * m * n + q * m * n + p * n * p.min(n) + m * q * m.min(q)
}

/// FLOP proxy of a direct SVD pseudoinverse.
pub fn direct_cost(m: usize, n: usize) -> f64 {
    (m.min(n) * m * n) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankFlag {
    Preserving,
    NotPreserving,
    NotApplicable,
    /// The method failed; the record is an error row.
    Failed,
}

impl fmt::Display for RankFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Preserving => "true",
            Self::NotPreserving => "false",
            Self::NotApplicable => "n/a",
            Self::Failed => "error",
        })
    }
}

impl FromStr for RankFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "true" => Ok(Self::Preserving),
            "false" => Ok(Self::NotPreserving),
            "n/a" => Ok(Self::NotApplicable),
            "error" => Ok(Self::Failed),
            other => Err(Error::InvalidArgument(format!("bad rank_preserving {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub method: BenchMethod,
    pub n: usize,
    pub alpha: f64,
    pub trial: usize,
    pub wall_time_seconds: f64,
    /// Infinite on error rows.
    pub relative_error: f64,
    pub rank_preserving: RankFlag,
}

impl BenchRecord {
    pub fn is_error(&self) -> bool {
        self.rank_preserving == RankFlag::Failed
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

struct Reference {
    pinv: FloatMatrix,
    rank: usize,
    seconds: f64,
}

fn reference_pinv(a: &FloatMatrix) -> Result<Reference> {
    let (dec, seconds) = timed(|| svd(a).map(|s| (pinv_from_svd(&s), s.numerical_rank)));
    let (pinv, rank) = dec?;
    Ok(Reference { pinv, rank, seconds })
}

fn run_cell(config: &BenchConfig, n: usize, trial: usize) -> Vec<BenchRecord> {
    let record = |method, wall_time_seconds, relative_error, rank_preserving| BenchRecord {
        method,
        n,
        alpha: config.alpha,
        trial,
        wall_time_seconds,
        relative_error,
        rank_preserving,
    };
    let failed = |method| record(method, 0.0, f64::INFINITY, RankFlag::Failed);

    let spec = RandSvdSpec::new(n, config.condition, derive_seed(config.seed, &[n as u64, trial as u64]));
    let reference = gen_randsvd(&spec).and_then(|a| reference_pinv(&a).map(|r| (a, r)));
    let Ok((a, reference)) = reference else {
        return config.methods.iter().map(|&m| failed(m)).collect();
    };

    let mut out = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let seed = derive_seed(config.seed, &[n as u64, trial as u64, method.stream()]);
        let rec = match method {
            BenchMethod::Direct => record(method, reference.seconds, 0.0, RankFlag::NotApplicable),
            BenchMethod::Rpinv => {
                let p = sketch_size(config.alpha, n);
                let (res, secs) = timed(|| {
                    SketchPair::gaussian(n, n, p, p, seed).and_then(|s| sketch_product(&a, &s))
                });
                match res {
                    Ok(prod) => {
                        let flag = if prod.rank_pta == reference.rank && prod.rank_aq == reference.rank {
                            RankFlag::Preserving
                        } else {
                            RankFlag::NotPreserving
                        };
                        record(method, secs, relative_residual(&prod.approx, &reference.pinv), flag)
                    }
                    Err(_) => failed(method),
                }
            }
            BenchMethod::Rsvd => {
                let s = reference.rank.max(1);
                let (res, secs) = timed(|| rsvd_pinv(&a, s, seed));
                match res {
                    Ok(g) => record(
                        method,
                        secs,
                        relative_residual(&g, &reference.pinv),
                        RankFlag::NotApplicable,
                    ),
                    Err(_) => failed(method),
                }
            }
        };
        out.push(rec);
    }
    out
}

/// Runs every (size, trial, method) cell. Each cell derives its own seeds
/// from (master seed, n, trial, method), so results do not depend on the
/// order cells run in; records come back sorted by (method, n, trial).
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let mut records: Vec<BenchRecord> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .flat_map(|(n, t)| run_cell(config, n, t))
        .collect();
    records.sort_by_key(|r| (r.method, r.n, r.trial));
    Ok(records)
}

pub const CSV_HEADER: [&str; 7] = [
    "method",
    "n",
    "alpha",
    "trial",
    "wall_time_seconds",
    "relative_error",
    "rank_preserving",
];

fn csv_err(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_err(path, e))?;
    for r in records {
        w.write_record([
            r.method.to_string(),
            r.n.to_string(),
            r.alpha.to_string(),
            r.trial.to_string(),
            format!("{:e}", r.wall_time_seconds),
            format!("{:e}", r.relative_error),
            r.rank_preserving.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header in {}", path.display()),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = i + 2;
        let field = |k: usize| row.get(k).ok_or_else(|| Error::Parse { line, msg: "short row".into() });
        let bad = |what: &str| Error::Parse {
            line,
            msg: format!("bad {what}"),
        };
        out.push(BenchRecord {
            method: field(0)?.parse()?,
            n: field(1)?.parse().map_err(|_| bad("n"))?,
            alpha: field(2)?.parse().map_err(|_| bad("alpha"))?,
            trial: field(3)?.parse().map_err(|_| bad("trial"))?,
            wall_time_seconds: field(4)?.parse().map_err(|_| bad("wall_time_seconds"))?,
            relative_error: field(5)?.parse().map_err(|_| bad("relative_error"))?,
            rank_preserving: field(6)?.parse()?,
        });
    }
    Ok(out)
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: BenchMethod,
    pub n: usize,
    pub alpha: f64,
    pub median_wall_time_seconds: f64,
    pub median_relative_error: f64,
    pub trials: usize,
}

/// Per-(method, n) medians over successful trials.
pub fn summarize(records: &[BenchRecord]) -> Vec<MethodSummary> {
    let mut keys: Vec<(BenchMethod, usize)> = records.iter().map(|r| (r.method, r.n)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(method, n)| {
            let cell: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.method == method && r.n == n && !r.is_error())
                .collect();
            let mut times: Vec<f64> = cell.iter().map(|r| r.wall_time_seconds).collect();
            let mut errors: Vec<f64> = cell.iter().map(|r| r.relative_error).collect();
            Some(MethodSummary {
                method,
                n,
                alpha: cell.first()?.alpha,
                median_wall_time_seconds: median(&mut times)?,
                median_relative_error: median(&mut errors)?,
                trials: cell.len(),
            })
        })
        .collect()
}

pub fn emit_plot_data(summaries: &[MethodSummary], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record([
        "method",
        "n",
        "alpha",
        "median_wall_time_seconds",
        "median_relative_error",
        "trials",
    ])
    .map_err(|e| csv_err(path, e))?;
    for s in summaries {
        w.write_record([
            s.method.to_string(),
            s.n.to_string(),
            s.alpha.to_string(),
            format!("{:e}", s.median_wall_time_seconds),
            format!("{:e}", s.median_relative_error),
            s.trials.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_condition_gives_orthogonal_matrix() {
        let a = gen_randsvd(&RandSvdSpec::new(8, 1.0, 3)).unwrap();
        let gram = &a.transpose() * &a;
        assert!((&gram - &FloatMatrix::identity(8)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn prescribed_condition_number() {
        let a = gen_randsvd(&RandSvdSpec::new(10, 1e8, 17)).unwrap();
        let s = svd(&a).unwrap().singular_values;
        let ratio = s[0] / s[9];
        assert!((ratio / 1e8 - 1.0).abs() < 0.01, "ratio {ratio:e}");
    }

    #[test]
    fn randsvd_is_deterministic_and_validated() {
        let spec = RandSvdSpec::new(6, 10.0, 5);
        assert_eq!(gen_randsvd(&spec).unwrap(), gen_randsvd(&spec).unwrap());
        assert!(gen_randsvd(&RandSvdSpec::new(1, 10.0, 5)).is_err());
        assert!(gen_randsvd(&RandSvdSpec::new(4, 0.5, 5)).is_err());
    }

    #[test]
    fn geometric_profile() {
        let s = RandSvdSpec::new(5, 1e4, 0).singular_values();
        assert_eq!(s[0], 1.0);
        assert!((s[4] - 1e-4).abs() < 1e-16);
        for w in s.windows(3) {
            assert!((w[0] / w[1] - w[1] / w[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BenchConfig::default().validate().is_ok());
        let bad = [
            BenchConfig { alpha: 0.0, ..Default::default() },
            BenchConfig { alpha: 1.5, ..Default::default() },
            BenchConfig { trials: 0, ..Default::default() },
            BenchConfig { sizes: vec![], ..Default::default() },
            BenchConfig { methods: vec![], ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn direct_only_has_zero_error() {
        let config = BenchConfig {
            sizes: vec![6, 9],
            trials: 2,
            methods: vec![BenchMethod::Direct],
            ..Default::default()
        };
        let records = run_bench(&config).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.relative_error == 0.0));
    }

    #[test]
    fn sketch_sizes() {
        assert_eq!(sketch_size(0.4, 100), 40);
        assert_eq!(sketch_size(0.1, 101), 11);
        assert_eq!(sketch_size(1.0, 7), 7);
        assert_eq!(sketch_size(1e-9, 7), 1);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&mut []), None);
    }

    #[test]
    fn method_and_flag_names_parse() {
        for m in BenchMethod::ALL {
            assert_eq!(m.to_string().parse::<BenchMethod>().unwrap(), m);
        }
        for f in [RankFlag::Preserving, RankFlag::NotPreserving, RankFlag::NotApplicable, RankFlag::Failed] {
            assert_eq!(f.to_string().parse::<RankFlag>().unwrap(), f);
        }
    }
}
