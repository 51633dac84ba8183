//! Experiment orchestration: replicate ensembles, collect fluctuation
//! statistics, sample the theoretical limits, and compare distributions.
//!
//! Determinism contract: a run is a pure function of its
//! [`ExperimentConfig`]. Replication `r` draws from the counter-derived
//! streams `(master_seed, r, lane)`, results are collected in replication
//! order, and reductions are sequential, so the worker count changes wall
//! time and nothing else.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ensembles::{sample_sample_cov, sample_wigner, SampleCovSpec, WignerSpec};
use crate::limit_laws::LimitLaw;
use crate::rigidity::{sc_rigidity, wigner_rigidity};
use crate::rng::{replica_stream, StreamLane};
use crate::sampling::{grid_variance, sampling_clt_statistic};
use crate::spectra::{alpha, eigenvalues_sym, linear_stat, partial_stat_unordered, Spectrum};
use crate::stats::{ks_one_sample, mean, normal_cdf, raw_moments, sample_variance};
use crate::test_functions::TestFunction;
use crate::variance::{sc_variance, wigner_variance, ScSecondTerm, VarianceError};

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error("invalid experiment config:\n{}", violations.join("\n"))]
    InvalidConfig { violations: Vec<String> },
    #[error("eigensolver failed: {0}")]
    Spectra(#[from] crate::spectra::SpectraError),
    #[error("variance functional failed: {0}")]
    Variance(#[from] VarianceError),
}

/// Which ensemble an experiment replicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Wigner(WignerSpec),
    SampleCovariance(SampleCovSpec),
}

impl EnsembleSpec {
    pub fn n(&self) -> usize {
        match self {
            EnsembleSpec::Wigner(w) => w.n,
            EnsembleSpec::SampleCovariance(s) => s.n,
        }
    }

    pub fn law(&self) -> LimitLaw {
        match self {
            EnsembleSpec::Wigner(_) => LimitLaw::Semicircle,
            EnsembleSpec::SampleCovariance(_) => LimitLaw::MarchenkoPastur,
        }
    }

    /// Homogeneous fourth moment entering the variance functionals.
    pub fn m4(&self) -> f64 {
        match self {
            EnsembleSpec::Wigner(w) => w.offdiag.m4(),
            EnsembleSpec::SampleCovariance(s) => s.entry.m4(),
        }
    }

    fn spectrum(&self, master_seed: u64, replication: u64) -> Result<Spectrum<f64>, MonteCarloError> {
        let mut rng = replica_stream(master_seed, replication, StreamLane::Matrix);
        let matrix = match self {
            EnsembleSpec::Wigner(w) => sample_wigner::<f64, _>(w, &mut rng),
            EnsembleSpec::SampleCovariance(s) => sample_sample_cov::<f64, _>(s, &mut rng),
        };
        Ok(eigenvalues_sym(&matrix)?)
    }

    /// Limiting variance of the full linear statistic for test function `f`.
    pub fn theory_variance(&self, f: &TestFunction, nodes: usize) -> Result<f64, VarianceError> {
        match self {
            EnsembleSpec::Wigner(w) => {
                Ok(wigner_variance(f, w.offdiag.m4(), w.sigma2(), nodes)?.total)
            }
            EnsembleSpec::SampleCovariance(s) => {
                Ok(sc_variance(f, s.entry.m4(), nodes, ScSecondTerm::WithTestFunction)?.total)
            }
        }
    }
}

/// How the number of dropped eigenvalues scales with `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KRule {
    Fixed { k: usize },
    GrowingSqrt { multiple: f64 },
    Proportional { ratio: f64 },
}

impl KRule {
    pub fn resolve(&self, n: usize) -> usize {
        match self {
            KRule::Fixed { k } => *k,
            KRule::GrowingSqrt { multiple } => {
                ((multiple * (n as f64).sqrt()).round() as usize).clamp(1, n.saturating_sub(1))
            }
            KRule::Proportional { ratio } => {
                ((ratio * n as f64).round() as usize).clamp(1, n.saturating_sub(1))
            }
        }
    }
}

/// Which comparison an experiment runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonMode {
    FullLinear,
    FixedK,
    GrowingK,
    FixedTail,
    Rigidity,
    SamplingClt,
}

fn default_nodes() -> usize {
    crate::variance::DEFAULT_NODES
}

fn default_ks_threshold() -> f64 {
    0.05
}

fn default_variance_band() -> (f64, f64) {
    (0.85, 1.15)
}

/// A complete, reproducible experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub comparison: ComparisonMode,
    pub ensemble: EnsembleSpec,
    /// Test function name from the catalog.
    pub f: String,
    pub k_rule: KRule,
    pub replications: usize,
    /// Draws from the simulated limit (defaults to `replications`).
    #[serde(default)]
    pub limit_replications: Option<usize>,
    pub master_seed: u64,
    /// Quadrature nodes per axis for the theoretical variances.
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_ks_threshold")]
    pub ks_threshold: f64,
    #[serde(default = "default_variance_band")]
    pub variance_band: (f64, f64),
}

impl ExperimentConfig {
    pub fn test_function(&self) -> Option<TestFunction> {
        TestFunction::from_name(&self.f)
    }

    /// Validate, listing every violated constraint.
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        let mut violations = Vec::new();
        let n = self.ensemble.n();
        if self.replications < 2 {
            violations.push(format!("replications must be >= 2, got {}", self.replications));
        }
        let f = self.test_function();
        if f.is_none() {
            violations.push(format!("unknown test function '{}'", self.f));
        }
        if let Some(f) = &f {
            if !f.bounded()
                && !matches!(self.comparison, ComparisonMode::Rigidity | ComparisonMode::SamplingClt)
            {
                violations.push(format!("test function '{}' is unbounded on the support", self.f));
            }
        }
        if !(self.ks_threshold > 0.0 && self.ks_threshold < 1.0) {
            violations.push(format!("ks_threshold must lie in (0,1), got {}", self.ks_threshold));
        }
        let (lo, hi) = self.variance_band;
        if !(lo > 0.0 && lo <= 1.0 && hi >= 1.0) {
            violations.push(format!("variance_band must bracket 1, got ({lo}, {hi})"));
        }
        if self.nodes < 32 {
            violations.push(format!("nodes must be >= 32, got {}", self.nodes));
        }
        let k = self.k_rule.resolve(n);
        match self.comparison {
            ComparisonMode::FixedK | ComparisonMode::SamplingClt => {
                if !matches!(self.k_rule, KRule::Fixed { .. }) {
                    violations.push(format!(
                        "{:?} requires a fixed k rule, got {:?}",
                        self.comparison, self.k_rule
                    ));
                }
                if k >= n {
                    violations.push(format!("k must satisfy k < n, got k={k}, n={n}"));
                }
                if matches!(self.comparison, ComparisonMode::SamplingClt) && k == 0 {
                    violations.push("sampling comparison requires k >= 1".to_string());
                }
            }
            ComparisonMode::FixedTail => {
                if !matches!(self.k_rule, KRule::Fixed { .. }) {
                    violations.push(format!(
                        "fixed-tail comparison requires a fixed k rule, got {:?}",
                        self.k_rule
                    ));
                }
                if k > n {
                    violations.push(format!("k must satisfy k <= n, got k={k}, n={n}"));
                }
            }
            ComparisonMode::GrowingK => {
                let min_side = k.min(n - k);
                let recommended = 4.0 * (n as f64).sqrt();
                if (min_side as f64) < recommended {
                    violations.push(format!(
                        "growing-k comparison requires min(k, n-k) >= 4 sqrt(n) = {recommended:.1}, got {min_side}"
                    ));
                }
            }
            ComparisonMode::FullLinear | ComparisonMode::Rigidity => {}
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(MonteCarloError::InvalidConfig { violations })
        }
    }
}

/// Samples from one side of a comparison, with summary statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    mean: f64,
    variance: f64,
    #[serde(skip)]
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(samples: Vec<f64>) -> Self {
        assert!(samples.len() >= 2, "need at least two samples");
        let mean = mean(&samples);
        let variance = sample_variance(&samples);
        let mut sorted = samples.clone();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("samples must not be NaN"));
        EmpiricalDistribution { samples, mean, variance, sorted }
    }

    /// Center by the empirical mean (the exact expectations have no closed
    /// form at finite `n`). A second pass removes the O(eps) residual of the
    /// first subtraction.
    pub fn centered(mut samples: Vec<f64>) -> Self {
        let m = mean(&samples);
        samples.iter_mut().for_each(|x| *x -= m);
        let residual = mean(&samples);
        samples.iter_mut().for_each(|x| *x -= residual);
        Self::from_samples(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Right-continuous empirical CDF.
    pub fn ecdf(&self, x: f64) -> f64 {
        let pos = self.sorted.partition_point(|&v| v <= x);
        pos as f64 / self.sorted.len() as f64
    }
}

/// Distributional comparison summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub ks_distance: f64,
    /// Empirical over theoretical variance.
    pub variance_ratio: f64,
    /// Raw sample moments of orders 1..=4 of the primary side.
    pub moment_table: [f64; 4],
    pub pass: bool,
}

impl ComparisonReport {
    pub fn build(
        emp: &EmpiricalDistribution,
        ks_distance: f64,
        theory_variance: f64,
        config: &ExperimentConfig,
    ) -> Self {
        let variance_ratio = emp.variance() / theory_variance;
        let (lo, hi) = config.variance_band;
        let pass =
            ks_distance <= config.ks_threshold && variance_ratio >= lo && variance_ratio <= hi;
        ComparisonReport {
            ks_distance,
            variance_ratio,
            moment_table: raw_moments(emp.samples()),
            pass,
        }
    }
}

fn with_pool<R: Send>(workers: usize, job: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool construction")
            .install(job)
    }
}

fn collect_replications<F>(
    replications: usize,
    workers: usize,
    job: F,
) -> Result<Vec<f64>, MonteCarloError>
where
    F: Fn(u64) -> Result<f64, MonteCarloError> + Sync + Send,
{
    with_pool(workers, || {
        (0..replications as u64).into_par_iter().map(&job).collect::<Result<Vec<f64>, _>>()
    })
}

/// Centered full linear statistics `L_n[f]` over the configured replications.
pub fn run_full_linear(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<EmpiricalDistribution, MonteCarloError> {
    config.validate()?;
    let f = config.test_function().expect("validated");
    let values = collect_replications(config.replications, workers, |r| {
        let spectrum = config.ensemble.spectrum(config.master_seed, r)?;
        Ok(linear_stat(&spectrum, &f))
    })?;
    Ok(EmpiricalDistribution::centered(values))
}

/// Fixed-k partial statistics against the simulated convolution limit:
/// centered `S_{n,k}[f]` on one side, `G + D` on the other with
/// `G ~ N(0, v^2[f])` independent of `D = -sum_{i<=k} (f(psi_i) - E f(psi))`.
pub fn run_partial_fixed_k(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(EmpiricalDistribution, EmpiricalDistribution), MonteCarloError> {
    config.validate()?;
    let f = config.test_function().expect("validated");
    let n = config.ensemble.n();
    let k = config.k_rule.resolve(n);

    let matrix_side = collect_replications(config.replications, workers, |r| {
        let spectrum = config.ensemble.spectrum(config.master_seed, r)?;
        let mut perm = replica_stream(config.master_seed, r, StreamLane::Permutation);
        let stat = partial_stat_unordered(&spectrum, &f, k, &mut perm)?;
        Ok(stat.value)
    })?;

    let law = config.ensemble.law();
    let v2 = config.ensemble.theory_variance(&f, config.nodes)?;
    let expect_f: f64 = law.expect_f(&f);
    let limit_reps = config.limit_replications.unwrap_or(config.replications);
    let limit_side = collect_replications(limit_reps, workers, |r| {
        let mut rng = replica_stream(config.master_seed, r, StreamLane::LimitDraw);
        let gaussian: f64 = rng.sample(StandardNormal);
        let g = gaussian * v2.sqrt();
        let mut d = 0.0;
        for _ in 0..k {
            let psi: f64 = law.draw(&mut rng);
            d -= f.eval(psi) - expect_f;
        }
        Ok(g + d)
    })?;

    Ok((EmpiricalDistribution::centered(matrix_side), EmpiricalDistribution::from_samples(limit_side)))
}

/// Growing-k partial statistics, `alpha`-scaled and centered; returns the
/// samples together with the limiting variance `Var f(psi)` of the reference
/// normal.
pub fn run_partial_growing_k(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(EmpiricalDistribution, f64), MonteCarloError> {
    config.validate()?;
    let f = config.test_function().expect("validated");
    let n = config.ensemble.n();
    let k = config.k_rule.resolve(n);
    let scale: f64 = alpha(n, k);

    let values = collect_replications(config.replications, workers, |r| {
        let spectrum = config.ensemble.spectrum(config.master_seed, r)?;
        let mut perm = replica_stream(config.master_seed, r, StreamLane::Permutation);
        let stat = partial_stat_unordered(&spectrum, &f, k, &mut perm)?;
        Ok(scale * stat.value)
    })?;

    let d2: f64 = config.ensemble.law().var_f(&f);
    Ok((EmpiricalDistribution::centered(values), d2))
}

/// Fixed-tail comparison: `sum_{i=1}^l f(mu_i)` for `l = n - k` against the
/// simulated `l`-fold sums of independent `f(psi)`; both sides uncentered.
pub fn run_remark_fixed_tail(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(EmpiricalDistribution, EmpiricalDistribution, ComparisonReport), MonteCarloError> {
    config.validate()?;
    let f = config.test_function().expect("validated");
    let n = config.ensemble.n();
    let k = config.k_rule.resolve(n);

    let matrix_side = collect_replications(config.replications, workers, |r| {
        let spectrum = config.ensemble.spectrum(config.master_seed, r)?;
        let mut perm = replica_stream(config.master_seed, r, StreamLane::Permutation);
        let stat = partial_stat_unordered(&spectrum, &f, k, &mut perm)?;
        Ok(stat.value)
    })?;

    let law = config.ensemble.law();
    let l = n - k;
    let limit_reps = config.limit_replications.unwrap_or(config.replications);
    let limit_side = collect_replications(limit_reps, workers, |r| {
        let mut rng = replica_stream(config.master_seed, r, StreamLane::LimitDraw);
        let mut sum = 0.0;
        for _ in 0..l {
            let psi: f64 = law.draw(&mut rng);
            sum += f.eval(psi);
        }
        Ok(sum)
    })?;

    let emp = EmpiricalDistribution::from_samples(matrix_side);
    let limit = EmpiricalDistribution::from_samples(limit_side);
    let ks = crate::stats::ks_two_sample(emp.samples(), limit.samples());
    let report = ComparisonReport::build(&emp, ks, limit.variance().max(f64::MIN_POSITIVE), config);
    Ok((emp, limit, report))
}

/// Rigidity run: distribution of the weighted maximum deviation from the
/// classical locations.
pub fn run_rigidity(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<EmpiricalDistribution, MonteCarloError> {
    config.validate()?;
    let n = config.ensemble.n();
    let law = config.ensemble.law();
    let locations = law.classical_locations::<f64>(n);
    let is_wigner = matches!(config.ensemble, EnsembleSpec::Wigner(_));

    let values = collect_replications(config.replications, workers, |r| {
        let spectrum = config.ensemble.spectrum(config.master_seed, r)?;
        let profile = if is_wigner {
            wigner_rigidity(&spectrum, &locations)
        } else {
            sc_rigidity(&spectrum, &locations)
        }
        .expect("locations match the spectrum by construction");
        Ok(profile.max_weighted)
    })?;

    Ok(EmpiricalDistribution::from_samples(values))
}

/// Output of a sampling CLT run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingCltReport {
    pub variance_empirical: f64,
    pub variance_exact: f64,
    pub ks_distance: f64,
    pub pass: bool,
}

/// Sampling-without-replacement CLT: empirical variance and KS distance of
/// the `alpha`-scaled statistic against `N(0, Var g(zeta_1))`.
pub fn run_sampling_clt(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(EmpiricalDistribution, SamplingCltReport), MonteCarloError> {
    config.validate()?;
    let g = config.test_function().expect("validated");
    let n = config.ensemble.n();
    let k = config.k_rule.resolve(n);

    let values = collect_replications(config.replications, workers, |r| {
        let mut rng = replica_stream(config.master_seed, r, StreamLane::Subset);
        Ok(sampling_clt_statistic(n, k, &g, &mut rng))
    })?;
    let emp = EmpiricalDistribution::from_samples(values);
    let variance_exact = grid_variance(n, &g);
    let ks = ks_one_sample(emp.samples(), |x| normal_cdf(x, variance_exact));
    let (lo, hi) = config.variance_band;
    let ratio = emp.variance() / variance_exact;
    let report = SamplingCltReport {
        variance_empirical: emp.variance(),
        variance_exact,
        ks_distance: ks,
        pass: ks <= config.ks_threshold && ratio >= lo && ratio <= hi,
    };
    Ok((emp, report))
}

/// Median of a sample.
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    let mut v = xs.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("median of NaN-free samples"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
