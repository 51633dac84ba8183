//! Random matrix ensembles with configurable entry laws.
//!
//! Wigner matrices are `M = W/sqrt(n)` with independent entries on and above
//! the diagonal (unit variance off the diagonal, variance `sigma^2` on it);
//! sample covariance matrices are `A = X^T X / n` with independent symmetric
//! unit-variance entries. Scaling is applied at generation, so downstream
//! code only ever sees `M` and `A`.
//!
//! The module also carries the moment side-conditions those ensembles are
//! tested under: a truncation-level deficit functional, a sub-Gaussian
//! symmetric moment check, and the truncate-then-mix entry surgery that
//! replaces an entry law by a bounded one with the same mean and second
//! moment.

use ndarray::Array2;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::adaptive_simpson;
use crate::real::Real;
use crate::rng::seeded;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("invalid entry distribution: {0}")]
    InvalidDistribution(String),
    #[error("off-diagonal law must have unit variance, got {0}")]
    OffDiagonalVariance(f64),
    #[error("sample covariance entries must be symmetric with unit variance")]
    EntryLawConstraint,
    #[error("matrix size must be positive")]
    EmptyMatrix,
    #[error(
        "mixture probability {0} exceeds 1; the truncation level is too small for this entry law"
    )]
    MixtureProbability(f64),
}

/// A zero-mean scalar entry law with exact moment access.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EntryDistribution {
    /// `N(0, variance)`.
    Gaussian { variance: f64 },
    /// `+-sqrt(variance)` with equal probability.
    Rademacher { variance: f64 },
    /// Uniform on `[-sqrt(3 variance), sqrt(3 variance)]`.
    SymmetricUniform { variance: f64 },
    /// Unit-variance symmetric three-point law `{-sqrt(m4), 0, +sqrt(m4)}`
    /// with `P(+-sqrt(m4)) = 1/(2 m4)`; sweeps the fourth moment while
    /// keeping the variance pinned at one. `m4 = 1` degenerates to the
    /// Rademacher law.
    ScaledTwoPoint { m4: f64 },
    /// Finite discrete law given as `(value, probability)` pairs.
    Custom { outcomes: Vec<(f64, f64)> },
}

impl EntryDistribution {
    pub fn standard_gaussian() -> Self {
        EntryDistribution::Gaussian { variance: 1.0 }
    }

    pub fn rademacher() -> Self {
        EntryDistribution::Rademacher { variance: 1.0 }
    }

    /// Check structural constraints: probabilities form a distribution, the
    /// mean is zero, variances are positive.
    pub fn validate(&self) -> Result<(), EnsembleError> {
        let err = |m: &str| Err(EnsembleError::InvalidDistribution(m.into()));
        match self {
            EntryDistribution::Gaussian { variance }
            | EntryDistribution::Rademacher { variance }
            | EntryDistribution::SymmetricUniform { variance } => {
                if !(variance.is_finite() && *variance > 0.0) {
                    return err("variance must be positive and finite");
                }
            }
            EntryDistribution::ScaledTwoPoint { m4 } => {
                if !(m4.is_finite() && *m4 >= 1.0) {
                    return err("fourth moment must satisfy m4 >= 1");
                }
            }
            EntryDistribution::Custom { outcomes } => {
                if outcomes.is_empty() {
                    return err("empty outcome table");
                }
                let total: f64 = outcomes.iter().map(|&(_, p)| p).sum();
                if outcomes.iter().any(|&(v, p)| !v.is_finite() || !(0.0..=1.0).contains(&p))
                    || (total - 1.0).abs() > 1e-12
                {
                    return err("outcome probabilities must be in [0,1] and sum to 1");
                }
                let mean: f64 = outcomes.iter().map(|&(v, p)| v * p).sum();
                if mean.abs() > 1e-12 {
                    return err("entry laws must have zero mean");
                }
            }
        }
        Ok(())
    }

    pub fn variance(&self) -> f64 {
        match self {
            EntryDistribution::Gaussian { variance }
            | EntryDistribution::Rademacher { variance }
            | EntryDistribution::SymmetricUniform { variance } => *variance,
            EntryDistribution::ScaledTwoPoint { .. } => 1.0,
            EntryDistribution::Custom { outcomes } => {
                outcomes.iter().map(|&(v, p)| v * v * p).sum()
            }
        }
    }

    /// Fourth moment `E w^4`.
    pub fn m4(&self) -> f64 {
        self.abs_moment(4)
    }

    /// Signed moment `E w^p`.
    pub fn moment(&self, p: u32) -> f64 {
        if self.is_symmetric() && p % 2 == 1 {
            return 0.0;
        }
        match self {
            EntryDistribution::Custom { outcomes } => {
                outcomes.iter().map(|&(v, q)| v.powi(p as i32) * q).sum()
            }
            _ => self.abs_moment(p),
        }
    }

    /// Absolute moment `E |w|^p`.
    pub fn abs_moment(&self, p: u32) -> f64 {
        match self {
            EntryDistribution::Gaussian { variance } => {
                // E|w|^p = (p-1) variance E|w|^{p-2}, seeded by
                // E|w|^0 = 1 and E|w|^1 = sqrt(2 variance / pi).
                let mut even = 1.0;
                let mut odd = (2.0 * variance / std::f64::consts::PI).sqrt();
                if p == 0 {
                    return even;
                }
                if p == 1 {
                    return odd;
                }
                for q in 2..=p {
                    let next = (q as f64 - 1.0) * variance * if q % 2 == 0 { even } else { odd };
                    if q % 2 == 0 {
                        even = next;
                    } else {
                        odd = next;
                    }
                }
                if p % 2 == 0 {
                    even
                } else {
                    odd
                }
            }
            EntryDistribution::Rademacher { variance } => variance.sqrt().powi(p as i32),
            EntryDistribution::SymmetricUniform { variance } => {
                let a = (3.0 * variance).sqrt();
                a.powi(p as i32) / (p as f64 + 1.0)
            }
            EntryDistribution::ScaledTwoPoint { m4 } => m4.powf(p as f64 / 2.0 - 1.0),
            EntryDistribution::Custom { outcomes } => {
                outcomes.iter().map(|&(v, q)| v.abs().powi(p as i32) * q).sum()
            }
        }
    }

    /// Tail moment `E[|w|^p 1_{|w| > threshold}]`; exact for the discrete
    /// and uniform laws, adaptive quadrature for the Gaussian.
    pub fn tail_abs_moment(&self, p: u32, threshold: f64) -> f64 {
        assert!(threshold > 0.0, "threshold must be positive");
        match self {
            EntryDistribution::Gaussian { variance } => {
                let sigma = variance.sqrt();
                if threshold > 40.0 * sigma {
                    return 0.0;
                }
                let density = move |x: f64| {
                    (-0.5 * x * x / variance).exp()
                        / (2.0 * std::f64::consts::PI * variance).sqrt()
                };
                let integrand = move |x: f64| x.powi(p as i32) * density(x);
                2.0 * adaptive_simpson(&integrand, threshold, 40.0 * sigma, 1e-14)
            }
            EntryDistribution::SymmetricUniform { variance } => {
                let a = (3.0 * variance).sqrt();
                if threshold >= a {
                    0.0
                } else {
                    (a.powi(p as i32 + 1) - threshold.powi(p as i32 + 1))
                        / (a * (p as f64 + 1.0))
                }
            }
            EntryDistribution::Rademacher { .. }
            | EntryDistribution::ScaledTwoPoint { .. }
            | EntryDistribution::Custom { .. } => self
                .outcome_table()
                .iter()
                .filter(|&&(v, _)| v.abs() > threshold)
                .map(|&(v, q)| v.abs().powi(p as i32) * q)
                .sum(),
        }
    }

    /// Signed tail moment `E[w 1_{|w| > threshold}]`; zero for symmetric laws.
    fn tail_signed_mean(&self, threshold: f64) -> f64 {
        if self.is_symmetric() {
            return 0.0;
        }
        self.outcome_table()
            .iter()
            .filter(|&&(v, _)| v.abs() > threshold)
            .map(|&(v, q)| v * q)
            .sum()
    }

    fn outcome_table(&self) -> Vec<(f64, f64)> {
        match self {
            EntryDistribution::Rademacher { variance } => {
                let s = variance.sqrt();
                vec![(-s, 0.5), (s, 0.5)]
            }
            EntryDistribution::ScaledTwoPoint { m4 } => {
                let s = m4.sqrt();
                let p = 1.0 / (2.0 * m4);
                vec![(-s, p), (0.0, 1.0 - 2.0 * p), (s, p)]
            }
            EntryDistribution::Custom { outcomes } => outcomes.clone(),
            _ => panic!("outcome table only exists for discrete laws"),
        }
    }

    /// Whether the law is symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        match self {
            EntryDistribution::Custom { outcomes } => {
                let mut table: Vec<(f64, f64)> = outcomes.iter().filter(|&&(_, p)| p > 0.0).copied().collect();
                table.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let m = table.len();
                (0..m).all(|i| {
                    let (v, p) = table[i];
                    let (w, q) = table[m - 1 - i];
                    (v + w).abs() <= 1e-12 && (p - q).abs() <= 1e-12
                })
            }
            _ => true,
        }
    }

    /// One draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            EntryDistribution::Gaussian { variance } => {
                let z: f64 = rng.sample(StandardNormal);
                z * variance.sqrt()
            }
            EntryDistribution::Rademacher { variance } => {
                let s = variance.sqrt();
                if rng.random::<bool>() {
                    s
                } else {
                    -s
                }
            }
            EntryDistribution::SymmetricUniform { variance } => {
                let a = (3.0 * variance).sqrt();
                (2.0 * rng.random::<f64>() - 1.0) * a
            }
            EntryDistribution::ScaledTwoPoint { m4 } => {
                let u: f64 = rng.random();
                let p = 1.0 / (2.0 * m4);
                if u < p {
                    m4.sqrt()
                } else if u < 2.0 * p {
                    -m4.sqrt()
                } else {
                    0.0
                }
            }
            EntryDistribution::Custom { outcomes } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(v, p) in outcomes {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                outcomes.last().expect("validated nonempty").0
            }
        }
    }
}

/// Symmetry class of a Wigner matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    RealSymmetric,
    ComplexHermitian,
}

/// Specification of a Wigner ensemble `M = W/sqrt(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSpec {
    pub n: usize,
    pub offdiag: EntryDistribution,
    pub diag: EntryDistribution,
    pub symmetry_class: SymmetryClass,
}

impl WignerSpec {
    pub fn new(
        n: usize,
        offdiag: EntryDistribution,
        diag: EntryDistribution,
    ) -> Result<Self, EnsembleError> {
        if n == 0 {
            return Err(EnsembleError::EmptyMatrix);
        }
        offdiag.validate()?;
        diag.validate()?;
        if (offdiag.variance() - 1.0).abs() > 1e-12 {
            return Err(EnsembleError::OffDiagonalVariance(offdiag.variance()));
        }
        Ok(WignerSpec { n, offdiag, diag, symmetry_class: SymmetryClass::RealSymmetric })
    }

    /// Gaussian entries with unit variance everywhere (diagonal included).
    pub fn gaussian(n: usize) -> Self {
        WignerSpec::new(
            n,
            EntryDistribution::standard_gaussian(),
            EntryDistribution::standard_gaussian(),
        )
        .expect("standard Gaussian spec is valid")
    }

    /// Diagonal entry variance `sigma^2`.
    pub fn sigma2(&self) -> f64 {
        self.diag.variance()
    }
}

/// Specification of a sample covariance ensemble `A = X^T X / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleCovSpec {
    pub n: usize,
    pub entry: EntryDistribution,
}

impl SampleCovSpec {
    pub fn new(n: usize, entry: EntryDistribution) -> Result<Self, EnsembleError> {
        if n == 0 {
            return Err(EnsembleError::EmptyMatrix);
        }
        entry.validate()?;
        if !entry.is_symmetric() || (entry.variance() - 1.0).abs() > 1e-12 {
            return Err(EnsembleError::EntryLawConstraint);
        }
        Ok(SampleCovSpec { n, entry })
    }

    pub fn gaussian(n: usize) -> Self {
        SampleCovSpec::new(n, EntryDistribution::standard_gaussian())
            .expect("standard Gaussian spec is valid")
    }
}

/// Draw a real symmetric Wigner matrix `M = W/sqrt(n)`. Entries above the
/// diagonal are filled row by row from the stream, so the output is a
/// deterministic function of `(spec, rng state)` and is exactly symmetric.
pub fn sample_wigner<T: Real, R: Rng + ?Sized>(spec: &WignerSpec, rng: &mut R) -> Array2<T> {
    let n = spec.n;
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = Array2::<T>::zeros((n, n));
    for i in 0..n {
        m[(i, i)] = T::of(spec.diag.sample(rng) * scale);
        for j in (i + 1)..n {
            let w = T::of(spec.offdiag.sample(rng) * scale);
            m[(i, j)] = w;
            m[(j, i)] = w;
        }
    }
    m
}

/// As [`sample_wigner`] from a bare seed.
pub fn sample_wigner_seeded<T: Real>(spec: &WignerSpec, seed: u64) -> Array2<T> {
    sample_wigner(spec, &mut seeded(seed))
}

/// Draw a complex Hermitian Wigner matrix. Off-diagonal entries have
/// independent real and imaginary parts of variance 1/2 each; the diagonal
/// is real with the diagonal law.
pub fn sample_wigner_complex<T: Real, R: Rng + ?Sized>(
    spec: &WignerSpec,
    rng: &mut R,
) -> Array2<Complex<T>> {
    let n = spec.n;
    let scale = 1.0 / (n as f64).sqrt();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Array2::<Complex<T>>::zeros((n, n));
    for i in 0..n {
        m[(i, i)] = Complex::new(T::of(spec.diag.sample(rng) * scale), T::zero());
        for j in (i + 1)..n {
            let re = spec.offdiag.sample(rng) * half * scale;
            let im = spec.offdiag.sample(rng) * half * scale;
            m[(i, j)] = Complex::new(T::of(re), T::of(im));
            m[(j, i)] = Complex::new(T::of(re), T::of(-im));
        }
    }
    m
}

/// Draw a sample covariance matrix `A = X^T X / n`.
pub fn sample_sample_cov<T: Real, R: Rng + ?Sized>(spec: &SampleCovSpec, rng: &mut R) -> Array2<T> {
    let n = spec.n;
    let mut x = Array2::<T>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = T::of(spec.entry.sample(rng));
        }
    }
    let mut a = x.t().dot(&x);
    let inv_n = T::one() / T::of_usize(n);
    a.mapv_inplace(|v| v * inv_n);
    // the Gram product is symmetric up to round-off; make it exact
    for i in 0..n {
        for j in (i + 1)..n {
            let s = (a[(i, j)] + a[(j, i)]) * T::of(0.5);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    a
}

/// As [`sample_sample_cov`] from a bare seed.
pub fn sample_sample_cov_seeded<T: Real>(spec: &SampleCovSpec, seed: u64) -> Array2<T> {
    sample_sample_cov(spec, &mut seeded(seed))
}

/// Mean and second-moment deficit of the truncated entry `w 1_{|w| <= t}`:
/// returns `(mu, tau2)` with `mu = E[w 1_{|w| <= t}]` and
/// `tau2 = E[w^2] - E[(w 1_{|w| <= t})^2]`.
pub fn truncated_moments(dist: &EntryDistribution, threshold: f64) -> (f64, f64) {
    let mu = -dist.tail_signed_mean(threshold);
    let tau2 = dist.tail_abs_moment(2, threshold);
    (mu, tau2)
}

/// The truncate-then-mix surgery at level `eps_n = n^{1/2-eps}`: the original
/// entry is replaced by its truncation with probability `1 - mix_prob` and by
/// a two-point variable `z = a +- sqrt(b2 - a^2)` with probability
/// `mix_prob = |mu|/eps_n + tau2/eps_n^2`, chosen so the mixture keeps the
/// original mean and second moment exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationMixture {
    pub epsilon_n: f64,
    pub mu: f64,
    pub tau2: f64,
    pub a: f64,
    pub b2: f64,
    pub mix_prob: f64,
}

impl TruncationMixture {
    /// The two support points of `z`.
    pub fn z_values(&self) -> (f64, f64) {
        let s = (self.b2 - self.a * self.a).max(0.0).sqrt();
        (self.a + s, self.a - s)
    }

    /// `E z^4`.
    pub fn z_fourth_moment(&self) -> f64 {
        let (zp, zm) = self.z_values();
        0.5 * (zp.powi(4) + zm.powi(4))
    }

    /// Residual of the mean identity (exactly how far the mixture mean is
    /// from zero).
    pub fn mean_residual(&self) -> f64 {
        (self.mu * (1.0 - self.mix_prob) + self.a * self.mix_prob).abs()
    }

    /// Residual of the second-moment identity against the original law.
    pub fn second_moment_residual(&self, dist: &EntryDistribution) -> f64 {
        let m2 = dist.variance();
        ((m2 - self.tau2) * (1.0 - self.mix_prob) + self.b2 * self.mix_prob - m2).abs()
    }

    /// Fourth moment of the mixed entry.
    pub fn fourth_moment(&self, dist: &EntryDistribution) -> f64 {
        let truncated_fourth = dist.m4() - dist.tail_abs_moment(4, self.epsilon_n);
        truncated_fourth * (1.0 - self.mix_prob) + self.z_fourth_moment() * self.mix_prob
    }
}

/// Build the truncation mixture for `dist` at level `n^{1/2-eps}`.
pub fn build_truncation_mixture(
    dist: &EntryDistribution,
    n: usize,
    eps: f64,
) -> Result<TruncationMixture, EnsembleError> {
    assert!(eps > 0.0 && eps < 0.5, "eps must lie in (0, 1/2)");
    assert!(n >= 1);
    let epsilon_n = (n as f64).powf(0.5 - eps);
    let (mu, tau2) = truncated_moments(dist, epsilon_n);
    let mix_prob = mu.abs() / epsilon_n + tau2 / (epsilon_n * epsilon_n);
    if mix_prob > 1.0 {
        return Err(EnsembleError::MixtureProbability(mix_prob));
    }
    if mix_prob == 0.0 {
        return Ok(TruncationMixture { epsilon_n, mu, tau2, a: 0.0, b2: 0.0, mix_prob });
    }
    let a = -mu * (1.0 - mix_prob) / mix_prob;
    let b2 = dist.variance() + tau2 * (1.0 - mix_prob) / mix_prob;
    debug_assert!(b2 >= a * a, "two-point construction requires b2 >= a^2");
    Ok(TruncationMixture { epsilon_n, mu, tau2, a, b2, mix_prob })
}

/// Truncation-level deficit of a Wigner ensemble at size `n` with exponent
/// `p`:
/// `n^{p/2} ( n^{4 eps}/n^2 * sum_{i<j} E[w^4 1] + n^{2 eps}/n * sum_i E[w^2 1] )`
/// with indicator thresholds `n^{1/2-eps}`. With i.i.d. entry classes the
/// sums collapse to counts times single-entry tail moments.
pub fn c0_deficit(spec: &WignerSpec, p: f64, eps: f64, n: usize) -> f64 {
    assert!(p >= 0.0);
    assert!(eps > 0.0 && eps < 0.5);
    let nf = n as f64;
    let threshold = nf.powf(0.5 - eps);
    let tail4 = spec.offdiag.tail_abs_moment(4, threshold);
    let tail2 = spec.diag.tail_abs_moment(2, threshold);
    let pairs = nf * (nf - 1.0) / 2.0;
    nf.powf(p / 2.0)
        * (nf.powf(4.0 * eps) / (nf * nf) * pairs * tail4 + nf.powf(2.0 * eps) / nf * nf * tail2)
}

/// Sub-Gaussian symmetric moment check: `E|w|^p <= (c1 sqrt(p))^p` for
/// `p = 1..=pmax`, plus symmetry of the law.
pub fn c1_check(dist: &EntryDistribution, c1: f64, pmax: u32) -> bool {
    assert!(pmax >= 1);
    if !dist.is_symmetric() {
        return false;
    }
    (1..=pmax).all(|p| {
        let pf = p as f64;
        dist.abs_moment(p) <= (c1 * pf.sqrt()).powf(pf)
    })
}
