//! The two limiting spectral laws: semicircle on `[-2,2]` and the square-case
//! Marchenko-Pastur law on `[0,4]`.
//!
//! Densities and CDFs are closed forms (arcsine-type antiderivatives), the
//! quantile is a safeguarded bisection with a single Newton polish, and
//! expectations of test functions use the Chebyshev rules from [`crate::quad`]
//! so the edge singularities are absorbed exactly. The Marchenko-Pastur
//! quantile is solved on the variable `u = sqrt(x)`, where the pushed-forward
//! CDF has the bounded derivative `sqrt(4-u^2)/pi`; this removes the
//! `x^{-1/2}` hard edge at the origin.

use rand::Rng;
use thiserror::Error;

use crate::quad::{cheb2_rule, cheb4_rule};
use crate::real::Real;
use crate::rng::seeded;
use crate::test_functions::TestFunction;

/// Default node count for expectations; enough to push the whole catalog
/// (including the non-analytic bump, also composed with x -> x^2 by the
/// square-identity tests) below 1e-10 absolute error.
const EXPECT_NODES: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawError {
    #[error("quantile probability must lie in (0,1), got {0}")]
    QuantileDomain(f64),
}

/// A limiting spectral law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitLaw {
    Semicircle,
    MarchenkoPastur,
}

/// The `j/n` quantiles of a limit law, with the last entry pinned to the
/// right support endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalLocations<T> {
    pub law: LimitLaw,
    pub values: Vec<T>,
}

impl<T: Real> ClassicalLocations<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// 1-based access matching the usual index convention.
    pub fn location(&self, j: usize) -> T {
        self.values[j - 1]
    }
}

impl LimitLaw {
    /// Closed support of the law.
    pub fn support<T: Real>(&self) -> (T, T) {
        match self {
            LimitLaw::Semicircle => (T::of(-2.0), T::of(2.0)),
            LimitLaw::MarchenkoPastur => (T::zero(), T::of(4.0)),
        }
    }

    /// Density; zero outside the support.
    pub fn density<T: Real>(&self, x: T) -> T {
        let two_pi = T::of(2.0) * T::PI();
        match self {
            LimitLaw::Semicircle => {
                let s = T::of(4.0) - x * x;
                if s <= T::zero() {
                    T::zero()
                } else {
                    s.sqrt() / two_pi
                }
            }
            LimitLaw::MarchenkoPastur => {
                if x <= T::zero() || x >= T::of(4.0) {
                    T::zero()
                } else {
                    ((T::of(4.0) - x) / x).sqrt() / two_pi
                }
            }
        }
    }

    /// Cumulative distribution function, in closed form.
    pub fn cdf<T: Real>(&self, x: T) -> T {
        let pi = T::PI();
        let (lo, hi) = self.support::<T>();
        if x <= lo {
            return T::zero();
        }
        if x >= hi {
            return T::one();
        }
        match self {
            LimitLaw::Semicircle => {
                let half = T::of(0.5);
                half + x * (T::of(4.0) - x * x).sqrt() / (T::of(4.0) * pi)
                    + (x * half).asin() / pi
            }
            LimitLaw::MarchenkoPastur => {
                let u = (x * T::of(0.25)).sqrt().asin();
                let area = (x * (T::of(4.0) - x)).sqrt() / (T::of(2.0) * pi);
                T::of(2.0) * u / pi + area
            }
        }
    }

    /// Unique `x` with `cdf(x) = p`, for `p` in the open unit interval.
    ///
    /// Bisection down to an interval of width `~1e-13` followed by one Newton
    /// polish; the polish is skipped near the support endpoints where the
    /// density degenerates.
    pub fn quantile<T: Real>(&self, p: T) -> Result<T, LawError> {
        let p64 = p.to_f64_lossy();
        if !(p64 > 0.0 && p64 < 1.0) {
            return Err(LawError::QuantileDomain(p64));
        }
        Ok(match self {
            LimitLaw::Semicircle => {
                solve_monotone(|x| self.cdf(x), |x| self.density(x), T::of(-2.0), T::of(2.0), p)
            }
            LimitLaw::MarchenkoPastur => {
                // solve in u = sqrt(x); dF/du = sqrt(4-u^2)/pi is bounded
                let pi = T::PI();
                let u = solve_monotone(
                    |u| self.cdf(u * u),
                    |u| (T::of(4.0) - u * u).max(T::zero()).sqrt() / pi,
                    T::zero(),
                    T::of(2.0),
                    p,
                );
                u * u
            }
        })
    }

    /// Classical locations `quantile(j/n)` for `j = 1..n-1`, with the `n`-th
    /// location set to the right support endpoint.
    pub fn classical_locations<T: Real>(&self, n: usize) -> ClassicalLocations<T> {
        assert!(n >= 1, "classical locations need n >= 1");
        let mut values = Vec::with_capacity(n);
        for j in 1..n {
            let p = T::of_usize(j) / T::of_usize(n);
            values.push(self.quantile(p).expect("0 < j/n < 1"));
        }
        values.push(self.support::<T>().1);
        ClassicalLocations { law: *self, values }
    }

    /// `count` i.i.d. draws via the inverse CDF applied to a seeded uniform
    /// stream.
    pub fn sample<T: Real>(&self, count: usize, seed: u64) -> Vec<T> {
        let mut rng = seeded(seed);
        self.sample_with_rng(count, &mut rng)
    }

    /// As [`LimitLaw::sample`], drawing uniforms from the supplied generator.
    pub fn sample_with_rng<T: Real, R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<T> {
        (0..count).map(|_| self.draw(rng)).collect()
    }

    /// One inverse-CDF draw.
    pub fn draw<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u: f64 = rng.sample(rand::distr::Open01);
        self.quantile(T::of(u)).expect("Open01 draw lies in (0,1)")
    }

    /// Expectation of a closure against the law, by the Gauss-Chebyshev rule
    /// matched to the law's weight.
    pub fn expect_fn<T: Real>(&self, g: impl Fn(T) -> T) -> T {
        match self {
            LimitLaw::Semicircle => {
                // E g = (2/pi) * integral g(2t) sqrt(1-t^2) dt
                let (nodes, weights) = cheb2_rule::<T>(EXPECT_NODES);
                let sum: T = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&t, &w)| w * g(T::of(2.0) * t))
                    .sum();
                T::of(2.0) / T::PI() * sum
            }
            LimitLaw::MarchenkoPastur => {
                // E g = (1/pi) * integral g(2+2t) sqrt((1-t)/(1+t)) dt
                let (nodes, weights) = cheb4_rule::<T>(EXPECT_NODES);
                let sum: T = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&t, &w)| w * g(T::of(2.0) + T::of(2.0) * t))
                    .sum();
                sum / T::PI()
            }
        }
    }

    /// `E f(psi)` for a catalog test function.
    pub fn expect_f<T: Real>(&self, f: &TestFunction) -> T {
        self.expect_fn(|x| f.eval(x))
    }

    /// `Var f(psi)`, clamped at zero against quadrature round-off.
    pub fn var_f<T: Real>(&self, f: &TestFunction) -> T {
        let mean = self.expect_f::<T>(f);
        let second: T = self.expect_fn(|x: T| {
            let v = f.eval(x);
            v * v
        });
        (second - mean * mean).max(T::zero())
    }

    /// Raw moment `E psi^k` by quadrature.
    pub fn moment<T: Real>(&self, k: u32) -> T {
        self.expect_fn(|x: T| x.powi(k as i32))
    }
}

/// Safeguarded bisection on a nondecreasing CDF, then a single Newton polish
/// when the derivative is healthy at the bisection point.
fn solve_monotone<T: Real>(
    cdf: impl Fn(T) -> T,
    pdf: impl Fn(T) -> T,
    mut lo: T,
    mut hi: T,
    p: T,
) -> T {
    let width_target = T::of(1e-13).max(T::epsilon() * T::of(8.0));
    while hi - lo > width_target {
        let mid = (lo + hi) * T::of(0.5);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = (lo + hi) * T::of(0.5);
    let d = pdf(mid);
    if d > T::of(1e-3) {
        let polished = mid - (cdf(mid) - p) / d;
        if polished >= lo && polished <= hi {
            return polished;
        }
    }
    mid
}

/// Catalan numbers `C_0..=C_8`: even semicircle moments and all
/// Marchenko-Pastur moments.
pub const CATALAN: [f64; 9] = [1.0, 1.0, 2.0, 5.0, 14.0, 42.0, 132.0, 429.0, 1430.0];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn density_closed_forms() {
        assert_relative_eq!(LimitLaw::Semicircle.density(0.0), 1.0 / PI, epsilon = 1e-15);
        assert_eq!(LimitLaw::Semicircle.density(3.0), 0.0);
        assert_eq!(LimitLaw::Semicircle.density(-2.5), 0.0);
        assert_relative_eq!(
            LimitLaw::MarchenkoPastur.density(2.0),
            1.0 / (2.0 * PI),
            epsilon = 1e-15
        );
        assert_eq!(LimitLaw::MarchenkoPastur.density(-0.1), 0.0);
        assert_eq!(LimitLaw::MarchenkoPastur.density(4.2), 0.0);
    }

    #[test]
    fn density_integrates_to_one() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            let mass: f64 = law.expect_fn(|_| 1.0);
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cdf_fixed_values() {
        assert_relative_eq!(LimitLaw::Semicircle.cdf(0.0), 0.5, epsilon = 1e-15);
        assert_eq!(LimitLaw::Semicircle.cdf(2.0), 1.0);
        assert_eq!(LimitLaw::Semicircle.cdf(-2.0), 0.0);
        assert_relative_eq!(
            LimitLaw::MarchenkoPastur.cdf(2.0),
            0.5 + 1.0 / PI,
            epsilon = 1e-15
        );
    }

    // Independent oracle: CDF by adaptive quadrature of the density, avoiding
    // the closed-form antiderivative entirely. The MP edge singularity is
    // removed by integrating in u = sqrt(x).
    fn cdf_by_quadrature(law: LimitLaw, x: f64) -> f64 {
        match law {
            LimitLaw::Semicircle => {
                adaptive_simpson(&|t| law.density(t), -2.0, x, 1e-13)
            }
            LimitLaw::MarchenkoPastur => {
                let g = |u: f64| 2.0 * u * law.density(u * u);
                adaptive_simpson(&g, 0.0, x.sqrt(), 1e-13)
            }
        }
    }

    #[test]
    fn cdf_matches_quadrature_oracle() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            let (lo, hi) = law.support::<f64>();
            for i in 1..24 {
                let x = lo + (hi - lo) * i as f64 / 24.0;
                assert_abs_diff_eq!(law.cdf(x), cdf_by_quadrature(law, x), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn cdf_is_nondecreasing() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            let (lo, hi) = law.support::<f64>();
            let mut prev = -1.0;
            for i in 0..=400 {
                let x = lo - 0.5 + (hi - lo + 1.0) * i as f64 / 400.0;
                let c = law.cdf(x);
                assert!((0.0..=1.0).contains(&c));
                assert!(c >= prev);
                prev = c;
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            for i in 1..200 {
                let p = i as f64 / 200.0;
                let x = law.quantile(p).unwrap();
                assert_abs_diff_eq!(law.cdf(x), p, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn quantile_cdf_round_trip_on_interior() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            let (lo, hi) = law.support::<f64>();
            for i in 1..60 {
                let x = lo + (hi - lo) * i as f64 / 60.0;
                if x <= lo + 1e-9 || x >= hi - 1e-9 {
                    continue;
                }
                let back = law.quantile(law.cdf(x)).unwrap();
                assert_abs_diff_eq!(back, x, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn quantile_rejects_bad_probability() {
        for p in [0.0, 1.0, -0.3, 1.7, f64::NAN] {
            assert!(LimitLaw::Semicircle.quantile(p).is_err());
        }
    }

    #[test]
    fn quantile_median_by_symmetry() {
        assert_abs_diff_eq!(LimitLaw::Semicircle.quantile(0.5).unwrap(), 0.0, epsilon = 1e-13);
    }

    // Independent oracle: plain bisection on the quadrature-based CDF.
    fn quantile_by_bisection(law: LimitLaw, p: f64) -> f64 {
        let (mut lo, mut hi) = law.support::<f64>();
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cdf_by_quadrature(law, mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quantile_matches_bisection_oracle() {
        assert_abs_diff_eq!(
            LimitLaw::Semicircle.quantile(0.25).unwrap(),
            quantile_by_bisection(LimitLaw::Semicircle, 0.25),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            LimitLaw::MarchenkoPastur.quantile(0.25).unwrap(),
            quantile_by_bisection(LimitLaw::MarchenkoPastur, 0.25),
            epsilon = 1e-9
        );
    }

    #[test]
    fn classical_locations_small_cases() {
        let sc2 = LimitLaw::Semicircle.classical_locations::<f64>(2);
        assert_abs_diff_eq!(sc2.location(1), 0.0, epsilon = 1e-13);
        assert_eq!(sc2.location(2), 2.0);

        let sc4 = LimitLaw::Semicircle.classical_locations::<f64>(4);
        assert_abs_diff_eq!(sc4.location(2), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(sc4.location(1), -sc4.location(3), epsilon = 1e-12);

        let mp1 = LimitLaw::MarchenkoPastur.classical_locations::<f64>(1);
        assert_eq!(mp1.location(1), 4.0);
    }

    #[test]
    fn classical_locations_strictly_increasing() {
        for law in [LimitLaw::Semicircle, LimitLaw::MarchenkoPastur] {
            for n in [10usize, 100, 10_000] {
                let locs = law.classical_locations::<f64>(n);
                for j in 1..n {
                    assert!(
                        locs.values[j] > locs.values[j - 1],
                        "{law:?} locations not increasing at n={n}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn mp_small_quantile_bound() {
        // gamma_j <= pi^2 j^2 / (2 n^2) for j <= n/100
        for n in [100usize, 1000, 10_000] {
            let law = LimitLaw::MarchenkoPastur;
            for j in 1..=(n / 100) {
                let g = law.quantile(j as f64 / n as f64).unwrap();
                let bound = PI * PI * (j * j) as f64 / (2.0 * (n * n) as f64);
                assert!(g <= bound, "n={n} j={j}: {g} > {bound}");
            }
        }
    }

    #[test]
    fn sample_moments_semicircle() {
        let xs: Vec<f64> = LimitLaw::Semicircle.sample(1_000_000, 123);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 4e-3, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn sample_moments_marchenko_pastur() {
        let xs: Vec<f64> = LimitLaw::MarchenkoPastur.sample(1_000_000, 456);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let second = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((second - 2.0).abs() < 0.03, "second moment {second}");
    }

    #[test]
    fn sample_is_deterministic_and_empty_on_zero_count() {
        assert!(LimitLaw::Semicircle.sample::<f64>(0, 9).is_empty());
        let a: Vec<f64> = LimitLaw::MarchenkoPastur.sample(16, 9);
        let b: Vec<f64> = LimitLaw::MarchenkoPastur.sample(16, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn moments_match_catalan_numbers() {
        // Semicircle: odd moments vanish, even moments are Catalan numbers.
        for k in 0..=8u32 {
            let m: f64 = LimitLaw::Semicircle.moment(k);
            let expected = if k % 2 == 1 { 0.0 } else { CATALAN[(k / 2) as usize] };
            assert_abs_diff_eq!(m, expected, epsilon = 1e-9);
        }
        // Marchenko-Pastur: all moments are Catalan numbers.
        for k in 0..=8u32 {
            let m: f64 = LimitLaw::MarchenkoPastur.moment(k);
            assert_abs_diff_eq!(m, CATALAN[k as usize], epsilon = 1e-9);
        }
    }

    #[test]
    fn mp_expectation_agrees_with_squared_semicircle() {
        // If s is semicircle-distributed then s^2 is Marchenko-Pastur
        // distributed; this gives a second, independent quadrature route.
        for f in TestFunction::bounded_catalog() {
            let direct: f64 = LimitLaw::MarchenkoPastur.expect_f(&f);
            let via_square: f64 = LimitLaw::Semicircle.expect_fn(|s| f.eval(s * s));
            assert_abs_diff_eq!(direct, via_square, epsilon = 1e-10);
        }
    }

    #[test]
    fn expectation_matches_quadrature_oracle() {
        // Adaptive-Simpson oracle in u-space (semicircle: x = u; MP: x = u^2).
        for f in TestFunction::bounded_catalog() {
            let sc: f64 = LimitLaw::Semicircle.expect_f(&f);
            let sc_oracle = adaptive_simpson(
                &|x: f64| f.eval(x) * LimitLaw::Semicircle.density(x),
                -2.0,
                2.0,
                1e-13,
            );
            assert_abs_diff_eq!(sc, sc_oracle, epsilon = 1e-10);

            let mp: f64 = LimitLaw::MarchenkoPastur.expect_f(&f);
            let mp_oracle = adaptive_simpson(
                &|u: f64| 2.0 * u * f.eval(u * u) * LimitLaw::MarchenkoPastur.density(u * u),
                0.0,
                2.0,
                1e-13,
            );
            assert_abs_diff_eq!(mp, mp_oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn expect_and_var_closed_cases() {
        let e: f64 = LimitLaw::Semicircle.expect_f(&TestFunction::Square);
        let v: f64 = LimitLaw::Semicircle.var_f(&TestFunction::Square);
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);

        let vc: f64 = LimitLaw::Semicircle.var_f(&TestFunction::Constant(3.5));
        assert_abs_diff_eq!(vc, 0.0, epsilon = 1e-12);

        let em: f64 = LimitLaw::MarchenkoPastur.expect_f(&TestFunction::Identity);
        let vm: f64 = LimitLaw::MarchenkoPastur.var_f(&TestFunction::Identity);
        assert_abs_diff_eq!(em, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(vm, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn works_in_f32() {
        let d: f32 = LimitLaw::Semicircle.density(0.0f32);
        assert_abs_diff_eq!(d, 1.0 / std::f32::consts::PI, epsilon = 1e-6);
        let q: f32 = LimitLaw::MarchenkoPastur.quantile(0.5f32).unwrap();
        let q64: f64 = LimitLaw::MarchenkoPastur.quantile(0.5f64).unwrap();
        assert_abs_diff_eq!(q as f64, q64, epsilon = 1e-5);
    }
}
