//! Finite-population sampling without replacement and its martingale
//! decomposition.
//!
//! For a without-replacement sample `(xi_1, ..., xi_k)` from `{1, ..., n}`
//! and a bounded `g` on `[0,1]`, the centered statistic
//! `alpha_{n,k} sum_i (g(zeta_i) - E g(zeta_1))`, `zeta_i = xi_i / n`, is a
//! sum of martingale increments
//!
//! `Z_{n,j} = alpha_{n,k} (n-k)/(n-j) [g(zeta_j) - E_{j-1} g(zeta_j)]`,
//!
//! where `E_{j-1}` averages over the indices not yet drawn. The closed form
//! is equivalent to the defining telescoping sum
//! `alpha_{n,k} sum_i [E_j g(zeta_i) - E_{j-1} g(zeta_i)]`; both are
//! implemented and compared, in floating point here and in exact rational
//! arithmetic in [`exact`] where the test function evaluates rationally.

use rand::Rng;

use crate::spectra::{alpha, partial_fisher_yates};
use crate::test_functions::TestFunction;

/// One without-replacement sample path; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePath {
    pub n: usize,
    pub k: usize,
    pub xi: Vec<usize>,
}

impl SamplePath {
    /// `zeta_j = xi_j / n`, 1-based.
    pub fn zeta(&self, j: usize) -> f64 {
        self.xi[j - 1] as f64 / self.n as f64
    }
}

/// Uniform ordered sample of `k` distinct indices from `{1, ..., n}`.
pub fn sample_without_replacement<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> SamplePath {
    assert!(k <= n, "cannot draw {k} distinct indices from {n}");
    let mut items: Vec<usize> = (1..=n).collect();
    partial_fisher_yates(&mut items, k, rng);
    items.truncate(k);
    SamplePath { n, k, xi: items }
}

/// Mean of `g(t/n)` over the indices `t` not contained in `prefix`.
pub fn conditional_mean(n: usize, prefix: &[usize], g: &TestFunction) -> f64 {
    debug_assert!(prefix.len() < n, "conditioning must leave at least one index");
    let mut sum = 0.0;
    let mut count = 0usize;
    for t in 1..=n {
        if !prefix.contains(&t) {
            sum += g.eval(t as f64 / n as f64);
            count += 1;
        }
    }
    sum / count as f64
}

/// Residual of the one-step recursion
/// `E_j g(zeta_{j+1}) = (1 + 1/(n-j)) E_{j-1} g(zeta_j) - g(zeta_j)/(n-j)`
/// at the given nonempty prefix (`j = prefix.len()`).
pub fn conditional_mean_recursion_residual(n: usize, prefix: &[usize], g: &TestFunction) -> f64 {
    let j = prefix.len();
    assert!(j >= 1 && j < n);
    let lhs = conditional_mean(n, prefix, g);
    let prev = conditional_mean(n, &prefix[..j - 1], g);
    let fz = g.eval(prefix[j - 1] as f64 / n as f64);
    let njf = (n - j) as f64;
    let rhs = (1.0 + 1.0 / njf) * prev - fz / njf;
    (lhs - rhs).abs()
}

/// Martingale increment `Z_{n,j}` in closed form.
pub fn martingale_increment(path: &SamplePath, g: &TestFunction, j: usize) -> f64 {
    assert!(j >= 1 && j <= path.k, "increment index out of range");
    let (n, k) = (path.n, path.k);
    let a: f64 = alpha(n, k);
    let factor = (n - k) as f64 / (n - j) as f64;
    let prev = conditional_mean(n, &path.xi[..j - 1], g);
    a * factor * (g.eval(path.zeta(j)) - prev)
}

/// Martingale increment computed literally from the defining telescoping sum
/// `alpha_{n,k} sum_{i=1}^k [E_j g(zeta_i) - E_{j-1} g(zeta_i)]`.
pub fn martingale_increment_telescoping(path: &SamplePath, g: &TestFunction, j: usize) -> f64 {
    assert!(j >= 1 && j <= path.k, "increment index out of range");
    let (n, k) = (path.n, path.k);
    let a: f64 = alpha(n, k);
    let m_cur = conditional_mean(n, &path.xi[..j], g);
    let m_prev = conditional_mean(n, &path.xi[..j - 1], g);
    let mut sum = 0.0;
    for i in 1..=k {
        let e_cur = if i <= j { g.eval(path.zeta(i)) } else { m_cur };
        let e_prev = if i <= j - 1 { g.eval(path.zeta(i)) } else { m_prev };
        sum += e_cur - e_prev;
    }
    a * sum
}

/// `alpha_{n,k}^2 (n-k)^2 sum_{j=1}^k (n-j)^{-2}`; converges to 1 whenever
/// `min(k, n-k)` grows.
pub fn predictable_variance_limit(n: usize, k: usize) -> f64 {
    assert!(k > 0 && k < n);
    let a: f64 = alpha::<f64>(n, k);
    let nk = (n - k) as f64;
    let sum: f64 = (1..=k).map(|j| 1.0 / (((n - j) * (n - j)) as f64)).sum();
    a * a * nk * nk * sum
}

/// Population mean `(1/n) sum_t g(t/n)`.
pub fn grid_mean(n: usize, g: &TestFunction) -> f64 {
    (1..=n).map(|t| g.eval(t as f64 / n as f64)).sum::<f64>() / n as f64
}

/// Population variance `(1/n) sum_t (g(t/n) - mean)^2`; the reference value
/// for the sampling central limit theorem.
pub fn grid_variance(n: usize, g: &TestFunction) -> f64 {
    let m = grid_mean(n, g);
    (1..=n)
        .map(|t| {
            let d = g.eval(t as f64 / n as f64) - m;
            d * d
        })
        .sum::<f64>()
        / n as f64
}

/// One draw of the centered, `alpha`-scaled sampling statistic
/// `alpha_{n,k} sum_{i=1}^k (g(zeta_i) - E g(zeta_1))`.
pub fn sampling_clt_statistic<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    g: &TestFunction,
    rng: &mut R,
) -> f64 {
    assert!(k > 0 && k < n);
    let path = sample_without_replacement(n, k, rng);
    let mean = grid_mean(n, g);
    let a: f64 = alpha(n, k);
    a * path.xi.iter().map(|&t| g.eval(t as f64 / n as f64) - mean).sum::<f64>()
}

/// Exact rational counterparts of the floating-point operations, used for
/// the exhaustive enumeration checks. Everything here requires a test
/// function with exact rational evaluation (the polynomial catalog entries).
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    use crate::test_functions::{grid_rational, TestFunction};

    use super::SamplePath;

    fn g_at(g: &TestFunction, t: usize, n: usize) -> Option<BigRational> {
        g.eval_rational(&grid_rational(t, n))
    }

    /// Exact conditional mean of `g(t/n)` over indices outside `prefix`.
    pub fn conditional_mean(n: usize, prefix: &[usize], g: &TestFunction) -> Option<BigRational> {
        let mut sum = BigRational::zero();
        let mut count = 0usize;
        for t in 1..=n {
            if !prefix.contains(&t) {
                sum += g_at(g, t, n)?;
                count += 1;
            }
        }
        Some(sum / BigRational::from(BigInt::from(count)))
    }

    /// `Z_{n,j} / alpha_{n,k}` in closed form, exactly.
    pub fn increment_over_alpha(
        path: &SamplePath,
        g: &TestFunction,
        j: usize,
    ) -> Option<BigRational> {
        let (n, k) = (path.n, path.k);
        let factor = BigRational::new(BigInt::from(n - k), BigInt::from(n - j));
        let prev = conditional_mean(n, &path.xi[..j - 1], g)?;
        Some(factor * (g_at(g, path.xi[j - 1], n)? - prev))
    }

    /// `Z_{n,j} / alpha_{n,k}` from the telescoping definition, exactly.
    pub fn increment_telescoping_over_alpha(
        path: &SamplePath,
        g: &TestFunction,
        j: usize,
    ) -> Option<BigRational> {
        let (n, k) = (path.n, path.k);
        let m_cur = conditional_mean(n, &path.xi[..j], g)?;
        let m_prev = conditional_mean(n, &path.xi[..j - 1], g)?;
        let mut sum = BigRational::zero();
        for i in 1..=k {
            let e_cur = if i <= j { g_at(g, path.xi[i - 1], n)? } else { m_cur.clone() };
            let e_prev = if i <= j - 1 { g_at(g, path.xi[i - 1], n)? } else { m_prev.clone() };
            sum += e_cur - e_prev;
        }
        Some(sum)
    }

    /// Visit every ordered tuple of `len` distinct indices from `{1,...,n}`.
    pub fn for_each_ordered_prefix(n: usize, len: usize, mut visit: impl FnMut(&[usize])) {
        fn recurse(
            n: usize,
            len: usize,
            current: &mut Vec<usize>,
            used: &mut Vec<bool>,
            visit: &mut impl FnMut(&[usize]),
        ) {
            if current.len() == len {
                visit(current);
                return;
            }
            for t in 1..=n {
                if !used[t] {
                    used[t] = true;
                    current.push(t);
                    recurse(n, len, current, used, visit);
                    current.pop();
                    used[t] = false;
                }
            }
        }
        let mut current = Vec::with_capacity(len);
        let mut used = vec![false; n + 1];
        recurse(n, len, &mut current, &mut used, &mut visit);
    }

    /// Exhaustive martingale check: `E[Z_{n,j} | prefix] = 0` exactly for
    /// every ordered `(j-1)`-prefix. Returns the number of prefixes checked.
    pub fn martingale_property_holds(
        n: usize,
        k: usize,
        j: usize,
        g: &TestFunction,
    ) -> Option<(bool, usize)> {
        let mut ok = true;
        let mut count = 0usize;
        let mut failed = false;
        for_each_ordered_prefix(n, j - 1, |prefix| {
            if failed {
                return;
            }
            count += 1;
            let mut acc = BigRational::zero();
            for t in 1..=n {
                if !prefix.contains(&t) {
                    let mut path_xi = prefix.to_vec();
                    path_xi.push(t);
                    // pad to length k with arbitrary distinct indices; the
                    // closed form only reads the first j draws
                    for s in 1..=n {
                        if path_xi.len() == k {
                            break;
                        }
                        if !path_xi.contains(&s) {
                            path_xi.push(s);
                        }
                    }
                    let path = SamplePath { n, k, xi: path_xi };
                    match increment_over_alpha(&path, g, j) {
                        Some(z) => acc += z,
                        None => {
                            failed = true;
                            return;
                        }
                    }
                }
            }
            if !acc.is_zero() {
                ok = false;
            }
        });
        if failed {
            None
        } else {
            Some((ok, count))
        }
    }

    /// Exact moments of the conditioned mean over all ordered
    /// `(j-1)`-prefixes: returns
    /// `(E[(E_{j-1} g)^2], E[(E_{j-1} g)^4], prefix count)`.
    pub fn conditioned_mean_moments(
        n: usize,
        j: usize,
        g: &TestFunction,
    ) -> Option<(BigRational, BigRational, usize)> {
        let mut sum2 = BigRational::zero();
        let mut sum4 = BigRational::zero();
        let mut count = 0usize;
        let mut failed = false;
        for_each_ordered_prefix(n, j - 1, |prefix| {
            if failed {
                return;
            }
            match conditional_mean(n, prefix, g) {
                Some(m) => {
                    let m2 = &m * &m;
                    sum4 += &m2 * &m2;
                    sum2 += m2;
                    count += 1;
                }
                None => failed = true,
            }
        });
        if failed {
            return None;
        }
        let c = BigRational::from(BigInt::from(count));
        Some((sum2 / &c, sum4 / &c, count))
    }

    /// Exact residuals of the conditioned-mean moments against the
    /// unconditioned baseline:
    /// `r2 = |E[(E_{j-1} g)^2] - (E g)^2|`, `r4 = |E[(E_{j-1} g)^4] - (E g)^4|`.
    pub fn conditioned_moment_residuals_exact(
        n: usize,
        k: usize,
        j: usize,
        g: &TestFunction,
    ) -> Option<(BigRational, BigRational)> {
        assert!(n <= 10, "exhaustive enumeration is capped at n <= 10");
        assert!(j >= 1 && j <= k && k <= n);
        let (m2, m4, _) = conditioned_mean_moments(n, j, g)?;
        let base = conditional_mean(n, &[], g)?;
        let base2 = &base * &base;
        let base4 = &base2 * &base2;
        let abs = |x: BigRational| if x < BigRational::zero() { -x } else { x };
        Some((abs(m2 - base2), abs(m4 - base4)))
    }

    /// One-armed Catalan-free helper: exact mean of `g` over the whole grid.
    pub fn grid_mean(n: usize, g: &TestFunction) -> Option<BigRational> {
        conditional_mean(n, &[], g)
    }
}

/// Floating-point view of the exact residuals; `(r2, r4)`.
pub fn conditioned_moment_residuals(n: usize, k: usize, j: usize, g: &TestFunction) -> Option<(f64, f64)> {
    use num_traits::ToPrimitive;
    let (r2, r4) = exact::conditioned_moment_residuals_exact(n, k, j, g)?;
    Some((r2.to_f64().unwrap(), r4.to_f64().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_abs_diff_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    #[test]
    fn swr_edge_cases() {
        let mut rng = seeded(1);
        let full = sample_without_replacement(6, 6, &mut rng);
        let mut sorted = full.xi.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 4, 5, 6], "k = n gives a permutation");
        let empty = sample_without_replacement(6, 0, &mut rng);
        assert!(empty.xi.is_empty());
    }

    #[test]
    fn swr_is_uniform_over_ordered_pairs() {
        let mut rng = seeded(99);
        let mut counts = std::collections::HashMap::new();
        let reps = 120_000usize;
        for _ in 0..reps {
            let p = sample_without_replacement(4, 2, &mut rng);
            *counts.entry((p.xi[0], p.xi[1])).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 12);
        let expected = reps as f64 / 12.0;
        let sigma = (reps as f64 * (1.0 / 12.0) * (11.0 / 12.0)).sqrt();
        for (&pair, &count) in &counts {
            assert!(
                (count as f64 - expected).abs() <= 4.0 * sigma,
                "pair {pair:?} count {count} vs expected {expected}"
            );
        }
    }

    #[test]
    fn conditional_mean_small_cases() {
        let g = TestFunction::Identity;
        // unconditioned: (1/n) sum t/n
        let m = conditional_mean(4, &[], &g);
        assert_abs_diff_eq!(m, (1.0 + 2.0 + 3.0 + 4.0) / 16.0, epsilon = 1e-15);
        // n = 3, prefix {2}: mean of {1/3, 3/3}
        let m = conditional_mean(3, &[2], &g);
        assert_abs_diff_eq!(m, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn conditional_mean_recursion_holds() {
        let mut rng = seeded(5);
        for g in [TestFunction::Identity, TestFunction::Sin, TestFunction::Runge] {
            for _ in 0..50 {
                let n = 12usize;
                let path = sample_without_replacement(n, 6, &mut rng);
                for j in 1..=5 {
                    let r = conditional_mean_recursion_residual(n, &path.xi[..j], &g);
                    assert!(r <= 1e-14, "{}: residual {r}", g.name());
                }
            }
        }
    }

    #[test]
    fn increments_vanish_for_constants() {
        let mut rng = seeded(6);
        let path = sample_without_replacement(9, 4, &mut rng);
        let c = TestFunction::Constant(2.5);
        for j in 1..=4 {
            assert_abs_diff_eq!(martingale_increment(&path, &c, j), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(
                martingale_increment_telescoping(&path, &c, j),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn closed_form_equals_telescoping_on_all_paths_exactly() {
        // n = 5, k = 2: all 20 ordered paths
        let g = TestFunction::Identity;
        let mut paths = 0usize;
        exact::for_each_ordered_prefix(5, 2, |xi| {
            let path = SamplePath { n: 5, k: 2, xi: xi.to_vec() };
            for j in 1..=2 {
                let a = exact::increment_over_alpha(&path, &g, j).unwrap();
                let b = exact::increment_telescoping_over_alpha(&path, &g, j).unwrap();
                assert_eq!(a, b, "path {xi:?}, j={j}");
            }
            paths += 1;
        });
        assert_eq!(paths, 20);
    }

    #[test]
    fn closed_form_equals_telescoping_in_floating_point() {
        let mut rng = seeded(7);
        for g in [TestFunction::Sin, TestFunction::Runge] {
            let path = sample_without_replacement(30, 11, &mut rng);
            for j in 1..=11 {
                let a = martingale_increment(&path, &g, j);
                let b = martingale_increment_telescoping(&path, &g, j);
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn martingale_property_exhaustive() {
        for (n, k) in [(5usize, 2usize), (6, 3), (7, 4)] {
            for g in [TestFunction::Identity, TestFunction::Square] {
                for j in 1..=k {
                    let (ok, prefixes) = exact::martingale_property_holds(n, k, j, &g).unwrap();
                    assert!(ok, "E[Z|prefix] != 0 at n={n} k={k} j={j}");
                    let expected: usize = ((n - j + 2)..=n).product();
                    assert_eq!(prefixes, expected.max(1));
                }
            }
        }
    }

    #[test]
    fn lindeberg_bound_is_deterministic() {
        // |Z_{n,j}| <= alpha * 2 sup|g| since (n-k)/(n-j) <= 1 for j <= k
        let mut rng = seeded(8);
        let g = TestFunction::Sin;
        let (n, k) = (40usize, 13usize);
        let sup = (1..=n).map(|t| g.eval(t as f64 / n as f64).abs()).fold(0.0, f64::max);
        let bound = alpha::<f64>(n, k) * 2.0 * sup;
        for _ in 0..50 {
            let path = sample_without_replacement(n, k, &mut rng);
            for j in 1..=k {
                assert!(martingale_increment(&path, &g, j).abs() <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn conditioned_moment_residuals_trivial_cases() {
        // j = 1: no conditioning, residuals vanish identically
        let (r2, r4) = exact::conditioned_moment_residuals_exact(6, 3, 1, &TestFunction::Square).unwrap();
        assert!(r2.is_zero() && r4.is_zero());
        // constant g: conditioning changes nothing
        let (r2, r4) =
            exact::conditioned_moment_residuals_exact(6, 3, 2, &TestFunction::Constant(1.5)).unwrap();
        assert!(r2.is_zero() && r4.is_zero());
        // non-rational g is refused
        assert!(conditioned_moment_residuals(6, 3, 2, &TestFunction::Sin).is_none());
    }

    #[test]
    fn conditioned_moment_residuals_hand_computed_case() {
        // n = 4, j = 2, g = identity: prefixes are the four singletons, each
        // with the complement mean over three values.
        // E g = 10/16 = 5/8; means: drop 1 -> (2+3+4)/12 = 3/4, drop 2 ->
        // 8/12 = 2/3, drop 3 -> 7/12, drop 4 -> 6/12 = 1/2.
        // E[(E_1 g)^2] = (81 + 64 + 49 + 36)/(144 * 4) = 230/576
        // (E g)^2 = 25/64 = 225/576, so r2 = 5/576.
        let g = TestFunction::Identity;
        let (r2, _r4) = exact::conditioned_moment_residuals_exact(4, 2, 2, &g).unwrap();
        assert_eq!(r2, BigRational::new(BigInt::from(5), BigInt::from(576)));
    }

    #[test]
    fn ordered_enumeration_matches_subset_weighting() {
        // independence check of the combinatorics: conditioning moments
        // computed over ordered prefixes equal the subset-weighted average,
        // because the conditional mean depends on the prefix only as a set
        let g = TestFunction::Square;
        let (n, j) = (6usize, 4usize);
        let (m2, m4, count) = exact::conditioned_mean_moments(n, j, &g).unwrap();
        assert_eq!(count, 6 * 5 * 4);

        // subsets of size j-1 = 3 out of 6, uniform weights
        let mut sum2 = BigRational::zero();
        let mut sum4 = BigRational::zero();
        let mut subsets = 0usize;
        for a in 1..=n {
            for b in (a + 1)..=n {
                for c in (b + 1)..=n {
                    let m = exact::conditional_mean(n, &[a, b, c], &g).unwrap();
                    let mm = &m * &m;
                    sum4 += &mm * &mm;
                    sum2 += mm;
                    subsets += 1;
                }
            }
        }
        let cnt = BigRational::from(BigInt::from(subsets));
        assert_eq!(m2, sum2 / &cnt);
        assert_eq!(m4, sum4 / &cnt);
    }

    #[test]
    fn conditioned_moment_residual_scaling_is_bounded() {
        // residual * (n - j + 1) stays bounded over the enumerated grid
        let g = TestFunction::Identity;
        let mut max_scaled: f64 = 0.0;
        for n in 4..=8usize {
            for j in 1..=(n - 1) {
                let (r2, r4) = conditioned_moment_residuals(n, n - 1, j, &g).unwrap();
                let scale = (n - j + 1) as f64;
                max_scaled = max_scaled.max(r2 * scale).max(r4 * scale);
            }
        }
        assert!(max_scaled < 1.0, "scaled residual {max_scaled} blew up");
        assert!(max_scaled > 0.0);
    }

    #[test]
    fn predictable_variance_small_and_large() {
        // n = 2, k = 1: alpha^2 = 2, (n-k)^2 = 1, sum = 1 -> exactly 2
        assert_abs_diff_eq!(predictable_variance_limit(2, 1), 2.0, epsilon = 1e-15);
        // k = 1 in general: n/(n-1)
        for n in [10usize, 1000] {
            assert_abs_diff_eq!(
                predictable_variance_limit(n, 1),
                n as f64 / (n as f64 - 1.0),
                epsilon = 1e-12
            );
        }
        // large n, balanced and unbalanced k
        assert!((predictable_variance_limit(10_000, 100) - 1.0).abs() < 0.01);
        assert!((predictable_variance_limit(1_000_000, 1000) - 1.0).abs() < 0.002);
        assert!((predictable_variance_limit(1_000_000, 999_000) - 1.0).abs() < 0.002);
    }

    #[test]
    fn statistic_moments_match_the_population() {
        let g = TestFunction::Identity;
        let (n, k) = (10_000usize, 100usize);
        let mut rng = seeded(10);
        let reps = 10_000usize;
        let xs: Vec<f64> = (0..reps).map(|_| sampling_clt_statistic(n, k, &g, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / reps as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (reps as f64 - 1.0);
        let reference = grid_variance(n, &g);
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var / reference - 1.0).abs() < 0.05, "variance ratio {}", var / reference);
        // same limit with k and n-k swapped
        let mut rng = seeded(11);
        let xs: Vec<f64> = (0..reps)
            .map(|_| sampling_clt_statistic(n, n - k, &g, &mut rng))
            .collect();
        let mean2 = xs.iter().sum::<f64>() / reps as f64;
        let var2 =
            xs.iter().map(|x| (x - mean2) * (x - mean2)).sum::<f64>() / (reps as f64 - 1.0);
        assert!((var2 / reference - 1.0).abs() < 0.05, "swapped ratio {}", var2 / reference);
    }

    #[test]
    fn statistic_vanishes_for_constants() {
        let mut rng = seeded(12);
        let c = TestFunction::Constant(7.0);
        for _ in 0..10 {
            let v = sampling_clt_statistic(50, 20, &c, &mut rng);
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_grid_mean_matches_float() {
        let g = TestFunction::Square;
        let exact = exact::grid_mean(9, &g).unwrap().to_f64().unwrap();
        assert_abs_diff_eq!(exact, grid_mean(9, &g), epsilon = 1e-14);
    }
}
