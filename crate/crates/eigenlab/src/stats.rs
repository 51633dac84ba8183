//! Empirical-distribution machinery: exact Kolmogorov-Smirnov distances and
//! the normal reference CDF.

/// Standard normal CDF.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// CDF of `N(0, variance)`. A zero-variance reference degenerates to a step
/// at the origin.
pub fn normal_cdf(x: f64, variance: f64) -> f64 {
    if variance <= 0.0 {
        return if x < 0.0 { 0.0 } else { 1.0 };
    }
    standard_normal_cdf(x / variance.sqrt())
}

fn sorted_copy(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("samples must not contain NaN"));
    v
}

/// One-sample Kolmogorov-Smirnov distance `sup_x |F_n(x) - F(x)|`, evaluated
/// exactly at the jump points (both one-sided gaps at every distinct sample
/// value).
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty(), "KS distance needs a nonempty sample");
    let xs = sorted_copy(samples);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let below = i as f64 / n;
        let above = j as f64 / n;
        d = d.max((f - below).abs()).max((above - f).abs());
        i = j;
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance `sup_x |F_a(x) - F_b(x)|` via a
/// merge walk over both sorted samples, tie-correct.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS distance needs nonempty samples");
    let xa = sorted_copy(a);
    let xb = sorted_copy(b);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() || j < xb.len() {
        let x = match (xa.get(i), xb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Raw sample moments of orders 1..=4.
pub fn raw_moments(xs: &[f64]) -> [f64; 4] {
    let n = xs.len() as f64;
    let mut m = [0.0; 4];
    for &x in xs {
        let x2 = x * x;
        m[0] += x;
        m[1] += x2;
        m[2] += x2 * x;
        m[3] += x2 * x2;
    }
    m.map(|s| s / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_cdf_reference_points() {
        assert_abs_diff_eq!(standard_normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(standard_normal_cdf(1.0), 0.8413447460685429, epsilon = 1e-12);
        assert_abs_diff_eq!(standard_normal_cdf(-1.96), 0.024997895148220435, epsilon = 1e-12);
    }

    #[test]
    fn one_sample_single_atom_at_median() {
        let d = ks_one_sample(&[0.0], standard_normal_cdf);
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn one_sample_exact_small_case() {
        // Uniform(0,1) reference, samples {0.1, 0.5, 0.9}:
        // gaps are max at 0.5 (|2/3 - 0.5| and |1/3 - 0.5|) and ends.
        let d = ks_one_sample(&[0.5, 0.1, 0.9], |x| x.clamp(0.0, 1.0));
        assert_abs_diff_eq!(d, 0.2333333333333334, epsilon = 1e-12);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(ks_two_sample(&a, &b), 0.0);
    }

    #[test]
    fn two_sample_known_values() {
        let a = [1.0, 1.0, 4.0, 4.0];
        let b = [1.0, 1.0, 1.0, 4.0];
        assert_abs_diff_eq!(ks_two_sample(&a, &b), 0.25, epsilon = 1e-15);

        let c = [0.0, 1.0];
        let d = [10.0, 11.0];
        assert_abs_diff_eq!(ks_two_sample(&c, &d), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_sample_handles_unequal_sizes_and_ties() {
        let a = [0.0, 0.0, 1.0];
        let b = [0.0, 2.0];
        // At x=0: |2/3 - 1/2| = 1/6; at x=1: |1 - 1/2| = 1/2.
        assert_abs_diff_eq!(ks_two_sample(&a, &b), 0.5, epsilon = 1e-15);
    }
}
