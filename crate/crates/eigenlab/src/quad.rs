//! Quadrature rules used by the limit laws and variance functionals.
//!
//! The integrands of interest all carry inverse-square-root edge factors on
//! `[-2,2]` (directly, or on `[0,4]` after the shift `u = x-2`). Chebyshev-type
//! rules absorb those factors exactly:
//!
//! * first kind, weight `1/sqrt(1-t^2)`: nodes `cos((k-1/2)pi/n)`, uniform
//!   weight `pi/n`;
//! * second kind, weight `sqrt(1-t^2)`: nodes `cos(k pi/(n+1))`;
//! * fourth kind, weight `sqrt((1-t)/(1+t))`: nodes `cos(2k pi/(2n+1))`.
//!
//! Each rule integrates polynomials up to degree `2n-1` exactly against its
//! weight, and converges spectrally for smooth integrands.

use crate::real::Real;

/// Nodes of the n-point Gauss-Chebyshev rule of the first kind, mapped to
/// `[-1,1]`. The common weight is `pi/n`.
pub fn cheb1_nodes<T: Real>(n: usize) -> Vec<T> {
    let pi = T::PI();
    let nf = T::of_usize(n);
    (1..=n)
        .map(|k| ((T::of_usize(k) - T::of(0.5)) * pi / nf).cos())
        .collect()
}

/// Trapezoid grid in the Chebyshev angle: `t_j = cos(j pi / n)`, `j = 0..=n`,
/// with endpoint weights halved. Integrates against the first-kind weight
/// (`pi/n` interior, `pi/2n` at the ends) with spectral accuracy; its nodes
/// interlace [`cheb1_nodes`], so no node of one grid coincides with a node of
/// the other.
pub fn cheb1_lobatto_rule<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let pi = T::PI();
    let nf = T::of_usize(n);
    let w = pi / nf;
    let half = T::of(0.5);
    let nodes: Vec<T> = (0..=n).map(|j| (T::of_usize(j) * pi / nf).cos()).collect();
    let weights: Vec<T> = (0..=n)
        .map(|j| if j == 0 || j == n { w * half } else { w })
        .collect();
    (nodes, weights)
}

/// n-point Gauss-Chebyshev rule of the second kind on `[-1,1]`:
/// `integral h(t) sqrt(1-t^2) dt ~ sum w_k h(t_k)`.
pub fn cheb2_rule<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let pi = T::PI();
    let m = T::of_usize(n + 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = T::of_usize(k) * pi / m;
        nodes.push(theta.cos());
        weights.push(pi / m * theta.sin() * theta.sin());
    }
    (nodes, weights)
}

/// n-point Gauss-Chebyshev rule of the fourth kind on `[-1,1]`:
/// `integral h(t) sqrt((1-t)/(1+t)) dt ~ sum w_k h(t_k)`.
pub fn cheb4_rule<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let pi = T::PI();
    let m = T::of_usize(2 * n + 1);
    let four = T::of(4.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 1..=n {
        let kf = T::of_usize(k);
        nodes.push((T::of(2.0) * kf * pi / m).cos());
        let s = (kf * pi / m).sin();
        weights.push(four * pi / m * s * s);
    }
    (nodes, weights)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Intended for smooth, rapidly decaying integrands (truncated-moment
/// tails); panics are avoided by a fixed depth cap.
pub fn adaptive_simpson<T: Real>(f: &dyn Fn(T) -> T, a: T, b: T, tol: T) -> T {
    fn simpson<T: Real>(fa: T, fm: T, fb: T, h: T) -> T {
        h / T::of(6.0) * (fa + T::of(4.0) * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<T: Real>(
        f: &dyn Fn(T) -> T,
        a: T,
        b: T,
        fa: T,
        fm: T,
        fb: T,
        whole: T,
        tol: T,
        depth: u32,
    ) -> T {
        let m = (a + b) * T::of(0.5);
        let lm = (a + m) * T::of(0.5);
        let rm = (m + b) * T::of(0.5);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= T::of(15.0) * tol {
            left + right + delta / T::of(15.0)
        } else {
            let half_tol = tol * T::of(0.5);
            recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
        }
    }

    let m = (a + b) * T::of(0.5);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cheb1_integrates_even_powers() {
        // integral t^2 / sqrt(1-t^2) dt = pi/2 over [-1,1]
        let nodes = cheb1_nodes::<f64>(32);
        let w = std::f64::consts::PI / 32.0;
        let got: f64 = nodes.iter().map(|t| w * t * t).sum();
        assert_relative_eq!(got, std::f64::consts::PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn cheb1_lobatto_matches_gauss_on_smooth_integrand() {
        let gauss = cheb1_nodes::<f64>(64);
        let wg = std::f64::consts::PI / 64.0;
        let (nodes, weights) = cheb1_lobatto_rule::<f64>(64);
        let f = |t: f64| (2.0 * t).sin().exp();
        let a: f64 = gauss.iter().map(|&t| wg * f(t)).sum();
        let b: f64 = nodes.iter().zip(&weights).map(|(&t, &w)| w * f(t)).sum();
        assert_relative_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn grids_do_not_share_nodes() {
        let gauss = cheb1_nodes::<f64>(48);
        let (lob, _) = cheb1_lobatto_rule::<f64>(48);
        for x in &gauss {
            for y in &lob {
                assert!((x - y).abs() > 1e-6);
            }
        }
    }

    #[test]
    fn cheb2_total_mass() {
        // integral sqrt(1-t^2) dt = pi/2
        let (_, w) = cheb2_rule::<f64>(16);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, std::f64::consts::PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn cheb4_total_mass_and_first_moment() {
        // integral sqrt((1-t)/(1+t)) dt = pi; integral t sqrt((1-t)/(1+t)) dt = -pi/2
        let (t, w) = cheb4_rule::<f64>(16);
        let total: f64 = w.iter().sum();
        let first: f64 = t.iter().zip(&w).map(|(&t, &w)| t * w).sum();
        assert_relative_eq!(total, std::f64::consts::PI, epsilon = 1e-13);
        assert_relative_eq!(first, -std::f64::consts::PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn simpson_gaussian_tail() {
        // integral_1^inf x^2 phi(x) dx = phi(1) + 1 - Phi(1), doubled below in
        // the caller; here just check against a high-node midpoint sum.
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let f = move |x: f64| x * x * phi(x);
        let got = adaptive_simpson(&f, 1.0, 42.0, 1e-13);
        let mut reference = 0.0;
        let m = 4_000_000usize;
        let h = 41.0 / m as f64;
        for i in 0..m {
            reference += f(1.0 + (i as f64 + 0.5) * h) * h;
        }
        assert_relative_eq!(got, reference, epsilon = 1e-10);
    }
}
