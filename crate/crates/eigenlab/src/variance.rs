//! Limiting variances of linear eigenvalue statistics.
//!
//! For a test function `f` and entry moments `(m4, sigma2)`, the Wigner
//! variance functional is a sum of three terms:
//!
//! 1. a double integral of the squared divided difference of `f` against the
//!    kernel `(4-xy) / (sqrt(4-x^2) sqrt(4-y^2))` over `[-2,2]^2`;
//! 2. `(m4-3)/(2 pi^2)` times the square of `integral f(x)(2-x^2)/sqrt(4-x^2)`;
//! 3. `(sigma2-2)/(4 pi^2)` times the square of `integral f(x) x/sqrt(4-x^2)`.
//!
//! The sample covariance functional is the same double integral after the
//! shift `u = x-2`, plus a fourth-moment term with kernel `(x-2)` over
//! `sqrt(4-(x-2)^2)`; whether `f` multiplies that integrand is configurable
//! (see [`ScSecondTerm`]), because the two conventions differ materially: the
//! bare integrand is odd, so its integral vanishes identically and the
//! fourth-moment term would be dead for every `f`, contradicting the direct
//! entry-level computation `Var(tr A) = m4 - 1`. The default keeps `f`.
//!
//! All integrals run on Gauss-Chebyshev (first kind) grids after the
//! substitution `x = 2 cos(theta)`, which absorbs the edge weight exactly.
//! The inner (`y`) grid is the half-step-shifted trapezoid grid, so `x = y`
//! never occurs at paired nodes; the divided difference still guards the
//! near-diagonal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{cheb1_lobatto_rule, cheb1_nodes};
use crate::real::Real;
use crate::test_functions::TestFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VarianceError {
    #[error("test function '{0}' is unbounded on the support")]
    UnboundedTestFunction(String),
    #[error("need at least 32 quadrature nodes, got {0}")]
    TooFewNodes(usize),
    #[error("m4 must be >= 1 and sigma2 >= 0, got m4={m4}, sigma2={sigma2}")]
    InvalidMoments { m4: f64, sigma2: f64 },
    #[error("quadrature did not converge: node doubling moved the total by {delta}")]
    NonConvergence { delta: f64 },
}

/// Convention for the fourth-moment term of the sample covariance
/// functional.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScSecondTerm {
    /// `(m4-3)/(4 pi^2) * (integral f(x) (x-2)/sqrt(4-(x-2)^2) dx)^2`.
    #[default]
    WithTestFunction,
    /// The literal odd integrand without `f`; identically zero.
    Verbatim,
}

/// Term-by-term value of a variance functional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceReport<T> {
    pub main_term: T,
    pub fourth_moment_term: T,
    pub diagonal_term: T,
    pub total: T,
    /// Nodes per axis actually used for the reported values (the requested
    /// count is doubled once as a convergence check and the refined grid is
    /// what gets reported).
    pub node_count: usize,
}

/// Divided difference `(f(x) - f(y))/(x - y)`, falling back to the analytic
/// derivative at the midpoint when the gap is below `1e-8 max(1,|x|,|y|)`.
pub fn divided_difference<T: Real>(f: &TestFunction, x: T, y: T) -> T {
    divided_difference_cached(f, x, y, f.eval(x), f.eval(y))
}

#[inline]
fn divided_difference_cached<T: Real>(f: &TestFunction, x: T, y: T, fx: T, fy: T) -> T {
    let scale = T::one().max(x.abs()).max(y.abs());
    if (x - y).abs() > T::of(1e-8) * scale {
        (fx - fy) / (x - y)
    } else {
        f.deriv((x + y) * T::of(0.5))
    }
}

struct Terms<T> {
    main: T,
    fourth: T,
    diagonal: T,
}

/// Shared tensor-grid evaluation. `shift` moves the evaluation points from
/// `[-2,2]` (Wigner, shift 0) to `[0,4]` (sample covariance, shift 2);
/// `swap_grids` exchanges the roles of the two theta grids (used by tests to
/// confirm the symmetry of the main term).
fn evaluate_terms<T: Real>(
    f: &TestFunction,
    n: usize,
    shift: T,
    swap_grids: bool,
) -> (T, T, T) {
    let pi = T::PI();
    let gauss = cheb1_nodes::<T>(n);
    let wg = pi / T::of_usize(n);
    let (lob, lob_w) = cheb1_lobatto_rule::<T>(n);

    let (xs, xw): (Vec<T>, Vec<T>) = if swap_grids {
        (lob.clone(), lob_w.clone())
    } else {
        (gauss.clone(), vec![wg; n])
    };
    let (ys, yw): (Vec<T>, Vec<T>) = if swap_grids {
        (gauss, vec![wg; n])
    } else {
        (lob, lob_w)
    };

    let two = T::of(2.0);
    let four = T::of(4.0);
    let fx: Vec<T> = xs.iter().map(|&t| f.eval(two * t + shift)).collect();
    let fy: Vec<T> = ys.iter().map(|&t| f.eval(two * t + shift)).collect();

    let mut main = T::zero();
    for (i, &s) in xs.iter().enumerate() {
        let x = two * s + shift;
        let mut row = T::zero();
        for (j, &t) in ys.iter().enumerate() {
            let y = two * t + shift;
            let d = divided_difference_cached(f, x, y, fx[i], fy[j]);
            row += yw[j] * d * d * (four - four * s * t);
        }
        main += xw[i] * row;
    }
    main /= two * pi * pi;

    // single integrals on the Gauss grid against the first-kind weight
    let gauss2 = cheb1_nodes::<T>(n);
    let mut even_kernel = T::zero(); // f(x) (2 - u^2), u = x - shift
    let mut odd_kernel = T::zero(); // f(x) u
    for &t in &gauss2 {
        let u = two * t;
        let v = f.eval(u + shift);
        even_kernel += wg * v * (two - u * u);
        odd_kernel += wg * v * u;
    }
    (main, even_kernel, odd_kernel)
}

fn wigner_terms<T: Real>(f: &TestFunction, m4: T, sigma2: T, n: usize) -> Terms<T> {
    let pi = T::PI();
    let (main, even_kernel, odd_kernel) = evaluate_terms(f, n, T::zero(), false);
    let fourth = (m4 - T::of(3.0)) / (T::of(2.0) * pi * pi) * even_kernel * even_kernel;
    let diagonal = (sigma2 - T::of(2.0)) / (T::of(4.0) * pi * pi) * odd_kernel * odd_kernel;
    Terms { main, fourth, diagonal }
}

fn sc_terms<T: Real>(f: &TestFunction, m4: T, n: usize, convention: ScSecondTerm) -> Terms<T> {
    let pi = T::PI();
    let (main, _, odd_kernel) = evaluate_terms(f, n, T::of(2.0), false);
    let kernel = match convention {
        ScSecondTerm::WithTestFunction => odd_kernel,
        ScSecondTerm::Verbatim => {
            // integral (x-2)/sqrt(4-(x-2)^2) dx over [0,4]
            let gauss = cheb1_nodes::<T>(n);
            let wg = pi / T::of_usize(n);
            gauss.iter().map(|&t| wg * T::of(2.0) * t).sum()
        }
    };
    let fourth = (m4 - T::of(3.0)) / (T::of(4.0) * pi * pi) * kernel * kernel;
    Terms { main, fourth, diagonal: T::zero() }
}

fn validate(f: &TestFunction, m4: f64, sigma2: f64, nodes: usize) -> Result<(), VarianceError> {
    if !f.bounded() {
        return Err(VarianceError::UnboundedTestFunction(f.name()));
    }
    if nodes < 32 {
        return Err(VarianceError::TooFewNodes(nodes));
    }
    if !(m4 >= 1.0) || !(sigma2 >= 0.0) {
        return Err(VarianceError::InvalidMoments { m4, sigma2 });
    }
    Ok(())
}

fn report_with_refinement<T: Real>(
    coarse: Terms<T>,
    fine: Terms<T>,
    node_count: usize,
) -> Result<VarianceReport<T>, VarianceError> {
    let total_coarse = coarse.main + coarse.fourth + coarse.diagonal;
    let total_fine = fine.main + fine.fourth + fine.diagonal;
    let delta = (total_fine - total_coarse).abs().to_f64_lossy();
    if delta > 1e-7 {
        return Err(VarianceError::NonConvergence { delta });
    }
    Ok(VarianceReport {
        main_term: fine.main,
        fourth_moment_term: fine.fourth,
        diagonal_term: fine.diagonal,
        total: total_fine,
        node_count,
    })
}

/// Limiting variance of centered `tr f(M)` for Wigner matrices with
/// off-diagonal fourth moment `m4` and diagonal variance `sigma2`.
pub fn wigner_variance<T: Real>(
    f: &TestFunction,
    m4: T,
    sigma2: T,
    nodes: usize,
) -> Result<VarianceReport<T>, VarianceError> {
    validate(f, m4.to_f64_lossy(), sigma2.to_f64_lossy(), nodes)?;
    let coarse = wigner_terms(f, m4, sigma2, nodes);
    let fine = wigner_terms(f, m4, sigma2, nodes * 2);
    report_with_refinement(coarse, fine, nodes * 2)
}

/// Limiting variance of centered `tr f(A)` for sample covariance matrices
/// with entry fourth moment `m4`.
pub fn sc_variance<T: Real>(
    f: &TestFunction,
    m4: T,
    nodes: usize,
    convention: ScSecondTerm,
) -> Result<VarianceReport<T>, VarianceError> {
    validate(f, m4.to_f64_lossy(), 0.0, nodes)?;
    let coarse = sc_terms(f, m4, nodes, convention);
    let fine = sc_terms(f, m4, nodes * 2, convention);
    report_with_refinement(coarse, fine, nodes * 2)
}

/// Default per-axis node count.
pub const DEFAULT_NODES: usize = 256;
