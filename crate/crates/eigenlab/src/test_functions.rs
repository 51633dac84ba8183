//! Catalog of test functions for linear eigenvalue statistics.
//!
//! Every entry evaluates on all of the real line (spectra fluctuate slightly
//! past the limiting supports), carries an analytic derivative, and declares a
//! Lipschitz bound valid on `[-2,2] U [0,4]`. The polynomial entries also
//! evaluate exactly in rational arithmetic, which the exhaustive sampling
//! checks rely on.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::real::Real;

/// A named real test function with evaluator, derivative and Lipschitz data.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `x`
    Identity,
    /// `x^2`
    Square,
    /// `x^3`
    Cube,
    /// `sin x`
    Sin,
    /// `cos 2x`
    CosTwo,
    /// `1/(1+x^2)`
    Runge,
    /// Smooth bump `exp(-1/(1-u^2))`, `u = (x-1)/0.8`, supported in the bulk
    /// of both limiting supports.
    Bump,
    /// `1/x`; unbounded on both supports, rejected by the variance
    /// functionals.
    Recip,
    /// Constant function.
    Constant(f64),
    /// `base + offset`; used to probe affine invariance.
    Shifted { base: Box<TestFunction>, offset: f64 },
}

const BUMP_CENTER: f64 = 1.0;
const BUMP_RADIUS: f64 = 0.8;

impl TestFunction {
    pub fn eval<T: Real>(&self, x: T) -> T {
        match self {
            TestFunction::Identity => x,
            TestFunction::Square => x * x,
            TestFunction::Cube => x * x * x,
            TestFunction::Sin => x.sin(),
            TestFunction::CosTwo => (x + x).cos(),
            TestFunction::Runge => T::one() / (T::one() + x * x),
            TestFunction::Bump => {
                let u = (x - T::of(BUMP_CENTER)) / T::of(BUMP_RADIUS);
                let w = T::one() - u * u;
                if w <= T::zero() {
                    T::zero()
                } else {
                    (-T::one() / w).exp()
                }
            }
            TestFunction::Recip => x.recip(),
            TestFunction::Constant(c) => T::of(*c),
            TestFunction::Shifted { base, offset } => base.eval(x) + T::of(*offset),
        }
    }

    /// Analytic derivative.
    pub fn deriv<T: Real>(&self, x: T) -> T {
        match self {
            TestFunction::Identity => T::one(),
            TestFunction::Square => x + x,
            TestFunction::Cube => T::of(3.0) * x * x,
            TestFunction::Sin => x.cos(),
            TestFunction::CosTwo => -T::of(2.0) * (x + x).sin(),
            TestFunction::Runge => {
                let d = T::one() + x * x;
                -(x + x) / (d * d)
            }
            TestFunction::Bump => {
                let u = (x - T::of(BUMP_CENTER)) / T::of(BUMP_RADIUS);
                let w = T::one() - u * u;
                if w <= T::zero() {
                    T::zero()
                } else {
                    let f = (-T::one() / w).exp();
                    f * (-(u + u) / (w * w)) / T::of(BUMP_RADIUS)
                }
            }
            TestFunction::Recip => -T::one() / (x * x),
            TestFunction::Constant(_) => T::zero(),
            TestFunction::Shifted { base, .. } => base.deriv(x),
        }
    }

    /// Lipschitz bound on `[-2,2] U [0,4]`.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            TestFunction::Identity => 1.0,
            TestFunction::Square => 8.0,
            TestFunction::Cube => 48.0,
            TestFunction::Sin => 1.0,
            TestFunction::CosTwo => 2.0,
            // max of 2|x|/(1+x^2)^2 is attained at x = 1/sqrt(3)
            TestFunction::Runge => 0.65,
            // numeric max of |f'| is ~0.997 near u = 0.76
            TestFunction::Bump => 1.05,
            TestFunction::Recip => f64::INFINITY,
            TestFunction::Constant(_) => 0.0,
            TestFunction::Shifted { base, .. } => base.lipschitz_bound(),
        }
    }

    /// Whether the function is bounded on `[-2,2] U [0,4]`.
    pub fn bounded(&self) -> bool {
        match self {
            TestFunction::Recip => false,
            TestFunction::Shifted { base, .. } => base.bounded(),
            _ => true,
        }
    }

    /// Exact rational evaluation, available for the polynomial entries.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        match self {
            TestFunction::Identity => Some(x.clone()),
            TestFunction::Square => Some(x * x),
            TestFunction::Cube => Some(x * x * x),
            TestFunction::Constant(c) => BigRational::from_float(*c),
            TestFunction::Shifted { base, offset } => {
                let b = base.eval_rational(x)?;
                Some(b + BigRational::from_float(*offset)?)
            }
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestFunction::Identity => "x".into(),
            TestFunction::Square => "x2".into(),
            TestFunction::Cube => "x3".into(),
            TestFunction::Sin => "sin".into(),
            TestFunction::CosTwo => "cos2x".into(),
            TestFunction::Runge => "runge".into(),
            TestFunction::Bump => "bump".into(),
            TestFunction::Recip => "recip".into(),
            TestFunction::Constant(c) => format!("const:{c}"),
            TestFunction::Shifted { base, offset } => format!("{}+{}", base.name(), offset),
        }
    }

    /// Parse a catalog name as used by configs and the command line.
    pub fn from_name(name: &str) -> Option<TestFunction> {
        match name {
            "x" | "identity" => Some(TestFunction::Identity),
            "x2" | "square" => Some(TestFunction::Square),
            "x3" | "cube" => Some(TestFunction::Cube),
            "sin" => Some(TestFunction::Sin),
            "cos2x" => Some(TestFunction::CosTwo),
            "runge" => Some(TestFunction::Runge),
            "bump" => Some(TestFunction::Bump),
            "recip" => Some(TestFunction::Recip),
            _ => {
                let rest = name.strip_prefix("const:")?;
                rest.parse::<f64>().ok().map(TestFunction::Constant)
            }
        }
    }

    /// Catalog entries in a fixed order.
    pub fn catalog() -> Vec<TestFunction> {
        vec![
            TestFunction::Identity,
            TestFunction::Square,
            TestFunction::Cube,
            TestFunction::Sin,
            TestFunction::CosTwo,
            TestFunction::Runge,
            TestFunction::Bump,
            TestFunction::Recip,
        ]
    }

    /// Bounded Lipschitz catalog entries (the ones admissible for the
    /// variance functionals and CLT experiments).
    pub fn bounded_catalog() -> Vec<TestFunction> {
        Self::catalog().into_iter().filter(|f| f.bounded()).collect()
    }
}

/// Exact rational `t/n`, used when evaluating catalog polynomials on the
/// discrete grid of the sampling lemma.
pub fn grid_rational(t: usize, n: usize) -> BigRational {
    BigRational::new(BigInt::from(t), BigInt::from(n))
}
