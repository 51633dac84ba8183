//! Spectra and the linear / partial linear eigenvalue statistics built from
//! them.
//!
//! A partial statistic discards `k` of the `n` eigenvalues. Two equivalent
//! randomizations are provided: summing the first `n-k` entries of a
//! uniformly permuted spectrum, and subtracting a without-replacement sample
//! of `k` eigenvalues from the full statistic. The randomness is always
//! independent of the matrix (callers pass a dedicated stream).

pub mod eigen;

use ndarray::Array2;
use rand::Rng;
use thiserror::Error;

use crate::real::Real;
use crate::test_functions::TestFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: |a[{i},{j}] - a[{j},{i}]| = {delta}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("QL iteration failed to converge")]
    NoConvergence,
    #[error("cannot drop k={k} eigenvalues out of n={n}")]
    KOutOfRange { k: usize, n: usize },
}

/// Ordered eigenvalues of one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Wrap a set of eigenvalues, sorting them ascending.
    pub fn from_values(mut values: Vec<T>) -> Self {
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("eigenvalues are not NaN"));
        Spectrum { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, nondecreasing.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// 1-based ordered eigenvalue access.
    pub fn lambda(&self, j: usize) -> T {
        self.values[j - 1]
    }
}

fn check_symmetric<T: Real>(m: &Array2<T>) -> Result<(), SpectraError> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(SpectraError::NotSquare { rows, cols });
    }
    let max_abs = m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let tol = T::of(1e-12).max(T::epsilon() * T::of(8.0) * max_abs);
    for i in 0..rows {
        for j in (i + 1)..cols {
            let delta = (m[(i, j)] - m[(j, i)]).abs();
            if delta > tol {
                return Err(SpectraError::NotSymmetric { i, j, delta: delta.to_f64_lossy() });
            }
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, sorted ascending.
pub fn eigenvalues_sym<T: Real>(m: &Array2<T>) -> Result<Spectrum<T>, SpectraError> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut flat: Vec<T> = m.iter().copied().collect();
    let values = eigen::symmetric_eigenvalues_flat(&mut flat, n)
        .map_err(|_| SpectraError::NoConvergence)?;
    Ok(Spectrum { values })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors as matrix columns.
pub fn eigen_sym_with_vectors<T: Real>(
    m: &Array2<T>,
) -> Result<(Spectrum<T>, Array2<T>), SpectraError> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut flat: Vec<T> = m.iter().copied().collect();
    let (values, vectors) = eigen::symmetric_eigen_with_vectors_flat(&mut flat, n)
        .map_err(|_| SpectraError::NoConvergence)?;
    Ok((Spectrum { values }, vectors))
}

/// Full linear eigenvalue statistic `sum_i f(lambda_i)`.
pub fn linear_stat<T: Real>(spectrum: &Spectrum<T>, f: &TestFunction) -> T {
    spectrum.values.iter().map(|&x| f.eval(x)).sum()
}

/// How a partial statistic was randomized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialMode {
    /// First `n-k` entries of a uniformly permuted spectrum.
    UnorderedPrefix,
    /// Full statistic minus a without-replacement sample of size `k`.
    SamplingComplement,
}

/// Value of a partial linear eigenvalue statistic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialStatResult<T> {
    pub value: T,
    pub k: usize,
    pub mode: PartialMode,
}

/// `sum_{i=1}^{n-k} f(lambda_{pi(i)})` for a uniform permutation `pi` drawn
/// from `rng`, independent of the spectrum.
pub fn partial_stat_unordered<T: Real, R: Rng + ?Sized>(
    spectrum: &Spectrum<T>,
    f: &TestFunction,
    k: usize,
    rng: &mut R,
) -> Result<PartialStatResult<T>, SpectraError> {
    let n = spectrum.n();
    if k > n {
        return Err(SpectraError::KOutOfRange { k, n });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    fisher_yates(&mut indices, rng);
    let value = indices[..n - k].iter().map(|&i| f.eval(spectrum.values[i])).sum();
    Ok(PartialStatResult { value, k, mode: PartialMode::UnorderedPrefix })
}

/// `L_n[f] - sum_{j=1}^k f(lambda_{xi_j})` for a without-replacement sample
/// `(xi_1, ..., xi_k)` drawn from `rng`, independent of the spectrum.
pub fn partial_stat_sampling<T: Real, R: Rng + ?Sized>(
    spectrum: &Spectrum<T>,
    f: &TestFunction,
    k: usize,
    rng: &mut R,
) -> Result<PartialStatResult<T>, SpectraError> {
    let n = spectrum.n();
    if k > n {
        return Err(SpectraError::KOutOfRange { k, n });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    partial_fisher_yates(&mut indices, k, rng);
    let dropped: T = indices[..k].iter().map(|&i| f.eval(spectrum.values[i])).sum();
    let value = linear_stat(spectrum, f) - dropped;
    Ok(PartialStatResult { value, k, mode: PartialMode::SamplingComplement })
}

/// Normalization `alpha_{n,k} = sqrt(n / (k (n-k)))`.
pub fn alpha<T: Real>(n: usize, k: usize) -> T {
    assert!(k > 0 && k < n, "alpha requires 0 < k < n, got k={k}, n={n}");
    (T::of_usize(n) / (T::of_usize(k) * T::of_usize(n - k))).sqrt()
}

/// Uniform shuffle; Durstenfeld's form of the Fisher-Yates walk.
pub(crate) fn fisher_yates<R: Rng + ?Sized>(items: &mut [usize], rng: &mut R) {
    let n = items.len();
    partial_fisher_yates(items, n.saturating_sub(1), rng);
}

/// Shuffle only the first `k` positions; after the call, `items[..k]` is a
/// uniform without-replacement sample.
pub(crate) fn partial_fisher_yates<R: Rng + ?Sized>(items: &mut [usize], k: usize, rng: &mut R) {
    let n = items.len();
    for i in 0..k.min(n.saturating_sub(1)) {
        let j = i + rng.random_range(0..n - i);
        items.swap(i, j);
    }
}
