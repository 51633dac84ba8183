//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit QL with Wilkinson-style shifts.
//!
//! The eigenvalue-only path works on full symmetric storage so the inner
//! loops are contiguous row operations; the with-vectors path is the classic
//! accumulate-as-you-go variant and is only used where eigenvectors are
//! needed (residual checks).

use ndarray::Array2;

use crate::real::Real;

/// QL failed to deflate within the iteration budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoConvergence;

/// Reduce the symmetric matrix in `a` (flat row-major, full storage) to
/// tridiagonal form, returning the diagonal in `d` and the subdiagonal in
/// `e[1..]`. Contents of `a` are destroyed.
fn tridiagonalize<T: Real>(a: &mut [T], n: usize, d: &mut [T], e: &mut [T]) {
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for i in (1..n).rev() {
        if i == 1 {
            e[1] = a[n];
            continue;
        }
        let row = &a[i * n..i * n + i];
        let scale: T = row.iter().fold(T::zero(), |acc, x| acc + x.abs());
        if scale == T::zero() {
            e[i] = T::zero();
            continue;
        }
        let mut h = T::zero();
        for k in 0..i {
            v[k] = row[k] / scale;
            h += v[k] * v[k];
        }
        let f = v[i - 1];
        let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        v[i - 1] = f - g;
        // p = A v / h over the leading i x i block
        for (j, pj) in p.iter_mut().enumerate().take(i) {
            let arow = &a[j * n..j * n + i];
            let mut acc = T::zero();
            for k in 0..i {
                acc += arow[k] * v[k];
            }
            *pj = acc / h;
        }
        let mut vp = T::zero();
        for k in 0..i {
            vp += v[k] * p[k];
        }
        let kappa = vp / (h + h);
        // q = p - kappa v, then the symmetric rank-2 downdate
        for k in 0..i {
            p[k] -= kappa * v[k];
        }
        for j in 0..i {
            let vj = v[j];
            let qj = p[j];
            let arow = &mut a[j * n..j * n + i];
            for k in 0..i {
                arow[k] -= vj * p[k] + qj * v[k];
            }
        }
    }
    e[0] = T::zero();
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

#[inline]
fn sign_of<T: Real>(magnitude: T, sign: T) -> T {
    if sign >= T::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Implicit QL with shifts on a tridiagonal matrix `(d, e)`; `e[i]` couples
/// rows `i` and `i+1` (so `e[n-1]` is unused). Mutates `d` into the
/// (unsorted) eigenvalues.
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T]) -> Result<(), NoConvergence> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// All eigenvalues of the symmetric matrix stored flat in `a` (destroyed),
/// sorted ascending.
pub(crate) fn symmetric_eigenvalues_flat<T: Real>(
    a: &mut [T],
    n: usize,
) -> Result<Vec<T>, NoConvergence> {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(a, n, &mut d, &mut e);
    // shift the subdiagonal to the coupling convention of ql_implicit
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = T::zero();
    }
    ql_implicit(&mut d, &mut e)?;
    d.sort_unstable_by(|x, y| x.partial_cmp(y).expect("eigenvalues are not NaN"));
    Ok(d)
}

/// Eigenvalues and orthonormal eigenvectors (as matrix columns), classic
/// tridiagonalize-with-accumulation followed by QL with vector updates.
pub(crate) fn symmetric_eigen_with_vectors_flat<T: Real>(
    a: &mut [T],
    n: usize,
) -> Result<(Vec<T>, Array2<T>), NoConvergence> {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];

    // tridiagonalization, accumulating the transform into `a`
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let mut scale = T::zero();
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == T::zero() {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut fsum = T::zero();
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = T::zero();
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    fsum += e[j] * a[i * n + j];
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] = a[j * n + k] - f * e[k] - g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = T::zero();
    e[0] = T::zero();
    for i in 0..n {
        if d[i] != T::zero() {
            for j in 0..i {
                let mut g = T::zero();
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] = a[k * n + j] - g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = T::one();
        for j in 0..i {
            a[j * n + i] = T::zero();
            a[i * n + j] = T::zero();
        }
    }

    // QL with implicit shifts, rotating the accumulated vectors along
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = T::zero();
    }
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let f = a[k * n + i + 1];
                    a[k * n + i + 1] = s * a[k * n + i] + c * f;
                    a[k * n + i] = c * a[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    // sort eigenvalues ascending, permuting the vector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&x, &y| d[x].partial_cmp(&d[y]).expect("eigenvalues are not NaN"));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Array2::<T>::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = a[row * n + old_col];
        }
    }
    Ok((values, vectors))
}
