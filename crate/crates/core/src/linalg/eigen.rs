//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift QR iteration with deflation.
//! Eigenvectors come from inverse iteration against the original matrix.

use super::{inner, norm, ComplexMatrix, LuDecomposition};
use crate::error::{Error, Result};
use crate::C64;

/// QR sweeps allowed per matrix dimension before giving up.
pub const EIGEN_ITERATIONS_PER_DIM: usize = 100;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // H <- (I - 2vv†) H
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= 2.0 * v[r] * s;
            }
        }
        // H <- H (I - 2vv†)
        for i in 0..n {
            let s: C64 = (0..v.len()).map(|r| h[(i, k + 1 + r)] * v[r]).sum();
            for r in 0..v.len() {
                h[(i, k + 1 + r)] -= 2.0 * s * v[r].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Unitary rotation `[[c, s], [-s̄, c]]` that zeroes `b` in `(a, b)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of `a`, in the order they deflate (unsorted).
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    let max_iter = EIGEN_ITERATIONS_PER_DIM * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let sub = h[(l, l - 1)].norm();
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::EigenFailure { iterations: total });
        }

        let mu = if since_deflation.is_multiple_of(11) {
            // exceptional shift breaks rare cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + c * y;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = l + idx;
            let last = (k + 2).min(hi);
            for i in l..=last {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = c * x + s.conj() * y;
                h[(i, k + 1)] = -s * x + c * y;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }

    Ok((0..n).map(|i| h[(i, i)]).collect())
}

fn start_vector(n: usize, seed: usize) -> Vec<C64> {
    (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * (seed as f64 + 1.618_033_988_749_895);
            C64::new(1.0 + 0.5 * t.sin(), 0.25 * (1.7 * t).cos())
        })
        .collect()
}

/// Unit eigenvector of `a` for the (approximate) eigenvalue `lambda` by
/// shifted inverse iteration. Vectors in `orthogonal_to` are projected out on
/// every step, which separates eigenvectors of a degenerate cluster.
pub fn inverse_iteration(a: &ComplexMatrix, lambda: C64, orthogonal_to: &[Vec<C64>]) -> Result<Vec<C64>> {
    let n = a.dim();
    let scale = a.max_abs().max(1.0);
    let mut offset = 1e-10 * scale;
    let lu = loop {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda + C64::new(offset, 0.5 * offset);
        }
        match LuDecomposition::new(&shifted) {
            Ok(lu) => break lu,
            Err(_) if offset < 1e-4 * scale => offset *= 10.0,
            Err(e) => return Err(e),
        }
    };

    let mut v = start_vector(n, orthogonal_to.len());
    for _ in 0..4 {
        for u in orthogonal_to {
            let p = inner(u, &v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
        }
        v = lu.solve(&v);
        let nv = norm(&v);
        if !(nv.is_finite() && nv > 0.0) {
            return Err(Error::EigenFailure { iterations: 0 });
        }
        v.iter_mut().for_each(|z| *z /= nv);
    }
    Ok(v)
}
