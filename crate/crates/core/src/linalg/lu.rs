//! Dense complex LU factorization with partial pivoting.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Pivots smaller than this are treated as exact zeros.
pub const SINGULAR_PIVOT: f64 = 1e-300;

/// Ratio of largest to smallest pivot above which a conditioning warning is logged.
pub const PIVOT_RATIO_WARNING: f64 = 1e12;

/// `P A = L U` with unit-diagonal `L`, both factors packed into one matrix.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    pivot_ratio: f64,
}

impl LuDecomposition {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            // first row wins on ties, so pivoting is deterministic
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best >= SINGULAR_PIVOT) {
                return Err(Error::SingularMatrix { pivot: best });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            max_pivot = max_pivot.max(best);
            min_pivot = min_pivot.min(best);

            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }

        let pivot_ratio = if n == 0 { 1.0 } else { max_pivot / min_pivot };
        if pivot_ratio > PIVOT_RATIO_WARNING {
            log::debug!("ill-conditioned LU factorization: pivot ratio {pivot_ratio:.3e}");
        }
        Ok(Self {
            lu,
            perm,
            swaps,
            pivot_ratio,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    /// Largest over smallest pivot modulus; a cheap conditioning indicator.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut inv = ComplexMatrix::zeros(n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }

    pub fn determinant(&self) -> C64 {
        let mut det = if self.swaps.is_multiple_of(2) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        };
        for i in 0..self.dim() {
            det *= self.lu[(i, i)];
        }
        det
    }
}

/// Inverse of a square complex matrix.
pub fn invert(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(LuDecomposition::new(m)?.inverse())
}
