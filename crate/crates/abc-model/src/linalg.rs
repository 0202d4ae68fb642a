//! Small linear-algebra kernels: a generic cyclic-tridiagonal elimination
//! (usable with exact rationals or doubles), a generic dense solve for tiny
//! systems, and a GTH stationary solver for stochastic matrices.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Zero};

/// Scalar bound shared by `f64` and `BigRational`.
pub trait Scalar:
    Clone
    + Zero
    + One
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for num::BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        num::BigRational::new(num.into(), den.into())
    }
}

/// Cyclic tridiagonal matrix: `diag[i]` on the diagonal, `sub[i] = A[i][i-1]`,
/// `sup[i] = A[i][i+1]`, indices mod `n` (so `sub[0]` and `sup[n-1]` are the
/// corner entries).
#[derive(Debug, Clone)]
pub struct CyclicTridiag<S> {
    pub diag: Vec<S>,
    pub sub: Vec<S>,
    pub sup: Vec<S>,
}

impl<S: Scalar> CyclicTridiag<S> {
    /// Solve `A x = b` by banded Gaussian elimination with last-column and
    /// last-row fill-in. No pivoting: intended for diagonally dominant
    /// systems (absorbing-chain `I - Q` matrices).
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.diag.len();
        assert!(n >= 3, "cyclic tridiagonal solve needs n >= 3");
        assert_eq!(b.len(), n);
        // Band rows 0..n-2 carry (diag, sup-within-band, last_col); row n-1
        // is kept dense and eliminated entry by entry.
        let mut diag: Vec<S> = self.diag.clone();
        let sup: Vec<S> = self.sup.clone();
        let sub: Vec<S> = self.sub.clone();
        let mut rhs: Vec<S> = b.to_vec();

        // Corners: A[0][n-1] = sub[0]; A[n-1][0] = sup[n-1].
        // Band into last column: A[n-2][n-1] = sup[n-2].
        let mut last_col: Vec<S> = vec![S::zero(); n];
        last_col[0] = sub[0].clone();
        last_col[n - 2] = last_col[n - 2].clone() + sup[n - 2].clone();
        let mut row_last: Vec<S> = vec![S::zero(); n];
        row_last[0] = sup[n - 1].clone();
        row_last[n - 2] = row_last[n - 2].clone() + sub[n - 1].clone();
        let mut row_last_diag = diag[n - 1].clone();

        // sup entry of band row i, valid while the neighbor i+1 is a band row.
        let band_sup = |sup: &[S], i: usize| -> S {
            if i + 1 <= n - 2 {
                sup[i].clone()
            } else {
                S::zero()
            }
        };

        // Forward elimination over the chain 0..n-2.
        for i in 0..n - 1 {
            let pivot = diag[i].clone();
            debug_assert!(pivot != S::zero(), "zero pivot in cyclic solve");
            // Eliminate the subdiagonal of band row i+1.
            if i + 1 <= n - 2 && sub[i + 1] != S::zero() {
                let f = sub[i + 1].clone() / pivot.clone();
                diag[i + 1] = diag[i + 1].clone() - f.clone() * band_sup(&sup, i);
                last_col[i + 1] = last_col[i + 1].clone() - f.clone() * last_col[i].clone();
                rhs[i + 1] = rhs[i + 1].clone() - f * rhs[i].clone();
            }
            // Eliminate entry i of the last row.
            if row_last[i] != S::zero() {
                let f = row_last[i].clone() / pivot;
                if i + 1 <= n - 2 {
                    row_last[i + 1] = row_last[i + 1].clone() - f.clone() * sup[i].clone();
                }
                row_last_diag = row_last_diag - f.clone() * last_col[i].clone();
                rhs[n - 1] = rhs[n - 1].clone() - f * rhs[i].clone();
                row_last[i] = S::zero();
            }
        }

        // Back substitution.
        let mut x = vec![S::zero(); n];
        x[n - 1] = rhs[n - 1].clone() / row_last_diag;
        for i in (0..n - 1).rev() {
            let mut acc = rhs[i].clone() - last_col[i].clone() * x[n - 1].clone();
            if i + 1 <= n - 2 {
                acc = acc - sup[i].clone() * x[i + 1].clone();
            }
            x[i] = acc / diag[i].clone();
        }
        x
    }
}

/// Dense Gaussian elimination with row-search pivoting on zero pivots.
/// For tiny systems (velocity-chain reductions).
pub fn dense_solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Vec<S> {
    let n = a.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| a[r][col] != S::zero())
            .expect("singular system");
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col] == S::zero() {
                continue;
            }
            let f = a[r][col].clone() / pivot.clone();
            for c in col..n {
                a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
            }
            b[r] = b[r].clone() - f * b[col].clone();
        }
    }
    let mut x = vec![S::zero(); n];
    for col in (0..n).rev() {
        let mut acc = b[col].clone();
        for c in col + 1..n {
            acc = acc - a[col][c].clone() * x[c].clone();
        }
        x[col] = acc / a[col][col].clone();
    }
    x
}

/// Stationary distribution of an irreducible stochastic matrix by GTH
/// elimination (no subtractions, so every entry keeps full relative
/// accuracy regardless of conditioning). `p` is row-major `n × n` and is
/// consumed.
pub fn gth_stationary(p: &mut [f64], n: usize) -> Vec<f64> {
    assert_eq!(p.len(), n * n);
    for k in (1..n).rev() {
        let s: f64 = p[k * n..k * n + k].iter().sum();
        let (rows, row_k) = p.split_at_mut(k * n);
        let row_k = &row_k[..k];
        let update = |row: &mut [f64]| {
            row[k] /= s;
            let f = row[k];
            if f != 0.0 {
                for j in 0..k {
                    row[j] += f * row_k[j];
                }
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            rows.par_chunks_mut(n).take(k).for_each(update);
        }
        #[cfg(not(feature = "parallel"))]
        rows.chunks_mut(n).take(k).for_each(update);
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for j in 1..n {
        let mut acc = 0.0;
        for i in 0..j {
            acc += pi[i] * p[i * n + j];
        }
        pi[j] = acc;
    }
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    pi
}
