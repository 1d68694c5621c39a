//! Reduced row echelon form, rank, and the four fundamental subspaces.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct RrefResult<T> {
    pub rref: Matrix<T>,
    /// Strictly increasing; the first numerically independent columns.
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
    /// Product of the elementary row operations: `transform · a = rref`.
    pub transform: Matrix<T>,
}

impl<T: Scalar> RrefResult<T> {
    /// The nonzero rows of the echelon form (r×n).
    pub fn nonzero_rows(&self) -> Matrix<T> {
        self.rref.block(0, self.rank, 0, self.rref.cols())
    }

    pub fn free_cols(&self) -> Vec<usize> {
        let mut pivots = self.pivot_cols.iter().peekable();
        (0..self.rref.cols())
            .filter(|j| {
                if pivots.peek() == Some(&j) {
                    pivots.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    /// Special solutions of `rref · x = 0`, one column per free variable.
    pub fn nullspace(&self) -> Matrix<T> {
        let n = self.rref.cols();
        let free = self.free_cols();
        let mut basis = Matrix::zeros(n, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = T::one();
            for (i, &p) in self.pivot_cols.iter().enumerate() {
                basis[(p, k)] = -self.rref[(i, f)].clone();
            }
        }
        basis
    }
}

/// Row-reduces `a`.
///
/// Rationals pivot on the first nonzero entry. Floats first decide which
/// columns are pivots: a column is independent when its distance from the
/// span of the earlier pivot columns, measured with Householder reflections,
/// clears a tolerance (see `independent_columns`). Elimination then pivots on
/// the largest entry at or below the current row of each pivot column.
pub fn rref<T: Scalar>(a: &Matrix<T>) -> RrefResult<T> {
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut transform = Matrix::identity(m);
    let mut pivot_cols = Vec::new();
    let independent = if T::EXACT { Vec::new() } else { independent_columns(a) };
    let mut row = 0;

    for col in 0..n {
        if row == m {
            break;
        }
        let pivot = if T::EXACT {
            (row..m).find(|&i| !work[(i, col)].is_zero())
        } else {
            let best = (row..m).max_by(|&x, &y| {
                work[(x, col)]
                    .magnitude()
                    .total_cmp(&work[(y, col)].magnitude())
            });
            match best {
                Some(p) if independent[col] && !work[(p, col)].is_zero() => Some(p),
                _ => {
                    for i in row..m {
                        work[(i, col)] = T::zero();
                    }
                    None
                }
            }
        };
        let Some(p) = pivot else { continue };

        work.swap_rows(row, p);
        transform.swap_rows(row, p);
        let piv = work[(row, col)].clone();
        work.scale_row(row, &piv);
        transform.scale_row(row, &piv);
        work[(row, col)] = T::one();
        for i in 0..m {
            if i == row || work[(i, col)].is_zero() {
                continue;
            }
            let factor = work[(i, col)].clone();
            work.sub_row_multiple(i, row, &factor);
            transform.sub_row_multiple(i, row, &factor);
            work[(i, col)] = T::zero();
        }
        pivot_cols.push(col);
        row += 1;
    }

    if !T::EXACT {
        // rows past the rank hold only flushed residue
        for i in row..m {
            for j in 0..n {
                work[(i, j)] = T::zero();
            }
        }
    }

    RrefResult {
        rank: pivot_cols.len(),
        rref: work,
        pivot_cols,
        transform,
    }
}

/// Left-to-right column selection by incremental Householder QR.
///
/// The rounding left in a dependent column grows with the conditioning of
/// the columns already selected, so the base tolerance `max(m,n)·ε·‖a‖_F` is
/// scaled by `‖a‖_F / (smallest accepted residual)`.
fn independent_columns<T: Scalar>(a: &Matrix<T>) -> Vec<bool> {
    let (m, n) = a.shape();
    let scale = a.frobenius_norm();
    let base = m.max(n) as f64 * f64::EPSILON * scale;
    let mut min_accepted = f64::INFINITY;
    let mut reflectors: Vec<Vec<f64>> = Vec::new();
    let mut out = vec![false; n];
    for (j, flag) in out.iter_mut().enumerate() {
        let r = reflectors.len();
        if r == m {
            break;
        }
        let mut x: Vec<f64> = (0..m).map(|i| a[(i, j)].to_f64()).collect();
        for (k, v) in reflectors.iter().enumerate() {
            let proj: f64 = 2.0 * x[k..].iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            for (xi, vi) in x[k..].iter_mut().zip(v) {
                *xi -= proj * vi;
            }
        }
        let tail = &x[r..];
        let norm = tail.iter().map(|t| t * t).sum::<f64>().sqrt();
        let kappa = if min_accepted.is_finite() { (scale / min_accepted).max(1.0) } else { 1.0 };
        if norm <= base * kappa {
            continue;
        }
        *flag = true;
        min_accepted = min_accepted.min(norm);
        let mut v = tail.to_vec();
        v[0] += if v[0] >= 0.0 { norm } else { -norm };
        let vnorm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        v.iter_mut().for_each(|t| *t /= vnorm);
        reflectors.push(v);
    }
    out
}

/// Exact rank for rationals, SVD numerical rank for floats.
pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    T::rank(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubspaceKind {
    ColumnSpace,
    RowSpace,
    Nullspace,
    LeftNullspace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T> {
    pub kind: SubspaceKind,
    /// Columns span the subspace and are independent.
    pub basis: Matrix<T>,
    pub ambient_dim: usize,
}

impl<T: Scalar> SubspaceBasis<T> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

pub fn subspace_basis<T: Scalar>(a: &Matrix<T>, kind: SubspaceKind) -> SubspaceBasis<T> {
    let (m, n) = a.shape();
    let (basis, ambient_dim) = match kind {
        SubspaceKind::ColumnSpace => (a.select_columns(&rref(a).pivot_cols), m),
        SubspaceKind::RowSpace => (rref(a).nonzero_rows().transpose(), n),
        SubspaceKind::Nullspace => (rref(a).nullspace(), n),
        SubspaceKind::LeftNullspace => (rref(&a.transpose()).nullspace(), m),
    };
    SubspaceBasis {
        kind,
        basis,
        ambient_dim,
    }
}

/// `C(x) ⊆ C(y)` via `rank([y x]) = rank(y)`.
pub fn column_space_contains<T: Scalar>(y: &Matrix<T>, x: &Matrix<T>) -> Result<bool> {
    let joined = y.hstack(x)?;
    Ok(rank(&joined) == rank(y))
}

/// `C(a) = C(b)` iff `rank(a) = rank(b) = rank([a b])`.
pub fn same_column_space<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::shape("same_column_space", a.shape(), b.shape()));
    }
    let ra = rank(a);
    let rb = rank(b);
    Ok(ra == rb && rank(&a.hstack(b)?) == ra)
}

/// `N(a) = N(b)`, decided as equality of the row spaces.
pub fn same_nullspace<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<bool> {
    if a.cols() != b.cols() {
        return Err(Error::shape("same_nullspace", a.shape(), b.shape()));
    }
    same_column_space(&a.transpose(), &b.transpose())
}
