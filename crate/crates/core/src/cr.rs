//! `A = C·R` with C the first r independent columns of A and R the nonzero
//! rows of its reduced row echelon form.

use crate::echelon::{rank, rref};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CrFactorization<T> {
    /// m×r, full column rank.
    pub c: Matrix<T>,
    /// r×n, full row rank; its pivot columns form the identity.
    pub r_factor: Matrix<T>,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl<T: Scalar> CrFactorization<T> {
    pub fn product(&self) -> Matrix<T> {
        &self.c * &self.r_factor
    }

    pub fn rows(&self) -> usize {
        self.c.rows()
    }

    pub fn cols(&self) -> usize {
        self.r_factor.cols()
    }
}

/// One echelon pass supplies C, R and the rank; nothing downstream re-derives
/// the rank with a different rule.
pub fn cr_factorize<T: Scalar>(a: &Matrix<T>) -> CrFactorization<T> {
    let echelon = rref(a);
    CrFactorization {
        c: a.select_columns(&echelon.pivot_cols),
        r_factor: echelon.nonzero_rows(),
        rank: echelon.rank,
        pivot_cols: echelon.pivot_cols,
    }
}

/// Square invertible completions `[C0 C1]` (m×m) and `[R0; R1]` (n×n) of a
/// CR factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion<T> {
    pub c0: Matrix<T>,
    pub c1: Matrix<T>,
    pub r0: Matrix<T>,
    pub r1: Matrix<T>,
}

impl<T: Scalar> Completion<T> {
    pub fn c_bar(&self) -> Matrix<T> {
        self.c0.hstack(&self.c1).expect("completion rows agree")
    }

    pub fn r_bar(&self) -> Matrix<T> {
        self.r0.vstack(&self.r1).expect("completion cols agree")
    }

    pub fn rank(&self) -> usize {
        self.c0.cols()
    }
}

/// Completes `cr_factorize(a)` by appending standard basis vectors, in index
/// order, whenever they raise the rank.
pub fn complete_to_generalized<T: Scalar>(a: &Matrix<T>) -> Completion<T> {
    let f = cr_factorize(a);
    let (m, n) = a.shape();
    let c1 = extend_columns(&f.c, m);
    let r1 = extend_columns(&f.r_factor.transpose(), n).transpose();
    Completion {
        c0: f.c,
        c1,
        r0: f.r_factor,
        r1,
    }
}

/// Standard basis columns that complete the independent columns of `basis`
/// to a basis of the ambient space.
fn extend_columns<T: Scalar>(basis: &Matrix<T>, ambient: usize) -> Matrix<T> {
    let mut current = basis.clone();
    let mut current_rank = basis.cols();
    let mut chosen = Vec::new();
    for i in 0..ambient {
        if current_rank == ambient {
            break;
        }
        let e = Matrix::from_fn(ambient, 1, |r, _| if r == i { T::one() } else { T::zero() });
        let candidate = current.hstack(&e).expect("same ambient dimension");
        let r = rank(&candidate);
        if r > current_rank {
            current = candidate;
            current_rank = r;
            chosen.push(i);
        }
    }
    Matrix::from_fn(ambient, chosen.len(), |r, j| {
        if r == chosen[j] {
            T::one()
        } else {
            T::zero()
        }
    })
}
