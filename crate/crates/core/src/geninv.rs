//! The block family of generalized inverses of a rank-deficient `A = C₀R₀`
//! and the complete-solution formulas built on a generalized inverse.

use crate::cr::{complete_to_generalized, Completion};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Completion blocks of A plus the free blocks of
/// `G = [R₀;R₁]⁻¹ [[I, z11], [z21, z22]] [C₀ C₁]⁻¹`.
///
/// `z11` is the upper-right block (r×(m−r)), `z21` the lower-left
/// ((n−r)×r) and `z22` the lower-right ((n−r)×(m−r)).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedInverseSpec<T> {
    pub c0: Matrix<T>,
    pub c1: Matrix<T>,
    pub r0: Matrix<T>,
    pub r1: Matrix<T>,
    pub z11: Matrix<T>,
    pub z21: Matrix<T>,
    pub z22: Matrix<T>,
}

impl<T: Scalar> GeneralizedInverseSpec<T> {
    pub fn new(
        completion: Completion<T>,
        z11: Matrix<T>,
        z21: Matrix<T>,
        z22: Matrix<T>,
    ) -> Result<Self> {
        let spec = Self {
            c0: completion.c0,
            c1: completion.c1,
            r0: completion.r0,
            r1: completion.r1,
            z11,
            z21,
            z22,
        };
        spec.check_shapes()?;
        Ok(spec)
    }

    /// Completes `a` and takes the given free blocks.
    pub fn for_matrix(a: &Matrix<T>, z11: Matrix<T>, z21: Matrix<T>, z22: Matrix<T>) -> Result<Self> {
        Self::new(complete_to_generalized(a), z11, z21, z22)
    }

    /// All free blocks zero; the result is the Moore-Penrose inverse only
    /// when the completions are orthogonal, but always a reflexive inverse.
    pub fn with_zero_blocks(a: &Matrix<T>) -> Self {
        let completion = complete_to_generalized(a);
        let (m, n) = a.shape();
        let r = completion.rank();
        let spec = Self {
            z11: Matrix::zeros(r, m - r),
            z21: Matrix::zeros(n - r, r),
            z22: Matrix::zeros(n - r, m - r),
            c0: completion.c0,
            c1: completion.c1,
            r0: completion.r0,
            r1: completion.r1,
        };
        debug_assert!(spec.check_shapes().is_ok());
        spec
    }

    pub fn rank(&self) -> usize {
        self.c0.cols()
    }

    /// (m, n) of the matrix being inverted.
    pub fn target_shape(&self) -> (usize, usize) {
        (self.c0.rows(), self.r0.cols())
    }

    fn check_shapes(&self) -> Result<()> {
        let r = self.c0.cols();
        let m = self.c0.rows();
        let n = self.r0.cols();
        let expect = [
            ("c1", self.c1.shape(), (m, m - r.min(m))),
            ("r0", self.r0.shape(), (r, n)),
            ("r1", self.r1.shape(), (n - r.min(n), n)),
            ("z11", self.z11.shape(), (r, m - r.min(m))),
            ("z21", self.z21.shape(), (n - r.min(n), r)),
            ("z22", self.z22.shape(), (n - r.min(n), m - r.min(m))),
        ];
        for (name, got, want) in expect {
            if got != want {
                return Err(Error::InvalidArgument(format!(
                    "block {name} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )));
            }
        }
        Ok(())
    }

    /// `[[I, z11], [z21, z22]]`, n×m.
    pub fn middle(&self) -> Matrix<T> {
        let r = self.rank();
        let (m, n) = self.target_shape();
        Matrix::from_fn(n, m, |i, j| match (i < r, j < r) {
            (true, true) => {
                if i == j {
                    T::one()
                } else {
                    T::zero()
                }
            }
            (true, false) => self.z11[(i, j - r)].clone(),
            (false, true) => self.z21[(i - r, j)].clone(),
            (false, false) => self.z22[(i - r, j - r)].clone(),
        })
    }

    /// Whether `z22 = z21·z11`, the condition for `GAG = G`.
    pub fn is_reflexive_choice(&self, tol: f64) -> bool {
        T::agree(&self.z22, &(&self.z21 * &self.z11), tol).holds
    }
}

/// `G = [R₀;R₁]⁻¹ · [[I, z11], [z21, z22]] · [C₀ C₁]⁻¹`
pub fn generalized_inverse<T: Scalar>(spec: &GeneralizedInverseSpec<T>) -> Result<Matrix<T>> {
    spec.check_shapes()?;
    let c_bar = spec.c0.hstack(&spec.c1)?;
    let r_bar = spec.r0.vstack(&spec.r1)?;
    let c_inv = c_bar
        .inverse()
        .map_err(|_| Error::Singular { op: "[C0 C1]" })?;
    let r_inv = r_bar
        .inverse()
        .map_err(|_| Error::Singular { op: "[R0; R1]" })?;
    Ok(&(&r_inv * &spec.middle()) * &c_inv)
}

/// `x = Gb + (I − GA)z`, a solution of `Ax = b` whenever `AGA = A` and
/// `b ∈ C(A)`.
///
/// Returns `Error::Inconsistent` with the relative residual of `Ax − b`
/// when the result does not solve the system.
pub fn solve_complete_forward<T: Scalar>(
    a: &Matrix<T>,
    g: &Matrix<T>,
    b: &Matrix<T>,
    z: &Matrix<T>,
    tol: f64,
) -> Result<Matrix<T>> {
    let (m, n) = a.shape();
    if g.shape() != (n, m) {
        return Err(Error::shape("solve_complete_forward", a.shape(), g.shape()));
    }
    if b.rows() != m || z.rows() != n || b.cols() != z.cols() {
        return Err(Error::shape("solve_complete_forward", b.shape(), z.shape()));
    }
    let ga = g * a;
    let x = &(g * b) + &(&(&Matrix::identity(n) - &ga) * z);
    let check = T::agree(&(a * &x), b, tol);
    if !check.holds {
        return Err(Error::Inconsistent {
            residual: check.residual,
        });
    }
    Ok(x)
}

/// `b = Ax + (I − AA⁺)w`, which satisfies `A⁺b = x` for any `w` when
/// `x ∈ C(Aᵀ)`.
///
/// Returns `Error::Inconsistent` when `x` is not in the row space (that is,
/// `A⁺Ax ≠ x`).
pub fn solve_complete_adjoint<T: Scalar>(
    a: &Matrix<T>,
    aplus: &Matrix<T>,
    x: &Matrix<T>,
    w: &Matrix<T>,
    tol: f64,
) -> Result<Matrix<T>> {
    let (m, n) = a.shape();
    if aplus.shape() != (n, m) {
        return Err(Error::shape("solve_complete_adjoint", a.shape(), aplus.shape()));
    }
    if x.rows() != n || w.rows() != m || x.cols() != w.cols() {
        return Err(Error::shape("solve_complete_adjoint", x.shape(), w.shape()));
    }
    let ax = a * x;
    let row_space = T::agree(&(aplus * &ax), x, tol);
    if !row_space.holds {
        return Err(Error::Inconsistent {
            residual: row_space.residual,
        });
    }
    let projector = &Matrix::identity(m) - &(a * aplus);
    Ok(&ax + &(&projector * w))
}
