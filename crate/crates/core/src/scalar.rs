//! The two scalar domains: exact rationals over arbitrary-precision integers
//! and IEEE 64-bit floats.
//!
//! Most algorithms are written once against [`Scalar`]; the handful of places
//! where the domains genuinely differ (pivot choice, rank rule, the inner
//! pseudoinverse used by sketches, equality in verifiers) are trait hooks.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub type Rational = BigRational;

/// Outcome of comparing a computed matrix against the value it should equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub holds: bool,
    /// Relative Frobenius residual; exactly 0.0 or 1.0 in the exact domain
    /// (equal / not equal) unless computed from a float cast.
    pub residual: f64,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the rational domain.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;

    /// Product of conformable matrices.
    fn product(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        a.naive_product(b)
    }

    /// Rank under the domain's rule: exact elimination for rationals,
    /// SVD numerical rank for floats.
    fn rank(m: &Matrix<Self>) -> usize;

    /// Pseudoinverse used where a formula calls for an unstructured `pinv`
    /// (CR-based for rationals, SVD-based for floats), together with the
    /// rank the same computation decided on.
    fn pinv_with_rank(m: &Matrix<Self>) -> Result<(Matrix<Self>, usize)>;

    /// Whether `actual` equals `expected`: exactly for rationals, within a
    /// relative Frobenius tolerance for floats.
    fn agree(actual: &Matrix<Self>, expected: &Matrix<Self>, tol: f64) -> Agreement;

    /// `(CᵀC)⁻¹Cᵀ` for independent columns.
    fn left_inverse(c: &Matrix<Self>) -> Result<Matrix<Self>> {
        let ct = c.transpose();
        let gram = (&ct * c).inverse().map_err(|_| Error::Singular { op: "CᵀC" })?;
        Ok(&gram * &ct)
    }

    /// `Rᵀ(RRᵀ)⁻¹` for independent rows.
    fn right_inverse(r: &Matrix<Self>) -> Result<Matrix<Self>> {
        let rt = r.transpose();
        let gram = (r * &rt).inverse().map_err(|_| Error::Singular { op: "RRᵀ" })?;
        Ok(&rt * &gram)
    }

    /// `Rᵀ(CᵀARᵀ)⁻¹Cᵀ`.
    fn closed_form(c: &Matrix<Self>, a: &Matrix<Self>, r: &Matrix<Self>) -> Result<Matrix<Self>> {
        let ct = c.transpose();
        let rt = r.transpose();
        let core = (&(&ct * a) * &rt)
            .inverse()
            .map_err(|_| Error::Singular { op: "CᵀARᵀ" })?;
        Ok(&(&rt * &core) * &ct)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    /// Clears denominators per row of `a` and per column of `b`, multiplies
    /// integers and reduces each entry once.
    fn product(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        let (m, k, n) = (a.rows(), a.cols(), b.cols());
        let lcm_of = |den: &mut dyn Iterator<Item = &BigInt>| den.fold(BigInt::one(), |l, d| l.lcm(d));
        let row_den: Vec<BigInt> = (0..m).map(|i| lcm_of(&mut a.row(i).iter().map(|x| x.denom()))).collect();
        let col_den: Vec<BigInt> = (0..n)
            .map(|j| lcm_of(&mut (0..k).map(|t| b[(t, j)].denom())))
            .collect();
        let scaled = |x: &BigRational, l: &BigInt| x.numer() * (l / x.denom());
        let bn: Vec<BigInt> = (0..k * n).map(|idx| scaled(&b.data()[idx], &col_den[idx % n])).collect();
        let mut out = Vec::with_capacity(m * n);
        for (i, den) in row_den.iter().enumerate() {
            let mut acc = vec![BigInt::zero(); n];
            for (t, x) in a.row(i).iter().enumerate() {
                if Zero::is_zero(x) {
                    continue;
                }
                let xn = scaled(x, den);
                for (o, y) in acc.iter_mut().zip(&bn[t * n..(t + 1) * n]) {
                    if !Zero::is_zero(y) {
                        *o += &xn * y;
                    }
                }
            }
            out.extend(
                acc.into_iter()
                    .zip(&col_den)
                    .map(|(num, cd)| BigRational::new(num, den * cd)),
            );
        }
        Matrix::new(m, n, out).expect("product shape")
    }

    fn rank(m: &Matrix<Self>) -> usize {
        crate::echelon::rref(m).rank
    }

    fn pinv_with_rank(m: &Matrix<Self>) -> Result<(Matrix<Self>, usize)> {
        let f = crate::cr::cr_factorize(m);
        Ok((crate::pinv::pinv_reverse_order(&f)?, f.rank))
    }

    fn agree(actual: &Matrix<Self>, expected: &Matrix<Self>, _tol: f64) -> Agreement {
        let holds = actual == expected;
        Agreement {
            holds,
            residual: if holds { 0.0 } else { 1.0 },
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn rank(m: &Matrix<Self>) -> usize {
        crate::svd::numerical_rank(m)
    }

    fn pinv_with_rank(m: &Matrix<Self>) -> Result<(Matrix<Self>, usize)> {
        if m.is_empty() {
            return Ok((Matrix::zeros(m.cols(), m.rows()), 0));
        }
        let s = crate::svd::svd(m)?;
        Ok((crate::svd::pinv_from_svd(&s), s.numerical_rank))
    }

    fn agree(actual: &Matrix<Self>, expected: &Matrix<Self>, tol: f64) -> Agreement {
        let residual = relative_residual(actual, expected);
        Agreement {
            holds: residual <= tol,
            residual,
        }
    }

    // The float overrides evaluate the same matrices through Householder QR,
    // C = Q₁T₁ and Rᵀ = Q₂T₂, instead of forming the Gram matrices.

    fn left_inverse(c: &Matrix<Self>) -> Result<Matrix<Self>> {
        let (q, t) = orthogonal_factor(c, "CᵀC")?;
        Ok(upper_solve(&t, &q.transpose()))
    }

    fn right_inverse(r: &Matrix<Self>) -> Result<Matrix<Self>> {
        let (q, t) = orthogonal_factor(&r.transpose(), "RRᵀ")?;
        Ok(upper_solve(&t, &q.transpose()).transpose())
    }

    fn closed_form(c: &Matrix<Self>, a: &Matrix<Self>, r: &Matrix<Self>) -> Result<Matrix<Self>> {
        let (q1, _) = orthogonal_factor(c, "CᵀARᵀ")?;
        let (q2, _) = orthogonal_factor(&r.transpose(), "CᵀARᵀ")?;
        let core = (&(&q1.transpose() * a) * &q2)
            .inverse()
            .map_err(|_| Error::Singular { op: "CᵀARᵀ" })?;
        Ok(&(&q2 * &core) * &q1.transpose())
    }
}

fn orthogonal_factor(x: &Matrix<f64>, op: &'static str) -> Result<(Matrix<f64>, Matrix<f64>)> {
    let (q, t) = crate::svd::householder_qr(x).map_err(|_| Error::Singular { op })?;
    if (0..t.rows()).any(|i| t[(i, i)] == 0.0) {
        return Err(Error::Singular { op });
    }
    Ok((q, t))
}

/// `T⁻¹·B` for upper-triangular T by back substitution.
fn upper_solve(t: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    let k = t.rows();
    let mut x = b.clone();
    for j in 0..b.cols() {
        for i in (0..k).rev() {
            let mut s = x[(i, j)];
            for l in i + 1..k {
                s -= t[(i, l)] * x[(l, j)];
            }
            x[(i, j)] = s / t[(i, i)];
        }
    }
    x
}

/// ‖actual − expected‖_F / ‖expected‖_F, falling back to the absolute
/// residual when `expected` is zero.
pub fn relative_residual(actual: &Matrix<f64>, expected: &Matrix<f64>) -> f64 {
    if actual.shape() != expected.shape() {
        return f64::INFINITY;
    }
    let diff = actual
        .data()
        .iter()
        .zip(expected.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale = expected.frobenius_norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}
