//! Pseudoinverses built from CR factorizations: the reverse-order product
//! for full-rank factors, its closed form, and the projected product that is
//! correct for arbitrary factors.

use std::fmt;
use std::str::FromStr;

use crate::cr::{cr_factorize, CrFactorization};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `C⁺ = (CᵀC)⁻¹Cᵀ` for C with independent columns.
pub fn left_inverse<T: Scalar>(c: &Matrix<T>) -> Result<Matrix<T>> {
    T::left_inverse(c)
}

/// `R⁺ = Rᵀ(RRᵀ)⁻¹` for R with independent rows.
pub fn right_inverse<T: Scalar>(r: &Matrix<T>) -> Result<Matrix<T>> {
    T::right_inverse(r)
}

/// `R⁺C⁺` for a full-rank factorization.
pub fn pinv_reverse_order<T: Scalar>(f: &CrFactorization<T>) -> Result<Matrix<T>> {
    let r_plus = right_inverse(&f.r_factor)?;
    let c_plus = left_inverse(&f.c)?;
    Ok(&r_plus * &c_plus)
}

/// `Rᵀ(CᵀARᵀ)⁻¹Cᵀ`: a single r×r inverse.
pub fn pinv_closed_form<T: Scalar>(f: &CrFactorization<T>, a: &Matrix<T>) -> Result<Matrix<T>> {
    if a.shape() != (f.rows(), f.cols()) {
        return Err(Error::shape("pinv_closed_form", (f.rows(), f.cols()), a.shape()));
    }
    T::closed_form(&f.c, a, &f.r_factor)
}

/// Moore-Penrose pseudoinverse of any matrix via its CR factorization.
pub fn pinv<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    pinv_reverse_order(&cr_factorize(a))
}

/// `(C⁺CR)⁺(CRR⁺)⁺` for conformable factors of any rank.
///
/// Every pseudoinverse inside comes from a fresh CR factorization of its
/// argument. The projections are taken from those factorizations:
/// `C⁺C = R_c⁺R_c` for `C = C_cR_c` and `RR⁺ = C_rC_r⁺` for `R = C_rR_r`, so
/// over floats they stay exact when a factor already has full rank.
pub fn pinv_always<T: Scalar>(c: &Matrix<T>, r: &Matrix<T>) -> Result<Matrix<T>> {
    if c.cols() != r.rows() {
        return Err(Error::shape("pinv_always", c.shape(), r.shape()));
    }
    let fc = cr_factorize(c);
    let fr = cr_factorize(r);
    let row_projector = &right_inverse(&fc.r_factor)? * &fc.r_factor;
    let col_projector = &fr.c * &left_inverse(&fr.c)?;
    let projected_r = &row_projector * r;
    let projected_c = c * &col_projector;
    Ok(&pinv(&projected_r)? * &pinv(&projected_c)?)
}

/// `R⁺C⁺` for arbitrary conformable factors; equals `(CR)⁺` only under the
/// Greville conditions.
pub fn reverse_order_product<T: Scalar>(c: &Matrix<T>, r: &Matrix<T>) -> Result<Matrix<T>> {
    if c.cols() != r.rows() {
        return Err(Error::shape("reverse_order_product", c.shape(), r.shape()));
    }
    Ok(&pinv(r)? * &pinv(c)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinvMethod {
    ReverseOrder,
    ClosedForm,
    Always,
}

impl PinvMethod {
    pub const ALL: [PinvMethod; 3] = [Self::ReverseOrder, Self::ClosedForm, Self::Always];

    pub fn apply<T: Scalar>(self, a: &Matrix<T>) -> Result<Matrix<T>> {
        let f = cr_factorize(a);
        match self {
            Self::ReverseOrder => pinv_reverse_order(&f),
            Self::ClosedForm => pinv_closed_form(&f, a),
            Self::Always => pinv_always(&f.c, &f.r_factor),
        }
    }
}

impl fmt::Display for PinvMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ReverseOrder => "reverse-order",
            Self::ClosedForm => "closed-form",
            Self::Always => "always",
        })
    }
}

impl FromStr for PinvMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reverse-order" => Ok(Self::ReverseOrder),
            "closed-form" => Ok(Self::ClosedForm),
            "always" => Ok(Self::Always),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{FloatMatrix, RatMatrix};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn worked_pinv() -> RatMatrix {
        RatMatrix::from_i64_rows(&[[-8, 9], [7, -6], [-1, 3]]).scale(&q(1, 15))
    }

    #[test]
    fn all_methods_on_worked_example() {
        let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
        for method in PinvMethod::ALL {
            let g = method.apply(&a).unwrap();
            assert_eq!(g, worked_pinv(), "{method}");
            for x in g.data() {
                assert_eq!(15 % x.denom(), 0.into());
            }
        }
    }

    #[test]
    fn identity_and_scalar() {
        let i = RatMatrix::identity(3);
        assert_eq!(pinv(&i).unwrap(), i);
        let two = RatMatrix::from_i64_rows(&[[2]]);
        let f = cr_factorize(&two);
        assert_eq!(pinv_closed_form(&f, &two).unwrap()[(0, 0)], q(1, 2));
    }

    #[test]
    fn zero_matrix_pinv_is_zero_transpose() {
        let z = RatMatrix::zeros(2, 3);
        for method in PinvMethod::ALL {
            assert_eq!(method.apply(&z).unwrap(), RatMatrix::zeros(3, 2));
        }
        assert_eq!(pinv(&FloatMatrix::zeros(4, 1)).unwrap(), FloatMatrix::zeros(1, 4));
    }

    #[test]
    fn reverse_order_fails_where_projected_product_does_not() {
        let c = RatMatrix::from_i64_rows(&[[1, 0]]);
        let r = RatMatrix::from_i64_rows(&[[1], [1]]);
        assert_eq!(reverse_order_product(&c, &r).unwrap()[(0, 0)], q(1, 2));
        assert_eq!(pinv_always(&c, &r).unwrap()[(0, 0)], q(1, 1));
        assert_eq!(pinv(&(&c * &r)).unwrap()[(0, 0)], q(1, 1));
    }

    #[test]
    fn identity_factors() {
        let i = RatMatrix::identity(3);
        assert_eq!(pinv_always(&i, &i).unwrap(), i);
    }

    #[test]
    fn shape_errors() {
        let c = RatMatrix::zeros(2, 3);
        assert!(matches!(pinv_always(&c, &c), Err(Error::ShapeMismatch { .. })));
        let f = cr_factorize(&c);
        assert!(pinv_closed_form(&f, &RatMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in PinvMethod::ALL {
            assert_eq!(m.to_string().parse::<PinvMethod>().unwrap(), m);
        }
        assert!("svd".parse::<PinvMethod>().is_err());
    }
}
