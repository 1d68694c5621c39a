//! Penrose identities and the reverse-order-law conditions.

use crate::echelon::column_space_contains;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pinv::pinv;
use crate::scalar::Scalar;

/// Relative Frobenius tolerance for float-domain checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseReport {
    /// AGA = A, GAG = G, (GA)ᵀ = GA, (AG)ᵀ = AG
    pub holds: [bool; 4],
    /// Relative Frobenius residuals; 0/1 equality flags in the exact domain.
    pub residuals: [f64; 4],
}

impl PenroseReport {
    /// All four identities: `g` is the Moore-Penrose pseudoinverse of `a`.
    pub fn is_pseudoinverse(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    /// The first identity alone: `g` is a generalized inverse.
    pub fn is_generalized_inverse(&self) -> bool {
        self.holds[0]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn check_penrose<T: Scalar>(a: &Matrix<T>, g: &Matrix<T>, tol: f64) -> Result<PenroseReport> {
    if g.shape() != (a.cols(), a.rows()) {
        return Err(Error::shape("check_penrose", a.shape(), g.shape()));
    }
    let ag = a * g;
    let ga = g * a;
    let checks = [
        T::agree(&(&ag * a), a, tol),
        T::agree(&(&ga * g), g, tol),
        T::agree(&ga.transpose(), &ga, tol),
        T::agree(&ag.transpose(), &ag, tol),
    ];
    Ok(PenroseReport {
        holds: checks.map(|c| c.holds),
        residuals: checks.map(|c| c.residual),
    })
}

fn conformable<T: Scalar>(op: &'static str, c: &Matrix<T>, r: &Matrix<T>) -> Result<()> {
    if c.cols() != r.rows() {
        return Err(Error::shape(op, c.shape(), r.shape()));
    }
    Ok(())
}

/// Greville's conditions `C(RRᵀCᵀ) ⊆ C(Cᵀ)` and `C(CᵀCR) ⊆ C(R)`, which
/// hold exactly when `(CR)⁺ = R⁺C⁺`.
pub fn check_greville<T: Scalar>(c: &Matrix<T>, r: &Matrix<T>) -> Result<bool> {
    conformable("check_greville", c, r)?;
    let ct = c.transpose();
    let rrt_ct = &(r * &r.transpose()) * &ct;
    let ctc_r = &(&ct * c) * r;
    Ok(column_space_contains(&ct, &rrt_ct)? && column_space_contains(r, &ctc_r)?)
}

/// `C⁺C(RRᵀCᵀC)RR⁺ = RRᵀCᵀC`
pub fn check_projection_equation<T: Scalar>(c: &Matrix<T>, r: &Matrix<T>, tol: f64) -> Result<bool> {
    conformable("check_projection_equation", c, r)?;
    let c_proj = &pinv(c)? * c;
    let r_proj = r * &pinv(r)?;
    let middle = &(&(r * &r.transpose()) * &c.transpose()) * c;
    let lhs = &(&c_proj * &middle) * &r_proj;
    Ok(T::agree(&lhs, &middle, tol).holds)
}

/// The two demands `C⁺C(RAᵀ) = RAᵀ` and `RR⁺(CᵀA) = CᵀA` with `A = CR`.
pub fn check_reverse_order_demands<T: Scalar>(
    c: &Matrix<T>,
    r: &Matrix<T>,
    tol: f64,
) -> Result<(bool, bool)> {
    conformable("check_reverse_order_demands", c, r)?;
    let a = c * r;
    let r_at = r * &a.transpose();
    let ct_a = &c.transpose() * &a;
    let first = &(&pinv(c)? * c) * &r_at;
    let second = &(r * &pinv(r)?) * &ct_a;
    Ok((
        T::agree(&first, &r_at, tol).holds,
        T::agree(&second, &ct_a, tol).holds,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr::cr_factorize;
    use crate::matrix::{FloatMatrix, RatMatrix};

    fn title_pair() -> (RatMatrix, RatMatrix) {
        (
            RatMatrix::from_i64_rows(&[[1, 0]]),
            RatMatrix::from_i64_rows(&[[1], [1]]),
        )
    }

    #[test]
    fn penrose_on_worked_example() {
        let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
        let g = pinv(&a).unwrap();
        let report = check_penrose(&a, &g, 0.0).unwrap();
        assert!(report.is_pseudoinverse());
        assert_eq!(report.max_residual(), 0.0);

        let af = a.to_f64();
        let report = check_penrose(&af, &g.to_f64(), DEFAULT_TOL).unwrap();
        assert!(report.is_pseudoinverse(), "{report:?}");
    }

    #[test]
    fn printed_generalized_inverse_is_not_the_pseudoinverse() {
        let a = RatMatrix::from_i64_rows(&[[1, 0], [0, 0], [0, 0]]);
        let g = RatMatrix::from_i64_rows(&[[1, 3, 2], [3, 3, 2]]);
        let report = check_penrose(&a, &g, 0.0).unwrap();
        assert!(report.holds[0]);
        assert!(!report.holds[1]);
        assert_ne!(&a * &g, RatMatrix::identity(3));
        assert_ne!(&g * &a, RatMatrix::identity(2));
    }

    #[test]
    fn zero_pair_passes() {
        let report = check_penrose(&RatMatrix::zeros(2, 3), &RatMatrix::zeros(3, 2), 0.0).unwrap();
        assert!(report.is_pseudoinverse());
        let report =
            check_penrose(&FloatMatrix::zeros(2, 3), &FloatMatrix::zeros(3, 2), DEFAULT_TOL).unwrap();
        assert!(report.is_pseudoinverse());
    }

    #[test]
    fn penrose_shape_mismatch() {
        assert!(check_penrose(&RatMatrix::zeros(2, 3), &RatMatrix::zeros(2, 3), 0.0).is_err());
    }

    #[test]
    fn greville_cases() {
        let (c, r) = title_pair();
        assert!(!check_greville(&c, &r).unwrap());

        let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
        let f = cr_factorize(&a);
        assert!(check_greville(&f.c, &f.r_factor).unwrap());
        assert!(check_greville(&a, &RatMatrix::identity(3)).unwrap());
        assert!(check_greville(&a, &a).is_err());
    }

    #[test]
    fn projection_equation_cases() {
        let (c, r) = title_pair();
        assert!(!check_projection_equation(&c, &r, 0.0).unwrap());

        let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
        let f = cr_factorize(&a);
        assert!(check_projection_equation(&f.c, &f.r_factor, 0.0).unwrap());
        let i = RatMatrix::identity(2);
        assert!(check_projection_equation(&i, &i, 0.0).unwrap());
    }

    #[test]
    fn reverse_order_demands() {
        let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
        let f = cr_factorize(&a);
        assert_eq!(check_reverse_order_demands(&f.c, &f.r_factor, 0.0).unwrap(), (true, true));
        let (c, r) = title_pair();
        let (d1, d2) = check_reverse_order_demands(&c, &r, 0.0).unwrap();
        assert!(!(d1 && d2));
        let i = RatMatrix::identity(3);
        assert_eq!(check_reverse_order_demands(&i, &i, 0.0).unwrap(), (true, true));
    }
}
