//! Moore-Penrose pseudoinverses through the CR factorization `A = C·R`.
//!
//! Everything is generic over two scalar domains: exact rationals
//! ([`RatMatrix`]) and 64-bit floats ([`FloatMatrix`]). Three routes to `A⁺`
//! are provided:
//!
//! * [`pinv_reverse_order`] / [`pinv_closed_form`]: `R⁺C⁺` for the full-rank
//!   factors produced by [`cr_factorize`];
//! * [`pinv_always`]: `(C⁺CR)⁺(CRR⁺)⁺`, correct for any conformable factors;
//! * [`pinv_sketched`] / [`rpinv`]: `(PᵀA)⁺PᵀAQ(AQ)⁺`, exact when the sketches
//!   preserve rank and a cheap approximation otherwise.
//!
//! ```
//! use crpinv::{pinv, RatMatrix};
//!
//! let a = RatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
//! let g = pinv(&a).unwrap();
//! assert_eq!(g.to_string(), "-8/15 3/5\n7/15 -2/5\n-1/15 1/5\n");
//! ```

pub mod bench;
pub mod cr;
pub mod echelon;
pub mod error;
pub mod geninv;
pub mod io;
pub mod matrix;
pub mod pinv;
pub mod random;
pub mod scalar;
pub mod sketch;
pub mod svd;
pub mod verify;

pub use cr::{complete_to_generalized, cr_factorize, Completion, CrFactorization};
pub use echelon::{
    column_space_contains, rank, rref, same_column_space, same_nullspace, subspace_basis,
    RrefResult, SubspaceBasis, SubspaceKind,
};
pub use error::{Error, Result};
pub use geninv::{
    generalized_inverse, solve_complete_adjoint, solve_complete_forward, GeneralizedInverseSpec,
};
pub use matrix::{FloatMatrix, Matrix, RatMatrix};
pub use pinv::{
    pinv, pinv_always, pinv_closed_form, pinv_reverse_order, reverse_order_product, PinvMethod,
};
pub use scalar::{relative_residual, Rational, Scalar};
pub use sketch::{
    pinv_sketched, rpinv, rsvd_pinv, sketch_product, sketched_factors, validate_rank_preserving,
    SketchPair, SketchRanks, SketchedPinvResult,
};
pub use svd::{numerical_rank, svd, svd_pinv, SvdResult};
pub use verify::{
    check_greville, check_penrose, check_projection_equation, check_reverse_order_demands,
    PenroseReport, DEFAULT_TOL,
};
