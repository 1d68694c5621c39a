//! Sketched pseudoinverses `(PᵀA)⁺·PᵀA·Q·(AQ)⁺` and the randomized-SVD
//! baseline.
//!
//! The sketched product equals `A⁺` exactly when the sketches preserve rank,
//! `rank(PᵀA) = rank(AQ) = rank(A)`; otherwise it is a low-rank approximation
//! assembled from samples of the row and column spaces.

use std::sync::OnceLock;

use crate::cr::CrFactorization;
use crate::echelon::rank;
use crate::error::{Error, Result};
use crate::matrix::{FloatMatrix, Matrix};
use crate::random::{gaussian_matrix, rng_from_seed};
use crate::scalar::Scalar;
use crate::svd::{householder_qr, svd};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchRanks {
    pub pta: usize,
    pub aq: usize,
    pub a: usize,
}

impl SketchRanks {
    pub fn rank_preserving(&self) -> bool {
        self.pta == self.a && self.aq == self.a
    }
}

/// Left sketch P (m×p) and right sketch Q (n×q).
#[derive(Debug, Clone)]
pub struct SketchPair<T> {
    pub p_mat: Matrix<T>,
    pub q_mat: Matrix<T>,
    /// Present when the pair was drawn by [`SketchPair::gaussian`].
    pub seed: Option<u64>,
    ranks: OnceLock<SketchRanks>,
}

impl<T: Scalar> SketchPair<T> {
    pub fn new(p_mat: Matrix<T>, q_mat: Matrix<T>) -> Self {
        Self {
            p_mat,
            q_mat,
            seed: None,
            ranks: OnceLock::new(),
        }
    }

    /// Ranks recorded by the first [`validate_rank_preserving`] call.
    pub fn cached_ranks(&self) -> Option<SketchRanks> {
        self.ranks.get().copied()
    }

    fn check_shapes(&self, a: &Matrix<T>) -> Result<()> {
        if self.p_mat.rows() != a.rows() {
            return Err(Error::shape("sketch P", a.shape(), self.p_mat.shape()));
        }
        if self.q_mat.rows() != a.cols() {
            return Err(Error::shape("sketch Q", a.shape(), self.q_mat.shape()));
        }
        Ok(())
    }
}

impl SketchPair<f64> {
    /// P and Q with independent standard normal entries; P is drawn first,
    /// row-major, then Q from the same stream.
    pub fn gaussian(m: usize, n: usize, p: usize, q: usize, seed: u64) -> Result<Self> {
        if !(1..=m).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                lo: 1,
                hi: m,
            });
        }
        if !(1..=n).contains(&q) {
            return Err(Error::OutOfRange {
                name: "q",
                value: q,
                lo: 1,
                hi: n,
            });
        }
        let mut rng = rng_from_seed(seed);
        let p_mat = gaussian_matrix(m, p, &mut rng);
        let q_mat = gaussian_matrix(n, q, &mut rng);
        Ok(Self {
            p_mat,
            q_mat,
            seed: Some(seed),
            ranks: OnceLock::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SketchedPinvResult<T> {
    /// n×m
    pub approx: Matrix<T>,
    pub rank_preserving: bool,
    pub achieved_ranks: SketchRanks,
}

/// The sketched product alone, with the ranks the inner pseudoinverses saw.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchProduct<T> {
    pub approx: Matrix<T>,
    pub rank_pta: usize,
    pub rank_aq: usize,
}

/// `((PᵀA)⁺·PᵀA)·Q·(AQ)⁺`, evaluated left to right.
pub fn sketch_product<T: Scalar>(a: &Matrix<T>, sketch: &SketchPair<T>) -> Result<SketchProduct<T>> {
    sketch.check_shapes(a)?;
    let pta = &sketch.p_mat.transpose() * a;
    let aq = a * &sketch.q_mat;
    let (pta_plus, rank_pta) = T::pinv_with_rank(&pta)?;
    let (aq_plus, rank_aq) = T::pinv_with_rank(&aq)?;
    let approx = &(&(&pta_plus * &pta) * &sketch.q_mat) * &aq_plus;
    Ok(SketchProduct {
        approx,
        rank_pta,
        rank_aq,
    })
}

pub fn pinv_sketched<T: Scalar>(a: &Matrix<T>, sketch: &SketchPair<T>) -> Result<SketchedPinvResult<T>> {
    let product = sketch_product(a, sketch)?;
    let achieved_ranks = SketchRanks {
        pta: product.rank_pta,
        aq: product.rank_aq,
        a: rank(a),
    };
    Ok(SketchedPinvResult {
        approx: product.approx,
        rank_preserving: achieved_ranks.rank_preserving(),
        achieved_ranks,
    })
}

/// The grouped factors `(PᵀCR)⁺PᵀC` (n×r) and `RQ(CRQ)⁺` (r×m) whose product
/// is the sketched pseudoinverse of `A = CR`.
pub fn sketched_factors<T: Scalar>(
    f: &CrFactorization<T>,
    sketch: &SketchPair<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let a = f.product();
    sketch.check_shapes(&a)?;
    let pt = sketch.p_mat.transpose();
    let pt_c = &pt * &f.c;
    let (pta_plus, _) = T::pinv_with_rank(&(&pt_c * &f.r_factor))?;
    let rq = &f.r_factor * &sketch.q_mat;
    let (aq_plus, _) = T::pinv_with_rank(&(&f.c * &rq))?;
    Ok((&pta_plus * &pt_c, &rq * &aq_plus))
}

/// Checks `rank(PᵀA) = rank(AQ) = rank(A)` and records the three ranks on
/// the sketch (first call wins).
pub fn validate_rank_preserving<T: Scalar>(a: &Matrix<T>, sketch: &SketchPair<T>) -> Result<bool> {
    sketch.check_shapes(a)?;
    let ranks = SketchRanks {
        pta: rank(&(&sketch.p_mat.transpose() * a)),
        aq: rank(&(a * &sketch.q_mat)),
        a: rank(a),
    };
    let _ = sketch.ranks.set(ranks);
    Ok(ranks.rank_preserving())
}

/// Randomized pseudoinverse with Gaussian P (m×p) and Q (n×q).
pub fn rpinv(a: &FloatMatrix, p: usize, q: usize, seed: u64) -> Result<SketchedPinvResult<f64>> {
    let sketch = SketchPair::gaussian(a.rows(), a.cols(), p, q, seed)?;
    pinv_sketched(a, &sketch)
}

/// Pseudoinverse of the rank-s randomized SVD approximation
/// `A_s = Q̂·U_s·Σ_s·V_sᵀ`, with `Q̂` an orthonormal basis of `A·Ω` and
/// `Ω` an n×s Gaussian matrix.
pub fn rsvd_pinv(a: &FloatMatrix, s: usize, seed: u64) -> Result<FloatMatrix> {
    let (m, n) = a.shape();
    if !(1..=m.min(n)).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            lo: 1,
            hi: m.min(n),
        });
    }
    let omega = gaussian_matrix(n, s, &mut rng_from_seed(seed));
    let (q_hat, _) = householder_qr(&(a * &omega))?;
    let b = &q_hat.transpose() * a;
    let dec = svd(&b)?;
    let r = dec.numerical_rank;
    let left = &q_hat * &dec.u.block(0, s, 0, r);
    let v_scaled = FloatMatrix::from_fn(n, r, |i, j| dec.v[(i, j)] / dec.singular_values[j]);
    Ok(&v_scaled * &left.transpose())
}
