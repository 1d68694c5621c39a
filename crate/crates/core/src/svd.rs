//! One-sided Jacobi SVD, the float-domain pseudoinverse oracle, and a
//! Householder QR used for orthonormalization.

use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// m×k, orthonormal columns.
    pub u: FloatMatrix,
    /// Nonincreasing, length k = min(m, n).
    pub singular_values: Vec<f64>,
    /// n×k, orthonormal columns.
    pub v: FloatMatrix,
    pub numerical_rank: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> FloatMatrix {
        let k = self.singular_values.len();
        let us = FloatMatrix::from_fn(self.u.rows(), k, |i, j| {
            self.u[(i, j)] * self.singular_values[j]
        });
        &us * &self.v.transpose()
    }

    /// `max(m,n)·ε·σ₁`
    pub fn tolerance(&self) -> f64 {
        rank_tolerance(self.u.rows(), self.v.rows(), &self.singular_values)
    }
}

fn rank_tolerance(m: usize, n: usize, sigma: &[f64]) -> f64 {
    m.max(n) as f64 * f64::EPSILON * sigma.first().copied().unwrap_or(0.0)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

type Columns = Vec<Vec<f64>>;

/// Jacobi on the columns of a tall (m ≥ n) matrix given column-major.
/// Returns the rotated columns and the accumulated right rotations.
fn jacobi_columns(mut cols: Columns) -> Result<(Columns, Columns)> {
    let n = cols.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let max_sweeps = 30 * n.max(1);
    let m = cols.first().map_or(0, Vec::len);
    let threshold = (m.max(1) as f64).sqrt() * f64::EPSILON;
    let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();

    let mut converged = n < 2;
    let mut sweep = 0;
    while !converged {
        if sweep == max_sweeps {
            return Err(Error::NoConvergence { sweeps: max_sweeps });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                let (left, right) = v.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                // exact update of the squared norms, recomputed when
                // cancellation could cost relative accuracy
                let big = alpha.max(beta);
                let np = alpha - t * gamma;
                let nq = beta + t * gamma;
                norms[p] = if np > 0.1 * big { np } else { dot(&cols[p], &cols[p]) };
                norms[q] = if nq > 0.1 * big { nq } else { dot(&cols[q], &cols[q]) };
            }
        }
        converged = !rotated;
    }
    Ok((cols, v))
}

/// Thin SVD `a = U·diag(σ)·Vᵀ` with k = min(m, n).
///
/// The matrix is first reduced by a column-pivoted QR, `a·P = Q·R`, and the
/// Jacobi sweeps run on the columns of `Rᵀ`; this cuts the sweep count by a
/// large factor on ill-conditioned input. Columns of V belonging to zero (or
/// numerically negligible) singular values are completed to an orthonormal
/// set so `UᵀU = VᵀV = I` always holds.
pub fn svd(a: &FloatMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
            numerical_rank: t.numerical_rank,
        });
    }
    if a.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("svd of a non-finite matrix".into()));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let qr = qr_in_place(cols, true);
    let q = form_q(&qr.reflectors, m, n);
    // a·P = Q·R and Rᵀ = Q₂·R₂, so a·P = Q·L·Q₂ᵀ with L = R₂ᵀ lower triangular
    let rt: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i <= j { qr.r[j][i] } else { 0.0 }).collect())
        .collect();
    let qr2 = qr_in_place(rt, false);
    let q2 = form_q(&qr2.reflectors, n, n);
    let l: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if j <= i { qr2.r[i][j] } else { 0.0 }).collect())
        .collect();
    let (w, j) = jacobi_columns(l)?;

    let mut order: Vec<(usize, f64)> = w
        .iter()
        .enumerate()
        .map(|(c, col)| (c, dot(col, col).sqrt()))
        .collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    let sigma: Vec<f64> = order.iter().map(|&(_, s)| s).collect();
    let tol = rank_tolerance(m, n, &sigma);
    let numerical_rank = sigma.iter().filter(|&&s| s > tol).count();

    // L = W̃·Σ·Jᵀ, so a = (Q·W̃)·Σ·(P·Q₂·J)ᵀ
    let mut wcols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (idx, &(c, s)) in order.iter().enumerate() {
        let col = if s > 0.0 && idx < numerical_rank {
            w[c].iter().map(|x| x / s).collect()
        } else if s > 0.0 {
            let mut v: Vec<f64> = w[c].iter().map(|x| x / s).collect();
            if !orthonormalize_against(&mut v, &wcols) {
                v = complete_basis(&wcols, n);
            }
            v
        } else {
            complete_basis(&wcols, n)
        };
        wcols.push(col);
    }
    let u = combine_columns(&q, &wcols, m, None);
    let jsorted: Vec<Vec<f64>> = order.iter().map(|&(c, _)| j[c].clone()).collect();
    let v = combine_columns(&q2, &jsorted, n, Some(&qr.perm));
    Ok(SvdResult {
        u,
        singular_values: sigma,
        v,
        numerical_rank,
    })
}

/// Matrix with columns `basis·coef[k]`, rows optionally scattered by `perm`.
fn combine_columns(
    basis: &[Vec<f64>],
    coefs: &[Vec<f64>],
    rows: usize,
    perm: Option<&[usize]>,
) -> FloatMatrix {
    let mut out = FloatMatrix::zeros(rows, coefs.len());
    let mut col = vec![0.0; rows];
    for (k, coef) in coefs.iter().enumerate() {
        col.iter_mut().for_each(|x| *x = 0.0);
        for (b, &c) in basis.iter().zip(coef) {
            if c != 0.0 {
                for (x, bv) in col.iter_mut().zip(b) {
                    *x += c * bv;
                }
            }
        }
        for (i, &x) in col.iter().enumerate() {
            let row = perm.map_or(i, |p| p[i]);
            out[(row, k)] = x;
        }
    }
    out
}

/// Two passes of Gram-Schmidt against `basis`; false when the vector
/// collapses.
fn orthonormalize_against(x: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let before = dot(x, x).sqrt();
    if before == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let proj = dot(x, b);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= proj * bi;
            }
        }
    }
    let after = dot(x, x).sqrt();
    if after < 0.5 * before {
        return false;
    }
    x.iter_mut().for_each(|xi| *xi /= after);
    true
}

/// Unit vector orthogonal to `basis`, built from the standard basis vector
/// with the largest residual.
fn complete_basis(basis: &[Vec<f64>], m: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let proj = dot(&e, b);
                for (ei, bi) in e.iter_mut().zip(b) {
                    *ei -= proj * bi;
                }
            }
        }
        let norm = dot(&e, &e).sqrt();
        if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
            best = Some((norm, e));
        }
        if norm > 0.7 {
            break;
        }
    }
    let (norm, mut e) = best.expect("completion requested for a full basis");
    e.iter_mut().for_each(|x| *x /= norm);
    e
}

/// Number of singular values above `max(m,n)·ε·σ₁`.
///
/// Panics only if the Jacobi iteration fails to converge, which does not
/// happen for finite input.
pub fn numerical_rank(a: &FloatMatrix) -> usize {
    if a.is_empty() || a.is_zero() {
        return 0;
    }
    svd(a).expect("svd of finite matrix").numerical_rank
}

/// `V·Σ⁺·Uᵀ`, inverting only singular values above the rank tolerance.
pub fn svd_pinv(a: &FloatMatrix) -> Result<FloatMatrix> {
    let (m, n) = a.shape();
    if a.is_empty() {
        return Ok(FloatMatrix::zeros(n, m));
    }
    let s = svd(a)?;
    Ok(pinv_from_svd(&s))
}

pub fn pinv_from_svd(s: &SvdResult) -> FloatMatrix {
    let r = s.numerical_rank;
    let vs = FloatMatrix::from_fn(s.v.rows(), r, |i, j| s.v[(i, j)] / s.singular_values[j]);
    let ur = s.u.block(0, s.u.rows(), 0, r);
    &vs * &ur.transpose()
}

struct QrParts {
    /// Unit Householder vectors; reflector k acts on rows k.. and is empty
    /// when the column was already reduced.
    reflectors: Vec<Vec<f64>>,
    /// Column-major; the upper triangle holds R.
    r: Vec<Vec<f64>>,
    /// Column k of R came from column `perm[k]` of the input.
    perm: Vec<usize>,
}

fn qr_in_place(mut cols: Vec<Vec<f64>>, pivot: bool) -> QrParts {
    let n = cols.len();
    let m = cols.first().map_or(0, Vec::len);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n.min(m) {
        if pivot {
            let mut best = k;
            let mut best_norm = -1.0;
            for (j, col) in cols.iter().enumerate().skip(k) {
                let tail = &col[k..];
                let nrm = dot(tail, tail);
                if nrm > best_norm {
                    best_norm = nrm;
                    best = j;
                }
            }
            cols.swap(k, best);
            perm.swap(k, best);
        }
        let x = &cols[k][k..];
        let norm = dot(x, x).sqrt();
        let mut v = x.to_vec();
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = dot(&v, &v).sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|x| *x /= vnorm);
            for col in cols.iter_mut().skip(k) {
                let tail = &mut col[k..];
                let proj = 2.0 * dot(tail, &v);
                for (t, vi) in tail.iter_mut().zip(&v) {
                    *t -= proj * vi;
                }
            }
        } else {
            v.clear();
        }
        reflectors.push(v);
    }
    QrParts {
        reflectors,
        r: cols,
        perm,
    }
}

/// First n columns of `H_0 H_1 ⋯`, column-major.
fn form_q(reflectors: &[Vec<f64>], m: usize, n: usize) -> Vec<Vec<f64>> {
    let mut qcols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for col in qcols.iter_mut().skip(k) {
            let tail = &mut col[k..];
            let proj = 2.0 * dot(tail, v);
            if proj != 0.0 {
                for (t, vi) in tail.iter_mut().zip(v) {
                    *t -= proj * vi;
                }
            }
        }
    }
    qcols
}

/// Householder QR of an m×n matrix with m ≥ n: returns the thin Q (m×n) and
/// the upper-triangular R (n×n).
pub fn householder_qr(a: &FloatMatrix) -> Result<(FloatMatrix, FloatMatrix)> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "householder_qr needs rows >= cols, got {m}x{n}"
        )));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let qr = qr_in_place(cols, false);
    let r = FloatMatrix::from_fn(n, n, |i, j| if i <= j { qr.r[j][i] } else { 0.0 });
    let qcols = form_q(&qr.reflectors, m, n);
    let q = FloatMatrix::from_fn(m, n, |i, j| qcols[j][i]);
    Ok((q, r))
}
