#![allow(dead_code)]

use crpinv::random::{gaussian_matrix, rng_from_seed};
use crpinv::{FloatMatrix, RatMatrix, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> RatMatrix {
    RatMatrix::from_fn(m, n, |_, _| Rational::from_integer(BigInt::from(rng.gen_range(lo..=hi))))
}

/// Integer matrix of rank exactly `r`: `[I; X]·[I Y]` with rows and columns
/// shuffled.
pub fn int_matrix_of_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> RatMatrix {
    assert!(r <= m.min(n));
    let x = int_matrix(rng, m - r, r, -3, 3);
    let y = int_matrix(rng, r, n - r, -3, 3);
    let left = RatMatrix::identity(r).vstack(&x).unwrap();
    let right = RatMatrix::identity(r).hstack(&y).unwrap();
    let a = &left * &right;
    let mut rows: Vec<usize> = (0..m).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    a.select_rows(&rows).select_columns(&cols)
}

pub fn gaussian(rng: &mut ChaCha8Rng, m: usize, n: usize) -> FloatMatrix {
    let mut inner = rng_from_seed(rng.gen());
    gaussian_matrix(m, n, &mut inner)
}

/// Gaussian-product float matrix of rank `r` (almost surely).
pub fn float_matrix_of_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> FloatMatrix {
    if r == 0 {
        return FloatMatrix::zeros(m, n);
    }
    &gaussian(rng, m, r) * &gaussian(rng, r, n)
}

pub fn to_rational(a: &FloatMatrix) -> RatMatrix {
    RatMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        Rational::from_float(a[(i, j)]).expect("finite entry")
    })
}

/// Determinant by permutation expansion; independent of any elimination.
pub fn leibniz_det(a: &RatMatrix) -> Rational {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::from_integer(0.into());
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, a: &RatMatrix, total: &mut Rational) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = Rational::from_integer(if inversions % 2 == 0 { 1 } else { -1 }.into());
        for (i, &p) in perm.iter().enumerate() {
            term *= &a[(i, p)];
        }
        *total += term;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, a, total);
        perm.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank as the order of the largest nonvanishing minor.
pub fn minor_rank(a: &RatMatrix) -> usize {
    let (m, n) = a.shape();
    for k in (1..=m.min(n)).rev() {
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let det = leibniz_det(&a.select_rows(&rows).select_columns(&cols));
                if det != Rational::from_integer(0.into()) {
                    return k;
                }
            }
        }
    }
    0
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn rel(a: &FloatMatrix, b: &FloatMatrix) -> f64 {
    crpinv::relative_residual(a, b)
}

/// Rank drawn uniformly from 0..=max_rank.
pub fn int_matrix_any_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, max_rank: usize) -> RatMatrix {
    let r = rng.gen_range(0..=max_rank.min(m.min(n)));
    int_matrix_of_rank(rng, m, n, r)
}

pub fn float_matrix_any_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, max_rank: usize) -> FloatMatrix {
    let r = rng.gen_range(0..=max_rank.min(m.min(n)));
    float_matrix_of_rank(rng, m, n, r)
}
