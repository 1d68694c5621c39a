mod common;

use common::*;
use crpinv::{
    rank, rref, same_column_space, same_nullspace, subspace_basis, svd, FloatMatrix, RatMatrix,
    Rational, SubspaceKind,
};
use proptest::prelude::*;
use rand::Rng;

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

#[test]
fn rank_matches_minor_expansion() {
    let mut g = rng(1);
    for _ in 0..150 {
        let m = g.gen_range(1..=4);
        let n = g.gen_range(1..=4);
        let a = int_matrix(&mut g, m, n, -2, 2);
        assert_eq!(rank(&a), minor_rank(&a), "{a:?}");
    }
}

#[test]
fn rank_matches_minor_expansion_on_constructed_ranks() {
    let mut g = rng(2);
    for r in 0..=4 {
        for _ in 0..10 {
            let a = int_matrix_of_rank(&mut g, 4, 5, r);
            assert_eq!(minor_rank(&a), r);
            assert_eq!(rank(&a), r);
        }
    }
}

#[test]
fn rref_transform_replays_the_elimination() {
    let mut g = rng(3);
    for _ in 0..60 {
        let m = g.gen_range(1..=6);
        let n = g.gen_range(1..=6);
        let r = g.gen_range(0..=m.min(n));
        let a = int_matrix_of_rank(&mut g, m, n, r);
        let res = rref(&a);
        assert_eq!(&res.transform * &a, res.rref);
        assert_ne!(leibniz_or_det(&res.transform), zero());
        // undoing the recorded operations gives back a
        assert_eq!(&res.transform.inverse().unwrap() * &res.rref, a);
        assert_eq!(rank(&a), rank(&a.transpose()));
    }
}

fn leibniz_or_det(e: &RatMatrix) -> Rational {
    if e.rows() <= 5 {
        leibniz_det(e)
    } else {
        e.determinant().unwrap()
    }
}

#[test]
fn rank_of_product_is_bounded() {
    let mut g = rng(4);
    for _ in 0..100 {
        let (m, k, n) = (g.gen_range(1..=6), g.gen_range(1..=6), g.gen_range(1..=6));
        let ra = g.gen_range(0..=m.min(k));
        let rb = g.gen_range(0..=k.min(n));
        let a = int_matrix_of_rank(&mut g, m, k, ra);
        let b = int_matrix_of_rank(&mut g, k, n, rb);
        assert!(rank(&(&a * &b)) <= ra.min(rb));
    }
}

#[test]
fn rank_of_product_is_bounded_in_floats() {
    let mut g = rng(5);
    for _ in 0..100 {
        let (m, k, n) = (g.gen_range(1..=8), g.gen_range(1..=8), g.gen_range(1..=8));
        let a = float_matrix_any_rank(&mut g, m, k, m.min(k));
        let b = float_matrix_any_rank(&mut g, k, n, k.min(n));
        assert!(rank(&(&a * &b)) <= rank(&a).min(rank(&b)));
    }
}

/// N(b) = N(ab) through dimensions and containment of basis vectors.
fn nullspaces_agree(b: &RatMatrix, ab: &RatMatrix) -> bool {
    let nb = subspace_basis(b, SubspaceKind::Nullspace);
    let nab = subspace_basis(ab, SubspaceKind::Nullspace);
    nb.dim() == nab.dim() && (ab * &nb.basis).is_zero()
}

#[test]
fn column_and_nullspace_criteria_both_directions() {
    let mut g = rng(6);
    let (mut seen_same, mut seen_diff) = (0, 0);
    for _ in 0..150 {
        let (m, k, n) = (g.gen_range(1..=5), g.gen_range(1..=5), g.gen_range(1..=5));
        let a = int_matrix_any_rank(&mut g, m, k, m.min(k));
        let b = int_matrix_any_rank(&mut g, k, n, k.min(n));
        let ab = &a * &b;
        let col_same = rank(&a) == rank(&ab);
        assert_eq!(col_same, same_column_space(&a, &ab).unwrap());
        let null_same = rank(&b) == rank(&ab);
        assert_eq!(null_same, nullspaces_agree(&b, &ab));
        assert_eq!(null_same, same_nullspace(&b, &ab).unwrap());
        if col_same {
            seen_same += 1;
        } else {
            seen_diff += 1;
        }
    }
    assert!(seen_same > 10 && seen_diff > 10);
}

#[test]
fn nullspace_is_orthogonal_to_row_space() {
    let mut g = rng(7);
    for _ in 0..80 {
        let m = g.gen_range(1..=6);
        let n = g.gen_range(1..=7);
        let a = int_matrix_any_rank(&mut g, m, n, m.min(n));
        let row = subspace_basis(&a, SubspaceKind::RowSpace);
        let null = subspace_basis(&a, SubspaceKind::Nullspace);
        assert_eq!(row.dim() + null.dim(), n);
        assert!((&row.basis.transpose() * &null.basis).is_zero());
        let col = subspace_basis(&a, SubspaceKind::ColumnSpace);
        let left = subspace_basis(&a, SubspaceKind::LeftNullspace);
        assert_eq!(col.dim() + left.dim(), m);
        assert!((&col.basis.transpose() * &left.basis).is_zero());
    }
}

fn normalize_columns(a: &FloatMatrix) -> FloatMatrix {
    let norms: Vec<f64> = (0..a.cols()).map(|j| a.column(j).frobenius_norm()).collect();
    FloatMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] / norms[j])
}

#[test]
fn float_nullspace_is_orthogonal_to_row_space() {
    let mut g = rng(8);
    for _ in 0..80 {
        let m = g.gen_range(1..=7);
        let n = g.gen_range(2..=8);
        let a = float_matrix_any_rank(&mut g, m, n, m.min(n) - 1);
        let row = subspace_basis(&a, SubspaceKind::RowSpace);
        let null = subspace_basis(&a, SubspaceKind::Nullspace);
        if row.dim() == 0 || null.dim() == 0 {
            continue;
        }
        let dots = &normalize_columns(&row.basis).transpose() * &normalize_columns(&null.basis);
        assert!(dots.max_abs() <= 1e-12, "{}", dots.max_abs());
    }
}

#[test]
fn svd_reconstructs_random_matrices() {
    let mut g = rng(9);
    for _ in 0..100 {
        let m = g.gen_range(1..=50);
        let n = g.gen_range(1..=50);
        let a = if g.gen_bool(0.3) {
            let r = g.gen_range(0..=m.min(n));
            float_matrix_of_rank(&mut g, m, n, r)
        } else {
            gaussian(&mut g, m, n)
        };
        let s = svd(&a).unwrap();
        let err = (&s.reconstruct() - &a).frobenius_norm();
        assert!(err <= 1e-10 * a.frobenius_norm().max(f64::MIN_POSITIVE), "{m}x{n}: {err}");
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let k = m.min(n);
        let utu = &s.u.transpose() * &s.u;
        let vtv = &s.v.transpose() * &s.v;
        assert!((&utu - &FloatMatrix::identity(k)).max_abs() < 1e-12);
        assert!((&vtv - &FloatMatrix::identity(k)).max_abs() < 1e-12);
    }
}

#[test]
fn svd_frobenius_identity_on_worked_example() {
    // trace(AᵀA) summed by hand: 1+4 + 16+9 + 25+25 = 80
    let a = FloatMatrix::from_i64_rows(&[[1, 4, 5], [2, 3, 5]]);
    let s = svd(&a).unwrap();
    let total: f64 = s.singular_values.iter().map(|x| x * x).sum();
    assert!((total - 80.0).abs() < 1e-12);
}

#[test]
fn svd_numerical_rank_of_products() {
    let mut g = rng(10);
    for r in 0..=6 {
        let a = float_matrix_of_rank(&mut g, 9, 7, r);
        assert_eq!(svd(&a).unwrap().numerical_rank, r);
        assert_eq!(rank(&a), r);
    }
}

#[test]
fn column_space_examples() {
    let a = RatMatrix::from_i64_rows(&[[1, 2, 0], [0, 1, 1], [2, 3, 1]]);
    let b = RatMatrix::from_i64_rows(&[[2, 1, 0], [1, 1, 0], [0, 0, 3]]);
    assert!(same_column_space(&a, &(&a * &b)).unwrap());
    assert!(same_column_space(&a, &a).unwrap());
    let c = RatMatrix::from_i64_rows(&[[1, 0]]);
    let r = RatMatrix::from_i64_rows(&[[1], [1]]);
    let rrtct = &(&r * &r.transpose()) * &c.transpose();
    assert!(!same_column_space(&rrtct, &c.transpose()).unwrap());
}

#[test]
fn zero_and_empty_matrices() {
    let z = RatMatrix::zeros(3, 4);
    assert_eq!(rank(&z), 0);
    assert_eq!(subspace_basis(&z, SubspaceKind::Nullspace).dim(), 4);
    let e = RatMatrix::zeros(0, 3);
    assert_eq!(rank(&e), 0);
    assert_eq!(rref(&e).rref.shape(), (0, 3));
    let s = svd(&FloatMatrix::zeros(0, 3)).unwrap();
    assert!(s.singular_values.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(
        m in 1usize..6, n in 1usize..6,
        entries in prop::collection::vec(-3i64..=3, 36),
    ) {
        let a = RatMatrix::from_fn(m, n, |i, j| Rational::from_integer(entries[i * 6 + j].into()));
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
        let res = rref(&a);
        prop_assert_eq!(&res.transform * &a, res.rref.clone());
        // pivot columns of the rref are unit vectors
        for (k, &c) in res.pivot_cols.iter().enumerate() {
            for i in 0..m {
                let expect = if i == k { Rational::from_integer(1.into()) } else { zero() };
                prop_assert_eq!(&res.rref[(i, c)], &expect);
            }
        }
    }

    #[test]
    fn float_rank_agrees_with_exact_rank_on_small_integers(
        m in 1usize..6, n in 1usize..6,
        entries in prop::collection::vec(-3i64..=3, 36),
    ) {
        let a = RatMatrix::from_fn(m, n, |i, j| Rational::from_integer(entries[i * 6 + j].into()));
        prop_assert_eq!(rank(&a.to_f64()), rank(&a));
        prop_assert_eq!(svd(&a.to_f64()).unwrap().numerical_rank, rank(&a));
    }
}

#[test]
fn rational_rationals_stay_exact() {
    let a = RatMatrix::from_fn(3, 3, |i, j| rat((i + 2 * j) as i64 + 1, (i + j) as i64 + 2));
    let res = rref(&a);
    assert_eq!(&res.transform * &a, res.rref);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_product_matches_entrywise_sums(
        m in 0usize..5, k in 0usize..5, n in 0usize..5,
        nums in prop::collection::vec(-9i64..=9, 50),
        dens in prop::collection::vec(1i64..=12, 50),
    ) {
        let a = RatMatrix::from_fn(m, k, |i, j| rat(nums[i * 5 + j], dens[i * 5 + j]));
        let b = RatMatrix::from_fn(k, n, |i, j| rat(nums[25 + i * 5 + j], dens[25 + i * 5 + j]));
        let expected = RatMatrix::from_fn(m, n, |i, j| {
            (0..k).fold(zero(), |acc, t| acc + &a[(i, t)] * &b[(t, j)])
        });
        prop_assert_eq!(&a * &b, expected);
    }
}
