use gpdef::exactla::{rref, solve_affine, Field, Mat, PreparedSystem, Subspace};
use proptest::prelude::*;

fn mat_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

fn build(field: Field, r: usize, c: usize, data: &[i64]) -> Mat {
    let rows: Vec<&[i64]> = data.chunks(c).collect();
    let m = Mat::from_i64(field, &rows);
    assert_eq!(m.shape(), (r, c));
    m
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Q), Just(Field::Fp(101)), Just(Field::Fp(3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rref_preserves_row_space(field in fields(), (r, c, data) in mat_strategy(6, 7)) {
        let m = build(field, r, c, &data);
        let red = rref(&m);
        // Row-reducing the reduced form again gives the identical canonical form.
        prop_assert_eq!(&rref(&red.reduced), &red);
        let rows = |x: &Mat| (0..x.rows()).map(|i| x.row(i).to_vec()).collect::<Vec<_>>();
        let a = Subspace::span(field, c, &rows(&m));
        let b = Subspace::span(field, c, &rows(&red.reduced));
        prop_assert!(a.is_subspace_of(&b) && b.is_subspace_of(&a));
        prop_assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn kernel_is_annihilated(field in fields(), (r, c, data) in mat_strategy(6, 7)) {
        let m = build(field, r, c, &data);
        let k = m.kernel_basis();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn solve_affine_matches_augmented_pivot(
        field in fields(),
        (r, c, data) in mat_strategy(5, 6),
        rhs in prop::collection::vec(-3i64..=3, 5),
    ) {
        let a = build(field, r, c, &data);
        let b = Mat::column(field, rhs[..r].iter().map(|&x| field.from_i64(x)).collect());
        let aug = rref(&a.hstack(&b));
        let inconsistent = aug.pivot_cols.contains(&c);
        let sol = solve_affine(&a, &b).unwrap();
        prop_assert_eq!(sol.is_none(), inconsistent);
        if let Some(s) = sol {
            prop_assert_eq!(a.mul(&s.particular), b.clone());
            prop_assert!(a.mul(&s.homogeneous).is_zero());
            let prepared = PreparedSystem::new(&a);
            let x = prepared.solve(&b.col(0)).expect("consistent");
            prop_assert_eq!(a.mul_vec(&x), b.col(0));
        }
    }

    #[test]
    fn operations_are_deterministic(field in fields(), (r, c, data) in mat_strategy(5, 5)) {
        let m = build(field, r, c, &data);
        prop_assert_eq!(rref(&m), rref(&m.clone()));
        prop_assert_eq!(m.kernel_basis(), m.kernel_basis());
    }

    #[test]
    fn inverse_round_trip(
        field in fields(),
        (n, data) in (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(-3i64..=3, n * n))),
    ) {
        let m = build(field, n, n, &data);
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.mul(&inv), Mat::identity(field, n));
                prop_assert!(!m.determinant().is_zero());
            }
            None => prop_assert!(m.determinant().is_zero()),
        }
    }
}
