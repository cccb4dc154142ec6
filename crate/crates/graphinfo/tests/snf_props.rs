use graphinfo::zdlinalg::{
    count_homogeneous_with, smith_normal_form, solve_right_with, ColOp, ZdMatrix,
};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = ZdMatrix> {
    (2i64..=64, 1usize..=4, 1usize..=4)
        .prop_flat_map(|(d, rows, cols)| {
            (
                proptest::collection::vec(
                    proptest::collection::vec(0..d, cols),
                    rows,
                ),
                Just(d),
            )
        })
        .prop_map(|(rows, d)| ZdMatrix::from_rows(&rows, d).unwrap())
}

fn apply_col_op(m: &mut ZdMatrix, op: ColOp) {
    let d = m.modulus();
    match op {
        ColOp::Swap { a, b } => {
            for r in 0..m.rows() {
                let (va, vb) = (m.get(r, a), m.get(r, b));
                m.set(r, a, vb);
                m.set(r, b, va);
            }
        }
        ColOp::Scale { a, q } => {
            for r in 0..m.rows() {
                let v = m.get(r, a) * q % d;
                m.set(r, a, v);
            }
        }
        ColOp::AddMul { dest, src, m: mul } => {
            for r in 0..m.rows() {
                let v = m.get(r, dest) + mul * m.get(r, src);
                m.set(r, dest, v);
            }
        }
    }
}

proptest! {
    #[test]
    fn smith_decomposition_invariants(f in matrix_strategy()) {
        let d = f.modulus();
        let smith = smith_normal_form(&f);

        let vfw = smith.v.mul(&f).unwrap().mul(&smith.w).unwrap();
        prop_assert_eq!(&vfw, &smith.s);

        let iv = ZdMatrix::identity(f.rows(), d);
        let iw = ZdMatrix::identity(f.cols(), d);
        prop_assert_eq!(&smith.v.mul(&smith.v_inv).unwrap(), &iv);
        prop_assert_eq!(&smith.v_inv.mul(&smith.v).unwrap(), &iv);
        prop_assert_eq!(&smith.w.mul(&smith.w_inv).unwrap(), &iw);
        prop_assert_eq!(&smith.w_inv.mul(&smith.w).unwrap(), &iw);

        for r in 0..smith.s.rows() {
            for c in 0..smith.s.cols() {
                if r != c {
                    prop_assert_eq!(smith.s.get(r, c), 0);
                }
            }
        }
        for (j, &e) in smith.diag.iter().enumerate() {
            prop_assert_eq!(smith.s.get(j, j), e);
            let rep = if e == 0 { d } else { e };
            prop_assert_eq!(d % rep, 0);
        }

        let mut replayed = ZdMatrix::identity(f.cols(), d);
        for &op in &smith.col_ops {
            apply_col_op(&mut replayed, op);
        }
        prop_assert_eq!(&replayed, &smith.w);
    }

    #[test]
    fn solve_right_finds_consistent_solutions(
        f in matrix_strategy(),
        seed in proptest::collection::vec(0i64..64, 4),
    ) {
        let d = f.modulus();
        let x: Vec<i64> = seed.iter().take(f.rows()).map(|&v| v % d).collect();
        let u = f.row_vec_mul(&x).unwrap();
        let smith = smith_normal_form(&f);

        let sol = solve_right_with(&smith, &u).unwrap();
        prop_assert!(sol.solvable);
        let p = sol.particular.unwrap();
        prop_assert_eq!(f.row_vec_mul(&p).unwrap(), u);
        prop_assert_eq!(sol.count, count_homogeneous_with(&smith));
    }
}
