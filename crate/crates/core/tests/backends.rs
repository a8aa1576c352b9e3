//! Mechanism-level laws of the two backends and their agreement.

use mechmvp::axis_ladder::LadderPosition;
use mechmvp::{
    matmul, matvec, oracle_matmul, oracle_matvec, AxisLadderMvp, BitMatrix, BitVector, Mvp,
    WallLightMvp, PASS_PHASES,
};
use proptest::prelude::*;

fn arb_config(max_n: usize) -> impl Strategy<Value = (BitMatrix, BitVector)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(cells, bits)| {
                (
                    BitMatrix::from_fn(n, |i, j| cells[i * n + j]).unwrap(),
                    BitVector::from_bits(bits).unwrap(),
                )
            })
    })
}

/// Axis machine loaded with `a` whose active columns are those set in
/// `active`, reached through the individual activation primitive.
fn axis_with(a: &BitMatrix, active: &BitVector) -> AxisLadderMvp {
    let mut m = AxisLadderMvp::sequential(a.n()).unwrap();
    m.load_matrix(a).unwrap();
    for j in (0..a.n()).filter(|&j| active.get(j)) {
        m.activate_column(j).unwrap();
    }
    m
}

fn wall_with(a: &BitMatrix, active: &BitVector) -> WallLightMvp {
    let mut m = WallLightMvp::sequential(a.n()).unwrap();
    m.load_matrix(a).unwrap();
    for j in (0..a.n()).filter(|&j| active.get(j)) {
        m.shift_wall_down(j).unwrap();
    }
    m
}

#[test]
fn exhaustive_small_end_to_end() {
    for n in 1..=3usize {
        for aw in 0..1u64 << (n * n) {
            let a = BitMatrix::from_word(n, aw).unwrap();
            let mut seq = AxisLadderMvp::sequential(n).unwrap();
            let mut par = AxisLadderMvp::parallel(n).unwrap();
            let mut wall = WallLightMvp::sequential(n).unwrap();
            seq.load_matrix(&a).unwrap();
            par.load_matrix(&a).unwrap();
            wall.load_matrix(&a).unwrap();
            for vw in 0..1u64 << n {
                let x = BitVector::from_word(n, vw).unwrap();
                let expected = oracle_matvec(&a, &x).unwrap();
                assert_eq!(matvec(&mut seq, &x).unwrap().result, expected);
                let r = matvec(&mut par, &x).unwrap();
                assert_eq!(r.result, expected);
                assert_eq!(r.ops.parallel_phases(), PASS_PHASES);
                assert_eq!(matvec(&mut wall, &x).unwrap().result, expected);
            }
        }
    }
}

#[test]
fn fig6_deactivate_first_column() {
    let a = mechmvp::fixtures::fig6_matrix();
    let mut m = axis_with(&a, &mechmvp::fixtures::fig6_vector());
    m.deactivate_column(0).unwrap();
    assert_eq!(m.active_set(), vec![2]);
}

#[test]
fn fig6_light_matches_ladders() {
    let a = mechmvp::fixtures::fig6_matrix();
    let active = mechmvp::fixtures::fig6_vector();
    let mut wall = wall_with(&a, &active);
    wall.load_vector(&active).unwrap();
    wall.sync_columns().unwrap();
    wall.set_output().unwrap();
    let mut axis = axis_with(&a, &active);
    axis.load_vector(&active).unwrap();
    axis.sync_columns().unwrap();
    axis.set_output().unwrap();
    assert_eq!(wall.report_output().unwrap(), axis.report_output().unwrap());
    assert_eq!(wall.output().to_string(), "1101");
}

proptest! {
    #[test]
    fn protrusion_and_blocking_laws((a, active) in arb_config(10)) {
        let n = a.n();
        let mut m = axis_with(&a, &active);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(m.protrudes(i, j), a.get(i, j) && active.get(j));
            }
        }
        for i in 0..n {
            let any_protrusion = (0..n).any(|j| m.protrudes(i, j));
            let moved = m.move_ladder(i).unwrap();
            prop_assert_eq!(moved, !any_protrusion);
            prop_assert_eq!(m.ladder(i) == LadderPosition::Shifted, moved);
            prop_assert_eq!(m.output().get(i), !moved);
        }
    }

    #[test]
    fn window_law((a, active) in arb_config(10)) {
        let m = wall_with(&a, &active);
        for i in 0..a.n() {
            for j in 0..a.n() {
                prop_assert_eq!(m.wall(j).passes_light(i), !(active.get(j) && a.get(i, j)));
            }
        }
    }

    #[test]
    fn light_is_complement_of_blocking((a, active) in arb_config(12)) {
        let axis = axis_with(&a, &active);
        let mut wall = wall_with(&a, &active);
        for i in 0..a.n() {
            prop_assert_eq!(wall.observe_light(i).unwrap(), !axis.is_blocked(i));
        }
    }

    #[test]
    fn parallel_and_sequential_paths_agree((a, x) in arb_config(12), prior in any::<u64>()) {
        let n = a.n();
        let prior = BitVector::from_fn(n, |k| (prior >> (k % 64)) & 1 == 1).unwrap();
        let mut seq = AxisLadderMvp::sequential(n).unwrap();
        let mut par = AxisLadderMvp::parallel(n).unwrap();
        for m in [&mut seq, &mut par] {
            m.load_matrix(&a).unwrap();
            matvec(m, &prior).unwrap();
            m.load_vector(&x).unwrap();
            m.sync_columns().unwrap();
            m.set_output().unwrap();
        }
        prop_assert_eq!(seq.active_set(), par.active_set());
        prop_assert_eq!(seq.output(), par.output());
        prop_assert_eq!(seq.matrix(), par.matrix());
        for i in 0..n {
            prop_assert_eq!(seq.ladder(i), par.ladder(i));
        }
    }

    #[test]
    fn parallel_ladder_step_equals_sequential_moves((a, active) in arb_config(12)) {
        let mut seq = axis_with(&a, &active);
        let mut par = AxisLadderMvp::parallel(a.n()).unwrap();
        par.load_matrix(&a).unwrap();
        par.load_vector(&active).unwrap();
        par.parallel_sync().unwrap();
        for i in 0..a.n() {
            seq.move_ladder(i).unwrap();
        }
        let before = par.oplog().clone();
        par.parallel_ladder_step().unwrap();
        prop_assert_eq!(par.oplog().since(&before).parallel_phases(), 1);
        prop_assert_eq!(seq.output(), par.output());
    }

    #[test]
    fn backends_agree_on_products((a, _x) in arb_config(7), seed in any::<u64>()) {
        let n = a.n();
        let b = BitMatrix::from_fn(n, |i, j| (seed.rotate_left((i * n + j) as u32) & 1) == 1).unwrap();
        let expected = oracle_matmul(&a, &b).unwrap();
        let mut seq = AxisLadderMvp::sequential(n).unwrap();
        let mut par = AxisLadderMvp::parallel(n).unwrap();
        let mut wall = WallLightMvp::sequential(n).unwrap();
        prop_assert_eq!(&matmul(&mut seq, &a, &b).unwrap().result, &expected);
        prop_assert_eq!(&matmul(&mut par, &a, &b).unwrap().result, &expected);
        prop_assert_eq!(&matmul(&mut wall, &a, &b).unwrap().result, &expected);
    }
}
