//! The bound surface on a minimum-size grid: soundness on random states,
//! convexity along lines, and dominance of the single-constraint bounds.

use std::sync::OnceLock;

use eofbound::bounds::{
    bound_nphi, bound_nt, build_surface, extended_bound_nphi, extended_bound_nt, BoundSurface,
    SweepConfig, MIN_GRID,
};
use eofbound::linalg::{DensityMatrix, LabeledSchmidt, PureState};
use eofbound::monotones::{monotone_pair, MonotonePair};
use eofbound::random::{random_dirichlet, random_pure_state, seeded};
use eofbound::region::GridSpec;
use proptest::prelude::*;

fn surface() -> &'static BoundSurface {
    static S: OnceLock<BoundSurface> = OnceLock::new();
    S.get_or_init(|| {
        build_surface(GridSpec::new(MIN_GRID).unwrap(), SweepConfig::with_step(1e-2)).unwrap()
    })
}

#[test]
fn sound_on_labeled_pure_states() {
    let s = surface();
    let mut rng = seeded(41);
    for _ in 0..2000 {
        let l = LabeledSchmidt::new(random_dirichlet(&mut rng, 0.5)).unwrap();
        let n = MonotonePair::of_pure(&l);
        let b = s.eval(n).unwrap();
        assert!(b <= l.entropy() + 1e-6, "{n:?}: bound {b} > entropy {}", l.entropy());
    }
}

#[test]
fn sound_on_operational_pure_states() {
    let s = surface();
    let mut rng = seeded(42);
    for _ in 0..100 {
        let psi = random_pure_state(&mut rng, 4);
        let e = eofbound::linalg::schmidt_vector(&psi).unwrap().entropy();
        let n = monotone_pair(&DensityMatrix::from_pure(&psi), false).unwrap();
        assert!(s.eval(n).unwrap() <= e + 1e-6);
    }
}

#[test]
fn maximally_entangled_and_product_corners() {
    let s = surface();
    let me = DensityMatrix::from_pure(&PureState::canonical([0.25; 4], 4).unwrap());
    let n = monotone_pair(&me, false).unwrap();
    assert!((s.eval(n).unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(s.eval(MonotonePair { n_phi: 0.0, n_t: 0.0 }).unwrap(), 0.0);
}

#[test]
fn hull_is_convex_along_grid_lines() {
    let s = surface();
    let g = s.grid();
    for i in 0..g.nodes {
        for j in 1..g.nodes - 1 {
            if let (Some(a), Some(b), Some(c)) = (s.h_hull(i, j - 1), s.h_hull(i, j), s.h_hull(i, j + 1)) {
                assert!(b <= (a + c) / 2.0 + 1e-9, "column {i} row {j}");
            }
        }
    }
    for j in 0..g.nodes {
        for i in 1..g.nodes - 1 {
            if let (Some(a), Some(b), Some(c)) = (s.h_hull(i - 1, j), s.h_hull(i, j), s.h_hull(i + 1, j)) {
                assert!(b <= (a + c) / 2.0 + 1e-9, "row {j} column {i}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dominates_the_extended_single_bounds(x in 0.0f64..=1.5, y in 0.0f64..=1.5) {
        let n = MonotonePair { n_phi: x, n_t: y };
        let b = surface().eval(n).unwrap();
        prop_assert!(b >= extended_bound_nt(n).unwrap() - 1e-6);
        prop_assert!(b >= extended_bound_nphi(n).unwrap() - 1e-6);
        prop_assert!(b <= 2.0 + 1e-12);
    }

    #[test]
    fn monotone_in_each_argument(x in 0.0f64..1.45, y in 0.0f64..1.45, d in 0.0f64..0.05) {
        let s = surface();
        let base = s.eval(MonotonePair { n_phi: x, n_t: y }).unwrap();
        let right = s.eval(MonotonePair { n_phi: x + d, n_t: y }).unwrap();
        let up = s.eval(MonotonePair { n_phi: x, n_t: y + d }).unwrap();
        prop_assert!(right >= base - 1e-6);
        prop_assert!(up >= base - 1e-6);
    }

    #[test]
    fn single_bounds_are_monotone(a in 0.0f64..1.5, d in 0.0f64..0.1) {
        let b = (a + d).min(1.5);
        prop_assert!(bound_nt(b).unwrap() >= bound_nt(a).unwrap() - 1e-12);
        prop_assert!(bound_nphi(b).unwrap() >= bound_nphi(a).unwrap() - 1e-12);
    }
}
