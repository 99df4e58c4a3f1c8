//! Weights recovered from a measure table, at every level of the tower.

mod common;

use std::sync::Arc;

use num_rational::BigRational;
use traintrack::interval::{parse_rational, Precision};
use traintrack::map::GraphMap;
use traintrack::measure::{recover_weights, KolmogorovFunction, MeasureTable};
use traintrack::spectra::pf_eigenpair;
use traintrack::tower::{mat_vec, repetition_bound, RepetitionMode, StationaryTower, VectorTower};

use common::*;

fn setup(f: &GraphMap, at: usize) -> (Arc<StationaryTower>, VectorTower, KolmogorovFunction) {
    let t = Arc::new(StationaryTower::new(f).unwrap());
    let ep = pf_eigenpair(t.matrix(), Precision::default()).unwrap();
    let vt = VectorTower::from_eigenpair(&ep).normalized_at(at).unwrap();
    let k = KolmogorovFunction::from_vector(t.clone(), &vt).unwrap();
    (t, vt, k)
}

fn eps() -> BigRational {
    parse_rational("1e-10").unwrap()
}

fn rhos(t: &StationaryTower) -> Vec<usize> {
    (0..=3)
        .map(|n| {
            repetition_bound(t, n, 6, RepetitionMode::InfinitelyLegal)
                .unwrap()
                .found()
                .unwrap()
        })
        .collect()
}

/// Recovers level `n` at radius `rho` and checks every short edge against
/// `v / λ^n`.
fn check_level(t: &StationaryTower, vt: &VectorTower, table: &MeasureTable, n: u32, rho: usize) {
    let rw = recover_weights(table, t, n, rho).unwrap();
    let want = vt.level(n);
    for (s, x) in &rw.short {
        let d = x - &want[s.edge.index()];
        assert_eq!(
            d.within(&eps()),
            Some(true),
            "level {n}, rho {rho}, {s:?}: {x:?}"
        );
    }
}

// Bounds computed independently by labelling the positions of f^18(a) with
// their desubstitution data and searching for repeated windows.
#[test]
fn repetition_bounds_by_level() {
    let (t, _, _) = setup(&fibonacci(), 1);
    assert_eq!(rhos(&t), [0, 1, 3, 6]);
    let (t, _, _) = setup(&thue_morse(), 0);
    assert_eq!(rhos(&t), [0, 2, 3, 6]);
}

#[test]
fn four_levels_from_a_length_13_table() {
    for (f, at) in [(fibonacci(), 1), (thue_morse(), 0)] {
        let (t, vt, k) = setup(&f, at);
        let table = k.table(13).unwrap();
        for (n, rho) in rhos(&t).into_iter().enumerate() {
            check_level(&t, &vt, &table, n as u32, rho);
        }
    }
}

#[test]
fn larger_radius_gives_the_same_weights() {
    for (f, at) in [(fibonacci(), 1), (thue_morse(), 0)] {
        let (t, vt, k) = setup(&f, at);
        let table = k.table(9).unwrap();
        for (n, rho) in rhos(&t).into_iter().enumerate().take(3) {
            for r in rho..=4 {
                check_level(&t, &vt, &table, n as u32, r);
            }
        }
    }
}

#[test]
fn recovered_vectors_are_compatible_across_levels() {
    let (t, vt, k) = setup(&thue_morse(), 0);
    let table = k.table(7).unwrap();
    let levels: Vec<_> = rhos(&t)
        .into_iter()
        .take(3)
        .enumerate()
        .map(|(n, rho)| {
            recover_weights(&table, &t, n as u32, rho)
                .unwrap()
                .edge_vector(t.graph())
        })
        .collect();
    for n in 0..2 {
        let pushed = mat_vec(t.matrix(), &levels[n + 1], vt.bits + 16);
        for (a, b) in pushed.iter().zip(&levels[n]) {
            assert_eq!((a - b).within(&eps()), Some(true));
        }
    }
}

#[test]
fn too_small_radius_is_refused() {
    let (t, _, k) = setup(&thue_morse(), 0);
    let table = k.table(5).unwrap();
    assert!(recover_weights(&table, &t, 1, 1).is_err());
}
