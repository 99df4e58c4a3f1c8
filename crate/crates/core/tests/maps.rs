//! Paths, graph maps, train track detection and the dialect changes, on
//! seeded random inputs.

mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;
use traintrack::dialects::{blow_up_map, BlowEdge};
use traintrack::graph::{is_reduced, reduce, reverse, Edge, Language};
use traintrack::map::{
    homotopy_equivalence, infinitely_legal_language, is_expanding, is_train_track, used_language,
    GraphMap, TrainTrackVerdict,
};
use traintrack::spectra::is_primitive;

use common::*;

/// Iterates `f` on `e` while the path stays short, checking each iterate.
fn iterates_reduced(f: &GraphMap, e: Edge, max_t: usize) -> Result<(), usize> {
    let mut p = vec![e];
    for t in 1..=max_t {
        p = f.image_of_path(&p);
        if !is_reduced(&p) {
            return Err(t);
        }
        if p.len() > 50_000 {
            break;
        }
    }
    Ok(())
}

fn train_track_example(seed: u64) -> GraphMap {
    let mut r = rng(seed);
    if seed.is_multiple_of(3) {
        // Random maps are seldom train tracks; take one when it is.
        for _ in 0..50 {
            let f = random_self_map(&mut r);
            if is_train_track(&f).unwrap() == TrainTrackVerdict::TrainTrack
                && is_expanding(&f).unwrap()
            {
                return f;
            }
        }
    }
    random_substitution(&mut r, 3).to_train_track()
}

fn covers_every_edge(f: &GraphMap) -> bool {
    let g = f.domain();
    g.positive_edges().all(|e| {
        g.oriented_edges()
            .any(|x| f.image(x).iter().any(|y| y.unsigned() == e))
    })
}

/// Bi-extendability of every path shorter than the truncation length.
fn bi_extendable(f: &GraphMap, lang: &Language) -> bool {
    let g = f.domain();
    lang.paths
        .iter()
        .filter(|p| p.len() < lang.max_len)
        .all(|p| {
            let left = g.oriented_edges().any(|e| {
                let mut q = vec![e];
                q.extend(p);
                lang.contains(&q)
            });
            let right = g.oriented_edges().any(|e| {
                let mut q = p.clone();
                q.push(e);
                lang.contains(&q)
            });
            left && right
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reverse_and_reduce(seed in any::<u64>(), len in 0usize..20) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 6);
        let word: Vec<Edge> = (0..len).map(|_| Edge(r.gen_range(0..2 * g.edge_count() as u32))).collect();
        prop_assert_eq!(reverse(&word).len(), word.len());
        prop_assert_eq!(reverse(&reverse(&word)), word.clone());
        prop_assert_eq!(is_reduced(&word), is_reduced(&reverse(&word)));
        let red = reduce(&word);
        prop_assert!(red.len() <= word.len());
        prop_assert!(is_reduced(&red));
        prop_assert_eq!(reduce(&red), red.clone());
        if is_reduced(&word) {
            prop_assert_eq!(red, word);
        }
    }

    #[test]
    fn train_track_verdicts_match_iteration(seed in any::<u64>()) {
        let f = random_self_map(&mut rng(seed));
        match is_train_track(&f).unwrap() {
            TrainTrackVerdict::TrainTrack => {
                for e in f.domain().positive_edges() {
                    prop_assert_eq!(iterates_reduced(&f, e, 20), Ok(()));
                }
            }
            TrainTrackVerdict::NotTrainTrack { edge, iterate, .. } => {
                prop_assert_eq!(iterates_reduced(&f, edge, iterate), Err(iterate));
                for e in f.domain().positive_edges() {
                    if let Err(t) = iterates_reduced(&f, e, iterate) {
                        prop_assert!(t >= iterate);
                    }
                }
            }
        }
    }

    #[test]
    fn homotopy_equivalence_has_unit_determinant(seed in any::<u64>()) {
        let f = random_self_map(&mut rng(seed));
        let rep = homotopy_equivalence(&f).unwrap();
        if rep.is_equivalence {
            prop_assert_eq!(rep.abelian_det.abs(), 1.into());
        }
    }

    #[test]
    fn transition_matrix_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 3, 4);
        let h = random_graph(&mut r, 3, 4);
        let k = random_graph(&mut r, 3, 4);
        let f1 = random_map_between(&mut r, &g, &h, 4);
        let f2 = random_map_between(&mut r, &h, &k, 4);
        let fg = f2.compose(&f1).unwrap();
        prop_assert_eq!(fg.transition_matrix(), f2.transition_matrix().mul(&f1.transition_matrix()));
    }

    #[test]
    fn blow_up_images_avoid_bad_local_edges(seed in any::<u64>()) {
        let f = random_self_map(&mut rng(seed));
        let b = blow_up_map(&f).unwrap();
        let local = |e: Edge| matches!(b.codomain.blow.kinds[e.index()], BlowEdge::Local(_));
        for e in b.domain.graph().oriented_edges() {
            if local(e) {
                continue;
            }
            let img = b.map.image(e);
            prop_assert!(!img.is_empty());
            prop_assert!(!local(img[0]) && !local(*img.last().unwrap()));
            prop_assert!(img.windows(2).all(|w| !(local(w[0]) && local(w[1]))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn languages_are_laminary_and_invariant(seed in any::<u64>()) {
        let f = train_track_example(seed);
        let len = 5;
        let inf = infinitely_legal_language(&f, len).unwrap();
        let used = used_language(&f, len).unwrap();
        if covers_every_edge(&f) {
            prop_assert!(used.is_subset(&inf));
        }
        prop_assert!(bi_extendable(&f, &inf));
        if is_primitive(&f.transition_matrix()) {
            prop_assert!(bi_extendable(&f, &used));
        }
        for lang in [&inf, &used] {
            prop_assert!(lang.is_laminary());
            for p in &lang.paths {
                let q = f.image_of_path(p);
                if q.len() <= len {
                    prop_assert!(lang.contains(&q));
                }
            }
        }
    }
}

/// Expanding, but the letter `a` only ever starts `f^t(a)`, so nothing
/// precedes it in the used language; the infinitely legal language still
/// extends it (`c a`, `b a` cross legal turns that cover each other).
#[test]
fn used_language_of_expanding_map_need_not_extend() {
    let f = rose_map(&["a", "b", "c"], &["a c", "b c", "b"]);
    assert!(is_expanding(&f).unwrap());
    let used = used_language(&f, 4).unwrap();
    let inf = infinitely_legal_language(&f, 4).unwrap();
    let a = f.domain().parse_path("a").unwrap();
    let left = |lang: &Language| {
        f.domain()
            .oriented_edges()
            .any(|e| lang.contains(&[e, a[0]]))
    };
    assert!(used.contains(&a) && !left(&used));
    assert!(left(&inf));
    assert!(bi_extendable(&f, &inf));
}

/// No edge image crosses `e0`, so the paths seen only inside `f(e0)` are
/// used at `t = 1` and never again, and are not infinitely legal.
#[test]
fn used_paths_need_not_be_infinitely_legal() {
    let f = train_track_example(11533913171685650100);
    let g = f.domain();
    let e0 = g.edge_by_name("e0").unwrap();
    assert!(!covers_every_edge(&f));
    assert!(g
        .oriented_edges()
        .all(|e| !f.image(e).iter().any(|x| x.unsigned() == e0)));
    let p = g.parse_path("e1 ~e2").unwrap();
    assert!(used_language(&f, 2).unwrap().contains(&p));
    assert!(!infinitely_legal_language(&f, 2).unwrap().contains(&p));
}
