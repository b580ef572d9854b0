//! Move rewriting across the corpus: growth bounds, conservation laws,
//! round-trips, and fuzz determinism.

mod support;

use singular_knots::diagram::Diagram;
use singular_knots::moves::{
    apply_move, find_moves, fuzz_invariance, fuzz_invariance_with, FuzzOptions, MoveKind,
    MOVE_KINDS,
};
use support::{load, CLOSED_CORPUS, LONG_CORPUS};

fn all_corpus() -> Vec<Diagram> {
    LONG_CORPUS
        .iter()
        .chain(CLOSED_CORPUS.iter())
        .map(|n| load(n))
        .collect()
}

#[test]
fn every_instance_applies_with_its_stated_growth() {
    for d in all_corpus() {
        for m in find_moves(&d) {
            let out = apply_move(&d, &m).unwrap();
            assert_eq!(
                out.vertices().len() as i32 - d.vertices().len() as i32,
                m.kind.growth(),
                "{m} on a {}-vertex diagram",
                d.vertices().len()
            );
        }
    }
}

#[test]
fn moves_conserve_double_points_and_passage_order() {
    for d in all_corpus() {
        let labels = |x: &Diagram| -> Vec<(u32, [u32; 4])> {
            let mut out: Vec<(u32, [u32; 4])> = x
                .vertices()
                .iter()
                .enumerate()
                .filter_map(|(i, v)| x.dp_label(i).map(|l| (l, v.edges())))
                .collect();
            out.sort();
            out
        };
        for m in find_moves(&d) {
            let out = apply_move(&d, &m).unwrap();
            assert_eq!(out.double_point_count(), d.double_point_count(), "{m}");
            assert_eq!(out.is_long(), d.is_long(), "{m}");
            if d.is_long() {
                assert_eq!(labels(&out).len(), labels(&d).len(), "{m}");
            }
        }
    }
}

#[test]
fn every_move_round_trips_through_an_inverse() {
    let inverse_kinds = |k: MoveKind| -> Vec<MoveKind> {
        match k {
            MoveKind::R1AddPosLeft
            | MoveKind::R1AddNegLeft
            | MoveKind::R1AddPosRight
            | MoveKind::R1AddNegRight => vec![MoveKind::R1Drop],
            MoveKind::R2AddOver
            | MoveKind::R2AddUnder
            | MoveKind::R2AddFingerOver
            | MoveKind::R2AddFingerUnder => vec![MoveKind::R2Drop],
            MoveKind::R1Drop => vec![
                MoveKind::R1AddPosLeft,
                MoveKind::R1AddNegLeft,
                MoveKind::R1AddPosRight,
                MoveKind::R1AddNegRight,
            ],
            MoveKind::R2Drop => vec![
                MoveKind::R2AddOver,
                MoveKind::R2AddUnder,
                MoveKind::R2AddFingerOver,
                MoveKind::R2AddFingerUnder,
            ],
            MoveKind::R3 => vec![MoveKind::R3],
            MoveKind::SiiiSliderOver => vec![MoveKind::SiiiSliderOver],
            MoveKind::SiiiSliderUnder => vec![MoveKind::SiiiSliderUnder],
            MoveKind::SiiAddFirstOver | MoveKind::SiiAddFirstUnder => vec![MoveKind::SiiDrop],
            MoveKind::SiiDrop => vec![MoveKind::SiiAddFirstOver, MoveKind::SiiAddFirstUnder],
        }
    };
    for d in all_corpus() {
        let home = d.canonical_relabel();
        for m in find_moves(&d) {
            let out = apply_move(&d, &m).unwrap();
            let undone = inverse_kinds(m.kind).iter().any(|&ik| {
                find_moves(&out)
                    .iter()
                    .filter(|j| j.kind == ik)
                    .any(|j| apply_move(&out, j).unwrap() == home)
            });
            assert!(undone, "{m} cannot be undone");
        }
    }
}

#[test]
fn fuzz_reports_are_reproducible() {
    for name in [
        "singular_trefoil.sd",
        "long_figure_eight.sd",
        "closed_granny.sd",
    ] {
        let d = load(name);
        let a = fuzz_invariance(&d, 8, 42);
        let b = fuzz_invariance(&d, 8, 42);
        assert!(a.violation.is_none(), "{name}: {:?}", a.violation);
        assert_eq!(a.steps_applied, b.steps_applied);
        assert_eq!(a.kind_counts, b.kind_counts);
        assert_eq!(a.final_vertices, b.final_vertices);
        let c = fuzz_invariance(&d, 8, 43);
        assert!(c.violation.is_none());
    }
}

#[test]
fn balanced_fuzz_reaches_the_rare_shapes() {
    let opts = FuzzOptions {
        kind_balanced: true,
        vertex_cap: 12,
        ..FuzzOptions::default()
    };
    let mut counts = std::collections::BTreeMap::new();
    for name in ["singular_slide.sd", "singular_slide_under.sd"] {
        let d = load(name);
        for seed in 0..40 {
            let r = fuzz_invariance_with(&d, 8, seed, opts);
            assert!(
                r.violation.is_none(),
                "{name} seed {seed}: {:?}",
                r.violation
            );
            for (k, c) in r.kind_counts {
                *counts.entry(k).or_insert(0u32) += c;
            }
        }
    }
    for k in [
        MoveKind::SiiiSliderOver,
        MoveKind::SiiiSliderUnder,
        MoveKind::SiiDrop,
        MoveKind::R3,
    ] {
        assert!(
            counts.get(k.name()).copied().unwrap_or(0) > 0,
            "{k} never chosen from the slide starts"
        );
    }
}

#[test]
fn the_move_catalogue_is_complete_and_named() {
    assert_eq!(MOVE_KINDS.len(), 16);
    let names: std::collections::BTreeSet<&str> = MOVE_KINDS.iter().map(|k| k.name()).collect();
    assert_eq!(names.len(), 16);
    let intros = MOVE_KINDS.iter().filter(|k| k.is_introduction()).count();
    assert_eq!(intros, 10);
    for k in MOVE_KINDS {
        assert_eq!(k.is_introduction(), k.growth() > 0);
    }
}
