//! Bracket state sum against the independent skein oracle and frozen values.

mod support;

use singular_knots::bracket::{jones_vs, singular_bracket};
use singular_knots::poly::LaurentPoly;
use singular_knots::BMode;
use support::*;

fn poly2(terms: &[(i64, i32, i32, i32)]) -> LaurentPoly {
    let mut out = LaurentPoly::zero(2);
    for &(c, a, b1, b2) in terms {
        out = out
            .try_add(&LaurentPoly::monomial(2, c, a, &[b1, b2]))
            .unwrap();
    }
    out
}

#[test]
fn classical_corpus_matches_skein_oracle() {
    for name in full_corpus() {
        let d = load(name);
        if d.double_point_count() > 0 {
            continue;
        }
        let oracle = skein_bracket(&d);
        let ours = singular_bracket(&d, BMode::Single).unwrap();
        assert_eq!(ours, lift(&oracle, 1), "bracket of {name}");
        let oracle_v = writhe_normalize(&d, &oracle);
        assert_eq!(
            jones_vs(&d, BMode::Single).unwrap(),
            lift(&oracle_v, 1),
            "jones of {name}"
        );
    }
}

#[test]
fn singular_trefoil_two_variable_jones() {
    let d = load("singular_trefoil.sd");
    let expect = poly2(&[
        (1, -6, -1, -1),
        (-1, 4, 1, -1),
        (-1, -4, 1, -1),
        (-1, -4, -1, 1),
        (-1, -8, -1, 1),
        (1, 6, 1, 1),
        (1, 2, 1, 1),
        (1, -2, 1, 1),
        (1, -6, 1, 1),
    ]);
    assert_eq!(jones_vs(&d, BMode::Indexed).unwrap(), expect);
}

#[test]
fn singular_trefoil_inverse_swaps_b_variables() {
    let d = load("singular_trefoil.sd");
    let forward = jones_vs(&d, BMode::Indexed).unwrap();
    let backward = jones_vs(&d.inverse_long_knot().unwrap(), BMode::Indexed).unwrap();
    // the inverse passes the curl first, so B1 and B2 trade places
    let swapped: LaurentPoly = {
        let mut out = LaurentPoly::zero(2);
        for (e, c) in forward.terms() {
            let m = LaurentPoly::monomial(2, c.clone(), e.a, &[e.b[1], e.b[0]]);
            out = out.try_add(&m).unwrap();
        }
        out
    };
    assert_ne!(forward, backward);
    assert_eq!(backward, swapped);
}

#[test]
fn inverse_diagram_file_matches_inverse_map() {
    let d = load("singular_trefoil.sd");
    let file = load("singular_trefoil_inverse.sd");
    assert_eq!(
        d.inverse_long_knot().unwrap().canonical_relabel(),
        file.canonical_relabel()
    );
}

#[test]
fn jones_is_the_writhe_normalized_bracket() {
    use num_bigint::BigInt;
    for name in full_corpus() {
        let d = load(name);
        let mut raw = singular_bracket(&d, BMode::Single).unwrap();
        let w = d.writhe();
        let sign = if w % 2 == 0 { 1 } else { -1 };
        raw.scale(&BigInt::from(sign), -3 * w, &[0]);
        assert_eq!(jones_vs(&d, BMode::Single).unwrap(), raw, "{name}");
    }
}

#[test]
fn identified_and_single_agree_on_long_corpus() {
    for name in LONG_CORPUS {
        let d = load(name);
        let indexed = jones_vs(&d, BMode::Indexed).unwrap();
        let single = jones_vs(&d, BMode::Single).unwrap();
        assert_eq!(
            indexed.identify_b_variables(),
            single.identify_b_variables(),
            "{name}"
        );
    }
}

#[test]
fn b_exponents_stay_in_range() {
    for name in LONG_CORPUS {
        let d = load(name);
        let p = jones_vs(&d, BMode::Indexed).unwrap();
        for i in 1..=p.arity() {
            if let Some((lo, hi)) = p.b_degree_range(i) {
                assert!(lo >= -1 && hi <= 1, "{name} B{i} range {lo}..{hi}");
            }
        }
    }
}
