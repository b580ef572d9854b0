//! Alexander state sums for singular diagrams.
//!
//! A classical state dots one adjacent quadrant per crossing so that every
//! non-starred region holds exactly one dot; it contributes the product of
//! the dotted quadrant weights. The two regions beside the long strand's
//! closure are starred. A double point enters through its two resolutions
//! compatible with orientation: the oriented smoothing, weighted B_i, and a
//! negative crossing, weighted by a fixed monomial; the polynomial is the
//! weighted sum of the resolved diagrams' state sums. Resolutions never
//! rebuild the diagram: an oriented smoothing merges the two regions that
//! meet the double point across its strands (corners 0 and 2), and the
//! crossing resolution keeps the rotation, so both act on a face-quotient
//! view of the original diagram.

use crate::diagram::{Diagram, DiagramError, Dsu, VertexKind};
use crate::poly::{Exps, LaurentPoly};
use crate::{pattern_certificate, BMode, Certificate};
use num_bigint::BigInt;

/// Quadrant dot weights (coefficient, A-exponent) with t^(1/2) = A; entry i
/// is the quadrant between legs i and i+1. Positive crossing: in-wedge A,
/// out-wedge -A^-1, sides 1. Negative: in-wedge A^-1, out-wedge -A, sides 1.
/// The side weight 1 makes a monogon dot exact, giving strict R1 invariance.
const POS_X_DOTS: [(i64, i32); 4] = [(1, 0), (-1, -1), (1, 0), (1, 1)];
const NEG_X_DOTS: [(i64, i32); 4] = [(1, -1), (1, 0), (-1, 1), (1, 0)];
/// A crossing-resolved double point keeps its leg pattern (V a b c d becomes
/// X- a b c d, the second strand passing over), so it dots like a negative
/// crossing in the double point's own corner coordinates.
const DP_NEG_DOTS: [(i64, i32); 4] = NEG_X_DOTS;

/// Monomial weighting a crossing resolution.
const NEG_RES_W: (i64, i32) = (1, -1);
/// Monomial weighting an oriented-smoothing resolution, times B_i. The
/// joint sign of the two weights cancels at even double point counts; the
/// positive choice is fixed here.
const OR_RES_W: (i64, i32) = (1, 1);

/// Quadrants facing a starred region are closed to dots.
const BLOCKED: usize = usize::MAX;

/// One perfect dotting of the unresolved diagram: `quadrant[v]` is the
/// dotted corner of vertex v. Placement ignores vertex kinds, so the state
/// count is structural: the permanent of the quadrant multiplicity matrix
/// between vertices and non-starred regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderState {
    pub quadrant: Vec<u8>,
}

/// The two regions beside the long strand's closure arc.
pub fn star_regions(d: &Diagram) -> Result<(usize, usize), DiagramError> {
    if !d.is_long() {
        return Err(DiagramError::NotLong);
    }
    let s = d.face_data().starred();
    debug_assert_eq!(s.len(), 2);
    Ok((s[0], s[1]))
}

/// All perfect dottings of the diagram itself, double points included.
pub fn enumerate_states(d: &Diagram) -> Result<Vec<AlexanderState>, DiagramError> {
    if !d.is_long() {
        return Err(DiagramError::NotLong);
    }
    let fd = d.face_data();
    let mut compact = vec![BLOCKED; fd.faces.len()];
    let mut n_free = 0;
    for (f, face) in fd.faces.iter().enumerate() {
        if !face.starred {
            compact[f] = n_free;
            n_free += 1;
        }
    }
    let cand: Vec<[usize; 4]> = (0..d.vertices().len())
        .map(|v| std::array::from_fn(|q| compact[fd.corner_face[v][q]]))
        .collect();
    let mut out = Vec::new();
    for_each_state(&cand, n_free, &mut |pick| {
        out.push(AlexanderState {
            quadrant: pick.to_vec(),
        })
    });
    Ok(out)
}

/// Visits every perfect dotting. `cand[v][q]` is the region class behind
/// quadrant q of vertex v, BLOCKED when starred. Depth-first over vertices
/// with the fewest open quadrants first; a full assignment is automatically
/// a bijection because classes and vertices are equinumerous.
fn for_each_state(cand: &[[usize; 4]], n_free: usize, leaf: &mut impl FnMut(&[u8])) {
    if cand.len() != n_free {
        return;
    }
    assert!(n_free <= 64, "state search capped at 64 regions");
    let mut order: Vec<usize> = (0..cand.len()).collect();
    order.sort_by_key(|&v| cand[v].iter().filter(|&&c| c != BLOCKED).count());
    let mut pick = vec![0u8; cand.len()];
    descend(cand, &order, 0, 0, &mut pick, leaf);
}

fn descend(
    cand: &[[usize; 4]],
    order: &[usize],
    depth: usize,
    used: u64,
    pick: &mut [u8],
    leaf: &mut impl FnMut(&[u8]),
) {
    if depth == order.len() {
        leaf(pick);
        return;
    }
    let v = order[depth];
    for q in 0..4 {
        let c = cand[v][q];
        if c == BLOCKED || used >> c & 1 == 1 {
            continue;
        }
        pick[v] = q as u8;
        descend(cand, order, depth + 1, used | 1 << c, pick, leaf);
    }
}

/// One term of the resolution sum: the B-exponent pattern, the monomial
/// carried by the resolution weights, and the resolved view's dotting sum.
struct Resolution {
    pattern: Vec<i32>,
    coeff: i64,
    a_shift: i32,
    sum: LaurentPoly,
}

fn resolved_sums(d: &Diagram, mode: BMode) -> Result<(usize, Vec<Resolution>), DiagramError> {
    let verts = d.vertices();
    let fd = d.face_data();
    let nf = fd.faces.len();
    let mut dps = Vec::new();
    for (v, vert) in verts.iter().enumerate() {
        if vert.kind == VertexKind::DoublePoint {
            let slot = match mode {
                BMode::Single => 0,
                BMode::Indexed => {
                    d.dp_label(v).ok_or(DiagramError::DoublePointOffStrand)? as usize - 1
                }
            };
            dps.push((v, slot));
        }
    }
    let arity = match mode {
        BMode::Single => 1,
        BMode::Indexed => dps.len(),
    };
    assert!(
        dps.len() < 32,
        "resolution enumeration capped at 31 double points"
    );
    let mut parts = Vec::with_capacity(1 << dps.len());
    let mut dsu = Dsu::new(nf);
    for mask in 0u32..1 << dps.len() {
        dsu.reset(nf);
        for (k, &(v, _)) in dps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                dsu.union(fd.corner_face[v][0], fd.corner_face[v][2]);
            }
        }
        let mut root_starred = vec![false; nf];
        for f in 0..nf {
            if fd.faces[f].starred {
                let r = dsu.find(f);
                root_starred[r] = true;
            }
        }
        let mut compact = vec![BLOCKED; nf];
        let mut n_free = 0;
        for f in 0..nf {
            if dsu.find(f) == f && !root_starred[f] {
                compact[f] = n_free;
                n_free += 1;
            }
        }
        let cls: Vec<usize> = (0..nf).map(|f| compact[dsu.find(f)]).collect();
        let mut cand = Vec::new();
        let mut wts: Vec<&[(i64, i32); 4]> = Vec::new();
        for (v, vert) in verts.iter().enumerate() {
            let table = match vert.kind {
                VertexKind::PositiveCrossing => &POS_X_DOTS,
                VertexKind::NegativeCrossing => &NEG_X_DOTS,
                VertexKind::DoublePoint => {
                    let k = dps.iter().position(|&(dv, _)| dv == v).unwrap();
                    if mask >> k & 1 == 1 {
                        continue;
                    }
                    &DP_NEG_DOTS
                }
            };
            cand.push(std::array::from_fn(|q| cls[fd.corner_face[v][q]]));
            wts.push(table);
        }
        let mut sum = LaurentPoly::zero(0);
        for_each_state(&cand, n_free, &mut |pick| {
            let mut c = 1i64;
            let mut a = 0i32;
            for (i, &q) in pick.iter().enumerate() {
                let (wc, wa) = wts[i][q as usize];
                c *= wc;
                a += wa;
            }
            sum.add_term(Exps { a, b: vec![] }, &BigInt::from(c));
        });
        let mut coeff = 1i64;
        let mut a_shift = 0i32;
        let mut pattern = vec![0i32; arity];
        for (k, &(_, slot)) in dps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                coeff *= OR_RES_W.0;
                a_shift += OR_RES_W.1;
                pattern[slot] += 1;
            } else {
                coeff *= NEG_RES_W.0;
                a_shift += NEG_RES_W.1;
            }
        }
        parts.push(Resolution {
            pattern,
            coeff,
            a_shift,
            sum,
        });
    }
    Ok((arity, parts))
}

/// The singular Alexander polynomial of a long diagram. Indexed mode gives
/// every double point its first-passage variable B_i; single mode shares one
/// B. Each B_i appears with exponent 0 or 1.
pub fn alexander_s(d: &Diagram, mode: BMode) -> Result<LaurentPoly, DiagramError> {
    if !d.is_long() {
        return Err(DiagramError::NotLong);
    }
    let (arity, parts) = resolved_sums(d, mode)?;
    let mut out = LaurentPoly::zero(arity);
    for part in &parts {
        for (e, c) in part.sum.terms() {
            out.add_term(
                Exps {
                    a: e.a + part.a_shift,
                    b: part.pattern.clone(),
                },
                &(c * part.coeff),
            );
        }
    }
    Ok(out)
}

/// Compares the indexed Alexander polynomials of a long knot and its
/// inverse; a difference certifies non-invertibility with the first
/// disagreeing B-pattern as witness.
pub fn invertibility_certificate_alex(d: &Diagram) -> Result<Certificate, DiagramError> {
    let forward = alexander_s(d, BMode::Indexed)?;
    let inverse = alexander_s(&d.inverse_long_knot()?, BMode::Indexed)?;
    Ok(pattern_certificate(&forward, &inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    fn load(name: &str) -> Diagram {
        let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_diagram(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn poly(arity: usize, terms: &[(i64, i32, &[i32])]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(arity);
        for &(c, a, b) in terms {
            out = out.try_add(&LaurentPoly::monomial(arity, c, a, b)).unwrap();
        }
        out
    }

    #[test]
    fn long_unknot_sums_to_one() {
        let d = load("long_unknot.sd");
        assert_eq!(
            alexander_s(&d, BMode::Indexed).unwrap(),
            LaurentPoly::one(0)
        );
        assert_eq!(alexander_s(&d, BMode::Single).unwrap(), LaurentPoly::one(1));
        assert_eq!(enumerate_states(&d).unwrap().len(), 1);
        assert_eq!(star_regions(&d).unwrap(), (0, 1));
    }

    #[test]
    fn classical_long_trefoil() {
        let d = load("long_trefoil.sd");
        let expect = poly(0, &[(1, -2, &[]), (-1, 0, &[]), (1, 2, &[])]);
        assert_eq!(alexander_s(&d, BMode::Indexed).unwrap(), expect);
        assert_eq!(enumerate_states(&d).unwrap().len(), 3);
    }

    #[test]
    fn singular_trefoil_and_inverse() {
        let t = load("singular_trefoil.sd");
        let expect_t = poly(2, &[(1, -2, &[0, 0]), (1, 1, &[1, 0]), (-1, -1, &[1, 0])]);
        assert_eq!(alexander_s(&t, BMode::Indexed).unwrap(), expect_t);
        let back = t.inverse_long_knot().unwrap();
        let expect_back = poly(2, &[(1, -2, &[0, 0]), (1, 1, &[0, 1]), (-1, -1, &[0, 1])]);
        assert_eq!(alexander_s(&back, BMode::Indexed).unwrap(), expect_back);
        match invertibility_certificate_alex(&t).unwrap() {
            Certificate::NotInvertible(w) => assert_eq!(w.pattern, vec![0, 1]),
            Certificate::Inconclusive => panic!("certificate missed the B swap"),
        }
    }

    #[test]
    fn closed_diagrams_are_rejected() {
        let d = load("closed_trefoil.sd");
        assert_eq!(alexander_s(&d, BMode::Single), Err(DiagramError::NotLong));
        assert_eq!(star_regions(&d), Err(DiagramError::NotLong));
    }

    #[test]
    fn classical_certificate_is_inconclusive() {
        let d = load("long_figure_eight.sd");
        assert_eq!(
            invertibility_certificate_alex(&d).unwrap(),
            Certificate::Inconclusive
        );
    }

    #[test]
    fn curl_alexander() {
        // the oriented smoothing of a curl frees a circle and an empty
        // region with it, so only the crossing resolution contributes
        let d = parse_diagram("V 2 1 3 2\nLONG 1 3").unwrap();
        let v = alexander_s(&d, BMode::Indexed).unwrap();
        assert_eq!(v, poly(1, &[(1, -1, &[0])]));
        assert_eq!(
            v.identify_b_variables(),
            alexander_s(&d, BMode::Single).unwrap()
        );
    }
}
