//! Bracket state sum for singular diagrams.
//!
//! Every crossing is smoothed two ways (A-smoothing joining legs 0-1 and 2-3
//! with weight A, B-smoothing joining 1-2 and 3-0 with weight A^-1), every
//! double point two ways (oriented smoothing joining 0-3 and 1-2, disoriented
//! joining 0-1 and 2-3, with weights A^3 B_i and A^3 B_i^-1). A state of L
//! loops, the open strand included, contributes its weight product times
//! (-A^2 - A^-2)^(L-1).

use crate::diagram::{Diagram, DiagramError, Dsu, EdgeId, VertexKind};
use crate::poly::LaurentPoly;
use crate::{pattern_certificate, BMode, Certificate};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// A-exponent every double point smoothing carries.
const DP_A_EXP: i32 = 3;
/// B_i-exponent of the oriented smoothing; the disoriented one is its negative.
const DP_ORIENTED_B_EXP: i32 = 1;

struct VData {
    legs: [usize; 4],
    bit: u32,
    /// B slot for double points, None at crossings.
    b_slot: Option<usize>,
}

/// The state sum over all 2^(n+d) smoothings. Indexed mode requires a long
/// diagram whose double points all sit on the open strand.
pub fn singular_bracket(d: &Diagram, mode: BMode) -> Result<LaurentPoly, DiagramError> {
    let n = d.crossing_count();
    let k = d.double_point_count();
    let arity = match mode {
        BMode::Single => 1,
        BMode::Indexed => {
            if !d.is_long() {
                return Err(DiagramError::NotLong);
            }
            k
        }
    };
    let ids = d.edge_ids();
    let idx: BTreeMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut crossing_bit = 0u32;
    let mut dp_bit = n as u32;
    let mut vdata = Vec::with_capacity(d.vertices().len());
    for (vi, v) in d.vertices().iter().enumerate() {
        let legs = v.edges().map(|e| idx[&e]);
        let (bit, b_slot) = if v.kind == VertexKind::DoublePoint {
            let slot = match mode {
                BMode::Single => 0,
                BMode::Indexed => {
                    d.dp_label(vi).ok_or(DiagramError::DoublePointOffStrand)? as usize - 1
                }
            };
            dp_bit += 1;
            (dp_bit - 1, Some(slot))
        } else {
            crossing_bit += 1;
            (crossing_bit - 1, None)
        };
        vdata.push(VData { legs, bit, b_slot });
    }
    assert!(n + k < 63, "state space too large");

    let edge_count = ids.len();
    let delta = LaurentPoly::monomial(arity, -1, 2, &vec![0; arity])
        .try_add(&LaurentPoly::monomial(arity, -1, -2, &vec![0; arity]))
        .unwrap();
    let mut delta_pows = vec![LaurentPoly::one(arity)];
    for i in 1..=edge_count {
        delta_pows.push(delta_pows[i - 1].try_mul(&delta).unwrap());
    }

    let total: u64 = 1 << (n + k);
    let sum = (0..total)
        .into_par_iter()
        .fold(
            || {
                (
                    LaurentPoly::zero(arity),
                    Dsu::new(edge_count),
                    vec![0i32; arity],
                )
            },
            |(mut acc, mut dsu, mut b_shift), state| {
                dsu.reset(edge_count);
                b_shift.iter_mut().for_each(|x| *x = 0);
                let mut a_exp = 0i32;
                for v in &vdata {
                    let choice = (state >> v.bit) & 1;
                    let (p, q) = match (v.b_slot, choice) {
                        (None, 0) => {
                            a_exp += 1;
                            ((0, 1), (2, 3))
                        }
                        (None, _) => {
                            a_exp -= 1;
                            ((1, 2), (3, 0))
                        }
                        (Some(slot), c) => {
                            a_exp += DP_A_EXP;
                            if c == 0 {
                                b_shift[slot] += DP_ORIENTED_B_EXP;
                                ((0, 3), (1, 2))
                            } else {
                                b_shift[slot] -= DP_ORIENTED_B_EXP;
                                ((0, 1), (2, 3))
                            }
                        }
                    };
                    dsu.union(v.legs[p.0], v.legs[p.1]);
                    dsu.union(v.legs[q.0], v.legs[q.1]);
                }
                let loops = (0..edge_count).filter(|&i| dsu.find(i) == i).count();
                acc.add_scaled_shifted(&delta_pows[loops - 1], &BigInt::one(), a_exp, &b_shift);
                (acc, dsu, b_shift)
            },
        )
        .map(|(p, _, _)| p)
        .reduce(|| LaurentPoly::zero(arity), |a, b| a.try_add(&b).unwrap());
    Ok(sum)
}

/// Writhe-normalized bracket: (-A)^(-3w) times the state sum. Invariant under
/// the classical and singular moves.
pub fn jones_vs(d: &Diagram, mode: BMode) -> Result<LaurentPoly, DiagramError> {
    let mut p = singular_bracket(d, mode)?;
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let zeros = vec![0; p.arity()];
    p.scale(&BigInt::from(sign), -3 * w, &zeros);
    Ok(p)
}

/// Compare the indexed polynomial of a long knot against its inverse. A
/// differing B-exponent pattern certifies non-invertibility.
pub fn invertibility_certificate_v(d: &Diagram) -> Result<Certificate, DiagramError> {
    let forward = jones_vs(d, BMode::Indexed)?;
    let inverse = jones_vs(&d.inverse_long_knot()?, BMode::Indexed)?;
    Ok(pattern_certificate(&forward, &inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::poly::LaurentPoly;

    fn poly1(terms: &[(i64, i32, i32)]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(1);
        for &(c, a, b) in terms {
            out = out.try_add(&LaurentPoly::monomial(1, c, a, &[b])).unwrap();
        }
        out
    }

    #[test]
    fn kink_bracket() {
        let d = parse_diagram("X+ 1 1 2 2").unwrap();
        assert_eq!(
            singular_bracket(&d, BMode::Single).unwrap(),
            poly1(&[(-1, 3, 0)])
        );
        assert_eq!(jones_vs(&d, BMode::Single).unwrap(), poly1(&[(1, 0, 0)]));
    }

    #[test]
    fn long_unknot_bracket_is_one() {
        let d = parse_diagram("LONG 1 1").unwrap();
        assert_eq!(
            singular_bracket(&d, BMode::Indexed).unwrap(),
            LaurentPoly::one(0)
        );
    }

    #[test]
    fn singular_curl() {
        // one double point on an open strand: oriented smoothing leaves a
        // kink-free strand plus a circle, disoriented straightens it
        let d = parse_diagram("V 2 1 3 2\nLONG 1 3").unwrap();
        let expect = poly1(&[(-1, 1, 1), (-1, 5, 1), (1, 3, -1)]);
        assert_eq!(singular_bracket(&d, BMode::Indexed).unwrap(), expect);
        assert_eq!(jones_vs(&d, BMode::Indexed).unwrap(), expect);
        assert_eq!(singular_bracket(&d, BMode::Single).unwrap(), expect);
    }

    #[test]
    fn indexed_requires_long() {
        let d = parse_diagram("X+ 1 1 2 2").unwrap();
        assert_eq!(
            singular_bracket(&d, BMode::Indexed),
            Err(DiagramError::NotLong)
        );
    }

    #[test]
    fn classical_mirror_inverts_a() {
        let d = parse_diagram("X+ 4 5 2 1\nX+ 5 6 3 2\nX+ 6 4 1 3").unwrap();
        let p = singular_bracket(&d, BMode::Single).unwrap();
        let q = singular_bracket(&d.mirror(), BMode::Single).unwrap();
        assert_eq!(q, p.invert_a());
    }
}
