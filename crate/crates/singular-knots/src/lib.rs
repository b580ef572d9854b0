//! Invariants of singular knot diagrams.
//!
//! A singular diagram is a 4-valent plane graph whose vertices are signed
//! crossings or rigid double points, with an optional open (long) strand.
//! This crate computes two families of invariants as explicit state sums,
//! refined by variables `B_1 .. B_d` indexed by the order in which the long
//! strand first passes each double point:
//!
//! * a Kauffman-bracket style polynomial and its writhe-normalized form
//!   ([`bracket::jones_vs`]),
//! * an Alexander polynomial built from region assignments
//!   ([`alexander::alexander_s`]).
//!
//! [`moves`] rewrites diagrams by the local moves that preserve these
//! invariants and fuzzes invariance over random move sequences. Both
//! invariants detect non-invertible long knots by comparing a diagram
//! against its reverse ([`diagram::Diagram::inverse_long_knot`]).

pub mod alexander;
pub mod bracket;
pub mod cli;
pub mod diagram;
pub mod moves;
pub mod poly;

use poly::LaurentPoly;

/// How double points map to B-variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BMode {
    /// One variable B1 shared by every double point. Works for closed diagrams.
    Single,
    /// B_i for the double point passed i-th along the long strand.
    Indexed,
}

/// Outcome of comparing an invariant of a long knot against its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The invariant agrees on both; detects nothing.
    Inconclusive,
    /// The invariant separates the knot from its inverse.
    NotInvertible(Witness),
}

/// A B-exponent pattern on which the two polynomials differ, with the
/// A-coefficients each side attaches to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub pattern: Vec<i32>,
    pub forward: LaurentPoly,
    pub inverse: LaurentPoly,
}

/// Compare two B-indexed polynomials pattern by pattern; the first pattern
/// (in exponent order) whose A-coefficients differ becomes the witness.
pub(crate) fn pattern_certificate(forward: &LaurentPoly, inverse: &LaurentPoly) -> Certificate {
    if forward == inverse {
        return Certificate::Inconclusive;
    }
    let f = forward
        .decompose_by_b_pattern()
        .expect("state sums have bounded B-exponents");
    let i = inverse
        .decompose_by_b_pattern()
        .expect("state sums have bounded B-exponents");
    let zero = LaurentPoly::zero(0);
    let keys: std::collections::BTreeSet<&Vec<i32>> = f.keys().chain(i.keys()).collect();
    for k in keys {
        let pf = f.get(k).unwrap_or(&zero);
        let pi = i.get(k).unwrap_or(&zero);
        if pf != pi {
            return Certificate::NotInvertible(Witness {
                pattern: k.clone(),
                forward: pf.clone(),
                inverse: pi.clone(),
            });
        }
    }
    unreachable!("unequal polynomials differ in some pattern")
}
