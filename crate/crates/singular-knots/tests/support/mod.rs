//! Shared test helpers: corpus loading and three independent oracles.
//!
//! The oracles deliberately avoid the library's state-sum code paths:
//! * `skein_bracket` resolves crossings recursively, fusing arcs as it goes;
//! * `wirtinger_alexander` builds the arc presentation of a long classical
//!   knot and takes a determinant of its derivative matrix;
//! * `permanent` counts region assignments by brute force.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::One;
use singular_knots::diagram::{parse_diagram, Diagram, EdgeId, VertexKind};
use singular_knots::poly::LaurentPoly;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

pub fn load(name: &str) -> Diagram {
    let text = std::fs::read_to_string(corpus_path(name))
        .unwrap_or_else(|e| panic!("reading corpus file {name}: {e}"));
    parse_diagram(&text).unwrap_or_else(|e| panic!("parsing corpus file {name}: {e}"))
}

pub const LONG_CORPUS: &[&str] = &[
    "long_unknot.sd",
    "long_trefoil.sd",
    "long_figure_eight.sd",
    "singular_trefoil.sd",
    "singular_trefoil_inverse.sd",
    "singular_curl.sd",
    "singular_curls_two.sd",
    "singular_slide.sd",
    "singular_slide_under.sd",
];

pub const CLOSED_CORPUS: &[&str] = &[
    "closed_trefoil.sd",
    "closed_figure_eight.sd",
    "closed_cinquefoil.sd",
    "closed_granny.sd",
    "closed_square.sd",
    "closed_unknot_kink.sd",
];

pub fn full_corpus() -> Vec<&'static str> {
    LONG_CORPUS.iter().chain(CLOSED_CORPUS).copied().collect()
}

/// Polynomial in A alone from (coefficient, exponent) pairs.
pub fn apoly(terms: &[(i64, i32)]) -> LaurentPoly {
    let mut out = LaurentPoly::zero(0);
    for &(c, a) in terms {
        out = out.try_add(&LaurentPoly::monomial(0, c, a, &[])).unwrap();
    }
    out
}

/// Embed an A-only polynomial into arity `arity` with zero B-exponents.
pub fn lift(p: &LaurentPoly, arity: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero(arity);
    let zero_b = vec![0; arity];
    for (e, c) in p.terms() {
        let m = LaurentPoly::monomial(arity, c.clone(), e.a, &zero_b);
        out = out.try_add(&m).unwrap();
    }
    out
}

fn delta_pow(k: i32) -> LaurentPoly {
    assert!(k >= 0);
    let delta = apoly(&[(-1, 2), (-1, -2)]);
    let mut out = LaurentPoly::one(0);
    for _ in 0..k {
        out = out.try_mul(&delta).unwrap();
    }
    out
}

#[derive(Clone)]
struct Arcs {
    parent: Vec<usize>,
    circles: usize,
}

impl Arcs {
    fn new(n: usize) -> Arcs {
        Arcs {
            parent: (0..n).collect(),
            circles: 0,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.circles += 1;
        } else {
            self.parent[ra] = rb;
        }
    }
}

/// Kauffman bracket of a classical diagram by skein recursion: each crossing
/// splits into an A-smoothing (joining legs 0-1 and 2-3, weight A) and a
/// B-smoothing (legs 1-2 and 3-0, weight A^-1); a fully smoothed state is a
/// union of circles weighted (-A^2 - A^-2)^(loops - 1), where the open strand
/// of a long diagram counts as one loop.
pub fn skein_bracket(d: &Diagram) -> LaurentPoly {
    assert_eq!(d.double_point_count(), 0, "classical diagrams only");
    let ids = d.edge_ids();
    let idx: BTreeMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let crossings: Vec<[usize; 4]> = d
        .vertices()
        .iter()
        .map(|v| v.edges().map(|e| idx[&e]))
        .collect();
    // with the open strand as a free loop, a long state of c circles weighs
    // delta^c, a closed one delta^(c-1)
    let base = if d.is_long() { 0 } else { -1 };
    let mut acc = LaurentPoly::zero(0);
    rec(&crossings, 0, Arcs::new(ids.len()), 0, base, &mut acc);
    acc
}

fn rec(cr: &[[usize; 4]], i: usize, arcs: Arcs, a_exp: i32, base: i32, acc: &mut LaurentPoly) {
    if i == cr.len() {
        let p = delta_pow(arcs.circles as i32 + base);
        let mono = LaurentPoly::monomial(0, 1, a_exp, &[]);
        *acc = acc.try_add(&p.try_mul(&mono).unwrap()).unwrap();
        return;
    }
    let [a, b, c, d] = cr[i];
    let mut s = arcs.clone();
    s.join(a, b);
    s.join(c, d);
    rec(cr, i + 1, s, a_exp + 1, base, acc);
    let mut s = arcs;
    s.join(b, c);
    s.join(d, a);
    rec(cr, i + 1, s, a_exp - 1, base, acc);
}

/// (-A)^(-3w) times the bracket.
pub fn writhe_normalize(d: &Diagram, bracket: &LaurentPoly) -> LaurentPoly {
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let mono = LaurentPoly::monomial(bracket.arity(), sign, -3 * w, &vec![0; bracket.arity()]);
    bracket.try_mul(&mono).unwrap()
}

/// Alexander polynomial of a long classical knot from its arc presentation.
/// Arcs break at under-passages; each crossing contributes the derivative row
/// of its conjugation relation (out = over . in . over^-1 for positive sign),
/// with every generator sent to t. Dropping the final arc's column leaves an
/// n x n determinant, normalized so the result is symmetric with value 1 at
/// t = 1. Output exponents are powers of t.
pub fn wirtinger_alexander(d: &Diagram) -> LaurentPoly {
    assert!(d.is_long() && d.double_point_count() == 0);
    let (s, e) = d.long().unwrap();
    let ends = d.edge_ends();
    let vs = d.vertices();
    let mut arc_of: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut arcs = 0usize;
    arc_of.insert(s, 0);
    let mut cur = s;
    while cur != e {
        let (v, l) = ends.head[&cur];
        let exit = vs[v].legs[((l + 2) % 4) as usize].edge;
        let next_arc = if l == 0 {
            arcs += 1;
            arcs
        } else {
            arc_of[&cur]
        };
        arc_of.insert(exit, next_arc);
        cur = exit;
    }
    let n = vs.len();
    assert_eq!(arcs, n, "every crossing is an under-passage exactly once");
    let t = |k: i32| LaurentPoly::monomial(0, 1, k, &[]);
    let mut m = vec![vec![LaurentPoly::zero(0); n + 1]; n];
    for (vi, v) in vs.iter().enumerate() {
        let sign = v.kind.sign();
        let under_in = arc_of[&v.legs[0].edge];
        let under_out = arc_of[&v.legs[2].edge];
        let over_leg = if sign > 0 { 3 } else { 1 };
        let over = arc_of[&v.legs[over_leg].edge];
        m[vi][under_in] = m[vi][under_in].try_add(&t(sign)).unwrap();
        m[vi][under_out] = m[vi][under_out].try_sub(&LaurentPoly::one(0)).unwrap();
        let one_minus_t = LaurentPoly::one(0).try_sub(&t(sign)).unwrap();
        m[vi][over] = m[vi][over].try_add(&one_minus_t).unwrap();
    }
    let drop = arc_of[&e];
    let cols: Vec<usize> = (0..=n).filter(|&c| c != drop).collect();
    let square: Vec<Vec<LaurentPoly>> = m
        .iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect();
    normalize_alexander(&det(&square))
}

fn det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    fn go(m: &[Vec<LaurentPoly>], row: usize, used: u32) -> LaurentPoly {
        let n = m.len();
        if row == n {
            return LaurentPoly::one(0);
        }
        let mut acc = LaurentPoly::zero(0);
        let mut k = 0;
        for col in 0..n {
            if used & (1 << col) != 0 {
                continue;
            }
            if !m[row][col].is_zero() {
                let sub = go(m, row + 1, used | (1 << col));
                let term = m[row][col].try_mul(&sub).unwrap();
                acc = if k % 2 == 0 {
                    acc.try_add(&term).unwrap()
                } else {
                    acc.try_sub(&term).unwrap()
                };
            }
            k += 1;
        }
        acc
    }
    go(m, 0, 0)
}

/// Shift to a symmetric exponent range and fix the sign so the value at 1 is
/// +1. Panics if the determinant is not a unit at 1 or not symmetric, which
/// would mean the presentation was wrong.
pub fn normalize_alexander(p: &LaurentPoly) -> LaurentPoly {
    assert!(!p.is_zero(), "knot determinants are nonzero");
    let (lo, hi) = p.a_degree_range().unwrap();
    assert_eq!((lo + hi) % 2, 0, "exponent span must center");
    let mono = LaurentPoly::monomial(0, 1, -(lo + hi) / 2, &[]);
    let mut q = p.try_mul(&mono).unwrap();
    let at_one: BigInt = q.terms().map(|(_, c)| c.clone()).sum();
    if at_one == BigInt::from(-1) {
        q = q.neg();
    } else {
        assert!(at_one.is_one(), "value at 1 must be a unit, got {at_one}");
    }
    assert_eq!(q, q.invert_a(), "normalized determinant must be symmetric");
    q
}

/// Permanent of a small nonnegative matrix by depth-first search.
pub fn permanent(m: &[Vec<u64>]) -> u64 {
    fn go(m: &[Vec<u64>], row: usize, used: u32) -> u64 {
        if row == m.len() {
            return 1;
        }
        let mut acc = 0;
        for col in 0..m[row].len() {
            if used & (1 << col) == 0 && m[row][col] != 0 {
                acc += m[row][col] * go(m, row + 1, used | (1 << col));
            }
        }
        acc
    }
    assert!(m.iter().all(|r| r.len() == m.len()), "square matrices only");
    go(m, 0, 0)
}

/// Rows = vertices, columns = non-starred faces, entries = how many corners
/// of the vertex lie on the face.
pub fn quadrant_count_matrix(d: &Diagram) -> Vec<Vec<u64>> {
    let fd = d.face_data();
    let cols: Vec<usize> = (0..fd.faces.len())
        .filter(|&f| !fd.faces[f].starred)
        .collect();
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut m = vec![vec![0u64; cols.len()]; d.vertices().len()];
    for (v, corners) in fd.corner_face.iter().enumerate() {
        for &f in corners {
            if let Some(&c) = col_of.get(&f) {
                m[v][c] += 1;
            }
        }
    }
    m
}

/// Number of crossings the long strand passes under before going over,
/// sanity data for arc counting.
pub fn kind_counts(d: &Diagram) -> (usize, usize, usize) {
    let mut pos = 0;
    let mut neg = 0;
    let mut dp = 0;
    for v in d.vertices() {
        match v.kind {
            VertexKind::PositiveCrossing => pos += 1,
            VertexKind::NegativeCrossing => neg += 1,
            VertexKind::DoublePoint => dp += 1,
        }
    }
    (pos, neg, dp)
}
