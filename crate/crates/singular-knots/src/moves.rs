//! Local moves on singular diagrams and an invariance fuzzer.
//!
//! Every move rewrites a small statement pattern in place: kinks (R1), finger
//! and square pokes (R2), trigon flips (R3 and its double point version), and
//! conjugation of a double point by a cancelling crossing pair (SII). Moves
//! never create or destroy double points, and they preserve the first-passage
//! order of a long diagram, so both state-sum invariants must be unchanged.
//! [`fuzz_invariance`] checks exactly that over seeded random move sequences.
//!
//! Rewrites allocate fresh edge ids above the current maximum and the result
//! is canonically relabeled, so applying a move and then an inverse instance
//! reproduces the input diagram verbatim.

use crate::alexander::alexander_s;
use crate::bracket::jones_vs;
use crate::diagram::{Diagram, DiagramError, Dir, EdgeId, Vertex, VertexKind};
use crate::poly::LaurentPoly;
use crate::BMode;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move site no longer matches the diagram")]
    StaleSite,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Every concrete rewrite the finder can emit. Orientation and side choices
/// are separate variants so fuzz coverage can be counted per shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    /// Kink insertions: crossing sign x which side of the strand the loop hangs.
    R1AddPosLeft,
    R1AddNegLeft,
    R1AddPosRight,
    R1AddNegRight,
    /// Kink removal at a crossing with a monogon loop.
    R1Drop,
    /// Poke one face-boundary stretch across its face over (or under) another.
    R2AddOver,
    R2AddUnder,
    /// Poke an edge across itself, detouring over or under.
    R2AddFingerOver,
    R2AddFingerUnder,
    /// Cancel a bigon whose strands cross twice with the same strand on top.
    R2Drop,
    /// Flip a trigon of three crossings.
    R3,
    /// Flip a trigon of a double point and two crossings the third strand
    /// slides over (or under).
    SiiiSliderOver,
    SiiiSliderUnder,
    /// Conjugate a double point by a crossing pair; the first listed strand
    /// of the vertex crosses over (or under) on the incoming side.
    SiiAddFirstOver,
    SiiAddFirstUnder,
    /// Cancel the crossing pair conjugating a double point.
    SiiDrop,
}

pub const MOVE_KINDS: [MoveKind; 16] = [
    MoveKind::R1AddPosLeft,
    MoveKind::R1AddNegLeft,
    MoveKind::R1AddPosRight,
    MoveKind::R1AddNegRight,
    MoveKind::R1Drop,
    MoveKind::R2AddOver,
    MoveKind::R2AddUnder,
    MoveKind::R2AddFingerOver,
    MoveKind::R2AddFingerUnder,
    MoveKind::R2Drop,
    MoveKind::R3,
    MoveKind::SiiiSliderOver,
    MoveKind::SiiiSliderUnder,
    MoveKind::SiiAddFirstOver,
    MoveKind::SiiAddFirstUnder,
    MoveKind::SiiDrop,
];

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1AddPosLeft => "r1-add-pos-left",
            MoveKind::R1AddNegLeft => "r1-add-neg-left",
            MoveKind::R1AddPosRight => "r1-add-pos-right",
            MoveKind::R1AddNegRight => "r1-add-neg-right",
            MoveKind::R1Drop => "r1-drop",
            MoveKind::R2AddOver => "r2-add-over",
            MoveKind::R2AddUnder => "r2-add-under",
            MoveKind::R2AddFingerOver => "r2-add-finger-over",
            MoveKind::R2AddFingerUnder => "r2-add-finger-under",
            MoveKind::R2Drop => "r2-drop",
            MoveKind::R3 => "r3",
            MoveKind::SiiiSliderOver => "siii-slider-over",
            MoveKind::SiiiSliderUnder => "siii-slider-under",
            MoveKind::SiiAddFirstOver => "sii-add-first-over",
            MoveKind::SiiAddFirstUnder => "sii-add-first-under",
            MoveKind::SiiDrop => "sii-drop",
        }
    }

    /// Moves that grow the diagram; the rest shrink it or keep its size.
    pub fn is_introduction(self) -> bool {
        matches!(
            self,
            MoveKind::R1AddPosLeft
                | MoveKind::R1AddNegLeft
                | MoveKind::R1AddPosRight
                | MoveKind::R1AddNegRight
                | MoveKind::R2AddOver
                | MoveKind::R2AddUnder
                | MoveKind::R2AddFingerOver
                | MoveKind::R2AddFingerUnder
                | MoveKind::SiiAddFirstOver
                | MoveKind::SiiAddFirstUnder
        )
    }

    /// Net change in vertex count.
    pub fn growth(self) -> i32 {
        match self {
            MoveKind::R1AddPosLeft
            | MoveKind::R1AddNegLeft
            | MoveKind::R1AddPosRight
            | MoveKind::R1AddNegRight => 1,
            MoveKind::R1Drop => -1,
            MoveKind::R2AddOver
            | MoveKind::R2AddUnder
            | MoveKind::R2AddFingerOver
            | MoveKind::R2AddFingerUnder
            | MoveKind::SiiAddFirstOver
            | MoveKind::SiiAddFirstUnder => 2,
            MoveKind::R2Drop | MoveKind::SiiDrop => -2,
            MoveKind::R3 | MoveKind::SiiiSliderOver | MoveKind::SiiiSliderUnder => 0,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where an instance acts. Vertex indices refer to the diagram the instance
/// was found on; edge occurrences carry their boundary travel sense.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Site {
    Edge(EdgeId),
    Vertex(usize),
    /// Canonically rotated corner list of the matched face.
    Corners(Vec<(usize, u8)>),
    /// Double point with its two conjugating crossings.
    Conj {
        v: usize,
        c_in: usize,
        c_out: usize,
    },
    /// Two face-boundary occurrences, pushed strand first.
    Span {
        a: (EdgeId, bool),
        b: (EdgeId, bool),
    },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Edge(e) => write!(f, "edge {e}"),
            Site::Vertex(v) => write!(f, "vertex {v}"),
            Site::Corners(cs) => {
                let vs: Vec<String> = cs.iter().map(|(v, _)| v.to_string()).collect();
                write!(f, "vertices {}", vs.join(","))
            }
            Site::Conj { v, c_in, c_out } => {
                write!(f, "vertex {v} between {c_in} and {c_out}")
            }
            Site::Span { a, b } => write!(
                f,
                "edge {}{} across to edge {}{}",
                a.0,
                if a.1 { "+" } else { "-" },
                b.0,
                if b.1 { "+" } else { "-" },
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveInstance {
    pub kind: MoveKind,
    site: Site,
}

impl fmt::Display for MoveInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.site)
    }
}

/// Statement list under edit. Fresh ids start above every id in use.
struct Builder {
    verts: Vec<Vertex>,
    long: Option<(EdgeId, EdgeId)>,
    next: EdgeId,
}

impl Builder {
    fn new(d: &Diagram) -> Builder {
        let next = d.edge_ids().iter().copied().max().unwrap_or(0) + 1;
        Builder {
            verts: d.vertices().to_vec(),
            long: d.long(),
            next,
        }
    }

    fn fresh(&mut self) -> EdgeId {
        self.next += 1;
        self.next - 1
    }

    fn rename(&mut self, from: EdgeId, to: EdgeId) {
        for v in &mut self.verts {
            for l in &mut v.legs {
                if l.edge == from {
                    l.edge = to;
                }
            }
        }
        if let Some((s, e)) = &mut self.long {
            if *s == from {
                *s = to;
            }
            if *e == from {
                *e = to;
            }
        }
    }

    /// Redirects the head occurrence of `e` (a vertex In leg or the long end)
    /// to a new id, leaving the tail occurrence in place.
    fn rename_head(&mut self, e: EdgeId, to: EdgeId) {
        for v in &mut self.verts {
            for l in &mut v.legs {
                if l.edge == e && l.dir == Dir::In {
                    l.edge = to;
                    return;
                }
            }
        }
        if let Some((_, end)) = &mut self.long {
            if *end == e {
                *end = to;
                return;
            }
        }
        unreachable!("edge {e} has no head occurrence");
    }

    /// Removes a vertex, fusing each strand's out-edge into its in-edge.
    /// A loop strand (in == out) vanishes with the vertex.
    fn delete_passthrough(&mut self, vi: usize) {
        let v = self.verts[vi];
        let mut pairs: Vec<(EdgeId, EdgeId)> = Vec::new();
        for i in 0..4 {
            if v.legs[i].dir == Dir::In {
                pairs.push((v.legs[i].edge, v.legs[(i + 2) % 4].edge));
            }
        }
        self.verts.remove(vi);
        for k in 0..pairs.len() {
            let (ein, eout) = pairs[k];
            if ein == eout {
                continue;
            }
            self.rename(eout, ein);
            for p in pairs[k + 1..].iter_mut() {
                if p.0 == eout {
                    p.0 = ein;
                }
                if p.1 == eout {
                    p.1 = ein;
                }
            }
        }
    }

    fn finish(self) -> Result<Diagram, DiagramError> {
        Ok(Diagram::new(self.verts, self.long)?.canonical_relabel())
    }
}

/// Crossing statement from four legs in counterclockwise order and the index
/// of the incoming under-strand leg.
fn crossing_statement(legs: [(EdgeId, Dir); 4], under_in: usize) -> Vertex {
    let l: Vec<(EdgeId, Dir)> = (0..4).map(|k| legs[(under_in + k) % 4]).collect();
    debug_assert_eq!(l[0].1, Dir::In);
    debug_assert_eq!(l[2].1, Dir::Out);
    if l[1].1 == Dir::Out {
        debug_assert_eq!(l[3].1, Dir::In);
        Vertex::xp(l[0].0, l[1].0, l[2].0, l[3].0)
    } else {
        debug_assert_eq!(l[3].1, Dir::Out);
        Vertex::xm(l[0].0, l[1].0, l[2].0, l[3].0)
    }
}

/// Rotates a corner list so its smallest entry comes first, fixing one
/// representative per face orbit.
fn canonical_corners(corners: &[(usize, u8)]) -> Vec<(usize, u8)> {
    let k = corners
        .iter()
        .enumerate()
        .min_by_key(|(_, c)| **c)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::with_capacity(corners.len());
    for i in 0..corners.len() {
        out.push(corners[(k + i) % corners.len()]);
    }
    out
}

/// All instances of one kind, in deterministic scan order. Reductions are
/// dry-run so every returned instance applies cleanly.
fn find_kind(d: &Diagram, kind: MoveKind) -> Vec<MoveInstance> {
    let mut out = Vec::new();
    match kind {
        MoveKind::R1AddPosLeft
        | MoveKind::R1AddNegLeft
        | MoveKind::R1AddPosRight
        | MoveKind::R1AddNegRight
        | MoveKind::R2AddFingerOver
        | MoveKind::R2AddFingerUnder => {
            for e in d.edge_ids() {
                out.push(MoveInstance {
                    kind,
                    site: Site::Edge(e),
                });
            }
        }
        MoveKind::R1Drop => {
            for (vi, v) in d.vertices().iter().enumerate() {
                if v.kind == VertexKind::DoublePoint {
                    continue;
                }
                let looped = (0..4).any(|i| v.legs[i].edge == v.legs[(i + 1) % 4].edge);
                if looped {
                    let inst = MoveInstance {
                        kind,
                        site: Site::Vertex(vi),
                    };
                    if build(d, &inst).is_ok() {
                        out.push(inst);
                    }
                }
            }
        }
        MoveKind::R2AddOver | MoveKind::R2AddUnder => {
            for face in &d.face_data().faces {
                for i in 0..face.boundary.len() {
                    for j in i + 1..face.boundary.len() {
                        let (a, b) = (face.boundary[i], face.boundary[j]);
                        if a.0 == b.0 {
                            continue;
                        }
                        out.push(MoveInstance {
                            kind,
                            site: Site::Span { a, b },
                        });
                    }
                }
            }
        }
        MoveKind::R2Drop => {
            let fd = d.face_data();
            for face in &fd.faces {
                if face.starred || face.corners.len() != 2 {
                    continue;
                }
                let (u, cu) = face.corners[0];
                let (w, _) = face.corners[1];
                if u == w
                    || d.vertices()[u].kind == VertexKind::DoublePoint
                    || d.vertices()[w].kind == VertexKind::DoublePoint
                {
                    continue;
                }
                // One bigon edge must be the over strand at both vertices.
                let p = d.vertices()[u].legs[((cu + 1) % 4) as usize].edge;
                let over_u = d.vertices()[u]
                    .legs
                    .iter()
                    .enumerate()
                    .any(|(i, l)| l.edge == p && d.vertices()[u].is_over_leg(i));
                let over_w = d.vertices()[w]
                    .legs
                    .iter()
                    .enumerate()
                    .any(|(i, l)| l.edge == p && d.vertices()[w].is_over_leg(i));
                if over_u != over_w {
                    continue;
                }
                let inst = MoveInstance {
                    kind,
                    site: Site::Corners(canonical_corners(&face.corners)),
                };
                if build(d, &inst).is_ok() {
                    out.push(inst);
                }
            }
        }
        MoveKind::R3 | MoveKind::SiiiSliderOver | MoveKind::SiiiSliderUnder => {
            for face in &d.face_data().faces {
                if face.starred || face.corners.len() != 3 {
                    continue;
                }
                let vs: Vec<usize> = face.corners.iter().map(|&(v, _)| v).collect();
                if vs[0] == vs[1] || vs[1] == vs[2] || vs[0] == vs[2] {
                    continue;
                }
                let dps: Vec<usize> = vs
                    .iter()
                    .copied()
                    .filter(|&v| d.vertices()[v].kind == VertexKind::DoublePoint)
                    .collect();
                // Trigon edge k runs corners[k] -> corners[k+1]; at each end
                // it is over exactly when it sits on an odd leg.
                let over_at = |k: usize, end_vertex: usize| -> bool {
                    let e = face.boundary[k].0;
                    let v = &d.vertices()[end_vertex];
                    (0..4).any(|i| v.legs[i].edge == e && v.is_over_leg(i))
                };
                let matched = match kind {
                    MoveKind::R3 => {
                        if !dps.is_empty() {
                            false
                        } else {
                            let mut wins = [0u8; 3];
                            for k in 0..3 {
                                if over_at(k, vs[k]) {
                                    wins[k] += 1;
                                }
                                if over_at(k, vs[(k + 1) % 3]) {
                                    wins[k] += 1;
                                }
                            }
                            wins.contains(&2) && wins.contains(&0)
                        }
                    }
                    _ => {
                        if dps.len() != 1 {
                            false
                        } else {
                            let j = vs.iter().position(|&v| v == dps[0]).unwrap();
                            // The slider edge is the one avoiding the double point.
                            let k = (j + 1) % 3;
                            let o1 = over_at(k, vs[k]);
                            let o2 = over_at(k, vs[(k + 1) % 3]);
                            o1 == o2 && (o1 == (kind == MoveKind::SiiiSliderOver))
                        }
                    }
                };
                if matched {
                    let inst = MoveInstance {
                        kind,
                        site: Site::Corners(canonical_corners(&face.corners)),
                    };
                    if build(d, &inst).is_ok() {
                        out.push(inst);
                    }
                }
            }
        }
        MoveKind::SiiAddFirstOver | MoveKind::SiiAddFirstUnder => {
            for (vi, v) in d.vertices().iter().enumerate() {
                if v.kind == VertexKind::DoublePoint {
                    out.push(MoveInstance {
                        kind,
                        site: Site::Vertex(vi),
                    });
                }
            }
        }
        MoveKind::SiiDrop => {
            let fd = d.face_data();
            for (vi, v) in d.vertices().iter().enumerate() {
                if v.kind != VertexKind::DoublePoint {
                    continue;
                }
                let bigon_other = |corner: usize| -> Option<usize> {
                    let f = &fd.faces[fd.corner_face[vi][corner]];
                    if f.starred || f.corners.len() != 2 {
                        return None;
                    }
                    let other = f.corners.iter().find(|&&(u, _)| u != vi)?;
                    (d.vertices()[other.0].kind != VertexKind::DoublePoint).then_some(other.0)
                };
                let (Some(c_in), Some(c_out)) = (bigon_other(0), bigon_other(2)) else {
                    continue;
                };
                if c_in == c_out {
                    continue;
                }
                if sii_drop_pattern(d, vi, c_in, c_out).is_none() {
                    continue;
                }
                let inst = MoveInstance {
                    kind,
                    site: Site::Conj { v: vi, c_in, c_out },
                };
                if build(d, &inst).is_ok() {
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// Matches the conjugating crossings around a double point against the two
/// insertion shapes; returns the outer edges (p, q, r, s) to restore.
fn sii_drop_pattern(d: &Diagram, v: usize, c_in: usize, c_out: usize) -> Option<[EdgeId; 4]> {
    let dp = &d.vertices()[v];
    let (f0, f1, g0, g1) = (
        dp.legs[0].edge,
        dp.legs[1].edge,
        dp.legs[2].edge,
        dp.legs[3].edge,
    );
    let ci = &d.vertices()[c_in];
    let co = &d.vertices()[c_out];
    let (ie, oe) = (ci.edges(), co.edges());
    if ci.kind == VertexKind::PositiveCrossing
        && ie[1] == f1
        && ie[2] == f0
        && co.kind == VertexKind::NegativeCrossing
        && oe[0] == g1
        && oe[1] == g0
    {
        // First strand crossed over on the way in.
        return Some([ie[3], ie[0], oe[2], oe[3]]);
    }
    if ci.kind == VertexKind::NegativeCrossing
        && ie[2] == f1
        && ie[3] == f0
        && co.kind == VertexKind::PositiveCrossing
        && oe[0] == g0
        && oe[3] == g1
    {
        return Some([ie[0], ie[1], oe[1], oe[2]]);
    }
    None
}

/// Rewrites without the staleness check; `apply_move` is the public entry.
fn build(d: &Diagram, m: &MoveInstance) -> Result<Diagram, DiagramError> {
    let mut b = Builder::new(d);
    match (m.kind, &m.site) {
        (
            MoveKind::R1AddPosLeft
            | MoveKind::R1AddNegLeft
            | MoveKind::R1AddPosRight
            | MoveKind::R1AddNegRight,
            Site::Edge(e),
        ) => {
            let eb = b.fresh();
            let f = b.fresh();
            b.rename_head(*e, eb);
            let (ea, eb) = (*e, eb);
            b.verts.push(match m.kind {
                MoveKind::R1AddPosLeft => Vertex::xp(f, f, eb, ea),
                MoveKind::R1AddNegLeft => Vertex::xm(f, ea, eb, f),
                MoveKind::R1AddPosRight => Vertex::xp(ea, eb, f, f),
                _ => Vertex::xm(ea, f, f, eb),
            });
        }
        (MoveKind::R1Drop, Site::Vertex(v)) => {
            b.delete_passthrough(*v);
        }
        (MoveKind::R2AddOver | MoveKind::R2AddUnder, Site::Span { a, b: bspan }) => {
            let (ea, fa) = *a;
            let (eb, fb) = *bspan;
            let ma = b.fresh();
            let ha = b.fresh();
            let mb = b.fresh();
            let hb = b.fresh();
            b.rename_head(ea, ha);
            b.rename_head(eb, hb);
            // The pushed stretch runs west to east with its face to the
            // right (south), the target stretch east to west north of it;
            // the finger dips south across the face. Legs are listed
            // counterclockwise (E, N, W, S) at each new crossing.
            use Dir::{In, Out};
            let vl = [
                (mb, if fb { In } else { Out }),
                if fa { (ea, In) } else { (ha, Out) },
                if fb { (hb, Out) } else { (eb, In) },
                (ma, if fa { Out } else { In }),
            ];
            let vr = [
                if fb { (eb, In) } else { (hb, Out) },
                if fa { (ha, Out) } else { (ea, In) },
                (mb, if fb { Out } else { In }),
                (ma, if fa { In } else { Out }),
            ];
            let (ul, ur) = if m.kind == MoveKind::R2AddOver {
                (if fb { 0 } else { 2 }, if fb { 0 } else { 2 })
            } else {
                (if fa { 1 } else { 3 }, if fa { 3 } else { 1 })
            };
            b.verts.push(crossing_statement(vl, ul));
            b.verts.push(crossing_statement(vr, ur));
        }
        (MoveKind::R2AddFingerOver | MoveKind::R2AddFingerUnder, Site::Edge(e)) => {
            let e1 = *e;
            let e2 = b.fresh();
            let e3 = b.fresh();
            let e4 = b.fresh();
            let e5 = b.fresh();
            b.rename_head(e1, e5);
            if m.kind == MoveKind::R2AddFingerOver {
                b.verts.push(Vertex::xp(e4, e2, e5, e1));
                b.verts.push(Vertex::xm(e3, e2, e4, e3));
            } else {
                b.verts.push(Vertex::xm(e1, e4, e2, e5));
                b.verts.push(Vertex::xp(e2, e4, e3, e3));
            }
        }
        (MoveKind::R2Drop, Site::Corners(cs)) => {
            let (mut u, mut w) = (cs[0].0, cs[1].0);
            if u < w {
                std::mem::swap(&mut u, &mut w);
            }
            b.delete_passthrough(u);
            b.delete_passthrough(w);
        }
        (
            MoveKind::R3 | MoveKind::SiiiSliderOver | MoveKind::SiiiSliderUnder,
            Site::Corners(cs),
        ) => {
            // Each strand enters the trigon at one vertex, runs along its
            // trigon edge to the next, and leaves. Flipping slides every
            // strand to the opposite side: the approach edge re-heads at the
            // far vertex, the departure edge re-tails at the near one, and
            // the trigon edge reverses. Leg positions and directions stay.
            let mut writes: Vec<(usize, usize, EdgeId)> = Vec::new();
            for k in 0..3 {
                let (va, ca) = cs[k];
                let (vb, _) = cs[(k + 1) % 3];
                // Trigon edge leaving corner k sits at leg ca+1 of va.
                let jt = ((ca + 1) % 4) as usize;
                let t = b.verts[va].legs[jt];
                let (tv, tl, hv, hl);
                if t.dir == Dir::Out {
                    (tv, tl) = (va, jt);
                    (hv, hl) = (vb, find_leg(&b.verts, vb, t.edge, Dir::In));
                } else {
                    (hv, hl) = (va, jt);
                    (tv, tl) = (vb, find_leg(&b.verts, vb, t.edge, Dir::Out));
                }
                let approach = b.verts[tv].legs[(tl + 2) % 4].edge;
                let depart = b.verts[hv].legs[(hl + 2) % 4].edge;
                writes.push((tv, (tl + 2) % 4, t.edge));
                writes.push((tv, tl, depart));
                writes.push((hv, hl, approach));
                writes.push((hv, (hl + 2) % 4, t.edge));
            }
            for (v, l, e) in writes {
                b.verts[v].legs[l].edge = e;
            }
        }
        (MoveKind::SiiAddFirstOver | MoveKind::SiiAddFirstUnder, Site::Vertex(v)) => {
            let [p, q, r, s] = b.verts[*v].edges();
            let f0 = b.fresh();
            let f1 = b.fresh();
            let g0 = b.fresh();
            let g1 = b.fresh();
            b.verts[*v] = Vertex::dp(f0, f1, g0, g1);
            if m.kind == MoveKind::SiiAddFirstOver {
                b.verts.push(Vertex::xp(q, f1, f0, p));
                b.verts.push(Vertex::xm(g1, g0, r, s));
            } else {
                b.verts.push(Vertex::xm(p, q, f1, f0));
                b.verts.push(Vertex::xp(g0, r, s, g1));
            }
        }
        (MoveKind::SiiDrop, Site::Conj { v, c_in, c_out }) => {
            let [p, q, r, s] =
                sii_drop_pattern(d, *v, *c_in, *c_out).ok_or(DiagramError::Disconnected)?;
            b.verts[*v] = Vertex::dp(p, q, r, s);
            let (hi, lo) = ((*c_in).max(*c_out), (*c_in).min(*c_out));
            b.verts.remove(hi);
            b.verts.remove(lo);
        }
        _ => unreachable!("instance shape mismatch"),
    }
    b.finish()
}

fn find_leg(verts: &[Vertex], v: usize, e: EdgeId, dir: Dir) -> usize {
    (0..4)
        .find(|&i| verts[v].legs[i].edge == e && verts[v].legs[i].dir == dir)
        .expect("trigon edge attaches to both ends")
}

/// Every applicable instance, kinds in declaration order, sites in scan order.
pub fn find_moves(d: &Diagram) -> Vec<MoveInstance> {
    MOVE_KINDS.iter().flat_map(|&k| find_kind(d, k)).collect()
}

/// Applies one instance found on this exact diagram. Vertex counts change by
/// [`MoveKind::growth`], double points and their first-passage order are
/// conserved, and the result is validated and canonically relabeled.
pub fn apply_move(d: &Diagram, m: &MoveInstance) -> Result<Diagram, MoveError> {
    if !find_kind(d, m.kind).contains(m) {
        return Err(MoveError::StaleSite);
    }
    Ok(build(d, m)?)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub step: u32,
    pub kind: String,
    pub site: String,
    pub invariant: String,
    pub expected: String,
    pub got: String,
}

/// Outcome of one fuzz campaign. With no violation the diagram survived
/// every applied move with both invariants intact.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub steps_requested: u32,
    pub steps_applied: u32,
    pub kind_counts: BTreeMap<String, u32>,
    pub final_vertices: usize,
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzOptions {
    /// Selection weight of introduction moves relative to weight 1 others.
    pub intro_weight: u32,
    /// Vertex count at which introductions stop being offered.
    pub vertex_cap: usize,
    /// Pick a kind first, then an instance within it. Rare shapes (trigon
    /// flips, conjugation cancels) surface far more often this way; off,
    /// selection is uniform over instances up to the introduction bias.
    pub kind_balanced: bool,
}

impl Default for FuzzOptions {
    fn default() -> FuzzOptions {
        FuzzOptions {
            intro_weight: 2,
            vertex_cap: 16,
            kind_balanced: false,
        }
    }
}

type Eval = (&'static str, fn(&Diagram) -> LaurentPoly);

fn eval_jones(d: &Diagram) -> LaurentPoly {
    let mode = if d.is_long() {
        BMode::Indexed
    } else {
        BMode::Single
    };
    jones_vs(d, mode).expect("moves preserve diagram validity")
}

fn eval_alexander(d: &Diagram) -> LaurentPoly {
    alexander_s(d, BMode::Indexed).expect("moves preserve diagram validity")
}

fn fuzz_with(d: &Diagram, steps: u32, seed: u64, opts: FuzzOptions, evals: &[Eval]) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let baseline: Vec<LaurentPoly> = evals.iter().map(|(_, f)| f(d)).collect();
    let mut cur = d.clone();
    let mut report = FuzzReport {
        seed,
        steps_requested: steps,
        steps_applied: 0,
        kind_counts: BTreeMap::new(),
        final_vertices: d.vertices().len(),
        violation: None,
    };
    for step in 1..=steps {
        let mut insts = find_moves(&cur);
        if cur.vertices().len() >= opts.vertex_cap {
            insts.retain(|m| !m.kind.is_introduction());
        }
        if insts.is_empty() {
            break;
        }
        let kind_weight = |k: MoveKind| {
            if k.is_introduction() {
                opts.intro_weight
            } else {
                1
            }
        };
        let pick = if opts.kind_balanced {
            let mut kinds: Vec<MoveKind> = insts.iter().map(|m| m.kind).collect();
            kinds.dedup();
            let kw: Vec<u32> = kinds.iter().map(|&k| kind_weight(k)).collect();
            let k = kinds[WeightedIndex::new(&kw)
                .expect("move weights are positive")
                .sample(&mut rng)];
            let within: Vec<usize> = (0..insts.len()).filter(|&i| insts[i].kind == k).collect();
            within[rand::Rng::gen_range(&mut rng, 0..within.len())]
        } else {
            let weights: Vec<u32> = insts.iter().map(|m| kind_weight(m.kind)).collect();
            WeightedIndex::new(&weights)
                .expect("move weights are positive")
                .sample(&mut rng)
        };
        let m = &insts[pick];
        cur = apply_move(&cur, m).expect("freshly found instance applies");
        report.steps_applied = step;
        *report
            .kind_counts
            .entry(m.kind.name().to_string())
            .or_default() += 1;
        for ((name, f), base) in evals.iter().zip(&baseline) {
            let now = f(&cur);
            if now != *base {
                report.violation = Some(Violation {
                    step,
                    kind: m.kind.name().to_string(),
                    site: m.site.to_string(),
                    invariant: name.to_string(),
                    expected: base.to_string(),
                    got: now.to_string(),
                });
                report.final_vertices = cur.vertices().len();
                return report;
            }
        }
    }
    report.final_vertices = cur.vertices().len();
    report
}

/// Applies `steps` seeded random moves, recomputing the normalized bracket
/// (and for long diagrams the indexed Alexander polynomial) after each one.
/// Deterministic for a given diagram, seed, and option set; reports the first
/// discrepancy with the move that triggered it.
pub fn fuzz_invariance(d: &Diagram, steps: u32, seed: u64) -> FuzzReport {
    fuzz_invariance_with(d, steps, seed, FuzzOptions::default())
}

pub fn fuzz_invariance_with(d: &Diagram, steps: u32, seed: u64, opts: FuzzOptions) -> FuzzReport {
    let evals: &[Eval] = if d.is_long() {
        &[("jones", eval_jones), ("alexander", eval_alexander)]
    } else {
        &[("jones", eval_jones)]
    };
    fuzz_with(d, steps, seed, opts, evals)
}
