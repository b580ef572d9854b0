//! Singular diagrams as anchored vertex lists.
//!
//! Each vertex statement lists its four edge ends counterclockwise from a
//! distinguished leg:
//!
//! * `X+ a b c d`: positive crossing, `a` = incoming under-strand end. The
//!   under-strand runs a -> c, the over-strand d -> b.
//! * `X- a b c d`: negative crossing, `a` = incoming under-strand end. The
//!   under-strand runs a -> c, the over-strand b -> d.
//! * `V a b c d`: double point, `a` = the incoming end whose counterclockwise
//!   neighbor is also incoming. Strands run a -> c and b -> d.
//! * `LONG s e`: the diagram is long; the open strand enters the plane along
//!   edge `s` and leaves along edge `e`. `LONG s s` with no vertices is the
//!   long unknot.
//!
//! Opposite legs carry the same strand at every vertex kind, so a traversal
//! entering at leg i exits at leg i+2 (mod 4). A long diagram is validated
//! and faced as if `e` were fused to `s` behind the plane; the two faces
//! whose boundary runs through that fusion are starred.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub type EdgeId = u32;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: cannot parse `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("edge {0} is not used exactly twice")]
    EdgeMultiplicity(EdgeId),
    #[error("edge {0} has two heads or two tails")]
    OrientationConflict(EdgeId),
    #[error("not planar: {vertices} vertices with {faces} faces")]
    NonPlanar { vertices: usize, faces: usize },
    #[error("diagram is not connected")]
    Disconnected,
    #[error("operation requires a long diagram")]
    NotLong,
    #[error("a double point lies off the long strand")]
    DoublePointOffStrand,
}

/// Vertex kinds, in serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    PositiveCrossing,
    NegativeCrossing,
    DoublePoint,
}

impl VertexKind {
    pub fn keyword(self) -> &'static str {
        match self {
            VertexKind::PositiveCrossing => "X+",
            VertexKind::NegativeCrossing => "X-",
            VertexKind::DoublePoint => "V",
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            VertexKind::PositiveCrossing => 1,
            VertexKind::NegativeCrossing => -1,
            VertexKind::DoublePoint => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leg {
    pub edge: EdgeId,
    pub dir: Dir,
}

/// One vertex; legs are in counterclockwise rotational order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub kind: VertexKind,
    pub legs: [Leg; 4],
}

use Dir::{In, Out};

impl Vertex {
    pub fn xp(a: EdgeId, b: EdgeId, c: EdgeId, d: EdgeId) -> Vertex {
        Vertex {
            kind: VertexKind::PositiveCrossing,
            legs: [
                Leg { edge: a, dir: In },
                Leg { edge: b, dir: Out },
                Leg { edge: c, dir: Out },
                Leg { edge: d, dir: In },
            ],
        }
    }

    pub fn xm(a: EdgeId, b: EdgeId, c: EdgeId, d: EdgeId) -> Vertex {
        Vertex {
            kind: VertexKind::NegativeCrossing,
            legs: [
                Leg { edge: a, dir: In },
                Leg { edge: b, dir: In },
                Leg { edge: c, dir: Out },
                Leg { edge: d, dir: Out },
            ],
        }
    }

    pub fn dp(a: EdgeId, b: EdgeId, c: EdgeId, d: EdgeId) -> Vertex {
        Vertex {
            kind: VertexKind::DoublePoint,
            legs: [
                Leg { edge: a, dir: In },
                Leg { edge: b, dir: In },
                Leg { edge: c, dir: Out },
                Leg { edge: d, dir: Out },
            ],
        }
    }

    pub fn edges(&self) -> [EdgeId; 4] {
        [
            self.legs[0].edge,
            self.legs[1].edge,
            self.legs[2].edge,
            self.legs[3].edge,
        ]
    }

    /// Over-strand legs of a crossing sit at the odd leg indices.
    pub fn is_over_leg(&self, i: usize) -> bool {
        self.kind != VertexKind::DoublePoint && i % 2 == 1
    }

    fn statement(&self) -> String {
        let e = self.edges();
        format!(
            "{} {} {} {} {}",
            self.kind.keyword(),
            e[0],
            e[1],
            e[2],
            e[3]
        )
    }
}

/// Where each edge attaches: `head` is the (vertex, leg) the edge flows into,
/// `tail` where it flows out of. A long start edge has no tail, a long end
/// edge no head.
pub struct EdgeEnds {
    pub head: BTreeMap<EdgeId, (usize, u8)>,
    pub tail: BTreeMap<EdgeId, (usize, u8)>,
}

/// One complementary region. `corners[k]` = (vertex, corner) with corner i
/// denoting the quadrant between legs i and i+1; `boundary[k]` = the edge
/// traversed leaving `corners[k]`, with its travel sense. A starred face
/// passes through the long closure, picking up an extra boundary entry there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<(usize, u8)>,
    pub boundary: Vec<(EdgeId, bool)>,
    pub starred: bool,
}

pub struct FaceData {
    pub faces: Vec<Face>,
    /// face index of each (vertex, corner)
    pub corner_face: Vec<[usize; 4]>,
}

impl FaceData {
    /// Indices of the two starred faces of a long diagram.
    pub fn starred(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].starred)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    vertices: Vec<Vertex>,
    long: Option<(EdgeId, EdgeId)>,
    dp_label: Vec<Option<u32>>,
}

impl Diagram {
    /// Validates and canonically orders the statement list. Checks, in order:
    /// every edge is a head exactly once and a tail exactly once (open ends
    /// excepted), the underlying graph is connected, and the face count is
    /// vertices + 2 (planarity on the sphere). Double points of a long
    /// diagram are then labeled 1..d by first passage along the strand.
    pub fn new(
        mut vertices: Vec<Vertex>,
        long: Option<(EdgeId, EdgeId)>,
    ) -> Result<Diagram, DiagramError> {
        vertices.sort();
        let mut ends: BTreeMap<EdgeId, (u32, u32)> = BTreeMap::new();
        for v in &vertices {
            for l in &v.legs {
                let e = ends.entry(l.edge).or_default();
                match l.dir {
                    In => e.0 += 1,
                    Out => e.1 += 1,
                }
            }
        }
        if let Some((s, e)) = long {
            ends.entry(s).or_default();
            ends.entry(e).or_default();
        }
        if ends.is_empty() {
            return Err(DiagramError::Disconnected);
        }
        for (&id, &(heads, tails)) in &ends {
            let (want_h, want_t) = match long {
                Some((s, e)) if s == e && id == s => (0, 0),
                Some((s, _)) if id == s => (1, 0),
                Some((_, e)) if id == e => (0, 1),
                _ => (1, 1),
            };
            if heads + tails != want_h + want_t {
                return Err(DiagramError::EdgeMultiplicity(id));
            }
            if (heads, tails) != (want_h, want_t) {
                return Err(DiagramError::OrientationConflict(id));
            }
        }

        let ids: Vec<EdgeId> = ends.keys().copied().collect();
        let index: BTreeMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut dsu = Dsu::new(ids.len());
        for v in &vertices {
            let i0 = index[&v.legs[0].edge];
            for l in &v.legs[1..] {
                dsu.union(i0, index[&l.edge]);
            }
        }
        if let Some((s, e)) = long {
            dsu.union(index[&s], index[&e]);
        }
        let root = dsu.find(0);
        if (1..ids.len()).any(|i| dsu.find(i) != root) {
            return Err(DiagramError::Disconnected);
        }

        let n = vertices.len();
        let mut d = Diagram {
            vertices,
            long,
            dp_label: vec![None; n],
        };
        let faces = d.face_data().faces.len();
        if faces != n + 2 {
            return Err(DiagramError::NonPlanar { vertices: n, faces });
        }
        if d.long.is_some() {
            let mut next = 1u32;
            for (v, _) in d.long_walk() {
                if d.vertices[v].kind == VertexKind::DoublePoint && d.dp_label[v].is_none() {
                    d.dp_label[v] = Some(next);
                    next += 1;
                }
            }
        }
        Ok(d)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn long(&self) -> Option<(EdgeId, EdgeId)> {
        self.long
    }

    pub fn is_long(&self) -> bool {
        self.long.is_some()
    }

    /// First-passage label of a double point (1-based), if the long strand
    /// reaches it.
    pub fn dp_label(&self, v: usize) -> Option<u32> {
        self.dp_label[v]
    }

    pub fn crossing_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind != VertexKind::DoublePoint)
            .count()
    }

    pub fn double_point_count(&self) -> usize {
        self.vertices.len() - self.crossing_count()
    }

    pub fn writhe(&self) -> i32 {
        self.vertices.iter().map(|v| v.kind.sign()).sum()
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        let mut set = BTreeSet::new();
        for v in &self.vertices {
            set.extend(v.edges());
        }
        if let Some((s, e)) = self.long {
            set.insert(s);
            set.insert(e);
        }
        set.into_iter().collect()
    }

    /// Number of strand components; the open strand counts as one.
    pub fn component_count(&self) -> usize {
        let ids = self.edge_ids();
        let index: BTreeMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut dsu = Dsu::new(ids.len());
        for v in &self.vertices {
            dsu.union(index[&v.legs[0].edge], index[&v.legs[2].edge]);
            dsu.union(index[&v.legs[1].edge], index[&v.legs[3].edge]);
        }
        if let Some((s, e)) = self.long {
            dsu.union(index[&s], index[&e]);
        }
        (0..ids.len()).filter(|&i| dsu.find(i) == i).count()
    }

    pub fn edge_ends(&self) -> EdgeEnds {
        let mut head = BTreeMap::new();
        let mut tail = BTreeMap::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            for (li, l) in v.legs.iter().enumerate() {
                match l.dir {
                    In => head.insert(l.edge, (vi, li as u8)),
                    Out => tail.insert(l.edge, (vi, li as u8)),
                };
            }
        }
        EdgeEnds { head, tail }
    }

    /// Orbits of the corner walk: from the quadrant between legs i and i+1,
    /// travel the edge at leg i+1 to its far end and continue from the
    /// quadrant found there. Running off an open end crosses the closure.
    pub fn face_data(&self) -> FaceData {
        if self.vertices.is_empty() {
            let e = self.long.expect("validated diagrams are nonempty").0;
            return FaceData {
                faces: vec![
                    Face {
                        corners: vec![],
                        boundary: vec![(e, true)],
                        starred: true,
                    },
                    Face {
                        corners: vec![],
                        boundary: vec![(e, false)],
                        starred: true,
                    },
                ],
                corner_face: vec![],
            };
        }
        let ends = self.edge_ends();
        let n = self.vertices.len();
        let mut corner_face = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for v0 in 0..n {
            for c0 in 0..4u8 {
                if corner_face[v0][c0 as usize] != usize::MAX {
                    continue;
                }
                let fi = faces.len();
                let mut corners = Vec::new();
                let mut boundary = Vec::new();
                let mut starred = false;
                let (mut v, mut c) = (v0, c0);
                loop {
                    corner_face[v][c as usize] = fi;
                    corners.push((v, c));
                    let leg = self.vertices[v].legs[((c + 1) % 4) as usize];
                    let (nv, nc) = match leg.dir {
                        Out => {
                            boundary.push((leg.edge, true));
                            match ends.head.get(&leg.edge) {
                                Some(&h) => h,
                                None => {
                                    starred = true;
                                    let s = self.long.unwrap().0;
                                    boundary.push((s, true));
                                    ends.head[&s]
                                }
                            }
                        }
                        In => {
                            boundary.push((leg.edge, false));
                            match ends.tail.get(&leg.edge) {
                                Some(&t) => t,
                                None => {
                                    starred = true;
                                    let e = self.long.unwrap().1;
                                    boundary.push((e, false));
                                    ends.tail[&e]
                                }
                            }
                        }
                    };
                    if (nv, nc) == (v0, c0) {
                        break;
                    }
                    v = nv;
                    c = nc;
                }
                faces.push(Face {
                    corners,
                    boundary,
                    starred,
                });
            }
        }
        FaceData { faces, corner_face }
    }

    /// (vertex, entry leg) sequence along the open strand.
    fn long_walk(&self) -> Vec<(usize, u8)> {
        let (s, e) = self.long.expect("long_walk on closed diagram");
        let ends = self.edge_ends();
        let mut out = Vec::new();
        let mut cur = s;
        while cur != e {
            let (v, l) = ends.head[&cur];
            out.push((v, l));
            cur = self.vertices[v].legs[((l + 2) % 4) as usize].edge;
        }
        out
    }

    /// Double point vertices in first-passage order along the long strand.
    pub fn double_point_order(&self) -> Result<Vec<usize>, DiagramError> {
        if self.long.is_none() {
            return Err(DiagramError::NotLong);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut order = Vec::new();
        for (v, _) in self.long_walk() {
            if self.vertices[v].kind == VertexKind::DoublePoint && !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
        if order.len() != self.double_point_count() {
            return Err(DiagramError::DoublePointOffStrand);
        }
        Ok(order)
    }

    /// The reverse long knot: same curve traversed backward. Double point
    /// labels are recomputed for the new direction.
    pub fn inverse_long_knot(&self) -> Result<Diagram, DiagramError> {
        let (s, e) = self.long.ok_or(DiagramError::NotLong)?;
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let [a, b, c, d] = v.edges();
                match v.kind {
                    VertexKind::PositiveCrossing => Vertex::xp(b, a, d, c),
                    VertexKind::NegativeCrossing => Vertex::xm(d, c, b, a),
                    VertexKind::DoublePoint => Vertex::dp(d, c, b, a),
                }
            })
            .collect();
        Diagram::new(vertices, Some((e, s)))
    }

    /// Reflect the plane: crossing signs flip, rotational orders reverse.
    pub fn mirror(&self) -> Diagram {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let [a, b, c, d] = v.edges();
                match v.kind {
                    VertexKind::PositiveCrossing => Vertex::xm(a, d, c, b),
                    VertexKind::NegativeCrossing => Vertex::xp(a, d, c, b),
                    VertexKind::DoublePoint => Vertex::dp(b, a, d, c),
                }
            })
            .collect();
        Diagram::new(vertices, self.long).expect("mirror of a valid diagram is valid")
    }

    /// Relabel edges 1..E by strand traversal from `seed`; remaining strands
    /// are walked from the lowest unvisited old id.
    fn relabel_from(&self, seed: EdgeId) -> Diagram {
        let ends = self.edge_ends();
        let all = self.edge_ids();
        let mut order: Vec<EdgeId> = Vec::new();
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        let walk = |seed: EdgeId, order: &mut Vec<EdgeId>, seen: &mut BTreeSet<EdgeId>| {
            let mut cur = seed;
            loop {
                if seen.insert(cur) {
                    order.push(cur);
                }
                match ends.head.get(&cur) {
                    None => break,
                    Some(&(v, l)) => {
                        let nxt = self.vertices[v].legs[((l + 2) % 4) as usize].edge;
                        if nxt == seed {
                            break;
                        }
                        cur = nxt;
                    }
                }
            }
        };
        walk(seed, &mut order, &mut seen);
        while let Some(&e) = all.iter().find(|e| !seen.contains(e)) {
            walk(e, &mut order, &mut seen);
        }
        let map: BTreeMap<EdgeId, EdgeId> = order
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as EdgeId + 1))
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let mut w = *v;
                for l in &mut w.legs {
                    l.edge = map[&l.edge];
                }
                w
            })
            .collect();
        let long = self.long.map(|(s, e)| (map[&s], map[&e]));
        Diagram::new(vertices, long).expect("relabeling preserves validity")
    }

    /// Canonical edge labeling: long diagrams relabel from the start edge;
    /// closed diagrams take the lexicographically least serialization over
    /// all traversal seeds.
    pub fn canonical_relabel(&self) -> Diagram {
        match self.long {
            Some((s, _)) => self.relabel_from(s),
            None => {
                let mut best: Option<(String, Diagram)> = None;
                for &e in &self.edge_ids() {
                    let d = self.relabel_from(e);
                    let ser = d.serialize();
                    if best.as_ref().is_none_or(|(b, _)| ser < *b) {
                        best = Some((ser, d));
                    }
                }
                best.expect("validated diagrams have edges").1
            }
        }
    }

    /// Canonical text form; `parse_diagram` inverts it.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&v.statement());
            out.push('\n');
        }
        if let Some((s, e)) = self.long {
            out.push_str(&format!("LONG {} {}\n", s, e));
        }
        out
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut vertices = Vec::new();
    let mut long = None;
    let mut saw_statement = false;
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = DiagramError::MalformedLine {
            line: idx + 1,
            text: content.to_string(),
        };
        let mut tok = content.split_whitespace();
        let kw = tok.next().unwrap();
        let args: Result<Vec<EdgeId>, _> = tok
            .map(|s| {
                s.parse::<EdgeId>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| bad.clone())
            })
            .collect();
        let args = args?;
        match (kw, args.len()) {
            ("X+", 4) => vertices.push(Vertex::xp(args[0], args[1], args[2], args[3])),
            ("X-", 4) => vertices.push(Vertex::xm(args[0], args[1], args[2], args[3])),
            ("V", 4) => vertices.push(Vertex::dp(args[0], args[1], args[2], args[3])),
            ("LONG", 2) => {
                if long.replace((args[0], args[1])).is_some() {
                    return Err(bad);
                }
            }
            _ => return Err(bad),
        }
        saw_statement = true;
    }
    if !saw_statement {
        return Err(DiagramError::MalformedLine {
            line: 0,
            text: "empty input".to_string(),
        });
    }
    Diagram::new(vertices, long)
}

/// Union-find over 0..n with minimum-root unions, so results are independent
/// of union order.
pub(crate) struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        loop {
            let p = self.parent[x] as usize;
            if p == x {
                return x;
            }
            let gp = self.parent[p];
            self.parent[x] = gp;
            x = gp as usize;
        }
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u32;
        }
    }
}
