//! Multi-linkoid and spatial-graph diagrams as combinatorial maps.
//!
//! A diagram is a set of darts (half-edges) with an edge involution
//! (`partner`) and a counterclockwise rotation at every vertex. Faces are
//! the orbits of `d -> sigma(theta(d))`; the face of a dart is the face on
//! the right when the edge is traversed starting from that dart.
//!
//! Crossings keep their four darts in counterclockwise order with the under
//! strand on positions 0 and 2. Disconnected pieces of a diagram are tied
//! together with invisible ghost edges anchored at beads (2-valent strand
//! vertices) or endpoints, so that the map always embeds in the sphere. A
//! diagram on the plane carries one extra `Infinity` vertex, attached by a
//! ghost edge inside the unbounded face.

pub mod gauss;
pub mod moves;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::theta::ColorToken;

pub use moves::{Direction, MoveKind, MoveSite, ScrambleOptions};

pub type DartId = usize;
pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    S2,
    R2,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::S2 => write!(f, "S2"),
            Surface::R2 => write!(f, "R2"),
        }
    }
}

/// How endpoint labels are to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingMode {
    /// Component `i` carries tail `2i-1` and head `2i`.
    Ordered,
    /// Any bijection of the endpoints onto `1..=2n`.
    VertexOrdered,
    /// No ordering was given; labels are assigned internally.
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndRole {
    Tail,
    Head,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Crossing,
    Endpoint { role: EndRole, label: u32 },
    Bead,
    Graph { name: String },
    Infinity,
}

#[derive(Clone, Debug)]
pub(crate) struct Dart {
    pub partner: DartId,
    pub vertex: VertexId,
    /// The edge of this dart is oriented away from this dart's vertex.
    pub start: bool,
    pub ghost: bool,
    pub color: Option<ColorToken>,
    pub alive: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Vertex {
    pub kind: VertexKind,
    pub darts: Vec<DartId>,
    pub alive: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error("move site no longer matches the diagram")]
    StaleSite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    UnpairedDart(DartId),
    DuplicateEndpointLabel(u32),
    MissingEndpointLabel(u32),
    OrderingMismatch { tail: u32, head: u32 },
    NonSpherical { euler: i64 },
    Disconnected,
    MissingOuterFace,
    OuterFaceOnSphere,
    MultipleOuterFaces,
    MalformedCrossing(VertexId),
    MalformedEndpoint(VertexId),
    MalformedBead(VertexId),
    GraphVertexInLinkoid(VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnpairedDart(d) => write!(f, "dart {d} is not paired"),
            Violation::DuplicateEndpointLabel(k) => write!(f, "endpoint label {k} used twice"),
            Violation::MissingEndpointLabel(k) => write!(f, "endpoint label {k} missing"),
            Violation::OrderingMismatch { tail, head } => write!(
                f,
                "ordered mode needs tail 2i-1 and head 2i on one component, found tail {tail} head {head}"
            ),
            Violation::NonSpherical { euler } => {
                write!(f, "V - E + F = {euler}, the map does not embed in the sphere")
            }
            Violation::Disconnected => write!(f, "diagram pieces are not joined"),
            Violation::MissingOuterFace => write!(f, "plane diagram without an outer face"),
            Violation::OuterFaceOnSphere => write!(f, "outer face given on the sphere"),
            Violation::MultipleOuterFaces => write!(f, "more than one outer face"),
            Violation::MalformedCrossing(v) => write!(f, "crossing {v} is malformed"),
            Violation::MalformedEndpoint(v) => write!(f, "endpoint {v} is malformed"),
            Violation::MalformedBead(v) => write!(f, "bead {v} is malformed"),
            Violation::GraphVertexInLinkoid(v) => write!(f, "graph vertex {v} in a linkoid diagram"),
        }
    }
}

/// Face assignment of a map: `of[d]` is the face on the right of dart `d`.
#[derive(Clone, Debug)]
pub struct Faces {
    pub of: Vec<usize>,
    pub count: usize,
}

/// One traced component: the darts from which each of its edges is left,
/// in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub closed: bool,
    pub steps: Vec<DartId>,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub(crate) surface: Surface,
    pub(crate) ordering: OrderingMode,
    pub(crate) spatial: bool,
    pub(crate) darts: Vec<Dart>,
    pub(crate) verts: Vec<Vertex>,
}

impl Diagram {
    pub(crate) fn empty(surface: Surface, ordering: OrderingMode) -> Self {
        Diagram { surface, ordering, spatial: false, darts: Vec::new(), verts: Vec::new() }
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn ordering(&self) -> OrderingMode {
        self.ordering
    }

    pub fn is_spatial(&self) -> bool {
        self.spatial
    }

    pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
        text::parse(text)
    }

    /// Canonical text form; segments are renumbered by traversal.
    pub fn to_text(&self) -> String {
        text::serialize(self)
    }

    // ---- low-level map access -------------------------------------------

    pub(crate) fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        self.verts.push(Vertex { kind, darts: Vec::new(), alive: true });
        self.verts.len() - 1
    }

    /// New dart appended to the rotation of `v`, not yet paired.
    pub(crate) fn add_dart(&mut self, v: VertexId) -> DartId {
        let id = self.darts.len();
        self.darts.push(Dart {
            partner: usize::MAX,
            vertex: v,
            start: false,
            ghost: false,
            color: None,
            alive: true,
        });
        self.verts[v].darts.push(id);
        id
    }

    pub(crate) fn new_dart(&mut self) -> DartId {
        let id = self.darts.len();
        self.darts.push(Dart {
            partner: usize::MAX,
            vertex: usize::MAX,
            start: false,
            ghost: false,
            color: None,
            alive: true,
        });
        id
    }

    pub(crate) fn set_rotation(&mut self, v: VertexId, darts: Vec<DartId>) {
        for &d in &darts {
            self.darts[d].vertex = v;
        }
        self.verts[v].darts = darts;
    }

    /// Pairs `a` and `b` into one edge oriented from `a` when `a_start`.
    pub(crate) fn link(
        &mut self,
        a: DartId,
        b: DartId,
        a_start: bool,
        ghost: bool,
        color: Option<ColorToken>,
    ) {
        self.darts[a].partner = b;
        self.darts[b].partner = a;
        self.darts[a].start = a_start;
        self.darts[b].start = !a_start;
        self.darts[a].ghost = ghost;
        self.darts[b].ghost = ghost;
        self.darts[a].color = color.clone();
        self.darts[b].color = color;
    }

    pub(crate) fn kill_vertex(&mut self, v: VertexId) {
        self.verts[v].alive = false;
        for d in std::mem::take(&mut self.verts[v].darts) {
            self.darts[d].alive = false;
        }
    }

    pub fn theta(&self, d: DartId) -> DartId {
        self.darts[d].partner
    }

    pub fn vertex_of(&self, d: DartId) -> VertexId {
        self.darts[d].vertex
    }

    pub fn is_start(&self, d: DartId) -> bool {
        self.darts[d].start
    }

    pub fn is_ghost(&self, d: DartId) -> bool {
        self.darts[d].ghost
    }

    pub fn color(&self, d: DartId) -> Option<&ColorToken> {
        self.darts[d].color.as_ref()
    }

    pub(crate) fn set_edge_color(&mut self, d: DartId, c: Option<ColorToken>) {
        let p = self.theta(d);
        self.darts[d].color = c.clone();
        self.darts[p].color = c;
    }

    /// One dart of every edge on the strand through `d`, i.e. up to graph
    /// vertices or endpoints in both directions.
    pub(crate) fn strand_of(&self, d: DartId) -> Vec<DartId> {
        let mut seen = std::collections::HashSet::from([d, self.theta(d)]);
        let mut out = vec![d];
        for start in [d, self.theta(d)] {
            let mut x = start;
            while let Some(n) = self.straight(self.theta(x)) {
                if !seen.insert(n) {
                    break;
                }
                seen.insert(self.theta(n));
                out.push(n);
                x = n;
            }
        }
        out
    }

    pub(crate) fn set_strand_color(&mut self, d: DartId, c: Option<ColorToken>) {
        for x in self.strand_of(d) {
            self.set_edge_color(x, c.clone());
        }
    }

    pub fn kind(&self, v: VertexId) -> &VertexKind {
        &self.verts[v].kind
    }

    pub(crate) fn set_kind(&mut self, v: VertexId, kind: VertexKind) {
        self.verts[v].kind = kind;
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.verts[v].darts
    }

    pub(crate) fn pos(&self, d: DartId) -> usize {
        let v = self.darts[d].vertex;
        self.verts[v].darts.iter().position(|&x| x == d).expect("dart in its vertex rotation")
    }

    /// Next dart counterclockwise around the vertex.
    pub fn sigma(&self, d: DartId) -> DartId {
        let ds = &self.verts[self.darts[d].vertex].darts;
        let p = self.pos(d);
        ds[(p + 1) % ds.len()]
    }

    pub fn sigma_inv(&self, d: DartId) -> DartId {
        let ds = &self.verts[self.darts[d].vertex].darts;
        let p = self.pos(d);
        ds[(p + ds.len() - 1) % ds.len()]
    }

    /// Dart across a crossing, or the other strand dart at a bead.
    pub fn straight(&self, d: DartId) -> Option<DartId> {
        let v = self.vertex_of(d);
        match self.verts[v].kind {
            VertexKind::Crossing => Some(self.verts[v].darts[(self.pos(d) + 2) % 4]),
            VertexKind::Bead => self.verts[v]
                .darts
                .iter()
                .copied()
                .find(|&x| x != d && !self.darts[x].ghost),
            _ => None,
        }
    }

    /// Darts on positions 1 and 3 of a crossing pass over.
    pub fn is_over(&self, d: DartId) -> bool {
        self.pos(d) % 2 == 1
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.verts.len()).filter(move |&v| self.verts[v].alive)
    }

    pub fn alive_darts(&self) -> impl Iterator<Item = DartId> + '_ {
        (0..self.darts.len()).filter(move |&d| self.darts[d].alive)
    }

    pub fn crossings(&self) -> Vec<VertexId> {
        self.alive_vertices()
            .filter(|&v| self.verts[v].kind == VertexKind::Crossing)
            .collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().len()
    }

    pub fn vertices_of_kind<'a>(
        &'a self,
        pred: impl Fn(&VertexKind) -> bool + 'a,
    ) -> impl Iterator<Item = VertexId> + 'a {
        self.alive_vertices().filter(move |&v| pred(&self.verts[v].kind))
    }

    pub fn infinity(&self) -> Option<VertexId> {
        self.vertices_of_kind(|k| *k == VertexKind::Infinity).next()
    }

    /// Endpoint label -> endpoint vertex.
    pub fn endpoints(&self) -> BTreeMap<u32, VertexId> {
        let mut out = BTreeMap::new();
        for v in self.alive_vertices() {
            if let VertexKind::Endpoint { label, .. } = self.verts[v].kind {
                out.insert(label, v);
            }
        }
        out
    }

    pub fn open_count(&self) -> usize {
        self.endpoints().len() / 2
    }

    pub fn faces(&self) -> Faces {
        let mut of = vec![usize::MAX; self.darts.len()];
        let mut count = 0;
        for d in self.alive_darts() {
            if of[d] != usize::MAX {
                continue;
            }
            let mut x = d;
            loop {
                of[x] = count;
                x = self.sigma(self.theta(x));
                if x == d {
                    break;
                }
            }
            count += 1;
        }
        Faces { of, count }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.alive_vertices().count() as i64;
        let e = self.alive_darts().count() as i64 / 2;
        let f = self.faces().count as i64;
        v - e + f
    }

    fn connected(&self) -> bool {
        let n = self.verts.len();
        let mut seen = vec![false; n];
        let Some(root) = self.alive_vertices().next() else { return true };
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.verts[v].darts {
                let w = self.vertex_of(self.theta(d));
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        self.alive_vertices().all(|v| seen[v])
    }

    /// Sign of a crossing: +1 when the incoming over dart sits just clockwise
    /// of the incoming under dart.
    pub fn crossing_sign(&self, v: VertexId) -> i32 {
        let ds = &self.verts[v].darts;
        let u = if self.darts[ds[0]].start { 2 } else { 0 };
        let o = if self.darts[ds[1]].start { 3 } else { 1 };
        if o == (u + 3) % 4 {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i32 {
        self.crossings().iter().map(|&v| self.crossing_sign(v)).sum()
    }

    /// Follows a strand from the edge leaving `d`; returns the steps taken
    /// and the dart where the strand stops (at an endpoint or graph vertex),
    /// or `None` when it closes up.
    pub(crate) fn trace_from(&self, d: DartId) -> (Vec<DartId>, Option<DartId>) {
        let mut steps = vec![d];
        let mut x = d;
        loop {
            let y = self.theta(x);
            match self.straight(y) {
                Some(next) => {
                    if next == d {
                        return (steps, None);
                    }
                    steps.push(next);
                    x = next;
                }
                None => return (steps, Some(y)),
            }
        }
    }

    /// Open components from each tail in label order, then closed ones.
    pub fn components(&self) -> Vec<Component> {
        let mut used = vec![false; self.darts.len()];
        let mut out = Vec::new();
        for &v in self.endpoints().values() {
            if let VertexKind::Endpoint { role: EndRole::Tail, .. } = self.verts[v].kind {
                let (steps, _) = self.trace_from(self.verts[v].darts[0]);
                for &s in &steps {
                    used[s] = true;
                    used[self.theta(s)] = true;
                }
                out.push(Component { closed: false, steps });
            }
        }
        for d in self.alive_darts() {
            if used[d] || self.darts[d].ghost || !self.darts[d].start {
                continue;
            }
            let v = self.vertex_of(d);
            if !matches!(self.verts[v].kind, VertexKind::Crossing | VertexKind::Bead) {
                continue;
            }
            let (steps, end) = self.trace_from(d);
            let closed = end.is_none();
            for &s in &steps {
                used[s] = true;
                used[self.theta(s)] = true;
            }
            if closed {
                out.push(Component { closed, steps });
            }
        }
        out
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for d in self.alive_darts() {
            let p = self.darts[d].partner;
            if p >= self.darts.len()
                || !self.darts[p].alive
                || self.darts[p].partner != d
                || self.darts[p].start == self.darts[d].start
                || self.darts[p].ghost != self.darts[d].ghost
            {
                out.push(Violation::UnpairedDart(d));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut labels: BTreeMap<u32, (EndRole, VertexId)> = BTreeMap::new();
        let mut infinities = 0;
        for v in self.alive_vertices() {
            let ds = &self.verts[v].darts;
            let strand: Vec<DartId> = ds.iter().copied().filter(|&d| !self.darts[d].ghost).collect();
            match &self.verts[v].kind {
                VertexKind::Crossing => {
                    let ok = ds.len() == 4
                        && strand.len() == 4
                        && self.darts[ds[0]].start != self.darts[ds[2]].start
                        && self.darts[ds[1]].start != self.darts[ds[3]].start;
                    if !ok {
                        out.push(Violation::MalformedCrossing(v));
                    }
                }
                VertexKind::Endpoint { role, label } => {
                    let ok = strand.len() == 1
                        && ds[0] == strand[0]
                        && self.darts[strand[0]].start == (*role == EndRole::Tail);
                    if !ok {
                        out.push(Violation::MalformedEndpoint(v));
                    }
                    if labels.insert(*label, (*role, v)).is_some() {
                        out.push(Violation::DuplicateEndpointLabel(*label));
                    }
                }
                VertexKind::Bead => {
                    let ok = strand.len() == 2
                        && self.darts[strand[0]].start != self.darts[strand[1]].start;
                    if !ok {
                        out.push(Violation::MalformedBead(v));
                    }
                }
                VertexKind::Graph { .. } => {
                    if !self.spatial {
                        out.push(Violation::GraphVertexInLinkoid(v));
                    }
                }
                VertexKind::Infinity => infinities += 1,
            }
        }
        let n = labels.len() as u32;
        for k in 1..=n {
            if !labels.contains_key(&k) {
                out.push(Violation::MissingEndpointLabel(k));
            }
        }
        if self.ordering == OrderingMode::Ordered && out.is_empty() {
            for c in self.components().iter().filter(|c| !c.closed) {
                let tail = self.endpoint_label(self.vertex_of(c.steps[0]));
                let last = *c.steps.last().unwrap();
                let head = self.endpoint_label(self.vertex_of(self.theta(last)));
                if let (Some(t), Some(h)) = (tail, head) {
                    if t % 2 != 1 || h != t + 1 {
                        out.push(Violation::OrderingMismatch { tail: t, head: h });
                    }
                }
            }
        }
        match (self.surface, infinities) {
            (Surface::R2, 0) => out.push(Violation::MissingOuterFace),
            (Surface::S2, k) if k > 0 => out.push(Violation::OuterFaceOnSphere),
            (_, k) if k > 1 => out.push(Violation::MultipleOuterFaces),
            _ => {}
        }
        if !self.connected() {
            out.push(Violation::Disconnected);
        } else {
            let euler = self.euler_characteristic();
            if euler != 2 {
                out.push(Violation::NonSpherical { euler });
            }
        }
        out
    }

    pub fn endpoint_label(&self, v: VertexId) -> Option<u32> {
        match self.verts[v].kind {
            VertexKind::Endpoint { label, .. } => Some(label),
            _ => None,
        }
    }

    // ---- structural edits shared by moves and constructions ---------------

    /// Splits the edge at `d` with a new bead. Returns `(bead, near, far)`
    /// where `near` faces `d` and `far` faces its old partner.
    pub(crate) fn insert_bead(&mut self, d: DartId) -> (VertexId, DartId, DartId) {
        let p = self.theta(d);
        let d_start = self.darts[d].start;
        let ghost = self.darts[d].ghost;
        let color = self.darts[d].color.clone();
        let b = self.add_vertex(VertexKind::Bead);
        let near = self.add_dart(b);
        let far = self.add_dart(b);
        self.link(d, near, d_start, ghost, color.clone());
        self.link(far, p, d_start, ghost, color);
        (b, near, far)
    }

    /// Removes 2-valent beads that are not needed to hold a loop.
    pub(crate) fn cleanup_beads(&mut self) {
        for v in 0..self.verts.len() {
            if !self.verts[v].alive || self.verts[v].kind != VertexKind::Bead {
                continue;
            }
            let ds = self.verts[v].darts.clone();
            if ds.len() != 2 || ds.iter().any(|&d| self.darts[d].ghost) {
                continue;
            }
            let (a, b) = (ds[0], ds[1]);
            if self.theta(a) == b {
                continue;
            }
            let (pa, pb) = (self.theta(a), self.theta(b));
            let pa_start = self.darts[pa].start;
            let color = self.darts[a].color.clone();
            self.kill_vertex(v);
            self.link(pa, pb, pa_start, false, color);
        }
    }

    /// All darts of all vertices, over/under swapped.
    pub fn mirror(&self) -> Diagram {
        let mut out = self.clone();
        for v in out.crossings() {
            out.verts[v].darts.rotate_left(1);
        }
        out
    }

    /// Forgets the point at infinity.
    pub fn to_sphere(&self) -> Diagram {
        let mut out = self.clone();
        if let Some(inf) = out.infinity() {
            for d in out.verts[inf].darts.clone() {
                let p = out.theta(d);
                let w = out.vertex_of(p);
                out.verts[w].darts.retain(|&x| x != p);
                out.darts[p].alive = false;
            }
            out.kill_vertex(inf);
        }
        out.surface = Surface::S2;
        out.cleanup_beads();
        out
    }

    /// Same map with the point at infinity placed in the face on the right
    /// of dart `d`. Any existing infinity is dropped first.
    pub fn with_outer_face(&self, d: DartId) -> Diagram {
        let mut out = self.to_sphere();
        assert!(out.darts[d].alive, "outer-face dart must survive");
        out.attach_infinity(d);
        out.surface = Surface::R2;
        out
    }

    /// Attaches an infinity vertex inside the face on the right of `d`.
    pub(crate) fn attach_infinity(&mut self, d: DartId) {
        let (b, near, far) = self.insert_bead(d);
        let g = self.new_dart();
        // right of travel from d: [near, g, far]
        self.set_rotation(b, vec![near, g, far]);
        let inf = self.add_vertex(VertexKind::Infinity);
        let gi = self.add_dart(inf);
        self.link(g, gi, true, true, None);
    }

    /// Ghost edges whose two sides lie in different faces.
    pub(crate) fn redundant_ghosts(&self) -> Vec<DartId> {
        let faces = self.faces();
        self.alive_darts()
            .filter(|&d| self.darts[d].ghost && self.darts[d].start)
            .filter(|&d| faces.of[d] != faces.of[self.theta(d)])
            .collect()
    }

    pub(crate) fn remove_edge(&mut self, d: DartId) {
        let p = self.theta(d);
        for x in [d, p] {
            let v = self.vertex_of(x);
            self.verts[v].darts.retain(|&y| y != x);
            self.darts[x].alive = false;
        }
    }

    /// Drops ghost edges that do not hold pieces together.
    pub(crate) fn prune_ghosts(&mut self) {
        while let Some(&g) = self.redundant_ghosts().first() {
            self.remove_edge(g);
        }
        self.cleanup_beads();
    }

    // ---- isomorphism ------------------------------------------------------

    fn code_from(&self, root: DartId) -> Vec<i64> {
        let mut label = vec![-1i64; self.darts.len()];
        let mut vert_done = vec![false; self.verts.len()];
        let mut queue = std::collections::VecDeque::new();
        let mut next = 0i64;
        label[root] = next;
        next += 1;
        queue.push_back(root);
        let mut code = Vec::new();
        while let Some(entry) = queue.pop_front() {
            let v = self.vertex_of(entry);
            if vert_done[v] {
                continue;
            }
            vert_done[v] = true;
            let ds = &self.verts[v].darts;
            let k = ds.len();
            let p = self.pos(entry);
            code.push(-1000);
            code.push(match &self.verts[v].kind {
                VertexKind::Crossing => -1 - (p as i64 % 2),
                VertexKind::Endpoint { role, label } => {
                    -10 - 2 * *label as i64 - (*role == EndRole::Head) as i64
                }
                VertexKind::Bead => -3,
                VertexKind::Graph { .. } => -4,
                VertexKind::Infinity => -5,
            });
            code.push(k as i64);
            for i in 0..k {
                let d = ds[(p + i) % k];
                if label[d] < 0 {
                    label[d] = next;
                    next += 1;
                }
                let q = self.theta(d);
                if label[q] < 0 {
                    label[q] = next;
                    next += 1;
                    queue.push_back(q);
                }
                code.push(label[d]);
                code.push(label[q]);
                code.push(self.darts[d].start as i64 + 2 * self.darts[d].ghost as i64);
            }
        }
        code
    }

    /// Rotation-system isomorphism preserving crossing data, orientation,
    /// endpoint labels and ghost edges.
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        if self.surface != other.surface
            || self.alive_darts().count() != other.alive_darts().count()
            || self.alive_vertices().count() != other.alive_vertices().count()
        {
            return false;
        }
        let Some(root) = self.alive_darts().next() else { return true };
        let target = self.code_from(root);
        other.alive_darts().any(|r| other.code_from(r) == target)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TRIVIAL: &str = "surface S2\nT 1 1\nH 1 2\n";
    pub(crate) const KINK: &str = "surface S2\nT 1 1\nX 1 3 2 2\nH 3 2\n";
    pub(crate) const RIGHT_TREFOIL: &str = "surface S2\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n";

    #[test]
    fn trivial_knotoid() {
        let d = Diagram::parse(TRIVIAL).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.open_count(), 1);
        assert_eq!(d.writhe(), 0);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn positive_kink() {
        let d = Diagram::parse(KINK).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.writhe(), 1);
        assert_eq!(d.mirror().writhe(), -1);
    }

    #[test]
    fn right_trefoil_structure() {
        let d = Diagram::parse(RIGHT_TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.euler_characteristic(), 2);
        let comps = d.components();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].closed);
        assert_eq!(d.faces().count, 5);
        assert_eq!(d.writhe(), 3);
    }

    #[test]
    fn duplicate_label_is_reported() {
        let err = Diagram::parse("surface S2\norder vertex\nT 1 3\nH 1 3\n").unwrap_err();
        match err {
            DiagramError::Validation(v) => {
                assert!(v.contains(&Violation::DuplicateEndpointLabel(3)))
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn torus_rotation_is_rejected() {
        // two crossings wired like a torus graph: every rotation choice of
        // this Gauss pattern (1 2 1 2 on one closed curve) is non-planar
        let err = Diagram::parse("surface S2\nX 1 3 2 4\nX 2 4 3 1\n").unwrap_err();
        match err {
            DiagramError::Validation(v) => {
                assert!(v.iter().any(|x| matches!(x, Violation::NonSpherical { .. })), "{v:?}")
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn plane_diagram_needs_outer_face() {
        let err = Diagram::parse("surface R2\nT 1 1\nH 1 2\n").unwrap_err();
        assert!(matches!(err, DiagramError::Validation(ref v) if v.contains(&Violation::MissingOuterFace)));
        let ok = Diagram::parse("surface R2\nT 1 1\nH 1 2\nouter 1 L\n").unwrap();
        assert!(ok.validate().is_empty());
    }

    #[test]
    fn isomorphism_ignores_ids() {
        let a = Diagram::parse(RIGHT_TREFOIL).unwrap();
        let b = Diagram::parse("surface S2\nX 3 1 4 6\nX 5 3 6 2\nX 1 5 2 4\n").unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&a.mirror()));
    }
}
