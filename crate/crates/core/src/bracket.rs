//! Bracket polynomials by state sum, and a tensor-contraction bracket for
//! closed link diagrams.
//!
//! Smoothing convention: at a crossing with darts `[d0, d1, d2, d3]`
//! (counterclockwise, under strand on `d0`, `d2`) the A-smoothing joins
//! `d0`-`d1` and `d2`-`d3`, the B-smoothing joins `d1`-`d2` and `d3`-`d0`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{DartId, Diagram, OrderingMode, VertexId, VertexKind};
use crate::laurent::LaurentPoly;

pub const MAX_STATE_SUM_CROSSINGS: usize = 24;
const MAX_LABELS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("{crossings} crossings exceed the state-sum limit of {limit}")]
    Capacity { crossings: usize, limit: usize },
    #[error("too many open components for the ordered bracket ({0})")]
    TooManyEndpoints(usize),
    #[error("the ordered bracket needs endpoint labels")]
    MissingOrdering,
    #[error("spatial graphs have no bracket; build their link set instead")]
    NotALinkoid,
}

/// Where a strand leaving a crossing slot arrives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Slot(u32),
    End(u32),
}

/// Crossing slots `4k + i` and the strand connections between them.
#[derive(Clone, Debug)]
pub struct StateModel {
    pub crossings: Vec<VertexId>,
    pub link: Vec<Target>,
    /// indexed by endpoint label
    pub end_link: BTreeMap<u32, Target>,
    pub free_loops: u32,
    /// darts walked from each slot (and from each endpoint) to its target
    pub(crate) slot_path: Vec<Vec<DartId>>,
    pub(crate) end_path: BTreeMap<u32, Vec<DartId>>,
}

impl StateModel {
    pub fn new(d: &Diagram) -> Result<Self, BracketError> {
        if d.is_spatial() {
            return Err(BracketError::NotALinkoid);
        }
        let crossings = d.crossings();
        let mut index = HashMap::new();
        for (k, &v) in crossings.iter().enumerate() {
            for (i, &x) in d.rotation(v).iter().enumerate() {
                index.insert(x, (4 * k + i) as u32);
            }
        }
        let follow = |start: DartId| -> (Target, Vec<DartId>) {
            let mut path = vec![start];
            let mut x = start;
            loop {
                let y = d.theta(x);
                if let Some(&s) = index.get(&y) {
                    return (Target::Slot(s), path);
                }
                match d.kind(d.vertex_of(y)) {
                    VertexKind::Endpoint { label, .. } => return (Target::End(*label), path),
                    VertexKind::Bead => {
                        x = d.straight(y).unwrap();
                        path.push(x);
                    }
                    k => panic!("strand reaches {k:?}"),
                }
            }
        };
        let mut link = Vec::with_capacity(4 * crossings.len());
        let mut slot_path = Vec::with_capacity(4 * crossings.len());
        for &v in &crossings {
            for &x in d.rotation(v) {
                let (t, p) = follow(x);
                link.push(t);
                slot_path.push(p);
            }
        }
        let mut end_link = BTreeMap::new();
        let mut end_path = BTreeMap::new();
        for (&label, &v) in d.endpoints().iter() {
            let (t, p) = follow(d.rotation(v)[0]);
            end_link.insert(label, t);
            end_path.insert(label, p);
        }
        // bead-only loops
        let mut free_loops = 0;
        for comp in d.components() {
            if comp.closed && comp.steps.iter().all(|&s| !index.contains_key(&s)) {
                free_loops += 1;
            }
        }
        Ok(StateModel { crossings, link, end_link, free_loops, slot_path, end_path })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Slot joined to `slot` inside its crossing under state `s`
    /// (bit k set = B-smoothing at crossing k).
    #[inline]
    pub fn inner(slot: u32, s: u64) -> u32 {
        let k = slot / 4;
        let i = slot % 4;
        let b = (s >> k) & 1 == 1;
        let j = if !b { i ^ 1 } else { [3, 2, 1, 0][i as usize] };
        4 * k + j
    }
}

/// Arc matching of a state, circles and `A` exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateOutcome {
    pub a_exp: i32,
    pub circles: u32,
    pub arcs: Vec<(u32, u32)>,
}

struct Tracer {
    stamp: Vec<u32>,
    gen: u32,
}

impl Tracer {
    fn new(slots: usize) -> Self {
        Tracer { stamp: vec![0; slots], gen: 0 }
    }

    fn run(&mut self, m: &StateModel, s: u64, arcs: &mut Vec<(u32, u32)>) -> u32 {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == 0 {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.gen = 1;
        }
        let g = self.gen;
        arcs.clear();
        let mut done_end: u64 = 0;
        for (&label, &t0) in &m.end_link {
            if done_end >> label & 1 == 1 {
                continue;
            }
            let mut t = t0;
            loop {
                match t {
                    Target::End(l2) => {
                        done_end |= 1 << l2;
                        arcs.push((label.min(l2), label.max(l2)));
                        break;
                    }
                    Target::Slot(x) => {
                        self.stamp[x as usize] = g;
                        let y = StateModel::inner(x, s);
                        self.stamp[y as usize] = g;
                        t = m.link[y as usize];
                    }
                }
            }
            done_end |= 1 << label;
        }
        let mut circles = m.free_loops;
        for start in 0..m.link.len() {
            if self.stamp[start] == g {
                continue;
            }
            circles += 1;
            let mut x = start as u32;
            loop {
                self.stamp[x as usize] = g;
                let y = StateModel::inner(x, s);
                self.stamp[y as usize] = g;
                match m.link[y as usize] {
                    Target::Slot(z) => {
                        if self.stamp[z as usize] == g {
                            break;
                        }
                        x = z;
                    }
                    Target::End(_) => unreachable!("closed loop reached an endpoint"),
                }
            }
        }
        circles
    }
}

pub fn resolve_outcome(m: &StateModel, s: u64) -> StateOutcome {
    let mut tr = Tracer::new(m.link.len());
    let mut arcs = Vec::new();
    let circles = tr.run(m, s, &mut arcs);
    arcs.sort();
    let c = m.crossing_count() as i32;
    StateOutcome { a_exp: c - 2 * s.count_ones() as i32, circles, arcs }
}

fn pack(arcs: &[(u32, u32)]) -> u128 {
    let mut code = 0u128;
    for &(i, j) in arcs {
        code |= (j as u128) << (6 * (i as usize - 1));
    }
    code
}

fn unpack(code: u128, labels: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 1..=labels as u32 {
        let j = ((code >> (6 * (i as usize - 1))) & 63) as u32;
        if j > i {
            out.push((i, j));
        }
    }
    out
}

/// Histogram of state outcomes: (A exponent, circles, packed matching).
pub type StateHistogram = HashMap<(i32, u32, u128), u64>;

pub fn state_histogram(m: &StateModel) -> Result<StateHistogram, BracketError> {
    let c = m.crossing_count();
    if c > MAX_STATE_SUM_CROSSINGS {
        return Err(BracketError::Capacity { crossings: c, limit: MAX_STATE_SUM_CROSSINGS });
    }
    if m.end_link.len() > MAX_LABELS {
        return Err(BracketError::TooManyEndpoints(m.end_link.len() / 2));
    }
    let total: u64 = 1 << c;
    let chunk: u64 = 1 << 12;
    let chunks = total.div_ceil(chunk);
    let hist = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut tr = Tracer::new(m.link.len());
            let mut arcs = Vec::new();
            let mut local: StateHistogram = HashMap::new();
            let lo = ch * chunk;
            let hi = (lo + chunk).min(total);
            for s in lo..hi {
                let circles = tr.run(m, s, &mut arcs);
                let a = c as i32 - 2 * s.count_ones() as i32;
                *local.entry((a, circles, pack(&arcs))).or_insert(0) += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(hist)
}

fn sum_histogram(
    hist: &StateHistogram,
    labels: usize,
    arc_weight: impl Fn(&[(u32, u32)]) -> LaurentPoly,
) -> LaurentPoly {
    let mut keys: Vec<_> = hist.iter().collect();
    keys.sort_by_key(|(k, _)| **k);
    let mut delta_pows: HashMap<u32, LaurentPoly> = HashMap::new();
    let mut out = LaurentPoly::zero();
    for (&(a, circles, code), &count) in keys {
        let dp = delta_pows.entry(circles).or_insert_with(|| LaurentPoly::delta().pow(circles)).clone();
        let w = arc_weight(&unpack(code, labels));
        let term = LaurentPoly::a_term(count as i64, a) * dp * w;
        out += term;
    }
    out
}

/// Unnormalized bracket with every open arc weighted by `l`.
pub fn bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    let m = StateModel::new(d)?;
    let hist = state_histogram(&m)?;
    Ok(sum_histogram(&hist, m.end_link.len(), |arcs| LaurentPoly::lambda().pow(arcs.len() as u32)))
}

/// Unnormalized bracket with the arc joining endpoints `i`, `j` weighted by
/// `l{i}{j}`.
pub fn ordered_bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    if d.ordering() == OrderingMode::Unlabeled {
        return Err(BracketError::MissingOrdering);
    }
    let m = StateModel::new(d)?;
    let hist = state_histogram(&m)?;
    Ok(sum_histogram(&hist, m.end_link.len(), |arcs| {
        arcs.iter().fold(LaurentPoly::one(), |acc, &(i, j)| acc * LaurentPoly::lambda_pair(i, j))
    }))
}

pub fn normalize(p: &LaurentPoly, writhe: i32) -> LaurentPoly {
    LaurentPoly::framing_factor(-writhe) * p.clone()
}

pub fn normalized_bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(normalize(&bracket(d)?, d.writhe()))
}

pub fn normalized_ordered_bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(normalize(&ordered_bracket(d)?, d.writhe()))
}

// ---- regions of a state ---------------------------------------------------

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A state resolved to arcs and circles, placed in the surface: every
/// circle separates two regions, every arc lies in one region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossinglessDiagram {
    pub a_exp: i32,
    pub arcs: Vec<(u32, u32)>,
    pub arc_region: Vec<usize>,
    /// (region on the right, region on the left) of each circle
    pub circles: Vec<(usize, usize)>,
    pub regions: usize,
    /// region holding the point at infinity, on the plane
    pub outer: Option<usize>,
}

/// Face bookkeeping that turns states into [`CrossinglessDiagram`]s.
#[derive(Clone, Debug)]
pub struct RegionModel {
    pub(crate) model: StateModel,
    face_count: usize,
    base: UnionFind,
    /// (A-channel faces, B-channel faces) per crossing
    channels: Vec<[(usize, usize); 2]>,
    /// faces on both sides of every edge walked from a slot or endpoint
    slot_faces: Vec<Vec<(usize, usize)>>,
    end_faces: BTreeMap<u32, Vec<(usize, usize)>>,
    /// one (right, left) face pair per crossingless loop
    loops: Vec<(usize, usize)>,
    outer: Option<usize>,
}

impl RegionModel {
    pub fn new(d: &Diagram) -> Result<Self, BracketError> {
        let model = StateModel::new(d)?;
        let faces = d.faces();
        let mut base = UnionFind::new(faces.count);
        for x in d.alive_darts() {
            if d.is_ghost(x) {
                base.union(faces.of[x], faces.of[d.theta(x)]);
            }
        }
        let channels = model
            .crossings
            .iter()
            .map(|&v| {
                let r = d.rotation(v);
                let f = |i: usize| faces.of[r[i]];
                [(f(2), f(0)), (f(1), f(3))]
            })
            .collect();
        let sides = |path: &Vec<DartId>| -> Vec<(usize, usize)> {
            path.iter().map(|&x| (faces.of[x], faces.of[d.theta(x)])).collect()
        };
        let slot_faces = model.slot_path.iter().map(sides).collect();
        let end_faces = model.end_path.iter().map(|(&k, p)| (k, sides(p))).collect();
        let mut loops = Vec::new();
        let crossing_darts: std::collections::HashSet<DartId> =
            model.crossings.iter().flat_map(|&v| d.rotation(v).iter().copied()).collect();
        for comp in d.components() {
            if comp.closed && comp.steps.iter().all(|s| !crossing_darts.contains(s)) {
                let x = comp.steps[0];
                loops.push((faces.of[x], faces.of[d.theta(x)]));
            }
        }
        let outer = d.infinity().map(|v| faces.of[d.rotation(v)[0]]);
        Ok(RegionModel {
            model,
            face_count: faces.count,
            base,
            channels,
            slot_faces,
            end_faces,
            loops,
            outer,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.model.crossing_count()
    }

    pub fn resolve(&self, s: u64) -> CrossinglessDiagram {
        let m = &self.model;
        let mut uf = self.base.clone();
        for (k, ch) in self.channels.iter().enumerate() {
            let (a, b) = ch[((s >> k) & 1) as usize];
            uf.union(a, b);
        }
        let n_slots = m.link.len();
        let mut seen = vec![false; n_slots];
        let mut arcs = Vec::new();
        let mut arc_face = Vec::new();
        let mut done = std::collections::HashSet::new();
        for (&label, &t0) in &m.end_link {
            if done.contains(&label) {
                continue;
            }
            let mut faces: Vec<(usize, usize)> = self.end_faces[&label].clone();
            let mut t = t0;
            let other = loop {
                match t {
                    Target::End(l2) => break l2,
                    Target::Slot(x) => {
                        seen[x as usize] = true;
                        let y = StateModel::inner(x, s);
                        seen[y as usize] = true;
                        faces.extend_from_slice(&self.slot_faces[y as usize]);
                        t = m.link[y as usize];
                    }
                }
            };
            done.insert(label);
            done.insert(other);
            for &(r, l) in &faces {
                uf.union(r, l);
            }
            arcs.push((label.min(other), label.max(other)));
            arc_face.push(faces[0].0);
        }
        let mut circle_faces = Vec::new();
        for start in 0..n_slots {
            if seen[start] {
                continue;
            }
            // walk from `start` along its link first so the recorded edge is
            // traversed in the loop's direction
            let mut x = start as u32;
            let mut rep = None;
            loop {
                seen[x as usize] = true;
                let y = StateModel::inner(x, s);
                seen[y as usize] = true;
                if rep.is_none() {
                    rep = Some(self.slot_faces[y as usize][0]);
                }
                match m.link[y as usize] {
                    Target::Slot(z) if !seen[z as usize] => x = z,
                    _ => break,
                }
            }
            circle_faces.push(rep.unwrap());
        }
        circle_faces.extend(self.loops.iter().copied());
        let mut compact = vec![usize::MAX; self.face_count];
        let mut regions = 0;
        let mut region = |uf: &mut UnionFind, f: usize| {
            let r = uf.find(f);
            if compact[r] == usize::MAX {
                compact[r] = regions;
                regions += 1;
            }
            compact[r]
        };
        let mut order: Vec<usize> = (0..arcs.len()).collect();
        order.sort_by_key(|&i| arcs[i]);
        let arcs_sorted: Vec<(u32, u32)> = order.iter().map(|&i| arcs[i]).collect();
        let arc_region = order.iter().map(|&i| region(&mut uf, arc_face[i])).collect();
        let circles = circle_faces
            .iter()
            .map(|&(r, l)| (region(&mut uf, r), region(&mut uf, l)))
            .collect();
        let outer = self.outer.map(|f| region(&mut uf, f));
        let c = m.crossing_count() as i32;
        CrossinglessDiagram {
            a_exp: c - 2 * s.count_ones() as i32,
            arcs: arcs_sorted,
            arc_region,
            circles,
            regions,
            outer,
        }
    }
}

/// State `s` of `d` as a placed crossingless diagram.
pub fn resolve_state(d: &Diagram, s: u64) -> Result<CrossinglessDiagram, BracketError> {
    Ok(RegionModel::new(d)?.resolve(s))
}

// ---- contraction bracket for closed links ---------------------------------

/// A closed link diagram as crossing slots: slot `4k + i` is dart `i` of
/// crossing `k` (counterclockwise, under strand on 0 and 2) and `next`
/// pairs the two ends of every arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkPd {
    pub next: Vec<u32>,
    pub free_loops: u32,
}

impl LinkPd {
    pub fn crossing_count(&self) -> usize {
        self.next.len() / 4
    }

    /// Closed diagrams only.
    pub fn from_diagram(d: &Diagram) -> Result<LinkPd, BracketError> {
        let m = StateModel::new(d)?;
        if !m.end_link.is_empty() {
            return Err(BracketError::NotALinkoid);
        }
        let next = m
            .link
            .iter()
            .map(|t| match t {
                Target::Slot(s) => *s,
                Target::End(_) => unreachable!(),
            })
            .collect();
        Ok(LinkPd { next, free_loops: m.free_loops })
    }

    fn order(&self) -> Vec<usize> {
        let c = self.crossing_count();
        let mut done = vec![false; c];
        let mut order = Vec::with_capacity(c);
        while order.len() < c {
            let mut best = None;
            let mut best_score = -1i64;
            for k in 0..c {
                if done[k] {
                    continue;
                }
                let mut score = 0i64;
                for i in 0..4 {
                    let o = self.next[4 * k + i] as usize / 4;
                    if done[o] {
                        score += 2;
                    }
                    if o == k {
                        score += 1;
                    }
                }
                if score > best_score {
                    best_score = score;
                    best = Some(k);
                }
            }
            let k = best.unwrap();
            done[k] = true;
            order.push(k);
        }
        order
    }
}

type Weights = HashMap<(i32, u32), u64>;

/// Bracket of a closed link by contracting crossings one at a time over
/// boundary matchings. Agrees with [`bracket`] on closed diagrams.
pub fn contraction_bracket(pd: &LinkPd) -> LaurentPoly {
    let c = pd.crossing_count();
    let mut processed = vec![false; c];
    let mut states: HashMap<Vec<u32>, Weights> = HashMap::new();
    states.insert(Vec::new(), HashMap::from([((0, pd.free_loops), 1u64)]));
    let mut inner: HashMap<u32, u32> = HashMap::new();
    for x in pd.order() {
        processed[x] = true;
        let mut next_states: HashMap<Vec<u32>, Weights> = HashMap::new();
        for (m, w) in &states {
            for (smooth, da) in [([(0u32, 1u32), (2, 3)], 1i32), ([(1, 2), (3, 0)], -1)] {
                inner.clear();
                for p in m.chunks(2) {
                    inner.insert(p[0], p[1]);
                    inner.insert(p[1], p[0]);
                }
                for (i, j) in smooth {
                    let (a, b) = (4 * x as u32 + i, 4 * x as u32 + j);
                    inner.insert(a, b);
                    inner.insert(b, a);
                }
                let open = |n: u32| !processed[pd.next[n as usize] as usize / 4];
                let mut nodes: Vec<u32> = inner.keys().copied().collect();
                nodes.sort_unstable();
                let mut visited: std::collections::HashSet<u32> = std::collections::HashSet::new();
                let mut pairs: Vec<(u32, u32)> = Vec::new();
                for &n in &nodes {
                    if visited.contains(&n) || !open(n) {
                        continue;
                    }
                    let mut cur = n;
                    visited.insert(cur);
                    loop {
                        let w2 = inner[&cur];
                        visited.insert(w2);
                        if open(w2) {
                            pairs.push((n.min(w2), n.max(w2)));
                            break;
                        }
                        cur = pd.next[w2 as usize];
                        visited.insert(cur);
                    }
                }
                let mut loops = 0u32;
                for &n in &nodes {
                    if visited.contains(&n) {
                        continue;
                    }
                    loops += 1;
                    let mut cur = n;
                    loop {
                        visited.insert(cur);
                        let w2 = inner[&cur];
                        visited.insert(w2);
                        cur = pd.next[w2 as usize];
                        if visited.contains(&cur) {
                            break;
                        }
                    }
                }
                pairs.sort_unstable();
                let key: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
                let entry = next_states.entry(key).or_default();
                for (&(a, l), &cnt) in w {
                    *entry.entry((a + da, l + loops)).or_insert(0) += cnt;
                }
            }
        }
        states = next_states;
    }
    let mut out = LaurentPoly::zero();
    if let Some(w) = states.get(&Vec::new()) {
        let mut keys: Vec<_> = w.iter().collect();
        keys.sort();
        for (&(a, l), &cnt) in keys {
            out += LaurentPoly::a_term(cnt as i64, a) * LaurentPoly::delta().pow(l);
        }
    }
    out
}
