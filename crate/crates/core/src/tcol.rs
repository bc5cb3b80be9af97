//! Coloured replacement invariant of spatial graphs.
//!
//! At every graph vertex two incident edges are joined and the rest are cut
//! off; the closed curves that survive form a link. The invariant is the set
//! of fingerprints of all those links.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::bracket::{contraction_bracket, normalize, LinkPd};
use crate::diagram::{DartId, Diagram, VertexId, VertexKind};
use crate::laurent::LaurentPoly;
use crate::theta::ColorToken;

pub const MAX_REPLACEMENT_OUTCOMES: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TColError {
    #[error("{outcomes} replacement outcomes exceed the limit of {MAX_REPLACEMENT_OUTCOMES}")]
    Capacity { outcomes: u128 },
    #[error("graph vertex `{0}` has degree below 2")]
    DegreeTooSmall(String),
    #[error("expected a spatial graph diagram")]
    NotAGraph,
    #[error("{0} edges exceed the limit of 128")]
    TooManyEdges(usize),
}

/// A maximal strand between graph vertices, or a closed loop.
#[derive(Clone, Debug)]
pub struct GraphEdge {
    /// Darts at the two graph vertices; `None` for a closed loop.
    pub ends: Option<(DartId, DartId)>,
    /// Darts leaving each vertex along the edge, starting at `ends.0`.
    pub steps: Vec<DartId>,
    pub color: Option<ColorToken>,
}

fn is_graph_vertex(g: &Diagram, v: VertexId) -> bool {
    matches!(g.kind(v), VertexKind::Graph { .. })
}

pub fn graph_edges(g: &Diagram) -> Vec<GraphEdge> {
    let mut used: HashSet<DartId> = HashSet::new();
    let mut out = Vec::new();
    for v in g.alive_vertices() {
        if !is_graph_vertex(g, v) {
            continue;
        }
        for &x in g.rotation(v) {
            if g.is_ghost(x) || used.contains(&x) {
                continue;
            }
            let (steps, stop) = g.trace_from(x);
            let y = stop.expect("graph edge ends at a graph vertex");
            used.insert(x);
            used.insert(y);
            out.push(GraphEdge { ends: Some((x, y)), color: g.color(x).cloned(), steps });
        }
    }
    for c in g.components() {
        if c.closed {
            let color = g.color(c.steps[0]).cloned();
            out.push(GraphEdge { ends: None, steps: c.steps, color });
        }
    }
    out
}

/// The link formed by `cycles` (each a closed sequence of edge indices; a
/// closed loop is a one-element cycle). Crossings with a strand outside the
/// cycles are dropped. Returns the diagram and its self-writhe.
pub(crate) fn cycle_link(g: &Diagram, edges: &[GraphEdge], cycles: &[Vec<usize>]) -> (LinkPd, i32) {
    // dart walks: every strand dart entering a crossing, in traversal order
    let mut walks: Vec<Vec<DartId>> = Vec::new();
    for cyc in cycles {
        let mut darts: Vec<DartId> = Vec::new();
        let mut at: Option<VertexId> = None;
        for (k, &e) in cyc.iter().enumerate() {
            let edge = &edges[e];
            let forward = match edge.ends {
                None => true,
                Some((_, b)) if k == 0 => match cyc.get(1).and_then(|&n| edges[n].ends) {
                    Some((c, d2)) => {
                        let vb = g.vertex_of(b);
                        vb == g.vertex_of(c) || vb == g.vertex_of(d2)
                    }
                    None => true,
                },
                Some((a, _)) => Some(g.vertex_of(a)) == at,
            };
            if forward {
                darts.extend(edge.steps.iter().map(|&x| g.theta(x)));
                at = edge.ends.map(|(_, b)| g.vertex_of(b));
            } else {
                darts.extend(edge.steps.iter().rev().copied());
                at = edge.ends.map(|(a, _)| g.vertex_of(a));
            }
        }
        walks.push(darts);
    }
    // keep entries into crossings visited twice
    let mut visits: HashMap<VertexId, Vec<(usize, DartId)>> = HashMap::new();
    for (i, w) in walks.iter().enumerate() {
        for &y in w {
            let v = g.vertex_of(y);
            if *g.kind(v) == VertexKind::Crossing {
                visits.entry(v).or_default().push((i, y));
            }
        }
    }
    let mut index: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (&v, vs) in &visits {
        if vs.len() == 2 {
            index.insert(v, 0);
        }
    }
    for (k, slot) in index.values_mut().enumerate() {
        *slot = k as u32;
    }
    let slot = |y: DartId| 4 * index[&g.vertex_of(y)] + g.pos(y) as u32;
    let mut next = vec![u32::MAX; 4 * index.len()];
    let mut free_loops = 0;
    for w in &walks {
        let kept: Vec<DartId> = w.iter().copied().filter(|&y| index.contains_key(&g.vertex_of(y))).collect();
        if kept.is_empty() {
            free_loops += 1;
            continue;
        }
        for t in 0..kept.len() {
            let out = g.straight(kept[t]).unwrap();
            let a = slot(out);
            let b = slot(kept[(t + 1) % kept.len()]);
            next[a as usize] = b;
            next[b as usize] = a;
        }
    }
    let mut writhe = 0;
    for vs in visits.values() {
        if vs.len() != 2 || vs[0].0 != vs[1].0 {
            continue;
        }
        let (u, o) = if g.pos(vs[0].1).is_multiple_of(2) { (vs[0].1, vs[1].1) } else { (vs[1].1, vs[0].1) };
        writhe += if g.pos(o) == (g.pos(u) + 3) % 4 { 1 } else { -1 };
    }
    (LinkPd { next, free_loops }, writhe)
}

/// One admissible replacement at a vertex: the two darts that stay joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub vertex: VertexId,
    pub joined: (DartId, DartId),
}

fn vertex_name(g: &Diagram, v: VertexId) -> String {
    match g.kind(v) {
        VertexKind::Graph { name } => name.clone(),
        _ => format!("#{v}"),
    }
}

/// All ways to keep exactly two of the edges at `v`.
pub fn replacements_at_vertex(g: &Diagram, v: VertexId) -> Result<Vec<Replacement>, TColError> {
    if !is_graph_vertex(g, v) {
        return Err(TColError::NotAGraph);
    }
    let ds: Vec<DartId> = g.rotation(v).iter().copied().filter(|&x| !g.is_ghost(x)).collect();
    if ds.len() < 2 {
        return Err(TColError::DegreeTooSmall(vertex_name(g, v)));
    }
    let mut out = Vec::new();
    for i in 0..ds.len() {
        for j in i + 1..ds.len() {
            out.push(Replacement { vertex: v, joined: (ds[i], ds[j]) });
        }
    }
    Ok(out)
}

/// Link type data of one replacement outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    /// Colour set of every component, sorted.
    pub colors: Vec<BTreeSet<ColorToken>>,
    /// Bracket of the whole link, normalized by self-writhe.
    pub bracket: LaurentPoly,
    /// The same for each sublink of components sharing a colour set.
    pub sublinks: BTreeMap<BTreeSet<ColorToken>, LaurentPoly>,
}

fn fmt_set(s: &BTreeSet<ColorToken>) -> String {
    let items: Vec<String> = s.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.colors.iter().map(fmt_set).collect();
        write!(f, "colors={{{}}} bracket={} | sublinks:", cs.join(";"), self.bracket)?;
        for (s, p) in &self.sublinks {
            write!(f, " {}={}", fmt_set(s), p)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TColResult {
    pub outcomes: u128,
    /// Distinct fingerprints keyed by their text form.
    pub fingerprints: BTreeMap<String, Fingerprint>,
}

impl TColResult {
    /// One fingerprint per line, sorted.
    pub fn lines(&self) -> Vec<String> {
        self.fingerprints.keys().cloned().collect()
    }
}

impl fmt::Display for TColResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

const NONE: u32 = u32::MAX;

/// Replacement enumeration for one graph. The surviving edge sets are
/// computed once; fingerprints can then be taken under any edge colouring.
pub struct TColEngine<'g> {
    g: &'g Diagram,
    edges: Vec<GraphEdge>,
    /// per vertex: candidate pairs of end slots (`2e` = first end of edge e)
    choices: Vec<Vec<(u32, u32)>>,
    /// closed loops, always kept
    loops: u128,
    outcomes: u128,
    /// distinct surviving edge sets
    kept: Vec<u128>,
    cache: std::sync::Mutex<HashMap<Vec<u128>, LaurentPoly>>,
}

impl<'g> TColEngine<'g> {
    pub fn new(g: &'g Diagram) -> Result<Self, TColError> {
        if !g.is_spatial() {
            return Err(TColError::NotAGraph);
        }
        let edges = graph_edges(g);
        if edges.len() > 128 {
            return Err(TColError::TooManyEdges(edges.len()));
        }
        let mut slot_of: HashMap<DartId, u32> = HashMap::new();
        let mut loops = 0u128;
        for (k, e) in edges.iter().enumerate() {
            match e.ends {
                Some((a, b)) => {
                    slot_of.insert(a, 2 * k as u32);
                    slot_of.insert(b, 2 * k as u32 + 1);
                }
                None => loops |= 1 << k,
            }
        }
        let mut choices = Vec::new();
        for v in g.alive_vertices() {
            if is_graph_vertex(g, v) {
                choices.push(
                    replacements_at_vertex(g, v)?
                        .into_iter()
                        .map(|r| (slot_of[&r.joined.0], slot_of[&r.joined.1]))
                        .collect::<Vec<_>>(),
                );
            }
        }
        let outcomes = choices.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
        if outcomes > MAX_REPLACEMENT_OUTCOMES {
            return Err(TColError::Capacity { outcomes });
        }
        let mut en = TColEngine {
            g,
            edges,
            choices,
            loops,
            outcomes,
            kept: Vec::new(),
            cache: std::sync::Mutex::new(HashMap::new()),
        };
        en.kept = en.enumerate();
        Ok(en)
    }

    pub fn outcomes(&self) -> u128 {
        self.outcomes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Edges closed up into cycles by one joining (`join[slot]` = partner
    /// slot or NONE).
    fn closed_edges(&self, join: &[u32]) -> u128 {
        let mut done = self.loops;
        let mut kept = self.loops;
        for start in 0..self.edges.len() {
            if done >> start & 1 == 1 {
                continue;
            }
            let mut path = 1u128 << start;
            let mut exit = 2 * start as u32 + 1;
            let closed = loop {
                let other = join[exit as usize];
                if other == NONE {
                    break false;
                }
                if other == 2 * start as u32 {
                    break true;
                }
                let e = other / 2;
                if (done | path) >> e & 1 == 1 {
                    break false;
                }
                path |= 1 << e;
                exit = other ^ 1;
            };
            done |= path;
            if closed {
                kept |= path;
            }
        }
        kept
    }

    fn enumerate(&self) -> Vec<u128> {
        const CHUNK: u128 = 4096;
        let total = self.outcomes;
        let chunks = total.div_ceil(CHUNK) as u64;
        let nslots = 2 * self.edges.len();
        let sets: HashSet<u128> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut seen = HashSet::new();
                let lo = c as u128 * CHUNK;
                let hi = (lo + CHUNK).min(total);
                // odometer digits for outcome `lo`
                let mut digits: Vec<usize> = Vec::with_capacity(self.choices.len());
                let mut rest = lo;
                for ch in &self.choices {
                    digits.push((rest % ch.len() as u128) as usize);
                    rest /= ch.len() as u128;
                }
                let mut join = vec![NONE; nslots];
                for _ in lo..hi {
                    for (ch, &k) in self.choices.iter().zip(&digits) {
                        let (a, b) = ch[k];
                        join[a as usize] = b;
                        join[b as usize] = a;
                    }
                    seen.insert(self.closed_edges(&join));
                    for (ch, k) in self.choices.iter().zip(digits.iter_mut()) {
                        let (a, b) = ch[*k];
                        join[a as usize] = NONE;
                        join[b as usize] = NONE;
                    }
                    for (ch, k) in self.choices.iter().zip(digits.iter_mut()) {
                        *k += 1;
                        if *k < ch.len() {
                            break;
                        }
                        *k = 0;
                    }
                }
                seen
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let mut v: Vec<u128> = sets.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Splits a surviving edge set into ordered cycles.
    fn cycles(&self, kept: u128) -> Vec<Vec<usize>> {
        // at every vertex a surviving edge set uses exactly two ends
        let mut partner: HashMap<u32, u32> = HashMap::new();
        let mut at_vertex: HashMap<VertexId, Vec<u32>> = HashMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            if kept >> k & 1 == 0 {
                continue;
            }
            if let Some((a, b)) = e.ends {
                at_vertex.entry(self.g.vertex_of(a)).or_default().push(2 * k as u32);
                at_vertex.entry(self.g.vertex_of(b)).or_default().push(2 * k as u32 + 1);
            }
        }
        for ends in at_vertex.values() {
            debug_assert_eq!(ends.len(), 2);
            partner.insert(ends[0], ends[1]);
            partner.insert(ends[1], ends[0]);
        }
        let mut done = 0u128;
        let mut out = Vec::new();
        for start in 0..self.edges.len() {
            if kept >> start & 1 == 0 || done >> start & 1 == 1 {
                continue;
            }
            done |= 1 << start;
            let mut cyc = vec![start];
            if self.edges[start].ends.is_some() {
                let mut exit = 2 * start as u32 + 1;
                loop {
                    let other = partner[&exit];
                    let e = (other / 2) as usize;
                    if e == start {
                        break;
                    }
                    done |= 1 << e;
                    cyc.push(e);
                    exit = other ^ 1;
                }
            }
            out.push(cyc);
        }
        out
    }

    fn normalized(&self, cycles: &[Vec<usize>]) -> LaurentPoly {
        let key: Vec<u128> = {
            let mut k: Vec<u128> = cycles.iter().map(|c| c.iter().fold(0, |m, &e| m | 1 << e)).collect();
            k.sort_unstable();
            k
        };
        if let Some(p) = self.cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let (pd, w) = cycle_link(self.g, &self.edges, cycles);
        let p = normalize(&contraction_bracket(&pd), w);
        self.cache.lock().unwrap().insert(key, p.clone());
        p
    }

    fn fingerprint(&self, cycles: &[Vec<usize>], colors: &[Option<ColorToken>]) -> Fingerprint {
        let sets: Vec<BTreeSet<ColorToken>> = cycles
            .iter()
            .map(|c| c.iter().filter_map(|&e| colors[e].clone()).collect())
            .collect();
        let mut by_set: BTreeMap<BTreeSet<ColorToken>, Vec<Vec<usize>>> = BTreeMap::new();
        for (c, s) in cycles.iter().zip(&sets) {
            by_set.entry(s.clone()).or_default().push(c.clone());
        }
        let sublinks = by_set.iter().map(|(s, cs)| (s.clone(), self.normalized(cs))).collect();
        let mut colors = sets;
        colors.sort();
        Fingerprint { colors, bracket: self.normalized(cycles), sublinks }
    }

    /// Fingerprints under the colours stored in the graph.
    pub fn evaluate(&self) -> TColResult {
        let colors: Vec<Option<ColorToken>> = self.edges.iter().map(|e| e.color.clone()).collect();
        self.evaluate_with(&colors)
    }

    /// Fingerprints under `colors`, indexed like [`TColEngine::edges`].
    pub fn evaluate_with(&self, colors: &[Option<ColorToken>]) -> TColResult {
        let fingerprints = self
            .kept
            .par_iter()
            .map(|&k| {
                let f = self.fingerprint(&self.cycles(k), colors);
                (f.to_string(), f)
            })
            .collect();
        TColResult { outcomes: self.outcomes, fingerprints }
    }
}

/// Every replacement outcome of `g`, fingerprinted.
pub fn t_col(g: &Diagram) -> Result<TColResult, TColError> {
    Ok(TColEngine::new(g)?.evaluate())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp_lines(text: &str) -> Vec<String> {
        t_col(&Diagram::parse(text).unwrap()).unwrap().lines()
    }

    #[test]
    fn standard_theta_graph() {
        let r = t_col(&Diagram::parse("surface S2\nV a 1 2 3\nV b 1 3 2\n").unwrap()).unwrap();
        assert_eq!(r.outcomes, 9);
        let lines = r.lines();
        assert_eq!(lines.len(), 2, "{lines:?}");
        assert!(lines.contains(&"colors={} bracket=1 | sublinks:".to_string()));
        assert!(lines.contains(&"colors={{}} bracket=-A^2-A^-2 | sublinks: {}=-A^2-A^-2".to_string()));
    }

    #[test]
    fn degree_one_rejected() {
        let g = Diagram::parse("surface S2\nV a 1\nV b 1\n").unwrap();
        assert!(matches!(t_col(&g), Err(TColError::DegreeTooSmall(_))));
    }

    #[test]
    fn colours_appear_in_fingerprint() {
        let lines = fp_lines("surface S2\nV a 1 2 3\nV b 1 3 2\ncolor 1 0\ncolor 2 0\ncolor 3 1\n");
        assert!(lines.iter().any(|l| l.starts_with("colors={{0}}")));
        assert!(lines.iter().any(|l| l.starts_with("colors={{0,1}}")));
    }
}
