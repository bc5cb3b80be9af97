//! The generalized Θ-graph of a multi-linkoid.
//!
//! Every endpoint becomes a trivalent graph vertex (`v{i}` for the tail of
//! component `i`, `w{i}` for its head) and two poles `vinf`, `vminf` are
//! joined to all of them. Connectors to `vinf` pass over everything they
//! meet, connectors to `vminf` pass under everything.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bracket::normalize;
use crate::diagram::{DartId, Diagram, EndRole, OrderingMode, VertexId, VertexKind};
use crate::laurent::LaurentPoly;
use crate::tcol::{cycle_link, graph_edges, GraphEdge, TColEngine, TColError, TColResult};

/// Edge colour: an integer or an integer pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorToken {
    Int(i64),
    Pair(i64, i64),
}

impl fmt::Display for ColorToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorToken::Int(i) => write!(f, "{i}"),
            ColorToken::Pair(i, k) => write!(f, "({i},{k})"),
        }
    }
}

impl FromStr for ColorToken {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("bad colour `{s}`");
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            Ok(ColorToken::Pair(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        } else {
            t.parse().map(ColorToken::Int).map_err(|_| bad())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("the diagram has no open components")]
    NoOpenComponents,
    #[error("not a generalized theta-graph: {0}")]
    NotAThetaGraph(String),
    #[error("the {0} scheme needs endpoint labels")]
    MissingOrdering(Scheme),
    #[error("spatial graph input; expected a multi-linkoid")]
    Spatial,
    #[error(transparent)]
    TCol(#[from] TColError),
}

pub const POS_POLE: &str = "vinf";
pub const NEG_POLE: &str = "vminf";

/// Where the poles go and in which order connectors are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleFace {
    /// The face at the endpoint labelled 1.
    EndpointOne,
    /// The face with the longest boundary.
    Largest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Routing {
    pub pole_face: PoleFace,
    pub reverse: bool,
}

impl Default for Routing {
    fn default() -> Self {
        Routing { pole_face: PoleFace::EndpointOne, reverse: false }
    }
}

impl Routing {
    pub fn alternative() -> Self {
        Routing { pole_face: PoleFace::Largest, reverse: true }
    }
}

/// Open components in order, as (tail vertex, head vertex).
fn open_components(d: &Diagram) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for &v in d.endpoints().values() {
        if let VertexKind::Endpoint { role: EndRole::Tail, .. } = d.kind(v) {
            let (_, stop) = d.trace_from(d.rotation(v)[0]);
            out.push((v, d.vertex_of(stop.expect("open component ends at a head"))));
        }
    }
    out
}

fn graph_vertex(d: &Diagram, name: &str) -> Option<VertexId> {
    d.alive_vertices()
        .find(|&v| matches!(d.kind(v), VertexKind::Graph { name: n } if n == name))
}

/// Shortest path through the dual graph from a corner of `src` to a face in
/// `targets`; returns the source corner dart, the crossed darts and the
/// reached face.
fn dual_path(
    g: &Diagram,
    src: VertexId,
    targets: &[usize],
) -> (DartId, Vec<DartId>, usize) {
    let faces = g.faces();
    let mut prev: Vec<Option<(usize, DartId)>> = vec![None; faces.count];
    let mut seen = vec![false; faces.count];
    let mut queue = std::collections::VecDeque::new();
    let mut corner_of: BTreeMap<usize, DartId> = BTreeMap::new();
    for &x in g.rotation(src) {
        let f = faces.of[g.sigma(x)];
        corner_of.entry(f).or_insert(x);
    }
    for &f in corner_of.keys() {
        seen[f] = true;
        queue.push_back(f);
    }
    let mut steps_of: Vec<Vec<DartId>> = vec![Vec::new(); faces.count];
    for x in g.alive_darts() {
        if !g.is_ghost(x) {
            steps_of[faces.of[x]].push(x);
        }
    }
    let target = loop {
        let f = queue.pop_front().expect("target face reachable");
        if targets.contains(&f) {
            break f;
        }
        for &x in &steps_of[f] {
            let h = faces.of[g.theta(x)];
            if !seen[h] {
                seen[h] = true;
                prev[h] = Some((f, x));
                queue.push_back(h);
            }
        }
    };
    let mut path = Vec::new();
    let mut f = target;
    while let Some((p, x)) = prev[f] {
        path.push(x);
        f = p;
    }
    path.reverse();
    (corner_of[&f], path, target)
}

/// Draws one connector from `src` to the pole `pole` (created when absent).
fn route(g: &mut Diagram, src: VertexId, pole: &str, targets: &[usize], over: bool) {
    let (corner, path, target) = dual_path(g, src, targets);
    let faces = g.faces();
    let start = g.new_dart();
    let mut rot = g.rotation(src).to_vec();
    let p = rot.iter().position(|&x| x == corner).unwrap();
    rot.insert(p + 1, start);
    g.set_rotation(src, rot);
    let mut prev = start;
    for x in path {
        let far = g.theta(x);
        let fwd = g.is_start(x);
        let color = g.color(x).cloned();
        let c = g.add_vertex(VertexKind::Crossing);
        let (cw, cg, cu, cf) = (g.new_dart(), g.new_dart(), g.new_dart(), g.new_dart());
        g.link(x, cu, fwd, false, color.clone());
        g.link(cw, far, fwd, false, color);
        g.set_rotation(c, if over { vec![cw, cg, cu, cf] } else { vec![cg, cu, cf, cw] });
        g.link(prev, cf, true, false, None);
        prev = cg;
    }
    let end = match graph_vertex(g, pole) {
        Some(v) => {
            let y = g
                .rotation(v)
                .iter()
                .copied()
                .find(|&y| faces.of[g.sigma(y)] == target)
                .expect("pole corner in target face");
            let e = g.new_dart();
            let mut rot = g.rotation(v).to_vec();
            let p = rot.iter().position(|&z| z == y).unwrap();
            rot.insert(p + 1, e);
            g.set_rotation(v, rot);
            e
        }
        None => {
            let v = g.add_vertex(VertexKind::Graph { name: pole.to_string() });
            g.add_dart(v)
        }
    };
    g.link(prev, end, true, false, None);
}

fn corner_faces(g: &Diagram, v: VertexId) -> Vec<usize> {
    let faces = g.faces();
    g.rotation(v).iter().map(|&x| faces.of[g.sigma(x)]).collect()
}

pub fn build_theta(d: &Diagram) -> Result<Diagram, ThetaError> {
    build_theta_with(d, Routing::default())
}

pub fn build_theta_with(d: &Diagram, routing: Routing) -> Result<Diagram, ThetaError> {
    if d.is_spatial() {
        return Err(ThetaError::Spatial);
    }
    let mut g = d.to_sphere();
    g.prune_ghosts();
    let comps = open_components(&g);
    if comps.is_empty() {
        return Err(ThetaError::NoOpenComponents);
    }
    let anchor_face = match routing.pole_face {
        PoleFace::EndpointOne => {
            let v = g.endpoints()[&1];
            corner_faces(&g, v)[0]
        }
        PoleFace::Largest => {
            let faces = g.faces();
            let mut size = vec![0usize; faces.count];
            for x in g.alive_darts() {
                size[faces.of[x]] += 1;
            }
            (0..faces.count).max_by_key(|&f| (size[f], std::cmp::Reverse(f))).unwrap()
        }
    };
    let mut ends = Vec::new();
    for (i, &(t, h)) in comps.iter().enumerate() {
        g.set_kind(t, VertexKind::Graph { name: format!("v{}", i + 1) });
        g.set_kind(h, VertexKind::Graph { name: format!("w{}", i + 1) });
        ends.push(t);
        ends.push(h);
    }
    g.spatial = true;
    if routing.reverse {
        ends.reverse();
    }
    let mut anchor = Some(anchor_face);
    for &v in &ends {
        let targets = match anchor.take() {
            Some(f) => vec![f],
            None => corner_faces(&g, graph_vertex(&g, POS_POLE).unwrap()),
        };
        route(&mut g, v, POS_POLE, &targets, true);
    }
    for &v in &ends {
        let pole = graph_vertex(&g, NEG_POLE).or_else(|| graph_vertex(&g, POS_POLE)).unwrap();
        let targets = corner_faces(&g, pole);
        route(&mut g, v, NEG_POLE, &targets, false);
    }
    let bad = g.validate();
    assert!(bad.is_empty(), "theta construction broke the map: {bad:?}");
    Ok(g)
}

/// The colouring schemes for multi-linkoid Θ-graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Unordered,
    UnorderedStrong,
    Oriented,
    OrientedStrong,
    Ordered,
    OrderedStrong,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Unordered,
        Scheme::UnorderedStrong,
        Scheme::Oriented,
        Scheme::OrientedStrong,
        Scheme::Ordered,
        Scheme::OrderedStrong,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Unordered => "unordered",
            Scheme::UnorderedStrong => "unordered-strong",
            Scheme::Oriented => "oriented",
            Scheme::OrientedStrong => "oriented-strong",
            Scheme::Ordered => "ordered",
            Scheme::OrderedStrong => "ordered-strong",
        }
    }

    fn needs_order(self) -> bool {
        matches!(self, Scheme::Ordered | Scheme::OrderedStrong)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

/// Edge end names -> colour. Component edges are keyed `("v{i}", "w{i}")`,
/// connectors `("v{i}", "vinf")` and so on. Closed components of the
/// linkoid are keyed `("", "")`.
pub type Coloring = BTreeMap<(String, String), ColorToken>;

pub fn scheme_coloring(l: &Diagram, scheme: Scheme) -> Result<Coloring, ThetaError> {
    if scheme.needs_order() && l.ordering() == OrderingMode::Unlabeled {
        return Err(ThetaError::MissingOrdering(scheme));
    }
    let n = open_components(l).len();
    if n == 0 {
        return Err(ThetaError::NoOpenComponents);
    }
    use ColorToken::{Int, Pair};
    let mut c = Coloring::new();
    let mut put = |a: String, b: &str, t: ColorToken| {
        c.insert((a, b.to_string()), t);
    };
    for i in 1..=n {
        let ii = i as i64;
        let (v, w) = (format!("v{i}"), format!("w{i}"));
        let comp = if scheme.needs_order() { Int(ii) } else { Int(0) };
        put(v.clone(), &w, comp);
        let [vp, vm, wp, wm] = match scheme {
            Scheme::Unordered => [Int(1), Int(1), Int(1), Int(1)],
            Scheme::UnorderedStrong => [Int(1), Int(-1), Int(1), Int(-1)],
            Scheme::Oriented => [Int(1), Int(1), Int(2), Int(2)],
            Scheme::OrientedStrong => [Int(1), Int(-1), Int(2), Int(-2)],
            Scheme::Ordered => [Pair(ii, 1), Pair(ii, 1), Pair(ii, 2), Pair(ii, 2)],
            Scheme::OrderedStrong => [Pair(ii, 1), Pair(ii, -1), Pair(ii, 2), Pair(ii, -2)],
        };
        put(v.clone(), POS_POLE, vp);
        put(v, NEG_POLE, vm);
        put(w.clone(), POS_POLE, wp);
        put(w, NEG_POLE, wm);
    }
    put(String::new(), "", Int(0));
    Ok(c)
}

fn end_name(g: &Diagram, x: DartId) -> String {
    match g.kind(g.vertex_of(x)) {
        VertexKind::Graph { name } => name.clone(),
        _ => String::new(),
    }
}

fn edge_key(g: &Diagram, e: &GraphEdge) -> (String, String) {
    match e.ends {
        None => (String::new(), String::new()),
        Some((a, b)) => {
            let (x, y) = (end_name(g, a), end_name(g, b));
            let order = |s: &str| if s == POS_POLE || s == NEG_POLE { 1 } else { 0 };
            // component edges go v -> w, connectors vertex -> pole
            if (order(&x), x.starts_with('w')) <= (order(&y), y.starts_with('w')) {
                (x, y)
            } else {
                (y, x)
            }
        }
    }
}

/// Colours every edge of `g` found in `c`.
pub fn apply_coloring(g: &Diagram, c: &Coloring) -> Diagram {
    let mut out = g.clone();
    for e in graph_edges(g) {
        if let Some(t) = c.get(&edge_key(g, &e)) {
            for &x in &e.steps {
                out.set_edge_color(x, Some(t.clone()));
            }
        }
    }
    out
}

/// T_col of Θ(L) under each scheme; the graph and its replacement
/// enumeration are shared. Schemes needing labels are skipped on unlabeled
/// input.
pub fn t_col_schemes(
    l: &Diagram,
    routing: Routing,
) -> Result<BTreeMap<Scheme, TColResult>, ThetaError> {
    let g = build_theta_with(l, routing)?;
    let engine = TColEngine::new(&g)?;
    let mut out = BTreeMap::new();
    for s in Scheme::ALL {
        let c = match scheme_coloring(l, s) {
            Ok(c) => c,
            Err(ThetaError::MissingOrdering(_)) => continue,
            Err(e) => return Err(e),
        };
        let colors: Vec<Option<ColorToken>> =
            engine.edges().iter().map(|e| c.get(&edge_key(&g, e)).cloned()).collect();
        out.insert(s, engine.evaluate_with(&colors));
    }
    Ok(out)
}

/// Θ(L) coloured by `scheme`.
pub fn colored_theta(l: &Diagram, scheme: Scheme, routing: Routing) -> Result<Diagram, ThetaError> {
    let c = scheme_coloring(l, scheme)?;
    Ok(apply_coloring(&build_theta_with(l, routing)?, &c))
}

/// Vertex degrees of a spatial graph, ghost edges ignored, keyed by name.
pub fn degree_census(g: &Diagram) -> BTreeMap<String, usize> {
    g.alive_vertices()
        .filter_map(|v| match g.kind(v) {
            VertexKind::Graph { name } => {
                Some((name.clone(), g.rotation(v).iter().filter(|&&x| !g.is_ghost(x)).count()))
            }
            _ => None,
        })
        .collect()
}

/// Every 4-cycle `v_i vinf w_j vminf` must be an unknot (bracket test).
pub fn check_simple(g: &Diagram) -> Result<bool, ThetaError> {
    let edges = graph_edges(g);
    let mut by_ends: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        if let Some((a, b)) = e.ends {
            let (x, y) = (end_name(g, a), end_name(g, b));
            by_ends.entry((x.clone(), y.clone())).or_default().push(k);
            by_ends.entry((y, x)).or_default().push(k);
        }
    }
    let census = degree_census(g);
    let n = census.keys().filter(|k| k.starts_with('v') && k[1..].parse::<usize>().is_ok()).count();
    if n == 0 || !census.contains_key(POS_POLE) || !census.contains_key(NEG_POLE) {
        return Err(ThetaError::NotAThetaGraph("missing vertices".into()));
    }
    let find = |a: &str, b: &str| -> Result<usize, ThetaError> {
        match by_ends.get(&(a.to_string(), b.to_string())).map(|v| v.as_slice()) {
            Some([k]) => Ok(*k),
            _ => Err(ThetaError::NotAThetaGraph(format!("no single edge {a}-{b}"))),
        }
    };
    let delta = LaurentPoly::delta();
    for i in 1..=n {
        for j in 1..=n {
            let (v, w) = (format!("v{i}"), format!("w{j}"));
            let cycle = [
                find(&v, POS_POLE)?,
                find(POS_POLE, &w)?,
                find(&w, NEG_POLE)?,
                find(NEG_POLE, &v)?,
            ];
            let (pd, writhe) = cycle_link(g, &edges, &[cycle.to_vec()]);
            let b = normalize(&crate::bracket::contraction_bracket(&pd), writhe);
            if b != delta {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Diagram {
        Diagram::parse(s).unwrap()
    }

    #[test]
    fn trivial_knotoid_theta() {
        let g = build_theta(&d("surface S2\nT 1 1\nH 1 2\n")).unwrap();
        let census = degree_census(&g);
        assert_eq!(census.len(), 4);
        assert_eq!(census["v1"], 3);
        assert_eq!(census["w1"], 3);
        assert_eq!(census[POS_POLE], 2);
        assert_eq!(census[NEG_POLE], 2);
        assert_eq!(g.crossing_count(), 0);
        assert_eq!(graph_edges(&g).len(), 5);
        assert!(check_simple(&g).unwrap());
    }

    #[test]
    fn two_component_crossingless() {
        let l = d("surface S2\nT 1 1\nH 1 2\nT 2 3\nH 2 4\njoin 1 L 2 R\n");
        let g = build_theta(&l).unwrap();
        let census = degree_census(&g);
        assert_eq!(census.len(), 6);
        assert_eq!(census[POS_POLE], 4);
        assert_eq!(census[NEG_POLE], 4);
        assert!(check_simple(&g).unwrap());
    }

    #[test]
    fn kink_stays_on_component_edge() {
        let l = d("surface S2\nT 1 1\nX 1 3 2 2\nH 3 2\n");
        let g = build_theta(&l).unwrap();
        assert!(check_simple(&g).unwrap());
        for r in [Routing::default(), Routing::alternative()] {
            let g = build_theta_with(&l, r).unwrap();
            assert_eq!(degree_census(&g)[POS_POLE], 2);
        }
    }

    #[test]
    fn colour_tokens_parse() {
        assert_eq!("(1,-2)".parse::<ColorToken>().unwrap(), ColorToken::Pair(1, -2));
        assert_eq!("-1".parse::<ColorToken>().unwrap(), ColorToken::Int(-1));
        assert!("x".parse::<ColorToken>().is_err());
    }

    #[test]
    fn ordered_scheme_needs_labels() {
        let l = d("surface S2\nT 1\nH 1\n");
        assert!(matches!(scheme_coloring(&l, Scheme::Ordered), Err(ThetaError::MissingOrdering(_))));
        assert!(scheme_coloring(&l, Scheme::Oriented).is_ok());
    }
}
