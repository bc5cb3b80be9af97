//! Reduction of multi-linkoid diagrams in the Kauffman bracket skein module
//! of the sphere or the plane.
//!
//! A basis element is a crossingless diagram without trivial circles,
//! recorded as an enclosure forest: every circle lists what it encloses,
//! seen from the outer face on the plane. On the sphere there is no outside,
//! so the forest is read from every region and the smallest encoding wins.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::bracket::{
    normalize, BracketError, CrossinglessDiagram, RegionModel, UnionFind, MAX_STATE_SUM_CROSSINGS,
};
use crate::diagram::{Diagram, Surface};
use crate::laurent::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ForestNode {
    Arc(u32, u32),
    Circle(Vec<ForestNode>),
}

impl ForestNode {
    fn key(&self) -> String {
        match self {
            ForestNode::Arc(i, j) => format!("arc{{{i},{j}}}"),
            ForestNode::Circle(ch) => format!("O({})", join_items(ch)),
        }
    }

    fn circles(&self) -> usize {
        match self {
            ForestNode::Arc(..) => 0,
            ForestNode::Circle(ch) => 1 + ch.iter().map(|c| c.circles()).sum::<usize>(),
        }
    }

    fn arcs(&self, out: &mut Vec<(u32, u32)>) {
        match self {
            ForestNode::Arc(i, j) => out.push((*i, *j)),
            ForestNode::Circle(ch) => ch.iter().for_each(|c| c.arcs(out)),
        }
    }
}

fn join_items(items: &[ForestNode]) -> String {
    items.iter().map(|n| n.key()).collect::<Vec<_>>().join(" ")
}

/// Canonical crossingless diagram without trivial circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub roots: Vec<ForestNode>,
    key: String,
}

impl BasisElement {
    fn new(mut roots: Vec<ForestNode>) -> Self {
        sort_forest(&mut roots);
        let key = if roots.is_empty() { "empty".to_string() } else { join_items(&roots) };
        BasisElement { roots, key }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn circle_count(&self) -> usize {
        self.roots.iter().map(|r| r.circles()).sum()
    }

    pub fn arcs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        self.roots.iter().for_each(|r| r.arcs(&mut out));
        out.sort();
        out
    }
}

fn sort_forest(items: &mut [ForestNode]) {
    for n in items.iter_mut() {
        if let ForestNode::Circle(ch) = n {
            sort_forest(ch);
        }
    }
    items.sort_by_cached_key(|n| n.key());
}

impl Ord for BasisElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for BasisElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

/// Finite combination of basis elements with Laurent coefficients in `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkeinExpression {
    pub terms: BTreeMap<BasisElement, LaurentPoly>,
}

impl SkeinExpression {
    pub fn add_term(&mut self, e: BasisElement, c: LaurentPoly) {
        let slot = self.terms.entry(e.clone()).or_insert_with(LaurentPoly::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> SkeinExpression {
        let mut out = SkeinExpression::default();
        for (e, p) in &self.terms {
            out.add_term(e.clone(), c * p);
        }
        out
    }

    pub fn mirror(&self) -> SkeinExpression {
        SkeinExpression { terms: self.terms.iter().map(|(e, p)| (e.clone(), p.mirror())).collect() }
    }
}

impl fmt::Display for SkeinExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (e, p) in &self.terms {
            writeln!(f, "({p}) ; {e}")?;
        }
        Ok(())
    }
}

/// Removes trivial circles and encodes what remains.
///
/// On the plane a circle is kept when the side away from the outer face
/// holds an arc; on the sphere when both sides do. Returns the basis element
/// and the number of circles removed.
pub fn canonicalize_crossingless(c: &CrossinglessDiagram, surface: Surface) -> (BasisElement, usize) {
    let n = c.regions;
    let mut arcs_in = vec![Vec::new(); n];
    for (k, &r) in c.arc_region.iter().enumerate() {
        arcs_in[r].push(c.arcs[k]);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in c.circles.iter().enumerate() {
        debug_assert_ne!(a, b, "circle with one region on both sides");
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let root = match surface {
        Surface::R2 => c.outer.unwrap_or(0),
        Surface::S2 => 0,
    };
    // parent edge of every region in the tree rooted at `root`
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &(w, k) in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                via[w] = k;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut sub = vec![0usize; n];
    for &v in order.iter().rev() {
        sub[v] += arcs_in[v].len();
        if v != root {
            let p = parent[v];
            sub[p] += sub[v];
        }
    }
    let total = sub[root];
    let mut keep = vec![false; c.circles.len()];
    for &v in &order[1..] {
        let inside = sub[v];
        keep[via[v]] = match surface {
            Surface::R2 => inside > 0,
            Surface::S2 => inside > 0 && total - inside > 0,
        };
    }
    let removed = keep.iter().filter(|&&k| !k).count();
    let mut uf = UnionFind::new(n);
    for (k, &(a, b)) in c.circles.iter().enumerate() {
        if !keep[k] {
            uf.union(a, b);
        }
    }
    let mut merged_arcs: HashMap<usize, Vec<(u32, u32)>> = HashMap::new();
    for (v, arcs) in arcs_in.iter().enumerate() {
        let r = uf.find(v);
        merged_arcs.entry(r).or_default().extend(arcs.iter().copied());
    }
    let mut madj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in c.circles.iter().enumerate() {
        if keep[k] {
            let (ra, rb) = (uf.find(a), uf.find(b));
            madj.entry(ra).or_default().push(rb);
            madj.entry(rb).or_default().push(ra);
        }
    }
    fn build(
        v: usize,
        from: usize,
        arcs: &HashMap<usize, Vec<(u32, u32)>>,
        adj: &HashMap<usize, Vec<usize>>,
    ) -> Vec<ForestNode> {
        let mut items: Vec<ForestNode> =
            arcs.get(&v).into_iter().flatten().map(|&(i, j)| ForestNode::Arc(i, j)).collect();
        for &w in adj.get(&v).into_iter().flatten() {
            if w != from {
                items.push(ForestNode::Circle(build(w, v, arcs, adj)));
            }
        }
        items
    }
    let element = match surface {
        Surface::R2 => {
            let r = uf.find(root);
            BasisElement::new(build(r, usize::MAX, &merged_arcs, &madj))
        }
        Surface::S2 => {
            let mut reps: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
            reps.sort_unstable();
            reps.dedup();
            reps.into_iter()
                .map(|r| BasisElement::new(build(r, usize::MAX, &merged_arcs, &madj)))
                .min()
                .unwrap()
        }
    };
    (element, removed)
}

/// Expresses the diagram in the skein module of its own surface.
pub fn reduce_to_skein(d: &Diagram) -> Result<SkeinExpression, BracketError> {
    reduce_on(d, d.surface())
}

/// Reduction on the sphere; a plane diagram forgets its outer face.
pub fn reduce_on_sphere(d: &Diagram) -> Result<SkeinExpression, BracketError> {
    reduce_on(&d.to_sphere(), Surface::S2)
}

fn reduce_on(d: &Diagram, surface: Surface) -> Result<SkeinExpression, BracketError> {
    let model = RegionModel::new(d)?;
    let c = model.crossing_count();
    if c > MAX_STATE_SUM_CROSSINGS {
        return Err(BracketError::Capacity { crossings: c, limit: MAX_STATE_SUM_CROSSINGS });
    }
    let total: u64 = 1 << c;
    let chunk: u64 = 1 << 10;
    type Acc = HashMap<(String, i32, usize), (BasisElement, u64)>;
    let acc: Acc = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|ch| {
            let mut local: Acc = HashMap::new();
            for s in ch * chunk..((ch + 1) * chunk).min(total) {
                let cd = model.resolve(s);
                let (e, removed) = canonicalize_crossingless(&cd, surface);
                local
                    .entry((e.key.clone(), cd.a_exp, removed))
                    .or_insert_with(|| (e, 0))
                    .1 += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, (e, n)) in b {
                a.entry(k).or_insert_with(|| (e, 0)).1 += n;
            }
            a
        });
    let mut entries: Vec<_> = acc.into_iter().collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let delta = LaurentPoly::delta();
    let mut out = SkeinExpression::default();
    for ((_, a, removed), (e, n)) in entries {
        out.add_term(e, LaurentPoly::a_term(n as i64, a) * delta.pow(removed as u32));
    }
    Ok(out)
}

pub fn normalized_skein(d: &Diagram) -> Result<SkeinExpression, BracketError> {
    Ok(reduce_to_skein(d)?.scale(&normalize(&LaurentPoly::one(), d.writhe())))
}

pub fn normalized_skein_on_sphere(d: &Diagram) -> Result<SkeinExpression, BracketError> {
    Ok(reduce_on_sphere(d)?.scale(&normalize(&LaurentPoly::one(), d.writhe())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcWeights {
    Plain,
    Ordered,
}

/// Evaluates circles to `δ` and arcs to `l` (or `l{i}{j}`).
pub fn specialize(e: &SkeinExpression, mode: ArcWeights) -> LaurentPoly {
    let delta = LaurentPoly::delta();
    let mut out = LaurentPoly::zero();
    for (b, p) in &e.terms {
        let arcs = b.arcs();
        let w = match mode {
            ArcWeights::Plain => LaurentPoly::lambda().pow(arcs.len() as u32),
            ArcWeights::Ordered => arcs
                .iter()
                .fold(LaurentPoly::one(), |acc, &(i, j)| acc * LaurentPoly::lambda_pair(i, j)),
        };
        out += p.clone() * delta.pow(b.circle_count() as u32) * w;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Diagram {
        Diagram::parse(s).unwrap()
    }

    #[test]
    fn kink_reduces_to_one_arc() {
        let k = d("surface S2\nT 1 1\nX 1 3 2 2\nH 3 2\n");
        let e = reduce_to_skein(&k).unwrap();
        assert_eq!(e.to_string(), "(-A^3) ; arc{1,2}\n");
    }

    #[test]
    fn circle_around_tail_on_the_plane() {
        // one arc with a circle around it: kept on the plane when the arc is
        // inside, removed on the sphere
        let k = d("surface R2\nT 1 1\nH 1 2\nO 2\njoin 1 L 2 L\nouter 2 R\n");
        let e = reduce_to_skein(&k).unwrap();
        let s = reduce_on_sphere(&k).unwrap();
        assert_eq!(s.to_string(), "(-A^2-A^-2) ; arc{1,2}\n");
        assert_eq!(e.to_string(), "(1) ; O(arc{1,2})\n");
    }

    #[test]
    fn unknot_reduces_to_delta() {
        let e = reduce_to_skein(&d("surface S2\nO 1\n")).unwrap();
        assert_eq!(e.to_string(), "(-A^2-A^-2) ; empty\n");
    }
}
