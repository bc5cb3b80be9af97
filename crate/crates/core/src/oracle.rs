//! Independent reference bracket: recursive skein expansion over an
//! edge-labelled planar diagram code. Shares no tracing or smoothing code
//! with the state-sum engine; used only to cross-check it.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::diagram::{DartId, Diagram, OrderingMode, VertexKind};
use crate::laurent::LaurentPoly;

pub const MAX_ORACLE_CROSSINGS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} crossings exceed the oracle limit of {MAX_ORACLE_CROSSINGS}")]
    Capacity(usize),
    #[error("the ordered oracle needs endpoint labels")]
    MissingOrdering,
    #[error("spatial graphs are not supported by the oracle")]
    Spatial,
}

/// Edge-labelled code: four edge ids per crossing (ccw, under on 0 and 2),
/// the edge at each endpoint label, and crossingless circles.
#[derive(Clone, Debug)]
struct EdgeCode {
    crossings: Vec<[usize; 4]>,
    ends: Vec<(u32, usize)>,
    loops: u32,
}

fn edge_code(d: &Diagram) -> EdgeCode {
    let mut edge_of: HashMap<DartId, usize> = HashMap::new();
    let mut next = 0;
    let stop = |x: DartId| {
        matches!(d.kind(d.vertex_of(x)), VertexKind::Crossing | VertexKind::Endpoint { .. })
    };
    let mut starts: Vec<DartId> = Vec::new();
    for v in d.alive_vertices() {
        if matches!(d.kind(v), VertexKind::Crossing | VertexKind::Endpoint { .. }) {
            for &x in d.rotation(v) {
                if !d.is_ghost(x) {
                    starts.push(x);
                }
            }
        }
    }
    for x in starts {
        if edge_of.contains_key(&x) {
            continue;
        }
        let mut y = d.theta(x);
        while !stop(y) {
            // bead: leave through its other strand dart
            let v = d.vertex_of(y);
            let out = d
                .rotation(v)
                .iter()
                .copied()
                .find(|&z| z != y && !d.is_ghost(z))
                .expect("bead with two strand darts");
            y = d.theta(out);
        }
        edge_of.insert(x, next);
        edge_of.insert(y, next);
        next += 1;
    }
    let mut crossings = Vec::new();
    let mut ends = Vec::new();
    for v in d.alive_vertices() {
        match d.kind(v) {
            VertexKind::Crossing => {
                let r = d.rotation(v);
                crossings.push([edge_of[&r[0]], edge_of[&r[1]], edge_of[&r[2]], edge_of[&r[3]]]);
            }
            VertexKind::Endpoint { label, .. } => ends.push((*label, edge_of[&d.rotation(v)[0]])),
            _ => {}
        }
    }
    // crossingless circles: bead cycles never reached above
    let mut loops = 0;
    let mut seen: std::collections::HashSet<DartId> = std::collections::HashSet::new();
    for v in d.alive_vertices() {
        if *d.kind(v) != VertexKind::Bead {
            continue;
        }
        for &x in d.rotation(v) {
            if d.is_ghost(x) || seen.contains(&x) || edge_of.contains_key(&d.theta(x)) {
                continue;
            }
            let mut cur = x;
            let mut closed = true;
            loop {
                seen.insert(cur);
                let y = d.theta(cur);
                seen.insert(y);
                if stop(y) {
                    closed = false;
                    break;
                }
                let w = d.vertex_of(y);
                cur = d
                    .rotation(w)
                    .iter()
                    .copied()
                    .find(|&z| z != y && !d.is_ghost(z))
                    .unwrap();
                if seen.contains(&cur) {
                    break;
                }
            }
            if closed {
                loops += 1;
            }
        }
    }
    ends.sort();
    EdgeCode { crossings, ends, loops }
}

type Tally = BTreeMap<(i32, u32, Vec<(u32, u32)>), u64>;

fn expand(code: &EdgeCode, a: i32, circles: u32, tally: &mut Tally) {
    let Some((&last, rest)) = code.crossings.split_last() else {
        let mut by_edge: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &(label, e) in &code.ends {
            by_edge.entry(e).or_default().push(label);
        }
        let mut arcs: Vec<(u32, u32)> = by_edge
            .values()
            .map(|ls| {
                assert_eq!(ls.len(), 2, "dangling edge");
                (ls[0].min(ls[1]), ls[0].max(ls[1]))
            })
            .collect();
        arcs.sort();
        *tally.entry((a, circles, arcs)).or_insert(0) += 1;
        return;
    };
    let [e0, e1, e2, e3] = last;
    for (joins, da) in [([(e0, e1), (e2, e3)], 1), ([(e1, e2), (e3, e0)], -1)] {
        let mut next = EdgeCode { crossings: rest.to_vec(), ends: code.ends.clone(), loops: 0 };
        let mut closed = 0;
        // apply joins one at a time; a join of an edge with itself closes a loop
        let mut pending = joins.to_vec();
        while let Some((x, y)) = pending.pop() {
            if x == y {
                closed += 1;
                continue;
            }
            let sub = |e: &mut usize| {
                if *e == y {
                    *e = x;
                }
            };
            for c in next.crossings.iter_mut() {
                c.iter_mut().for_each(sub);
            }
            for (_, e) in next.ends.iter_mut() {
                sub(e);
            }
            for p in pending.iter_mut() {
                sub(&mut p.0);
                sub(&mut p.1);
            }
        }
        expand(&next, a + da, circles + closed, tally);
    }
}

fn tally(d: &Diagram) -> Result<(Tally, u32), OracleError> {
    if d.is_spatial() {
        return Err(OracleError::Spatial);
    }
    let code = edge_code(d);
    if code.crossings.len() > MAX_ORACLE_CROSSINGS {
        return Err(OracleError::Capacity(code.crossings.len()));
    }
    let mut t = Tally::new();
    expand(&code, 0, 0, &mut t);
    Ok((t, code.loops))
}

fn total(t: &Tally, loops: u32, weight: impl Fn(&[(u32, u32)]) -> LaurentPoly) -> LaurentPoly {
    let delta = LaurentPoly::delta();
    let mut out = LaurentPoly::zero();
    for ((a, c, arcs), &n) in t {
        out += LaurentPoly::a_term(n as i64, *a) * delta.pow(c + loops) * weight(arcs);
    }
    out
}

pub fn oracle_bracket(d: &Diagram) -> Result<LaurentPoly, OracleError> {
    let (t, loops) = tally(d)?;
    Ok(total(&t, loops, |arcs| LaurentPoly::lambda().pow(arcs.len() as u32)))
}

pub fn oracle_ordered_bracket(d: &Diagram) -> Result<LaurentPoly, OracleError> {
    if d.ordering() == OrderingMode::Unlabeled {
        return Err(OracleError::MissingOrdering);
    }
    let (t, loops) = tally(d)?;
    Ok(total(&t, loops, |arcs| {
        let mut p = LaurentPoly::one();
        for &(i, j) in arcs {
            p = p * LaurentPoly::lambda_pair(i, j);
        }
        p
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let k = Diagram::parse("surface S2\nT 1 1\nX 1 3 2 2\nH 3 2\n").unwrap();
        assert_eq!(oracle_bracket(&k).unwrap().to_string(), "-A^3*l");
        let u = Diagram::parse("surface S2\nO 1\n").unwrap();
        assert_eq!(oracle_bracket(&u).unwrap(), LaurentPoly::delta());
        let t = Diagram::parse("surface S2\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n").unwrap();
        let want: LaurentPoly = "-A^5-A^-3+A^-7".parse().unwrap();
        assert_eq!(oracle_bracket(&t).unwrap(), LaurentPoly::delta() * want);
    }
}
