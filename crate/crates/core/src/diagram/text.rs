//! Planar-diagram text format.
//!
//! ```text
//! surface S2            # or R2
//! order vertex          # any bijection of endpoint labels
//! T 1 1                 # tail of segment 1, label 1 (label optional)
//! X 1 4 2 5             # ccw from the incoming under segment
//! H 5 2                 # head of segment 5, label 2
//! O 7                   # crossingless closed loop
//! V v1 3 8 9            # spatial-graph vertex with ccw segments
//! color 8 (1,2)         # edge colour
//! join 7 L 2 R          # ghost edge tying separate pieces together
//! outer 2 L             # unbounded face, left of segment 2
//! ```
//! `;` separates directives like a newline.

use std::collections::{BTreeMap, HashMap};

use super::*;

fn syntax(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Syntax { line, msg: msg.into() }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    L,
    R,
}

enum Attach {
    Seg(u64, Side),
    End(u32),
    Inf,
}

struct Join {
    line: usize,
    a: Attach,
    b: Attach,
}

fn parse_label(tok: &str, line: usize) -> Result<u64, DiagramError> {
    tok.parse::<u64>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| syntax(line, format!("bad segment label `{tok}`")))
}

fn parse_side(tok: Option<&str>, line: usize) -> Result<Side, DiagramError> {
    match tok {
        Some("L") | Some("l") => Ok(Side::L),
        Some("R") | Some("r") => Ok(Side::R),
        other => Err(syntax(line, format!("expected L or R, found {other:?}"))),
    }
}

/// Which over segment is incoming when nothing else decides it.
fn guess_b_incoming(lb: u64, ld: u64) -> bool {
    if lb == ld || ld == lb + 1 {
        true
    } else if lb == ld + 1 {
        false
    } else {
        lb > ld
    }
}

fn parse_attach<'a>(
    toks: &mut impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<Attach, DiagramError> {
    match toks.next() {
        Some("inf") => Ok(Attach::Inf),
        Some("e") => {
            let k = toks
                .next()
                .and_then(|t| t.parse::<u32>().ok())
                .ok_or_else(|| syntax(line, "expected endpoint label after `e`"))?;
            Ok(Attach::End(k))
        }
        Some(t) => {
            let s = parse_label(t, line)?;
            Ok(Attach::Seg(s, parse_side(toks.next(), line)?))
        }
        None => Err(syntax(line, "missing attachment")),
    }
}

pub(super) fn parse(text: &str) -> Result<Diagram, DiagramError> {
    let mut surface: Option<Surface> = None;
    let mut vertex_order = false;
    let mut d = Diagram::empty(Surface::S2, OrderingMode::Ordered);
    // segment label -> (dart, line)
    let mut occ: BTreeMap<u64, Vec<(DartId, usize)>> = BTreeMap::new();
    let mut fixed: HashMap<DartId, bool> = HashMap::new();
    // (b dart, d dart, segment labels, forced sign)
    let mut couples: Vec<(DartId, DartId, u64, u64, Option<i32>, VertexId)> = Vec::new();
    let mut free: Vec<DartId> = Vec::new();
    let mut ends: Vec<(VertexId, Option<u32>, usize)> = Vec::new();
    let mut colors: Vec<(u64, ColorToken, usize)> = Vec::new();
    let mut joins: Vec<Join> = Vec::new();
    let mut spatial = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let mut toks = stmt.split_whitespace();
            let Some(head) = toks.next() else { continue };
            match head {
                "surface" => {
                    surface = Some(match toks.next() {
                        Some("S2") => Surface::S2,
                        Some("R2") => Surface::R2,
                        other => return Err(syntax(line, format!("unknown surface {other:?}"))),
                    });
                }
                "order" => match toks.next() {
                    Some("vertex") => vertex_order = true,
                    Some("component") => vertex_order = false,
                    other => return Err(syntax(line, format!("unknown ordering {other:?}"))),
                },
                "X" => {
                    let mut labs = Vec::new();
                    for _ in 0..4 {
                        let t = toks.next().ok_or_else(|| syntax(line, "X needs four segments"))?;
                        labs.push(parse_label(t, line)?);
                    }
                    let sign = match toks.next() {
                        None => None,
                        Some("+") => Some(1),
                        Some("-") => Some(-1),
                        Some(t) => return Err(syntax(line, format!("unexpected `{t}`"))),
                    };
                    let v = d.add_vertex(VertexKind::Crossing);
                    let ds: Vec<DartId> = (0..4).map(|_| d.add_dart(v)).collect();
                    for (i, &s) in labs.iter().enumerate() {
                        occ.entry(s).or_default().push((ds[i], line));
                    }
                    fixed.insert(ds[0], false);
                    fixed.insert(ds[2], true);
                    couples.push((ds[1], ds[3], labs[1], labs[3], sign, v));
                }
                "T" | "H" => {
                    let s = parse_label(
                        toks.next().ok_or_else(|| syntax(line, "missing segment"))?,
                        line,
                    )?;
                    let label = match toks.next() {
                        Some(t) => Some(
                            t.parse::<u32>()
                                .ok()
                                .filter(|&k| k > 0)
                                .ok_or_else(|| syntax(line, format!("bad endpoint label `{t}`")))?,
                        ),
                        None => None,
                    };
                    let role = if head == "T" { EndRole::Tail } else { EndRole::Head };
                    let v = d.add_vertex(VertexKind::Endpoint { role, label: 0 });
                    let x = d.add_dart(v);
                    occ.entry(s).or_default().push((x, line));
                    fixed.insert(x, role == EndRole::Tail);
                    ends.push((v, label, line));
                }
                "O" => {
                    let s = parse_label(
                        toks.next().ok_or_else(|| syntax(line, "missing segment"))?,
                        line,
                    )?;
                    let v = d.add_vertex(VertexKind::Bead);
                    let a = d.add_dart(v);
                    let b = d.add_dart(v);
                    occ.entry(s).or_default().push((a, line));
                    occ.entry(s).or_default().push((b, line));
                    fixed.insert(a, true);
                    fixed.insert(b, false);
                }
                "V" => {
                    spatial = true;
                    let name = toks.next().ok_or_else(|| syntax(line, "V needs a name"))?;
                    let v = d.add_vertex(VertexKind::Graph { name: name.to_string() });
                    let mut any = false;
                    for t in toks.by_ref() {
                        let s = parse_label(t, line)?;
                        let x = d.add_dart(v);
                        occ.entry(s).or_default().push((x, line));
                        free.push(x);
                        any = true;
                    }
                    if !any {
                        return Err(syntax(line, "V needs at least one segment"));
                    }
                }
                "color" => {
                    let s = parse_label(
                        toks.next().ok_or_else(|| syntax(line, "missing segment"))?,
                        line,
                    )?;
                    let rest: String = toks.by_ref().collect::<Vec<_>>().join("");
                    let c: ColorToken =
                        rest.parse().map_err(|_| syntax(line, format!("bad colour `{rest}`")))?;
                    colors.push((s, c, line));
                }
                "join" => {
                    let a = parse_attach(&mut toks, line)?;
                    let b = parse_attach(&mut toks, line)?;
                    joins.push(Join { line, a, b });
                }
                "outer" => {
                    let s = parse_label(
                        toks.next().ok_or_else(|| syntax(line, "missing segment"))?,
                        line,
                    )?;
                    let side = parse_side(toks.next(), line)?;
                    joins.push(Join { line, a: Attach::Seg(s, side), b: Attach::Inf });
                }
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            }
            if let Some(t) = toks.next() {
                return Err(syntax(line, format!("unexpected `{t}`")));
            }
        }
    }
    if d.verts.is_empty() {
        return Err(syntax(1, "empty diagram"));
    }
    d.surface = surface.unwrap_or(Surface::S2);
    d.spatial = spatial;

    // pair darts of each segment
    let mut seg_darts: BTreeMap<u64, (DartId, DartId)> = BTreeMap::new();
    for (&s, list) in &occ {
        if list.len() != 2 {
            return Err(syntax(
                list[0].1,
                format!("segment {s} appears {} times, expected 2", list.len()),
            ));
        }
        seg_darts.insert(s, (list[0].0, list[1].0));
        d.darts[list[0].0].partner = list[1].0;
        d.darts[list[1].0].partner = list[0].0;
    }
    let seg_line = |s: u64| occ[&s][0].1;

    // orientation: propagate hard constraints, then break ties
    let mut dart_seg: HashMap<DartId, u64> = HashMap::new();
    for (&s, &(a, b)) in &seg_darts {
        dart_seg.insert(a, s);
        dart_seg.insert(b, s);
    }
    let mut known: HashMap<DartId, bool> = HashMap::new();
    let mut queue: Vec<(DartId, bool)> = fixed.iter().map(|(&k, &v)| (k, v)).collect();
    queue.sort();
    let mut pending_couples = couples.clone();
    loop {
        while let Some((x, st)) = queue.pop() {
            if let Some(&prev) = known.get(&x) {
                if prev != st {
                    return Err(syntax(
                        seg_line(dart_seg[&x]),
                        format!("segment {} has inconsistent orientation", dart_seg[&x]),
                    ));
                }
                continue;
            }
            known.insert(x, st);
            queue.push((d.darts[x].partner, !st));
            for &(b, dd, ..) in &couples {
                if b == x {
                    queue.push((dd, !st));
                } else if dd == x {
                    queue.push((b, !st));
                }
            }
        }
        pending_couples.retain(|c| !known.contains_key(&c.0));
        if let Some(&(b, _, lb, ld, sign, _)) = pending_couples.first() {
            // the incoming under dart sits at position 0, so a positive
            // crossing has its incoming over dart at position 3
            let b_in = match sign {
                Some(s) => s < 0,
                None => guess_b_incoming(lb, ld),
            };
            queue.push((b, !b_in));
            continue;
        }
        if let Some(&x) = free.iter().find(|x| !known.contains_key(x)) {
            queue.push((x, true));
            continue;
        }
        break;
    }
    for &(a, b) in seg_darts.values() {
        let st = known[&a];
        d.link(a, b, st, false, None);
    }
    // explicit signs flip the over strand when needed
    for &(_, _, _, _, sign, v) in &couples {
        if let Some(want) = sign {
            if d.crossing_sign(v) != want {
                return Err(syntax(
                    1,
                    "crossing sign suffix contradicts the strand orientation".to_string(),
                ));
            }
        }
    }

    // endpoint labels
    let labelled = ends.iter().filter(|e| e.1.is_some()).count();
    if labelled != 0 && labelled != ends.len() {
        let line = ends.iter().find(|e| e.1.is_none()).map(|e| e.2).unwrap_or(1);
        return Err(syntax(line, "either all endpoints carry labels or none does"));
    }
    if labelled == 0 && !ends.is_empty() {
        d.ordering = OrderingMode::Unlabeled;
        let mut next = 1;
        for &(v, _, _) in &ends {
            if let VertexKind::Endpoint { role: EndRole::Tail, .. } = d.verts[v].kind {
                let (_, stop) = d.trace_from(d.verts[v].darts[0]);
                d.verts[v].kind = VertexKind::Endpoint { role: EndRole::Tail, label: next };
                if let Some(y) = stop {
                    let w = d.vertex_of(y);
                    if let VertexKind::Endpoint { role: EndRole::Head, .. } = d.verts[w].kind {
                        d.verts[w].kind =
                            VertexKind::Endpoint { role: EndRole::Head, label: next + 1 };
                    }
                }
                next += 2;
            }
        }
    } else {
        d.ordering = if vertex_order { OrderingMode::VertexOrdered } else { OrderingMode::Ordered };
        for &(v, label, _) in &ends {
            if let VertexKind::Endpoint { role, .. } = d.verts[v].kind {
                d.verts[v].kind = VertexKind::Endpoint { role, label: label.unwrap() };
            }
        }
    }

    for (s, c, line) in colors {
        let Some(&(a, _)) = seg_darts.get(&s) else {
            return Err(syntax(line, format!("unknown segment {s}")));
        };
        d.set_strand_color(a, Some(c));
    }

    // start dart of every segment, used to anchor ghost edges
    let seg_start: BTreeMap<u64, DartId> = seg_darts
        .iter()
        .map(|(&s, &(a, b))| (s, if d.darts[a].start { a } else { b }))
        .collect();
    for j in joins {
        apply_join(&mut d, &seg_start, &j)?;
    }

    d.cleanup_beads();
    let v = d.validate();
    if !v.is_empty() {
        return Err(DiagramError::Validation(v));
    }
    Ok(d)
}

fn component_of(d: &Diagram) -> Vec<usize> {
    let mut comp = vec![usize::MAX; d.verts.len()];
    let mut c = 0;
    for v in d.alive_vertices().collect::<Vec<_>>() {
        if comp[v] != usize::MAX {
            continue;
        }
        let mut stack = vec![v];
        comp[v] = c;
        while let Some(x) = stack.pop() {
            for &e in &d.verts[x].darts {
                let w = d.vertex_of(d.theta(e));
                if comp[w] == usize::MAX {
                    comp[w] = c;
                    stack.push(w);
                }
            }
        }
        c += 1;
    }
    comp
}

/// Resolved attachment: vertex, face of its corner, and how to add the dart.
enum Anchor {
    Seg(DartId, Side),
    End(VertexId),
    Inf,
}

fn apply_join(
    d: &mut Diagram,
    seg_start: &BTreeMap<u64, DartId>,
    j: &Join,
) -> Result<(), DiagramError> {
    let faces = d.faces();
    let comp = component_of(d);
    let resolve = |a: &Attach| -> Result<(Anchor, Option<(usize, usize)>), DiagramError> {
        match *a {
            Attach::Seg(s, side) => {
                let &x = seg_start
                    .get(&s)
                    .ok_or_else(|| syntax(j.line, format!("unknown segment {s}")))?;
                let f = if side == Side::L { faces.of[d.theta(x)] } else { faces.of[x] };
                Ok((Anchor::Seg(x, side), Some((comp[d.vertex_of(x)], f))))
            }
            Attach::End(k) => {
                let v = d
                    .endpoints()
                    .get(&k)
                    .copied()
                    .ok_or_else(|| syntax(j.line, format!("unknown endpoint {k}")))?;
                let f = faces.of[d.verts[v].darts[0]];
                Ok((Anchor::End(v), Some((comp[v], f))))
            }
            Attach::Inf => {
                if d.infinity().is_some() {
                    return Err(syntax(j.line, "only one outer face may be given"));
                }
                Ok((Anchor::Inf, None))
            }
        }
    };
    let (a, pa) = resolve(&j.a)?;
    let (b, pb) = resolve(&j.b)?;
    if let (Some((ca, fa)), Some((cb, fb))) = (pa, pb) {
        if ca == cb && fa != fb {
            return Err(syntax(j.line, "join would cross the diagram"));
        }
    }
    if matches!((&a, &b), (Anchor::Inf, Anchor::Inf)) {
        return Err(syntax(j.line, "cannot join infinity to itself"));
    }
    let ga = place(d, a);
    let gb = place(d, b);
    d.link(ga, gb, true, true, None);
    Ok(())
}

fn place(d: &mut Diagram, a: Anchor) -> DartId {
    match a {
        Anchor::Seg(x, side) => {
            let (bead, near, far) = d.insert_bead(x);
            let g = d.new_dart();
            let rot = if side == Side::L { vec![far, g, near] } else { vec![near, g, far] };
            d.set_rotation(bead, rot);
            g
        }
        Anchor::End(v) => d.add_dart(v),
        Anchor::Inf => {
            let inf = d.add_vertex(VertexKind::Infinity);
            d.add_dart(inf)
        }
    }
}

// ---- serialization --------------------------------------------------------

struct Segments {
    /// segment number for every strand dart on it
    of: HashMap<DartId, u64>,
    /// first dart (a start dart) of each segment
    first: Vec<DartId>,
    crossing_order: Vec<VertexId>,
}

impl Segments {
    fn new() -> Self {
        Segments { of: HashMap::new(), first: Vec::new(), crossing_order: Vec::new() }
    }
}

/// Walks one segment from start dart `x` through beads; returns the dart
/// where it stops.
fn walk_segment(d: &Diagram, x: DartId, segs: &mut Segments) -> DartId {
    let n = segs.first.len() as u64 + 1;
    segs.first.push(x);
    let mut cur = x;
    loop {
        segs.of.insert(cur, n);
        let y = d.theta(cur);
        segs.of.insert(y, n);
        let v = d.vertex_of(y);
        if d.verts[v].kind == VertexKind::Bead {
            let next = d.straight(y).unwrap();
            if next == x {
                return y;
            }
            cur = next;
        } else {
            return y;
        }
    }
}

/// Numbers segments along a strand starting at start dart `x` until it
/// reaches a non-crossing vertex or closes up.
fn walk_strand(d: &Diagram, x: DartId, segs: &mut Segments, seen: &mut [bool]) {
    let mut cur = x;
    loop {
        if segs.of.contains_key(&cur) {
            return;
        }
        let y = walk_segment(d, cur, segs);
        let v = d.vertex_of(y);
        if d.verts[v].kind != VertexKind::Crossing {
            return;
        }
        if !seen[v] {
            seen[v] = true;
            segs.crossing_order.push(v);
        }
        cur = d.straight(y).unwrap();
    }
}

fn number_segments(d: &Diagram) -> Segments {
    let mut segs = Segments::new();
    let mut seen = vec![false; d.verts.len()];
    for &v in d.endpoints().values() {
        if let VertexKind::Endpoint { role: EndRole::Tail, .. } = d.verts[v].kind {
            walk_strand(d, d.verts[v].darts[0], &mut segs, &mut seen);
        }
    }
    let mut graph: Vec<(String, VertexId)> = d
        .alive_vertices()
        .filter_map(|v| match &d.verts[v].kind {
            VertexKind::Graph { name } => Some((name.clone(), v)),
            _ => None,
        })
        .collect();
    graph.sort();
    for (_, v) in graph {
        for &x in &d.verts[v].darts.clone() {
            if !d.darts[x].ghost && d.darts[x].start {
                walk_strand(d, x, &mut segs, &mut seen);
            }
        }
    }
    // closed components through crossings, in order of first visit
    let mut i = 0;
    loop {
        while i < segs.crossing_order.len() {
            let v = segs.crossing_order[i];
            for &x in &d.verts[v].darts.clone() {
                if d.darts[x].start && !segs.of.contains_key(&x) {
                    walk_strand(d, x, &mut segs, &mut seen);
                }
            }
            i += 1;
        }
        let next = d
            .crossings()
            .into_iter()
            .find(|&v| !seen[v]);
        match next {
            Some(v) => {
                seen[v] = true;
                segs.crossing_order.push(v);
            }
            None => break,
        }
    }
    // crossingless loops
    for v in d.alive_vertices().collect::<Vec<_>>() {
        if d.verts[v].kind != VertexKind::Bead {
            continue;
        }
        for &x in &d.verts[v].darts.clone() {
            if !d.darts[x].ghost && d.darts[x].start && !segs.of.contains_key(&x) {
                walk_segment(d, x, &mut segs);
            }
        }
    }
    segs
}

fn end_line(d: &Diagram, v: VertexId, segs: &Segments) -> String {
    let VertexKind::Endpoint { role, label } = d.verts[v].kind else { unreachable!() };
    let s = segs.of[&d.verts[v].darts[0]];
    let tag = if role == EndRole::Tail { "T" } else { "H" };
    if d.ordering == OrderingMode::Unlabeled {
        format!("{tag} {s}")
    } else {
        format!("{tag} {s} {label}")
    }
}

fn attach_text(d: &Diagram, g: DartId, segs: &Segments) -> String {
    let v = d.vertex_of(g);
    match &d.verts[v].kind {
        VertexKind::Endpoint { label, .. } => format!("e {label}"),
        VertexKind::Infinity => "inf".to_string(),
        VertexKind::Bead => {
            let ds = &d.verts[v].darts;
            let k = ds.len();
            let p = d.pos(g);
            // walk ccw from g: the first strand dart met is on g's ccw side
            let mut i = 1;
            let next = loop {
                let x = ds[(p + i) % k];
                if !d.darts[x].ghost {
                    break x;
                }
                i += 1;
            };
            // ccw order [forward, g, back] puts g on the left
            let side = if d.darts[next].start { "R" } else { "L" };
            let seg = segs.of[&next];
            format!("{seg} {side}")
        }
        _ => "inf".to_string(),
    }
}

pub(super) fn serialize(d: &Diagram) -> String {
    let mut d = d.clone();
    d.prune_ghosts();
    let d = &d;
    let segs = number_segments(d);
    let mut out = String::new();
    out.push_str(&format!("surface {}\n", d.surface));
    if d.ordering == OrderingMode::VertexOrdered {
        out.push_str("order vertex\n");
    }
    for &v in d.endpoints().values() {
        if let VertexKind::Endpoint { role: EndRole::Tail, .. } = d.verts[v].kind {
            out.push_str(&end_line(d, v, &segs));
            out.push('\n');
        }
    }
    for &v in &segs.crossing_order {
        let ds = &d.verts[v].darts;
        let r: Vec<DartId> = if !d.darts[ds[0]].start {
            ds.clone()
        } else {
            vec![ds[2], ds[3], ds[0], ds[1]]
        };
        let l: Vec<u64> = r.iter().map(|x| segs.of[x]).collect();
        out.push_str(&format!("X {} {} {} {}", l[0], l[1], l[2], l[3]));
        if guess_b_incoming(l[1], l[3]) == d.darts[r[1]].start {
            out.push_str(if d.crossing_sign(v) > 0 { " +" } else { " -" });
        }
        out.push('\n');
    }
    for &v in d.endpoints().values() {
        if let VertexKind::Endpoint { role: EndRole::Head, .. } = d.verts[v].kind {
            out.push_str(&end_line(d, v, &segs));
            out.push('\n');
        }
    }
    let mut graph: Vec<(String, VertexId)> = d
        .alive_vertices()
        .filter_map(|v| match &d.verts[v].kind {
            VertexKind::Graph { name } => Some((name.clone(), v)),
            _ => None,
        })
        .collect();
    graph.sort();
    for (name, v) in &graph {
        let l: Vec<String> = d.verts[*v]
            .darts
            .iter()
            .filter(|&&x| !d.darts[x].ghost)
            .map(|x| segs.of[x].to_string())
            .collect();
        out.push_str(&format!("V {name} {}\n", l.join(" ")));
    }
    for (i, &x) in segs.first.iter().enumerate() {
        if d.verts[d.vertex_of(x)].kind == VertexKind::Bead {
            out.push_str(&format!("O {}\n", i + 1));
        }
    }
    let mut painted = std::collections::HashSet::new();
    for (i, &x) in segs.first.iter().enumerate() {
        if let Some(c) = &d.darts[x].color {
            if painted.insert(x) {
                painted.extend(d.strand_of(x).into_iter().flat_map(|y| [y, d.theta(y)]));
                out.push_str(&format!("color {} {c}\n", i + 1));
            }
        }
    }
    let mut ghosts: Vec<(String, String)> = Vec::new();
    for g in d.alive_darts() {
        if !d.darts[g].ghost || !d.darts[g].start {
            continue;
        }
        let a = attach_text(d, g, &segs);
        let b = attach_text(d, d.theta(g), &segs);
        ghosts.push(if a == "inf" { (b, a) } else { (a, b) });
    }
    ghosts.sort();
    for (a, b) in ghosts {
        if b == "inf" && !a.starts_with("e ") {
            out.push_str(&format!("outer {a}\n"));
        } else {
            out.push_str(&format!("join {a} {b}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_stable() {
        for src in [
            "surface S2\nT 1 1\nH 1 2\n",
            "surface S2\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n",
            "surface R2\nT 1 1\nX 1 3 2 2\nH 3 2\nouter 3 R\n",
            "surface S2\nT 1\nH 1\nO 2\njoin 1 L 2 R\n",
            "surface S2\norder vertex\nT 1 2\nH 1 1\n",
        ] {
            let d = Diagram::parse(src).unwrap();
            let t = d.to_text();
            let e = Diagram::parse(&t).unwrap_or_else(|e| panic!("{e}\n{t}"));
            assert_eq!(e.to_text(), t, "from\n{src}");
            assert!(d.is_isomorphic(&e), "{t}");
        }
    }

    #[test]
    fn unknown_directive() {
        let e = Diagram::parse("surface S2\nQ 1\n").unwrap_err();
        assert_eq!(e, DiagramError::Syntax { line: 2, msg: "unknown directive `Q`".into() });
    }

    #[test]
    fn segment_count_checked() {
        let e = Diagram::parse("surface S2\nT 1 1\nH 2 2\n").unwrap_err();
        assert!(matches!(e, DiagramError::Syntax { .. }));
    }

    #[test]
    fn semicolons_separate() {
        let d = Diagram::parse("surface S2; T 1 1; H 1 2").unwrap();
        assert_eq!(d.open_count(), 1);
    }

    #[test]
    fn unlabeled_gets_internal_labels() {
        let d = Diagram::parse("surface S2\nT 1\nH 1\n").unwrap();
        assert_eq!(d.ordering(), OrderingMode::Unlabeled);
        assert_eq!(d.endpoints().keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    }
}
