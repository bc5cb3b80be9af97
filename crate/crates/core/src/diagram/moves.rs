//! Local Reidemeister moves on the combinatorial map, and random scrambles.
//!
//! Every move is expressed as a rewiring of darts; stable dart ids let a
//! site found by [`Diagram::find_move_sites`] be applied later as long as
//! the diagram has not been edited in between. Applying a move returns a
//! fresh, validated diagram.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Pos,
    R1Neg,
    FR1,
    R2,
    R3,
    R4,
    R5,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] = [
        MoveKind::R1Pos,
        MoveKind::R1Neg,
        MoveKind::FR1,
        MoveKind::R2,
        MoveKind::R3,
        MoveKind::R4,
        MoveKind::R5,
    ];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::R1Pos => "R1+",
            MoveKind::R1Neg => "R1-",
            MoveKind::FR1 => "FR1",
            MoveKind::R2 => "R2",
            MoveKind::R3 => "R3",
            MoveKind::R4 => "R4",
            MoveKind::R5 => "R5",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Apply,
    Inverse,
}

/// A place where a move can be performed.
///
/// `darts` locate the pattern; `over` picks which strand ends up on top
/// when the move creates crossings (R2, R5).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub direction: Direction,
    pub darts: Vec<DartId>,
    pub over: bool,
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = if self.direction == Direction::Apply { "" } else { "^-1" };
        write!(f, "{}{} at {:?}", self.kind, dir, self.darts)
    }
}

#[derive(Clone, Debug)]
pub struct ScrambleOptions {
    pub steps: usize,
    pub seed: u64,
    /// Leave out single kinks so that the writhe is preserved.
    pub framed: bool,
    /// Moves that would push the crossing count above this are skipped.
    /// Defaults to the starting crossing count plus six.
    pub max_crossings: Option<usize>,
}

impl Default for ScrambleOptions {
    fn default() -> Self {
        ScrambleOptions { steps: 50, seed: 0, framed: false, max_crossings: None }
    }
}

impl MoveSite {
    fn new(kind: MoveKind, direction: Direction, darts: Vec<DartId>, over: bool) -> Self {
        MoveSite { kind, direction, darts, over }
    }

    /// Change in crossing count.
    pub fn crossing_delta(&self, d: &Diagram) -> i64 {
        let k = match self.kind {
            MoveKind::R1Pos | MoveKind::R1Neg | MoveKind::R5 => 1,
            MoveKind::FR1 | MoveKind::R2 => 2,
            MoveKind::R3 => 0,
            MoveKind::R4 => {
                let deg = d.verts[d.vertex_of(self.darts[0])].darts.len() as i64;
                return deg - 2 * self.darts.len() as i64;
            }
        };
        if self.direction == Direction::Apply {
            k
        } else {
            -k
        }
    }
}

impl Diagram {
    fn strand_darts(&self) -> Vec<DartId> {
        self.alive_darts().filter(|&d| !self.darts[d].ghost).collect()
    }

    fn is_crossing(&self, v: VertexId) -> bool {
        self.verts[v].kind == VertexKind::Crossing
    }

    fn is_graph_vertex(&self, v: VertexId) -> bool {
        matches!(self.verts[v].kind, VertexKind::Graph { .. })
    }

    fn face_steps(&self) -> Vec<Vec<DartId>> {
        let faces = self.faces();
        let mut out = vec![Vec::new(); faces.count];
        for d in self.alive_darts() {
            out[faces.of[d]].push(d);
        }
        // put each face in boundary order
        for steps in out.iter_mut() {
            let first = steps[0];
            let mut ordered = vec![first];
            let mut x = self.sigma(self.theta(first));
            while x != first {
                ordered.push(x);
                x = self.sigma(self.theta(x));
            }
            *steps = ordered;
        }
        out
    }

    /// Kink loop at `x`: `x` and its ccw successor are the two ends of one
    /// edge.
    fn kink_at(&self, x: DartId) -> bool {
        let v = self.vertex_of(x);
        self.is_crossing(v) && self.theta(x) == self.sigma(x)
    }

    /// Side of a kink whose loop starts at `x`: true when the loop lies on
    /// the right of the strand direction.
    fn kink_on_right(&self, x: DartId) -> bool {
        let ds = &self.verts[self.vertex_of(x)].darts;
        let w = ds[(self.pos(x) + 3) % 4];
        !self.darts[w].start
    }

    fn fr1_inverse_sites(&self) -> Vec<MoveSite> {
        let mut out = Vec::new();
        for v in self.crossings() {
            for &x in &self.verts[v].darts {
                if !self.kink_at(x) {
                    continue;
                }
                let ds = &self.verts[v].darts;
                let k = self.pos(x);
                for o in [ds[(k + 2) % 4], ds[(k + 3) % 4]] {
                    let y = self.theta(o);
                    let w = self.vertex_of(y);
                    if w <= v || !self.is_crossing(w) {
                        continue;
                    }
                    for &x2 in &self.verts[w].darts {
                        if !self.kink_at(x2) {
                            continue;
                        }
                        let k2 = self.pos(x2);
                        let ds2 = &self.verts[w].darts;
                        if y != ds2[(k2 + 2) % 4] && y != ds2[(k2 + 3) % 4] {
                            continue;
                        }
                        if self.crossing_sign(v) != -self.crossing_sign(w)
                            || self.kink_on_right(x) == self.kink_on_right(x2)
                        {
                            continue;
                        }
                        out.push(MoveSite::new(MoveKind::FR1, Direction::Inverse, vec![x, x2], false));
                    }
                }
            }
        }
        out
    }

    fn r4_sites(&self) -> Vec<MoveSite> {
        let mut out = Vec::new();
        for v in self.alive_vertices() {
            if !self.is_graph_vertex(v) {
                continue;
            }
            let ds = self.verts[v].darts.clone();
            let k = ds.len();
            if k < 2 || ds.iter().any(|&e| self.darts[e].ghost) {
                continue;
            }
            for i in 0..k {
                let mut fan = Vec::new();
                let mut over = None;
                for t in 0..k - 1 {
                    let e = ds[(i + t) % k];
                    let cv = self.theta(e);
                    let c = self.vertex_of(cv);
                    if !self.is_crossing(c) || c == v {
                        break;
                    }
                    let strand_over = !self.is_over(cv);
                    if over.is_some_and(|o| o != strand_over) {
                        break;
                    }
                    if t > 0 {
                        // the strand must arrive from the previous fan crossing
                        let prev = self.theta(fan[t - 1]);
                        let prev_ccw = self.sigma_inv(prev);
                        let here_cw = self.sigma(cv);
                        if self.theta(prev_ccw) != here_cw {
                            break;
                        }
                    }
                    if fan.iter().any(|&f: &DartId| self.vertex_of(self.theta(f)) == c) {
                        break;
                    }
                    over = Some(strand_over);
                    fan.push(e);
                    out.push(MoveSite::new(MoveKind::R4, Direction::Apply, fan.clone(), strand_over));
                }
            }
        }
        out
    }

    pub fn find_move_sites(&self, kind: MoveKind, direction: Direction) -> Vec<MoveSite> {
        use Direction::*;
        use MoveKind::*;
        let mut out = Vec::new();
        match (kind, direction) {
            (R1Pos | R1Neg | FR1, Apply) => {
                for d in self.strand_darts() {
                    out.push(MoveSite::new(kind, direction, vec![d], false));
                }
            }
            (R1Pos | R1Neg, Inverse) => {
                let want = if kind == R1Pos { 1 } else { -1 };
                for v in self.crossings() {
                    if self.crossing_sign(v) != want {
                        continue;
                    }
                    for &x in &self.verts[v].darts {
                        if self.kink_at(x) {
                            out.push(MoveSite::new(kind, direction, vec![x], false));
                        }
                    }
                }
            }
            (FR1, Inverse) => out = self.fr1_inverse_sites(),
            (R2, Apply) => {
                for steps in self.face_steps() {
                    for (i, &a) in steps.iter().enumerate() {
                        for &b in &steps[i + 1..] {
                            if self.darts[a].ghost || self.darts[b].ghost {
                                continue;
                            }
                            for over in [true, false] {
                                out.push(MoveSite::new(R2, Apply, vec![a, b], over));
                            }
                        }
                    }
                }
            }
            (R2, Inverse) => {
                for steps in self.face_steps() {
                    if let [a, b] = steps[..] {
                        let (x, y) = (self.vertex_of(a), self.vertex_of(b));
                        if x == y
                            || !self.is_crossing(x)
                            || !self.is_crossing(y)
                            || self.darts[a].ghost
                            || self.darts[b].ghost
                        {
                            continue;
                        }
                        if self.is_over(a) == self.is_over(self.theta(a)) && a < b {
                            out.push(MoveSite::new(R2, Inverse, vec![a, b], false));
                        } else if self.is_over(a) == self.is_over(self.theta(a)) {
                            out.push(MoveSite::new(R2, Inverse, vec![b, a], false));
                        }
                    }
                }
                out.sort_by_key(|s| s.darts.clone());
                out.dedup();
            }
            (R3, Apply) => {
                for steps in self.face_steps() {
                    if let [t0, t1, t2] = steps[..] {
                        let vs = [self.vertex_of(t0), self.vertex_of(t1), self.vertex_of(t2)];
                        if vs.iter().any(|&v| !self.is_crossing(v))
                            || vs[0] == vs[1]
                            || vs[1] == vs[2]
                            || vs[0] == vs[2]
                            || [t0, t1, t2].iter().any(|&t| self.darts[t].ghost)
                        {
                            continue;
                        }
                        let counts: Vec<usize> = [t0, t1, t2]
                            .iter()
                            .map(|&t| self.is_over(t) as usize + self.is_over(self.theta(t)) as usize)
                            .collect();
                        if counts.iter().all(|&c| c == 1) {
                            continue;
                        }
                        out.push(MoveSite::new(R3, Apply, vec![t0, t1, t2], false));
                    }
                }
            }
            (R3, Inverse) | (R4, Inverse) => {}
            (R4, Apply) => out = self.r4_sites(),
            (R5, Apply) => {
                for v in self.alive_vertices() {
                    if !self.is_graph_vertex(v) || self.verts[v].darts.len() < 2 {
                        continue;
                    }
                    for &x in &self.verts[v].darts {
                        let q = self.sigma(x);
                        if q == x || self.theta(x) == q || self.darts[x].ghost || self.darts[q].ghost {
                            continue;
                        }
                        for over in [true, false] {
                            out.push(MoveSite::new(R5, Apply, vec![x], over));
                        }
                    }
                }
            }
            (R5, Inverse) => {
                for v in self.alive_vertices() {
                    if !self.is_graph_vertex(v) || self.verts[v].darts.len() < 2 {
                        continue;
                    }
                    for &a in &self.verts[v].darts {
                        let b = self.sigma(a);
                        if a == b {
                            continue;
                        }
                        let (ca, cb) = (self.theta(a), self.theta(b));
                        let c = self.vertex_of(ca);
                        if self.is_crossing(c) && self.vertex_of(cb) == c && self.sigma(cb) == ca {
                            out.push(MoveSite::new(R5, Inverse, vec![a], false));
                        }
                    }
                }
            }
        }
        out
    }

    /// Every site of every move kind in both directions.
    pub fn all_move_sites(&self) -> Vec<MoveSite> {
        let mut out = Vec::new();
        for k in MoveKind::ALL {
            for dir in [Direction::Apply, Direction::Inverse] {
                out.extend(self.find_move_sites(k, dir));
            }
        }
        out
    }

    pub fn apply_move(&self, site: &MoveSite) -> Result<Diagram, DiagramError> {
        if site.darts.iter().any(|&d| d >= self.darts.len() || !self.darts[d].alive) {
            return Err(DiagramError::StaleSite);
        }
        let fresh = self.find_move_sites(site.kind, site.direction);
        if !fresh.contains(site) {
            return Err(DiagramError::StaleSite);
        }
        let mut out = self.clone();
        use Direction::*;
        use MoveKind::*;
        match (site.kind, site.direction) {
            (R1Pos | R1Neg, Apply) => {
                out.kink_insert(site.darts[0], site.kind == R1Pos);
            }
            (R1Pos | R1Neg, Inverse) => out.kink_remove(site.darts[0]),
            (FR1, Apply) => {
                let d = site.darts[0];
                let q = out.theta(d);
                out.kink_insert(d, true);
                out.kink_insert(q, false);
            }
            (FR1, Inverse) => {
                out.kink_remove(site.darts[0]);
                out.kink_remove(site.darts[1]);
            }
            (R2, Apply) => out.r2_insert(site.darts[0], site.darts[1], site.over),
            (R2, Inverse) => out.r2_remove(site.darts[0], site.darts[1]),
            (R3, _) => out.r3(site.darts[0], site.darts[1], site.darts[2]),
            (R4, _) => out.r4(&site.darts, site.over),
            (R5, Apply) => out.r5_insert(site.darts[0], site.over),
            (R5, Inverse) => out.r5_remove(site.darts[0]),
        }
        out.cleanup_beads();
        if out.validate().is_empty() {
            Ok(out)
        } else {
            Err(DiagramError::StaleSite)
        }
    }

    fn new_crossing(&mut self) -> (VertexId, [DartId; 4]) {
        let v = self.add_vertex(VertexKind::Crossing);
        let ds = [self.new_dart(), self.new_dart(), self.new_dart(), self.new_dart()];
        for &d in &ds {
            self.darts[d].vertex = v;
        }
        (v, ds)
    }

    /// Adds a kink on the edge leaving `d`, with its loop in the face on the
    /// right of that step.
    pub(crate) fn kink_insert(&mut self, d: DartId, positive: bool) {
        let q = self.theta(d);
        let fwd = self.darts[d].start;
        let color = self.darts[d].color.clone();
        let (x, [e, n, w, s]) = self.new_crossing();
        self.link(d, w, fwd, false, color.clone());
        self.link(e, s, fwd, false, color.clone());
        self.link(n, q, fwd, false, color);
        self.set_rotation(x, vec![e, n, w, s]);
        if (self.crossing_sign(x) > 0) != positive {
            self.set_rotation(x, vec![n, w, s, e]);
        }
    }

    /// Protects the far side of the edge at `o` with a bead when it touches
    /// one of `local`; returns the dart across the edge afterwards.
    fn guard(&mut self, o: DartId, local: &[VertexId]) -> DartId {
        let p = self.theta(o);
        if local.contains(&self.vertex_of(p)) {
            let (_, near, _) = self.insert_bead(o);
            near
        } else {
            p
        }
    }

    pub(crate) fn kink_remove(&mut self, x: DartId) {
        let v = self.vertex_of(x);
        let ds = self.verts[v].darts.clone();
        let k = self.pos(x);
        let (u, w) = (ds[(k + 2) % 4], ds[(k + 3) % 4]);
        let color = self.darts[u].color.clone();
        if self.theta(u) == w {
            let b = self.add_vertex(VertexKind::Bead);
            let a1 = self.add_dart(b);
            let a2 = self.add_dart(b);
            self.kill_vertex(v);
            self.link(a1, a2, true, false, color);
            return;
        }
        let fu = self.guard(u, &[v]);
        let fw = self.guard(w, &[v]);
        let fwd_from_u = !self.darts[u].start;
        self.kill_vertex(v);
        self.link(fu, fw, fwd_from_u, false, color);
    }

    pub(crate) fn r2_insert(&mut self, d1: DartId, d2: DartId, over1: bool) {
        if self.theta(d1) == d2 {
            self.insert_bead(d1);
        }
        let (p1, p2) = (self.theta(d1), self.theta(d2));
        let (s1, s2) = (self.darts[d1].start, self.darts[d2].start);
        let (c1, c2) = (self.darts[d1].color.clone(), self.darts[d2].color.clone());
        let (x1, [e1, n1, w1, so1]) = self.new_crossing();
        let (x2, [e2, n2, w2, so2]) = self.new_crossing();
        self.link(d1, so2, s1, false, c1.clone());
        self.link(n2, n1, s1, false, c1.clone());
        self.link(so1, p1, s1, false, c1);
        self.link(d2, w1, s2, false, c2.clone());
        self.link(e1, w2, s2, false, c2.clone());
        self.link(e2, p2, s2, false, c2);
        if over1 {
            self.set_rotation(x1, vec![e1, n1, w1, so1]);
            self.set_rotation(x2, vec![e2, n2, w2, so2]);
        } else {
            self.set_rotation(x1, vec![n1, w1, so1, e1]);
            self.set_rotation(x2, vec![n2, w2, so2, e2]);
        }
    }

    pub(crate) fn r2_remove(&mut self, a: DartId, b: DartId) {
        let x = self.vertex_of(a);
        let y = self.vertex_of(b);
        let local = [x, y];
        let p1 = self.straight(a).unwrap();
        let q1 = self.straight(self.theta(a)).unwrap();
        let p2 = self.straight(self.theta(b)).unwrap();
        let q2 = self.straight(b).unwrap();
        let mut plan = Vec::new();
        for (p, q) in [(p1, q1), (p2, q2)] {
            let fwd = !self.darts[p].start;
            let color = self.darts[p].color.clone();
            let fp = self.guard(p, &local);
            let fq = self.guard(q, &local);
            plan.push((fp, fq, fwd, color));
        }
        self.kill_vertex(x);
        self.kill_vertex(y);
        for (fp, fq, fwd, color) in plan {
            self.link(fp, fq, fwd, false, color);
        }
    }

    pub(crate) fn r3(&mut self, t0: DartId, t1: DartId, t2: DartId) {
        let local = [self.vertex_of(t0), self.vertex_of(t1), self.vertex_of(t2)];
        let ts = [t0, t1, t2];
        let mut ext = Vec::new();
        for &t in &ts {
            let p_ex = self.straight(t).unwrap();
            let q_ex = self.straight(self.theta(t)).unwrap();
            ext.push((p_ex, q_ex));
        }
        for &(p_ex, q_ex) in &ext {
            for o in [p_ex, q_ex] {
                self.guard(o, &local);
            }
        }
        let mut plan = Vec::new();
        for (i, &t) in ts.iter().enumerate() {
            let (p_ex, q_ex) = ext[i];
            let (p_in, q_in) = (t, self.theta(t));
            let far_p = self.theta(p_ex);
            let far_q = self.theta(q_ex);
            let fwd = self.darts[t].start;
            let color = self.darts[t].color.clone();
            plan.push((far_p, q_in, fwd, color.clone()));
            plan.push((q_ex, p_ex, fwd, color.clone()));
            plan.push((p_in, far_q, fwd, color));
        }
        for (a, b, fwd, color) in plan {
            self.link(a, b, fwd, false, color);
        }
    }

    pub(crate) fn r5_insert(&mut self, x: DartId, p_over: bool) {
        let v = self.vertex_of(x);
        let q = self.sigma(x);
        let (pf, qf) = (self.theta(x), self.theta(q));
        let (sp, sq) = (self.darts[x].start, self.darts[q].start);
        let (cp, cq) = (self.darts[x].color.clone(), self.darts[q].color.clone());
        let e0 = self.new_dart();
        let e90 = self.new_dart();
        let mut rot = self.verts[v].darts.clone();
        for r in rot.iter_mut() {
            if *r == x {
                *r = e0;
            } else if *r == q {
                *r = e90;
            }
        }
        self.darts[x].alive = false;
        self.darts[q].alive = false;
        self.set_rotation(v, rot);
        let (c, [e, n, w, s]) = self.new_crossing();
        self.link(e90, w, sp, false, cp.clone());
        self.link(e, pf, sp, false, cp);
        self.link(e0, s, sq, false, cq.clone());
        self.link(n, qf, sq, false, cq);
        if p_over {
            self.set_rotation(c, vec![n, w, s, e]);
        } else {
            self.set_rotation(c, vec![e, n, w, s]);
        }
    }

    pub(crate) fn r5_remove(&mut self, a: DartId) {
        let v = self.vertex_of(a);
        let b = self.sigma(a);
        let (ca, cb) = (self.theta(a), self.theta(b));
        let c = self.vertex_of(ca);
        let fa = self.straight(ca).unwrap();
        let fb = self.straight(cb).unwrap();
        let qf = self.guard(fa, &[c, v]);
        let pf = self.guard(fb, &[c, v]);
        let (sa, sb) = (self.darts[a].start, self.darts[b].start);
        let (col_a, col_b) = (self.darts[a].color.clone(), self.darts[b].color.clone());
        let na = self.new_dart();
        let nb = self.new_dart();
        let mut rot = self.verts[v].darts.clone();
        for r in rot.iter_mut() {
            if *r == a {
                *r = na;
            } else if *r == b {
                *r = nb;
            }
        }
        self.darts[a].alive = false;
        self.darts[b].alive = false;
        self.set_rotation(v, rot);
        self.kill_vertex(c);
        self.link(na, pf, sb, false, col_b);
        self.link(nb, qf, sa, false, col_a);
    }

    /// Moves the strand crossing the fan of edges `fan` (consecutive darts of
    /// one graph vertex) to the other side of that vertex.
    pub(crate) fn r4(&mut self, fan: &[DartId], strand_over: bool) {
        let v = self.vertex_of(fan[0]);
        let ds = self.verts[v].darts.clone();
        let k = ds.len();
        let i = self.pos(fan[0]);
        let m = fan.len();
        let cs: Vec<VertexId> = fan.iter().map(|&e| self.vertex_of(self.theta(e))).collect();
        let mut local = cs.clone();
        local.push(v);
        // strand ends on the cw side of the first and ccw side of the last
        let s_cw = self.sigma(self.theta(fan[0]));
        let s_ccw = self.sigma_inv(self.theta(fan[m - 1]));
        let color = self.darts[s_cw].color.clone();
        let fwd = !self.darts[s_cw].start;
        let a = self.guard(s_cw, &local);
        let b = self.guard(s_ccw, &local);
        for (t, &e) in fan.iter().enumerate() {
            let cv = self.theta(e);
            let cf = self.straight(cv).unwrap();
            let far = self.theta(cf);
            let (se, ce) = (self.darts[e].start, self.darts[e].color.clone());
            self.kill_vertex(cs[t]);
            self.link(e, far, se, false, ce);
        }
        let mut chain = vec![a];
        for t in 1..=(k - m) {
            let e = ds[(i + k - t) % k];
            let far = self.theta(e);
            let (se, ce) = (self.darts[e].start, self.darts[e].color.clone());
            let (x, [dv, sn, df, ss]) = self.new_crossing();
            self.link(e, dv, se, false, ce.clone());
            self.link(df, far, se, false, ce);
            if strand_over {
                self.set_rotation(x, vec![df, sn, dv, ss]);
            } else {
                self.set_rotation(x, vec![sn, dv, ss, df]);
            }
            chain.push(sn);
            chain.push(ss);
        }
        chain.push(b);
        for pair in chain.chunks(2) {
            self.link(pair[0], pair[1], fwd, false, color.clone());
        }
    }

    /// Applies `opts.steps` random moves. Returns the final diagram and the
    /// sites that were used.
    pub fn scramble(&self, opts: &ScrambleOptions) -> (Diagram, Vec<MoveSite>) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let cap = opts.max_crossings.unwrap_or(self.crossing_count() + 6) as i64;
        let mut d = self.clone();
        let mut log = Vec::new();
        for _ in 0..opts.steps {
            let mut groups: Vec<Vec<MoveSite>> = Vec::new();
            let n = d.crossing_count() as i64;
            for kind in MoveKind::ALL {
                if opts.framed && matches!(kind, MoveKind::R1Pos | MoveKind::R1Neg) {
                    continue;
                }
                for dir in [Direction::Apply, Direction::Inverse] {
                    let sites: Vec<MoveSite> = d
                        .find_move_sites(kind, dir)
                        .into_iter()
                        .filter(|s| n + s.crossing_delta(&d) <= cap)
                        .collect();
                    if !sites.is_empty() {
                        groups.push(sites);
                    }
                }
            }
            let mut moved = false;
            while !groups.is_empty() && !moved {
                let g = rng.gen_range(0..groups.len());
                let j = rng.gen_range(0..groups[g].len());
                let site = groups[g].swap_remove(j);
                if groups[g].is_empty() {
                    groups.swap_remove(g);
                }
                if let Ok(next) = d.apply_move(&site) {
                    d = next;
                    log.push(site);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        (d, log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KNOTOID: &str = "surface S2\nT 1 1\nX 1 3 2 4\nX 2 5 3 4\nH 5 2\n";

    fn trefoil() -> Diagram {
        Diagram::parse("surface S2\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n").unwrap()
    }

    #[test]
    fn kink_insert_and_remove_round_trip() {
        let d = Diagram::parse("surface S2\nT 1 1\nH 1 2\n").unwrap();
        for kind in [MoveKind::R1Pos, MoveKind::R1Neg] {
            for site in d.find_move_sites(kind, Direction::Apply) {
                let e = d.apply_move(&site).unwrap();
                assert_eq!(e.crossing_count(), 1);
                assert_eq!(e.writhe(), if kind == MoveKind::R1Pos { 1 } else { -1 });
                let back = e.find_move_sites(kind, Direction::Inverse);
                assert_eq!(back.len(), 1);
                let f = e.apply_move(&back[0]).unwrap();
                assert!(f.is_isomorphic(&d));
            }
        }
    }

    #[test]
    fn r2_round_trip_on_trefoil() {
        let d = trefoil();
        let sites = d.find_move_sites(MoveKind::R2, Direction::Apply);
        assert!(!sites.is_empty());
        for site in sites {
            let e = d.apply_move(&site).unwrap();
            assert_eq!(e.crossing_count(), 5);
            assert_eq!(e.writhe(), 3);
            let undo = e.find_move_sites(MoveKind::R2, Direction::Inverse);
            assert!(
                undo.iter().any(|u| e.apply_move(u).map(|f| f.is_isomorphic(&d)).unwrap_or(false)),
                "no inverse for {site}"
            );
        }
    }

    #[test]
    fn fr1_keeps_writhe() {
        let d = Diagram::parse(KNOTOID).unwrap();
        for site in d.find_move_sites(MoveKind::FR1, Direction::Apply) {
            let e = d.apply_move(&site).unwrap();
            assert_eq!(e.writhe(), d.writhe());
            assert_eq!(e.crossing_count(), d.crossing_count() + 2);
            let undo = e.find_move_sites(MoveKind::FR1, Direction::Inverse);
            assert!(undo.iter().any(|u| e.apply_move(u).unwrap().is_isomorphic(&d)));
        }
    }

    #[test]
    fn r3_is_an_involution() {
        // three strands around a triangle
        let d = trefoil();
        let sites = d.find_move_sites(MoveKind::R3, Direction::Apply);
        // trefoil triangles are cyclic, so no R3 there
        assert!(sites.is_empty());
        let mut found = false;
        for s in d.find_move_sites(MoveKind::R2, Direction::Apply) {
            let e = d.apply_move(&s).unwrap();
            for t in e.find_move_sites(MoveKind::R3, Direction::Apply) {
                let f = e.apply_move(&t).unwrap();
                assert_eq!(f.writhe(), e.writhe());
                let back = f.find_move_sites(MoveKind::R3, Direction::Apply);
                assert!(back.iter().any(|b| f.apply_move(b).unwrap().is_isomorphic(&e)));
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn scramble_is_deterministic() {
        let d = Diagram::parse(KNOTOID).unwrap();
        let opts = ScrambleOptions { steps: 30, seed: 7, framed: false, max_crossings: None };
        let (a, la) = d.scramble(&opts);
        let (b, lb) = d.scramble(&opts);
        assert_eq!(la, lb);
        assert_eq!(a.to_text(), b.to_text());
        assert!(la.len() == 30);
    }

    #[test]
    fn framed_scramble_keeps_writhe() {
        let d = trefoil();
        for seed in 0..5 {
            let opts = ScrambleOptions { steps: 40, seed, framed: true, max_crossings: None };
            let (e, _) = d.scramble(&opts);
            assert_eq!(e.writhe(), 3);
        }
    }
}
