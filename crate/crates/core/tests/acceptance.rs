//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact equalities of integer Laurent polynomials or skein expressions.

use std::collections::BTreeMap;
use std::time::Instant;

use linkoid::bracket::{bracket, normalized_bracket, normalized_ordered_bracket, ordered_bracket};
use linkoid::corpus::Corpus;
use linkoid::diagram::{Direction, MoveKind, OrderingMode, ScrambleOptions};
use linkoid::kbsm::{normalized_skein, normalized_skein_on_sphere, reduce_to_skein, specialize, ArcWeights};
use linkoid::laurent::Variable;
use linkoid::oracle::{oracle_bracket, oracle_ordered_bracket};
use linkoid::tcol::{t_col, TColResult};
use linkoid::theta::{build_theta_with, check_simple, degree_census, t_col_schemes, Routing, Scheme, NEG_POLE, POS_POLE};
use linkoid::{Diagram, LaurentPoly};
use rayon::prelude::*;

const SCRAMBLES: u64 = 200;
const MOVES: usize = 50;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS  {id}  {name}: {detail}"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL  {id}  {name}: {why}");
            }
        }
    }
}

fn labelled(d: &Diagram) -> bool {
    d.ordering() != OrderingMode::Unlabeled && d.open_count() > 0
}

struct Reference {
    bracket: LaurentPoly,
    ordered: Option<LaurentPoly>,
    kbsm: String,
    tcol: Option<BTreeMap<Scheme, TColResult>>,
}

fn reference(d: &Diagram) -> Reference {
    Reference {
        bracket: normalized_bracket(d).unwrap(),
        ordered: labelled(d).then(|| normalized_ordered_bracket(d).unwrap()),
        kbsm: normalized_skein(d).unwrap().to_string(),
        tcol: (d.open_count() > 0).then(|| t_col_schemes(d, Routing::default()).unwrap()),
    }
}

fn invariance(c: &Corpus) -> Result<String, String> {
    let entries: Vec<_> = c.linkoids().collect();
    let checks: Vec<Result<usize, String>> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let d = c.diagram(&e.name).map_err(|x| x.to_string())?;
            let want = reference(&d);
            let mut n = 0;
            for k in 0..SCRAMBLES {
                let seed = 1000 * i as u64 + k;
                let opts = ScrambleOptions { steps: MOVES, seed, framed: false, max_crossings: None };
                let (s, moves) = d.scramble(&opts);
                if moves.len() < MOVES {
                    return Err(format!("{} seed {seed}: only {} moves applied", e.name, moves.len()));
                }
                let got = reference(&s);
                let bad = |what: &str| Err(format!("{} seed {seed}: {what} changed", e.name));
                if got.bracket != want.bracket {
                    return bad("normalized bracket");
                }
                if got.ordered != want.ordered {
                    return bad("normalized ordered bracket");
                }
                if got.kbsm != want.kbsm {
                    return bad("normalized skein expression");
                }
                if got.tcol != want.tcol {
                    return bad("T_col");
                }
                n += 1;
            }
            Ok(n)
        })
        .collect();
    let mut total = 0;
    for r in checks {
        total += r?;
    }
    Ok(format!(
        "{} diagrams, {total} scrambles of {MOVES} moves; bracket, ordered bracket, skein expression and T_col under all schemes exactly equal",
        entries.len()
    ))
}

fn oracle_agreement(c: &Corpus) -> Result<String, String> {
    let mut n = 0;
    for e in c.linkoids() {
        let d = c.diagram(&e.name).map_err(|x| x.to_string())?;
        let skein = reduce_to_skein(&d).unwrap();
        let b = bracket(&d).unwrap();
        if b != oracle_bracket(&d).unwrap() || b != specialize(&skein, ArcWeights::Plain) {
            return Err(format!("{}: plain values disagree", e.name));
        }
        n += 1;
        if labelled(&d) {
            let o = ordered_bracket(&d).unwrap();
            if o != oracle_ordered_bracket(&d).unwrap() || o != specialize(&skein, ArcWeights::Ordered) {
                return Err(format!("{}: ordered values disagree", e.name));
            }
            n += 1;
        }
    }
    Ok(format!("{n} exact three-way agreements (plain and ordered)"))
}

fn framed(c: &Corpus) -> Result<String, String> {
    let mut n = 0;
    for (i, e) in c.linkoids().enumerate() {
        let d = c.diagram(&e.name).map_err(|x| x.to_string())?;
        let b = bracket(&d).unwrap();
        let k = reduce_to_skein(&d).unwrap();
        for seed in 0..20 {
            let opts = ScrambleOptions { steps: MOVES, seed: 7000 + 100 * i as u64 + seed, framed: true, max_crossings: None };
            let (s, _) = d.scramble(&opts);
            if bracket(&s).unwrap() != b || reduce_to_skein(&s).unwrap() != k {
                return Err(format!("{} framed seed {seed}: value changed", e.name));
            }
            n += 1;
        }
        for (kind, exp) in [(MoveKind::R1Pos, 3), (MoveKind::R1Neg, -3)] {
            let factor = LaurentPoly::a_term(-1, exp);
            let Some(site) = d.find_move_sites(kind, Direction::Apply).into_iter().next() else {
                continue;
            };
            let s = d.apply_move(&site).unwrap();
            if bracket(&s).unwrap() != &b * &factor || reduce_to_skein(&s).unwrap() != k.scale(&factor) {
                return Err(format!("{} {kind}: factor is not -A^{exp}", e.name));
            }
            n += 1;
        }
    }
    Ok(format!("{n} checks: FR1/R2/R3 leave bracket and skein expression unchanged, R1 multiplies by -A^(+-3)"))
}

fn classical(c: &Corpus) -> Result<String, String> {
    let u = c.diagram("unknot").map_err(|x| x.to_string())?;
    if bracket(&u).unwrap() != LaurentPoly::delta() {
        return Err("unknot bracket is not delta".into());
    }
    let t = c.diagram("trefoil").map_err(|x| x.to_string())?;
    let hand: LaurentPoly = "A^-4+A^-12-A^-16".parse().unwrap();
    let want = LaurentPoly::delta() * hand;
    let got = normalized_bracket(&t).unwrap();
    if got != want {
        return Err(format!("right trefoil gives {got}, expected {want}"));
    }
    if c.entry("trefoil").unwrap().normalized_bracket.as_deref() != Some(want.to_string().as_str()) {
        return Err("manifest value differs from the hand enumeration".into());
    }
    let m = normalized_bracket(&t.mirror()).unwrap();
    if m != want.mirror() || m == want {
        return Err(format!("mirror gives {m}"));
    }
    Ok(format!("unknot = delta; right trefoil = {want}; mirror = {m}"))
}

fn substitution(c: &Corpus) -> Result<String, String> {
    let mut n = 0;
    let mut single = 0;
    for e in c.linkoids() {
        let d = c.diagram(&e.name).map_err(|x| x.to_string())?;
        if !labelled(&d) {
            continue;
        }
        let o = ordered_bracket(&d).unwrap();
        let b = bracket(&d).unwrap();
        if o.forget_pairs() != b {
            return Err(format!("{}: forgetting labels does not give the bracket", e.name));
        }
        n += 1;
        if d.open_count() == 1 {
            let one = |v: Variable| match v {
                Variable::A => None,
                _ => Some(LaurentPoly::one()),
            };
            if o.substitute(&one).unwrap() != b.substitute(&one).unwrap() {
                return Err(format!("{}: l12 = l = 1 disagree", e.name));
            }
            single += 1;
        }
    }
    Ok(format!("{n} diagrams with all l_ij -> l exact; {single} single-arc diagrams agree at l12 = l = 1"))
}

fn sphere_collapse(c: &Corpus) -> Result<String, String> {
    let (a, b) = &c.manifest.sphere_collapse;
    let k1 = c.diagram(a).map_err(|x| x.to_string())?;
    let k2 = c.diagram(b).map_err(|x| x.to_string())?;
    if k1.crossing_count() > 6 || k2.crossing_count() > 6 {
        return Err("pair exceeds six crossings".into());
    }
    if !k1.to_sphere().is_isomorphic(&k2.to_sphere()) {
        return Err("the pair is not one spherical diagram".into());
    }
    let (p1, p2) = (normalized_skein(&k1).unwrap(), normalized_skein(&k2).unwrap());
    if p1 == p2 {
        return Err("planar expressions coincide".into());
    }
    let (s1, s2) = (normalized_skein_on_sphere(&k1).unwrap(), normalized_skein_on_sphere(&k2).unwrap());
    if s1 != s2 {
        return Err("spherical expressions differ".into());
    }
    Ok(format!("{a} and {b}: planar expressions differ, spherical expressions both `{}`", s1.to_string().trim()))
}

fn discrimination(c: &Corpus) -> Result<String, String> {
    let [a, b, cc] = &c.manifest.theta_colorings;
    let r: Vec<TColResult> = [a, b, cc]
        .iter()
        .map(|n| t_col(&c.diagram(n).unwrap()).unwrap())
        .collect();
    if r.iter().any(|x| x.outcomes > 9) {
        return Err("replacement space larger than 9".into());
    }
    if r[0] != r[1] {
        return Err(format!("{a} and {b} differ"));
    }
    if r[0] == r[2] {
        return Err(format!("{a} and {cc} coincide"));
    }
    Ok(format!("T_col({a}) = T_col({b}) != T_col({cc}); {} outcomes each", r[0].outcomes))
}

fn ordered_pair(c: &Corpus) -> Result<String, String> {
    let p = &c.manifest.ordered_pair;
    let l1 = c.diagram(&p.first).map_err(|x| x.to_string())?;
    let l2 = c.diagram(&p.second).map_err(|x| x.to_string())?;
    let w1: LaurentPoly = p.first_expected.parse().unwrap();
    let w2: LaurentPoly = p.second_expected.parse().unwrap();
    let (o1, o2) = (normalized_ordered_bracket(&l1).unwrap(), normalized_ordered_bracket(&l2).unwrap());
    if o1 != w1 || o2 != w2 {
        return Err(format!("got {o1} and {o2}"));
    }
    if normalized_bracket(&l1).unwrap() != normalized_bracket(&l2).unwrap() {
        return Err("unordered brackets differ".into());
    }
    Ok(format!("{} ({}): ordered brackets match the printed values, unordered brackets coincide", p.status, p.note))
}

fn theta_structure(c: &Corpus) -> Result<String, String> {
    let mut n = 0;
    for e in c.linkoids() {
        let d = c.diagram(&e.name).map_err(|x| x.to_string())?;
        let arcs = d.open_count();
        if arcs == 0 {
            continue;
        }
        for r in [Routing::default(), Routing::alternative()] {
            let g = build_theta_with(&d, r).unwrap();
            if !check_simple(&g).unwrap() {
                return Err(format!("{}: a 4-cycle is knotted", e.name));
            }
            let census = degree_census(&g);
            let poles = [POS_POLE, NEG_POLE];
            let cubic = census.iter().filter(|(k, &v)| v == 3 && !poles.contains(&k.as_str())).count();
            if census.len() != 2 * arcs + 2 || cubic != 2 * arcs || poles.iter().any(|p| census.get(*p) != Some(&(2 * arcs))) {
                return Err(format!("{}: degree census {census:?}", e.name));
            }
        }
        let a = t_col_schemes(&d, Routing::default()).unwrap();
        let b = t_col_schemes(&d, Routing::alternative()).unwrap();
        if a != b {
            return Err(format!("{}: routings give different T_col", e.name));
        }
        n += 1;
    }
    let k = c.diagram(&c.manifest.knotted_connector).map_err(|x| x.to_string())?;
    if !matches!(check_simple(&k), Ok(false)) {
        return Err("knotted connector passes the simplicity test".into());
    }
    Ok(format!(
        "{n} linkoids: simple, 2n cubic vertices and two poles of degree 2n, equal T_col under both routings; knotted connector rejected"
    ))
}

type Check = fn(&Corpus) -> Result<String, String>;

fn main() {
    let corpus = Corpus::bundled().expect("corpus");
    let mut report = Report { failed: 0 };
    let criteria: [(u32, &str, Check); 9] = [
        (1, "invariance", invariance),
        (2, "oracle agreement", oracle_agreement),
        (3, "framed behaviour", framed),
        (4, "classical reduction", classical),
        (5, "lambda substitution", substitution),
        (6, "sphere collapse", sphere_collapse),
        (7, "T_col discrimination", discrimination),
        (8, "ordered pair reproduction", ordered_pair),
        (9, "theta structure", theta_structure),
    ];
    for (id, name, f) in criteria {
        let t = Instant::now();
        let r = std::panic::catch_unwind(|| f(&corpus)).unwrap_or_else(|_| Err("panicked".into()));
        report.line(id, name, r.map(|s| format!("{s} [{:.1}s]", t.elapsed().as_secs_f64())));
    }
    println!("{} of 9 criteria passed", 9 - report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
