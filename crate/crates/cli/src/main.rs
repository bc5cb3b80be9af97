use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linkoid::bracket::{
    bracket, normalize, normalized_bracket, normalized_ordered_bracket, ordered_bracket, BracketError,
};
use linkoid::corpus::{Corpus, CorpusError, EntryKind};
use linkoid::diagram::ScrambleOptions;
use linkoid::kbsm::{
    normalized_skein, normalized_skein_on_sphere, reduce_on_sphere, reduce_to_skein, specialize, ArcWeights,
    SkeinExpression,
};
use linkoid::oracle::{oracle_bracket, oracle_ordered_bracket, OracleError};
use linkoid::tcol::{t_col, TColError, TColResult};
use linkoid::theta::{build_theta, colored_theta, t_col_schemes, Routing, Scheme, ThetaError};
use linkoid::{Diagram, DiagramError, LaurentPoly};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "linkoid", version, about = "Invariants of multi-linkoid diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an invariant of a diagram (file or `-` for stdin).
    Compute {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bracket")]
        invariant: Invariant,
        #[arg(long)]
        normalized: bool,
        /// Colouring scheme for `tcol`; all schemes when omitted.
        #[arg(long)]
        scheme: Option<Scheme>,
        /// Evaluate the skein expression on S² even for planar input.
        #[arg(long)]
        sphere: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply random Reidemeister moves and print the result.
    Scramble {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leave out R1 so that the writhe is kept.
        #[arg(long)]
        framed: bool,
    },
    /// Exit 0 when two diagrams share an invariant value, 1 otherwise.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "bracket")]
        invariant: Invariant,
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        scheme: Option<Scheme>,
        #[arg(long)]
        sphere: bool,
        /// Cross-check both diagrams against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Inspect the bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
        /// Corpus directory (defaults to the bundled one).
        #[arg(long, global = true)]
        dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List entries with their provenance.
    List,
    /// Print one diagram.
    Show { name: String },
    /// Recompute every stored value; exit 1 on a mismatch.
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Invariant {
    Writhe,
    Bracket,
    OrderedBracket,
    Kbsm,
    Theta,
    Tcol,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Parse(String),
    Capacity(String),
    Different,
    Oracle(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Different | Failure::Mismatch(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Oracle(_) => 4,
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure::Parse(e.to_string())
    }
}

macro_rules! capacity {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Capacity(e.to_string())
            }
        }
    )*};
}
capacity!(BracketError, OracleError, TColError, ThetaError);

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::Parse(e.to_string())
    }
}

fn read_input(file: Option<&PathBuf>) -> Result<Diagram, Failure> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Parse(e.to_string()))?;
            s
        }
    };
    Ok(Diagram::parse(&text)?)
}

/// A computed invariant, printable as text or JSON.
#[derive(PartialEq)]
enum Value_ {
    Int(i64),
    Poly(LaurentPoly),
    Skein(SkeinExpression),
    Graph(String),
    TCol(Vec<(Option<Scheme>, TColResult)>),
}

impl Value_ {
    fn text(&self) -> String {
        match self {
            Value_::Int(n) => format!("{n}\n"),
            Value_::Poly(p) => format!("{p}\n"),
            Value_::Skein(s) => s.to_string(),
            Value_::Graph(t) => t.clone(),
            Value_::TCol(rs) => {
                let mut out = String::new();
                for (s, r) in rs {
                    if let (Some(s), true) = (s, rs.len() > 1) {
                        out.push_str(&format!("[{s}]\n"));
                    }
                    out.push_str(&format!("outcomes {}\n{r}", r.outcomes));
                }
                out
            }
        }
    }

    fn json(&self, invariant: &str, normalized: bool) -> Value {
        let value = match self {
            Value_::Int(n) => json!(n),
            Value_::Poly(p) => json!(p.to_string()),
            Value_::Skein(s) => Value::Array(
                s.terms
                    .iter()
                    .map(|(b, c)| json!({"coefficient": c.to_string(), "basis": b.to_string()}))
                    .collect(),
            ),
            Value_::Graph(t) => json!(t),
            Value_::TCol(rs) => Value::Array(
                rs.iter()
                    .map(|(s, r)| {
                        json!({
                            "scheme": s.map(|s| s.to_string()),
                            "outcomes": r.outcomes.to_string(),
                            "fingerprints": r.lines(),
                        })
                    })
                    .collect(),
            ),
        };
        json!({"invariant": invariant, "normalized": normalized, "value": value})
    }
}

struct Request {
    invariant: Invariant,
    normalized: bool,
    scheme: Option<Scheme>,
    sphere: bool,
}

fn compute(d: &Diagram, r: &Request) -> Result<Value_, Failure> {
    Ok(match r.invariant {
        Invariant::Writhe => Value_::Int(d.writhe() as i64),
        Invariant::Bracket if r.normalized => Value_::Poly(normalized_bracket(d)?),
        Invariant::Bracket => Value_::Poly(bracket(d)?),
        Invariant::OrderedBracket if r.normalized => Value_::Poly(normalized_ordered_bracket(d)?),
        Invariant::OrderedBracket => Value_::Poly(ordered_bracket(d)?),
        Invariant::Kbsm => Value_::Skein(match (r.normalized, r.sphere) {
            (true, true) => normalized_skein_on_sphere(d)?,
            (true, false) => normalized_skein(d)?,
            (false, true) => reduce_on_sphere(d)?,
            (false, false) => reduce_to_skein(d)?,
        }),
        Invariant::Theta => Value_::Graph(match r.scheme {
            Some(s) => colored_theta(d, s, Routing::default())?.to_text(),
            None => build_theta(d)?.to_text(),
        }),
        Invariant::Tcol if d.is_spatial() => Value_::TCol(vec![(None, t_col(d)?)]),
        Invariant::Tcol => {
            let all = t_col_schemes(d, Routing::default())?;
            match r.scheme {
                Some(s) => {
                    let v = all.get(&s).cloned().ok_or(ThetaError::MissingOrdering(s))?;
                    Value_::TCol(vec![(Some(s), v)])
                }
                None => Value_::TCol(all.into_iter().map(|(s, v)| (Some(s), v)).collect()),
            }
        }
    })
}

/// Recomputes the bracket side of `v` through the oracle.
fn oracle_check(d: &Diagram, r: &Request, v: &Value_) -> Result<(), Failure> {
    if d.is_spatial() {
        return Ok(());
    }
    let scale = |p: LaurentPoly| if r.normalized { normalize(&p, d.writhe()) } else { p };
    let plain = scale(oracle_bracket(d)?);
    let labelled = d.open_count() > 0 && d.ordering() != linkoid::diagram::OrderingMode::Unlabeled;
    let agree = match (r.invariant, v) {
        (Invariant::Bracket, Value_::Poly(p)) => *p == plain,
        (Invariant::OrderedBracket, Value_::Poly(p)) => *p == scale(oracle_ordered_bracket(d)?),
        (Invariant::Kbsm, Value_::Skein(s)) if !r.sphere => {
            specialize(s, ArcWeights::Plain) == plain
                && (!labelled || specialize(s, ArcWeights::Ordered) == scale(oracle_ordered_bracket(d)?))
        }
        _ => bracket(d)? == oracle_bracket(d)?,
    };
    if agree {
        Ok(())
    } else {
        Err(Failure::Oracle("state sum and oracle disagree".into()))
    }
}

fn corpus_check(c: &Corpus) -> Result<String, Failure> {
    let mut out = String::new();
    let mut bad = Vec::new();
    for e in &c.manifest.entries {
        let d = c.diagram(&e.name)?;
        let mut ok = d.crossing_count() == e.crossings && d.writhe() == e.writhe;
        if e.kind == EntryKind::Linkoid {
            let same = |want: &Option<String>, got: String| want.as_ref().is_none_or(|w| *w == got);
            ok &= same(&e.normalized_bracket, normalized_bracket(&d)?.to_string());
            if e.normalized_ordered_bracket.is_some() {
                ok &= same(&e.normalized_ordered_bracket, normalized_ordered_bracket(&d)?.to_string());
            }
            ok &= same(&e.kbsm, normalized_skein(&d)?.to_string());
            ok &= same(&e.kbsm_sphere, normalized_skein_on_sphere(&d)?.to_string());
        }
        out.push_str(&format!("{} {}\n", if ok { "ok  " } else { "FAIL" }, e.name));
        if !ok {
            bad.push(e.name.clone());
        }
    }
    if bad.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Mismatch(format!("stored values differ for {}", bad.join(", "))))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Compute { file, invariant, normalized, scheme, sphere, format } => {
            let d = read_input(file.as_ref())?;
            let r = Request { invariant, normalized, scheme, sphere };
            let v = compute(&d, &r)?;
            Ok(match format {
                Format::Text => v.text(),
                Format::Json => {
                    let name = invariant.to_possible_value().unwrap().get_name().to_string();
                    format!("{}\n", v.json(&name, normalized))
                }
            })
        }
        Command::Scramble { file, moves, seed, framed } => {
            let d = read_input(file.as_ref())?;
            let (s, _) = d.scramble(&ScrambleOptions { steps: moves, seed, framed, max_crossings: None });
            Ok(s.to_text())
        }
        Command::Compare { a, b, invariant, normalized, scheme, sphere, oracle } => {
            let (da, db) = (read_input(Some(&a))?, read_input(Some(&b))?);
            let r = Request { invariant, normalized, scheme, sphere };
            let (va, vb) = (compute(&da, &r)?, compute(&db, &r)?);
            if oracle {
                oracle_check(&da, &r, &va)?;
                oracle_check(&db, &r, &vb)?;
            }
            if va == vb {
                Ok("equal\n".into())
            } else {
                Err(Failure::Different)
            }
        }
        Command::Corpus { action, dir } => {
            let c = match dir {
                Some(p) => Corpus::load(p)?,
                None => Corpus::bundled()?,
            };
            match action {
                CorpusAction::List => Ok(c
                    .manifest
                    .entries
                    .iter()
                    .map(|e| format!("{}\t{}\t{}\n", e.name, e.provenance, e.crossings))
                    .collect()),
                CorpusAction::Show { name } => Ok(c.text(c.entry(&name)?)?),
                CorpusAction::Check => corpus_check(&c),
            }
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("LINKOID_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Different => println!("different"),
                Failure::Parse(m) | Failure::Capacity(m) | Failure::Oracle(m) | Failure::Mismatch(m) => {
                    eprintln!("error: {m}")
                }
            }
            ExitCode::from(f.code())
        }
    }
}
