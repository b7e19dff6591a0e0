//! State-count tables for the machine families, with shape fits.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::{Move, Symbol, TwoWayAutomaton};
use crate::dtm::bundled::{acceptor, acceptor_bounds};
use crate::dtm::dtm_to_narrow_afa;
use crate::error::Error;
use crate::eval::{default_depth, measure_narrowness};
use crate::reductions::{build_3dstcon_solver, build_graph_validator};
use crate::unary::build_unary_3dstcon_solver;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Family {
    Validator,
    Solver,
    UnarySolver,
    /// Narrow 2AFA for a bundled DTM; `n` is the input length.
    DtmAfa(String),
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "validator" => Ok(Family::Validator),
            "solver" => Ok(Family::Solver),
            "unary-solver" => Ok(Family::UnarySolver),
            "dtm-afa" => Ok(Family::DtmAfa("block-copy".into())),
            _ => match s.strip_prefix("dtm-afa:") {
                Some(name) if acceptor(name).is_some() => Ok(Family::DtmAfa(name.into())),
                _ => Err(Error::Invalid(format!("unknown family `{s}`"))),
            },
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Validator => f.write_str("validator"),
            Family::Solver => f.write_str("solver"),
            Family::UnarySolver => f.write_str("unary-solver"),
            Family::DtmAfa(name) => write!(f, "dtm-afa:{name}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateRow {
    pub n: usize,
    pub states: usize,
    pub branching: usize,
    /// Largest ∀-level width over the sampled inputs.
    pub narrowness: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeFit {
    pub shape: &'static str,
    /// Largest `states / shape(n)` over rows with `n >= 2`.
    pub max_ratio: f64,
    /// Least-squares `a` in `states ≈ a · shape(n)`.
    pub least_squares: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateTable {
    pub family: String,
    pub rows: Vec<StateRow>,
    pub fits: Vec<ShapeFit>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Stop once a row exceeds this many states.
    pub cap: usize,
    /// Random inputs per row for narrowness (2AFA families only).
    pub samples: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { cap: 5_000_000, samples: 2, seed: 0 }
    }
}

const SHAPES: [(&str, fn(f64) -> f64); 3] = [
    ("n log n", |n| n * n.log2()),
    ("n^2 log n", |n| n * n * n.log2()),
    ("n^3 log n", |n| n * n * n * n.log2()),
];

/// The machine of `family` at size `n`.
pub fn build_family(family: &Family, n: usize) -> Result<TwoWayAutomaton, Error> {
    Ok(match family {
        Family::Validator => build_graph_validator(n)?,
        Family::Solver => build_3dstcon_solver(n)?,
        Family::UnarySolver => build_unary_3dstcon_solver(n)?,
        Family::DtmAfa(name) => {
            let d = acceptor(name).ok_or_else(|| Error::Invalid(format!("unknown DTM `{name}`")))?;
            dtm_to_narrow_afa(&d, &acceptor_bounds(n), n)?.machine
        }
    })
}

pub fn report_state_complexity(
    ns: RangeInclusive<usize>,
    family: &Family,
    opts: &ReportOptions,
) -> StateTable {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for n in ns {
        let m = match build_family(family, n) {
            Ok(m) => m,
            Err(e) => {
                warnings.push(format!("stopped at n = {n}: {e}"));
                break;
            }
        };
        let s = m.structure();
        let narrowness = if m.has_universal_states() {
            let mut width = 0;
            for _ in 0..opts.samples {
                let x: String = (0..n).map(|_| m.alphabet()[rng.gen_range(0..m.alphabet().len())]).collect();
                match measure_narrowness(&m, &x, default_depth(&m, &x)) {
                    Ok(w) => width = width.max(w.max_forall_width),
                    Err(e) => warnings.push(format!("n = {n}: narrowness on `{x}`: {e}")),
                }
            }
            Some(width)
        } else {
            None
        };
        rows.push(StateRow { n, states: s.state_count, branching: s.branching_bound, narrowness });
        if s.state_count > opts.cap {
            warnings.push(format!("stopped after n = {n}: {} states exceed the cap {}", s.state_count, opts.cap));
            break;
        }
    }
    let fits = SHAPES
        .iter()
        .map(|&(shape, f)| {
            let pts: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.n >= 2).map(|r| (f(r.n as f64), r.states as f64)).collect();
            let max_ratio = pts.iter().map(|&(x, y)| y / x).fold(0.0, f64::max);
            let sxy: f64 = pts.iter().map(|&(x, y)| x * y).sum();
            let sxx: f64 = pts.iter().map(|&(x, _)| x * x).sum();
            let least_squares = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            ShapeFit { shape, max_ratio, least_squares }
        })
        .collect();
    StateTable { family: family.to_string(), rows, fits, warnings }
}

impl StateTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,states,branching,narrowness\n");
        for r in &self.rows {
            let w = r.narrowness.map(|w| w.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{}", r.n, r.states, r.branching, w);
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("family {}\n{:>4} {:>10} {:>4} {:>10}\n", self.family, "n", "states", "c", "narrow");
        for r in &self.rows {
            let w = r.narrowness.map(|w| w.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "{:>4} {:>10} {:>4} {:>10}", r.n, r.states, r.branching, w);
        }
        for f in &self.fits {
            let _ = writeln!(s, "fit {:<10} max ratio {:>12.4}  least squares {:>12.4}", f.shape, f.max_ratio, f.least_squares);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// Transition diagram in Graphviz syntax.
pub fn automaton_dot(a: &TwoWayAutomaton) -> String {
    use crate::automaton::StateKind;
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..a.state_count() {
        let shape = match a.kind(q) {
            StateKind::Accepting => "doublecircle",
            StateKind::Rejecting => "octagon",
            StateKind::Universal => "box",
            StateKind::Existential => "circle",
        };
        let _ = writeln!(s, "  q{q} [label=\"{}\", shape={shape}];", a.name(q).replace('"', "\\\""));
    }
    let _ = writeln!(s, "  start -> q{};", a.initial());
    for q in 0..a.state_count() {
        for sym in a.symbols() {
            for &(p, mv) in a.transitions(q, sym) {
                let d = match mv {
                    Move::Left => "-1",
                    Move::Stay => "0",
                    Move::Right => "+1",
                };
                let label = match sym {
                    Symbol::Letter(c) => c.to_string(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "  q{q} -> q{p} [label=\"{label},{d}\"];");
            }
        }
    }
    s.push_str("}\n");
    s
}
