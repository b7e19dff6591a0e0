//! Python bindings. Build with `--features extension-module` and import the
//! resulting library as `twa`.

use std::fmt::Display;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use twa_core::codecs::{
    self, decode_graph, encode_graph, encode_graph_prime, encode_graph_unary, UnaryWord,
};
use twa_core::dtm::bundled::{acceptor, acceptor_bounds};
use twa_core::eval::{accepts_afa_fixpoint, accepts_nfa, default_depth, evaluate_leveled, narrowness_of};
use twa_core::graph::Digraph3;
use twa_core::oracle::reach;
use twa_core::pipeline::PipelineSpec;
use twa_core::report::{automaton_dot, build_family, report_state_complexity, Family, ReportOptions};
use twa_core::unary::{build_unary_3dstcon_solver, compress_unary_afa, rho_decompose};
use twa_core::{Error as CoreError, TwoWayAutomaton};

fn value_err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn core_err(e: CoreError) -> PyErr {
    match e {
        CoreError::Disagreement(d) => PyRuntimeError::new_err(format!("oracle disagreement: {d}")),
        other => value_err(other),
    }
}

/// A two-way automaton.
#[pyclass(name = "Automaton", module = "twa", frozen)]
pub struct PyAutomaton {
    inner: TwoWayAutomaton,
}

#[pymethods]
impl PyAutomaton {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TwoWayAutomaton::from_json(text).map(|inner| PyAutomaton { inner }).map_err(core_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    #[getter]
    fn alphabet(&self) -> String {
        self.inner.alphabet().iter().collect()
    }

    #[getter]
    fn branching_bound(&self) -> usize {
        self.inner.structure().branching_bound
    }

    #[getter]
    fn is_simple(&self) -> bool {
        self.inner.structure().is_simple
    }

    #[getter]
    fn has_universal_states(&self) -> bool {
        self.inner.has_universal_states()
    }

    /// Fixpoint evaluation with ∀ states, reachability otherwise.
    fn accepts(&self, x: &str) -> PyResult<bool> {
        if self.inner.has_universal_states() {
            accepts_afa_fixpoint(&self.inner, x).map_err(value_err)
        } else {
            accepts_nfa(&self.inner, x).map(|v| v.accepted).map_err(value_err)
        }
    }

    /// `(accepted, largest ∀-level width)` of the leveled computation graph.
    fn evaluate_leveled(&self, x: &str) -> PyResult<(bool, usize)> {
        let (v, g) = evaluate_leveled(&self.inner, x, default_depth(&self.inner, x)).map_err(value_err)?;
        Ok((v, narrowness_of(&g).max_forall_width))
    }

    /// The ⟨M⟩ encoding with branching bound `c`.
    fn encode(&self, c: usize) -> PyResult<String> {
        codecs::encode_automaton(&self.inner, c).map_err(value_err)
    }

    fn to_dot(&self) -> String {
        automaton_dot(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Automaton(states={}, alphabet={:?})", self.inner.state_count(), self.alphabet())
    }
}

/// A directed graph with out-degree at most three.
#[pyclass(name = "Graph", module = "twa", frozen)]
pub struct PyGraph {
    inner: Digraph3,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Digraph3::from_edges(n, &edges).map(|inner| PyGraph { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Digraph3::parse_edge_list(text).map(|inner| PyGraph { inner }).map_err(value_err)
    }

    /// Inverse of [`PyGraph::encode`].
    #[staticmethod]
    fn decode(x: &str) -> PyResult<Self> {
        decode_graph(x).map(|inner| PyGraph { inner }).map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    /// ⟨G⟩ over {0,1}.
    fn encode(&self) -> String {
        encode_graph(&self.inner)
    }

    fn encode_prime(&self) -> PyResult<String> {
        encode_graph_prime(&self.inner).map_err(value_err)
    }

    /// Unary length as a factor list such as `"2*5"`.
    fn encode_unary(&self) -> PyResult<String> {
        encode_graph_unary(&self.inner).map(|e| e.to_string()).map_err(value_err)
    }

    /// Whether `t` is reachable from `s`; defaults to `0` and `n - 1`.
    #[pyo3(signature = (s = 0, t = None))]
    fn reachable(&self, s: usize, t: Option<usize>) -> PyResult<bool> {
        let t = t.unwrap_or(self.inner.n() - 1);
        if s >= self.inner.n() || t >= self.inner.n() {
            return Err(value_err(format!("vertex out of range for n = {}", self.inner.n())));
        }
        Ok(reach(&self.inner, s, t))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={:?})", self.inner.n(), self.inner.edges())
    }
}

#[pyfunction]
fn encode_quaternary(s: &str) -> PyResult<String> {
    codecs::encode_quaternary(s).map_err(value_err)
}

#[pyfunction]
fn decode_quaternary(s: &str) -> PyResult<String> {
    codecs::decode_quaternary(s).map_err(value_err)
}

#[pyfunction]
fn bin_fixed(width: usize, i: u64) -> PyResult<String> {
    codecs::bin_fixed(width, i).map_err(value_err)
}

/// Family member at size `n`: validator, solver, unary-solver or
/// dtm-afa[:name].
#[pyfunction]
fn build(family: &str, n: usize) -> PyResult<PyAutomaton> {
    let fam: Family = family.parse().map_err(core_err)?;
    build_family(&fam, n).map(|inner| PyAutomaton { inner }).map_err(core_err)
}

/// `(graph, source, target)` for a simple 2NFA and input.
#[pyfunction]
fn nfa_to_graph(m: &PyAutomaton, x: &str) -> PyResult<(PyGraph, usize, usize)> {
    let r = twa_core::nfa_to_graph(&m.inner, x).map_err(value_err)?;
    Ok((PyGraph { inner: r.graph }, r.source, r.target))
}

/// Narrow 2AFA for a bundled DTM acceptor on inputs of length `n`.
#[pyfunction]
fn dtm_to_narrow_afa(name: &str, n: usize) -> PyResult<PyAutomaton> {
    let d = acceptor(name).ok_or_else(|| value_err(format!("unknown DTM `{name}`")))?;
    let a = twa_core::dtm_to_narrow_afa(&d, &acceptor_bounds(n), n).map_err(value_err)?;
    Ok(PyAutomaton { inner: a.machine })
}

#[pyfunction]
fn eliminate_stationary_moves(m: &PyAutomaton) -> PyAutomaton {
    PyAutomaton { inner: twa_core::stationary::eliminate_stationary_moves(&m.inner) }
}

#[pyfunction]
fn graph_binary_to_prime(x: &str) -> PyResult<String> {
    twa_core::graph_binary_to_prime(x).map_err(value_err)
}

/// Reachability verdict of the unary solver for `n` vertices on `1^length`,
/// `length` a decimal or a factor list.
#[pyfunction]
fn unary_solve(length: &str, n: usize) -> PyResult<bool> {
    let e: UnaryWord = length.parse().map_err(value_err)?;
    let m = build_unary_3dstcon_solver(n).map_err(value_err)?;
    compress_unary_afa(&m, n, 0).and_then(|c| c.evaluate_unary(&e)).map_err(value_err)
}

/// `(tail, cycle, end)` of the sweep map from state `q`, as state names.
#[pyfunction]
fn rho_decomposition(m: &PyAutomaton, q: usize) -> PyResult<(Vec<String>, Vec<String>, String)> {
    let r = rho_decompose(&m.inner, q).map_err(value_err)?;
    let names = |qs: &[usize]| qs.iter().map(|&p| m.inner.name(p).to_string()).collect();
    let end = serde_json::to_value(r.end).map_err(value_err)?;
    Ok((names(&r.tail), names(&r.cycle), end.as_str().unwrap_or_default().to_string()))
}

/// Runs a JSON pipeline description; returns the manifest as JSON.
#[pyfunction]
fn run_pipeline(spec: &str) -> PyResult<String> {
    let spec: PipelineSpec = serde_json::from_str(spec).map_err(value_err)?;
    twa_core::run_pipeline(&spec).map(|m| m.to_json()).map_err(core_err)
}

/// State-count table as CSV.
#[pyfunction]
#[pyo3(signature = (family, lo, hi, seed = 0))]
fn report_state_complexity_csv(family: &str, lo: usize, hi: usize, seed: u64) -> PyResult<String> {
    let fam: Family = family.parse().map_err(core_err)?;
    let opts = ReportOptions { seed, ..ReportOptions::default() };
    Ok(report_state_complexity(lo..=hi, &fam, &opts).to_csv())
}

/// Two-way finite automata workbench.
#[pymodule(name = "twa")]
mod twa_module {
    #[pymodule_export]
    use super::{
        bin_fixed, build, decode_quaternary, dtm_to_narrow_afa, eliminate_stationary_moves,
        encode_quaternary, graph_binary_to_prime, nfa_to_graph, report_state_complexity_csv,
        rho_decomposition, run_pipeline, unary_solve, PyAutomaton, PyGraph,
    };
}
