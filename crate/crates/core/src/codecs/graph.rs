use std::fmt;

use serde::Serialize;

use super::{binary_repr, decode_quaternary, encode_quaternary, parse_binary, CodecError};
use crate::graph::Digraph3;

/// The checks a graph encoding must pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphCondition {
    /// Even length with every bit pair a valid pre-image symbol.
    Pairing,
    /// Exactly `n` rows, each with three entry slots.
    RowCount,
    /// Row `i` is labelled `binary(i)` for `i = 1..n` in order.
    RowLabels,
    /// Entries are in-range vertex labels, present ones first, strictly ascending.
    Entries,
}

impl fmt::Display for GraphCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GraphCondition::Pairing => "pairing",
            GraphCondition::RowCount => "row count",
            GraphCondition::RowLabels => "row labels",
            GraphCondition::Entries => "entries",
        };
        f.write_str(s)
    }
}

fn fail(condition: GraphCondition, detail: impl Into<String>) -> CodecError {
    CodecError::Graph { condition, detail: detail.into() }
}

/// The pre-image over `{0,1,#}`: rows `binary(v+1)#e1#e2#e3` joined by `##`,
/// with out-neighbour `j` written `binary(j+1)` and absent slots empty.
pub fn graph_preimage(g: &Digraph3) -> String {
    let mut rows = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut row = binary_repr(v as u64 + 1);
        for slot in 0..3 {
            row.push('#');
            if let Some(&j) = g.out(v).get(slot) {
                row.push_str(&binary_repr(j as u64 + 1));
            }
        }
        rows.push(row);
    }
    rows.join("##")
}

pub fn encode_graph(g: &Digraph3) -> String {
    encode_quaternary(&graph_preimage(g)).expect("pre-image uses only 0, 1, #")
}

pub fn decode_graph(x: &str) -> Result<Digraph3, CodecError> {
    let pre = decode_quaternary(x).map_err(|e| fail(GraphCondition::Pairing, e.to_string()))?;
    if pre.contains('⊥') {
        return Err(fail(GraphCondition::Pairing, "pair 10 does not occur in graph encodings"));
    }
    let tokens: Vec<&str> = pre.split('#').collect();
    if (tokens.len() + 1) % 5 != 0 {
        return Err(fail(
            GraphCondition::RowCount,
            format!("{} fields do not form whole rows", tokens.len()),
        ));
    }
    let n = (tokens.len() + 1) / 5;
    let mut g = Digraph3::new(n)?;
    for r in 0..n {
        let row = &tokens[5 * r..(5 * r + 4)];
        if r + 1 < n && !tokens[5 * r + 4].is_empty() {
            return Err(fail(GraphCondition::RowCount, format!("row {} not followed by ##", r + 1)));
        }
        if parse_binary(row[0]) != Some(r as u64 + 1) {
            return Err(fail(
                GraphCondition::RowLabels,
                format!("row {} labelled `{}`", r + 1, row[0]),
            ));
        }
        let mut prev: Option<u64> = None;
        let mut ended = false;
        for e in &row[1..] {
            if e.is_empty() {
                ended = true;
                continue;
            }
            if ended {
                return Err(fail(GraphCondition::Entries, format!("row {}: entry after gap", r + 1)));
            }
            let v = parse_binary(e)
                .filter(|&v| v >= 1 && v <= n as u64)
                .ok_or_else(|| fail(GraphCondition::Entries, format!("row {}: entry `{e}`", r + 1)))?;
            if prev.is_some_and(|p| p >= v) {
                return Err(fail(GraphCondition::Entries, format!("row {}: not ascending", r + 1)));
            }
            prev = Some(v);
            g.add_edge(r, v as usize - 1)?;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEncodingReport {
    pub n: usize,
    /// In-degree plus out-degree at most 3 everywhere.
    pub degree_ok: bool,
}

/// Full check; with `expected_n`, also requires that vertex count.
pub fn validate_graph_encoding(
    x: &str,
    expected_n: Option<usize>,
) -> Result<GraphEncodingReport, CodecError> {
    let g = decode_graph(x)?;
    if let Some(n) = expected_n {
        if g.n() != n {
            return Err(fail(GraphCondition::RowCount, format!("{} rows, expected {n}", g.n())));
        }
    }
    Ok(GraphEncodingReport { n: g.n(), degree_ok: g.degree_violations().is_empty() })
}

/// The size parameter: vertex count of a valid encoding, `None` otherwise.
pub fn vertex_count_of_encoding(x: &str) -> Option<usize> {
    decode_graph(x).ok().map(|g| g.n())
}
