//! Simple 2DFA accepting exactly the valid encodings of `n`-vertex graphs.
//!
//! Three sweeps. The first checks the row skeleton, the row labels
//! `binary(1)..binary(n)`, that entries are `binary(j)` with `1 <= j <= n`,
//! and that present entries come first in each row. The second and third
//! check `e1 < e2` and `e2 < e3` by holding the smaller value while comparing
//! the next one digit by digit. Each sweep carries `O(n log n)` states.

use std::cmp::Ordering;

use super::stream::{build_quad_machine, numeral, NumeralCmp, Quad, QuadSweeper};
use crate::automaton::TwoWayAutomaton;
use crate::builder::{BuildError, Target};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    /// First sweep: row `row`, field `field` (0 label, 1..=3 entries, 4 gap).
    Syntax { row: usize, field: u8, tok: Tok, gap: bool },
    /// Ordering sweep for slots `slot` and `slot + 1`.
    Order { slot: u8, field: u8, tok: OrderTok },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Tok {
    Label(u8),
    Entry(Option<NumeralCmp>),
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum OrderTok {
    Idle,
    /// Reading the first slot; value so far.
    Hold(u64),
    /// First slot was empty.
    Absent,
    /// First slot held `v`; comparing the second slot against it.
    Compare { v: u64, cmp: Option<NumeralCmp>, longer: bool },
}

struct Validator {
    n: usize,
    bin_n: Vec<u8>,
    labels: Vec<Vec<u8>>,
}

impl Validator {
    fn syntax_field_start(&self, row: usize, field: u8, gap: bool) -> Target<Key> {
        let tok = match field {
            0 => Tok::Label(0),
            1..=3 => Tok::Entry(None),
            _ => Tok::Gap,
        };
        Target::To(Key::Syntax { row, field, tok, gap })
    }

    fn entry_ok(&self, e: &Option<NumeralCmp>) -> bool {
        match e {
            None => true,
            Some(c) => c.finish(&self.bin_n) != Ordering::Greater,
        }
    }

    fn syntax(&self, row: usize, field: u8, tok: &Tok, gap: bool, q: Quad) -> Target<Key> {
        let same = |tok: Tok| Target::To(Key::Syntax { row, field, tok, gap });
        match (tok, q) {
            (_, Quad::Bot) => Target::Reject,
            (Tok::Label(pos), _) => match q.digit() {
                Some(d) => {
                    let label = &self.labels[row];
                    if (*pos as usize) < label.len() && label[*pos as usize] == d {
                        same(Tok::Label(pos + 1))
                    } else {
                        Target::Reject
                    }
                }
                None if *pos as usize == self.labels[row].len() => self.syntax_field_start(row, 1, false),
                None => Target::Reject,
            },
            (Tok::Entry(e), _) => match q.digit() {
                Some(d) => {
                    if gap || (e.is_none() && d == 0) {
                        return Target::Reject;
                    }
                    match e.unwrap_or(NumeralCmp::START).push(&self.bin_n, d) {
                        Some(c) => same(Tok::Entry(Some(c))),
                        None => Target::Reject,
                    }
                }
                None => {
                    if !self.entry_ok(e) {
                        return Target::Reject;
                    }
                    let gap = gap || e.is_none();
                    if field < 3 {
                        self.syntax_field_start(row, field + 1, gap)
                    } else if row + 1 < self.n {
                        self.syntax_field_start(row, 4, false)
                    } else {
                        Target::Reject
                    }
                }
            },
            (Tok::Gap, Quad::Hash) => self.syntax_field_start(row + 1, 0, false),
            (Tok::Gap, _) => Target::Reject,
        }
    }

    fn order(&self, slot: u8, field: u8, tok: &OrderTok, q: Quad) -> Target<Key> {
        let cap = self.n as u64;
        let next_field = (field + 1) % 5;
        let at = |field: u8, tok: OrderTok| Target::To(Key::Order { slot, field, tok });
        match q.digit() {
            Some(d) => match tok {
                OrderTok::Hold(v) => {
                    let v = 2 * v + d as u64;
                    if v > cap {
                        Target::Reject
                    } else {
                        at(field, OrderTok::Hold(v))
                    }
                }
                OrderTok::Compare { v, cmp, longer } => {
                    let bin_v = numeral(*v);
                    let (cmp, longer) = match cmp.unwrap_or(NumeralCmp::START).push(&bin_v, d) {
                        Some(c) if !longer => (Some(c), false),
                        _ => (*cmp, true),
                    };
                    at(field, OrderTok::Compare { v: *v, cmp, longer })
                }
                _ => at(field, tok.clone()),
            },
            None => {
                // `#` closes the current field.
                let carried = match tok {
                    OrderTok::Hold(0) => OrderTok::Absent,
                    OrderTok::Hold(v) => OrderTok::Compare { v: *v, cmp: None, longer: false },
                    OrderTok::Compare { v, cmp, longer } => {
                        if !exceeds(*v, cmp, *longer) {
                            return Target::Reject;
                        }
                        OrderTok::Idle
                    }
                    _ => OrderTok::Idle,
                };
                let tok = if next_field == slot {
                    OrderTok::Hold(0)
                } else if next_field == slot + 1 {
                    carried
                } else {
                    OrderTok::Idle
                };
                at(next_field, tok)
            }
        }
    }

    fn order_end_ok(&self, slot: u8, field: u8, tok: &OrderTok) -> bool {
        // The last row ends inside field 3 without a closing `#`.
        if field != 3 {
            return false;
        }
        match tok {
            OrderTok::Compare { v, cmp, longer } if slot == 2 => exceeds(*v, cmp, *longer),
            _ => true,
        }
    }
}

/// Whether the compared slot (possibly empty) is acceptable after `v`.
fn exceeds(v: u64, cmp: &Option<NumeralCmp>, longer: bool) -> bool {
    match cmp {
        None => true,
        Some(c) => longer || c.finish(&numeral(v)) == Ordering::Greater,
    }
}

impl QuadSweeper for Validator {
    type K = Key;

    fn start(&self) -> Target<Key> {
        self.syntax_field_start(0, 0, false)
    }

    fn quad(&self, k: &Key, q: Quad) -> Target<Key> {
        match k {
            Key::Syntax { row, field, tok, gap } => self.syntax(*row, *field, tok, *gap, q),
            Key::Order { slot, field, tok } => {
                if q == Quad::Bot {
                    Target::Reject
                } else {
                    self.order(*slot, *field, tok, q)
                }
            }
        }
    }

    fn dollar(&self, k: &Key) -> Vec<Target<Key>> {
        let t = match k {
            Key::Syntax { row, field: 3, tok: Tok::Entry(e), gap } => {
                let last = *row + 1 == self.n;
                if last && self.entry_ok(e) && !(*gap && e.is_some()) {
                    Target::To(Key::Order { slot: 1, field: 0, tok: OrderTok::Idle })
                } else {
                    Target::Reject
                }
            }
            Key::Order { slot, field, tok } if self.order_end_ok(*slot, *field, tok) => {
                if *slot == 1 {
                    Target::To(Key::Order { slot: 2, field: 0, tok: OrderTok::Idle })
                } else {
                    Target::Accept
                }
            }
            _ => Target::Reject,
        };
        vec![t]
    }
}

/// Simple 2DFA over `{0,1}` accepting `x` iff `x` encodes an `n`-vertex graph.
pub fn build_graph_validator(n: usize) -> Result<TwoWayAutomaton, BuildError> {
    if n == 0 {
        return Err(BuildError::Parameter("n must be at least 1".into()));
    }
    let v = Validator {
        n,
        bin_n: numeral(n as u64),
        labels: (1..=n as u64).map(numeral).collect(),
    };
    Ok(build_quad_machine(&v, "graph validator")?.machine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::{decode_graph, encode_graph};
    use crate::eval::accepts_nfa;
    use crate::graph::Digraph3;
    use crate::oracle::{all_words, enumerate_graphs};

    #[test]
    fn shape() {
        for n in 1..6 {
            let m = build_graph_validator(n).unwrap();
            let s = m.structure();
            assert!(s.is_simple && s.is_deterministic, "n = {n}");
        }
    }

    #[test]
    fn matches_decoder_on_short_words() {
        for n in 1..=3 {
            let m = build_graph_validator(n).unwrap();
            for x in all_words(&['0', '1'], 12) {
                let want = decode_graph(&x).map(|g| g.n() == n).unwrap_or(false);
                assert_eq!(accepts_nfa(&m, &x).unwrap().accepted, want, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn accepts_every_encoding_of_its_size_only() {
        let m2 = build_graph_validator(2).unwrap();
        for g in enumerate_graphs(2).unwrap() {
            assert!(accepts_nfa(&m2, &encode_graph(&g)).unwrap().accepted);
        }
        let g3 = Digraph3::from_edges(3, &[(0, 1)]).unwrap();
        assert!(!accepts_nfa(&m2, &encode_graph(&g3)).unwrap().accepted);
        assert!(!accepts_nfa(&m2, "01").unwrap().accepted);
    }
}
