use super::{bin_fixed, decode_quaternary, encode_quaternary, parse_bin_fixed, CodecError};
use crate::automaton::{AutomatonBuilder, Geometry, Move, StateId, StateKind, TwoWayAutomaton};

/// Everything about a machine except its transition table. The encoding
/// carries only the table, so decoding needs this alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub names: Vec<String>,
    pub kinds: Vec<StateKind>,
    pub alphabet: Vec<char>,
    pub initial: StateId,
    pub geometry: Geometry,
}

impl Skeleton {
    pub fn of(m: &TwoWayAutomaton) -> Self {
        Skeleton {
            names: m.names().to_vec(),
            kinds: (0..m.state_count()).map(|q| m.kind(q)).collect(),
            alphabet: m.alphabet().to_vec(),
            initial: m.initial(),
            geometry: m.geometry(),
        }
    }
}

/// Width of the state field: `ceil(log2(|Q|+1)) + 1`.
pub fn entry_width(states: usize) -> usize {
    let mut bits = 0;
    while (1usize << bits) < states + 1 {
        bits += 1;
    }
    bits + 1
}

fn err(s: impl Into<String>) -> CodecError {
    CodecError::Automaton(s.into())
}

/// Rows `#e1#…#ec#` per (state, symbol), state-major, joined by `##`.
pub fn encode_automaton(m: &TwoWayAutomaton, c: usize) -> Result<String, CodecError> {
    let w = entry_width(m.state_count());
    let mut rows = Vec::with_capacity(m.state_count() * m.columns());
    for q in 0..m.state_count() {
        for sym in m.symbols() {
            let list = m.transitions(q, sym);
            if list.len() > c {
                return Err(err(format!(
                    "state `{}` on `{sym}` has {} choices, bound is {c}",
                    m.name(q),
                    list.len()
                )));
            }
            let mut row = String::from("#");
            for slot in 0..c {
                match list.get(slot) {
                    Some(&(p, mv)) => {
                        row.push_str(&bin_fixed(w, p as u64 + 1).expect("width fits every state"));
                        row.push(match mv {
                            Move::Right => '0',
                            Move::Left => '1',
                            Move::Stay => return Err(err("stationary moves have no code")),
                        });
                    }
                    None => row.push('⊥'),
                }
                row.push('#');
            }
            rows.push(row);
        }
    }
    Ok(encode_quaternary(&rows.join("##")).expect("rows use the pre-image alphabet"))
}

pub fn decode_automaton(x: &str, skel: &Skeleton, c: usize) -> Result<TwoWayAutomaton, CodecError> {
    let pre = decode_quaternary(x)?;
    let states = skel.names.len();
    let cols = skel.alphabet.len() + 2;
    let rows = states * cols;
    let w = entry_width(states);
    let tokens: Vec<&str> = pre.split('#').collect();
    // "" then c slots per row, three empty fields between rows, then "".
    let expected = if rows == 0 { 1 } else { 2 + rows * c + 3 * (rows - 1) };
    if c == 0 || tokens.len() != expected {
        return Err(err(format!("{} fields, expected {expected}", tokens.len())));
    }
    let mut b = AutomatonBuilder::new(skel.alphabet.clone(), skel.geometry);
    for (name, kind) in skel.names.iter().zip(&skel.kinds) {
        b.add_state(name.clone(), *kind);
    }
    b.set_initial(skel.initial);
    let mut pos = 0;
    for r in 0..rows {
        if r == 0 {
            if !tokens[0].is_empty() {
                return Err(err("encoding must start with #"));
            }
            pos = 1;
        } else {
            if tokens[pos..pos + 3].iter().any(|t| !t.is_empty()) {
                return Err(err(format!("row {r}: bad separator")));
            }
            pos += 3;
        }
        let (q, col) = (r / cols, r % cols);
        let sym = if col < skel.alphabet.len() {
            crate::automaton::Symbol::Letter(skel.alphabet[col])
        } else if col == skel.alphabet.len() {
            crate::automaton::Symbol::Cent
        } else {
            crate::automaton::Symbol::Dollar
        };
        let mut padded = false;
        for slot in &tokens[pos..pos + c] {
            if *slot == "⊥" {
                padded = true;
                continue;
            }
            if padded {
                return Err(err(format!("row {r}: entry after padding")));
            }
            if slot.len() != w + 1 || !slot.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(err(format!("row {r}: malformed entry `{slot}`")));
            }
            let (state, dir) = slot.split_at(w);
            let p = parse_bin_fixed(state)
                .filter(|&p| p >= 1 && p as usize <= states)
                .ok_or_else(|| err(format!("row {r}: state field `{state}`")))?;
            let mv = if dir == "0" { Move::Right } else { Move::Left };
            b.add_transition(q, sym, p as usize - 1, mv);
        }
        pos += c;
    }
    if !tokens[pos].is_empty() {
        return Err(err("encoding must end with #"));
    }
    b.build().map_err(|e| err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Symbol;

    #[test]
    fn width_formula() {
        assert_eq!(entry_width(1), 2);
        assert_eq!(entry_width(2), 3);
        assert_eq!(entry_width(3), 3);
        assert_eq!(entry_width(4), 4);
    }

    #[test]
    fn one_state_one_symbol() {
        let mut b = AutomatonBuilder::new(vec!['a'], Geometry::Circular);
        let q = b.add_state("q", StateKind::Existential);
        b.add_transition(q, Symbol::Letter('a'), q, Move::Right);
        let m = b.build().unwrap();
        let x = encode_automaton(&m, 1).unwrap();
        let pre = decode_quaternary(&x).unwrap();
        // Three rows (a, ¢, $); only the first has a real entry.
        assert_eq!(pre, "#110####⊥####⊥#");
        assert_eq!(decode_automaton(&x, &Skeleton::of(&m), 1).unwrap(), m);
    }

    #[test]
    fn branching_over_bound_is_refused() {
        let mut b = AutomatonBuilder::new(vec!['a'], Geometry::Circular);
        let q = b.add_state("q", StateKind::Existential);
        b.add_transition(q, Symbol::Dollar, q, Move::Right);
        b.add_transition(q, Symbol::Dollar, q, Move::Left);
        let m = b.build().unwrap();
        assert!(encode_automaton(&m, 1).is_err());
        assert!(encode_automaton(&m, 2).is_ok());
    }
}
