//! Small machines used by the tests, the CLI and the pipelines.
//!
//! Every bundled machine moves its work head back and forth between cells 0
//! and 1, tracking the side in its state, so two work cells suffice.

use super::{DtmBuilder, DtmStateKind, ResourceBounds, SpaceBoundedDtm};
use crate::automaton::{Move, Symbol};

const BITS: [char; 2] = ['0', '1'];

fn work_move(side: usize) -> Move {
    if side == 0 {
        Move::Right
    } else {
        Move::Left
    }
}

fn input_move(sym: Symbol) -> Move {
    if sym == Symbol::Dollar {
        Move::Left
    } else {
        Move::Right
    }
}

fn all_inputs() -> [Symbol; 4] {
    [Symbol::Cent, Symbol::Letter('0'), Symbol::Letter('1'), Symbol::Dollar]
}

/// Bounds used for the bundled acceptors on inputs of length `len`.
pub fn acceptor_bounds(len: usize) -> ResourceBounds {
    ResourceBounds { time_bound: 2 * (len + 2), space_bound: 2, narrowness_bound: None }
}

/// Accepts iff the number of 1s is even. Halts after `|x| + 2` steps,
/// marking the two work cells `L` and `R` as it passes.
pub fn parity() -> SpaceBoundedDtm {
    let mut b = DtmBuilder::new(BITS.to_vec(), vec!['B', 'L', 'R']);
    let mut st = [[0usize; 2]; 2];
    for (p, name) in ["even", "odd"].iter().enumerate() {
        for side in 0..2 {
            st[p][side] = b.add_state(format!("{name}{side}"), DtmStateKind::Working);
        }
    }
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    let rej = b.add_state("rej", DtmStateKind::Rejecting);
    for p in 0..2 {
        for side in 0..2 {
            let mark = if side == 0 { 'L' } else { 'R' };
            for sym in all_inputs() {
                let to = match sym {
                    Symbol::Dollar => [acc, rej][p],
                    Symbol::Letter('1') => st[1 - p][1 - side],
                    _ => st[p][1 - side],
                };
                for g in ['B', 'L', 'R'] {
                    b.on(st[p][side], sym, g, to, mark, input_move(sym), work_move(side), None);
                }
            }
        }
    }
    b.set_initial(st[0][0]);
    b.build().expect("parity machine is well formed")
}

/// Accepts in one step from `¢`.
pub fn immediate_accept() -> SpaceBoundedDtm {
    let mut b = DtmBuilder::new(BITS.to_vec(), vec!['B']);
    let q = b.add_state("q0", DtmStateKind::Working);
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    for sym in all_inputs() {
        b.on(q, sym, 'B', acc, 'B', input_move(sym), Move::Right, None);
    }
    b.build().expect("immediate-accept machine is well formed")
}

/// Accepts `x = w^k` with `|w| = 2`, including the empty word. The first
/// two letters are copied into the work cells and every later letter is
/// compared with the cell of the same parity.
pub fn block_copy() -> SpaceBoundedDtm {
    let work = ['B', '0', '1'];
    let mut b = DtmBuilder::new(BITS.to_vec(), work.to_vec());
    let start = b.add_state("start", DtmStateKind::Working);
    let c1 = b.add_state("copy1", DtmStateKind::Working);
    let c2 = b.add_state("copy2", DtmStateKind::Working);
    let cmp1 = b.add_state("cmp1", DtmStateKind::Working);
    let cmp0 = b.add_state("cmp0", DtmStateKind::Working);
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    let rej = b.add_state("rej", DtmStateKind::Rejecting);
    // The work head is on cell 1 in copy1 and cmp1, on cell 0 otherwise.
    let side = |q: usize| usize::from(q == c1 || q == cmp1);
    for q in [start, c1, c2, cmp1, cmp0] {
        for sym in all_inputs() {
            for g in work {
                let (to, write) = match (sym, q) {
                    (_, s) if s == start => (c1, g),
                    (Symbol::Dollar, s) if s == c1 || s == cmp1 => (acc, g),
                    (Symbol::Letter(a), s) if s == c1 => (c2, a),
                    (Symbol::Letter(a), s) if s == c2 => (cmp1, a),
                    (Symbol::Letter(a), s) if a == g && s == cmp1 => (cmp0, g),
                    (Symbol::Letter(a), s) if a == g && s == cmp0 => (cmp1, g),
                    _ => (rej, g),
                };
                b.on(q, sym, g, to, write, input_move(sym), work_move(side(q)), None);
            }
        }
    }
    b.set_initial(start);
    b.build().expect("block-copy machine is well formed")
}

/// Transducer writing its input to the output tape.
pub fn identity_transducer() -> SpaceBoundedDtm {
    let mut b = DtmBuilder::new(BITS.to_vec(), vec!['B']).with_output(BITS.to_vec());
    let sides = [b.add_state("s0", DtmStateKind::Working), b.add_state("s1", DtmStateKind::Working)];
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    for side in 0..2 {
        for sym in all_inputs() {
            let (to, out) = match sym {
                Symbol::Dollar => (acc, None),
                Symbol::Letter(a) => (sides[1 - side], Some(a)),
                Symbol::Cent => (sides[1 - side], None),
            };
            b.on(sides[side], sym, 'B', to, 'B', input_move(sym), work_move(side), out);
        }
    }
    b.set_initial(sides[0]);
    b.build().expect("identity transducer is well formed")
}

/// Transducer writing `s` whatever the input, one letter per step, with the
/// input head bouncing between `¢` and the next cell.
pub fn constant_transducer(s: &str) -> SpaceBoundedDtm {
    let out: Vec<char> = s.chars().collect();
    let mut alphabet = out.clone();
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut b = DtmBuilder::new(BITS.to_vec(), vec!['B']).with_output(alphabet);
    let states: Vec<[usize; 2]> = (0..out.len())
        .map(|t| [0, 1].map(|side| b.add_state(format!("emit{t}.{side}"), DtmStateKind::Working)))
        .collect();
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    for (t, pair) in states.iter().enumerate() {
        for side in 0..2 {
            let to = states.get(t + 1).map_or(acc, |p| p[1 - side]);
            for sym in all_inputs() {
                let mv = if sym == Symbol::Cent { Move::Right } else { Move::Left };
                b.on(pair[side], sym, 'B', to, 'B', mv, work_move(side), Some(out[t]));
            }
        }
    }
    b.set_initial(states.first().map_or(acc, |p| p[0]));
    b.build().expect("constant transducer is well formed")
}

/// Transducer mapping a graph encoding to `1^n`, `n` its vertex count. A
/// valid encoding of an `n`-vertex graph has `5n - 2` separators, so one
/// `1` is written up front and one after every fifth separator. Outputs on
/// invalid encodings carry no meaning.
pub fn row_count_transducer() -> SpaceBoundedDtm {
    let mut b = DtmBuilder::new(BITS.to_vec(), vec!['B']).with_output(vec!['1']);
    let start = b.add_state("start", DtmStateKind::Working);
    // (pending bit, separators mod 5, side), numbered consecutively.
    let first = b.state_count();
    for pending in 0..3 {
        for count in 0..5 {
            for side in 0..2 {
                b.add_state(format!("p{pending}c{count}s{side}"), DtmStateKind::Working);
            }
        }
    }
    let st = |(pending, count, side): (usize, usize, usize)| first + (pending * 5 + count) * 2 + side;
    let acc = b.add_state("acc", DtmStateKind::Accepting);
    for sym in all_inputs() {
        let out = (sym == Symbol::Cent).then_some('1');
        b.on(start, sym, 'B', st((0, 0, 1)), 'B', input_move(sym), Move::Right, out);
    }
    for pending in 0..3 {
        for count in 0..5 {
            for side in 0..2 {
                let q = st((pending, count, side));
                for sym in all_inputs() {
                    let (to, out) = match sym {
                        Symbol::Dollar => (acc, None),
                        Symbol::Cent => (st((pending, count, 1 - side)), None),
                        Symbol::Letter(a) => {
                            let bit = usize::from(a == '1');
                            match pending {
                                0 => (st((1 + bit, count, 1 - side)), None),
                                2 if bit == 1 => {
                                    let c = (count + 1) % 5;
                                    (st((0, c, 1 - side)), (c == 0).then_some('1'))
                                }
                                _ => (st((0, count, 1 - side)), None),
                            }
                        }
                    };
                    b.on(q, sym, 'B', to, 'B', input_move(sym), work_move(side), out);
                }
            }
        }
    }
    b.set_initial(start);
    b.build().expect("row-count transducer is well formed")
}

/// Bundled acceptors by name.
pub fn acceptor(name: &str) -> Option<SpaceBoundedDtm> {
    match name {
        "parity" => Some(parity()),
        "immediate-accept" => Some(immediate_accept()),
        "block-copy" => Some(block_copy()),
        _ => None,
    }
}

pub const ACCEPTORS: [&str; 3] = ["parity", "immediate-accept", "block-copy"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::all_words;

    #[test]
    fn acceptors_decide_their_languages() {
        for x in all_words(&BITS, 6) {
            let bounds = acceptor_bounds(x.len());
            let ones = x.chars().filter(|&c| c == '1').count();
            let r = parity().run(&x, &bounds).unwrap();
            assert_eq!(r.accepted(), ones % 2 == 0, "{x}");
            assert_eq!(r.steps, x.len() + 2);
            assert!(immediate_accept().run(&x, &bounds).unwrap().accepted());
            let b: Vec<char> = x.chars().collect();
            let blocks = b.len() % 2 == 0 && (2..b.len()).all(|i| b[i] == b[i - 2]);
            assert_eq!(block_copy().run(&x, &bounds).unwrap().accepted(), blocks, "{x}");
        }
    }

    #[test]
    fn transducer_outputs() {
        let bounds = ResourceBounds { time_bound: 100, space_bound: 2, narrowness_bound: None };
        assert_eq!(identity_transducer().run("0110", &bounds).unwrap().output, "0110");
        assert_eq!(constant_transducer("101").run("", &bounds).unwrap().output, "101");
        assert_eq!(constant_transducer("101").run("0011", &bounds).unwrap().output, "101");
        assert!(constant_transducer("").run("0", &bounds).unwrap().accepted());
    }
}
