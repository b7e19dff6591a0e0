//! Narrow alternating simulation of a space-bounded DTM, checked backwards
//! in time.
//!
//! A claim `(i, k, u)` states the content of work cell `k` after `i` steps.
//! When `u` carries the head it also fixes the state, and the automaton's
//! own head position stands for the DTM's input head. A claim is checked by
//! guessing the three cells around `k` one step earlier, moving to the input
//! cell the DTM read there, and then universally checking the three guessed
//! cells. Claims about time 0 are judged against the blank start tape.
//!
//! Every path cycles through the same three-step pattern (∃ claim, ∀
//! window, ∃ detour left behind by stationary-move elimination), so the
//! computation graph is leveled.

use std::collections::HashMap;

use serde::Serialize;

use super::{DtmError, DtmStateKind, ResourceBounds, SpaceBoundedDtm};
use crate::automaton::{Geometry, Move, Quantifier, Symbol, TwoWayAutomaton};
use crate::builder::{explore, ExploreOptions, Target};
use crate::stationary::eliminate_stationary_moves;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cell {
    Plain(usize),
    /// Head on this cell: `(state, symbol)`.
    Head(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    /// Outside the bounded work tape.
    Edge,
    At(Cell),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Claim {
    i: usize,
    k: usize,
    cell: Cell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Root,
    /// Walk to the input cell of the final configuration; phases 0 and 2
    /// are existential, phase 1 universal.
    Seek(u8, Claim),
    Claim(Claim),
    Window { i: usize, k: usize, w: [Slot; 3], read: Option<Symbol> },
}

type Guess = ([Slot; 3], Option<Symbol>, Move);

#[derive(Debug, Clone, Serialize)]
pub struct NarrowAfa {
    #[serde(skip)]
    pub machine: TwoWayAutomaton,
    pub states: usize,
    pub states_with_stationary_moves: usize,
    pub bounds: ResourceBounds,
    pub length: usize,
}

struct Rules<'a> {
    d: &'a SpaceBoundedDtm,
    space: usize,
    /// Predecessor windows by `(k, cell)`.
    guesses: HashMap<(usize, Cell), Vec<Guess>>,
}

impl<'a> Rules<'a> {
    fn new(d: &'a SpaceBoundedDtm, space: usize) -> Self {
        let mut r = Rules { d, space, guesses: HashMap::new() };
        let gamma = d.work_alphabet().len();
        let mut cells: Vec<Cell> = (0..gamma).map(Cell::Plain).collect();
        for q in 0..d.state_count() {
            cells.extend((0..gamma).map(|g| Cell::Head(q, g)));
        }
        for k in 0..space {
            let side = |edge: bool| -> Vec<Slot> {
                if edge {
                    vec![Slot::Edge]
                } else {
                    cells.iter().map(|&c| Slot::At(c)).collect()
                }
            };
            for &b in &side(k == 0) {
                for &c in &cells {
                    for &e in &side(k + 1 == space) {
                        let w = [b, Slot::At(c), e];
                        let heads = w.iter().filter(|s| matches!(s, Slot::At(Cell::Head(..)))).count();
                        if heads > 1 {
                            continue;
                        }
                        let reads: Vec<Option<Symbol>> = if heads == 0 {
                            vec![None]
                        } else {
                            d.input_symbols().into_iter().map(Some).collect()
                        };
                        for read in reads {
                            for f in [Move::Left, Move::Right] {
                                if let Some(cell) = r.next_center(k, &w, read, f) {
                                    r.guesses.entry((k, cell)).or_default().push((w, read, f));
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// Content of the middle cell one step after window `w`, given the
    /// input symbol read and the input head move `f`.
    fn next_center(&self, k: usize, w: &[Slot; 3], read: Option<Symbol>, f: Move) -> Option<Cell> {
        let Slot::At(center) = w[1] else { return None };
        let hat = w.iter().position(|s| matches!(s, Slot::At(Cell::Head(..))));
        let Some(h) = hat else {
            return match center {
                Cell::Plain(c) => Some(Cell::Plain(c)),
                Cell::Head(..) => None,
            };
        };
        let Slot::At(Cell::Head(p, sym)) = w[h] else { unreachable!() };
        let st = self.d.step(p, read?, sym)?;
        if st.input != f {
            return None;
        }
        let c = match center {
            Cell::Plain(c) => c,
            Cell::Head(_, c) => c,
        };
        match (h, st.work) {
            (1, Move::Left) if k == 0 => None,
            (1, _) => Some(Cell::Plain(st.write)),
            (0, Move::Right) | (2, Move::Left) => Some(Cell::Head(st.to, c)),
            _ => Some(Cell::Plain(c)),
        }
    }

    fn claim(&self, c: &Claim) -> Vec<(Target<Key>, Move)> {
        if c.i == 0 {
            return Vec::new();
        }
        let back = |f: Move| if f == Move::Left { Move::Right } else { Move::Left };
        self.guesses
            .get(&(c.k, c.cell))
            .into_iter()
            .flatten()
            .map(|&(w, read, f)| (Target::To(Key::Window { i: c.i - 1, k: c.k, w, read }), back(f)))
            .collect()
    }

    /// Targets of the universal split of a window at time `i`.
    fn split(&self, i: usize, k: usize, w: &[Slot; 3], at: Symbol) -> Vec<(Target<Key>, Move)> {
        let mut out = Vec::new();
        for (idx, slot) in w.iter().enumerate() {
            let Slot::At(cell) = *slot else { continue };
            let kk = k + idx - 1;
            let t = if i > 0 {
                Target::To(Key::Claim(Claim { i, k: kk, cell }))
            } else {
                let ok = match cell {
                    Cell::Plain(g) => g == 0 && kk != 0,
                    Cell::Head(q, g) => q == self.d.initial() && g == 0 && kk == 0 && at == Symbol::Cent,
                };
                if ok {
                    continue;
                }
                Target::Reject
            };
            if t == Target::Reject {
                return vec![(Target::Reject, Move::Stay)];
            }
            out.push((t, Move::Stay));
        }
        if out.is_empty() {
            out.push((Target::Accept, Move::Stay));
        }
        out
    }
}

/// Builds the flat 2AFA for inputs of length `len`, after merging the
/// accepting states of `d`. The first existential stage guesses the exact
/// halting time, the final work-head cell and symbol, and walks to the
/// final input head position.
pub fn dtm_to_narrow_afa(
    d: &SpaceBoundedDtm,
    bounds: &ResourceBounds,
    len: usize,
) -> Result<NarrowAfa, DtmError> {
    bounds.check()?;
    let d = d.with_unique_accept()?;
    let acc = (0..d.state_count())
        .find(|&q| d.kind(q) == DtmStateKind::Accepting)
        .expect("unique accepting state exists");
    let rules = Rules::new(&d, bounds.space_bound);
    let finals: Vec<Claim> = (1..=bounds.time_bound)
        .flat_map(|i| (0..rules.space).map(move |k| (i, k)))
        .flat_map(|(i, k)| (0..d.work_alphabet().len()).map(move |g| Claim { i, k, cell: Cell::Head(acc, g) }))
        .collect();
    let start = if d.initial() == acc { Target::Accept } else { Target::To(Key::Root) };
    let explored = explore(
        d.input_alphabet().to_vec(),
        Geometry::Flat,
        start,
        ExploreOptions { stationary: true, what: "narrow 2AFA", ..Default::default() },
        |k| match k {
            Key::Seek(1, _) | Key::Window { .. } => Quantifier::Forall,
            _ => Quantifier::Exists,
        },
        |key, sym| match key {
            Key::Root if sym == Symbol::Cent => finals
                .iter()
                .flat_map(|c| {
                    let mut v = rules.claim(c);
                    v.push((Target::To(Key::Seek(1, *c)), Move::Right));
                    v
                })
                .collect(),
            Key::Root => Vec::new(),
            Key::Seek(0, c) => vec![(Target::To(Key::Seek(1, *c)), Move::Right)],
            Key::Seek(1, c) => vec![(Target::To(Key::Seek(2, *c)), Move::Left)],
            Key::Seek(_, c) => vec![
                (Target::To(Key::Seek(0, *c)), Move::Right),
                (Target::To(Key::Claim(*c)), Move::Right),
            ],
            Key::Claim(c) => rules.claim(c),
            Key::Window { read: Some(r), .. } if *r != sym => vec![(Target::Reject, Move::Stay)],
            Key::Window { i, k, w, .. } => rules.split(*i, *k, w, sym),
        },
    )?;
    let with_stays = explored.machine.state_count();
    let machine = eliminate_stationary_moves(&explored.machine);
    Ok(NarrowAfa {
        states: machine.state_count(),
        machine,
        states_with_stationary_moves: with_stays,
        bounds: *bounds,
        length: len,
    })
}
