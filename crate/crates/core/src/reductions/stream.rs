//! Machines that read `⟨s⟩₂` two bits at a time.
//!
//! A [`QuadSweeper`] is written against the pre-image symbols; the lifted
//! machine keeps the first bit of each pair in its state and rejects an odd
//! number of bits at `$`. Every move is +1 on a circular tape.

use std::fmt::Debug;
use std::hash::Hash;

use crate::automaton::{Geometry, Move, Quantifier, Symbol};
use crate::builder::{explore, BuildError, ExploreOptions, Explored, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Quad {
    Zero,
    One,
    Hash,
    Bot,
}

impl Quad {
    fn from_bits(a: bool, b: bool) -> Quad {
        match (a, b) {
            (false, false) => Quad::Zero,
            (false, true) => Quad::One,
            (true, true) => Quad::Hash,
            (true, false) => Quad::Bot,
        }
    }

    /// The binary digit, for `0` and `1`.
    pub(crate) fn digit(self) -> Option<u8> {
        match self {
            Quad::Zero => Some(0),
            Quad::One => Some(1),
            _ => None,
        }
    }
}

pub(crate) trait QuadSweeper {
    type K: Clone + Eq + Hash + Debug;
    fn start(&self) -> Target<Self::K>;
    /// Deterministic step on one pre-image symbol.
    fn quad(&self, k: &Self::K, q: Quad) -> Target<Self::K>;
    /// Choices at `$`; each continues at `¢` of the next sweep.
    fn dollar(&self, k: &Self::K) -> Vec<Target<Self::K>>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Paired<K> {
    pub pending: Option<bool>,
    pub inner: K,
}

fn wrap<K>(t: Target<K>) -> Target<Paired<K>> {
    match t {
        Target::To(inner) => Target::To(Paired { pending: None, inner }),
        Target::Accept => Target::Accept,
        Target::Reject => Target::Reject,
    }
}

pub(crate) fn build_quad_machine<S: QuadSweeper>(
    s: &S,
    what: &'static str,
) -> Result<Explored<Paired<S::K>>, BuildError> {
    explore(
        vec!['0', '1'],
        Geometry::Circular,
        wrap(s.start()),
        ExploreOptions { what, ..Default::default() },
        |_| Quantifier::Exists,
        |k: &Paired<S::K>, sym| match sym {
            Symbol::Cent => vec![(Target::To(k.clone()), Move::Right)],
            Symbol::Letter(c) => {
                let bit = c == '1';
                let t = match k.pending {
                    None => Target::To(Paired { pending: Some(bit), inner: k.inner.clone() }),
                    Some(a) => wrap(s.quad(&k.inner, Quad::from_bits(a, bit))),
                };
                vec![(t, Move::Right)]
            }
            Symbol::Dollar => match k.pending {
                Some(_) => vec![(Target::Reject, Move::Right)],
                None => s.dollar(&k.inner).into_iter().map(|t| (wrap(t), Move::Right)).collect(),
            },
        },
    )
}

/// Incremental comparison of a digit string against a fixed binary numeral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct NumeralCmp {
    pub len: u8,
    /// Ordering of the digits read so far against the numeral's prefix of
    /// the same length.
    pub order: std::cmp::Ordering,
}

impl NumeralCmp {
    pub(crate) const START: NumeralCmp = NumeralCmp { len: 0, order: std::cmp::Ordering::Equal };

    /// `None` once the string is longer than the numeral.
    pub(crate) fn push(self, numeral: &[u8], d: u8) -> Option<NumeralCmp> {
        let i = self.len as usize;
        if i >= numeral.len() {
            return None;
        }
        let order = if self.order == std::cmp::Ordering::Equal { d.cmp(&numeral[i]) } else { self.order };
        Some(NumeralCmp { len: self.len + 1, order })
    }

    /// Final ordering of the full string (no leading zeros) against the numeral.
    pub(crate) fn finish(self, numeral: &[u8]) -> std::cmp::Ordering {
        (self.len as usize).cmp(&numeral.len()).then(self.order)
    }
}

pub(crate) fn numeral(v: u64) -> Vec<u8> {
    format!("{v:b}").bytes().map(|b| b - b'0').collect()
}
