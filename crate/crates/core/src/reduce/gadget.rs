//! Covering gadgets over the hypercube `B = {0,1}^Σ`.
//!
//! Points of `B` are bitmasks with bit `α` holding `x_α`. The reduction only
//! needs the law `Q̄_α ∪ Q_S = B ⇔ α ∈ S` (and its multi-valued form), so the
//! gadget is pluggable; [`CorruptedGadget`] violates the law on purpose.

use crate::error::{Error, Result};

/// Largest alphabet the hypercube is materialized for.
pub const MAX_GADGET_ALPHABET: usize = 16;

pub trait Gadget: Sync {
    /// `x ∈ Q̄_α`.
    fn in_q_bar(&self, alpha: usize, x: u64) -> bool;
    /// `x ∈ Q_S`, with `S` a bitmask over Σ.
    fn in_q_set(&self, set: u64, x: u64) -> bool;
    fn name(&self) -> &'static str;
}

/// `Q_α = {x : x_α = 1}`, `Q̄_α = {x : x_α = 0}`, `Q_S = ⋃_{α∈S} Q_α`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MonotoneGadget;

impl Gadget for MonotoneGadget {
    fn in_q_bar(&self, alpha: usize, x: u64) -> bool {
        x >> alpha & 1 == 0
    }

    fn in_q_set(&self, set: u64, x: u64) -> bool {
        x & set != 0
    }

    fn name(&self) -> &'static str {
        "monotone"
    }
}

/// Negative control: `Q_S` additionally contains every weight-one point,
/// which makes `Q̄_α ∪ Q_S = B` possible with `α ∉ S`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CorruptedGadget;

impl Gadget for CorruptedGadget {
    fn in_q_bar(&self, alpha: usize, x: u64) -> bool {
        x >> alpha & 1 == 0
    }

    fn in_q_set(&self, set: u64, x: u64) -> bool {
        x & set != 0 || x.count_ones() == 1
    }

    fn name(&self) -> &'static str {
        "corrupted"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    Q,
    QBar,
    QSet,
}

/// The hypercube for an alphabet of a given size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetSpace {
    sigma: usize,
}

impl GadgetSpace {
    pub fn new(sigma: usize) -> Result<Self> {
        if sigma == 0 || sigma > MAX_GADGET_ALPHABET {
            return Err(Error::TooLarge(format!("hypercube over {sigma} symbols")));
        }
        Ok(Self { sigma })
    }

    pub fn alphabet_size(&self) -> usize {
        self.sigma
    }

    /// `|B| = 2^{|Σ|}`.
    pub fn size(&self) -> usize {
        1 << self.sigma
    }

    pub fn points(&self) -> impl Iterator<Item = u64> {
        0..(1u64 << self.sigma)
    }

    /// `x_α` for `α = 0..|Σ|`, as a `0`/`1` string.
    pub fn point_label(&self, x: u64) -> String {
        (0..self.sigma)
            .map(|a| if x >> a & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Members of `Q_α`, `Q̄_α` or `Q_S` under `gadget`, ascending. For
    /// `QSet` the argument is a bitmask `S ⊆ Σ`; otherwise a symbol.
    pub fn membership(&self, gadget: &dyn Gadget, kind: GadgetKind, arg: u64) -> Result<Vec<u64>> {
        let full = (1u64 << self.sigma) - 1;
        match kind {
            GadgetKind::Q | GadgetKind::QBar if arg >= self.sigma as u64 => {
                return Err(Error::SymbolOutOfRange { symbol: arg as usize, size: self.sigma })
            }
            GadgetKind::QSet if arg & !full != 0 => {
                return Err(Error::malformed("set argument outside the alphabet"))
            }
            _ => {}
        }
        Ok(self
            .points()
            .filter(|&x| match kind {
                GadgetKind::Q => gadget.in_q_set(1 << arg, x),
                GadgetKind::QBar => gadget.in_q_bar(arg as usize, x),
                GadgetKind::QSet => gadget.in_q_set(arg, x),
            })
            .collect())
    }

    /// `⋃_{α∈A} Q̄_α ∪ Q_S = B`.
    pub fn covers(&self, gadget: &dyn Gadget, a: u64, s: u64) -> bool {
        self.points().all(|x| {
            (0..self.sigma).any(|alpha| a >> alpha & 1 == 1 && gadget.in_q_bar(alpha, x))
                || gadget.in_q_set(s, x)
        })
    }
}

/// First `(A, S)` pair violating `⋃_{α∈A} Q̄_α ∪ Q_S = B ⇔ A ∩ S ≠ ∅`.
pub fn gadget_law_violation(space: &GadgetSpace, gadget: &dyn Gadget) -> Option<(u64, u64)> {
    let all = space.size() as u64;
    (0..all)
        .flat_map(|a| (0..all).map(move |s| (a, s)))
        .find(|&(a, s)| space.covers(gadget, a, s) != (a & s != 0))
}
