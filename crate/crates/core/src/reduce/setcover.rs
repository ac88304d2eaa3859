//! Label cover to set cover: universe `E × B`, one set `S_{v,α}` per vertex
//! and admissible label.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::gadget::{Gadget, GadgetSpace, MonotoneGadget};
use crate::error::{Error, Result};
use crate::instance::{satisfies_multi, ConstraintGraph, Cover, MultiAssignment, SetSystem, Symbol};

/// How the set of a label at the `≻`-endpoint of an edge is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `P_e(α)`: labels at the `≺`-endpoint compatible with `α` at the
    /// `≻`-endpoint. Coverage of `{e} × B` is exactly satisfaction of `e`.
    Corrected,
    /// `{β : ψ_e(α, β) = 1}` with `α` always in the first argument, which
    /// transposes the check when the edge is stored as `(≺, ≻)`.
    Verbatim,
}

/// The reduced set system with the `(v, α) ↔ set` correspondence.
#[derive(Clone, Debug)]
pub struct SetCoverReduction {
    pub system: SetSystem,
    /// `index[v][α]`: the set `S_{v,α}`, present iff `α ∈ A_v`.
    index: Vec<Vec<Option<usize>>>,
    /// `(v, α)` of every set.
    owners: Vec<(usize, Symbol)>,
    points: usize,
}

impl SetCoverReduction {
    pub fn build(g: &ConstraintGraph, orientation: Orientation, gadget: &dyn Gadget) -> Result<Self> {
        g.require_binary()?;
        if g.has_self_loops() {
            return Err(Error::SelfLoopsPresent);
        }
        let k = g.alphabet_size();
        let space = GadgetSpace::new(k)?;
        let points = space.size();
        let vl = g.vertex_labels();
        let universe: Vec<String> = g
            .edges()
            .iter()
            .flat_map(|edge| {
                let space = &space;
                space
                    .points()
                    .map(move |x| format!("(({},{}),{})", vl[edge[0]], vl[edge[1]], space.point_label(x)))
            })
            .collect();
        let mut index = vec![vec![None; k]; g.vertex_count()];
        let mut owners = Vec::new();
        let mut sets = Vec::new();
        let mut labels = Vec::new();
        for v in 0..g.vertex_count() {
            for alpha in g.admissible_symbols(v) {
                let mut members = Vec::new();
                for &e in g.incident(v) {
                    let edge = &g.edges()[e];
                    let lower = edge[0].min(edge[1]);
                    let in_set: Box<dyn Fn(u64) -> bool> = if v == lower {
                        Box::new(move |x| gadget.in_q_bar(alpha, x))
                    } else {
                        let partners = partner_mask(g, e, v, alpha, orientation);
                        Box::new(move |x| gadget.in_q_set(partners, x))
                    };
                    members.extend(
                        space
                            .points()
                            .filter(|&x| in_set(x))
                            .map(|x| e * points + x as usize),
                    );
                }
                index[v][alpha] = Some(sets.len());
                owners.push((v, alpha));
                sets.push(members);
                labels.push(format!("({},{})", vl[v], g.symbol_labels()[alpha]));
            }
        }
        Ok(Self {
            system: SetSystem::new(universe, sets, labels)?,
            index,
            owners,
            points,
        })
    }

    pub fn set_of(&self, v: usize, alpha: Symbol) -> Option<usize> {
        self.index.get(v)?.get(alpha).copied().flatten()
    }

    pub fn owner(&self, set: usize) -> (usize, Symbol) {
        self.owners[set]
    }

    /// `C_f := {S_{v,α} : α ∈ f(v)}`; fails if some `α ∉ A_v`.
    pub fn cover_of(&self, f: &MultiAssignment) -> Result<Cover> {
        let mut c = Cover::new();
        for (v, set) in f.0.iter().enumerate() {
            for &alpha in set {
                let s = self.set_of(v, alpha).ok_or_else(|| {
                    Error::precondition(format!("label {alpha} is not admissible at vertex {v}"))
                })?;
                c.insert(s);
            }
        }
        Ok(c)
    }

    /// `f(v) := {α : S_{v,α} ∈ C}`.
    pub fn multi_of(&self, c: &Cover) -> MultiAssignment {
        let mut f = vec![BTreeSet::new(); self.index.len()];
        for &s in c {
            let (v, alpha) = self.owners[s];
            f[v].insert(alpha);
        }
        MultiAssignment(f)
    }

    /// Whether `C` covers the block `{e} × B`.
    pub fn covers_edge(&self, c: &Cover, e: usize) -> bool {
        let base = e * self.points;
        let mut hit = vec![false; self.points];
        for &s in c {
            for &u in &self.system.sets()[s] {
                if (base..base + self.points).contains(&u) {
                    hit[u - base] = true;
                }
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Number of points in each edge block (`|B|`).
    pub fn block_size(&self) -> usize {
        self.points
    }
}

/// Labels at the other endpoint of `e` that the set of `(v, α)` points to.
fn partner_mask(g: &ConstraintGraph, e: usize, v: usize, alpha: Symbol, orientation: Orientation) -> u64 {
    let edge = &g.edges()[e];
    let v_first = edge[0] == v;
    (0..g.alphabet_size())
        .filter(|&gamma| match orientation {
            Orientation::Corrected => {
                if v_first {
                    g.eval2(e, alpha, gamma)
                } else {
                    g.eval2(e, gamma, alpha)
                }
            }
            Orientation::Verbatim => g.eval2(e, alpha, gamma),
        })
        .fold(0u64, |m, gamma| m | 1 << gamma)
}

/// The reduced set-cover instance with endpoint covers `C_{f_s}`, `C_{f_g}`.
/// Endpoints must be satisfying singleton multi-assignments.
pub fn labelcover_to_setcover(
    g: &ConstraintGraph,
    fs: &MultiAssignment,
    fg: &MultiAssignment,
) -> Result<(SetCoverReduction, Cover, Cover)> {
    labelcover_to_setcover_with(g, fs, fg, Orientation::Corrected, &MonotoneGadget)
}

pub fn labelcover_to_setcover_with(
    g: &ConstraintGraph,
    fs: &MultiAssignment,
    fg: &MultiAssignment,
    orientation: Orientation,
    gadget: &dyn Gadget,
) -> Result<(SetCoverReduction, Cover, Cover)> {
    check_endpoints(g, fs, fg)?;
    let red = SetCoverReduction::build(g, orientation, gadget)?;
    let cs = red.cover_of(fs)?;
    let cg = red.cover_of(fg)?;
    Ok((red, cs, cg))
}

pub(crate) fn check_endpoints(g: &ConstraintGraph, fs: &MultiAssignment, fg: &MultiAssignment) -> Result<()> {
    for (name, f) in [("start", fs), ("goal", fg)] {
        if f.0.iter().any(|s| s.len() != 1) {
            return Err(Error::precondition(format!("{name} multi-assignment is not all singletons")));
        }
        if !satisfies_multi(g, f)? {
            return Err(Error::InfeasibleEndpoint(format!("{name} multi-assignment is not satisfying")));
        }
    }
    Ok(())
}
