//! Exact optimum values and witness sequences for the four reconfiguration
//! objectives.

mod cover;
pub mod materialized;
mod threshold;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use cover::{min_cover, min_hitting, min_vertex_cover};

use crate::error::{Error, Result};
use crate::instance::{
    satisfies_multi, satisfies_partial, ConstraintGraph, Cover, Hypergraph, Incidence,
    MultiAssignment, PartialAssignment, SetSystem,
};
use crate::rational::Rational;
use crate::sequence::ReconfigSequence;
use threshold::{threshold_search, Moves, Objective, StateSpace};

/// Default state budget for a single solve.
pub const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    #[serde(with = "crate::rational::as_string")]
    pub value: Rational,
    pub witness: ReconfigSequence,
    pub states_explored: u64,
}

/// `maxpar_G(f_s ↭ f_g)`: the best achievable `min_t ‖f^(t)‖ / |V|`.
pub fn solve_maxpar(
    g: &ConstraintGraph,
    fs: &PartialAssignment,
    fg: &PartialAssignment,
    cap: u64,
) -> Result<SolveResult> {
    for (name, f) in [("start", fs), ("goal", fg)] {
        if !satisfies_partial(g, f)? {
            return Err(Error::InfeasibleEndpoint(format!("{name} assignment is not satisfying")));
        }
    }
    if g.vertex_count() == 0 {
        return Err(Error::precondition("graph has no vertices"));
    }
    if g.alphabet_size() >= u16::MAX as usize {
        return Err(Error::TooLarge(format!("alphabet of {} symbols", g.alphabet_size())));
    }
    let space = PartialSpace::new(g);
    let found = threshold_search(
        &space,
        &space.encode(fs),
        &space.encode(fg),
        Objective::MaximizeMin,
        0,
        cap,
    )?;
    Ok(SolveResult {
        value: Rational::new(found.threshold as i128, g.vertex_count() as i128),
        witness: ReconfigSequence::PartialAssignment(
            found.path.iter().map(|s| space.decode(s)).collect(),
        ),
        states_explored: found.explored,
    })
}

/// `minlab_G(f_s ↭ f_g)`: the best achievable `max_t ‖f^(t)‖ / (|V| + 1)`.
pub fn solve_minlab(
    g: &ConstraintGraph,
    fs: &MultiAssignment,
    fg: &MultiAssignment,
    cap: u64,
) -> Result<SolveResult> {
    for (name, f) in [("start", fs), ("goal", fg)] {
        if !satisfies_multi(g, f)? {
            return Err(Error::InfeasibleEndpoint(format!("{name} multi-assignment is not satisfying")));
        }
    }
    if g.alphabet_size() > 64 {
        return Err(Error::TooLarge(format!("alphabet of {} symbols", g.alphabet_size())));
    }
    let space = MultiSpace::new(g);
    let limit = fs.union(fg).size();
    let found = threshold_search(
        &space,
        &space.encode(fs),
        &space.encode(fg),
        Objective::MinimizeMax,
        limit,
        cap,
    )?;
    Ok(SolveResult {
        value: Rational::new(found.threshold as i128, g.vertex_count() as i128 + 1),
        witness: ReconfigSequence::MultiAssignment(
            found.path.iter().map(|s| space.decode(s)).collect(),
        ),
        states_explored: found.explored,
    })
}

/// `cost_F(C_s ↭ C_g)`: the best achievable `max_t |C^(t)| / (opt(F) + 1)`.
pub fn solve_cost_setcover(f: &SetSystem, cs: &Cover, cg: &Cover, cap: u64) -> Result<SolveResult> {
    for (name, c) in [("start", cs), ("goal", cg)] {
        if !f.is_cover(c) {
            return Err(Error::InfeasibleEndpoint(format!("{name} is not a cover")));
        }
    }
    let inc = f.incidence()?;
    let (value, path, explored) = solve_cover_cost(&inc, cs, cg, cap)?;
    Ok(SolveResult {
        value,
        witness: ReconfigSequence::Cover(path),
        states_explored: explored,
    })
}

/// `cost_H(C_s ↭ C_g)` with `β(H)` in the denominator.
pub fn solve_cost_hvc(h: &Hypergraph, cs: &Cover, cg: &Cover, cap: u64) -> Result<SolveResult> {
    for (name, c) in [("start", cs), ("goal", cg)] {
        if !h.is_vertex_cover(c) {
            return Err(Error::InfeasibleEndpoint(format!("{name} is not a vertex cover")));
        }
    }
    let inc = h.incidence()?;
    let (value, path, explored) = solve_cover_cost(&inc, cs, cg, cap)?;
    Ok(SolveResult {
        value,
        witness: ReconfigSequence::VertexCover(path),
        states_explored: explored,
    })
}

fn solve_cover_cost(
    inc: &Incidence,
    cs: &Cover,
    cg: &Cover,
    cap: u64,
) -> Result<(Rational, Vec<Cover>, u64)> {
    let opt = min_hitting(inc).len();
    let space = CoverSpace { inc };
    let limit = cs.union(cg).count();
    let found = threshold_search(
        &space,
        &space.encode(cs),
        &space.encode(cg),
        Objective::MinimizeMax,
        limit,
        cap,
    )?;
    Ok((
        Rational::new(found.threshold as i128, opt as i128 + 1),
        found.path.iter().map(|s| space.decode(s)).collect(),
        found.explored,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapVerdict {
    Complete,
    Sound,
    Neither,
}

/// Gap classification: for `Max`, `value ≥ c` is complete and `value < s` is
/// sound; for `Min`, `value ≤ c` is complete and `value > s` is sound.
pub fn decide_gap(value: Rational, c: Rational, s: Rational, direction: Direction) -> Result<GapVerdict> {
    Ok(match direction {
        Direction::Max => {
            if s > c {
                return Err(Error::malformed("maximization gap needs s ≤ c"));
            }
            if value >= c {
                GapVerdict::Complete
            } else if value < s {
                GapVerdict::Sound
            } else {
                GapVerdict::Neither
            }
        }
        Direction::Min => {
            if c > s {
                return Err(Error::malformed("minimization gap needs c ≤ s"));
            }
            if value <= c {
                GapVerdict::Complete
            } else if value > s {
                GapVerdict::Sound
            } else {
                GapVerdict::Neither
            }
        }
    })
}

/// Partial assignments; the symbol id `|Σ|` stands for ⊥.
struct PartialSpace<'a> {
    g: &'a ConstraintGraph,
    bottom: u16,
}

impl<'a> PartialSpace<'a> {
    fn new(g: &'a ConstraintGraph) -> Self {
        Self {
            g,
            bottom: g.alphabet_size() as u16,
        }
    }

    fn encode(&self, f: &PartialAssignment) -> Box<[u16]> {
        f.0.iter().map(|s| s.map_or(self.bottom, |s| s as u16)).collect()
    }

    fn decode(&self, s: &[u16]) -> PartialAssignment {
        PartialAssignment(
            s.iter()
                .map(|&x| (x != self.bottom).then_some(x as usize))
                .collect(),
        )
    }

    fn ok_at(&self, s: &[u16], v: usize) -> bool {
        let x = s[v];
        if x == self.bottom {
            return true;
        }
        if !self.g.is_admissible(v, x as usize) {
            return false;
        }
        self.g.incident(v).iter().all(|&e| {
            let edge = &self.g.edges()[e];
            let (a, b) = (s[edge[0]], s[edge[1]]);
            a == self.bottom || b == self.bottom || self.g.eval2(e, a as usize, b as usize)
        })
    }
}

impl StateSpace for PartialSpace<'_> {
    type State = Box<[u16]>;

    fn size(&self, s: &Self::State) -> usize {
        s.iter().filter(|&&x| x != self.bottom).count()
    }

    fn neighbors(&self, s: &Self::State, moves: Moves, out: &mut Vec<Self::State>) {
        let mut cur = s.clone();
        for v in 0..s.len() {
            for x in 0..=self.bottom {
                let skip = if s[v] == self.bottom {
                    !moves.grow
                } else {
                    x == self.bottom && !moves.shrink
                };
                if x == s[v] || skip {
                    continue;
                }
                cur[v] = x;
                if self.ok_at(&cur, v) {
                    out.push(cur.clone());
                }
            }
            cur[v] = s[v];
        }
    }
}

/// Multi-assignments as one bitmask per vertex.
struct MultiSpace<'a> {
    g: &'a ConstraintGraph,
    /// `compat[e][α]`: mask of second-endpoint symbols β with `ψ_e(α, β) = 1`.
    compat: Vec<Vec<u64>>,
}

impl<'a> MultiSpace<'a> {
    fn new(g: &'a ConstraintGraph) -> Self {
        let k = g.alphabet_size();
        let compat = (0..g.edge_count())
            .map(|e| {
                (0..k)
                    .map(|a| (0..k).filter(|&b| g.eval2(e, a, b)).fold(0u64, |m, b| m | 1 << b))
                    .collect()
            })
            .collect();
        Self { g, compat }
    }

    fn encode(&self, f: &MultiAssignment) -> Box<[u64]> {
        f.0.iter().map(|set| set.iter().fold(0u64, |m, &a| m | 1 << a)).collect()
    }

    fn decode(&self, s: &[u64]) -> MultiAssignment {
        MultiAssignment(
            s.iter()
                .map(|&m| (0..64).filter(|a| m >> a & 1 == 1).collect::<BTreeSet<_>>())
                .collect(),
        )
    }

    fn edge_ok(&self, s: &[u64], e: usize) -> bool {
        let edge = &self.g.edges()[e];
        let (mut left, right) = (s[edge[0]], s[edge[1]]);
        while left != 0 {
            let a = left.trailing_zeros() as usize;
            if self.compat[e][a] & right != 0 {
                return true;
            }
            left &= left - 1;
        }
        false
    }
}

impl StateSpace for MultiSpace<'_> {
    type State = Box<[u64]>;

    fn size(&self, s: &Self::State) -> usize {
        s.iter().map(|m| m.count_ones() as usize).sum()
    }

    fn neighbors(&self, s: &Self::State, moves: Moves, out: &mut Vec<Self::State>) {
        let mut cur = s.clone();
        for v in 0..s.len() {
            for a in 0..self.g.alphabet_size() {
                let bit = 1u64 << a;
                cur[v] = s[v] ^ bit;
                let ok = if s[v] & bit == 0 {
                    moves.grow && self.g.is_admissible(v, a)
                } else {
                    moves.shrink && self.g.incident(v).iter().all(|&e| self.edge_ok(&cur, e))
                };
                if ok {
                    out.push(cur.clone());
                }
            }
            cur[v] = s[v];
        }
    }
}

/// Covers as item bitsets.
struct CoverSpace<'a> {
    inc: &'a Incidence,
}

impl CoverSpace<'_> {
    fn encode(&self, c: &Cover) -> Box<[u64]> {
        let mut bits = vec![0u64; self.inc.item_count().div_ceil(64)];
        for &i in c {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits.into()
    }

    fn decode(&self, s: &[u64]) -> Cover {
        (0..self.inc.item_count()).filter(|&i| has(s, i)).collect()
    }
}

fn has(s: &[u64], i: usize) -> bool {
    s[i / 64] >> (i % 64) & 1 == 1
}

impl StateSpace for CoverSpace<'_> {
    type State = Box<[u64]>;

    fn size(&self, s: &Self::State) -> usize {
        s.iter().map(|m| m.count_ones() as usize).sum()
    }

    fn neighbors(&self, s: &Self::State, moves: Moves, out: &mut Vec<Self::State>) {
        for i in 0..self.inc.item_count() {
            let ok = if has(s, i) {
                // Dropping i keeps every requirement it meets covered by another item.
                moves.shrink
                    && self
                        .inc
                        .item_requirements(i)
                        .iter()
                        .all(|&r| self.inc.requirements()[r].iter().any(|&j| j != i && has(s, j)))
            } else {
                moves.grow
            };
            if ok {
                let mut next = s.clone();
                next[i / 64] ^= 1 << (i % 64);
                out.push(next);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::equality_table;
    use crate::rational::ratio;
    use crate::sequence::{validate_sequence, InstanceRef};

    const CAP: u64 = 100_000;

    fn eq_edge() -> ConstraintGraph {
        ConstraintGraph::binary(2, 2, vec![((0, 1), equality_table(2))]).unwrap()
    }

    fn multi(sets: &[&[usize]]) -> MultiAssignment {
        MultiAssignment(sets.iter().map(|s| s.iter().copied().collect()).collect())
    }

    #[test]
    fn maxpar_examples() {
        let one = ConstraintGraph::binary(1, 1, vec![]).unwrap();
        let f = PartialAssignment::full(&[0]);
        assert_eq!(solve_maxpar(&one, &f, &f, CAP).unwrap().value, ratio(1, 1));

        let iso = ConstraintGraph::binary(2, 2, vec![]).unwrap();
        let r = solve_maxpar(&iso, &PartialAssignment::full(&[0, 0]), &PartialAssignment::full(&[1, 1]), CAP)
            .unwrap();
        assert_eq!(r.value, ratio(1, 1));

        let g = eq_edge();
        let r = solve_maxpar(&g, &PartialAssignment::full(&[0, 0]), &PartialAssignment::full(&[1, 1]), CAP)
            .unwrap();
        assert_eq!(r.value, ratio(1, 2));
        assert_eq!(r.witness.min_size(), Some(1));
        assert!(validate_sequence(InstanceRef::Csp(&g), &r.witness).unwrap().valid);
    }

    #[test]
    fn minlab_examples() {
        let g = eq_edge();
        let f = multi(&[&[0, 1], &[1]]);
        assert_eq!(solve_minlab(&g, &f, &f, CAP).unwrap().value, ratio(3, 3));

        let one = ConstraintGraph::binary(1, 2, vec![]).unwrap();
        // an isolated vertex may pass through ∅, so the peak is 1, not 2
        let r = solve_minlab(&one, &multi(&[&[0]]), &multi(&[&[1]]), CAP).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        // with a loop-free trivial edge the vertex cannot be emptied
        let pinned = ConstraintGraph::binary(2, 2, vec![((0, 1), vec![true; 4])]).unwrap();
        let r = solve_minlab(&pinned, &multi(&[&[0], &[0]]), &multi(&[&[1], &[0]]), CAP).unwrap();
        assert_eq!(r.value, ratio(3, 3));

        let r = solve_minlab(&g, &multi(&[&[0], &[0]]), &multi(&[&[1], &[1]]), CAP).unwrap();
        assert_eq!(r.value, ratio(4, 3));
        assert!(validate_sequence(InstanceRef::LabelCover(&g), &r.witness).unwrap().valid);
        assert_eq!(r.witness.max_size(), Some(4));
    }

    #[test]
    fn setcover_examples() {
        let f = SetSystem::from_sets(2, vec![vec![0, 1], vec![0], vec![1]]).unwrap();
        let r = solve_cost_setcover(&f, &[0].into(), &[1, 2].into(), CAP).unwrap();
        assert_eq!(r.value, ratio(3, 2));
        assert!(validate_sequence(InstanceRef::SetCover(&f), &r.witness).unwrap().valid);
        let same = solve_cost_setcover(&f, &[1, 2].into(), &[1, 2].into(), CAP).unwrap();
        assert_eq!(same.value, ratio(2, 2));

        let singles = SetSystem::from_sets(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let all: Cover = [0, 1, 2].into();
        assert_eq!(solve_cost_setcover(&singles, &all, &all, CAP).unwrap().value, ratio(3, 4));
    }

    #[test]
    fn hvc_examples() {
        let h = Hypergraph::from_edges(2, vec![vec![0, 1]]).unwrap();
        let r = solve_cost_hvc(&h, &[0].into(), &[1].into(), CAP).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        let two = Hypergraph::from_edges(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let r = solve_cost_hvc(&two, &[0, 2].into(), &[1, 3].into(), CAP).unwrap();
        assert_eq!(r.value, ratio(3, 3));
        assert!(validate_sequence(InstanceRef::Hypergraph(&two), &r.witness).unwrap().valid);
    }

    #[test]
    fn infeasible_endpoint_rejected() {
        let g = eq_edge();
        let err = solve_maxpar(&g, &PartialAssignment::full(&[0, 1]), &PartialAssignment::full(&[1, 1]), CAP)
            .unwrap_err();
        assert!(matches!(err, Error::InfeasibleEndpoint(_)));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = ConstraintGraph::binary(6, 3, vec![]).unwrap();
        let err = solve_minlab(
            &g,
            &MultiAssignment(vec![[0].into(); 6]),
            &MultiAssignment(vec![[2].into(); 6]),
            50,
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { cap: 50, .. }));
    }

    #[test]
    fn gap_classification() {
        assert_eq!(
            decide_gap(ratio(1, 1), ratio(1, 1), ratio(1, 2), Direction::Max).unwrap(),
            GapVerdict::Complete
        );
        // ε = 1/4, value = 2 − ε′ with ε′ = 1/2 sits inside (c, s]
        assert_eq!(
            decide_gap(ratio(3, 2), ratio(1, 1), ratio(7, 4), Direction::Min).unwrap(),
            GapVerdict::Neither
        );
        assert_eq!(
            decide_gap(ratio(3, 2), ratio(1, 1), ratio(4, 3), Direction::Min).unwrap(),
            GapVerdict::Sound
        );
        assert!(decide_gap(ratio(1, 1), ratio(2, 1), ratio(1, 1), Direction::Min).is_err());
    }
}
