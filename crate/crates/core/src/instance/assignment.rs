//! Partial and multi-assignments, their satisfaction semantics, and
//! self-loop normalization.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::graph::{ConstraintGraph, Symbol};
use crate::error::{Error, Result};

/// `V → Σ ∪ {⊥}`; `None` is ⊥. Serialized as an array with `null` for ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialAssignment(pub Vec<Option<Symbol>>);

impl PartialAssignment {
    pub fn full(symbols: &[Symbol]) -> Self {
        Self(symbols.iter().map(|&s| Some(s)).collect())
    }

    pub fn unassigned(n: usize) -> Self {
        Self(vec![None; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖f‖`: number of assigned vertices.
    pub fn size(&self) -> usize {
        self.0.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn get(&self, v: usize) -> Option<Symbol> {
        self.0[v]
    }

    /// Symbols of a full assignment.
    pub fn to_full(&self) -> Option<Vec<Symbol>> {
        self.0.iter().copied().collect()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        hamming(&self.0, &other.0)
    }
}

pub fn hamming<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `V → 2^Σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiAssignment(pub Vec<BTreeSet<Symbol>>);

impl MultiAssignment {
    pub fn empty(n: usize) -> Self {
        Self(vec![BTreeSet::new(); n])
    }

    /// `f'(v) := {f(v)}`, with ⊥ mapped to the empty set.
    pub fn singletons(f: &PartialAssignment) -> Self {
        Self(f.0.iter().map(|s| s.iter().copied().collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖f‖ = Σ_v |f(v)|`.
    pub fn size(&self) -> usize {
        self.0.iter().map(BTreeSet::len).sum()
    }

    pub fn get(&self, v: usize) -> &BTreeSet<Symbol> {
        &self.0[v]
    }

    /// `Σ_v |f(v) △ g(v)|`.
    pub fn distance(&self, other: &Self) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.symmetric_difference(b).count())
            .sum()
    }

    /// Vertex-wise union.
    pub fn union(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.union(b).copied().collect())
                .collect(),
        )
    }
}

/// Partial-assignment satisfaction on a binary graph: every edge whose
/// endpoints are both assigned must evaluate to 1, and assigned symbols must
/// be admissible.
pub fn satisfies_partial(g: &ConstraintGraph, f: &PartialAssignment) -> Result<bool> {
    g.require_binary()?;
    g.check_len(f.len())?;
    for s in f.0.iter().flatten() {
        g.check_symbol(*s)?;
    }
    for (v, s) in f.0.iter().enumerate() {
        if let Some(s) = s {
            if !g.is_admissible(v, *s) {
                return Ok(false);
            }
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if let (Some(a), Some(b)) = (f.0[edge[0]], f.0[edge[1]]) {
            if !g.eval2(e, a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Multi-assignment satisfaction: every edge `(v, w)` needs some
/// `(α, β) ∈ f(v) × f(w)` with `ψ(α, β) = 1`. Graphs with self-loops are
/// rejected; run [`normalize_self_loops`] first.
pub fn satisfies_multi(g: &ConstraintGraph, f: &MultiAssignment) -> Result<bool> {
    g.require_binary()?;
    if g.has_self_loops() {
        return Err(Error::SelfLoopsPresent);
    }
    g.check_len(f.len())?;
    for set in &f.0 {
        for &s in set {
            g.check_symbol(s)?;
        }
    }
    for (v, set) in f.0.iter().enumerate() {
        if set.iter().any(|&s| !g.is_admissible(v, s)) {
            return Ok(false);
        }
    }
    Ok((0..g.edge_count()).all(|e| multi_edge_ok(g, e, &f.0)))
}

/// Whether edge `e` has a satisfying pair in `f(v) × f(w)`.
pub fn multi_edge_ok(g: &ConstraintGraph, e: usize, f: &[BTreeSet<Symbol>]) -> bool {
    let edge = &g.edges()[e];
    f[edge[0]]
        .iter()
        .any(|&a| f[edge[1]].iter().any(|&b| g.eval2(e, a, b)))
}

/// Removes every self-loop `(v, v)` and folds it into the admissible set
/// `A_v := {α : ψ_(v,v)(α, α) = 1}`, intersected with any existing `A_v`.
pub fn normalize_self_loops(g: &ConstraintGraph) -> Result<ConstraintGraph> {
    g.require_binary()?;
    let n = g.vertex_count();
    let k = g.alphabet_size();
    let mut allowed: Vec<Vec<bool>> = (0..n)
        .map(|v| (0..k).map(|a| g.is_admissible(v, a)).collect())
        .collect();
    let mut edges = Vec::new();
    let mut tables = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if g.is_self_loop(e) {
            let v = edge[0];
            for (a, ok) in allowed[v].iter_mut().enumerate() {
                *ok &= g.eval2(e, a, a);
            }
        } else {
            edges.push(edge.clone());
            tables.push(g.table(e).to_vec());
        }
    }
    let mut admissible = Vec::with_capacity(n);
    for (v, mask) in allowed.iter().enumerate() {
        let list: Vec<Symbol> = (0..k).filter(|&a| mask[a]).collect();
        if list.is_empty() {
            return Err(Error::UnsatisfiableVertex { vertex: v });
        }
        admissible.push(list);
    }
    ConstraintGraph::new(
        g.vertex_labels().to_vec(),
        2,
        g.symbol_labels().to_vec(),
        edges,
        tables,
        Some(admissible),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::graph::equality_table;

    fn eq_edge() -> ConstraintGraph {
        ConstraintGraph::binary(2, 2, vec![((0, 1), equality_table(2))]).unwrap()
    }

    fn multi(sets: &[&[usize]]) -> MultiAssignment {
        MultiAssignment(sets.iter().map(|s| s.iter().copied().collect()).collect())
    }

    #[test]
    fn single_unassigned_vertex_is_satisfying() {
        let g = ConstraintGraph::binary(1, 1, vec![]).unwrap();
        assert!(satisfies_partial(&g, &PartialAssignment(vec![None])).unwrap());
    }

    #[test]
    fn equality_edge_partial() {
        let g = eq_edge();
        assert!(satisfies_partial(&g, &PartialAssignment::full(&[0, 0])).unwrap());
        assert!(!satisfies_partial(&g, &PartialAssignment::full(&[0, 1])).unwrap());
        assert!(satisfies_partial(&g, &PartialAssignment(vec![Some(0), None])).unwrap());
    }

    #[test]
    fn all_bottom_always_satisfies() {
        let g = ConstraintGraph::binary(3, 2, vec![((0, 1), vec![false; 4]), ((1, 2), vec![false; 4])])
            .unwrap();
        assert!(satisfies_partial(&g, &PartialAssignment::unassigned(3)).unwrap());
    }

    #[test]
    fn partial_errors() {
        let g = eq_edge();
        assert_eq!(
            satisfies_partial(&g, &PartialAssignment::full(&[0, 5])).unwrap_err(),
            Error::SymbolOutOfRange { symbol: 5, size: 2 }
        );
        let tri = ConstraintGraph::new(
            vec!["a".into()],
            3,
            vec!["0".into()],
            vec![vec![0, 0, 0]],
            vec![vec![true]],
            None,
        )
        .unwrap();
        assert!(matches!(
            satisfies_partial(&tri, &PartialAssignment::full(&[0])),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn partial_respects_admissible_sets() {
        let g = eq_edge().with_admissible(Some(vec![vec![1], vec![0, 1]])).unwrap();
        assert!(!satisfies_partial(&g, &PartialAssignment(vec![Some(0), None])).unwrap());
        assert!(satisfies_partial(&g, &PartialAssignment(vec![Some(1), None])).unwrap());
    }

    #[test]
    fn multi_examples() {
        let g = eq_edge();
        assert!(satisfies_multi(&g, &multi(&[&[0, 1], &[0]])).unwrap());
        assert!(!satisfies_multi(&g, &multi(&[&[], &[0]])).unwrap());
        let iso = ConstraintGraph::binary(1, 2, vec![]).unwrap();
        assert!(satisfies_multi(&iso, &multi(&[&[]])).unwrap());
    }

    #[test]
    fn multi_rejects_self_loops() {
        let g = ConstraintGraph::binary(1, 2, vec![((0, 0), equality_table(2))]).unwrap();
        assert_eq!(
            satisfies_multi(&g, &multi(&[&[0]])).unwrap_err(),
            Error::SelfLoopsPresent
        );
    }

    #[test]
    fn normalize_without_loops_keeps_edges() {
        let g = eq_edge();
        let n = normalize_self_loops(&g).unwrap();
        assert_eq!(n.edges(), g.edges());
        assert_eq!(n.admissible().unwrap(), &[vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn normalize_all_zero_diagonal_fails() {
        // not-equal table: diagonal all zero
        let ne: Vec<bool> = (0..4).map(|i| i / 2 != i % 2).collect();
        let g = ConstraintGraph::binary(2, 2, vec![((1, 1), ne)]).unwrap();
        assert_eq!(
            normalize_self_loops(&g).unwrap_err(),
            Error::UnsatisfiableVertex { vertex: 1 }
        );
    }

    #[test]
    fn normalize_intersects_loops() {
        let only0 = vec![true, false, false, false];
        let any = vec![true; 4];
        let g = ConstraintGraph::binary(1, 2, vec![((0, 0), only0), ((0, 0), any)]).unwrap();
        let n = normalize_self_loops(&g).unwrap();
        assert_eq!(n.edge_count(), 0);
        assert_eq!(n.admissible().unwrap(), &[vec![0]]);
    }

    #[test]
    fn multi_distance_and_size() {
        let a = multi(&[&[0, 1], &[0]]);
        let b = multi(&[&[1], &[0, 1]]);
        assert_eq!(a.size(), 3);
        assert_eq!(a.distance(&b), 2);
        assert_eq!(a.union(&b), multi(&[&[0, 1], &[0, 1]]));
    }
}
