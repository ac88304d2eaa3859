//! Squared-alphabet FGLSS graph of a verifier.
//!
//! Vertices are randomness strings. A symbol at `R` is a tuple of nonempty
//! subsets of `{0,1}`, one per queried position of `R`, encoded base 3 with
//! digits `0 → {0}`, `1 → {1}`, `2 → {0,1}` and the first position most
//! significant. Tuples have length `q` for every vertex; digits past `|I_R|`
//! must be `0` (the canonical padding), which the constraints enforce.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ConstraintGraph, PartialAssignment, Symbol};
use crate::rational::Rational;
use crate::sequence::{validate_sequence, InstanceRef, ReconfigSequence};
use crate::verifier::{randomness_label, Proof, TableVerifier};

/// Largest query complexity the construction accepts.
pub const MAX_QUERIES: usize = 6;

/// A nonempty subset of `{0,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BitSet {
    Zero,
    One,
    Both,
}

impl BitSet {
    fn digit(self) -> usize {
        match self {
            BitSet::Zero => 0,
            BitSet::One => 1,
            BitSet::Both => 2,
        }
    }

    fn from_digit(d: usize) -> Self {
        match d {
            0 => BitSet::Zero,
            1 => BitSet::One,
            _ => BitSet::Both,
        }
    }

    pub fn singleton(b: bool) -> Self {
        if b {
            BitSet::One
        } else {
            BitSet::Zero
        }
    }

    pub fn contains(self, b: bool) -> bool {
        self == BitSet::Both || self == BitSet::singleton(b)
    }

    /// `a ⊆ b` or `a ⊇ b`.
    pub fn comparable(self, other: Self) -> bool {
        self == other || self == BitSet::Both || other == BitSet::Both
    }

    pub fn is_subset(self, other: Self) -> bool {
        self == other || other == BitSet::Both
    }

    fn label(self) -> &'static str {
        match self {
            BitSet::Zero => "0",
            BitSet::One => "1",
            BitSet::Both => "01",
        }
    }
}

/// Digits of `symbol` as `q` subsets, first position first.
pub fn symbol_components(symbol: Symbol, q: usize) -> Vec<BitSet> {
    (0..q)
        .map(|j| BitSet::from_digit(symbol / 3usize.pow((q - 1 - j) as u32) % 3))
        .collect()
}

pub fn encode_components(components: &[BitSet], q: usize) -> Symbol {
    components
        .iter()
        .chain(std::iter::repeat(&BitSet::Zero))
        .take(q)
        .fold(0, |acc, c| acc * 3 + c.digit())
}

/// Symbol label such as `(0,1,01)`.
pub fn symbol_label(symbol: Symbol, q: usize) -> String {
    let mut s = String::from("(");
    for (j, c) in symbol_components(symbol, q).into_iter().enumerate() {
        if j > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", c.label());
    }
    s.push(')');
    s
}

/// A verifier together with its FGLSS graph.
#[derive(Clone, Debug)]
pub struct Fglss {
    verifier: TableVerifier,
    graph: ConstraintGraph,
    q: usize,
    /// `accepts[R][α]`: `α` is canonically padded and every selection from
    /// its product is accepted by `D_R`.
    accepts: Vec<Vec<bool>>,
}

impl Fglss {
    pub fn build(v: &TableVerifier) -> Result<Self> {
        let q = v.query_complexity();
        if q > MAX_QUERIES {
            return Err(Error::TooLarge(format!(
                "query complexity {q} exceeds the ceiling {MAX_QUERIES}"
            )));
        }
        let k = 3usize.pow(q as u32);
        let n = v.randomness_count();
        let accepts: Vec<Vec<bool>> = (0..n)
            .map(|r| (0..k).map(|a| local_accepts(v, r, a, q)).collect())
            .collect();
        let comps: Vec<Vec<BitSet>> = (0..k).map(|a| symbol_components(a, q)).collect();
        let mut edges = Vec::new();
        let mut tables = Vec::new();
        for r1 in 0..n {
            for r2 in r1..n {
                let shared: Vec<(usize, usize)> = v
                    .test(r1)
                    .queries
                    .iter()
                    .enumerate()
                    .filter_map(|(s1, i)| {
                        v.test(r2).queries.iter().position(|j| j == i).map(|s2| (s1, s2))
                    })
                    .collect();
                if shared.is_empty() {
                    continue;
                }
                let mut table = vec![false; k * k];
                for a in 0..k {
                    if !accepts[r1][a] {
                        continue;
                    }
                    for b in 0..k {
                        table[a * k + b] = accepts[r2][b]
                            && shared
                                .iter()
                                .all(|&(s1, s2)| comps[a][s1].comparable(comps[b][s2]));
                    }
                }
                edges.push(vec![r1, r2]);
                tables.push(table);
            }
        }
        let vertex_labels = (0..n).map(|r| randomness_label(r, v.randomness_bits())).collect();
        let symbol_labels = (0..k).map(|a| symbol_label(a, q)).collect();
        let graph = ConstraintGraph::new(vertex_labels, 2, symbol_labels, edges, tables, None)?;
        Ok(Self {
            verifier: v.clone(),
            graph,
            q,
            accepts,
        })
    }

    pub fn graph(&self) -> &ConstraintGraph {
        &self.graph
    }

    pub fn verifier(&self) -> &TableVerifier {
        &self.verifier
    }

    pub fn into_graph(self) -> ConstraintGraph {
        self.graph
    }

    /// Whether `symbol` is a canonical local view at `R` accepted in every
    /// selection.
    pub fn local_accepts(&self, r: usize, symbol: Symbol) -> bool {
        self.accepts[r][symbol]
    }

    /// The sets at `R`'s queried positions (padding dropped).
    pub fn view(&self, r: usize, symbol: Symbol) -> Vec<BitSet> {
        let mut c = symbol_components(symbol, self.q);
        c.truncate(self.verifier.test(r).queries.len());
        c
    }

    fn symbol_of(&self, components: &[BitSet]) -> Symbol {
        encode_components(components, self.q)
    }

    /// `f_π(R) := ({π_i})_{i ∈ I_R}`.
    pub fn embed_proof(&self, proof: &Proof) -> Result<PartialAssignment> {
        self.check_len(proof)?;
        Ok(PartialAssignment(
            self.verifier
                .tests()
                .iter()
                .map(|t| {
                    let comps: Vec<BitSet> =
                        t.queries.iter().map(|&i| BitSet::singleton(proof.bit(i))).collect();
                    Some(self.symbol_of(&comps))
                })
                .collect(),
        ))
    }

    fn check_len(&self, proof: &Proof) -> Result<()> {
        if proof.len() != self.verifier.proof_length() {
            return Err(Error::malformed(format!(
                "proof of length {}, verifier expects {}",
                proof.len(),
                self.verifier.proof_length()
            )));
        }
        Ok(())
    }

    /// For proofs at Hamming distance one, both accepted with probability 1:
    /// widen position `i*` to `{0,1}` at every `R` querying it, then narrow
    /// it to the new bit, one vertex per step.
    pub fn completeness_sequence(&self, from: &Proof, to: &Proof) -> Result<Vec<PartialAssignment>> {
        self.check_len(from)?;
        self.check_len(to)?;
        let diff = from.diff_positions(to);
        if diff.len() > 1 {
            return Err(Error::precondition(format!(
                "proofs differ in {} positions, expected at most one",
                diff.len()
            )));
        }
        for p in [from, to] {
            if !self.verifier.accepts_surely(p)? {
                return Err(Error::precondition(format!("proof {p} is not accepted with probability 1")));
            }
        }
        let start = self.embed_proof(from)?;
        let mut states = vec![start.clone()];
        let Some(&target) = diff.first() else {
            return Ok(states);
        };
        let holders: Vec<(usize, usize)> = self
            .verifier
            .tests()
            .iter()
            .enumerate()
            .filter_map(|(r, t)| t.queries.iter().position(|&i| i == target).map(|s| (r, s)))
            .collect();
        let mut cur = start;
        for phase in [BitSet::Both, BitSet::singleton(to.bit(target))] {
            for &(r, slot) in &holders {
                let mut comps = self.view(r, cur.0[r].expect("embedded assignment is full"));
                comps[slot] = phase;
                cur.0[r] = Some(self.symbol_of(&comps));
                states.push(cur.clone());
            }
        }
        Ok(states)
    }

    /// Plurality vote per position over the assigned vertices querying it;
    /// ties (including no votes) go to 0.
    pub fn plurality_decode(&self, f: &PartialAssignment) -> Result<Decoded> {
        self.graph.check_len(f.len())?;
        let satisfying = crate::instance::satisfies_partial(&self.graph, f)?;
        let ell = self.verifier.proof_length();
        let mut votes = vec![[0usize; 2]; ell];
        for (r, sym) in f.0.iter().enumerate() {
            let Some(sym) = *sym else { continue };
            for (slot, c) in self.view(r, sym).into_iter().enumerate() {
                let i = self.verifier.test(r).queries[slot];
                for b in [false, true] {
                    if c.contains(b) {
                        votes[i][b as usize] += 1;
                    }
                }
            }
        }
        Ok(Decoded {
            proof: Proof(votes.iter().map(|v| v[1] > v[0]).collect()),
            satisfying,
        })
    }

    /// The sets `{f(R)_i : i ∈ I_R, f(R) ≠ ⊥}` seen at position `i`.
    pub fn position_values(&self, f: &PartialAssignment, i: usize) -> Vec<BitSet> {
        let mut out: Vec<BitSet> = f
            .0
            .iter()
            .enumerate()
            .filter_map(|(r, sym)| {
                let slot = self.verifier.test(r).queries.iter().position(|&j| j == i)?;
                sym.map(|s| self.view(r, s)[slot])
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Decodes every state, interpolates between consecutive decoded proofs,
    /// and reports the least acceptance probability along the result.
    pub fn decode_sequence(&self, states: &[PartialAssignment]) -> Result<DecodedSequence> {
        let seq = ReconfigSequence::PartialAssignment(states.to_vec());
        let validation = validate_sequence(InstanceRef::Csp(&self.graph), &seq)?;
        if let Some(v) = validation.first_violation {
            return Err(Error::precondition(format!(
                "assignment sequence is invalid at index {}",
                v.index
            )));
        }
        let decoded: Vec<Proof> = states
            .iter()
            .map(|f| self.plurality_decode(f).map(|d| d.proof))
            .collect::<Result<_>>()?;
        let mut proofs = vec![decoded[0].clone()];
        for pair in decoded.windows(2) {
            proofs.extend(interpolate_proofs(&pair[0], &pair[1])?.into_iter().skip(1));
        }
        let mut min_acceptance = Rational::from_integer(1);
        for p in &proofs {
            min_acceptance = min_acceptance.min(self.verifier.accept_prob(p)?);
        }
        Ok(DecodedSequence {
            proofs,
            min_acceptance,
        })
    }
}

fn local_accepts(v: &TableVerifier, r: usize, symbol: Symbol, q: usize) -> bool {
    let t = v.test(r);
    let m = t.queries.len();
    let comps = symbol_components(symbol, q);
    if comps[m..].iter().any(|&c| c != BitSet::Zero) {
        return false;
    }
    (0..1usize << m).all(|view| {
        let selected = (0..m).all(|s| comps[s].contains(view >> (m - 1 - s) & 1 == 1));
        !selected || t.decision[view]
    })
}

pub fn build_fglss(v: &TableVerifier) -> Result<ConstraintGraph> {
    Fglss::build(v).map(Fglss::into_graph)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub proof: Proof,
    /// Whether the decoded assignment satisfied the FGLSS graph; decoding
    /// runs either way.
    pub satisfying: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodedSequence {
    pub proofs: Vec<Proof>,
    #[serde(with = "crate::rational::as_string")]
    pub min_acceptance: Rational,
}

/// Flips the differing positions one at a time in ascending order.
pub fn interpolate_proofs(from: &Proof, to: &Proof) -> Result<Vec<Proof>> {
    if from.len() != to.len() {
        return Err(Error::malformed("proofs of different lengths"));
    }
    let mut cur = from.clone();
    let mut out = vec![cur.clone()];
    for i in from.diff_positions(to) {
        cur.0[i] = to.0[i];
        out.push(cur.clone());
    }
    Ok(out)
}

/// `acc(π) − Σ_{i ∈ D} Pr[i ∈ I]` over the positions `D` where the proofs
/// differ: a lower bound on the acceptance of every interpolant.
pub fn dip_bound(v: &TableVerifier, from: &Proof, to: &Proof) -> Result<Rational> {
    let mut bound = v.accept_prob(from)?;
    for i in from.diff_positions(to) {
        bound -= v.query_probability(i)?;
    }
    Ok(bound)
}

/// Calls `visit` on every satisfying partial assignment of a binary graph,
/// by backtracking in vertex order. Stops early and returns `false` once
/// `limit` assignments have been visited.
pub fn for_each_satisfying(
    g: &ConstraintGraph,
    limit: usize,
    mut visit: impl FnMut(&PartialAssignment),
) -> Result<bool> {
    g.require_binary()?;
    let mut cur = PartialAssignment::unassigned(g.vertex_count());
    let mut count = 0;
    Ok(extend(g, &mut cur, 0, limit, &mut count, &mut visit))
}

fn extend(
    g: &ConstraintGraph,
    cur: &mut PartialAssignment,
    v: usize,
    limit: usize,
    count: &mut usize,
    visit: &mut impl FnMut(&PartialAssignment),
) -> bool {
    if v == g.vertex_count() {
        if *count >= limit {
            return false;
        }
        *count += 1;
        visit(cur);
        return true;
    }
    cur.0[v] = None;
    if !extend(g, cur, v + 1, limit, count, visit) {
        return false;
    }
    for s in 0..g.alphabet_size() {
        cur.0[v] = Some(s);
        let ok = g.is_admissible(v, s)
            && g.incident(v).iter().all(|&e| {
                let edge = &g.edges()[e];
                let other = if edge[0] == v { edge[1] } else { edge[0] };
                // only check against vertices already decided
                if other > v {
                    return true;
                }
                match (cur.0[edge[0]], cur.0[edge[1]]) {
                    (Some(a), Some(b)) => g.eval2(e, a, b),
                    _ => true,
                }
            });
        if ok && !extend(g, cur, v + 1, limit, count, visit) {
            cur.0[v] = None;
            return false;
        }
    }
    cur.0[v] = None;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{normalize_self_loops, satisfies_partial};
    use crate::verifier::LocalTest;

    fn toy(decide: impl Fn(usize) -> Vec<bool>) -> TableVerifier {
        TableVerifier::new(
            1,
            2,
            3,
            vec![
                LocalTest { queries: vec![0, 1], decision: decide(0) },
                LocalTest { queries: vec![1, 2], decision: decide(1) },
            ],
        )
        .unwrap()
    }

    fn always() -> TableVerifier {
        toy(|_| vec![true; 4])
    }

    #[test]
    fn toy_graph_shape() {
        let g = build_fglss(&always()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.alphabet_size(), 9);
        assert_eq!(g.edges(), &[vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(g.vertex_labels(), &["0".to_string(), "1".to_string()]);
        assert_eq!(g.symbol_labels()[5], "(1,01)");
    }

    #[test]
    fn disjoint_queries_give_only_loops() {
        let t = |q: Vec<usize>| LocalTest { queries: q, decision: vec![true; 4] };
        let v = TableVerifier::new(1, 2, 4, vec![t(vec![0, 1]), t(vec![2, 3])]).unwrap();
        let g = build_fglss(&v).unwrap();
        assert!((0..g.edge_count()).all(|e| g.is_self_loop(e)));
    }

    #[test]
    fn always_accepting_is_chain_condition_only() {
        let fg = Fglss::build(&always()).unwrap();
        let g = fg.graph();
        // edge (0,1) shares position 1: slot 1 at R=0 and slot 0 at R=1
        for a in 0..9 {
            for b in 0..9 {
                let ca = symbol_components(a, 2);
                let cb = symbol_components(b, 2);
                assert_eq!(g.eval2(1, a, b), ca[1].comparable(cb[0]));
            }
        }
    }

    #[test]
    fn embedding_reads_local_views() {
        let fg = Fglss::build(&always()).unwrap();
        let f = fg.embed_proof(&"010".parse().unwrap()).unwrap();
        assert_eq!(symbol_label(f.0[0].unwrap(), 2), "(0,1)");
        assert_eq!(symbol_label(f.0[1].unwrap(), 2), "(1,0)");
        assert!(satisfies_partial(fg.graph(), &f).unwrap());
    }

    #[test]
    fn rejected_proof_breaks_self_loop() {
        // R = 0 rejects the view (0,0)
        let fg = Fglss::build(&toy(|r| if r == 0 { vec![false, true, true, true] } else { vec![true; 4] }))
            .unwrap();
        let f = fg.embed_proof(&"001".parse().unwrap()).unwrap();
        let g = fg.graph();
        assert!(!g.eval2(0, f.0[0].unwrap(), f.0[0].unwrap()));
        assert!(!satisfies_partial(g, &f).unwrap());
    }

    #[test]
    fn completeness_sequence_lengths() {
        let fg = Fglss::build(&always()).unwrap();
        let p: Proof = "000".parse().unwrap();
        let same = fg.completeness_sequence(&p, &p).unwrap();
        assert_eq!(same.len(), 1);
        let s0 = fg.completeness_sequence(&p, &"100".parse().unwrap()).unwrap();
        assert_eq!(s0.len(), 3);
        let s1 = fg.completeness_sequence(&p, &"010".parse().unwrap()).unwrap();
        assert_eq!(s1.len(), 5);
        for f in s0.iter().chain(&s1) {
            assert!(f.is_full());
            assert!(satisfies_partial(fg.graph(), f).unwrap());
        }
        assert_eq!(s1.last().unwrap(), &fg.embed_proof(&"010".parse().unwrap()).unwrap());
    }

    #[test]
    fn plurality_table() {
        // position 1 is queried by both vertices
        let fg = Fglss::build(&always()).unwrap();
        let sym = |a: BitSet, b: BitSet| encode_components(&[a, b], 2);
        use BitSet::*;
        // K = {{1},{0,1}} → 1
        let f = PartialAssignment(vec![Some(sym(Zero, One)), Some(sym(Both, Zero))]);
        assert!(fg.plurality_decode(&f).unwrap().proof.bit(1));
        // K = {{0,1}} → 0
        let f = PartialAssignment(vec![Some(sym(Zero, Both)), Some(sym(Both, Zero))]);
        assert!(!fg.plurality_decode(&f).unwrap().proof.bit(1));
        // K = {} → 0
        let f = PartialAssignment(vec![None, None]);
        assert!(!fg.plurality_decode(&f).unwrap().proof.bit(1));
    }

    #[test]
    fn decode_inverts_embedding() {
        let fg = Fglss::build(&always()).unwrap();
        for p in Proof::all(3) {
            let d = fg.plurality_decode(&fg.embed_proof(&p).unwrap()).unwrap();
            assert_eq!(d.proof, p);
            assert!(d.satisfying);
        }
    }

    #[test]
    fn interpolation_lengths() {
        let a: Proof = "0000".parse().unwrap();
        assert_eq!(interpolate_proofs(&a, &a).unwrap().len(), 1);
        assert_eq!(interpolate_proofs(&a, &"0110".parse().unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn constant_and_completeness_decoding() {
        let fg = Fglss::build(&always()).unwrap();
        let f = fg.embed_proof(&"101".parse().unwrap()).unwrap();
        let d = fg.decode_sequence(&[f.clone(), f]).unwrap();
        assert_eq!(d.proofs.len(), 1);
        let seq = fg
            .completeness_sequence(&"000".parse().unwrap(), &"010".parse().unwrap())
            .unwrap();
        assert_eq!(fg.decode_sequence(&seq).unwrap().min_acceptance, Rational::from_integer(1));
    }

    #[test]
    fn normalized_admissible_sets_are_accepted_views() {
        let v = toy(|r| if r == 0 { vec![true, false, true, true] } else { vec![false, true, true, true] });
        let fg = Fglss::build(&v).unwrap();
        let n = normalize_self_loops(fg.graph()).unwrap();
        for r in 0..2 {
            let expected: Vec<usize> = (0..9).filter(|&a| fg.local_accepts(r, a)).collect();
            assert_eq!(n.admissible_symbols(r), expected);
        }
    }

    #[test]
    fn satisfying_enumeration_counts() {
        let g = crate::instance::ConstraintGraph::binary(
            2,
            2,
            vec![((0, 1), crate::instance::equality_table(2))],
        )
        .unwrap();
        let mut n = 0;
        assert!(for_each_satisfying(&g, 100, |_| n += 1).unwrap());
        // ⊥⊥, ⊥a ×2, a⊥ ×2, aa ×2
        assert_eq!(n, 7);
        let mut m = 0;
        assert!(!for_each_satisfying(&g, 3, |_| m += 1).unwrap());
        assert_eq!(m, 3);
    }
}
