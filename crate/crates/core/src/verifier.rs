//! Explicit-table verifiers: for every randomness string `R ∈ {0,1}^r` a
//! tuple of distinct queried positions `I_R` and a decision table
//! `D_R : {0,1}^{|I_R|} → {0,1}`.
//!
//! Decision tables are indexed with the first queried position as the most
//! significant bit. Query tuples may be shorter than `q` (amplified verifiers
//! merge repeated positions), but never longer.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ConstraintGraph, Symbol};
use crate::rational::Rational;

/// A proof bitstring. Serialized as a string of `0`/`1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proof(pub Vec<bool>);

impl Proof {
    pub fn zeros(len: usize) -> Self {
        Proof(vec![false; len])
    }

    /// Bits of `value`, most significant first.
    pub fn from_index(value: u64, len: usize) -> Self {
        Proof((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn hamming(&self, other: &Proof) -> usize {
        crate::instance::hamming(&self.0, &other.0)
    }

    /// Positions on which the two proofs differ, ascending.
    pub fn diff_positions(&self, other: &Proof) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != other.0[i]).collect()
    }

    /// Every proof of length `len`, in increasing binary order.
    pub fn all(len: usize) -> impl Iterator<Item = Proof> {
        assert!(len < 64, "proof space too large to enumerate");
        (0..1u64 << len).map(move |x| Proof::from_index(x, len))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Proof {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::malformed(format!("proof `{s}` is not a bitstring"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Proof)
    }
}

impl Serialize for Proof {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Proof {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One randomness string's local test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTest {
    pub queries: Vec<usize>,
    pub decision: Vec<bool>,
}

impl LocalTest {
    /// `D_R` applied to the bits of `proof` at `I_R`.
    pub fn accepts(&self, proof: &Proof) -> bool {
        self.decision[self.view_index(proof)]
    }

    /// Row index of the local view `π|_{I_R}`.
    pub fn view_index(&self, proof: &Proof) -> usize {
        self.queries
            .iter()
            .fold(0usize, |acc, &i| (acc << 1) | proof.bit(i) as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVerifier", into = "RawVerifier")]
pub struct TableVerifier {
    r: u32,
    q: usize,
    ell: usize,
    tests: Vec<LocalTest>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawVerifier {
    r: u32,
    q: usize,
    ell: usize,
    entries: Vec<RawEntry>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawEntry {
    #[serde(rename = "R")]
    randomness: String,
    #[serde(rename = "I_R")]
    queries: Vec<usize>,
    #[serde(rename = "D_R")]
    decision: Vec<u8>,
}

impl TryFrom<RawVerifier> for TableVerifier {
    type Error = Error;
    fn try_from(raw: RawVerifier) -> Result<Self> {
        let mut tests = Vec::with_capacity(raw.entries.len());
        for (idx, e) in raw.entries.into_iter().enumerate() {
            let expected = randomness_label(idx, raw.r);
            if e.randomness != expected {
                return Err(Error::malformed(format!(
                    "entry {idx} is labelled `{}`, expected `{expected}`",
                    e.randomness
                )));
            }
            let decision = e
                .decision
                .into_iter()
                .map(|b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(Error::malformed(format!("decision entry {other} is not 0/1"))),
                })
                .collect::<Result<_>>()?;
            tests.push(LocalTest {
                queries: e.queries,
                decision,
            });
        }
        TableVerifier::new(raw.r, raw.q, raw.ell, tests)
    }
}

impl From<TableVerifier> for RawVerifier {
    fn from(v: TableVerifier) -> Self {
        let r = v.r;
        RawVerifier {
            r,
            q: v.q,
            ell: v.ell,
            entries: v
                .tests
                .into_iter()
                .enumerate()
                .map(|(idx, t)| RawEntry {
                    randomness: randomness_label(idx, r),
                    queries: t.queries,
                    decision: t.decision.into_iter().map(u8::from).collect(),
                })
                .collect(),
        }
    }
}

/// `R` as an `r`-bit string, most significant bit first.
pub fn randomness_label(index: usize, r: u32) -> String {
    (0..r)
        .map(|i| if (index >> (r - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl TableVerifier {
    pub fn new(r: u32, q: usize, ell: usize, tests: Vec<LocalTest>) -> Result<Self> {
        if r >= 32 {
            return Err(Error::TooLarge(format!("randomness of {r} bits")));
        }
        if tests.len() != 1usize << r {
            return Err(Error::malformed(format!(
                "{} local tests for r = {r}, expected {}",
                tests.len(),
                1usize << r
            )));
        }
        if q == 0 || q >= 32 {
            return Err(Error::malformed(format!("query complexity {q} out of range")));
        }
        for (idx, t) in tests.iter().enumerate() {
            if t.queries.is_empty() || t.queries.len() > q {
                return Err(Error::malformed(format!(
                    "entry {idx} queries {} positions; expected 1..={q}",
                    t.queries.len()
                )));
            }
            for (j, &i) in t.queries.iter().enumerate() {
                if i >= ell {
                    return Err(Error::IndexOutOfRange { index: i, limit: ell });
                }
                if t.queries[..j].contains(&i) {
                    return Err(Error::malformed(format!(
                        "entry {idx} queries position {i} twice"
                    )));
                }
            }
            if t.decision.len() != 1usize << t.queries.len() {
                return Err(Error::malformed(format!(
                    "entry {idx} has a decision table of {} entries, expected {}",
                    t.decision.len(),
                    1usize << t.queries.len()
                )));
            }
        }
        Ok(Self { r, q, ell, tests })
    }

    pub fn randomness_bits(&self) -> u32 {
        self.r
    }

    pub fn randomness_count(&self) -> usize {
        self.tests.len()
    }

    pub fn query_complexity(&self) -> usize {
        self.q
    }

    pub fn proof_length(&self) -> usize {
        self.ell
    }

    pub fn tests(&self) -> &[LocalTest] {
        &self.tests
    }

    pub fn test(&self, randomness: usize) -> &LocalTest {
        &self.tests[randomness]
    }

    fn check_proof(&self, proof: &Proof) -> Result<()> {
        if proof.len() != self.ell {
            return Err(Error::malformed(format!(
                "proof of length {}, verifier expects {}",
                proof.len(),
                self.ell
            )));
        }
        Ok(())
    }

    /// Which randomness strings accept `proof`.
    pub fn acceptance_set(&self, proof: &Proof) -> Result<Vec<bool>> {
        self.check_proof(proof)?;
        Ok(self.tests.iter().map(|t| t.accepts(proof)).collect())
    }

    /// Exact `Pr_R[D_R(π|_{I_R}) = 1]`.
    pub fn accept_prob(&self, proof: &Proof) -> Result<Rational> {
        let accepted = self.acceptance_set(proof)?.into_iter().filter(|&a| a).count();
        Ok(Rational::new(accepted as i128, self.tests.len() as i128))
    }

    /// Number of randomness strings whose query tuple contains position `i`.
    pub fn degree(&self, i: usize) -> Result<usize> {
        if i >= self.ell {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.ell,
            });
        }
        Ok(self.tests.iter().filter(|t| t.queries.contains(&i)).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.ell];
        for t in &self.tests {
            for &i in &t.queries {
                deg[i] += 1;
            }
        }
        deg
    }

    /// `Some(Δ)` when every position has degree exactly `Δ`.
    pub fn regularity(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }

    /// `Pr_R[i ∈ I_R] = degree(i) / 2^r`.
    pub fn query_probability(&self, i: usize) -> Result<Rational> {
        Ok(Rational::new(self.degree(i)? as i128, self.tests.len() as i128))
    }

    /// True when every `D_R` accepts every view.
    pub fn always_accepts(&self) -> bool {
        self.tests.iter().all(|t| t.decision.iter().all(|&b| b))
    }

    /// `Pr[V accepts π] = 1`.
    pub fn accepts_surely(&self, proof: &Proof) -> Result<bool> {
        Ok(self.acceptance_set(proof)?.into_iter().all(|a| a))
    }
}

/// Bits per vertex used by [`csp_to_verifier`]: `max(1, ⌈log₂|Σ|⌉)`.
pub fn symbol_bits(alphabet_size: usize) -> usize {
    let mut b = 1;
    while (1usize << b) < alphabet_size {
        b += 1;
    }
    b
}

/// Proof encoding of a full assignment: vertex `v` occupies bits
/// `v·b .. (v+1)·b`, most significant first.
pub fn encode_assignment(g: &ConstraintGraph, symbols: &[Symbol]) -> Result<Proof> {
    g.check_len(symbols.len())?;
    let b = symbol_bits(g.alphabet_size());
    let mut bits = Vec::with_capacity(b * symbols.len());
    for &s in symbols {
        g.check_symbol(s)?;
        bits.extend((0..b).map(|j| (s >> (b - 1 - j)) & 1 == 1));
    }
    Ok(Proof(bits))
}

/// Inverse of [`encode_assignment`]; `None` when some codeword is out of range.
pub fn decode_assignment(g: &ConstraintGraph, proof: &Proof) -> Option<Vec<Symbol>> {
    let b = symbol_bits(g.alphabet_size());
    if proof.len() != b * g.vertex_count() {
        return None;
    }
    (0..g.vertex_count())
        .map(|v| {
            let s = (0..b).fold(0usize, |acc, j| (acc << 1) | proof.bit(v * b + j) as usize);
            (s < g.alphabet_size()).then_some(s)
        })
        .collect()
}

/// Canonical verifier of a binary constraint graph: one randomness value per
/// edge (cycled to fill `2^r`, `r ≥ 1`), reading both endpoints' codewords and
/// accepting iff both decode in range and the edge table accepts.
pub fn csp_to_verifier(g: &ConstraintGraph) -> Result<TableVerifier> {
    g.require_binary()?;
    if g.edge_count() == 0 {
        return Err(Error::precondition("graph has no edges"));
    }
    let k = g.alphabet_size();
    let b = symbol_bits(k);
    let mut r = 1u32;
    while (1usize << r) < g.edge_count() {
        r += 1;
    }
    let tests = (0..1usize << r)
        .map(|idx| {
            let e = idx % g.edge_count();
            let (v, w) = (g.edges()[e][0], g.edges()[e][1]);
            let block = |u: usize| (u * b..(u + 1) * b).collect::<Vec<_>>();
            if v == w {
                let queries = block(v);
                let decision = (0..1usize << b).map(|a| a < k && g.eval2(e, a, a)).collect();
                LocalTest { queries, decision }
            } else {
                let mut queries = block(v);
                queries.extend(block(w));
                let decision = (0..1usize << (2 * b))
                    .map(|view| {
                        let (a, c) = (view >> b, view & ((1 << b) - 1));
                        a < k && c < k && g.eval2(e, a, c)
                    })
                    .collect();
                LocalTest { queries, decision }
            }
        })
        .collect();
    TableVerifier::new(r, 2 * b, b * g.vertex_count(), tests)
}

/// Whether an exact probability has a denominator dividing `2^r`.
pub fn has_dyadic_denominator(p: &Rational, r: u32) -> bool {
    !p.denom().is_zero() && (1i128 << r) % p.denom() == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{equality_table, satisfies_partial, PartialAssignment};
    use crate::rational::ratio;

    fn toy() -> TableVerifier {
        // I_0 = (0,1), I_1 = (1,2)
        TableVerifier::new(
            1,
            2,
            3,
            vec![
                LocalTest { queries: vec![0, 1], decision: vec![true; 4] },
                LocalTest { queries: vec![1, 2], decision: vec![true; 4] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn always_accepting_has_probability_one() {
        let v = toy();
        for p in Proof::all(3) {
            assert_eq!(v.accept_prob(&p).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn identity_bit_verifier() {
        let t = LocalTest { queries: vec![0], decision: vec![false, true] };
        let v = TableVerifier::new(1, 1, 1, vec![t.clone(), t]).unwrap();
        assert_eq!(v.accept_prob(&"1".parse().unwrap()).unwrap(), ratio(1, 1));
        assert_eq!(v.accept_prob(&"0".parse().unwrap()).unwrap(), ratio(0, 1));
        assert!(v.accept_prob(&"01".parse().unwrap()).is_err());
    }

    #[test]
    fn degrees_of_toy_verifier() {
        let v = toy();
        assert_eq!(v.degrees(), vec![1, 2, 1]);
        assert_eq!(v.regularity(), None);
        assert!(v.degree(3).is_err());
    }

    #[test]
    fn position_queried_by_every_randomness() {
        let t = LocalTest { queries: vec![0], decision: vec![true, true] };
        let v = TableVerifier::new(2, 1, 1, vec![t; 4]).unwrap();
        assert_eq!(v.degree(0).unwrap(), 4);
        assert_eq!(v.regularity(), Some(4));
    }

    #[test]
    fn even_partition_is_regular() {
        // r = 1, q = 2, ell = 4: I_0 = (0,1), I_1 = (2,3) → Δ = q·2^r/ℓ = 1
        let v = TableVerifier::new(
            1,
            2,
            4,
            vec![
                LocalTest { queries: vec![0, 1], decision: vec![true; 4] },
                LocalTest { queries: vec![2, 3], decision: vec![true; 4] },
            ],
        )
        .unwrap();
        assert_eq!(v.regularity(), Some(2 * 2 / 4));
    }

    #[test]
    fn rejects_repeated_queries() {
        let err = TableVerifier::new(
            0,
            2,
            2,
            vec![LocalTest { queries: vec![1, 1], decision: vec![true; 4] }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn single_equality_edge_verifier() {
        let g = ConstraintGraph::binary(2, 2, vec![((0, 1), equality_table(2))]).unwrap();
        let v = csp_to_verifier(&g).unwrap();
        assert_eq!(v.randomness_bits(), 1);
        assert_eq!(v.query_complexity(), 2);
        let accepted: Vec<String> = Proof::all(2)
            .filter(|p| v.accepts_surely(p).unwrap())
            .map(|p| p.to_string())
            .collect();
        assert_eq!(accepted, vec!["00", "11"]);
    }

    #[test]
    fn out_of_range_codeword_rejects() {
        // |Σ| = 3, so code 11 is invalid
        let g = ConstraintGraph::binary(2, 3, vec![((0, 1), vec![true; 9])]).unwrap();
        let v = csp_to_verifier(&g).unwrap();
        let p: Proof = "1100".parse().unwrap();
        assert!(!v.test(0).accepts(&p));
        let ok: Proof = "1000".parse().unwrap();
        assert!(v.test(0).accepts(&ok));
    }

    #[test]
    fn encoding_of_satisfying_assignment_is_accepted() {
        let g = ConstraintGraph::binary(3, 3, vec![((0, 1), equality_table(3)), ((1, 2), vec![true; 9])])
            .unwrap();
        for f in [[0, 0, 2], [2, 2, 1], [1, 1, 0]] {
            assert!(satisfies_partial(&g, &PartialAssignment::full(&f)).unwrap());
            let p = encode_assignment(&g, &f).unwrap();
            assert_eq!(v_accept(&g, &p), ratio(1, 1));
            assert_eq!(decode_assignment(&g, &p).unwrap(), f.to_vec());
        }
    }

    fn v_accept(g: &ConstraintGraph, p: &Proof) -> Rational {
        csp_to_verifier(g).unwrap().accept_prob(p).unwrap()
    }

    #[test]
    fn verifier_json_round_trip() {
        let v = toy();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"R\":\"1\""));
        let back: TableVerifier = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn proof_parse_display() {
        let p: Proof = "0110".parse().unwrap();
        assert_eq!(p.to_string(), "0110");
        assert!("012".parse::<Proof>().is_err());
        assert_eq!(Proof::from_index(5, 4).to_string(), "0101");
    }
}
