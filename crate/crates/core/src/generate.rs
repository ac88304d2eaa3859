//! Seeded random instances with feasible start and goal states.
//!
//! Everything is rejection-sampled from one RNG; endpoints are checked with
//! the exact feasibility tests before an instance is returned.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    satisfies_multi, satisfies_partial, ConstraintGraph, Cover, Hypergraph, Incidence, MultiAssignment,
    PartialAssignment, SetSystem, Symbol,
};
use crate::io::InstanceFile;
use crate::seed::SeedStream;
use crate::verifier::{csp_to_verifier, encode_assignment, LocalTest, Proof, TableVerifier};

/// Enumeration limit on `|Σ|^|V|` when listing satisfying full assignments.
const ENUMERATION_LIMIT: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Csp,
    Labelcover,
    Setcover,
    Hypergraph,
    Verifier,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Csp, Kind::Labelcover, Kind::Setcover, Kind::Hypergraph, Kind::Verifier];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Csp => "csp",
            Kind::Labelcover => "labelcover",
            Kind::Setcover => "setcover",
            Kind::Hypergraph => "hypergraph",
            Kind::Verifier => "verifier",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::malformed(format!("unknown instance kind `{s}`")))
    }
}

/// Size parameters. For graphs `vertices` and `alphabet` apply; for set
/// systems `vertices` is the universe size and `items` the number of sets;
/// for hypergraphs `items` is the number of hyperedges of size `uniformity`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub vertices: usize,
    pub alphabet: usize,
    /// Edge probability per vertex pair, or membership probability.
    pub density: f64,
    /// Probability that a table entry accepts.
    pub tightness: f64,
    pub items: usize,
    pub uniformity: usize,
    pub attempts: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            vertices: 3,
            alphabet: 2,
            density: 0.5,
            tightness: 0.6,
            items: 5,
            uniformity: 2,
            attempts: 1000,
        }
    }
}

impl GenParams {
    fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.density) || !(0.0..=1.0).contains(&self.tightness) {
            return Err(Error::precondition("density and tightness must lie in [0, 1]"));
        }
        if self.alphabet == 0 {
            return Err(Error::precondition("alphabet must be nonempty"));
        }
        Ok(())
    }
}

pub fn generate(kind: Kind, params: &GenParams, seed: SeedStream) -> Result<InstanceFile> {
    let mut rng = seed.rng(kind.name());
    match kind {
        Kind::Csp => {
            let (graph, start, goal) = random_csp(params, &mut rng)?;
            Ok(InstanceFile::Csp { graph, start, goal })
        }
        Kind::Labelcover => {
            let (graph, start, goal) = random_labelcover(params, &mut rng)?;
            Ok(InstanceFile::Labelcover { graph, start, goal })
        }
        Kind::Setcover => {
            let (system, start, goal) = random_setcover(params, &mut rng)?;
            Ok(InstanceFile::Setcover { system, start, goal })
        }
        Kind::Hypergraph => {
            let (hypergraph, start, goal) = random_hypergraph(params, &mut rng)?;
            Ok(InstanceFile::Hypergraph { hypergraph, start, goal })
        }
        Kind::Verifier => {
            let (verifier, start, goal) = random_csp_verifier(params, &mut rng)?;
            Ok(InstanceFile::Verifier { verifier, start, goal })
        }
    }
}

fn random_table(k: usize, tightness: f64, rng: &mut impl Rng) -> Vec<bool> {
    (0..k * k).map(|_| rng.gen_bool(tightness)).collect()
}

/// Satisfying full assignments, in lexicographic order.
pub fn satisfying_full(g: &ConstraintGraph) -> Result<Vec<Vec<Symbol>>> {
    let (n, k) = (g.vertex_count(), g.alphabet_size());
    let total = k
        .checked_pow(n as u32)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{k}^{n} full assignments")))?;
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut f = vec![0; n];
        for v in (0..n).rev() {
            f[v] = idx % k;
            idx /= k;
        }
        if g.satisfies_full(&f)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// A binary graph with independent edges and random tables, plus two
/// satisfying full assignments (possibly equal).
pub fn random_csp(
    params: &GenParams,
    rng: &mut impl Rng,
) -> Result<(ConstraintGraph, PartialAssignment, PartialAssignment)> {
    params.check()?;
    let (n, k) = (params.vertices, params.alphabet);
    for _ in 0..params.attempts {
        let mut edges = Vec::new();
        for v in 0..n {
            for w in v + 1..n {
                if rng.gen_bool(params.density) {
                    edges.push((oriented(v, w, rng), random_table(k, params.tightness, rng)));
                }
            }
        }
        let g = ConstraintGraph::binary(n, k, edges)?;
        let sat = satisfying_full(&g)?;
        if let (Some(a), Some(b)) = (sat.choose(rng), sat.choose(rng)) {
            let (fs, fg) = (PartialAssignment::full(a), PartialAssignment::full(b));
            debug_assert!(satisfies_partial(&g, &fs)? && satisfies_partial(&g, &fg)?);
            return Ok((g, fs, fg));
        }
    }
    Err(Error::AttemptsExhausted(format!("no satisfiable csp after {} attempts", params.attempts)))
}

/// Endpoints in random storage order, so both orientations occur.
fn oriented(v: usize, w: usize, rng: &mut impl Rng) -> (usize, usize) {
    if rng.gen_bool(0.5) {
        (v, w)
    } else {
        (w, v)
    }
}

/// A connected self-loop-free binary graph (random spanning tree plus
/// independent extra edges) with two distinct satisfying singleton
/// multi-assignments. Needs at least two vertices.
pub fn random_labelcover(
    params: &GenParams,
    rng: &mut impl Rng,
) -> Result<(ConstraintGraph, MultiAssignment, MultiAssignment)> {
    params.check()?;
    let (n, k) = (params.vertices, params.alphabet);
    if n < 2 {
        return Err(Error::precondition("label cover instances need at least two vertices"));
    }
    for _ in 0..params.attempts {
        let mut pairs = Vec::new();
        for w in 1..n {
            pairs.push((rng.gen_range(0..w), w));
        }
        for v in 0..n {
            for w in v + 1..n {
                if !pairs.contains(&(v, w)) && rng.gen_bool(params.density) {
                    pairs.push((v, w));
                }
            }
        }
        let edges = pairs
            .into_iter()
            .map(|(v, w)| (oriented(v, w, rng), random_table(k, params.tightness, rng)))
            .collect();
        let g = ConstraintGraph::binary(n, k, edges)?;
        let sat = satisfying_full(&g)?;
        if sat.len() < 2 {
            continue;
        }
        let picked: Vec<&Vec<Symbol>> = sat.choose_multiple(rng, 2).collect();
        let fs = MultiAssignment::singletons(&PartialAssignment::full(picked[0]));
        let fg = MultiAssignment::singletons(&PartialAssignment::full(picked[1]));
        debug_assert!(satisfies_multi(&g, &fs)? && satisfies_multi(&g, &fg)?);
        return Ok((g, fs, fg));
    }
    Err(Error::AttemptsExhausted(format!(
        "no label cover instance with two satisfying assignments after {} attempts",
        params.attempts
    )))
}

/// A random inclusion-minimal cover: add items in random order until
/// covering, then drop redundant items in random order.
pub fn random_minimal_cover(inc: &Incidence, rng: &mut impl Rng) -> Cover {
    let mut order: Vec<usize> = (0..inc.item_count()).collect();
    order.shuffle(rng);
    let mut cover = Cover::new();
    for &i in &order {
        if inc.is_cover(&cover) {
            break;
        }
        cover.insert(i);
    }
    order.shuffle(rng);
    for &i in &order {
        if cover.remove(&i) && !inc.is_cover(&cover) {
            cover.insert(i);
        }
    }
    cover
}

pub fn random_setcover(params: &GenParams, rng: &mut impl Rng) -> Result<(SetSystem, Cover, Cover)> {
    params.check()?;
    for _ in 0..params.attempts {
        let sets: Vec<Vec<usize>> = (0..params.items)
            .map(|_| (0..params.vertices).filter(|_| rng.gen_bool(params.density)).collect())
            .collect();
        let f = SetSystem::from_sets(params.vertices, sets)?;
        let Ok(inc) = f.incidence() else { continue };
        let cs = random_minimal_cover(&inc, rng);
        let cg = random_minimal_cover(&inc, rng);
        return Ok((f, cs, cg));
    }
    Err(Error::AttemptsExhausted(format!("no coverable set system after {} attempts", params.attempts)))
}

pub fn random_hypergraph(params: &GenParams, rng: &mut impl Rng) -> Result<(Hypergraph, Cover, Cover)> {
    params.check()?;
    let (n, u) = (params.vertices, params.uniformity);
    if u == 0 || u > n {
        return Err(Error::precondition(format!("uniformity {u} with {n} vertices")));
    }
    let all: Vec<usize> = (0..n).collect();
    let edges = (0..params.items)
        .map(|_| {
            let mut e: Vec<usize> = all.choose_multiple(rng, u).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    let h = Hypergraph::new((0..n).map(|v| format!("v{v}")).collect(), edges, Some(u))?;
    let inc = h.incidence()?;
    let cs = random_minimal_cover(&inc, rng);
    let cg = random_minimal_cover(&inc, rng);
    Ok((h, cs, cg))
}

/// The canonical verifier of a random csp with at least one edge; proofs
/// encode the csp endpoints.
pub fn random_csp_verifier(params: &GenParams, rng: &mut impl Rng) -> Result<(TableVerifier, Proof, Proof)> {
    for _ in 0..params.attempts {
        let (g, fs, fg) = random_csp(params, rng)?;
        if g.edge_count() == 0 {
            continue;
        }
        let v = csp_to_verifier(&g)?;
        let start = encode_assignment(&g, &fs.to_full().expect("full"))?;
        let goal = encode_assignment(&g, &fg.to_full().expect("full"))?;
        return Ok((v, start, goal));
    }
    Err(Error::AttemptsExhausted("csp generator kept producing edgeless graphs".into()))
}

/// Shape of a toy verifier: every test reads `q` distinct positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyShape {
    pub r: u32,
    pub q: usize,
    pub ell: usize,
}

/// A verifier whose tests read `q` distinct uniformly chosen positions and
/// accept each view independently with probability `tightness`.
pub fn random_table_verifier(shape: ToyShape, tightness: f64, rng: &mut impl Rng) -> Result<TableVerifier> {
    let ToyShape { r, q, ell } = shape;
    if q == 0 || q > ell || ell > 16 {
        return Err(Error::precondition(format!("toy verifier with q = {q}, ell = {ell}")));
    }
    let positions: Vec<usize> = (0..ell).collect();
    let tests = (0..1usize << r)
        .map(|_| {
            let queries: Vec<usize> = positions.choose_multiple(rng, q).copied().collect();
            let decision = (0..1usize << q).map(|_| rng.gen_bool(tightness)).collect();
            LocalTest { queries, decision }
        })
        .collect();
    TableVerifier::new(r, q, ell, tests)
}

/// A random verifier with a pair of proofs at Hamming distance one that are
/// both accepted with probability 1.
pub fn random_toy_verifier(
    shape: ToyShape,
    tightness: f64,
    attempts: usize,
    rng: &mut impl Rng,
) -> Result<(TableVerifier, Proof, Proof)> {
    for _ in 0..attempts {
        let v = random_table_verifier(shape, tightness, rng)?;
        let sure: Vec<Proof> = Proof::all(shape.ell)
            .filter(|p| v.accepts_surely(p).unwrap_or(false))
            .collect();
        let pairs: Vec<(&Proof, &Proof)> = sure
            .iter()
            .flat_map(|a| sure.iter().map(move |b| (a, b)))
            .filter(|(a, b)| a.hamming(b) == 1)
            .collect();
        if let Some(&(a, b)) = pairs.choose(rng) {
            return Ok((v.clone(), a.clone(), b.clone()));
        }
    }
    Err(Error::AttemptsExhausted(format!(
        "no toy verifier with an adjacent surely-accepted pair after {attempts} attempts"
    )))
}
