//! Seeded property suites. Trials run in parallel and are merged in trial
//! order; a report keeps the first counterexample verbatim.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amplify::{
    amplify, choose_rho, sandwich_bounds, to_big, union_bound_holds, walk_hit_prob, Delta, ExpanderGraph,
};
use crate::approx::{cover_sequence_cost, two_factor_cover};
use crate::error::{Error, Result};
use crate::fglss::{dip_bound, for_each_satisfying, interpolate_proofs, Fglss};
use crate::generate::{
    random_csp, random_hypergraph, random_labelcover, random_setcover, random_table_verifier, random_toy_verifier,
    GenParams, ToyShape,
};
use crate::instance::{
    multi_edge_ok, satisfies_multi, satisfies_partial, ConstraintGraph, Cover, MultiAssignment, PartialAssignment,
};
use crate::io::InstanceFile;
use crate::rational::{ratio, Rational};
use crate::reduce::{
    labelcover_to_hvc_with, labelcover_to_setcover_with, CorruptedGadget, Gadget, MonotoneGadget, Orientation,
    SetCoverReduction,
};
use crate::seed::{SeedStream, StreamRng};
use crate::sequence::{validate_between, validate_sequence, InstanceRef, ReconfigSequence};
use crate::solve::{
    materialized, min_cover, solve_cost_hvc, solve_cost_setcover, solve_maxpar, solve_minlab, DEFAULT_CAP,
};
use crate::verifier::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    LemmaSetcover,
    CostEqualitySc,
    CostEqualityHvc,
    ExpanderBounds,
    ClaimAccept,
    FglssPopularity,
    FglssCompleteness,
    ApproxRatio,
    OracleAgreement,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::LemmaSetcover,
        Suite::CostEqualitySc,
        Suite::CostEqualityHvc,
        Suite::ExpanderBounds,
        Suite::ClaimAccept,
        Suite::FglssPopularity,
        Suite::FglssCompleteness,
        Suite::ApproxRatio,
        Suite::OracleAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LemmaSetcover => "lemma-setcover",
            Suite::CostEqualitySc => "cost-equality-sc",
            Suite::CostEqualityHvc => "cost-equality-hvc",
            Suite::ExpanderBounds => "expander-bounds",
            Suite::ClaimAccept => "claim-accept",
            Suite::FglssPopularity => "fglss-popularity",
            Suite::FglssCompleteness => "fglss-completeness",
            Suite::ApproxRatio => "approx-ratio",
            Suite::OracleAgreement => "oracle-agreement",
        }
    }

    fn trial(self, ctx: &Trial) -> Result<Outcome> {
        match self {
            Suite::LemmaSetcover => lemma_setcover(ctx),
            Suite::CostEqualitySc => cost_equality(ctx, Target::SetCover),
            Suite::CostEqualityHvc => cost_equality(ctx, Target::Hypergraph),
            Suite::ExpanderBounds => expander_bounds(ctx),
            Suite::ClaimAccept => claim_accept(ctx),
            Suite::FglssPopularity => fglss_popularity(ctx),
            Suite::FglssCompleteness => fglss_completeness(ctx),
            Suite::ApproxRatio => approx_ratio(ctx),
            Suite::OracleAgreement => oracle_agreement(ctx),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::malformed(format!("unknown suite `{s}`")))
    }
}

/// Gadget used by the reductions under test; `Corrupted` is a negative control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GadgetChoice {
    #[default]
    Monotone,
    Corrupted,
}

impl GadgetChoice {
    fn gadget(self) -> &'static dyn Gadget {
        match self {
            GadgetChoice::Monotone => &MonotoneGadget,
            GadgetChoice::Corrupted => &CorruptedGadget,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub trials: usize,
    pub seed: u64,
    pub cap: u64,
    pub gadget: GadgetChoice,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            cap: DEFAULT_CAP,
            gadget: GadgetChoice::Monotone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub message: String,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    /// Per-suite counters summed over trials.
    pub stats: BTreeMap<String, u64>,
    pub skip_reasons: BTreeMap<String, u64>,
    pub first_counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let verdict = if self.ok() { "pass" } else { "FAIL" };
        let _ = writeln!(s, "## {} ({verdict})\n", self.suite);
        let _ = writeln!(s, "| trials | passed | skipped | failed | seed |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            self.trials, self.passed, self.skipped, self.failed, self.seed
        );
        if !self.stats.is_empty() {
            let _ = writeln!(s, "\n| stat | value |\n|---|---|");
            for (k, v) in &self.stats {
                let _ = writeln!(s, "| {k} | {v} |");
            }
        }
        if !self.skip_reasons.is_empty() {
            let _ = writeln!(s, "\n| skip reason | count |\n|---|---|");
            for (k, v) in &self.skip_reasons {
                let _ = writeln!(s, "| {k} | {v} |");
            }
        }
        if let Some(c) = &self.first_counterexample {
            let _ = writeln!(s, "\nFirst counterexample (trial {}): {}\n", c.trial, c.message);
            let _ = writeln!(
                s,
                "```json\n{}\n```",
                serde_json::to_string_pretty(&c.instance).unwrap_or_default()
            );
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,seed,trials,passed,skipped,failed,first_failure_trial\n");
        let first = self
            .first_counterexample
            .as_ref()
            .map(|c| c.trial.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            self.suite, self.seed, self.trials, self.passed, self.skipped, self.failed, first
        );
        s
    }
}

enum Outcome {
    Pass(Stats),
    Skip(String),
    Fail { message: String, instance: Value },
}

type Stats = Vec<(&'static str, u64)>;

struct Trial {
    rng: std::cell::RefCell<StreamRng>,
    opts: CheckOptions,
}

impl Trial {
    fn rng(&self) -> std::cell::RefMut<'_, StreamRng> {
        self.rng.borrow_mut()
    }
}

fn fail(message: impl Into<String>, instance: Value) -> Result<Outcome> {
    Ok(Outcome::Fail {
        message: message.into(),
        instance,
    })
}

fn skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::BudgetExhausted { .. } | Error::AttemptsExhausted(_) | Error::TooLarge(_) | Error::Overflow(_)
    )
}

pub fn run_suite(suite: Suite, opts: &CheckOptions) -> SuiteReport {
    let stream = SeedStream::new(opts.seed).child(suite.name());
    let mut results: Vec<(usize, Outcome)> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let ctx = Trial {
                rng: std::cell::RefCell::new(stream.rng_indexed("trial", i as u64)),
                opts: opts.clone(),
            };
            let outcome = match suite.trial(&ctx) {
                Ok(o) => o,
                Err(e) if skippable(&e) => Outcome::Skip(skip_key(&e)),
                Err(e) => Outcome::Fail {
                    message: format!("unexpected error: {e}"),
                    instance: Value::Null,
                },
            };
            (i, outcome)
        })
        .collect();
    results.sort_by_key(|(i, _)| *i);
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        seed: opts.seed,
        trials: opts.trials,
        passed: 0,
        skipped: 0,
        failed: 0,
        stats: BTreeMap::new(),
        skip_reasons: BTreeMap::new(),
        first_counterexample: None,
    };
    for (i, outcome) in results {
        match outcome {
            Outcome::Pass(stats) => {
                report.passed += 1;
                for (k, v) in stats {
                    *report.stats.entry(k.to_string()).or_default() += v;
                }
            }
            Outcome::Skip(reason) => {
                report.skipped += 1;
                *report.skip_reasons.entry(reason).or_default() += 1;
            }
            Outcome::Fail { message, instance } => {
                report.failed += 1;
                if report.first_counterexample.is_none() {
                    report.first_counterexample = Some(Counterexample {
                        trial: i,
                        message,
                        instance,
                    });
                }
            }
        }
    }
    report
}

fn skip_key(e: &Error) -> String {
    match e {
        Error::BudgetExhausted { .. } => "budget exhausted".into(),
        Error::AttemptsExhausted(_) => "generator attempts exhausted".into(),
        Error::TooLarge(_) => "instance too large".into(),
        Error::Overflow(_) => "arithmetic overflow".into(),
        other => other.to_string(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn labelcover_value(g: &ConstraintGraph, fs: &MultiAssignment, fg: &MultiAssignment) -> Value {
    to_value(&InstanceFile::Labelcover {
        graph: g.clone(),
        start: fs.clone(),
        goal: fg.clone(),
    })
}

fn is_asymmetric(g: &ConstraintGraph) -> bool {
    let k = g.alphabet_size();
    (0..g.edge_count()).any(|e| (0..k).any(|a| (0..k).any(|b| g.eval2(e, a, b) != g.eval2(e, b, a))))
}

fn small_labelcover(ctx: &Trial, max_alphabet: usize) -> Result<(ConstraintGraph, MultiAssignment, MultiAssignment)> {
    let mut rng = ctx.rng();
    let params = GenParams {
        vertices: rng.gen_range(2..=3),
        alphabet: rng.gen_range(2..=max_alphabet),
        density: 0.5,
        tightness: rng.gen_range(0.4..0.8),
        ..GenParams::default()
    };
    random_labelcover(&params, &mut *rng)
}

/// Per-edge coverage against multi-assignment satisfaction, over every
/// subfamily of the reduced set system.
fn lemma_setcover(ctx: &Trial) -> Result<Outcome> {
    let (g, fs, fg) = small_labelcover(ctx, 3)?;
    let red = SetCoverReduction::build(&g, Orientation::Corrected, ctx.opts.gadget.gadget())?;
    let m = red.system.set_count();
    for mask in 0u64..1 << m {
        let c: Cover = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let f = red.multi_of(&c);
        if red.cover_of(&f)? != c || f.size() != c.len() {
            return fail(format!("round trip broken at subfamily {c:?}"), labelcover_value(&g, &fs, &fg));
        }
        for e in 0..g.edge_count() {
            if red.covers_edge(&c, e) != multi_edge_ok(&g, e, &f.0) {
                return fail(
                    format!(
                        "edge {e}: coverage {} but satisfaction {} for subfamily {:?}",
                        red.covers_edge(&c, e),
                        multi_edge_ok(&g, e, &f.0),
                        c.iter().map(|&s| red.system.set_labels()[s].clone()).collect::<Vec<_>>()
                    ),
                    labelcover_value(&g, &fs, &fg),
                );
            }
        }
        if red.system.is_cover(&c) != satisfies_multi(&g, &f)? {
            return fail(format!("cover/satisfaction mismatch at {c:?}"), labelcover_value(&g, &fs, &fg));
        }
    }
    Ok(Outcome::Pass(vec![
        ("instances", 1),
        ("asymmetric", is_asymmetric(&g) as u64),
        ("subfamilies", 1 << m),
    ]))
}

#[derive(Clone, Copy)]
enum Target {
    SetCover,
    Hypergraph,
}

/// `minlab` on the source against the exact cover cost of the reduction, and
/// the reduced witness mapped back to a valid label-cover sequence.
fn cost_equality(ctx: &Trial, target: Target) -> Result<Outcome> {
    let (g, fs, fg) = small_labelcover(ctx, 2)?;
    let cap = ctx.opts.cap;
    let gadget = ctx.opts.gadget.gadget();
    let source = solve_minlab(&g, &fs, &fg, cap)?;
    let (reduced, witness, mapped, padding) = match target {
        Target::SetCover => {
            let (red, cs, cg) = labelcover_to_setcover_with(&g, &fs, &fg, Orientation::Corrected, gadget)?;
            let opt = min_cover(&red.system)?;
            if opt != g.vertex_count() {
                return fail(format!("opt(F) = {opt}, |V| = {}", g.vertex_count()), labelcover_value(&g, &fs, &fg));
            }
            let r = solve_cost_setcover(&red.system, &cs, &cg, cap)?;
            let ReconfigSequence::Cover(states) = &r.witness else {
                return fail("set-cover witness of the wrong kind", Value::Null);
            };
            let mapped: Vec<MultiAssignment> = states.iter().map(|c| red.multi_of(c)).collect();
            (r.value, r.witness.clone(), mapped, 0)
        }
        Target::Hypergraph => {
            let (red, cs, cg) = labelcover_to_hvc_with(&g, &fs, &fg, Orientation::Corrected, gadget)?;
            let r = solve_cost_hvc(&red.hypergraph, &cs, &cg, cap)?;
            let ReconfigSequence::VertexCover(states) = &r.witness else {
                return fail("vertex-cover witness of the wrong kind", Value::Null);
            };
            let padded = states.iter().any(|c| c.iter().any(|&w| red.is_padding(w)));
            let mapped: Vec<MultiAssignment> = if padded {
                Vec::new()
            } else {
                states.iter().map(|c| red.multi_of(c)).collect()
            };
            let padding = red.padding_in_minimum_cover()?.is_some() as u64;
            (r.value, r.witness.clone(), mapped, padding)
        }
    };
    if source.value != reduced {
        return fail(
            format!(
                "minlab = {} but cover cost = {}",
                crate::rational::format_rational(&source.value),
                crate::rational::format_rational(&reduced)
            ),
            labelcover_value(&g, &fs, &fg),
        );
    }
    let mut mapped_checked = 0;
    if !mapped.is_empty() {
        let seq = ReconfigSequence::MultiAssignment(mapped);
        if !validate_sequence(InstanceRef::LabelCover(&g), &seq)?.valid || seq.max_size() != witness.max_size() {
            return fail("reduced witness does not map back to a label-cover sequence", labelcover_value(&g, &fs, &fg));
        }
        mapped_checked = 1;
    }
    Ok(Outcome::Pass(vec![
        ("compared", 1),
        ("witness_mapped_back", mapped_checked),
        ("padding_in_min_cover", padding),
        ("states_explored", source.states_explored),
    ]))
}

/// Exact walk probabilities inside the certified sandwich bounds.
fn expander_bounds(ctx: &Trial) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let choice = rng.gen_range(0..3);
    let x = match choice {
        0 => ExpanderGraph::complete(rng.gen_range(4..=8))?,
        1 => ExpanderGraph::complete_with_loops(*[2usize, 4, 8, 16].choose(&mut *rng).expect("nonempty"))?,
        _ => {
            let n = *[8usize, 16, 32, 64].choose(&mut *rng).expect("nonempty");
            let d = *[3usize, 4, 6].choose(&mut *rng).expect("nonempty");
            ExpanderGraph::random(n, d, 1.0, rng.gen(), 8)?
        }
    };
    let n = x.vertex_count();
    let density = rng.gen_range(0.1..0.95);
    let in_set: Vec<bool> = (0..n).map(|_| rng.gen_bool(density)).collect();
    let mut checked = 0;
    for rho in 1..=4 {
        let exact = to_big(&walk_hit_prob(&x, &in_set, rho)?);
        let (lo, hi) = sandwich_bounds(&x, &in_set, rho);
        if exact < lo || exact > hi {
            return fail(
                format!("ρ = {rho}: walk probability {exact} outside [{lo}, {hi}]"),
                json!({ "expander": to_value(&x), "subset": in_set }),
            );
        }
        checked += 1;
    }
    Ok(Outcome::Pass(vec![("graphs", 1), ("walk_lengths", checked)]))
}

/// Both directions of amplification, by exact enumeration of all proofs.
fn claim_accept(ctx: &Trial) -> Result<Outcome> {
    let (v, eps, delta, rho) = {
        let mut rng = ctx.rng();
        let shape = ToyShape {
            r: rng.gen_range(1..=2),
            q: rng.gen_range(1..=2),
            ell: rng.gen_range(3..=5),
        };
        let v = random_table_verifier(shape, rng.gen_range(0.5..0.95), &mut *rng)?;
        let (eps, delta) = *[
            (ratio(1, 2), ratio(1, 2)),
            (ratio(3, 4), ratio(1, 4)),
            (ratio(7, 8), ratio(1, 4)),
            (ratio(1, 1), ratio(1, 8)),
        ]
        .choose(&mut *rng)
        .expect("nonempty");
        let rho = choose_rho(eps, &Delta::Value(delta))?;
        (v, eps, delta, rho)
    };
    let x = ExpanderGraph::complete_with_loops(v.randomness_count())?;
    // λ/d < ε/4
    if x.ratio_exact() >= to_big(&eps) / BigRational::from_integer(4.into()) {
        return Err(Error::TooLarge("expander not certified for this ε".into()));
    }
    let amplified = amplify(&v, &x, rho)?;
    let instance = || json!({ "verifier": to_value(&v), "eps": eps.to_string(), "delta": delta.to_string(), "rho": rho });
    let one = Rational::from_integer(1);
    let mut sound_cases = 0;
    for p in Proof::all(v.proof_length()) {
        let base = v.accept_prob(&p)?;
        let amp = amplified.accept_prob(&p)?;
        let walk = walk_hit_prob(&x, &v.acceptance_set(&p)?, rho)?;
        if amp != walk {
            return fail(format!("proof {p}: amplified {amp} but walk probability {walk}"), instance());
        }
        if base == one && amp != one {
            return fail(format!("proof {p} accepted surely but amplified acceptance is {amp}"), instance());
        }
        if base < one - eps {
            sound_cases += 1;
            if amp >= delta {
                return fail(format!("proof {p}: acceptance {base} < 1 − ε but amplified {amp} ≥ δ"), instance());
            }
        }
    }
    if !union_bound_holds(&v, &amplified, rho) {
        return fail("query-probability union bound fails", instance());
    }
    Ok(Outcome::Pass(vec![
        ("verifiers", 1),
        ("proofs", 1 << v.proof_length()),
        ("soundness_cases", sound_cases),
    ]))
}

/// Largest number of satisfying partial assignments enumerated per trial.
const POPULARITY_LIMIT: usize = 200_000;
/// Satisfying assignments whose single-vertex neighbourhoods are checked for
/// the dip bound, per trial.
const DIP_SAMPLE: usize = 400;

/// Decoded-proof acceptance at assigned tests, chain law, acceptance floor,
/// and the dip bound between neighbouring satisfying assignments.
fn fglss_popularity(ctx: &Trial) -> Result<Outcome> {
    let v = {
        let mut rng = ctx.rng();
        let shape = ToyShape {
            r: rng.gen_range(1..=3),
            q: rng.gen_range(1..=2),
            ell: rng.gen_range(2..=4),
        };
        random_table_verifier(shape, rng.gen_range(0.5..0.95), &mut *rng)?
    };
    let fg = Fglss::build(&v)?;
    let g = fg.graph();
    let mut all = Vec::new();
    let complete = for_each_satisfying(g, POPULARITY_LIMIT, |f| all.push(f.clone()))?;
    if !complete {
        return Err(Error::TooLarge("too many satisfying assignments".into()));
    }
    let instance = || json!({ "verifier": to_value(&v) });
    let space = v.randomness_count() as i128;
    for f in &all {
        let decoded = fg.plurality_decode(f)?.proof;
        for (r, sym) in f.0.iter().enumerate() {
            if sym.is_some() && !v.test(r).accepts(&decoded) {
                return fail(
                    format!("assignment {}: decoded proof {decoded} rejected at assigned test {r}", show(f)),
                    instance(),
                );
            }
        }
        for i in 0..v.proof_length() {
            let k = fg.position_values(f, i);
            let chain = k.iter().all(|a| k.iter().all(|b| a.is_subset(*b) || b.is_subset(*a)));
            if !chain {
                return fail(format!("assignment {}: position {i} values {k:?} not a chain", show(f)), instance());
            }
        }
        let floor = Rational::new(f.size() as i128, space);
        if v.accept_prob(&decoded)? < floor {
            return fail(format!("assignment {}: acceptance below ‖f‖/2^r", show(f)), instance());
        }
    }
    let stride = all.len().div_ceil(DIP_SAMPLE).max(1);
    let mut dips = 0;
    for f in all.iter().step_by(stride) {
        let pi = fg.plurality_decode(f)?.proof;
        for r in 0..f.len() {
            for s in std::iter::once(None).chain((0..g.alphabet_size()).map(Some)) {
                if f.0[r] == s {
                    continue;
                }
                let mut h = f.clone();
                h.0[r] = s;
                if !satisfies_partial(g, &h)? {
                    continue;
                }
                let pi2 = fg.plurality_decode(&h)?.proof;
                let diff = pi.hamming(&pi2);
                if diff > v.test(r).queries.len() {
                    return fail(format!("one vertex change moved {diff} decoded positions"), instance());
                }
                let bound = dip_bound(&v, &pi, &pi2)?;
                for p in interpolate_proofs(&pi, &pi2)? {
                    if v.accept_prob(&p)? < bound {
                        return fail(format!("interpolant {p} between {pi} and {pi2} dips below {bound}"), instance());
                    }
                }
                dips += 1;
            }
        }
    }
    Ok(Outcome::Pass(vec![
        ("verifiers", 1),
        ("satisfying_assignments", all.len() as u64),
        ("dip_pairs", dips),
    ]))
}

fn show(f: &PartialAssignment) -> String {
    serde_json::to_string(f).unwrap_or_default()
}

/// The completeness sequence between adjacent surely-accepted proofs.
fn fglss_completeness(ctx: &Trial) -> Result<Outcome> {
    let (v, a, b) = {
        let mut rng = ctx.rng();
        let shape = ToyShape {
            r: rng.gen_range(1..=2),
            q: rng.gen_range(1..=2),
            ell: rng.gen_range(2..=4),
        };
        random_toy_verifier(shape, 0.8, 200, &mut *rng)?
    };
    let instance = || json!({ "verifier": to_value(&v), "start": a, "goal": b });
    let fg = Fglss::build(&v)?;
    let states = fg.completeness_sequence(&a, &b)?;
    for (t, f) in states.iter().enumerate() {
        if !f.is_full() || !satisfies_partial(fg.graph(), f)? {
            return fail(format!("state {t} is not a full satisfying assignment"), instance());
        }
    }
    let seq = ReconfigSequence::PartialAssignment(states.clone());
    let ends = ReconfigSequence::PartialAssignment(vec![fg.embed_proof(&a)?, fg.embed_proof(&b)?]);
    if !validate_between(InstanceRef::Csp(fg.graph()), &seq, &ends)?.valid {
        return fail("completeness sequence is not a valid reconfiguration", instance());
    }
    let decoded = fg.decode_sequence(&states)?;
    if decoded.min_acceptance != Rational::from_integer(1) {
        return fail(format!("decoded sequence dips to {}", decoded.min_acceptance), instance());
    }
    let solved = match solve_maxpar(fg.graph(), &ends_of(&seq).0, &ends_of(&seq).1, ctx.opts.cap) {
        Ok(r) if r.value == Rational::from_integer(1) => 1,
        Ok(r) => return fail(format!("maxpar = {} on a completeness instance", r.value), instance()),
        Err(e) if skippable(&e) => 0,
        Err(e) => return Err(e),
    };
    Ok(Outcome::Pass(vec![("verifiers", 1), ("states", states.len() as u64), ("maxpar_solved", solved)]))
}

fn ends_of(seq: &ReconfigSequence) -> (PartialAssignment, PartialAssignment) {
    let ReconfigSequence::PartialAssignment(s) = seq else { unreachable!("partial sequence") };
    (s[0].clone(), s[s.len() - 1].clone())
}

/// The two-factor sequence: validity, peak `|C_s ∪ C_g|`, ratio at most 2.
fn approx_ratio(ctx: &Trial) -> Result<Outcome> {
    let file = {
        let mut rng = ctx.rng();
        if rng.gen_bool(0.5) {
            let params = GenParams {
                vertices: rng.gen_range(3..=6),
                items: rng.gen_range(3..=7),
                density: rng.gen_range(0.3..0.6),
                ..GenParams::default()
            };
            let (system, start, goal) = random_setcover(&params, &mut *rng)?;
            InstanceFile::Setcover { system, start, goal }
        } else {
            let params = GenParams {
                vertices: rng.gen_range(4..=8),
                items: rng.gen_range(2..=6),
                uniformity: rng.gen_range(2..=3),
                ..GenParams::default()
            };
            let (hypergraph, start, goal) = random_hypergraph(&params, &mut *rng)?;
            InstanceFile::Hypergraph { hypergraph, start, goal }
        }
    };
    let (cs, cg) = match &file {
        InstanceFile::Setcover { start, goal, .. } | InstanceFile::Hypergraph { start, goal, .. } => (start, goal),
        _ => unreachable!("cover instance"),
    };
    let inst = file.instance();
    let seq = two_factor_cover(inst, cs, cg)?;
    let ends = match &seq {
        ReconfigSequence::VertexCover(_) => ReconfigSequence::VertexCover(vec![cs.clone(), cg.clone()]),
        _ => ReconfigSequence::Cover(vec![cs.clone(), cg.clone()]),
    };
    if !validate_between(inst, &seq, &ends)?.valid {
        return fail("two-factor sequence is invalid", to_value(&file));
    }
    let union = cs.union(cg).count();
    if seq.max_size() != Some(union) {
        return fail(format!("peak {:?} but |C_s ∪ C_g| = {union}", seq.max_size()), to_value(&file));
    }
    let approx = cover_sequence_cost(inst, &seq)?;
    let exact = match &file {
        InstanceFile::Setcover { system, .. } => solve_cost_setcover(system, cs, cg, ctx.opts.cap)?,
        InstanceFile::Hypergraph { hypergraph, .. } => solve_cost_hvc(hypergraph, cs, cg, ctx.opts.cap)?,
        _ => unreachable!("cover instance"),
    };
    if approx > exact.value * 2 {
        return fail(format!("ratio {} exceeds 2", approx / exact.value), to_value(&file));
    }
    Ok(Outcome::Pass(vec![("instances", 1)]))
}

/// Threshold search against the materialized widest-path oracle.
fn oracle_agreement(ctx: &Trial) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let cap = ctx.opts.cap;
    let kind = rng.gen_range(0..4);
    let (file, solver, oracle) = match kind {
        0 => {
            let params = GenParams {
                vertices: rng.gen_range(1..=3),
                alphabet: rng.gen_range(1..=2),
                density: 0.6,
                ..GenParams::default()
            };
            let (graph, start, goal) = random_csp(&params, &mut *rng)?;
            let s = solve_maxpar(&graph, &start, &goal, cap)?.value;
            let o = materialized::maxpar(&graph, &start, &goal)?;
            (InstanceFile::Csp { graph, start, goal }, s, o)
        }
        1 => {
            let params = GenParams {
                vertices: 2,
                alphabet: 2,
                ..GenParams::default()
            };
            let (graph, start, goal) = random_labelcover(&params, &mut *rng)?;
            let s = solve_minlab(&graph, &start, &goal, cap)?.value;
            let o = materialized::minlab(&graph, &start, &goal)?;
            (InstanceFile::Labelcover { graph, start, goal }, s, o)
        }
        2 => {
            let params = GenParams {
                vertices: rng.gen_range(2..=4),
                items: rng.gen_range(2..=4),
                ..GenParams::default()
            };
            let (system, start, goal) = random_setcover(&params, &mut *rng)?;
            let s = solve_cost_setcover(&system, &start, &goal, cap)?.value;
            let o = materialized::cost_setcover(&system, &start, &goal)?;
            (InstanceFile::Setcover { system, start, goal }, s, o)
        }
        _ => {
            let params = GenParams {
                vertices: rng.gen_range(2..=4),
                items: rng.gen_range(1..=4),
                uniformity: 2,
                ..GenParams::default()
            };
            let (hypergraph, start, goal) = random_hypergraph(&params, &mut *rng)?;
            let s = solve_cost_hvc(&hypergraph, &start, &goal, cap)?.value;
            let o = materialized::cost_hvc(&hypergraph, &start, &goal)?;
            (InstanceFile::Hypergraph { hypergraph, start, goal }, s, o)
        }
    };
    if solver != oracle.value {
        return fail(
            format!("{}: solver {} but oracle {}", file.kind(), solver, oracle.value),
            to_value(&file),
        );
    }
    Ok(Outcome::Pass(vec![
        ("compared", 1),
        ("at_most_20_states", (oracle.states <= 20) as u64),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(trials: usize) -> CheckOptions {
        CheckOptions {
            trials,
            seed: 1,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn suites_parse_by_name() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for s in Suite::ALL {
            let r = run_suite(s, &opts(6));
            assert!(r.ok(), "{}", r.to_markdown());
        }
    }

    #[test]
    fn corrupted_gadget_fails_with_counterexample() {
        let o = CheckOptions {
            gadget: GadgetChoice::Corrupted,
            ..opts(40)
        };
        let r = run_suite(Suite::LemmaSetcover, &o);
        assert!(!r.ok());
        let c = r.first_counterexample.unwrap();
        assert_eq!(c.instance["kind"], "labelcover");
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::OracleAgreement, &opts(10));
        let b = run_suite(Suite::OracleAgreement, &opts(10));
        assert_eq!(a, b);
        assert_eq!(a.to_markdown(), b.to_markdown());
    }
}
