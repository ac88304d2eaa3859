//! Acceptance gate: one line per criterion, all exact.
//!
//! Lines go straight to the stderr handle so they show up even when the
//! harness captures output.

use std::io::Write;

use rforge_core::checks::{run_suite, CheckOptions, Suite, SuiteReport};
use rforge_core::generate::{random_labelcover, GenParams};
use rforge_core::io::InstanceFile;
use rforge_core::pipeline::{run_pipeline, PipelineOptions};
use rforge_core::reduce::{lift_sequence, p2csp_to_labelcover, project};
use rforge_core::seed::SeedStream;
use rforge_core::sequence::{validate_between, InstanceRef, ReconfigSequence};
use rforge_core::solve::{solve_maxpar, solve_minlab};
use rforge_core::verifier::{LocalTest, Proof, TableVerifier};
use rforge_core::Rational;

const SEED: u64 = 20_240_601;
const STATE_BUDGET: u64 = 100_000;

fn suite(s: Suite, trials: usize) -> SuiteReport {
    run_suite(
        s,
        &CheckOptions {
            trials,
            seed: SEED,
            cap: STATE_BUDGET,
            ..CheckOptions::default()
        },
    )
}

fn show(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

struct Gate {
    lines: Vec<String>,
    failed: bool,
}

impl Gate {
    fn record(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        let line = format!("criterion {id:>2} [{name}]: {verdict} ({detail})");
        show(&line);
        self.lines.push(line);
        self.failed |= !ok;
    }

    fn suite(&mut self, id: u32, name: &str, r: &SuiteReport, min_passed: usize, extra: bool) {
        let mut detail = format!("{} passed, {} skipped, {} failed", r.passed, r.skipped, r.failed);
        if let Some(c) = &r.first_counterexample {
            detail.push_str(&format!("; first counterexample at trial {}: {}", c.trial, c.message));
        }
        self.record(id, name, r.ok() && r.passed >= min_passed && extra, detail);
    }
}

/// maxpar = 1 sources lift to minlab = 1 with a valid half-step witness.
fn lifted_completeness() -> (usize, usize, Option<String>) {
    let stream = SeedStream::new(SEED).child("lift");
    let (mut sources, mut tried) = (0, 0);
    let one = Rational::from_integer(1);
    for i in 0..400u64 {
        if sources >= 40 {
            break;
        }
        let mut rng = stream.rng_indexed("instance", i);
        let params = GenParams {
            vertices: 2 + (i % 2) as usize,
            alphabet: 2,
            tightness: 0.75,
            ..GenParams::default()
        };
        let Ok((g, ms, mg)) = random_labelcover(&params, &mut rng) else { continue };
        let (fs, fg) = (project(&ms), project(&mg));
        tried += 1;
        let Ok(mp) = solve_maxpar(&g, &fs, &fg, STATE_BUDGET) else { continue };
        if mp.value != one {
            continue;
        }
        sources += 1;
        let ReconfigSequence::PartialAssignment(states) = &mp.witness else {
            return (sources, tried, Some("maxpar witness of the wrong kind".into()));
        };
        let (lg, ls, lgoal) = p2csp_to_labelcover(&g, &fs, &fg).expect("full satisfying endpoints");
        let lifted = ReconfigSequence::MultiAssignment(lift_sequence(states).expect("full witness"));
        let ends = ReconfigSequence::MultiAssignment(vec![ls.clone(), lgoal.clone()]);
        let valid = validate_between(InstanceRef::LabelCover(&lg), &lifted, &ends).expect("same kind").valid;
        if !valid || lifted.max_size() > Some(g.vertex_count() + 1) {
            return (sources, tried, Some(format!("instance {i}: half-step witness invalid")));
        }
        match solve_minlab(&lg, &ls, &lgoal, STATE_BUDGET) {
            Ok(r) if r.value == one => {}
            Ok(r) => return (sources, tried, Some(format!("instance {i}: minlab = {}", r.value))),
            Err(e) => return (sources, tried, Some(format!("instance {i}: {e}"))),
        }
    }
    (sources, tried, None)
}

fn toy_pipeline_values() -> Vec<(String, Option<String>)> {
    let t = LocalTest {
        queries: vec![0],
        decision: vec![true, true],
    };
    let file = InstanceFile::Verifier {
        verifier: TableVerifier::new(1, 1, 1, vec![t.clone(), t]).expect("toy verifier"),
        start: Proof(vec![false]),
        goal: Proof(vec![true]),
    };
    let dir = std::env::temp_dir().join(format!("rforge-acceptance-{}", std::process::id()));
    let m = run_pipeline(&file, &dir, &PipelineOptions::default()).expect("pipeline");
    let _ = std::fs::remove_dir_all(&dir);
    m.stages.into_iter().map(|s| (s.stage, s.value)).collect()
}

#[test]
fn acceptance() {
    let mut gate = Gate {
        lines: Vec::new(),
        failed: false,
    };

    let r = suite(Suite::LemmaSetcover, 240);
    let asym = r.stat("asymmetric");
    gate.suite(1, "per-edge coverage equivalence", &r, 200, asym > 0);
    show(&format!("    {asym} instances with asymmetric tables, {} subfamilies", r.stat("subfamilies")));

    let r = suite(Suite::CostEqualitySc, 80);
    gate.suite(2, "minlab = set-cover cost", &r, 50, true);

    let r = suite(Suite::CostEqualityHvc, 80);
    gate.suite(3, "minlab = hypergraph-VC cost", &r, 50, true);

    let (sources, tried, err) = lifted_completeness();
    gate.record(
        4,
        "maxpar 1 lifts to minlab 1",
        err.is_none() && sources >= 30,
        format!("{sources} sources with maxpar 1 out of {tried}{}", err.map(|e| format!("; {e}")).unwrap_or_default()),
    );

    let r = suite(Suite::FglssCompleteness, 40);
    let stages = toy_pipeline_values();
    let all_one = stages
        .iter()
        .filter(|(s, _)| s != "amplified")
        .all(|(_, v)| v.as_deref() == Some("1/1"));
    gate.suite(5, "FGLSS completeness and end-to-end cost 1", &r, 10, all_one);
    show(&format!("    pipeline stages: {stages:?}"));

    let r = suite(Suite::FglssPopularity, 80);
    gate.suite(6, "decoding laws, acceptance floor, dip bound", &r, 40, true);
    show(&format!(
        "    {} satisfying assignments, {} neighbouring pairs",
        r.stat("satisfying_assignments"),
        r.stat("dip_pairs")
    ));

    let r = suite(Suite::ExpanderBounds, 300);
    gate.suite(7, "walk sandwich bounds", &r, 300, true);

    let r = suite(Suite::ClaimAccept, 200);
    gate.suite(8, "amplification completeness and soundness", &r, 150, r.stat("soundness_cases") > 0);

    let r = suite(Suite::ApproxRatio, 300);
    gate.suite(9, "two-factor ratio and peak identity", &r, 250, true);

    let r = suite(Suite::OracleAgreement, 300);
    let small = r.stat("at_most_20_states");
    gate.suite(10, "threshold search = materialized oracle", &r, 300, small > 0);
    show(&format!("    {small} instances with at most 20 states"));

    assert!(!gate.failed, "acceptance failures:\n{}", gate.lines.join("\n"));
}
