//! End-to-end chain from a verifier down to set cover and hypergraph vertex
//! cover, staged as instance files with a manifest the report is rendered from.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::amplify::{amplify, ExpanderGraph};
use crate::error::{Error, Result};
use crate::fglss::Fglss;
use crate::instance::{normalize_self_loops, MultiAssignment, PartialAssignment};
use crate::io::{read_json, write_json, InstanceFile};
use crate::rational::format_rational;
use crate::reduce::gadget::MAX_GADGET_ALPHABET;
use crate::reduce::{labelcover_to_hvc, labelcover_to_setcover, p2csp_to_labelcover};
use crate::solve::{solve_cost_hvc, solve_cost_setcover, solve_maxpar, solve_minlab, SolveResult};
use crate::verifier::TableVerifier;

/// Largest randomness length accepted as pipeline input.
pub const MAX_RANDOMNESS: u32 = 4;
/// Largest query complexity accepted as pipeline input.
pub const MAX_QUERIES: usize = 3;
pub const MANIFEST: &str = "stages.json";

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Walk length for the amplification stage; `None` skips the stage.
    pub rho: Option<usize>,
    pub cap: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            rho: Some(1),
            cap: crate::solve::DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    /// Instance file relative to the staging directory; absent when the
    /// stage could not be materialized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub cap: u64,
    pub stages: Vec<StageRecord>,
}

fn stage_err(stage: &str, e: Error) -> Error {
    match e {
        Error::TooLarge(m) => Error::TooLarge(format!("stage {stage}: {m}")),
        Error::InfeasibleEndpoint(m) => Error::InfeasibleEndpoint(format!("stage {stage}: {m}")),
        Error::Precondition(m) => Error::Precondition(format!("stage {stage}: {m}")),
        other => Error::Malformed(format!("stage {stage}: {other}")),
    }
}

/// Refuses verifiers beyond the pipeline ceiling.
pub fn check_ceiling(v: &TableVerifier) -> Result<()> {
    if v.randomness_bits() > MAX_RANDOMNESS || v.query_complexity() > MAX_QUERIES {
        return Err(Error::TooLarge(format!(
            "verifier with r = {}, q = {} exceeds the pipeline ceiling r ≤ {MAX_RANDOMNESS}, q ≤ {MAX_QUERIES}",
            v.randomness_bits(),
            v.query_complexity()
        )));
    }
    Ok(())
}

fn solved(stage: &str, file: &str, objective: &str, r: Result<SolveResult>, cap: u64) -> Result<StageRecord> {
    let mut rec = StageRecord {
        stage: stage.into(),
        file: Some(file.into()),
        objective: Some(objective.into()),
        value: None,
        states_explored: None,
        note: None,
    };
    match r {
        Ok(r) => {
            rec.value = Some(format_rational(&r.value));
            rec.states_explored = Some(r.states_explored);
        }
        Err(Error::BudgetExhausted { .. }) => rec.note = Some(format!("solve skipped: budget of {cap} states exhausted")),
        Err(Error::TooLarge(m)) => rec.note = Some(format!("solve skipped: {m}")),
        Err(e) => return Err(stage_err(stage, e)),
    }
    Ok(rec)
}

/// Runs every stage on a verifier instance, writing `NN-stage.json` files and
/// the manifest into `dir`.
pub fn run_pipeline(input: &InstanceFile, dir: &Path, opts: &PipelineOptions) -> Result<Manifest> {
    let InstanceFile::Verifier { verifier, start, goal } = input else {
        return Err(Error::precondition(format!("pipeline input must be a verifier, got {}", input.kind())));
    };
    check_ceiling(verifier)?;
    fs::create_dir_all(dir).map_err(|e| Error::malformed(format!("{}: {e}", dir.display())))?;
    let cap = opts.cap;
    let mut stages = Vec::new();

    let base = match opts.rho {
        Some(rho) => {
            let x = ExpanderGraph::complete_with_loops(verifier.randomness_count()).map_err(|e| stage_err("amplified", e))?;
            let v = amplify(verifier, &x, rho).map_err(|e| stage_err("amplified", e))?;
            let file = "01-amplified.json";
            write_json(
                &dir.join(file),
                &InstanceFile::Verifier {
                    verifier: v.clone(),
                    start: start.clone(),
                    goal: goal.clone(),
                },
            )?;
            let acc = |p| v.accept_prob(p).map(|a| format_rational(&a));
            stages.push(StageRecord {
                stage: "amplified".into(),
                file: Some(file.into()),
                objective: None,
                value: None,
                states_explored: None,
                note: Some(format!(
                    "rho = {rho}; acceptance start {}, goal {}",
                    acc(start)?,
                    acc(goal)?
                )),
            });
            v
        }
        None => verifier.clone(),
    };

    let fg = Fglss::build(&base).map_err(|e| stage_err("fglss", e))?;
    let (ps, pg) = (fg.embed_proof(start)?, fg.embed_proof(goal)?);
    let g = fg.graph().clone();
    stages.push(write_and_solve_csp(dir, "fglss", "02-fglss.json", &g, &ps, &pg, cap)?);

    let normalized = normalize_self_loops(&g).map_err(|e| stage_err("normalized", e))?;
    stages.push(write_and_solve_csp(dir, "normalized", "03-normalized.json", &normalized, &ps, &pg, cap)?);

    let (lc, ms, mg) = p2csp_to_labelcover(&normalized, &ps, &pg).map_err(|e| stage_err("labelcover", e))?;
    let file = "04-labelcover.json";
    write_json(
        &dir.join(file),
        &InstanceFile::Labelcover {
            graph: lc.clone(),
            start: ms.clone(),
            goal: mg.clone(),
        },
    )?;
    stages.push(solved("labelcover", file, "minlab", solve_minlab(&lc, &ms, &mg, cap), cap)?);

    if lc.alphabet_size() > MAX_GADGET_ALPHABET {
        for stage in ["setcover", "hypergraph"] {
            stages.push(StageRecord {
                stage: stage.into(),
                file: None,
                objective: None,
                value: None,
                states_explored: None,
                note: Some(format!(
                    "not materialized: alphabet of {} symbols exceeds the hypercube limit {MAX_GADGET_ALPHABET}",
                    lc.alphabet_size()
                )),
            });
        }
    } else {
        stages.extend(cover_stages(dir, &lc, &ms, &mg, cap)?);
    }

    let manifest = Manifest { cap, stages };
    write_json(&dir.join(MANIFEST), &manifest)?;
    Ok(manifest)
}

fn write_and_solve_csp(
    dir: &Path,
    stage: &str,
    file: &str,
    g: &crate::instance::ConstraintGraph,
    fs: &PartialAssignment,
    fg: &PartialAssignment,
    cap: u64,
) -> Result<StageRecord> {
    write_json(
        &dir.join(file),
        &InstanceFile::Csp {
            graph: g.clone(),
            start: fs.clone(),
            goal: fg.clone(),
        },
    )?;
    solved(stage, file, "maxpar", solve_maxpar(g, fs, fg, cap), cap)
}

fn cover_stages(
    dir: &Path,
    lc: &crate::instance::ConstraintGraph,
    ms: &MultiAssignment,
    mg: &MultiAssignment,
    cap: u64,
) -> Result<Vec<StageRecord>> {
    let (sc, cs, cg) = labelcover_to_setcover(lc, ms, mg).map_err(|e| stage_err("setcover", e))?;
    let file = "05-setcover.json";
    write_json(
        &dir.join(file),
        &InstanceFile::Setcover {
            system: sc.system.clone(),
            start: cs.clone(),
            goal: cg.clone(),
        },
    )?;
    let sc_rec = solved("setcover", file, "cost", solve_cost_setcover(&sc.system, &cs, &cg, cap), cap)?;

    let (hv, hs, hg) = labelcover_to_hvc(lc, ms, mg).map_err(|e| stage_err("hypergraph", e))?;
    let file = "06-hypergraph.json";
    write_json(
        &dir.join(file),
        &InstanceFile::Hypergraph {
            hypergraph: hv.hypergraph.clone(),
            start: hs.clone(),
            goal: hg.clone(),
        },
    )?;
    let hv_rec = solved("hypergraph", file, "cost", solve_cost_hvc(&hv.hypergraph, &hs, &hg, cap), cap)?;
    Ok(vec![sc_rec, hv_rec])
}

/// Sizes of one staged instance, read back from its file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Sizes {
    kind: String,
    vertices: String,
    constraints: String,
    alphabet: String,
    width: String,
}

fn sizes(file: &InstanceFile) -> Sizes {
    match file {
        InstanceFile::Csp { graph, .. } | InstanceFile::Labelcover { graph, .. } => Sizes {
            kind: file.kind().into(),
            vertices: graph.vertex_count().to_string(),
            constraints: graph.edge_count().to_string(),
            alphabet: graph.alphabet_size().to_string(),
            width: graph.arity().to_string(),
        },
        InstanceFile::Setcover { system, .. } => Sizes {
            kind: file.kind().into(),
            vertices: system.set_count().to_string(),
            constraints: system.universe_size().to_string(),
            alphabet: String::new(),
            width: system.sets().iter().map(Vec::len).max().unwrap_or(0).to_string(),
        },
        InstanceFile::Hypergraph { hypergraph, .. } => Sizes {
            kind: file.kind().into(),
            vertices: hypergraph.vertex_count().to_string(),
            constraints: hypergraph.hyperedges().len().to_string(),
            alphabet: String::new(),
            width: hypergraph.uniformity().map(|u| u.to_string()).unwrap_or_default(),
        },
        InstanceFile::Verifier { verifier, .. } => Sizes {
            kind: file.kind().into(),
            vertices: verifier.randomness_count().to_string(),
            constraints: verifier.proof_length().to_string(),
            alphabet: String::new(),
            width: verifier.query_complexity().to_string(),
        },
    }
}

/// Markdown and CSV reports of a staged directory; a pure function of the
/// manifest and the staged files.
pub fn render_report(dir: &Path) -> Result<(String, String)> {
    let manifest: Manifest = read_json(&dir.join(MANIFEST))?;
    let mut md = String::from("# Pipeline report\n\n");
    let _ = writeln!(md, "State budget per solve: {}\n", manifest.cap);
    md.push_str("| stage | kind | vertices | constraints | alphabet | width | objective | value | states | note |\n");
    md.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    let mut csv = String::from("stage,kind,vertices,constraints,alphabet,width,objective,value,states,note\n");
    for rec in &manifest.stages {
        let s = match &rec.file {
            Some(f) => sizes(&read_json::<InstanceFile>(&dir.join(f))?),
            None => Sizes::default(),
        };
        let cells = [
            rec.stage.clone(),
            s.kind,
            s.vertices,
            s.constraints,
            s.alphabet,
            s.width,
            rec.objective.clone().unwrap_or_default(),
            rec.value.clone().unwrap_or_default(),
            rec.states_explored.map(|n| n.to_string()).unwrap_or_default(),
            rec.note.clone().unwrap_or_default(),
        ];
        let _ = writeln!(md, "| {} |", cells.join(" | "));
        let _ = writeln!(csv, "{}", cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
    }
    md.push_str(
        "\nColumns: for graphs, vertices/constraints/alphabet/width are |V|, |E|, |Σ| and arity; \
         for set systems, sets, universe size and largest set; for hypergraphs, vertices, hyperedges \
         and uniformity; for verifiers, 2^r, proof length and q.\n",
    );
    Ok((md, csv))
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}
