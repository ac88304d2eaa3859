//! Partial 2CSP reconfiguration to label cover reconfiguration: same graph,
//! singleton endpoints, and the sequence maps in both directions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{satisfies_partial, ConstraintGraph, MultiAssignment, PartialAssignment};

/// The lifted instance: the graph unchanged and `f′(v) := {f(v)}`.
pub fn p2csp_to_labelcover(
    g: &ConstraintGraph,
    fs: &PartialAssignment,
    fg: &PartialAssignment,
) -> Result<(ConstraintGraph, MultiAssignment, MultiAssignment)> {
    for (name, f) in [("start", fs), ("goal", fg)] {
        if !f.is_full() {
            return Err(Error::precondition(format!("{name} assignment is not full")));
        }
        if !satisfies_partial(g, f)? {
            return Err(Error::InfeasibleEndpoint(format!("{name} assignment is not satisfying")));
        }
    }
    Ok((
        g.clone(),
        MultiAssignment::singletons(fs),
        MultiAssignment::singletons(fg),
    ))
}

/// Lifts a sequence of full assignments: each change of `v*` from `a` to `b`
/// passes through the half-step `f(v*) = {a, b}`.
pub fn lift_sequence(states: &[PartialAssignment]) -> Result<Vec<MultiAssignment>> {
    let Some(first) = states.first() else {
        return Err(Error::malformed("empty sequence"));
    };
    if states.iter().any(|f| !f.is_full()) {
        return Err(Error::precondition("lifting needs full assignments throughout"));
    }
    let mut out = vec![MultiAssignment::singletons(first)];
    for pair in states.windows(2) {
        let diff: Vec<usize> = (0..pair[0].len())
            .filter(|&v| pair[0].get(v) != pair[1].get(v))
            .collect();
        match diff.as_slice() {
            [] => {}
            [v] => {
                let mut half = MultiAssignment::singletons(&pair[0]);
                half.0[*v].extend(pair[1].get(*v));
                out.push(half);
                out.push(MultiAssignment::singletons(&pair[1]));
            }
            _ => return Err(Error::precondition("consecutive states differ in more than one vertex")),
        }
    }
    Ok(out)
}

/// `f(v) := α` when `f′(v) = {α}`, otherwise ⊥.
pub fn project(f: &MultiAssignment) -> PartialAssignment {
    PartialAssignment(
        f.0.iter()
            .map(|set: &BTreeSet<usize>| {
                if set.len() == 1 {
                    set.first().copied()
                } else {
                    None
                }
            })
            .collect(),
    )
}

pub fn project_sequence(states: &[MultiAssignment]) -> Vec<PartialAssignment> {
    states.iter().map(project).collect()
}

/// `‖f′‖ ≥ 2N − |V₁|`, `V₁` the vertices with exactly one label; holds for
/// satisfying multi-assignments when no vertex is isolated.
pub fn singleton_size_bound_holds(f: &MultiAssignment) -> bool {
    let n = f.len();
    let singles = f.0.iter().filter(|s| s.len() == 1).count();
    f.size() + singles >= 2 * n
}
