//! Reconfiguration sequences and their validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    satisfies_multi, satisfies_partial, ConstraintGraph, Cover, Hypergraph, MultiAssignment,
    PartialAssignment, SetSystem,
};
use crate::verifier::{Proof, TableVerifier};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "states", rename_all = "kebab-case")]
pub enum ReconfigSequence {
    Proof(Vec<Proof>),
    PartialAssignment(Vec<PartialAssignment>),
    MultiAssignment(Vec<MultiAssignment>),
    Cover(Vec<Cover>),
    VertexCover(Vec<Cover>),
}

impl ReconfigSequence {
    pub fn kind(&self) -> &'static str {
        match self {
            ReconfigSequence::Proof(_) => "proof",
            ReconfigSequence::PartialAssignment(_) => "partial-assignment",
            ReconfigSequence::MultiAssignment(_) => "multi-assignment",
            ReconfigSequence::Cover(_) => "cover",
            ReconfigSequence::VertexCover(_) => "vertex-cover",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ReconfigSequence::Proof(s) => s.len(),
            ReconfigSequence::PartialAssignment(s) => s.len(),
            ReconfigSequence::MultiAssignment(s) => s.len(),
            ReconfigSequence::Cover(s) | ReconfigSequence::VertexCover(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Size measure of every state (`‖f‖` or `|C|`; proofs have none).
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            ReconfigSequence::Proof(s) => vec![0; s.len()],
            ReconfigSequence::PartialAssignment(s) => s.iter().map(|f| f.size()).collect(),
            ReconfigSequence::MultiAssignment(s) => s.iter().map(|f| f.size()).collect(),
            ReconfigSequence::Cover(s) | ReconfigSequence::VertexCover(s) => {
                s.iter().map(|c| c.len()).collect()
            }
        }
    }

    pub fn min_size(&self) -> Option<usize> {
        self.sizes().into_iter().min()
    }

    pub fn max_size(&self) -> Option<usize> {
        self.sizes().into_iter().max()
    }
}

/// The instance a sequence is validated against.
#[derive(Clone, Copy, Debug)]
pub enum InstanceRef<'a> {
    Verifier(&'a TableVerifier),
    Csp(&'a ConstraintGraph),
    LabelCover(&'a ConstraintGraph),
    SetCover(&'a SetSystem),
    Hypergraph(&'a Hypergraph),
}

impl InstanceRef<'_> {
    fn name(&self) -> &'static str {
        match self {
            InstanceRef::Verifier(_) => "verifier",
            InstanceRef::Csp(_) => "csp",
            InstanceRef::LabelCover(_) => "labelcover",
            InstanceRef::SetCover(_) => "setcover",
            InstanceRef::Hypergraph(_) => "hypergraph",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// The state is not satisfying / not a cover, or is not well formed.
    Infeasible,
    /// The state is too far from its predecessor.
    StepTooLarge { distance: usize },
    StartMismatch,
    GoalMismatch,
    /// For proof sequences: the verifier does not accept with probability 1.
    NotAccepted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub reason: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub first_violation: Option<Violation>,
}

impl Validation {
    fn from(first_violation: Option<Violation>) -> Self {
        Self {
            valid: first_violation.is_none(),
            first_violation,
        }
    }
}

/// Per-state feasibility and step metric. Proof sequences only check the
/// step metric and lengths, since proofs need not be accepted with
/// probability 1 on a soundness path; see [`validate_accepted_proofs`].
pub fn validate_sequence(instance: InstanceRef, seq: &ReconfigSequence) -> Result<Validation> {
    if seq.is_empty() {
        return Err(Error::malformed("reconfiguration sequence is empty"));
    }
    let violation = match (instance, seq) {
        (InstanceRef::Verifier(v), ReconfigSequence::Proof(states)) => {
            check_states(states, |p| p.len() == v.proof_length(), |a, b| a.hamming(b))
        }
        (InstanceRef::Csp(g), ReconfigSequence::PartialAssignment(states)) => check_states(
            states,
            |f| satisfies_partial(g, f).unwrap_or(false),
            |a, b| a.hamming(b),
        ),
        (InstanceRef::LabelCover(g), ReconfigSequence::MultiAssignment(states)) => {
            // a graph with self-loops has no multi semantics; surface that as an error
            if g.has_self_loops() {
                return Err(Error::SelfLoopsPresent);
            }
            check_states(
                states,
                |f| satisfies_multi(g, f).unwrap_or(false),
                |a, b| a.distance(b),
            )
        }
        (InstanceRef::SetCover(f), ReconfigSequence::Cover(states)) => {
            check_states(states, |c| f.is_cover(c), cover_distance)
        }
        (InstanceRef::Hypergraph(h), ReconfigSequence::VertexCover(states)) => {
            check_states(states, |c| h.is_vertex_cover(c), cover_distance)
        }
        (inst, seq) => {
            return Err(Error::KindMismatch {
                sequence: seq.kind(),
                instance: inst.name(),
            })
        }
    };
    Ok(Validation::from(violation))
}

/// As [`validate_sequence`], also requiring the first and last states to be
/// the given endpoints (`endpoints` holds `[start, goal]`).
pub fn validate_between(
    instance: InstanceRef,
    seq: &ReconfigSequence,
    endpoints: &ReconfigSequence,
) -> Result<Validation> {
    if seq.kind() != endpoints.kind() || endpoints.len() != 2 {
        return Err(Error::malformed("endpoints must be two states of the sequence's kind"));
    }
    let (start_ok, goal_ok) = match (seq, endpoints) {
        (ReconfigSequence::Proof(s), ReconfigSequence::Proof(e)) => ends_match(s, e),
        (ReconfigSequence::PartialAssignment(s), ReconfigSequence::PartialAssignment(e)) => {
            ends_match(s, e)
        }
        (ReconfigSequence::MultiAssignment(s), ReconfigSequence::MultiAssignment(e)) => {
            ends_match(s, e)
        }
        (ReconfigSequence::Cover(s), ReconfigSequence::Cover(e))
        | (ReconfigSequence::VertexCover(s), ReconfigSequence::VertexCover(e)) => ends_match(s, e),
        _ => unreachable!("kinds checked above"),
    };
    let base = validate_sequence(instance, seq)?;
    let mut first = base.first_violation;
    if !start_ok {
        first = Some(Violation {
            index: 0,
            reason: ViolationKind::StartMismatch,
        });
    } else if !goal_ok {
        let last = Violation {
            index: seq.len() - 1,
            reason: ViolationKind::GoalMismatch,
        };
        if first.is_none() {
            first = Some(last);
        }
    }
    Ok(Validation::from(first))
}

/// Proof sequence in which every proof is accepted with probability 1.
pub fn validate_accepted_proofs(v: &TableVerifier, proofs: &[Proof]) -> Result<Validation> {
    let seq = ReconfigSequence::Proof(proofs.to_vec());
    let base = validate_sequence(InstanceRef::Verifier(v), &seq)?;
    if base.first_violation.is_some() {
        return Ok(base);
    }
    for (index, p) in proofs.iter().enumerate() {
        if !v.accepts_surely(p)? {
            return Ok(Validation::from(Some(Violation {
                index,
                reason: ViolationKind::NotAccepted,
            })));
        }
    }
    Ok(base)
}

fn ends_match<T: PartialEq>(states: &[T], endpoints: &[T]) -> (bool, bool) {
    (
        states.first() == endpoints.first(),
        states.last() == endpoints.last(),
    )
}

pub fn cover_distance(a: &Cover, b: &Cover) -> usize {
    a.symmetric_difference(b).count()
}

fn check_states<T>(
    states: &[T],
    feasible: impl Fn(&T) -> bool,
    distance: impl Fn(&T, &T) -> usize,
) -> Option<Violation> {
    for (index, s) in states.iter().enumerate() {
        if !feasible(s) {
            return Some(Violation {
                index,
                reason: ViolationKind::Infeasible,
            });
        }
        if index > 0 {
            let d = distance(&states[index - 1], s);
            if d > 1 {
                return Some(Violation {
                    index,
                    reason: ViolationKind::StepTooLarge { distance: d },
                });
            }
        }
    }
    None
}
