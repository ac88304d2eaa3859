//! Two-factor approximation for cover reconfiguration: insert the goal's new
//! members, then delete the start's surplus members.

use crate::error::{Error, Result};
use crate::instance::Cover;
use crate::rational::Rational;
use crate::sequence::{InstanceRef, ReconfigSequence};
use crate::solve::{min_cover, min_vertex_cover};

/// `C_s`, then each member of `C_g ∖ C_s` added in ascending order, then each
/// member of `C_s ∖ C_g` removed in ascending order.
pub fn two_factor_states(cs: &Cover, cg: &Cover) -> Vec<Cover> {
    let mut states = vec![cs.clone()];
    let mut cur = cs.clone();
    for &x in cg.difference(cs) {
        cur.insert(x);
        states.push(cur.clone());
    }
    for &x in cs.difference(cg) {
        cur.remove(&x);
        states.push(cur.clone());
    }
    states
}

/// The two-factor sequence for a set system or hypergraph.
pub fn two_factor_cover(instance: InstanceRef, cs: &Cover, cg: &Cover) -> Result<ReconfigSequence> {
    let feasible = |c: &Cover| match instance {
        InstanceRef::SetCover(f) => Ok(f.is_cover(c)),
        InstanceRef::Hypergraph(h) => Ok(h.is_vertex_cover(c)),
        _ => Err(Error::KindMismatch {
            sequence: "cover",
            instance: "non-cover instance",
        }),
    };
    for (name, c) in [("start", cs), ("goal", cg)] {
        if !feasible(c)? {
            return Err(Error::InfeasibleEndpoint(format!("{name} is not a cover")));
        }
    }
    let states = two_factor_states(cs, cg);
    Ok(match instance {
        InstanceRef::Hypergraph(_) => ReconfigSequence::VertexCover(states),
        _ => ReconfigSequence::Cover(states),
    })
}

/// `max_t |C^(t)| / (opt + 1)` of a cover sequence.
pub fn cover_sequence_cost(instance: InstanceRef, seq: &ReconfigSequence) -> Result<Rational> {
    let opt = match instance {
        InstanceRef::SetCover(f) => min_cover(f)?,
        InstanceRef::Hypergraph(h) => min_vertex_cover(h)?,
        _ => return Err(Error::precondition("cost is defined for cover instances")),
    };
    let peak = seq
        .max_size()
        .ok_or_else(|| Error::malformed("empty sequence"))?;
    Ok(Rational::new(peak as i128, opt as i128 + 1))
}
