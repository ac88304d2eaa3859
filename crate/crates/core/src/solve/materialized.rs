//! Reference solver: enumerates every feasible state, connects pairs at
//! distance one, and runs a bottleneck (widest-path) Dijkstra with vertex
//! weights. Shares nothing with the threshold search beyond the public
//! satisfaction checks; used to cross-check it on tiny instances.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::instance::{
    satisfies_multi, satisfies_partial, ConstraintGraph, Cover, Hypergraph, MultiAssignment,
    PartialAssignment, SetSystem,
};
use crate::rational::Rational;

/// Largest state graph the reference solver will build.
pub const STATE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleValue {
    pub value: Rational,
    /// Number of feasible states in the materialized graph.
    pub states: usize,
}

pub fn maxpar(g: &ConstraintGraph, fs: &PartialAssignment, fg: &PartialAssignment) -> Result<OracleValue> {
    let n = g.vertex_count();
    let k = g.alphabet_size();
    let total = checked_pow(k + 1, n)?;
    let states: Vec<PartialAssignment> = (0..total)
        .map(|mut code| {
            PartialAssignment(
                (0..n)
                    .map(|_| {
                        let d = code % (k + 1);
                        code /= k + 1;
                        (d < k).then_some(d)
                    })
                    .collect(),
            )
        })
        .filter(|f| satisfies_partial(g, f).unwrap_or(false))
        .collect();
    let best = bottleneck(
        &states,
        fs,
        fg,
        |f| f.size(),
        |a, b| a.hamming(b) == 1,
        true,
    )?;
    Ok(OracleValue {
        value: Rational::new(best as i128, n as i128),
        states: states.len(),
    })
}

pub fn minlab(g: &ConstraintGraph, fs: &MultiAssignment, fg: &MultiAssignment) -> Result<OracleValue> {
    let n = g.vertex_count();
    let k = g.alphabet_size();
    let total = checked_pow(1 << k.min(20), n)?;
    let states: Vec<MultiAssignment> = (0..total)
        .map(|mut code| {
            MultiAssignment(
                (0..n)
                    .map(|_| {
                        let m = code % (1 << k);
                        code >>= k;
                        (0..k).filter(|a| m >> a & 1 == 1).collect()
                    })
                    .collect(),
            )
        })
        .filter(|f| satisfies_multi(g, f).unwrap_or(false))
        .collect();
    let best = bottleneck(&states, fs, fg, |f| f.size(), |a, b| a.distance(b) == 1, false)?;
    Ok(OracleValue {
        value: Rational::new(best as i128, n as i128 + 1),
        states: states.len(),
    })
}

pub fn cost_setcover(f: &SetSystem, cs: &Cover, cg: &Cover) -> Result<OracleValue> {
    covers(f.set_count(), |c| f.is_cover(c), cs, cg)
}

pub fn cost_hvc(h: &Hypergraph, cs: &Cover, cg: &Cover) -> Result<OracleValue> {
    covers(h.vertex_count(), |c| h.is_vertex_cover(c), cs, cg)
}

fn covers(items: usize, is_cover: impl Fn(&Cover) -> bool, cs: &Cover, cg: &Cover) -> Result<OracleValue> {
    let total = checked_pow(2, items)?;
    let states: Vec<Cover> = (0..total)
        .map(|m| (0..items).filter(|i| m >> i & 1 == 1).collect::<BTreeSet<_>>())
        .filter(|c| is_cover(c))
        .collect();
    // minimum cover by exhaustion, independent of branch and bound
    let opt = states
        .iter()
        .map(BTreeSet::len)
        .min()
        .ok_or_else(|| Error::Uncoverable("no cover exists".into()))?;
    let best = bottleneck(
        &states,
        cs,
        cg,
        |c| c.len(),
        |a, b| a.symmetric_difference(b).count() == 1,
        false,
    )?;
    Ok(OracleValue {
        value: Rational::new(best as i128, opt as i128 + 1),
        states: states.len(),
    })
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    (0..exp)
        .try_fold(1usize, |acc, _| acc.checked_mul(base).filter(|&x| x <= STATE_LIMIT * 64))
        .ok_or_else(|| Error::TooLarge("state space for the reference solver".into()))
}

/// Best bottleneck weight from `s` to `t`: maximize the minimum weight when
/// `maximize`, otherwise minimize the maximum.
fn bottleneck<T: PartialEq>(
    states: &[T],
    s: &T,
    t: &T,
    weight: impl Fn(&T) -> usize,
    adjacent: impl Fn(&T, &T) -> bool,
    maximize: bool,
) -> Result<usize> {
    if states.len() > STATE_LIMIT {
        return Err(Error::TooLarge(format!("{} states", states.len())));
    }
    let find = |x: &T| {
        states
            .iter()
            .position(|y| y == x)
            .ok_or_else(|| Error::InfeasibleEndpoint("endpoint is not a feasible state".into()))
    };
    let (si, ti) = (find(s)?, find(t)?);
    let n = states.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| adjacent(&states[i], &states[j])).collect())
        .collect();
    let w: Vec<usize> = states.iter().map(&weight).collect();
    // key normalized so that smaller is better
    let key = |x: usize| if maximize { usize::MAX - x } else { x };
    let mut best = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    best[si] = key(w[si]);
    heap.push(Reverse((best[si], si)));
    while let Some(Reverse((k, u))) = heap.pop() {
        if k > best[u] {
            continue;
        }
        for &v in &adj[u] {
            let cand = k.max(key(w[v]));
            if cand < best[v] {
                best[v] = cand;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    if best[ti] == usize::MAX {
        return Err(Error::precondition("goal unreachable"));
    }
    Ok(if maximize { usize::MAX - best[ti] } else { best[ti] })
}
