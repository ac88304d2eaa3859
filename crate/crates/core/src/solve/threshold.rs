//! Threshold breadth-first search over an implicit state graph.
//!
//! For a maximin objective the threshold θ descends from the smaller endpoint
//! size; for a minimax objective it ascends from the larger one. At each θ a
//! BFS restricted to states on the right side of θ decides whether the goal is
//! reachable; the first θ that succeeds is the optimum.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

pub(crate) trait StateSpace {
    type State: Clone + Eq + Hash;

    fn size(&self, s: &Self::State) -> usize;

    /// Feasible neighbours of a feasible state, in canonical order. Moves
    /// that change the size in a direction `moves` rules out may be skipped.
    fn neighbors(&self, s: &Self::State, moves: Moves, out: &mut Vec<Self::State>);
}

/// Which size changes the current threshold still admits.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Moves {
    pub grow: bool,
    pub shrink: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Objective {
    MaximizeMin,
    MinimizeMax,
}

impl Objective {
    fn admits(self, size: usize, theta: usize) -> bool {
        match self {
            Objective::MaximizeMin => size >= theta,
            Objective::MinimizeMax => size <= theta,
        }
    }
}

#[derive(Debug)]
pub(crate) struct Found<S> {
    pub path: Vec<S>,
    pub threshold: usize,
    pub explored: u64,
}

/// Scans thresholds from the endpoint bound towards `limit` (inclusive).
/// `cap` bounds the total number of states visited across all thresholds.
pub(crate) fn threshold_search<P: StateSpace>(
    space: &P,
    start: &P::State,
    goal: &P::State,
    objective: Objective,
    limit: usize,
    cap: u64,
) -> Result<Found<P::State>> {
    let (ss, gs) = (space.size(start), space.size(goal));
    let mut explored = 0u64;
    let thresholds: Box<dyn Iterator<Item = usize>> = match objective {
        Objective::MaximizeMin => Box::new((limit..=ss.min(gs)).rev()),
        Objective::MinimizeMax => Box::new(ss.max(gs)..=limit.max(ss.max(gs))),
    };
    for theta in thresholds {
        if let Some(path) = bfs(space, start, goal, objective, theta, cap, &mut explored)? {
            return Ok(Found {
                path,
                threshold: theta,
                explored,
            });
        }
    }
    Err(Error::precondition("goal unreachable at every threshold"))
}

/// Reachability of `goal` from `start` among states admitted at `theta`.
pub(crate) fn bfs<P: StateSpace>(
    space: &P,
    start: &P::State,
    goal: &P::State,
    objective: Objective,
    theta: usize,
    cap: u64,
    explored: &mut u64,
) -> Result<Option<Vec<P::State>>> {
    if !objective.admits(space.size(start), theta) || !objective.admits(space.size(goal), theta) {
        return Ok(None);
    }
    let mut states: Vec<P::State> = vec![start.clone()];
    let mut parent: Vec<usize> = vec![usize::MAX];
    let mut index: HashMap<P::State, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    *explored += 1;
    let mut head = 0;
    let mut found = (start == goal).then_some(0);
    let mut buf = Vec::new();
    while found.is_none() && head < states.len() {
        buf.clear();
        let size = space.size(&states[head]);
        let moves = Moves {
            grow: objective.admits(size + 1, theta),
            shrink: size > 0 && objective.admits(size - 1, theta),
        };
        space.neighbors(&states[head], moves, &mut buf);
        for next in buf.drain(..) {
            if !objective.admits(space.size(&next), theta) || index.contains_key(&next) {
                continue;
            }
            *explored += 1;
            if *explored > cap {
                return Err(Error::BudgetExhausted {
                    cap,
                    threshold: theta,
                });
            }
            let id = states.len();
            let is_goal = &next == goal;
            index.insert(next.clone(), id);
            states.push(next);
            parent.push(head);
            if is_goal {
                found = Some(id);
                break;
            }
        }
        head += 1;
    }
    Ok(found.map(|mut at| {
        let mut path = Vec::new();
        while at != usize::MAX {
            path.push(states[at].clone());
            at = parent[at];
        }
        path.reverse();
        path
    }))
}
