//! Set systems, hypergraphs, and the hitting-set view shared by both.
//!
//! A set-cover instance is a hitting problem whose items are the sets and
//! whose requirements are the universe elements; a hypergraph vertex cover is
//! the same with items = vertices and requirements = hyperedges. Solvers and
//! the two-factor approximation work on [`Incidence`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A chosen subfamily (set indices) or vertex set, kept sorted.
pub type Cover = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSetSystem", into = "RawSetSystem")]
pub struct SetSystem {
    universe: Vec<String>,
    sets: Vec<Vec<usize>>,
    set_labels: Vec<String>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawSetSystem {
    universe: Vec<String>,
    sets: Vec<Vec<usize>>,
    set_labels: Vec<String>,
}

impl TryFrom<RawSetSystem> for SetSystem {
    type Error = Error;
    fn try_from(raw: RawSetSystem) -> Result<Self> {
        SetSystem::new(raw.universe, raw.sets, raw.set_labels)
    }
}

impl From<SetSystem> for RawSetSystem {
    fn from(s: SetSystem) -> Self {
        RawSetSystem {
            universe: s.universe,
            sets: s.sets,
            set_labels: s.set_labels,
        }
    }
}

impl SetSystem {
    pub fn new(universe: Vec<String>, sets: Vec<Vec<usize>>, set_labels: Vec<String>) -> Result<Self> {
        if sets.len() != set_labels.len() {
            return Err(Error::malformed("one label per set is required"));
        }
        check_unique(&universe, "element")?;
        check_unique(&set_labels, "set")?;
        let n = universe.len();
        let mut normalized = Vec::with_capacity(sets.len());
        for set in sets {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if let Some(&x) = set.iter().find(|&&x| x >= n) {
                return Err(Error::IndexOutOfRange { index: x, limit: n });
            }
            normalized.push(set);
        }
        Ok(Self {
            universe,
            sets: normalized,
            set_labels,
        })
    }

    /// Unlabeled system over elements `0..n`.
    pub fn from_sets(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..sets.len()).map(|i| format!("S{}", i + 1)).collect();
        Self::new(
            (0..universe_size).map(|i| i.to_string()).collect(),
            sets,
            labels,
        )
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn element_labels(&self) -> &[String] {
        &self.universe
    }

    pub fn set_labels(&self) -> &[String] {
        &self.set_labels
    }

    pub fn is_cover(&self, cover: &Cover) -> bool {
        let mut hit = vec![false; self.universe.len()];
        for &s in cover {
            if let Some(set) = self.sets.get(s) {
                for &x in set {
                    hit[x] = true;
                }
            } else {
                return false;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Hitting view: items are sets, requirements are elements.
    pub fn incidence(&self) -> Result<Incidence> {
        let mut reqs = vec![Vec::new(); self.universe.len()];
        for (i, set) in self.sets.iter().enumerate() {
            for &x in set {
                reqs[x].push(i);
            }
        }
        if let Some(x) = reqs.iter().position(Vec::is_empty) {
            return Err(Error::Uncoverable(format!(
                "element `{}` belongs to no set",
                self.universe[x]
            )));
        }
        Ok(Incidence::new(self.sets.len(), reqs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    vertices: Vec<String>,
    hyperedges: Vec<Vec<usize>>,
    uniformity: Option<usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawHypergraph {
    vertices: Vec<String>,
    hyperedges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    uniformity: Option<usize>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;
    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.vertices, raw.hyperedges, raw.uniformity)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(h: Hypergraph) -> Self {
        RawHypergraph {
            vertices: h.vertices,
            hyperedges: h.hyperedges,
            uniformity: h.uniformity,
        }
    }
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, hyperedges: Vec<Vec<usize>>, uniformity: Option<usize>) -> Result<Self> {
        check_unique(&vertices, "vertex")?;
        let n = vertices.len();
        let mut normalized = Vec::with_capacity(hyperedges.len());
        for edge in hyperedges {
            let mut edge = edge;
            edge.sort_unstable();
            edge.dedup();
            if let Some(&x) = edge.iter().find(|&&x| x >= n) {
                return Err(Error::IndexOutOfRange { index: x, limit: n });
            }
            if let Some(u) = uniformity {
                if edge.len() != u {
                    return Err(Error::malformed(format!(
                        "hyperedge of size {} in a {u}-uniform hypergraph",
                        edge.len()
                    )));
                }
            }
            normalized.push(edge);
        }
        Ok(Self {
            vertices,
            hyperedges: normalized,
            uniformity,
        })
    }

    pub fn from_edges(vertex_count: usize, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        Self::new((0..vertex_count).map(|i| i.to_string()).collect(), hyperedges, None)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn is_vertex_cover(&self, cover: &Cover) -> bool {
        cover.iter().all(|&v| v < self.vertices.len())
            && self
                .hyperedges
                .iter()
                .all(|e| e.iter().any(|v| cover.contains(v)))
    }

    /// Hitting view: items are vertices, requirements are hyperedges.
    pub fn incidence(&self) -> Result<Incidence> {
        if let Some(i) = self.hyperedges.iter().position(Vec::is_empty) {
            return Err(Error::Uncoverable(format!("hyperedge {i} is empty")));
        }
        Ok(Incidence::new(self.vertices.len(), self.hyperedges.clone()))
    }
}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::malformed(format!("duplicate {what} label `{l}`")));
        }
    }
    Ok(())
}

/// Items and requirements; a cover is an item set hitting every requirement.
#[derive(Clone, Debug)]
pub struct Incidence {
    item_count: usize,
    requirements: Vec<Vec<usize>>,
    item_requirements: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(item_count: usize, requirements: Vec<Vec<usize>>) -> Self {
        let mut item_requirements = vec![Vec::new(); item_count];
        for (r, items) in requirements.iter().enumerate() {
            for &i in items {
                item_requirements[i].push(r);
            }
        }
        Self {
            item_count,
            requirements,
            item_requirements,
        }
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn requirements(&self) -> &[Vec<usize>] {
        &self.requirements
    }

    pub fn item_requirements(&self, item: usize) -> &[usize] {
        &self.item_requirements[item]
    }

    pub fn is_cover(&self, cover: &Cover) -> bool {
        cover.iter().all(|&i| i < self.item_count)
            && self
                .requirements
                .iter()
                .all(|r| r.iter().any(|i| cover.contains(i)))
    }

    /// Same check on a sorted slice of items.
    pub fn is_cover_slice(&self, items: &[u32]) -> bool {
        let mut hit = vec![false; self.requirements.len()];
        for &i in items {
            for &r in &self.item_requirements[i as usize] {
                hit[r] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}
