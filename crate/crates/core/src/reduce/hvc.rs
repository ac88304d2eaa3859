//! Label cover to hypergraph vertex cover: the transpose of the set-cover
//! instance, padded to a uniform hypergraph.

use super::gadget::{Gadget, MonotoneGadget};
use super::setcover::{check_endpoints, Orientation, SetCoverReduction};
use crate::error::Result;
use crate::instance::{ConstraintGraph, Cover, Hypergraph, Incidence, MultiAssignment};
use crate::solve::min_hitting;

#[derive(Clone, Debug)]
pub struct HvcReduction {
    pub hypergraph: Hypergraph,
    /// The underlying set-cover reduction; vertex `i < label_vertices` is its set `i`.
    pub sets: SetCoverReduction,
    label_vertices: usize,
}

impl HvcReduction {
    pub fn build(g: &ConstraintGraph, orientation: Orientation, gadget: &dyn Gadget) -> Result<Self> {
        let sets = SetCoverReduction::build(g, orientation, gadget)?;
        let system = &sets.system;
        let width = 2 * g.alphabet_size();
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); system.universe_size()];
        for (s, members) in system.sets().iter().enumerate() {
            for &u in members {
                edges[u].push(s);
            }
        }
        let label_vertices = system.set_count();
        let mut vertices: Vec<String> = system.set_labels().to_vec();
        for edge in &mut edges {
            debug_assert!(edge.len() <= width);
            while edge.len() < width {
                edge.push(vertices.len());
                vertices.push(format!("pad{}", vertices.len() - label_vertices));
            }
        }
        Ok(Self {
            hypergraph: Hypergraph::new(vertices, edges, Some(width))?,
            sets,
            label_vertices,
        })
    }

    /// Number of `(v, α)` vertices; the rest are padding.
    pub fn label_vertices(&self) -> usize {
        self.label_vertices
    }

    pub fn is_padding(&self, vertex: usize) -> bool {
        vertex >= self.label_vertices
    }

    /// Size of each hyperedge before padding.
    pub fn unpadded_sizes(&self) -> Vec<usize> {
        self.hypergraph
            .hyperedges()
            .iter()
            .map(|e| e.iter().filter(|&&w| !self.is_padding(w)).count())
            .collect()
    }

    /// `C_f := {(v, α) : α ∈ f(v)}`.
    pub fn cover_of(&self, f: &MultiAssignment) -> Result<Cover> {
        self.sets.cover_of(f)
    }

    /// A padding vertex lying in some minimum vertex cover, with its
    /// hyperedge. Happens when a label is compatible with every partner
    /// label, so one block point can be left to padding.
    pub fn padding_in_minimum_cover(&self) -> Result<Option<(usize, usize)>> {
        let h = &self.hypergraph;
        let beta = min_hitting(&h.incidence()?).len();
        for (j, edge) in h.hyperedges().iter().enumerate() {
            let Some(&pad) = edge.iter().find(|&&w| self.is_padding(w)) else { continue };
            let rest: Vec<Vec<usize>> = h
                .hyperedges()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, e)| e.clone())
                .collect();
            if min_hitting(&Incidence::new(h.vertex_count(), rest)).len() + 1 == beta {
                return Ok(Some((j, pad)));
            }
        }
        Ok(None)
    }

    /// Padding vertices are dropped.
    pub fn multi_of(&self, c: &Cover) -> MultiAssignment {
        let labels: Cover = c.iter().copied().filter(|&w| !self.is_padding(w)).collect();
        self.sets.multi_of(&labels)
    }
}

/// The reduced hypergraph with endpoint covers `C_{f_s}`, `C_{f_g}`.
pub fn labelcover_to_hvc(
    g: &ConstraintGraph,
    fs: &MultiAssignment,
    fg: &MultiAssignment,
) -> Result<(HvcReduction, Cover, Cover)> {
    labelcover_to_hvc_with(g, fs, fg, Orientation::Corrected, &MonotoneGadget)
}

pub fn labelcover_to_hvc_with(
    g: &ConstraintGraph,
    fs: &MultiAssignment,
    fg: &MultiAssignment,
    orientation: Orientation,
    gadget: &dyn Gadget,
) -> Result<(HvcReduction, Cover, Cover)> {
    check_endpoints(g, fs, fg)?;
    let red = HvcReduction::build(g, orientation, gadget)?;
    let cs = red.cover_of(fs)?;
    let cg = red.cover_of(fg)?;
    Ok((red, cs, cg))
}
