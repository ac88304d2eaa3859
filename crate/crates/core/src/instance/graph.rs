//! q-ary constraint graphs with explicit truth tables.
//!
//! Tables are stored flat in row-major order over `Σ^q`: the first endpoint of
//! a hyperedge is the most significant digit. Vertex order (used wherever an
//! orientation `v ≺ w` is needed) is the index order of the vertex list.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Symbol = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGraph {
    vertices: Vec<String>,
    arity: usize,
    alphabet: Vec<String>,
    edges: Vec<Vec<usize>>,
    tables: Vec<Vec<bool>>,
    admissible: Option<Vec<Vec<Symbol>>>,
    // derived
    incident: Vec<Vec<usize>>,
    admissible_mask: Option<Vec<Vec<bool>>>,
}

/// Wire form of `constraint_graph.json`.
#[derive(Serialize, Deserialize)]
struct RawConstraintGraph {
    vertices: Vec<String>,
    arity: usize,
    alphabet: Vec<String>,
    edges: Vec<Vec<usize>>,
    tables: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    admissible: Option<Vec<Vec<Symbol>>>,
}

impl ConstraintGraph {
    pub fn new(
        vertices: Vec<String>,
        arity: usize,
        alphabet: Vec<String>,
        edges: Vec<Vec<usize>>,
        tables: Vec<Vec<bool>>,
        admissible: Option<Vec<Vec<Symbol>>>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::malformed("arity must be at least 1"));
        }
        if alphabet.is_empty() {
            return Err(Error::malformed("alphabet must be nonempty"));
        }
        if edges.len() != tables.len() {
            return Err(Error::malformed(format!(
                "{} edges but {} tables",
                edges.len(),
                tables.len()
            )));
        }
        let n = vertices.len();
        let table_len = alphabet
            .len()
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::TooLarge("constraint table size overflows".into()))?;
        let mut incident = vec![Vec::new(); n];
        for (e, (edge, table)) in edges.iter().zip(&tables).enumerate() {
            if edge.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: edge.len(),
                });
            }
            for &v in edge {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, limit: n });
                }
            }
            if table.len() != table_len {
                return Err(Error::malformed(format!(
                    "table of edge {e} has {} entries, expected {table_len}",
                    table.len()
                )));
            }
            let mut seen = Vec::with_capacity(arity);
            for &v in edge {
                if !seen.contains(&v) {
                    seen.push(v);
                    incident[v].push(e);
                }
            }
        }
        let admissible_mask = match &admissible {
            None => None,
            Some(lists) => {
                if lists.len() != n {
                    return Err(Error::malformed("admissible list length differs from vertex count"));
                }
                let mut masks = Vec::with_capacity(n);
                for (v, list) in lists.iter().enumerate() {
                    if list.is_empty() {
                        return Err(Error::UnsatisfiableVertex { vertex: v });
                    }
                    let mut mask = vec![false; alphabet.len()];
                    for &a in list {
                        if a >= alphabet.len() {
                            return Err(Error::SymbolOutOfRange {
                                symbol: a,
                                size: alphabet.len(),
                            });
                        }
                        mask[a] = true;
                    }
                    masks.push(mask);
                }
                Some(masks)
            }
        };
        // keep admissible lists sorted and deduplicated so serialization is canonical
        let admissible = admissible_mask.as_ref().map(|masks| {
            masks
                .iter()
                .map(|m| (0..m.len()).filter(|&a| m[a]).collect())
                .collect()
        });
        Ok(Self {
            vertices,
            arity,
            alphabet,
            edges,
            tables,
            admissible,
            incident,
            admissible_mask,
        })
    }

    /// Binary graph with default labels `v0..`, `0..`.
    pub fn binary(
        vertex_count: usize,
        alphabet_size: usize,
        edges: Vec<((usize, usize), Vec<bool>)>,
    ) -> Result<Self> {
        let (edges, tables) = edges.into_iter().map(|((v, w), t)| (vec![v, w], t)).unzip();
        Self::new(
            default_labels("v", vertex_count),
            2,
            default_labels("", alphabet_size),
            edges,
            tables,
            None,
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn symbol_labels(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn table(&self, edge: usize) -> &[bool] {
        &self.tables[edge]
    }

    /// Edges touching `v`, each listed once even when `v` repeats in the tuple.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn admissible(&self) -> Option<&[Vec<Symbol>]> {
        self.admissible.as_deref()
    }

    pub fn is_admissible(&self, v: usize, symbol: Symbol) -> bool {
        match &self.admissible_mask {
            None => symbol < self.alphabet.len(),
            Some(masks) => masks[v].get(symbol).copied().unwrap_or(false),
        }
    }

    /// Symbols allowed at `v`, in index order.
    pub fn admissible_symbols(&self, v: usize) -> Vec<Symbol> {
        match &self.admissible {
            None => (0..self.alphabet.len()).collect(),
            Some(lists) => lists[v].clone(),
        }
    }

    pub fn is_self_loop(&self, edge: usize) -> bool {
        let e = &self.edges[edge];
        e.iter().skip(1).all(|&v| v == e[0])
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.edges.len()).any(|e| self.is_self_loop(e))
    }

    /// Vertices that appear in no edge.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.incident[v].is_empty())
            .collect()
    }

    /// Row-major table lookup; symbols must be in range.
    pub fn eval(&self, edge: usize, symbols: &[Symbol]) -> bool {
        let k = self.alphabet.len();
        let idx = symbols.iter().fold(0usize, |acc, &s| acc * k + s);
        self.tables[edge][idx]
    }

    pub fn eval2(&self, edge: usize, a: Symbol, b: Symbol) -> bool {
        self.tables[edge][a * self.alphabet.len() + b]
    }

    /// Direct q-ary check of a full assignment.
    pub fn satisfies_full(&self, assignment: &[Symbol]) -> Result<bool> {
        self.check_len(assignment.len())?;
        for &s in assignment {
            self.check_symbol(s)?;
        }
        for (v, &s) in assignment.iter().enumerate() {
            if !self.is_admissible(v, s) {
                return Ok(false);
            }
        }
        let mut buf = Vec::with_capacity(self.arity);
        for (e, edge) in self.edges.iter().enumerate() {
            buf.clear();
            buf.extend(edge.iter().map(|&v| assignment[v]));
            if !self.eval(e, &buf) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same graph with the given admissible lists (replacing any present).
    pub fn with_admissible(&self, admissible: Option<Vec<Vec<Symbol>>>) -> Result<Self> {
        Self::new(
            self.vertices.clone(),
            self.arity,
            self.alphabet.clone(),
            self.edges.clone(),
            self.tables.clone(),
            admissible,
        )
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.arity != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: self.arity,
            });
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.vertex_count() {
            return Err(Error::malformed(format!(
                "assignment covers {len} vertices, graph has {}",
                self.vertex_count()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s >= self.alphabet.len() {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                size: self.alphabet.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl Serialize for ConstraintGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let fields = if self.admissible.is_some() { 6 } else { 5 };
        let mut st = s.serialize_struct("ConstraintGraph", fields)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("arity", &self.arity)?;
        st.serialize_field("alphabet", &self.alphabet)?;
        st.serialize_field("edges", &self.edges)?;
        let tables: Vec<Vec<u8>> = self
            .tables
            .iter()
            .map(|t| t.iter().map(|&b| b as u8).collect())
            .collect();
        st.serialize_field("tables", &tables)?;
        if let Some(adm) = &self.admissible {
            st.serialize_field("admissible", adm)?;
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for ConstraintGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawConstraintGraph::deserialize(d)?;
        let mut tables = Vec::with_capacity(raw.tables.len());
        for t in raw.tables {
            let mut row = Vec::with_capacity(t.len());
            for b in t {
                match b {
                    0 => row.push(false),
                    1 => row.push(true),
                    other => {
                        return Err(serde::de::Error::custom(format!(
                            "table entries must be 0 or 1, found {other}"
                        )))
                    }
                }
            }
            tables.push(row);
        }
        ConstraintGraph::new(
            raw.vertices,
            raw.arity,
            raw.alphabet,
            raw.edges,
            tables,
            raw.admissible,
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Equality table over an alphabet of size `k`.
pub fn equality_table(k: usize) -> Vec<bool> {
    (0..k * k).map(|i| i / k == i % k).collect()
}
