//! Exact minimum covers by branch and bound.

use crate::error::Result;
use crate::instance::{Cover, Hypergraph, Incidence, SetSystem};

/// `opt(F)`: size of a minimum subfamily covering the universe.
pub fn min_cover(f: &SetSystem) -> Result<usize> {
    Ok(min_hitting(&f.incidence()?).len())
}

/// `β(H)`: size of a minimum vertex cover.
pub fn min_vertex_cover(h: &Hypergraph) -> Result<usize> {
    Ok(min_hitting(&h.incidence()?).len())
}

/// A minimum cover of the incidence structure, lexicographically first among
/// those the search meets (deterministic).
pub fn min_hitting(inc: &Incidence) -> Cover {
    let best = greedy(inc);
    let mut search = Search {
        inc,
        best,
        chosen: Vec::new(),
        hits: vec![0; inc.requirements().len()],
    };
    search.run();
    search.best.into_iter().collect()
}

fn greedy(inc: &Incidence) -> Vec<usize> {
    let mut hit = vec![false; inc.requirements().len()];
    let mut chosen = Vec::new();
    while hit.iter().any(|h| !h) {
        let pick = (0..inc.item_count())
            .max_by_key(|&i| {
                let gain = inc.item_requirements(i).iter().filter(|&&r| !hit[r]).count();
                (gain, std::cmp::Reverse(i))
            })
            .expect("incidence has items when requirements remain");
        for &r in inc.item_requirements(pick) {
            hit[r] = true;
        }
        chosen.push(pick);
    }
    chosen.sort_unstable();
    chosen
}

struct Search<'a> {
    inc: &'a Incidence,
    best: Vec<usize>,
    chosen: Vec<usize>,
    hits: Vec<u32>,
}

impl Search<'_> {
    fn run(&mut self) {
        // uncovered requirement with the fewest candidate items
        let uncovered = (0..self.hits.len())
            .filter(|&r| self.hits[r] == 0)
            .min_by_key(|&r| self.inc.requirements()[r].len());
        let Some(r) = uncovered else {
            if self.chosen.len() < self.best.len() {
                let mut c = self.chosen.clone();
                c.sort_unstable();
                self.best = c;
            }
            return;
        };
        if self.chosen.len() + self.lower_bound() >= self.best.len() {
            return;
        }
        for &item in &self.inc.requirements()[r].clone() {
            if self.chosen.contains(&item) {
                continue;
            }
            self.toggle(item, true);
            self.run();
            self.toggle(item, false);
        }
    }

    /// Uncovered requirements divided by the best single-item gain.
    fn lower_bound(&self) -> usize {
        let open = self.hits.iter().filter(|&&h| h == 0).count();
        if open == 0 {
            return 0;
        }
        let gain = (0..self.inc.item_count())
            .map(|i| {
                self.inc
                    .item_requirements(i)
                    .iter()
                    .filter(|&&r| self.hits[r] == 0)
                    .count()
            })
            .max()
            .unwrap_or(0)
            .max(1);
        open.div_ceil(gain)
    }

    fn toggle(&mut self, item: usize, on: bool) {
        for &r in self.inc.item_requirements(item) {
            if on {
                self.hits[r] += 1;
            } else {
                self.hits[r] -= 1;
            }
        }
        if on {
            self.chosen.push(item);
        } else {
            self.chosen.pop();
        }
    }
}
