//! Solvers against brute-force oracles written here from the definitions.
//!
//! The oracle enumerates every feasible state, then adds states in order of
//! weight (best first) to a union-find until start and goal meet. The weight
//! of the last state added is the optimal bottleneck. This shares no code with
//! the threshold search or the materialized solver.

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rand::Rng;
use rforge_core::generate::{random_csp, random_hypergraph, random_labelcover, random_setcover, GenParams};
use rforge_core::instance::{ConstraintGraph, Cover, Incidence, MultiAssignment, PartialAssignment};
use rforge_core::seed::SeedStream;
use rforge_core::sequence::{validate_between, InstanceRef, ReconfigSequence};
use rforge_core::solve::{solve_cost_hvc, solve_cost_setcover, solve_maxpar, solve_minlab};
use rforge_core::rational::{ratio, Rational};

const CAP: u64 = 200_000;

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Best bottleneck weight over paths from `s` to `g` in the graph on
/// `states`; weights are taken largest first when `best_first_desc`.
fn bottleneck<S: Clone + Eq + std::hash::Hash>(
    states: &[(S, usize)],
    neighbours: impl Fn(&S) -> Vec<S>,
    s: &S,
    g: &S,
    best_first_desc: bool,
) -> usize {
    let index: HashMap<S, usize> = states.iter().enumerate().map(|(i, (x, _))| (x.clone(), i)).collect();
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by_key(|&i| states[i].1);
    if best_first_desc {
        order.reverse();
    }
    let mut dsu = Dsu((0..states.len()).collect());
    let mut added = vec![false; states.len()];
    let (si, gi) = (index[s], index[g]);
    for i in order {
        added[i] = true;
        for y in neighbours(&states[i].0) {
            if let Some(&j) = index.get(&y) {
                if added[j] {
                    dsu.union(i, j);
                }
            }
        }
        if added[si] && added[gi] && dsu.find(si) == dsu.find(gi) {
            return states[i].1;
        }
    }
    panic!("start and goal are disconnected");
}

fn pairs(g: &ConstraintGraph) -> Vec<(usize, usize, Vec<bool>)> {
    (0..g.edge_count())
        .map(|e| (g.edges()[e][0], g.edges()[e][1], g.table(e).to_vec()))
        .collect()
}

/// Partial assignments as vectors with `k` standing for unassigned.
fn oracle_maxpar(g: &ConstraintGraph, fs: &PartialAssignment, fg: &PartialAssignment) -> Rational {
    let (n, k) = (g.vertex_count(), g.alphabet_size());
    let edges = pairs(g);
    let ok = |x: &Vec<usize>| {
        edges
            .iter()
            .all(|(v, w, t)| x[*v] == k || x[*w] == k || t[x[*v] * k + x[*w]])
    };
    let mut states = Vec::new();
    for code in 0..(k + 1).pow(n as u32) {
        let x: Vec<usize> = (0..n).map(|i| code / (k + 1).pow(i as u32) % (k + 1)).collect();
        if ok(&x) {
            let size = x.iter().filter(|&&s| s != k).count();
            states.push((x, size));
        }
    }
    let enc = |f: &PartialAssignment| f.0.iter().map(|s| s.unwrap_or(k)).collect::<Vec<_>>();
    let nb = |x: &Vec<usize>| {
        let mut out = Vec::new();
        for i in 0..n {
            for s in 0..=k {
                if s != x[i] {
                    let mut y = x.clone();
                    y[i] = s;
                    out.push(y);
                }
            }
        }
        out
    };
    ratio(bottleneck(&states, nb, &enc(fs), &enc(fg), true) as i128, n as i128)
}

/// Multi-assignments as `n * k`-bit masks.
fn oracle_minlab(g: &ConstraintGraph, fs: &MultiAssignment, fg: &MultiAssignment) -> Rational {
    let (n, k) = (g.vertex_count(), g.alphabet_size());
    let edges = pairs(g);
    let has = |x: u64, v: usize, a: usize| x >> (v * k + a) & 1 == 1;
    let ok = |x: u64| {
        edges
            .iter()
            .all(|(v, w, t)| (0..k).any(|a| (0..k).any(|b| has(x, *v, a) && has(x, *w, b) && t[a * k + b])))
    };
    let states: Vec<(u64, usize)> = (0..1u64 << (n * k))
        .filter(|&x| ok(x))
        .map(|x| (x, x.count_ones() as usize))
        .collect();
    let enc = |f: &MultiAssignment| {
        f.0.iter()
            .enumerate()
            .flat_map(|(v, set)| set.iter().map(move |a| 1u64 << (v * k + a)))
            .sum::<u64>()
    };
    let nb = |x: &u64| (0..n * k).map(|b| x ^ (1 << b)).collect::<Vec<_>>();
    ratio(bottleneck(&states, nb, &enc(fs), &enc(fg), false) as i128, n as i128 + 1)
}

/// Covers as masks over items; `requirements[j]` lists the items covering j.
fn oracle_cover_cost(items: usize, requirements: &[Vec<usize>], cs: &Cover, cg: &Cover) -> Rational {
    let covers = |x: u64| requirements.iter().all(|r| r.iter().any(|&i| x >> i & 1 == 1));
    let states: Vec<(u64, usize)> = (0..1u64 << items)
        .filter(|&x| covers(x))
        .map(|x| (x, x.count_ones() as usize))
        .collect();
    let opt = states.iter().map(|s| s.1).min().expect("a cover exists");
    let enc = |c: &Cover| c.iter().map(|i| 1u64 << i).sum::<u64>();
    let nb = |x: &u64| (0..items).map(|b| x ^ (1 << b)).collect::<Vec<_>>();
    ratio(bottleneck(&states, nb, &enc(cs), &enc(cg), false) as i128, opt as i128 + 1)
}

/// Requirements of a set system: for each element, the sets containing it.
fn element_requirements(sets: &[Vec<usize>], universe: usize) -> Vec<Vec<usize>> {
    (0..universe)
        .map(|u| (0..sets.len()).filter(|&s| sets[s].contains(&u)).collect())
        .collect()
}

fn params(rng: &mut impl Rng) -> GenParams {
    GenParams {
        vertices: rng.gen_range(2..=4),
        alphabet: rng.gen_range(2..=3),
        density: rng.gen_range(0.3..0.9),
        tightness: rng.gen_range(0.4..0.9),
        items: rng.gen_range(3..=7),
        uniformity: rng.gen_range(2..=3),
        ..GenParams::default()
    }
}

fn peak_ok(value: Rational, sizes: &[usize], denom: usize, maximize_min: bool) -> bool {
    let peak = if maximize_min {
        sizes.iter().min()
    } else {
        sizes.iter().max()
    };
    peak.map(|&p| ratio(p as i128, denom as i128)) == Some(value)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maxpar_matches_union_find_oracle(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("maxpar");
        let mut p = params(&mut rng);
        p.vertices = p.vertices.min(4);
        let Ok((g, fs, fg)) = random_csp(&p, &mut rng) else { return Ok(()) };
        let r = solve_maxpar(&g, &fs, &fg, CAP).unwrap();
        prop_assert_eq!(r.value, oracle_maxpar(&g, &fs, &fg));
        let ends = ReconfigSequence::PartialAssignment(vec![fs, fg]);
        prop_assert!(validate_between(InstanceRef::Csp(&g), &r.witness, &ends).unwrap().valid);
        prop_assert!(peak_ok(r.value, &r.witness.sizes(), g.vertex_count(), true));
    }

    #[test]
    fn minlab_matches_union_find_oracle(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("minlab");
        let mut p = params(&mut rng);
        if p.vertices * p.alphabet > 12 {
            p.alphabet = 2;
        }
        let Ok((g, fs, fg)) = random_labelcover(&p, &mut rng) else { return Ok(()) };
        let r = solve_minlab(&g, &fs, &fg, CAP).unwrap();
        prop_assert_eq!(r.value, oracle_minlab(&g, &fs, &fg));
        let ends = ReconfigSequence::MultiAssignment(vec![fs, fg]);
        prop_assert!(validate_between(InstanceRef::LabelCover(&g), &r.witness, &ends).unwrap().valid);
        prop_assert!(peak_ok(r.value, &r.witness.sizes(), g.vertex_count() + 1, false));
    }

    #[test]
    fn setcover_cost_matches_union_find_oracle(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("setcover");
        let p = params(&mut rng);
        let Ok((f, cs, cg)) = random_setcover(&p, &mut rng) else { return Ok(()) };
        let r = solve_cost_setcover(&f, &cs, &cg, CAP).unwrap();
        let req = element_requirements(f.sets(), f.universe_size());
        prop_assert_eq!(r.value, oracle_cover_cost(f.set_count(), &req, &cs, &cg));
        let ends = ReconfigSequence::Cover(vec![cs, cg]);
        prop_assert!(validate_between(InstanceRef::SetCover(&f), &r.witness, &ends).unwrap().valid);
    }

    #[test]
    fn hvc_cost_matches_union_find_oracle(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("hvc");
        let p = params(&mut rng);
        let Ok((h, cs, cg)) = random_hypergraph(&p, &mut rng) else { return Ok(()) };
        let r = solve_cost_hvc(&h, &cs, &cg, CAP).unwrap();
        let req = h.hyperedges().to_vec();
        prop_assert_eq!(r.value, oracle_cover_cost(h.vertex_count(), &req, &cs, &cg));
        let ends = ReconfigSequence::VertexCover(vec![cs, cg]);
        prop_assert!(validate_between(InstanceRef::Hypergraph(&h), &r.witness, &ends).unwrap().valid);
    }
}

#[test]
fn oracle_reproduces_hand_values() {
    // Two vertices under equality over {0, 1}: 00 -> 11 must drop a label.
    let g = ConstraintGraph::binary(2, 2, vec![((0, 1), vec![true, false, false, true])]).unwrap();
    let (fs, fg) = (PartialAssignment::full(&[0, 0]), PartialAssignment::full(&[1, 1]));
    assert_eq!(oracle_maxpar(&g, &fs, &fg), ratio(1, 2));
    let (ms, mg) = (MultiAssignment::singletons(&fs), MultiAssignment::singletons(&fg));
    assert_eq!(oracle_minlab(&g, &ms, &mg), ratio(4, 3));

    // Covers {0} and {1} of a single element: the peak holds both sets.
    let c = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
    assert_eq!(oracle_cover_cost(2, &[vec![0, 1]], &c(&[0]), &c(&[1])), ratio(2, 2));
    let inc = Incidence::new(2, vec![vec![0, 1]]);
    assert!(inc.is_cover(&c(&[1])));
}
