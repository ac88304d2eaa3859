//! Invariants of the instance types, reductions and serialization.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use rforge_core::approx::{cover_sequence_cost, two_factor_cover};
use rforge_core::generate::{generate, random_csp, random_labelcover, random_setcover, GenParams, Kind};
use rforge_core::instance::{
    multi_edge_ok, satisfies_multi, satisfies_partial, ConstraintGraph, MultiAssignment, PartialAssignment,
};
use rforge_core::io::{from_json, to_json, InstanceFile};
use rforge_core::rational::{format_rational, parse_rational, ratio};
use rforge_core::reduce::{
    gadget_law_violation, labelcover_to_hvc, labelcover_to_setcover, CorruptedGadget, GadgetSpace, HvcReduction,
    MonotoneGadget, Orientation, SetCoverReduction,
};
use rforge_core::seed::{SeedStream, StreamRng};
use rforge_core::sequence::{validate_between, InstanceRef, ReconfigSequence};
use rforge_core::solve::solve_cost_setcover;
use rforge_core::verifier::{csp_to_verifier, decode_assignment, encode_assignment};

fn small_params(rng: &mut StreamRng) -> GenParams {
    GenParams {
        vertices: rng.gen_range(2..=4),
        alphabet: rng.gen_range(2..=3),
        density: rng.gen_range(0.2..1.0),
        tightness: rng.gen_range(0.3..0.9),
        ..GenParams::default()
    }
}

fn random_multi(g: &ConstraintGraph, rng: &mut StreamRng) -> MultiAssignment {
    let k = g.alphabet_size();
    MultiAssignment(
        (0..g.vertex_count())
            .map(|_| (0..k).filter(|_| rng.gen_bool(0.45)).collect())
            .collect(),
    )
}

fn random_partial(g: &ConstraintGraph, rng: &mut StreamRng) -> PartialAssignment {
    let k = g.alphabet_size();
    PartialAssignment(
        (0..g.vertex_count())
            .map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..k)))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn singleton_multi_agrees_with_partial_on_full(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("singleton");
        let Ok((g, _, _)) = random_labelcover(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let k = g.alphabet_size();
        let full: Vec<usize> = (0..g.vertex_count()).map(|_| rng.gen_range(0..k)).collect();
        let f = PartialAssignment::full(&full);
        prop_assert_eq!(
            satisfies_multi(&g, &MultiAssignment::singletons(&f)).unwrap(),
            satisfies_partial(&g, &f).unwrap()
        );
        prop_assert_eq!(satisfies_partial(&g, &f).unwrap(), g.satisfies_full(&full).unwrap());
    }

    #[test]
    fn partial_satisfaction_is_downward_closed(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("downward");
        let Ok((g, _, _)) = random_csp(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let f = random_partial(&g, &mut rng);
        if satisfies_partial(&g, &f).unwrap() {
            for v in 0..f.len() {
                let mut h = f.clone();
                h.0[v] = None;
                prop_assert!(satisfies_partial(&g, &h).unwrap());
            }
        }
    }

    #[test]
    fn multi_satisfaction_is_upward_closed(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("upward");
        let Ok((g, _, _)) = random_labelcover(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let f = random_multi(&g, &mut rng);
        if satisfies_multi(&g, &f).unwrap() {
            let more = f.union(&random_multi(&g, &mut rng));
            prop_assert!(satisfies_multi(&g, &more).unwrap());
        }
    }

    #[test]
    fn setcover_reduction_preserves_coverage(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("setcover");
        let Ok((g, _, _)) = random_labelcover(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let red = SetCoverReduction::build(&g, Orientation::Corrected, &MonotoneGadget).unwrap();
        let f = random_multi(&g, &mut rng);
        let c = red.cover_of(&f).unwrap();
        prop_assert_eq!(red.multi_of(&c), f.clone());
        prop_assert_eq!(c.len(), f.size());
        for e in 0..g.edge_count() {
            prop_assert_eq!(red.covers_edge(&c, e), multi_edge_ok(&g, e, &f.0));
        }
        prop_assert_eq!(red.system.is_cover(&c), satisfies_multi(&g, &f).unwrap());
    }

    #[test]
    fn hvc_reduction_preserves_coverage(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("hvc");
        let Ok((g, _, _)) = random_labelcover(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let red = HvcReduction::build(&g, Orientation::Corrected, &MonotoneGadget).unwrap();
        let width = 2 * g.alphabet_size();
        prop_assert!(red.hypergraph.hyperedges().iter().all(|e| e.len() == width));
        let f = random_multi(&g, &mut rng);
        let c = red.cover_of(&f).unwrap();
        prop_assert!(c.iter().all(|&v| !red.is_padding(v)));
        prop_assert_eq!(red.multi_of(&c), f.clone());
        prop_assert_eq!(red.hypergraph.is_vertex_cover(&c), satisfies_multi(&g, &f).unwrap());
    }

    #[test]
    fn reduction_endpoints_are_covers(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("endpoints");
        let Ok((g, fs, fg)) = random_labelcover(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let (sc, cs, cg) = labelcover_to_setcover(&g, &fs, &fg).unwrap();
        prop_assert!(sc.system.is_cover(&cs) && sc.system.is_cover(&cg));
        let (hv, hs, hg) = labelcover_to_hvc(&g, &fs, &fg).unwrap();
        prop_assert!(hv.hypergraph.is_vertex_cover(&hs) && hv.hypergraph.is_vertex_cover(&hg));
        prop_assert_eq!((cs.len(), cg.len()), (g.vertex_count(), g.vertex_count()));
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), kind in 0usize..5) {
        let kind = Kind::ALL[kind];
        let params = GenParams { vertices: 3, items: 4, ..GenParams::default() };
        let Ok(file) = generate(kind, &params, SeedStream::new(seed)) else { return Ok(()) };
        let text = to_json(&file).unwrap();
        let back: InstanceFile = from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(to_json(&back).unwrap(), text.clone());
        let again = generate(kind, &params, SeedStream::new(seed)).unwrap();
        prop_assert_eq!(to_json(&again).unwrap(), text);
    }

    #[test]
    fn assignment_encoding_round_trips(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("encoding");
        let Ok((g, _, _)) = random_csp(&small_params(&mut rng), &mut rng) else { return Ok(()) };
        let k = g.alphabet_size();
        let full: Vec<usize> = (0..g.vertex_count()).map(|_| rng.gen_range(0..k)).collect();
        let proof = encode_assignment(&g, &full).unwrap();
        prop_assert_eq!(decode_assignment(&g, &proof), Some(full.clone()));
        if g.edge_count() > 0 {
            let v = csp_to_verifier(&g).unwrap();
            prop_assert_eq!(v.accepts_surely(&proof).unwrap(), g.satisfies_full(&full).unwrap());
        }
    }

    #[test]
    fn two_factor_sequence_is_valid_and_bounded(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng("twofactor");
        let params = GenParams { vertices: 5, items: rng.gen_range(3..=7), ..GenParams::default() };
        let Ok((f, cs, cg)) = random_setcover(&params, &mut rng) else { return Ok(()) };
        let inst = InstanceRef::SetCover(&f);
        let seq = two_factor_cover(inst, &cs, &cg).unwrap();
        let ends = ReconfigSequence::Cover(vec![cs.clone(), cg.clone()]);
        prop_assert!(validate_between(inst, &seq, &ends).unwrap().valid);
        prop_assert_eq!(seq.max_size(), Some(cs.union(&cg).count()));
        let approx = cover_sequence_cost(inst, &seq).unwrap();
        let exact = solve_cost_setcover(&f, &cs, &cg, 100_000).unwrap().value;
        prop_assert!(exact <= approx);
        prop_assert!(approx <= exact * 2);
    }

    #[test]
    fn rationals_round_trip(p in -10_000i128..10_000, q in 1i128..10_000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn named_streams_are_stable_and_distinct(seed in any::<u64>(), a in "[a-z]{1,8}", b in "[a-z]{1,8}") {
        let s = SeedStream::new(seed);
        prop_assert_eq!(s.derive(&a), SeedStream::new(seed).derive(&a));
        if a != b {
            prop_assert_ne!(s.derive(&a), s.derive(&b));
        }
        prop_assert_ne!(s.derive_indexed(&a, 0), s.derive_indexed(&a, 1));
    }
}

/// The covering law checked from its statement rather than the library's
/// `covers` helper.
fn law_by_hand(sigma: usize, gadget: &dyn rforge_core::reduce::Gadget) -> bool {
    let points = 1u64 << sigma;
    (0..points).all(|a| {
        (0..points).all(|s| {
            let union_is_everything = (0..points).all(|x| {
                (0..sigma).any(|alpha| a >> alpha & 1 == 1 && gadget.in_q_bar(alpha, x)) || gadget.in_q_set(s, x)
            });
            union_is_everything == (a & s != 0)
        })
    })
}

#[test]
fn gadget_law_holds_for_monotone_and_fails_for_corrupted() {
    for sigma in 1..=4 {
        let space = GadgetSpace::new(sigma).unwrap();
        assert_eq!(gadget_law_violation(&space, &MonotoneGadget), None);
        assert!(law_by_hand(sigma, &MonotoneGadget));
        if sigma >= 2 {
            assert!(gadget_law_violation(&space, &CorruptedGadget).is_some());
            assert!(!law_by_hand(sigma, &CorruptedGadget));
        }
    }
}

#[test]
fn equality_edge_needs_a_shared_label() {
    let g = ConstraintGraph::binary(2, 2, vec![((0, 1), vec![true, false, false, true])]).unwrap();
    let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
    let ok = MultiAssignment(vec![set(&[0, 1]), set(&[1])]);
    let bad = MultiAssignment(vec![set(&[0]), set(&[1])]);
    assert!(satisfies_multi(&g, &ok).unwrap());
    assert!(!satisfies_multi(&g, &bad).unwrap());
}
