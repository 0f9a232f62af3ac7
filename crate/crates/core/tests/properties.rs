//! Property tests for the algebraic and propagation invariants.

use num_traits::Signed;
use proptest::prelude::*;

use qsr::algebra::{Calculus, Relation};
use qsr::boxes::ra_calculus;
use qsr::generate::gen_instance;
use qsr::interaction::{biclose, induced_ra, induced_rcc8, restrict_pair, JointNetwork};
use qsr::interval::{canonical_solution, relation_of, BasicIaNetwork, IaBasic, Interval, IA_BASICS};
use qsr::network::Network;
use qsr::realize::realize_with_params;
use qsr::solver::{bipath_consistency, path_consistency};
use qsr::topology::{rcc8_calculus, rcc8_of_regions};
use qsr::{rat, Rat};

fn relation_strategy(calc: &'static Calculus) -> impl Strategy<Value = Relation> {
    let size = calc.basis_size();
    proptest::collection::vec(0..size, 1..=size.min(6))
        .prop_map(move |indices| calc.relation_of_indices(indices))
}

fn any_calculus() -> impl Strategy<Value = &'static Calculus> {
    prop_oneof![
        Just(qsr::interval::ia_calculus()),
        Just(rcc8_calculus()),
        Just(ra_calculus()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn converse_is_an_involution(rel in any_calculus().prop_flat_map(relation_strategy)) {
        prop_assert_eq!(rel.converse().converse(), rel);
    }

    #[test]
    fn converse_of_composition_swaps_and_converses(
        (r1, r2) in any_calculus().prop_flat_map(|c| (relation_strategy(c), relation_strategy(c)))
    ) {
        prop_assert_eq!(
            r1.compose(&r2).converse(),
            r2.converse().compose(&r1.converse())
        );
    }

    #[test]
    fn composition_distributes_over_union(
        (r1, r2, r3) in any_calculus().prop_flat_map(|c| {
            (relation_strategy(c), relation_strategy(c), relation_strategy(c))
        })
    ) {
        prop_assert_eq!(
            r1.union(&r2).compose(&r3),
            r1.compose(&r3).union(&r2.compose(&r3))
        );
        prop_assert!(r1.compose(&r3).is_subset(&r1.union(&r2).compose(&r3)));
    }

    #[test]
    fn identity_composition_contains_the_relation(
        rel in any_calculus().prop_flat_map(relation_strategy)
    ) {
        let id = rel.calculus().identity();
        prop_assert!(rel.is_subset(&id.compose(&rel)));
        prop_assert!(rel.is_subset(&rel.compose(&id)));
    }

    #[test]
    fn restriction_shrinks_and_biclose_is_idempotent(
        theta in relation_strategy(rcc8_calculus()),
        delta in relation_strategy(ra_calculus()),
    ) {
        let (tr, dr) = restrict_pair(&theta, &delta).unwrap();
        prop_assert!(tr.is_subset(&theta));
        prop_assert!(dr.is_subset(&delta));
        if !tr.is_empty() && !dr.is_empty() {
            let (tr2, dr2) = restrict_pair(&tr, &dr).unwrap();
            prop_assert_eq!(tr2, tr);
            prop_assert_eq!(dr2, dr);
        }
    }
}

fn interval_from_parts(lo_num: i32, width_num: i32, den: i32) -> Interval {
    let lo = rat(lo_num as i64, den as i64);
    let hi = &lo + rat(width_num as i64, den as i64);
    Interval::new(lo, hi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Observed interval networks always reproduce from their canonical
    /// solutions, and the canonical endpoint levels are gap-free.
    #[test]
    fn canonical_solutions_reproduce_observed_networks(
        parts in proptest::collection::vec((-30..30i32, 1..20i32, 1..6i32), 2..6)
    ) {
        let witness: Vec<Interval> =
            parts.iter().map(|&(l, w, d)| interval_from_parts(l, w, d)).collect();
        let net = BasicIaNetwork::from_witness(&witness);
        let sol = canonical_solution(&net).unwrap();
        for i in 0..sol.len() {
            for j in 0..sol.len() {
                prop_assert_eq!(relation_of(&sol[i], &sol[j]), net.get(i, j));
            }
        }
        // endpoint levels are consecutive integers from zero
        let mut endpoints: Vec<Rat> = Vec::new();
        for iv in &sol {
            endpoints.push(iv.lo().clone());
            endpoints.push(iv.hi().clone());
        }
        endpoints.sort();
        endpoints.dedup();
        for (k, e) in endpoints.iter().enumerate() {
            prop_assert_eq!(e, &rat(k as i64, 1));
        }
    }

    /// Relax-image networks have all-distinct canonical endpoints: levels
    /// 0..2k-1, each used exactly once.
    #[test]
    fn relax_image_networks_use_every_level_once(
        parts in proptest::collection::vec((-30..30i32, 1..20i32, 1..6i32), 2..6)
    ) {
        let witness: Vec<Interval> =
            parts.iter().map(|&(l, w, d)| interval_from_parts(l, w, d)).collect();
        let relaxed = BasicIaNetwork::from_witness(&witness).relaxed();
        let sol = canonical_solution(&relaxed).unwrap();
        let mut endpoints: Vec<Rat> = Vec::new();
        for iv in &sol {
            endpoints.push(iv.lo().clone());
            endpoints.push(iv.hi().clone());
        }
        endpoints.sort();
        let k = sol.len();
        prop_assert_eq!(endpoints.len(), 2 * k);
        for (idx, e) in endpoints.iter().enumerate() {
            prop_assert_eq!(e, &rat(idx as i64, 1));
        }
    }
}

/// Identity composition is exact (not merely containing) on basic
/// relations of the two hand-assembled calculi.
#[test]
fn identity_is_exact_on_basics() {
    for calc in [qsr::interval::ia_calculus(), rcc8_calculus(), ra_calculus()] {
        for i in 0..calc.basis_size() {
            let r = calc.basic(i);
            assert_eq!(calc.identity().compose(&r), r);
            assert_eq!(r.compose(&calc.identity()), r);
        }
    }
}

/// Observed region pairs survive any restriction they instantiate.
#[test]
fn sampled_witness_pairs_survive_restriction() {
    for seed in 0..30u64 {
        let inst = gen_instance(seed, 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let theta = rcc8_of_regions(&inst.regions[i], &inst.regions[j]);
                let delta = qsr::boxes::ra_relation_of(&inst.regions[i].mbr(), &inst.regions[j].mbr());
                // embed the observed pair in arbitrary larger relations
                let big_theta = rcc8_calculus()
                    .basic(theta.index())
                    .union(&rcc8_calculus().basic((seed as usize) % 8));
                let big_delta = ra_calculus()
                    .basic(delta.index())
                    .union(&ra_calculus().basic((seed as usize * 13) % 169));
                let (tr, dr) = restrict_pair(&big_theta, &big_delta).unwrap();
                assert!(tr.contains_basic(theta.index()));
                assert!(dr.contains_basic(delta.index()));
            }
        }
    }
}

/// Propagation is idempotent and keeps sampled witnesses.
#[test]
fn propagation_idempotent_and_witness_preserving() {
    for seed in 100..130u64 {
        let inst = gen_instance(seed, 4);
        let fixed = bipath_consistency(&inst.net).unwrap();
        assert_eq!(bipath_consistency(&fixed).unwrap(), fixed);
        assert_eq!(biclose(&fixed).unwrap(), fixed);
        let top = path_consistency(&fixed.top).unwrap();
        assert_eq!(top, fixed.top, "fixpoint components stay path-consistent");
        // the generating witness still instantiates every constraint
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let theta = rcc8_of_regions(&inst.regions[i], &inst.regions[j]);
                assert!(fixed.top.get(i, j).contains_basic(theta.index()));
            }
        }
    }
}

/// The derived spacing certificate honors its own invariants.
#[test]
fn realization_params_are_coherent() {
    let inst = gen_instance(4242, 5);
    let mut net = JointNetwork::universal(inst.net.vars.clone());
    for (i, j) in inst.net.top.pairs().collect::<Vec<_>>() {
        net.top.set(i, j, inst.net.top.get(i, j));
    }
    let h8 = qsr::topology::H8Membership::builtin();
    let verdict = qsr::solver::decide_dir49(&net, &h8, true).unwrap();
    let witness = verdict.witness.unwrap();
    let (_, params) =
        realize_with_params(&witness.scenario_top, &witness.rectangles, &net.vars).unwrap();
    assert!(params.delta.is_positive());
    assert!(params.delta <= params.separation.clone().min(params.clearance.clone()));
    let quarter = &params.delta / rat(4, 1);
    let mut prev = Rat::from_integer(0.into());
    for r in &params.radii {
        assert!(r > &prev, "radii strictly increase");
        assert!(r < &quarter, "radii stay below a quarter of the working distance");
        prev = r.clone();
    }
    // level invariants against the scenario
    let n = net.num_vars();
    for i in 0..n {
        let has_pred = (0..n).any(|j| {
            j != i
                && witness.scenario_top.get(j, i).single()
                    == Some(qsr::topology::Rcc8Basic::Ntpp.index())
        });
        assert_eq!(params.ntp_levels[i] == 1, !has_pred);
        for j in 0..n {
            if j != i
                && witness.scenario_top.get(j, i).single()
                    == Some(qsr::topology::Rcc8Basic::Ntpp.index())
            {
                assert!(params.ntp_levels[j] < params.ntp_levels[i]);
            }
        }
    }
}

/// Cross-consistency of the two induced tables, stated in both directions
/// over non-basic relations as well.
#[test]
fn induced_tables_agree_on_random_relations() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5150);
    for _ in 0..200 {
        let theta = rcc8_calculus().relation_of_indices(
            (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..8usize)),
        );
        let delta = ra_calculus().relation_of_indices(
            (0..rng.random_range(1..=5)).map(|_| rng.random_range(0..169usize)),
        );
        let era = induced_ra(&theta).unwrap();
        let rcc = induced_rcc8(&delta).unwrap();
        // the pair is jointly instantiable iff both directions agree
        let forward = !delta.intersect(&era).is_empty();
        let backward = !theta.intersect(&rcc).is_empty();
        assert_eq!(forward, backward);
    }
}

/// Restricting a subclass relation against any fragment relation never
/// changes its canonical basic refinement (when both restrictions stay
/// nonempty) — the property that lets one scenario serve both the input
/// and its fixpoint.
#[test]
fn refinement_survives_restriction() {
    use rand::{Rng, SeedableRng};
    let rcc = rcc8_calculus();
    let ra = ra_calculus();
    let members: Vec<Relation> = match qsr::topology::H8Membership::builtin() {
        qsr::topology::H8Membership::Subset(set) => set.iter().map(|b| rcc.relation(*b)).collect(),
        _ => unreachable!(),
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(616);
    let mut checked = 0usize;
    for theta in &members {
        for _ in 0..20 {
            let mut delta = qsr::boxes::dir49_hull(&ra.basic(rng.random_range(0..169))).unwrap();
            if rng.random_bool(0.5) {
                delta = delta
                    .union(&qsr::boxes::dir49_hull(&ra.basic(rng.random_range(0..169))).unwrap());
            }
            let (tr, dr) = restrict_pair(theta, &delta).unwrap();
            if tr.is_empty() || dr.is_empty() {
                continue;
            }
            let before = qsr::topology::refine_basic(theta);
            let after = qsr::topology::refine_basic(&tr);
            if let (Ok(b), Ok(a)) = (before, after) {
                assert_eq!(b, a, "refinement moved under restriction");
                checked += 1;
            }
        }
    }
    assert!(checked > 300, "enough nonempty cases exercised: {checked}");
}

/// Relaxation preserves composition membership triangle-wise: every
/// observed triangle keeps its relaxed image inside the relaxed
/// composition.
#[test]
fn relaxation_respects_composition_triangles() {
    for &a in &IA_BASICS {
        for &b in &IA_BASICS {
            let composed = qsr::interval::compose_oracle(a, b);
            let relaxed_pair = qsr::interval::compose_oracle(a.relax(), b.relax());
            for c in composed.basics() {
                let c = IaBasic::from_index(c);
                assert!(
                    relaxed_pair.contains_basic(c.relax().index()),
                    "relax({c:?}) escapes relax({a:?}) o relax({b:?})"
                );
            }
        }
    }
}

/// Networks are preserved end to end by the matrix constructor.
#[test]
fn network_matrix_roundtrip() {
    let inst = gen_instance(99, 4);
    let rcc = rcc8_calculus();
    let rels: Vec<Relation> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| inst.net.top.get(i, j))
        .collect();
    let rebuilt = Network::from_matrix(rcc, 4, rels).unwrap();
    assert_eq!(rebuilt, inst.net.top);
}
