use contactlab::discharging::{
    apply_rules, classify_bad_vertices, find_reducible, initial_charges, verify_discharging,
    DischargeConstants, Reducible, Rule, Site,
};
use contactlab::generators::{gen_bad_quad_fixture, gen_point_clique, gen_random_regions};
use contactlab::region_graph::{build_contact_graph, trace_faces, FaceSet, PlaneBipartiteGraph};
use contactlab::{FamilyKind, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn graph_of(f: &contactlab::ContactFamily) -> (PlaneBipartiteGraph, FaceSet) {
    let g = build_contact_graph(f).unwrap();
    let faces = trace_faces(&g);
    (g, faces)
}

fn minus_twelve() -> Rational {
    Rational::from_integer(-12)
}

#[test]
fn point_clique_totals_and_witness() {
    let f = gen_point_clique(490).unwrap();
    let (g, faces) = graph_of(&f);
    let consts = DischargeConstants::default();
    let d = verify_discharging(&g, &faces, 490, &consts).unwrap();
    assert_eq!(d.report.initial_total, minus_twelve());
    assert_eq!(d.report.final_total, minus_twelve());
    assert!(!d.report.negative_sites.is_empty());
    assert!(!d.report.structure.disks_have_k_plus_one_loose_neighbors.holds);
    assert!(!d.report.structure.min_degree_two_and_contacts_at_most_k.holds
        || !d.report.structure.every_edge_has_endpoint_of_degree_three.holds
        || !d.report.structure.small_disks_have_big_neighbor.holds
        || !d.report.structure.faces_at_least_six.holds);
    assert!(d.report.consistent);
    assert!(classify_bad_vertices(&g, &faces).is_empty());
    // The center contact vertex pays every slice.
    let center = f.curve_count();
    let spread = d
        .last
        .transfer_log
        .iter()
        .filter(|t| t.rule == Rule::BigContactSpread && t.source == Site::Vertex(center))
        .count();
    assert!(spread >= 490);
    match find_reducible(&f, 490).unwrap() {
        Reducible::LowDegreeDisk { disk, loose_count } => {
            assert!(disk < 490);
            assert_eq!(loose_count, 490);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn two_touching_regions_reduce() {
    let mut b = contactlab::family::FamilyBuilder::new(FamilyKind::Regions, 490);
    let x = b.curve("x", None);
    let y = b.curve("y", None);
    let p = b.contact("p", vec![x, y], Some(vec![x, y]));
    b.boundary(x, vec![p]);
    b.boundary(y, vec![p]);
    let r = find_reducible(&b.build(), 490).unwrap();
    assert_eq!(r, Reducible::LowDegreeDisk { disk: 0, loose_count: 1 });
}

#[test]
fn bad_quad_fixture_rules_and_reduction() {
    let k = 490;
    let f = gen_bad_quad_fixture(k).unwrap();
    let (g, faces) = graph_of(&f);
    let bad = classify_bad_vertices(&g, &faces);
    assert_eq!(bad.len(), 2 * k);
    let consts = DischargeConstants::default();
    let init = initial_charges(&g, &faces).unwrap();
    let after = apply_rules(&g, &faces, &init, &consts);
    assert_eq!(after.total(), minus_twelve());
    let v = 2 * k; // first contact vertex, meeting the inner ring
    let eps = consts.epsilon;
    for u in 0..k {
        let paid: Vec<_> = after
            .transfer_log
            .iter()
            .filter(|t| t.source == Site::Vertex(v) && t.sink == Site::Vertex(u))
            .collect();
        assert_eq!(paid.len(), 2);
        assert!(paid.iter().any(|t| t.rule == Rule::BigContactSpread
            && t.amount == Rational::from_integer(2) - eps));
        assert!(paid.iter().any(|t| t.rule == Rule::BigContactBadBonus && t.amount == eps));
    }
    let d = verify_discharging(&g, &faces, k, &consts).unwrap();
    assert!(d.report.three_consecutive_bad.is_some());
    assert!(!d.report.local_conditions_hold);
    match find_reducible(&f, k).unwrap() {
        Reducible::BadQuad { u, w, u2p, w2p, anchor } => {
            assert_eq!(anchor, 0);
            assert!(u < k && w < k && u2p >= k && w2p >= k);
            assert_ne!(u2p, w2p);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reductions_need_large_k() {
    let f = gen_point_clique(5).unwrap();
    assert!(find_reducible(&f, 5).is_err());
    let curves = contactlab::generators::gen_fpb_extremal(10, 3).unwrap();
    assert!(find_reducible(&curves, 490).is_err());
}

fn check_conservation_and_locality(f: &contactlab::ContactFamily, k: usize) {
    let (g, faces) = graph_of(f);
    let d = verify_discharging(&g, &faces, k, &DischargeConstants::default()).unwrap();
    assert_eq!(d.report.initial_total, minus_twelve());
    assert_eq!(d.report.final_total, minus_twelve());
    assert!(d.report.consistent);
    for t in &d.last.transfer_log {
        assert!(t.amount > Rational::zero());
        match (t.source, t.sink) {
            (Site::Vertex(a), Site::Vertex(b)) => {
                assert!(g.shortest_distance(a, b).is_some_and(|x| x <= 2));
            }
            (Site::Face(fi), Site::Vertex(b)) => assert!(faces.faces[fi].walk.contains(&b)),
            other => panic!("unexpected transfer {other:?}"),
        }
    }
}

#[test]
fn fixture_conservation_and_locality() {
    check_conservation_and_locality(&gen_bad_quad_fixture(490).unwrap(), 490);
    check_conservation_and_locality(&gen_point_clique(100).unwrap(), 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_regions_conserve_charge(n in 3usize..120, seed in any::<u64>()) {
        let f = gen_random_regions(n, seed).unwrap();
        check_conservation_and_locality(&f, 3);
        let r = find_reducible(&f, 490).unwrap();
        let is_low = matches!(r, Reducible::LowDegreeDisk { .. });
        prop_assert!(is_low);
    }
}
