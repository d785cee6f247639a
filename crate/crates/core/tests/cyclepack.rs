use contactlab::cyclepack::{
    enumerate_cycles, nu_exact, nu_star, pack, ratio_report, PlanarDigraph,
};
use contactlab::rational::big;
use num_traits::Zero;
use proptest::prelude::*;

fn brute_force_nu(n: usize, cycles: &[Vec<usize>]) -> usize {
    let mut best = 0;
    for mask in 0u32..1 << cycles.len() {
        let mut used = vec![false; n];
        let mut ok = true;
        for (i, c) in cycles.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for &v in c {
                    ok &= !used[v];
                    used[v] = true;
                }
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

#[test]
fn gadget_with_rotation_file() {
    let text = r#"{
        "vertices": ["a", "b", "c"],
        "arcs": [["a", "b"], ["b", "a"], ["b", "c"], ["c", "b"], ["c", "a"], ["a", "c"]],
        "rotation": {"a": ["b", "c"], "b": ["c", "a"], "c": ["a", "b"]}
    }"#;
    let g = PlanarDigraph::from_json(text).unwrap();
    let p = pack(&g, 100).unwrap();
    assert_eq!(p.nu, 1);
    assert_eq!(p.fractional.value, big(3, 2));
    assert!(p.certified);
    assert_eq!(p.fractional.dual.iter().cloned().sum::<num_rational::BigRational>(), big(3, 2));
    let r = ratio_report(&p).unwrap();
    assert!(r.within_proven && r.within_conjectured);
}

#[test]
fn non_planar_rotation_rejected() {
    let text = r#"{
        "vertices": [0, 1, 2, 3],
        "arcs": [[0, 1], [1, 2], [2, 0], [0, 3], [1, 3], [2, 3]],
        "rotation": {"0": [1, 2, 3], "1": [2, 3, 0], "2": [0, 3, 1], "3": [0, 1, 2]}
    }"#;
    assert!(PlanarDigraph::from_json(text).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn packings_are_consistent(code in 0usize..4096) {
        // Orientation pattern of K4: two bits per edge.
        let edges = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)];
        let mut arcs = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            match code >> (2 * i) & 3 {
                1 => arcs.push((u, v)),
                2 => arcs.push((v, u)),
                3 => arcs.extend([(u, v), (v, u)]),
                _ => {}
            }
        }
        let g = PlanarDigraph::new(4, &arcs, None).unwrap();
        let cycles = enumerate_cycles(&g, 1000).unwrap();
        prop_assert!(cycles.len() <= 20);
        let nu = nu_exact(4, &cycles).len();
        prop_assert_eq!(nu, brute_force_nu(4, &cycles));
        let frac = nu_star(4, &cycles).unwrap();
        prop_assert!(frac.certify(4, &cycles));
        prop_assert!(big(nu as i64, 1) <= frac.value);
        prop_assert_eq!(cycles.is_empty(), frac.value.is_zero());
    }
}
