use std::sync::Arc;

use hexafield::morphism::{canonical_form, is_isomorphic, is_morphism};
use hexafield::serial::{pasture_from_json, pasture_to_json};
use hexafield::{AbelianGroup, Caps, GroupHom, HexSet, HexagonTable, Pasture};
use proptest::prelude::*;

const GROUPS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "Z9", "Z3xZ3", "Z10", "Z12", "Z2xZ6",
];

fn table(name: &str) -> Arc<HexagonTable> {
    let g: AbelianGroup = name.parse().unwrap();
    HexagonTable::build(&g, &Caps::default()).unwrap()
}

/// A group from the list, a unit of order at most two and a nullset mask.
fn pasture() -> impl Strategy<Value = Pasture> {
    (0..GROUPS.len(), any::<u64>(), any::<usize>()).prop_map(|(i, mask, pick)| {
        let t = table(GROUPS[i]);
        let g = t.group().clone();
        let units: Vec<usize> = (0..g.order()).filter(|&u| g.mul_idx(u, u) == 0).collect();
        let len = t.len();
        let mask = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        Pasture::new(t, units[pick % units.len()], HexSet::from_mask(len, mask)).unwrap()
    })
}

/// Image of `p` under `f`, built from the member pairs of each hexagon.
fn transport(p: &Pasture, f: &GroupHom) -> Pasture {
    let t = p.table();
    let mut out = HexSet::empty(t.len());
    for h in p.nullset().iter() {
        for &(u, v) in t.members(h) {
            out.insert(t.hex_of(f.apply(u), f.apply(v)));
        }
    }
    Pasture::new(t.clone(), f.apply(p.unit()), out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triple_hexagon_ignores_order_and_scale(i in 0..GROUPS.len(), x in any::<usize>(), y in any::<usize>(), z in any::<usize>(), s in any::<usize>()) {
        let t = table(GROUPS[i]);
        let g = t.group();
        let n = g.order();
        let (x, y, z, s) = (x % n, y % n, z % n, s % n);
        let h = t.hex_of_triple(x, y, z);
        for (a, b, c) in [(x, y, z), (y, x, z), (x, z, y), (z, y, x), (y, z, x), (z, x, y)] {
            prop_assert_eq!(t.hex_of_triple(a, b, c), h);
        }
        prop_assert_eq!(t.hex_of_triple(g.mul_idx(s, x), g.mul_idx(s, y), g.mul_idx(s, z)), h);
    }

    #[test]
    fn hexagons_partition_pairs(i in 0..GROUPS.len()) {
        let t = table(GROUPS[i]);
        let n = t.group().order();
        let mut seen = vec![false; n * n];
        for h in 0..t.len() {
            prop_assert!(!t.members(h).is_empty() && t.members(h).len() <= 6);
            prop_assert_eq!(t.members(h)[0], t.rep(h));
            for &(u, v) in t.members(h) {
                prop_assert_eq!(t.hex_of(u, v), h);
                prop_assert!(!seen[u * n + v]);
                seen[u * n + v] = true;
            }
        }
        prop_assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn reps_increase(i in 0..GROUPS.len()) {
        let t = table(GROUPS[i]);
        prop_assert!(t.reps().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canonical_form_is_an_automorphism_invariant(p in pasture(), k in any::<usize>()) {
        let caps = Caps::default();
        let auts = p.group().automorphisms(&caps).unwrap();
        let f = &auts[k % auts.len()];
        let q = transport(&p, f);
        prop_assert!(is_isomorphic(&p, &q, &caps).unwrap());
        prop_assert!(is_morphism(f, &p, &q).unwrap());
        prop_assert_eq!(canonical_form(&p, &caps).unwrap(), canonical_form(&q, &caps).unwrap());
        prop_assert_eq!(p.is_hyperfield_fast(), q.is_hyperfield_fast());
        prop_assert_eq!(p.satisfies_star(), q.satisfies_star());
    }

    #[test]
    fn json_round_trip(p in pasture()) {
        let caps = Caps::default();
        let text = pasture_to_json(&p);
        let back = pasture_from_json(&text, &caps).unwrap();
        prop_assert_eq!(pasture_to_json(&back), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn fast_check_matches_oracle(p in pasture()) {
        let caps = Caps::default();
        prop_assume!(p.order() <= caps.oracle_order);
        prop_assert_eq!(p.is_hyperfield_fast(), p.axiom_oracle(&caps).unwrap());
    }

    #[test]
    fn star_implies_hyperfield(p in pasture()) {
        if p.satisfies_star() {
            prop_assert!(p.is_hyperfield_fast());
        }
    }

    #[test]
    fn more_hexagons_keep_star(p in pasture(), extra in any::<u64>()) {
        let len = p.table().len();
        let mut bigger = p.nullset().clone();
        for h in 0..len.min(64) {
            if extra >> h & 1 == 1 {
                bigger.insert(h);
            }
        }
        let q = p.with_nullset(bigger);
        if p.satisfies_star() {
            prop_assert!(q.satisfies_star());
        }
    }
}
