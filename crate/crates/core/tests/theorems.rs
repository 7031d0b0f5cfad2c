use hexafield::galois::{prime_power, quotient_of};
use hexafield::group::abelian_groups_of_order;
use hexafield::lottery::{census, exact_probability, Event};
use hexafield::morphism::{is_isomorphic, morphisms};
use hexafield::product::product;
use hexafield::{AbelianGroup, Caps, HexSet, HexagonTable, Pasture};

fn pastures_of(group: &AbelianGroup, caps: &Caps) -> Vec<Pasture> {
    let t = HexagonTable::build(group, caps).unwrap();
    let len = t.len();
    let mut out = Vec::new();
    for unit in (0..group.order()).filter(|&u| group.mul_idx(u, u) == 0) {
        for m in 0..1u64 << len {
            out.push(Pasture::new(t.clone(), unit, HexSet::from_mask(len, m)).unwrap());
        }
    }
    out
}

fn pastures_up_to(n: u32, caps: &Caps) -> Vec<Pasture> {
    (1..=n).flat_map(abelian_groups_of_order).flat_map(|g| pastures_of(&g, caps)).collect()
}

#[test]
fn hyperfields_into_fields_come_from_fields() {
    let caps = Caps::default();
    let fields: Vec<Pasture> = (2..=9u64)
        .filter(|&q| prime_power(q).is_some())
        .map(|q| quotient_of(q, q as u32 - 1, &caps).unwrap())
        .collect();
    for f in &fields {
        assert!(f.is_field() && f.is_hyperfield_fast());
        assert!(!morphisms(f, f).is_empty());
    }
    let mut non_fields = 0;
    for h in pastures_up_to(4, &caps).into_iter().filter(|p| p.axiom_oracle(&caps).unwrap()) {
        if h.is_field() {
            continue;
        }
        non_fields += 1;
        for f in &fields {
            assert!(morphisms(&h, f).is_empty(), "{h:?} maps to F{}", f.order() + 1);
        }
    }
    assert!(non_fields > 0);
}

#[test]
fn prime_field_is_its_own_square_among_hyperfields() {
    let caps = Caps::default();
    for q in [2, 3, 5, 7] {
        let f = quotient_of(q, q as u32 - 1, &caps).unwrap();
        let into: Vec<_> = morphisms(&f, &f);
        assert_eq!(into.len(), 1, "F{q}");
        assert!(into[0].is_identity());
    }
}

#[test]
fn large_fields_have_full_unit_sums() {
    let caps = Caps::default();
    for q in 3..=3000u64 {
        if prime_power(q).is_none() {
            continue;
        }
        for n in (2..=12u64).filter(|n| (q - 1) % n == 0) {
            let sharp = q >= (n - 1).pow(4) + 4 * n;
            let coarse = q - 1 > n.pow(4);
            if !sharp && !coarse {
                continue;
            }
            let h = quotient_of(q, n as u32, &caps).unwrap();
            assert!(h.unit_sum_is_full(), "F{q} modulo index {n}");
        }
    }
}

#[test]
fn quotient_orders_and_fields() {
    let caps = Caps::default();
    for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = quotient_of(q, q as u32 - 1, &caps).unwrap();
        assert_eq!(f.order() as u64, q - 1);
        assert!(f.is_field());
        assert!(f.group().is_cyclic());
        for n in (1..q - 1).filter(|n| (q - 1) % n == 0) {
            let h = quotient_of(q, n as u32, &caps).unwrap();
            assert_eq!(h.order() as u64, n);
            assert!(!h.is_field(), "F{q} modulo index {n}");
            assert!(!morphisms(&f, &h).is_empty(), "F{q} has no map to its quotient of index {n}");
        }
    }
}

#[test]
fn census_brackets_hyperfields_by_isomorphism_classes() {
    let caps = Caps::default();
    for n in 1..=6 {
        for g in abelian_groups_of_order(n) {
            let auts = g.automorphisms(&caps).unwrap();
            for unit in g.units_of_order_le_2() {
                let u = g.index_of(&unit).unwrap();
                let fixing = auts.iter().filter(|f| f.apply(u) == u).count() as u64;
                let c = census(&g, &unit, &caps).unwrap();
                assert!(c.iso_classes <= c.hyperfields, "{g} {unit:?}");
                assert!(c.hyperfields <= c.iso_classes * fixing, "{g} {unit:?}");
                assert!(c.rigid_count <= c.hyperfields);
                assert_eq!(c.rigid_count % fixing, 0, "rigid hyperfields come in full orbits");
                assert!(c.fields <= c.hyperfields && c.star_hyperfields <= c.hyperfields);
                assert_eq!(c.oracle_disagreements, 0);

                let (hits, total) = exact_probability(&g, &unit, Event::IsHyperfield, &caps).unwrap();
                assert_eq!((hits, total), (c.hyperfields, c.total_pastures));
                let (star, _) = exact_probability(&g, &unit, Event::SatisfiesStar, &caps).unwrap();
                assert_eq!(star, c.star_hyperfields);
            }
        }
    }
}

#[test]
fn isomorphism_classes_by_brute_force() {
    let caps = Caps::default();
    for n in 1..=5 {
        for g in abelian_groups_of_order(n) {
            for unit in g.units_of_order_le_2() {
                let u = g.index_of(&unit).unwrap();
                let hyper: Vec<Pasture> = pastures_of(&g, &caps)
                    .into_iter()
                    .filter(|p| p.unit() == u && p.is_hyperfield_fast())
                    .collect();
                let mut reps: Vec<&Pasture> = Vec::new();
                for h in &hyper {
                    if !reps.iter().any(|r| is_isomorphic(r, h, &caps).unwrap()) {
                        reps.push(h);
                    }
                }
                let c = census(&g, &unit, &caps).unwrap();
                assert_eq!(c.iso_classes, reps.len() as u64, "{g} {unit:?}");
            }
        }
    }
}

#[test]
fn product_with_krasner_is_the_same_pasture() {
    let caps = Caps::default();
    let k = Pasture::krasner();
    for p in pastures_up_to(3, &caps) {
        let left = product(&p, &k, &caps).unwrap().result;
        let right = product(&k, &p, &caps).unwrap().result;
        assert_eq!(left, p);
        assert_eq!(right, p);
    }
}

#[test]
fn product_has_the_universal_property() {
    let caps = Caps::default();
    let small = pastures_up_to(2, &caps);
    let tests = pastures_up_to(3, &caps);
    for p1 in &small {
        for p2 in &small {
            let prod = product(p1, p2, &caps).unwrap().result;
            for t in &tests {
                let direct = morphisms(t, &prod).len();
                let pairs = morphisms(t, p1).len() * morphisms(t, p2).len();
                assert_eq!(direct, pairs);
            }
        }
    }
}
