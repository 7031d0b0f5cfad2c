//! Pasture morphisms, automorphisms and canonical forms.

use crate::bits::HexSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupAutomorphism, GroupElement, GroupHom};
use crate::hexagon::HexagonTable;
use crate::pasture::Pasture;

/// A group homomorphism that carries the unit to the unit and selected
/// hexagons to selected hexagons.
#[derive(Debug, Clone)]
pub struct PastureMorphism {
    pub source: Pasture,
    pub target: Pasture,
    pub hom: GroupHom,
}

impl PastureMorphism {
    pub fn new(hom: GroupHom, source: &Pasture, target: &Pasture) -> Result<Self> {
        if !is_morphism(&hom, source, target)? {
            return Err(Error::NotHomomorphism(
                "map does not respect the unit or the nullset".into(),
            ));
        }
        Ok(PastureMorphism {
            source: source.clone(),
            target: target.clone(),
            hom,
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PastureMorphism) -> Result<PastureMorphism> {
        if self.target != next.source {
            return Err(Error::MismatchedGroup);
        }
        PastureMorphism::new(self.hom.then(&next.hom), &self.source, &next.target)
    }
}

/// Whether `f` is a pasture morphism `p1 -> p2`. Fails if `f` is not a
/// group homomorphism.
pub fn is_morphism(f: &GroupHom, p1: &Pasture, p2: &Pasture) -> Result<bool> {
    p1.group().verify_hom(p2.group(), &f.images)?;
    Ok(respects(f, p1, p2))
}

fn respects(f: &GroupHom, p1: &Pasture, p2: &Pasture) -> bool {
    if f.apply(p1.unit()) != p2.unit() {
        return false;
    }
    // a homomorphism commutes with the six pair maps, so one member suffices
    p1.nullset().iter().all(|h| {
        let (u, v) = p1.table().rep(h);
        p2.contains_pair(f.apply(u), f.apply(v))
    })
}

/// The map sending everything to the identity of the target.
pub fn collapse(source: &AbelianGroup) -> GroupHom {
    GroupHom {
        images: vec![0; source.order()],
    }
}

/// Permutation of hexagon ids induced by a group automorphism.
pub fn hexagon_permutation(table: &HexagonTable, f: &GroupAutomorphism) -> Vec<usize> {
    (0..table.len())
        .map(|h| {
            let (u, v) = table.rep(h);
            table.hex_of(f.apply(u), f.apply(v))
        })
        .collect()
}

fn permute(perm: &[usize], set: &HexSet) -> HexSet {
    HexSet::from_indices(set.len(), set.iter().map(|h| perm[h]))
}

#[inline]
fn permute_mask(perm: &[usize], mut mask: u64) -> u64 {
    let mut out = 0u64;
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        out |= 1 << perm[b];
    }
    out
}

/// Automorphisms of a group with their action on hexagons, for repeated
/// canonicalisation against one table.
#[derive(Debug, Clone)]
pub struct AutomorphismAction {
    auts: Vec<(GroupAutomorphism, Vec<usize>)>,
}

impl AutomorphismAction {
    pub fn new(table: &HexagonTable, caps: &Caps) -> Result<Self> {
        let auts = table
            .group()
            .automorphisms(caps)?
            .into_iter()
            .map(|f| {
                let perm = hexagon_permutation(table, &f);
                (f, perm)
            })
            .collect();
        Ok(AutomorphismAction { auts })
    }

    pub fn len(&self) -> usize {
        self.auts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.auts.is_empty()
    }

    /// Smallest element of the orbit of `unit` under `Aut(G)`.
    pub fn unit_orbit_rep(&self, unit: usize) -> usize {
        self.auts.iter().map(|(f, _)| f.apply(unit)).min().unwrap_or(unit)
    }

    /// Number of automorphisms fixing `unit`.
    pub fn stabilizer_size(&self, unit: usize) -> usize {
        self.auts.iter().filter(|(f, _)| f.apply(unit) == unit).count()
    }

    /// Minimal image of the nullset over automorphisms sending `unit` to
    /// its orbit representative.
    pub fn canonical_nullset(&self, unit: usize, nullset: &HexSet) -> HexSet {
        let rep = self.unit_orbit_rep(unit);
        let relevant = self.auts.iter().filter(|(f, _)| f.apply(unit) == rep);
        if nullset.len() <= 64 {
            let mask = nullset.low_mask();
            let best = relevant
                .map(|(_, perm)| permute_mask(perm, mask))
                .min()
                .expect("some automorphism reaches the orbit rep");
            HexSet::from_mask(nullset.len(), best)
        } else {
            relevant
                .map(|(_, perm)| permute(perm, nullset))
                .min()
                .expect("some automorphism reaches the orbit rep")
        }
    }

    /// Automorphisms fixing `unit` and mapping the nullset onto itself.
    pub fn stabilizer(&self, unit: usize, nullset: &HexSet) -> Vec<GroupAutomorphism> {
        self.auts
            .iter()
            .filter(|(f, perm)| f.apply(unit) == unit && nullset.iter().all(|h| nullset.contains(perm[h])))
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// Whether a non-identity automorphism fixes `unit` and the nullset.
    pub fn has_nontrivial_stabilizer(&self, unit: usize, nullset: &HexSet) -> bool {
        self.auts.iter().any(|(f, perm)| {
            !f.is_identity() && f.apply(unit) == unit && nullset.iter().all(|h| nullset.contains(perm[h]))
        })
    }
}

/// All `f` in `Aut(G)` with `f(eps) = eps` and `f(N) = N`.
pub fn pasture_automorphisms(p: &Pasture, caps: &Caps) -> Result<Vec<GroupAutomorphism>> {
    let action = AutomorphismAction::new(p.table(), caps)?;
    Ok(action.stabilizer(p.unit(), p.nullset()))
}

/// Normal form of a pasture up to isomorphism preserving the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub group: Vec<u32>,
    pub unit_orbit_rep: GroupElement,
    pub nullset_min: HexSet,
}

pub fn canonical_form(p: &Pasture, caps: &Caps) -> Result<CanonicalForm> {
    let action = AutomorphismAction::new(p.table(), caps)?;
    Ok(canonical_form_with(&action, p))
}

pub fn canonical_form_with(action: &AutomorphismAction, p: &Pasture) -> CanonicalForm {
    let rep = action.unit_orbit_rep(p.unit());
    CanonicalForm {
        group: p.group().invariant_factors().to_vec(),
        unit_orbit_rep: p.group().element(rep),
        nullset_min: action.canonical_nullset(p.unit(), p.nullset()),
    }
}

/// The pasture described by a canonical form.
pub fn canonical_pasture(p: &Pasture, caps: &Caps) -> Result<Pasture> {
    let cf = canonical_form(p, caps)?;
    let unit = p.group().index_of(&cf.unit_orbit_rep)?;
    Pasture::new(p.table().clone(), unit, cf.nullset_min)
}

fn isomorphisms<'a>(
    p1: &'a Pasture,
    p2: &'a Pasture,
    caps: &Caps,
) -> Result<Option<impl Iterator<Item = (GroupAutomorphism, Vec<usize>)> + 'a>> {
    crate::caps::check("group order", p1.order().max(p2.order()), caps.automorphism_order)?;
    if p1.group() != p2.group() {
        // equal invariant factors is the same as isomorphic groups
        return Ok(None);
    }
    let action = AutomorphismAction::new(p1.table(), caps)?;
    Ok(Some(
        action
            .auts
            .into_iter()
            .filter(move |(f, _)| f.apply(p1.unit()) == p2.unit()),
    ))
}

/// Some group isomorphism with `f(eps1) = eps2` carries `Hex(P1)` into
/// `Hex(P2)`.
pub fn exists_bijective_morphism(p1: &Pasture, p2: &Pasture, caps: &Caps) -> Result<bool> {
    Ok(match isomorphisms(p1, p2, caps)? {
        None => false,
        Some(mut it) => it.any(|(_, perm)| permute(&perm, p1.nullset()).is_subset(p2.nullset())),
    })
}

/// Isomorphism preserving the unit, with equal nullset image.
pub fn is_isomorphic(p1: &Pasture, p2: &Pasture, caps: &Caps) -> Result<bool> {
    Ok(match isomorphisms(p1, p2, caps)? {
        None => false,
        Some(mut it) => it.any(|(_, perm)| &permute(&perm, p1.nullset()) == p2.nullset()),
    })
}

/// Every pasture morphism `p1 -> p2`, by exhausting group homomorphisms.
pub fn morphisms(p1: &Pasture, p2: &Pasture) -> Vec<GroupHom> {
    p1.group()
        .homomorphisms(p2.group())
        .into_iter()
        .filter(|f| respects(f, p1, p2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn is_morphism_examples() {
        let f3 = Pasture::f3();
        let id = GroupHom::identity(2);
        assert!(is_morphism(&id, &f3, &f3).unwrap());
        let k = Pasture::krasner();
        assert!(is_morphism(&collapse(f3.group()), &f3, &k).unwrap());
        assert!(!is_morphism(&id, &f3, &Pasture::sign()).unwrap());
        // not a homomorphism Z3 -> Z3
        let z3 = Pasture::from_index_pairs("Z3", 0, &[]).unwrap();
        let bad = GroupHom { images: vec![0, 1, 1] };
        assert!(matches!(is_morphism(&bad, &z3, &z3), Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn automorphism_examples() {
        for p in [Pasture::f3(), Pasture::sign(), Pasture::weak_sign()] {
            let a = pasture_automorphisms(&p, &caps()).unwrap();
            assert_eq!(a, vec![GroupHom::identity(2)]);
        }
        let both = Pasture::from_index_pairs("Z3", 0, &[(0, 0), (1, 2)]).unwrap();
        assert_eq!(pasture_automorphisms(&both, &caps()).unwrap().len(), 2);
        let one = Pasture::from_index_pairs("Z3", 0, &[(0, 1)]).unwrap();
        assert_eq!(pasture_automorphisms(&one, &caps()).unwrap().len(), 1);
    }

    #[test]
    fn canonical_form_examples() {
        let a = Pasture::from_index_pairs("Z3", 0, &[(0, 1)]).unwrap();
        let b = Pasture::from_index_pairs("Z3", 0, &[(0, 2)]).unwrap();
        assert_ne!(a, b);
        assert_eq!(canonical_form(&a, &caps()).unwrap(), canonical_form(&b, &caps()).unwrap());
        let k = Pasture::krasner();
        assert_eq!(&canonical_form(&k, &caps()).unwrap().nullset_min, k.nullset());
        let c = canonical_pasture(&b, &caps()).unwrap();
        assert_eq!(canonical_pasture(&c, &caps()).unwrap(), c);
    }

    #[test]
    fn bijective_morphism_examples() {
        let f3 = Pasture::f3();
        let ws = Pasture::weak_sign();
        assert!(exists_bijective_morphism(&f3, &f3, &caps()).unwrap());
        assert!(exists_bijective_morphism(&f3, &ws, &caps()).unwrap());
        assert!(!exists_bijective_morphism(&ws, &f3, &caps()).unwrap());
        assert!(!is_isomorphic(&f3, &ws, &caps()).unwrap());
        assert!(!exists_bijective_morphism(&f3, &Pasture::krasner(), &caps()).unwrap());
    }

    #[test]
    fn morphism_composition() {
        let f3 = Pasture::f3();
        let ws = Pasture::weak_sign();
        let k = Pasture::krasner();
        let f = PastureMorphism::new(GroupHom::identity(2), &f3, &ws).unwrap();
        let g = PastureMorphism::new(collapse(ws.group()), &ws, &k).unwrap();
        let h = f.then(&g).unwrap();
        assert_eq!(h.hom, collapse(f3.group()));
    }
}
