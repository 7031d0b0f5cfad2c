//! Finite abelian groups in invariant-factor form.
//!
//! A group is the product `Z_{d1} x ... x Z_{dm}` with `d1 | d2 | ... | dm`
//! and every `di >= 2`; the trivial group has no factors. Elements are
//! residue vectors and are totally ordered lexicographically, which is the
//! same as ordering them by their mixed-radix index (first coordinate most
//! significant). Everything downstream works with these dense indices.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::caps::{self, Caps};
use crate::error::{Error, Result};

/// An element of an [`AbelianGroup`], stored as its residue vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub residues: Vec<u32>,
}

impl GroupElement {
    pub fn new(residues: Vec<u32>) -> Self {
        GroupElement { residues }
    }
}

impl From<Vec<u32>> for GroupElement {
    fn from(residues: Vec<u32>) -> Self {
        GroupElement { residues }
    }
}

#[derive(Debug)]
struct Tables {
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite abelian group given by its invariant factors.
pub struct AbelianGroup {
    factors: Vec<u32>,
    order: usize,
    tables: OnceLock<Tables>,
}

impl Clone for AbelianGroup {
    fn clone(&self) -> Self {
        AbelianGroup {
            factors: self.factors.clone(),
            order: self.order,
            tables: OnceLock::new(),
        }
    }
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for AbelianGroup {}

impl std::hash::Hash for AbelianGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors.hash(state)
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses `"Z2xZ4"`-style literals. Factors need not be in invariant
    /// form (`"Z2xZ3"` gives `Z6`); `"Z1"`, `"1"` and `"trivial"` give the
    /// trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.eq_ignore_ascii_case("trivial") {
            return Ok(AbelianGroup::trivial());
        }
        let mut orders = Vec::new();
        for part in s.split(['x', 'X', '×', '*']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('C'))
                .ok_or_else(|| Error::InvalidGroup(format!("bad factor {part:?} in {s:?}")))?;
            let d: u32 = digits
                .parse()
                .map_err(|_| Error::InvalidGroup(format!("bad factor {part:?} in {s:?}")))?;
            if d == 0 {
                return Err(Error::InvalidGroup(format!("Z0 in {s:?}")));
            }
            orders.push(d);
        }
        Ok(CyclicDecomposition::new(&orders)?.group)
    }
}

impl AbelianGroup {
    /// Builds a group from an invariant-factor list, validating `d_i >= 2`
    /// and `d_i | d_{i+1}`.
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        for (i, &d) in factors.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidGroup(format!("invariant factor {d} < 2")));
            }
            if i + 1 < factors.len() && !factors[i + 1].is_multiple_of(d) {
                return Err(Error::InvalidGroup(format!(
                    "{d} does not divide {}",
                    factors[i + 1]
                )));
            }
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or_else(|| Error::InvalidGroup("order overflows".into()))?;
        Ok(AbelianGroup {
            factors,
            order,
            tables: OnceLock::new(),
        })
    }

    pub fn trivial() -> Self {
        AbelianGroup::new(Vec::new()).expect("trivial group")
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidGroup("Z0".into())),
            1 => Ok(AbelianGroup::trivial()),
            _ => AbelianGroup::new(vec![n]),
        }
    }

    pub fn invariant_factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.factors.len()])
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.residues.len() != self.factors.len()
            || g.residues.iter().zip(&self.factors).any(|(r, d)| r >= d)
        {
            return Err(Error::InvalidElement {
                element: g.residues.clone(),
                group: self.to_string(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.check_element(g).is_ok()
    }

    /// Componentwise addition of residues.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        if self.check_element(g).is_err() || self.check_element(h).is_err() {
            return Err(Error::MismatchedGroup);
        }
        let residues = g
            .residues
            .iter()
            .zip(&h.residues)
            .zip(&self.factors)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(a, d)| (d - a) % d)
            .collect();
        Ok(GroupElement { residues })
    }

    /// The k-th power `g^k`.
    pub fn pow(&self, g: &GroupElement, k: u64) -> Result<GroupElement> {
        self.check_element(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| ((a as u64 * (k % d as u64)) % d as u64) as u32)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Mixed-radix index; matches the lexicographic order on residues.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check_element(g)?;
        Ok(g
            .residues
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&r, &d)| acc * d as usize + r as usize))
    }

    pub fn element(&self, mut index: usize) -> GroupElement {
        assert!(index < self.order, "element index out of range");
        let mut residues = vec![0u32; self.factors.len()];
        for (slot, &d) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as u32;
            index /= d as usize;
        }
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let n = self.order;
            let elems: Vec<GroupElement> = self.elements().collect();
            let mut mul = vec![0u32; n * n];
            let mut inv = vec![0u32; n];
            for (i, a) in elems.iter().enumerate() {
                inv[i] = self.index_of(&self.inv(a).unwrap()).unwrap() as u32;
                for (j, b) in elems.iter().enumerate() {
                    mul[i * n + j] = self.index_of(&self.mul(a, b).unwrap()).unwrap() as u32;
                }
            }
            Tables { mul, inv }
        })
    }

    /// Product of two elements given by index.
    #[inline]
    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.tables().mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv_idx(&self, a: usize) -> usize {
        self.tables().inv[a] as usize
    }

    /// `a * b^{-1}` by index.
    #[inline]
    pub fn div_idx(&self, a: usize, b: usize) -> usize {
        self.mul_idx(a, self.inv_idx(b))
    }

    /// Order of the element with index `a`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check_element(g)?;
        Ok(g.residues
            .iter()
            .zip(&self.factors)
            .map(|(&r, &d)| (d / gcd(r, d)) as u64)
            .fold(1, lcm))
    }

    /// The k-torsion subgroup `{ g : g^k = 1 }`, in element order.
    pub fn torsion_subgroup(&self, k: u64) -> Vec<GroupElement> {
        self.elements()
            .filter(|g| {
                g.residues
                    .iter()
                    .zip(&self.factors)
                    .all(|(&r, &d)| (r as u64 * k).is_multiple_of(d as u64))
            })
            .collect()
    }

    /// Size of the k-torsion subgroup, computed without enumeration:
    /// `#Z_d[k] = gcd(d, k)`.
    pub fn torsion_count(&self, k: u64) -> u64 {
        self.factors.iter().map(|&d| gcd64(d as u64, k)).product()
    }

    /// Every admissible pasture unit: the elements with `e^2 = 1`.
    pub fn units_of_order_le_2(&self) -> Vec<GroupElement> {
        self.torsion_subgroup(2)
    }

    /// All homomorphisms from `self` to `target`, as image tables over
    /// element indices. A homomorphism out of `Z_{d1} x ... x Z_{dm}` is
    /// fixed by images `t_i` of the standard generators with `t_i^{d_i} = 1`.
    pub fn homomorphisms(&self, target: &AbelianGroup) -> Vec<GroupHom> {
        let candidates: Vec<Vec<usize>> = self
            .factors
            .iter()
            .map(|&d| {
                (0..target.order)
                    .filter(|&t| {
                        let ord = target.element_order(&target.element(t)).unwrap();
                        (d as u64).is_multiple_of(ord)
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for_each_tuple(&candidates, |imgs| out.push(self.extend_hom(target, imgs)));
        out
    }

    fn extend_hom(&self, target: &AbelianGroup, gen_images: &[usize]) -> GroupHom {
        let images = (0..self.order)
            .map(|i| {
                let g = self.element(i);
                g.residues
                    .iter()
                    .zip(gen_images)
                    .fold(0usize, |acc, (&r, &t)| {
                        let mut acc = acc;
                        for _ in 0..r {
                            acc = target.mul_idx(acc, t);
                        }
                        acc
                    })
            })
            .collect();
        GroupHom { images }
    }

    /// All automorphisms, by brute force over generator images whose
    /// orders match the invariant factors.
    pub fn automorphisms(&self, caps: &Caps) -> Result<Vec<GroupAutomorphism>> {
        caps::check("group order", self.order, caps.automorphism_order)?;
        let candidates: Vec<Vec<usize>> = self
            .factors
            .iter()
            .map(|&d| {
                (0..self.order)
                    .filter(|&t| self.element_order(&self.element(t)).unwrap() == d as u64)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut seen = vec![false; self.order];
        for_each_tuple(&candidates, |imgs| {
            let hom = self.extend_hom(self, imgs);
            seen.iter_mut().for_each(|s| *s = false);
            let mut bijective = true;
            for &img in &hom.images {
                if std::mem::replace(&mut seen[img], true) {
                    bijective = false;
                    break;
                }
            }
            if bijective {
                out.push(hom);
            }
        });
        Ok(out)
    }

    /// Checks that an image table is a homomorphism into `target`.
    pub fn verify_hom(&self, target: &AbelianGroup, images: &[usize]) -> Result<()> {
        if images.len() != self.order {
            return Err(Error::NotHomomorphism(format!(
                "table has {} entries, group has {}",
                images.len(),
                self.order
            )));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= target.order) {
            return Err(Error::NotHomomorphism(format!("image index {bad} out of range")));
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if images[self.mul_idx(a, b)] != target.mul_idx(images[a], images[b]) {
                    return Err(Error::NotHomomorphism(format!(
                        "f({a}*{b}) != f({a})*f({b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The direct product `self x other` in invariant-factor form, together
    /// with the index map `(i, j) -> embedding[i * other.order() + j]`.
    pub fn direct_product(&self, other: &AbelianGroup) -> (AbelianGroup, Vec<usize>) {
        let mut orders = self.factors.clone();
        orders.extend_from_slice(&other.factors);
        let dec = CyclicDecomposition::new(&orders).expect("factors are >= 2");
        let mut embedding = Vec::with_capacity(self.order * other.order);
        for i in 0..self.order {
            let a = self.element(i);
            for j in 0..other.order {
                let mut res = a.residues.clone();
                res.extend_from_slice(&other.element(j).residues);
                embedding.push(dec.image_index(&res));
            }
        }
        (dec.group, embedding)
    }
}

/// A group homomorphism given by its image table over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<usize>,
}

/// Automorphisms share the image-table representation.
pub type GroupAutomorphism = GroupHom;

impl GroupHom {
    pub fn identity(n: usize) -> Self {
        GroupHom {
            images: (0..n).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupHom {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        GroupHom { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Rewrites a product of arbitrary cyclic groups in invariant-factor form.
///
/// Each `Z_d` is split into its prime-power components by CRT; for every
/// prime the components are sorted by exponent and right-aligned, and slot
/// `i` of the result is the CRT recombination of the components landing in it.
struct CyclicDecomposition {
    group: AbelianGroup,
    // (source coordinate, modulus p^a, target slot)
    components: Vec<(usize, u32, usize)>,
}

impl CyclicDecomposition {
    fn new(orders: &[u32]) -> Result<Self> {
        let mut by_prime: Vec<(u32, Vec<(u32, usize)>)> = Vec::new();
        for (src, &d) in orders.iter().enumerate() {
            if d == 0 {
                return Err(Error::InvalidGroup("Z0".into()));
            }
            for (p, pa) in prime_power_parts(d) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, v)) => v.push((pa, src)),
                    None => by_prime.push((p, vec![(pa, src)])),
                }
            }
        }
        let rank = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u32; rank];
        let mut components = Vec::new();
        for (_, comps) in by_prime.iter_mut() {
            comps.sort();
            let offset = rank - comps.len();
            for (k, &(pa, src)) in comps.iter().enumerate() {
                factors[offset + k] *= pa;
                components.push((src, pa, offset + k));
            }
        }
        Ok(CyclicDecomposition {
            group: AbelianGroup::new(factors)?,
            components,
        })
    }

    fn image_index(&self, residues: &[u32]) -> usize {
        let mut slots: Vec<(u64, u64)> = vec![(0, 1); self.group.rank()];
        for &(src, pa, slot) in &self.components {
            let (r, m) = slots[slot];
            slots[slot] = crt(r, m, (residues[src] % pa) as u64, pa as u64);
        }
        let res: Vec<u32> = slots.iter().map(|&(r, _)| r as u32).collect();
        self.group.index_of(&GroupElement::new(res)).unwrap()
    }
}

fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> (u64, u64) {
    // moduli are coprime
    let m = m1 * m2;
    let mut x = r1;
    while x % m2 != r2 {
        x += m1;
    }
    (x % m, m)
}

fn prime_power_parts(mut d: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            let mut pa = 1;
            while d.is_multiple_of(p) {
                d /= p;
                pa *= p;
            }
            out.push((p, pa));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, d));
    }
    out
}

/// Calls `f` on every tuple of the cartesian product of `choices`.
pub(crate) fn for_each_tuple(choices: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; choices.len()];
    let mut cur: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        f(&cur);
        let mut k = choices.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < choices[k].len() {
                cur[k] = choices[k][pos[k]];
                break;
            }
            pos[k] = 0;
            cur[k] = choices[k][0];
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd64(a, b) * b
}

/// All abelian groups of order `n`, in invariant-factor form.
pub fn abelian_groups_of_order(n: u32) -> Vec<AbelianGroup> {
    fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for k in (1..=n.min(max)).rev() {
            for mut rest in partitions(n - k, k) {
                rest.insert(0, k);
                out.push(rest);
            }
        }
        out
    }
    if n == 1 {
        return vec![AbelianGroup::trivial()];
    }
    // one exponent partition per prime; combine them all
    let parts = prime_power_parts(n);
    let mut combos: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for &(p, pa) in &parts {
        let mut a = 0;
        let mut x = pa;
        while x > 1 {
            x /= p;
            a += 1;
        }
        let mut next = Vec::new();
        for c in &combos {
            for part in partitions(a, a) {
                let mut c2 = c.clone();
                c2.push(part.iter().map(|&e| p.pow(e)).collect());
                next.push(c2);
            }
        }
        combos = next;
    }
    let mut out: Vec<AbelianGroup> = combos
        .into_iter()
        .map(|c| {
            let orders: Vec<u32> = c.into_iter().flatten().collect();
            CyclicDecomposition::new(&orders).unwrap().group
        })
        .collect();
    out.sort_by(|a, b| a.factors.cmp(&b.factors));
    out
}
