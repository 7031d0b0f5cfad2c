//! Pastures: a group, a unit of order at most two, and a set of hexagons.
//!
//! The hyperfield test here works purely on hexagons. For a pair `(u, v)`
//! let `T(u, v) = { t : hex(tu, tv) in N }`. Then
//!
//! * (A) every `x != eps` has some `y` with `hex(x, y) in N`;
//! * (B) for member pairs `(x, y) != (z, w)` of selected hexagons,
//!   `T(x, eps z)` and `T(eps y, w)` intersect;
//! * condition (★) says `T(p)` and `T(q)` intersect for every two pairs.
//!
//! Negation `-z` is always `eps * z`.

use std::fmt;
use std::sync::Arc;

use crate::addition::AdditionTable;
use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::hexagon::{FundamentalPair, HexagonTable};

#[derive(Clone)]
pub struct Pasture {
    table: Arc<HexagonTable>,
    unit: usize,
    nullset: HexSet,
}

impl PartialEq for Pasture {
    fn eq(&self, other: &Self) -> bool {
        self.group() == other.group() && self.unit == other.unit && self.nullset == other.nullset
    }
}

impl Eq for Pasture {}

impl fmt::Debug for Pasture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hexes: Vec<(usize, usize)> = self.nullset.iter().map(|h| self.table.rep(h)).collect();
        f.debug_struct("Pasture")
            .field("group", self.group())
            .field("unit", &self.unit_element().residues)
            .field("nullset", &hexes)
            .finish()
    }
}

impl Pasture {
    pub fn new(table: Arc<HexagonTable>, unit: usize, nullset: HexSet) -> Result<Self> {
        let g = table.group();
        if unit >= g.order() {
            return Err(Error::InvalidElement {
                element: vec![unit as u32],
                group: g.to_string(),
            });
        }
        if g.mul_idx(unit, unit) != 0 {
            return Err(Error::InvalidUnit(g.element(unit).residues));
        }
        if nullset.len() != table.len() {
            return Err(Error::Parse(format!(
                "nullset width {} does not match {} hexagons",
                nullset.len(),
                table.len()
            )));
        }
        Ok(Pasture {
            table,
            unit,
            nullset,
        })
    }

    /// Builds a pasture from a unit and any member pairs of the selected
    /// hexagons.
    pub fn from_pairs(
        table: Arc<HexagonTable>,
        unit: &GroupElement,
        pairs: &[FundamentalPair],
    ) -> Result<Self> {
        let g = table.group();
        let unit = g.index_of(unit)?;
        let mut nullset = HexSet::empty(table.len());
        for p in pairs {
            nullset.insert(table.hexagon(p)?.0);
        }
        Pasture::new(table, unit, nullset)
    }

    /// `(G, eps, N)` from a group literal, a unit and representative pairs
    /// given by index.
    pub fn from_index_pairs(group: &str, unit: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let g: AbelianGroup = group.parse()?;
        let table = HexagonTable::build(&g, &Caps::DEFAULT)?;
        let nullset = HexSet::from_indices(table.len(), pairs.iter().map(|&(u, v)| table.hex_of(u, v)));
        Pasture::new(table, unit, nullset)
    }

    /// The field with two elements: trivial group, no hexagons.
    pub fn f2() -> Self {
        Pasture::from_index_pairs("Z1", 0, &[]).unwrap()
    }

    /// The Krasner hyperfield: trivial group, its unique hexagon.
    pub fn krasner() -> Self {
        Pasture::from_index_pairs("Z1", 0, &[(0, 0)]).unwrap()
    }

    /// The field with three elements on `Z2`: `1 + 1 = -1`.
    pub fn f3() -> Self {
        Pasture::from_index_pairs("Z2", 1, &[(0, 0)]).unwrap()
    }

    /// The sign hyperfield on `Z2`.
    pub fn sign() -> Self {
        Pasture::from_index_pairs("Z2", 1, &[(0, 1)]).unwrap()
    }

    /// The weak sign hyperfield: both hexagons of `Z2`, `eps = g`.
    pub fn weak_sign() -> Self {
        Pasture::from_index_pairs("Z2", 1, &[(0, 0), (0, 1)]).unwrap()
    }

    pub fn table(&self) -> &Arc<HexagonTable> {
        &self.table
    }

    pub fn group(&self) -> &AbelianGroup {
        self.table.group()
    }

    pub fn order(&self) -> usize {
        self.group().order()
    }

    /// Unit by element index.
    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_element(&self) -> GroupElement {
        self.group().element(self.unit)
    }

    pub fn nullset(&self) -> &HexSet {
        &self.nullset
    }

    pub fn with_nullset(&self, nullset: HexSet) -> Pasture {
        assert_eq!(nullset.len(), self.table.len());
        Pasture {
            table: self.table.clone(),
            unit: self.unit,
            nullset,
        }
    }

    #[inline]
    pub fn contains_pair(&self, u: usize, v: usize) -> bool {
        self.nullset.contains(self.table.hex_of(u, v))
    }

    /// Canonical representative pairs of the selected hexagons, sorted.
    pub fn nullset_pairs(&self) -> Vec<FundamentalPair> {
        self.nullset
            .iter()
            .map(|h| self.table.rep_pair(crate::hexagon::HexagonId(h)))
            .collect()
    }

    /// Rebuilds the multivalued addition from the hexagons.
    pub fn reconstruct_addition(&self) -> AdditionTable {
        AdditionTable::from_pasture(self)
    }

    /// `T(u, v)` for every pair, indexed by `u * n + v`.
    fn scalar_masks(&self) -> Vec<u64> {
        let g = self.group();
        let n = g.order();
        let mut masks = vec![0u64; n * n];
        for u in 0..n {
            for v in 0..n {
                let mut m = 0u64;
                for t in 0..n {
                    if self.contains_pair(g.mul_idx(t, u), g.mul_idx(t, v)) {
                        m |= 1 << t;
                    }
                }
                masks[u * n + v] = m;
            }
        }
        masks
    }

    /// Conditions (A) and (B).
    pub fn is_hyperfield_fast(&self) -> bool {
        let g = self.group();
        let n = g.order();
        let eps = self.unit;
        for x in 0..n {
            if x != eps && !(0..n).any(|y| self.contains_pair(x, y)) {
                return false;
            }
        }
        let masks = self.scalar_masks();
        let pairs: Vec<(usize, usize)> = self
            .nullset
            .iter()
            .flat_map(|h| self.table.members(h).iter().copied())
            .collect();
        for &(x, y) in &pairs {
            let ey = g.mul_idx(eps, y);
            for &(z, w) in &pairs {
                if (x, y) == (z, w) {
                    continue;
                }
                let ez = g.mul_idx(eps, z);
                if masks[x * n + ez] & masks[ey * n + w] == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Hyperfield with the 0/0 property, read off the hexagons: (A) holds
    /// for every `x` including `eps`, and (B) holds for all member pairs,
    /// equal ones included.
    pub fn is_zero_over_zero_fast(&self) -> bool {
        let g = self.group();
        let n = g.order();
        let eps = self.unit;
        if !(0..n).all(|x| (0..n).any(|y| self.contains_pair(x, y))) {
            return false;
        }
        let masks = self.scalar_masks();
        let pairs: Vec<(usize, usize)> = self
            .nullset
            .iter()
            .flat_map(|h| self.table.members(h).iter().copied())
            .collect();
        pairs.iter().all(|&(x, y)| {
            let ey = g.mul_idx(eps, y);
            pairs
                .iter()
                .all(|&(z, w)| masks[x * n + g.mul_idx(eps, z)] & masks[ey * n + w] != 0)
        })
    }

    /// Condition (★): any two pairs can be scaled into the nullset by a
    /// common `t`.
    pub fn satisfies_star(&self) -> bool {
        let mut masks = self.scalar_masks();
        masks.sort_unstable();
        masks.dedup();
        if masks.first() == Some(&0) {
            return false;
        }
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                if a & b == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Elements `z` of the group with `z in 1 ⊞ -1`.
    pub fn unit_sum_elements(&self) -> Vec<usize> {
        let g = self.group();
        let eps = self.unit;
        (0..g.order())
            .filter(|&z| self.nullset.contains(self.table.hex_of_triple(0, eps, g.mul_idx(eps, z))))
            .collect()
    }

    /// `1 ⊞ -1 = {0}`; meaningful for hyperfields.
    pub fn is_field(&self) -> bool {
        self.unit_sum_elements().is_empty()
    }

    /// `1 ⊞ -1` is the whole carrier.
    pub fn unit_sum_is_full(&self) -> bool {
        self.unit_sum_elements().len() == self.order()
    }

    /// Every `hex(eps, x)` is selected.
    pub fn all_eps_hexagons(&self) -> bool {
        (0..self.order()).all(|x| self.contains_pair(self.unit, x))
    }

    pub fn is_f2(&self) -> bool {
        self.order() == 1 && self.nullset.is_empty()
    }

    pub fn is_krasner(&self) -> bool {
        self.order() == 1 && !self.nullset.is_empty()
    }

    fn oracle_table(&self, caps: &Caps) -> Result<AdditionTable> {
        caps::check("group order", self.order(), caps.oracle_order)?;
        Ok(self.reconstruct_addition())
    }

    /// Direct check of the hyperfield axioms on the reconstructed addition.
    pub fn axiom_oracle(&self, caps: &Caps) -> Result<bool> {
        Ok(self.oracle_table(caps)?.is_hyperfield())
    }

    pub fn is_4full(&self, caps: &Caps) -> Result<bool> {
        Ok(self.oracle_table(caps)?.is_4full())
    }

    pub fn is_zero_over_zero(&self, caps: &Caps) -> Result<bool> {
        Ok(self.oracle_table(caps)?.is_zero_over_zero())
    }
}
