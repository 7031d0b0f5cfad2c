//! Fundamental pairs and hexagons of a finite abelian group.
//!
//! A fundamental pair `(u, v)` stands for the class of the triple
//! `(u, v, 1)` under scaling. The symmetric group on three letters moves a
//! pair through at most six images; the orbit is a hexagon. Hexagons get
//! dense ids ordered by their lexicographically least member, so a set of
//! hexagons is a fixed-width bitset.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::caps::{self, Caps};
use crate::error::Result;
use crate::group::{AbelianGroup, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalPair {
    pub u: GroupElement,
    pub v: GroupElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HexagonId(pub usize);

/// The six images of `(u, v)` by element index, in the order
/// `(u,v) (v,u) (uv',v') (v',uv') (vu',u') (u',vu')` where `'` is inverse.
pub(crate) fn six_images(g: &AbelianGroup, u: usize, v: usize) -> [(usize, usize); 6] {
    let (ui, vi) = (g.inv_idx(u), g.inv_idx(v));
    let uv = g.mul_idx(u, vi);
    let vu = g.mul_idx(v, ui);
    [(u, v), (v, u), (uv, vi), (vi, uv), (vu, ui), (ui, vu)]
}

/// The hexagon of `p`: its six images with duplicates collapsed.
pub fn orbit(group: &AbelianGroup, p: &FundamentalPair) -> Result<BTreeSet<FundamentalPair>> {
    let u = group.index_of(&p.u)?;
    let v = group.index_of(&p.v)?;
    Ok(six_images(group, u, v)
        .iter()
        .map(|&(a, b)| FundamentalPair {
            u: group.element(a),
            v: group.element(b),
        })
        .collect())
}

/// `(n^2 + 3n + 2 #G[3]) / 6`, evaluated without building any table.
pub fn hexagon_count_formula(group: &AbelianGroup) -> u128 {
    let n = group.order() as u128;
    let g3 = group.torsion_count(3) as u128;
    (n * n + 3 * n + 2 * g3) / 6
}

/// Orbit partition of `G^2` into hexagons.
#[derive(Debug)]
pub struct HexagonTable {
    group: AbelianGroup,
    reps: Vec<(usize, usize)>,
    members: Vec<Vec<(usize, usize)>>,
    pair_to_hex: Vec<u32>,
}

impl HexagonTable {
    pub fn build(group: &AbelianGroup, caps: &Caps) -> Result<Arc<HexagonTable>> {
        caps::check("group order", group.order(), caps.table_order)?;
        let group = group.clone();
        let n = group.order();
        let mut pair_to_hex = vec![u32::MAX; n * n];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        // Scanning pairs in lexicographic order means the first unvisited
        // pair of each orbit is its least member.
        for u in 0..n {
            for v in 0..n {
                if pair_to_hex[u * n + v] != u32::MAX {
                    continue;
                }
                let id = reps.len() as u32;
                let mut orbit: Vec<(usize, usize)> = six_images(&group, u, v).to_vec();
                orbit.sort_unstable();
                orbit.dedup();
                for &(a, b) in &orbit {
                    pair_to_hex[a * n + b] = id;
                }
                reps.push((u, v));
                members.push(orbit);
            }
        }
        Ok(Arc::new(HexagonTable {
            group,
            reps,
            members,
            pair_to_hex,
        }))
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Number of hexagons.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    #[inline]
    pub fn hex_of(&self, u: usize, v: usize) -> usize {
        self.pair_to_hex[u * self.group.order() + v] as usize
    }

    /// Hexagon of the triple `(x, y, z)`, i.e. of the pair `(x/z, y/z)`.
    #[inline]
    pub fn hex_of_triple(&self, x: usize, y: usize, z: usize) -> usize {
        let g = &self.group;
        let zi = g.inv_idx(z);
        self.hex_of(g.mul_idx(x, zi), g.mul_idx(y, zi))
    }

    pub fn hexagon(&self, p: &FundamentalPair) -> Result<HexagonId> {
        let u = self.group.index_of(&p.u)?;
        let v = self.group.index_of(&p.v)?;
        Ok(HexagonId(self.hex_of(u, v)))
    }

    /// Least member pair, by element index.
    pub fn rep(&self, h: usize) -> (usize, usize) {
        self.reps[h]
    }

    pub fn rep_pair(&self, h: HexagonId) -> FundamentalPair {
        let (u, v) = self.reps[h.0];
        FundamentalPair {
            u: self.group.element(u),
            v: self.group.element(v),
        }
    }

    /// Member pairs of hexagon `h`, sorted.
    pub fn members(&self, h: usize) -> &[(usize, usize)] {
        &self.members[h]
    }

    pub fn reps(&self) -> &[(usize, usize)] {
        &self.reps
    }
}
