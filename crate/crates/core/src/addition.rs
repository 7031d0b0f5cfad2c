//! Explicit multivalued addition on the carrier `G ⊔ {0}`.
//!
//! Carrier index 0 is the zero; group element `g` sits at index `g + 1`.
//! Subsets of the carrier are `u128` bitmasks.

use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::hexagon::HexagonTable;
use crate::pasture::Pasture;

pub type CarrierSet = u128;

pub const ZERO: usize = 0;

/// Carrier index of the group identity.
pub const fn one() -> usize {
    1
}

#[inline]
fn bit(i: usize) -> CarrierSet {
    1u128 << i
}

fn members(mut s: CarrierSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let b = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(b)
        }
    })
}

/// The first axiom that fails, as reported by [`AdditionTable::check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySum { a: usize, b: usize },
    NotCommutative { a: usize, b: usize },
    Negation { a: usize, b: usize },
    NotDistributive { g: usize, h: usize, k: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditionTable {
    group: AbelianGroup,
    unit: usize,
    size: usize,
    sums: Vec<CarrierSet>,
}

impl AdditionTable {
    /// Addition recovered from a pasture:
    /// `x ⊞ y = { z : hex(x, y, -z) in N }`, plus `0` when `x = -y`.
    pub fn from_pasture(p: &Pasture) -> Self {
        let g = p.group();
        let n = g.order();
        assert!(n < 128, "carrier does not fit a u128 mask");
        let table = p.table();
        let eps = p.unit();
        let size = n + 1;
        let mut sums = vec![0; size * size];
        for a in 0..size {
            sums[a * size] = bit(a);
            sums[a] = bit(a);
        }
        for x in 0..n {
            for y in 0..n {
                let mut s = 0;
                for z in 0..n {
                    if p.nullset().contains(table.hex_of_triple(x, y, g.mul_idx(eps, z))) {
                        s |= bit(z + 1);
                    }
                }
                if x == g.mul_idx(eps, y) {
                    s |= bit(ZERO);
                }
                sums[(x + 1) * size + y + 1] = s;
            }
        }
        AdditionTable {
            group: g.clone(),
            unit: eps,
            size,
            sums,
        }
    }

    /// Builds the table from the values `1 ⊞ g` alone, using the zero rules
    /// and `g ⊞ h = g (1 ⊞ h/g)`. `one_plus(g)` returns a carrier set.
    pub fn from_unit_sums(
        group: &AbelianGroup,
        unit: usize,
        one_plus: impl Fn(usize) -> CarrierSet,
    ) -> Self {
        let n = group.order();
        let size = n + 1;
        let mut t = AdditionTable {
            group: group.clone(),
            unit,
            size,
            sums: vec![0; size * size],
        };
        for a in 0..size {
            t.sums[a * size] = bit(a);
            t.sums[a] = bit(a);
        }
        for x in 0..n {
            for y in 0..n {
                let base = one_plus(group.div_idx(y, x));
                t.sums[(x + 1) * size + y + 1] = t.scale(x + 1, base);
            }
        }
        t
    }

    /// Builds a table from an arbitrary sum function on carrier indices.
    pub fn from_fn(
        group: &AbelianGroup,
        unit: usize,
        sum: impl Fn(usize, usize) -> CarrierSet,
    ) -> Self {
        let size = group.order() + 1;
        let mut sums = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                sums[a * size + b] = sum(a, b);
            }
        }
        AdditionTable {
            group: group.clone(),
            unit,
            size,
            sums,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Unit `eps` as a group element index.
    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn sum(&self, a: usize, b: usize) -> CarrierSet {
        self.sums[a * self.size + b]
    }

    /// Product on the carrier.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == ZERO || b == ZERO {
            ZERO
        } else {
            self.group.mul_idx(a - 1, b - 1) + 1
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        self.mul(self.unit + 1, a)
    }

    pub fn scale(&self, g: usize, s: CarrierSet) -> CarrierSet {
        members(s).fold(0, |acc, x| acc | bit(self.mul(g, x)))
    }

    /// Set-extended sum `S ⊞ T`.
    pub fn set_sum(&self, s: CarrierSet, t: CarrierSet) -> CarrierSet {
        let mut out = 0;
        for a in members(s) {
            for b in members(t) {
                out |= self.sum(a, b);
            }
        }
        out
    }

    /// Left fold `a1 ⊞ a2 ⊞ ... ⊞ ak`.
    pub fn sum_of(&self, terms: &[usize]) -> CarrierSet {
        let Some((&first, rest)) = terms.split_first() else {
            return bit(ZERO);
        };
        rest.iter().fold(bit(first), |acc, &t| self.set_sum(acc, bit(t)))
    }

    /// Checks commutativity, associativity, the negation axiom,
    /// distributivity and nonemptiness over every carrier triple.
    pub fn check_axioms(&self) -> Option<AxiomViolation> {
        let c = self.size;
        for a in 0..c {
            for b in 0..c {
                let s = self.sum(a, b);
                if s == 0 {
                    return Some(AxiomViolation::EmptySum { a, b });
                }
                if s != self.sum(b, a) {
                    return Some(AxiomViolation::NotCommutative { a, b });
                }
                if (s & bit(ZERO) != 0) != (a == self.neg(b)) {
                    return Some(AxiomViolation::Negation { a, b });
                }
            }
        }
        for g in 0..c {
            for h in 0..c {
                for k in 0..c {
                    let lhs = self.scale(g, self.sum(h, k));
                    let rhs = self.sum(self.mul(g, h), self.mul(g, k));
                    if lhs != rhs {
                        return Some(AxiomViolation::NotDistributive { g, h, k });
                    }
                }
            }
        }
        for a in 0..c {
            for b in 0..c {
                let ab = self.sum(a, b);
                for k in 0..c {
                    let lhs = self.set_sum(ab, bit(k));
                    let rhs = self.set_sum(bit(a), self.sum(b, k));
                    if lhs != rhs {
                        return Some(AxiomViolation::NotAssociative { a, b, c: k });
                    }
                }
            }
        }
        None
    }

    pub fn is_hyperfield(&self) -> bool {
        self.check_axioms().is_none()
    }

    /// `{ hex(a, b, c) : 0 in a ⊞ b ⊞ c }` over nonzero `a, b, c`.
    pub fn hexagons(&self, table: &HexagonTable) -> HexSet {
        assert_eq!(table.group(), &self.group);
        let n = self.group.order();
        let mut out = HexSet::empty(table.len());
        for a in 0..n {
            for b in 0..n {
                let ab = self.sum(a + 1, b + 1);
                for c in 0..n {
                    if self.set_sum(ab, bit(c + 1)) & bit(ZERO) != 0 {
                        out.insert(table.hex_of_triple(a, b, c));
                    }
                }
            }
        }
        out
    }

    fn is_f2(&self) -> bool {
        self.group.order() == 1 && self.sum(1, 1) == bit(ZERO)
    }

    /// `0 in a ⊞ b ⊞ c ⊞ d` for all nonzero `a, b, c, d`, excluding F2.
    pub fn is_4full(&self) -> bool {
        if self.is_f2() {
            return false;
        }
        let c = self.size;
        for a in 1..c {
            for b in 1..c {
                let ab = self.sum(a, b);
                for k in 1..c {
                    let abk = self.set_sum(ab, bit(k));
                    for d in 1..c {
                        if self.set_sum(abk, bit(d)) & bit(ZERO) == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Every nonzero `x` is `r / s` with `r, s` nonzero members of `1 ⊞ -1`.
    pub fn is_zero_over_zero(&self) -> bool {
        let s: Vec<usize> = members(self.sum(one(), self.unit + 1))
            .filter(|&x| x != ZERO)
            .collect();
        let mut ratios: CarrierSet = 0;
        for &r in &s {
            for &d in &s {
                ratios |= bit(self.group.div_idx(r - 1, d - 1) + 1);
            }
        }
        (1..self.size).all(|x| ratios & bit(x) != 0)
    }

    /// `0` lies in every sum of `m` nonzero elements. Works level by level
    /// over the distinct partial-sum sets.
    pub fn zero_in_all_sums(&self, m: usize) -> bool {
        let mut level: Vec<CarrierSet> = (1..self.size).map(bit).collect();
        for _ in 1..m {
            let mut next: Vec<CarrierSet> = level
                .iter()
                .flat_map(|&s| (1..self.size).map(move |a| (s, a)))
                .map(|(s, a)| self.set_sum(s, bit(a)))
                .collect();
            next.sort_unstable();
            next.dedup();
            level = next;
        }
        level.iter().all(|&s| s & bit(ZERO) != 0)
    }

    /// Human-readable dump, one row per carrier element.
    pub fn to_text(&self) -> String {
        let name = |i: usize| -> String {
            if i == ZERO {
                "0".into()
            } else {
                format!("{:?}", self.group.element(i - 1).residues)
            }
        };
        let mut out = String::new();
        for a in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|b| {
                    let items: Vec<String> = members(self.sum(a, b)).map(name).collect();
                    format!("{{{}}}", items.join(","))
                })
                .collect();
            out.push_str(&format!("{:>10} | {}\n", name(a), row.join(" ")));
        }
        out
    }
}

/// `m` homogeneous equations in `m + 1` unknowns, coefficients as carrier
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    m: usize,
    coefficients: Vec<Vec<usize>>,
}

impl LinearSystem {
    pub fn new(coefficients: Vec<Vec<usize>>) -> Result<Self> {
        let m = coefficients.len();
        if m == 0 {
            return Err(Error::InvalidSystem("need at least one equation".into()));
        }
        if coefficients.iter().any(|r| r.len() != m + 1) {
            return Err(Error::InvalidSystem(format!("every row needs {} coefficients", m + 1)));
        }
        Ok(LinearSystem { m, coefficients })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.coefficients
    }
}

fn fetvins_caps(h: &AdditionTable, m: usize, caps: &Caps) -> Result<()> {
    caps::check("equations", m, caps.fetvins_m)?;
    caps::check("carrier size", h.carrier_size(), caps.fetvins_carrier)
}

fn row_holds(h: &AdditionTable, row: &[usize], x: &[usize]) -> bool {
    let terms: Vec<usize> = row.iter().zip(x).map(|(&a, &xi)| h.mul(a, xi)).collect();
    h.sum_of(&terms) & bit(ZERO) != 0
}

/// Brute force: some nonzero vector solves every row of `sys`.
pub fn fetvins_check(h: &AdditionTable, sys: &LinearSystem, caps: &Caps) -> Result<bool> {
    fetvins_caps(h, sys.m, caps)?;
    let c = h.carrier_size();
    if sys.rows().iter().flatten().any(|&a| a >= c) {
        return Err(Error::InvalidSystem("coefficient outside the carrier".into()));
    }
    let k = sys.m + 1;
    let total = c.pow(k as u32);
    let mut x = vec![0usize; k];
    for code in 1..total {
        let mut r = code;
        for slot in x.iter_mut().rev() {
            *slot = r % c;
            r /= c;
        }
        if sys.rows().iter().all(|row| row_holds(h, row, &x)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks every system with `m` equations. Each possible row is turned into
/// a mask over candidate vectors; a system is solvable when the masks of
/// its rows share a nonzero vector. Returns the first unsolvable system.
pub fn fetvins_all(h: &AdditionTable, m: usize, caps: &Caps) -> Result<Option<LinearSystem>> {
    fetvins_caps(h, m, caps)?;
    let c = h.carrier_size();
    let k = m + 1;
    let nvec = c.pow(k as u32);
    let words = nvec.div_ceil(64);
    let decode = |mut code: usize| -> Vec<usize> {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = code % c;
            code /= c;
        }
        v
    };
    let vectors: Vec<Vec<usize>> = (0..nvec).map(decode).collect();
    let rows: Vec<Vec<usize>> = (0..nvec).map(decode).collect();
    let masks: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut mask = vec![0u64; words];
            // vector 0 is the zero vector; never counts
            for (code, x) in vectors.iter().enumerate().skip(1) {
                if row_holds(h, row, x) {
                    mask[code / 64] |= 1 << (code % 64);
                }
            }
            mask
        })
        .collect();

    fn search(
        masks: &[Vec<u64>],
        acc: &[u64],
        start: usize,
        depth: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if depth == 0 {
            return acc.iter().any(|&w| w != 0);
        }
        for r in start..masks.len() {
            let next: Vec<u64> = acc.iter().zip(&masks[r]).map(|(a, b)| a & b).collect();
            chosen.push(r);
            if !search(masks, &next, r, depth - 1, chosen) {
                return false;
            }
            chosen.pop();
        }
        true
    }

    let full = vec![u64::MAX; words];
    let mut chosen = Vec::new();
    if search(&masks, &full, 0, m, &mut chosen) {
        Ok(None)
    } else {
        let coefficients = chosen.iter().map(|&r| rows[r].clone()).collect();
        Ok(Some(LinearSystem::new(coefficients)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_table_from_definition() -> AdditionTable {
        // 1 ⊞ 1 = {1}, 1 ⊞ -1 = {1, 0, -1}
        let z2: AbelianGroup = "Z2".parse().unwrap();
        AdditionTable::from_unit_sums(&z2, 1, |g| if g == 0 { bit(1) } else { bit(0) | bit(1) | bit(2) })
    }

    #[test]
    fn sign_encoding_is_derived_by_the_oracle() {
        let t = sign_table_from_definition();
        assert!(t.is_hyperfield());
        let table = HexagonTable::build(t.group(), &Caps::default()).unwrap();
        let hexes = t.hexagons(&table);
        let h2 = table.hex_of(0, 1);
        assert_eq!(hexes, HexSet::from_indices(table.len(), [h2]));
        assert_eq!(crate::pasture::Pasture::sign().reconstruct_addition(), t);
    }

    #[test]
    fn krasner_from_definition() {
        let t = AdditionTable::from_unit_sums(&AbelianGroup::trivial(), 0, |_| bit(0) | bit(1));
        assert!(t.is_hyperfield());
        assert_eq!(crate::pasture::Pasture::krasner().reconstruct_addition(), t);
    }

    #[test]
    fn f4_matches_field_table() {
        // F4 = {0, 1, w, w^2} with w^2 = w + 1; w <-> g, w^2 <-> g^2 in Z3.
        let z3: AbelianGroup = "Z3".parse().unwrap();
        // encode F4 elements as polynomials a + b w -> 2-bit codes
        let to_code = |c: usize| -> u8 { [0b00, 0b01, 0b10, 0b11][c] };
        let from_code = |x: u8| -> usize { [0, 1, 2, 3][x as usize] };
        let t = AdditionTable::from_fn(&z3, 0, |a, b| bit(from_code(to_code(a) ^ to_code(b))));
        assert!(t.is_hyperfield());
        let p = crate::pasture::Pasture::from_index_pairs("Z3", 0, &[(1, 2)]).unwrap();
        assert_eq!(p.reconstruct_addition(), t);
    }

    #[test]
    fn detects_broken_tables() {
        let z2: AbelianGroup = "Z2".parse().unwrap();
        let t = AdditionTable::from_fn(&z2, 1, |a, b| if a == 1 && b == 2 { 0 } else { bit(a.max(b)) });
        assert!(matches!(t.check_axioms(), Some(AxiomViolation::EmptySum { .. })));
    }

    #[test]
    fn fetvins_examples() {
        let caps = Caps::default();
        let k = crate::pasture::Pasture::krasner().reconstruct_addition();
        let f2 = crate::pasture::Pasture::f2().reconstruct_addition();
        let zero_row = LinearSystem::new(vec![vec![0, 0]]).unwrap();
        assert!(fetvins_check(&f2, &zero_row, &caps).unwrap());
        let ones = LinearSystem::new(vec![vec![1, 1]]).unwrap();
        assert!(fetvins_check(&f2, &ones, &caps).unwrap());
        for m in 1..=2 {
            assert_eq!(fetvins_all(&k, m, &caps).unwrap(), None);
        }
        // rows [1,0,0] and [0,1,0] force x = y = 0; z stays free
        let sys = LinearSystem::new(vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(fetvins_check(&f2, &sys, &caps).unwrap());
        let too_many = LinearSystem::new(vec![vec![1; 4]; 3]).unwrap();
        assert!(fetvins_check(&k, &too_many, &caps).unwrap_err().is_capacity());
        assert!(LinearSystem::new(vec![vec![1, 1, 1]]).is_err());
    }

    #[test]
    fn fetvins_all_agrees_with_single_checks() {
        let caps = Caps::default();
        for p in [
            crate::pasture::Pasture::f3(),
            crate::pasture::Pasture::sign(),
            crate::pasture::Pasture::weak_sign(),
        ] {
            let h = p.reconstruct_addition();
            let c = h.carrier_size();
            let mut all_ok = true;
            for a in 0..c {
                for b in 0..c {
                    let sys = LinearSystem::new(vec![vec![a, b]]).unwrap();
                    all_ok &= fetvins_check(&h, &sys, &caps).unwrap();
                }
            }
            assert_eq!(fetvins_all(&h, 1, &caps).unwrap().is_none(), all_ok);
            if let Some(bad) = fetvins_all(&h, 2, &caps).unwrap() {
                assert!(!fetvins_check(&h, &bad, &caps).unwrap());
            }
        }
    }
}
