//! Hexagons of arbitrary finite groups.
//!
//! For non-abelian `G` a triple `(x, y, z)` is taken up to left and right
//! multiplication and permutation, so pairs `(u, v)` are identified under
//! the six triple permutations and under conjugation. Groups are given by
//! Cayley tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// A finite group as a multiplication table over indices `0..n`, with
/// the identity at index 0.
#[derive(Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    name: String,
    n: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    center: Vec<bool>,
}

impl fmt::Debug for CayleyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyGroup({}, order {})", self.name, self.n)
    }
}

impl fmt::Display for CayleyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply b, then a
    b.iter().map(|&i| a[i]).collect()
}

impl CayleyGroup {
    /// Validates a table (closure, identity at 0, inverses, associativity).
    pub fn from_table(name: impl Into<String>, n: usize, table: Vec<usize>) -> Result<Self> {
        let name = name.into();
        let bad = |why: &str| Err(Error::InvalidGroup(format!("{name}: {why}")));
        if n == 0 || table.len() != n * n {
            return bad("table must be n x n with n >= 1");
        }
        if table.iter().any(|&x| x >= n) {
            return bad("entry out of range");
        }
        let m = |a: usize, b: usize| table[a * n + b];
        if (0..n).any(|a| m(0, a) != a || m(a, 0) != a) {
            return bad("index 0 is not the identity");
        }
        let mut inverse = vec![usize::MAX; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            match (0..n).find(|&b| m(a, b) == 0) {
                Some(b) if m(b, a) == 0 => *slot = b,
                _ => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return bad("not associative");
                    }
                }
            }
        }
        let center = (0..n).map(|a| (0..n).all(|b| m(a, b) == m(b, a))).collect();
        Ok(CayleyGroup {
            name,
            n,
            table,
            inverse,
            center,
        })
    }

    /// The group generated by permutations, elements sorted so the
    /// identity comes first.
    pub fn from_permutations(name: &str, gens: &[Perm]) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        let id: Perm = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = compose(g, &x);
                if !elems.contains(&y) {
                    elems.push(y.clone());
                    frontier.push(y);
                }
            }
        }
        elems.sort();
        let n = elems.len();
        let index: BTreeMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                table[i * n + j] = index[&compose(a, b)];
            }
        }
        Self::from_table(name, n, table)
    }

    pub fn from_abelian(g: &AbelianGroup) -> Self {
        let n = g.order();
        let table = (0..n * n).map(|ij| g.mul_idx(ij / n, ij % n)).collect();
        Self::from_table(g.to_string(), n, table).expect("abelian groups are groups")
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Ok(Self::from_abelian(&AbelianGroup::cyclic(n)?))
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    /// Symmetries of a regular `m`-gon, of order `2m`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidGroup(format!("D{m} needs m >= 3")));
        }
        let rot: Perm = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Perm = (0..m).map(|i| (m - i) % m).collect();
        Self::from_permutations(&format!("D{m}"), &[rot, refl])
    }

    pub fn alternating4() -> Self {
        Self::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    /// `{±1, ±i, ±j, ±k}`, acting on itself by left multiplication.
    pub fn quaternion() -> Self {
        // element 2u + s stands for (-1)^s * [1, i, j, k][u]
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        let mul = |a: usize, b: usize| {
            let (u, s) = unit_mul(a / 2, b / 2);
            2 * u + (s + a % 2 + b % 2) % 2
        };
        let gens: Vec<Perm> = [2, 4] // i and j
            .iter()
            .map(|&g| (0..8).map(|x| mul(g, x)).collect())
            .collect();
        Self::from_permutations("Q8", &gens).expect("Q8")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_central(&self, a: usize) -> bool {
        self.center[a]
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.center[a]).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center.iter().all(|&c| c)
    }
}

impl FromStr for CayleyGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "S3" => return Ok(Self::symmetric3()),
            "Q8" => return Ok(Self::quaternion()),
            "A4" => return Ok(Self::alternating4()),
            _ => {}
        }
        if let Some(m) = t.strip_prefix(['D', 'd']).and_then(|m| m.parse::<usize>().ok()) {
            return Self::dihedral(m);
        }
        Ok(Self::from_abelian(&t.parse::<AbelianGroup>()?))
    }
}

/// The six pairs obtained from the triple `(u, v, 1)` by permuting its
/// coordinates and normalising the last one to 1.
fn six_maps(g: &CayleyGroup, u: usize, v: usize) -> [(usize, usize); 6] {
    let (ui, vi) = (g.inv(u), g.inv(v));
    [
        (u, v),
        (v, u),
        (g.mul(u, vi), vi),
        (vi, g.mul(u, vi)),
        (g.mul(v, ui), ui),
        (ui, g.mul(v, ui)),
    ]
}

#[derive(Debug, Clone)]
pub struct SkewHexagonTable {
    group: CayleyGroup,
    pair_to_orbit: Vec<usize>,
    reps: Vec<(usize, usize)>,
    sizes: Vec<usize>,
}

/// Orbits of `G^2` under the six pair maps and conjugation.
pub fn skew_hexagons(group: &CayleyGroup, caps: &Caps) -> Result<SkewHexagonTable> {
    let n = group.order();
    caps::check("group order", n, caps.skew_order)?;
    let mut uf = UnionFind::<usize>::new(n * n);
    for u in 0..n {
        for v in 0..n {
            let p = u * n + v;
            for (a, b) in six_maps(group, u, v) {
                uf.union(p, a * n + b);
            }
            for g in 0..n {
                let gi = group.inv(g);
                let conj = |x: usize| group.mul(group.mul(g, x), gi);
                uf.union(p, conj(u) * n + conj(v));
            }
        }
    }
    let mut root_to_id = BTreeMap::new();
    let mut pair_to_orbit = vec![0; n * n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for (p, slot) in pair_to_orbit.iter_mut().enumerate() {
        let root = uf.find(p);
        let id = *root_to_id.entry(root).or_insert_with(|| {
            reps.push((p / n, p % n));
            sizes.push(0);
            reps.len() - 1
        });
        *slot = id;
        sizes[id] += 1;
    }
    Ok(SkewHexagonTable {
        group: group.clone(),
        pair_to_orbit,
        reps,
        sizes,
    })
}

impl SkewHexagonTable {
    pub fn group(&self) -> &CayleyGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn orbit_of(&self, u: usize, v: usize) -> usize {
        self.pair_to_orbit[u * self.group.order() + v]
    }

    /// Least member pair of each orbit.
    pub fn reps(&self) -> &[(usize, usize)] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

/// Orbit count by Burnside's lemma: the average number of pairs fixed by
/// an element of `S_3 x G`, with `G` acting on triples by conjugation.
pub fn burnside_count(group: &CayleyGroup) -> usize {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let n = group.order();
    let mut fixed = 0;
    for sigma in PERMS {
        for g in 0..n {
            let gi = group.inv(g);
            for u in 0..n {
                for v in 0..n {
                    let t = [u, v, 0].map(|x| group.mul(group.mul(g, x), gi));
                    let p = sigma.map(|i| t[i]);
                    let zi = group.inv(p[2]);
                    if (group.mul(p[0], zi), group.mul(p[1], zi)) == (u, v) {
                        fixed += 1;
                    }
                }
            }
        }
    }
    assert_eq!(fixed % (6 * n), 0, "Burnside sum divisible by the group order");
    fixed / (6 * n)
}

/// `⌊(5n²/8 + 5n) / 6⌋`, an upper bound on the orbit count for
/// non-abelian groups of order `n`.
pub fn skew_bound(group: &CayleyGroup) -> Result<usize> {
    if group.is_abelian() {
        return Err(Error::InvalidGroup(format!(
            "{} is abelian; the bound is for non-abelian groups",
            group.name()
        )));
    }
    let n = group.order();
    Ok((5 * n * n + 40 * n) / 48)
}

/// Summary emitted by the `skewhex` command.
#[derive(Debug, Clone, Serialize)]
pub struct SkewSummary {
    pub group: String,
    pub order: usize,
    pub abelian: bool,
    pub orbits: usize,
    pub burnside: usize,
    pub bound: Option<usize>,
    pub orbit_sizes: Vec<usize>,
}

pub fn skew_summary(group: &CayleyGroup, caps: &Caps) -> Result<SkewSummary> {
    let t = skew_hexagons(group, caps)?;
    Ok(SkewSummary {
        group: group.name().to_string(),
        order: group.order(),
        abelian: group.is_abelian(),
        orbits: t.len(),
        burnside: burnside_count(group),
        bound: skew_bound(group).ok(),
        orbit_sizes: t.sizes().to_vec(),
    })
}

/// Rebuilds the addition from a set of orbits and checks the hyperfield
/// axioms directly, with distributivity on both sides.
pub fn skew_axiom_oracle(table: &SkewHexagonTable, eps: usize, nullset: &HexSet, caps: &Caps) -> Result<bool> {
    let g = table.group();
    let n = g.order();
    caps::check("group order", n, caps.skew_oracle_order)?;
    if eps >= n || !g.is_central(eps) || g.mul(eps, eps) != 0 {
        return Err(Error::NotCentral);
    }
    if nullset.len() != table.len() {
        return Err(Error::Parse("nullset width does not match the orbit table".into()));
    }
    // carrier: 0 is zero, x + 1 is group element x
    let c = n + 1;
    let bit = |i: usize| 1u32 << i;
    let mul = |a: usize, b: usize| if a == 0 || b == 0 { 0 } else { g.mul(a - 1, b - 1) + 1 };
    let neg = |a: usize| mul(eps + 1, a);
    let mut sums = vec![0u32; c * c];
    for a in 0..c {
        sums[a] = bit(a);
        sums[a * c] = bit(a);
    }
    for x in 0..n {
        for y in 0..n {
            let mut s = 0;
            for z in 0..n {
                let ezi = g.inv(g.mul(eps, z));
                if nullset.contains(table.orbit_of(g.mul(x, ezi), g.mul(y, ezi))) {
                    s |= bit(z + 1);
                }
            }
            if x == g.mul(eps, y) {
                s |= bit(0);
            }
            sums[(x + 1) * c + y + 1] = s;
        }
    }
    let sum = |a: usize, b: usize| sums[a * c + b];
    let members = |s: u32| (0..c).filter(move |&i| s & bit(i) != 0);
    let set_sum = |s: u32, t: u32| {
        let mut out = 0;
        for a in members(s) {
            for b in members(t) {
                out |= sum(a, b);
            }
        }
        out
    };
    let left = |k: usize, s: u32| members(s).fold(0, |acc, x| acc | bit(mul(k, x)));
    let right = |s: u32, k: usize| members(s).fold(0, |acc, x| acc | bit(mul(x, k)));
    for a in 0..c {
        for b in 0..c {
            let s = sum(a, b);
            if s == 0 || s != sum(b, a) || ((s & 1 != 0) != (a == neg(b))) {
                return Ok(false);
            }
            for k in 0..c {
                if left(k, s) != sum(mul(k, a), mul(k, b)) || right(s, k) != sum(mul(a, k), mul(b, k)) {
                    return Ok(false);
                }
                if set_sum(s, bit(k)) != set_sum(bit(a), sum(b, k)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
