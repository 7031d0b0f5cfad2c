//! Finite fields, their quotient hyperfields `F_q / Γ`, and a decider for
//! "is this hyperfield such a quotient".
//!
//! An element of `F_{p^k}` is the integer `sum c_i p^i` of its polynomial
//! coefficients. The modulus is the monic irreducible whose lower
//! coefficients have the smallest such encoding, and the generator is the
//! smallest element of order `q - 1`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::addition::{AdditionTable, CarrierSet};
use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::hexagon::HexagonTable;
use crate::morphism::AutomorphismAction;
use crate::pasture::Pasture;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d) || d * d > q).map(|d| if q.is_multiple_of(d) { d } else { q })?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo monic `m`, coefficients low first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = ((r[shift + i] + p) as u64 - lead as u64 * c as u64 % p as u64) as u32 % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut x: u64, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = (x % p as u64) as u32;
            x /= p as u64;
            d
        })
        .collect()
}

fn monic(lower: u64, p: u32, k: u32) -> Vec<u32> {
    let mut m = digits(lower, p, k);
    m.push(1);
    m
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = (f.len() - 1) as u32;
    (1..=k / 2).all(|d| {
        (0..(p as u64).pow(d)).all(|lower| poly_rem(f, &monic(lower, p, d), p).iter().any(|&c| c != 0))
    })
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (modulus {}, generator {})", self.q, self.modulus_string(), self.generator)
    }
}

pub fn build_field(p: u64, k: u32, caps: &Caps) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Parse("field degree must be at least 1".into()));
    }
    let q = p.checked_pow(k).unwrap_or(u64::MAX);
    caps::check("field size", q.min(usize::MAX as u64) as usize, caps.field_q as usize)?;
    let (p, q) = (p as u32, q as u32);
    let modulus = (0..q as u64)
        .map(|lower| monic(lower, p, k))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree");
    let mut field = FiniteField {
        p,
        k,
        q,
        modulus,
        generator: 0,
        exp: Vec::new(),
        log: Vec::new(),
    };
    let order = (q - 1) as u64;
    let primes = prime_factors(order);
    let generator = (1..q)
        .find(|&g| primes.iter().all(|&r| field.pow_poly(g, order / r) != 1))
        .expect("the multiplicative group is cyclic");
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1;
    for i in 0..q - 1 {
        exp.push(x);
        log[x as usize] = i;
        x = field.mul_poly(x, generator);
    }
    debug_assert_eq!(x, 1);
    field.generator = generator;
    field.exp = exp;
    field.log = log;
    Ok(field)
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join(" + ")
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a as u64, self.p, self.k), digits(b as u64, self.p, self.k));
        let mut prod = vec![0u32; 2 * self.k as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        self.encode(&poly_rem(&prod, &self.modulus, self.p))
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    /// Discrete logarithm to the generator; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }
}

/// `F_q` together with the index `n` of `Γ` in `F_q^×`.
#[derive(Debug, Clone)]
pub struct QuotientSpec {
    pub field: Arc<FiniteField>,
    pub index: u32,
}

impl QuotientSpec {
    pub fn new(field: Arc<FiniteField>, index: u32) -> Result<Self> {
        let order = field.q() as u64 - 1;
        if index == 0 || !order.is_multiple_of(index as u64) {
            return Err(Error::NotDivisor {
                index: index as u64,
                order,
            });
        }
        Ok(QuotientSpec { field, index })
    }

    /// The coset of a nonzero element, as a residue mod `n`.
    pub fn class(&self, a: u32) -> usize {
        (self.field.log(a).expect("nonzero") % self.index) as usize
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::cyclic(self.index).expect("index >= 1")
    }

    /// Nullset on `table` (which must be over `Z_n`), plus the unit.
    fn nullset_on(&self, table: &HexagonTable) -> (usize, HexSet) {
        let f = &self.field;
        let m1 = f.minus_one();
        let mut set = HexSet::empty(table.len());
        // α + β + 1 = 0 with α, β nonzero covers every relation up to scaling
        for a in 1..f.q() {
            if a == m1 {
                continue;
            }
            let b = f.add(m1, f.neg(a));
            set.insert(table.hex_of(self.class(a), self.class(b)));
        }
        (self.class(m1), set)
    }

    /// Addition on cosets computed straight from the field, without
    /// hexagons: `ā ⊞ b̄ = { class(α + β) : α ∈ ā, β ∈ b̄ }`.
    pub fn coset_addition(&self) -> AdditionTable {
        let f = &self.field;
        let n = self.index as usize;
        let group = self.group();
        let mut one_plus: Vec<CarrierSet> = vec![0; n];
        for b in 1..f.q() {
            let s = f.add(1, b);
            let c = self.class(b);
            one_plus[c] |= if s == 0 { 1 } else { 1 << (self.class(s) + 1) };
        }
        // the class of 1 is the subgroup Γ, and Γ ⊞ b̄ = 1 ⊞ b̄ after scaling
        AdditionTable::from_unit_sums(&group, self.class(f.minus_one()), |g| one_plus[g])
    }
}

/// The quotient hyperfield `F_q / Γ` as a pasture on `Z_n`.
pub fn quotient_hyperfield(spec: &QuotientSpec, caps: &Caps) -> Result<Pasture> {
    let table = HexagonTable::build(&spec.group(), caps)?;
    let (unit, nullset) = spec.nullset_on(&table);
    Pasture::new(table, unit, nullset)
}

/// Convenience: `F_q / Γ` with `Γ` of index `n`.
pub fn quotient_of(q: u64, n: u32, caps: &Caps) -> Result<Pasture> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let field = Arc::new(build_field(p, k, caps)?);
    quotient_hyperfield(&QuotientSpec::new(field, n)?, caps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QuotientStatus {
    Quotient { q: u64, n: u64 },
    NotQuotient,
    InconclusiveFullSum,
}

#[derive(Debug, Clone)]
pub struct QuotientVerdict {
    pub status: QuotientStatus,
    pub witness: Option<QuotientSpec>,
    /// Largest `q - 1` examined.
    pub searched_up_to: u64,
}

/// How far to search when `1 ⊞ -1` is the whole hyperfield, where no
/// bound is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchBound {
    /// `q - 1 <= max(n^4, 1024)`.
    Auto,
    /// `q - 1 <= max(n^4, b)`.
    Max(u64),
}

impl SearchBound {
    const AUTO_FLOOR: u64 = 1024;

    fn full_sum_limit(self, n4: u64) -> u64 {
        match self {
            SearchBound::Auto => n4.max(Self::AUTO_FLOOR),
            SearchBound::Max(b) => n4.max(b),
        }
    }
}

impl std::str::FromStr for SearchBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(SearchBound::Auto);
        }
        s.parse()
            .map(SearchBound::Max)
            .map_err(|_| Error::Parse(format!("bound must be 'auto' or an integer, got {s:?}")))
    }
}

/// Decides whether a hyperfield is isomorphic to some `F_q / Γ`.
///
/// When `1 ⊞ -1` misses some element, any such `q` has `q - 1 <= n^4`, so
/// the search is exhaustive and a miss means `not_quotient`. Otherwise the
/// search runs to `bound` and a miss is reported as inconclusive.
pub fn is_quotient_of_finite_field(h: &Pasture, bound: SearchBound, caps: &Caps) -> Result<QuotientVerdict> {
    let n = h.order() as u64;
    let n4 = n.pow(4);
    let full = h.unit_sum_is_full();
    let limit = if full { bound.full_sum_limit(n4) } else { n4 };
    caps::check("field size", (limit + 1) as usize, caps.field_q as usize)?;
    if !h.is_hyperfield_fast() {
        return Err(Error::NotHyperfield);
    }
    let miss = QuotientVerdict {
        status: if full {
            QuotientStatus::InconclusiveFullSum
        } else {
            QuotientStatus::NotQuotient
        },
        witness: None,
        searched_up_to: limit,
    };
    if !h.group().is_cyclic() {
        return Ok(miss);
    }
    let action = AutomorphismAction::new(h.table(), caps)?;
    let target_unit = action.unit_orbit_rep(h.unit());
    let target = action.canonical_nullset(h.unit(), h.nullset());
    let candidates: Vec<(u64, u32)> = (2..=limit + 1)
        .filter(|q| (q - 1) % n == 0)
        .filter_map(prime_power)
        .collect();
    let hit = candidates.par_iter().find_map_first(|&(p, k)| {
        let field = Arc::new(build_field(p, k, caps).ok()?);
        let spec = QuotientSpec::new(field, n as u32).ok()?;
        let (unit, set) = spec.nullset_on(h.table());
        (action.unit_orbit_rep(unit) == target_unit && action.canonical_nullset(unit, &set) == target)
            .then_some(spec)
    });
    Ok(match hit {
        Some(spec) => QuotientVerdict {
            status: QuotientStatus::Quotient {
                q: spec.field.q() as u64,
                n,
            },
            witness: Some(spec),
            searched_up_to: limit,
        },
        None => miss,
    })
}
