//! The hyperfield lottery: uniformly random nullsets, Monte Carlo
//! estimates and exhaustive censuses.
//!
//! Sample `i` under seed `s` reads its hexagon bits from ChaCha8 keyed by
//! `s` on stream `i`: bit `h` is bit `h % 64` of the `h / 64`-th output
//! word. Samples are independent of each other and of evaluation order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::hexagon::HexagonTable;
use crate::morphism::AutomorphismAction;
use crate::pasture::Pasture;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LotterySpec {
    pub group: AbelianGroup,
    pub unit: GroupElement,
    pub seed: u64,
    pub samples: u64,
}

impl LotterySpec {
    pub fn new(group: AbelianGroup, unit: GroupElement, seed: u64, samples: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Parse("samples must be at least 1".into()));
        }
        let u = group.index_of(&unit)?;
        if group.mul_idx(u, u) != 0 {
            return Err(Error::InvalidUnit(unit.residues));
        }
        Ok(LotterySpec {
            group,
            unit,
            seed,
            samples,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    IsHyperfield,
    /// A hyperfield that also satisfies condition (★).
    SatisfiesStar,
    AllEpsHexagons,
    HasNontrivialAutomorphism,
    IsField,
}

impl Event {
    pub const ALL: [Event; 5] = [
        Event::IsHyperfield,
        Event::SatisfiesStar,
        Event::AllEpsHexagons,
        Event::HasNontrivialAutomorphism,
        Event::IsField,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Event::IsHyperfield => "is_hyperfield",
            Event::SatisfiesStar => "satisfies_star",
            Event::AllEpsHexagons => "all_eps_hexagons",
            Event::HasNontrivialAutomorphism => "has_nontrivial_automorphism",
            Event::IsField => "is_field",
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "is_hyperfield" | "hyperfield" => Event::IsHyperfield,
            "satisfies_star" | "star" => Event::SatisfiesStar,
            "all_eps_hexagons" | "eps" => Event::AllEpsHexagons,
            "has_nontrivial_automorphism" | "auto" | "automorphism" => {
                Event::HasNontrivialAutomorphism
            }
            "is_field" | "field" => Event::IsField,
            _ => return Err(Error::UnknownEvent(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub event: String,
    pub successes: u64,
    pub samples: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn new(event: Event, successes: u64, samples: u64) -> Self {
        let (ci_low, ci_high) = wilson(successes, samples);
        Estimate {
            event: event.label().to_string(),
            successes,
            samples,
            p_hat: successes as f64 / samples as f64,
            ci_low,
            ci_high,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// 95% Wilson score interval for `successes` out of `samples`.
pub fn wilson(successes: u64, samples: u64) -> (f64, f64) {
    assert!(samples > 0 && successes <= samples);
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let high = if successes == samples { 1.0 } else { (center + half).clamp(p, 1.0) };
    (low, high)
}

/// A hexagon table, unit and automorphism action shared by many draws.
#[derive(Debug, Clone)]
pub struct Lottery {
    table: Arc<HexagonTable>,
    unit: usize,
    seed: u64,
    samples: u64,
    action: Option<Arc<AutomorphismAction>>,
}

impl Lottery {
    pub fn new(spec: &LotterySpec, caps: &Caps) -> Result<Self> {
        let table = HexagonTable::build(&spec.group, caps)?;
        let unit = spec.group.index_of(&spec.unit)?;
        Ok(Lottery {
            table,
            unit,
            seed: spec.seed,
            samples: spec.samples,
            action: None,
        })
    }

    fn with_action(mut self, caps: &Caps) -> Result<Self> {
        self.action = Some(Arc::new(AutomorphismAction::new(&self.table, caps)?));
        Ok(self)
    }

    pub fn table(&self) -> &Arc<HexagonTable> {
        &self.table
    }

    pub fn nullset(&self, index: u64) -> HexSet {
        let len = self.table.len();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut set = HexSet::empty(len);
        let mut word = 0u64;
        for h in 0..len {
            if h % 64 == 0 {
                word = rng.next_u64();
            }
            if word >> (h % 64) & 1 == 1 {
                set.insert(h);
            }
        }
        set
    }

    pub fn sample(&self, index: u64) -> Pasture {
        Pasture::new(self.table.clone(), self.unit, self.nullset(index))
            .expect("unit validated by the spec")
    }

    fn holds(&self, event: Event, p: &Pasture) -> bool {
        match event {
            Event::IsHyperfield => p.is_hyperfield_fast(),
            Event::SatisfiesStar => p.is_hyperfield_fast() && p.satisfies_star(),
            Event::AllEpsHexagons => p.all_eps_hexagons(),
            Event::HasNontrivialAutomorphism => self
                .action
                .as_ref()
                .expect("action built for automorphism events")
                .has_nontrivial_stabilizer(p.unit(), p.nullset()),
            Event::IsField => p.is_hyperfield_fast() && p.is_field(),
        }
    }

    pub fn estimate(&self, event: Event) -> Estimate {
        let successes = (0..self.samples)
            .into_par_iter()
            .filter(|&i| self.holds(event, &self.sample(i)))
            .count() as u64;
        Estimate::new(event, successes, self.samples)
    }
}

/// The pasture drawn as sample `index`.
pub fn sample_pasture(spec: &LotterySpec, index: u64, caps: &Caps) -> Result<Pasture> {
    if index >= spec.samples {
        return Err(Error::Parse(format!(
            "sample index {index} out of range for {} samples",
            spec.samples
        )));
    }
    Ok(Lottery::new(spec, caps)?.sample(index))
}

pub fn estimate(spec: &LotterySpec, event: Event, caps: &Caps) -> Result<Estimate> {
    let mut lottery = Lottery::new(spec, caps)?;
    if event == Event::HasNontrivialAutomorphism {
        lottery = lottery.with_action(caps)?;
    }
    Ok(lottery.estimate(event))
}

/// Exact probability of `event` as `(successes, 2^#hex)`.
pub fn exact_probability(
    group: &AbelianGroup,
    unit: &GroupElement,
    event: Event,
    caps: &Caps,
) -> Result<(u64, u64)> {
    let spec = LotterySpec::new(group.clone(), unit.clone(), 0, 1)?;
    let mut lottery = Lottery::new(&spec, caps)?;
    let len = lottery.table.len();
    caps::check("hexagon count", len, caps.census_hexagons)?;
    if event == Event::HasNontrivialAutomorphism {
        lottery = lottery.with_action(caps)?;
    }
    let total = 1u64 << len;
    let hits = (0..total)
        .into_par_iter()
        .filter(|&m| {
            let p = Pasture::new(lottery.table.clone(), lottery.unit, HexSet::from_mask(len, m))
                .expect("validated unit");
            lottery.holds(event, &p)
        })
        .count() as u64;
    Ok((hits, total))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub group: String,
    pub unit: Vec<u32>,
    pub total_pastures: u64,
    pub hyperfields: u64,
    pub fields: u64,
    pub star_hyperfields: u64,
    pub iso_classes: u64,
    pub rigid_count: u64,
    pub oracle_checked: u64,
    pub oracle_disagreements: u64,
}

/// One hyperfield found by a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub nullset: HexSet,
    pub is_field: bool,
    pub satisfies_star: bool,
    pub automorphisms: usize,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    hyperfields: u64,
    fields: u64,
    star: u64,
    iso: u64,
    rigid: u64,
    checked: u64,
    disagreements: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            hyperfields: self.hyperfields + o.hyperfields,
            fields: self.fields + o.fields,
            star: self.star + o.star,
            iso: self.iso + o.iso,
            rigid: self.rigid + o.rigid,
            checked: self.checked + o.checked,
            disagreements: self.disagreements + o.disagreements,
        }
    }
}

/// Exhaustive census of all nullsets on `(G, eps)`.
pub fn census(group: &AbelianGroup, unit: &GroupElement, caps: &Caps) -> Result<Census> {
    Ok(census_rows(group, unit, caps, false)?.0)
}

/// As [`census`], also returning every hyperfield in nullset order when
/// `keep_rows` is set.
pub fn census_rows(
    group: &AbelianGroup,
    unit: &GroupElement,
    caps: &Caps,
    keep_rows: bool,
) -> Result<(Census, Vec<CensusRow>)> {
    let table = HexagonTable::build(group, caps)?;
    let len = table.len();
    caps::check("hexagon count", len, caps.census_hexagons)?;
    let u = group.index_of(unit)?;
    if group.mul_idx(u, u) != 0 {
        return Err(Error::InvalidUnit(unit.residues.clone()));
    }
    let action = AutomorphismAction::new(&table, caps)?;
    let oracle = group.order() <= caps.oracle_order;
    let total = 1u64 << len;

    let visit = |m: u64| -> (Tally, Option<CensusRow>) {
        let nullset = HexSet::from_mask(len, m);
        let p = Pasture::new(table.clone(), u, nullset).expect("validated unit");
        let mut t = Tally::default();
        let fast = p.is_hyperfield_fast();
        if oracle && m.is_multiple_of(100) {
            t.checked = 1;
            if p.axiom_oracle(caps).expect("order within oracle cap") != fast {
                t.disagreements = 1;
            }
        }
        if !fast {
            return (t, None);
        }
        let is_field = p.is_field();
        let star = p.satisfies_star();
        let automorphisms = action.stabilizer(u, p.nullset()).len();
        t.hyperfields = 1;
        t.fields = is_field as u64;
        t.star = star as u64;
        t.rigid = (automorphisms == 1) as u64;
        // count each class once, at its canonical member
        t.iso = (action.unit_orbit_rep(u) == u && &action.canonical_nullset(u, p.nullset()) == p.nullset())
            as u64;
        let row = keep_rows.then(|| CensusRow {
            nullset: p.nullset().clone(),
            is_field,
            satisfies_star: star,
            automorphisms,
        });
        (t, row)
    };

    let (tally, rows) = if keep_rows {
        let found: Vec<(Tally, Option<CensusRow>)> = (0..total).into_par_iter().map(visit).collect();
        let tally = found.iter().fold(Tally::default(), |a, (t, _)| a.merge(*t));
        (tally, found.into_iter().filter_map(|(_, r)| r).collect())
    } else {
        let tally = (0..total)
            .into_par_iter()
            .map(|m| visit(m).0)
            .reduce(Tally::default, Tally::merge);
        (tally, Vec::new())
    };

    // iso classes live at the orbit representative of the unit; every
    // other unit in that orbit gives the same classes
    let iso_classes = if action.unit_orbit_rep(u) == u {
        tally.iso
    } else {
        let rep = group.element(action.unit_orbit_rep(u));
        census(group, &rep, caps)?.iso_classes
    };

    let census = Census {
        group: group.to_string(),
        unit: unit.residues.clone(),
        total_pastures: total,
        hyperfields: tally.hyperfields,
        fields: tally.fields,
        star_hyperfields: tally.star,
        iso_classes,
        rigid_count: tally.rigid,
        oracle_checked: tally.checked,
        oracle_disagreements: tally.disagreements,
    };
    Ok((census, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> AbelianGroup {
        s.parse().unwrap()
    }

    fn e(r: &[u32]) -> GroupElement {
        GroupElement::new(r.to_vec())
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = LotterySpec::new(g("Z5"), e(&[0]), 7, 100).unwrap();
        let caps = Caps::default();
        for i in [0, 1, 99] {
            assert_eq!(
                sample_pasture(&spec, i, &caps).unwrap(),
                sample_pasture(&spec, i, &caps).unwrap()
            );
        }
        assert!(sample_pasture(&spec, 100, &caps).is_err());
    }

    #[test]
    fn trivial_group_draws_both_hyperfields() {
        let spec = LotterySpec::new(g("Z1"), e(&[]), 3, 1000).unwrap();
        let lottery = Lottery::new(&spec, &Caps::default()).unwrap();
        let k = (0..1000).filter(|&i| lottery.sample(i).is_krasner()).count();
        assert!((400..600).contains(&k));
    }

    #[test]
    fn bit_frequencies_near_half() {
        let spec = LotterySpec::new(g("Z3xZ3"), e(&[0, 0]), 42, 100_000).unwrap();
        let lottery = Lottery::new(&spec, &Caps::default()).unwrap();
        let len = lottery.table().len();
        let counts = (0..spec.samples)
            .into_par_iter()
            .map(|i| {
                let s = lottery.nullset(i);
                (0..len).map(|h| s.contains(h) as u64).collect::<Vec<_>>()
            })
            .reduce(|| vec![0; len], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        for c in counts {
            let f = c as f64 / spec.samples as f64;
            assert!((0.49..=0.51).contains(&f), "{f}");
        }
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.35);
        let (lo, hi) = wilson(10, 10);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.65);
        // 50 of 100: centre 0.5, half width about 0.0955
        let (lo, hi) = wilson(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn event_labels_parse() {
        for ev in Event::ALL {
            assert_eq!(ev.label().parse::<Event>().unwrap(), ev);
        }
        assert_eq!("star".parse::<Event>().unwrap(), Event::SatisfiesStar);
        assert!(matches!("bogus".parse::<Event>(), Err(Error::UnknownEvent(_))));
    }

    #[test]
    fn estimate_examples() {
        let caps = Caps::default();
        let spec = LotterySpec::new(g("Z2"), e(&[1]), 42, 20_000).unwrap();
        let est = estimate(&spec, Event::IsHyperfield, &caps).unwrap();
        assert!(est.contains(0.75), "{est:?}");
        assert_eq!(exact_probability(&g("Z2"), &e(&[1]), Event::IsHyperfield, &caps).unwrap(), (3, 4));

        let spec = LotterySpec::new(g("Z1"), e(&[]), 42, 500).unwrap();
        assert_eq!(estimate(&spec, Event::IsHyperfield, &caps).unwrap().p_hat, 1.0);

        assert_eq!(
            exact_probability(&g("Z2"), &e(&[1]), Event::AllEpsHexagons, &caps).unwrap(),
            (2, 4)
        );
    }

    #[test]
    fn all_eps_probability_is_two_to_minus_distinct() {
        let caps = Caps::default();
        for name in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            let group = g(name);
            let table = HexagonTable::build(&group, &caps).unwrap();
            for unit in group.units_of_order_le_2() {
                let u = group.index_of(&unit).unwrap();
                let distinct: std::collections::BTreeSet<usize> =
                    (0..group.order()).map(|x| table.hex_of(u, x)).collect();
                let (hits, total) =
                    exact_probability(&group, &unit, Event::AllEpsHexagons, &caps).unwrap();
                assert_eq!(hits << distinct.len(), total, "{name}");
            }
        }
    }

    #[test]
    fn census_examples() {
        let caps = Caps::default();
        let c = census(&g("Z2"), &e(&[1]), &caps).unwrap();
        assert_eq!((c.hyperfields, c.iso_classes), (3, 3));
        let c = census(&g("Z2"), &e(&[0]), &caps).unwrap();
        assert_eq!(c.hyperfields, 2);
        let c = census(&g("Z1"), &e(&[]), &caps).unwrap();
        assert_eq!((c.total_pastures, c.hyperfields, c.fields), (2, 2, 1));
        let c = census(&g("Z3"), &e(&[0]), &caps).unwrap();
        assert_eq!(c.hyperfields, 9);
        assert_eq!(c.oracle_disagreements, 0);
    }

    #[test]
    fn census_cap() {
        let caps = Caps::default();
        let err = census(&g("Z11"), &e(&[0]), &caps).unwrap_err();
        assert!(err.is_capacity());
    }
}
