//! Hyperfields and pastures over finite abelian groups, encoded by hexagons.

pub mod addition;
pub mod bits;
pub mod caps;
pub mod cli;
pub mod error;
pub mod galois;
pub mod group;
pub mod hexagon;
pub mod lottery;
pub mod morphism;
pub mod pasture;
pub mod product;
pub mod serial;
pub mod skew;

pub use addition::{AdditionTable, CarrierSet, LinearSystem};
pub use bits::HexSet;
pub use caps::Caps;
pub use error::{Error, Result};
pub use galois::{FiniteField, QuotientSpec, QuotientStatus, QuotientVerdict};
pub use group::{AbelianGroup, GroupAutomorphism, GroupElement, GroupHom};
pub use hexagon::{FundamentalPair, HexagonId, HexagonTable};
pub use lottery::{Census, Estimate, Event, LotterySpec};
pub use morphism::{CanonicalForm, PastureMorphism};
pub use pasture::Pasture;
pub use product::ProductPasture;
pub use skew::{CayleyGroup, SkewHexagonTable};
