use crate::error::{Error, Result};

/// Limits that fence the brute-force routines.
///
/// Every exhaustive check in the crate is polynomial of high degree (or
/// exponential) in the group order, so each one refuses inputs above its
/// cap with [`Error::Capacity`] instead of running for hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order accepted by the axiom oracle.
    pub oracle_order: usize,
    /// Largest group order for which a hexagon table is built.
    pub table_order: usize,
    /// Largest group order for automorphism enumeration.
    pub automorphism_order: usize,
    /// Largest number of hexagons for an exhaustive census.
    pub census_hexagons: usize,
    /// Largest field size accepted by `build_field`.
    pub field_q: u64,
    /// Largest number of equations in a FETVINS system.
    pub fetvins_m: usize,
    /// Largest carrier (group order + 1) for FETVINS brute force.
    pub fetvins_carrier: usize,
    /// Largest group order for skew hexagon tables.
    pub skew_order: usize,
    /// Largest group order accepted by the skew axiom oracle.
    pub skew_oracle_order: usize,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        oracle_order: 9,
        table_order: 64,
        automorphism_order: 16,
        census_hexagons: 22,
        field_q: 1_000_000,
        fetvins_m: 2,
        fetvins_carrier: 6,
        skew_order: 24,
        skew_oracle_order: 8,
    };

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.oracle_order,
            self.table_order,
            self.automorphism_order,
            self.census_hexagons,
            self.field_q as usize,
            self.fetvins_m,
            self.fetvins_carrier,
            self.skew_order,
            self.skew_oracle_order,
        ];
        if all.contains(&0) {
            return Err(Error::Parse("caps must be positive".into()));
        }
        // Bitset widths used internally.
        if self.table_order > 64 {
            return Err(Error::Parse("table_order cannot exceed 64".into()));
        }
        if self.census_hexagons > 40 {
            return Err(Error::Parse("census_hexagons cannot exceed 40".into()));
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::DEFAULT
    }
}

pub(crate) fn check(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::capacity(what, value, cap))
    } else {
        Ok(())
    }
}
