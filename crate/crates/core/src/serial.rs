//! Pasture JSON.
//!
//! ```json
//! {"group":"Z2xZ4","epsilon":[1,2],"nullset":[[[0,0],[0,1]],[[1,3],[1,3]]]}
//! ```
//!
//! On output the nullset lists each selected hexagon once, by its least
//! member pair, in increasing order. On input any member pair may stand
//! for its hexagon.

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::hexagon::{FundamentalPair, HexagonTable};
use crate::pasture::Pasture;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PastureJson {
    pub group: String,
    pub epsilon: Vec<u32>,
    pub nullset: Vec<(Vec<u32>, Vec<u32>)>,
}

impl PastureJson {
    pub fn from_pasture(p: &Pasture) -> Self {
        let g = p.group();
        PastureJson {
            group: g.to_string(),
            epsilon: p.unit_element().residues,
            nullset: p
                .nullset()
                .iter()
                .map(|h| {
                    let (u, v) = p.table().rep(h);
                    (g.element(u).residues, g.element(v).residues)
                })
                .collect(),
        }
    }

    pub fn to_pasture(&self, caps: &Caps) -> Result<Pasture> {
        let group: AbelianGroup = self.group.parse()?;
        let table = HexagonTable::build(&group, caps)?;
        let pairs: Vec<FundamentalPair> = self
            .nullset
            .iter()
            .map(|(u, v)| FundamentalPair {
                u: GroupElement::new(u.clone()),
                v: GroupElement::new(v.clone()),
            })
            .collect();
        Pasture::from_pairs(table, &GroupElement::new(self.epsilon.clone()), &pairs)
    }
}

pub fn pasture_to_json(p: &Pasture) -> String {
    serde_json::to_string(&PastureJson::from_pasture(p)).expect("plain data serialises")
}

pub fn pasture_to_value(p: &Pasture) -> serde_json::Value {
    serde_json::to_value(PastureJson::from_pasture(p)).expect("plain data serialises")
}

pub fn pasture_from_json(text: &str, caps: &Caps) -> Result<Pasture> {
    let raw: PastureJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_pasture(caps)
}
