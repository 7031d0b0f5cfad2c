//! Products of pastures and the test for when a product of hyperfields is
//! again a hyperfield.

use crate::bits::HexSet;
use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::group::GroupHom;
use crate::hexagon::HexagonTable;
use crate::morphism::is_morphism;
use crate::pasture::Pasture;

#[derive(Debug, Clone)]
pub struct ProductPasture {
    pub factors: (Pasture, Pasture),
    pub result: Pasture,
    /// Index of `(a, b)` in the product group is `embedding[a * n2 + b]`.
    pub embedding: Vec<usize>,
}

impl ProductPasture {
    /// The two coordinate projections, as image tables.
    pub fn projections(&self) -> (GroupHom, GroupHom) {
        let n = self.result.order();
        let n2 = self.factors.1.order();
        let mut first = vec![0; n];
        let mut second = vec![0; n];
        for (ij, &idx) in self.embedding.iter().enumerate() {
            first[idx] = ij / n2;
            second[idx] = ij % n2;
        }
        (GroupHom { images: first }, GroupHom { images: second })
    }
}

pub fn product(p1: &Pasture, p2: &Pasture, caps: &Caps) -> Result<ProductPasture> {
    let (n1, n2) = (p1.order(), p2.order());
    caps::check("product group order", n1 * n2, caps.table_order)?;
    let (group, embedding) = p1.group().direct_product(p2.group());
    let table = HexagonTable::build(&group, caps)?;
    let at = |a: usize, b: usize| embedding[a * n2 + b];
    let mut nullset = HexSet::empty(table.len());
    for h1 in p1.nullset().iter() {
        for &(u1, v1) in p1.table().members(h1) {
            for h2 in p2.nullset().iter() {
                for &(u2, v2) in p2.table().members(h2) {
                    nullset.insert(table.hex_of(at(u1, u2), at(v1, v2)));
                }
            }
        }
    }
    let unit = at(p1.unit(), p2.unit());
    let result = Pasture::new(table, unit, nullset)?;
    let out = ProductPasture {
        factors: (p1.clone(), p2.clone()),
        result,
        embedding,
    };
    let (f, g) = out.projections();
    assert!(
        is_morphism(&f, &out.result, p1)? && is_morphism(&g, &out.result, p2)?,
        "projections of a product are morphisms"
    );
    Ok(out)
}

/// Right-hand side of the product criterion: both factors are 0/0, or one
/// is the Krasner hyperfield, or both are `F_2`.
pub fn product_theorem_verdict(h1: &Pasture, h2: &Pasture) -> Result<bool> {
    if !h1.is_hyperfield_fast() || !h2.is_hyperfield_fast() {
        return Err(Error::NotHyperfield);
    }
    Ok((h1.is_zero_over_zero_fast() && h2.is_zero_over_zero_fast())
        || h1.is_krasner()
        || h2.is_krasner()
        || (h1.is_f2() && h2.is_f2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::is_isomorphic;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn product_examples() {
        let f2 = Pasture::f2();
        let p = product(&f2, &f2, &caps()).unwrap();
        assert_eq!(p.result, f2);

        let f3 = Pasture::f3();
        let p = product(&f3, &f3, &caps()).unwrap();
        assert!(!p.result.is_hyperfield_fast());
        assert!(!product_theorem_verdict(&f3, &f3).unwrap());

        let s = Pasture::sign();
        let p = product(&s, &s, &caps()).unwrap();
        assert!(p.result.is_hyperfield_fast() && p.result.is_zero_over_zero_fast());
        assert!(product_theorem_verdict(&s, &s).unwrap());
        assert!(!s.is_4full(&caps()).unwrap());

        let k = Pasture::krasner();
        assert!(product_theorem_verdict(&k, &s).unwrap());
        assert!(product_theorem_verdict(&f2, &f2).unwrap());
        let p = product(&s, &k, &caps()).unwrap();
        assert!(is_isomorphic(&p.result, &s, &caps()).unwrap());
    }

    #[test]
    fn projections_are_morphisms() {
        let s = Pasture::sign();
        let w = Pasture::weak_sign();
        let p = product(&s, &w, &caps()).unwrap();
        let (f, g) = p.projections();
        assert!(is_morphism(&f, &p.result, &s).unwrap());
        assert!(is_morphism(&g, &p.result, &w).unwrap());
        assert_eq!(p.result.unit(), p.embedding[s.unit() * 2 + w.unit()]);
    }

    #[test]
    fn verdict_rejects_non_hyperfields() {
        let bad = Pasture::from_index_pairs("Z2", 0, &[(0, 0)]).unwrap();
        assert!(matches!(
            product_theorem_verdict(&bad, &Pasture::krasner()),
            Err(Error::NotHyperfield)
        ));
    }

    #[test]
    fn capacity() {
        let big = Pasture::from_index_pairs("Z9", 0, &[]).unwrap();
        assert!(product(&big, &big, &caps()).unwrap_err().is_capacity());
    }
}
