//! User-supplied approximant families: a pair of series templates in the
//! parameter k, instantiated over a k-range and merged into a scan as extra
//! witnesses. This is the hook for experiments whose interesting pairs are
//! measure-zero in the enumeration space.

use serde::Serialize;

use crate::error::Result;
use crate::fields::BaseField;
use crate::parse::parse_series_with_k;
use crate::series::Series;

#[derive(Clone, Debug, Serialize)]
pub struct FamilySpec {
    pub x_template: String,
    pub y_template: String,
    pub k_min: i64,
    pub k_max: i64,
}

impl FamilySpec {
    pub fn instantiate(
        &self,
        nvars: usize,
        field: BaseField,
        prec: i64,
    ) -> Result<Vec<(Series, Series)>> {
        let mut out = Vec::new();
        for k in self.k_min..=self.k_max {
            let x = parse_series_with_k(&self.x_template, nvars, field, prec, Some(k))?;
            let y = parse_series_with_k(&self.y_template, nvars, field, prec, Some(k))?;
            out.push((x, y));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiates_over_range() {
        let fam = FamilySpec {
            x_template: "T1^(k+1)".into(),
            y_template: "T1^k".into(),
            k_min: 0,
            k_max: 2,
        };
        let pairs = fam.instantiate(2, BaseField::Prime(2), 8).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[2].0.ord().exact(), Some(3));
        assert_eq!(pairs[2].1.ord().exact(), Some(2));
    }
}
