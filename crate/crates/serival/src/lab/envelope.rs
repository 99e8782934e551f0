//! Bucket tables and sup-envelope affine fitting.
//!
//! Every fitted bound is an envelope: slope = max consecutive slope over
//! bucket maxima, intercept = max residual, both exact rationals, so the
//! bound is satisfied by every bucket maximum by construction. A least
//! squares line is reported alongside for trend only.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::series::OrderValue;

/// The measured maximum of a bucket: exact when every sample in the bucket
/// had an exact value, otherwise only a lower bound (some sample's value was
/// truncated, so the true maximum is unknown).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BucketValue {
    Exact(i64),
    Censored { lower: i64 },
}

impl BucketValue {
    pub fn lower(&self) -> i64 {
        match self {
            BucketValue::Exact(v) => *v,
            BucketValue::Censored { lower } => *lower,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BucketValue::Exact(_))
    }
}

#[derive(Clone, Debug)]
pub struct BucketEntry {
    pub value: BucketValue,
    /// Witness pair rendered in literal syntax; lexicographically smallest
    /// among maximizing samples, so merging is order-independent.
    pub witness: (String, String),
    pub samples: u64,
    pub censored: u64,
}

/// One sample observed by a scan.
#[derive(Clone, Debug)]
pub struct Sample {
    pub key: i64,
    pub value: OrderValue,
    pub witness: (String, String),
}

/// key -> running bucket maximum.
#[derive(Clone, Debug, Default)]
pub struct BucketTable {
    pub buckets: BTreeMap<i64, BucketEntry>,
}

impl BucketTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, s: Sample) {
        let (value, censored_inc) = match s.value {
            OrderValue::Exact(v) => (BucketValue::Exact(v), 0),
            OrderValue::AtLeast(v) => (BucketValue::Censored { lower: v }, 1),
        };
        let incoming = BucketEntry {
            value,
            witness: s.witness,
            samples: 1,
            censored: censored_inc,
        };
        match self.buckets.entry(s.key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(incoming);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let combined = combine(e.get(), &incoming);
                *e.get_mut() = combined;
            }
        }
    }

    /// Order-independent merge of two partial tables (workers).
    pub fn merge(&mut self, other: BucketTable) {
        for (key, entry) in other.buckets {
            match self.buckets.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(entry);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let combined = combine(e.get(), &entry);
                    *e.get_mut() = combined;
                }
            }
        }
    }

    pub fn total_samples(&self) -> u64 {
        self.buckets.values().map(|e| e.samples).sum()
    }

    pub fn total_censored(&self) -> u64 {
        self.buckets.values().map(|e| e.censored).sum()
    }

    pub fn exact_points(&self) -> Vec<(i64, i64)> {
        self.buckets
            .iter()
            .filter_map(|(k, e)| match e.value {
                BucketValue::Exact(v) => Some((*k, v)),
                BucketValue::Censored { .. } => None,
            })
            .collect()
    }

    pub fn censored_keys(&self) -> Vec<i64> {
        self.buckets
            .iter()
            .filter(|(_, e)| !e.value.is_exact())
            .map(|(k, _)| *k)
            .collect()
    }

    /// Exact bucket maxima are nondecreasing in the key.
    pub fn is_monotone(&self) -> bool {
        let pts = self.exact_points();
        pts.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// Commutative, associative combination of bucket entries: the value is the
/// max lower bound (censored when either side is), the witness follows the
/// max of (lower bound, lexicographically-least witness), so folds in any
/// order agree.
fn combine(a: &BucketEntry, b: &BucketEntry) -> BucketEntry {
    let value = match (a.value, b.value) {
        (BucketValue::Exact(x), BucketValue::Exact(y)) => BucketValue::Exact(x.max(y)),
        (x, y) => BucketValue::Censored {
            lower: x.lower().max(y.lower()),
        },
    };
    let witness = match a.value.lower().cmp(&b.value.lower()) {
        std::cmp::Ordering::Greater => a.witness.clone(),
        std::cmp::Ordering::Less => b.witness.clone(),
        std::cmp::Ordering::Equal => a.witness.clone().min(b.witness.clone()),
    };
    BucketEntry {
        value,
        witness,
        samples: a.samples + b.samples,
        censored: a.censored + b.censored,
    }
}

/// Affine envelope with exact rational slope and intercept.
#[derive(Clone, Debug, Serialize)]
pub struct AffineFit {
    pub slope: String,
    pub intercept: String,
    pub slope_value: f64,
    pub intercept_value: f64,
    pub method: String,
    pub least_squares_slope: f64,
    pub least_squares_intercept: f64,
}

#[derive(Clone, Debug)]
pub struct ExactFit {
    pub slope: Rational64,
    pub intercept: Rational64,
    pub least_squares: (f64, f64),
}

impl ExactFit {
    pub fn render(&self) -> AffineFit {
        AffineFit {
            slope: format_rational(self.slope),
            intercept: format_rational(self.intercept),
            slope_value: rat_to_f64(self.slope),
            intercept_value: rat_to_f64(self.intercept),
            method: "sup-envelope".to_string(),
            least_squares_slope: self.least_squares.0,
            least_squares_intercept: self.least_squares.1,
        }
    }

    /// value <= slope*key + intercept, exactly.
    pub fn dominates(&self, key: i64, value: i64) -> bool {
        let lhs = Rational64::from_integer(value);
        let rhs = self.slope * Rational64::from_integer(key) + self.intercept;
        lhs <= rhs
    }
}

pub fn format_rational(r: Rational64) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sup-envelope fit over exact bucket maxima. `min_slope` clamps the slope
/// from below (Theorem-1 scans require slope >= 1); raising the slope keeps
/// the envelope valid since keys are nonnegative.
pub fn envelope_fit(points: &[(i64, i64)], min_slope: Rational64) -> Option<ExactFit> {
    if points.is_empty() {
        return None;
    }
    let mut slope = min_slope;
    for w in points.windows(2) {
        let (k0, v0) = w[0];
        let (k1, v1) = w[1];
        if k1 == k0 {
            continue;
        }
        let s = Rational64::new(v1 - v0, k1 - k0);
        if s > slope {
            slope = s;
        }
    }
    let mut intercept = Rational64::from_integer(i64::MIN / 4);
    for &(k, v) in points {
        let r = Rational64::from_integer(v) - slope * Rational64::from_integer(k);
        if r > intercept {
            intercept = r;
        }
    }
    // Least squares on the same points, trend only.
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0 as f64).sum();
    let sy: f64 = points.iter().map(|p| p.1 as f64).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64) * (p.0 as f64)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 as f64) * (p.1 as f64)).sum();
    let denom = n * sxx - sx * sx;
    let ls = if denom.abs() < 1e-12 {
        (0.0, sy / n)
    } else {
        let a = (n * sxy - sx * sy) / denom;
        (a, (sy - a * sx) / n)
    };
    Some(ExactFit {
        slope,
        intercept,
        least_squares: ls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(key: i64, value: OrderValue, wx: &str, wy: &str) -> Sample {
        Sample {
            key,
            value,
            witness: (wx.to_string(), wy.to_string()),
        }
    }

    #[test]
    fn bucket_max_and_witness_tiebreak() {
        let mut t = BucketTable::new();
        t.record(sample(0, OrderValue::Exact(2), "b", "b"));
        t.record(sample(0, OrderValue::Exact(3), "z", "z"));
        t.record(sample(0, OrderValue::Exact(3), "a", "a"));
        let e = &t.buckets[&0];
        assert_eq!(e.value, BucketValue::Exact(3));
        assert_eq!(e.witness.0, "a");
        assert_eq!(e.samples, 3);
    }

    #[test]
    fn censoring_dominates() {
        let mut t = BucketTable::new();
        t.record(sample(1, OrderValue::Exact(5), "a", "a"));
        t.record(sample(1, OrderValue::AtLeast(3), "b", "b"));
        let e = &t.buckets[&1];
        assert_eq!(e.value, BucketValue::Censored { lower: 5 });
        assert_eq!(e.censored, 1);
    }

    #[test]
    fn merge_is_order_independent() {
        let samples = vec![
            sample(0, OrderValue::Exact(2), "c", "c"),
            sample(0, OrderValue::Exact(4), "d", "d"),
            sample(1, OrderValue::AtLeast(6), "e", "e"),
            sample(1, OrderValue::Exact(7), "f", "f"),
            sample(2, OrderValue::Exact(1), "g", "g"),
        ];
        // All 2-way splits in both merge orders give the same table.
        for split in 0..(1 << samples.len()) {
            let mut a = BucketTable::new();
            let mut b = BucketTable::new();
            for (i, s) in samples.iter().enumerate() {
                if split >> i & 1 == 0 {
                    a.record(s.clone());
                } else {
                    b.record(s.clone());
                }
            }
            let mut ab = a.clone();
            ab.merge(b.clone());
            let mut ba = b;
            ba.merge(a);
            assert_eq!(format!("{ab:?}"), format!("{ba:?}"));
        }
    }

    #[test]
    fn envelope_slope_and_intercept() {
        // {0: 3, 1: 5, 2: 7}: slope 2, intercept 3.
        let fit = envelope_fit(&[(0, 3), (1, 5), (2, 7)], Rational64::from_integer(0)).unwrap();
        assert_eq!(fit.slope, Rational64::from_integer(2));
        assert_eq!(fit.intercept, Rational64::from_integer(3));
        for &(k, v) in &[(0i64, 3i64), (1, 5), (2, 7)] {
            assert!(fit.dominates(k, v));
        }
    }

    #[test]
    fn envelope_clamps_slope() {
        // Flat data with min_slope 1 stays sound.
        let fit = envelope_fit(&[(0, 2), (3, 2)], Rational64::from_integer(1)).unwrap();
        assert_eq!(fit.slope, Rational64::from_integer(1));
        assert_eq!(fit.intercept, Rational64::from_integer(2));
        assert!(fit.dominates(3, 2));
    }

    #[test]
    fn fractional_envelope_slope() {
        // {0: 0, 2: 3}: slope 3/2.
        let fit = envelope_fit(&[(0, 0), (2, 3)], Rational64::from_integer(0)).unwrap();
        assert_eq!(fit.slope, Rational64::new(3, 2));
        assert_eq!(format_rational(fit.slope), "3/2");
    }
}
