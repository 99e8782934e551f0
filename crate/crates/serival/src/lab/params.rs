//! Scan parameters and the witness-pair enumeration space.
//!
//! Witnesses are truncated series whose support lives on monomials of total
//! degree < the support cutoff, with coefficients drawn from the whole of
//! F_p or from the rationals of bounded naive height. Exhaustive mode walks
//! the full pair space when it fits the budget; sampled mode draws each
//! sample from its own ChaCha stream, so the sample set is independent of
//! worker count and scheduling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{BaseField, Coeff, Mono};
use crate::series::{monomials_below, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanParams {
    pub field: BaseField,
    pub nvars: usize,
    /// Working precision pi of enumerated witnesses.
    pub prec: i64,
    /// Witness support cutoff: monomials of total degree < this. Defaults to
    /// prec; scans clamp it to prec.
    pub max_support_degree: i64,
    /// Naive-height bound for rational coefficients (|num|, |den| <= height).
    pub height: u64,
    pub mode: ScanMode,
    /// Largest admissible exhaustive pair count.
    pub budget: u128,
    /// Worker threads; 0 = SERIVAL_WORKERS or available parallelism.
    pub workers: usize,
}

impl ScanParams {
    pub fn new(field: BaseField, nvars: usize, prec: i64) -> ScanParams {
        ScanParams {
            field,
            nvars,
            prec,
            max_support_degree: prec,
            height: 1,
            mode: ScanMode::Exhaustive,
            budget: 1 << 24,
            workers: 0,
        }
    }

    pub fn support_degree(&self) -> i64 {
        self.max_support_degree.min(self.prec)
    }

    /// Coefficient precision recommended for the polynomial under test, so
    /// that coefficient truncation never censors a measurable sample.
    pub fn recommended_coeff_prec(&self, degree: usize, max_coeff_degree: i64) -> i64 {
        self.prec + degree as i64 * self.support_degree() + max_coeff_degree + 8
    }

    pub fn resolved_workers(&self) -> usize {
        if self.workers > 0 {
            return self.workers;
        }
        if let Ok(v) = std::env::var("SERIVAL_WORKERS") {
            if let Ok(n) = v.parse::<usize>() {
                if n > 0 {
                    return n;
                }
            }
        }
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    }
}

/// The single-series enumeration space: a coefficient alphabet over a
/// monomial support.
#[derive(Clone, Debug)]
pub struct SeriesSpace {
    pub monos: Vec<Mono>,
    pub alphabet: Vec<Coeff>,
    pub field: BaseField,
    pub nvars: usize,
    pub prec: i64,
}

impl SeriesSpace {
    pub fn from_params(p: &ScanParams) -> SeriesSpace {
        SeriesSpace {
            monos: monomials_below(p.nvars, p.support_degree()),
            alphabet: p.field.elements_of_height(p.height),
            field: p.field,
            nvars: p.nvars,
            prec: p.prec,
        }
    }

    /// |alphabet|^|monos|, saturating at u128::MAX.
    pub fn size(&self) -> u128 {
        let a = self.alphabet.len() as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.monos.len() {
            acc = acc.saturating_mul(a);
        }
        acc
    }

    pub fn decode(&self, mut index: u128) -> Series {
        let a = self.alphabet.len() as u128;
        let terms = self.monos.iter().filter_map(|m| {
            let digit = (index % a) as usize;
            index /= a;
            let c = self.alphabet[digit].clone();
            if c.is_zero() {
                None
            } else {
                Some((m.clone(), c))
            }
        });
        Series::from_terms(self.nvars, self.field, self.prec, terms)
    }

    /// Sample j of a seeded scan: an independent ChaCha stream per index, so
    /// partitioning across workers cannot change the draw.
    pub fn sample(&self, seed: u64, stream: u64) -> (Series, Series) {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        let mut draw = || {
            let terms = self.monos.iter().filter_map(|m| {
                let digit = (rng.next_u64() % self.alphabet.len() as u64) as usize;
                let c = self.alphabet[digit].clone();
                if c.is_zero() {
                    None
                } else {
                    Some((m.clone(), c))
                }
            });
            Series::from_terms(self.nvars, self.field, self.prec, terms)
        };
        let x = draw();
        let y = draw();
        (x, y)
    }
}

/// The pair space of a scan, with budget enforcement for exhaustive mode.
#[derive(Clone, Debug)]
pub struct PairSpace {
    pub series: SeriesSpace,
    pub mode: ScanMode,
}

impl PairSpace {
    pub fn from_params(p: &ScanParams) -> Result<PairSpace> {
        let series = SeriesSpace::from_params(p);
        if let ScanMode::Exhaustive = p.mode {
            let pairs = series.size().saturating_mul(series.size());
            if pairs > p.budget {
                return Err(Error::BudgetExceeded {
                    space: pairs,
                    budget: p.budget,
                });
            }
        }
        Ok(PairSpace {
            series,
            mode: p.mode,
        })
    }

    /// Number of pair indices to iterate.
    pub fn len(&self) -> u128 {
        match self.mode {
            ScanMode::Exhaustive => self.series.size().saturating_mul(self.series.size()),
            ScanMode::Sampled { count, .. } => count as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In exhaustive mode the y component varies slowest, so contiguous
    /// index ranges share y and per-y caches in scan state pay off.
    pub fn pair(&self, index: u128) -> (Series, Series) {
        match self.mode {
            ScanMode::Exhaustive => {
                let n = self.series.size();
                (self.series.decode(index % n), self.series.decode(index / n))
            }
            ScanMode::Sampled { seed, .. } => self.series.sample(seed, index as u64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_sizes() {
        // F_2, 2 vars, cutoff 4: 10 monomials, 2^10 series, 2^20 pairs.
        let mut p = ScanParams::new(BaseField::Prime(2), 2, 6);
        p.max_support_degree = 4;
        let space = SeriesSpace::from_params(&p);
        assert_eq!(space.monos.len(), 10);
        assert_eq!(space.size(), 1 << 10);
        let pairs = PairSpace::from_params(&p).unwrap();
        assert_eq!(pairs.len(), 1 << 20);
    }

    #[test]
    fn budget_guard() {
        // F_2 at full prec 6: 21 monomials, 2^42 pairs > default budget.
        let p = ScanParams::new(BaseField::Prime(2), 2, 6);
        assert!(matches!(
            PairSpace::from_params(&p),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn decode_hits_every_coefficient_pattern() {
        let mut p = ScanParams::new(BaseField::Prime(3), 1, 2);
        p.max_support_degree = 2;
        let space = SeriesSpace::from_params(&p);
        // 2 monomials, 9 series, all distinct.
        let all: Vec<String> = (0..9u128).map(|i| space.decode(i).to_string()).collect();
        let unique: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 9);
    }

    #[test]
    fn sampling_is_stream_deterministic() {
        let mut p = ScanParams::new(BaseField::Rationals, 2, 4);
        p.height = 2;
        let space = SeriesSpace::from_params(&p);
        let (a1, b1) = space.sample(7, 123);
        let (a2, b2) = space.sample(7, 123);
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        let (a3, _) = space.sample(7, 124);
        assert!(a1 != a3 || a1.is_zero_at_precision());
    }

    #[test]
    fn workers_env_override() {
        let mut p = ScanParams::new(BaseField::Prime(2), 2, 4);
        p.workers = 3;
        assert_eq!(p.resolved_workers(), 3);
    }
}
