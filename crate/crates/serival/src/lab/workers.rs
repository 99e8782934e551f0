//! Scan-grid partitioning. Workers own disjoint index ranges and produce
//! partial bucket tables merged by the associative max-reduction, so worker
//! count and scheduling never change the result.

use serde::Serialize;

use crate::error::Result;
use crate::lab::envelope::BucketTable;
use crate::lab::params::PairSpace;
use crate::series::Series;

/// Per-scan sample accounting, merged fieldwise.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Counts {
    pub pairs_total: u64,
    pub skipped_zero_pair: u64,
    pub skipped_inexact_key: u64,
    pub skipped_on_solution_line: u64,
    pub excluded_near_solution: u64,
    pub censored_values: u64,
    pub evaluated: u64,
}

impl Counts {
    fn merge(&mut self, o: &Counts) {
        self.pairs_total += o.pairs_total;
        self.skipped_zero_pair += o.skipped_zero_pair;
        self.skipped_inexact_key += o.skipped_inexact_key;
        self.skipped_on_solution_line += o.skipped_on_solution_line;
        self.excluded_near_solution += o.excluded_near_solution;
        self.censored_values += o.censored_values;
        self.evaluated += o.evaluated;
    }
}

/// Runs `eval` over every pair of the space, partitioned across `workers`
/// threads, and merges the partial tables in worker order. Each worker owns
/// a private scratch state built by `init` (pairs are delivered with y
/// varying slowest inside a chunk, so per-y caches pay off).
pub fn run_pair_scan_with<S, I, F>(
    space: &PairSpace,
    workers: usize,
    init: I,
    eval: F,
) -> Result<(BucketTable, Counts)>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &Series, &Series, &mut BucketTable, &mut Counts) -> Result<()> + Sync,
{
    let total = space.len();
    let workers = workers.max(1).min(64);
    if total == 0 {
        return Ok((BucketTable::new(), Counts::default()));
    }
    let chunk = total.div_ceil(workers as u128);
    let results = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = chunk * w as u128;
            let hi = (lo + chunk).min(total);
            if lo >= hi {
                break;
            }
            let eval = &eval;
            let init = &init;
            handles.push(scope.spawn(move || -> Result<(BucketTable, Counts)> {
                let mut table = BucketTable::new();
                let mut counts = Counts::default();
                let mut state = init();
                for idx in lo..hi {
                    let (x, y) = space.pair(idx);
                    counts.pairs_total += 1;
                    eval(&mut state, &x, &y, &mut table, &mut counts)?;
                }
                Ok((table, counts))
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut table = BucketTable::new();
    let mut counts = Counts::default();
    for r in results {
        let (t, c) = r?;
        table.merge(t);
        counts.merge(&c);
    }
    Ok((table, counts))
}

/// Stateless variant.
pub fn run_pair_scan<F>(space: &PairSpace, workers: usize, eval: F) -> Result<(BucketTable, Counts)>
where
    F: Fn(&Series, &Series, &mut BucketTable, &mut Counts) -> Result<()> + Sync,
{
    run_pair_scan_with(space, workers, || (), |_, x, y, t, c| eval(x, y, t, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::BaseField;
    use crate::lab::envelope::Sample;
    use crate::lab::params::{ScanMode, ScanParams};

    #[test]
    fn worker_count_does_not_change_output() {
        let mut p = ScanParams::new(BaseField::Prime(2), 2, 3);
        p.max_support_degree = 2;
        let space = PairSpace::from_params(&p).unwrap();
        let eval = |x: &Series, y: &Series, t: &mut BucketTable, c: &mut Counts| {
            if x.is_zero_at_precision() && y.is_zero_at_precision() {
                c.skipped_zero_pair += 1;
                return Ok(());
            }
            let key = x.ord().lower_bound().min(y.ord().lower_bound());
            let prod = x.mul(y)?;
            c.evaluated += 1;
            t.record(Sample {
                key,
                value: prod.ord(),
                witness: (x.to_string(), y.to_string()),
            });
            Ok(())
        };
        let (t1, c1) = run_pair_scan(&space, 1, eval).unwrap();
        let (t4, c4) = run_pair_scan(&space, 4, eval).unwrap();
        let (t7, c7) = run_pair_scan(&space, 7, eval).unwrap();
        assert_eq!(format!("{t1:?}"), format!("{t4:?}"));
        assert_eq!(format!("{t1:?}"), format!("{t7:?}"));
        assert_eq!(c1.evaluated, c4.evaluated);
        assert_eq!(c1.pairs_total, c7.pairs_total);
    }

    #[test]
    fn sampled_mode_stable_across_workers() {
        let mut p = ScanParams::new(BaseField::Rationals, 2, 3);
        p.max_support_degree = 2;
        p.mode = ScanMode::Sampled {
            count: 200,
            seed: 99,
        };
        let space = PairSpace::from_params(&p).unwrap();
        let eval = |x: &Series, y: &Series, t: &mut BucketTable, c: &mut Counts| {
            c.evaluated += 1;
            t.record(Sample {
                key: x.ord().lower_bound(),
                value: y.ord(),
                witness: (x.to_string(), y.to_string()),
            });
            Ok(())
        };
        let (t2, _) = run_pair_scan(&space, 2, eval).unwrap();
        let (t5, _) = run_pair_scan(&space, 5, eval).unwrap();
        assert_eq!(format!("{t2:?}"), format!("{t5:?}"));
    }
}
