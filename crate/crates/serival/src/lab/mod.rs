//! The experiment lab: witness enumeration, envelope fitting, the five
//! scans, and reproducible report emission.

pub mod envelope;
pub mod family;
pub mod params;
pub mod report;
pub mod scans;
pub mod workers;

pub use envelope::{envelope_fit, AffineFit, BucketTable, BucketValue, Sample};
pub use family::FamilySpec;
pub use params::{PairSpace, ScanMode, ScanParams, SeriesSpace};
pub use report::{ScanReport, Verdict, SCHEMA_VERSION};
pub use scans::{
    artin_estimate, collect_solution_lines, default_y_max, dioph_scan, greenberg_estimate,
    izumi_probe, lojasiewicz_scan, PrecRule, SolutionLine,
};
pub use workers::{run_pair_scan, Counts};
