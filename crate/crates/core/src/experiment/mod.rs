//! Norm estimation by alternating maximization, growth sweeps, exponent fits
//! and experiment records.

pub mod fit;
pub mod maximize;
pub mod record;
pub mod sweep;

pub use fit::{fit_exponent, reference_exponent, GrowthFit};
pub use maximize::{alternating_maximize, alternating_maximize_from, hoelder_extremal, DyadicSupForm, MaximizeSettings, Maximizer, MultilinearForm};
pub use record::{load_records, records_from_csv, records_from_json, records_to_csv, save_records, ExperimentRecord, Model, CSV_HEADER};
pub use sweep::{growth_sweep, growth_sweep_detailed, LatticeSettings, SweepPoint, SweepSpec};
