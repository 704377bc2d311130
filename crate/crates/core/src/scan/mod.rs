//! Figure presets, configurable grid scans, CSV output and column comparison.

pub mod compare;
pub mod config;
pub mod presets;
pub mod result;
pub mod run;

pub use compare::{compare, Comparison};
pub use config::{DriveAxis, DriveSpec, Quantity, ScanAxis, ScanConfig};
pub use presets::{preset, PRESETS};
pub use result::{Cell, ScanResult, SINGULAR, STATUS_OK};
pub use run::{columns, has_numerical_failure, run_scan, run_scan_with_threads, transmission, THREADS_ENV};
