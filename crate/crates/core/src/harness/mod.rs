//! Convergence studies: error metric, order fitting, the study runner and
//! its CSV / plot-script output.

mod config;
mod fit;
mod metric;
mod report;
mod study;

pub use config::parse_study_config;
pub use fit::fit_order;
pub use metric::{error_metric, ErrorMetric};
pub use report::{csv_string, plot_script, write_report, ReportPaths};
pub use study::{
    resolve_workers, run_convergence, smooth_data, ConvergenceReport, InitialData, OrderFit, ReferenceKind,
    Row, RunStatus, StudySpec, WORKERS_ENV,
};
