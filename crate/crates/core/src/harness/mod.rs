//! Named experiments, their reports and plots.
//!
//! Every experiment stores its measurements as tables and states its
//! assertions as rules over those tables, so a saved report can be
//! rechecked without rerunning anything.

mod experiments;
mod plot;
mod report;

pub use experiments::{
    equator_bound, exceeds_log3_power, l1_ball_volume, l1_radius_for, radius_ladder, root_radius,
    run_experiment, ExperimentBudget, ExperimentName, ExperimentSpec, TestSpace,
};
pub use plot::{emit_plot, PlotCurve, PlotOptions};
pub use report::{emit_report, Assertion, Report, ReportFormat, Rule, Table};
