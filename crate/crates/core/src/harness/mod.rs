//! Fixtures, experiment runner and report emission behind the CLI.

mod accuracy;
mod experiment;
mod fixtures;
mod synthetic;

pub use accuracy::{accuracy_report, AccuracyTable};
pub use experiment::{
    load_dataset, run_experiment, run_on_graph, select_seeds, write_rows, Dataset, Depth, ExperimentConfig,
    OutputFormat, OutputSpec, ReportRow,
};
pub use fixtures::{figure1_graph, figure2_graph, Figure1};
pub use synthetic::preferential_attachment;
