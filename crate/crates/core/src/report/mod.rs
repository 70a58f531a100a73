//! Batch computations behind the command-line tool: figure data, identity
//! suites and the overview of monotonicity properties.

mod battery;
mod figure;
mod overview;
mod verify;

pub use battery::{
    k5_minus_edge, random_graph, scan_battery, standard_battery, standard_xs, BatteryGraph,
    BATTERY_SEED, RANDOM_GRAPHS,
};
pub use figure::{
    figure, single_value, DecreaseEvidence, FigureData, FigureDecrease, FigureModel, FigureRow,
    FigureValue, DEFAULT_DIGITS,
};
pub use overview::{
    known_status, table_overview, CellStatus, Known, OverviewCell, OverviewConfig, OverviewReport,
    Property, ScanEvidence, Witness, DOUBLE_LOOP_MON_FAMILY, DOUBLE_LOOP_SING_FAMILY,
    LOOP_SING_FAMILY, OVERVIEW_MODELS, SINGLE_SING_FAMILY,
};
pub use verify::{verify, Check, Suite, SuiteReport};
