//! Worked scenarios: prediction information over a stock index, and the
//! gray-level rate-fidelity studies.

mod graylevel;
mod stock;

pub use graylevel::{
    discrimination_semantics, fig4_family, fig5_study, fig5_study_with, graylevel_instance,
    graylevel_source, matching_point, Fig5Row, Fig5Table, GrayLevelConfig, GrayLevelCurve,
    MatchingPoint, PLATEAU_TOLERANCE,
};
pub use stock::{stock_info_curves, Prediction, StockConfig, StockRow};
