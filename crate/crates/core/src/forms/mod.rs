//! Alternating multilinear algebra: pointwise forms, forms sampled on chart
//! grids, the finite exponential series and the graded trace.

mod exp;
mod grading;
mod grid;
pub mod multi_index;
mod point;

pub use exp::matrix_exp_form;
pub use grading::GradingTag;
pub use grid::{exterior_derivative, wedge, Axis, DifferentialForm, Grid, GridForm, MatrixForm};
pub use multi_index::MultiIndex;
pub use point::{MatrixPointForm, PointForm, ScalarPointForm};

/// Graded trace of a matrix form under `g`.
pub fn supertrace(a: &MatrixPointForm, g: &GradingTag) -> crate::error::Result<ScalarPointForm> {
    g.supertrace(a)
}
