//! Maximal success probability `P_max` and the Groverian / Geometric
//! entanglement measure `G = √(1 − P_max)` of pure multi-qudit states.
//!
//! `P_max` is the largest squared overlap of a state with any fully product
//! state. It can be computed from the pure state directly or from any
//! reduction that traces out a single party; both routes are provided by
//! [`solver`]. [`closed_form`] has exact piecewise values for two
//! one-parameter three-qubit families, [`oracle`] an independent angle-grid
//! search, and [`bounds`] the `2^{1−n}` lower bound and related checks.

pub mod bounds;
pub mod checks;
pub mod closed_form;
pub mod error;
pub mod oracle;
pub mod random;
pub mod solver;
pub mod state;
pub mod sweep;

pub use error::{Error, Result};
pub use solver::{alternating_pmax, pmax, pmax_via_reduced, Method, PmaxReport, SolverConfig};
pub use state::{CorrelationTensor, DensityOperator, ProductAssignment, PureState, C64};
