//! Fair facility location under neighborhood-radius fairness.
//!
//! Every point `i` of a population `P` of `n` points has a neighborhood
//! radius `NR(i)`: the smallest radius of a closed ball around `i` holding
//! `ceil(n/k)` population points, itself included. A set of centers `S` is
//! `alpha`-fair when `d(i, S) <= alpha * NR(i)` for every `i`. The crate
//! computes radii, selects fair centers, runs the usual clustering
//! baselines, scores any facility set, and solves tiny instances exactly.

pub mod baselines;
pub mod error;
pub mod evaluate;
pub mod experiment;
pub mod fair;
pub mod geoio;
pub mod kdtree;
pub mod metric;
pub mod neighborhood;
pub mod oracle;

pub use error::{Error, ErrorClass, Result};
pub use evaluate::{alpha_of, report, EvaluationReport, ExtendedReal, Facilities};
pub use fair::{alpha_fair_k_center, fair_k_center, real_line_fair, two_fair_k_center, Solution};
pub use metric::{Instance, MetricView, Point2D, PointSet};
pub use neighborhood::{neighborhood_radii, NeighborhoodProfile};
