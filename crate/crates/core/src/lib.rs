//! Linear and quadratic Lipschitz bounds for twice continuously differentiable
//! functions.
//!
//! Given two-sided bounds on the first partials ([`LipschitzBox`]) or on the
//! second partials ([`CurvatureBox`]) over a region, the [`bounds`] kernel brackets
//! `f(b) - f(a)` for any segment in that region. On top of it sit:
//!
//! - [`estimation`]: empirical constants from grids, segments and finite differences,
//! - [`solver`]: range enclosure over a box and a branch-and-bound minimizer,
//! - [`corpus`]: reference functions with closed-form derivative oracles,
//! - [`verify`]: the harness that checks every bound against the true change.

pub mod bounds;
pub mod corpus;
pub mod domain;
pub mod error;
pub mod estimation;
pub mod expr;
pub mod solver;
pub mod verify;

pub use bounds::{BoundInputs, BoundVariant, Form, Locality, Order, Side};
pub use domain::{BoxDomain, CurvatureBox, FunctionModel, LipschitzBox, Point, Segment, SquareMatrix};
pub use error::{Error, Result};
pub use estimation::EstimationConfig;
pub use solver::{BnBResult, BnbConfig, Enclosure, SolverConstants};
pub use verify::{BoundReport, ConstantSource};
