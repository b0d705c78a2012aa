//! Filippov solutions of ODEs with discontinuous right-hand sides, and
//! sampling-based verification of nonsmooth LaSalle-Yoshizawa conditions.
//!
//! The building blocks are:
//! - [`expr`]: smooth scalar expressions with exact derivatives,
//! - [`field`]: piecewise-smooth vector fields and the Filippov map `K[f]`,
//! - [`lyapunov`]: Clarke gradients, regularity and the set-valued derivative,
//! - [`simulate`]: event-driven integration with sliding modes and convergence diagnostics,
//! - [`certify`]: hypothesis checks producing [`certify::Certificate`]s,
//! - [`scenario`] and [`run`]: the text scenario format and the CLI pipeline.

pub mod certify;
pub mod convex;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod lyapunov;
pub mod output;
pub mod run;
pub mod scenario;
pub mod simulate;

pub use convex::ConvexSet;
pub use expr::{parse, Expression, Params, Symbol};
pub use field::{ModelError, PiecewiseField, RegionKey, Side, SwitchingSurface};
pub use lyapunov::{ComparisonTriple, PiecewiseScalar};
pub use certify::{check_corollary1, check_corollary2, Certificate, DomainSpec, Tolerances};
pub use run::{run, ExitStatus, RunReport};
pub use scenario::{load_scenario, Mode, Scenario};
pub use simulate::{integrate, IntegratorConfig, Trajectory};
