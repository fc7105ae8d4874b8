//! Interval reachability for high-dimensional nonlinear systems.
//!
//! Three methods over-approximate (or, for Monte Carlo, probabilistically
//! approximate) the set of states reachable from a box of initial states under
//! a box of constant inputs:
//!
//! * [`reach::growth_bound`] integrates a center trajectory and a radius under
//!   growth dynamics;
//! * [`reach::mixed_monotonicity`] integrates the doubled embedding system;
//! * [`reach::monte_carlo`] takes the hull of sampled trajectories.
//!
//! All three run on [`rk4::Rk4Engine`], a fixed-step classical Runge-Kutta
//! integrator that splits each stage across worker threads by state index.
//! Results do not depend on the worker count.
//!
//! ```
//! use interval_reach::{models, IntervalVector, ReachProblem, reach};
//!
//! let model = models::make_vdp(1.0).unwrap();
//! let initial = IntervalVector::new(vec![1.25, 2.35], vec![1.55, 2.45]).unwrap();
//! let problem = ReachProblem::new(model, initial, IntervalVector::empty_dims(), 0.0, 0.5, 0.01).unwrap();
//! let tube = reach::growth_bound(&problem, 2).unwrap();
//! assert_eq!(tube.final_time(), 0.5);
//! ```

pub mod config;
pub mod error;
pub mod interval;
pub mod models;
pub mod reach;
pub mod rk4;
pub mod runner;
pub mod system;

pub use config::{parse_config, OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use interval::{IntervalVector, PointSet};
pub use reach::{
    coverage_estimate, growth_bound, mixed_monotonicity, monte_carlo, run_method, sample_count, Method, MonteCarloSpec,
    ReachProblem, ReachTube, RunReport,
};
pub use rk4::{IntegrationJob, Rk4Engine, TimeGrid, Trajectory};
pub use system::{DenseGrowth, Dynamics, Decomposition, SamplingDomain, SystemModel};
