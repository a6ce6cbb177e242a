//! Lindblad master equations in superspace.
//!
//! Build a [`LindbladModel`] on a composite [`SpaceLayout`], assemble its
//! Liouvillian, and then
//!
//! * find the steady state by full diagonalization, shift-invert Arnoldi, or
//!   a row-replaced linear solve ([`steady`]),
//! * propagate states with `exp(L t)` ([`dynamics`]),
//! * reduce, partially transpose and measure them ([`hilbert`], [`measures`]).
//!
//! Models can also be written as text files ([`modelspec`]) and driven from
//! the `meq` command-line tool.
//!
//! ```
//! use meq::hilbert::{transition, Operator, SpaceLayout};
//! use meq::superspace::{build_liouvillian, LindbladModel};
//! use meq::steady::steady_linsolve;
//!
//! let layout = SpaceLayout::single("q", 2)?;
//! let decay = Operator::new(layout.clone(), transition(2, 1, 2)?)?;
//! let model = LindbladModel::new(Operator::zeros(&layout), vec![(1.0, decay)])?;
//! let rho = steady_linsolve(&build_liouvillian(&model)?, 1, 1.0)?.rho;
//! assert!((rho.get(0, 0).re - 1.0).abs() < 1e-12);
//! # Ok::<(), meq::MeqError>(())
//! ```

pub mod cli;
pub mod dynamics;
mod error;
pub mod hilbert;
pub mod linalg;
pub mod measures;
pub mod modelspec;
pub mod steady;
pub mod superspace;

pub use error::{MeqError, Result};
pub use faer::c64;
pub use hilbert::{Operator, SpaceLayout};
pub use superspace::{LindbladModel, SuperOperator};
