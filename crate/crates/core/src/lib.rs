//! Equidistant superpositions of squeezed states produced by repeated
//! ion-laser pulses with conditional detection of the excited state.
//!
//! Two independent routes describe the same motional state:
//!
//! * [`gaussian`] and [`protocol`]: closed-form algebra on displaced squeezed
//!   vacua and the cosine-product expansion of a pulse schedule;
//! * [`fock`]: brute-force simulation on a truncated Fock space.
//!
//! [`observables`] evaluates position densities, Husimi Q functions, and
//! plateau flatness on grids; [`output`] serializes results.

pub mod error;
pub mod exec;
pub mod fock;
pub mod gaussian;
pub mod observables;
pub mod output;
pub mod protocol;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gaussian::{SqueezeParameter, SqueezedComponent, SuperpositionState};
pub use protocol::{dyadic_schedule, PulseSchedule};
