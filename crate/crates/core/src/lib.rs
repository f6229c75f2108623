//! Exact and numeric verification that the Bergman metric of a nontrivial
//! cyclic ball quotient `B^n/Γ` fails the Kähler–Einstein equation.
//!
//! * [`group`] validates diagonal cyclic actions and predicts the lowest
//!   term of the residual.
//! * [`exactnum`] and [`series`] supply the exact arithmetic: big rationals,
//!   the cyclotomic field `Q(ε)` and truncated power series over both.
//! * [`kernel`] builds the diagonal Monge–Ampère identity as a series
//!   identity and extracts its residual.
//! * [`lemmas`] checks the binomial inequalities that rule out cancellation.
//! * [`numeric`] evaluates the Monge–Ampère defect in double precision off
//!   the slice.
//!
//! The crate is `no_std` (with `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod exactnum;
pub mod group;
pub mod kernel;
pub mod lemmas;
pub mod numeric;
pub mod series;

pub use exactnum::Rational;
pub use group::{classify_case, enumerate_specs, validate_spec, CasePrediction, CaseTag, GroupSpec, SpecError};
pub use kernel::{ke_residual, KernelError, ResidualReport, TruncationOrder};
