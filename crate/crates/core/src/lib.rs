//! Exact symbolic computation in quantum nilpotent algebras.
//!
//! The objects here are iterated skew polynomial towers over the rational
//! function field Q(q) whose automorphisms are diagonal, whose derivations
//! are locally nilpotent, and which carry a torus action tying the two
//! together (CGL extensions). Everything is exact: coefficients are
//! rational functions with big-integer coefficients, and every claimed
//! identity is verified by computing both sides.
//!
//! The main entry points:
//!
//! - [`presentation::CGLPresentation`] holds a tower presentation;
//!   [`registry::builtin`] ships ready-made examples.
//! - [`ore::engine::Ctx`] multiplies, rewrites, and localizes elements.
//! - [`cauchon`] implements the deleting-derivations map and the stepwise
//!   reduction of a tower to a quantum affine space.
//! - [`normal`] constructs and certifies normal elements and the inner
//!   derivations they induce.
//! - [`spectra`] enumerates torus-invariant prime spectra of quantum
//!   affine spaces and checks height, catenarity, and normal separation.
//! - [`grfilt`] finds filtrations whose associated graded algebra drops
//!   the derivations, and measures growth.

pub mod cauchon;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod grfilt;
mod lex;
pub mod linalg;
pub mod normal;
pub mod ore;
pub mod presentation;
pub mod qcalc;
pub mod registry;
pub mod report;
pub mod sample;
pub mod spectra;

pub mod cli;

pub use coeff::{parse_coeff, CoeffRat};
pub use error::{Error, Result};
pub use expr::parse_element;
pub use ore::engine::Ctx;
pub use ore::{Element, LaurentElement, Mono, RawElement};
pub use presentation::CGLPresentation;
pub use report::Report;
