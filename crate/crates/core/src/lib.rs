//! Symbolic jet-bundle toolkit: expressions, total derivatives, matrix Lie
//! representations, standard and twisted prolongations, gauge sections and
//! μ-symmetry checks.
//!
//! The modules build on each other bottom-up:
//! [`expr`] → [`jet`] → [`matlie`] → [`prolong`] → [`gauge`] → [`musym`].

pub mod error;
pub mod expr;
pub mod gauge;
pub mod jet;
pub mod matlie;
pub mod musym;
pub mod prolong;
pub mod random;

pub use error::{Error, Result};
pub use expr::oracle::{Oracle, OracleConfig, SampleDomain, Interval, Verdict, Witness};
pub use expr::{Expr, Func, Symbol, CoordKind};
pub use jet::{JetContext, MultiIndex};
pub use matlie::{Family, LieRepresentation, MatrixExpr};
