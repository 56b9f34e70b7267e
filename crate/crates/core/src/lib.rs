//! Arithmetic of imaginary quadratic orders, aimed at the torsion of CM
//! elliptic curves over number fields.
//!
//! The pieces fit together like this: `arith` supplies integer primitives
//! (Kronecker symbol, deterministic primality, factorization), `forms` counts
//! reduced binary quadratic forms to get class numbers, `fields` packages
//! field and order invariants, `rayclass` evaluates ray class group orders
//! for prime-power conductors, `curves` identifies CM curves through their
//! j-invariant and evaluates the Weber function, and `bounds` turns tables of
//! discriminants with small class number into explicit prime bounds indexed
//! by field degree.
//!
//! Everything here is exact integer or rational arithmetic; the only
//! floating-style computation is a fixed-point big-integer evaluation of the
//! j-function q-expansion in `qexp`, with enough precision that rounding to
//! the nearest integer is provably correct for the discriminants involved.

pub mod arith;
pub mod bounds;
pub mod curves;
pub mod error;
pub mod fields;
pub mod forms;
pub mod qexp;
pub mod rayclass;

pub use arith::FactoredInteger;
pub use bounds::{BoundResult, DiscriminantTable, MaxDiscTable, Witness};
pub use curves::{CmIdentification, CurvePoint, CurveReport, QuadExt, WeierstrassCurve};
pub use error::{Error, Result};
pub use fields::{QuadField, QuadOrder};
pub use forms::ReducedForm;
pub use rayclass::{RayClassReport, SplitType};
