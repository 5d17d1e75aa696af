//! Average Frobenius traces of fibrations over the projective line.
//!
//! A family is given by integer polynomial data ([`FamilyModel`]). For every
//! good prime the fibers over `P^1(F_p)` are counted exactly, singular fibers
//! are classified ([`kodaira`]) and the per-prime averages are stored as
//! exact rationals ([`PrimeTraceRecord`]). The [`estimator`] module turns a
//! stream of records into rank estimates, and [`shioda`] gives the exact
//! rank predicted from the singular fibers.

pub mod arith;
pub mod corpus;
pub mod error;
pub mod estimator;
pub mod family;
pub mod fibercount;
pub mod identities;
pub mod kodaira;
pub mod parse;
pub mod poly;
pub mod shioda;
pub mod tate;
pub mod traces;

pub use arith::PrimeCtx;
pub use error::{Error, Result};
pub use estimator::{FitBasis, NagaoSeries};
pub use family::{
    BadPrimeSet, BadReason, BasePoint, FamilyKind, FamilyModel, FamilyShape, ReducedFamily,
    Weierstrass,
};
pub use kodaira::{FiberClassifier, KodairaPlace, KodairaType, Mode, VerticalModuleTrace};
pub use poly::{BiPoly, IntPoly};
pub use shioda::ShiodaLedger;
pub use traces::{Convention, Exact, PrimeTraceRecord, TraceEngine};
