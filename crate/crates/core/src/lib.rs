//! Natural Kähler–Einstein structures on the cotangent bundle of a space
//! form, built component-wise in an adapted frame and checked against
//! independent numerical oracles.
//!
//! Everything geometric is generic over [`scalar::Scalar`]: evaluating with
//! nested dual numbers gives exact frame derivatives of any order needed.

pub mod connection;
pub mod cotangent;
pub mod error;
pub mod jet;
pub mod kaehler;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod space_form;
pub mod tensor;

pub use cotangent::CotangentPoint;
pub use error::{GeometryError, Result};
pub use kaehler::{LiftParameters, VMode};
pub use report::{run_verification, RunConfig, VerificationReport};
pub use space_form::SpaceFormModel;
pub use tensor::{FrameKind, FrameTensor};
