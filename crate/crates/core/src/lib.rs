pub mod analysis;
pub mod bisection;
pub mod caps;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod f2;
pub mod groupoid;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod steinberg;
pub mod verify;

pub use caps::Caps;
pub use bisection::{Bisection, FullBisection, FullGroup};
pub use error::{Error, ParseError, Result};
pub use groupoid::{ArrowId, FiniteGroupoid};
pub use scalar::{Rational, Scalar};

/// Version of every JSON document emitted by the library and CLI.
pub const SCHEMA_VERSION: u32 = 1;
