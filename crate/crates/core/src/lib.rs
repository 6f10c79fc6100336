//! Arbitrary-precision computation of pi by the arithmetic-geometric mean
//! and the Borwein family of quadratic, cubic and quartic iterations.
//!
//! * [`apnum`]: precision contexts and correctly rounded binary floats.
//! * [`agm`]: the Gauss AGM, its weighted square-difference sum, the
//!   Salamin–Brent estimator and the sequence it induces.
//! * [`borwein`]: uniform init/step drivers for the iterations that
//!   converge to `1/pi`, plus the cubic and quartic mean iterations.
//! * [`verify`]: a Machin-formula oracle, digit counting, order
//!   estimation and the numerical identity suite.
//! * [`driver`]: runs any algorithm until successive estimates agree.

pub mod agm;
pub mod apnum;
pub mod borwein;
pub mod driver;
mod error;
pub mod verify;

pub use error::{Error, Result};
