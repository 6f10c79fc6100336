//! Independent checks: an oracle for pi, digit agreement, observed
//! convergence order, and the identity suite.

mod digits;
mod identities;
mod oracle;

pub use digits::{
    convergence_orders, convergence_orders_above, convergence_table, correct_digits,
    precision_floor, ConvergenceRecord, ConvergenceRow,
};
pub use identities::{
    check_identities, check_identities_with, CheckOptions, Fault, IdentityReport, IdentityRow,
};
pub use oracle::machin_pi;
