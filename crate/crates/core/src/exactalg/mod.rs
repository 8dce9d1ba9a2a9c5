//! Integer polynomials, the localized module ring and setup validation.

mod localized;
mod monomial;
mod poly;
mod setup;

pub use localized::{loc_normalize, LocalizedElement};
pub use monomial::{module_action, monomial_image, GroupElement, QMonomial};
pub use poly::{multiplicity, poly_resultant, IntPolynomial, RatPolynomial};
pub use setup::{factorize_u64, is_prime_u64, BlockData, Setup, SetupData, Violation};

use crate::error::Result;

/// Validates raw setup data, returning every violation on failure.
pub fn setup_validate(data: SetupData) -> Result<Setup> {
    Setup::validate(data)
}

/// Sum or product in the localized ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocOp {
    Add,
    Mul,
}

pub fn loc_arith(op: LocOp, a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
    match op {
        LocOp::Add => a.checked_add(b),
        LocOp::Mul => a.checked_mul(b),
    }
}
