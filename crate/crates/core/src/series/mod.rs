//! Function-field generating series over `Lambda_sharp`.
//!
//! All arithmetic is exact. Unknown `Eis'` coefficients are modelled as
//! formal symbols so that the two Eisenstein formulas can be compared as a
//! polynomial identity.

pub mod constant_term;
pub mod curve;
pub mod eisenstein;
pub mod formal;

pub use constant_term::{constant_term, sym_power_complex, ConstantTerm, IhKind, IhPart};
pub use curve::{CurveDatum, LocalFactor, LocalSystemSpec};
pub use eisenstein::{eis_product_form, eis_sum_form, l_series};
pub use formal::{Coefficient, FormalSeries, Placeholders};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Canonical `"a/b"` form (`"a"` for integers).
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(a, b))
            }
        }
    }
}

pub fn q_pow(q: i64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), k as usize)
}
