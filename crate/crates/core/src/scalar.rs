//! Scalar traits for lattice coordinates and exact time positions.
//!
//! Every coordinate in the toolkit is an exact machine integer. Arithmetic
//! that could leave the representable range goes through the checked
//! operations of [`num_traits::PrimInt`], so an overflow is never silently
//! wrapped. Real-homotopy time positions are exact rationals over any
//! [`TimeInt`], including arbitrary-precision [`num_bigint::BigInt`].

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{PrimInt, Signed};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Integer type usable as a lattice coordinate.
pub trait Coord:
    PrimInt + Signed + Hash + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// `a + 1` if representable.
    fn succ(self) -> Option<Self> {
        self.checked_add(&Self::one())
    }

    /// `a - 1` if representable.
    fn pred(self) -> Option<Self> {
        self.checked_sub(&Self::one())
    }

    /// True iff `|a - b| <= 1`, computed without overflow.
    fn within_one(self, other: Self) -> bool {
        self == other || self.succ() == Some(other) || other.succ() == Some(self)
    }

    /// Converts a small test or CLI value; `None` if it does not fit.
    fn from_i64(v: i64) -> Option<Self> {
        <Self as num_traits::NumCast>::from(v)
    }
}

impl Coord for i8 {}
impl Coord for i16 {}
impl Coord for i32 {}
impl Coord for i64 {}
impl Coord for i128 {}

/// Integer type underlying an exact rational time position.
pub trait TimeInt:
    Integer + Signed + Clone + Hash + Debug + Display + FromStr + From<i64> + Send + Sync + 'static
{
}

impl TimeInt for i64 {}
impl TimeInt for i128 {}
impl TimeInt for num_bigint::BigInt {}

/// Exact time position in `[0, 1]`.
pub type Time<I> = Ratio<I>;

/// Formats a rational as `"num/den"` (always with an explicit denominator).
pub fn format_time<I: TimeInt>(t: &Time<I>) -> String {
    format!("{}/{}", t.numer(), t.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_time<I: TimeInt>(s: &str) -> Option<Time<I>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = I::from_str(n.trim()).ok()?;
            let d = I::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => Some(Ratio::from_integer(I::from_str(s).ok()?)),
    }
}
