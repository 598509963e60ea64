//! Exact integer scalars.
//!
//! All divisor arithmetic is generic over [`Scalar`]. `i64` is the fast path
//! used by the exhaustive verification suites; `BigInt` is arbitrary
//! precision and backs the command-line tool.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Signed
    + Integer
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every scalar type holds i64")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Signed
        + Integer
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}
