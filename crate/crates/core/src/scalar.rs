use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Exact commutative ring elements usable as matrix entries.
pub trait Scalar: Num + Clone + Neg<Output = Self> + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + Debug + Display + Send + Sync + 'static {}

/// Scalars where every nonzero element is invertible.
///
/// Implemented for exact rational types only; floating point types are
/// deliberately left out.
pub trait Field: Scalar {}

impl<T> Field for Ratio<T> where T: Integer + Signed + Clone + Debug + Display + Send + Sync + 'static {}
