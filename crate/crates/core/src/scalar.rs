//! The number trait every tableau routine is written against.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::Num;

/// An ordered field element usable as a tableau entry.
///
/// [`crate::Rational`] is the exact choice and the one every golden test uses.
/// `f64` also satisfies the bound; comparisons are then taken literally with no
/// tolerance, which is only sensible for small well-scaled data.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }

    fn is_pos(&self) -> bool {
        *self > Self::zero()
    }

    /// Total order for ratio comparisons. Incomparable values (NaN) compare equal.
    fn order(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
}
