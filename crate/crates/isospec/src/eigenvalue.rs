//! Exact eigenvalues of the form `q0 + q1 * 4pi^2`.
//!
//! Flat spectra are rational multiples of `4pi^2`; sphere spectra with
//! rational squared radius are plain rationals; products mix the two. Since
//! `pi^2` is irrational, the representation of a value is unique, so equality
//! is coefficient-wise and the ordering of distinct values is decided by a
//! certified bracket of `pi^2`.

use crate::pi::sign_of_linear_combination;
use crate::rational::{format_rational, rational_int, Rational};
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EigenvalueError {
    #[error("eigenvalue {0} represents a negative real number")]
    Negative(String),
}

/// An exact nonnegative real of the form `plain + pi2 * 4pi^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Eigenvalue {
    plain: Rational,
    pi2: Rational,
}

impl Eigenvalue {
    /// Builds an eigenvalue, rejecting representations of negative reals.
    pub fn new(plain: Rational, pi2: Rational) -> Result<Self, EigenvalueError> {
        let candidate = Eigenvalue { plain, pi2 };
        match sign_of_linear_combination(&candidate.plain, &candidate.pi2) {
            Ordering::Less => Err(EigenvalueError::Negative(candidate.to_string())),
            _ => Ok(candidate),
        }
    }

    pub fn zero() -> Self {
        Eigenvalue {
            plain: Rational::zero(),
            pi2: Rational::zero(),
        }
    }

    /// A plain rational eigenvalue (no `4pi^2` part).
    pub fn from_plain(plain: Rational) -> Result<Self, EigenvalueError> {
        Self::new(plain, Rational::zero())
    }

    /// `q * 4pi^2` for rational `q >= 0`.
    pub fn from_pi2_multiple(pi2: Rational) -> Result<Self, EigenvalueError> {
        Self::new(Rational::zero(), pi2)
    }

    pub fn from_pi2_int(q: i64) -> Self {
        Self::from_pi2_multiple(rational_int(q)).expect("nonnegative integer multiple")
    }

    pub fn plain_part(&self) -> &Rational {
        &self.plain
    }

    pub fn pi2_part(&self) -> &Rational {
        &self.pi2
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.pi2.is_zero()
    }

    /// Exact sum; sums of nonnegative values stay nonnegative.
    pub fn add(&self, other: &Eigenvalue) -> Eigenvalue {
        Eigenvalue {
            plain: &self.plain + &other.plain,
            pi2: &self.pi2 + &other.pi2,
        }
    }

    /// Approximate numeric value for reports and plots only.
    pub fn to_f64(&self) -> f64 {
        use crate::rational::rational_to_f64;
        let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        rational_to_f64(&self.plain) + rational_to_f64(&self.pi2) * four_pi2
    }
}

/// Total order consistent with the represented real numbers.
impl Ord for Eigenvalue {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.plain == other.plain && self.pi2 == other.pi2 {
            return Ordering::Equal;
        }
        let plain = &self.plain - &other.plain;
        let pi2 = &self.pi2 - &other.pi2;
        sign_of_linear_combination(&plain, &pi2)
    }
}

impl PartialOrd for Eigenvalue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi2.is_zero() {
            write!(f, "{}", format_rational(&self.plain))
        } else if self.plain.is_zero() {
            write!(f, "{}*4pi^2", format_rational(&self.pi2))
        } else {
            write!(
                f,
                "{} + {}*4pi^2",
                format_rational(&self.plain),
                format_rational(&self.pi2)
            )
        }
    }
}

impl fmt::Debug for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    #[test]
    fn pi2_unit_exceeds_39() {
        // 4pi^2 = 39.478... so the pure pi^2 unit is greater than plain 39.
        let a = Eigenvalue::from_pi2_int(1);
        let b = Eigenvalue::from_plain(rational_int(39)).unwrap();
        assert_eq!(a.cmp(&b), Ordering::Greater);
        assert_eq!(b.cmp(&a), Ordering::Less);
    }

    #[test]
    fn equal_coefficients_compare_equal() {
        let a = Eigenvalue::from_plain(rational_int(5)).unwrap();
        let b = Eigenvalue::from_plain(rational_int(5)).unwrap();
        assert_eq!(a.cmp(&b), Ordering::Equal);
        assert_eq!(a, b);
    }

    #[test]
    fn same_pi2_unit_reduces_to_rational_compare() {
        let quarter = Eigenvalue::from_pi2_multiple(rational(1, 4)).unwrap();
        let one = Eigenvalue::from_pi2_int(1);
        assert_eq!(quarter.cmp(&one), Ordering::Less);
    }

    #[test]
    fn negative_values_are_rejected() {
        assert!(Eigenvalue::from_plain(rational_int(-1)).is_err());
        assert!(Eigenvalue::new(rational_int(-40), rational_int(1)).is_err());
        // -39 + 4pi^2 is positive.
        assert!(Eigenvalue::new(rational_int(-39), rational_int(1)).is_ok());
    }

    #[test]
    fn addition_is_coefficient_wise() {
        let a = Eigenvalue::new(rational_int(2), rational(1, 2)).unwrap();
        let b = Eigenvalue::new(rational_int(3), rational(1, 2)).unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.plain_part(), &rational_int(5));
        assert_eq!(sum.pi2_part(), &rational_int(1));
    }
}
