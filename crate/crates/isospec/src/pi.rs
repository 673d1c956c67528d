//! Certified rational enclosures of `pi^2`.
//!
//! Machin's identity `pi = 16 atan(1/5) - 4 atan(1/239)` with alternating
//! partial sums gives rational brackets of `pi` whose width shrinks
//! geometrically in the number of terms. Squaring (both endpoints positive)
//! brackets `pi^2`. Comparisons of exact eigenvalues refine the bracket until
//! the sign is decided; termination is guaranteed because the quantities
//! compared are never equal to a rational multiple of `pi^2` unless they are
//! equal coefficient-wise, which is tested first.

use crate::rational::{rational_int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Alternating-series bracket of atan(1/x) using `terms` leading terms.
fn atan_inv_bounds(x: u32, terms: usize) -> (Rational, Rational) {
    assert!(x >= 2 && terms >= 1);
    let x = BigInt::from(x);
    let x_squared = &x * &x;
    let mut power = x.clone(); // x^(2k+1)
    let mut sum = Rational::zero();
    let mut last_term = Rational::zero();
    for k in 0..terms {
        let term = Rational::new(BigInt::one(), power.clone() * BigInt::from(2 * k as u64 + 1));
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        last_term = term;
        power *= &x_squared;
    }
    // The error after m terms has the sign of the next (alternating) term and
    // magnitude below the last included term.
    if terms.is_multiple_of(2) {
        (sum.clone(), sum + last_term)
    } else {
        (sum.clone() - last_term, sum)
    }
}

/// Bracket of `pi` with `terms` series terms per arctangent.
fn pi_bounds(terms: usize) -> (Rational, Rational) {
    let (a5_lo, a5_hi) = atan_inv_bounds(5, terms);
    let (a239_lo, a239_hi) = atan_inv_bounds(239, terms);
    let sixteen = rational_int(16);
    let four = rational_int(4);
    let lo = &sixteen * a5_lo - &four * a239_hi;
    let hi = &sixteen * a5_hi - &four * a239_lo;
    (lo, hi)
}

/// Bracket of `pi^2` with `terms` series terms per arctangent.
pub fn pi_squared_bounds(terms: usize) -> (Rational, Rational) {
    let (lo, hi) = pi_bounds(terms);
    debug_assert!(lo.is_positive());
    (&lo * &lo, &hi * &hi)
}

/// Sign of `plain + pi2 * 4pi^2`, decided by refining the `pi^2` bracket.
///
/// The represented real is zero only when both coefficients are zero, since
/// `pi^2` is irrational.
pub fn sign_of_linear_combination(plain: &Rational, pi2: &Rational) -> Ordering {
    if pi2.is_zero() {
        return plain.cmp(&Rational::zero());
    }
    if plain.is_zero() {
        return pi2.cmp(&Rational::zero());
    }
    if plain.is_positive() && pi2.is_positive() {
        return Ordering::Greater;
    }
    if plain.is_negative() && pi2.is_negative() {
        return Ordering::Less;
    }
    let four = rational_int(4);
    let mut terms = 4usize;
    loop {
        let (lo, hi) = pi_squared_bounds(terms);
        let value_lo;
        let value_hi;
        if pi2.is_positive() {
            value_lo = plain + pi2 * &four * &lo;
            value_hi = plain + pi2 * &four * &hi;
        } else {
            value_lo = plain + pi2 * &four * &hi;
            value_hi = plain + pi2 * &four * &lo;
        }
        if value_lo.is_positive() {
            return Ordering::Greater;
        }
        if value_hi.is_negative() {
            return Ordering::Less;
        }
        terms = terms
            .checked_mul(2)
            .expect("pi^2 refinement depth overflow");
        assert!(
            terms <= 1 << 20,
            "pi^2 bracket refinement failed to separate a nonzero combination"
        );
    }
}
