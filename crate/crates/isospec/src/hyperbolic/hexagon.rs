//! Right-angled hexagon trigonometry.
//!
//! A right-angled hyperbolic hexagon is determined by three alternating side
//! lengths. With consecutive sides `(a, x, b, y, c, z)`, each alternating
//! triple satisfies `cosh c = sinh a sinh b cosh x - cosh a cosh b`, where
//! `x` is the side between `a` and `b` (opposite `c`).

use thiserror::Error;

/// Residual tolerance for the defining hexagon identities.
pub const HEXAGON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum HexagonError {
    #[error("hexagon side lengths must be positive, got {0}")]
    NonPositiveSide(f64),
}

/// Right-angled hexagon with sides in cyclic order.
///
/// The layout used throughout: even indices are the prescribed alternating
/// sides `(a0, a2, a4)`, odd indices the derived opposite sides, with side
/// `2i+1` lying between `a_{2i}` and `a_{2i+2}` (opposite `a_{2i+4}`).
#[derive(Debug, Clone, PartialEq)]
pub struct Hexagon {
    pub sides: [f64; 6],
}

impl Hexagon {
    /// Largest absolute residual of the three defining identities.
    pub fn max_identity_residual(&self) -> f64 {
        let s = &self.sides;
        let mut worst = 0.0f64;
        for i in 0..3 {
            let a = s[(2 * i) % 6];
            let between = s[(2 * i + 1) % 6];
            let b = s[(2 * i + 2) % 6];
            let opposite = s[(2 * i + 4) % 6];
            let residual =
                (a.sinh() * b.sinh() * between.cosh() - a.cosh() * b.cosh() - opposite.cosh())
                    .abs();
            worst = worst.max(residual);
        }
        worst
    }
}

/// The unique right-angled hexagon with alternating sides `(alpha, alpha,
/// gamma)`: two pant-leg half-cuffs and a half-waist.
///
/// Opposite sides come from `cosh x = (cosh a cosh b + cosh c) / (sinh a
/// sinh b)` applied to each alternating triple, where `x` is the side
/// between `a` and `b` and `c` the remaining one.
pub fn solve_hexagon(alpha: f64, gamma: f64) -> Result<Hexagon, HexagonError> {
    for side in [alpha, gamma] {
        if !(side > 0.0) {
            return Err(HexagonError::NonPositiveSide(side));
        }
    }
    let opposite = |a: f64, b: f64, c: f64| -> f64 {
        ((a.cosh() * b.cosh() + c.cosh()) / (a.sinh() * b.sinh())).acosh()
    };
    // Alternating sides (s0, s2, s4) = (alpha, alpha, gamma); derived side
    // s1 sits between s0 and s2 (opposite gamma), etc.
    let between_legs = opposite(alpha, alpha, gamma);
    let between_leg_and_waist = opposite(alpha, gamma, alpha);
    Ok(Hexagon {
        sides: [
            alpha,
            between_legs,
            alpha,
            between_leg_and_waist,
            gamma,
            between_leg_and_waist,
        ],
    })
}
