//! Heat-trace expansion data: volume terms, the boundary coefficient, and
//! truncated heat traces.
//!
//! For a closed n-manifold the leading small-time coefficient is a constant
//! times the volume; with boundary, the half-power coefficient is
//! `c(p) vol(boundary)` with `c(p) = C(n-1, p) - C(n-1, p-1)`, which vanishes
//! exactly in the middle degree of an even-dimensional space. Zero-spectrum
//! comparisons distinguish the spaces that middle-degree spectra cannot.

use crate::eigenvalue::Eigenvalue;
use crate::flat::{
    fixed_set, quotient_p_spectrum, torus_p_spectrum, FlatError, FlatQuotient, Parity,
};
use crate::rational::{binomial, rational, rational_to_f64, Rational};
use crate::segment::{compare_segments, ComparisonOutcome, SegmentError, SpectrumSegment};
use crate::sphere::{QuotientKind, SphereError, SphericalQuotient};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeatError {
    #[error("degree {p} out of range for dimension {n}")]
    BadDegree { p: usize, n: usize },
    #[error("heat trace time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("space has no computable volume data here")]
    UnsupportedSpace,
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// Boundary coefficient `c(p) = C(n-1, p) - C(n-1, p-1)`.
///
/// Zero exactly when `n = 2p`: the middle degree of an even-dimensional
/// manifold is blind to the boundary volume.
pub fn c_coefficient(n: usize, p: usize) -> Result<BigInt, HeatError> {
    if p > n {
        return Err(HeatError::BadDegree { p, n });
    }
    let first = binomial(n - 1, p);
    let second = if p == 0 {
        BigInt::zero()
    } else {
        binomial(n - 1, p - 1)
    };
    Ok(first - second)
}

/// Exact volume of the form `coeff * pi^pi_power * sqrt(radicand)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicVolume {
    pub coeff: Rational,
    pub pi_power: usize,
    pub radicand: Rational,
}

impl SymbolicVolume {
    pub fn rational(coeff: Rational) -> Self {
        SymbolicVolume {
            coeff,
            pi_power: 0,
            radicand: Rational::one(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        SymbolicVolume {
            coeff: &self.coeff * factor,
            pi_power: self.pi_power,
            radicand: self.radicand.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        rational_to_f64(&self.coeff)
            * std::f64::consts::PI.powi(self.pi_power as i32)
            * rational_to_f64(&self.radicand).sqrt()
    }
}

impl std::fmt::Display for SymbolicVolume {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::rational::format_rational;
        write!(f, "{}", format_rational(&self.coeff))?;
        if self.pi_power == 1 {
            write!(f, " * pi")?;
        } else if self.pi_power > 1 {
            write!(f, " * pi^{}", self.pi_power)?;
        }
        if !self.radicand.is_one() {
            write!(f, " * sqrt({})", format_rational(&self.radicand))?;
        }
        Ok(())
    }
}

/// Leading heat-expansion data of one space at one form degree.
#[derive(Debug, Clone)]
pub struct HeatCoefficients {
    pub dimension: usize,
    pub degree: usize,
    /// `a_0 = C(n, p) * vol`.
    pub a0: SymbolicVolume,
    pub volume: SymbolicVolume,
    /// Volume of the boundary (reflection quotients only).
    pub boundary_volume: Option<SymbolicVolume>,
    /// The half-power boundary coefficient `c(p)`.
    pub c_coefficient: BigInt,
}

/// A space the heat module can take volumes of.
pub enum HeatSpace<'a> {
    Flat(&'a FlatQuotient),
    Sphere(&'a SphericalQuotient),
}

/// Volume term of the heat expansion: exact volume (quotients halve it) and
/// the degree-p constants.
pub fn volume_term(space: &HeatSpace<'_>, p: usize) -> Result<HeatCoefficients, HeatError> {
    match space {
        HeatSpace::Flat(quotient) => {
            let n = quotient.lattice().rank();
            if p > n {
                return Err(HeatError::BadDegree { p, n });
            }
            let torus_volume = SymbolicVolume {
                coeff: Rational::one(),
                pi_power: 0,
                radicand: quotient.lattice().det_gram(),
            };
            let (volume, boundary_volume) = match quotient.involution() {
                None => (torus_volume, None),
                Some(_) => {
                    let halved = torus_volume.scale(&rational(1, 2));
                    let summary = fixed_set(quotient)?;
                    let boundary = if summary.dimension == n as i64 - 1 {
                        summary.component_volume_squared.map(|radicand| SymbolicVolume {
                            coeff: Rational::from_integer(BigInt::from(summary.component_count)),
                            pi_power: 0,
                            radicand,
                        })
                    } else {
                        None
                    };
                    (halved, boundary)
                }
            };
            let a0 = volume.scale(&Rational::from_integer(binomial(n, p)));
            Ok(HeatCoefficients {
                dimension: n,
                degree: p,
                a0,
                volume,
                boundary_volume,
                c_coefficient: c_coefficient(n, p)?,
            })
        }
        HeatSpace::Sphere(quotient) => {
            let n = quotient.sphere().dim();
            if p > n {
                return Err(HeatError::BadDegree { p, n });
            }
            let full = sphere_volume(n, quotient.sphere().radius_squared());
            let (volume, boundary_volume) = match quotient.involution() {
                None => (full, None),
                Some(_) => {
                    let halved = full.scale(&rational(1, 2));
                    let boundary = match quotient.kind() {
                        QuotientKind::Hemisphere => Some(sphere_volume(
                            n - 1,
                            quotient.sphere().radius_squared(),
                        )),
                        _ => None,
                    };
                    (halved, boundary)
                }
            };
            let a0 = volume.scale(&Rational::from_integer(binomial(n, p)));
            Ok(HeatCoefficients {
                dimension: n,
                degree: p,
                a0,
                volume,
                boundary_volume,
                c_coefficient: c_coefficient(n, p)?,
            })
        }
    }
}

/// Volume of the round n-sphere of squared radius `rho`:
/// even n = 2m: `2 * 4^m * m! / (2m)! * pi^m * rho^m`;
/// odd n = 2m+1: `2 / m! * pi^(m+1) * rho^m * sqrt(rho)`.
fn sphere_volume(n: usize, rho: &Rational) -> SymbolicVolume {
    let m = n / 2;
    let mut rho_power = Rational::one();
    for _ in 0..m {
        rho_power *= rho;
    }
    if n.is_multiple_of(2) {
        let mut coeff = Rational::from_integer(BigInt::from(2));
        for _ in 0..m {
            coeff *= Rational::from_integer(BigInt::from(4));
        }
        let mut m_fact = BigInt::one();
        for v in 1..=m {
            m_fact *= BigInt::from(v);
        }
        let mut two_m_fact = BigInt::one();
        for v in 1..=(2 * m) {
            two_m_fact *= BigInt::from(v);
        }
        coeff *= Rational::new(m_fact, two_m_fact);
        SymbolicVolume {
            coeff: coeff * rho_power,
            pi_power: m,
            radicand: Rational::one(),
        }
    } else {
        let mut m_fact = BigInt::one();
        for v in 1..=m {
            m_fact *= BigInt::from(v);
        }
        SymbolicVolume {
            coeff: Rational::new(BigInt::from(2), m_fact) * rho_power,
            pi_power: m + 1,
            radicand: rho.clone(),
        }
    }
}

/// Partial heat trace of a spectrum segment at time `t`, with a note that
/// the true trace exceeds the partial sum.
pub fn truncated_heat_trace(
    segment: &SpectrumSegment,
    t: f64,
) -> Result<(f64, String), HeatError> {
    if !(t > 0.0) {
        return Err(HeatError::NonPositiveTime(t));
    }
    let value = segment
        .entries()
        .iter()
        .map(|(eigenvalue, mult)| *mult as f64 * (-eigenvalue.to_f64() * t).exp())
        .sum();
    let note = format!(
        "partial sum over eigenvalues <= {}; the full trace exceeds it",
        segment.cutoff()
    );
    Ok((value, note))
}

/// Degree-0 spectrum of a flat descriptor: the torus spectrum, or the
/// invariant spectrum of the quotient.
pub fn flat_zero_spectrum(
    space: &FlatQuotient,
    cutoff: &Eigenvalue,
) -> Result<SpectrumSegment, FlatError> {
    match space.involution() {
        None => torus_p_spectrum(space.lattice(), 0, cutoff),
        Some(_) => quotient_p_spectrum(space, 0, cutoff, Parity::Invariant),
    }
}

/// Compares the 0-spectra of two flat descriptors, zero included.
pub fn zero_spectrum_first_difference(
    left: &FlatQuotient,
    right: &FlatQuotient,
    cutoff: &Eigenvalue,
) -> Result<ComparisonOutcome, HeatError> {
    let a = flat_zero_spectrum(left, cutoff)?;
    let b = flat_zero_spectrum(right, cutoff)?;
    Ok(compare_segments(&a, &b, false)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flat::{AffineInvolution, Lattice};
    use crate::rational::rational_int;
    use crate::sphere::{DiagonalInvolution, RoundSphere};

    fn unit_square_quotient(rows: &[Vec<i64>], b: &[Rational], label: &str) -> FlatQuotient {
        let lattice = Lattice::cubic(2);
        let tau = AffineInvolution::from_i64(rows, b, &lattice).unwrap();
        FlatQuotient::quotient(lattice, tau, label)
    }

    fn cylinder() -> FlatQuotient {
        unit_square_quotient(
            &[vec![1, 0], vec![0, -1]],
            &[Rational::zero(), Rational::zero()],
            "cylinder",
        )
    }

    fn klein() -> FlatQuotient {
        unit_square_quotient(
            &[vec![1, 0], vec![0, -1]],
            &[rational(1, 2), Rational::zero()],
            "klein bottle",
        )
    }

    fn moebius() -> FlatQuotient {
        unit_square_quotient(
            &[vec![0, 1], vec![1, 0]],
            &[Rational::zero(), Rational::zero()],
            "moebius strip",
        )
    }

    fn pillow() -> FlatQuotient {
        unit_square_quotient(
            &[vec![-1, 0], vec![0, -1]],
            &[Rational::zero(), Rational::zero()],
            "four pillow",
        )
    }

    #[test]
    fn boundary_coefficient_examples() {
        assert_eq!(c_coefficient(2, 1).unwrap(), BigInt::zero());
        assert_eq!(c_coefficient(3, 0).unwrap(), BigInt::one());
        for m in 1..=50usize {
            assert_eq!(c_coefficient(2 * m, m).unwrap(), BigInt::zero(), "m = {m}");
        }
        for n in 1..=100usize {
            for p in 0..=n {
                if n != 2 * p {
                    assert!(
                        !c_coefficient(n, p).unwrap().is_zero(),
                        "c({p}, {n}) unexpectedly zero"
                    );
                }
            }
        }
    }

    #[test]
    fn alternating_sum_of_boundary_coefficients_telescopes() {
        for n in 2..=30usize {
            let mut sum = BigInt::zero();
            for p in 0..=n {
                let c = c_coefficient(n, p).unwrap();
                if p % 2 == 0 {
                    sum += c;
                } else {
                    sum -= c;
                }
            }
            assert!(sum.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn flat_volumes() {
        let torus = FlatQuotient::torus(Lattice::cubic(2), "unit torus");
        let term = volume_term(&HeatSpace::Flat(&torus), 0).unwrap();
        assert_eq!(term.volume, SymbolicVolume::rational(Rational::one()));
        assert_eq!(term.a0, SymbolicVolume::rational(Rational::one()));

        let term = volume_term(&HeatSpace::Flat(&pillow()), 0).unwrap();
        assert_eq!(term.volume, SymbolicVolume::rational(rational(1, 2)));
        assert!(term.boundary_volume.is_none());

        let term = volume_term(&HeatSpace::Flat(&cylinder()), 1).unwrap();
        assert_eq!(term.volume, SymbolicVolume::rational(rational(1, 2)));
        let boundary = term.boundary_volume.unwrap();
        assert_eq!(boundary.coeff, rational_int(2));
        assert_eq!(boundary.radicand, Rational::one());
        assert_eq!(term.c_coefficient, BigInt::zero());
    }

    #[test]
    fn sphere_volumes() {
        let s2 = SphericalQuotient::sphere_only(RoundSphere::unit(2), "S^2");
        let term = volume_term(&HeatSpace::Sphere(&s2), 0).unwrap();
        // vol(S^2) = 4 pi.
        assert_eq!(term.volume.coeff, rational_int(4));
        assert_eq!(term.volume.pi_power, 1);

        let hemisphere = SphericalQuotient::quotient(
            RoundSphere::unit(2),
            DiagonalInvolution::equatorial(3),
            "hemisphere",
        )
        .unwrap();
        let term = volume_term(&HeatSpace::Sphere(&hemisphere), 1).unwrap();
        assert_eq!(term.volume.coeff, rational_int(2));
        // Boundary is the unit circle, 2 pi.
        let boundary = term.boundary_volume.unwrap();
        assert_eq!(boundary.coeff, rational_int(2));
        assert_eq!(boundary.pi_power, 1);
        assert_eq!(term.c_coefficient, BigInt::zero());
    }

    #[test]
    fn truncated_trace_basics() {
        let cutoff = Eigenvalue::from_pi2_int(50);
        let empty = SpectrumSegment::new(vec![], cutoff.clone(), 0, "empty").unwrap();
        assert_eq!(truncated_heat_trace(&empty, 1.0).unwrap().0, 0.0);

        let single =
            SpectrumSegment::new(vec![(Eigenvalue::zero(), 1)], cutoff.clone(), 0, "point")
                .unwrap();
        assert_eq!(truncated_heat_trace(&single, 3.5).unwrap().0, 1.0);

        let torus = torus_p_spectrum(&Lattice::cubic(2), 0, &cutoff).unwrap();
        let (value, note) = truncated_heat_trace(&torus, 1.0).unwrap();
        // 1 + 4 exp(-4 pi^2) + ... stays within a hair of 1.
        assert!(value >= 1.0 && value < 1.0 + 1e-12, "value = {value}");
        assert!(note.contains("partial sum"));
        assert!(truncated_heat_trace(&torus, 0.0).is_err());
        assert!(truncated_heat_trace(&torus, -1.0).is_err());
    }

    #[test]
    fn truncated_trace_is_monotone_and_bounded() {
        let cutoff = Eigenvalue::from_pi2_int(20);
        let torus = torus_p_spectrum(&Lattice::cubic(2), 0, &cutoff).unwrap();
        let total = torus.total_multiplicity() as f64;
        let mut previous = f64::INFINITY;
        for t in [0.001, 0.01, 0.1, 1.0, 10.0] {
            let (value, _) = truncated_heat_trace(&torus, t).unwrap();
            assert!(value <= total);
            assert!(value <= previous);
            previous = value;
        }
    }

    #[test]
    fn zero_spectrum_differences_among_the_flat_quartet() {
        let cutoff = Eigenvalue::from_pi2_int(2);
        // Cylinder vs Klein bottle: first difference at 4pi^2, 3 vs 1.
        let outcome = zero_spectrum_first_difference(&cylinder(), &klein(), &cutoff).unwrap();
        assert_eq!(
            outcome,
            ComparisonOutcome::FirstDifference {
                at: Eigenvalue::from_pi2_int(1),
                mult_left: 3,
                mult_right: 1,
            }
        );
        // Moebius vs pillow agree at 4pi^2 (both 2) and split at 2*4pi^2.
        let outcome = zero_spectrum_first_difference(&moebius(), &pillow(), &cutoff).unwrap();
        assert_eq!(
            outcome,
            ComparisonOutcome::FirstDifference {
                at: Eigenvalue::from_pi2_int(2),
                mult_left: 3,
                mult_right: 2,
            }
        );
        // Reflexivity.
        let outcome = zero_spectrum_first_difference(&pillow(), &pillow(), &cutoff).unwrap();
        assert!(outcome.is_equal());
    }
}
