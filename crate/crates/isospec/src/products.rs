//! Spectra of Riemannian products.
//!
//! Eigenforms of a product are wedge products of factor eigenforms, so the
//! p-form spectrum of `M x N` is the multiset union over `i + j = p` of all
//! sums of an i-form eigenvalue of `M` and a j-form eigenvalue of `N`, with
//! multiplicities multiplied. Completeness of the factors below the cutoff
//! is enough because all eigenvalues are nonnegative.

use crate::eigenvalue::Eigenvalue;
use crate::flat::{quotient_p_spectrum, torus_p_spectrum, FlatError, FlatQuotient, Lattice, Parity};
use crate::segment::{SegmentError, SpectrumSegment};
use crate::sphere::{sphere_p_spectrum, GeodesicLength, RoundSphere, SphereError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProductError {
    #[error("graded spectrum must contain every degree 0..=dim with one cutoff")]
    BadGrading,
    #[error("degree {p} exceeds the product dimension {dim}")]
    BadDegree { p: usize, dim: usize },
    #[error("factor `{label}` is complete only up to {have}, below the requested cutoff {want}")]
    IncompleteFactor {
        label: String,
        have: Eigenvalue,
        want: Eigenvalue,
    },
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// All p-form spectrum segments of one closed factor, sharing a cutoff.
#[derive(Debug, Clone)]
pub struct GradedSpectrum {
    segments: Vec<SpectrumSegment>,
    dim: usize,
    label: String,
}

impl GradedSpectrum {
    pub fn new(segments: Vec<SpectrumSegment>, label: impl Into<String>) -> Result<Self, ProductError> {
        if segments.is_empty() {
            return Err(ProductError::BadGrading);
        }
        let dim = segments.len() - 1;
        let cutoff = segments[0].cutoff().clone();
        for (p, segment) in segments.iter().enumerate() {
            if segment.degree() != p || segment.cutoff() != &cutoff {
                return Err(ProductError::BadGrading);
            }
        }
        Ok(GradedSpectrum {
            segments,
            dim,
            label: label.into(),
        })
    }

    /// All degrees of a flat torus.
    pub fn from_torus(lattice: &Lattice, cutoff: &Eigenvalue) -> Result<Self, ProductError> {
        let n = lattice.rank();
        let segments = (0..=n)
            .map(|p| torus_p_spectrum(lattice, p, cutoff))
            .collect::<Result<Vec<_>, _>>()?;
        GradedSpectrum::new(segments, format!("T^{n}"))
    }

    /// All degrees of a flat quotient manifold (invariant forms).
    pub fn from_flat_quotient(
        quotient: &FlatQuotient,
        cutoff: &Eigenvalue,
    ) -> Result<Self, ProductError> {
        let n = quotient.lattice().rank();
        let segments = (0..=n)
            .map(|p| quotient_p_spectrum(quotient, p, cutoff, Parity::Invariant))
            .collect::<Result<Vec<_>, _>>()?;
        GradedSpectrum::new(segments, quotient.label().to_owned())
    }

    /// All degrees of a round sphere.
    pub fn from_sphere(sphere: &RoundSphere, cutoff: &Eigenvalue) -> Result<Self, ProductError> {
        let n = sphere.dim();
        let segments = (0..=n)
            .map(|p| sphere_p_spectrum(sphere, p, cutoff))
            .collect::<Result<Vec<_>, _>>()?;
        GradedSpectrum::new(segments, format!("S^{n}"))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cutoff(&self) -> &Eigenvalue {
        self.segments[0].cutoff()
    }

    pub fn segment(&self, p: usize) -> Option<&SpectrumSegment> {
        self.segments.get(p)
    }

    /// Alternating sum of harmonic-form counts, the Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.segments
            .iter()
            .enumerate()
            .map(|(p, segment)| {
                let b = segment.multiplicity(&Eigenvalue::zero()) as i64;
                if p % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum()
    }
}

/// Complete p-form spectrum of the product below the cutoff.
pub fn kunneth_p_spectrum(
    left: &GradedSpectrum,
    right: &GradedSpectrum,
    p: usize,
    cutoff: &Eigenvalue,
) -> Result<SpectrumSegment, ProductError> {
    let dim = left.dim() + right.dim();
    if p > dim {
        return Err(ProductError::BadDegree { p, dim });
    }
    for factor in [left, right] {
        if factor.cutoff() < cutoff {
            return Err(ProductError::IncompleteFactor {
                label: factor.label().to_owned(),
                have: factor.cutoff().clone(),
                want: cutoff.clone(),
            });
        }
    }
    let mut map: BTreeMap<Eigenvalue, u64> = BTreeMap::new();
    for i in 0..=p.min(left.dim()) {
        let j = p - i;
        let (left_segment, right_segment) = match (left.segment(i), right.segment(j)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        for (lv, lm) in left_segment.entries() {
            if lv > cutoff {
                break;
            }
            for (rv, rm) in right_segment.entries() {
                let sum = lv.add(rv);
                if &sum > cutoff {
                    break;
                }
                *map.entry(sum).or_insert(0) += lm * rm;
            }
        }
    }
    let label = format!("{} x {}", left.label(), right.label());
    Ok(SpectrumSegment::from_map(map, cutoff.clone(), p, label)?)
}

/// Shortest closed geodesic of a product of closed factors: a closed
/// geodesic projects to a geodesic in each factor, so the minimum over
/// factors is attained inside a single factor.
pub fn product_shortest_length(factor_lengths: &[GeodesicLength]) -> Option<GeodesicLength> {
    factor_lengths
        .iter()
        .min_by(|a, b| a.cmp_exact(b))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rational, rational_int, Rational};
    use crate::segment::compare_segments;
    use num_traits::One;
    use crate::sphere::{shortest_closed_geodesic, GeodesicSpace};

    fn pi2(q: i64) -> Eigenvalue {
        Eigenvalue::from_pi2_int(q)
    }

    #[test]
    fn square_torus_times_square_torus_is_the_four_torus() {
        let t2 = Lattice::cubic(2);
        let t4 = Lattice::cubic(4);
        let cutoff = pi2(12);
        let graded = GradedSpectrum::from_torus(&t2, &cutoff).unwrap();
        for p in 0..=4usize {
            let product = kunneth_p_spectrum(&graded, &graded, p, &cutoff).unwrap();
            let direct = torus_p_spectrum(&t4, p, &cutoff).unwrap();
            assert!(
                compare_segments(&product, &direct, false).unwrap().is_equal(),
                "degree {p}"
            );
        }
    }

    #[test]
    fn rectangular_product_matches_direct_lattice() {
        let a = Lattice::rectangular(&[rational_int(1), rational(1, 4)]).unwrap();
        let b = Lattice::rectangular(&[rational_int(9), rational_int(1)]).unwrap();
        let direct = Lattice::rectangular(&[
            rational_int(1),
            rational(1, 4),
            rational_int(9),
            rational_int(1),
        ])
        .unwrap();
        let cutoff = pi2(10);
        let ga = GradedSpectrum::from_torus(&a, &cutoff).unwrap();
        let gb = GradedSpectrum::from_torus(&b, &cutoff).unwrap();
        for p in 0..=4usize {
            let product = kunneth_p_spectrum(&ga, &gb, p, &cutoff).unwrap();
            let expected = torus_p_spectrum(&direct, p, &cutoff).unwrap();
            assert!(
                compare_segments(&product, &expected, false).unwrap().is_equal(),
                "degree {p}"
            );
        }
    }

    #[test]
    fn degree_zero_is_the_sum_of_function_spectra() {
        let t1 = Lattice::cubic(1);
        let cutoff = pi2(6);
        let graded = GradedSpectrum::from_torus(&t1, &cutoff).unwrap();
        let product = kunneth_p_spectrum(&graded, &graded, 0, &cutoff).unwrap();
        let t2 = torus_p_spectrum(&Lattice::cubic(2), 0, &cutoff).unwrap();
        assert!(compare_segments(&product, &t2, false).unwrap().is_equal());
    }

    #[test]
    fn commutativity_and_associativity() {
        let a = Lattice::rectangular(&[rational_int(1)]).unwrap();
        let b = Lattice::rectangular(&[rational(1, 4)]).unwrap();
        let c = Lattice::rectangular(&[rational_int(4)]).unwrap();
        let cutoff = pi2(8);
        let ga = GradedSpectrum::from_torus(&a, &cutoff).unwrap();
        let gb = GradedSpectrum::from_torus(&b, &cutoff).unwrap();
        let gc = GradedSpectrum::from_torus(&c, &cutoff).unwrap();
        for p in 0..=2usize {
            let ab = kunneth_p_spectrum(&ga, &gb, p, &cutoff).unwrap();
            let ba = kunneth_p_spectrum(&gb, &ga, p, &cutoff).unwrap();
            assert_eq!(ab.entries(), ba.entries());
        }
        // Associativity at matching degrees: (a x b) x c = a x (b x c).
        let ab_graded = GradedSpectrum::new(
            (0..=2)
                .map(|p| kunneth_p_spectrum(&ga, &gb, p, &cutoff).unwrap())
                .collect(),
            "a x b",
        )
        .unwrap();
        let bc_graded = GradedSpectrum::new(
            (0..=2)
                .map(|p| kunneth_p_spectrum(&gb, &gc, p, &cutoff).unwrap())
                .collect(),
            "b x c",
        )
        .unwrap();
        for p in 0..=3usize {
            let left = kunneth_p_spectrum(&ab_graded, &gc, p, &cutoff).unwrap();
            let right = kunneth_p_spectrum(&ga, &bc_graded, p, &cutoff).unwrap();
            assert_eq!(left.entries(), right.entries(), "degree {p}");
        }
    }

    #[test]
    fn euler_characteristic_multiplies() {
        let torus = GradedSpectrum::from_torus(&Lattice::cubic(2), &pi2(2)).unwrap();
        let plain_cutoff = Eigenvalue::from_plain(rational_int(8)).unwrap();
        let sphere = GradedSpectrum::from_sphere(&RoundSphere::unit(2), &plain_cutoff).unwrap();
        assert_eq!(torus.euler_characteristic(), 0);
        assert_eq!(sphere.euler_characteristic(), 2);
        // Product of two spheres: chi = 4, computed through the product map.
        let cutoff = plain_cutoff.clone();
        let product = GradedSpectrum::new(
            (0..=4)
                .map(|p| kunneth_p_spectrum(&sphere, &sphere, p, &cutoff).unwrap())
                .collect(),
            "S^2 x S^2",
        )
        .unwrap();
        assert_eq!(
            product.euler_characteristic(),
            sphere.euler_characteristic() * sphere.euler_characteristic()
        );
        // Mixed flat x sphere product: chi = 0. The sphere factor carries a
        // plain cutoff that certifiably dominates 4pi^2 * 2 = 78.95...
        let mixed_cutoff = pi2(2);
        let wide_plain = Eigenvalue::from_plain(rational_int(79)).unwrap();
        let wide_sphere = GradedSpectrum::from_sphere(&RoundSphere::unit(2), &wide_plain).unwrap();
        let mixed = GradedSpectrum::new(
            (0..=4)
                .map(|p| kunneth_p_spectrum(&torus, &wide_sphere, p, &mixed_cutoff).unwrap())
                .collect(),
            "T^2 x S^2",
        )
        .unwrap();
        assert_eq!(mixed.euler_characteristic(), 0);
    }

    #[test]
    fn incomplete_factors_are_rejected() {
        let graded = GradedSpectrum::from_torus(&Lattice::cubic(2), &pi2(4)).unwrap();
        let result = kunneth_p_spectrum(&graded, &graded, 2, &pi2(10));
        assert!(matches!(result, Err(ProductError::IncompleteFactor { .. })));
        assert!(matches!(
            kunneth_p_spectrum(&graded, &graded, 5, &pi2(4)),
            Err(ProductError::BadDegree { .. })
        ));
    }

    #[test]
    fn shortest_product_geodesic_is_the_factor_minimum() {
        let sphere = shortest_closed_geodesic(GeodesicSpace::Sphere, &Rational::one());
        let projective = shortest_closed_geodesic(GeodesicSpace::Projective, &Rational::one());
        let min = product_shortest_length(&[sphere.clone(), projective.clone()]).unwrap();
        assert_eq!(min, projective);
        let single = product_shortest_length(&[sphere.clone()]).unwrap();
        assert_eq!(single, sphere);
        // At r = s the two mixed products tie; genuine radii are compared
        // exactly through squared lengths.
        let a = product_shortest_length(&[
            shortest_closed_geodesic(GeodesicSpace::Sphere, &Rational::one()),
            shortest_closed_geodesic(GeodesicSpace::Projective, &Rational::one()),
        ])
        .unwrap();
        let b = product_shortest_length(&[
            shortest_closed_geodesic(GeodesicSpace::Projective, &Rational::one()),
            shortest_closed_geodesic(GeodesicSpace::Sphere, &Rational::one()),
        ])
        .unwrap();
        assert_eq!(a.cmp_exact(&b), std::cmp::Ordering::Equal);
    }
}
