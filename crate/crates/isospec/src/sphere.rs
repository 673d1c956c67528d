//! Round spheres and their quotients by diagonal involutions.
//!
//! Eigenvalues of the Hodge Laplacian on a radius-`r` sphere are rational
//! once `r^2` is rational: the coexact p-form eigenvalues on the unit
//! n-sphere are `(k+p)(k+n-p-1)` for `k >= 1`, and the p-form spectrum is
//! assembled from the coexact (p-1)- and p-families plus harmonic forms in
//! degrees 0 and n. The closed-form multiplicities used here are validated
//! against a brute-force polynomial-form computation in the test suite
//! before anything downstream trusts them.

use crate::eigenvalue::Eigenvalue;
use crate::rational::{rational_int, Rational};
use crate::segment::{halve_multiplicities, SegmentError, SpectrumSegment};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SphereError {
    #[error("sphere dimension must be at least 1")]
    BadDimension,
    #[error("squared radius must be positive")]
    BadRadius,
    #[error("degree {p} out of range for dimension {n}")]
    BadDegree { p: usize, n: usize },
    #[error("sphere cutoffs must be plain rationals, got {0}")]
    CutoffNotPlain(Eigenvalue),
    #[error("sign vector must have length dim + 1 and at least one -1 entry")]
    BadSigns,
    #[error("operation requires an involution, but the quotient has none")]
    NoInvolution,
    #[error("quotient spectra are exposed in the middle degree only (dimension must be even)")]
    NotMiddleDegree,
    #[error("involution is not orientation reversing (the number of -1 signs is even)")]
    NotOrientationReversing,
    #[error("the antipodal map acts freely; there is no singular set")]
    AntipodalHasNoFixedPoints,
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// Round sphere `S^n(r)` described by its dimension and rational `r^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSphere {
    dim: usize,
    radius_squared: Rational,
}

impl RoundSphere {
    pub fn new(dim: usize, radius_squared: Rational) -> Result<Self, SphereError> {
        if dim == 0 {
            return Err(SphereError::BadDimension);
        }
        if !radius_squared.is_positive() {
            return Err(SphereError::BadRadius);
        }
        Ok(RoundSphere {
            dim,
            radius_squared,
        })
    }

    pub fn unit(dim: usize) -> Self {
        RoundSphere::new(dim, Rational::one()).expect("unit radius")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius_squared(&self) -> &Rational {
        &self.radius_squared
    }
}

/// Involution of `S^n` given by a diagonal sign matrix on the ambient
/// `R^{n+1}`; nontrivial, so at least one `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalInvolution {
    signs: Vec<i8>,
}

impl DiagonalInvolution {
    pub fn new(signs: Vec<i8>) -> Result<Self, SphereError> {
        if signs.is_empty()
            || signs.iter().any(|s| *s != 1 && *s != -1)
            || signs.iter().all(|s| *s == 1)
        {
            return Err(SphereError::BadSigns);
        }
        Ok(DiagonalInvolution { signs })
    }

    /// The antipodal map on the sphere inside `R^{ambient_dim}`.
    pub fn antipodal(ambient_dim: usize) -> Self {
        DiagonalInvolution {
            signs: vec![-1; ambient_dim],
        }
    }

    /// Reflection across one equatorial hyperplane.
    pub fn equatorial(ambient_dim: usize) -> Self {
        let mut signs = vec![1; ambient_dim];
        signs[ambient_dim - 1] = -1;
        DiagonalInvolution { signs }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn plus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == 1).count()
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == -1).count()
    }

    pub fn is_antipodal(&self) -> bool {
        self.plus_count() == 0
    }

    /// Orientation reversal on the sphere, which holds exactly when the
    /// ambient determinant is negative: an odd number of -1 signs.
    pub fn is_orientation_reversing(&self) -> bool {
        self.minus_count() % 2 == 1
    }
}

/// Classification of a spherical quotient by its sign pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientKind {
    Sphere,
    Projective,
    Hemisphere,
    Orbifold { plus_signs: usize },
}

impl QuotientKind {
    pub fn describe(&self) -> String {
        match self {
            QuotientKind::Sphere => "sphere".to_owned(),
            QuotientKind::Projective => "projective space".to_owned(),
            QuotientKind::Hemisphere => "hemisphere".to_owned(),
            QuotientKind::Orbifold { plus_signs } => {
                format!("orbifold with singular set of dimension {}", plus_signs - 1)
            }
        }
    }
}

/// A sphere, optionally quotiented by one diagonal involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalQuotient {
    sphere: RoundSphere,
    involution: Option<DiagonalInvolution>,
    label: String,
}

impl SphericalQuotient {
    pub fn sphere_only(sphere: RoundSphere, label: impl Into<String>) -> Self {
        SphericalQuotient {
            sphere,
            involution: None,
            label: label.into(),
        }
    }

    pub fn quotient(
        sphere: RoundSphere,
        involution: DiagonalInvolution,
        label: impl Into<String>,
    ) -> Result<Self, SphereError> {
        if involution.signs().len() != sphere.dim() + 1 {
            return Err(SphereError::BadSigns);
        }
        Ok(SphericalQuotient {
            sphere,
            involution: Some(involution),
            label: label.into(),
        })
    }

    pub fn sphere(&self) -> &RoundSphere {
        &self.sphere
    }

    pub fn involution(&self) -> Option<&DiagonalInvolution> {
        self.involution.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> QuotientKind {
        match &self.involution {
            None => QuotientKind::Sphere,
            Some(involution) => {
                let plus = involution.plus_count();
                if plus == 0 {
                    QuotientKind::Projective
                } else if involution.minus_count() == 1 {
                    QuotientKind::Hemisphere
                } else {
                    QuotientKind::Orbifold { plus_signs: plus }
                }
            }
        }
    }
}

/// Multiplicity of the coexact p-form eigenvalue family member `k >= 1` on
/// the unit `S^n`:
/// `(2k+n-1) (k+n-1)! / ((k-1)! p! (n-p-1)! (k+p) (k+n-p-1))`.
fn coexact_multiplicity(k: usize, p: usize, n: usize) -> BigInt {
    assert!(k >= 1 && p < n);
    let mut numerator = BigInt::from(2 * k + n - 1);
    for value in 1..=(k + n - 1) {
        numerator *= BigInt::from(value);
    }
    let mut denominator = BigInt::one();
    for value in 1..k {
        denominator *= BigInt::from(value);
    }
    for value in 1..=p {
        denominator *= BigInt::from(value);
    }
    for value in 1..=(n - p - 1) {
        denominator *= BigInt::from(value);
    }
    denominator *= BigInt::from(k + p);
    denominator *= BigInt::from(k + n - p - 1);
    let (quotient, remainder) = numerator.div_rem(&denominator);
    assert!(remainder.is_zero(), "coexact multiplicity must be integral");
    quotient
}

/// Coexact p-form eigenvalue `(k+p)(k+n-p-1) / r^2` as an exact rational.
fn coexact_eigenvalue(k: usize, p: usize, n: usize, radius_squared: &Rational) -> Rational {
    Rational::from_integer(BigInt::from((k + p) * (k + n - p - 1))) / radius_squared
}

/// Complete p-form spectrum of the round sphere below a plain cutoff.
pub fn sphere_p_spectrum(
    sphere: &RoundSphere,
    p: usize,
    cutoff: &Eigenvalue,
) -> Result<SpectrumSegment, SphereError> {
    let n = sphere.dim();
    if p > n {
        return Err(SphereError::BadDegree { p, n });
    }
    let max = plain_cutoff(cutoff)?;
    let rho = sphere.radius_squared();
    let mut map: BTreeMap<Eigenvalue, u64> = BTreeMap::new();

    // Harmonic forms: degrees 0 and n carry one harmonic form each.
    if (p == 0 || p == n) && !max.is_negative() {
        map.insert(Eigenvalue::zero(), 1);
    }
    // Exact forms transported from the coexact (p-1)-family, plus the
    // coexact p-family itself.
    let mut families = Vec::new();
    if p >= 1 {
        families.push(p - 1);
    }
    if p < n {
        families.push(p);
    }
    for family_degree in families {
        let mut k = 1usize;
        loop {
            let value = coexact_eigenvalue(k, family_degree, n, rho);
            if value > max {
                break;
            }
            let mult = coexact_multiplicity(k, family_degree, n);
            let eigenvalue = Eigenvalue::from_plain(value).expect("positive eigenvalue");
            *map.entry(eigenvalue).or_insert(0) +=
                mult.to_u64().expect("sphere multiplicity exceeds u64");
            k += 1;
        }
    }
    Ok(SpectrumSegment::from_map(
        map,
        cutoff.clone(),
        p,
        format!("S^{n}"),
    )?)
}

/// Middle-degree spectrum of the quotient: the sphere's middle spectrum with
/// every multiplicity halved, labeled by the quotient kind.
pub fn quotient_middle_spectrum(
    quotient: &SphericalQuotient,
    cutoff: &Eigenvalue,
) -> Result<SpectrumSegment, SphereError> {
    let involution = quotient.involution().ok_or(SphereError::NoInvolution)?;
    let n = quotient.sphere().dim();
    if !n.is_multiple_of(2) {
        return Err(SphereError::NotMiddleDegree);
    }
    if !involution.is_orientation_reversing() {
        return Err(SphereError::NotOrientationReversing);
    }
    let m = n / 2;
    let full = sphere_p_spectrum(quotient.sphere(), m, cutoff)?;
    let halved = halve_multiplicities(&full)?;
    let label = format!("{} ({})", quotient.label(), quotient.kind().describe());
    Ok(halved.with_label(label))
}

/// Dimension of the singular set of the quotient: one less than the number
/// of +1 signs (the fixed sphere has that many ambient coordinates).
pub fn sphere_singular_set_dimension(quotient: &SphericalQuotient) -> Result<i64, SphereError> {
    let involution = quotient.involution().ok_or(SphereError::NoInvolution)?;
    if involution.is_antipodal() {
        return Err(SphereError::AntipodalHasNoFixedPoints);
    }
    Ok(involution.plus_count() as i64 - 1)
}

/// Length of a closed geodesic expressed exactly as
/// `pi_coeff * pi * sqrt(radicand)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicLength {
    pub pi_coeff: Rational,
    pub radicand: Rational,
}

impl GeodesicLength {
    pub fn new(pi_coeff: Rational, radicand: Rational) -> Self {
        assert!(pi_coeff.is_positive() && radicand.is_positive());
        GeodesicLength { pi_coeff, radicand }
    }

    /// Exact comparison via the squared lengths `pi_coeff^2 * radicand`.
    pub fn cmp_exact(&self, other: &GeodesicLength) -> std::cmp::Ordering {
        let left = &self.pi_coeff * &self.pi_coeff * &self.radicand;
        let right = &other.pi_coeff * &other.pi_coeff * &other.radicand;
        left.cmp(&right)
    }

    pub fn approx(&self) -> f64 {
        use crate::rational::rational_to_f64;
        rational_to_f64(&self.pi_coeff)
            * std::f64::consts::PI
            * rational_to_f64(&self.radicand).sqrt()
    }
}

impl std::fmt::Display for GeodesicLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::rational::format_rational;
        write!(
            f,
            "{} * pi * sqrt({})",
            format_rational(&self.pi_coeff),
            format_rational(&self.radicand)
        )
    }
}

/// Space whose shortest closed geodesic has a classical closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicSpace {
    Sphere,
    Projective,
}

/// Shortest closed geodesic: great circles of length `2 pi r` on the sphere,
/// halved to `pi r` after the antipodal identification.
pub fn shortest_closed_geodesic(space: GeodesicSpace, radius_squared: &Rational) -> GeodesicLength {
    let coeff = match space {
        GeodesicSpace::Sphere => rational_int(2),
        GeodesicSpace::Projective => Rational::one(),
    };
    GeodesicLength::new(coeff, radius_squared.clone())
}

fn plain_cutoff(cutoff: &Eigenvalue) -> Result<Rational, SphereError> {
    if !cutoff.pi2_part().is_zero() {
        return Err(SphereError::CutoffNotPlain(cutoff.clone()));
    }
    Ok(cutoff.plain_part().clone())
}
