//! Flat tori and their quotients by affine involutions.
//!
//! A torus is the quotient of Euclidean space by a lattice, described here by
//! the rational Gram matrix of a lattice basis; points are written in lattice
//! coordinates. Quotients are taken by one affine involution `x -> Ax + b`.
//! Everything is exact: p-form spectra come from dual-lattice enumeration,
//! invariant and anti-invariant multiplicities from the finite-group trace
//! formula, fixed sets from a Smith normal form, and displacement lengths
//! from projections onto the linear part's fixed subspace.

use crate::eigenvalue::Eigenvalue;
use crate::matrix::{exterior_power_trace, IntMatrix, RatMatrix};
use crate::rational::{binomial, Rational};
use crate::segment::{SegmentError, SpectrumSegment};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlatError {
    #[error("gram matrix must be square of the stated rank")]
    BadShape,
    #[error("gram matrix must be symmetric")]
    NotSymmetric,
    #[error("gram matrix must be positive definite (LDL^T pivot check failed)")]
    NotPositiveDefinite,
    #[error("degree {p} out of range for rank {n}")]
    BadDegree { p: usize, n: usize },
    #[error("flat cutoffs must be pure 4pi^2 multiples, got {0}")]
    CutoffNotFlat(Eigenvalue),
    #[error("operation requires an involution, but the quotient has none")]
    NoInvolution,
    #[error("linear part must be square integer matrix matching the lattice rank")]
    InvolutionShape,
    #[error("linear part squared is not the identity")]
    NotInvolutive,
    #[error("linear part does not preserve the gram matrix (not an isometry)")]
    NotIsometry,
    #[error("translation part does not satisfy A*b + b integral (map is not an involution on the torus)")]
    BadTranslation,
    #[error("length cutoff must be positive")]
    NonPositiveCutoff,
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// Parity sector of the involution action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Invariant forms: the spectrum of the quotient (orbifold or manifold).
    Invariant,
    /// Anti-invariant forms: the complementary sector.
    AntiInvariant,
}

/// A full-rank lattice given by the Gram matrix of a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    rank: usize,
    gram: RatMatrix,
}

impl Lattice {
    pub fn new(rank: usize, gram: RatMatrix) -> Result<Self, FlatError> {
        if gram.rows() != rank || gram.cols() != rank || rank == 0 {
            return Err(FlatError::BadShape);
        }
        if !gram.is_symmetric() {
            return Err(FlatError::NotSymmetric);
        }
        if !gram.is_positive_definite() {
            return Err(FlatError::NotPositiveDefinite);
        }
        Ok(Lattice { rank, gram })
    }

    /// The square lattice Z^n with the identity Gram matrix.
    pub fn cubic(rank: usize) -> Self {
        Lattice::new(rank, RatMatrix::identity(rank)).expect("identity gram")
    }

    /// Rectangular lattice with the given squared edge lengths.
    pub fn rectangular(edge_squares: &[Rational]) -> Result<Self, FlatError> {
        let n = edge_squares.len();
        let mut gram = RatMatrix::zero(n, n);
        for (i, edge) in edge_squares.iter().enumerate() {
            gram[(i, i)] = edge.clone();
        }
        Lattice::new(n, gram)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// det G, the squared covolume of the lattice.
    pub fn det_gram(&self) -> Rational {
        // Determinant via LDL^T pivots (the lattice is positive definite).
        let (_, diag) = self.gram.ldlt().expect("positive definite gram");
        diag.into_iter().product()
    }

    /// Gram matrix of the dual basis, `G^{-1}`.
    pub fn dual_gram(&self) -> RatMatrix {
        self.gram.inverse().expect("positive definite gram")
    }
}

/// Affine involution `x -> Ax + b` of a torus, in lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineInvolution {
    linear: IntMatrix,
    translation: Vec<Rational>,
}

impl AffineInvolution {
    pub fn new(
        linear: IntMatrix,
        translation: Vec<Rational>,
        lattice: &Lattice,
    ) -> Result<Self, FlatError> {
        let n = lattice.rank();
        if linear.rows() != n || linear.cols() != n || translation.len() != n {
            return Err(FlatError::InvolutionShape);
        }
        if !linear.mul(&linear).is_identity() {
            return Err(FlatError::NotInvolutive);
        }
        let a_rat = linear.to_rational();
        let preserved = a_rat.transpose().mul(lattice.gram()).mul(&a_rat);
        if &preserved != lattice.gram() {
            return Err(FlatError::NotIsometry);
        }
        // Normalize the translation modulo the lattice.
        let translation: Vec<Rational> = translation.into_iter().map(|c| c.fract_floor()).collect();
        let image = a_rat.mul_vec(&translation);
        for (ab, b) in image.iter().zip(&translation) {
            if !(ab + b).is_integer() {
                return Err(FlatError::BadTranslation);
            }
        }
        Ok(AffineInvolution {
            linear,
            translation,
        })
    }

    pub fn from_i64(
        linear_rows: &[Vec<i64>],
        translation: &[Rational],
        lattice: &Lattice,
    ) -> Result<Self, FlatError> {
        AffineInvolution::new(
            IntMatrix::from_rows_i64(linear_rows),
            translation.to_vec(),
            lattice,
        )
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    /// True iff the linear part has determinant -1.
    pub fn is_orientation_reversing(&self) -> bool {
        self.linear.det() == BigInt::from(-1)
    }
}

trait FractFloor {
    fn fract_floor(self) -> Self;
}

impl FractFloor for Rational {
    fn fract_floor(self) -> Rational {
        let floor = self.floor();
        self - floor
    }
}

/// A flat torus, optionally quotiented by one affine involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatQuotient {
    lattice: Lattice,
    involution: Option<AffineInvolution>,
    label: String,
}

impl FlatQuotient {
    pub fn torus(lattice: Lattice, label: impl Into<String>) -> Self {
        FlatQuotient {
            lattice,
            involution: None,
            label: label.into(),
        }
    }

    pub fn quotient(
        lattice: Lattice,
        involution: AffineInvolution,
        label: impl Into<String>,
    ) -> Self {
        FlatQuotient {
            lattice,
            involution: Some(involution),
            label: label.into(),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn involution(&self) -> Option<&AffineInvolution> {
        self.involution.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn require_involution(&self) -> Result<&AffineInvolution, FlatError> {
        self.involution.as_ref().ok_or(FlatError::NoInvolution)
    }
}

/// Summary of the fixed-point set of the involution on the torus.
///
/// All components of the fixed set are parallel affine subtori of one
/// dimension; a component's volume is the square root of a rational, so the
/// summary keeps radicands exact instead of taking roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSetSummary {
    /// Dimension of the fixed set; -1 when empty.
    pub dimension: i64,
    pub component_count: u64,
    /// Squared volume of a single component (det of the kernel sublattice
    /// Gram matrix); None when the set is empty or zero-dimensional.
    pub component_volume_squared: Option<Rational>,
    /// Squared total volume, `count^2 * component_volume_squared`.
    pub total_volume_squared: Option<Rational>,
    pub isolated_point_count: u64,
}

impl FixedSetSummary {
    pub fn empty() -> Self {
        FixedSetSummary {
            dimension: -1,
            component_count: 0,
            component_volume_squared: None,
            total_volume_squared: None,
            isolated_point_count: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.dimension < 0
    }
}

/// Complete p-form spectrum of the torus below the cutoff.
///
/// Entries are `4pi^2 * q` with multiplicity `C(n, p) * N(q)` where `N(q)`
/// counts dual-lattice vectors of squared norm `q`; the enumeration is
/// exhaustive, so the segment is complete.
pub fn torus_p_spectrum(
    lattice: &Lattice,
    p: usize,
    cutoff: &Eigenvalue,
) -> Result<SpectrumSegment, FlatError> {
    let n = lattice.rank();
    if p > n {
        return Err(FlatError::BadDegree { p, n });
    }
    let qmax = flat_cutoff(cutoff)?;
    let form_multiplier = big_to_u64(&binomial(n, p));
    let dual = lattice.dual_gram();
    let zero_shift = vec![Rational::zero(); n];
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
    enumerate_form(&dual, &zero_shift, &qmax, |_, value| {
        *counts.entry(value.clone()).or_insert(0) += 1;
    });
    let map = counts
        .into_iter()
        .filter(|(_, c)| *c > 0 && form_multiplier > 0)
        .map(|(q, c)| {
            let value = Eigenvalue::from_pi2_multiple(q).expect("nonnegative norm");
            (value, c * form_multiplier)
        })
        .collect();
    Ok(SpectrumSegment::from_map(
        map,
        cutoff.clone(),
        p,
        format!("T^{n}"),
    )?)
}

/// Complete invariant (or anti-invariant) p-form spectrum of the quotient.
///
/// For each dual norm `q` the eigenspace dimension splits by the trace
/// formula `dim H_± = (dim H ± tr tau*) / 2`, where the trace on the
/// `(q, p)`-eigenspace is the exterior-power trace of the linear part times
/// the signed count of involution-fixed dual vectors of norm `q`.
pub fn quotient_p_spectrum(
    quotient: &FlatQuotient,
    p: usize,
    cutoff: &Eigenvalue,
    parity: Parity,
) -> Result<SpectrumSegment, FlatError> {
    let involution = quotient.require_involution()?;
    let lattice = quotient.lattice();
    let n = lattice.rank();
    if p > n {
        return Err(FlatError::BadDegree { p, n });
    }
    let qmax = flat_cutoff(cutoff)?;
    let dual = lattice.dual_gram();
    let zero_shift = vec![Rational::zero(); n];

    let mut full_counts: BTreeMap<Rational, BigInt> = BTreeMap::new();
    enumerate_form(&dual, &zero_shift, &qmax, |_, value| {
        *full_counts.entry(value.clone()).or_insert_with(BigInt::zero) += 1;
    });

    // Signed sums over the involution-fixed dual vectors, by norm.
    let fixed_sums = fixed_dual_phase_sums(lattice, involution, &qmax);

    let form_dim = binomial(n, p);
    let form_trace = exterior_power_trace(involution.linear(), p);

    let mut map: BTreeMap<Eigenvalue, u64> = BTreeMap::new();
    for (q, count) in full_counts {
        let total = &form_dim * &count;
        let trace = fixed_sums
            .get(&q)
            .map(|s| &form_trace * s)
            .unwrap_or_else(BigInt::zero);
        let twice_dim = match parity {
            Parity::Invariant => &total + &trace,
            Parity::AntiInvariant => &total - &trace,
        };
        let (dim, rem) = twice_dim.div_rem(&BigInt::from(2));
        assert!(rem.is_zero(), "trace formula parity violation at q = {q}");
        assert!(!dim.is_negative(), "negative eigenspace dimension at q = {q}");
        if dim.is_zero() {
            continue;
        }
        let value = Eigenvalue::from_pi2_multiple(q).expect("nonnegative norm");
        map.insert(value, big_to_u64(&dim));
    }
    Ok(SpectrumSegment::from_map(
        map,
        cutoff.clone(),
        p,
        quotient.label().to_owned(),
    )?)
}

/// Sum of `(-1)^{2<mu, b>}` over fixed dual vectors `A^T mu = mu` of each
/// squared norm `q <= qmax`.
fn fixed_dual_phase_sums(
    lattice: &Lattice,
    involution: &AffineInvolution,
    qmax: &Rational,
) -> BTreeMap<Rational, BigInt> {
    let n = lattice.rank();
    let at_minus_identity = {
        let mut m = involution.linear().transpose();
        for i in 0..n {
            let delta = &m[(i, i)] - BigInt::one();
            m[(i, i)] = delta;
        }
        m
    };
    let kernel = at_minus_identity.kernel_basis();
    let d = kernel.cols();
    let dual = lattice.dual_gram();
    let mut sums: BTreeMap<Rational, BigInt> = BTreeMap::new();
    if d == 0 {
        // Only mu = 0 is fixed; its phase is +1.
        if !qmax.is_negative() {
            sums.insert(Rational::zero(), BigInt::one());
        }
        return sums;
    }
    let kernel_rat = kernel.to_rational();
    let restricted_form = kernel_rat.transpose().mul(&dual).mul(&kernel_rat);
    let zero_shift = vec![Rational::zero(); d];
    enumerate_form(&restricted_form, &zero_shift, qmax, |coords, value| {
        // mu = kernel * coords; phase parity from 2 <mu, b>.
        let mut twice_pairing = Rational::zero();
        for i in 0..n {
            let mut mu_i = BigInt::zero();
            for (k, c) in coords.iter().enumerate() {
                mu_i += &kernel[(i, k)] * c;
            }
            twice_pairing += Rational::from_integer(mu_i * BigInt::from(2))
                * &involution.translation()[i];
        }
        assert!(
            twice_pairing.is_integer(),
            "2<mu,b> must be integral for fixed mu"
        );
        let sign = if twice_pairing.to_integer().is_even() {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        *sums.entry(value.clone()).or_insert_with(BigInt::zero) += sign;
    });
    sums
}

/// Exact fixed-point set of the involution, via the Smith normal form of
/// `A - I` over the integers.
pub fn fixed_set(quotient: &FlatQuotient) -> Result<FixedSetSummary, FlatError> {
    let involution = quotient.require_involution()?;
    let lattice = quotient.lattice();
    let n = lattice.rank();
    let a_minus_identity = {
        let mut m = involution.linear().clone();
        for i in 0..n {
            let delta = &m[(i, i)] - BigInt::one();
            m[(i, i)] = delta;
        }
        m
    };
    let snf = a_minus_identity.smith_normal_form();
    let rank = snf.rank();
    let dimension = (n - rank) as i64;

    // Solve S y = U(-b) modulo 1: rows past the rank must have integral
    // right-hand side, otherwise the fixed set is empty.
    let minus_b: Vec<Rational> = involution.translation().iter().map(|c| -c.clone()).collect();
    let u_rat = snf.u.to_rational();
    let rhs = u_rat.mul_vec(&minus_b);
    for row in rank..n {
        if !rhs[row].is_integer() {
            return Ok(FixedSetSummary::empty());
        }
    }
    let mut component_count = BigInt::one();
    for factor in snf.invariant_factors() {
        component_count *= factor.abs();
    }
    let component_count = big_to_u64(&component_count);

    if dimension == 0 {
        return Ok(FixedSetSummary {
            dimension: 0,
            component_count,
            component_volume_squared: None,
            total_volume_squared: None,
            isolated_point_count: component_count,
        });
    }

    // Volume of one component: covolume of the kernel sublattice of A - I.
    let kernel = a_minus_identity.kernel_basis();
    let kernel_rat = kernel.to_rational();
    let kernel_gram = kernel_rat.transpose().mul(lattice.gram()).mul(&kernel_rat);
    let (_, pivots) = kernel_gram.ldlt().expect("kernel gram is positive definite");
    let volume_squared: Rational = pivots.into_iter().product();
    let count_rat = Rational::from_integer(BigInt::from(component_count));
    let total = &count_rat * &count_rat * &volume_squared;
    Ok(FixedSetSummary {
        dimension,
        component_count,
        component_volume_squared: Some(volume_squared),
        total_volume_squared: Some(total),
        isolated_point_count: 0,
    })
}

/// Weak displacement spectrum of the quotient's deck group.
///
/// For every group element `x -> A^e x + b_e + lambda` the displacement is
/// the norm of the projection of `b_e + lambda` onto the fixed subspace of
/// `A^e` (orthogonal with respect to the lattice metric). Entries count
/// distinct displacement vectors of each squared length in `(0, cutoff^2]`;
/// zero displacements are excluded.
pub fn displacement_length_spectrum(
    quotient: &FlatQuotient,
    length_cutoff: &Rational,
) -> Result<Vec<(Rational, u64)>, FlatError> {
    if !length_cutoff.is_positive() {
        return Err(FlatError::NonPositiveCutoff);
    }
    let bound = length_cutoff * length_cutoff;
    let lattice = quotient.lattice();
    let n = lattice.rank();
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();

    // Translation part: classical lattice lengths |lambda|_G.
    let zero_shift = vec![Rational::zero(); n];
    enumerate_form(lattice.gram(), &zero_shift, &bound, |_, value| {
        if !value.is_zero() {
            *counts.entry(value.clone()).or_insert(0) += 1;
        }
    });

    if quotient.involution().is_some() {
        for (value, count) in involution_displacement_spectrum(quotient, length_cutoff)? {
            *counts.entry(value).or_insert(0) += count;
        }
    }

    Ok(counts.into_iter().collect())
}

/// Displacements of the orientation-coupled group elements alone, i.e. of
/// the maps `x -> Ax + b + lambda`. For a reflection these are the
/// boundary-parallel glide lengths of the quotient.
pub fn involution_displacement_spectrum(
    quotient: &FlatQuotient,
    length_cutoff: &Rational,
) -> Result<Vec<(Rational, u64)>, FlatError> {
    if !length_cutoff.is_positive() {
        return Err(FlatError::NonPositiveCutoff);
    }
    let bound = length_cutoff * length_cutoff;
    let involution = quotient.require_involution()?;
    let lattice = quotient.lattice();
    let n = lattice.rank();
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();

    let a_minus_identity = {
        let mut m = involution.linear().clone();
        for i in 0..n {
            let delta = &m[(i, i)] - BigInt::one();
            m[(i, i)] = delta;
        }
        m
    };
    let kernel = a_minus_identity.kernel_basis();
    let d = kernel.cols();
    if d == 0 {
        // Every such element has a fixed point, hence displacement zero,
        // which is excluded.
        return Ok(Vec::new());
    }
    let kernel_rat = kernel.to_rational();
    let kernel_gram = kernel_rat.transpose().mul(lattice.gram()).mul(&kernel_rat);
    let kernel_gram_inv = kernel_gram.inverse().expect("positive definite");
    // Projection in kernel coordinates: t(v) = M^{-1} K^T G v.
    let proj = kernel_gram_inv.mul(&kernel_rat.transpose().mul(lattice.gram()));
    // The projected lattice t(Z^n) has a square integer basis after
    // clearing denominators.
    let mut denominator = BigInt::one();
    for i in 0..proj.rows() {
        for j in 0..proj.cols() {
            denominator = denominator.lcm(proj[(i, j)].denom());
        }
    }
    let mut proj_int = IntMatrix::zero(d, n);
    for i in 0..d {
        for j in 0..n {
            let scaled = &proj[(i, j)] * Rational::from_integer(denominator.clone());
            debug_assert!(scaled.is_integer());
            proj_int[(i, j)] = scaled.to_integer();
        }
    }
    let basis = column_lattice_basis(&proj_int);
    let basis_rat = basis.to_rational();
    let den_rat = Rational::from_integer(denominator.clone());
    // Quadratic form of s: ((1/den) H s)^T M ((1/den) H s).
    let mut form = basis_rat.transpose().mul(&kernel_gram).mul(&basis_rat);
    for i in 0..d {
        for j in 0..d {
            let scaled = &form[(i, j)] / (&den_rat * &den_rat);
            form[(i, j)] = scaled;
        }
    }
    // Offset: t(b) = (1/den) H u, so u = den * H^{-1} t(b).
    let t_of_b = proj.mul_vec(involution.translation());
    let basis_inv = basis_rat.inverse().expect("full-rank projected lattice");
    let offset: Vec<Rational> = basis_inv
        .mul_vec(&t_of_b)
        .into_iter()
        .map(|c| c * &den_rat)
        .collect();
    enumerate_form(&form, &offset, &bound, |_, value| {
        if !value.is_zero() {
            *counts.entry(value.clone()).or_insert(0) += 1;
        }
    });
    Ok(counts.into_iter().collect())
}

pub fn flat_cutoff(cutoff: &Eigenvalue) -> Result<Rational, FlatError> {
    if !cutoff.plain_part().is_zero() {
        return Err(FlatError::CutoffNotFlat(cutoff.clone()));
    }
    Ok(cutoff.pi2_part().clone())
}

/// Basis of the column lattice of an integer matrix with full row rank,
/// by Euclidean column reduction.
fn column_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let mut work = m.clone();
    let cols = work.cols();
    let mut pivot_col = 0;
    for row in 0..rows {
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if work[(row, j)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(j),
                    Some(b) => {
                        if work[(row, j)].abs() < work[(row, b)].abs() {
                            Some(j)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let pivot = match best {
                None => break,
                Some(j) => j,
            };
            if pivot != pivot_col {
                for i in 0..rows {
                    let tmp = work[(i, pivot)].clone();
                    work[(i, pivot)] = work[(i, pivot_col)].clone();
                    work[(i, pivot_col)] = tmp;
                }
            }
            let mut reduced_all = true;
            for j in (pivot_col + 1)..cols {
                if work[(row, j)].is_zero() {
                    continue;
                }
                let q = &work[(row, j)] / &work[(row, pivot_col)];
                if !q.is_zero() {
                    for i in 0..rows {
                        let delta = &q * &work[(i, pivot_col)];
                        work[(i, j)] -= delta;
                    }
                }
                if !work[(row, j)].is_zero() {
                    reduced_all = false;
                }
            }
            if reduced_all {
                pivot_col += 1;
                break;
            }
        }
    }
    assert_eq!(pivot_col, rows, "projected lattice must have full rank");
    let mut basis = IntMatrix::zero(rows, rows);
    for i in 0..rows {
        for j in 0..rows {
            basis[(i, j)] = work[(i, j)].clone();
        }
    }
    basis
}

/// Exhaustively enumerates integer vectors `s` with
/// `(s + shift)^T Q (s + shift) <= bound` for positive definite rational `Q`,
/// invoking the callback with the coordinates and the exact form value.
///
/// Uses the LDL^T factorization: with `w = L^T (s + shift)` the form is
/// `sum_i d_i w_i^2`, so coordinates are chosen from the innermost level
/// outward, walking integers away from the real minimizer until the partial
/// sum exceeds the budget. Completeness follows because each partial sum is
/// monotone in the distance from the minimizer.
fn enumerate_form<F: FnMut(&[BigInt], &Rational)>(
    form: &RatMatrix,
    shift: &[Rational],
    bound: &Rational,
    mut visit: F,
) {
    let n = form.rows();
    assert_eq!(form.cols(), n);
    assert_eq!(shift.len(), n);
    if bound.is_negative() {
        return;
    }
    let (lower, diag) = form.ldlt().expect("enumeration form must be factorable");
    assert!(
        diag.len() == n && diag.iter().all(|d| d.is_positive()),
        "enumeration form must be positive definite"
    );
    let mut coords = vec![BigInt::zero(); n];
    recurse_enumerate(
        &lower,
        &diag,
        shift,
        bound,
        &Rational::zero(),
        n,
        &mut coords,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn recurse_enumerate<F: FnMut(&[BigInt], &Rational)>(
    lower: &RatMatrix,
    diag: &[Rational],
    shift: &[Rational],
    bound: &Rational,
    used: &Rational,
    level: usize,
    coords: &mut Vec<BigInt>,
    visit: &mut F,
) {
    let i = level - 1;
    // w_i = (s_i + shift_i) + sum_{j > i} L[j][i] (s_j + shift_j).
    let mut carry = shift[i].clone();
    for j in level..lower.rows() {
        let term = &lower[(j, i)] * (Rational::from_integer(coords[j].clone()) + &shift[j]);
        carry += term;
    }
    let start = (-carry.clone()).floor().to_integer();

    let try_value = |s_i: BigInt, coords: &mut Vec<BigInt>, visit: &mut F| -> bool {
        let w = Rational::from_integer(s_i.clone()) + &carry;
        let new_used = used + &diag[i] * &w * &w;
        if &new_used > bound {
            return false;
        }
        coords[i] = s_i;
        if i == 0 {
            visit(coords, &new_used);
        } else {
            recurse_enumerate(lower, diag, shift, bound, &new_used, i, coords, visit);
        }
        true
    };

    // Downward from the floor of the minimizer, then upward from the next
    // integer; each direction stops at the first budget violation.
    let mut s = start.clone();
    loop {
        if !try_value(s.clone(), coords, visit) {
            break;
        }
        s -= 1;
    }
    let mut s: BigInt = start + 1;
    loop {
        if !try_value(s.clone(), coords, visit) {
            break;
        }
        s += 1;
    }
}

fn big_to_u64(value: &BigInt) -> u64 {
    value
        .to_u64()
        .expect("multiplicity exceeds u64; ranks this large are unsupported")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rational, rational_int};
    use crate::segment::{compare_segments, halve_multiplicities};

    fn unit_torus() -> Lattice {
        Lattice::cubic(2)
    }

    fn ev_pi2(num: i64, den: i64) -> Eigenvalue {
        Eigenvalue::from_pi2_multiple(rational(num, den)).unwrap()
    }

    fn cylinder_involution(lattice: &Lattice) -> AffineInvolution {
        AffineInvolution::from_i64(
            &[vec![1, 0], vec![0, -1]],
            &[Rational::zero(), Rational::zero()],
            lattice,
        )
        .unwrap()
    }

    fn klein_involution(lattice: &Lattice) -> AffineInvolution {
        AffineInvolution::from_i64(
            &[vec![1, 0], vec![0, -1]],
            &[rational(1, 2), Rational::zero()],
            lattice,
        )
        .unwrap()
    }

    fn moebius_involution(lattice: &Lattice) -> AffineInvolution {
        AffineInvolution::from_i64(
            &[vec![0, 1], vec![1, 0]],
            &[Rational::zero(), Rational::zero()],
            lattice,
        )
        .unwrap()
    }

    fn pillow_involution(lattice: &Lattice) -> AffineInvolution {
        AffineInvolution::from_i64(
            &[vec![-1, 0], vec![0, -1]],
            &[Rational::zero(), Rational::zero()],
            lattice,
        )
        .unwrap()
    }

    #[test]
    fn unit_torus_one_form_spectrum_low_entries() {
        let segment = torus_p_spectrum(&unit_torus(), 1, &Eigenvalue::from_pi2_int(2)).unwrap();
        // N(0) = 1, N(1) = 4, N(2) = 4, each doubled by C(2,1) = 2.
        assert_eq!(
            segment.entries(),
            &[
                (Eigenvalue::zero(), 2),
                (Eigenvalue::from_pi2_int(1), 8),
                (Eigenvalue::from_pi2_int(2), 8),
            ]
        );
    }

    #[test]
    fn unit_torus_functions_have_simple_zero_mode() {
        let segment = torus_p_spectrum(&unit_torus(), 0, &Eigenvalue::from_pi2_int(1)).unwrap();
        assert_eq!(segment.multiplicity(&Eigenvalue::zero()), 1);
    }

    #[test]
    fn halved_lattice_shifts_lowest_one_form_eigenvalue() {
        // Lattice (1/2)Z x 2Z: dual 2Z x (1/2)Z, shortest dual vector (0, 1/2).
        let lattice =
            Lattice::rectangular(&[rational(1, 4), rational_int(4)]).unwrap();
        let segment = torus_p_spectrum(&lattice, 1, &Eigenvalue::from_pi2_int(1)).unwrap();
        let nonzero: Vec<_> = segment
            .entries()
            .iter()
            .filter(|(v, _)| !v.is_zero())
            .collect();
        assert_eq!(nonzero[0].0, ev_pi2(1, 4));
    }

    #[test]
    fn klein_bottle_keeps_one_invariant_harmonic_one_form() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), klein_involution(&lattice), "klein");
        let segment =
            quotient_p_spectrum(&quotient, 1, &Eigenvalue::from_pi2_int(2), Parity::Invariant)
                .unwrap();
        // Invariant harmonic 1-forms are spanned by dx alone.
        assert_eq!(segment.multiplicity(&Eigenvalue::zero()), 1);
    }

    #[test]
    fn four_pillow_invariant_one_forms() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), pillow_involution(&lattice), "pillow");
        let segment =
            quotient_p_spectrum(&quotient, 1, &Eigenvalue::from_pi2_int(2), Parity::Invariant)
                .unwrap();
        // exterior trace of -I on 1-forms is -2; no nonzero fixed dual
        // vectors; at q=0 the dimension is (2-2)/2 = 0.
        assert_eq!(segment.multiplicity(&Eigenvalue::zero()), 0);
        assert_eq!(segment.multiplicity(&Eigenvalue::from_pi2_int(1)), 4);
    }

    #[test]
    fn cylinder_invariant_functions_at_first_eigenvalue() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), cylinder_involution(&lattice), "cylinder");
        let segment =
            quotient_p_spectrum(&quotient, 0, &Eigenvalue::from_pi2_int(1), Parity::Invariant)
                .unwrap();
        // (N(1) + sum of phases over fixed (±1,0)) / 2 = (4 + 2) / 2 = 3.
        assert_eq!(segment.multiplicity(&Eigenvalue::from_pi2_int(1)), 3);
    }

    #[test]
    fn orientation_reversal_is_the_determinant_sign() {
        let lattice = unit_torus();
        assert!(cylinder_involution(&lattice).is_orientation_reversing());
        assert!(!pillow_involution(&lattice).is_orientation_reversing());
        let lattice4 = Lattice::cubic(4);
        let tau = AffineInvolution::from_i64(
            &[
                vec![-1, 0, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, -1, 0],
                vec![0, 0, 0, 1],
            ],
            &vec![Rational::zero(); 4],
            &lattice4,
        )
        .unwrap();
        // Odd number of -1 entries reverses orientation.
        assert!(tau.is_orientation_reversing());
    }

    #[test]
    fn pillow_fixed_set_is_four_isolated_points() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), pillow_involution(&lattice), "pillow");
        let summary = fixed_set(&quotient).unwrap();
        assert_eq!(summary.dimension, 0);
        assert_eq!(summary.isolated_point_count, 4);
        assert_eq!(summary.component_count, 4);
    }

    #[test]
    fn moebius_fixed_circle_has_squared_length_two() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), moebius_involution(&lattice), "moebius");
        let summary = fixed_set(&quotient).unwrap();
        assert_eq!(summary.dimension, 1);
        assert_eq!(summary.component_count, 1);
        assert_eq!(summary.component_volume_squared, Some(rational_int(2)));
    }

    #[test]
    fn cylinder_fixed_set_is_two_unit_circles() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), cylinder_involution(&lattice), "cylinder");
        let summary = fixed_set(&quotient).unwrap();
        assert_eq!(summary.dimension, 1);
        assert_eq!(summary.component_count, 2);
        assert_eq!(summary.component_volume_squared, Some(rational_int(1)));
        // Total boundary length 2, stored as squared total 4.
        assert_eq!(summary.total_volume_squared, Some(rational_int(4)));
    }

    #[test]
    fn glide_reflection_has_empty_fixed_set() {
        // The Klein-bottle glide acts freely: the translation component
        // along the reflection axis can never be cancelled.
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), klein_involution(&lattice), "klein");
        assert!(fixed_set(&quotient).unwrap().is_empty());
    }

    #[test]
    fn orientation_reversing_fixed_sets_in_dimension_two_are_curves_or_empty() {
        for edges in [
            [rational_int(1), rational_int(1)],
            [rational_int(9), rational_int(1)],
            [rational(1, 4), rational_int(4)],
        ] {
            let lattice = Lattice::rectangular(&edges).unwrap();
            for (rows, b) in [
                (vec![vec![1, 0], vec![0, -1]], [Rational::zero(), Rational::zero()]),
                (vec![vec![-1, 0], vec![0, 1]], [Rational::zero(), Rational::zero()]),
                (vec![vec![1, 0], vec![0, -1]], [rational(1, 2), Rational::zero()]),
            ] {
                let tau = AffineInvolution::from_i64(&rows, &b, &lattice).unwrap();
                assert!(tau.is_orientation_reversing());
                let quotient = FlatQuotient::quotient(lattice.clone(), tau, "q");
                let summary = fixed_set(&quotient).unwrap();
                assert!(
                    summary.dimension == 1 || summary.is_empty(),
                    "dimension {} unexpected",
                    summary.dimension
                );
            }
        }
    }

    #[test]
    fn point_reflection_always_fixes_four_points_in_dimension_two() {
        for gram_rows in [
            vec![vec![rational_int(1), Rational::zero()], vec![Rational::zero(), rational_int(1)]],
            vec![vec![rational_int(2), rational_int(1)], vec![rational_int(1), rational_int(2)]],
            vec![vec![rational(5, 2), rational(1, 3)], vec![rational(1, 3), rational(7, 4)]],
        ] {
            let lattice = Lattice::new(2, RatMatrix::from_rows(gram_rows)).unwrap();
            let tau = AffineInvolution::from_i64(
                &[vec![-1, 0], vec![0, -1]],
                &[Rational::zero(), Rational::zero()],
                &lattice,
            )
            .unwrap();
            let quotient = FlatQuotient::quotient(lattice, tau, "pillow");
            let summary = fixed_set(&quotient).unwrap();
            assert_eq!(summary.isolated_point_count, 4);
        }
    }

    #[test]
    fn translation_quotient_has_empty_fixed_set() {
        let lattice = Lattice::rectangular(&[rational_int(1), rational_int(4)]).unwrap();
        let tau = AffineInvolution::from_i64(
            &[vec![1, 0], vec![0, 1]],
            &[rational(1, 2), Rational::zero()],
            &lattice,
        )
        .unwrap();
        let quotient = FlatQuotient::quotient(lattice, tau, "shifted torus");
        assert!(fixed_set(&quotient).unwrap().is_empty());
    }

    #[test]
    fn unit_torus_shortest_displacement() {
        let quotient = FlatQuotient::torus(unit_torus(), "torus");
        let lengths = displacement_length_spectrum(&quotient, &rational_int(2)).unwrap();
        assert_eq!(lengths[0], (rational_int(1), 4));
    }

    #[test]
    fn klein_bottle_glide_contributes_quarter_length() {
        let lattice = unit_torus();
        let quotient =
            FlatQuotient::quotient(lattice.clone(), klein_involution(&lattice), "klein");
        let lengths = displacement_length_spectrum(&quotient, &rational_int(2)).unwrap();
        // The glide projects to displacement 1/2 along the fixed axis.
        assert_eq!(lengths[0].0, rational(1, 4));
        assert!(lengths[0].1 >= 1);
    }

    #[test]
    fn axis_reflections_of_rectangular_torus_have_different_boundary_displacements() {
        // Torus bZ x aZ with b = 3, a = 1.
        let lattice =
            Lattice::rectangular(&[rational_int(9), rational_int(1)]).unwrap();
        let reflect_y = AffineInvolution::from_i64(
            &[vec![1, 0], vec![0, -1]],
            &[Rational::zero(), Rational::zero()],
            &lattice,
        )
        .unwrap();
        let reflect_x = AffineInvolution::from_i64(
            &[vec![-1, 0], vec![0, 1]],
            &[Rational::zero(), Rational::zero()],
            &lattice,
        )
        .unwrap();
        let qa = FlatQuotient::quotient(lattice.clone(), reflect_y, "cylinder b-axis");
        let qb = FlatQuotient::quotient(lattice.clone(), reflect_x, "cylinder a-axis");
        let la = involution_displacement_spectrum(&qa, &rational_int(4)).unwrap();
        let lb = involution_displacement_spectrum(&qb, &rational_int(4)).unwrap();
        // Boundary-parallel shortest displacements: b^2 = 9 vs a^2 = 1.
        assert_eq!(la[0].0, rational_int(9));
        assert_eq!(lb[0].0, rational_int(1));
        // The merged weak displacement spectra also differ.
        let ma = displacement_length_spectrum(&qa, &rational_int(4)).unwrap();
        let mb = displacement_length_spectrum(&qb, &rational_int(4)).unwrap();
        assert_ne!(ma, mb);
    }

    #[test]
    fn identity_involution_reproduces_the_torus_spectrum() {
        let lattice = unit_torus();
        let tau = AffineInvolution::from_i64(
            &[vec![1, 0], vec![0, 1]],
            &[Rational::zero(), Rational::zero()],
            &lattice,
        )
        .unwrap();
        let quotient = FlatQuotient::quotient(lattice.clone(), tau, "trivial");
        for p in 0..=2 {
            let direct = torus_p_spectrum(&lattice, p, &Eigenvalue::from_pi2_int(5)).unwrap();
            let via_trace =
                quotient_p_spectrum(&quotient, p, &Eigenvalue::from_pi2_int(5), Parity::Invariant)
                    .unwrap();
            assert!(compare_segments(&direct, &via_trace, false)
                .unwrap()
                .is_equal());
        }
    }

    #[test]
    fn invariant_and_anti_invariant_dimensions_sum_to_the_total() {
        let lattice = unit_torus();
        for involution in [
            cylinder_involution(&lattice),
            klein_involution(&lattice),
            moebius_involution(&lattice),
            pillow_involution(&lattice),
        ] {
            let quotient = FlatQuotient::quotient(lattice.clone(), involution, "q");
            for p in 0..=2 {
                let cutoff = Eigenvalue::from_pi2_int(10);
                let total = torus_p_spectrum(&lattice, p, &cutoff).unwrap();
                let plus =
                    quotient_p_spectrum(&quotient, p, &cutoff, Parity::Invariant).unwrap();
                let minus =
                    quotient_p_spectrum(&quotient, p, &cutoff, Parity::AntiInvariant).unwrap();
                for (value, mult) in total.entries() {
                    assert_eq!(
                        plus.multiplicity(value) + minus.multiplicity(value),
                        *mult,
                        "p = {p}, eigenvalue {value}"
                    );
                }
            }
        }
    }

    #[test]
    fn middle_degree_quotient_matches_halved_torus_spectrum() {
        let lattice = unit_torus();
        let cutoff = Eigenvalue::from_pi2_int(20);
        for involution in [
            cylinder_involution(&lattice),
            klein_involution(&lattice),
            moebius_involution(&lattice),
        ] {
            assert!(involution.is_orientation_reversing());
            let quotient = FlatQuotient::quotient(lattice.clone(), involution, "q");
            let invariant =
                quotient_p_spectrum(&quotient, 1, &cutoff, Parity::Invariant).unwrap();
            let halved =
                halve_multiplicities(&torus_p_spectrum(&lattice, 1, &cutoff).unwrap()).unwrap();
            assert!(compare_segments(&invariant, &halved, false)
                .unwrap()
                .is_equal());
        }
    }

    #[test]
    fn torus_spectra_agree_in_complementary_degrees() {
        let lattice =
            Lattice::rectangular(&[rational_int(2), rational(1, 3)]).unwrap();
        let cutoff = Eigenvalue::from_pi2_int(8);
        for p in 0..=2usize {
            let a = torus_p_spectrum(&lattice, p, &cutoff).unwrap();
            let b = torus_p_spectrum(&lattice, 2 - p, &cutoff).unwrap();
            assert_eq!(a.entries(), b.entries());
        }
    }

    #[test]
    fn degree_and_cutoff_validation() {
        let lattice = unit_torus();
        assert!(matches!(
            torus_p_spectrum(&lattice, 3, &Eigenvalue::from_pi2_int(1)),
            Err(FlatError::BadDegree { .. })
        ));
        let plain_cutoff = Eigenvalue::from_plain(rational_int(10)).unwrap();
        assert!(matches!(
            torus_p_spectrum(&lattice, 1, &plain_cutoff),
            Err(FlatError::CutoffNotFlat(_))
        ));
        let torus = FlatQuotient::torus(lattice, "t");
        assert!(matches!(
            fixed_set(&torus),
            Err(FlatError::NoInvolution)
        ));
    }

    #[test]
    fn involution_validation_rejects_bad_data() {
        let lattice = unit_torus();
        // Not involutive.
        assert!(matches!(
            AffineInvolution::from_i64(
                &[vec![1, 1], vec![0, 1]],
                &[Rational::zero(), Rational::zero()],
                &lattice,
            ),
            Err(FlatError::NotInvolutive)
        ));
        // Isometry fails against a rectangular gram.
        let rect = Lattice::rectangular(&[rational_int(1), rational_int(4)]).unwrap();
        assert!(matches!(
            AffineInvolution::from_i64(
                &[vec![0, 1], vec![1, 0]],
                &[Rational::zero(), Rational::zero()],
                &rect,
            ),
            Err(FlatError::NotIsometry)
        ));
        // Translation must satisfy A b + b integral.
        assert!(matches!(
            AffineInvolution::from_i64(
                &[vec![1, 0], vec![0, 1]],
                &[rational(1, 3), Rational::zero()],
                &lattice,
            ),
            Err(FlatError::BadTranslation)
        ));
    }
}
