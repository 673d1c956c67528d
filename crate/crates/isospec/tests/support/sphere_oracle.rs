//! Brute-force sphere spectra from polynomial differential forms.
//!
//! Independent of the closed-form multiplicity formulas: spans of restricted
//! monomial forms `x^a dx_I` are closed under d and (through the L2 adjoint)
//! under the codifferential, so the Hodge Laplacian compresses exactly to
//! the quotient by the null forms. Eigenvalue multiplicities then come from
//! inertia counts of the pencil `S - lambda M` over exact rationals, where
//! `M` is the Gram matrix of the sphere inner product and `S` the quadratic
//! form `<d., d.> + <delta., delta.>`.
//!
//! The Gram matrix entries reduce to sphere moments: with `Pi = I - x x^T`
//! the pointwise pairing of restricted coordinate q-forms is
//! `det(Pi[I, J])`, which vanishes unless `|I ∩ J| >= q - 1` and otherwise
//! is `1 - sum_{i in I} x_i^2` (I = J) or a signed single monomial.
//! Everything splits into parity blocks `(a + 1_I) mod 2`, which keeps the
//! exact linear algebra small.

use isospec::matrix::RatMatrix;
use isospec::rational::{rational, rational_int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Monomial exponent vector.
type Exponents = Vec<u32>;

/// Basis element: coefficient monomial and sorted form index set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct BasisForm {
    exponents: Exponents,
    indices: Vec<usize>,
}

impl BasisForm {
    fn parity_class(&self) -> u64 {
        let mut class = 0u64;
        for (i, e) in self.exponents.iter().enumerate() {
            let mut bit = (e % 2) as u64;
            if self.indices.contains(&i) {
                bit ^= 1;
            }
            class |= bit << i;
        }
        class
    }
}

/// Uniform-measure sphere moment `E[x^alpha]` on the unit sphere in `vars`
/// variables; zero unless every exponent is even, else
/// `prod (alpha_i - 1)!! / prod_{j=0}^{|alpha|/2 - 1} (vars + 2j)`.
fn moment(alpha: &[u32], vars: usize) -> Rational {
    if alpha.iter().any(|e| e % 2 != 0) {
        return Rational::zero();
    }
    let mut numerator = BigInt::one();
    for &e in alpha {
        let mut factor = 1u64;
        let mut value = e as i64 - 1;
        while value >= 2 {
            factor *= value as u64;
            value -= 2;
        }
        numerator *= BigInt::from(factor.max(1));
    }
    let half_total: u32 = alpha.iter().sum::<u32>() / 2;
    let mut denominator = BigInt::one();
    for j in 0..half_total {
        denominator *= BigInt::from(vars as u64 + 2 * j as u64);
    }
    Rational::new(numerator, denominator)
}

fn monomials_up_to(vars: usize, degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fn recurse(
        vars: usize,
        position: usize,
        remaining: u32,
        current: &mut Exponents,
        out: &mut Vec<Exponents>,
    ) {
        if position == vars {
            out.push(current.clone());
            return;
        }
        for value in 0..=remaining {
            current[position] = value;
            recurse(vars, position + 1, remaining - value, current, out);
        }
        current[position] = 0;
    }
    recurse(vars, 0, degree, &mut current, &mut out);
    out.sort();
    out.dedup();
    out
}

fn index_sets(vars: usize, size: usize) -> Vec<Vec<usize>> {
    if size > vars {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(current.clone());
        // Next combination in lexicographic order.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + vars - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in (i + 1)..size {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Sphere L2 pairing of two restricted monomial forms (up to the
/// total-volume factor, which cancels in the pencil).
fn gram_entry(a: &BasisForm, b: &BasisForm, vars: usize) -> Rational {
    let q = a.indices.len();
    debug_assert_eq!(q, b.indices.len());
    let mut combined: Exponents = a
        .exponents
        .iter()
        .zip(&b.exponents)
        .map(|(x, y)| x + y)
        .collect();
    if q == 0 {
        return moment(&combined, vars);
    }
    let common: Vec<usize> = a
        .indices
        .iter()
        .copied()
        .filter(|i| b.indices.contains(i))
        .collect();
    if common.len() + 1 < q {
        return Rational::zero();
    }
    if common.len() == q {
        // Identical index sets: det = 1 - sum_{i in I} x_i^2.
        let mut total = moment(&combined, vars);
        for &i in &a.indices {
            combined[i] += 2;
            total -= moment(&combined, vars);
            combined[i] -= 2;
        }
        total
    } else {
        // One index differs on each side: a single signed monomial.
        let i_star = *a
            .indices
            .iter()
            .find(|i| !b.indices.contains(i))
            .expect("one element of I is outside J");
        let j_star = *b
            .indices
            .iter()
            .find(|j| !a.indices.contains(j))
            .expect("one element of J is outside I");
        let k = a.indices.iter().position(|&i| i == i_star).unwrap();
        let l = b.indices.iter().position(|&j| j == j_star).unwrap();
        combined[i_star] += 1;
        combined[j_star] += 1;
        let value = moment(&combined, vars);
        if (k + l) % 2 == 0 {
            -value
        } else {
            value
        }
    }
}

/// Exterior derivative of a monomial form, as (coefficient, basis form).
fn exterior_derivative(form: &BasisForm) -> Vec<(i64, BasisForm)> {
    let mut out = Vec::new();
    for (i, &e) in form.exponents.iter().enumerate() {
        if e == 0 || form.indices.contains(&i) {
            continue;
        }
        let mut exponents = form.exponents.clone();
        exponents[i] -= 1;
        let mut indices = form.indices.clone();
        let position = indices.iter().filter(|&&j| j < i).count();
        indices.insert(position, i);
        let sign = if position % 2 == 0 { 1 } else { -1 };
        out.push((
            sign * e as i64,
            BasisForm { exponents, indices },
        ));
    }
    out
}

struct QuotientSpace {
    /// Indices of raw basis elements spanning a complement of the Gram
    /// kernel.
    selected: Vec<usize>,
    gram: RatMatrix,
    gram_inverse: RatMatrix,
    /// Raw full Gram (selected rows by all raw columns) for projecting raw
    /// vectors into quotient coordinates.
    selected_rows: RatMatrix,
}

/// Selects a maximal set of basis elements with positive definite Gram.
fn quotient_space(raw: &[BasisForm], vars: usize) -> QuotientSpace {
    let dim = raw.len();
    let mut full = RatMatrix::zero(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let value = gram_entry(&raw[i], &raw[j], vars);
            full[(i, j)] = value.clone();
            full[(j, i)] = value;
        }
    }
    // Greedy symmetric elimination with positive pivots.
    let mut work = full.clone();
    let mut selected = Vec::new();
    let mut active: Vec<usize> = (0..dim).collect();
    loop {
        let pick = active.iter().position(|&i| work[(i, i)].is_positive());
        let Some(position) = pick else { break };
        let pivot_index = active[position];
        selected.push(pivot_index);
        active.remove(position);
        let pivot = work[(pivot_index, pivot_index)].clone();
        for &i in &active {
            if work[(i, pivot_index)].is_zero() {
                continue;
            }
            let factor = &work[(i, pivot_index)] / &pivot;
            for &j in &active {
                let delta = &factor * &work[(pivot_index, j)];
                work[(i, j)] -= delta;
            }
            work[(i, pivot_index)] = Rational::zero();
        }
    }
    selected.sort();
    let r = selected.len();
    let mut gram = RatMatrix::zero(r, r);
    for (si, &i) in selected.iter().enumerate() {
        for (sj, &j) in selected.iter().enumerate() {
            gram[(si, sj)] = full[(i, j)].clone();
        }
    }
    let gram_inverse = gram.inverse().expect("selected Gram is positive definite");
    let mut selected_rows = RatMatrix::zero(r, dim);
    for (si, &i) in selected.iter().enumerate() {
        for j in 0..dim {
            selected_rows[(si, j)] = full[(i, j)].clone();
        }
    }
    QuotientSpace {
        selected,
        gram,
        gram_inverse,
        selected_rows,
    }
}

/// Quotient coordinates of a raw vector: `M^-1 (selected rows of Gram) v`.
fn project(space: &QuotientSpace, raw_vector: &[Rational]) -> Vec<Rational> {
    let paired = space.selected_rows.mul_vec(raw_vector);
    space.gram_inverse.mul_vec(&paired)
}

/// Matrix of d from one quotient space into another.
fn derivative_matrix(
    source_raw: &[BasisForm],
    source: &QuotientSpace,
    target_raw: &[BasisForm],
    target: &QuotientSpace,
) -> RatMatrix {
    let target_positions: BTreeMap<&BasisForm, usize> = target_raw
        .iter()
        .enumerate()
        .map(|(i, f)| (f, i))
        .collect();
    let mut matrix = RatMatrix::zero(target.selected.len(), source.selected.len());
    for (column, &raw_index) in source.selected.iter().enumerate() {
        let mut image = vec![Rational::zero(); target_raw.len()];
        for (coefficient, form) in exterior_derivative(&source_raw[raw_index]) {
            if let Some(&position) = target_positions.get(&form) {
                image[position] += rational_int(coefficient);
            }
            // Terms outside the target raw list cannot occur: d lowers the
            // coefficient degree by one and the target cap exceeds it.
        }
        let coords = project(target, &image);
        for (row, value) in coords.into_iter().enumerate() {
            matrix[(row, column)] = value;
        }
    }
    matrix
}

/// Counts pencil eigenvalues of `(S, M)` strictly below `threshold` by the
/// inertia of `S - threshold M`.
fn eigenvalues_below(s: &RatMatrix, m: &RatMatrix, threshold: &Rational) -> usize {
    let n = s.rows();
    let mut shifted = s.clone();
    for i in 0..n {
        for j in 0..n {
            let delta = threshold * &m[(i, j)];
            shifted[(i, j)] -= delta;
        }
    }
    let (neg, _zero, _pos) = shifted.inertia();
    neg
}

/// Multiplicities of the Hodge Laplacian on p-forms of the unit n-sphere
/// for integer eigenvalues up to `lambda_max`, computed by brute force.
///
/// Window counts around each integer also certify completeness: any
/// non-integer eigenvalue below the cutoff would inflate a window and break
/// the cross-check against the closed form.
pub fn oracle_p_spectrum(n: usize, p: usize, lambda_max: u64) -> BTreeMap<u64, u64> {
    let vars = n + 1;
    // Largest family level whose eigenvalue fits under the cutoff.
    let mut k_max = 0u32;
    for family in [p.checked_sub(1), Some(p)].into_iter().flatten() {
        if family >= n {
            continue;
        }
        let mut k = 1u64;
        while (k + family as u64) * (k + (n - family - 1) as u64) <= lambda_max {
            k_max = k_max.max(k as u32);
            k += 1;
        }
    }
    // Coefficient-degree caps; d lowers the cap by one as the form degree
    // rises, which keeps the three spaces closed under d and its adjoint.
    // Level-k eigenforms have coefficient degree k, so one unit of margin
    // suffices; the cross-check against the closed form would expose any
    // missing eigenform.
    let cap_p = k_max + 1;
    let degrees: Vec<(usize, u32)> = [
        p.checked_sub(1).map(|q| (q, cap_p + 1)),
        Some((p, cap_p)),
        (p + 1 <= n).then_some((p + 1, cap_p.saturating_sub(1))),
    ]
    .into_iter()
    .flatten()
    .collect();

    // Raw bases split by parity class.
    let mut classes: BTreeMap<u64, BTreeMap<usize, Vec<BasisForm>>> = BTreeMap::new();
    for &(q, cap) in &degrees {
        for indices in index_sets(vars, q) {
            for exponents in monomials_up_to(vars, cap) {
                let form = BasisForm {
                    exponents,
                    indices: indices.clone(),
                };
                classes
                    .entry(form.parity_class())
                    .or_default()
                    .entry(q)
                    .or_default()
                    .push(form);
            }
        }
    }

    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let half = rational(1, 2);
    for (_parity, spaces) in classes {
        let raw_p = match spaces.get(&p) {
            Some(raw) => raw,
            None => continue,
        };
        let quotient_p = quotient_space(raw_p, vars);
        if quotient_p.selected.is_empty() {
            continue;
        }
        let below = spaces
            .get(&(p.wrapping_sub(1)))
            .filter(|_| p > 0)
            .map(|raw| (raw, quotient_space(raw, vars)));
        let above = spaces
            .get(&(p + 1))
            .map(|raw| (raw, quotient_space(raw, vars)));

        let r = quotient_p.selected.len();
        let mut s = RatMatrix::zero(r, r);
        if let Some((raw_above, quotient_above)) = &above {
            if !quotient_above.selected.is_empty() {
                let d_up = derivative_matrix(raw_p, &quotient_p, raw_above, quotient_above);
                // <d., d.> = D^T M_above D.
                let part = d_up.transpose().mul(&quotient_above.gram).mul(&d_up);
                for i in 0..r {
                    for j in 0..r {
                        s[(i, j)] += part[(i, j)].clone();
                    }
                }
            }
        }
        if let Some((raw_below, quotient_below)) = &below {
            if !quotient_below.selected.is_empty() {
                let d_in = derivative_matrix(raw_below, quotient_below, raw_p, &quotient_p);
                // <delta., delta.> = M_p D M_below^-1 D^T M_p.
                let part = quotient_p
                    .gram
                    .mul(&d_in)
                    .mul(&quotient_below.gram_inverse)
                    .mul(&d_in.transpose())
                    .mul(&quotient_p.gram);
                for i in 0..r {
                    for j in 0..r {
                        s[(i, j)] += part[(i, j)].clone();
                    }
                }
            }
        }

        // One inertia sweep per half-integer threshold; window differences
        // give multiplicities.
        let mut previous = eigenvalues_below(&s, &quotient_p.gram, &(-half.clone()));
        for lambda in 0..=lambda_max {
            let upper = rational_int(lambda as i64) + &half;
            let below = eigenvalues_below(&s, &quotient_p.gram, &upper);
            let mult = below - previous;
            previous = below;
            if mult > 0 {
                *counts.entry(lambda).or_insert(0) += mult as u64;
            }
        }
    }
    counts
}
