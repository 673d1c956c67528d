//! Exact dense linear algebra over rationals and integers.
//!
//! Small matrices only (the spaces handled here have rank at most a dozen),
//! so the implementations favor clarity over asymptotics: fraction-free
//! Bareiss determinants, Smith normal form with tracked unimodular
//! transforms, and rational LDL^T used both as a positive-definiteness
//! certificate and for inertia counts.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense rational matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows_data: Vec<Vec<Rational>>) -> Self {
        let rows = rows_data.len();
        let cols = rows_data.first().map_or(0, |r| r.len());
        assert!(rows_data.iter().all(|r| r.len() == cols));
        RatMatrix {
            rows,
            cols,
            data: rows_data.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let product = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += product;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// LDL^T factorization without pivoting: returns (unit lower L, diagonal D)
    /// or None if a zero pivot is hit before completion.
    pub fn ldlt(&self) -> Option<(RatMatrix, Vec<Rational>)> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut lower = RatMatrix::identity(n);
        let mut diag = vec![Rational::zero(); n];
        let mut work = self.clone();
        for k in 0..n {
            let pivot = work[(k, k)].clone();
            if pivot.is_zero() {
                // A trailing all-zero block is fine (positive semidefinite
                // boundary); anything else cannot be factored without pivots.
                let trailing_zero = (k..n).all(|i| (k..n).all(|j| work[(i, j)].is_zero()));
                if trailing_zero {
                    return Some((lower, diag));
                }
                return None;
            }
            diag[k] = pivot.clone();
            for i in (k + 1)..n {
                let factor = &work[(i, k)] / &pivot;
                lower[(i, k)] = factor.clone();
                for j in k..n {
                    let delta = &factor * &work[(k, j)];
                    work[(i, j)] -= delta;
                }
            }
        }
        Some((lower, diag))
    }

    /// All LDL^T pivots strictly positive (certifies positive definiteness).
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match self.ldlt() {
            Some((_, diag)) => diag.len() == self.rows && diag.iter().all(|d| d.is_positive()),
            None => false,
        }
    }

    /// Gauss-Jordan inverse; None when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !work[(r, col)].is_zero())?;
            if pivot_row != col {
                for j in 0..n {
                    work.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = work[(col, col)].clone();
            for j in 0..n {
                work[(col, j)] /= &pivot;
                inv[(col, j)] /= &pivot;
            }
            for r in 0..n {
                if r == col || work[(r, col)].is_zero() {
                    continue;
                }
                let factor = work[(r, col)].clone();
                for j in 0..n {
                    let w = &factor * &work[(col, j)];
                    work[(r, j)] -= w;
                    let v = &factor * &inv[(col, j)];
                    inv[(r, j)] -= v;
                }
            }
        }
        Some(inv)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..work.cols {
            let pivot_row = match (row..work.rows).find(|&r| !work[(r, col)].is_zero()) {
                Some(r) => r,
                None => continue,
            };
            if pivot_row != row {
                for j in 0..work.cols {
                    work.data.swap(row * work.cols + j, pivot_row * work.cols + j);
                }
            }
            let pivot = work[(row, col)].clone();
            for r in (row + 1)..work.rows {
                if work[(r, col)].is_zero() {
                    continue;
                }
                let factor = &work[(r, col)] / &pivot;
                for j in col..work.cols {
                    let delta = &factor * &work[(row, j)];
                    work[(r, j)] -= delta;
                }
            }
            rank += 1;
            row += 1;
            if row == work.rows {
                break;
            }
        }
        rank
    }

    /// Signs of the symmetric matrix's eigenvalues: (negative, zero, positive)
    /// counts, computed by congruence elimination (Sylvester's law).
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric());
        let n = self.rows;
        let mut work = self.clone();
        let mut active: Vec<usize> = (0..n).collect();
        let mut neg = 0;
        let mut zero = 0;
        let mut pos = 0;
        while let Some(&first) = active.first() {
            // Preferred pivot: a nonzero diagonal entry among active indices.
            if let Some(pos_in_active) = active.iter().position(|&i| !work[(i, i)].is_zero()) {
                let p = active[pos_in_active];
                let pivot = work[(p, p)].clone();
                if pivot.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                active.remove(pos_in_active);
                for &i in &active {
                    if work[(i, p)].is_zero() {
                        continue;
                    }
                    let factor = &work[(i, p)] / &pivot;
                    for &j in &active {
                        let delta = &factor * &work[(p, j)];
                        work[(i, j)] -= delta;
                    }
                    work[(i, p)] = Rational::zero();
                }
                continue;
            }
            // All active diagonal entries are zero; look for an off-diagonal
            // hyperbolic pair, which contributes one +1 and one -1.
            let mut pair = None;
            'outer: for (a_idx, &i) in active.iter().enumerate() {
                for (b_idx, &j) in active.iter().enumerate().skip(a_idx + 1) {
                    if !work[(i, j)].is_zero() {
                        pair = Some((a_idx, b_idx, i, j));
                        break 'outer;
                    }
                }
            }
            match pair {
                None => {
                    zero += active.len();
                    break;
                }
                Some((a_idx, b_idx, i, j)) => {
                    pos += 1;
                    neg += 1;
                    let b = work[(i, j)].clone();
                    active.remove(b_idx);
                    active.remove(a_idx);
                    // Eliminate the remaining couplings to the (i, j) block:
                    // for x with u = M[i,x], v = M[j,x], the congruence
                    // update is M[x,y] -= (u_x v_y + v_x u_y) / b.
                    let others: Vec<usize> = active.clone();
                    let u: Vec<Rational> = others.iter().map(|&x| work[(i, x)].clone()).collect();
                    let v: Vec<Rational> = others.iter().map(|&x| work[(j, x)].clone()).collect();
                    for (xi, &x) in others.iter().enumerate() {
                        for (yi, &y) in others.iter().enumerate() {
                            let delta = (&u[xi] * &v[yi] + &v[xi] * &u[yi]) / &b;
                            work[(x, y)] -= delta;
                        }
                    }
                    for &x in &others {
                        work[(i, x)] = Rational::zero();
                        work[(j, x)] = Rational::zero();
                        work[(x, i)] = Rational::zero();
                        work[(x, j)] = Rational::zero();
                    }
                }
            }
            let _ = first;
        }
        (neg, zero, pos)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows_data: &[Vec<i64>]) -> Self {
        let rows = rows_data.len();
        let cols = rows_data.first().map_or(0, |r| r.len());
        assert!(rows_data.iter().all(|r| r.len() == cols));
        IntMatrix {
            rows,
            cols,
            data: rows_data
                .iter()
                .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let product = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += product;
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn to_rational(&self) -> RatMatrix {
        let mut out = RatMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = Rational::from_integer(self[(i, j)].clone());
            }
        }
        out
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut work = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if work[k * n + k].is_zero() {
                let swap_row = ((k + 1)..n).find(|&r| !work[r * n + k].is_zero());
                match swap_row {
                    None => return BigInt::zero(),
                    Some(r) => {
                        for j in 0..n {
                            work.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let numerator =
                        &work[i * n + j] * &work[k * n + k] - &work[i * n + k] * &work[k * n + j];
                    work[i * n + j] = numerator / &prev;
                }
                work[i * n + k] = BigInt::zero();
            }
            prev = work[k * n + k].clone();
        }
        sign * work[n * n - 1].clone()
    }

    /// Smith normal form `S = U * A * V` with unimodular `U`, `V`.
    ///
    /// The diagonal of `S` holds nonnegative invariant factors (each dividing
    /// the next) followed by zeros.
    pub fn smith_normal_form(&self) -> SmithNormalForm {
        let mut s = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let steps = self.rows.min(self.cols);
        for k in 0..steps {
            loop {
                // Find the entry of minimal nonzero absolute value in the
                // trailing block and move it to (k, k).
                let mut best: Option<(usize, usize)> = None;
                for i in k..s.rows {
                    for j in k..s.cols {
                        if s[(i, j)].is_zero() {
                            continue;
                        }
                        best = match best {
                            None => Some((i, j)),
                            Some((bi, bj)) => {
                                if s[(i, j)].abs() < s[(bi, bj)].abs() {
                                    Some((i, j))
                                } else {
                                    Some((bi, bj))
                                }
                            }
                        };
                    }
                }
                let (pi, pj) = match best {
                    None => return SmithNormalForm { s, u, v },
                    Some(p) => p,
                };
                s.swap_rows(k, pi);
                u.swap_rows(k, pi);
                s.swap_cols(k, pj);
                v.swap_cols(k, pj);

                let mut clean = true;
                for i in (k + 1)..s.rows {
                    if s[(i, k)].is_zero() {
                        continue;
                    }
                    let q = div_round(&s[(i, k)], &s[(k, k)]);
                    s.add_row_multiple(i, k, &-q.clone());
                    u.add_row_multiple(i, k, &-q);
                    if !s[(i, k)].is_zero() {
                        clean = false;
                    }
                }
                for j in (k + 1)..s.cols {
                    if s[(k, j)].is_zero() {
                        continue;
                    }
                    let q = div_round(&s[(k, j)], &s[(k, k)]);
                    s.add_col_multiple(j, k, &-q.clone());
                    v.add_col_multiple(j, k, &-q);
                    if !s[(k, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility pass: the pivot must divide the whole block.
                let mut offender = None;
                'scan: for i in (k + 1)..s.rows {
                    for j in (k + 1)..s.cols {
                        if !(&s[(i, j)] % &s[(k, k)]).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    None => break,
                    Some(i) => {
                        s.add_row_multiple(k, i, &BigInt::one());
                        u.add_row_multiple(k, i, &BigInt::one());
                    }
                }
            }
            if s[(k, k)].is_negative() {
                s.negate_row(k);
                u.negate_row(k);
            }
        }
        SmithNormalForm { s, u, v }
    }

    /// Basis of the integer kernel `{x : A x = 0}` as matrix columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        let snf = self.smith_normal_form();
        let rank = (0..self.rows.min(self.cols))
            .take_while(|&k| !snf.s[(k, k)].is_zero())
            .count();
        let mut basis = IntMatrix::zero(self.cols, self.cols - rank);
        for (out_col, j) in (rank..self.cols).enumerate() {
            for i in 0..self.cols {
                basis[(i, out_col)] = snf.v[(i, j)].clone();
            }
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self[(i, source)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let value = -self[(row, j)].clone();
            self[(row, j)] = value;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

pub struct SmithNormalForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        (0..self.s.rows().min(self.s.cols()))
            .take_while(|&k| !self.s[(k, k)].is_zero())
            .count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|k| self.s[(k, k)].clone()).collect()
    }
}

/// Rounded integer division (nearest, ties toward zero) used to shrink
/// remainders during the Smith reduction.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let double_r = BigInt::from(2) * r.abs();
    if double_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Trace of the induced action on the p-th exterior power: the sum of all
/// p-by-p principal minors.
pub fn exterior_power_trace(a: &IntMatrix, p: usize) -> BigInt {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    if p > n {
        return BigInt::zero();
    }
    if p == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    let mut subset: Vec<usize> = (0..p).collect();
    loop {
        let mut minor = IntMatrix::zero(p, p);
        for (mi, &i) in subset.iter().enumerate() {
            for (mj, &j) in subset.iter().enumerate() {
                minor[(mi, mj)] = a[(i, j)].clone();
            }
        }
        total += minor.det();
        // Advance to the next p-subset in lexicographic order.
        let mut idx = p;
        loop {
            if idx == 0 {
                return total;
            }
            idx -= 1;
            if subset[idx] != idx + n - p {
                break;
            }
        }
        subset[idx] += 1;
        for k in (idx + 1)..p {
            subset[k] = subset[k - 1] + 1;
        }
    }
}
