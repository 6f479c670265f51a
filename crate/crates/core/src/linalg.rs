//! Dense matrices and 4-index tensors over [`Scalar`] with exact
//! contraction, rank, and linear solving.
//!
//! Elimination is Bareiss-style: rows are first scaled to clear
//! denominators, after which every division in the elimination is an exact
//! polynomial division. This keeps intermediate entries polynomial instead
//! of stacking up rational-function gcd work.
//!
//! Tensor4 index order follows the convention used for all R-matrix bodies:
//! `(first-out, second-out, first-in, second-in)`, matching left-to-right
//! subscript lists like `R_{ijkl}`.

use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent linear system (residual in row {row})")]
    Inconsistent { row: usize },
    #[error("rank-deficient system: rank {rank} < {cols} unknowns")]
    Underdetermined { rank: usize, cols: usize },
    #[error("unsupported contraction arity: {0} free indices")]
    Arity(usize),
}

/// Dense row-major matrix of scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Elementary matrix `e_ij` (1-based indices, matching the math).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        *m.at_mut(i - 1, j - 1) = Scalar::one();
        m
    }

    pub fn diagonal(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            *m.at_mut(i, i) = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += self.at(i, i);
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    *out.at_mut(i, j) += &prod;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.at(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        *out.at_mut(i * other.rows + k, j * other.cols + l) = a * b;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Column-stack the entries (row-major) into a single column vector.
    pub fn vectorize(&self) -> Matrix {
        Matrix { rows: self.rows * self.cols, cols: 1, data: self.data.clone() }
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Multiply each row by the product of its distinct entry denominators so
/// that every entry becomes polynomial.
fn clear_rows(w: &mut [Vec<Scalar>]) {
    for row in w.iter_mut() {
        let mut dens: Vec<Scalar> = Vec::new();
        for e in row.iter() {
            let den_poly = denominator_scalar(e);
            if !den_poly.is_one() && !dens.contains(&den_poly) {
                dens.push(den_poly);
            }
        }
        if dens.is_empty() {
            continue;
        }
        let mut m = Scalar::one();
        for d in &dens {
            m *= d;
        }
        for e in row.iter_mut() {
            *e *= &m;
        }
    }
}

fn denominator_scalar(e: &Scalar) -> Scalar {
    let poly = crate::scalar::LaurentPoly::from_bigint_coeffs(e.denominator_coeffs(), 0);
    Scalar::from_poly(poly)
}

struct Echelon {
    w: Vec<Vec<Scalar>>,
    pivots: Vec<(usize, usize)>, // (row, col)
    a_cols: usize,
}

/// Bareiss elimination of `[A | B]`; pivot columns are restricted to the
/// `A`-block, the `B`-block is carried along.
fn eliminate(a: &Matrix, b: Option<&Matrix>) -> Echelon {
    let rows = a.rows();
    let a_cols = a.cols();
    let total = a_cols + b.map_or(0, Matrix::cols);
    let mut w: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Scalar> = (0..a_cols).map(|j| a.at(i, j).clone()).collect();
            if let Some(b) = b {
                row.extend((0..b.cols()).map(|j| b.at(i, j).clone()));
            }
            row
        })
        .collect();
    clear_rows(&mut w);
    let mut pivots = Vec::new();
    let mut prev = Scalar::one();
    let mut r = 0usize;
    for c in 0..a_cols {
        if r >= rows {
            break;
        }
        // Prefer the sparsest pivot to keep growth down.
        let pivot = (r..rows)
            .filter(|&i| !w[i][c].is_zero())
            .min_by_key(|&i| w[i][c].num_terms());
        let Some(p) = pivot else { continue };
        w.swap(r, p);
        for i in r + 1..rows {
            if w[i][c].is_zero() {
                // Still need the Bareiss rescale/division for untouched rows.
                for j in c + 1..total {
                    if w[i][j].is_zero() {
                        continue;
                    }
                    let v = (&w[r][c] * &w[i][j]) / prev.clone();
                    w[i][j] = v.expect("Bareiss division is exact");
                }
                continue;
            }
            for j in c + 1..total {
                let v = (&(&w[r][c] * &w[i][j]) - &(&w[i][c] * &w[r][j])) / prev.clone();
                w[i][j] = v.expect("Bareiss division is exact");
            }
            w[i][c] = Scalar::zero();
        }
        prev = w[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon { w, pivots, a_cols }
}

/// Exact rank of a matrix.
pub fn rank(a: &Matrix) -> usize {
    eliminate(a, None).pivots.len()
}

/// Solve `A x = b` exactly for the unique solution.
///
/// `b` may have several columns; the result has one solution column per
/// `b` column. Errors: [`LinalgError::Inconsistent`] when `b` is outside
/// the column span (the residual row is reported) and
/// [`LinalgError::Underdetermined`] when `A` has deficient column rank.
pub fn solve_exact(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::Dimension(format!(
            "A has {} rows, b has {}",
            a.rows(),
            b.rows()
        )));
    }
    let ech = eliminate(a, Some(b));
    solve_from_echelon(&ech, b.cols())
}

fn solve_from_echelon(ech: &Echelon, b_cols: usize) -> Result<Matrix, LinalgError> {
    let a_cols = ech.a_cols;
    let rank = ech.pivots.len();
    // Rows below the pivot rows must have zero B-part, otherwise b is not in
    // the span.
    for i in rank..ech.w.len() {
        if ech.w[i][a_cols..].iter().any(|e| !e.is_zero()) {
            return Err(LinalgError::Inconsistent { row: i });
        }
    }
    if rank < a_cols {
        return Err(LinalgError::Underdetermined { rank, cols: a_cols });
    }
    let mut x = Matrix::zeros(a_cols, b_cols);
    for &(prow, pcol) in ech.pivots.iter().rev() {
        for bc in 0..b_cols {
            let mut acc = ech.w[prow][a_cols + bc].clone();
            for j in pcol + 1..a_cols {
                if ech.w[prow][j].is_zero() {
                    continue;
                }
                acc -= &(&ech.w[prow][j] * x.at(j, bc));
            }
            let v = (acc / ech.w[prow][pcol].clone()).expect("pivot is nonzero");
            *x.at_mut(pcol, bc) = v;
        }
    }
    Ok(x)
}

/// A factored echelon form for solving many right-hand sides against one
/// matrix. Rebuilds the elimination once per call with the rhs attached,
/// reusing the pivot order established on `A` alone would not stay
/// fraction-free, so this simply wraps [`solve_exact`] while exposing the
/// rank certificate up front.
pub struct SpanSolver {
    a: Matrix,
    rank: usize,
}

impl SpanSolver {
    pub fn new(a: Matrix) -> Self {
        let rank = rank(&a);
        SpanSolver { a, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn solve(&self, b: &Matrix) -> Result<Matrix, LinalgError> {
        solve_exact(&self.a, b)
    }
}

// ---------------------------------------------------------------------------
// Tensor4
// ---------------------------------------------------------------------------

/// Dense 4-index tensor of scalars; see the module docs for the index-order
/// convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor4 {
    dims: [usize; 4],
    data: Vec<Scalar>,
}

impl Tensor4 {
    pub fn zeros(dims: [usize; 4]) -> Self {
        Tensor4 { dims, data: vec![Scalar::zero(); dims.iter().product()] }
    }

    pub fn from_fn(dims: [usize; 4], mut f: impl FnMut(usize, usize, usize, usize) -> Scalar) -> Self {
        let mut t = Self::zeros(dims);
        for a in 0..dims[0] {
            for b in 0..dims[1] {
                for c in 0..dims[2] {
                    for d in 0..dims[3] {
                        *t.at_mut(a, b, c, d) = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    /// `delta_{ik} delta_{jl}` on an `n`-dimensional pair.
    pub fn identity_pair(n: usize) -> Self {
        Self::from_fn([n, n, n, n], |i, j, k, l| {
            if i == k && j == l {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dims[1] + b) * self.dims[2] + c) * self.dims[3] + d
    }

    pub fn at(&self, a: usize, b: usize, c: usize, d: usize) -> &Scalar {
        &self.data[self.idx(a, b, c, d)]
    }

    pub fn at_mut(&mut self, a: usize, b: usize, c: usize, d: usize) -> &mut Scalar {
        let i = self.idx(a, b, c, d);
        &mut self.data[i]
    }

    /// Reshape to a matrix with row `(i0, i1)` and column `(i2, i3)`.
    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_fn(self.dims[0] * self.dims[1], self.dims[2] * self.dims[3], |r, c| {
            let (a, b) = (r / self.dims[1], r % self.dims[1]);
            let (cc, d) = (c / self.dims[3], c % self.dims[3]);
            self.at(a, b, cc, d).clone()
        })
    }

    /// Inverse reshape of [`Tensor4::as_matrix`].
    pub fn from_matrix(m: &Matrix, dims: [usize; 4]) -> Self {
        assert_eq!(m.rows(), dims[0] * dims[1]);
        assert_eq!(m.cols(), dims[2] * dims[3]);
        Self::from_fn(dims, |a, b, c, d| m.at(a * dims[1] + b, c * dims[3] + d).clone())
    }

    pub fn add(&self, other: &Tensor4) -> Tensor4 {
        assert_eq!(self.dims, other.dims);
        Tensor4 {
            dims: self.dims,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Tensor4) -> Tensor4 {
        assert_eq!(self.dims, other.dims);
        Tensor4 {
            dims: self.dims,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor4 {
        Tensor4 { dims: self.dims, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

/// Result of a contraction: whatever arity is left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contraction {
    Scalar(Scalar),
    Matrix(Matrix),
    Tensor4(Tensor4),
}

impl Contraction {
    pub fn into_scalar(self) -> Scalar {
        match self {
            Contraction::Scalar(s) => s,
            other => panic!("expected scalar contraction, got {other:?}"),
        }
    }

    pub fn into_matrix(self) -> Matrix {
        match self {
            Contraction::Matrix(m) => m,
            other => panic!("expected matrix contraction, got {other:?}"),
        }
    }

    pub fn into_tensor4(self) -> Tensor4 {
        match self {
            Contraction::Tensor4(t) => t,
            other => panic!("expected rank-4 contraction, got {other:?}"),
        }
    }
}

fn enumerate_multi(dims: &[usize], mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; dims.len()];
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Einstein-style contraction of two tensors over the given index pairs
/// `(index of a, index of b)`. Remaining indices of `a` then `b`, in order,
/// form the result.
pub fn contract_pair(
    a: &Tensor4,
    b: &Tensor4,
    pairs: &[(usize, usize)],
) -> Result<Contraction, LinalgError> {
    for &(ia, ib) in pairs {
        if a.dims()[ia] != b.dims()[ib] {
            return Err(LinalgError::Dimension(format!(
                "contracted pair ({ia},{ib}): {} vs {}",
                a.dims()[ia],
                b.dims()[ib]
            )));
        }
    }
    let a_free: Vec<usize> = (0..4).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
    let b_free: Vec<usize> = (0..4).filter(|i| !pairs.iter().any(|p| p.1 == *i)).collect();
    let free_dims: Vec<usize> = a_free
        .iter()
        .map(|&i| a.dims()[i])
        .chain(b_free.iter().map(|&i| b.dims()[i]))
        .collect();
    let sum_dims: Vec<usize> = pairs.iter().map(|&(ia, _)| a.dims()[ia]).collect();

    let mut out = vec![Scalar::zero(); free_dims.iter().product::<usize>().max(1)];
    enumerate_multi(&free_dims, |free| {
        let mut acc = Scalar::zero();
        enumerate_multi(&sum_dims, |sums| {
            let mut ai = [0usize; 4];
            let mut bi = [0usize; 4];
            for (slot, &axis) in a_free.iter().enumerate() {
                ai[axis] = free[slot];
            }
            for (slot, &axis) in b_free.iter().enumerate() {
                bi[axis] = free[a_free.len() + slot];
            }
            for (k, &(pa, pb)) in pairs.iter().enumerate() {
                ai[pa] = sums[k];
                bi[pb] = sums[k];
            }
            let x = a.at(ai[0], ai[1], ai[2], ai[3]);
            if x.is_zero() {
                return;
            }
            let y = b.at(bi[0], bi[1], bi[2], bi[3]);
            if y.is_zero() {
                return;
            }
            acc += &(x * y);
        });
        let flat = free
            .iter()
            .zip(&free_dims)
            .fold(0usize, |a, (&i, &d)| a * d + i.min(d - 1));
        out[flat] = acc;
    });

    match free_dims.len() {
        0 => Ok(Contraction::Scalar(out.pop().unwrap())),
        2 => {
            let m = Matrix {
                rows: free_dims[0],
                cols: free_dims[1],
                data: out,
            };
            Ok(Contraction::Matrix(m))
        }
        4 => Ok(Contraction::Tensor4(Tensor4 {
            dims: [free_dims[0], free_dims[1], free_dims[2], free_dims[3]],
            data: out,
        })),
        n => Err(LinalgError::Arity(n)),
    }
}

/// Contract pairs of a single tensor's own indices (traces).
pub fn self_contract(t: &Tensor4, pairs: &[(usize, usize)]) -> Result<Contraction, LinalgError> {
    for &(i, j) in pairs {
        if t.dims()[i] != t.dims()[j] {
            return Err(LinalgError::Dimension(format!(
                "traced pair ({i},{j}): {} vs {}",
                t.dims()[i],
                t.dims()[j]
            )));
        }
    }
    let used: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    let free: Vec<usize> = (0..4).filter(|i| !used.contains(i)).collect();
    let free_dims: Vec<usize> = free.iter().map(|&i| t.dims()[i]).collect();
    let sum_dims: Vec<usize> = pairs.iter().map(|&(i, _)| t.dims()[i]).collect();
    let mut out = vec![Scalar::zero(); free_dims.iter().product::<usize>().max(1)];
    enumerate_multi(&free_dims, |fidx| {
        let mut acc = Scalar::zero();
        enumerate_multi(&sum_dims, |sums| {
            let mut ti = [0usize; 4];
            for (slot, &axis) in free.iter().enumerate() {
                ti[axis] = fidx[slot];
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                ti[i] = sums[k];
                ti[j] = sums[k];
            }
            let v = t.at(ti[0], ti[1], ti[2], ti[3]);
            if !v.is_zero() {
                acc += v;
            }
        });
        let flat = fidx
            .iter()
            .zip(&free_dims)
            .fold(0usize, |a, (&i, &d)| a * d + i.min(d - 1));
        out[flat] = acc;
    });
    match free_dims.len() {
        0 => Ok(Contraction::Scalar(out.pop().unwrap())),
        2 => Ok(Contraction::Matrix(Matrix { rows: free_dims[0], cols: free_dims[1], data: out })),
        n => Err(LinalgError::Arity(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_matmul() {
        let a = Matrix::from_fn(3, 3, |i, j| Scalar::q_pow((i + 2 * j) as i64));
        assert_eq!(Matrix::identity(3).matmul(&a), a);
    }

    #[test]
    fn kron_of_units() {
        // e_11 (x) e_22 for n = 2: single 1 at row (1,2), col (1,2).
        let k = Matrix::unit(2, 1, 1).kron(&Matrix::unit(2, 2, 2));
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == 1 && j == 1 { Scalar::one() } else { Scalar::zero() };
                assert_eq!(k.at(i, j), &expect);
            }
        }
    }

    #[test]
    fn trace_of_units() {
        for i in 1..=3 {
            for j in 1..=3 {
                let t = Matrix::unit(3, i, j).trace();
                assert_eq!(t, if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn delta_contracts_to_delta() {
        let d = Tensor4::identity_pair(2);
        // Contract delta's in-pair with delta's out-pair: composition is delta.
        let r = contract_pair(&d, &d, &[(2, 0), (3, 1)]).unwrap().into_tensor4();
        assert_eq!(r, d);
    }

    #[test]
    fn full_self_contraction_counts_pairs() {
        let d = Tensor4::identity_pair(2);
        let r = self_contract(&d, &[(0, 2), (1, 3)]).unwrap().into_scalar();
        assert_eq!(r, Scalar::from_int(4));
    }

    #[test]
    fn solve_identity() {
        let b = Matrix::from_fn(3, 2, |i, j| Scalar::q_pow(i as i64 - j as i64));
        let x = solve_exact(&Matrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_diagonal() {
        let d = Matrix::diagonal(vec![Scalar::q_minus_qinv(), Scalar::q_minus_qinv()]);
        let mut b = Matrix::zeros(2, 1);
        *b.at_mut(0, 0) = Scalar::one();
        let x = solve_exact(&d, &b).unwrap();
        assert_eq!(x.at(0, 0), &Scalar::q_minus_qinv().inv().unwrap());
        assert!(x.at(1, 0).is_zero());
    }

    #[test]
    fn inconsistent_system_reports_row() {
        let mut a = Matrix::zeros(2, 1);
        *a.at_mut(0, 0) = Scalar::one();
        let mut b = Matrix::zeros(2, 1);
        *b.at_mut(1, 0) = Scalar::one();
        match solve_exact(&a, &b) {
            Err(LinalgError::Inconsistent { row }) => assert_eq!(row, 1),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn underdetermined_reported() {
        let a = Matrix::zeros(2, 2);
        let b = Matrix::zeros(2, 1);
        assert!(matches!(solve_exact(&a, &b), Err(LinalgError::Underdetermined { .. })));
    }

    fn small_scalar(seed: i64) -> Scalar {
        match seed.rem_euclid(5) {
            0 => Scalar::zero(),
            1 => Scalar::one(),
            2 => Scalar::q_pow(seed.rem_euclid(3) - 1),
            3 => Scalar::q_minus_qinv(),
            _ => Scalar::from_int(seed.rem_euclid(7) - 3),
        }
    }

    proptest! {
        #[test]
        fn solve_then_substitute(seeds in prop::collection::vec(-20i64..20, 9), rhs in prop::collection::vec(-20i64..20, 3)) {
            let a = Matrix::from_fn(3, 3, |i, j| small_scalar(seeds[i * 3 + j]));
            let b = Matrix::from_fn(3, 1, |i, _| small_scalar(rhs[i]));
            if let Ok(x) = solve_exact(&a, &b) {
                prop_assert_eq!(a.matmul(&x), b);
            }
        }

        #[test]
        fn rank_is_permutation_invariant(seeds in prop::collection::vec(-20i64..20, 12), pr in 0usize..6, pc in 0usize..24) {
            let a = Matrix::from_fn(3, 4, |i, j| small_scalar(seeds[i * 4 + j]));
            // Apply a random row and column transposition.
            let rows = [(0, 1), (0, 2), (1, 2), (0, 0), (1, 1), (2, 2)][pr];
            let cols = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)][pc % 6];
            let b = Matrix::from_fn(3, 4, |i, j| {
                let i2 = if i == rows.0 { rows.1 } else if i == rows.1 { rows.0 } else { i };
                let j2 = if j == cols.0 { cols.1 } else if j == cols.1 { cols.0 } else { j };
                a.at(i2, j2).clone()
            });
            prop_assert_eq!(rank(&a), rank(&b));
        }

        #[test]
        fn contract_matches_naive_loops(seeds in prop::collection::vec(-20i64..20, 32)) {
            let t = Tensor4::from_fn([2, 2, 2, 2], |a, b, c, d| {
                small_scalar(seeds[((a * 2 + b) * 2 + c) * 2 + d])
            });
            let u = Tensor4::from_fn([2, 2, 2, 2], |a, b, c, d| {
                small_scalar(seeds[16 + ((a * 2 + b) * 2 + c) * 2 + d])
            });
            // Contract t's (2,3) against u's (0,1): operator composition.
            let got = contract_pair(&t, &u, &[(2, 0), (3, 1)]).unwrap().into_tensor4();
            let mut expect = Tensor4::zeros([2, 2, 2, 2]);
            for i in 0..2 { for j in 0..2 { for k in 0..2 { for l in 0..2 {
                let mut acc = Scalar::zero();
                for m in 0..2 { for p in 0..2 {
                    acc += &(t.at(i, j, m, p) * u.at(m, p, k, l));
                }}
                *expect.at_mut(i, j, k, l) = acc;
            }}}}
            prop_assert_eq!(got, expect);
        }
    }
}
