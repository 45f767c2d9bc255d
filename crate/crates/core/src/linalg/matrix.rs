use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("{rows}x{cols} matrix has no entries")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows of real-imaginary pairs.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flat_map(|row| row.iter().copied()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn diagonal_real(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Projector |psi><psi| onto a (not necessarily normalized) ket.
    pub fn projector(ket: &[Complex64]) -> Self {
        let n = ket.len();
        Self::from_fn(n, n, |i, j| ket[i] * ket[j].conj())
    }

    pub fn pauli_x() -> Self {
        Self { rows: 2, cols: 2, data: vec![ZERO, ONE, ONE, ZERO] }
    }

    pub fn pauli_y() -> Self {
        Self { rows: 2, cols: 2, data: vec![ZERO, -I, I, ZERO] }
    }

    pub fn pauli_z() -> Self {
        Self { rows: 2, cols: 2, data: vec![ONE, ZERO, ZERO, -ONE] }
    }

    /// Two-qubit SWAP in the computational basis.
    pub fn swap() -> Self {
        let mut m = Self::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 2)] = ONE;
        m[(2, 1)] = ONE;
        m[(3, 3)] = ONE;
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate (in the stored basis).
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lhs_row = &self.data[i * self.cols..(i + 1) * self.cols];
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `A - A^dagger`; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Replaces `A` by `(A + A^dagger) / 2`.
    pub fn hermitize(&mut self) {
        assert!(self.is_square(), "hermitize needs a square matrix");
        let n = self.rows;
        for i in 0..n {
            let d = self.data[i * n + i];
            self.data[i * n + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .matmul(&self.adjoint())
                .map(|p| p.max_abs_diff(&Self::identity(self.rows)) <= tol)
                .unwrap_or(false)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..a.rows {
        for k in 0..b.rows {
            for j in 0..a.cols {
                let aij = a[(i, j)];
                data.extend(b.data[k * b.cols..(k + 1) * b.cols].iter().map(|&bkl| aij * bkl));
            }
        }
    }
    ComplexMatrix { rows, cols, data }
}

/// Kronecker product of a sequence of factors, leftmost most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = factors.into_iter();
    let first = it.next().expect("kron_all needs at least one factor").clone();
    it.fold(first, |acc, f| kron(&acc, f))
}

/// Scatters the bits of `local` (most significant first) onto the qubit
/// positions `targets` of an `n`-qubit index. Position 0 is the most
/// significant qubit.
#[inline]
fn scatter_bits(local: usize, targets: &[usize], n: usize) -> usize {
    let k = targets.len();
    let mut out = 0;
    for (b, &t) in targets.iter().enumerate() {
        if (local >> (k - 1 - b)) & 1 == 1 {
            out |= 1 << (n - 1 - t);
        }
    }
    out
}

/// Enumerates the full-space offsets of all indices whose bits on `targets`
/// are zero, i.e. the complement subspace.
fn complement_offsets(targets: &[usize], n: usize) -> Vec<usize> {
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    (0..1usize << rest.len()).map(|r| scatter_bits(r, &rest, n)).collect()
}

fn check_targets(targets: &[usize], n: usize, gate_dim: usize) -> Result<()> {
    if 1usize << targets.len() != gate_dim {
        return Err(Error::Shape(format!(
            "{gate_dim}x{gate_dim} operator cannot act on {} qubits",
            targets.len()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n || targets[..i].contains(&t) {
            return Err(Error::Shape(format!("bad target qubit list {targets:?} for {n} qubits")));
        }
    }
    Ok(())
}

/// Embeds an operator acting on `targets` into the full `n`-qubit space,
/// identity elsewhere.
pub fn embed(op: &ComplexMatrix, targets: &[usize], n: usize) -> Result<ComplexMatrix> {
    if !op.is_square() {
        return Err(Error::Shape("embedded operator must be square".into()));
    }
    check_targets(targets, n, op.rows)?;
    let dim = 1usize << n;
    let local: Vec<usize> = (0..op.rows).map(|a| scatter_bits(a, targets, n)).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for base in complement_offsets(targets, n) {
        for (a, &la) in local.iter().enumerate() {
            for (b, &lb) in local.iter().enumerate() {
                out[(base | la, base | lb)] = op[(a, b)];
            }
        }
    }
    Ok(out)
}

/// In-place `rho -> U rho U^dagger` for a unitary `u` acting on the qubit
/// positions `targets` of an `n`-qubit square matrix. Costs `O(4^n 2^k)`
/// instead of the `O(8^n)` of a full embedded product.
pub fn conjugate_local(rho: &mut ComplexMatrix, u: &ComplexMatrix, targets: &[usize], n: usize) -> Result<()> {
    let dim = 1usize << n;
    if rho.rows != dim || rho.cols != dim {
        return Err(Error::Shape(format!("expected {dim}x{dim} operand, got {}x{}", rho.rows, rho.cols)));
    }
    if !u.is_square() {
        return Err(Error::Shape("local operator must be square".into()));
    }
    check_targets(targets, n, u.rows)?;
    let k = u.rows;
    let local: Vec<usize> = (0..k).map(|a| scatter_bits(a, targets, n)).collect();
    let bases = complement_offsets(targets, n);
    let mut buf = vec![ZERO; k];

    // Left action on rows.
    for col in 0..dim {
        for &base in &bases {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = rho.data[(base | local[a]) * dim + col];
            }
            for a in 0..k {
                let mut acc = ZERO;
                for (b, &v) in buf.iter().enumerate() {
                    acc += u.data[a * k + b] * v;
                }
                rho.data[(base | local[a]) * dim + col] = acc;
            }
        }
    }
    // Right action by U^dagger on columns.
    for row in 0..dim {
        let r = &mut rho.data[row * dim..(row + 1) * dim];
        for &base in &bases {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = r[base | local[a]];
            }
            for a in 0..k {
                let mut acc = ZERO;
                for (b, &v) in buf.iter().enumerate() {
                    acc += v * u.data[a * k + b].conj();
                }
                r[base | local[a]] = acc;
            }
        }
    }
    Ok(())
}

/// Sums out every qubit not listed in `keep` (positions sorted ascending).
/// Works on arbitrary square operators, not only density matrices.
pub(crate) fn trace_out_positions(m: &ComplexMatrix, keep: &[usize], n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    debug_assert!(m.rows == dim && m.cols == dim);
    let kept: Vec<usize> = (0..1usize << keep.len()).map(|a| scatter_bits(a, keep, n)).collect();
    let traced = complement_offsets(keep, n);
    let kd = kept.len();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for (a, &fa) in kept.iter().enumerate() {
        for (b, &fb) in kept.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced {
                acc += m.data[(fa | t) * dim + (fb | t)];
            }
            out.data[a * kd + b] = acc;
        }
    }
    out
}
