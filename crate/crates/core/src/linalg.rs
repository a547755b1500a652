//! Small dense linear-algebra kernel.
//!
//! Vectors and row-major matrices over `f64`, the norms the oracles need, and
//! alternating power iteration for the top singular triple. A full SVD is only
//! used for small matrices (see [`singular_values`]); the large iterates of the
//! matrix-completion problem never go through it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Largest side length for which [`singular_values`] is considered cheap.
pub const SMALL_SVD_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseVector {
    entries: Vec<f64>,
}

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite vector entry at {i}")));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![0.0; dim] }
    }

    /// Unit basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.entries, &other.entries)
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.entries)
    }

    pub fn norm1(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { entries: self.entries.iter().map(|v| c * v).collect() }
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.entries
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries ({rows}x{cols})", rows * cols),
                got: format!("{} entries", entries.len()),
            });
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite matrix entry at {i}")));
        }
        Ok(Self { rows, cols, entries })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, entries.len());
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = *d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// `scale * u vᵀ`.
    pub fn outer(u: &DenseVector, v: &DenseVector, scale: f64) -> Self {
        let (rows, cols) = (u.dim(), v.dim());
        let mut entries = Vec::with_capacity(rows * cols);
        for &ui in u.as_slice() {
            let s = scale * ui;
            entries.extend(v.as_slice().iter().map(|vj| s * vj));
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    pub fn frobenius(&self) -> f64 {
        norm2(&self.entries)
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        dot(&self.entries, &other.entries)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Mᵀ y`, accumulated row by row so the row-major layout is read contiguously.
    pub fn matvec_t(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.row(i)) {
                *o += yi * m;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Top singular value with unit left/right singular vectors.
#[derive(Clone, Debug)]
pub struct SingularTriple {
    pub sigma: f64,
    pub u: DenseVector,
    pub v: DenseVector,
}

impl SingularTriple {
    /// `σ u vᵀ`, the sign-invariant form used for comparisons.
    pub fn rank_one(&self) -> DenseMatrix {
        DenseMatrix::outer(&self.u, &self.v, self.sigma)
    }
}

/// Deterministic Gaussian start vector, normalized.
fn random_unit(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = norm2(&v);
        if n > 0.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Top singular triple by alternating power iteration (`u ← Mv/‖Mv‖`,
/// `v ← Mᵀu/‖Mᵀu‖`), never forming `MᵀM`.
///
/// On return `Mv = σu` holds exactly and `‖Mᵀu − σv‖ ≤ tol·σ`.
pub fn power_iteration(m: &DenseMatrix, tol: f64, max_iters: usize, seed: u64) -> Result<SingularTriple> {
    power_iteration_deflated(m, &[], tol, max_iters, seed)
}

/// Power iteration on `M − Σ σ_i u_i v_iᵀ` without materializing the deflated matrix.
fn power_iteration_deflated(
    m: &DenseMatrix,
    found: &[SingularTriple],
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SingularTriple> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("power iteration tol must be positive, got {tol}")));
    }
    if m.frobenius() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let apply = |v: &[f64]| {
        let mut w = m.matvec(v);
        for t in found {
            let c = t.sigma * dot(t.v.as_slice(), v);
            for (wi, ui) in w.iter_mut().zip(t.u.as_slice()) {
                *wi -= c * ui;
            }
        }
        w
    };
    let apply_t = |u: &[f64]| {
        let mut z = m.matvec_t(u);
        for t in found {
            let c = t.sigma * dot(t.u.as_slice(), u);
            for (zi, vi) in z.iter_mut().zip(t.v.as_slice()) {
                *zi -= c * vi;
            }
        }
        z
    };

    let mut v = random_unit(m.cols(), seed);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        let mut u = apply(&v);
        let sigma = norm2(&u);
        if sigma == 0.0 {
            // start (or deflated operator) has no component left in the range
            return Err(Error::NoConvergence { iters: 0, residual });
        }
        u.iter_mut().for_each(|x| *x /= sigma);
        let mut z = apply_t(&u);
        residual = z.iter().zip(&v).map(|(zi, vi)| (zi - sigma * vi).powi(2)).sum::<f64>().sqrt();
        if residual <= tol * sigma {
            return Ok(SingularTriple {
                sigma,
                u: DenseVector::from_vec_unchecked(u),
                v: DenseVector::from_vec_unchecked(v),
            });
        }
        let zn = norm2(&z);
        z.iter_mut().for_each(|x| *x /= zn);
        v = z;
    }
    Err(Error::NoConvergence { iters: max_iters, residual })
}

/// Leading `k` singular triples by deflated power iteration.
pub fn top_singular_triples(
    m: &DenseMatrix,
    k: usize,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<Vec<SingularTriple>> {
    let mut found: Vec<SingularTriple> = Vec::with_capacity(k);
    for i in 0..k.min(m.rows()).min(m.cols()) {
        match power_iteration_deflated(m, &found, tol, max_iters, seed.wrapping_add(i as u64)) {
            Ok(t) if t.sigma > tol * found.first().map_or(t.sigma, |f| f.sigma) => found.push(t),
            Ok(_) => break,
            Err(Error::NoConvergence { iters: 0, .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(found)
}

/// All singular values in descending order via a dense SVD.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Nuclear norm together with whether it is exact.
///
/// Matrices up to [`SMALL_SVD_LIMIT`] on both sides get a full SVD. Larger ones
/// fall back to the sum of the top `top_k` singular values, which is a lower bound.
pub fn nuclear_norm(m: &DenseMatrix, top_k: usize, seed: u64) -> Result<(f64, bool)> {
    if m.rows() <= SMALL_SVD_LIMIT && m.cols() <= SMALL_SVD_LIMIT {
        return Ok((singular_values(m).iter().sum(), true));
    }
    if m.frobenius() == 0.0 {
        return Ok((0.0, true));
    }
    let triples = top_singular_triples(m, top_k, 1e-8, 20_000, seed)?;
    Ok((triples.iter().map(|t| t.sigma).sum(), false))
}

/// `n × n` orthogonal matrix from modified Gram-Schmidt on a seeded Gaussian matrix.
pub fn random_orthogonal(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut c: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for q in &cols {
                let p = dot(q, &c);
                c.iter_mut().zip(q).for_each(|(ci, qi)| *ci -= p * qi);
            }
        }
        let nrm = norm2(&c);
        if nrm < 1e-8 {
            continue;
        }
        c.iter_mut().for_each(|x| *x /= nrm);
        cols.push(c);
    }
    DenseMatrix::from_fn(n, n, |i, j| cols[j][i])
}
