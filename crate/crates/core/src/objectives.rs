//! Smooth convex objectives with analytic gradients.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{dot, DenseMatrix, DenseVector};
use crate::point::{Point, Shape};

pub trait Objective: Send + Sync {
    /// Shape of the optimization variable.
    fn shape(&self) -> Shape;
    fn value(&self, x: &Point) -> Result<f64>;
    fn gradient(&self, x: &Point) -> Result<Point>;
}

/// Huber loss in the unhalved form: `c²` on `|c| ≤ δ`, `2δ|c| − δ²` outside.
pub fn huber(c: f64, delta: f64) -> f64 {
    if c.abs() <= delta {
        c * c
    } else {
        2.0 * delta * c.abs() - delta * delta
    }
}

pub fn huber_grad(c: f64, delta: f64) -> f64 {
    if c.abs() <= delta {
        2.0 * c
    } else {
        2.0 * delta * c.signum()
    }
}

/// `log(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    (-t.abs()).exp().ln_1p() + t.max(0.0)
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn vector_arg(x: &Point, dim: usize) -> Result<&[f64]> {
    x.check_shape(Shape::Vector(dim))?;
    Ok(x.as_slice())
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Huber delta must be positive, got {delta}")))
    }
}

/// `(1/m) Σ log(1 + exp(−b_i ⟨a_i, x⟩))` with labels `b_i ∈ {−1, +1}`.
#[derive(Clone, Debug)]
pub struct LogisticObjective {
    features: DenseMatrix,
    labels: Vec<f64>,
}

impl LogisticObjective {
    pub fn new(features: DenseMatrix, labels: Vec<f64>) -> Result<Self> {
        if features.rows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != features.rows() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} labels", features.rows()),
                got: format!("{} labels", labels.len()),
            });
        }
        if let Some(b) = labels.iter().find(|&&b| b != 1.0 && b != -1.0) {
            return Err(Error::InvalidArgument(format!("logistic labels must be ±1, found {b}")));
        }
        Ok(Self { features, labels })
    }
}

impl Objective for LogisticObjective {
    fn shape(&self) -> Shape {
        Shape::Vector(self.features.cols())
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let x = vector_arg(x, self.features.cols())?;
        let z = self.features.matvec(x);
        let total: f64 = z.iter().zip(&self.labels).map(|(zi, b)| softplus(-b * zi)).sum();
        Ok(total / self.labels.len() as f64)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        let x = vector_arg(x, self.features.cols())?;
        let m = self.labels.len() as f64;
        let z = self.features.matvec(x);
        let w: Vec<f64> = z.iter().zip(&self.labels).map(|(zi, b)| -b * sigmoid(-b * zi) / m).collect();
        Ok(Point::Vector(DenseVector::from_vec_unchecked(self.features.matvec_t(&w))))
    }
}

/// `(1/m) Σ H_δ(y_i − ⟨a_i, x⟩)`.
#[derive(Clone, Debug)]
pub struct HuberRidgeObjective {
    features: DenseMatrix,
    targets: Vec<f64>,
    delta: f64,
}

impl HuberRidgeObjective {
    pub fn new(features: DenseMatrix, targets: Vec<f64>, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if features.rows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if targets.len() != features.rows() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} targets", features.rows()),
                got: format!("{} targets", targets.len()),
            });
        }
        Ok(Self { features, targets, delta })
    }
}

impl Objective for HuberRidgeObjective {
    fn shape(&self) -> Shape {
        Shape::Vector(self.features.cols())
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let x = vector_arg(x, self.features.cols())?;
        let pred = self.features.matvec(x);
        let total: f64 = pred.iter().zip(&self.targets).map(|(p, y)| huber(y - p, self.delta)).sum();
        Ok(total / self.targets.len() as f64)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        let x = vector_arg(x, self.features.cols())?;
        let m = self.targets.len() as f64;
        let pred = self.features.matvec(x);
        let w: Vec<f64> = pred.iter().zip(&self.targets).map(|(p, y)| -huber_grad(y - p, self.delta) / m).collect();
        Ok(Point::Vector(DenseVector::from_vec_unchecked(self.features.matvec_t(&w))))
    }
}

/// `Σ_{(i,j) ∈ Ω} H_δ(A_ij − X_ij)`, unaveraged.
#[derive(Clone, Debug)]
pub struct MatrixCompletionObjective {
    observed: Vec<(usize, usize, f64)>,
    rows: usize,
    cols: usize,
    delta: f64,
}

impl MatrixCompletionObjective {
    pub fn new(observed: Vec<(usize, usize, f64)>, shape: (usize, usize), delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let (rows, cols) = shape;
        let mut seen = HashSet::with_capacity(observed.len());
        for &(i, j, a) in &observed {
            if i >= rows || j >= cols {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside {rows}x{cols}")));
            }
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite observation at ({i}, {j})")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidArgument(format!("duplicate observation at ({i}, {j})")));
            }
        }
        Ok(Self { observed, rows, cols, delta })
    }

    pub fn observed(&self) -> &[(usize, usize, f64)] {
        &self.observed
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn matrix_arg<'a>(&self, x: &'a Point) -> Result<&'a DenseMatrix> {
        x.check_shape(Shape::Matrix(self.rows, self.cols))?;
        Ok(x.as_matrix().expect("shape checked"))
    }
}

impl Objective for MatrixCompletionObjective {
    fn shape(&self) -> Shape {
        Shape::Matrix(self.rows, self.cols)
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let x = self.matrix_arg(x)?;
        Ok(self.observed.iter().map(|&(i, j, a)| huber(a - x.get(i, j), self.delta)).sum())
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        let x = self.matrix_arg(x)?;
        let mut g = DenseMatrix::zeros(self.rows, self.cols);
        for &(i, j, a) in &self.observed {
            g.set(i, j, -huber_grad(a - x.get(i, j), self.delta));
        }
        Ok(Point::Matrix(g))
    }
}

/// `Σ_test H_δ(A_ij − X_ij) / Σ_test H_δ(A_ij)`: 1 for the zero predictor, 0 for a perfect one.
pub fn normalized_test_error(test: &MatrixCompletionObjective, x: &DenseMatrix) -> Result<f64> {
    if x.shape() != (test.rows, test.cols) {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", test.rows, test.cols),
            got: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &(i, j, a) in &test.observed {
        num += huber(a - x.get(i, j), test.delta);
        den += huber(a, test.delta);
    }
    if den <= 0.0 {
        return Err(Error::DegenerateTestSet);
    }
    Ok(num / den)
}

/// `½ xᵀQx + ⟨c, x⟩ + offset` with symmetric PSD `Q`.
#[derive(Clone, Debug)]
pub struct QuadraticObjective {
    psd_matrix: DenseMatrix,
    linear: DenseVector,
    offset: f64,
}

impl QuadraticObjective {
    pub fn new(psd_matrix: DenseMatrix, linear: DenseVector, offset: f64) -> Result<Self> {
        let d = psd_matrix.rows();
        if psd_matrix.cols() != d || linear.dim() != d {
            return Err(Error::ShapeMismatch {
                expected: format!("{d}x{d} matrix and length-{d} vector"),
                got: format!("{}x{} and {}", psd_matrix.rows(), psd_matrix.cols(), linear.dim()),
            });
        }
        for i in 0..d {
            for j in 0..i {
                let (a, b) = (psd_matrix.get(i, j), psd_matrix.get(j, i));
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::InvalidArgument(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { psd_matrix, linear, offset })
    }

    pub fn psd_matrix(&self) -> &DenseMatrix {
        &self.psd_matrix
    }

    pub fn linear(&self) -> &DenseVector {
        &self.linear
    }
}

impl Objective for QuadraticObjective {
    fn shape(&self) -> Shape {
        Shape::Vector(self.linear.dim())
    }

    fn value(&self, x: &Point) -> Result<f64> {
        let x = vector_arg(x, self.linear.dim())?;
        let qx = self.psd_matrix.matvec(x);
        Ok(0.5 * dot(x, &qx) + dot(self.linear.as_slice(), x) + self.offset)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        let x = vector_arg(x, self.linear.dim())?;
        let mut g = self.psd_matrix.matvec(x);
        g.iter_mut().zip(self.linear.as_slice()).for_each(|(gi, ci)| *gi += ci);
        Ok(Point::Vector(DenseVector::from_vec_unchecked(g)))
    }
}

/// `⟨c, x⟩`, with `L = 0`.
#[derive(Clone, Debug)]
pub struct LinearObjective {
    coeffs: Point,
}

impl LinearObjective {
    pub fn new(coeffs: Point) -> Self {
        Self { coeffs }
    }
}

impl Objective for LinearObjective {
    fn shape(&self) -> Shape {
        self.coeffs.shape()
    }

    fn value(&self, x: &Point) -> Result<f64> {
        self.coeffs.inner(x)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        x.check_shape(self.coeffs.shape())?;
        Ok(self.coeffs.clone())
    }
}
