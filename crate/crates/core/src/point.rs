//! The optimization variable: a dense vector or a dense matrix.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, DenseMatrix, DenseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Vector(usize),
    Matrix(usize, usize),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Vector(n) => write!(f, "vector({n})"),
            Shape::Matrix(r, c) => write!(f, "matrix({r}x{c})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Vector(DenseVector),
    Matrix(DenseMatrix),
}

impl Point {
    pub fn zeros(shape: Shape) -> Self {
        match shape {
            Shape::Vector(n) => Point::Vector(DenseVector::zeros(n)),
            Shape::Matrix(r, c) => Point::Matrix(DenseMatrix::zeros(r, c)),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Point::Vector(v) => Shape::Vector(v.dim()),
            Point::Matrix(m) => Shape::Matrix(m.rows(), m.cols()),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        match self {
            Point::Vector(v) => v.as_slice(),
            Point::Matrix(m) => m.as_slice(),
        }
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        match self {
            Point::Vector(v) => v.as_mut_slice(),
            Point::Matrix(m) => m.as_mut_slice(),
        }
    }

    pub fn as_vector(&self) -> Option<&DenseVector> {
        match self {
            Point::Vector(v) => Some(v),
            Point::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&DenseMatrix> {
        match self {
            Point::Matrix(m) => Some(m),
            Point::Vector(_) => None,
        }
    }

    pub fn check_shape(&self, expected: Shape) -> Result<()> {
        if self.shape() == expected {
            Ok(())
        } else {
            Err(Error::ShapeMismatch { expected: expected.to_string(), got: self.shape().to_string() })
        }
    }

    /// Euclidean inner product (Frobenius for matrices).
    pub fn inner(&self, other: &Point) -> Result<f64> {
        other.check_shape(self.shape())?;
        Ok(dot(self.as_slice(), other.as_slice()))
    }

    /// Euclidean norm (Frobenius for matrices).
    pub fn norm(&self) -> f64 {
        norm2(self.as_slice())
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Point, b: f64) -> Result<Point> {
        other.check_shape(self.shape())?;
        let mut out = self.clone();
        for (o, y) in out.as_mut_slice().iter_mut().zip(other.as_slice()) {
            *o = a * *o + b * y;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, c: f64) -> Point {
        let mut out = self.clone();
        out.as_mut_slice().iter_mut().for_each(|v| *v *= c);
        out
    }
}

impl From<DenseVector> for Point {
    fn from(v: DenseVector) -> Self {
        Point::Vector(v)
    }
}

impl From<DenseMatrix> for Point {
    fn from(m: DenseMatrix) -> Self {
        Point::Matrix(m)
    }
}
