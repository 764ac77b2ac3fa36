//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Integer matrices carry lattice
//! maps; rational matrices (plain `Vec<Vec<Rational>>`) are only used for
//! solving and rank computations.

mod lattice;
mod normal_form;
pub mod qmat;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use lattice::{
    complete_to_basis, equation_sublattice, extends_to_lattice_basis, kernel_basis, saturate,
    solve_pairing_one, unimodular_inverse, Saturation,
};
pub use normal_form::{hnf, snf, Hnf, Snf};

pub type Int = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vectors do not lie in the lattice")]
    VectorsNotInLattice,
    #[error("covector is not primitive on the lattice (gcd of values is {0})")]
    NotPrimitive(Int),
    #[error("lattice generators are linearly dependent")]
    DependentGenerators,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows<T: Into<Int> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols<T: Into<Int> + Clone>(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(Int::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Columns `range` as a new matrix.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out[(ii, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        self.transpose().vstack(&other.transpose()).transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rational::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = self.row_vecs();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn rank(&self) -> usize {
        qmat::rank(&self.to_rational())
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "IntMatrix{:?}", rows)
    }
}

/// A sublattice of `Z^ambient_rank`, given by independent generator columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    generators: IntMatrix,
    primitive: bool,
}

impl LatticeBasis {
    /// Wraps generator columns. Fails if the columns are dependent.
    pub fn new(generators: IntMatrix) -> Result<Self, LatticeError> {
        if generators.rank() != generators.cols() {
            return Err(LatticeError::DependentGenerators);
        }
        let primitive = lattice::is_saturated(&generators);
        Ok(LatticeBasis {
            generators,
            primitive,
        })
    }

    /// The full lattice `Z^n` with its standard basis.
    pub fn standard(n: usize) -> Self {
        LatticeBasis {
            generators: IntMatrix::identity(n),
            primitive: true,
        }
    }

    pub(crate) fn new_unchecked(generators: IntMatrix, primitive: bool) -> Self {
        LatticeBasis {
            generators,
            primitive,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.generators.rows()
    }

    pub fn rank(&self) -> usize {
        self.generators.cols()
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Whether the sublattice equals its intersection with its rational span.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Coordinates of `v` in this basis, if `v` lies in the rational span.
    pub fn rational_coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        qmat::solve(&self.generators.to_rational(), v)
    }

    /// Integer coordinates of `v`, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        let q: Vec<Rational> = v.iter().cloned().map(Rational::from_integer).collect();
        let c = self.rational_coords(&q)?;
        c.into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }
}

/// Greatest common divisor of a list, always non-negative.
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive_part(v: &[Int]) -> Vec<Int> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction. Returns the vector and the positive factor used
/// (`result = factor * v`).
pub fn primitive_integer_direction(v: &[Rational]) -> (Vec<Int>, Rational) {
    let l = v
        .iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = content(&ints);
    if g.is_zero() {
        return (ints, Rational::one());
    }
    let prim = ints.iter().map(|x| x / &g).collect();
    (prim, Rational::new(l, g))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn to_rational_vec(v: &[Int]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Int::zero(), |s, t| s + t)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rational::zero(), |s, t| s + t)
}

/// Pairing of an integer covector with a rational point.
pub fn dot_mixed(a: &[Int], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, y)| y * x)
        .fold(Rational::zero(), |s, t| s + t)
}
