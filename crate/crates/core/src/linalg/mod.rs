//! Matrices and coordinate vectors over a ring with involution.
//!
//! Modules are right modules: a vector is a column of coordinates in a fixed
//! ambient basis and scalars act on the right, `v·a`. Products keep their
//! order, so everything here is valid over noncommutative rings.

mod form;
mod text;

use std::fmt;

use crate::galois::ceil_log2;
use crate::ring::{Element, Reduction, Ring, RingError};

pub use form::{standard_j, FormSpace};
pub use text::{
    format_element, format_matrix, format_vector, parse_element, parse_matrix, parse_vector,
    TextError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular modulo the radical")]
    Singular,
    #[error("Gram matrix is not skew-hermitian")]
    NotSkewHermitian,
    #[error("form is degenerate (Gram matrix not invertible)")]
    Degenerate,
    #[error("exact inverse check failed after radical lifting")]
    LiftFailed,
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn dim_err<T>(what: String) -> Result<T, LinalgError> {
    Err(LinalgError::DimensionMismatch(what))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    ring: Ring,
    coords: Vec<Element>,
}

impl Vector {
    pub fn new(ring: &Ring, coords: Vec<Element>) -> Result<Vector, LinalgError> {
        for c in &coords {
            ring.check(c)?;
        }
        Ok(Vector {
            ring: ring.clone(),
            coords,
        })
    }

    pub fn zero(ring: &Ring, n: usize) -> Vector {
        Vector {
            ring: ring.clone(),
            coords: vec![ring.zero(); n],
        }
    }

    /// The standard basis vector `eᵢ` (zero-based).
    pub fn basis(ring: &Ring, n: usize, i: usize) -> Vector {
        let mut v = Vector::zero(ring, n);
        v.coords[i] = ring.one();
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Element] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.coords[i]
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(&Element, &Element) -> Element) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimensions differ");
        Vector {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Vector {
        Vector {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|a| self.ring.neg(a)).collect(),
        }
    }

    /// Right scalar multiplication `v·a`.
    pub fn scale(&self, a: &Element) -> Vector {
        Vector {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|c| self.ring.mul(c, a)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.ring.is_zero(c))
    }

    /// Every coordinate lies in `𝔯ʲ`, i.e. `v ∈ V·𝔯ʲ`.
    pub fn in_radical_power(&self, j: u32) -> bool {
        self.coords.iter().all(|c| self.ring.in_radical_power(c, j))
    }

    pub fn reduce(&self, red: &Reduction) -> Vector {
        Vector {
            ring: red.target().clone(),
            coords: self.coords.iter().map(|c| red.apply(c)).collect(),
        }
    }

    pub fn lift(&self, red: &Reduction) -> Vector {
        Vector {
            ring: red.source().clone(),
            coords: self.coords.iter().map(|c| red.lift(c)).collect(),
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Element]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Element>>) -> Result<Matrix, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return dim_err("ragged rows".into());
        }
        let data: Vec<Element> = rows.into_iter().flatten().collect();
        for a in &data {
            ring.check(a)?;
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(ring: &Ring, cols: &[Vector]) -> Result<Matrix, LinalgError> {
        let n = cols.first().map_or(0, Vector::dim);
        if cols.iter().any(|v| v.dim() != n) {
            return dim_err("columns of different lengths".into());
        }
        let mut m = Matrix::zeros(ring, n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, c) in v.coords.iter().enumerate() {
                ring.check(c)?;
                m.set(i, j, *c);
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Element] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Element) {
        self.data[i * self.cols + j] = a;
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            ring: self.ring.clone(),
            coords: (0..self.rows).map(|i| *self.get(i, j)).collect(),
        }
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    fn map(&self, f: impl Fn(&Element) -> Element) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn same_shape(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch.into());
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return dim_err(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = self.ring.add(a, b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = self.ring.sub(a, b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        self.map(|a| self.ring.neg(a))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch.into());
        }
        if self.cols != other.rows {
            return dim_err(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = r.zero();
                for l in 0..self.cols {
                    acc = r.add(&acc, &r.mul(self.get(i, l), other.get(l, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if self.cols != v.dim() {
            return dim_err(format!("{}x{} times vector of length {}", self.rows, self.cols, v.dim()));
        }
        let r = &self.ring;
        let coords = (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(r.zero(), |acc, l| r.add(&acc, &r.mul(self.get(i, l), v.get(l))))
            })
            .collect();
        Ok(Vector {
            ring: r.clone(),
            coords,
        })
    }

    /// `(X*)ᵢⱼ = (Xⱼᵢ)*`
    pub fn star_transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.ring.star(self.get(i, j)));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, *self.get(i, j));
            }
        }
        out
    }

    /// Right scalar multiplication of every entry.
    pub fn scale(&self, a: &Element) -> Matrix {
        self.map(|x| self.ring.mul(x, a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let want = if i == j { self.ring.one() } else { self.ring.zero() };
                    *self.get(i, j) == want
                })
            })
    }

    /// Every entry lies in `𝔯ʲ`.
    pub fn in_radical_power(&self, j: u32) -> bool {
        self.data.iter().all(|a| self.ring.in_radical_power(a, j))
    }

    pub fn reduce(&self, red: &Reduction) -> Matrix {
        Matrix {
            ring: red.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| red.apply(a)).collect(),
        }
    }

    /// Canonical coset representatives of a matrix over the quotient.
    pub fn lift(&self, red: &Reduction) -> Matrix {
        Matrix {
            ring: red.source().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| red.lift(a)).collect(),
        }
    }

    /// The image in `M(F_q)`.
    pub fn residue(&self) -> Matrix {
        let field = self.ring.residue_field();
        Matrix {
            ring: field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.canonical(a.c0(), a.c1())).collect(),
        }
    }

    /// Two-sided inverse; see [`mat_inv`].
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        mat_inv(self)
    }
}

pub fn mat_mul(x: &Matrix, y: &Matrix) -> Result<Matrix, LinalgError> {
    x.mul(y)
}

pub fn mat_add(x: &Matrix, y: &Matrix) -> Result<Matrix, LinalgError> {
    x.add(y)
}

pub fn star_transpose(x: &Matrix) -> Matrix {
    x.star_transpose()
}

/// Gauss-Jordan over a field.
fn field_inverse(x: &Matrix) -> Result<Matrix, LinalgError> {
    let f = x.ring.clone();
    let n = x.rows;
    let mut a = x.clone();
    let mut inv = Matrix::identity(&f, n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| f.is_unit(a.get(r, col))).ok_or(LinalgError::Singular)?;
        if pivot != col {
            for j in 0..n {
                a.data.swap(pivot * n + j, col * n + j);
                inv.data.swap(pivot * n + j, col * n + j);
            }
        }
        let s = f.inv(a.get(col, col))?;
        for j in 0..n {
            a.set(col, j, f.mul(&s, a.get(col, j)));
            inv.set(col, j, f.mul(&s, inv.get(col, j)));
        }
        for r in 0..n {
            if r == col || f.is_zero(a.get(r, col)) {
                continue;
            }
            let factor = *a.get(r, col);
            for j in 0..n {
                let av = f.sub(a.get(r, j), &f.mul(&factor, a.get(col, j)));
                a.set(r, j, av);
                let iv = f.sub(inv.get(r, j), &f.mul(&factor, inv.get(col, j)));
                inv.set(r, j, iv);
            }
        }
    }
    Ok(inv)
}

/// Invert over the residue field, lift the representatives, then run
/// `Y ← Y(2 − XY)` for `⌈log₂ e⌉` rounds. The result is checked on both sides.
pub fn mat_inv(x: &Matrix) -> Result<Matrix, LinalgError> {
    if !x.is_square() {
        return dim_err(format!("cannot invert a {}x{} matrix", x.rows, x.cols));
    }
    let ring = &x.ring;
    let n = x.rows;
    let field_inv = field_inverse(&x.residue())?;
    let mut y = Matrix::zeros(ring, n, n);
    for (dst, src) in y.data.iter_mut().zip(&field_inv.data) {
        *dst = ring.canonical(src.c0(), src.c1());
    }
    let two = Matrix::identity(ring, n).scale(&ring.from_int(2));
    for _ in 0..ceil_log2(ring.nilpotency()) {
        let xy = x.mul(&y)?;
        y = y.mul(&two.sub(&xy)?)?;
    }
    if !x.mul(&y)?.is_identity() || !y.mul(x)?.is_identity() {
        return Err(LinalgError::LiftFailed);
    }
    Ok(y)
}

/// The rank-`2m` space with the standard block Gram matrix.
pub fn standard_gram(ring: &Ring, m: usize) -> FormSpace {
    FormSpace::standard(ring, m)
}

pub fn is_invertible(x: &Matrix) -> bool {
    x.is_square() && field_inverse(&x.residue()).is_ok()
}
