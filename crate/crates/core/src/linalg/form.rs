use super::{dim_err, mat_inv, LinalgError, Matrix, Vector};
use crate::ring::{Element, Ring};

/// A free right module `Aⁿ` with a non-degenerate skew-hermitian form
/// `h(u, v) = Σ uᵢ* Jᵢⱼ vⱼ`, `*`-linear in `u` and linear in `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    ring: Ring,
    gram: Matrix,
    gram_inv: Matrix,
}

impl FormSpace {
    /// Checks `J* = −J` and invertibility of `J`.
    pub fn new(gram: Matrix) -> Result<FormSpace, LinalgError> {
        if !gram.is_square() || gram.rows() == 0 {
            return dim_err(format!("Gram matrix is {}x{}", gram.rows(), gram.cols()));
        }
        if gram.star_transpose() != gram.neg() {
            return Err(LinalgError::NotSkewHermitian);
        }
        let gram_inv = match mat_inv(&gram) {
            Ok(inv) => inv,
            Err(LinalgError::Singular) => return Err(LinalgError::Degenerate),
            Err(e) => return Err(e),
        };
        Ok(FormSpace {
            ring: gram.ring().clone(),
            gram,
            gram_inv,
        })
    }

    /// Rank `2m` with `J = [[0, I], [−I, 0]]`: `eᵢ` pairs with `e_{m+i}`.
    pub fn standard(ring: &Ring, m: usize) -> FormSpace {
        assert!(m >= 1, "standard form needs m >= 1");
        FormSpace::new(standard_j(ring, m)).expect("standard form is valid")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &Matrix {
        &self.gram_inv
    }

    fn check_vec(&self, v: &Vector) -> Result<(), LinalgError> {
        if v.dim() != self.rank() {
            return dim_err(format!("vector of length {} in rank {}", v.dim(), self.rank()));
        }
        if v.ring() != &self.ring {
            return Err(crate::ring::RingError::RingMismatch.into());
        }
        Ok(())
    }

    /// `h(u, v)`
    pub fn form_eval(&self, u: &Vector, v: &Vector) -> Result<Element, LinalgError> {
        self.check_vec(u)?;
        self.check_vec(v)?;
        Ok(self.eval(u, v))
    }

    pub(crate) fn eval(&self, u: &Vector, v: &Vector) -> Element {
        let r = &self.ring;
        let n = self.rank();
        let mut acc = r.zero();
        for i in 0..n {
            let ui = r.star(u.get(i));
            if r.is_zero(&ui) {
                continue;
            }
            let mut row = r.zero();
            for j in 0..n {
                row = r.add(&row, &r.mul(self.gram.get(i, j), v.get(j)));
            }
            acc = r.add(&acc, &r.mul(&ui, &row));
        }
        acc
    }

    /// `h(v, v)`, always skew-hermitian.
    pub fn length(&self, v: &Vector) -> Element {
        self.eval(v, v)
    }

    /// `Mᵢⱼ = h(vᵢ, vⱼ)`; equals `X*JX` where `X` has the `vᵢ` as columns.
    pub fn gram_of(&self, vecs: &[Vector]) -> Result<Matrix, LinalgError> {
        for v in vecs {
            self.check_vec(v)?;
        }
        let x = Matrix::from_columns(&self.ring, vecs)?;
        if vecs.is_empty() {
            return Ok(Matrix::zeros(&self.ring, 0, 0));
        }
        x.star_transpose().mul(&self.gram)?.mul(&x)
    }

    /// `X*JX = J`
    pub fn is_unitary(&self, x: &Matrix) -> Result<bool, LinalgError> {
        if !x.is_square() || x.rows() != self.rank() {
            return dim_err(format!("{}x{} matrix on rank {}", x.rows(), x.cols(), self.rank()));
        }
        Ok(x.star_transpose().mul(&self.gram)?.mul(x)? == self.gram)
    }

    /// The vector `v ↦ h(v, ·)` in coordinates: `J*·v*`, so that `h(v, w) = Σ cᵢ wᵢ`.
    pub fn covector(&self, v: &Vector) -> Vec<Element> {
        let r = &self.ring;
        let n = self.rank();
        (0..n)
            .map(|j| {
                (0..n).fold(r.zero(), |acc, i| {
                    r.add(&acc, &r.mul(&r.star(v.get(i)), self.gram.get(i, j)))
                })
            })
            .collect()
    }
}

pub fn standard_j(ring: &Ring, m: usize) -> Matrix {
    let mut j = Matrix::zeros(ring, 2 * m, 2 * m);
    for i in 0..m {
        j.set(i, m + i, ring.one());
        j.set(m + i, i, ring.neg(&ring.one()));
    }
    j
}
