//! Seeded random matrices for property tests, the CLI and the acceptance suite.

use rand::Rng;

use crate::linalg::{is_invertible, FormSpace, Matrix, Vector};
use crate::ring::Ring;
use crate::symplectic::{symplectic_basis, SymplecticError};

pub fn random_matrix<R: Rng + ?Sized>(ring: &Ring, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| ring.random_element(rng)).collect())
        .collect();
    Matrix::from_rows(ring, data).expect("rectangular")
}

pub fn random_vector<R: Rng + ?Sized>(ring: &Ring, n: usize, rng: &mut R) -> Vector {
    Vector::new(ring, (0..n).map(|_| ring.random_element(rng)).collect()).expect("same ring")
}

/// Rejection sampling; the acceptance rate is the density of `GLₙ(F_q)`, at least 1/4.
pub fn random_invertible<R: Rng + ?Sized>(ring: &Ring, n: usize, rng: &mut R) -> Matrix {
    loop {
        let x = random_matrix(ring, n, n, rng);
        if is_invertible(&x) {
            return x;
        }
    }
}

/// A random unitary for the standard form: `Y·P` where `Y` is random invertible
/// and `P` is a symplectic basis of the form with Gram matrix `Y*JY`.
pub fn random_unitary<R: Rng + ?Sized>(space: &FormSpace, rng: &mut R) -> Result<Matrix, SymplecticError> {
    let ring = space.ring();
    let n = space.rank();
    let y = random_invertible(ring, n, rng);
    let pulled = FormSpace::new(y.star_transpose().mul(space.gram())?.mul(&y)?)?;
    let p = symplectic_basis(&pulled)?.matrix();
    let g = y.mul(&p)?;
    // g*Jg = P*(Y*JY)P is the standard J, which equals J only for the standard form
    if !space.is_unitary(&g)? {
        return Err(SymplecticError::PreconditionFailed(
            "random_unitary needs the standard Gram matrix".into(),
        ));
    }
    Ok(g)
}

/// A random basis vector (some coordinate is a unit).
pub fn random_basis_vector<R: Rng + ?Sized>(ring: &Ring, n: usize, rng: &mut R) -> Vector {
    loop {
        let v = random_vector(ring, n, rng);
        if v.coords().iter().any(|c| ring.is_unit(c)) {
            return v;
        }
    }
}
