//! Symplectic bases, transport of vectors of equal length, and lifting of
//! unitary matrices through reductions `A → A/𝔯ʲ`.
//!
//! All constructions are basis manipulations in a fixed ambient coordinate
//! system. Each one checks its postcondition exactly before returning and
//! reports a violation as [`SymplecticError::InternalDefect`].

use crate::galois::ceil_log2;
use crate::linalg::{mat_inv, standard_j, FormSpace, LinalgError, Matrix, Vector};
use crate::ring::{Element, Reduction, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("vectors cannot be extended to a basis (no unit pivot)")]
    NotExtendable,
    #[error("vector is not part of any basis")]
    NotABasisVector,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("pairing is not congruent to 1 modulo the ideal")]
    NotCongruentToOne,
    #[error("Gram matrix of the given vectors is singular")]
    SingularGram,
    #[error("odd rank {0} cannot carry a non-degenerate skew-hermitian form")]
    OddRank(usize),
    #[error("internal defect: {0}")]
    InternalDefect(String),
    #[error("Gram matrix of the approximation is not congruent to the standard one")]
    NotApproximatelySymplectic,
    #[error("matrix is not unitary over the quotient ring")]
    NotUnitaryDownstairs,
    #[error("vectors have different lengths h(u,u) != h(v,v)")]
    LengthMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<RingError> for SymplecticError {
    fn from(e: RingError) -> Self {
        SymplecticError::Linalg(e.into())
    }
}

type Result<T> = std::result::Result<T, SymplecticError>;

fn defect<T>(msg: impl Into<String>) -> Result<T> {
    Err(SymplecticError::InternalDefect(msg.into()))
}

/// `u₁…u_m, v₁…v_m` with `h(uᵢ, vⱼ) = δᵢⱼ` and all other pairings zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub u: Vec<Vector>,
    pub v: Vec<Vector>,
}

impl SymplecticBasis {
    /// `u₁…u_m, v₁…v_m` in that order; its Gram matrix is the standard `J`.
    pub fn vectors(&self) -> Vec<Vector> {
        self.u.iter().chain(&self.v).cloned().collect()
    }

    /// The change-of-basis matrix `X` with these vectors as columns.
    pub fn matrix(&self) -> Matrix {
        let vecs = self.vectors();
        Matrix::from_columns(vecs[0].ring(), &vecs).expect("equal lengths")
    }

    fn from_ordered(vecs: Vec<Vector>) -> SymplecticBasis {
        let m = vecs.len() / 2;
        let mut vecs = vecs;
        let v = vecs.split_off(m);
        SymplecticBasis { u: vecs, v }
    }
}

/// Extends `vecs` to a basis: each vector replaces the lowest-index standard
/// vector still present on which it has a unit coordinate.
/// Output order is `vecs` followed by the surviving standard vectors.
pub fn complete_to_basis(space: &FormSpace, vecs: &[Vector]) -> Result<Vec<Vector>> {
    let ring = space.ring();
    let n = space.rank();
    if vecs.len() > n {
        return Err(SymplecticError::NotExtendable);
    }
    let mut current: Vec<Vector> = (0..n).map(|i| Vector::basis(ring, n, i)).collect();
    let mut standard = vec![true; n];
    for v in vecs {
        if v.dim() != n {
            return Err(LinalgError::DimensionMismatch(format!("vector of length {} in rank {n}", v.dim())).into());
        }
        let frame = Matrix::from_columns(ring, &current)?;
        let coords = mat_inv(&frame)
            .map_err(|_| SymplecticError::InternalDefect("running basis lost invertibility".into()))?
            .mul_vec(v)?;
        let pivot = (0..n)
            .find(|&i| standard[i] && ring.is_unit(coords.get(i)))
            .ok_or(SymplecticError::NotExtendable)?;
        current[pivot] = v.clone();
        standard[pivot] = false;
    }
    let mut out: Vec<Vector> = vecs.to_vec();
    out.extend((0..n).filter(|&i| standard[i]).map(|i| Vector::basis(ring, n, i)));
    Ok(out)
}

/// `w` with `h(v, w) = 1`: complete `v` to a basis `b`, take `a = G⁻¹e₁` for the
/// basis Gram matrix `G` and return `w = Σ bⱼaⱼ`.
pub fn find_unit_partner(space: &FormSpace, v: &Vector) -> Result<Vector> {
    let ring = space.ring();
    let basis = complete_to_basis(space, std::slice::from_ref(v)).map_err(|e| match e {
        SymplecticError::NotExtendable => SymplecticError::NotABasisVector,
        e => e,
    })?;
    let g = space.gram_of(&basis)?;
    let a = mat_inv(&g)?.column(0);
    let w = Matrix::from_columns(ring, &basis)?.mul_vec(&a)?;
    if space.eval(v, &w) != ring.one() {
        return defect("partner does not pair to 1");
    }
    Ok(w)
}

fn congruent(a: &Vector, b: &Vector, j: u32) -> bool {
    a.sub(b).in_radical_power(j)
}

/// An isotropic basis vector `z ≡ v mod V𝔯ʲ`, by repeating
/// `v ← v + w·(−h(v,v)/2)` with `w` a fresh unit partner of `v`.
pub fn make_isotropic(space: &FormSpace, v: &Vector, j: u32) -> Result<Vector> {
    let ring = space.ring();
    let j = j.max(1);
    if !ring.in_radical_power(&space.length(v), j) {
        return Err(SymplecticError::PreconditionFailed(format!(
            "h(v,v) is not in the radical power {j}"
        )));
    }
    let passes = ceil_log2(ring.nilpotency()) + 1;
    let mut z = v.clone();
    for _ in 0..=passes {
        let len = space.length(&z);
        if ring.is_zero(&len) {
            if !congruent(&z, v, j) {
                return defect("isotropic repair left the congruence class");
            }
            return Ok(z);
        }
        let w = find_unit_partner(space, &z)?;
        let b = ring.neg(&ring.half(&len));
        z = z.add(&w.scale(&b));
    }
    defect(format!("length not killed after {passes} passes"))
}

/// `z = v·h(u, v)⁻¹`, so that `h(u, z) = 1`.
pub fn normalize_pairing(space: &FormSpace, u: &Vector, v: &Vector, j: u32) -> Result<Vector> {
    let ring = space.ring();
    let c = space.eval(u, v);
    if !ring.in_radical_power(&ring.sub(&c, &ring.one()), j) {
        return Err(SymplecticError::NotCongruentToOne);
    }
    let z = v.scale(&ring.inv(&c)?);
    if space.eval(u, &z) != ring.one() || !congruent(&z, v, j) {
        return defect("pairing normalization failed");
    }
    Ok(z)
}

/// Given `h(u,u) = 0` and `h(u,v) = 1`, returns `z = u·(h(v,v)/2) + v`,
/// which is isotropic and still pairs to 1 with `u`.
pub fn fix_partner(space: &FormSpace, u: &Vector, v: &Vector) -> Result<Vector> {
    let ring = space.ring();
    if !ring.is_zero(&space.length(u)) || space.eval(u, v) != ring.one() {
        return Err(SymplecticError::PreconditionFailed(
            "fix_partner needs h(u,u) = 0 and h(u,v) = 1".into(),
        ));
    }
    let b = ring.half(&space.length(v));
    let z = u.scale(&b).add(v);
    if !ring.is_zero(&space.length(&z)) || space.eval(u, &z) != ring.one() {
        return defect("partner repair failed");
    }
    Ok(z)
}

/// Replaces each `uᵢ` in `rest` by `wᵢ = uᵢ − Σ vₖaₖ`, `a = M⁻¹(h(vⱼ, uᵢ))ⱼ`,
/// where `M` is the Gram matrix of `vecs`. Every `wᵢ` is orthogonal to every `vⱼ`.
pub fn orthogonal_complement(space: &FormSpace, vecs: &[Vector], rest: &[Vector]) -> Result<Vec<Vector>> {
    let ring = space.ring();
    let m = space.gram_of(vecs)?;
    let m_inv = mat_inv(&m).map_err(|_| SymplecticError::SingularGram)?;
    let frame = Matrix::from_columns(ring, vecs)?;
    let mut out = Vec::with_capacity(rest.len());
    for u in rest {
        let c = Vector::new(ring, vecs.iter().map(|v| space.eval(v, u)).collect())?;
        let a = m_inv.mul_vec(&c)?;
        let w = u.sub(&frame.mul_vec(&a)?);
        if vecs.iter().any(|v| !ring.is_zero(&space.eval(v, &w))) {
            return defect("complement vector not orthogonal");
        }
        out.push(w);
    }
    Ok(out)
}

/// The form restricted to the span of `frame`'s columns, in their coordinates.
fn restrict(space: &FormSpace, frame: &[Vector]) -> Result<FormSpace> {
    FormSpace::new(space.gram_of(frame)?)
        .map_err(|e| SymplecticError::InternalDefect(format!("restricted form invalid: {e}")))
}

fn to_ambient(frame: &[Vector], coords: &Vector) -> Result<Vector> {
    let m = Matrix::from_columns(coords.ring(), frame)?;
    Ok(m.mul_vec(coords)?)
}

/// A symplectic basis, built by splitting off one hyperbolic plane at a time.
pub fn symplectic_basis(space: &FormSpace) -> Result<SymplecticBasis> {
    let ring = space.ring();
    let n = space.rank();
    if !n.is_multiple_of(2) {
        return Err(SymplecticError::OddRank(n));
    }
    let mut frame: Vec<Vector> = (0..n).map(|i| Vector::basis(ring, n, i)).collect();
    let (mut us, mut vs) = (Vec::new(), Vec::new());
    while !frame.is_empty() {
        let sub = restrict(space, &frame)?;
        let r = sub.rank();
        let u = make_isotropic(&sub, &Vector::basis(ring, r, 0), 1)?;
        let w = find_unit_partner(&sub, &u)?;
        let w = fix_partner(&sub, &u, &w)?;
        let pair = [u, w];
        let basis = complete_to_basis(&sub, &pair)?;
        let comp = orthogonal_complement(&sub, &pair, &basis[2..])?;
        us.push(to_ambient(&frame, &pair[0])?);
        vs.push(to_ambient(&frame, &pair[1])?);
        frame = comp
            .iter()
            .map(|c| to_ambient(&frame, c))
            .collect::<Result<_>>()?;
    }
    let basis = SymplecticBasis { u: us, v: vs };
    if space.gram_of(&basis.vectors())? != standard_j(ring, n / 2) {
        return defect("output is not symplectic");
    }
    Ok(basis)
}

/// An exact symplectic basis congruent to `approx` (ordered `u₁…u_m, v₁…v_m`)
/// modulo `V𝔯ʲ`. Pair by pair: make `u` isotropic, normalize the pairing with
/// `v`, repair `v`, split the plane off and continue on its complement.
pub fn correct_basis_mod_ideal(space: &FormSpace, approx: &[Vector], j: u32) -> Result<SymplecticBasis> {
    let ring = space.ring();
    let n = space.rank();
    if approx.len() != n || !n.is_multiple_of(2) {
        return Err(SymplecticError::PreconditionFailed(format!(
            "need {n} approximate vectors in even rank, got {}",
            approx.len()
        )));
    }
    let j = j.max(1);
    let target = standard_j(ring, n / 2);
    if !space.gram_of(approx)?.sub(&target)?.in_radical_power(j) {
        return Err(SymplecticError::NotApproximatelySymplectic);
    }
    let mut frame: Vec<Vector> = approx.to_vec();
    let (mut us, mut vs) = (Vec::new(), Vec::new());
    while !frame.is_empty() {
        let sub = restrict(space, &frame)?;
        let r = sub.rank();
        let half = r / 2;
        let u = make_isotropic(&sub, &Vector::basis(ring, r, 0), j)?;
        let v = normalize_pairing(&sub, &u, &Vector::basis(ring, r, half), j)?;
        let v = fix_partner(&sub, &u, &v)?;
        let rest: Vec<Vector> = (1..r)
            .filter(|&i| i != half)
            .map(|i| Vector::basis(ring, r, i))
            .collect();
        let pair = [u, v];
        let comp = orthogonal_complement(&sub, &pair, &rest)?;
        if comp.iter().zip(&rest).any(|(w, e)| !congruent(w, e, j)) {
            return defect("complement moved outside the congruence class");
        }
        us.push(to_ambient(&frame, &pair[0])?);
        vs.push(to_ambient(&frame, &pair[1])?);
        frame = comp
            .iter()
            .map(|c| to_ambient(&frame, c))
            .collect::<Result<_>>()?;
    }
    let basis = SymplecticBasis { u: us, v: vs };
    let out = basis.vectors();
    if space.gram_of(&out)? != target {
        return defect("corrected basis is not symplectic");
    }
    if out.iter().zip(approx).any(|(a, b)| !congruent(a, b, j)) {
        return defect("corrected basis is not congruent to the approximation");
    }
    Ok(basis)
}

/// The form induced on `V/V𝔯ʲ`.
pub fn reduce_space(space: &FormSpace, red: &Reduction) -> Result<FormSpace> {
    Ok(FormSpace::new(space.gram().reduce(red))?)
}

/// A unitary `X` over `A` reducing to the unitary `x̄` over `A/𝔯ʲ`.
pub fn lift_unitary(space: &FormSpace, xbar: &Matrix, j: u32) -> Result<Matrix> {
    let red = space.ring().quotient_ring(j)?;
    lift_unitary_via(space, xbar, &red)
}

/// As [`lift_unitary`], with the reduction supplied by the caller.
pub fn lift_unitary_via(space: &FormSpace, xbar: &Matrix, red: &Reduction) -> Result<Matrix> {
    let ring = space.ring();
    let j = red.level();
    if red.source() != ring || xbar.ring() != red.target() {
        return Err(RingError::RingMismatch.into());
    }
    let down = reduce_space(space, red)?;
    if !down.is_unitary(xbar)? {
        return Err(SymplecticError::NotUnitaryDownstairs);
    }
    let p = symplectic_basis(space)?.matrix();
    let approx = xbar.lift(red).mul(&p)?;
    let q = correct_basis_mod_ideal(space, &approx.columns(), j)?.matrix();
    let g = q.mul(&mat_inv(&p)?)?;
    if !space.is_unitary(&g)? {
        return defect("lift is not unitary");
    }
    if &g.reduce(red) != xbar {
        return defect("lift does not reduce to the target");
    }
    Ok(g)
}

/// A rank-2 symplectic frame `(x, y)` with `base = x + y·β`; returns `(x, y, β)`.
fn normalized_plane(space: &FormSpace, base: &Vector) -> Result<(Vector, Vector, Element)> {
    let ring = space.ring();
    let partner = find_unit_partner(space, base)?;
    let plane = [base.clone(), partner];
    let sub = restrict(space, &plane)?;
    let sb = symplectic_basis(&sub)?;
    let x = to_ambient(&plane, &sb.u[0])?;
    let y = to_ambient(&plane, &sb.v[0])?;
    // base = x·a + y·b with a = −h(y, base), b = h(x, base)
    let a = ring.neg(&space.eval(&y, base));
    let b = space.eval(&x, base);
    let (x, y, a, b) = if ring.is_unit(&a) {
        (x, y, a, b)
    } else if ring.is_unit(&b) {
        (y, x.neg(), b, ring.neg(&a))
    } else {
        return defect("no unit coefficient in the hyperbolic plane");
    };
    let x = x.scale(&a);
    let y = y.scale(&ring.inv(&ring.star(&a))?);
    let beta = ring.mul(&ring.star(&a), &b);
    if &x.add(&y.scale(&beta)) != base {
        return defect("plane coordinates do not reproduce the vector");
    }
    Ok((x, y, beta))
}

/// Symplectic basis of the orthogonal complement of the plane `(x, y)`.
fn complement_basis(space: &FormSpace, x: &Vector, y: &Vector) -> Result<SymplecticBasis> {
    let pair = [x.clone(), y.clone()];
    let basis = complete_to_basis(space, &pair)?;
    let comp = orthogonal_complement(space, &pair, &basis[2..])?;
    if comp.is_empty() {
        return Ok(SymplecticBasis { u: vec![], v: vec![] });
    }
    let sub = restrict(space, &comp)?;
    let sb = symplectic_basis(&sub)?;
    let map = |vs: &[Vector]| vs.iter().map(|c| to_ambient(&comp, c)).collect::<Result<Vec<_>>>();
    Ok(SymplecticBasis {
        u: map(&sb.u)?,
        v: map(&sb.v)?,
    })
}

/// A unitary `g` with `g·u = v` for basis vectors of equal length.
pub fn transport(space: &FormSpace, u: &Vector, v: &Vector) -> Result<Matrix> {
    let ring = space.ring();
    if space.length(u) != space.length(v) {
        return Err(SymplecticError::LengthMismatch);
    }
    let (x, y, beta) = normalized_plane(space, u)?;
    let (w, z, gamma) = normalized_plane(space, v)?;
    // shear the target plane so both vectors have the same coordinate on y
    let r = ring.sub(&gamma, &beta);
    if !ring.is_hermitian(&r) {
        return defect("coordinate difference is not hermitian");
    }
    let w = w.add(&z.scale(&r));
    let cu = complement_basis(space, &x, &y)?;
    let cv = complement_basis(space, &w, &z)?;
    let frame = |p: Vector, q: Vector, c: SymplecticBasis| {
        let mut vecs = vec![p];
        vecs.extend(c.u);
        vecs.push(q);
        vecs.extend(c.v);
        SymplecticBasis::from_ordered(vecs).matrix()
    };
    let bu = frame(x, y, cu);
    let bv = frame(w, z, cv);
    let g = bv.mul(&mat_inv(&bu)?)?;
    if !space.is_unitary(&g)? {
        return defect("transport matrix is not unitary");
    }
    if &g.mul_vec(u)? != v {
        return defect("transport matrix does not map u to v");
    }
    Ok(g)
}

/// Whether `v` is part of some basis of the ambient module.
pub fn is_basis_vector(space: &FormSpace, v: &Vector) -> bool {
    v.coords().iter().any(|c| space.ring().is_unit(c))
}

#[cfg(test)]
mod tests;
