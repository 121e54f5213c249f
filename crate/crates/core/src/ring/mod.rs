//! Finite local rings with involution of the form `A = B[t; σ]/(t² − b)`.
//!
//! `B = GR(p, k, d)` is a Galois ring and every element is stored in the
//! canonical form `c₀ + c₁t` with `c₀ ∈ B` and `c₁ ∈ B/p^{k₁}B`. Public
//! constructions always have `k₁ = k`, except the odd-truncated family which
//! has `k₁ = k − 1`; the trivial-star family has `k₁ = 0` (no `t`). Quotients
//! by radical powers land in the same representation, so every ring the crate
//! handles shares one arithmetic kernel.
//!
//! Multiplication follows `t·c = σ(c)·t` and `t² = b`:
//!
//! ```text
//! (c₀ + c₁t)(c₀' + c₁'t) = c₀c₀' + c₁σ(c₁')b + (c₀c₁' + c₁σ(c₀'))t
//! (c₀ + c₁t)*            = c₀ − σ(c₁)t
//! ```

mod ideal;
mod spec;
mod tables;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::galois::{self, ceil_log2, Coeffs, GaloisRing, ZERO_COEFFS};

pub use ideal::RadicalTable;
pub(crate) use ideal::additive_closure;
pub use spec::{Radicand, RingSpec, SpecBuilder, StarMode};
pub use tables::{RingTables, TABLE_LIMIT};

/// Default cap on `|A|` for exhaustive per-ring tables.
pub const DEFAULT_ELEMENT_BUDGET: u64 = 1 << 20;

/// Rings up to this size have their axioms validated element by element.
pub const EXHAUSTIVE_VALIDATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("ring axiom check failed: {0}")]
    AxiomFailure(String),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("not available: {0}")]
    NotAvailable(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("radical power {j} is not a proper ideal (nilpotency degree e = {e})")]
    NotProper { j: u32, e: u32 },
    #[error("malformed element: {0}")]
    BadElement(String),
}

/// Fingerprint of the ring parameters; equal parameters give equal ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(u64);

/// A ring element in canonical form `c₀ + c₁t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    ring: RingId,
    c0: Coeffs,
    c1: Coeffs,
}

impl Element {
    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn c0(&self) -> &Coeffs {
        &self.c0
    }

    pub fn c1(&self) -> &Coeffs {
        &self.c1
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trim = |c: &Coeffs| {
            let n = c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
            c[..n].to_vec()
        };
        write!(f, "{:?}+{:?}t", trim(&self.c0), trim(&self.c1))
    }
}

/// Internal ring parameters. `radicand` is the effective exponent `j < k`
/// of `b = pʲ`, or `None` when `b ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Params {
    pub p: u32,
    pub k: u32,
    pub k1: u32,
    pub d: usize,
    pub sigma: bool,
    pub radicand: Option<u32>,
}

impl Params {
    fn from_spec(spec: &RingSpec) -> Params {
        let (k1, sigma) = match spec.star_mode {
            StarMode::Trivial => (0, false),
            StarMode::Quadratic => (
                if spec.truncate_odd { spec.k - 1 } else { spec.k },
                spec.sigma_order == 2,
            ),
        };
        let radicand = match spec.radicand {
            Radicand::PowerOfP(j) if j < spec.k && k1 > 0 => Some(j),
            _ => None,
        };
        Params {
            p: spec.p,
            k: spec.k,
            k1,
            d: spec.d as usize,
            sigma,
            radicand,
        }
    }

    fn id(&self) -> RingId {
        // FNV-1a over the defining parameters
        let mut h: u64 = 0xcbf29ce484222325;
        let radicand = self.radicand.map_or(0, |j| j as u64 + 1);
        for x in [
            self.p as u64,
            self.k as u64,
            self.k1 as u64,
            self.d as u64,
            self.sigma as u64,
            radicand,
        ] {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        RingId(h)
    }

    /// `(α, β)` with `𝔯ⁱ = p^α B ⊕ p^β B₁ t`, capped at the precisions.
    pub fn radical_exponents(&self, i: u32) -> (u32, u32) {
        let (a, b) = if self.k1 == 0 {
            (i, 0)
        } else if self.radicand == Some(1) {
            (i.div_ceil(2), i / 2)
        } else {
            (i, i.saturating_sub(1))
        };
        (a.min(self.k), b.min(self.k1))
    }

    pub fn nilpotency(&self) -> u32 {
        let mut i = 1;
        loop {
            let (a, b) = self.radical_exponents(i);
            if a >= self.k && b >= self.k1 {
                return i;
            }
            i += 1;
        }
    }
}

/// Cardinalities attached to a ring (see the field docs for definitions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingStats {
    /// `|A|`
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub card_a: BigUint,
    /// `|𝔯|`, the Jacobson radical
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub card_rad: BigUint,
    /// nilpotency degree of `𝔯`
    pub e: u32,
    /// residue field size
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub q: BigUint,
    /// hermitian elements `a* = a`
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub card_r: BigUint,
    /// skew-hermitian elements `a* = −a`
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub card_s: BigUint,
    /// `|R ∩ 𝔯|`
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub card_m: BigUint,
}

impl RingStats {
    /// Checks `|A| = |R||S|`, `|A|/|𝔯| = q` and `|R|/|𝔪| = q`.
    pub fn is_consistent(&self) -> bool {
        self.card_a == &self.card_r * &self.card_s
            && self.card_a == &self.card_rad * &self.q
            && self.card_r == &self.card_m * &self.q
    }
}

/// Sizes of a radical power `𝔦 = 𝔯ʲ` and of its hermitian part `𝔦 ∩ 𝔪`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealStats {
    pub level: u32,
    pub card: BigUint,
    pub card_hermitian: BigUint,
}

/// Subsets enumerable by [`Ring::enumerate_subset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    Hermitian,
    Skew,
    /// `𝔪 = R ∩ 𝔯`
    HermitianRadical,
    RadicalPower(u32),
}

pub(crate) struct RingInner {
    id: RingId,
    spec: Option<RingSpec>,
    params: Params,
    base: GaloisRing,
    mod1: u64,
    radicand: Coeffs,
    card: Option<u64>,
    budget: u64,
    radical: Option<RadicalTable>,
    tables: OnceLock<Option<Arc<RingTables>>>,
    residue: OnceLock<Ring>,
}

/// Shared handle to an immutable ring.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.label())
    }
}

/// Builds and validates a ring with the default enumeration budget.
pub fn make_ring(spec: RingSpec) -> Result<Ring, RingError> {
    make_ring_with_budget(spec, DEFAULT_ELEMENT_BUDGET)
}

pub fn make_ring_with_budget(spec: RingSpec, budget: u64) -> Result<Ring, RingError> {
    spec.validate()?;
    let params = Params::from_spec(&spec);
    let base = GaloisRing::new(spec.p, spec.k, spec.d as usize, params.sigma)?;
    Ring::build(params, Some(spec), base, budget)
}

impl Ring {
    fn build(
        params: Params,
        spec: Option<RingSpec>,
        base: GaloisRing,
        budget: u64,
    ) -> Result<Ring, RingError> {
        let mod1 = (params.p as u64).pow(params.k1);
        let radicand = match params.radicand {
            Some(j) => base.scalar((params.p as i64).pow(j)),
            None => ZERO_COEFFS,
        };
        let exp = (params.k + params.k1) as u64 * params.d as u64;
        let card = (params.p as u64).checked_pow(exp as u32);
        let mut inner = RingInner {
            id: params.id(),
            spec,
            params,
            base,
            mod1,
            radicand,
            card,
            budget,
            radical: None,
            tables: OnceLock::new(),
            residue: OnceLock::new(),
        };
        if let Some(n) = card.filter(|&n| n <= budget) {
            let ring = Ring(Arc::new(inner));
            let table = ideal::build_radical_table(&ring, n)?;
            inner = Arc::try_unwrap(ring.0).unwrap_or_else(|_| unreachable!());
            inner.radical = Some(table);
        }
        let ring = Ring(Arc::new(inner));
        if ring.0.card.is_some_and(|n| n <= EXHAUSTIVE_VALIDATION_LIMIT.min(budget)) {
            ring.validate_exhaustive()?;
        }
        Ok(ring)
    }

    pub fn id(&self) -> RingId {
        self.0.id
    }

    /// The parameters this ring was built from; `None` for quotient rings.
    pub fn spec(&self) -> Option<&RingSpec> {
        self.0.spec.as_ref()
    }

    pub fn base(&self) -> &GaloisRing {
        &self.0.base
    }

    pub fn p(&self) -> u32 {
        self.0.params.p
    }

    pub fn degree(&self) -> usize {
        self.0.params.d
    }

    /// Precision of the `c₁` slot; zero when the ring has no `t`.
    pub fn t_precision(&self) -> u32 {
        self.0.params.k1
    }

    pub fn has_sigma(&self) -> bool {
        self.0.params.sigma && self.0.params.k1 > 0
    }

    pub fn budget(&self) -> u64 {
        self.0.budget
    }

    /// `|A|`, when it fits in 64 bits.
    pub fn cardinality(&self) -> Option<u64> {
        self.0.card
    }

    pub fn nilpotency(&self) -> u32 {
        self.0.params.nilpotency()
    }

    pub fn radical_table(&self) -> Option<&RadicalTable> {
        self.0.radical.as_ref()
    }

    pub fn label(&self) -> String {
        match &self.0.spec {
            Some(s) => s.label(),
            None => {
                let p = &self.0.params;
                let b = match p.radicand {
                    Some(j) => format!("t^2-{}", (p.p as u64).pow(j)),
                    None => "t^2".into(),
                };
                if p.k1 == 0 {
                    format!("GR({},{}), *=id", (p.p as u64).pow(p.k), p.d)
                } else {
                    format!(
                        "GR({},{}){}/({b}), c1 mod {}",
                        (p.p as u64).pow(p.k),
                        p.d,
                        if p.sigma { "[t;σ]" } else { "[t]" },
                        (p.p as u64).pow(p.k1)
                    )
                }
            }
        }
    }

    pub fn is_commutative(&self) -> bool {
        !self.has_sigma()
    }

    // ----- construction of elements -----

    pub fn zero(&self) -> Element {
        Element {
            ring: self.0.id,
            c0: ZERO_COEFFS,
            c1: ZERO_COEFFS,
        }
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Element {
        Element {
            ring: self.0.id,
            c0: self.0.base.scalar(n),
            c1: ZERO_COEFFS,
        }
    }

    /// Embeds a base-ring element as `c + 0t`.
    pub fn from_base(&self, c: &Coeffs) -> Element {
        Element {
            ring: self.0.id,
            c0: galois::reduce(c, self.0.base.modulus()),
            c1: ZERO_COEFFS,
        }
    }

    /// The element `t`, if the ring has one.
    pub fn t(&self) -> Option<Element> {
        if self.0.params.k1 == 0 {
            return None;
        }
        let mut c1 = ZERO_COEFFS;
        c1[0] = 1 % self.0.mod1 as u32;
        Some(Element {
            ring: self.0.id,
            c0: ZERO_COEFFS,
            c1,
        })
    }

    /// The class of `x` in `B`, i.e. the root of the defining polynomial.
    pub fn base_generator(&self) -> Element {
        self.from_base(&self.0.base.generator())
    }

    /// Builds `c₀ + c₁t` from coefficient slices, rejecting out-of-range data.
    pub fn element(&self, c0: &[u32], c1: &[u32]) -> Result<Element, RingError> {
        let d = self.degree();
        if c0.len() != d || (c1.len() != d && !(c1.is_empty() || self.0.params.k1 == 0)) {
            return Err(RingError::BadElement(format!(
                "expected {d} coefficients per slot, got {} and {}",
                c0.len(),
                c1.len()
            )));
        }
        let m0 = self.0.base.modulus();
        let mut a = self.zero();
        for (i, &c) in c0.iter().enumerate() {
            if c as u64 >= m0 {
                return Err(RingError::BadElement(format!("c0 coefficient {c} >= {m0}")));
            }
            a.c0[i] = c;
        }
        for (i, &c) in c1.iter().enumerate() {
            if c as u64 >= self.0.mod1 && c != 0 {
                return Err(RingError::BadElement(format!(
                    "c1 coefficient {c} >= {}",
                    self.0.mod1
                )));
            }
            a.c1[i] = c;
        }
        Ok(a)
    }

    /// Reduces arbitrary representatives into canonical form (the `c₁` slot mod `p^{k₁}`).
    pub fn canonical(&self, c0: &Coeffs, c1: &Coeffs) -> Element {
        Element {
            ring: self.0.id,
            c0: galois::reduce(c0, self.0.base.modulus()),
            c1: galois::reduce(c1, self.0.mod1),
        }
    }

    pub fn check(&self, a: &Element) -> Result<(), RingError> {
        if a.ring != self.0.id {
            Err(RingError::RingMismatch)
        } else {
            Ok(())
        }
    }

    // ----- arithmetic -----

    #[inline]
    pub fn add(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(a.ring == self.0.id && b.ring == self.0.id);
        let base = &self.0.base;
        Element {
            ring: self.0.id,
            c0: base.add(&a.c0, &b.c0),
            c1: galois::reduce(&base.add(&a.c1, &b.c1), self.0.mod1),
        }
    }

    #[inline]
    pub fn neg(&self, a: &Element) -> Element {
        let base = &self.0.base;
        Element {
            ring: self.0.id,
            c0: base.neg(&a.c0),
            c1: galois::reduce(&base.neg(&a.c1), self.0.mod1),
        }
    }

    #[inline]
    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(a.ring == self.0.id && b.ring == self.0.id);
        let base = &self.0.base;
        Element {
            ring: self.0.id,
            c0: base.sub(&a.c0, &b.c0),
            c1: galois::reduce(&base.sub(&a.c1, &b.c1), self.0.mod1),
        }
    }

    #[inline]
    fn sigma_raw(&self, c: &Coeffs) -> Coeffs {
        if self.0.params.sigma {
            self.0.base.sigma(c).expect("σ constructed")
        } else {
            *c
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(a.ring == self.0.id && b.ring == self.0.id);
        let base = &self.0.base;
        if self.0.params.k1 == 0 {
            return Element {
                ring: self.0.id,
                c0: base.mul(&a.c0, &b.c0),
                c1: ZERO_COEFFS,
            };
        }
        let mut c0 = base.mul(&a.c0, &b.c0);
        if self.0.params.radicand.is_some() && !base.is_zero(&a.c1) && !base.is_zero(&b.c1) {
            let tt = base.mul(&base.mul(&a.c1, &self.sigma_raw(&b.c1)), &self.0.radicand);
            c0 = base.add(&c0, &tt);
        }
        let c1 = base.add(
            &base.mul(&a.c0, &b.c1),
            &base.mul(&a.c1, &self.sigma_raw(&b.c0)),
        );
        Element {
            ring: self.0.id,
            c0,
            c1: galois::reduce(&c1, self.0.mod1),
        }
    }

    pub fn checked_add(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_sub(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub(a, b))
    }

    pub fn checked_mul(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// `a · n` for an integer `n`.
    pub fn scale_int(&self, a: &Element, n: i64) -> Element {
        let m = self.0.base.modulus() as i64;
        let n = n.rem_euclid(m) as u64;
        let base = &self.0.base;
        Element {
            ring: self.0.id,
            c0: base.scale(&a.c0, n),
            c1: galois::reduce(&base.scale(&a.c1, n), self.0.mod1),
        }
    }

    /// `(c₀ + c₁t)* = c₀ − σ(c₁)t`.
    pub fn star(&self, a: &Element) -> Element {
        if self.0.params.k1 == 0 {
            return *a;
        }
        let c1 = self.0.base.neg(&self.sigma_raw(&a.c1));
        Element {
            ring: self.0.id,
            c0: a.c0,
            c1: galois::reduce(&c1, self.0.mod1),
        }
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        a.c0 == ZERO_COEFFS && a.c1 == ZERO_COEFFS
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        self.0.base.is_unit(&a.c0)
    }

    pub fn in_radical(&self, a: &Element) -> bool {
        !self.is_unit(a)
    }

    pub fn is_hermitian(&self, a: &Element) -> bool {
        self.star(a) == *a
    }

    pub fn is_skew(&self, a: &Element) -> bool {
        self.star(a) == self.neg(a)
    }

    /// Two-sided inverse: residue inverse `c₀^(q−2)`, then `y ← y(2 − ay)`
    /// for `⌈log₂ e⌉` rounds, verified on both sides.
    pub fn inv(&self, a: &Element) -> Result<Element, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NotAUnit);
        }
        let base = &self.0.base;
        let q = (self.p() as u128).pow(self.degree() as u32);
        let mut y = self.from_base(&base.pow(&a.c0, q - 2));
        let two = self.from_int(2);
        for _ in 0..ceil_log2(self.nilpotency()) {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        let one = self.one();
        if self.mul(a, &y) != one || self.mul(&y, a) != one {
            return Err(RingError::AxiomFailure(format!(
                "radical lifting failed to invert {a:?}"
            )));
        }
        Ok(y)
    }

    /// `a/2`
    pub fn half(&self, a: &Element) -> Element {
        let inv2 = (self.0.base.modulus() as i64 + 1) / 2;
        self.scale_int(a, inv2)
    }

    /// The order-2 automorphism of the base ring, applied to `c₀` of a base element.
    pub fn sigma_on_base(&self, c: &Element) -> Result<Element, RingError> {
        if !self.has_sigma() {
            return Err(RingError::NotAvailable(
                "sigma_order = 1: the base automorphism is the identity".into(),
            ));
        }
        if c.c1 != ZERO_COEFFS {
            return Err(RingError::BadElement("σ acts on base elements (c₁ = 0)".into()));
        }
        Ok(self.from_base(&self.sigma_raw(&c.c0)))
    }

    /// Uniform random element.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.random_in_radical_power(0, rng)
    }

    /// Uniform random element of `𝔯ʲ`.
    pub fn random_in_radical_power<R: rand::Rng + ?Sized>(&self, j: u32, rng: &mut R) -> Element {
        let p = &self.0.params;
        let (alpha, beta) = if j == 0 { (0, 0) } else { p.radical_exponents(j) };
        let m0 = self.0.base.modulus();
        let mut c0 = ZERO_COEFFS;
        let mut c1 = ZERO_COEFFS;
        let step0 = (p.p as u64).pow(alpha);
        let step1 = (p.p as u64).pow(beta);
        for i in 0..p.d {
            c0[i] = ((rng.gen_range(0..m0) * step0) % m0) as u32;
            if p.k1 > 0 {
                c1[i] = ((rng.gen_range(0..self.0.mod1) * step1) % self.0.mod1) as u32;
            }
        }
        self.canonical(&c0, &c1)
    }

    // ----- radical powers -----

    /// Largest `i <= e` with `a ∈ 𝔯ⁱ` (the zero element reports `e`), from the
    /// closed-form description of the radical powers.
    pub fn radical_depth_structural(&self, a: &Element) -> u32 {
        let base = &self.0.base;
        let p = &self.0.params;
        if self.is_zero(a) {
            return self.nilpotency();
        }
        let v0 = base.p_valuation(&a.c0);
        let v1 = if p.k1 == 0 {
            0
        } else {
            let c1 = galois::reduce(&a.c1, self.0.mod1);
            if base.is_zero(&c1) {
                p.k1
            } else {
                base.p_valuation(&c1).min(p.k1)
            }
        };
        let e = self.nilpotency();
        let mut depth = 0;
        for i in 1..=e {
            let (alpha, beta) = p.radical_exponents(i);
            if v0 >= alpha && v1 >= beta {
                depth = i;
            } else {
                break;
            }
        }
        depth
    }

    /// Largest `i <= e` with `a ∈ 𝔯ⁱ`, from the product-closure table when present.
    pub fn radical_depth(&self, a: &Element) -> u32 {
        match &self.0.radical {
            Some(t) => t.depth(self.index_of(a)),
            None => self.radical_depth_structural(a),
        }
    }

    pub fn in_radical_power(&self, a: &Element, j: u32) -> bool {
        j == 0 || self.is_zero(a) || self.radical_depth(a) >= j
    }

    // ----- enumeration -----

    /// Mixed-radix index of an element: `c₀` digits (base `pᵏ`) then `c₁` digits (base `p^{k₁}`).
    pub fn index_of(&self, a: &Element) -> u64 {
        let m0 = self.0.base.modulus();
        let m1 = self.0.mod1;
        let d = self.degree();
        let mut idx = 0u64;
        if self.0.params.k1 > 0 {
            for i in (0..d).rev() {
                idx = idx * m1 + a.c1[i] as u64;
            }
        }
        for i in (0..d).rev() {
            idx = idx * m0 + a.c0[i] as u64;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> Element {
        let m0 = self.0.base.modulus();
        let m1 = self.0.mod1;
        let d = self.degree();
        let mut a = self.zero();
        for i in 0..d {
            a.c0[i] = (idx % m0) as u32;
            idx /= m0;
        }
        if self.0.params.k1 > 0 {
            for i in 0..d {
                a.c1[i] = (idx % m1) as u32;
                idx /= m1;
            }
        }
        a
    }

    fn enumerable_card(&self) -> Result<u64, RingError> {
        match self.0.card {
            Some(n) if n <= self.0.budget => Ok(n),
            _ => Err(RingError::BudgetExceeded(format!(
                "|A| = {} exceeds the element budget {}",
                self.card_big(),
                self.0.budget
            ))),
        }
    }

    /// All elements, each exactly once, in index order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_, RingError> {
        let n = self.enumerable_card()?;
        Ok((0..n).map(move |i| self.element_at(i)))
    }

    pub fn enumerate_subset(&self, which: Subset) -> Result<Vec<Element>, RingError> {
        let out = self
            .elements()?
            .filter(|a| match which {
                Subset::Hermitian => self.is_hermitian(a),
                Subset::Skew => self.is_skew(a),
                Subset::HermitianRadical => self.is_hermitian(a) && self.in_radical(a),
                Subset::RadicalPower(j) => self.in_radical_power(a, j),
            })
            .collect();
        Ok(out)
    }

    /// Additive generators of `A`: `xˡ` and `xˡt`.
    pub fn additive_generators(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        for l in 0..self.degree() {
            let mut c = ZERO_COEFFS;
            c[l] = 1;
            gens.push(self.canonical(&c, &ZERO_COEFFS));
            if self.0.params.k1 > 0 {
                gens.push(self.canonical(&ZERO_COEFFS, &c));
            }
        }
        gens
    }

    // ----- statistics -----

    fn card_big(&self) -> BigUint {
        let p = &self.0.params;
        BigUint::from(p.p).pow((p.k + p.k1) * p.d as u32)
    }

    /// Cardinalities from the closed-form structure of the family.
    pub fn stats(&self) -> RingStats {
        let p = &self.0.params;
        let pp = BigUint::from(p.p);
        let d = p.d as u32;
        let card_a = self.card_big();
        let q = pp.pow(d);
        let card_rad = &card_a / &q;
        let (card_r, card_s) = if p.k1 == 0 {
            (card_a.clone(), BigUint::one())
        } else if self.has_sigma() {
            (pp.pow(p.k * d + p.k1 * d / 2), pp.pow(p.k1 * d / 2))
        } else {
            (pp.pow(p.k * d), pp.pow(p.k1 * d))
        };
        let card_m = &card_r / &q;
        RingStats {
            card_a,
            card_rad,
            e: self.nilpotency(),
            q,
            card_r,
            card_s,
            card_m,
        }
    }

    /// Cardinalities by scanning every element with the defining predicates.
    pub fn enumerated_stats(&self) -> Result<RingStats, RingError> {
        let n = self.enumerable_card()?;
        let table = self
            .radical_table()
            .ok_or_else(|| RingError::BudgetExceeded("no radical table".into()))?;
        let (mut rad, mut r, mut s, mut m) = (0u64, 0u64, 0u64, 0u64);
        for a in self.elements()? {
            let in_rad = !self.is_unit(&a);
            let herm = self.is_hermitian(&a);
            rad += in_rad as u64;
            r += herm as u64;
            s += self.is_skew(&a) as u64;
            m += (herm && in_rad) as u64;
        }
        let q = n / rad;
        Ok(RingStats {
            card_a: n.into(),
            card_rad: rad.into(),
            e: table.nilpotency(),
            q: q.into(),
            card_r: r.into(),
            card_s: s.into(),
            card_m: m.into(),
        })
    }

    /// `|𝔯ʲ|` and `|𝔯ʲ ∩ 𝔪|`: counted from the closure table when present, closed form otherwise.
    pub fn ideal_stats(&self, j: u32) -> IdealStats {
        if let (Some(_), Ok(elems)) = (&self.0.radical, self.elements()) {
            let (mut card, mut herm) = (0u64, 0u64);
            for a in elems {
                if self.in_radical_power(&a, j) {
                    card += 1;
                    herm += self.is_hermitian(&a) as u64;
                }
            }
            return IdealStats {
                level: j,
                card: card.into(),
                card_hermitian: herm.into(),
            };
        }
        self.ideal_stats_structural(j)
    }

    pub fn ideal_stats_structural(&self, j: u32) -> IdealStats {
        let p = &self.0.params;
        let pp = BigUint::from(p.p);
        let d = p.d as u32;
        let (alpha, beta) = if j == 0 { (0, 0) } else { p.radical_exponents(j) };
        let c0_part = pp.pow((p.k - alpha) * d);
        let c1_free = p.k1 - beta;
        let card = &c0_part * pp.pow(c1_free * d);
        let herm_c1 = if self.has_sigma() {
            pp.pow(c1_free * d / 2)
        } else {
            BigUint::one()
        };
        IdealStats {
            level: j,
            card,
            card_hermitian: c0_part * herm_c1,
        }
    }

    // ----- quotients -----

    /// The quotient `A/𝔯ʲ` with its induced involution and the reduction map.
    pub fn quotient_ring(&self, j: u32) -> Result<Reduction, RingError> {
        let e = self.nilpotency();
        if j == 0 || j >= e {
            return Err(RingError::NotProper { j, e });
        }
        let p = &self.0.params;
        let (alpha, beta) = p.radical_exponents(j);
        let (k, k1) = (alpha, beta);
        let sigma = p.sigma && k1 > 0;
        let radicand = p.radicand.filter(|&r| r < k && k1 > 0);
        let params = Params {
            p: p.p,
            k,
            k1,
            d: p.d,
            sigma,
            radicand,
        };
        let base = self.0.base.with_precision(k);
        let spec = quotient_spec(&params);
        let target = Ring::build(params, spec, base, self.0.budget)?;
        Ok(Reduction {
            source: self.clone(),
            target,
            level: j,
        })
    }

    /// `A/𝔯 ≅ F_q` (the ring itself when it is already a field).
    pub fn residue_field(&self) -> Ring {
        self.0
            .residue
            .get_or_init(|| {
                if self.nilpotency() == 1 {
                    self.clone()
                } else {
                    self.quotient_ring(1).expect("e > 1").target
                }
            })
            .clone()
    }

    /// Index-based lookup tables; available for `|A| <= TABLE_LIMIT`.
    pub fn tables(&self) -> Result<Arc<RingTables>, RingError> {
        self.0
            .tables
            .get_or_init(|| {
                self.0
                    .card
                    .filter(|&n| n <= TABLE_LIMIT)
                    .map(|n| Arc::new(RingTables::build(self, n)))
            })
            .clone()
            .ok_or_else(|| {
                RingError::BudgetExceeded(format!(
                    "lookup tables need |A| <= {TABLE_LIMIT}, ring has {}",
                    self.card_big()
                ))
            })
    }

    // ----- validation -----

    fn validate_exhaustive(&self) -> Result<(), RingError> {
        let fail = |msg: String| Err(RingError::AxiomFailure(msg));
        let table = self.radical_table().expect("validated rings are tabulated");
        let two = self.from_int(2);
        if !self.is_unit(&two) {
            return fail("2 is not a unit".into());
        }
        let gens = self.additive_generators();
        let one = self.one();
        for a in self.elements()? {
            let unit = self.is_unit(&a);
            let in_rad = table.depth(self.index_of(&a)) >= 1;
            if unit == in_rad {
                return fail(format!("{a:?}: unit = {unit}, in radical = {in_rad}"));
            }
            if unit {
                let b = self.inv(&a)?;
                if self.mul(&a, &b) != one || self.mul(&b, &a) != one {
                    return fail(format!("bad inverse for {a:?}"));
                }
            } else {
                for g in &gens {
                    if self.is_unit(&self.mul(&a, g)) || self.is_unit(&self.mul(g, &a)) {
                        return fail(format!("radical not an ideal at {a:?}·{g:?}"));
                    }
                }
            }
            let s = self.star(&a);
            if self.star(&s) != a {
                return fail(format!("star is not an involution at {a:?}"));
            }
            if self.is_unit(&self.sub(&a, &s)) {
                return fail(format!("a − a* is a unit for a = {a:?}"));
            }
        }
        for g in &gens {
            for h in &gens {
                let lhs = self.star(&self.mul(g, h));
                let rhs = self.mul(&self.star(h), &self.star(g));
                if lhs != rhs {
                    return fail(format!("star not antimultiplicative on {g:?}, {h:?}"));
                }
                if self.star(&self.add(g, h)) != self.add(&self.star(g), &self.star(h)) {
                    return fail("star not additive".into());
                }
            }
        }
        if table.nilpotency() != self.nilpotency() {
            return fail(format!(
                "closure nilpotency {} differs from structural {}",
                table.nilpotency(),
                self.nilpotency()
            ));
        }
        let enumerated = self.enumerated_stats()?;
        if enumerated != self.stats() {
            return fail(format!(
                "enumerated stats {enumerated:?} differ from structural {:?}",
                self.stats()
            ));
        }
        if !enumerated.is_consistent() {
            return fail(format!("stats violate |A| = |R||S|: {enumerated:?}"));
        }
        Ok(())
    }
}

/// Expresses quotient parameters as a public spec when the family allows it.
fn quotient_spec(p: &Params) -> Option<RingSpec> {
    let sigma_order = if p.sigma { 2 } else { 1 };
    if p.k1 == 0 {
        return Some(RingSpec::trivial(p.p, p.k, p.d as u32));
    }
    let radicand = match p.radicand {
        Some(j) => Radicand::PowerOfP(j),
        None => Radicand::Zero,
    };
    let spec = RingSpec::quadratic(p.p, p.k, p.d as u32, sigma_order, radicand);
    if p.k1 == p.k {
        Some(spec)
    } else if p.radicand == Some(1) && p.k1 + 1 == p.k {
        Some(spec.truncated())
    } else {
        None
    }
}

/// The canonical surjection `A → A/𝔯ʲ` and its coset-representative lift.
#[derive(Clone, Debug)]
pub struct Reduction {
    source: Ring,
    target: Ring,
    level: u32,
}

impl Reduction {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn apply(&self, a: &Element) -> Element {
        debug_assert_eq!(a.ring, self.source.id());
        self.target.canonical(&a.c0, &a.c1)
    }

    /// Canonical representative: the same coefficients read in the source ring.
    pub fn lift(&self, a: &Element) -> Element {
        debug_assert_eq!(a.ring, self.target.id());
        self.source.canonical(&a.c0, &a.c1)
    }
}

/// Convenience for small-integer conversions of cardinalities.
pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests;
