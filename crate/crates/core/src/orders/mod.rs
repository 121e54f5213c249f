//! Closed-form cardinalities of unitary groups and related counts.
//!
//! Every function is a pure function of [`RingStats`] (plus `m`), evaluated
//! in arbitrary precision. Here `Π(q, m) = (q^{2m} − 1)(q^{2(m−1)} − 1)⋯(q² − 1)`.

mod principal;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::ring::{IdealStats, Ring, RingError, RingStats};

pub use principal::{principal_structure, GeneratorKind, PrincipalReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdersError {
    #[error("principal-case branch unavailable: {0}")]
    BranchUnavailable(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// One formula checked (or not) against an oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub name: String,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub formula_value: Option<BigUint>,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub oracle_value: Option<BigUint>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

impl CountReport {
    pub fn new(name: impl Into<String>, formula: BigUint, oracle: Option<BigUint>) -> CountReport {
        let matches = oracle.as_ref().map(|o| *o == formula);
        CountReport {
            name: name.into(),
            formula_value: Some(formula),
            oracle_value: oracle,
            matches,
            note: None,
            elapsed_ms: 0,
        }
    }

    pub fn not_applicable(name: impl Into<String>, why: impl Into<String>) -> CountReport {
        CountReport {
            name: name.into(),
            formula_value: None,
            oracle_value: None,
            matches: None,
            note: Some(format!("not applicable: {}", why.into())),
            elapsed_ms: 0,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CountReport {
        self.note = Some(note.into());
        self
    }

    pub fn with_elapsed(mut self, ms: u64) -> CountReport {
        self.elapsed_ms = ms;
        self
    }

    pub fn is_mismatch(&self) -> bool {
        self.matches == Some(false)
    }

    pub fn is_skipped(&self) -> bool {
        self.matches.is_none()
    }
}

fn pow(b: &BigUint, e: u64) -> BigUint {
    b.pow(u32::try_from(e).expect("exponent fits in u32"))
}

/// `Π(q, m)`
pub fn sp_product(q: &BigUint, m: u32) -> BigUint {
    let one = BigUint::one();
    (1..=m as u64).map(|i| pow(q, 2 * i) - &one).product()
}

/// `|Sp₂ₘ(F_q)| = q^{m²} Π(q, m)`
pub fn sp_order(q: &BigUint, m: u32) -> BigUint {
    pow(q, (m as u64).pow(2)) * sp_product(q, m)
}

/// `|𝔯|^{2m²−m} |𝔪|^{2m} q^{m²} Π(q, m)`
pub fn unitary_order_radical_form(stats: &RingStats, m: u32) -> BigUint {
    let m = m as u64;
    pow(&stats.card_rad, 2 * m * m - m) * pow(&stats.card_m, 2 * m) * sp_order(&stats.q, m as u32)
}

/// `|𝔯|^{m(m+1)} |A|^{m²} Π(q, m) / |S|^{2m}`
pub fn unitary_order_skew_form(stats: &RingStats, m: u32) -> BigUint {
    let m64 = m as u64;
    let num = pow(&stats.card_rad, m64 * (m64 + 1)) * pow(&stats.card_a, m64 * m64) * sp_product(&stats.q, m);
    num / pow(&stats.card_s, 2 * m64)
}

/// `|𝔦|^{2m²−m} |𝔦∩𝔪|^{2m}`, the order of the congruence kernel for `𝔦 = 𝔯ʲ`.
pub fn kernel_order_from(ideal: &IdealStats, m: u32) -> BigUint {
    let m = m as u64;
    pow(&ideal.card, 2 * m * m - m) * pow(&ideal.card_hermitian, 2 * m)
}

/// Kernel order of `U₂ₘ(A) → U₂ₘ(A/𝔯ʲ)` for `1 <= j < e`.
pub fn kernel_order(ring: &Ring, j: u32, m: u32) -> Result<BigUint, RingError> {
    let e = ring.nilpotency();
    if j == 0 || j >= e {
        return Err(RingError::NotProper { j, e });
    }
    Ok(kernel_order_from(&ring.ideal_stats(j), m))
}

/// `N(m, s) = (|A|^{2m} − |𝔯|^{2m}) / |S|`, basis vectors of any fixed length.
pub fn basis_vector_count(stats: &RingStats, m: u32) -> BigUint {
    let m = m as u64;
    (pow(&stats.card_a, 2 * m) - pow(&stats.card_rad, 2 * m)) / &stats.card_s
}

/// `N(1, s) = (|A| − |𝔯|)(|R| + |𝔪|)`
pub fn basis_vector_count_rank1(stats: &RingStats) -> BigUint {
    (&stats.card_a - &stats.card_rad) * (&stats.card_r + &stats.card_m)
}

/// `N(1,0)·|A|^{2(m−1)} + |𝔯|²·N(m−1, 0)` for `m >= 2`.
pub fn basis_vector_recursion(stats: &RingStats, m: u32) -> BigUint {
    assert!(m >= 2, "the recursion starts at m = 2");
    basis_vector_count(stats, 1) * pow(&stats.card_a, 2 * (m as u64 - 1))
        + pow(&stats.card_rad, 2) * basis_vector_count(stats, m - 1)
}

/// `(|A|^{2m} − |𝔯|^{2m}) |A|^{2m−1} / |S|²`
pub fn symplectic_pair_count(stats: &RingStats, m: u32) -> BigUint {
    let m = m as u64;
    (pow(&stats.card_a, 2 * m) - pow(&stats.card_rad, 2 * m)) * pow(&stats.card_a, 2 * m - 1)
        / pow(&stats.card_s, 2)
}

/// `|U_{2(m−1)}(A)| · |A|^{2m−1} / |S|`, with `|U₀| = 1`.
pub fn stabilizer_order(stats: &RingStats, m: u32) -> BigUint {
    let smaller = if m <= 1 {
        BigUint::one()
    } else {
        unitary_order_radical_form(stats, m - 1)
    };
    smaller * pow(&stats.card_a, 2 * m as u64 - 1) / &stats.card_s
}

/// The three commutative principal-case expressions, keyed on `*` and the parity of `e`.
pub fn principal_case_order(q: &BigUint, e: u32, m: u32, star_trivial: bool) -> Result<BigUint, OrdersError> {
    let (e, m) = (e as u64, m as u64);
    let tail = sp_order(q, m as u32);
    if e == 0 {
        return Err(OrdersError::BranchUnavailable("nilpotency degree must be positive".into()));
    }
    if star_trivial {
        return Ok(pow(q, (e - 1) * (2 * m * m + m)) * tail);
    }
    if e == 1 {
        return Err(OrdersError::BranchUnavailable(
            "a nontrivial involution needs a nonzero radical (e >= 2)".into(),
        ));
    }
    let l = e.div_ceil(2);
    let first = if e % 2 == 0 { 2 * l - 1 } else { 2 * l - 2 };
    Ok(pow(q, first * (2 * m * m - m)) * pow(q, 2 * (l - 1) * m) * tail)
}

/// Branch label used in reports: `a` (trivial star), `even` or `odd`.
pub fn principal_branch(e: u32, star_trivial: bool) -> &'static str {
    if star_trivial {
        "a"
    } else if e.is_multiple_of(2) {
        "even"
    } else {
        "odd"
    }
}
