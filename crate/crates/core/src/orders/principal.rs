//! Exhaustive checks of the principal-radical hypotheses on a desk-scale ring.
//!
//! * principal: some `a ∈ 𝔯` has `Aa = aA = 𝔯`
//! * hermitian elements commute
//! * the involution is not the identity
//! * `R ∩ Rx = 0` for the chosen hermitian or skew generator `x`
//!
//! The closed-form principal orders apply when the first two hold and, if
//! the involution is nontrivial, the last one does too.

use serde::Serialize;

use crate::linalg::format_element;
use crate::ring::{additive_closure, Element, Ring, RingError};

/// Largest ring the exhaustive searches here will scan.
pub const PRINCIPAL_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Hermitian,
    Skew,
}

/// Cardinalities the principal case predicts, next to the enumerated ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityProfile {
    pub ell: u32,
    pub expected_card_rad: u64,
    pub expected_card_m: u64,
    pub expected_card_a: u64,
    pub expected_kernel: u64,
    pub card_rad: u64,
    pub card_m: u64,
    pub card_a: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalReport {
    pub principal_radical: bool,
    pub hermitian_commute: bool,
    pub star_nontrivial: bool,
    pub trivial_intersection: Option<bool>,
    pub hermitian_closed: bool,
    pub generator: Option<String>,
    #[serde(skip)]
    pub generator_element: Option<Element>,
    pub generator_kind: Option<GeneratorKind>,
    pub commute_witness: Option<[String; 2]>,
    pub intersection_witness: Option<String>,
    pub closure_witness: Option<[String; 2]>,
    /// `|{r ∈ R : rx = 0}|`
    pub kernel_size: Option<u64>,
    pub e: u32,
    pub q: u64,
    pub parity: Option<ParityProfile>,
    pub branch_applies: bool,
    /// First failing hypothesis, e.g. `A7 fails`.
    pub failure: Option<String>,
}

fn ideal_is_radical(ring: &Ring, n: u64, a: &Element, gens: &[Element], rad: u64) -> bool {
    let left: Vec<Element> = gens.iter().map(|g| ring.mul(g, a)).collect();
    if additive_closure(ring, n, &left).elems.len() as u64 != rad {
        return false;
    }
    let right: Vec<Element> = gens.iter().map(|g| ring.mul(a, g)).collect();
    additive_closure(ring, n, &right).elems.len() as u64 == rad
}

pub fn principal_structure(ring: &Ring) -> Result<PrincipalReport, RingError> {
    let n = ring
        .cardinality()
        .filter(|&n| n <= PRINCIPAL_LIMIT.min(ring.budget()))
        .ok_or_else(|| {
            RingError::BudgetExceeded(format!(
                "principal-structure searches need |A| <= {PRINCIPAL_LIMIT}"
            ))
        })?;
    let fmt = |a: &Element| format_element(ring, a);
    let elems: Vec<Element> = ring.elements()?.collect();
    let herm: Vec<Element> = elems.iter().filter(|a| ring.is_hermitian(a)).copied().collect();
    let rad: Vec<Element> = elems.iter().filter(|a| ring.in_radical(a)).copied().collect();
    let card_rad = rad.len() as u64;
    let card_m = herm.iter().filter(|a| ring.in_radical(a)).count() as u64;
    let q = n / card_rad;
    let e = ring.nilpotency();
    let gens = ring.additive_generators();

    // a principal generator lies outside 𝔯² (unless 𝔯 = 0)
    let mut principal = false;
    let mut generator = None;
    for a in rad.iter().filter(|a| ring.radical_depth(a) == 1 || e == 1) {
        let kind = if ring.is_hermitian(a) {
            Some(GeneratorKind::Hermitian)
        } else if ring.is_skew(a) {
            Some(GeneratorKind::Skew)
        } else {
            None
        };
        if principal && kind.is_none() {
            continue;
        }
        if ideal_is_radical(ring, n, a, &gens, card_rad) {
            principal = true;
            if let Some(kind) = kind {
                generator = Some((*a, kind));
                break;
            }
        }
    }

    let mut commute_witness = None;
    'outer: for a in &herm {
        for b in &herm {
            if ring.mul(a, b) != ring.mul(b, a) {
                commute_witness = Some([fmt(a), fmt(b)]);
                break 'outer;
            }
        }
    }
    let mut closure_witness = None;
    'outer: for a in &herm {
        for b in &herm {
            if !ring.is_hermitian(&ring.mul(a, b)) {
                closure_witness = Some([fmt(a), fmt(b)]);
                break 'outer;
            }
        }
    }
    let star_nontrivial = elems.iter().any(|a| !ring.is_hermitian(a));

    let (mut trivial_intersection, mut intersection_witness, mut kernel_size) = (None, None, None);
    if let Some((x, _)) = generator {
        let mut witness = None;
        let mut kernel = 0u64;
        for r in &herm {
            let rx = ring.mul(r, &x);
            if ring.is_zero(&rx) {
                kernel += 1;
            } else if witness.is_none() && ring.is_hermitian(&rx) {
                witness = Some(fmt(r));
            }
        }
        trivial_intersection = Some(witness.is_none());
        intersection_witness = witness;
        kernel_size = Some(kernel);
    }

    let hermitian_commute = commute_witness.is_none();
    let failure = if !principal {
        Some("A7 fails: the radical has no two-sided principal generator".to_string())
    } else if !hermitian_commute {
        Some("A8 fails: hermitian elements do not commute".to_string())
    } else if star_nontrivial && trivial_intersection != Some(true) {
        Some("A10 fails: R ∩ Rx is nonzero".to_string())
    } else {
        None
    };
    let branch_applies = failure.is_none();

    let parity = branch_applies.then(|| {
        let qp = |k: u32| q.pow(k);
        let card_r = herm.len() as u64;
        if !star_nontrivial {
            ParityProfile {
                ell: 0,
                expected_card_rad: qp(e - 1),
                expected_card_m: qp(e - 1),
                expected_card_a: card_r,
                expected_kernel: 1,
                card_rad,
                card_m,
                card_a: n,
                holds: card_rad == qp(e - 1) && card_m == card_rad && n == card_r,
            }
        } else {
            let ell = e.div_ceil(2);
            let even = e.is_multiple_of(2);
            let exp_rad = if even { qp(2 * ell - 1) } else { qp(2 * ell - 2) };
            let exp_a = if even { card_r * card_r } else { card_r * card_r / q };
            let exp_kernel = if even { 1 } else { q };
            ParityProfile {
                ell,
                expected_card_rad: exp_rad,
                expected_card_m: qp(ell - 1),
                expected_card_a: exp_a,
                expected_kernel: exp_kernel,
                card_rad,
                card_m,
                card_a: n,
                holds: card_rad == exp_rad
                    && card_m == qp(ell - 1)
                    && n == exp_a
                    && kernel_size == Some(exp_kernel),
            }
        }
    });

    Ok(PrincipalReport {
        principal_radical: principal,
        hermitian_commute,
        star_nontrivial,
        trivial_intersection,
        hermitian_closed: closure_witness.is_none(),
        generator: generator.map(|(x, _)| fmt(&x)),
        generator_element: generator.map(|(x, _)| x),
        generator_kind: generator.map(|(_, k)| k),
        commute_witness,
        intersection_witness,
        closure_witness,
        kernel_size,
        e,
        q,
        parity,
        branch_applies,
        failure,
    })
}
