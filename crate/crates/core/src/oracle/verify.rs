//! The full formula-versus-oracle sweep for one ring and one rank.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{
    basis_vector_orbits, count_congruence_kernel, count_symplectic_pairs, enumerate_unitary_group,
    enumerate_unitary_group_naive, enumerate_vectors_by_length, length_class, reduction_image_and_kernel,
    stabilizer_count, unitary_order_oracle, EnumerationBudget, GroupList, LengthBucket, OracleError,
    ReductionCounts,
};
use crate::linalg::{format_element, FormSpace, Vector};
use crate::orders::{self, principal_structure, CountReport};
use crate::ring::{Element, Ring, RingStats, Subset};

/// Groups of report rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    /// group orders from every closed form
    Orders,
    /// kernels and images of reduction modulo radical powers
    Levels,
    /// basis vectors, symplectic pairs, stabilizers, orbits
    Counts,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub budget: EnumerationBudget,
    /// Without the oracle every row carries only its formula value.
    pub oracle: bool,
    pub sections: Vec<Section>,
    /// Restricts the level rows to one radical power.
    pub level: Option<u32>,
    /// Adds one to the formula of the named row; exercises the mismatch path.
    pub corrupt: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: EnumerationBudget::default(),
            oracle: true,
            sections: vec![Section::Orders, Section::Levels, Section::Counts],
            level: None,
            corrupt: None,
        }
    }
}

pub fn verify_all(ring: &Ring, m: u32, budget: &EnumerationBudget) -> Vec<CountReport> {
    verify_all_with(
        ring,
        m,
        &VerifyOptions {
            budget: *budget,
            ..Default::default()
        },
    )
}

type Cached<T> = OnceCell<Result<T, OracleError>>;

struct Verifier<'a> {
    ring: &'a Ring,
    m: u32,
    budget: EnumerationBudget,
    stats: RingStats,
    space: FormSpace,
    order: Cached<BigUint>,
    group: Cached<GroupList>,
    buckets: Cached<BTreeMap<Element, LengthBucket>>,
    rows: Vec<CountReport>,
}

fn skipped(name: impl Into<String>, formula: BigUint, err: &OracleError) -> CountReport {
    CountReport::new(name, formula, None).with_note(format!("oracle skipped: {err}"))
}

fn compare(name: impl Into<String>, formula: BigUint, oracle: &Result<BigUint, OracleError>) -> CountReport {
    let name = name.into();
    match oracle {
        Ok(v) => CountReport::new(name, formula, Some(v.clone())),
        Err(e) => skipped(name, formula, e),
    }
}

impl<'a> Verifier<'a> {
    fn push(&mut self, start: Instant, row: CountReport) {
        self.rows.push(row.with_elapsed(start.elapsed().as_millis() as u64));
    }

    fn order(&self) -> Result<BigUint, OracleError> {
        self.order
            .get_or_init(|| unitary_order_oracle(self.ring, self.m as usize, &self.budget))
            .clone()
    }

    fn group(&self) -> Option<&GroupList> {
        if self.m != 1 {
            return None;
        }
        self.group
            .get_or_init(|| enumerate_unitary_group(&self.space, &self.budget))
            .as_ref()
            .ok()
    }

    fn buckets(&self) -> &Result<BTreeMap<Element, LengthBucket>, OracleError> {
        self.buckets
            .get_or_init(|| enumerate_vectors_by_length(&self.space, &self.budget))
    }

    fn run(&mut self, opts: &VerifyOptions) {
        if opts.sections.contains(&Section::Orders) {
            self.order_rows();
        }
        if opts.sections.contains(&Section::Levels) {
            for j in 1..self.ring.nilpotency() {
                if opts.level.is_none_or(|l| l == j) {
                    self.level_rows(j);
                }
            }
        }
        if opts.sections.contains(&Section::Counts) {
            self.count_rows();
        }
    }

    fn order_rows(&mut self) {
        let (ring, m) = (self.ring, self.m);
        let stats = self.stats.clone();

        let t = Instant::now();
        let field = ring.residue_field();
        let row = compare(
            "sp_order",
            orders::sp_order(&stats.q, m),
            &unitary_order_oracle(&field, m as usize, &self.budget),
        );
        self.push(t, row);

        let t = Instant::now();
        let row = compare("unitary_order_radical_form", orders::unitary_order_radical_form(&stats, m), &self.order());
        self.push(t, row);
        let t = Instant::now();
        let row = compare("unitary_order_skew_form", orders::unitary_order_skew_form(&stats, m), &self.order());
        self.push(t, row);

        let t = Instant::now();
        let row = self.naive_row();
        self.push(t, row);

        let t = Instant::now();
        let row = self.principal_row();
        self.push(t, row);
    }

    fn count_rows(&mut self) {
        let (ring, m) = (self.ring, self.m);
        let stats = self.stats.clone();
        let t = Instant::now();
        let skew = ring.enumerate_subset(Subset::Skew);
        let formula = orders::basis_vector_count(&stats, m);
        match (self.buckets(), skew) {
            (Ok(buckets), Ok(skew)) => {
                let rows: Vec<CountReport> = skew
                    .iter()
                    .map(|s| {
                        let got = buckets.get(s).map_or(0, |b| b.basis);
                        CountReport::new(
                            format!("basis_vector_count[s={}]", format_element(ring, s)),
                            formula.clone(),
                            Some(BigUint::from(got)),
                        )
                    })
                    .collect();
                for row in rows {
                    self.push(t, row);
                }
            }
            (Err(e), _) => {
                let row = skipped("basis_vector_count", formula, e);
                self.push(t, row);
            }
            (_, Err(e)) => {
                let row = skipped("basis_vector_count", formula, &e.into());
                self.push(t, row);
            }
        }

        let t = Instant::now();
        let zero = ring.zero();
        let rank1 = if m == 1 {
            self.buckets().clone()
        } else {
            enumerate_vectors_by_length(&FormSpace::standard(ring, 1), &self.budget)
        }
        .map(|b| BigUint::from(b.get(&zero).map_or(0, |b| b.basis)));
        let row = compare("basis_vector_count_rank1", orders::basis_vector_count_rank1(&stats), &rank1);
        self.push(t, row);

        if m >= 2 {
            let t = Instant::now();
            let at_m = self
                .buckets()
                .clone()
                .map(|b| BigUint::from(b.get(&zero).map_or(0, |b| b.basis)));
            let row = compare("basis_vector_recursion", orders::basis_vector_recursion(&stats, m), &at_m);
            self.push(t, row);
        }

        let t = Instant::now();
        let pairs = count_symplectic_pairs(&self.space, &self.budget).map(BigUint::from);
        let row = compare("symplectic_pair_count", orders::symplectic_pair_count(&stats, m), &pairs);
        self.push(t, row);

        let t = Instant::now();
        let formula = orders::stabilizer_order(&stats, m);
        let row = match self.group() {
            Some(group) => {
                let e1 = Vector::basis(ring, 2, 0);
                compare(
                    "stabilizer_order",
                    formula,
                    &stabilizer_count(&self.space, group, &e1).map(BigUint::from),
                )
            }
            None => CountReport::new("stabilizer_order", formula, None)
                .with_note("oracle skipped: needs the enumerated group (m = 1)"),
        };
        self.push(t, row);

        if self.group().is_some() {
            let t = Instant::now();
            let row = self.orbit_row();
            self.push(t, row);
        }
    }

    fn naive_row(&self) -> CountReport {
        let name = "unitary_order_naive_filter";
        let formula = orders::unitary_order_radical_form(&self.stats, self.m);
        let naive = match enumerate_unitary_group_naive(&self.space, &self.budget) {
            Ok(g) => g,
            Err(e) => return skipped(name, formula, &e),
        };
        let row = CountReport::new(name, formula, Some(BigUint::from(naive.len())));
        match self.group() {
            Some(group) if group.sorted() != naive.sorted() => {
                let mut row = row.with_note("naive filter and pair enumeration disagree as sets");
                row.matches = Some(false);
                row
            }
            _ => row,
        }
    }

    fn principal_row(&self) -> CountReport {
        let report = match principal_structure(self.ring) {
            Ok(r) => r,
            Err(e) => return CountReport::not_applicable("principal_case_order", format!("structure unchecked: {e}")),
        };
        if !report.branch_applies {
            return CountReport::not_applicable(
                "principal_case_order",
                report.failure.unwrap_or_default(),
            );
        }
        let trivial = !report.star_nontrivial;
        let name = format!(
            "principal_case_order[{}]",
            orders::principal_branch(report.e, trivial)
        );
        match orders::principal_case_order(&BigUint::from(report.q), report.e, self.m, trivial) {
            Ok(formula) => {
                let row = compare(name, formula, &self.order());
                match report.parity {
                    Some(p) if !p.holds => row.with_note("cardinality profile differs from the principal case"),
                    _ => row,
                }
            }
            Err(e) => CountReport::not_applicable(name, e.to_string()),
        }
    }

    fn level_rows(&mut self, j: u32) {
        let (ring, m) = (self.ring, self.m);
        let t = Instant::now();
        let formula = orders::kernel_order_from(&ring.ideal_stats(j), m);
        let kernel = count_congruence_kernel(&self.space, j, &self.budget).map(BigUint::from);
        let reduction = ring.quotient_ring(j);
        let counts: Option<Result<ReductionCounts, OracleError>> = match (&reduction, self.group()) {
            (Ok(red), Some(group)) => Some(reduction_image_and_kernel(&self.space, group, red)),
            _ => None,
        };
        let mut row = compare(format!("kernel_order[j={j}]"), formula.clone(), &kernel);
        if let (Ok(k), Some(Ok(c))) = (&kernel, &counts) {
            if BigUint::from(c.kernel) != *k {
                row.matches = Some(false);
                row = row.with_note(format!("group scan finds {} kernel elements", c.kernel));
            }
        }
        self.push(t, row);

        let t = Instant::now();
        let red = match reduction {
            Ok(r) => r,
            Err(e) => {
                let row = CountReport::not_applicable(format!("quotient_order[j={j}]"), e.to_string());
                self.push(t, row);
                return;
            }
        };
        let quotient_formula = orders::unitary_order_radical_form(&red.target().stats(), m);
        let quotient = unitary_order_oracle(red.target(), m as usize, &self.budget);
        let row = compare(format!("quotient_order[j={j}]"), quotient_formula.clone(), &quotient);
        self.push(t, row);

        let t = Instant::now();
        let name = format!("reduction_image[j={j}]");
        let row = match &counts {
            Some(Ok(c)) => CountReport::new(name, quotient_formula, Some(BigUint::from(c.image))),
            Some(Err(e)) => skipped(name, quotient_formula, e),
            None => match (self.order(), &kernel) {
                (Ok(o), Ok(k)) if !k.is_zero() && (&o % k).is_zero() => {
                    CountReport::new(name, quotient_formula, Some(o / k))
                        .with_note("oracle is the enumerated order over the enumerated kernel")
                }
                (Ok(_), Ok(_)) => {
                    let mut row = CountReport::new(name, quotient_formula, None)
                        .with_note("enumerated kernel does not divide the enumerated order");
                    row.matches = Some(false);
                    row
                }
                (Err(e), _) => skipped(name, quotient_formula, &e),
                (_, Err(e)) => skipped(name, quotient_formula, e),
            },
        };
        self.push(t, row);

        if let Some(Ok(c)) = &counts {
            if let Some(lin) = c.linearized {
                let t = Instant::now();
                let row = CountReport::new(format!("kernel_linearized[j={j}]"), formula, Some(BigUint::from(lin)));
                self.push(t, row);
            }
        }
    }

    fn orbit_row(&self) -> CountReport {
        let ring = self.ring;
        let name = "basis_vector_orbits";
        let group = self.group().expect("checked by caller");
        let lengths = match ring.enumerate_subset(Subset::Skew) {
            Ok(s) => s,
            Err(e) => return CountReport::not_applicable(name, e.to_string()),
        };
        let formula = BigUint::from(lengths.len());
        let orbits = match basis_vector_orbits(&self.space, group, &self.budget) {
            Ok(o) => o,
            Err(e) => return skipped(name, formula, &e),
        };
        let mut row = CountReport::new(name, formula, Some(BigUint::from(orbits.len())));
        let expected_stab = orders::stabilizer_order(&self.stats, 1);
        for orbit in &orbits {
            let rep = super::IndexedSpace::new(&self.space)
                .map(|sp| sp.decode_vector(orbit[0]))
                .expect("tables exist once the group does");
            let len = self.space.length(&rep);
            let class = length_class(&self.space, &len, &self.budget);
            let stab = stabilizer_count(&self.space, group, &rep).map(BigUint::from);
            if class.as_ref().ok() != Some(orbit) {
                row.matches = Some(false);
                return row.with_note(format!(
                    "orbit of {} is not its length class",
                    crate::linalg::format_vector(&rep)
                ));
            }
            if stab.as_ref().ok() != Some(&expected_stab) {
                row.matches = Some(false);
                return row.with_note(format!(
                    "stabilizer of {} has the wrong order",
                    crate::linalg::format_vector(&rep)
                ));
            }
        }
        row
    }
}

pub fn verify_all_with(ring: &Ring, m: u32, opts: &VerifyOptions) -> Vec<CountReport> {
    let budget = if opts.oracle {
        opts.budget
    } else {
        EnumerationBudget {
            max_vectors: 0,
            max_pairs: 0,
            max_matrices: 0,
        }
    };
    let mut v = Verifier {
        ring,
        m,
        budget,
        stats: ring.stats(),
        space: FormSpace::standard(ring, m as usize),
        order: OnceCell::new(),
        group: OnceCell::new(),
        buckets: OnceCell::new(),
        rows: Vec::new(),
    };
    v.run(opts);
    let mut rows = v.rows;
    if !opts.oracle {
        for row in rows.iter_mut().filter(|r| r.is_skipped() && r.formula_value.is_some()) {
            row.note = Some("oracle not requested".into());
        }
    }
    if let Some(target) = &opts.corrupt {
        for row in rows.iter_mut().filter(|r| &r.name == target) {
            if let Some(f) = row.formula_value.as_mut() {
                *f += BigUint::one();
                row.matches = row.oracle_value.as_ref().map(|o| o == f);
            }
        }
    }
    rows
}
