//! Brute-force enumeration over desk-scale rings, used as ground truth for
//! every closed-form count.
//!
//! Everything works on element indices through [`RingTables`]. A vector of
//! rank `n` is encoded as the mixed-radix number `Σ vᵢ·|A|ⁱ`, so enumeration
//! order is deterministic. Budgets fail closed: when a scan is too large the
//! caller gets [`OracleError::BudgetExceeded`], never an estimate.

mod verify;

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::linalg::{standard_j, FormSpace, LinalgError, Matrix, Vector};
use crate::ring::{Element, Reduction, Ring, RingError, RingTables};

pub use verify::{verify_all, verify_all_with, Section, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// cap on `|A|^{2m}`
    pub max_vectors: u64,
    /// cap on ordered-pair scans, `|A|^{4m}`
    pub max_pairs: u64,
    /// cap on naive matrix scans, `|A|^{4m²}`
    pub max_matrices: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_vectors: 100_000,
            max_pairs: 100_000_000,
            max_matrices: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("this enumeration needs the standard Gram matrix")]
    NotStandard,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

type Result<T> = std::result::Result<T, OracleError>;

fn over(what: &str, need: Option<u64>, cap: u64) -> Result<u64> {
    match need {
        Some(n) if n <= cap => Ok(n),
        _ => Err(OracleError::BudgetExceeded(format!(
            "{what}: {} exceeds the cap {cap}",
            need.map_or("more than 2^64".to_string(), |n| n.to_string())
        ))),
    }
}

/// A form space in index coordinates.
pub struct IndexedSpace {
    ring: Ring,
    tab: Arc<RingTables>,
    size: u64,
    n: usize,
    gram: Vec<u32>,
    standard: bool,
}

impl IndexedSpace {
    pub fn new(space: &FormSpace) -> Result<IndexedSpace> {
        let ring = space.ring().clone();
        let tab = ring.tables()?;
        let n = space.rank();
        let gram = space
            .gram()
            .entries()
            .iter()
            .map(|a| ring.index_of(a) as u32)
            .collect();
        let standard = n.is_multiple_of(2) && *space.gram() == standard_j(&ring, n / 2);
        Ok(IndexedSpace {
            size: tab.len() as u64,
            ring,
            tab,
            n,
            gram,
            standard,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `|A|ⁿ`, if it fits.
    pub fn vector_count(&self) -> Option<u64> {
        self.size.checked_pow(self.n as u32)
    }

    fn decode(&self, mut v: u64, out: &mut [u32]) {
        for c in out.iter_mut() {
            *c = (v % self.size) as u32;
            v /= self.size;
        }
    }

    fn encode(&self, coords: &[u32]) -> u64 {
        coords.iter().rev().fold(0u64, |acc, &c| acc * self.size + c as u64)
    }

    pub fn encode_vector(&self, v: &Vector) -> u64 {
        let coords: Vec<u32> = v.coords().iter().map(|a| self.ring.index_of(a) as u32).collect();
        self.encode(&coords)
    }

    pub fn decode_vector(&self, v: u64) -> Vector {
        let mut coords = vec![0; self.n];
        self.decode(v, &mut coords);
        Vector::new(&self.ring, coords.iter().map(|&c| self.ring.element_at(c as u64)).collect())
            .expect("same ring")
    }

    /// `cⱼ = Σᵢ vᵢ* Jᵢⱼ`, so that `h(v, w) = Σⱼ cⱼ wⱼ`.
    fn covector(&self, coords: &[u32], out: &mut [u32]) {
        let t = &self.tab;
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = t.zero();
            for (i, &c) in coords.iter().enumerate() {
                acc = t.add(acc, t.mul(t.star(c), self.gram[i * self.n + j]));
            }
            *o = acc;
        }
    }

    #[inline]
    fn dot(&self, cov: &[u32], coords: &[u32]) -> u32 {
        let t = &self.tab;
        cov.iter()
            .zip(coords)
            .fold(t.zero(), |acc, (&c, &x)| t.add(acc, t.mul(c, x)))
    }

    fn is_basis(&self, coords: &[u32]) -> bool {
        coords.iter().any(|&c| self.tab.is_unit(c))
    }

    /// Coordinates, covectors and lengths of every vector.
    pub fn vectors(&self, budget: &EnumerationBudget) -> Result<VectorTable> {
        let count = over("vectors |A|^n", self.vector_count(), budget.max_vectors)? as usize;
        let n = self.n;
        let rows: Vec<(Vec<u32>, Vec<u32>, u32)> = (0..count as u64)
            .into_par_iter()
            .map(|v| {
                let mut coords = vec![0; n];
                self.decode(v, &mut coords);
                let mut cov = vec![0; n];
                self.covector(&coords, &mut cov);
                let len = self.dot(&cov, &coords);
                (coords, cov, len)
            })
            .collect();
        let mut table = VectorTable {
            n,
            coords: Vec::with_capacity(count * n),
            cov: Vec::with_capacity(count * n),
            len: Vec::with_capacity(count),
        };
        for (c, v, l) in rows {
            table.coords.extend(c);
            table.cov.extend(v);
            table.len.push(l);
        }
        Ok(table)
    }

    fn mat_vec(&self, g: &[u32], v: &[u32], out: &mut [u32]) {
        let t = &self.tab;
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..self.n).fold(t.zero(), |acc, j| t.add(acc, t.mul(g[i * self.n + j], v[j])));
        }
    }
}

/// Per-vector data for a full scan of `Aⁿ`.
pub struct VectorTable {
    n: usize,
    coords: Vec<u32>,
    cov: Vec<u32>,
    len: Vec<u32>,
}

impl VectorTable {
    pub fn len(&self) -> usize {
        self.len.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_empty()
    }

    fn coords(&self, v: usize) -> &[u32] {
        &self.coords[v * self.n..(v + 1) * self.n]
    }

    fn cov(&self, v: usize) -> &[u32] {
        &self.cov[v * self.n..(v + 1) * self.n]
    }
}

/// Basis and non-basis vectors of one length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LengthBucket {
    pub basis: u64,
    pub non_basis: u64,
}

/// All vectors bucketed by their exact length `h(v, v)`.
pub fn enumerate_vectors_by_length(
    space: &FormSpace,
    budget: &EnumerationBudget,
) -> Result<BTreeMap<Element, LengthBucket>> {
    let sp = IndexedSpace::new(space)?;
    let table = sp.vectors(budget)?;
    let mut counts: BTreeMap<u32, LengthBucket> = BTreeMap::new();
    for v in 0..table.len() {
        let b = counts.entry(table.len[v]).or_default();
        if sp.is_basis(table.coords(v)) {
            b.basis += 1;
        } else {
            b.non_basis += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(s, b)| (sp.ring.element_at(s as u64), b))
        .collect())
}

fn isotropic(table: &VectorTable, zero: u32) -> Vec<usize> {
    (0..table.len()).filter(|&v| table.len[v] == zero).collect()
}

fn pair_budget(sp: &IndexedSpace, budget: &EnumerationBudget) -> Result<()> {
    let pairs = sp.vector_count().and_then(|n| n.checked_mul(n));
    over("ordered pairs |A|^{2n}", pairs, budget.max_pairs).map(|_| ())
}

/// Ordered pairs `(u, v)` with `h(u,u) = h(v,v) = 0` and `h(u,v) = 1`,
/// partitioned by `u` and counted in parallel.
pub fn count_symplectic_pairs(space: &FormSpace, budget: &EnumerationBudget) -> Result<u64> {
    let sp = IndexedSpace::new(space)?;
    pair_budget(&sp, budget)?;
    let table = sp.vectors(budget)?;
    let iso = isotropic(&table, sp.tab.zero());
    let one = sp.tab.one();
    Ok(iso
        .par_iter()
        .map(|&u| {
            let cov = table.cov(u);
            iso.iter().filter(|&&v| sp.dot(cov, table.coords(v)) == one).count() as u64
        })
        .sum())
}

/// Serial reference for [`count_symplectic_pairs`].
pub fn count_symplectic_pairs_serial(space: &FormSpace, budget: &EnumerationBudget) -> Result<u64> {
    let sp = IndexedSpace::new(space)?;
    pair_budget(&sp, budget)?;
    let table = sp.vectors(budget)?;
    let (zero, one) = (sp.tab.zero(), sp.tab.one());
    let mut count = 0;
    for u in 0..table.len() {
        if table.len[u] != zero {
            continue;
        }
        for v in 0..table.len() {
            if table.len[v] == zero && sp.dot(table.cov(u), table.coords(v)) == one {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A list of `n×n` matrices as flat row-major element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupList {
    n: usize,
    data: Vec<u32>,
}

impl GroupList {
    pub fn len(&self) -> usize {
        self.data.len() / (self.n * self.n).max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> &[u32] {
        let s = self.n * self.n;
        &self.data[i * s..(i + 1) * s]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.n * self.n)
    }

    pub fn to_matrix(&self, ring: &Ring, i: usize) -> Matrix {
        let rows = self
            .get(i)
            .chunks(self.n)
            .map(|r| r.iter().map(|&a| ring.element_at(a as u64)).collect())
            .collect();
        Matrix::from_rows(ring, rows).expect("square")
    }

    pub fn sorted(&self) -> GroupList {
        let mut blocks: Vec<&[u32]> = self.iter().collect();
        blocks.sort_unstable();
        GroupList {
            n: self.n,
            data: blocks.concat(),
        }
    }

    /// Membership by binary search; the list must be [`sorted`](Self::sorted).
    pub fn contains_sorted(&self, m: &[u32]) -> bool {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(m) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn encode(ring: &Ring, m: &Matrix) -> Vec<u32> {
        m.entries().iter().map(|a| ring.index_of(a) as u32).collect()
    }
}

/// `U₂(A)` for the standard rank-2 form, one matrix `[u v]` per symplectic pair.
pub fn enumerate_unitary_group(space: &FormSpace, budget: &EnumerationBudget) -> Result<GroupList> {
    let sp = IndexedSpace::new(space)?;
    if !sp.standard {
        return Err(OracleError::NotStandard);
    }
    if sp.n != 2 {
        return enumerate_unitary_group_naive(space, budget);
    }
    pair_budget(&sp, budget)?;
    let table = sp.vectors(budget)?;
    let iso = isotropic(&table, sp.tab.zero());
    let one = sp.tab.one();
    let blocks: Vec<Vec<u32>> = iso
        .par_iter()
        .map(|&u| {
            let cu = table.coords(u);
            let mut out = Vec::new();
            for &v in &iso {
                let cv = table.coords(v);
                if sp.dot(table.cov(u), cv) == one {
                    out.extend_from_slice(&[cu[0], cv[0], cu[1], cv[1]]);
                }
            }
            out
        })
        .collect();
    Ok(GroupList {
        n: 2,
        data: blocks.concat(),
    })
}

/// Every `n×n` matrix filtered by `X*JX = J` computed entry by entry.
pub fn enumerate_unitary_group_naive(space: &FormSpace, budget: &EnumerationBudget) -> Result<GroupList> {
    let sp = IndexedSpace::new(space)?;
    let n = sp.n;
    let total = over(
        "matrices |A|^{n²}",
        sp.size.checked_pow((n * n) as u32),
        budget.max_matrices,
    )?;
    let t = &sp.tab;
    const CHUNK: u64 = 4096;
    let blocks: Vec<Vec<u32>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let chunk = c * CHUNK..((c + 1) * CHUNK).min(total);
            let mut out = Vec::new();
            let mut x = vec![0u32; n * n];
            for idx in chunk {
                let mut r = idx;
                for e in x.iter_mut() {
                    *e = (r % sp.size) as u32;
                    r /= sp.size;
                }
                let ok = (0..n).all(|a| {
                    (0..n).all(|b| {
                        let mut acc = t.zero();
                        for i in 0..n {
                            let xs = t.star(x[i * n + a]);
                            for j in 0..n {
                                acc = t.add(acc, t.mul(xs, t.mul(sp.gram[i * n + j], x[j * n + b])));
                            }
                        }
                        acc == sp.gram[a * n + b]
                    })
                });
                if ok {
                    out.extend_from_slice(&x);
                }
            }
            out
        })
        .collect();
    Ok(GroupList { n, data: blocks.concat() })
}

/// `{g·v : g ∈ group}` as sorted vector encodings.
pub fn orbit_of(space: &FormSpace, group: &GroupList, v: &Vector) -> Result<Vec<u64>> {
    let sp = IndexedSpace::new(space)?;
    let coords: Vec<u32> = v.coords().iter().map(|a| sp.ring.index_of(a) as u32).collect();
    let mut out = vec![0u32; sp.n];
    let mut orbit: Vec<u64> = group
        .iter()
        .map(|g| {
            sp.mat_vec(g, &coords, &mut out);
            sp.encode(&out)
        })
        .collect();
    orbit.sort_unstable();
    orbit.dedup();
    Ok(orbit)
}

/// `|{g : g·v = v}|`, counted directly.
pub fn stabilizer_count(space: &FormSpace, group: &GroupList, v: &Vector) -> Result<u64> {
    let sp = IndexedSpace::new(space)?;
    let coords: Vec<u32> = v.coords().iter().map(|a| sp.ring.index_of(a) as u32).collect();
    let mut out = vec![0u32; sp.n];
    Ok(group
        .iter()
        .filter(|g| {
            sp.mat_vec(g, &coords, &mut out);
            out == coords
        })
        .count() as u64)
}

/// Orbits of the group on basis vectors, each as sorted encodings, in order of their least element.
pub fn basis_vector_orbits(space: &FormSpace, group: &GroupList, budget: &EnumerationBudget) -> Result<Vec<Vec<u64>>> {
    let sp = IndexedSpace::new(space)?;
    let count = over("vectors |A|^n", sp.vector_count(), budget.max_vectors)?;
    let mut seen = vec![false; count as usize];
    let mut coords = vec![0u32; sp.n];
    let mut orbits = Vec::new();
    for v in 0..count {
        sp.decode(v, &mut coords);
        if seen[v as usize] || !sp.is_basis(&coords) {
            continue;
        }
        let orbit = orbit_of(space, group, &sp.decode_vector(v))?;
        for &w in &orbit {
            seen[w as usize] = true;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Basis vectors of one length, as sorted encodings.
pub fn length_class(space: &FormSpace, length: &Element, budget: &EnumerationBudget) -> Result<Vec<u64>> {
    let sp = IndexedSpace::new(space)?;
    let table = sp.vectors(budget)?;
    let s = sp.ring.index_of(length) as u32;
    Ok((0..table.len())
        .filter(|&v| table.len[v] == s && sp.is_basis(table.coords(v)))
        .map(|v| v as u64)
        .collect())
}

/// What reduction modulo `𝔯ʲ` does to an enumerated group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCounts {
    pub image: u64,
    pub kernel: u64,
    /// Kernel members `1 + M` with `M*J + JM = 0`; computed when `2j >= e`.
    pub linearized: Option<u64>,
}

pub fn reduction_image_and_kernel(space: &FormSpace, group: &GroupList, red: &Reduction) -> Result<ReductionCounts> {
    let ring = space.ring();
    let target = red.target();
    let map: Vec<u32> = (0..ring.tables()?.len() as u64)
        .map(|i| target.index_of(&red.apply(&ring.element_at(i))) as u32)
        .collect();
    let n = group.dim();
    let identity: Vec<u32> = (0..n * n)
        .map(|i| if i / n == i % n { target.index_of(&target.one()) as u32 } else { 0 })
        .collect();
    let mut image: HashSet<Vec<u32>> = HashSet::new();
    let mut kernel = Vec::new();
    for (i, g) in group.iter().enumerate() {
        let r: Vec<u32> = g.iter().map(|&a| map[a as usize]).collect();
        if r == identity {
            kernel.push(i);
        }
        image.insert(r);
    }
    let linearized = (2 * red.level() >= ring.nilpotency()).then(|| {
        let j = space.gram();
        let one = Matrix::identity(ring, n);
        kernel
            .iter()
            .filter(|&&i| {
                let m = group.to_matrix(ring, i).sub(&one).expect("same shape");
                let lhs = m.star_transpose().mul(j).unwrap().add(&j.mul(&m).unwrap()).unwrap();
                lhs.entries().iter().all(|a| ring.is_zero(a))
            })
            .count() as u64
    });
    Ok(ReductionCounts {
        image: image.len() as u64,
        kernel: kernel.len() as u64,
        linearized,
    })
}

struct Candidate {
    coords: Vec<u32>,
    cov: Vec<u32>,
    len: u32,
}

/// Counts unitary matrices whose `b`-th column is drawn from `cands[b]`,
/// by depth-first search over columns with the Gram constraints as pruning.
/// Gives up once more than `cap` candidate tests have been made.
fn count_column_solutions(sp: &IndexedSpace, cands: &[Vec<Candidate>], cap: u64) -> Result<u64> {
    use std::sync::atomic::{AtomicU64, Ordering};
    let n = sp.n;
    // the length constraint depends on one column only, so apply it up front
    let cands: Vec<Vec<&Candidate>> = cands
        .iter()
        .enumerate()
        .map(|(b, cs)| cs.iter().filter(|c| c.len == sp.gram[b * n + b]).collect())
        .collect();
    let work = AtomicU64::new(0);
    fn go(sp: &IndexedSpace, cands: &[Vec<&Candidate>], chosen: &mut Vec<usize>, work: &AtomicU64, cap: u64) -> u64 {
        let b = chosen.len();
        if b == cands.len() {
            return 1;
        }
        if work.fetch_add(cands[b].len() as u64, Ordering::Relaxed) > cap {
            return 0;
        }
        let n = sp.n;
        let mut total = 0;
        for (ci, c) in cands[b].iter().enumerate() {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(a, &k)| sp.dot(&cands[a][k].cov, &c.coords) == sp.gram[a * n + b]);
            if ok {
                chosen.push(ci);
                total += go(sp, cands, chosen, work, cap);
                chosen.pop();
            }
        }
        total
    }
    let total = (0..cands[0].len())
        .into_par_iter()
        .map(|i| go(sp, &cands, &mut vec![i], &work, cap))
        .sum();
    if work.load(Ordering::Relaxed) > cap {
        return Err(OracleError::BudgetExceeded(format!(
            "column search: more than {cap} candidate tests"
        )));
    }
    Ok(total)
}

/// `|{X unitary : X ≡ 1 mod 𝔯ʲ}|`, enumerated column by column over `eᵢ + V𝔯ʲ`.
pub fn count_congruence_kernel(space: &FormSpace, j: u32, budget: &EnumerationBudget) -> Result<u64> {
    let sp = IndexedSpace::new(space)?;
    let ring = &sp.ring;
    let ideal: Vec<u32> = ring
        .elements()?
        .filter(|a| ring.in_radical_power(a, j))
        .map(|a| ring.index_of(&a) as u32)
        .collect();
    let per_column = over(
        "kernel candidates |𝔯ʲ|^n per column",
        (ideal.len() as u64).checked_pow(sp.n as u32),
        budget.max_vectors,
    )?;
    let t = &sp.tab;
    let cands: Vec<Vec<Candidate>> = (0..sp.n)
        .map(|b| {
            (0..per_column)
                .map(|mut idx| {
                    let mut coords = vec![0u32; sp.n];
                    for (i, c) in coords.iter_mut().enumerate() {
                        let r = ideal[(idx % ideal.len() as u64) as usize];
                        idx /= ideal.len() as u64;
                        *c = if i == b { t.add(t.one(), r) } else { r };
                    }
                    let mut cov = vec![0u32; sp.n];
                    sp.covector(&coords, &mut cov);
                    let len = sp.dot(&cov, &coords);
                    Candidate { coords, cov, len }
                })
                .collect()
        })
        .collect();
    count_column_solutions(&sp, &cands, budget.max_pairs)
}

/// `|U₂ₘ(A)|` from enumeration: the pair count at rank 2 when `m = 1`,
/// otherwise the product of pair counts at ranks `2, 4, …, 2m` (the group
/// acts simply transitively on pairs modulo the stabilizer `U₂₍ₘ₋₁₎`).
pub fn unitary_order_oracle(ring: &Ring, m: usize, budget: &EnumerationBudget) -> Result<num_bigint::BigUint> {
    let mut order = num_bigint::BigUint::from(1u32);
    for i in 1..=m {
        order *= count_symplectic_pairs(&FormSpace::standard(ring, i), budget)?;
    }
    Ok(order)
}

/// `A = R ⊕ S`: every element is `r + s` for exactly one hermitian `r` and skew `s`.
pub fn check_hermitian_skew_split(ring: &Ring) -> Result<bool> {
    let n = ring.tables()?.len();
    let herm: Vec<Element> = ring.elements()?.filter(|a| ring.is_hermitian(a)).collect();
    let skew: Vec<Element> = ring.elements()?.filter(|a| ring.is_skew(a)).collect();
    let mut hit = vec![0u32; n];
    for r in &herm {
        for s in &skew {
            hit[ring.index_of(&ring.add(r, s)) as usize] += 1;
        }
    }
    Ok(hit.iter().all(|&c| c == 1))
}

/// For every skew `s`: `{y : y − y* = s} = s/2 + R`.
pub fn check_skew_solution_sets(ring: &Ring) -> Result<bool> {
    let elems: Vec<Element> = ring.elements()?.collect();
    let herm: Vec<Element> = elems.iter().filter(|a| ring.is_hermitian(a)).copied().collect();
    for s in elems.iter().filter(|a| ring.is_skew(a)) {
        let mut solutions: Vec<Element> = elems
            .iter()
            .filter(|y| ring.sub(y, &ring.star(y)) == *s)
            .copied()
            .collect();
        let half = ring.half(s);
        let mut coset: Vec<Element> = herm.iter().map(|r| ring.add(&half, r)).collect();
        solutions.sort();
        coset.sort();
        if solutions != coset {
            return Ok(false);
        }
    }
    Ok(true)
}
