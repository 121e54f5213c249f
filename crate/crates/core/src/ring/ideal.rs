//! Radical powers by product closure.
//!
//! Level 1 is the additive span of `p·xˡ` and `xˡt`; level `i + 1` is the
//! additive span of all products `g·h` with `g` a level-1 generator and `h` a
//! level-`i` generator. Each level keeps only the generators that enlarged
//! the subgroup, so the candidate sets stay small.

use super::{Element, Ring, RingError};

/// Depth of every element in the chain `A ⊃ 𝔯 ⊃ 𝔯² ⊃ … ⊃ 𝔯ᵉ = 0`.
#[derive(Debug, Clone)]
pub struct RadicalTable {
    depth: Vec<u8>,
    e: u32,
    sizes: Vec<u64>,
}

impl RadicalTable {
    /// Largest `i` with the indexed element in `𝔯ⁱ`.
    pub fn depth(&self, index: u64) -> u32 {
        self.depth[index as usize] as u32
    }

    pub fn nilpotency(&self) -> u32 {
        self.e
    }

    /// `|𝔯ⁱ|` for `i = 0..=e`.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }
}

pub(crate) struct Closure {
    pub member: Vec<bool>,
    pub elems: Vec<u32>,
    pub gens: Vec<Element>,
}

/// The additive subgroup generated by `candidates`, with a minimal generating subset.
pub(crate) fn additive_closure(ring: &Ring, n: u64, candidates: &[Element]) -> Closure {
    let mut member = vec![false; n as usize];
    member[0] = true;
    let mut elems = vec![0u32];
    let mut gens = Vec::new();
    for g in candidates {
        if member[ring.index_of(g) as usize] {
            continue;
        }
        gens.push(*g);
        let base: Vec<Element> = elems.iter().map(|&i| ring.element_at(i as u64)).collect();
        let mut shift = *g;
        while !member[ring.index_of(&shift) as usize] {
            for h in &base {
                let idx = ring.index_of(&ring.add(h, &shift)) as usize;
                member[idx] = true;
                elems.push(idx as u32);
            }
            shift = ring.add(&shift, g);
        }
    }
    Closure {
        member,
        elems,
        gens,
    }
}

pub(super) fn build_radical_table(ring: &Ring, n: u64) -> Result<RadicalTable, RingError> {
    let p = ring.p() as i64;
    let level1: Vec<Element> = ring
        .additive_generators()
        .into_iter()
        .map(|g| if ring.is_unit(&g) { ring.scale_int(&g, p) } else { g })
        .collect();
    let mut depth = vec![0u8; n as usize];
    let mut sizes = vec![n];
    let mut level = additive_closure(ring, n, &level1);
    let rad_gens = level.gens.clone();
    let mut i = 1u32;
    loop {
        let size = level.elems.len() as u64;
        if size >= *sizes.last().unwrap() {
            return Err(RingError::AxiomFailure(format!(
                "radical power {i} does not shrink: |𝔯^{i}| = {size}"
            )));
        }
        for &idx in &level.elems {
            depth[idx as usize] = i as u8;
        }
        debug_assert!(level.member[0]);
        sizes.push(size);
        if size == 1 {
            break;
        }
        let products: Vec<Element> = rad_gens
            .iter()
            .flat_map(|g| level.gens.iter().map(move |h| ring.mul(g, h)))
            .collect();
        level = additive_closure(ring, n, &products);
        i += 1;
    }
    Ok(RadicalTable {
        depth,
        e: i,
        sizes,
    })
}
