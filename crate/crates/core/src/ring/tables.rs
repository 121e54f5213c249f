//! Dense operation tables over element indices, for the enumeration oracles.

use super::Ring;

/// Largest ring for which [`RingTables`] are built (`n²` entries per table).
pub const TABLE_LIMIT: u64 = 2048;

/// Marks "no inverse" in [`RingTables::inv`].
pub const NO_INVERSE: u32 = u32::MAX;

pub struct RingTables {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    star: Vec<u32>,
    inv: Vec<u32>,
}

impl RingTables {
    pub(super) fn build(ring: &Ring, n: u64) -> RingTables {
        let n = n as usize;
        let elems: Vec<_> = (0..n as u64).map(|i| ring.element_at(i)).collect();
        let idx = |a| ring.index_of(&a) as u32;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                add.push(idx(ring.add(a, b)));
                mul.push(idx(ring.mul(a, b)));
            }
        }
        let neg = elems.iter().map(|a| idx(ring.neg(a))).collect();
        let star = elems.iter().map(|a| idx(ring.star(a))).collect();
        let inv = elems
            .iter()
            .map(|a| ring.inv(a).map_or(NO_INVERSE, idx))
            .collect();
        RingTables {
            n,
            add,
            mul,
            neg,
            star,
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn star(&self, a: u32) -> u32 {
        self.star[a as usize]
    }

    #[inline]
    pub fn is_unit(&self, a: u32) -> bool {
        self.inv[a as usize] != NO_INVERSE
    }

    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        let x = self.inv[a as usize];
        (x != NO_INVERSE).then_some(x)
    }

    /// Index of zero; the mixed-radix encoding puts it first.
    pub fn zero(&self) -> u32 {
        0
    }

    /// Index of one.
    pub fn one(&self) -> u32 {
        1
    }
}
