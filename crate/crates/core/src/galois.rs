//! Galois rings GR(p, k, d) = (ℤ/pᵏ)[x]/(f) with f basic irreducible.
//!
//! Elements are fixed-width coefficient arrays (low degree first). The
//! defining polynomial is the smallest monic degree-`d` polynomial over F_p
//! that is irreducible, where polynomials are ordered by reading the
//! coefficient vector `(a_{d-1}, ..., a_0)` lexicographically.

use crate::ring::RingError;

/// Largest supported residue degree.
pub const MAX_DEGREE: usize = 8;

/// Coefficients `c_0 + c_1 x + ... + c_{d-1} x^{d-1}`; slots at index `>= d` stay zero.
pub type Coeffs = [u32; MAX_DEGREE];

pub const ZERO_COEFFS: Coeffs = [0; MAX_DEGREE];

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// The Galois ring together with its (optional) order-2 automorphism.
#[derive(Debug, Clone)]
pub struct GaloisRing {
    p: u32,
    k: u32,
    d: usize,
    modulus: u64,
    /// Monic defining polynomial, low degree first, length `d + 1`.
    poly: Vec<u32>,
    /// Columns are the images `σ(x^i)`; present only when an order-2 automorphism was requested.
    sigma: Option<Vec<Coeffs>>,
}

impl GaloisRing {
    pub fn new(p: u32, k: u32, d: usize, with_sigma: bool) -> Result<Self, RingError> {
        if d == 0 || d > MAX_DEGREE {
            return Err(RingError::InvalidSpec(format!(
                "residue degree d={d} outside 1..={MAX_DEGREE}"
            )));
        }
        if k == 0 {
            return Err(RingError::InvalidSpec("k must be positive".into()));
        }
        let modulus = (p as u64)
            .checked_pow(k)
            .filter(|m| *m < (1 << 31))
            .ok_or_else(|| RingError::InvalidSpec(format!("p^k = {p}^{k} exceeds 2^31")))?;
        let poly = smallest_irreducible(p as u64, d)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        let mut gr = GaloisRing {
            p,
            k,
            d,
            modulus,
            poly,
            sigma: None,
        };
        if with_sigma {
            if !d.is_multiple_of(2) {
                return Err(RingError::InvalidSpec(
                    "an automorphism of order 2 needs an even residue degree".into(),
                ));
            }
            gr.sigma = Some(gr.lift_frobenius()?);
        }
        Ok(gr)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `pᵏ`
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn defining_poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn has_sigma(&self) -> bool {
        self.sigma.is_some()
    }

    /// Same polynomial, same automorphism, lower precision `k' <= k`.
    pub fn with_precision(&self, k: u32) -> GaloisRing {
        assert!(k >= 1 && k <= self.k);
        let modulus = (self.p as u64).pow(k);
        let sigma = self.sigma.as_ref().map(|cols| {
            cols.iter()
                .map(|c| reduce(c, modulus))
                .collect::<Vec<_>>()
        });
        GaloisRing {
            p: self.p,
            k,
            d: self.d,
            modulus,
            poly: self.poly.clone(),
            sigma,
        }
    }

    pub fn zero(&self) -> Coeffs {
        ZERO_COEFFS
    }

    pub fn one(&self) -> Coeffs {
        self.scalar(1)
    }

    pub fn scalar(&self, n: i64) -> Coeffs {
        let mut c = ZERO_COEFFS;
        c[0] = n.rem_euclid(self.modulus as i64) as u32;
        c
    }

    /// The class of `x`, the root of the defining polynomial.
    pub fn generator(&self) -> Coeffs {
        let mut c = ZERO_COEFFS;
        if self.d == 1 {
            // f = x + a_0, so x = -a_0
            c[0] = submod(0, self.poly[0] as u64, self.modulus) as u32;
        } else {
            c[1] = 1;
        }
        c
    }

    pub fn add(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let m = self.modulus;
        let mut out = ZERO_COEFFS;
        for i in 0..self.d {
            out[i] = ((a[i] as u64 + b[i] as u64) % m) as u32;
        }
        out
    }

    pub fn sub(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let m = self.modulus;
        let mut out = ZERO_COEFFS;
        for i in 0..self.d {
            out[i] = submod(a[i] as u64, b[i] as u64, m) as u32;
        }
        out
    }

    pub fn neg(&self, a: &Coeffs) -> Coeffs {
        self.sub(&ZERO_COEFFS, a)
    }

    pub fn scale(&self, a: &Coeffs, n: u64) -> Coeffs {
        let m = self.modulus;
        let n = n % m;
        let mut out = ZERO_COEFFS;
        for i in 0..self.d {
            out[i] = mulmod(a[i] as u64, n, m) as u32;
        }
        out
    }

    pub fn mul(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let d = self.d;
        let m = self.modulus;
        if d == 1 {
            let mut out = ZERO_COEFFS;
            out[0] = mulmod(a[0] as u64, b[0] as u64, m) as u32;
            return out;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + mulmod(a[i] as u64, b[j] as u64, m)) % m;
            }
        }
        // x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        for top in (d..2 * d - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..d {
                let shift = top - d + j;
                prod[shift] = submod(prod[shift], mulmod(c, self.poly[j] as u64, m), m);
            }
        }
        let mut out = ZERO_COEFFS;
        for i in 0..d {
            out[i] = prod[i] as u32;
        }
        out
    }

    pub fn pow(&self, a: &Coeffs, mut e: u128) -> Coeffs {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &Coeffs) -> bool {
        a[..self.d].iter().all(|&c| c == 0)
    }

    /// Units are exactly the elements with nonzero residue mod p.
    pub fn is_unit(&self, a: &Coeffs) -> bool {
        a[..self.d].iter().any(|&c| c % self.p != 0)
    }

    /// Largest `i <= k` with `a ∈ pⁱB`.
    pub fn p_valuation(&self, a: &Coeffs) -> u32 {
        let mut v = self.k;
        for &c in &a[..self.d] {
            if c != 0 {
                let mut c = c;
                let mut i = 0;
                while c % self.p == 0 {
                    c /= self.p;
                    i += 1;
                }
                v = v.min(i);
            }
        }
        v
    }

    /// Inverse of a unit: residue inverse by `a^(q-2)`, then `y ← y(2 − ay)`.
    pub fn inv(&self, a: &Coeffs) -> Option<Coeffs> {
        if !self.is_unit(a) {
            return None;
        }
        let q = (self.p as u128).pow(self.d as u32);
        let mut y = self.pow(a, q - 2);
        let two = self.scalar(2);
        let mut prec = 1u32;
        while prec < self.k {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(a, &y), self.one());
        Some(y)
    }

    /// The order-2 automorphism. Returns `None` when none was constructed.
    pub fn sigma(&self, a: &Coeffs) -> Option<Coeffs> {
        let cols = self.sigma.as_ref()?;
        let m = self.modulus;
        let mut out = ZERO_COEFFS;
        for (i, col) in cols.iter().enumerate() {
            let c = a[i] as u64;
            if c == 0 {
                continue;
            }
            for r in 0..self.d {
                out[r] = ((out[r] as u64 + mulmod(c, col[r] as u64, m)) % m) as u32;
            }
        }
        Some(out)
    }

    fn eval_poly(&self, coeffs: &[u32], at: &Coeffs) -> Coeffs {
        let mut acc = ZERO_COEFFS;
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, &self.scalar(c as i64));
        }
        acc
    }

    /// Root of f congruent to `x^(p^(d/2))` mod p, Hensel-lifted to precision pᵏ.
    fn lift_frobenius(&self) -> Result<Vec<Coeffs>, RingError> {
        let half = (self.d / 2) as u32;
        let x = self.generator();
        // x^(p^half) mod p
        let field = self.with_precision(1);
        let mut root = reduce(&x, field.modulus);
        for _ in 0..half {
            root = field.pow(&root, self.p as u128);
        }
        let deriv: Vec<u32> = self
            .poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((c as u64 * i as u64) % self.modulus) as u32)
            .collect();
        let iterations = ceil_log2(self.k) + 1;
        for _ in 0..iterations {
            let fx = self.eval_poly(&self.poly, &root);
            if self.is_zero(&fx) {
                break;
            }
            let dfx = self.eval_poly(&deriv, &root);
            let inv = self.inv(&dfx).ok_or_else(|| {
                RingError::AxiomFailure("f' vanishes at the Frobenius root".into())
            })?;
            root = self.sub(&root, &self.mul(&fx, &inv));
        }
        if !self.is_zero(&self.eval_poly(&self.poly, &root)) {
            return Err(RingError::AxiomFailure(
                "Hensel lift did not converge to a root of f".into(),
            ));
        }
        let mut cols = Vec::with_capacity(self.d);
        let mut pw = self.one();
        for _ in 0..self.d {
            cols.push(pw);
            pw = self.mul(&pw, &root);
        }
        Ok(cols)
    }
}

pub fn reduce(a: &Coeffs, modulus: u64) -> Coeffs {
    let mut out = ZERO_COEFFS;
    for i in 0..MAX_DEGREE {
        out[i] = (a[i] as u64 % modulus) as u32;
    }
    out
}

pub(crate) fn ceil_log2(n: u32) -> u32 {
    if n <= 1 {
        0
    } else {
        32 - (n - 1).leading_zeros()
    }
}

// --- polynomials over F_p, used only to pick the defining polynomial ---

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = submod(r[shift + i], mulmod(c, bi, p), p);
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&out, f, p)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or: f of degree d is irreducible iff gcd(x^(p^i) − x, f) = 1 for 1 <= i <= d/2.
pub fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let d = f.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xp = poly_rem(&x, &f, p);
    for _ in 0..d / 2 {
        xp = poly_powmod(&xp, p, &f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = submod(diff[1], 1, p);
        let g = poly_gcd(&f, &trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree d, low degree first, length d + 1.
pub fn smallest_irreducible(p: u64, d: usize) -> Vec<u64> {
    let mut n: u64 = 0;
    loop {
        let mut f = Vec::with_capacity(d + 1);
        let mut rest = n;
        for _ in 0..d {
            f.push(rest % p);
            rest /= p;
        }
        f.push(1);
        if is_irreducible_mod_p(&f, p) {
            return f;
        }
        n += 1;
    }
}
