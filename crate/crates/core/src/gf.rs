//! Finite fields `F_q`, `q = p^n`, and their extensions `F_{q^m}`.
//!
//! Elements are packed base-`p` integers: the element `c_0 + c_1 a + ... +
//! c_{n-1} a^{n-1}` (with `a` a root of the field modulus) is stored as
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. Multiplication goes through
//! discrete-log tables built once per field and shared through a process-wide
//! cache, so [`GaloisField`] handles are cheap to clone.
//!
//! The modulus of `F_{p^n}` is the lexicographically smallest monic
//! irreducible of degree `n` over `F_p`, comparing coefficient tuples
//! constant term first. An extension `F_{q^m}` is its own `F_{p^{nm}}` with
//! an explicit embedding of `F_q` (see [`ExtTower`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default bound on the order of any field the library will build.
pub const DEFAULT_MAX_FIELD_ORDER: u64 = 1 << 20;

/// Largest relative extension degree a [`Tower`] will hand out.
pub const MAX_EXT_DEGREE: u32 = 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, n)` when `q = p^n` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = *prime_factors(q).first()?;
    let mut n = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p as u32, n))
}

/// `(-3 | q)`: 1 if `q = 1 mod 3`, -1 if `q = -1 mod 3`, 0 if `3 | q`.
pub fn symbol_minus3(q: u64) -> i64 {
    match q % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `(-1 | q)`: 1 if `q = 1 mod 4`, -1 if `q = 3 mod 4`, 0 for even `q`.
pub fn symbol_minus1(q: u64) -> i64 {
    match q % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

// ---- polynomials over the prime field, used only to pick moduli ----

mod fp_poly {
    pub(super) fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub(super) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p) as u64;
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            if c != 0 {
                let shift = top - df;
                for (i, &fi) in f.iter().enumerate() {
                    let sub = c * fi as u64 % p as u64;
                    r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub(super) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&prod, f, p)
    }

    pub(super) fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub(super) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub(super) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let len = a.len().max(b.len());
        let mut r: Vec<u32> = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    /// Rabin's test for a monic `f` of degree `n` over `F_p`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        // x^{p^k} mod f for k = 0..=n
        let mut powers = vec![rem(&x, f, p)];
        for k in 1..=n {
            let next = pow_mod(&powers[k - 1], p as u64, f, p);
            powers.push(next);
        }
        if sub(&powers[n], &x, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_factors(n as u64) {
            let h = sub(&powers[n / r as usize], &x, p);
            if gcd(f, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Descriptor of `F_{p^n}`: the characteristic, degree and modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    pub p: u32,
    pub n: u32,
    /// Monic modulus, constant term first, length `n + 1`.
    pub modulus: Vec<u32>,
}

impl FieldDesc {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }
}

fn checked_order(p: u32, n: u32, limit: u64) -> Result<u64> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::size("extension degree", 0, 1));
    }
    let mut q: u128 = 1;
    for _ in 0..n {
        q *= p as u128;
        if q > limit as u128 {
            return Err(Error::size("field order", q, limit as u128));
        }
    }
    Ok(q as u64)
}

/// Canonical descriptor for `F_{p^n}` (lex-smallest irreducible modulus).
pub fn make_field(p: u32, n: u32) -> Result<FieldDesc> {
    make_field_with_limit(p, n, DEFAULT_MAX_FIELD_ORDER)
}

pub fn make_field_with_limit(p: u32, n: u32, limit: u64) -> Result<FieldDesc> {
    checked_order(p, n, limit)?;
    let n_us = n as usize;
    // Lex order with the constant term most significant: c_0 is the slowest digit.
    let mut tail = vec![0u32; n_us];
    loop {
        let mut f = tail.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return Ok(FieldDesc { p, n, modulus: f });
        }
        // increment with c_{n-1} fastest
        let mut i = n_us;
        loop {
            if i == 0 {
                unreachable!("an irreducible polynomial of every degree exists");
            }
            i -= 1;
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// An element of some finite field, packed as a base-`p` integer.
///
/// The element does not carry its field; operations go through the owning
/// [`GaloisField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn from_index(i: u32) -> Self {
        FieldElem(i)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl serde::Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldData {
    desc: FieldDesc,
    q: u32,
    /// `p^i` for `i < n`.
    place: Vec<u32>,
    /// `g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Shared handle to the arithmetic tables of `F_{p^n}`.
#[derive(Clone)]
pub struct GaloisField(Arc<FieldData>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.desc.p, self.0.desc.n)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}
impl Eq for GaloisField {}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), GaloisField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), GaloisField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn digits_of(mut x: u32, p: u32, n: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(n);
    for _ in 0..n {
        d.push(x % p);
        x /= p;
    }
    d
}

fn pack(d: &[u32], place: &[u32]) -> u32 {
    d.iter().zip(place).map(|(&c, &w)| c * w).sum()
}

/// Multiplication straight from the modulus; only used while building tables.
fn mul_by_digits(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut r = fp_poly::mul_mod(a, b, modulus, p);
    r.resize(n, 0);
    r
}

impl GaloisField {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::with_limit(p, n, DEFAULT_MAX_FIELD_ORDER)
    }

    pub fn with_limit(p: u32, n: u32, limit: u64) -> Result<Self> {
        checked_order(p, n, limit)?;
        if let Some(f) = field_cache().lock().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        let desc = make_field_with_limit(p, n, limit)?;
        let field = GaloisField(Arc::new(Self::build(desc)));
        let mut cache = field_cache().lock().unwrap();
        Ok(cache.entry((p, n)).or_insert(field).clone())
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self> {
        Self::with_limit(desc.p, desc.n, desc.order().max(DEFAULT_MAX_FIELD_ORDER))
    }

    fn build(desc: FieldDesc) -> FieldData {
        let p = desc.p;
        let n = desc.n as usize;
        let q = (p as u64).pow(desc.n) as u32;
        let place: Vec<u32> = (0..n).map(|i| p.pow(i as u32)).collect();
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let one = {
            let mut v = vec![0u32; n];
            v[0] = 1;
            v
        };
        let is_one = |d: &[u32]| d[0] == 1 && d[1..].iter().all(|&c| c == 0);
        let pow_digits = |base: &[u32], mut e: u64| {
            let mut r = one.clone();
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    r = mul_by_digits(&r, &b, &desc.modulus, p);
                }
                b = mul_by_digits(&b, &b, &desc.modulus, p);
                e >>= 1;
            }
            r
        };
        let gen = (1..q)
            .find(|&cand| {
                let d = digits_of(cand, p, n);
                factors.iter().all(|&r| !is_one(&pow_digits(&d, order / r)))
            })
            .expect("multiplicative group is cyclic");
        let g = digits_of(gen, p, n);
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = one.clone();
        for i in 0..order as usize {
            let idx = pack(&cur, &place);
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = mul_by_digits(&cur, &g, &desc.modulus, p);
        }
        for i in 0..order as usize {
            exp.push(exp[i]);
        }
        FieldData {
            desc,
            q,
            place,
            exp,
            log,
        }
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0.desc
    }

    pub fn characteristic(&self) -> u32 {
        self.0.desc.p
    }

    pub fn degree(&self) -> u32 {
        self.0.desc.n
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.0.q
    }

    pub fn check(&self, a: FieldElem) -> Result<FieldElem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.0.q).map(FieldElem)
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.0.desc.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits_of(a.0, self.0.desc.p, self.0.desc.n as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem> {
        let p = self.0.desc.p;
        if c.len() > self.0.desc.n as usize || c.iter().any(|&x| x >= p) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElem(pack(c, &self.0.place)))
    }

    pub fn primitive_element(&self) -> FieldElem {
        FieldElem(self.0.exp[1.min(self.0.exp.len().saturating_sub(1))])
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.desc.p;
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.0.desc.n == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut r = 0;
        for &w in &self.0.place {
            let mut d = x % p + y % p;
            if d >= p {
                d -= p;
            }
            r += d * w;
            x /= p;
            y /= p;
        }
        FieldElem(r)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.0.desc.p;
        if p == 2 {
            return a;
        }
        if self.0.desc.n == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut r = 0;
        for &w in &self.0.place {
            let d = x % p;
            if d != 0 {
                r += (p - d) * w;
            }
            x /= p;
        }
        FieldElem(r)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let d = &self.0;
        FieldElem(d.exp[(d.log[a.0 as usize] + d.log[b.0 as usize]) as usize])
    }

    /// Multiplication by an element of the prime field given as an integer.
    pub fn scale(&self, k: u64, a: FieldElem) -> FieldElem {
        self.mul(self.from_int((k % self.0.desc.p as u64) as i64), a)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = &self.0;
        let m = d.q - 1;
        Ok(FieldElem(d.exp[((m - d.log[a.0 as usize]) % m) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let d = &self.0;
        let m = (d.q - 1) as u128;
        let l = (d.log[a.0 as usize] as u128 * e as u128 % m) as usize;
        FieldElem(d.exp[l])
    }

    /// Discrete log with respect to [`GaloisField::primitive_element`].
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize])
    }

    /// Absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.0.desc.p as u64)
    }

    /// The unique `b` with `b^p = a`.
    pub fn p_th_root(&self, a: FieldElem) -> FieldElem {
        let p = self.0.desc.p as u64;
        self.pow(a, p.pow(self.0.desc.n - 1))
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: FieldElem) -> u32 {
        let mut t = FieldElem::ZERO;
        let mut x = a;
        for _ in 0..self.0.desc.n {
            t = self.add(t, x);
            x = self.frobenius(x);
        }
        debug_assert!(t.0 < self.0.desc.p);
        t.0
    }

    pub fn is_square(&self, a: FieldElem) -> Result<bool> {
        if self.0.desc.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(a.0 == 0 || self.0.log[a.0 as usize].is_multiple_of(2))
    }

    /// Smallest non-square (odd characteristic).
    pub fn non_residue(&self) -> Result<FieldElem> {
        self.elements()
            .find(|&a| a.0 != 0 && !self.is_square(a).unwrap_or(true))
            .ok_or(Error::EvenCharacteristic)
    }

    /// Smallest element of absolute trace 1.
    pub fn trace_one(&self) -> FieldElem {
        self.elements()
            .find(|&a| self.trace_to_prime(a) == 1)
            .expect("trace is surjective")
    }

    /// Evaluate a polynomial with prime-field coefficients (constant first).
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), FieldElem(c))
        })
    }
}

/// `F_q` inside `F_{q^m}`: both fields, the embedding and the relative
/// Frobenius `a -> a^q`.
pub struct ExtTower {
    base: GaloisField,
    top: GaloisField,
    m: u32,
    q: u64,
    embed: Vec<FieldElem>,
    restrict: HashMap<u32, FieldElem>,
}

impl fmt::Debug for ExtTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtTower({:?} < {:?})", self.base, self.top)
    }
}

impl ExtTower {
    pub fn new(base: &GaloisField, m: u32, limit: u64) -> Result<Self> {
        let p = base.characteristic();
        let n = base.degree();
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::size("extension degree", m as u128, MAX_EXT_DEGREE as u128));
        }
        let top = GaloisField::with_limit(p, n * m, limit)?;
        // first root (in packed order) of the base modulus
        let modulus = &base.desc().modulus;
        let rho = if m == 1 && n > 1 {
            FieldElem(p)
        } else {
            top.elements()
                .find(|&x| top.eval_prime_poly(modulus, x).is_zero())
                .expect("base modulus splits in the extension")
        };
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = FieldElem::ONE;
        for _ in 0..n {
            powers.push(cur);
            cur = top.mul(cur, rho);
        }
        let embed: Vec<FieldElem> = base
            .elements()
            .map(|a| {
                base.coeffs(a)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElem::ZERO, |acc, (&c, &w)| top.add(acc, top.scale(c as u64, w)))
            })
            .collect();
        let restrict = embed
            .iter()
            .enumerate()
            .map(|(i, e)| (e.0, FieldElem(i as u32)))
            .collect();
        Ok(ExtTower {
            base: base.clone(),
            top,
            m,
            q: base.order() as u64,
            embed,
            restrict,
        })
    }

    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    pub fn top(&self) -> &GaloisField {
        &self.top
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn embed(&self, a: FieldElem) -> FieldElem {
        self.embed[a.0 as usize]
    }

    /// Inverse of [`ExtTower::embed`]; `None` outside the image of `F_q`.
    pub fn restrict(&self, a: FieldElem) -> Option<FieldElem> {
        self.restrict.get(&a.0).copied()
    }

    /// `Fr(a) = a^q`.
    pub fn relative_frobenius(&self, a: FieldElem) -> Result<FieldElem> {
        self.top.check(a)?;
        Ok(self.frob(a))
    }

    #[inline]
    pub(crate) fn frob(&self, a: FieldElem) -> FieldElem {
        self.top.pow(a, self.q)
    }

    /// `Fr^j(a) = a^{q^j}`.
    pub fn frob_pow(&self, a: FieldElem, j: u32) -> FieldElem {
        let mut x = a;
        for _ in 0..j % self.m {
            x = self.frob(x);
        }
        x
    }

    /// Frobenius orbit `a, a^q, a^{q^2}, ...` of length `m`.
    pub fn conjugates(&self, a: FieldElem) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut x = a;
        for _ in 0..self.m {
            out.push(x);
            x = self.frob(x);
        }
        out
    }

    /// Smallest `d` with `a^{q^d} = a`.
    pub fn degree_over_base(&self, a: FieldElem) -> u32 {
        let mut x = self.frob(a);
        let mut d = 1;
        while x != a {
            x = self.frob(x);
            d += 1;
        }
        d
    }

    /// Relative trace `F_{q^m} -> F_q`.
    pub fn relative_trace(&self, a: FieldElem) -> FieldElem {
        let t = self
            .conjugates(a)
            .into_iter()
            .fold(FieldElem::ZERO, |acc, x| self.top.add(acc, x));
        self.restrict(t).expect("trace lands in the base field")
    }
}

/// `F_q` together with lazily built extensions `F_{q^m}`.
pub struct Tower {
    base: GaloisField,
    limit: u64,
    exts: Vec<OnceLock<std::result::Result<Arc<ExtTower>, Error>>>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({:?})", self.base)
    }
}

type TowerCache = Mutex<HashMap<(u32, u32, u64), Arc<Tower>>>;

fn tower_cache() -> &'static TowerCache {
    static CACHE: OnceLock<TowerCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Tower {
    pub fn new(p: u32, n: u32) -> Result<Arc<Self>> {
        Self::with_limit(p, n, DEFAULT_MAX_FIELD_ORDER)
    }

    pub fn with_limit(p: u32, n: u32, limit: u64) -> Result<Arc<Self>> {
        let base = GaloisField::with_limit(p, n, limit)?;
        let key = (p, n, limit);
        let mut cache = tower_cache().lock().unwrap();
        Ok(cache
            .entry(key)
            .or_insert_with(|| {
                Arc::new(Tower {
                    base,
                    limit,
                    exts: (0..MAX_EXT_DEGREE).map(|_| OnceLock::new()).collect(),
                })
            })
            .clone())
    }

    /// Tower over `F_q`, where `q` must be a prime power.
    pub fn for_order(q: u64) -> Result<Arc<Self>> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, n)
    }

    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    pub fn q(&self) -> u64 {
        self.base.order() as u64
    }

    pub fn p(&self) -> u32 {
        self.base.characteristic()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn ext(&self, m: u32) -> Result<Arc<ExtTower>> {
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::size("extension degree", m as u128, MAX_EXT_DEGREE as u128));
        }
        self.exts[(m - 1) as usize]
            .get_or_init(|| ExtTower::new(&self.base, m, self.limit).map(Arc::new))
            .clone()
    }
}
