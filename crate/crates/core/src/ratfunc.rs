//! Rational functions over `F_q`, their poles, partial fractions, and the
//! Artin-Schreier normal form of `u` modulo `{z^p - z}`.
//!
//! A principal part at a closed point is written in the local coordinate
//! `xbar = x` at infinity and `xbar = 1/(x - theta)` at a finite root
//! `theta`, as `a_1 xbar + ... + a_e xbar^e`. For a point of degree `m` only
//! the part at the stored root is kept; the parts at the conjugates are its
//! Frobenius images.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{ExtTower, FieldElem, GaloisField, Tower};
use crate::poly::Poly;
use crate::projgeom::{ClosedPoint, Mobius, ProjPoint, WeightedDivisor};

/// `num/den` in lowest terms with `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let s = num.field().inv(den.lead())?;
        Ok(RatFunc {
            num: num.scale(s),
            den: den.scale(s),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn zero(k: &GaloisField) -> Self {
        Self::from_poly(Poly::zero(k))
    }

    pub fn constant(k: &GaloisField, a: FieldElem) -> Self {
        Self::from_poly(Poly::constant(k, a))
    }

    pub fn x(k: &GaloisField) -> Self {
        Self::from_poly(Poly::x(k))
    }

    pub fn field(&self) -> &GaloisField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> Result<RatFunc> {
        let num = self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?)?;
        RatFunc::new(num, self.den.mul(&o.den)?)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> Result<RatFunc> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.mul(&o.num)?, self.den.mul(&o.den)?)
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&o.den)?, self.den.mul(&o.num)?)
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `z^p - z`.
    pub fn artin_schreier(&self) -> RatFunc {
        let p = self.field().characteristic() as u64;
        self.pow(p).sub(self).expect("same field")
    }

    /// `u o gamma`, i.e. `u((a x + b)/(c x + d))`.
    pub fn compose_mobius(&self, g: &Mobius) -> Result<RatFunc> {
        let k = self.field();
        for x in [g.a, g.b, g.c, g.d] {
            k.check(x)?;
        }
        let top = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let lin_a = Poly::new(k, vec![g.b, g.a]);
        let lin_c = Poly::new(k, vec![g.d, g.c]);
        let hom = |f: &Poly| -> Result<Poly> {
            let mut acc = Poly::zero(k);
            for (i, &ci) in f.coeffs().iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                let t = lin_a.pow(i as u64).mul(&lin_c.pow((top - i) as u64))?;
                acc = acc.add(&t.scale(ci))?;
            }
            Ok(acc)
        };
        RatFunc::new(hom(&self.num)?, hom(&self.den)?)
    }

    /// Parses `num` or `num/den`, each in the [`Poly::parse`] syntax and
    /// optionally parenthesised.
    pub fn parse(k: &GaloisField, s: &str) -> Result<RatFunc> {
        let strip = |t: &str| {
            let t = t.trim();
            t.strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .unwrap_or(t)
                .to_string()
        };
        match s.split_once('/') {
            None => Ok(RatFunc::from_poly(Poly::parse(k, &strip(s))?)),
            Some((n, d)) => RatFunc::new(Poly::parse(k, &strip(n))?, Poly::parse(k, &strip(d))?),
        }
    }
}

/// Closed points where `den` vanishes, with multiplicities, in increasing
/// order of point.
pub fn pole_factors(tower: &Tower, den: &Poly) -> Result<Vec<(ClosedPoint, u32)>> {
    let k = tower.base();
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = tower.q() as u128;
    let x = Poly::x(k);
    let mut rest = den.monic();
    let mut out = Vec::new();
    let mut m = 0u32;
    while rest.degree().unwrap_or(0) > 0 {
        m += 1;
        let qm = q.checked_pow(m).ok_or_else(|| Error::size("q^m", u128::MAX, u64::MAX as u128))?;
        let h = x.pow_mod(qm, &rest)?.sub(&x)?;
        let g = rest.gcd(&h)?;
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        let ext = tower.ext(m)?;
        let gm = g.embed(&ext);
        let mut pts = BTreeSet::new();
        for theta in ext.top().elements() {
            if gm.eval(theta).is_zero() {
                pts.insert(ClosedPoint::canonicalize(&ext, Some(theta)).0);
            }
        }
        for pt in pts {
            let f = pt.min_poly(tower)?.expect("finite point");
            let mut e = 0;
            loop {
                let (qt, r) = rest.divrem(&f)?;
                if !r.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            out.push((pt, e));
        }
    }
    out.sort();
    Ok(out)
}

/// Divisor of poles of `u` (empty for a constant).
pub fn div_infty(tower: &Tower, u: &RatFunc) -> Result<WeightedDivisor> {
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut parts = pole_factors(tower, u.den())?;
    let dn = u.num().degree().unwrap_or(0);
    let dd = u.den().degree().unwrap_or(0);
    if dn > dd {
        parts.push((ClosedPoint::Infinity, (dn - dd) as u32));
    }
    Ok(WeightedDivisor::new(parts))
}

/// `a_1 xbar + ... + a_e xbar^e` at the stored root of `point`; `coeffs[i]`
/// is `a_{i+1}` and lives in `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrincipalPart {
    #[serde(serialize_with = "ser_point")]
    pub point: ClosedPoint,
    pub coeffs: Vec<FieldElem>,
}

fn ser_point<S: serde::Serializer>(p: &ClosedPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl PrincipalPart {
    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }
}

/// Power series inverse of `f` modulo `t^n` (`f(0) != 0`).
fn series_inverse(k: &GaloisField, f: &[FieldElem], n: usize) -> Result<Vec<FieldElem>> {
    let f0inv = k.inv(f.first().copied().unwrap_or(FieldElem::ZERO))?;
    let mut g = vec![FieldElem::ZERO; n];
    if n == 0 {
        return Ok(g);
    }
    g[0] = f0inv;
    for i in 1..n {
        let mut s = FieldElem::ZERO;
        for j in 1..=i.min(f.len() - 1) {
            s = k.add(s, k.mul(f[j], g[i - j]));
        }
        g[i] = k.neg(k.mul(s, f0inv));
    }
    Ok(g)
}

/// `u = c_0 + sum over poles of the conjugates of each part`.
pub fn partial_fractions(tower: &Tower, u: &RatFunc) -> Result<(FieldElem, Vec<PrincipalPart>)> {
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let (quot, rem) = u.num().divrem(u.den())?;
    let c0 = quot.coeff(0);
    let mut parts = Vec::new();
    if quot.degree().unwrap_or(0) >= 1 {
        parts.push(PrincipalPart {
            point: ClosedPoint::Infinity,
            coeffs: quot.coeffs()[1..].to_vec(),
        });
    }
    for (pt, e) in pole_factors(tower, u.den())? {
        let ClosedPoint::Finite { degree, root } = pt else {
            unreachable!("denominators vanish at finite points")
        };
        let ext = tower.ext(degree as u32)?;
        let top = ext.top();
        let e = e as usize;
        let local = Poly::linear(top, root).pow(e as u64);
        let d1 = u.den().embed(&ext).div_exact(&local)?;
        let rs = rem.embed(&ext).taylor_shift(root);
        let ds = d1.taylor_shift(root);
        let inv = series_inverse(top, ds.coeffs(), e)?;
        let mut s = vec![FieldElem::ZERO; e];
        for (i, &a) in rs.coeffs().iter().enumerate().take(e) {
            for (j, &b) in inv.iter().enumerate().take(e - i) {
                s[i + j] = top.add(s[i + j], top.mul(a, b));
            }
        }
        // a_i = s_{e-i}
        let coeffs: Vec<FieldElem> = (1..=e).map(|i| s[e - i]).collect();
        parts.push(PrincipalPart { point: pt, coeffs });
    }
    parts.sort();
    Ok((c0, parts))
}

/// The rational function of a single principal part, summed over conjugates.
pub fn render_part(tower: &Tower, part: &PrincipalPart) -> Result<RatFunc> {
    let k = tower.base();
    match part.point {
        ClosedPoint::Infinity => {
            let ext = tower.ext(1)?;
            let mut c = vec![FieldElem::ZERO];
            for &a in &part.coeffs {
                c.push(ext.restrict(a).ok_or(Error::FieldMismatch)?);
            }
            Ok(RatFunc::from_poly(Poly::new(k, c)))
        }
        ClosedPoint::Finite { degree, root } => {
            let ext = tower.ext(degree as u32)?;
            let top = ext.top();
            let e = part.coeffs.len();
            let conj = ext.conjugates(root);
            let locals: Vec<Poly> = conj
                .iter()
                .map(|&t| Poly::linear(top, t).pow(e as u64))
                .collect();
            let mut num = Poly::zero(top);
            for (j, &theta) in conj.iter().enumerate() {
                let lin = Poly::linear(top, theta);
                let mut nj = Poly::zero(top);
                for (i, &a) in part.coeffs.iter().enumerate() {
                    let a = ext.frob_pow(a, j as u32);
                    nj = nj.add(&lin.pow((e - i - 1) as u64).scale(a))?;
                }
                for (l, loc) in locals.iter().enumerate() {
                    if l != j {
                        nj = nj.mul(loc)?;
                    }
                }
                num = num.add(&nj)?;
            }
            let den = locals.iter().try_fold(Poly::one(top), |acc, l| acc.mul(l))?;
            let num = num.restrict(&ext).ok_or(Error::FieldMismatch)?;
            let den = den.restrict(&ext).ok_or(Error::FieldMismatch)?;
            RatFunc::new(num, den)
        }
    }
}

pub fn render(tower: &Tower, constant: FieldElem, parts: &[PrincipalPart]) -> Result<RatFunc> {
    let mut acc = RatFunc::constant(tower.base(), constant);
    for part in parts {
        acc = acc.add(&render_part(tower, part)?)?;
    }
    Ok(acc)
}

/// Canonical representative of the class of `u` modulo `{z^p - z}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ASNormalForm {
    /// `t * tau` for `t` in `F_p`, `tau` the smallest element of trace 1.
    pub constant: FieldElem,
    pub parts: Vec<PrincipalPart>,
}

impl ASNormalForm {
    pub fn zero() -> Self {
        ASNormalForm {
            constant: FieldElem::ZERO,
            parts: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.parts.is_empty()
    }

    pub fn divisor(&self) -> WeightedDivisor {
        WeightedDivisor::new(self.parts.iter().map(|pp| (pp.point, pp.order())).collect())
    }

    /// Trace class of the constant, in `0..p`.
    pub fn constant_class(&self, k: &GaloisField) -> u32 {
        k.trace_to_prime(self.constant)
    }

    pub fn render(&self, tower: &Tower) -> Result<RatFunc> {
        render(tower, self.constant, &self.parts)
    }
}

/// Removes every `xbar^k` with `p | k` in favour of `p_th_root(w_k) xbar^{k/p}`
/// and trims trailing zeros. `w[k]` is the coefficient of `xbar^k`; `w[0]`
/// is left alone.
pub(crate) fn p_reduce(top: &GaloisField, w: &mut Vec<FieldElem>) {
    let p = top.characteristic() as usize;
    for k in (1..w.len()).rev() {
        if k % p == 0 && !w[k].is_zero() {
            let r = top.p_th_root(w[k]);
            w[k / p] = top.add(w[k / p], r);
            w[k] = FieldElem::ZERO;
        }
    }
    while w.len() > 1 && w.last().is_some_and(|a| a.is_zero()) {
        w.pop();
    }
}

fn canonical_constant(k: &GaloisField, class: u32) -> FieldElem {
    if class == 0 {
        FieldElem::ZERO
    } else {
        k.mul(k.from_int(class as i64), k.trace_one())
    }
}

pub fn normal_form_from_parts(
    tower: &Tower,
    c0: FieldElem,
    parts: Vec<PrincipalPart>,
) -> Result<ASNormalForm> {
    let k = tower.base();
    let mut out = Vec::new();
    for mut part in parts {
        let ext = tower.ext(part.point.degree())?;
        let mut w = Vec::with_capacity(part.coeffs.len() + 1);
        w.push(FieldElem::ZERO);
        w.extend_from_slice(&part.coeffs);
        p_reduce(ext.top(), &mut w);
        if w.len() > 1 {
            part.coeffs = w[1..].to_vec();
            out.push(part);
        }
    }
    out.sort();
    Ok(ASNormalForm {
        constant: canonical_constant(k, k.trace_to_prime(c0)),
        parts: out,
    })
}

pub fn as_reduce(tower: &Tower, u: &RatFunc) -> Result<ASNormalForm> {
    if u.is_zero() {
        return Ok(ASNormalForm::zero());
    }
    let (c0, parts) = partial_fractions(tower, u)?;
    normal_form_from_parts(tower, c0, parts)
}

/// `y^p - y = u` is geometrically irreducible iff `u` is not of the form
/// `z^p - z`.
pub fn is_geometrically_irreducible(tower: &Tower, u: &RatFunc) -> Result<bool> {
    Ok(!as_reduce(tower, u)?.is_zero())
}

/// `#V_{m,e} = (q^m - 1) q^{m(e - 1 - floor(e/p))}`.
pub fn count_v(m: u32, e: u32, q: u64, p: u32) -> Result<u128> {
    if e == 0 || e.is_multiple_of(p) {
        return Err(Error::PDividesE { e, p });
    }
    let qm = (q as u128)
        .checked_pow(m)
        .ok_or(Error::size("q^m", u128::MAX, u128::MAX))?;
    let free = e - 1 - e / p;
    qm.checked_pow(free)
        .and_then(|x| x.checked_mul(qm - 1))
        .ok_or(Error::size("#V", u128::MAX, u128::MAX))
}

/// Stream of the vectors `(a_1, ..., a_e)` over `F_{q^m}` with `a_e != 0`
/// and `a_i = 0` whenever `p | i`, in index order.
#[derive(Clone, Debug)]
pub struct VStream {
    qm: u64,
    e: usize,
    free: Vec<usize>,
    next: u128,
    total: u128,
}

pub fn enumerate_v(tower: &Tower, m: u32, e: u32) -> Result<VStream> {
    let p = tower.p();
    let total = count_v(m, e, tower.q(), p)?;
    let qm = tower.ext(m)?.top().order() as u64;
    let free = (1..e as usize).filter(|i| i % p as usize != 0).collect();
    Ok(VStream {
        qm,
        e: e as usize,
        free,
        next: 0,
        total,
    })
}

impl VStream {
    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The vector at position `idx` of the stream.
    pub fn decode(&self, mut idx: u128) -> Vec<FieldElem> {
        let mut a = vec![FieldElem::ZERO; self.e];
        let lead = self.qm as u128 - 1;
        a[self.e - 1] = FieldElem::from_index((1 + idx % lead) as u32);
        idx /= lead;
        for &i in &self.free {
            a[i - 1] = FieldElem::from_index((idx % self.qm as u128) as u32);
            idx /= self.qm as u128;
        }
        a
    }
}

impl Iterator for VStream {
    type Item = Vec<FieldElem>;
    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let v = self.decode(self.next);
        self.next += 1;
        Some(v)
    }
}

/// Binomial coefficients mod `p`, rows `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct Binomials {
    rows: Vec<Vec<u32>>,
}

impl Binomials {
    pub(crate) fn new(n: usize, p: u32) -> Self {
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = vec![1u32; i + 1];
            for k in 1..i {
                row[k] = (rows[i - 1][k - 1] + rows[i - 1][k]) % p;
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, k: usize) -> u32 {
        self.rows[i][k]
    }
}

/// Where a part at `theta` goes under `u -> u o gamma`: the new pole
/// `gamma^{-1}(theta)` and `(alpha, beta)` with
/// `1/(gamma(x) - theta) = alpha * xbar' + beta` (or `gamma(x)` itself when
/// `theta` is infinity).
pub(crate) fn part_move(ext: &ExtTower, g: &Mobius, theta: ProjPoint) -> (ProjPoint, FieldElem, FieldElem) {
    let t = ext.top();
    let (a, b, c, d) = (ext.embed(g.a), ext.embed(g.b), ext.embed(g.c), ext.embed(g.d));
    let det = t.sub(t.mul(a, d), t.mul(b, c));
    let inv = |x: FieldElem| t.inv(x).expect("nonzero");
    match theta {
        None => {
            if c.is_zero() {
                let di = inv(d);
                (None, t.mul(a, di), t.mul(b, di))
            } else {
                let ci = inv(c);
                (
                    Some(t.neg(t.mul(d, ci))),
                    t.neg(t.mul(det, t.mul(ci, ci))),
                    t.mul(a, ci),
                )
            }
        }
        Some(th) => {
            let a2 = t.sub(a, t.mul(c, th));
            let b2 = t.sub(b, t.mul(d, th));
            if a2.is_zero() {
                let bi = inv(b2);
                (None, t.mul(c, bi), t.mul(d, bi))
            } else {
                let ai = inv(a2);
                (
                    Some(t.neg(t.mul(b2, ai))),
                    t.mul(det, t.mul(ai, ai)),
                    t.mul(c, ai),
                )
            }
        }
    }
}

/// `w_k = sum_i a_i C(i,k) alpha^k beta^{i-k}` for `k = 0..=e`, with
/// `a[i-1] = a_i`.
pub(crate) fn substitute(
    t: &GaloisField,
    binom: &Binomials,
    a: &[FieldElem],
    alpha: FieldElem,
    beta: FieldElem,
    w: &mut Vec<FieldElem>,
) {
    let e = a.len();
    w.clear();
    w.resize(e + 1, FieldElem::ZERO);
    let mut bpow = Vec::with_capacity(e + 1);
    let mut x = FieldElem::ONE;
    for _ in 0..=e {
        bpow.push(x);
        x = t.mul(x, beta);
    }
    let mut apow = FieldElem::ONE;
    for k in 0..=e {
        let mut s = FieldElem::ZERO;
        for i in k.max(1)..=e {
            let ai = a[i - 1];
            if ai.is_zero() {
                continue;
            }
            let c = binom.get(i, k);
            if c == 0 {
                continue;
            }
            let term = t.mul(ai, bpow[i - k]);
            s = t.add(s, if c == 1 { term } else { t.scale(c as u64, term) });
        }
        w[k] = t.mul(s, apow);
        apow = t.mul(apow, alpha);
    }
}

/// Normal form of `u o gamma` computed directly on the normal form of `u`.
pub fn act_normal_form(tower: &Tower, g: &Mobius, nf: &ASNormalForm) -> Result<ASNormalForm> {
    let k = tower.base();
    let p = tower.p();
    let max_e = nf.parts.iter().map(|pp| pp.coeffs.len()).max().unwrap_or(0);
    let binom = Binomials::new(max_e, p);
    let mut class = nf.constant_class(k);
    let mut parts = Vec::with_capacity(nf.parts.len());
    let mut w = Vec::new();
    for part in &nf.parts {
        let ext = tower.ext(part.point.degree())?;
        let top = ext.top();
        let (dest, alpha, beta) = part_move(&ext, g, part.point.root());
        substitute(top, &binom, &part.coeffs, alpha, beta, &mut w);
        let (point, j) = ClosedPoint::canonicalize(&ext, dest);
        if j != 0 {
            for x in w.iter_mut() {
                *x = ext.frob_pow(*x, j);
            }
        }
        class = (class + top.trace_to_prime(w[0])) % p;
        w[0] = FieldElem::ZERO;
        p_reduce(top, &mut w);
        parts.push(PrincipalPart {
            point,
            coeffs: w[1..].to_vec(),
        });
    }
    parts.sort();
    Ok(ASNormalForm {
        constant: canonical_constant(k, class),
        parts,
    })
}

/// `u o gamma` by explicit composition; reducing it gives the reference
/// value for [`act_normal_form`].
pub fn act_on_ratfunc(g: &Mobius, u: &RatFunc) -> Result<RatFunc> {
    u.compose_mobius(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(p: u32, n: u32) -> std::sync::Arc<Tower> {
        Tower::new(p, n).unwrap()
    }

    #[test]
    fn div_infty_examples() {
        let t3 = tw(3, 1);
        let k3 = t3.base();
        let u = RatFunc::parse(k3, "x^3").unwrap();
        assert_eq!(
            div_infty(&t3, &u).unwrap().parts(),
            &[(ClosedPoint::Infinity, 3)]
        );
        let u = RatFunc::parse(k3, "1/(x^2+1)").unwrap();
        let w = div_infty(&t3, &u).unwrap();
        assert_eq!(w.parts().len(), 1);
        assert_eq!(w.parts()[0].0.degree(), 2);
        let t5 = tw(5, 1);
        let u = RatFunc::parse(t5.base(), "1/(x^2+1)").unwrap();
        let w = div_infty(&t5, &u).unwrap();
        assert_eq!(
            w.parts(),
            &[
                (ClosedPoint::rational(FieldElem::from_index(2)), 1),
                (ClosedPoint::rational(FieldElem::from_index(3)), 1)
            ]
        );
        assert_eq!(div_infty(&t5, &RatFunc::zero(t5.base())), Err(Error::ZeroFunction));
    }

    #[test]
    fn partial_fraction_of_inverse_quadratic() {
        // 1/(x^2+1) = (i/2)/(x+i) + (-i/2)/(x-i) over F_3
        let t = tw(3, 1);
        let u = RatFunc::parse(t.base(), "1/(x^2+1)").unwrap();
        let (c0, parts) = partial_fractions(&t, &u).unwrap();
        assert!(c0.is_zero());
        assert_eq!(parts.len(), 1);
        let ext = t.ext(2).unwrap();
        let f9 = ext.top();
        let ClosedPoint::Finite { root, .. } = parts[0].point else { panic!() };
        let i = f9.neg(root); // root = -i
        assert_eq!(f9.mul(i, i), f9.from_int(-1));
        let half_i = f9.div(i, f9.from_int(2)).unwrap();
        assert_eq!(parts[0].coeffs, vec![half_i]);
        assert_eq!(render(&t, c0, &parts).unwrap(), u);
    }

    #[test]
    fn polynomial_partial_fraction() {
        let t = tw(5, 1);
        let u = RatFunc::parse(t.base(), "3 + 2*x + x^4").unwrap();
        let (c0, parts) = partial_fractions(&t, &u).unwrap();
        assert_eq!(c0, FieldElem::from_index(3));
        assert_eq!(parts[0].point, ClosedPoint::Infinity);
        assert_eq!(
            parts[0].coeffs,
            vec![2, 0, 0, 1].into_iter().map(FieldElem::from_index).collect::<Vec<_>>()
        );
    }

    #[test]
    fn as_reduce_examples() {
        let t = tw(3, 1);
        let k = t.base();
        let nf = as_reduce(&t, &RatFunc::parse(k, "x^3").unwrap()).unwrap();
        assert_eq!(nf.parts.len(), 1);
        assert_eq!(nf.parts[0].coeffs, vec![FieldElem::ONE]);
        assert!(!is_geometrically_irreducible(&t, &RatFunc::parse(k, "x^3 - x").unwrap()).unwrap());
        assert!(is_geometrically_irreducible(&t, &RatFunc::x(k)).unwrap());
        for n in 1..=4 {
            let t2 = tw(2, n);
            let one = RatFunc::constant(t2.base(), FieldElem::ONE);
            assert_eq!(is_geometrically_irreducible(&t2, &one).unwrap(), n % 2 == 1);
        }
    }

    #[test]
    fn count_v_examples() {
        assert_eq!(count_v(1, 1, 3, 3).unwrap(), 2);
        assert_eq!(count_v(1, 2, 3, 3).unwrap(), 6);
        assert_eq!(count_v(2, 3, 2, 2).unwrap(), 12);
        assert_eq!(count_v(1, 3, 3, 3), Err(Error::PDividesE { e: 3, p: 3 }));
        let t = tw(2, 1);
        let v: Vec<_> = enumerate_v(&t, 2, 3).unwrap().collect();
        assert_eq!(v.len(), 12);
        assert!(v.iter().all(|a| a[1].is_zero() && !a[2].is_zero()));
    }

    #[test]
    fn inversion_swaps_zero_and_infinity() {
        let t = tw(7, 1);
        let k = t.base();
        let inv = Mobius::new(k, FieldElem::ZERO, FieldElem::ONE, FieldElem::ONE, FieldElem::ZERO).unwrap();
        let u = RatFunc::x(k).compose_mobius(&inv).unwrap();
        assert_eq!(u, RatFunc::parse(k, "1/x").unwrap());
        assert_eq!(
            div_infty(&t, &u).unwrap().parts(),
            &[(ClosedPoint::rational(FieldElem::ZERO), 1)]
        );
    }
}
