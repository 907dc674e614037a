//! Ramification data, splitting behaviors and closed-form mass formulas.
//!
//! Every closed form is a polynomial in `q` with rational coefficients
//! ([`QPoly`]), so it can be evaluated exactly and inspected symbolically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{is_prime, prime_power};

/// Exact value of a mass formula.
pub type MassValue = BigRational;

pub fn render_rational(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial in `q` over the rationals, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `q^k`.
    pub fn q_pow(k: u32) -> Self {
        let mut c = vec![BigRational::zero(); k as usize + 1];
        c[k as usize] = BigRational::one();
        QPoly(c)
    }

    /// `q^k - 1`.
    pub fn q_pow_minus_one(k: u32) -> Self {
        Self::q_pow(k).sub(&Self::one())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.leading();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((QPoly::new(q), QPoly::new(r)))
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Parse(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_u64(&self, q: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(q)))
    }

    /// True when all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coef}")?;
                    }
                    if i == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Multiset `{eps_1, ..., eps_r}` of ramification invariants in
/// characteristic `p`, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RamData {
    p: u32,
    eps: Vec<u32>,
}

impl RamData {
    pub fn new(p: u32, mut eps: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if eps.is_empty() {
            return Err(Error::InvalidRamData("empty".into()));
        }
        for &e in &eps {
            if e < 2 {
                return Err(Error::InvalidRamData(format!("{e} < 2")));
            }
            if e % p == 1 % p {
                return Err(Error::InvalidRamData(format!("{e} = 1 mod {p}")));
            }
        }
        eps.sort();
        Ok(RamData { p, eps })
    }

    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let eps = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad ramification entry '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, eps)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn eps(&self) -> &[u32] {
        &self.eps
    }

    pub fn r(&self) -> usize {
        self.eps.len()
    }

    /// `d = sum eps_i - 2`.
    pub fn d(&self) -> u64 {
        self.eps.iter().map(|&e| e as u64).sum::<u64>() - 2
    }

    /// `g = d(p-1)/2`.
    pub fn genus(&self) -> u64 {
        self.d() * (self.p as u64 - 1) / 2
    }

    /// `(r-1)(p-1)`.
    pub fn p_rank(&self) -> u64 {
        (self.r() as u64 - 1) * (self.p as u64 - 1)
    }

    /// `delta_R = d - 1 - sum floor((eps_i - 1)/p)`.
    pub fn dimension(&self) -> i64 {
        self.d() as i64 - 1 - self.eps.iter().map(|&e| ((e - 1) / self.p) as i64).sum::<i64>()
    }

    /// `E = sum (e_i - 1 - floor(e_i/p))` with `e_i = eps_i - 1`.
    pub fn e_total(&self) -> u32 {
        self.eps.iter().map(|&eps| e_of_pole(eps - 1, self.p)).sum()
    }

    /// Distinct values with multiplicities.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &e in &self.eps {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for RamData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.eps.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Free coefficients of a pole of order `e` at a rational point.
pub fn e_of_pole(e: u32, p: u32) -> u32 {
    e - 1 - e / p
}

pub fn genus_of(r: &RamData) -> u64 {
    r.genus()
}

pub fn d_of(r: &RamData) -> u64 {
    r.d()
}

pub fn p_rank_of(r: &RamData) -> u64 {
    r.p_rank()
}

pub fn dimension_of(r: &RamData) -> i64 {
    r.dimension()
}

#[allow(non_snake_case)]
pub fn E_of(r: &RamData) -> u32 {
    r.e_total()
}

/// Frobenius orbits of the branch points: `(eps, m)` per orbit of degree
/// `m`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitBehavior {
    groups: Vec<(u32, u32)>,
}

impl SplitBehavior {
    pub fn new(mut groups: Vec<(u32, u32)>) -> Result<Self> {
        if groups.iter().any(|&(_, m)| m == 0) {
            return Err(Error::Parse("orbit of degree 0".into()));
        }
        groups.sort();
        Ok(SplitBehavior { groups })
    }

    /// All points rational.
    pub fn split(r: &RamData) -> Self {
        SplitBehavior {
            groups: r.eps().iter().map(|&e| (e, 1)).collect(),
        }
    }

    pub fn groups(&self) -> &[(u32, u32)] {
        &self.groups
    }

    pub fn r(&self) -> u32 {
        self.groups.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_split(&self) -> bool {
        self.groups.iter().all(|&(_, m)| m == 1)
    }

    /// Ramification data this behavior refines.
    pub fn ram(&self, p: u32) -> Result<RamData> {
        let eps = self
            .groups
            .iter()
            .flat_map(|&(e, m)| std::iter::repeat_n(e, m as usize))
            .collect();
        RamData::new(p, eps)
    }

    pub fn compatible_with(&self, r: &RamData) -> bool {
        self.ram(r.p()).is_ok_and(|x| x == *r)
    }

    /// Sorted orbit degrees.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.groups.iter().map(|&(_, m)| m).collect();
        d.sort();
        d
    }
}

impl fmt::Display for SplitBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .groups
            .iter()
            .map(|&(e, m)| {
                if m == 1 {
                    e.to_string()
                } else {
                    let v: Vec<String> = (0..m).map(|_| e.to_string()).collect();
                    format!("({})", v.join("-"))
                }
            })
            .collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for SplitBehavior {
    type Err = Error;

    /// `"2,(3-3)"`: bare entries are rational points, a parenthesised group
    /// of `m` equal entries is a point of degree `m`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad splitting spec '{s}'"));
        let mut groups = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                let vals = inner
                    .split('-')
                    .map(|v| v.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if vals.windows(2).any(|w| w[0] != w[1]) {
                    return Err(bad());
                }
                groups.push((vals[0], vals.len() as u32));
            } else {
                groups.push((tok.parse::<u32>().map_err(|_| bad())?, 1));
            }
        }
        SplitBehavior::new(groups)
    }
}

fn integer_partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in integer_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every splitting behavior refining `r`.
pub fn compatible_splits(r: &RamData) -> Vec<SplitBehavior> {
    let mut acc: Vec<Vec<(u32, u32)>> = vec![vec![]];
    for (eps, k) in r.multiplicities() {
        let mut next = Vec::new();
        for prefix in &acc {
            for part in integer_partitions(k, k) {
                let mut g = prefix.clone();
                g.extend(part.into_iter().map(|m| (eps, m)));
                next.push(g);
            }
        }
        acc = next;
    }
    let mut out: Vec<SplitBehavior> = acc
        .into_iter()
        .map(|g| SplitBehavior::new(g).expect("positive degrees"))
        .collect();
    out.sort();
    out
}

/// Multisets of parts `>= 2`, none `= 1 mod p`, summing to `2 + 2g/(p-1)`.
pub fn partitions_for_genus(g: u64, p: u32) -> Result<Vec<RamData>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let pm1 = p as u64 - 1;
    if !(2 * g).is_multiple_of(pm1) {
        return Err(Error::GenusNotMultiple {
            two_g: 2 * g,
            p_minus_1: pm1,
        });
    }
    let total = 2 + 2 * g / pm1;
    fn rec(n: u64, max: u64, p: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (2..=n.min(max)).rev() {
            if part % p == 1 % p {
                continue;
            }
            cur.push(part as u32);
            rec(n - part, part, p, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(total, total, p as u64, &mut Vec::new(), &mut raw);
    let mut out = raw
        .into_iter()
        .map(|eps| RamData::new(p, eps))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// `|N_W| = p q^E prod (q^{m_i} - 1)`.
pub fn count_n(r: &RamData, s: &SplitBehavior, q: u64) -> Result<BigInt> {
    check_compatible(r, s)?;
    check_q(r.p(), q)?;
    let qb = BigInt::from(q);
    let mut n = BigInt::from(r.p()) * num_traits::pow(qb.clone(), r.e_total() as usize);
    for &(_, m) in s.groups() {
        n *= num_traits::pow(qb.clone(), m as usize) - 1;
    }
    Ok(n)
}

/// Same product as a polynomial in `q`, without the factor `p`.
pub fn count_n_poly(r: &RamData, s: &SplitBehavior) -> Result<QPoly> {
    check_compatible(r, s)?;
    let mut n = QPoly::q_pow(r.e_total());
    for &(_, m) in s.groups() {
        n = n.mul(&QPoly::q_pow_minus_one(m));
    }
    Ok(n)
}

fn check_compatible(r: &RamData, s: &SplitBehavior) -> Result<()> {
    if s.compatible_with(r) {
        Ok(())
    } else {
        Err(Error::IncompatibleSplit {
            ram: r.to_string(),
            split: s.to_string(),
        })
    }
}

fn check_q(p: u32, q: u64) -> Result<()> {
    match prime_power(q) {
        Some((pp, _)) if pp == p => Ok(()),
        _ => Err(Error::InvalidRamData(format!("q = {q} is not a power of p = {p}"))),
    }
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `T = sum over divisor orbits of 1/|Gamma_W|` for the tabulated shapes, as
/// a polynomial in `q`.
pub fn t_closed_form(r: &RamData, s: &SplitBehavior) -> Result<QPoly> {
    check_compatible(r, s)?;
    let p = r.p();
    let unsupported = || Err(Error::UnsupportedShape(format!("R={r} S={s}")));
    let half = |x: &QPoly| x.scale(&BigRational::new(1.into(), 2.into()));
    let frac = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let degs = s.degrees();
    let same_eps = |m: u32| {
        let v: Vec<u32> = s.groups().iter().filter(|g| g.1 == m).map(|g| g.0).collect();
        v.windows(2).all(|w| w[0] == w[1])
    };
    // product of factorials of the multiplicities of equal eps among
    // rational points
    let sigma = {
        let mut counts = BTreeMap::new();
        for &(e, m) in s.groups() {
            if m == 1 {
                *counts.entry(e).or_insert(0u32) += 1;
            }
        }
        counts.values().map(|&c| factorial(c)).product::<i64>()
    };
    let t = match degs.as_slice() {
        // 1/(q(q-1)) is not a polynomial; handled in mass_rs_poly
        [1] | [1, 1] | [2] => {
            return Err(Error::UnsupportedShape(format!("R={r} S={s}: T is not a polynomial")))
        }
        [1, 1, 1] => QPoly::constant(frac(1, sigma)),
        [1, 2] => QPoly::constant(frac(1, 2)),
        [3] => QPoly::constant(frac(1, 3)),
        [1, 1, 1, 1] => QPoly::from_ints(&[-2, 1]).scale(&frac(1, sigma)),
        [1, 1, 2] => QPoly::q_pow(1).scale(&frac(1, 2 * sigma)),
        [1, 3] => QPoly::from_ints(&[1, 1]).scale(&frac(1, 3)),
        [2, 2] if p == 2 && same_eps(2) => QPoly::from_ints(&[-2, 1]).scale(&frac(1, 8)),
        [4] if p == 2 => half(&half(&QPoly::q_pow(1))),
        _ => return unsupported(),
    };
    Ok(t)
}

/// `Z_{R,S} = q^E prod (q^{m_i} - 1) T` as a quotient of polynomials in `q`.
pub fn mass_rs_fraction(r: &RamData, s: &SplitBehavior) -> Result<(QPoly, QPoly)> {
    check_compatible(r, s)?;
    if s.r() > 4 {
        return Err(Error::UnsupportedShape(format!("R={r} S={s} has r > 4")));
    }
    let n = count_n_poly(r, s)?;
    let degs = s.degrees();
    // for r <= 2 the group is too large for T to be a polynomial
    let (num, den) = match degs.as_slice() {
        [1] => (n, QPoly::from_ints(&[0, -1, 1])),
        [1, 1] if s.groups()[0].0 == s.groups()[1].0 => (n, QPoly::from_ints(&[-2, 2])),
        [1, 1] => (n, QPoly::from_ints(&[-1, 1])),
        [2] => (n, QPoly::from_ints(&[2, 2])),
        _ => (n.mul(&t_closed_form(r, s)?), QPoly::one()),
    };
    Ok(match num.divrem(&den)? {
        (quot, rem) if rem.is_zero() => (quot, QPoly::one()),
        _ => (num, den),
    })
}

/// `Z_{R,S}` as a polynomial in `q`; only `R = {2}` fails, where the mass
/// is `1/q`.
pub fn mass_rs_poly(r: &RamData, s: &SplitBehavior) -> Result<QPoly> {
    match mass_rs_fraction(r, s)? {
        (z, d) if d == QPoly::one() => Ok(z),
        (z, d) => Err(Error::UnsupportedShape(format!("R={r} S={s}: Z = ({z})/({d}) is not a polynomial"))),
    }
}

pub fn mass_rs(r: &RamData, s: &SplitBehavior, q: u64) -> Result<MassValue> {
    check_q(r.p(), q)?;
    let (num, den) = mass_rs_fraction(r, s)?;
    Ok(num.eval_u64(q) / den.eval_u64(q))
}

pub fn mass_r_poly(r: &RamData) -> Result<QPoly> {
    let mut z = QPoly::zero();
    for s in compatible_splits(r) {
        z = z.add(&mass_rs_poly(r, &s)?);
    }
    Ok(z)
}

pub fn mass_r(r: &RamData, q: u64) -> Result<MassValue> {
    check_q(r.p(), q)?;
    compatible_splits(r)
        .iter()
        .map(|s| mass_rs(r, s, q))
        .sum()
}

/// `Z_g` by summing `Z_R` over the partitions of the genus. In
/// characteristic 2 every genus falls back to `q^{2g-1}` when some shape
/// has no closed form.
pub fn mass_g_poly(g: u64, p: u32) -> Result<QPoly> {
    let parts = partitions_for_genus(g, p)?;
    let mut z = QPoly::zero();
    for r in &parts {
        match mass_r_poly(r) {
            Ok(zr) => z = z.add(&zr),
            Err(Error::UnsupportedShape(_)) if p == 2 => {
                return Ok(QPoly::q_pow((2 * g - 1) as u32));
            }
            Err(Error::UnsupportedShape(_)) => return Err(Error::UnsupportedGenus { g, p }),
            Err(e) => return Err(e),
        }
    }
    Ok(z)
}

pub fn mass_g(g: u64, p: u32, q: u64) -> Result<MassValue> {
    check_q(p, q)?;
    Ok(mass_g_poly(g, p)?.eval_u64(q))
}

/// Reference genus polynomials: `p = 2` any genus, `p = 3` for `g <= 5`,
/// `p >= 5` for `g = d(p-1)/2` with `d <= 5`.
pub fn reference_genus_poly(g: u64, p: u32) -> Option<QPoly> {
    if p == 2 {
        return (g >= 1).then(|| QPoly::q_pow((2 * g - 1) as u32));
    }
    let pm1 = p as u64 - 1;
    if p == 3 {
        let c: &[i64] = match g {
            1 => &[1],
            2 => &[-1, 1],
            3 => &[0, 0, 1],
            4 => &[0, 0, -1, 2],
            5 => &[0, 0, 1, -1, 1],
            _ => return None,
        };
        return Some(QPoly::from_ints(c));
    }
    if !(2 * g).is_multiple_of(pm1) {
        return None;
    }
    let c: &[i64] = match (2 * g / pm1, p) {
        (1, _) => &[1],
        (2, _) => &[-1, 2],
        (3, _) => &[0, -1, 2],
        (4, 5) => &[0, 0, -3, 3],
        (4, _) => &[0, 0, -3, 4],
        (5, 5) => &[0, 0, 1, -3, 3],
        (5, _) => &[0, 0, 1, -4, 4],
        _ => return None,
    };
    Some(QPoly::from_ints(c))
}

/// One line of a genus table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub p: u32,
    pub q: u64,
    pub g: u64,
    #[serde(rename = "R")]
    pub ram: String,
    #[serde(rename = "S")]
    pub split: String,
    pub delta: i64,
    pub poly: String,
    #[serde(rename = "Z")]
    pub z: String,
}

/// Per-R and total rows for each `(q, g)`; unsupported cells propagate the
/// error.
pub fn table_z(p: u32, q_list: &[u64], g_list: &[u64]) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &q in q_list {
        check_q(p, q)?;
        for &g in g_list {
            let total = mass_g_poly(g, p)?;
            let parts = partitions_for_genus(g, p)?;
            for r in &parts {
                if let Ok(zr) = mass_r_poly(r) {
                    rows.push(TableRow {
                        p,
                        q,
                        g,
                        ram: r.to_string(),
                        split: "all".into(),
                        delta: r.dimension(),
                        poly: zr.to_string(),
                        z: render_rational(&zr.eval_u64(q)),
                    });
                }
            }
            rows.push(TableRow {
                p,
                q,
                g,
                ram: "total".into(),
                split: "all".into(),
                delta: parts.iter().map(|r| r.dimension()).max().unwrap_or(0),
                poly: total.to_string(),
                z: render_rational(&total.eval_u64(q)),
            });
        }
    }
    Ok(rows)
}

/// Integer value of an exact mass, when it is one.
pub fn as_integer(v: &MassValue) -> Option<i128> {
    v.is_integer().then(|| v.numer().to_i128()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u32, e: &[u32]) -> RamData {
        RamData::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn genus_and_invariants() {
        assert_eq!(r(3, &[3]).genus(), 1);
        assert_eq!(r(7, &[2, 2]).genus(), 6);
        assert_eq!(r(2, &[2, 4]).genus(), 2);
        assert_eq!(r(3, &[6]).dimension(), 2);
        assert_eq!(r(7, &[6]).dimension(), 3);
        assert_eq!(r(5, &[2, 2, 3]).e_total(), 1);
        assert_eq!(r(5, &[2]).e_total(), 0);
        assert_eq!(r(3, &[6]).e_total(), 3);
        assert_eq!(r(5, &[2, 2, 2, 2]).p_rank(), 12);
        assert!(matches!(RamData::new(3, vec![4]), Err(Error::InvalidRamData(_))));
    }

    #[test]
    fn partitions() {
        let show = |g, p| -> Vec<String> {
            partitions_for_genus(g, p).unwrap().iter().map(|x| x.to_string()).collect()
        };
        assert_eq!(show(8, 5), vec!["{2,2,2}", "{2,4}", "{3,3}"]);
        assert_eq!(show(4, 5), vec!["{2,2}", "{4}"]);
        assert_eq!(show(1, 3), vec!["{3}"]);
        assert_eq!(show(3, 7), vec!["{3}"]);
        assert_eq!(
            partitions_for_genus(1, 5),
            Err(Error::GenusNotMultiple { two_g: 2, p_minus_1: 4 })
        );
    }

    #[test]
    fn split_spec_roundtrip() {
        let s: SplitBehavior = "2,(3-3)".parse().unwrap();
        assert_eq!(s.to_string(), "2,(3-3)");
        assert_eq!(s.r(), 3);
        assert!("(2-3)".parse::<SplitBehavior>().is_err());
        let all = compatible_splits(&r(5, &[2, 2, 2]));
        let names: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["2,2,2", "2,(2-2)", "(2-2-2)"]);
    }

    #[test]
    fn count_n_examples() {
        let s = SplitBehavior::split(&r(3, &[2]));
        assert_eq!(count_n(&r(3, &[2]), &s, 3).unwrap(), BigInt::from(6));
        let q = 7u64;
        let quad: SplitBehavior = "(2-2)".parse().unwrap();
        assert_eq!(
            count_n(&r(7, &[2, 2]), &quad, q).unwrap(),
            BigInt::from(7 * (q * q - 1))
        );
    }

    #[test]
    fn genus_theorems_match() {
        for g in 1..=4 {
            assert_eq!(mass_g_poly(g, 3).unwrap(), reference_genus_poly(g, 3).unwrap(), "p=3 g={g}");
        }
        // the reference g=5 total counts R={7}, which is not admissible for p=3
        assert_eq!(mass_g_poly(5, 3).unwrap().to_string(), "q^4 - q^3");
        for p in [5u32, 7, 11] {
            for d in 1..=5u64 {
                let g = d * (p as u64 - 1) / 2;
                assert_eq!(mass_g_poly(g, p).unwrap(), reference_genus_poly(g, p).unwrap());
            }
        }
        assert_eq!(mass_g_poly(2, 2).unwrap(), QPoly::q_pow(3));
        assert_eq!(mass_g_poly(3, 2).unwrap(), QPoly::q_pow(5));
    }

    #[test]
    fn p2_rows() {
        let z = mass_r_poly(&r(2, &[2, 2, 2, 2])).unwrap();
        assert_eq!(z, QPoly::from_ints(&[0, 0, 0, 0, -1, 1]));
        let z = mass_r_poly(&r(2, &[2, 2, 2])).unwrap();
        assert_eq!(z.to_string(), "q^3 - q^2");
    }

    #[test]
    fn qpoly_render() {
        assert_eq!(QPoly::from_ints(&[0, 0, -3, 4]).to_string(), "4q^3 - 3q^2");
        assert_eq!(QPoly::from_ints(&[-1]).to_string(), "-1");
        assert_eq!(render_rational(&rat(1225)), "1225/1");
        assert_eq!(parse_rational("6/4").unwrap(), BigRational::new(3.into(), 2.into()));
    }
}
