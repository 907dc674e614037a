//! Dense univariate polynomials over a [`GaloisField`].

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{ExtTower, FieldElem, GaloisField};

/// Polynomial with coefficients constant-term first; never has a zero
/// leading coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: GaloisField,
    c: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.field, self)
    }
}

impl Poly {
    pub fn new(field: &GaloisField, mut c: Vec<FieldElem>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly {
            field: field.clone(),
            c,
        }
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &GaloisField, a: FieldElem) -> Self {
        Self::new(field, vec![a])
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::constant(field, FieldElem::ONE)
    }

    pub fn x(field: &GaloisField) -> Self {
        Self::new(field, vec![FieldElem::ZERO, FieldElem::ONE])
    }

    /// `x - a`.
    pub fn linear(field: &GaloisField, a: FieldElem) -> Self {
        Self::new(field, vec![field.neg(a), FieldElem::ONE])
    }

    pub fn monomial(field: &GaloisField, a: FieldElem, k: usize) -> Self {
        let mut c = vec![FieldElem::ZERO; k + 1];
        c[k] = a;
        Self::new(field, c)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElem {
        self.c.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FieldElem::ONE
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let len = self.c.len().max(other.c.len());
        let c = (0..len)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::new(f, c))
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, a: FieldElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&b| f.mul(a, b)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &self.field;
        let mut c = vec![FieldElem::ZERO; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::new(f, c))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut r = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).expect("same field");
            }
            b = b.mul(&b).expect("same field");
            e >>= 1;
        }
        r
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d)?;
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(d.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![FieldElem::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = f.mul(r[k + dd], inv);
            q[k] = coef;
            if coef.is_zero() {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(coef, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Parse("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.c
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.scale(i as u64, a))
            .collect();
        Poly::new(f, c)
    }

    /// `self(x + a)`.
    pub fn taylor_shift(&self, a: FieldElem) -> Poly {
        let f = &self.field;
        let mut c = self.c.clone();
        // repeated synthetic division
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        Poly::new(f, c)
    }

    /// Applies `phi` to every coefficient, landing in `field`.
    pub fn map_coeffs(&self, field: &GaloisField, phi: impl Fn(FieldElem) -> FieldElem) -> Poly {
        Poly::new(field, self.c.iter().map(|&a| phi(a)).collect())
    }

    /// Image in `F_{q^m}[x]`.
    pub fn embed(&self, tower: &ExtTower) -> Poly {
        self.map_coeffs(tower.top(), |a| tower.embed(a))
    }

    /// Pull back from `F_{q^m}[x]`; `None` if some coefficient is not in `F_q`.
    pub fn restrict(&self, tower: &ExtTower) -> Option<Poly> {
        let c = self
            .c
            .iter()
            .map(|&a| tower.restrict(a))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::new(tower.base(), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut r = Poly::one(&self.field).rem(m)?;
        let mut b = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b)?.rem(m)?;
            }
            b = b.mul(&b)?.rem(m)?;
            e >>= 1;
        }
        Ok(r)
    }

    pub fn parse(field: &GaloisField, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = Poly::zero(field);
        for t in terms {
            let (neg, body) = match t.as_bytes().first() {
                Some(b'+') => (false, &t[1..]),
                Some(b'-') => (true, &t[1..]),
                _ => (false, t),
            };
            let (coef, pow) = parse_term(field, body)?;
            let mut term = Poly::monomial(field, coef, pow);
            if neg {
                term = term.neg();
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

fn parse_term(field: &GaloisField, t: &str) -> Result<(FieldElem, usize)> {
    let bad = || Error::Parse(format!("bad term '{t}'"));
    let (coef_str, mono) = match t.find('x') {
        None => (t, None),
        Some(i) => {
            let c = t[..i].trim_end_matches('*');
            (c, Some(&t[i + 1..]))
        }
    };
    let coef = if coef_str.is_empty() {
        FieldElem::ONE
    } else {
        let v: u32 = coef_str.parse().map_err(|_| bad())?;
        field.check(FieldElem::from_index(v)).map_err(|_| bad())?
    };
    let pow = match mono {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.parse().ok())
            .ok_or_else(bad)?,
    };
    Ok((coef, pow))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a.index()) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, v) => write!(f, "{v}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, v) => write!(f, "{v}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, n: u32) -> GaloisField {
        GaloisField::new(p, n).unwrap()
    }

    #[test]
    fn divrem_roundtrip() {
        let k = f(5, 1);
        let a = Poly::parse(&k, "1 + 2*x + 3*x^2 + x^5").unwrap();
        let b = Poly::parse(&k, "4 + x^2").unwrap();
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn parse_display_roundtrip() {
        let k = f(3, 2);
        let a = Poly::parse(&k, "2 + 5*x + x^3").unwrap();
        assert_eq!(a.to_string(), "2 + 5*x + x^3");
        assert_eq!(Poly::parse(&k, &a.to_string()).unwrap(), a);
        let b = Poly::parse(&f(3, 1), "x^2 - 1").unwrap();
        assert_eq!(b.to_string(), "2 + x^2");
        assert!(Poly::parse(&k, "x^").is_err());
        assert!(Poly::parse(&k, "9*x").is_err());
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let k = f(7, 1);
        let a = Poly::parse(&k, "3 + x + 4*x^2 + 6*x^4").unwrap();
        let s = a.taylor_shift(FieldElem::from_index(2));
        for x in k.elements() {
            assert_eq!(s.eval(x), a.eval(k.add(x, FieldElem::from_index(2))));
        }
    }

    #[test]
    fn gcd_of_products() {
        let k = f(2, 3);
        let a = Poly::parse(&k, "1 + x").unwrap();
        let b = Poly::parse(&k, "3 + x^2").unwrap();
        let c = Poly::parse(&k, "5 + x").unwrap();
        let g = a.mul(&b).unwrap().gcd(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(g, b.monic());
    }
}
