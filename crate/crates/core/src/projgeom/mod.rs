//! The projective line over `F_q`: closed points, `PGL_2(F_q)` and its
//! actions, divisor stabilizers and subgroup labels.
//!
//! Points of `P^1` over `F_{q^m}` are `Option<FieldElem>` with `None` the
//! point at infinity. A Mobius map acts on points on the left,
//! `gamma . P = gamma(P)`, and on functions on the right, `u -> u o gamma`, so
//! the poles of `u o gamma` are `gamma^{-1}` of the poles of `u`.

pub mod fourset;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{ExtTower, FieldElem, GaloisField, Tower};
use crate::poly::Poly;

/// Default bound on `|PGL_2(F_q)| = q^3 - q`.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 10_000_000;

/// A point of `P^1(F_{q^m})`; `None` is infinity.
pub type ProjPoint = Option<FieldElem>;

/// A Frobenius orbit of points of `P^1` over the algebraic closure.
///
/// A finite point of degree `m` is stored through the element of `F_{q^m}`
/// with the smallest packed index among its conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedPoint {
    Infinity,
    Finite { degree: u8, root: FieldElem },
}

impl ClosedPoint {
    pub fn degree(&self) -> u32 {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Finite { degree, .. } => *degree as u32,
        }
    }

    pub fn rational(a: FieldElem) -> Self {
        ClosedPoint::Finite { degree: 1, root: a }
    }

    /// The closed point through `theta`, an element of `F_{q^m}` of exact
    /// degree `m` over `F_q`.
    pub fn from_root(ext: &ExtTower, theta: FieldElem) -> Result<Self> {
        ext.top().check(theta)?;
        let m = ext.degree();
        if ext.degree_over_base(theta) != m {
            return Err(Error::FieldMismatch);
        }
        let root = ext.conjugates(theta).into_iter().min().expect("m >= 1");
        Ok(ClosedPoint::Finite {
            degree: m as u8,
            root,
        })
    }

    /// Closed point of a projective point over `F_{q^m}` whose degree is
    /// known to be `m`; returns the point and the power `j` with
    /// `Fr^j(theta) = root`.
    pub(crate) fn canonicalize(ext: &ExtTower, pt: ProjPoint) -> (ClosedPoint, u32) {
        match pt {
            None => (ClosedPoint::Infinity, 0),
            Some(theta) => {
                let mut best = theta;
                let mut best_j = 0;
                let mut x = theta;
                for j in 1..ext.degree() {
                    x = ext.frob(x);
                    if x < best {
                        best = x;
                        best_j = j;
                    }
                }
                (
                    ClosedPoint::Finite {
                        degree: ext.degree() as u8,
                        root: best,
                    },
                    best_j,
                )
            }
        }
    }

    pub fn root(&self) -> ProjPoint {
        match self {
            ClosedPoint::Infinity => None,
            ClosedPoint::Finite { root, .. } => Some(*root),
        }
    }

    /// All geometric points, starting from the stored root.
    pub fn conjugates(&self, tower: &Tower) -> Result<Vec<ProjPoint>> {
        match self {
            ClosedPoint::Infinity => Ok(vec![None]),
            ClosedPoint::Finite { degree, root } => {
                let ext = tower.ext(*degree as u32)?;
                Ok(ext.conjugates(*root).into_iter().map(Some).collect())
            }
        }
    }

    /// Monic irreducible polynomial over `F_q` vanishing at the point
    /// (`None` for infinity).
    pub fn min_poly(&self, tower: &Tower) -> Result<Option<Poly>> {
        match self {
            ClosedPoint::Infinity => Ok(None),
            ClosedPoint::Finite { degree, root } => {
                let ext = tower.ext(*degree as u32)?;
                let top = ext.top();
                let mut f = Poly::one(top);
                for c in ext.conjugates(*root) {
                    f = f.mul(&Poly::linear(top, c))?;
                }
                Ok(Some(f.restrict(&ext).expect("Frobenius-stable product")))
            }
        }
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Infinity => write!(f, "inf"),
            ClosedPoint::Finite { degree: 1, root } => write!(f, "{root}"),
            ClosedPoint::Finite { degree, root } => write!(f, "{root}@{degree}"),
        }
    }
}

type Cache<K, V> = Mutex<HashMap<K, Arc<Vec<V>>>>;

fn closed_point_cache() -> &'static Cache<(u32, u32, u32), ClosedPoint> {
    static C: OnceLock<Cache<(u32, u32, u32), ClosedPoint>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Every closed point of degree `m`, in increasing order (infinity first
/// when `m = 1`).
pub fn closed_points(tower: &Tower, m: u32) -> Result<Arc<Vec<ClosedPoint>>> {
    let key = (tower.p(), tower.base().degree(), m);
    if let Some(v) = closed_point_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let ext = tower.ext(m)?;
    let mut out = Vec::new();
    if m == 1 {
        out.push(ClosedPoint::Infinity);
        out.extend(tower.base().elements().map(ClosedPoint::rational));
    } else {
        for theta in ext.top().elements() {
            let conj = ext.conjugates(theta);
            if conj.iter().skip(1).all(|&c| c > theta) && ext.degree_over_base(theta) == m {
                out.push(ClosedPoint::Finite {
                    degree: m as u8,
                    root: theta,
                });
            }
        }
    }
    let out = Arc::new(out);
    closed_point_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Number of closed points of degree `m` on `P^1` over `F_q`.
pub fn count_closed_points(q: u64, m: u32) -> u64 {
    if m == 1 {
        return q + 1;
    }
    // (1/m) sum_{d | m} mu(m/d) q^d
    let mut total: i128 = 0;
    for d in 1..=m {
        if m.is_multiple_of(d) {
            total += mobius_mu(m / d) as i128 * (q as i128).pow(d);
        }
    }
    (total / m as i128) as u64
}

fn mobius_mu(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `x -> (a x + b)/(c x + d)` with the first nonzero entry scaled to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mobius {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: FieldElem::ONE,
        b: FieldElem::ZERO,
        c: FieldElem::ZERO,
        d: FieldElem::ONE,
    };

    pub fn new(k: &GaloisField, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self> {
        for x in [a, b, c, d] {
            k.check(x)?;
        }
        if k.sub(k.mul(a, d), k.mul(b, c)).is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).expect("det != 0");
        let s = k.inv(lead)?;
        Ok(Mobius {
            a: k.mul(s, a),
            b: k.mul(s, b),
            c: k.mul(s, c),
            d: k.mul(s, d),
        })
    }

    fn normalized(k: &GaloisField, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Self {
        Self::new(k, a, b, c, d).expect("invertible")
    }

    pub fn det(&self, k: &GaloisField) -> FieldElem {
        k.sub(k.mul(self.a, self.d), k.mul(self.b, self.c))
    }

    /// `self o other`.
    pub fn compose(&self, k: &GaloisField, o: &Mobius) -> Mobius {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        Self::normalized(
            k,
            k.add(k.mul(a, o.a), k.mul(b, o.c)),
            k.add(k.mul(a, o.b), k.mul(b, o.d)),
            k.add(k.mul(c, o.a), k.mul(d, o.c)),
            k.add(k.mul(c, o.b), k.mul(d, o.d)),
        )
    }

    pub fn inverse(&self, k: &GaloisField) -> Mobius {
        Self::normalized(k, self.d, k.neg(self.b), k.neg(self.c), self.a)
    }

    /// `gamma(x)` for `x` in `P^1(F_{q^m})`.
    pub fn apply(&self, ext: &ExtTower, x: ProjPoint) -> ProjPoint {
        let t = ext.top();
        let (a, b, c, d) = (
            ext.embed(self.a),
            ext.embed(self.b),
            ext.embed(self.c),
            ext.embed(self.d),
        );
        match x {
            None => {
                if c.is_zero() {
                    None
                } else {
                    Some(t.div(a, c).expect("c != 0"))
                }
            }
            Some(x) => {
                let den = t.add(t.mul(c, x), d);
                if den.is_zero() {
                    None
                } else {
                    Some(t.div(t.add(t.mul(a, x), b), den).expect("den != 0"))
                }
            }
        }
    }

    /// `gamma(P)` for a closed point.
    pub fn act_on_point(&self, tower: &Tower, pt: &ClosedPoint) -> Result<ClosedPoint> {
        let ext = tower.ext(pt.degree())?;
        Ok(ClosedPoint::canonicalize(&ext, self.apply(&ext, pt.root())).0)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

fn pgl2_cache() -> &'static Cache<(u32, u32), Mobius> {
    static C: OnceLock<Cache<(u32, u32), Mobius>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All of `PGL_2(F_q)` in increasing order.
pub fn enumerate_pgl2(k: &GaloisField) -> Result<Arc<Vec<Mobius>>> {
    enumerate_pgl2_with_limit(k, DEFAULT_MAX_GROUP_ORDER)
}

pub fn enumerate_pgl2_with_limit(k: &GaloisField, limit: u64) -> Result<Arc<Vec<Mobius>>> {
    let q = k.order() as u64;
    let order = q * q * q - q;
    if order > limit {
        return Err(Error::size("|PGL2|", order as u128, limit as u128));
    }
    let key = (k.characteristic(), k.degree());
    if let Some(g) = pgl2_cache().lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let mut out = Vec::with_capacity(order as usize);
    for c in k.elements() {
        for d in k.elements() {
            if !c.is_zero() {
                out.push(Mobius {
                    a: FieldElem::ZERO,
                    b: FieldElem::ONE,
                    c,
                    d,
                });
            }
        }
    }
    for b in k.elements() {
        for c in k.elements() {
            for d in k.elements() {
                if d != k.mul(b, c) {
                    out.push(Mobius {
                        a: FieldElem::ONE,
                        b,
                        c,
                        d,
                    });
                }
            }
        }
    }
    out.sort();
    let out = Arc::new(out);
    pgl2_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// `W = sum e_P P`, kept sorted by point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeightedDivisor {
    parts: Vec<(ClosedPoint, u32)>,
}

impl WeightedDivisor {
    pub fn new(mut parts: Vec<(ClosedPoint, u32)>) -> Self {
        parts.retain(|&(_, e)| e > 0);
        parts.sort();
        let mut merged: Vec<(ClosedPoint, u32)> = Vec::with_capacity(parts.len());
        for (pt, e) in parts {
            match merged.last_mut() {
                Some((last, w)) if *last == pt => *w += e,
                _ => merged.push((pt, e)),
            }
        }
        WeightedDivisor { parts: merged }
    }

    pub fn parts(&self) -> &[(ClosedPoint, u32)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn support(&self) -> Vec<ClosedPoint> {
        self.parts.iter().map(|&(p, _)| p).collect()
    }

    /// Number of geometric points in the support.
    pub fn geometric_degree(&self) -> u32 {
        self.parts.iter().map(|(p, _)| p.degree()).sum()
    }

    /// `gamma(W)`.
    pub fn act(&self, tower: &Tower, g: &Mobius) -> Result<WeightedDivisor> {
        let parts = self
            .parts
            .iter()
            .map(|(pt, e)| Ok((g.act_on_point(tower, pt)?, *e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightedDivisor::new(parts))
    }

    /// Ramification data `{e + 1}` listed per geometric point, sorted.
    pub fn ram_data(&self) -> Vec<u32> {
        let mut r: Vec<u32> = self
            .parts
            .iter()
            .flat_map(|(p, e)| std::iter::repeat_n(e + 1, p.degree() as usize))
            .collect();
        r.sort();
        r
    }
}

impl fmt::Display for WeightedDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(p, e)| format!("{e}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A subgroup of `PGL_2(F_q)` together with a label for its action on the
/// geometric support points it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupTag {
    pub label: String,
    pub elements: Vec<Mobius>,
}

impl SubgroupTag {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_closed(&self, k: &GaloisField) -> bool {
        let set: std::collections::HashSet<_> = self.elements.iter().collect();
        self.elements
            .iter()
            .all(|g| self.elements.iter().all(|h| set.contains(&g.compose(k, h))))
    }
}

/// Permutation of the listed geometric points induced by `g`.
fn permutation(tower: &Tower, g: &Mobius, pts: &[(u32, ProjPoint)]) -> Result<Vec<usize>> {
    pts.iter()
        .map(|&(m, x)| {
            let ext = tower.ext(m)?;
            let y = g.apply(&ext, x);
            pts.iter()
                .position(|&(m2, z)| m2 == m && z == y)
                .ok_or(Error::FieldMismatch)
        })
        .collect()
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 1 {
            out.push(len);
        }
    }
    out.sort();
    out
}

/// Conjugacy label of a group acting on at most four points, from the
/// cycle types of its elements.
pub fn label_subgroup(tower: &Tower, elements: &[Mobius], support: &[ClosedPoint]) -> Result<String> {
    let mut pts = Vec::new();
    for p in support {
        for x in p.conjugates(tower)? {
            pts.push((p.degree(), x));
        }
    }
    let n = elements.len();
    let types = elements
        .iter()
        .map(|g| Ok(cycle_type(&permutation(tower, g, &pts)?)))
        .collect::<Result<Vec<_>>>()?;
    let trivial = types.iter().filter(|t| t.is_empty()).count();
    if trivial > 1 || pts.len() > 4 {
        return Ok(format!("order {n}"));
    }
    let has = |t: &[usize]| types.iter().any(|x| x == t);
    let label = match n {
        1 => "1",
        2 if has(&[2, 2]) => "C2'",
        2 => "C2",
        3 => "C3",
        4 if has(&[4]) => "C4",
        4 if types.iter().filter(|t| **t == [2, 2]).count() == 3 => "C2xC2",
        4 => "C2xC2'",
        6 => "S3",
        8 => "D4",
        12 => "A4",
        24 => "S4",
        _ => return Ok(format!("order {n}")),
    };
    Ok(label.to_string())
}

/// `Gamma_W = {gamma : gamma(W) = W}` by filtering the whole group.
pub fn stabilizer_of_divisor(tower: &Tower, w: &WeightedDivisor) -> Result<SubgroupTag> {
    if w.is_empty() {
        return Err(Error::InvalidRamData("empty divisor".into()));
    }
    let k = tower.base();
    let g = enumerate_pgl2(k)?;
    let mut elements = Vec::new();
    for gamma in g.iter() {
        if w.act(tower, gamma)? == *w {
            elements.push(*gamma);
        }
    }
    let label = label_subgroup(tower, &elements, &w.support())?;
    Ok(SubgroupTag { label, elements })
}

/// The divisor `{0, 1, inf, t}` with unit weights.
pub fn b_t(k: &GaloisField, t: FieldElem) -> Result<WeightedDivisor> {
    k.check(t)?;
    if t.is_zero() || t == FieldElem::ONE {
        return Err(Error::BadT);
    }
    Ok(WeightedDivisor::new(vec![
        (ClosedPoint::Infinity, 1),
        (ClosedPoint::rational(FieldElem::ZERO), 1),
        (ClosedPoint::rational(FieldElem::ONE), 1),
        (ClosedPoint::rational(t), 1),
    ]))
}

/// Stabilizer of `{0, 1, inf, t}`.
pub fn classify_gamma_t(tower: &Tower, t: FieldElem) -> Result<SubgroupTag> {
    let w = b_t(tower.base(), t)?;
    stabilizer_of_divisor(tower, &w)
}

/// The six images of `t` under the cross-ratio action of `S_3`.
pub fn s3_orbit(k: &GaloisField, t: FieldElem) -> Vec<FieldElem> {
    let one = FieldElem::ONE;
    let inv = |x| k.inv(x).expect("t avoids 0 and 1");
    let omt = k.sub(one, t);
    let mut v = vec![
        t,
        omt,
        inv(t),
        inv(omt),
        k.mul(t, inv(k.sub(t, one))),
        k.mul(k.sub(t, one), inv(t)),
    ];
    v.sort();
    v.dedup();
    v
}

/// Number of `S_3`-orbits of `t in F_q - {0,1}` whose stabilizer is exactly
/// the Klein group, by exhaustion.
pub fn count_k_orbits(tower: &Tower) -> Result<u64> {
    let k = tower.base();
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for t in k.elements().skip(2) {
        if seen.contains(&t) {
            continue;
        }
        seen.extend(s3_orbit(k, t));
        if classify_gamma_t(tower, t)?.order() == 4 {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed form for [`count_k_orbits`].
pub fn count_k_orbits_formula(p: u32, q: u64) -> i64 {
    let chi = crate::gf::symbol_minus3(q);
    let q = q as i64;
    match p {
        2 => (q - 3 + chi) / 6,
        3 => (q - 3) / 6,
        _ => (q - 6 - chi) / 6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgl2_orders() {
        for (p, n, ord) in [(2, 1, 6), (3, 1, 24), (2, 2, 60), (5, 1, 120)] {
            let k = GaloisField::new(p, n).unwrap();
            let g = enumerate_pgl2(&k).unwrap();
            assert_eq!(g.len(), ord);
            assert!(g.contains(&Mobius::IDENTITY));
            let id = Mobius::IDENTITY;
            assert_eq!(id.compose(&k, &id), id);
        }
    }

    #[test]
    fn closed_point_counts() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let t = Tower::new(p, n).unwrap();
            let q = t.q();
            for m in 1..=4 {
                assert_eq!(
                    closed_points(&t, m).unwrap().len() as u64,
                    count_closed_points(q, m),
                    "q={q} m={m}"
                );
            }
        }
    }

    #[test]
    fn min_poly_of_i_over_f3() {
        let t = Tower::new(3, 1).unwrap();
        let pts = closed_points(&t, 2).unwrap();
        let polys: Vec<String> = pts
            .iter()
            .map(|p| p.min_poly(&t).unwrap().unwrap().to_string())
            .collect();
        assert!(polys.contains(&"1 + x^2".to_string()));
        assert_eq!(polys.len(), 3);
    }

    #[test]
    fn stabilizer_table_rows() {
        for (p, n) in [(3, 1), (2, 2), (5, 1)] {
            let t = Tower::new(p, n).unwrap();
            let q = t.q() as usize;
            let inf = WeightedDivisor::new(vec![(ClosedPoint::Infinity, 2)]);
            assert_eq!(stabilizer_of_divisor(&t, &inf).unwrap().order(), q * (q - 1));
            let two = WeightedDivisor::new(vec![
                (ClosedPoint::Infinity, 2),
                (ClosedPoint::rational(FieldElem::ZERO), 2),
            ]);
            assert_eq!(stabilizer_of_divisor(&t, &two).unwrap().order(), 2 * (q - 1));
            let w2 = closed_points(&t, 2).unwrap()[0];
            let quad = WeightedDivisor::new(vec![(w2, 1)]);
            let s = stabilizer_of_divisor(&t, &quad).unwrap();
            assert_eq!(s.order(), 2 * (q + 1));
            assert!(s.is_closed(t.base()));
        }
    }

    #[test]
    fn gamma_t_examples() {
        let t3 = Tower::new(3, 1).unwrap();
        assert_eq!(classify_gamma_t(&t3, FieldElem::from_index(2)).unwrap().label, "S4");
        let t5 = Tower::new(5, 1).unwrap();
        assert_eq!(classify_gamma_t(&t5, FieldElem::from_index(2)).unwrap().label, "D4");
        assert_eq!(count_k_orbits(&t5).unwrap(), 0);
        assert_eq!(
            classify_gamma_t(&t5, FieldElem::ONE),
            Err(Error::BadT)
        );
    }

    #[test]
    fn point_action_is_left_action() {
        let t = Tower::new(5, 1).unwrap();
        let k = t.base();
        let g = enumerate_pgl2(k).unwrap();
        let pts = closed_points(&t, 2).unwrap();
        for (i, a) in g.iter().enumerate().step_by(7) {
            let b = &g[(i * 31 + 5) % g.len()];
            for p in pts.iter() {
                let lhs = a.compose(k, b).act_on_point(&t, p).unwrap();
                let rhs = a.act_on_point(&t, &b.act_on_point(&t, p).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
