//! Brute-force computations of `Z_{R,S}(q)` that never consult a closed form.
//!
//! Oracle A counts the whole population `U` of normal forms of type
//! `(R, S)` and divides by `p |PGL_2(F_q)|`. Oracle B walks divisor orbits,
//! splits the normal forms on each representative divisor into
//! `Gamma_W`-orbits and sums `1/(p |Gamma_u|)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{ExtTower, FieldElem, Tower};
use crate::mass::{
    compatible_splits, count_n, mass_g, mass_rs, partitions_for_genus, render_rational, MassValue,
    RamData, SplitBehavior,
};
use crate::projgeom::{
    closed_points, count_closed_points, enumerate_pgl2, label_subgroup, stabilizer_of_divisor,
    ClosedPoint, Mobius, SubgroupTag, WeightedDivisor,
};
use crate::ratfunc::{
    act_normal_form, enumerate_v, p_reduce, part_move, ASNormalForm, Binomials, PrincipalPart,
    VStream,
};

pub const DEFAULT_MAX_POPULATION: u128 = 100_000_000;
pub const DEFAULT_MAX_GROUP: u64 = 1_000_000;

/// Feasibility bounds for a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Bound on `|U|`, the number of normal forms of the given type.
    pub max_population: u128,
    /// Bound on `q^3 - q`.
    pub max_group: u64,
}

impl Limits {
    /// Defaults, with `ASMASS_MAX_POP` overriding the population bound.
    pub fn from_env() -> Self {
        let max_population = std::env::var("ASMASS_MAX_POP")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .map(|x| x as u128)
            .unwrap_or(DEFAULT_MAX_POPULATION);
        Limits {
            max_population,
            max_group: DEFAULT_MAX_GROUP,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::from_env()
    }
}

fn falling(n: u128, k: u32) -> Option<u128> {
    (0..k as u128).try_fold(1u128, |acc, i| acc.checked_mul(n.checked_sub(i)?))
}

/// Number of weighted divisors of splitting type `s` over `F_q`.
pub fn count_divisors(s: &SplitBehavior, q: u64) -> Option<u128> {
    let mut per_degree: BTreeMap<u32, u32> = BTreeMap::new();
    let mut same: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for &g in s.groups() {
        *per_degree.entry(g.1).or_insert(0) += 1;
        *same.entry(g).or_insert(0) += 1;
    }
    let mut n = 1u128;
    for (&m, &k) in &per_degree {
        n = n.checked_mul(falling(count_closed_points(q, m) as u128, k)?)?;
    }
    for &c in same.values() {
        n /= falling(c as u128, c)?;
    }
    Some(n)
}

/// `|U| = #divisors * |N_W|`.
pub fn population(r: &RamData, s: &SplitBehavior, q: u64) -> Result<u128> {
    let n: u128 = count_n(r, s, q)?
        .try_into()
        .map_err(|_| Error::size("|N_W|", u128::MAX, u128::MAX))?;
    count_divisors(s, q)
        .and_then(|d| d.checked_mul(n))
        .ok_or(Error::size("|U|", u128::MAX, u128::MAX))
}

/// Checks the size policy and returns the tower over `F_q`.
pub fn feasible(r: &RamData, s: &SplitBehavior, q: u64, limits: &Limits) -> Result<Arc<Tower>> {
    let g = (q as u128).pow(3) - q as u128;
    if g > limits.max_group as u128 {
        return Err(Error::size("q^3 - q", g, limits.max_group as u128));
    }
    let pop = population(r, s, q)?;
    if pop > limits.max_population {
        return Err(Error::size("|U|", pop, limits.max_population));
    }
    let tower = Tower::for_order(q)?;
    if tower.p() != r.p() {
        return Err(Error::InvalidRamData(format!("q = {q} is not a power of p = {}", r.p())));
    }
    Ok(tower)
}

/// Every weighted divisor of splitting type `s`, sorted.
pub fn divisors_of_type(tower: &Tower, s: &SplitBehavior) -> Result<Vec<WeightedDivisor>> {
    let groups = s.groups();
    let mut pools = HashMap::new();
    for &(_, m) in groups {
        if let std::collections::hash_map::Entry::Vacant(v) = pools.entry(m) {
            v.insert(closed_points(tower, m)?);
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(u32, usize)> = Vec::with_capacity(groups.len());
    fn rec(
        i: usize,
        groups: &[(u32, u32)],
        pools: &HashMap<u32, Arc<Vec<ClosedPoint>>>,
        chosen: &mut Vec<(u32, usize)>,
        out: &mut Vec<WeightedDivisor>,
    ) {
        if i == groups.len() {
            let parts = chosen
                .iter()
                .zip(groups)
                .map(|(&(m, j), &(eps, _))| (pools[&m][j], eps - 1))
                .collect();
            out.push(WeightedDivisor::new(parts));
            return;
        }
        let (_, m) = groups[i];
        // identical groups take increasing points, so each divisor appears once
        let start = if i > 0 && groups[i - 1] == groups[i] {
            chosen[i - 1].1 + 1
        } else {
            0
        };
        for j in start..pools[&m].len() {
            if chosen.contains(&(m, j)) {
                continue;
            }
            chosen.push((m, j));
            rec(i + 1, groups, pools, chosen, out);
            chosen.pop();
        }
    }
    rec(0, groups, &pools, &mut chosen, &mut out);
    out.sort();
    Ok(out)
}

fn group_order(q: u64) -> u64 {
    q * q * q - q
}

/// Oracle A with the default limits.
pub fn global_mass(r: &RamData, s: &SplitBehavior, q: u64) -> Result<MassValue> {
    global_mass_with(r, s, q, &Limits::default())
}

/// `|U| / (p |PGL_2(F_q)|)`, with `U` counted divisor by divisor.
pub fn global_mass_with(r: &RamData, s: &SplitBehavior, q: u64, limits: &Limits) -> Result<MassValue> {
    let tower = feasible(r, s, q, limits)?;
    let p = tower.p();
    let divisors = divisors_of_type(&tower, s)?;
    let mut stream_len: HashMap<(u32, u32), u128> = HashMap::new();
    let mut total: u128 = 0;
    for w in &divisors {
        if w.ram_data() != r.eps() {
            return Err(Error::IncompatibleSplit {
                ram: r.to_string(),
                split: s.to_string(),
            });
        }
        let mut n = p as u128;
        for &(pt, e) in w.parts() {
            let key = (pt.degree(), e);
            let len = match stream_len.get(&key) {
                Some(&l) => l,
                None => {
                    let l = run_stream(enumerate_v(&tower, pt.degree(), e)?, p, e);
                    stream_len.insert(key, l);
                    l
                }
            };
            n *= len;
        }
        total += n;
    }
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(p as u64 * group_order(q)),
    ))
}

/// Walks a coefficient stream, checking the shape of every vector.
fn run_stream(stream: VStream, p: u32, e: u32) -> u128 {
    let mut n = 0u128;
    for v in stream {
        assert_eq!(v.len(), e as usize);
        assert!(!v[e as usize - 1].is_zero());
        assert!(v
            .iter()
            .enumerate()
            .all(|(i, a)| (i + 1) % p as usize != 0 || a.is_zero()));
        n += 1;
    }
    n
}

/// A `PGL_2(F_q)`-orbit of weighted divisors.
#[derive(Clone, Debug)]
pub struct DivisorOrbit {
    pub representative: WeightedDivisor,
    pub size: usize,
    pub stabilizer: Vec<Mobius>,
}

/// Partition of the divisors of type `s` into orbits; representatives are
/// the smallest members.
pub fn divisor_orbits(tower: &Tower, s: &SplitBehavior) -> Result<Vec<DivisorOrbit>> {
    let group = enumerate_pgl2(tower.base())?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in divisors_of_type(tower, s)? {
        if seen.contains(&w) {
            continue;
        }
        let mut orbit = HashSet::new();
        let mut stabilizer = Vec::new();
        for g in group.iter() {
            let img = w.act(tower, g)?;
            if img == w {
                stabilizer.push(*g);
            }
            orbit.insert(img);
        }
        out.push(DivisorOrbit {
            representative: w,
            size: orbit.len(),
            stabilizer,
        });
        seen.extend(orbit);
    }
    Ok(out)
}

/// `sum over divisor orbits of 1/|Gamma_W|`, the factor that turns
/// `|N_W|/p` into `Z_{R,S}`.
pub fn t_from_stabilizers(tower: &Tower, s: &SplitBehavior) -> Result<BigRational> {
    Ok(divisor_orbits(tower, s)?
        .iter()
        .map(|o| BigRational::new(1.into(), BigInt::from(o.stabilizer.len())))
        .sum())
}

struct Slot {
    ext: Arc<ExtTower>,
    point: ClosedPoint,
    e: usize,
    qm: u64,
    free: Vec<usize>,
    len: u64,
}

/// Mixed-radix indexing of the normal forms supported on one divisor: the
/// constant class is the least significant digit, then each part in
/// divisor order, coded as in [`VStream::decode`].
struct Layout {
    p: u32,
    slots: Vec<Slot>,
    total: u64,
}

struct Move {
    dest: usize,
    frob: u32,
    /// `(e + 1) x e`, row `k` holds `C(i,k) alpha^k beta^(i-k)`.
    mat: Vec<FieldElem>,
}

struct Scratch {
    a: Vec<Vec<FieldElem>>,
    b: Vec<Vec<FieldElem>>,
    w: Vec<FieldElem>,
}

impl Layout {
    fn new(tower: &Tower, w: &WeightedDivisor) -> Result<Self> {
        let p = tower.p();
        let mut slots = Vec::new();
        let mut total = p as u64;
        for &(point, e) in w.parts() {
            let m = point.degree();
            let stream = enumerate_v(tower, m, e)?;
            let len = u64::try_from(stream.len()).map_err(|_| Error::size("|V|", stream.len(), u64::MAX as u128))?;
            total = total
                .checked_mul(len)
                .ok_or(Error::size("|N_W|", u128::MAX, u64::MAX as u128))?;
            let ext = tower.ext(m)?;
            slots.push(Slot {
                qm: ext.top().order() as u64,
                ext,
                point,
                e: e as usize,
                free: (1..e as usize).filter(|i| i % p as usize != 0).collect(),
                len,
            });
        }
        Ok(Layout { p, slots, total })
    }

    fn scratch(&self) -> Scratch {
        let a: Vec<Vec<FieldElem>> = self.slots.iter().map(|s| vec![FieldElem::ZERO; s.e]).collect();
        Scratch {
            b: a.clone(),
            a,
            w: Vec::new(),
        }
    }

    fn decode(&self, mut idx: u64, out: &mut [Vec<FieldElem>]) -> u32 {
        let class = (idx % self.p as u64) as u32;
        idx /= self.p as u64;
        for (s, a) in self.slots.iter().zip(out.iter_mut()) {
            let mut v = idx % s.len;
            idx /= s.len;
            a.iter_mut().for_each(|x| *x = FieldElem::ZERO);
            a[s.e - 1] = FieldElem::from_index((1 + v % (s.qm - 1)) as u32);
            v /= s.qm - 1;
            for &i in &s.free {
                a[i - 1] = FieldElem::from_index((v % s.qm) as u32);
                v /= s.qm;
            }
        }
        class
    }

    fn encode(&self, class: u32, a: &[Vec<FieldElem>]) -> u64 {
        let mut idx = 0u64;
        for (s, v) in self.slots.iter().zip(a).rev() {
            let mut x = 0u64;
            for &i in s.free.iter().rev() {
                x = x * s.qm + v[i - 1].index() as u64;
            }
            x = x * (s.qm - 1) + v[s.e - 1].index() as u64 - 1;
            idx = idx * s.len + x;
        }
        idx * self.p as u64 + class as u64
    }

    fn normal_form(&self, tower: &Tower, class: u32, a: &[Vec<FieldElem>]) -> ASNormalForm {
        let k = tower.base();
        ASNormalForm {
            constant: if class == 0 {
                FieldElem::ZERO
            } else {
                k.mul(k.from_int(class as i64), k.trace_one())
            },
            parts: self
                .slots
                .iter()
                .zip(a)
                .map(|(s, v)| PrincipalPart {
                    point: s.point,
                    coeffs: v.clone(),
                })
                .collect(),
        }
    }

    fn prepare(&self, g: &Mobius, binom: &Binomials) -> Vec<Move> {
        self.slots
            .iter()
            .map(|s| {
                let t = s.ext.top();
                let (dest, alpha, beta) = part_move(&s.ext, g, s.point.root());
                let (pt, frob) = ClosedPoint::canonicalize(&s.ext, dest);
                let dest = self
                    .slots
                    .iter()
                    .position(|o| o.point == pt)
                    .expect("gamma stabilizes the divisor");
                assert_eq!(self.slots[dest].e, s.e, "gamma preserves pole orders");
                let e = s.e;
                let mut mat = vec![FieldElem::ZERO; (e + 1) * e];
                let mut apow = FieldElem::ONE;
                for k in 0..=e {
                    for i in k.max(1)..=e {
                        let c = binom.get(i, k);
                        if c != 0 {
                            let v = t.mul(apow, t.pow(beta, (i - k) as u64));
                            mat[k * e + i - 1] = t.scale(c as u64, v);
                        }
                    }
                    apow = t.mul(apow, alpha);
                }
                Move { dest, frob, mat }
            })
            .collect()
    }

    /// Index of `u o gamma`, with `u` decoded in `sc.a`.
    fn act(&self, moves: &[Move], class: u32, sc: &mut Scratch) -> u64 {
        let mut class = class;
        for ((s, mv), a) in self.slots.iter().zip(moves).zip(&sc.a) {
            let t = s.ext.top();
            let e = s.e;
            sc.w.clear();
            for k in 0..=e {
                let row = &mv.mat[k * e..(k + 1) * e];
                let mut acc = FieldElem::ZERO;
                for (c, x) in row.iter().zip(a) {
                    if !x.is_zero() && !c.is_zero() {
                        acc = t.add(acc, t.mul(*c, *x));
                    }
                }
                sc.w.push(acc);
            }
            class = (class + t.trace_to_prime(sc.w[0])) % self.p;
            sc.w[0] = FieldElem::ZERO;
            p_reduce(t, &mut sc.w);
            debug_assert_eq!(sc.w.len(), e + 1);
            let out = &mut sc.b[mv.dest];
            for (o, x) in out.iter_mut().zip(&sc.w[1..]) {
                *o = if mv.frob == 0 { *x } else { s.ext.frob_pow(*x, mv.frob) };
            }
        }
        self.encode(class, &sc.b)
    }
}

/// Walks the normal forms on `w`, keeping those that are smallest in their
/// `Gamma_W`-orbit, and returns `(index, |Gamma_u|)` for each.
fn orbit_representatives(
    tower: &Tower,
    w: &WeightedDivisor,
    gamma_w: &[Mobius],
) -> Result<(Layout, Vec<(u64, usize)>)> {
    let layout = Layout::new(tower, w)?;
    let max_e = layout.slots.iter().map(|s| s.e).max().unwrap_or(0);
    let binom = Binomials::new(max_e, tower.p());
    let moves: Vec<Vec<Move>> = gamma_w
        .iter()
        .filter(|g| **g != Mobius::IDENTITY)
        .map(|g| layout.prepare(g, &binom))
        .collect();
    const CHUNK: u64 = 1 << 12;
    let chunks: Vec<Vec<(u64, usize)>> = (0..layout.total.div_ceil(CHUNK))
        .into_par_iter()
        .map_init(
            || layout.scratch(),
            |sc, c| {
                let mut found = Vec::new();
                'next: for idx in c * CHUNK..((c + 1) * CHUNK).min(layout.total) {
                    let class = layout.decode(idx, &mut sc.a);
                    let mut stab = 1usize;
                    for mv in &moves {
                        let img = layout.act(mv, class, sc);
                        if img < idx {
                            continue 'next;
                        }
                        if img == idx {
                            stab += 1;
                        }
                    }
                    found.push((idx, stab));
                }
                found
            },
        )
        .collect();
    let reps: Vec<(u64, usize)> = chunks.concat();
    // orbit-stabilizer: the orbits must exactly cover N_W
    let covered: u64 = reps.iter().map(|&(_, s)| (gamma_w.len() / s) as u64).sum();
    assert_eq!(covered, layout.total, "Gamma_W-orbits do not partition N_W on {w}");
    Ok((layout, reps))
}

/// Oracle B with the default limits.
pub fn structural_mass(r: &RamData, s: &SplitBehavior, q: u64) -> Result<MassValue> {
    structural_mass_with(r, s, q, &Limits::default())
}

/// `sum over divisor orbits, sum over Gamma_W-orbits of normal forms of
/// 1/(p |Gamma_u|)`.
pub fn structural_mass_with(r: &RamData, s: &SplitBehavior, q: u64, limits: &Limits) -> Result<MassValue> {
    let tower = feasible(r, s, q, limits)?;
    let p = tower.p() as u64;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for orbit in divisor_orbits(&tower, s)? {
        let (_, reps) = orbit_representatives(&tower, &orbit.representative, &orbit.stabilizer)?;
        for (_, stab) in reps {
            *counts.entry(stab).or_insert(0) += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(stab, n)| BigRational::new(BigInt::from(n), BigInt::from(p * stab as u64)))
        .sum())
}

/// `Gamma_u = {gamma in within : u o gamma = u mod AS}`.
pub fn stabilizer_of_as_class(tower: &Tower, u: &ASNormalForm, within: &SubgroupTag) -> Result<SubgroupTag> {
    let mut elements = Vec::new();
    for g in &within.elements {
        if act_normal_form(tower, g, u)? == *u {
            elements.push(*g);
        }
    }
    let label = label_subgroup(tower, &elements, &u.divisor().support())?;
    Ok(SubgroupTag { label, elements })
}

/// `{gamma in within : u o gamma = u}` as rational functions, with no
/// reduction modulo `AS`.
pub fn strict_stabilizer(tower: &Tower, u: &ASNormalForm, within: &SubgroupTag) -> Result<SubgroupTag> {
    let f = u.render(tower)?;
    let mut elements = Vec::new();
    for g in &within.elements {
        if f.compose_mobius(g)? == f {
            elements.push(*g);
        }
    }
    let label = label_subgroup(tower, &elements, &u.divisor().support())?;
    Ok(SubgroupTag { label, elements })
}

/// `|Cent(iota)| = p |Gamma_u|`.
pub fn centralizer_order(tower: &Tower, u: &ASNormalForm) -> Result<u64> {
    if u.parts.is_empty() {
        return Err(Error::ReducibleCover);
    }
    let gw = stabilizer_of_divisor(tower, &u.divisor())?;
    let gu = stabilizer_of_as_class(tower, u, &gw)?;
    Ok(tower.p() as u64 * gu.order() as u64)
}

/// One isomorphism class of covers with automorphism.
#[derive(Clone, Debug, Serialize)]
pub struct CoverClass {
    pub normal_form: ASNormalForm,
    pub divisor: WeightedDivisor,
    /// `|Gamma_u|`.
    pub stab_order: usize,
    pub centralizer_order: u64,
    pub rendered: String,
}

/// All classes of type `(R, S)` over `F_q`, in a fixed order.
pub fn enumerate_classes(r: &RamData, s: &SplitBehavior, q: u64, limits: &Limits) -> Result<Vec<CoverClass>> {
    let tower = feasible(r, s, q, limits)?;
    let p = tower.p() as u64;
    let mut out = Vec::new();
    for orbit in divisor_orbits(&tower, s)? {
        let w = &orbit.representative;
        let (layout, reps) = orbit_representatives(&tower, w, &orbit.stabilizer)?;
        let mut a = layout.scratch().a;
        for (idx, stab) in reps {
            let class = layout.decode(idx, &mut a);
            let nf = layout.normal_form(&tower, class, &a);
            out.push(CoverClass {
                rendered: nf.render(&tower)?.to_string(),
                normal_form: nf,
                divisor: w.clone(),
                stab_order: stab,
                centralizer_order: p * stab as u64,
            });
        }
    }
    Ok(out)
}

impl Serialize for WeightedDivisor {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// One verification cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Shape {
        q: u64,
        ram: RamData,
        split: SplitBehavior,
    },
    Genus {
        p: u32,
        q: u64,
        g: u64,
    },
}

impl Cell {
    pub fn q(&self) -> u64 {
        match self {
            Cell::Shape { q, .. } | Cell::Genus { q, .. } => *q,
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            Cell::Shape { ram, .. } => ram.p(),
            Cell::Genus { p, .. } => *p,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Shape { q, ram, split } => write!(f, "p={} q={q} R={ram} S={split}", ram.p()),
            Cell::Genus { p, q, g } => write!(f, "p={p} q={q} g={g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cell: String,
    pub p: u32,
    pub q: u64,
    #[serde(rename = "oracleA")]
    pub oracle_a: Option<String>,
    #[serde(rename = "oracleB")]
    pub oracle_b: Option<String>,
    /// `"num/den"` or `"unsupported"`.
    pub formula: String,
    pub agree: bool,
    /// `agree`, `mismatch`, `oracle-only`, `skipped(size)` or `error: ...`.
    pub status: String,
    pub ms: u64,
}

impl VerifyReport {
    /// Whether this cell counts against the run.
    pub fn failed(&self) -> bool {
        self.status == "mismatch" || self.status.starts_with("error")
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub cells: Vec<Cell>,
    pub limits: Limits,
    /// Adds one to every formula value; a negative control for the
    /// comparison itself.
    pub corrupt_formula: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cells: default_grid(),
            limits: Limits::default(),
            corrupt_formula: false,
        }
    }
}

/// Ramification data with `r <= max_r` and parts in `2..=max_part`.
pub fn small_ram_data(p: u32, max_r: usize, max_part: u32) -> Vec<RamData> {
    let parts: Vec<u32> = (2..=max_part).filter(|e| e % p != 1 % p).collect();
    let mut out = Vec::new();
    fn rec(parts: &[u32], start: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in start..parts.len() {
            cur.push(parts[i]);
            rec(parts, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&parts, 0, max_r, &mut Vec::new(), &mut raw);
    for eps in raw {
        out.push(RamData::new(p, eps).expect("admissible parts"));
    }
    out.sort();
    out
}

fn prime_of(q: u64) -> u32 {
    crate::gf::prime_power(q).map(|(p, _)| p).unwrap_or(0)
}

/// Every `(R, S)` with `r <= 3` and parts at most 7 on the fields
/// `q = 2, 4, 3, 9, 5, 7`.
pub fn grid_small_r() -> Vec<Cell> {
    let mut cells = Vec::new();
    for q in [2u64, 4, 3, 9, 5, 7] {
        let p = prime_of(q);
        for ram in small_ram_data(p, 3, 7) {
            for split in compatible_splits(&ram) {
                cells.push(Cell::Shape {
                    q,
                    ram: ram.clone(),
                    split,
                });
            }
        }
    }
    cells
}

/// The genus cells for `p = 3, 5, 7` and the characteristic 2 checks.
pub fn grid_genus() -> Vec<Cell> {
    let mut cells = Vec::new();
    for q in [3u64, 9] {
        for g in 1..=5 {
            cells.push(Cell::Genus { p: 3, q, g });
        }
    }
    for g in [2u64, 4, 6, 8, 10] {
        cells.push(Cell::Genus { p: 5, q: 5, g });
    }
    for g in [3u64, 6, 9] {
        cells.push(Cell::Genus { p: 7, q: 7, g });
    }
    for q in [2u64, 4] {
        for g in [2u64, 3] {
            cells.push(Cell::Genus { p: 2, q, g });
        }
    }
    cells
}

/// `r = 4` shapes with quadratic or quartic splitting and repeated pole
/// orders, at `q = 3, 5`.
pub fn grid_open_shapes() -> Vec<Cell> {
    let mut cells = Vec::new();
    for q in [3u64, 5] {
        let p = prime_of(q);
        for eps in [[2, 2, 2, 2], [2, 2, 3, 3], [3, 3, 3, 3]] {
            let Ok(ram) = RamData::new(p, eps.to_vec()) else {
                continue;
            };
            for split in compatible_splits(&ram) {
                let d = split.degrees();
                if d == [2, 2] || d == [4] {
                    cells.push(Cell::Shape {
                        q,
                        ram: ram.clone(),
                        split,
                    });
                }
            }
        }
    }
    cells
}

pub fn default_grid() -> Vec<Cell> {
    let mut cells = grid_small_r();
    cells.extend(grid_genus());
    cells.extend(grid_open_shapes());
    cells
}

fn shapes_of_genus(p: u32, g: u64) -> Result<Vec<(RamData, SplitBehavior)>> {
    let mut out = Vec::new();
    for r in partitions_for_genus(g, p)? {
        for s in compatible_splits(&r) {
            out.push((r.clone(), s));
        }
    }
    Ok(out)
}

/// Both oracle values for a cell.
pub fn oracle_values(cell: &Cell, limits: &Limits) -> Result<(MassValue, MassValue)> {
    let shapes = match cell {
        Cell::Shape { ram, split, .. } => vec![(ram.clone(), split.clone())],
        Cell::Genus { p, g, .. } => shapes_of_genus(*p, *g)?,
    };
    let q = cell.q();
    // refuse the whole cell before doing any work on it
    for (r, s) in &shapes {
        feasible(r, s, q, limits)?;
    }
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for (r, s) in &shapes {
        a += global_mass_with(r, s, q, limits)?;
        b += structural_mass_with(r, s, q, limits)?;
    }
    Ok((a, b))
}

/// Closed-form value for a cell.
pub fn formula_value(cell: &Cell) -> Result<MassValue> {
    match cell {
        Cell::Shape { q, ram, split } => mass_rs(ram, split, *q),
        Cell::Genus { p, q, g } => mass_g(*g, *p, *q),
    }
}

pub fn verify_cell(cell: &Cell, cfg: &VerifyConfig) -> VerifyReport {
    let start = Instant::now();
    let formula = match formula_value(cell) {
        Ok(v) if cfg.corrupt_formula => Ok(v + BigRational::from_integer(1.into())),
        other => other,
    };
    let mut report = VerifyReport {
        cell: cell.to_string(),
        p: cell.p(),
        q: cell.q(),
        oracle_a: None,
        oracle_b: None,
        formula: match &formula {
            Ok(v) => render_rational(v),
            Err(_) => "unsupported".into(),
        },
        agree: false,
        status: String::new(),
        ms: 0,
    };
    if let Err(e) = &formula {
        if !matches!(e, Error::UnsupportedShape(_) | Error::UnsupportedGenus { .. }) {
            report.status = format!("error: {e}");
            return report;
        }
    }
    match oracle_values(cell, &cfg.limits) {
        Ok((a, b)) => {
            report.oracle_a = Some(render_rational(&a));
            report.oracle_b = Some(render_rational(&b));
            match &formula {
                Ok(f) => {
                    report.agree = a == b && a == *f;
                    report.status = if report.agree { "agree" } else { "mismatch" }.into();
                }
                Err(_) => {
                    report.agree = a == b;
                    report.status = if report.agree { "oracle-only" } else { "mismatch" }.into();
                }
            }
        }
        Err(Error::SizeLimitExceeded { .. }) => report.status = "skipped(size)".into(),
        Err(e) => report.status = format!("error: {e}"),
    }
    report.ms = start.elapsed().as_millis() as u64;
    report
}

pub fn verify_grid(cfg: &VerifyConfig) -> Vec<VerifyReport> {
    cfg.cells.iter().map(|c| verify_cell(c, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ram(p: u32, e: &[u32]) -> RamData {
        RamData::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn divisor_counts() {
        let t = Tower::new(3, 1).unwrap();
        for spec in ["2,2", "(2-2)", "2,3", "2,2,2", "2,(2-2)", "(2-2-2)"] {
            let s: SplitBehavior = spec.parse().unwrap();
            let n = divisors_of_type(&t, &s).unwrap().len() as u128;
            assert_eq!(Some(n), count_divisors(&s, 3), "{spec}");
        }
    }

    #[test]
    fn single_point_oracles() {
        let r = ram(3, &[3]);
        let s = SplitBehavior::split(&r);
        assert_eq!(global_mass(&r, &s, 3).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(structural_mass(&r, &s, 3).unwrap(), BigRational::from_integer(1.into()));
        let t = Tower::new(3, 1).unwrap();
        assert_eq!(divisor_orbits(&t, &s).unwrap().len(), 1);
    }

    #[test]
    fn genus_two_p3() {
        let r = ram(3, &[2, 2]);
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for s in compatible_splits(&r) {
            a += global_mass(&r, &s, 3).unwrap();
            b += structural_mass(&r, &s, 3).unwrap();
        }
        assert_eq!(a, BigRational::from_integer(2.into()));
        assert_eq!(a, b);
    }

    #[test]
    fn layout_roundtrip() {
        let t = Tower::new(3, 1).unwrap();
        let w = WeightedDivisor::new(vec![
            (ClosedPoint::Infinity, 4),
            (ClosedPoint::rational(FieldElem::ZERO), 2),
        ]);
        let l = Layout::new(&t, &w).unwrap();
        let mut a = l.scratch().a;
        for idx in 0..l.total {
            let c = l.decode(idx, &mut a);
            assert_eq!(l.encode(c, &a), idx);
        }
    }

    #[test]
    fn fast_action_matches_reference() {
        let t = Tower::new(3, 1).unwrap();
        let s: SplitBehavior = "(3-3)".parse().unwrap();
        for orbit in divisor_orbits(&t, &s).unwrap() {
            let l = Layout::new(&t, &orbit.representative).unwrap();
            let binom = Binomials::new(2, 3);
            let mut sc = l.scratch();
            for g in &orbit.stabilizer {
                let mv = l.prepare(g, &binom);
                for idx in (0..l.total).step_by(7) {
                    let class = l.decode(idx, &mut sc.a);
                    let nf = l.normal_form(&t, class, &sc.a);
                    let img = l.act(&mv, class, &mut sc);
                    let c2 = l.decode(img, &mut sc.b);
                    let want = act_normal_form(&t, g, &nf).unwrap();
                    assert_eq!(l.normal_form(&t, c2, &sc.b), want);
                }
            }
        }
    }

    #[test]
    fn size_policy() {
        let r = ram(7, &[7, 7, 7]);
        let s = SplitBehavior::split(&r);
        let limits = Limits {
            max_population: DEFAULT_MAX_POPULATION,
            max_group: DEFAULT_MAX_GROUP,
        };
        assert!(matches!(
            global_mass_with(&r, &s, 7, &limits),
            Err(Error::SizeLimitExceeded { .. })
        ));
        let cfg = VerifyConfig {
            cells: vec![Cell::Shape { q: 7, ram: r, split: s }],
            limits,
            corrupt_formula: false,
        };
        assert_eq!(verify_grid(&cfg)[0].status, "skipped(size)");
    }
}

