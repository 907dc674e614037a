//! Orbits of Frobenius-stable 4-sets of `P^1` under `PGL_2(F_q)`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{closed_points, enumerate_pgl2, label_subgroup, ClosedPoint, Mobius};
use crate::error::{Error, Result};
use crate::gf::{symbol_minus1, symbol_minus3, GaloisField, Tower};

/// How the four geometric points split into closed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Behavior {
    Split,
    SplitQuad,
    Quad,
    Cubic,
    Quartic,
}

impl Behavior {
    pub const ALL: [Behavior; 5] = [
        Behavior::Split,
        Behavior::SplitQuad,
        Behavior::Quad,
        Behavior::Cubic,
        Behavior::Quartic,
    ];

    /// Degrees of the closed points, in increasing order.
    pub fn degrees(self) -> &'static [u32] {
        match self {
            Behavior::Split => &[1, 1, 1, 1],
            Behavior::SplitQuad => &[1, 1, 2],
            Behavior::Quad => &[2, 2],
            Behavior::Cubic => &[1, 3],
            Behavior::Quartic => &[4],
        }
    }

    pub fn from_degrees(degs: &[u32]) -> Option<Behavior> {
        let mut d = degs.to_vec();
        d.sort();
        Behavior::ALL.into_iter().find(|b| b.degrees() == d.as_slice())
    }

    pub fn name(self) -> &'static str {
        match self {
            Behavior::Split => "split",
            Behavior::SplitQuad => "split/quad",
            Behavior::Quad => "quad",
            Behavior::Cubic => "cubic",
            Behavior::Quartic => "quartic",
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Behavior {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(Behavior::Split),
            "split/quad" | "split-quad" | "splitquad" => Ok(Behavior::SplitQuad),
            "quad" | "quadratic" => Ok(Behavior::Quad),
            "cubic" => Ok(Behavior::Cubic),
            "quartic" => Ok(Behavior::Quartic),
            _ => Err(Error::Parse(format!("unknown behavior '{s}'"))),
        }
    }
}

/// A 4-set as its sorted closed points.
pub type FourSet = Vec<ClosedPoint>;

fn combinations(items: &[ClosedPoint], k: usize) -> Vec<Vec<ClosedPoint>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == items.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every 4-set with the given splitting behavior.
pub fn four_sets(tower: &Tower, b: Behavior) -> Result<Vec<FourSet>> {
    let deg1 = closed_points(tower, 1)?;
    let mut out: Vec<FourSet> = match b {
        Behavior::Split => combinations(&deg1, 4),
        Behavior::SplitQuad => {
            let deg2 = closed_points(tower, 2)?;
            let mut v = Vec::new();
            for pair in combinations(&deg1, 2) {
                for &w in deg2.iter() {
                    let mut s = pair.clone();
                    s.push(w);
                    v.push(s);
                }
            }
            v
        }
        Behavior::Quad => combinations(&closed_points(tower, 2)?, 2),
        Behavior::Cubic => {
            let deg3 = closed_points(tower, 3)?;
            let mut v = Vec::new();
            for &a in deg1.iter() {
                for &c in deg3.iter() {
                    v.push(vec![a, c]);
                }
            }
            v
        }
        Behavior::Quartic => closed_points(tower, 4)?.iter().map(|&w| vec![w]).collect(),
    };
    for s in &mut out {
        s.sort();
    }
    Ok(out)
}

fn act_set(tower: &Tower, g: &Mobius, s: &[ClosedPoint]) -> Result<FourSet> {
    let mut v = s
        .iter()
        .map(|p| g.act_on_point(tower, p))
        .collect::<Result<Vec<_>>>()?;
    v.sort();
    Ok(v)
}

/// One orbit: its smallest member, size and stabilizer label.
#[derive(Clone, Debug, Serialize)]
pub struct FourSetOrbit {
    pub representative: Vec<String>,
    pub size: usize,
    pub stabilizer: String,
    pub stabilizer_order: usize,
}

/// Direct partition of all 4-sets of behavior `b` into orbits.
pub fn four_set_orbits(tower: &Tower, b: Behavior) -> Result<Vec<FourSetOrbit>> {
    let k = tower.base();
    let group = enumerate_pgl2(k)?;
    let sets = four_sets(tower, b)?;
    let mut seen: HashSet<FourSet> = HashSet::with_capacity(sets.len());
    let mut out = Vec::new();
    for s in &sets {
        if seen.contains(s) {
            continue;
        }
        let mut orbit = HashSet::new();
        let mut stab = Vec::new();
        for g in group.iter() {
            let img = act_set(tower, g, s)?;
            if img == *s {
                stab.push(*g);
            }
            orbit.insert(img);
        }
        let label = label_subgroup(tower, &stab, s)?;
        out.push(FourSetOrbit {
            representative: s.iter().map(|p| p.to_string()).collect(),
            size: orbit.len(),
            stabilizer: label,
            stabilizer_order: stab.len(),
        });
        seen.extend(orbit);
    }
    Ok(out)
}

/// Conjugacy classes of `PGL_2(F_q)` as (representative, class size).
pub fn conjugacy_classes(k: &GaloisField) -> Result<Vec<(Mobius, usize)>> {
    let group = enumerate_pgl2(k)?;
    let inverses: Vec<Mobius> = group.iter().map(|h| h.inverse(k)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in group.iter() {
        if seen.contains(g) {
            continue;
        }
        let mut class = HashSet::new();
        for (h, hi) in group.iter().zip(&inverses) {
            class.insert(h.compose(k, &g.compose(k, hi)));
        }
        out.push((*g, class.len()));
        seen.extend(class);
    }
    Ok(out)
}

/// Orbit count of behavior `b` by Burnside's lemma over conjugacy classes.
pub fn burnside_count(tower: &Tower, b: Behavior) -> Result<u64> {
    let k = tower.base();
    let classes = conjugacy_classes(k)?;
    let sets = four_sets(tower, b)?;
    let mut total: u64 = 0;
    for (g, size) in &classes {
        let mut fixed = 0u64;
        for s in &sets {
            if act_set(tower, g, s)? == *s {
                fixed += 1;
            }
        }
        total += fixed * *size as u64;
    }
    let order = enumerate_pgl2(k)?.len() as u64;
    debug_assert_eq!(total % order, 0);
    Ok(total / order)
}

/// Known closed form for the orbit count of behavior `b` (`None` for the
/// total).
pub fn closed_form_count(p: u32, q: u64, b: Option<Behavior>) -> i64 {
    let chi3 = symbol_minus3(q);
    let chi4 = symbol_minus1(q);
    let qi = q as i64;
    let Some(b) = b else {
        return match p {
            2 => 2 * qi + chi3,
            3 => 2 * qi + if q % 4 == 1 { 2 } else { 1 },
            _ => 2 * qi + 2 + chi3,
        };
    };
    if p == 2 {
        return match b {
            Behavior::Split => (qi + 2 * chi3) / 6,
            Behavior::SplitQuad => qi / 2,
            Behavior::Quad => (qi - 2) / 2,
            Behavior::Cubic => (qi + 3 + 2 * chi3) / 3,
            Behavior::Quartic => qi / 2,
        };
    }
    match b {
        Behavior::Split => (qi + 3 + 2 * chi3) / 6,
        Behavior::SplitQuad => (qi + 1) / 2,
        Behavior::Quad => (qi - 1) / 2,
        Behavior::Cubic => (qi + 3 + 2 * chi3) / 3,
        Behavior::Quartic if p == 3 => (qi + chi4) / 2,
        Behavior::Quartic => (qi + 1) / 2,
    }
}

/// Orbits of behavior `b` grouped by stabilizer label.
pub fn orbit_inventory(tower: &Tower, b: Behavior) -> Result<BTreeMap<String, usize>> {
    let mut inv = BTreeMap::new();
    for o in four_set_orbits(tower, b)? {
        *inv.entry(o.stabilizer).or_insert(0) += 1;
    }
    Ok(inv)
}

/// Orbit-count comparison for one field.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitCountRow {
    pub q: u64,
    pub behavior: String,
    pub closed_form: i64,
    pub burnside: u64,
    pub direct: u64,
    pub inventory: BTreeMap<String, usize>,
}

pub fn orbit_table(tower: &Tower, only: Option<Behavior>) -> Result<Vec<OrbitCountRow>> {
    let q = tower.q();
    let p = tower.p();
    let mut rows = Vec::new();
    let behaviors: Vec<Behavior> = match only {
        Some(b) => vec![b],
        None => Behavior::ALL.to_vec(),
    };
    let mut sum_b = 0;
    let mut sum_d = 0;
    for b in behaviors {
        let inventory = orbit_inventory(tower, b)?;
        let direct = inventory.values().sum::<usize>() as u64;
        let burnside = burnside_count(tower, b)?;
        sum_b += burnside;
        sum_d += direct;
        rows.push(OrbitCountRow {
            q,
            behavior: b.name().into(),
            closed_form: closed_form_count(p, q, Some(b)),
            burnside,
            direct,
            inventory,
        });
    }
    if only.is_none() {
        rows.push(OrbitCountRow {
            q,
            behavior: "total".into(),
            closed_form: closed_form_count(p, q, None),
            burnside: sum_b,
            direct: sum_d,
            inventory: BTreeMap::new(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let t5 = Tower::new(5, 1).unwrap();
        let total: u64 = Behavior::ALL
            .iter()
            .map(|&b| burnside_count(&t5, b).unwrap())
            .sum();
        assert_eq!(total, 11);
        let t3 = Tower::new(3, 1).unwrap();
        assert_eq!(burnside_count(&t3, Behavior::Quartic).unwrap(), 2);
        assert_eq!(burnside_count(&t3, Behavior::Cubic).unwrap(), 2);
    }

    #[test]
    fn combination_count() {
        let t = Tower::new(5, 1).unwrap();
        assert_eq!(four_sets(&t, Behavior::Split).unwrap().len(), 15);
        assert_eq!(four_sets(&t, Behavior::Quad).unwrap().len(), 45);
    }
}
