#![allow(dead_code)]

pub mod checks;

use std::sync::Arc;

use asmass::gf::{FieldElem, GaloisField, Tower};
use asmass::poly::Poly;
use asmass::projgeom::{enumerate_pgl2, Mobius};
use asmass::ratfunc::RatFunc;
use rand::Rng;

/// Small fields covering p = 2, 3, 5 and a proper extension of each of
/// the first two.
pub const FIELDS: [(u32, u32); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)];

pub fn tower(p: u32, n: u32) -> Arc<Tower> {
    Tower::new(p, n).unwrap()
}

pub fn elem<R: Rng>(k: &GaloisField, rng: &mut R) -> FieldElem {
    FieldElem::from_index(rng.gen_range(0..k.order()))
}

pub fn nonzero<R: Rng>(k: &GaloisField, rng: &mut R) -> FieldElem {
    FieldElem::from_index(rng.gen_range(1..k.order()))
}

pub fn poly<R: Rng>(k: &GaloisField, deg: usize, rng: &mut R) -> Poly {
    Poly::new(k, (0..=deg).map(|_| elem(k, rng)).collect())
}

/// Random nonzero rational function with small numerator and denominator.
pub fn ratfunc<R: Rng>(k: &GaloisField, rng: &mut R) -> RatFunc {
    loop {
        let num = poly(k, rng.gen_range(0..5), rng);
        let mut den = poly(k, rng.gen_range(0..4), rng);
        if den.is_zero() {
            den = Poly::one(k);
        }
        if num.is_zero() {
            continue;
        }
        return RatFunc::new(num, den).unwrap();
    }
}

pub fn mobius<R: Rng>(k: &GaloisField, rng: &mut R) -> Mobius {
    let g = enumerate_pgl2(k).unwrap();
    g[rng.gen_range(0..g.len())]
}
