//! Property checks shared by the proptest suite and the acceptance run.
//! Each returns a description of the first violation.

use std::collections::HashSet;

use asmass::gf::{FieldElem, GaloisField};
use asmass::projgeom::{closed_points, Mobius};
use asmass::ratfunc::{act_normal_form, as_reduce, count_v, enumerate_v, RatFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

macro_rules! ensure_eq {
    ($a:expr, $b:expr) => {{
        let (a, b) = (&$a, &$b);
        if a != b {
            return Err(format!("{} != {}: {:?} vs {:?}", stringify!($a), stringify!($b), a, b));
        }
    }};
}

pub fn field_axioms(p: u32, n: u32, seed: u64) -> Check {
    let k = GaloisField::new(p, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let (a, b, c) = (elem(&k, &mut rng), elem(&k, &mut rng), elem(&k, &mut rng));
        ensure_eq!(k.add(a, b), k.add(b, a));
        ensure_eq!(k.mul(a, b), k.mul(b, a));
        ensure_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
        ensure_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
        ensure_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        ensure_eq!(k.add(a, k.neg(a)), FieldElem::ZERO);
        ensure_eq!(k.mul(a, FieldElem::ONE), a);
        if !a.is_zero() {
            ensure_eq!(k.mul(a, k.inv(a).unwrap()), FieldElem::ONE);
        }
        // Frobenius is additive and the p-th root inverts it
        ensure_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
        ensure_eq!(k.p_th_root(k.frobenius(a)), a);
        ensure!(k.trace_to_prime(a) < p, "trace out of range");
    }
    Ok(())
}

pub fn as_soundness(p: u32, n: u32, seed: u64) -> Check {
    let t = tower(p, n);
    let k = t.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = ratfunc(k, &mut rng);
    let z = ratfunc(k, &mut rng);
    let c = elem(k, &mut rng);
    let cc = RatFunc::constant(k, c).artin_schreier();
    let v = u.add(&z.artin_schreier()).unwrap().add(&cc).unwrap();
    ensure_eq!(as_reduce(&t, &u).unwrap(), as_reduce(&t, &v).unwrap());
    Ok(())
}

pub fn as_completeness(p: u32, n: u32, seed: u64) -> Check {
    let t = tower(p, n);
    let k = t.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = ratfunc(k, &mut rng);
    let nf = as_reduce(&t, &u).unwrap();
    let f = nf.render(&t).unwrap();
    // the rendered form reduces to itself and differs from u by z^p - z
    ensure_eq!(as_reduce(&t, &f).unwrap(), nf);
    ensure!(as_reduce(&t, &u.sub(&f).unwrap()).unwrap().is_zero(), "u - render(u) not in AS");
    // distinct normal forms are never AS-equivalent
    let v = ratfunc(k, &mut rng);
    let nv = as_reduce(&t, &v).unwrap();
    let diff_zero = as_reduce(&t, &u.sub(&v).unwrap()).unwrap().is_zero();
    ensure_eq!(nf == nv, diff_zero);
    Ok(())
}

pub fn action_laws(p: u32, n: u32, seed: u64) -> Check {
    let t = tower(p, n);
    let k = t.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = mobius(k, &mut rng);
    let h = mobius(k, &mut rng);
    let gh = g.compose(k, &h);
    // functions: (g h) . u = h . (g . u)
    let u = ratfunc(k, &mut rng);
    let nf = as_reduce(&t, &u).unwrap();
    let lhs = act_normal_form(&t, &gh, &nf).unwrap();
    let rhs = act_normal_form(&t, &h, &act_normal_form(&t, &g, &nf).unwrap()).unwrap();
    ensure_eq!(lhs, rhs);
    // the fast action agrees with composing and reducing
    let slow = as_reduce(&t, &u.compose_mobius(&g).unwrap()).unwrap();
    ensure_eq!(act_normal_form(&t, &g, &nf).unwrap(), slow);
    // points: (g h)(P) = g(h(P)), degree preserved
    for m in 1..=3 {
        let pts = closed_points(&t, m).unwrap();
        let pt = pts[rng.gen_range(0..pts.len())];
        let img = gh.act_on_point(&t, &pt).unwrap();
        ensure_eq!(img, g.act_on_point(&t, &h.act_on_point(&t, &pt).unwrap()).unwrap());
        ensure_eq!(img.degree(), m);
    }
    Ok(())
}

pub fn group_axioms(p: u32, n: u32, seed: u64) -> Check {
    let k = GaloisField::new(p, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, c) = (mobius(&k, &mut rng), mobius(&k, &mut rng), mobius(&k, &mut rng));
    ensure_eq!(a.compose(&k, &b).compose(&k, &c), a.compose(&k, &b.compose(&k, &c)));
    ensure_eq!(a.compose(&k, &a.inverse(&k)), Mobius::IDENTITY);
    ensure_eq!(Mobius::IDENTITY.compose(&k, &a), a);
    Ok(())
}

/// `count_v` and `enumerate_v` against a filter over every coefficient vector.
pub fn count_v_exhaustive() -> Check {
    for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let t = tower(p, n);
        for m in 1..=2u32 {
            let qm = t.ext(m).unwrap().top().order() as u64;
            for e in 1..=6u32 {
                if e % p == 0 || qm.pow(e) > 200_000 {
                    continue;
                }
                let mut brute = 0u128;
                for code in 0..qm.pow(e) {
                    let mut c = code;
                    let v: Vec<u64> = (0..e)
                        .map(|_| {
                            let d = c % qm;
                            c /= qm;
                            d
                        })
                        .collect();
                    let ok = v[e as usize - 1] != 0
                        && v.iter().enumerate().all(|(i, &a)| (i + 1) % p as usize != 0 || a == 0);
                    if ok {
                        brute += 1;
                    }
                }
                let got = count_v(m, e, t.q(), p).unwrap();
                ensure!(got == brute, "count_v p={p} n={n} m={m} e={e}: {got} vs {brute}");
                let stream: Vec<_> = enumerate_v(&t, m, e).unwrap().collect();
                ensure!(stream.len() as u128 == brute, "stream length p={p} n={n} m={m} e={e}");
                ensure!(
                    stream.iter().collect::<HashSet<_>>().len() == stream.len(),
                    "stream repeats p={p} n={n} m={m} e={e}"
                );
            }
        }
    }
    Ok(())
}
