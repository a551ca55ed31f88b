//! Random bounded elements and the algebra identities shared by the property
//! tests and the acceptance run.
#![allow(dead_code)]

use lmtool::linalg::{ratio, Poly, RatFunc};
use lmtool::weyl::{Weight, WeylEl};
use rand::Rng;

pub fn random_el(rng: &mut impl Rng, max_exp: u32, max_terms: usize) -> WeylEl {
    let n = rng.gen_range(1..=max_terms);
    WeylEl::from_terms((0..n).map(|_| {
        let a = rng.gen_range(0..=max_exp);
        let b = rng.gen_range(0..=max_exp);
        let c = ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        ((a, b), c)
    }))
}

pub fn random_poly(rng: &mut impl Rng, max_deg: usize) -> Poly {
    let n = rng.gen_range(0..=max_deg + 1);
    Poly::from_coeffs(
        (0..n)
            .map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=2)))
            .collect(),
    )
}

pub fn relation_holds() -> bool {
    let (x, d) = (WeylEl::x(), WeylEl::d());
    &(&d * &x) - &(&x * &d) == WeylEl::one()
}

pub fn associative(u: &WeylEl, v: &WeylEl, t: &WeylEl) -> bool {
    &(u * v) * t == u * &(v * t)
}

pub fn degree_additive(u: &WeylEl, v: &WeylEl, w: Weight) -> bool {
    match (u.wdegree(w), v.wdegree(w)) {
        (Some(a), Some(b)) => (u * v).wdegree(w) == Some(a + b),
        _ => (u * v).is_zero(),
    }
}

pub fn symbol_multiplicative(u: &WeylEl, v: &WeylEl, w: Weight) -> bool {
    let (Some(a), Some(b)) = (u.wdegree(w), v.wdegree(w)) else {
        return true;
    };
    let lhs = (u * v).top_component(w, a + b).unwrap();
    let rhs = u
        .top_component(w, a)
        .unwrap()
        .mul(&v.top_component(w, b).unwrap());
    lhs == rhs
}

/// `(u v) . f == u . (v . f)` on a polynomial and on `f / den`.
pub fn action_compatible(u: &WeylEl, v: &WeylEl, f: &Poly, den: &Poly) -> bool {
    let uv = u * v;
    if uv.apply_poly(f) != u.apply_poly(&v.apply_poly(f)) {
        return false;
    }
    let r = RatFunc::new(f.clone(), den.clone()).unwrap();
    uv.apply_ratfunc(&r) == u.apply_ratfunc(&v.apply_ratfunc(&r))
}
