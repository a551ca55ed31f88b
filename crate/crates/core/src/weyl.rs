//! The first Weyl algebra `A = Q<x, d>/(dx - xd - 1)` in normal-ordered form,
//! its weighted filtrations and the symbol map into `gr A = Q[X, Y]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, falling, fmt_rat, parse_rat, Poly, Rat, RatFunc};

/// Filtration weight: `x` has degree `w1`, `d` has degree `w2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub w1: u32,
    pub w2: u32,
}

impl Weight {
    pub const STANDARD: Weight = Weight { w1: 1, w2: 1 };

    pub fn new(w1: u32, w2: u32) -> Result<Self> {
        if w1 == 0 || w2 == 0 {
            return Err(Error::Precondition(format!(
                "weights must be strictly positive, got ({w1},{w2})"
            )));
        }
        Ok(Weight { w1, w2 })
    }

    pub fn of(&self, a: u32, b: u32) -> i64 {
        a as i64 * self.w1 as i64 + b as i64 * self.w2 as i64
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.w1, self.w2)
    }
}

/// Number of monomials `x^a d^b` with `a*w1 + b*w2 <= k`.
pub fn dim_a(w: Weight, k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    (0..=k / w.w2 as i64)
        .map(|b| ((k - b * w.w2 as i64) / w.w1 as i64 + 1) as usize)
        .sum()
}

/// Exponent pairs `(a, b)` with `a*w1 + b*w2 <= k`, ordered by weighted
/// degree and then by decreasing `a`.
pub fn monomial_basis(w: Weight, k: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(dim_a(w, k));
    if k < 0 {
        return out;
    }
    for deg in 0..=k {
        for a in (0..=(deg / w.w1 as i64)).rev() {
            let rest = deg - a * w.w1 as i64;
            if rest % w.w2 as i64 == 0 {
                out.push((a as u32, (rest / w.w2 as i64) as u32));
            }
        }
    }
    out
}

/// Element of the Weyl algebra as `sum c_{a,b} x^a d^b`, keyed by `(a, b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylEl {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl WeylEl {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Rat::one(), 0, 0)
    }

    pub fn x() -> Self {
        Self::term(Rat::one(), 1, 0)
    }

    pub fn d() -> Self {
        Self::term(Rat::one(), 0, 1)
    }

    pub fn term(c: Rat, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        WeylEl { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut out = WeylEl::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// Linear combination of monomials, e.g. a nullspace vector over a
    /// `monomial_basis`.
    pub fn from_coords(basis: &[(u32, u32)], coords: &[Rat]) -> Self {
        Self::from_terms(basis.iter().copied().zip(coords.iter().cloned()))
    }

    fn add_term(&mut self, key: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.terms
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WeylEl {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Maximal `a*w1 + b*w2` over the terms; `None` for zero.
    pub fn wdegree(&self, w: Weight) -> Option<i64> {
        self.terms.keys().map(|&(a, b)| w.of(a, b)).max()
    }

    pub fn max_d_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).max()
    }

    /// Homogeneous part of weighted degree exactly `k`, read as a commutative
    /// polynomial. Requires `wdegree <= k`.
    pub fn top_component(&self, w: Weight, k: i64) -> Result<SymbolPoly> {
        if let Some(deg) = self.wdegree(w) {
            if deg > k {
                return Err(Error::Precondition(format!(
                    "element of weighted degree {deg} has no symbol in degree {k}"
                )));
            }
        }
        Ok(SymbolPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, b), _)| w.of(a, b) == k)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        })
    }

    /// Action on `Q[x]`: `x` multiplies, `d` differentiates.
    pub fn apply_poly(&self, f: &Poly) -> Poly {
        let mut derivs = vec![f.clone()];
        let mut acc = Poly::zero();
        for (&(a, b), c) in &self.terms {
            while derivs.len() <= b as usize {
                let next = derivs.last().unwrap().derivative();
                derivs.push(next);
            }
            acc = &acc + &derivs[b as usize].shift(a as usize).scale(c);
        }
        acc
    }

    /// Action on rational functions via the quotient rule.
    pub fn apply_ratfunc(&self, f: &RatFunc) -> RatFunc {
        let mut derivs = vec![f.clone()];
        let mut acc = RatFunc::from_poly(Poly::zero());
        for (&(a, b), c) in &self.terms {
            while derivs.len() <= b as usize {
                let next = derivs.last().unwrap().derivative();
                derivs.push(next);
            }
            let t = derivs[b as usize]
                .mul_poly(&Poly::monomial(Rat::one(), a as usize))
                .scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    /// Parses the text form `"x^2*d^2 + 2*x*d - 2"`. Factors inside a term are
    /// multiplied in the order written, so `"d*x"` parses to `x*d + 1`.
    pub fn parse(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty Weyl algebra element".into()));
        }
        let mut pieces: Vec<(Rat, String)> = Vec::new();
        let mut sign = Rat::one();
        let mut body = String::new();
        for (i, ch) in src.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if body.is_empty() && i > 0 {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                if !body.is_empty() {
                    pieces.push((sign, std::mem::take(&mut body)));
                }
                sign = if ch == '-' { -Rat::one() } else { Rat::one() };
            } else {
                body.push(ch);
            }
        }
        pieces.push((sign, body));
        let mut acc = WeylEl::zero();
        for (sign, body) in pieces {
            if body.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut term = WeylEl::one().scale(&sign);
            for factor in body.split('*') {
                term = &term * &parse_factor(factor, s)?;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

fn parse_factor(factor: &str, whole: &str) -> Result<WeylEl> {
    let bad = || Error::Parse(format!("bad factor {factor:?} in {whole:?}"));
    let (base, exp) = match factor.split_once('^') {
        Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
        None => (factor, 1),
    };
    match base {
        "x" => Ok(WeylEl::term(Rat::one(), exp, 0)),
        "d" => Ok(WeylEl::term(Rat::one(), 0, exp)),
        _ if factor.contains('^') => Err(bad()),
        _ => parse_rat(base)
            .map(|c| WeylEl::term(c, 0, 0))
            .map_err(|_| bad()),
    }
}

fn mono_text(a: u32, b: u32, x: &str, y: &str) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part(x, a), part(y, b)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a (u32, u32), &'a Rat)>,
    x: &str,
    y: &str,
) -> fmt::Result {
    let mut sorted: Vec<_> = terms.collect();
    if sorted.is_empty() {
        return write!(f, "0");
    }
    sorted.sort_by_key(|(&(a, b), _)| std::cmp::Reverse((a + b, a)));
    for (i, (&(a, b), c)) in sorted.into_iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        let mono = mono_text(a, b, x, y);
        match (mag.is_one(), mono.is_empty()) {
            (_, true) => write!(f, "{}", fmt_rat(&mag))?,
            (true, false) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{}*{mono}", fmt_rat(&mag))?,
        }
    }
    Ok(())
}

impl fmt::Display for WeylEl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), "x", "d")
    }
}

impl Add for &WeylEl {
    type Output = WeylEl;
    fn add(self, rhs: &WeylEl) -> WeylEl {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Neg for &WeylEl {
    type Output = WeylEl;
    fn neg(self) -> WeylEl {
        WeylEl {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &WeylEl {
    type Output = WeylEl;
    fn sub(self, rhs: &WeylEl) -> WeylEl {
        self + &(-rhs)
    }
}

impl Mul for &WeylEl {
    type Output = WeylEl;
    /// `d^b x^c = sum_i C(b,i) c!/(c-i)! x^{c-i} d^{b-i}`.
    fn mul(self, rhs: &WeylEl) -> WeylEl {
        let mut out = WeylEl::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &rhs.terms {
                let base = c1 * c2;
                for i in 0..=b.min(c) {
                    let k: BigInt = binomial(b, i) * falling(c, i);
                    out.add_term((a + c - i, b + d - i), &base * Rat::from_integer(k));
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for WeylEl {
            type Output = WeylEl;
            fn $m(self, rhs: WeylEl) -> WeylEl {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Commutative polynomial in `X = sym(x)`, `Y = sym(d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl SymbolPoly {
    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            let slot: &mut Rat = terms.entry(k).or_insert_with(Rat::zero);
            *slot += c;
        }
        terms.retain(|_, c: &mut Rat| !c.is_zero());
        SymbolPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weighted degree of the terms, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self, w: Weight) -> Option<i64> {
        let mut degs = self.terms.keys().map(|&(a, b)| w.of(a, b));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Whether `X^e` divides every term.
    pub fn divisible_by_x_power(&self, e: u32) -> bool {
        self.terms.keys().all(|&(a, _)| a >= e)
    }

    pub fn mul(&self, other: &SymbolPoly) -> SymbolPoly {
        SymbolPoly::from_terms(self.terms.iter().flat_map(|(&(a, b), c1)| {
            other
                .terms
                .iter()
                .map(move |(&(c, d), c2)| ((a + c, b + d), c1 * c2))
        }))
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter(), "X", "Y")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn el(s: &str) -> WeylEl {
        WeylEl::parse(s).unwrap()
    }

    #[test]
    fn defining_relation() {
        assert_eq!(&WeylEl::d() * &WeylEl::x(), el("x*d + 1"));
        assert_eq!(
            &(&WeylEl::d() * &WeylEl::x()) - &(&WeylEl::x() * &WeylEl::d()),
            WeylEl::one()
        );
    }

    #[test]
    fn euler_square() {
        let e = el("x*d");
        let sq = &e * &e;
        assert_eq!(sq, el("x^2*d^2 + x*d"));
        // independent check: (x d)^2 x^m = m^2 x^m
        for m in 0..=5usize {
            let xm = Poly::monomial(Rat::one(), m);
            assert_eq!(sq.apply_poly(&xm), xm.scale(&rat((m * m) as i64)));
        }
        assert_eq!(&el("x^2") * &WeylEl::d(), el("x^2*d"));
    }

    #[test]
    fn polynomial_action() {
        assert!(el("x*d - 1").apply_poly(&Poly::x()).is_zero());
        assert_eq!(
            el("d^2").apply_poly(&Poly::from_ints(&[0, 0, 0, 1])),
            Poly::from_ints(&[0, 6])
        );
        let f = Poly::from_ints(&[3, -1, 4]);
        assert_eq!(WeylEl::one().apply_poly(&f), f);
    }

    #[test]
    fn rational_action() {
        let inv_x = RatFunc::new(Poly::one(), Poly::x()).unwrap();
        let r = WeylEl::d().apply_ratfunc(&inv_x);
        assert_eq!(
            r,
            RatFunc::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1])).unwrap()
        );
        let r = WeylEl::x().apply_ratfunc(&inv_x);
        assert_eq!(r.as_poly(), Some(&Poly::one()));
        let r = el("x*d").apply_ratfunc(&inv_x);
        assert_eq!(r, RatFunc::new(Poly::from_ints(&[-1]), Poly::x()).unwrap());
    }

    #[test]
    fn weighted_degree() {
        let w11 = Weight::new(1, 1).unwrap();
        let w12 = Weight::new(1, 2).unwrap();
        assert_eq!(el("x^2*d").wdegree(w11), Some(3));
        assert_eq!(el("x^2*d").wdegree(w12), Some(4));
        assert_eq!(el("x*d^2 - d").wdegree(w11), Some(3));
        assert_eq!(WeylEl::zero().wdegree(w11), None);
        assert!(Weight::new(0, 1).is_err());
    }

    #[test]
    fn symbols() {
        let w = Weight::STANDARD;
        let p = el("x*d^2 - d");
        assert_eq!(
            p.top_component(w, 3).unwrap(),
            SymbolPoly::from_terms([((1, 2), rat(1))])
        );
        assert!(p.top_component(w, 4).unwrap().is_zero());
        assert!(p.top_component(w, 2).is_err());
        let q = el("x^2 + d^2");
        assert_eq!(
            q.top_component(w, 2).unwrap(),
            SymbolPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1))])
        );
    }

    #[test]
    fn filtered_dimensions() {
        let w11 = Weight::STANDARD;
        assert_eq!(dim_a(w11, 2), 6);
        assert_eq!(dim_a(w11, -1), 0);
        // lattice points with a + 2b <= 3: (0..=3, 0), (0..=1, 1)
        assert_eq!(dim_a(Weight::new(1, 2).unwrap(), 3), 6);
        for k in 0..=50 {
            assert_eq!(dim_a(w11, k), ((k + 1) * (k + 2) / 2) as usize);
        }
    }

    #[test]
    fn monomial_bases() {
        assert_eq!(
            monomial_basis(Weight::STANDARD, 1),
            vec![(0, 0), (1, 0), (0, 1)]
        );
        assert_eq!(monomial_basis(Weight::STANDARD, 0), vec![(0, 0)]);
        assert_eq!(monomial_basis(Weight::new(2, 3).unwrap(), 1), vec![(0, 0)]);
        for (w1, w2) in [(1, 1), (1, 2), (2, 3), (3, 1)] {
            let w = Weight::new(w1, w2).unwrap();
            for k in -1..12 {
                assert_eq!(monomial_basis(w, k).len(), dim_a(w, k));
            }
        }
    }

    #[test]
    fn text_form() {
        let p = el("x^2*d^2 + 2*x*d - 2");
        assert_eq!(p.to_string(), "x^2*d^2 + 2*x*d - 2");
        assert_eq!(el("-1/2*x + d").to_string(), "-1/2*x + d");
        assert_eq!(el("d*x"), el("x*d + 1"));
        assert_eq!(el(" - 3 "), WeylEl::term(rat(-3), 0, 0));
        assert_eq!(el("2/4*x^3").coeff(3, 0), ratio(1, 2));
        assert!(WeylEl::parse("x^").is_err());
        assert!(WeylEl::parse("y").is_err());
        assert!(WeylEl::parse("").is_err());
        assert!(WeylEl::parse("x + + d").is_err());
    }
}
