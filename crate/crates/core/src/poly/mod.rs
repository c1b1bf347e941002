//! Sparse bivariate polynomials over a [`Field`].

mod gcd;
mod parse;
mod subst;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{Field, UniPoly};

pub use gcd::{common_component_at_origin, reduced_check, ReducedCheck};
pub use parse::parse_poly;
pub use subst::MonomialMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("multiplier does not satisfy u(0,0) != 0")]
    NotAUnit,
    #[error("zero polynomial")]
    ZeroPolynomial,
}

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exp = (u32, u32);

/// A bivariate polynomial stored as a map from exponents to nonzero
/// coefficients. Like [`UniPoly`], arithmetic takes the field explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly<E> {
    terms: BTreeMap<Exp, E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> BiPoly<E> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms<F: Field<Elem = E>>(k: &F, it: impl IntoIterator<Item = (Exp, E)>) -> Self {
        let mut acc: HashMap<Exp, E> = HashMap::new();
        for (e, c) in it {
            match acc.get_mut(&e) {
                Some(v) => *v = k.add(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        BiPoly { terms }
    }

    pub fn monomial<F: Field<Elem = E>>(k: &F, c: E, i: u32, j: u32) -> Self {
        Self::from_terms(k, [((i, j), c)])
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, c: E) -> Self {
        Self::monomial(k, c, 0, 0)
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self::constant(k, k.one())
    }

    pub fn x<F: Field<Elem = E>>(k: &F) -> Self {
        Self::monomial(k, k.one(), 1, 0)
    }

    pub fn y<F: Field<Elem = E>>(k: &F) -> Self {
        Self::monomial(k, k.one(), 0, 1)
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: u32, j: u32) -> E {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn get(&self, e: Exp) -> Option<&E> {
        self.terms.get(&e)
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exp, &E)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Exp> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term<F: Field<Elem = E>>(&self, k: &F) -> E {
        self.coeff(k, 0, 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    /// Largest power of `x` dividing the polynomial.
    pub fn x_order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).min()
    }

    /// Largest power of `y` dividing the polynomial.
    pub fn y_order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).min()
    }

    /// Order at the origin: the smallest total degree in the support.
    pub fn ord(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(|(i, j)| i + j)
            .min()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn add<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            match terms.get_mut(e) {
                Some(v) => {
                    *v = k.add(v, c);
                    if k.is_zero(v) {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        BiPoly { terms }
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, k.neg(c))).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        self.add(&o.neg(k), k)
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, k: &F) -> Self {
        if k.is_zero(c) {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(e, a)| (*e, k.mul(a, c))).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        self.mul_bounded(o, k, None)
    }

    pub(crate) fn mul_bounded<F: Field<Elem = E>>(&self, o: &Self, k: &F, bound: Option<u32>) -> Self {
        let mut acc: HashMap<Exp, E> = HashMap::with_capacity(self.len() * o.len());
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &o.terms {
                let e = (i1 + i2, j1 + j2);
                if bound.is_some_and(|d| e.0 + e.1 > d) {
                    continue;
                }
                let p = k.mul(a, b);
                match acc.get_mut(&e) {
                    Some(v) => *v = k.add(v, &p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        BiPoly { terms: acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect() }
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: u32, k: &F) -> Self {
        let mut acc = Self::one(k);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// Exact division by `x^a y^b`; `None` if some term is not divisible.
    pub fn div_monomial(&self, a: u32, b: u32) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            if i < a || j < b {
                return None;
            }
            terms.insert((i - a, j - b), c.clone());
        }
        Some(BiPoly { terms })
    }

    pub fn mul_monomial(&self, a: u32, b: u32) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i + a, j + b), c.clone())).collect() }
    }

    /// Drop all terms of total degree greater than `d`.
    pub fn truncate(&self, d: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j <= d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, y: &E, k: &F) -> E {
        self.terms.iter().fold(k.zero(), |acc, ((i, j), c)| {
            let t = k.mul(c, &k.mul(&k.pow(x, *i as u64), &k.pow(y, *j as u64)));
            k.add(&acc, &t)
        })
    }

    /// Formal partial derivatives `(f_x, f_y)`.
    pub fn partials<F: Field<Elem = E>>(&self, k: &F) -> (Self, Self) {
        let fx = Self::from_terms(
            k,
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), k.scale_int(c, i as i64))),
        );
        let fy = Self::from_terms(
            k,
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), k.scale_int(c, j as i64))),
        );
        (fx, fy)
    }

    /// `f * u` truncated to total degree `d`, for a unit `u`.
    pub fn mul_unit_truncated<F: Field<Elem = E>>(
        &self,
        u: &Self,
        d: u32,
        k: &F,
    ) -> Result<Self, PolyError> {
        if k.is_zero(&u.constant_term(k)) {
            return Err(PolyError::NotAUnit);
        }
        Ok(self.mul_bounded(u, k, Some(d)))
    }

    /// Apply a coefficient map, e.g. a field embedding.
    pub fn map_coeffs<F: Field<Elem = E>>(&self, k: &F, f: impl Fn(&E) -> E) -> Self {
        Self::from_terms(k, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// `f(x, 0)` as a univariate polynomial in `x`.
    pub fn restrict_y0<F: Field<Elem = E>>(&self, k: &F) -> UniPoly<E> {
        self.column(k, 0, true)
    }

    /// `f(0, y)` as a univariate polynomial in `y`.
    pub fn restrict_x0<F: Field<Elem = E>>(&self, k: &F) -> UniPoly<E> {
        self.column(k, 0, false)
    }

    fn column<F: Field<Elem = E>>(&self, k: &F, fixed: u32, along_x: bool) -> UniPoly<E> {
        let mut v: Vec<E> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (free, other) = if along_x { (i, j) } else { (j, i) };
            if other != fixed {
                continue;
            }
            let free = free as usize;
            if v.len() <= free {
                v.resize(free + 1, k.zero());
            }
            v[free] = c.clone();
        }
        UniPoly::from_coeffs(k, v)
    }

    /// Coefficients as a polynomial in `y` over `K[x]`: entry `j` is the
    /// coefficient of `y^j`.
    pub fn to_y_coeffs<F: Field<Elem = E>>(&self, k: &F) -> Vec<UniPoly<E>> {
        let n = self.y_degree().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<E>> = vec![Vec::new(); n];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, k.zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(|r| UniPoly::from_coeffs(k, r)).collect()
    }

    pub fn from_y_coeffs<F: Field<Elem = E>>(k: &F, rows: &[UniPoly<E>]) -> Self {
        Self::from_terms(
            k,
            rows.iter().enumerate().flat_map(|(j, r)| {
                r.coeffs()
                    .iter()
                    .enumerate()
                    .map(move |(i, c)| ((i as u32, j as u32), c.clone()))
            }),
        )
    }

    /// Swap the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Terms in printing order: total degree descending, then `x` exponent descending.
    pub fn graded_terms(&self) -> Vec<(Exp, &E)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| (b.0 .0 + b.0 .1, b.0 .0).cmp(&(a.0 .0 + a.0 .1, a.0 .0)));
        v
    }

    /// Canonical text form, re-readable by [`parse_poly`].
    pub fn format<F: Field<Elem = E>>(&self, k: &F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, ((i, j), c)) in self.graded_terms().into_iter().enumerate() {
            let mut coef = k.format_elem(c);
            let negative = coef.starts_with('-') && !coef[1..].contains(['+', '-']);
            if negative {
                coef.remove(0);
                out.push('-');
            } else if n > 0 {
                out.push('+');
            }
            if coef.contains(['+', '-']) {
                coef = format!("({coef})");
            }
            let mut factors: Vec<String> = Vec::new();
            if coef != "1" || (i == 0 && j == 0) {
                factors.push(coef);
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    e => factors.push(format!("{v}^{e}")),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fq, Rationals};

    #[test]
    fn partials_in_small_characteristic() {
        let q = Rationals;
        let f = parse_poly("x^2-y^3", &q).unwrap();
        let (fx, fy) = f.partials(&q);
        assert_eq!(fx, parse_poly("2*x", &q).unwrap());
        assert_eq!(fy, parse_poly("-3*y^2", &q).unwrap());

        let f2 = Fq::prime(2).unwrap();
        let (fx, fy) = parse_poly("x^2-y^3", &f2).unwrap().partials(&f2);
        assert!(fx.is_zero());
        assert_eq!(fy, parse_poly("y^2", &f2).unwrap());

        let f5 = Fq::prime(5).unwrap();
        let (fx, fy) = parse_poly("x^5", &f5).unwrap().partials(&f5);
        assert!(fx.is_zero() && fy.is_zero());
    }

    #[test]
    fn unit_truncation() {
        let k = Fq::prime(7).unwrap();
        let p = |s: &str| parse_poly(s, &k).unwrap();
        let f = p("x^3+y^2");
        assert_eq!(f.mul_unit_truncated(&p("1"), 5, &k).unwrap(), f);
        assert_eq!(p("x").mul_unit_truncated(&p("1+y"), 1, &k).unwrap(), p("x"));
        assert_eq!(p("x+y").mul_unit_truncated(&p("1+x"), 2, &k).unwrap(), p("x+y+x^2+x*y"));
        assert_eq!(p("x").mul_unit_truncated(&p("x+y"), 3, &k), Err(PolyError::NotAUnit));
    }

    #[test]
    fn order_at_origin() {
        let k = Fq::prime(7).unwrap();
        assert_eq!(parse_poly("x^2-y^3", &k).unwrap().ord(), Ok(2));
        assert_eq!(parse_poly("1+x", &k).unwrap().ord(), Ok(0));
        assert_eq!(BiPoly::<crate::field::FqElem>::zero().ord(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn canonical_printing() {
        let k = Fq::prime(5).unwrap();
        let f = parse_poly("y^3 - x^2 + 3*x*y + 1", &k).unwrap();
        assert_eq!(f.format(&k), "y^3+4*x^2+3*x*y+1");
        let q = Rationals;
        let f = parse_poly("x^2 - 1/2*y^3", &q).unwrap();
        assert_eq!(f.format(&q), "-1/2*y^3+x^2");
        let f9 = Fq::new(3, 2).unwrap();
        let f = parse_poly("(2*g+1)*x + g*y^2", &f9).unwrap();
        assert_eq!(f.format(&f9), "g*y^2+(2*g+1)*x");
    }
}
