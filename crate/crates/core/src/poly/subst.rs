use std::collections::BTreeMap;

use serde::Serialize;

use super::BiPoly;
use crate::field::Field;

/// The substitution
/// `x = X^{a_x} (Y + s)^{b_x}`, `y = X^{a_y} (Y + s)^{b_y}`.
///
/// With `shift = None` the map is purely monomial (`s = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMap<E> {
    pub x: (u32, u32),
    pub y: (u32, u32),
    pub shift: Option<E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> MonomialMap<E> {
    pub fn identity() -> Self {
        MonomialMap { x: (1, 0), y: (0, 1), shift: None }
    }

    /// Determinant of the exponent matrix `[[a_x, b_x], [a_y, b_y]]`.
    pub fn det(&self) -> i64 {
        self.x.0 as i64 * self.y.1 as i64 - self.x.1 as i64 * self.y.0 as i64
    }

    /// The composition `f(x(X, Y), y(X, Y))`.
    pub fn apply<F: Field<Elem = E>>(&self, f: &BiPoly<E>, k: &F) -> BiPoly<E> {
        // Collect by power of X a polynomial in Z = Y + s.
        let mut rows: BTreeMap<u32, BTreeMap<u32, E>> = BTreeMap::new();
        for ((i, j), c) in f.terms() {
            let xe = self.x.0 * i + self.y.0 * j;
            let ze = self.x.1 * i + self.y.1 * j;
            let row = rows.entry(xe).or_default();
            match row.get_mut(&ze) {
                Some(v) => *v = k.add(v, c),
                None => {
                    row.insert(ze, c.clone());
                }
            }
        }
        let mut out = Vec::new();
        for (xe, row) in rows {
            let deg = *row.keys().last().unwrap() as usize;
            let mut dense = vec![k.zero(); deg + 1];
            for (z, c) in row {
                dense[z as usize] = c;
            }
            let shifted = match &self.shift {
                Some(s) if !k.is_zero(s) => taylor_shift(&dense, s, k),
                _ => dense,
            };
            for (ye, c) in shifted.into_iter().enumerate() {
                if !k.is_zero(&c) {
                    out.push(((xe, ye as u32), c));
                }
            }
        }
        BiPoly::from_terms(k, out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&E) -> E) -> Self {
        MonomialMap { x: self.x, y: self.y, shift: self.shift.as_ref().map(f) }
    }
}

/// Coefficients of `g(Y + s)` given those of `g(Z)`.
pub(crate) fn taylor_shift<F: Field>(g: &[F::Elem], s: &F::Elem, k: &F) -> Vec<F::Elem> {
    let mut c = g.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = k.mul(&c[j + 1], s);
            c[j] = k.add(&c[j], &t);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::parse_poly;

    #[test]
    fn cusp_under_weighted_blowup() {
        let k = Fq::prime(7).unwrap();
        let f = parse_poly("x^2-y^3", &k).unwrap();
        let m = MonomialMap { x: (3, 1), y: (2, 1), shift: Some(k.one()) };
        let expected = parse_poly("-x^6*(y+1)^2*y", &k).unwrap();
        assert_eq!(m.apply(&f, &k), expected);
        let id = MonomialMap::identity();
        let x = parse_poly("x", &k).unwrap();
        assert_eq!(id.apply(&x, &k), x);
    }

    #[test]
    fn substitution_is_multiplicative() {
        let k = Fq::prime(5).unwrap();
        let f = parse_poly("x^3 + 2*x*y + y^2 + 1", &k).unwrap();
        let g = parse_poly("x - 3*y^4 + x^2*y", &k).unwrap();
        let m = MonomialMap { x: (2, 1), y: (1, 1), shift: Some(k.from_i64(3)) };
        let lhs = m.apply(&f.mul(&g, &k), &k);
        let rhs = m.apply(&f, &k).mul(&m.apply(&g, &k), &k);
        assert_eq!(lhs, rhs);
    }
}
