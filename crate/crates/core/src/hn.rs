//! Euclid bookkeeping and Hamburger-Noether substitutions.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::poly::{BiPoly, MonomialMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnError {
    #[error("({0}, {1}) are not coprime")]
    NotCoprime(u32, u32),
    #[error("expected p >= q, got ({0}, {1})")]
    BadOrder(u32, u32),
    #[error("face root must be nonzero")]
    ZeroRoot,
    #[error("transformed polynomial has order {found} in Y, expected {expected}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("transformed polynomial has X-order {found}, expected {expected}")]
    LevelMismatch { expected: u32, found: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The sequences attached to the Euclidean algorithm of `p >= q`.
///
/// Vectors are stored 1-based in the mathematical indexing: `k[0]` is
/// `k_1`, `m[0]` is `m_1`, and so on. `r[0]` is `r_0 = q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidData {
    pub p: u32,
    pub q: u32,
    pub k: Vec<u32>,
    pub r: Vec<u32>,
    pub m: Vec<u32>,
    pub n: Vec<u32>,
    pub m_tilde: Vec<u32>,
    pub n_tilde: Vec<u32>,
    /// Number of quotients minus two; `-1` when `q = 1`.
    pub n_bar: i32,
    /// Exponent of the new `Y` in the image of `x` (`n_{n̄+2}`).
    pub p_prime: u32,
    /// Exponent of the new `Y` in the image of `y` (`ñ_{n̄+1}`).
    pub q_prime: u32,
}

impl EuclidData {
    /// `p q' - q p'`, which is `(-1)^{n̄}`.
    pub fn det(&self) -> i64 {
        self.p as i64 * self.q_prime as i64 - self.q as i64 * self.p_prime as i64
    }

    /// `Δ_i = n_{i+1} m̃_i - ñ_i m_{i+1}` for the valid range of `i`.
    pub fn deltas(&self) -> Vec<i64> {
        let top = (self.n_bar + 1).max(0) as usize;
        (1..=top)
            .filter(|&i| i < self.n.len() && i <= self.m_tilde.len())
            .map(|i| {
                self.n[i] as i64 * self.m_tilde[i - 1] as i64
                    - self.n_tilde[i - 1] as i64 * self.m[i] as i64
            })
            .collect()
    }

    fn rem(&self, i: usize) -> u32 {
        // r_i with r_{-1} = p handled by callers; r beyond the list is 0
        self.r.get(i).copied().unwrap_or(0)
    }

    /// Check every identity of the Euclid bookkeeping.
    pub fn verify(&self) -> bool {
        let len = self.k.len();
        let (p, q) = (self.p as u64, self.q as u64);
        let mut ok = self.det().abs() == 1 && self.p_prime <= self.p && self.q_prime <= self.q;
        ok &= self.det() == if self.n_bar.rem_euclid(2) == 0 { 1 } else { -1 };
        if self.n_bar < 0 {
            return ok;
        }
        for i in 1..=len {
            let r_prev = if i == 1 { self.q } else { self.rem(i - 1) } as u64;
            ok &= p == self.m[i - 1] as u64 * r_prev + self.n[i - 1] as u64 * self.rem(i) as u64;
        }
        for i in 1..=self.m_tilde.len() {
            ok &= q == self.m_tilde[i - 1] as u64 * self.rem(i) as u64
                + self.n_tilde[i - 1] as u64 * self.rem(i + 1) as u64;
        }
        ok &= self.deltas().iter().enumerate().all(|(i, d)| *d == if i % 2 == 0 { -1 } else { 1 });
        ok && self.m[len - 1] == self.p && *self.m_tilde.last().unwrap() == self.q
    }
}

/// Run the Euclidean algorithm on coprime `p >= q >= 1`.
pub fn euclid_sequences(p: u32, q: u32) -> Result<EuclidData, HnError> {
    if q == 0 || p.gcd(&q) != 1 {
        return Err(HnError::NotCoprime(p, q));
    }
    if p < q {
        return Err(HnError::BadOrder(p, q));
    }
    let mut k = Vec::new();
    let mut r = vec![q];
    let (mut a, mut b) = (p, q);
    while b != 0 {
        k.push(a / b);
        let next = a % b;
        r.push(next);
        a = b;
        b = next;
    }
    let len = k.len();
    let n_bar = len as i32 - 2;
    let mut m = vec![k[0]];
    let mut n = vec![1];
    for i in 1..len {
        m.push(m[i - 1] * k[i] + n[i - 1]);
        n.push(m[i - 1]);
    }
    let (mut m_tilde, mut n_tilde) = (Vec::new(), Vec::new());
    if len >= 2 {
        m_tilde.push(k[1]);
        n_tilde.push(1);
        for i in 1..len - 1 {
            m_tilde.push(m_tilde[i - 1] * k[i + 1] + n_tilde[i - 1]);
            n_tilde.push(m_tilde[i - 1]);
        }
    }
    let (p_prime, q_prime) = if n_bar < 0 {
        // q = 1: x = X^p Y, y = X
        (1, 0)
    } else {
        (n[len - 1], n_tilde[len - 2])
    };
    let data = EuclidData { p, q, k, r, m, n, m_tilde, n_tilde, n_bar, p_prime, q_prime };
    debug_assert!(data.verify(), "{data:?}");
    Ok(data)
}

/// A Hamburger-Noether substitution `x = X^p (Y + μ̄)^{e_x}`, `y = X^q (Y + μ̄)^{e_y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnMap<E> {
    pub p: u32,
    pub q: u32,
    pub mu: E,
    pub mu_bar: E,
    pub map: MonomialMap<E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> HnMap<E> {
    /// Exponents of `Y + μ̄` in the images of `x` and `y`.
    pub fn y_exponents(&self) -> (u32, u32) {
        (self.map.x.1, self.map.y.1)
    }

    pub fn det(&self) -> i64 {
        self.map.det()
    }

    pub fn map_coeffs(&self, f: impl Fn(&E) -> E) -> Self {
        HnMap {
            p: self.p,
            q: self.q,
            mu: f(&self.mu),
            mu_bar: f(&self.mu_bar),
            map: self.map.map_coeffs(&f),
        }
    }
}

/// Exponents `(e_x, e_y)` with `p e_y - q e_x = ±1`, `e_x <= p`, `e_y <= q`.
pub fn hn_exponents(p: u32, q: u32) -> Result<(u32, u32), HnError> {
    if p >= q {
        let e = euclid_sequences(p, q)?;
        Ok((e.p_prime, e.q_prime))
    } else {
        // exchange the roles of x and y
        let e = euclid_sequences(q, p)?;
        Ok((e.q_prime, e.p_prime))
    }
}

/// The substitution resolving the factor `x^q - μ y^p`.
///
/// `μ̄` is `μ^{-1}` when the exponent matrix has determinant `+1` and `μ`
/// when it is `-1`; in both cases `x^q - μ y^p` becomes `X^{pq}` times a
/// unit times `Y`.
pub fn hn_map<F: Field>(p: u32, q: u32, mu: &F::Elem, k: &F) -> Result<HnMap<F::Elem>, HnError> {
    if k.is_zero(mu) {
        return Err(HnError::ZeroRoot);
    }
    let (ex, ey) = hn_exponents(p, q)?;
    let map = MonomialMap { x: (p, ex), y: (q, ey), shift: None };
    let mu_bar = if map.det() == 1 { k.inv(mu)? } else { mu.clone() };
    let map = MonomialMap { shift: Some(mu_bar.clone()), ..map };
    Ok(HnMap { p, q, mu: mu.clone(), mu_bar, map })
}

/// Apply the substitution for the face `(p, q)` with root `μ` of multiplicity
/// `ν`, and divide out `X^N`.
pub fn hn_transform<F: Field>(
    f: &BiPoly<F::Elem>,
    face: (u32, u32, u32),
    root: (&F::Elem, usize),
    k: &F,
) -> Result<(HnMap<F::Elem>, BiPoly<F::Elem>), HnError> {
    let (p, q, n) = face;
    let m = hn_map(p, q, root.0, k)?;
    let g = m.map.apply(f, k);
    let found = g.x_order().unwrap_or(0);
    if found != n {
        return Err(HnError::LevelMismatch { expected: n, found });
    }
    let cof = g.div_monomial(n, 0).unwrap();
    let order = cof.restrict_x0(k).order(k).unwrap_or(usize::MAX);
    if order != root.1 {
        return Err(HnError::OrderMismatch { expected: root.1, found: order });
    }
    Ok((m, cof))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::newton::{face_factorization, newton_polygon};
    use crate::poly::parse_poly;

    const EX1: &str = "(x^2-y^3)^4 - 2*(x^2-y^3)^2*x*y^11 - y^19*(1-y^3)*(x^2-y^3) + y^25";

    #[test]
    fn euclid_small_cases() {
        let e = euclid_sequences(3, 2).unwrap();
        assert_eq!((e.p_prime, e.q_prime), (1, 1));
        assert_eq!(e.det(), 1);
        let e = euclid_sequences(13, 2).unwrap();
        assert_eq!((e.p_prime, e.q_prime), (6, 1));
        assert_eq!(13 * e.q_prime as i64 - 2 * e.p_prime as i64, 1);
        let e = euclid_sequences(1, 1).unwrap();
        assert_eq!((e.p_prime, e.q_prime, e.det()), (1, 0, -1));
        let e = euclid_sequences(5, 3).unwrap();
        assert_eq!((e.n_bar, e.det()), (1, -1));
        assert_eq!(euclid_sequences(4, 2), Err(HnError::NotCoprime(4, 2)));
        assert_eq!(euclid_sequences(2, 3), Err(HnError::BadOrder(2, 3)));
    }

    #[test]
    fn euclid_identities_up_to_fifty() {
        for p in 1..=50u32 {
            for q in 1..=p {
                if p.gcd(&q) == 1 {
                    let e = euclid_sequences(p, q).unwrap();
                    assert!(e.verify(), "{p} {q}");
                }
            }
        }
    }

    #[test]
    fn maps_match_worked_examples() {
        let k = Fq::prime(7).unwrap();
        let m = hn_map(3, 2, &k.one(), &k).unwrap();
        assert_eq!(m.map.x, (3, 1));
        assert_eq!(m.map.y, (2, 1));
        assert_eq!(m.mu_bar, k.one());

        let big = Fq::prime(1_000_003).unwrap();
        let mu = big.from_i64(5776);
        let m = hn_map(2, 1, &mu, &big).unwrap();
        assert_eq!((m.map.x, m.map.y), ((2, 1), (1, 0)));
        assert_eq!(m.mu_bar, mu);

        let f2 = Fq::prime(2).unwrap();
        let m = hn_map(1, 1, &f2.one(), &f2).unwrap();
        assert_eq!((m.map.x, m.map.y), ((1, 1), (1, 0)));

        let m = hn_map(2, 13, &k.one(), &k).unwrap();
        assert_eq!((m.map.x, m.map.y), ((2, 1), (13, 6)));
        assert_eq!(hn_map(3, 2, &k.zero(), &k), Err(HnError::ZeroRoot));
    }

    #[test]
    fn face_factor_becomes_linear() {
        let k = Fq::prime(11).unwrap();
        for p in 1..8u32 {
            for q in 1..8u32 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let mu = k.from_i64(3);
                let face = BiPoly::monomial(&k, k.one(), q, 0)
                    .sub(&BiPoly::monomial(&k, mu, 0, p), &k);
                let (_, cof) = hn_transform(&face, (p, q, p * q), (&mu, 1), &k).unwrap();
                assert_eq!(cof.restrict_x0(&k).order(&k), Some(1), "{p} {q}");
            }
        }
    }

    #[test]
    fn first_example_levels() {
        let k = Fq::prime(1_000_003).unwrap();
        let mut f = parse_poly(EX1, &k).unwrap();
        let mut totals = Vec::new();
        let mut parent = 0;
        for _ in 0..3 {
            let poly = newton_polygon(&f).unwrap();
            let face = poly.faces[0];
            let ff = face_factorization(&f, &face, &k).unwrap();
            assert_eq!(ff.roots.len(), 1);
            let (mu, nu) = ff.roots[0];
            if totals.len() == 2 {
                // third chart: face y^2 + x, checked by an independent expansion
                assert_eq!(mu, k.neg(&k.one()));
            }
            let total = face.n + face.p * parent;
            totals.push(total);
            parent = total;
            if nu == 1 {
                break;
            }
            f = hn_transform(&f, (face.p, face.q, face.n), (&mu, nu), &k).unwrap().1;
        }
        assert_eq!(totals, vec![24, 100, 202]);
    }
}
