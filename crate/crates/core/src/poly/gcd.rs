use super::BiPoly;
use crate::field::{Field, UniPoly};

type Row<E> = UniPoly<E>;

fn content<F: Field>(rows: &[Row<F::Elem>], k: &F) -> Row<F::Elem> {
    rows.iter().fold(Row::zero(), |g, r| g.gcd(r, k))
}

fn primitive<F: Field>(rows: &[Row<F::Elem>], k: &F) -> Vec<Row<F::Elem>> {
    let c = content(rows, k);
    if c.is_zero() {
        return Vec::new();
    }
    rows.iter().map(|r| r.div_exact(&c, k).unwrap()).collect()
}

fn trim<E: Clone + PartialEq>(rows: &mut Vec<Row<E>>) {
    while rows.last().is_some_and(|r| r.is_zero()) {
        rows.pop();
    }
}

/// Pseudo-remainder of `a` by `b` as polynomials in `y` over `K[x]`.
fn prem<F: Field>(a: &[Row<F::Elem>], b: &[Row<F::Elem>], k: &F) -> Vec<Row<F::Elem>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let n = r.len() - 1;
        let lr = r[n].clone();
        let shift = n - db;
        for row in r.iter_mut() {
            *row = row.mul(lb, k);
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&bj.mul(&lr, k), k);
        }
        trim(&mut r);
    }
    r
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> BiPoly<E> {
    /// Greatest common divisor, normalised so that its leading coefficient
    /// (highest `y` power, then highest `x` power) is 1. `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        if self.is_zero() {
            return o.normalized(k);
        }
        if o.is_zero() {
            return self.normalized(k);
        }
        let (ra, rb) = (self.to_y_coeffs(k), o.to_y_coeffs(k));
        let c = content(&ra, k).gcd(&content(&rb, k), k);
        let mut a = primitive(&ra, k);
        let mut b = primitive(&rb, k);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            if b.len() == 1 {
                break vec![Row::one(k)];
            }
            let r = prem(&a, &b, k);
            if r.is_empty() {
                break b;
            }
            a = b;
            b = primitive(&r, k);
        };
        let g: Vec<_> = g.iter().map(|r| r.mul(&c, k)).collect();
        BiPoly::from_y_coeffs(k, &g).normalized(k)
    }

    fn normalized<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.terms().max_by_key(|((i, j), _)| (*j, *i)) {
            None => Self::zero(),
            Some((_, lc)) => self.scale(&k.inv(lc).unwrap(), k),
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        // Divide by leading terms in the (y, x)-lex order.
        let lead = |p: &Self| p.terms().max_by_key(|((i, j), _)| (*j, *i)).map(|(e, c)| (e, c.clone()));
        let (de, dc) = lead(d).unwrap();
        let dinv = k.inv(&dc).unwrap();
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((re, rc)) = lead(&r) {
            if re.0 < de.0 || re.1 < de.1 {
                return None;
            }
            let t = (re.0 - de.0, re.1 - de.1);
            let c = k.mul(&rc, &dinv);
            r = r.sub(&d.mul_monomial(t.0, t.1).scale(&c, k), k);
            q.push((t, c));
        }
        Some(BiPoly::from_terms(k, q))
    }
}

/// Result of [`reduced_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCheck<E> {
    /// No repeated factor passes through the origin.
    pub reduced: bool,
    /// `gcd(f, f_x, f_y)`; its factors through the origin are the repeated
    /// ones. `None` when reducedness was settled by a modular image.
    pub common: Option<BiPoly<E>>,
    /// Both partials vanish identically, i.e. `f` is a `p`-th power.
    pub pth_power: bool,
}

/// Primes used to certify reducedness over the rationals.
const CERT_PRIMES: [u64; 3] = [2_147_483_629, 2_147_483_587, 2_147_483_579];

/// Decide whether `f` is reduced at the origin.
///
/// Over a perfect field an irreducible `g` with `g | f, f_x, f_y` but
/// `g^2 ∤ f` would need `g_x = g_y = 0`, making `g` a `p`-th power; so
/// repeated factors are exactly the factors of `gcd(f, f_x, f_y)`. Factors
/// not vanishing at the origin are units in the local ring and are ignored.
///
/// Over `Q` the gcd is first taken modulo a few large primes: the integer
/// gcd reduces to a divisor of the modular one, so a modular gcd that is a
/// unit at the origin proves reducedness without coefficient growth.
pub fn reduced_check<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> ReducedCheck<F::Elem> {
    let (fx, fy) = f.partials(k);
    let pth_power = fx.is_zero() && fy.is_zero() && f.total_degree().unwrap_or(0) > 0;
    if k.characteristic() == 0 && !f.is_zero() {
        for p in CERT_PRIMES {
            if modular_reduced(f, k, p) == Some(true) {
                return ReducedCheck { reduced: true, common: None, pth_power };
            }
        }
    }
    let common = f.gcd(&fx, k).gcd(&fy, k);
    let reduced = !f.is_zero() && !k.is_zero(&common.constant_term(k));
    ReducedCheck { reduced, common: Some(common), pth_power }
}

/// Image of `f` in `F_p[x, y]`, when every coefficient reduces.
fn modular_image<F: Field>(
    f: &BiPoly<F::Elem>,
    k: &F,
    p: u64,
) -> Option<(crate::field::Fq, BiPoly<crate::field::FqElem>)> {
    let fp = crate::field::Fq::prime(p).ok()?;
    let terms: Option<Vec<_>> = f
        .terms()
        .map(|(e, c)| k.reduce_mod(c, p).map(|v| (e, fp.elem(v))))
        .collect();
    let g = BiPoly::from_terms(&fp, terms?);
    // Only trust images that keep the whole support.
    (g.len() == f.len()).then_some((fp, g))
}

fn modular_reduced<F: Field>(f: &BiPoly<F::Elem>, k: &F, p: u64) -> Option<bool> {
    let (fp, g) = modular_image(f, k, p)?;
    let (gx, gy) = g.partials(&fp);
    let common = g.gcd(&gx, &fp).gcd(&gy, &fp);
    Some(!fp.is_zero(&common.constant_term(&fp)))
}

/// Whether `f` and `g` share a factor vanishing at the origin.
///
/// Over `Q`, a modular gcd that is a unit at the origin settles the
/// question (same divisibility argument as in [`reduced_check`]).
pub fn common_component_at_origin<F: Field>(f: &BiPoly<F::Elem>, g: &BiPoly<F::Elem>, k: &F) -> bool {
    if k.characteristic() == 0 {
        for p in CERT_PRIMES {
            if let (Some((fp, a)), Some((_, b))) = (modular_image(f, k, p), modular_image(g, k, p)) {
                if !fp.is_zero(&a.gcd(&b, &fp).constant_term(&fp)) {
                    return false;
                }
            }
        }
    }
    let d = f.gcd(g, k);
    !d.is_zero() && k.is_zero(&d.constant_term(k))
}
