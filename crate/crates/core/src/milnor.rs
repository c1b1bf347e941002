//! Milnor numbers via local intersection of the partials, Newton
//! non-degeneracy, polar curves and the divisibility conjecture checker.

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Fq, UniPoly};
use crate::invariants::{intersection_in_tree, series, Intersection};
use crate::newton::{Face, NewtonPolygon};
use crate::poly::{common_component_at_origin, parse_poly, reduced_check, BiPoly, PolyError};
use crate::tree::{build_tree, build_tree_parts, TreeError, RECURSION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("Milnor number changed from {at_d} to {at_d2} when raising the truncation degree")]
    TruncationUnstable { at_d: Intersection, at_d2: Intersection },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Local intersection number at the origin of the curves `g = 0` and `h = 0`.
///
/// Fulton's reduction, done locally: with `r = ord g(x, 0) ≤ s = ord h(x, 0)`,
/// replace `h` by `h - g·q(x)` where the power series `q` makes
/// `y | h - g q`; then split off `i(y, g) = r`.
///
/// Everything is computed modulo `m^N`. If the intersection is `n < N` then
/// `m^{n+1} ⊆ m·(g, h)`, so truncation does not change the ideal and an
/// answer below `N` is exact; otherwise `N` doubles. Large answers are rare,
/// so after two rounds a gcd test rules out a common component; from then on
/// Bézout (`deg g · deg h`) bounds the number of rounds.
pub fn local_intersection<F: Field>(g: &BiPoly<F::Elem>, h: &BiPoly<F::Elem>, k: &F) -> Intersection {
    if !k.is_zero(&g.constant_term(k)) || !k.is_zero(&h.constant_term(k)) {
        return Intersection::Finite(0);
    }
    if g.is_zero() || h.is_zero() {
        return Intersection::Infinite;
    }
    let bezout = g.total_degree().unwrap() as u128 * h.total_degree().unwrap() as u128;
    let mut n: u128 = 32;
    for round in 0.. {
        if let Some(i) = truncated_intersection(g, h, n as u32, k) {
            return Intersection::Finite(i);
        }
        if n > bezout || (round == 1 && common_component_at_origin(g, h, k)) {
            return Intersection::Infinite;
        }
        n *= 2;
    }
    unreachable!()
}

/// The intersection number if it is below `n`, computed modulo `m^n`.
fn truncated_intersection<F: Field>(g: &BiPoly<F::Elem>, h: &BiPoly<F::Elem>, n: u32, k: &F) -> Option<u128> {
    let top = n - 1;
    let (mut f, mut g) = (g.truncate(top), h.truncate(top));
    let mut acc: u128 = 0;
    loop {
        if acc >= n as u128 {
            return None;
        }
        if !k.is_zero(&f.constant_term(k)) || !k.is_zero(&g.constant_term(k)) {
            return Some(acc);
        }
        let (mut a, mut b) = (f.restrict_y0(k), g.restrict_y0(k));
        if a.is_zero() && b.is_zero() {
            return None;
        }
        if b.is_zero() {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut a, &mut b);
        }
        if a.is_zero() {
            acc += b.order(k).unwrap() as u128;
            f = f.div_monomial(0, 1).unwrap();
            continue;
        }
        let (mut r, mut s) = (a.order(k).unwrap(), b.order(k).unwrap());
        if r > s {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut r, &mut s);
        }
        // q = x^{s-r} (b / x^s) / (a / x^r) to the precision that matters.
        let prec = (n as usize).saturating_sub(s);
        let unit_part = |c: &[F::Elem]| {
            let mut v: Vec<F::Elem> = c.iter().take(prec).cloned().collect();
            v.resize(prec, k.zero());
            v
        };
        let (ua, ub) = (unit_part(&a.coeffs()[r..]), unit_part(&b.coeffs()[s..]));
        let quot = series::mul(&ub, &series::inverse(&ua, k), k);
        let q = BiPoly::from_terms(k, quot.into_iter().enumerate().map(|(i, c)| (((s - r + i) as u32, 0), c)));
        g = g.sub(&f.mul_bounded(&q, k, Some(top)), k);
    }
}

/// `μ(f) = i_0(f_x, f_y)`, optionally for `u·f` truncated at total degree `d`
/// (and checked again at `d + 2`).
pub fn milnor_number<F: Field>(
    f: &BiPoly<F::Elem>,
    unit: Option<(&BiPoly<F::Elem>, u32)>,
    k: &F,
) -> Result<Intersection, MilnorError> {
    let mu = |g: &BiPoly<F::Elem>| {
        let (gx, gy) = g.partials(k);
        local_intersection(&gx, &gy, k)
    };
    match unit {
        None => Ok(mu(f)),
        Some((u, d)) => {
            let at_d = mu(&f.mul_unit_truncated(u, d, k)?);
            let at_d2 = mu(&f.mul_unit_truncated(u, d + 2, k)?);
            if at_d != at_d2 {
                return Err(MilnorError::TruncationUnstable { at_d, at_d2 });
            }
            Ok(at_d)
        }
    }
}

/// Truncation degree used with a unit: `2μ̄ + 4`.
pub fn default_truncation(mu_bar: i64) -> u32 {
    (2 * mu_bar + 4).max(4) as u32
}

/// Non-degeneracy of `f` along the compact face `face` of its polygon.
///
/// On the torus `x f_x` and `y f_y` restricted to the face become, up to a
/// monomial, polynomials `A(t)`, `B(t)` in `t = x^q / y^p`; a common torus
/// zero is exactly a common nonzero root.
pub fn is_nd_face<F: Field>(f: &BiPoly<F::Elem>, face: &Face, k: &F) -> bool {
    let (p, q) = (face.p, face.q);
    let on: Vec<((u32, u32), F::Elem)> = f
        .terms()
        .filter(|((i, j), _)| p * i + q * j == face.n)
        .map(|(e, c)| (e, c.clone()))
        .collect();
    let a0 = on.iter().map(|(e, _)| e.0).min().unwrap_or(0);
    let m = on.iter().map(|(e, _)| (e.0 - a0) / q).max().unwrap_or(0) as usize;
    let mut ca = vec![k.zero(); m + 1];
    let mut cb = vec![k.zero(); m + 1];
    for ((i, j), c) in &on {
        let idx = ((i - a0) / q) as usize;
        ca[idx] = k.scale_int(c, *i as i64);
        cb[idx] = k.scale_int(c, *j as i64);
    }
    let g = UniPoly::from_coeffs(k, ca).gcd(&UniPoly::from_coeffs(k, cb), k);
    // Only roots at t = 0 are allowed, i.e. g must be a monomial.
    g.coeffs().iter().filter(|c| !k.is_zero(c)).count() <= 1 && !g.is_zero()
}

/// Non-degeneracy at a vertex `c x^i y^j`: the partials vanish on the
/// torus only if both exponents vanish in the field.
pub fn is_nd_vertex<F: Field>(vertex: (u32, u32), k: &F) -> bool {
    let zero = |n: u32| k.is_zero(&k.from_i64(n as i64));
    !(zero(vertex.0) && zero(vertex.1))
}

/// Newton non-degeneracy along every face and vertex of the polygon.
pub fn is_nnd<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> bool {
    let Some(poly) = NewtonPolygon::from_points(f.support()) else {
        return false;
    };
    let verts = poly.vertices.iter().map(|v| (v.0 + poly.i0, v.1 + poly.j0));
    verts.into_iter().all(|v| is_nd_vertex(v, k)) && poly.faces.iter().all(|face| is_nd_face(f, face, k))
}

/// Both sides of `i(f, P_l(f)) = -M + i(f, l)` for `l = a x + b y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarCheck {
    pub lhs: Intersection,
    pub rhs: Option<i128>,
    pub i_f_l: Intersection,
    /// `i(f_i, l) ≢ 0 mod p` for every branch.
    pub hypothesis: bool,
    /// `None` when the hypothesis fails and the comparison is skipped.
    pub holds: Option<bool>,
}

pub fn polar_intersection<F: Field>(
    f: &BiPoly<F::Elem>,
    a: &F::Elem,
    b: &F::Elem,
    k: &F,
) -> Result<PolarCheck, MilnorError> {
    let l = BiPoly::from_terms(k, [((1, 0), a.clone()), ((0, 1), b.clone())]);
    let (fx, fy) = f.partials(k);
    let polar = fx.scale(b, k).sub(&fy.scale(a, k), k);
    let lhs = local_intersection(f, &polar, k);
    let m = build_tree(f, k)?.tree.multiplicity();
    let both = build_tree_parts(&[f.clone(), l.clone()], &[], k, RECURSION_CAP)?;
    let p = k.characteristic() as u128;
    let l_arrow: Vec<usize> = both.tree.branch_arrows().filter(|n| n.label == Some(1)).map(|n| n.id).collect();
    let per_branch: Vec<u128> = both
        .tree
        .branch_arrows()
        .filter(|n| n.label == Some(0))
        .map(|n| l_arrow.iter().map(|&la| both.tree.rho(n.id, la).unwrap()).sum())
        .collect();
    let hypothesis = per_branch.iter().all(|&i| p == 0 || i % p != 0);
    let i_f_l = Intersection::Finite(intersection_in_tree(&both.tree, 0, 1));
    let rhs = match i_f_l {
        Intersection::Finite(n) => Some(n as i128 - m as i128),
        Intersection::Infinite => None,
    };
    let holds = hypothesis.then(|| match (lhs, rhs) {
        (Intersection::Finite(x), Some(y)) => x as i128 == y,
        _ => false,
    });
    Ok(PolarCheck { lhs, rhs, i_f_l, hypothesis, holds })
}

/// One prime's worth of evidence for the divisibility conjecture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjReport {
    pub prime: u64,
    /// Set when the reduction mod `p` could not be examined.
    pub skipped: Option<String>,
    pub abs_m: u64,
    pub n_v: Vec<u64>,
    /// `p` divides some `N_v`.
    pub divisors: bool,
    pub mu: Option<Intersection>,
    pub mu_bar: i64,
    pub equal: bool,
    /// `equal` holds exactly when `p` divides no `N_v`.
    pub conjecture_consistent: bool,
    /// `p > -M + ord f`, where `μ = μ̄` is known.
    pub shortcut_applied: bool,
}

impl ConjReport {
    fn skipped(prime: u64, why: String) -> Self {
        ConjReport {
            prime,
            skipped: Some(why),
            abs_m: 0,
            n_v: Vec::new(),
            divisors: false,
            mu: None,
            mu_bar: 0,
            equal: false,
            conjecture_consistent: false,
            shortcut_applied: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConjOptions {
    /// Unit to multiply by before computing `μ`.
    pub unit: Option<String>,
    /// Truncation degree; defaults to `2μ̄ + 4`.
    pub truncation: Option<u32>,
    /// Compute `μ` even when the bound already gives it.
    pub verify_shortcut: bool,
}

/// Evaluate the conjecture for the integer polynomial `text` at each prime.
pub fn check_conjecture(text: &str, primes: &[u64], opts: &ConjOptions) -> Vec<ConjReport> {
    primes.iter().map(|&p| check_prime(text, p, opts)).collect()
}

fn check_prime(text: &str, p: u64, opts: &ConjOptions) -> ConjReport {
    let k = match Fq::prime(p) {
        Ok(k) => k,
        Err(e) => return ConjReport::skipped(p, e.to_string()),
    };
    let f = match parse_poly(text, &k) {
        Ok(f) => f,
        Err(e) => return ConjReport::skipped(p, e.to_string()),
    };
    if f.is_zero() || !k.is_zero(&f.constant_term(&k)) || !reduced_check(&f, &k).reduced {
        return ConjReport::skipped(p, "reduction is not a reduced curve through the origin".into());
    }
    let tree = match build_tree(&f, &k) {
        Ok(b) => b.tree,
        Err(e) => return ConjReport::skipped(p, e.to_string()),
    };
    let m = tree.multiplicity();
    let n_v = tree.vertex_report();
    let divisors = n_v.iter().any(|n| n % p == 0);
    let mu_bar = 1 - m;
    let ord = f.ord().unwrap_or(0) as i64;
    let shortcut_applied = (p as i64) > -m + ord && opts.unit.is_none();
    let mu = if shortcut_applied && !opts.verify_shortcut {
        Ok(Intersection::Finite(mu_bar as u128))
    } else {
        let unit = match &opts.unit {
            None => None,
            Some(u) => match parse_poly(u, &k) {
                Ok(u) => Some(u),
                Err(e) => return ConjReport::skipped(p, e.to_string()),
            },
        };
        let d = opts.truncation.unwrap_or_else(|| default_truncation(mu_bar));
        milnor_number(&f, unit.as_ref().map(|u| (u, d)), &k)
    };
    let mu = match mu {
        Ok(mu) => mu,
        Err(e) => return ConjReport::skipped(p, e.to_string()),
    };
    let equal = mu == Intersection::Finite(mu_bar as u128);
    ConjReport {
        prime: p,
        skipped: None,
        abs_m: m.unsigned_abs(),
        n_v,
        divisors,
        mu: Some(mu),
        mu_bar,
        equal,
        conjecture_consistent: equal != divisors,
        shortcut_applied,
    }
}
