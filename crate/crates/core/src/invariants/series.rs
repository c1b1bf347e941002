//! Truncated power series in one variable `t`, stored as coefficient vectors
//! of a fixed length (the precision).

use crate::field::Field;
use crate::poly::BiPoly;

pub(crate) fn zero<F: Field>(k: &F, prec: usize) -> Vec<F::Elem> {
    vec![k.zero(); prec]
}

pub(crate) fn constant<F: Field>(k: &F, c: F::Elem, prec: usize) -> Vec<F::Elem> {
    let mut s = zero(k, prec);
    if prec > 0 {
        s[0] = c;
    }
    s
}

pub(crate) fn add<F: Field>(a: &[F::Elem], b: &[F::Elem], k: &F) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

pub(crate) fn sub<F: Field>(a: &[F::Elem], b: &[F::Elem], k: &F) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
}

pub(crate) fn mul<F: Field>(a: &[F::Elem], b: &[F::Elem], k: &F) -> Vec<F::Elem> {
    let n = a.len().min(b.len());
    let mut out = zero(k, n);
    let lo_a = a.iter().position(|c| !k.is_zero(c)).unwrap_or(n);
    let lo_b = b.iter().position(|c| !k.is_zero(c)).unwrap_or(n);
    for i in lo_a..n {
        if k.is_zero(&a[i]) {
            continue;
        }
        for j in lo_b..n - i {
            if !k.is_zero(&b[j]) {
                out[i + j] = k.add(&out[i + j], &k.mul(&a[i], &b[j]));
            }
        }
    }
    out
}

pub(crate) fn pow<F: Field>(a: &[F::Elem], mut e: u32, k: &F) -> Vec<F::Elem> {
    let mut acc = constant(k, k.one(), a.len());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base, k);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, k);
        }
    }
    acc
}

/// Multiply by `t^s`.
pub(crate) fn shift<F: Field>(a: &[F::Elem], s: usize, k: &F) -> Vec<F::Elem> {
    let n = a.len();
    let mut out = zero(k, n);
    for i in 0..n.saturating_sub(s) {
        out[i + s] = a[i].clone();
    }
    out
}

/// Inverse of a series with invertible constant term.
pub(crate) fn inverse<F: Field>(a: &[F::Elem], k: &F) -> Vec<F::Elem> {
    let n = a.len();
    let c0 = k.inv(&a[0]).expect("unit series");
    let mut out = zero(k, n);
    if n == 0 {
        return out;
    }
    out[0] = c0.clone();
    for i in 1..n {
        let mut s = k.zero();
        for j in 1..=i {
            if !k.is_zero(&a[j]) {
                s = k.add(&s, &k.mul(&a[j], &out[i - j]));
            }
        }
        out[i] = k.neg(&k.mul(&s, &c0));
    }
    out
}

pub(crate) fn order<F: Field>(a: &[F::Elem], k: &F) -> Option<usize> {
    a.iter().position(|c| !k.is_zero(c))
}

/// `f(φ, ψ)` to the common precision of `φ` and `ψ`.
pub(crate) fn eval_bipoly<F: Field>(f: &BiPoly<F::Elem>, phi: &[F::Elem], psi: &[F::Elem], k: &F) -> Vec<F::Elem> {
    let n = phi.len().min(psi.len());
    let rows = f.to_y_coeffs(k);
    let mut acc = zero(k, n);
    for row in rows.iter().rev() {
        acc = mul(&acc, psi, k);
        // Horner in φ for the row.
        let mut r = zero(k, n);
        for c in row.coeffs().iter().rev() {
            r = mul(&r, phi, k);
            r[0] = k.add(&r[0], c);
        }
        acc = add(&acc, &r, k);
    }
    acc
}

/// The series `h` with `h(0) = 0` and `c(t, h(t)) = 0`, assuming
/// `c(0, 0) = 0` and `∂c/∂Y (0, 0) ≠ 0`.
pub(crate) fn implicit_root<F: Field>(c: &BiPoly<F::Elem>, prec: usize, k: &F) -> Vec<F::Elem> {
    let t = {
        let mut t = zero(k, prec);
        if prec > 1 {
            t[1] = k.one();
        }
        t
    };
    let (_, cy) = c.partials(k);
    let mut h = zero(k, prec);
    let mut cur = 1;
    while cur < prec {
        cur = (2 * cur).min(prec);
        let (tt, hh) = (&t[..cur], &h[..cur]);
        let r = eval_bipoly(c, tt, hh, k);
        let d = eval_bipoly(&cy, tt, hh, k);
        let step = mul(&r, &inverse(&d, k), k);
        let mut next = sub(hh, &step, k);
        next.resize(prec, k.zero());
        h = next;
    }
    h
}
