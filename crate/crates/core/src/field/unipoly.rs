use num_bigint::BigUint;

use super::{Field, FieldError, FieldResult};

/// Dense univariate polynomial, coefficients stored low to high.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UniPoly<E> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(k: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, c: E) -> Self {
        Self::from_coeffs(k, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self::constant(k, k.one())
    }

    /// `c * t^d`.
    pub fn monomial<F: Field<Elem = E>>(k: &F, c: E, d: usize) -> Self {
        if k.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![k.zero(); d + 1];
        coeffs[d] = c;
        UniPoly { coeffs }
    }

    /// The polynomial `t`.
    pub fn t<F: Field<Elem = E>>(k: &F) -> Self {
        Self::monomial(k, k.one(), 1)
    }

    /// `t - c`.
    pub fn linear<F: Field<Elem = E>>(k: &F, c: &E) -> Self {
        UniPoly { coeffs: vec![k.neg(c), k.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_one<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.coeffs.len() == 1 && k.is_one(&self.coeffs[0])
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn order<F: Field<Elem = E>>(&self, k: &F) -> Option<usize> {
        self.coeffs.iter().position(|c| !k.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| k.add(&self.coeff(k, i), &o.coeff(k, i)))
            .collect();
        Self::from_coeffs(k, v)
    }

    pub fn sub<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| k.sub(&self.coeff(k, i), &o.coeff(k, i)))
            .collect();
        Self::from_coeffs(k, v)
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, k: &F) -> Self {
        Self::from_coeffs(k, self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![k.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = k.add(&v[i + j], &k.mul(a, b));
            }
        }
        Self::from_coeffs(k, v)
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: usize, k: &F) -> Self {
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

    pub fn divrem<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> FieldResult<(Self, Self)> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let inv_lead = k.inv(d.lead().unwrap())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = k.mul(&r[i], &inv_lead);
            if k.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = k.sub(&r[idx], &k.mul(&c, dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(k, q), Self::from_coeffs(k, r)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> FieldResult<Self> {
        Ok(self.divrem(d, k)?.1)
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    pub fn div_exact<F: Field<Elem = E>>(&self, d: &Self, k: &F) -> FieldResult<Self> {
        let (q, r) = self.divrem(d, k)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = k.inv(l).expect("nonzero leading coefficient");
                self.scale(&inv, k)
            }
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, o: &Self, k: &F) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, k).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let v = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| k.scale_int(c, (i + 1) as i64))
            .collect();
        Self::from_coeffs(k, v)
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, k: &F) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    pub fn mul_mod<F: Field<Elem = E>>(&self, o: &Self, m: &Self, k: &F) -> Self {
        self.mul(o, k).rem(m, k).expect("nonzero modulus")
    }

    /// `self^e mod m` for a big exponent.
    pub fn pow_mod<F: Field<Elem = E>>(&self, e: &BigUint, m: &Self, k: &F) -> Self {
        let mut acc = Self::one(k).rem(m, k).expect("nonzero modulus");
        let base = self.rem(m, k).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m, k);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m, k);
            }
        }
        acc
    }

    /// Apply a coefficient map (used for field embeddings).
    pub fn map<F: Field<Elem = E>>(&self, k: &F, f: impl Fn(&E) -> E) -> Self {
        Self::from_coeffs(k, self.coeffs.iter().map(f).collect())
    }
}
