use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Embedding, Field, FieldError, FieldResult, RootSplit, UniPoly};

/// Largest integer whose divisors are enumerated in the rational root search.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// The field of rational numbers.
///
/// Only splitting over `Q` itself is supported: faces whose polynomials have
/// irrational roots are rejected, and callers should fall back to a large
/// prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

fn divisors(n: &BigInt) -> FieldResult<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT).ok_or(FieldError::RootSearchOverflow)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl Rationals {
    /// Rational roots with multiplicity, and the cofactor without rational roots.
    pub fn rational_roots(
        &self,
        f: &UniPoly<BigRational>,
    ) -> FieldResult<(Vec<(BigRational, usize)>, UniPoly<BigRational>)> {
        if f.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        let mut rest = f.monic(self);
        let mut roots = Vec::new();
        let zero_mult = rest.order(self).unwrap();
        if zero_mult > 0 {
            roots.push((BigRational::zero(), zero_mult));
            rest = UniPoly::from_coeffs(self, rest.coeffs()[zero_mult..].to_vec());
        }
        if rest.degree().unwrap() == 0 {
            return Ok((roots, rest));
        }
        // integer polynomial with the same roots
        let denom = rest
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rest.coeffs().iter().map(|c| (c * &denom).to_integer()).collect();
        let nums = divisors(&ints[0])?;
        let dens = divisors(ints.last().unwrap())?;
        let mut cands: Vec<BigRational> = Vec::new();
        for a in &nums {
            for b in &dens {
                for s in [a.clone(), -a.clone()] {
                    let r = BigRational::new(s, b.clone());
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        cands.sort();
        for r in cands {
            let lin = UniPoly::linear(self, &r);
            let mut m = 0;
            while rest.degree().unwrap_or(0) > 0 && self.is_zero(&rest.eval(&r, self)) {
                rest = rest.div_exact(&lin, self)?;
                m += 1;
            }
            if m > 0 {
                roots.push((r, m));
            }
        }
        Ok((roots, rest))
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn degree(&self) -> u32 {
        1
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn generator(&self) -> Option<BigRational> {
        None
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> FieldResult<BigRational> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }

    /// Linear factors are found exactly; a leftover of degree at most 3 has no
    /// rational root and is therefore irreducible. Larger leftovers are
    /// rejected because their factorization is not attempted.
    fn uni_factor(
        &self,
        f: &UniPoly<BigRational>,
    ) -> FieldResult<Vec<(UniPoly<BigRational>, usize)>> {
        let (roots, rest) = self.rational_roots(f)?;
        let mut out: Vec<_> = roots
            .into_iter()
            .map(|(r, m)| (UniPoly::linear(self, &r), m))
            .collect();
        match rest.degree().unwrap() {
            0 => {}
            d if d <= 3 => out.push((rest, 1)),
            d => return Err(FieldError::Char0IrreducibleRemainder { degree: d }),
        }
        Ok(out)
    }

    fn adjoin_splitting(&self, f: &UniPoly<BigRational>) -> FieldResult<RootSplit<Self>> {
        let (roots, rest) = self.rational_roots(f)?;
        match rest.degree().unwrap() {
            0 => Ok(RootSplit { field: *self, embedding: None, roots }),
            d => Err(FieldError::Char0IrreducibleRemainder { degree: d }),
        }
    }

    fn reduce_mod(&self, a: &BigRational, p: u64) -> Option<u64> {
        let m = BigInt::from(p);
        let den = (a.denom() % &m).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = a.numer().mod_floor(&m).to_u64()?;
        let inv = BigInt::from(den).modpow(&BigInt::from(p - 2), &m).to_u64()?;
        Some(((num as u128 * inv as u128) % p as u128) as u64)
    }

    fn embed(&self, _emb: &Embedding<Self>, a: &BigRational) -> BigRational {
        a.clone()
    }
}
