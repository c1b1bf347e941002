//! Exact coefficient fields.
//!
//! Two implementations of [`Field`] are provided: [`Fq`], the finite field
//! `F_{p^k}` with univariate factorization and on-demand extension, and
//! [`Rationals`], used for characteristic-zero basics. Algebraic closure is
//! approximated lazily: whenever a face polynomial has roots outside the
//! current field, [`Field::adjoin_splitting`] produces a larger field together
//! with an embedding of the old one.

mod fq;
mod rational;
mod unipoly;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use thiserror::Error;

pub use fq::{Fq, FqElem};
pub use rational::Rationals;
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("field F_{p}^{k} is too large for the packed element encoding")]
    FieldTooLarge { p: u64, k: u32 },
    #[error(
        "polynomial of degree {degree} has no rational splitting; \
         emulate characteristic zero with a large prime instead"
    )]
    Char0IrreducibleRemainder { degree: usize },
    #[error("root adjunction is not supported in characteristic zero")]
    Char0Unsupported,
    #[error("integer too large for rational root search")]
    RootSearchOverflow,
}

pub type FieldResult<T> = Result<T, FieldError>;

/// An exact field with the operations needed by the curve algorithms.
///
/// Elements are plain values; every operation goes through the field
/// context so that the same element type can serve a whole tower.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    /// 0 for the rationals, otherwise the prime `p`.
    fn characteristic(&self) -> u64;
    /// Degree over the prime field (1 for the rationals).
    fn degree(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }
    /// The generator symbol `g` of an extension, if any.
    fn generator(&self) -> Option<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> FieldResult<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> FieldResult<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiply by the integer `n` viewed in the prime field.
    fn scale_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }

    /// Render an element; extension elements are polynomials in `g`.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Factor a nonzero polynomial into monic irreducibles with multiplicity.
    fn uni_factor(&self, f: &UniPoly<Self::Elem>) -> FieldResult<Vec<(UniPoly<Self::Elem>, usize)>>;

    /// Find a field containing all roots of `f`, and those roots.
    fn adjoin_splitting(&self, f: &UniPoly<Self::Elem>) -> FieldResult<RootSplit<Self>>;

    /// Map an element of `emb.source` into `self` (the embedding target).
    fn embed(&self, emb: &Embedding<Self>, a: &Self::Elem) -> Self::Elem;

    /// Image of `a` in `F_p` when the field has a reduction map there
    /// (the rationals with `p` not dividing the denominator).
    fn reduce_mod(&self, _a: &Self::Elem, _p: u64) -> Option<u64> {
        None
    }
}

/// A field homomorphism `source -> target`, determined by the image of the
/// source generator.
#[derive(Debug, Clone)]
pub struct Embedding<F: Field> {
    pub source: F,
    pub target: F,
    pub generator_image: Option<F::Elem>,
}

impl<F: Field> Embedding<F> {
    pub fn apply(&self, a: &F::Elem) -> F::Elem {
        self.target.embed(self, a)
    }
}

/// Result of [`Field::adjoin_splitting`].
#[derive(Debug, Clone)]
pub struct RootSplit<F: Field> {
    pub field: F,
    /// `None` when no extension was needed.
    pub embedding: Option<Embedding<F>>,
    /// Roots in `field` with multiplicities summing to `deg f`.
    pub roots: Vec<(F::Elem, usize)>,
}
