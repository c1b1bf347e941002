use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Embedding, Field, FieldError, FieldResult, RootSplit, UniPoly};

/// Multiplicative tables are built for fields up to this size.
const TABLE_LIMIT: u64 = 1 << 20;
/// Packed elements must fit comfortably in a `u64`.
const MAX_ORDER: u128 = 1 << 62;
const DEFAULT_SEED: u64 = 0x5eed_c0ef;

/// An element of `F_{p^k}`, packed as the base-`p` integer of its
/// coefficient vector in the generator `g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) u64);

impl FqElem {
    pub fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FqInner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, low to high, length `k + 1` (only meaningful for `k > 1`).
    modulus: Vec<u64>,
    tables: Option<Tables>,
    seed: u64,
}

/// The finite field `F_{p^k}`.
#[derive(Clone)]
pub struct Fq {
    inner: Arc<FqInner>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{}", self.inner.p, self.inner.k)
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &o.inner)
            || (self.inner.p == o.inner.p
                && self.inner.k == o.inner.k
                && self.inner.modulus == o.inner.modulus)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> FieldResult<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Fq {
            inner: Arc::new(FqInner {
                p,
                k: 1,
                q: p,
                modulus: vec![0, 1],
                tables: None,
                seed: DEFAULT_SEED,
            }),
        })
    }

    /// `F_{p^k}` with a deterministically chosen modulus (primitive when the
    /// field is small enough for multiplication tables).
    pub fn new(p: u64, k: u32) -> FieldResult<Self> {
        Self::with_seed(p, k, DEFAULT_SEED)
    }

    pub fn with_seed(p: u64, k: u32, seed: u64) -> FieldResult<Self> {
        Fq::prime(p)?;
        let base = Self::build(p, 1, p, vec![0, 1], seed);
        if k <= 1 {
            return Ok(base);
        }
        let q = Self::checked_order(p, k)?;
        let want_primitive = q <= TABLE_LIMIT;
        let mut counter: u64 = 1;
        loop {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = counter;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            counter += 1;
            if m[0] == 0 || !is_irreducible_over_prime(&base, &m) {
                continue;
            }
            if want_primitive && !t_is_primitive(&base, &m, q) {
                continue;
            }
            return Ok(Self::build(p, k, q, m, seed));
        }
    }

    /// `F_p[g]/(modulus)` for a user-supplied monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> FieldResult<Self> {
        let base = Fq::prime(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(FieldError::ReducibleModulus(p));
        }
        let k = (m.len() - 1) as u32;
        if k == 1 {
            return Ok(base);
        }
        if !is_irreducible_over_prime(&base, &m) {
            return Err(FieldError::ReducibleModulus(p));
        }
        let q = Self::checked_order(p, k)?;
        Ok(Self::build(p, k, q, m, DEFAULT_SEED))
    }

    fn checked_order(p: u64, k: u32) -> FieldResult<u64> {
        let q = (p as u128).checked_pow(k).filter(|&q| q < MAX_ORDER);
        q.map(|q| q as u64).ok_or(FieldError::FieldTooLarge { p, k })
    }

    fn build(p: u64, k: u32, q: u64, modulus: Vec<u64>, seed: u64) -> Self {
        let mut f = Fq {
            inner: Arc::new(FqInner { p, k, q, modulus, tables: None, seed }),
        };
        if k > 1 && q <= TABLE_LIMIT {
            let tables = f.build_tables();
            Arc::get_mut(&mut f.inner).unwrap().tables = Some(tables);
        }
        f
    }

    fn build_tables(&self) -> Tables {
        let q = self.inner.q as usize;
        let g = self.find_generator();
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut cur = 1u64;
        for e in 0..q - 1 {
            exp[e] = cur as u32;
            exp[e + q - 1] = cur as u32;
            log[cur as usize] = e as u32;
            cur = self.slow_mul(cur, g);
        }
        Tables { exp, log }
    }

    fn find_generator(&self) -> u64 {
        let q = self.inner.q;
        let factors = prime_factors(q - 1);
        let t = self.inner.p; // digits [0, 1] -> the element g
        let is_gen = |a: u64| factors.iter().all(|r| self.slow_pow(a, (q - 1) / r) != 1);
        if is_gen(t) {
            return t;
        }
        (2..q).find(|&a| is_gen(a)).expect("multiplicative group is cyclic")
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    pub fn seed(&self) -> u64 {
        self.inner.seed
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The element with packed encoding `raw` (reduced into range).
    pub fn elem(&self, raw: u64) -> FqElem {
        FqElem(raw % self.inner.q)
    }

    /// Every element of the field (only sensible for small fields).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.inner.q).map(FqElem)
    }

    pub fn random(&self, rng: &mut impl Rng) -> FqElem {
        FqElem(rng.gen_range(0..self.inner.q))
    }

    fn digits(&self, mut a: u64) -> Vec<u64> {
        let p = self.inner.p;
        (0..self.inner.k)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn pack(&self, d: &[u64]) -> u64 {
        let p = self.inner.p;
        d.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        if self.inner.k == 1 {
            return a * b % self.inner.p;
        }
        let p = self.inner.p as u128;
        let k = self.inner.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        let m = &self.inner.modulus;
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let idx = i - k + j;
                prod[idx] = (prod[idx] + (p - c) * m[j] as u128) % p;
            }
            prod[i] = 0;
        }
        let d: Vec<u64> = prod[..k].iter().map(|&c| c as u64).collect();
        self.pack(&d)
    }

    fn slow_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.slow_mul(base, base);
            }
        }
        acc
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.inner.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// `a^(1/p)`, the inverse Frobenius.
    fn pth_root(&self, a: &FqElem) -> FqElem {
        let mut r = *a;
        for _ in 1..self.inner.k {
            r = self.pow(&r, self.inner.p);
        }
        r
    }

    fn q_big(&self) -> BigUint {
        BigUint::from(self.inner.q)
    }

    /// Squarefree decomposition of a monic polynomial.
    fn squarefree(&self, f: &UniPoly<FqElem>) -> Vec<(UniPoly<FqElem>, usize)> {
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = f.derivative(self);
        let mut c = f.gcd(&df, self);
        let mut w = f.div_exact(&c, self).unwrap();
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c, self);
            let z = w.div_exact(&y, self).unwrap();
            if z.degree().unwrap_or(0) > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y.clone();
            c = c.div_exact(&y, self).unwrap();
        }
        if c.degree().unwrap_or(0) > 0 {
            // c is a polynomial in t^p
            let p = self.inner.p as usize;
            let root: Vec<FqElem> = c
                .coeffs()
                .iter()
                .step_by(p)
                .map(|a| self.pth_root(a))
                .collect();
            let root = UniPoly::from_coeffs(self, root);
            for (g, m) in self.squarefree(&root) {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self, f: &UniPoly<FqElem>) -> Vec<(UniPoly<FqElem>, usize)> {
        let mut out = Vec::new();
        let t = UniPoly::t(self);
        let mut rest = f.clone();
        let mut h = t.clone();
        let q = self.q_big();
        let mut d = 1;
        while let Some(deg) = rest.degree() {
            if deg == 0 {
                break;
            }
            if 2 * d > deg {
                out.push((rest.clone(), deg));
                break;
            }
            h = h.pow_mod(&q, &rest, self);
            let g = h.sub(&t, self).gcd(&rest, self);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), d));
                rest = rest.div_exact(&g, self).unwrap();
                h = h.rem(&rest, self).unwrap();
            }
            d += 1;
        }
        out
    }

    /// Equal-degree splitting of a monic squarefree product of degree-`d` irreducibles.
    fn equal_degree(&self, f: &UniPoly<FqElem>, d: usize, salt: u64) -> Vec<UniPoly<FqElem>> {
        let n = f.degree().unwrap_or(0);
        if n <= d {
            return vec![f.clone()];
        }
        let mut rng = self.rng(salt ^ n as u64);
        let one = UniPoly::one(self);
        loop {
            let r = UniPoly::from_coeffs(self, (0..n).map(|_| self.random(&mut rng)).collect());
            if r.degree().unwrap_or(0) == 0 {
                continue;
            }
            let s = if self.inner.p == 2 {
                let mut acc = r.clone();
                let mut term = r.clone();
                for _ in 1..(self.inner.k as usize * d) {
                    term = term.mul_mod(&term, f, self);
                    acc = acc.add(&term, self);
                }
                acc
            } else {
                let e = (self.q_big().pow(d as u32) - BigUint::one()) >> 1;
                r.pow_mod(&e, f, self).sub(&one, self)
            };
            let g = s.gcd(f, self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let h = f.div_exact(&g, self).unwrap();
                let mut out = self.equal_degree(&g, d, salt.wrapping_add(1));
                out.extend(self.equal_degree(&h, d, salt.wrapping_add(2)));
                return out;
            }
        }
    }

    /// Roots of a polynomial that splits into linear factors over `self`.
    fn roots_of_split(&self, f: &UniPoly<FqElem>) -> FieldResult<Vec<(FqElem, usize)>> {
        let mut roots = Vec::new();
        for (g, m) in self.uni_factor(f)? {
            if g.degree() != Some(1) {
                continue;
            }
            roots.push((self.neg(&g.coeffs()[0]), m));
        }
        roots.sort();
        Ok(roots)
    }
}

fn is_irreducible_over_prime(base: &Fq, m: &[u64]) -> bool {
    let k = m.len() - 1;
    let f = UniPoly::from_coeffs(base, m.iter().map(|&c| FqElem(c)).collect());
    let t = UniPoly::t(base);
    let p = BigUint::from(base.p());
    let mut frob = vec![t.clone()];
    for _ in 0..k {
        let next = frob.last().unwrap().pow_mod(&p, &f, base);
        frob.push(next);
    }
    if frob[k] != t.rem(&f, base).unwrap() {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = frob[k / r as usize].sub(&t, base);
        h.gcd(&f, base).is_one(base)
    })
}

fn t_is_primitive(base: &Fq, m: &[u64], q: u64) -> bool {
    let f = UniPoly::from_coeffs(base, m.iter().map(|&c| FqElem(c)).collect());
    let t = UniPoly::t(base);
    prime_factors(q - 1).into_iter().all(|r| {
        !t.pow_mod(&BigUint::from((q - 1) / r), &f, base).is_one(base)
    })
}

impl Field for Fq {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn degree(&self) -> u32 {
        self.inner.k
    }

    fn zero(&self) -> FqElem {
        FqElem(0)
    }

    fn one(&self) -> FqElem {
        FqElem(1)
    }

    fn from_int(&self, n: &BigInt) -> FqElem {
        let p = BigInt::from(self.inner.p);
        FqElem(n.mod_floor(&p).to_u64().unwrap())
    }

    fn from_i64(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.inner.p as i64) as u64)
    }

    fn generator(&self) -> Option<FqElem> {
        (self.inner.k > 1).then_some(FqElem(self.inner.p))
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let i = &self.inner;
        if i.k == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= i.p { s - i.p } else { s });
        }
        if i.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        let (da, db) = (self.digits(a.0), self.digits(b.0));
        let d: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % i.p).collect();
        FqElem(self.pack(&d))
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        let i = &self.inner;
        if a.0 == 0 {
            return *a;
        }
        if i.k == 1 {
            return FqElem(i.p - a.0);
        }
        if i.p == 2 {
            return *a;
        }
        let d: Vec<u64> = self.digits(a.0).iter().map(|&x| (i.p - x) % i.p).collect();
        FqElem(self.pack(&d))
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let i = &self.inner;
        if i.k == 1 {
            return FqElem(a.0 * b.0 % i.p);
        }
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        match &i.tables {
            Some(t) => {
                let e = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FqElem(t.exp[e] as u64)
            }
            None => FqElem(self.slow_mul(a.0, b.0)),
        }
    }

    fn inv(&self, a: &FqElem) -> FieldResult<FqElem> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let i = &self.inner;
        if let Some(t) = &i.tables {
            let l = t.log[a.0 as usize] as usize;
            return Ok(FqElem(t.exp[(i.q as usize - 1 - l) % (i.q as usize - 1)] as u64));
        }
        Ok(self.pow(a, i.q - 2))
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    fn is_one(&self, a: &FqElem) -> bool {
        a.0 == 1
    }

    fn scale_int(&self, a: &FqElem, n: i64) -> FqElem {
        self.mul(a, &self.from_i64(n))
    }

    fn format_elem(&self, a: &FqElem) -> String {
        if self.inner.k == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a.0);
        let terms: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn uni_factor(&self, f: &UniPoly<FqElem>) -> FieldResult<Vec<(UniPoly<FqElem>, usize)>> {
        if f.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        let monic = f.monic(self);
        let mut out = Vec::new();
        for (sq, m) in self.squarefree(&monic) {
            for (part, d) in self.distinct_degree(&sq) {
                for g in self.equal_degree(&part, d, d as u64) {
                    out.push((g, m));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.degree(), a.0.coeffs().iter().map(|c| c.0).collect::<Vec<_>>(), a.1)
                .cmp(&(b.0.degree(), b.0.coeffs().iter().map(|c| c.0).collect::<Vec<_>>(), b.1))
        });
        Ok(out)
    }

    fn adjoin_splitting(&self, f: &UniPoly<FqElem>) -> FieldResult<RootSplit<Self>> {
        let factors = self.uni_factor(f)?;
        let k = self.inner.k as u64;
        let target_k = factors
            .iter()
            .map(|(g, _)| k * g.degree().unwrap() as u64)
            .fold(k, |acc, d| acc.lcm(&d));
        if target_k == k {
            let mut roots: Vec<_> = factors
                .iter()
                .map(|(g, m)| (self.neg(&g.coeffs()[0]), *m))
                .collect();
            roots.sort();
            return Ok(RootSplit { field: self.clone(), embedding: None, roots });
        }
        let target_k = u32::try_from(target_k).map_err(|_| FieldError::FieldTooLarge {
            p: self.inner.p,
            k: u32::MAX,
        })?;
        let target = Fq::with_seed(self.inner.p, target_k, self.inner.seed)?;
        let generator_image = if self.inner.k == 1 {
            None
        } else {
            let m = UniPoly::from_coeffs(
                &target,
                self.inner.modulus.iter().map(|&c| FqElem(c)).collect(),
            );
            let roots = target.roots_of_split(&m)?;
            Some(roots[0].0)
        };
        let emb = Embedding { source: self.clone(), target: target.clone(), generator_image };
        let mapped = f.map(&target, |c| emb.apply(c));
        let roots = target.roots_of_split(&mapped)?;
        debug_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), f.degree().unwrap());
        Ok(RootSplit { field: target, embedding: Some(emb), roots })
    }

    fn embed(&self, emb: &Embedding<Self>, a: &FqElem) -> FqElem {
        match &emb.generator_image {
            None => *a,
            Some(g) => {
                let d = emb.source.digits(a.0);
                d.iter()
                    .rev()
                    .fold(FqElem(0), |acc, &c| self.add(&self.mul(&acc, g), &FqElem(c)))
            }
        }
    }
}
