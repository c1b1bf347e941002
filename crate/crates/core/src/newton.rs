//! Newton polygons and face polynomials.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Embedding, Field, FieldError, UniPoly};
use crate::poly::{BiPoly, Exp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial does not vanish at the origin")]
    UnitInput,
    #[error("polynomial is not reduced at the origin")]
    NotReduced,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A compact face on the line `pX + qY = N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Face {
    pub p: u32,
    pub q: u32,
    #[serde(rename = "N")]
    pub n: u32,
    /// Upper-left endpoint.
    #[serde(skip)]
    pub top: Exp,
    /// Lower-right endpoint.
    #[serde(skip)]
    pub bottom: Exp,
}

impl Face {
    /// Number of lattice segments, i.e. the degree of the face polynomial in `t`.
    pub fn length(&self) -> u32 {
        (self.bottom.0 - self.top.0) / self.q
    }
}

/// Newton polygon of `f = x^{i0} y^{j0} g`.
///
/// `vertices` are those of `g`, from the `Y` axis down to the `X` axis;
/// face levels `N` are measured on `f` itself, so they already include the
/// contribution `p i0 + q j0` of the coordinate factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub i0: u32,
    pub j0: u32,
    pub vertices: Vec<Exp>,
    pub faces: Vec<Face>,
}

impl NewtonPolygon {
    /// Polygon of the region spanned by `points + R_{>=0}^2`.
    pub fn from_points(points: impl IntoIterator<Item = Exp>) -> Option<Self> {
        let pts: Vec<Exp> = points.into_iter().collect();
        let i0 = pts.iter().map(|e| e.0).min()?;
        let j0 = pts.iter().map(|e| e.1).min()?;
        let stripped: Vec<Exp> = pts.iter().map(|&(i, j)| (i - i0, j - j0)).collect();
        let x_end = stripped.iter().filter(|e| e.1 == 0).map(|e| e.0).min().unwrap();
        let mut lowest: std::collections::BTreeMap<u32, u32> = Default::default();
        for &(i, j) in &stripped {
            if i <= x_end {
                let v = lowest.entry(i).or_insert(j);
                *v = (*v).min(j);
            }
        }
        let mut hull: Vec<Exp> = Vec::new();
        for (i, j) in lowest {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 as i64 - a.0 as i64) * (j as i64 - a.1 as i64)
                    - (b.1 as i64 - a.1 as i64) * (i as i64 - a.0 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((i, j));
        }
        let faces = hull
            .windows(2)
            .map(|w| {
                let ((x1, y1), (x2, y2)) = (w[0], w[1]);
                let (dx, dy) = (x2 - x1, y1 - y2);
                let g = dx.gcd(&dy);
                let (q, p) = (dx / g, dy / g);
                Face {
                    p,
                    q,
                    n: p * (x1 + i0) + q * (y1 + j0),
                    top: (x1 + i0, y1 + j0),
                    bottom: (x2 + i0, y2 + j0),
                }
            })
            .collect();
        Some(NewtonPolygon { i0, j0, vertices: hull, faces })
    }

    /// Height of the stripped polygon on the `Y` axis.
    pub fn y_extent(&self) -> u32 {
        self.vertices.first().map_or(0, |v| v.1)
    }

    /// Width of the stripped polygon on the `X` axis.
    pub fn x_extent(&self) -> u32 {
        self.vertices.last().map_or(0, |v| v.0)
    }
}

/// Newton polygon of a polynomial vanishing at the origin.
///
/// Only the cheap part of reducedness is checked here (`x^2 ∤ f`, `y^2 ∤ f`);
/// see [`crate::poly::reduced_check`] for the full test.
pub fn newton_polygon<E>(f: &BiPoly<E>) -> Result<NewtonPolygon, NewtonError>
where
    E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug,
{
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if f.get((0, 0)).is_some() {
        return Err(NewtonError::UnitInput);
    }
    let poly = NewtonPolygon::from_points(f.support()).unwrap();
    if poly.i0 > 1 || poly.j0 > 1 {
        return Err(NewtonError::NotReduced);
    }
    Ok(poly)
}

/// The part of `f` of minimal weight for `pX + qY`, as a polynomial in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedInitial<E> {
    /// Minimal weight `N`.
    pub n: u32,
    /// `(a, b)` such that the initial form is `x^a y^b P(x^q, y^p)`.
    pub corner: Exp,
    /// `P(t) = sum c_k t^k` where `c_k` is the coefficient of `x^{a+qk} y^{b+p(m-k)}`.
    pub poly: UniPoly<E>,
}

/// Initial form of `f` with respect to the weight `(p, q)`.
pub fn weighted_initial<F: Field>(f: &BiPoly<F::Elem>, p: u32, q: u32, k: &F) -> WeightedInitial<F::Elem> {
    let n = f.support().map(|(i, j)| p * i + q * j).min().expect("nonzero polynomial");
    let on: Vec<(Exp, &F::Elem)> = f.terms().filter(|((i, j), _)| p * i + q * j == n).collect();
    let a = on.iter().map(|(e, _)| e.0).min().unwrap();
    let b = on.iter().map(|(e, _)| e.1).min().unwrap();
    let m = on
        .iter()
        .map(|(e, _)| (e.0 - a) / q.max(1))
        .max()
        .unwrap() as usize;
    let mut c = vec![k.zero(); m + 1];
    for ((i, _), v) in on {
        let idx = if q == 0 { 0 } else { ((i - a) / q) as usize };
        c[idx] = v.clone();
    }
    WeightedInitial { n, corner: (a, b), poly: UniPoly::from_coeffs(k, c) }
}

/// A face polynomial split as `c x^a y^b prod (x^q - mu_i y^p)^{nu_i}`.
#[derive(Debug, Clone)]
pub struct FaceFactorization<F: Field> {
    pub face: Face,
    pub a: u32,
    pub b: u32,
    pub roots: Vec<(F::Elem, usize)>,
    /// Field containing the roots.
    pub field: F,
    /// Embedding into `field` when an extension was needed.
    pub embedding: Option<Embedding<F>>,
}

impl<F: Field> FaceFactorization<F> {
    /// `N = ap + bq + pq sum nu_i`.
    pub fn level(&self) -> u32 {
        let s: usize = self.roots.iter().map(|r| r.1).sum();
        self.a * self.face.p + self.b * self.face.q + self.face.p * self.face.q * s as u32
    }

    /// Expand the factored form (without the scalar) in `field`.
    pub fn expand(&self) -> BiPoly<F::Elem> {
        let k = &self.field;
        let (p, q) = (self.face.p, self.face.q);
        let mut acc = BiPoly::monomial(k, k.one(), self.a, self.b);
        for (mu, nu) in &self.roots {
            let lin = BiPoly::monomial(k, k.one(), q, 0).sub(&BiPoly::monomial(k, mu.clone(), 0, p), k);
            acc = acc.mul(&lin.pow(*nu as u32, k), k);
        }
        acc
    }
}

/// Factor the face polynomial of `face`, extending the field if needed.
pub fn face_factorization<F: Field>(
    f: &BiPoly<F::Elem>,
    face: &Face,
    k: &F,
) -> Result<FaceFactorization<F>, NewtonError> {
    let init = weighted_initial(f, face.p, face.q, k);
    debug_assert_eq!(init.n, face.n);
    let split = k.adjoin_splitting(&init.poly)?;
    Ok(FaceFactorization {
        face: *face,
        a: init.corner.0,
        b: init.corner.1,
        roots: split.roots,
        field: split.field,
        embedding: split.embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::parse_poly;

    pub const EX1: &str = "(x^2-y^3)^4 - 2*(x^2-y^3)^2*x*y^11 - y^19*(1-y^3)*(x^2-y^3) + y^25";
    pub const EX2: &str = "-x^2*y^4*(x^2-y^3)^2 + x^11 + y^14 + x*y^13";

    fn pq(poly: &NewtonPolygon) -> Vec<(u32, u32, u32)> {
        poly.faces.iter().map(|f| (f.p, f.q, f.n)).collect()
    }

    #[test]
    fn second_example_polygon() {
        let k = Fq::prime(3).unwrap();
        let poly = newton_polygon(&parse_poly(EX2, &k).unwrap()).unwrap();
        assert_eq!(poly.vertices, vec![(0, 14), (2, 10), (6, 4), (11, 0)]);
        assert_eq!(pq(&poly), vec![(2, 1, 14), (3, 2, 26), (4, 5, 44)]);
    }

    #[test]
    fn first_example_polygon() {
        let k = Fq::prime(7).unwrap();
        let poly = newton_polygon(&parse_poly(EX1, &k).unwrap()).unwrap();
        assert_eq!(poly.vertices, vec![(0, 12), (8, 0)]);
        assert_eq!(pq(&poly), vec![(3, 2, 24)]);
    }

    #[test]
    fn coordinate_axes() {
        let k = Fq::prime(7).unwrap();
        let poly = newton_polygon(&parse_poly("x*y", &k).unwrap()).unwrap();
        assert_eq!((poly.i0, poly.j0), (1, 1));
        assert!(poly.faces.is_empty());
        let f = parse_poly("x*(y^2 - x^3)", &k).unwrap();
        let poly = newton_polygon(&f).unwrap();
        assert_eq!(pq(&poly), vec![(2, 3, 8)]);
        assert_eq!(newton_polygon(&parse_poly("1+x", &k).unwrap()), Err(NewtonError::UnitInput));
        assert_eq!(newton_polygon(&parse_poly("x^2*y+x^5", &k).unwrap()), Err(NewtonError::NotReduced));
    }

    #[test]
    fn second_example_faces() {
        let f3 = Fq::prime(3).unwrap();
        let f = parse_poly(EX2, &f3).unwrap();
        let poly = newton_polygon(&f).unwrap();
        let s1 = face_factorization(&f, &poly.faces[0], &f3).unwrap();
        assert_eq!((s1.a, s1.b), (0, 10));
        assert_eq!(s1.roots, vec![(f3.from_i64(1), 1), (f3.from_i64(2), 1)]);
        assert_eq!(s1.level(), 14);

        let f2 = Fq::prime(2).unwrap();
        let g = parse_poly(EX2, &f2).unwrap();
        let s1 = face_factorization(&g, &poly.faces[0], &f2).unwrap();
        assert_eq!(s1.roots, vec![(f2.one(), 2)]);

        let s3 = face_factorization(&f, &poly.faces[2], &f3).unwrap();
        assert_eq!((s3.a, s3.b), (6, 0));
        assert_eq!(s3.roots, vec![(f3.one(), 1)]);
        assert_eq!(s3.level(), 44);
    }

    #[test]
    fn face_polynomial_reexpands() {
        let k = Fq::prime(5).unwrap();
        let f = parse_poly(EX2, &k).unwrap();
        for face in newton_polygon(&f).unwrap().faces {
            let ff = face_factorization(&f, &face, &k).unwrap();
            let init = weighted_initial(&f, face.p, face.q, &k);
            let lead = init.poly.lead().unwrap();
            let collected = BiPoly::from_terms(
                &k,
                f.terms()
                    .filter(|((i, j), _)| face.p * i + face.q * j == face.n)
                    .map(|(e, c)| (e, *c)),
            );
            let field = &ff.field;
            let emb = |c: &crate::field::FqElem| ff.embedding.as_ref().map_or(*c, |e| e.apply(c));
            let lhs = collected.map_coeffs(field, emb);
            let rhs = ff.expand().scale(&emb(lead), field);
            assert_eq!(lhs, rhs);
            assert_eq!(ff.level(), face.n);
        }
    }
}
