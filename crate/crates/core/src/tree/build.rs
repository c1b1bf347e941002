use crate::field::{Embedding, Field, UniPoly};
use crate::hn::{hn_map, hn_transform, HnMap};
use crate::newton::{weighted_initial, NewtonPolygon};
use crate::poly::{reduced_check, BiPoly, Exp};

use super::{NewtonTree, NodeKind, TreeError, RECURSION_CAP};

/// Where a branch leaves the last chart of its chain.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchEnd<E> {
    /// Simple root `μ` of the face `(p, q)`.
    Root { p: u32, q: u32, mu: E },
    /// The branch `X = 0` of the chart.
    XAxis,
    /// The branch `Y = 0` of the chart.
    YAxis,
}

/// The sequence of charts leading to one branch arrow.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchInfo<E> {
    pub arrow: usize,
    pub label: usize,
    pub steps: Vec<HnMap<E>>,
    pub end: BranchEnd<E>,
    /// The labelled part in the last chart (before the final map for `Root`).
    pub local: BiPoly<E>,
}

/// The Newton polygon met at one stage of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub depth: usize,
    pub polygon: NewtonPolygon,
}

#[derive(Debug, Clone)]
pub struct TreeBuild<F: Field> {
    pub tree: NewtonTree,
    /// Field containing all roots met; inputs embed into it.
    pub field: F,
    pub branches: Vec<BranchInfo<F::Elem>>,
    pub stages: Vec<Stage>,
    /// The input parts followed by the carried polynomials, embedded in `field`.
    pub embedded: Vec<BiPoly<F::Elem>>,
}

struct Part<E> {
    poly: BiPoly<E>,
    label: usize,
}

struct Item<E> {
    parts: Vec<Part<E>>,
    /// Parent vertex id, its decorations `(upper, lower)` and level.
    parent: Option<(usize, (u64, u64), u64)>,
    steps: Vec<HnMap<E>>,
}

struct Builder<F: Field> {
    k: F,
    tree: NewtonTree,
    branches: Vec<BranchInfo<F::Elem>>,
    stages: Vec<Stage>,
    pending: Vec<Item<F::Elem>>,
    embedded: Vec<BiPoly<F::Elem>>,
    cap: usize,
}

/// Newton tree of a single reduced polynomial vanishing at the origin.
pub fn build_tree<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> Result<TreeBuild<F>, TreeError> {
    if f.is_zero() {
        return Err(TreeError::ZeroPolynomial);
    }
    if !k.is_zero(&f.constant_term(k)) {
        return Err(TreeError::UnitInput);
    }
    if !reduced_check(f, k).reduced {
        return Err(TreeError::NotReduced);
    }
    build_tree_parts(std::slice::from_ref(f), &[], k, RECURSION_CAP)
}

/// Newton tree of the product of `parts`, with each branch arrow labelled by
/// the index of the part it belongs to. The product is assumed reduced.
/// `carry` is only embedded along when the field grows.
pub fn build_tree_parts<F: Field>(
    parts: &[BiPoly<F::Elem>],
    carry: &[BiPoly<F::Elem>],
    k: &F,
    cap: usize,
) -> Result<TreeBuild<F>, TreeError> {
    if parts.iter().any(|f| f.is_zero()) {
        return Err(TreeError::ZeroPolynomial);
    }
    let mut b = Builder {
        k: k.clone(),
        tree: NewtonTree::default(),
        branches: Vec::new(),
        stages: Vec::new(),
        pending: vec![Item {
            parts: parts
                .iter()
                .enumerate()
                .map(|(label, f)| Part { poly: f.clone(), label })
                .collect(),
            parent: None,
            steps: Vec::new(),
        }],
        embedded: parts.iter().chain(carry).cloned().collect(),
        cap,
    };
    while let Some(item) = b.pending.pop() {
        b.process(item)?;
    }
    Ok(TreeBuild {
        tree: b.tree,
        field: b.k,
        branches: b.branches,
        stages: b.stages,
        embedded: b.embedded,
    })
}

/// Newton polygon of a product, via the Minkowski sum of the factors' hulls.
fn product_polygon<E>(parts: &[Part<E>]) -> NewtonPolygon
where
    E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug,
{
    let mut acc: Vec<Exp> = vec![(0, 0)];
    for part in parts {
        let poly = NewtonPolygon::from_points(part.poly.support()).unwrap();
        let verts: Vec<Exp> = poly.vertices.iter().map(|v| (v.0 + poly.i0, v.1 + poly.j0)).collect();
        let sum = acc.iter().flat_map(|a| verts.iter().map(move |v| (a.0 + v.0, a.1 + v.1)));
        let hull = NewtonPolygon::from_points(sum).unwrap();
        acc = hull.vertices.iter().map(|v| (v.0 + hull.i0, v.1 + hull.j0)).collect();
    }
    NewtonPolygon::from_points(acc).unwrap()
}

impl<F: Field> Builder<F> {
    fn embed(&mut self, emb: &Embedding<F>, current: &mut Item<F::Elem>) {
        let k = emb.target.clone();
        let f = |a: &F::Elem| emb.apply(a);
        let embed_item = |item: &mut Item<F::Elem>| {
            for part in &mut item.parts {
                part.poly = part.poly.map_coeffs(&k, f);
            }
            for s in &mut item.steps {
                *s = s.map_coeffs(f);
            }
        };
        embed_item(current);
        self.pending.iter_mut().for_each(embed_item);
        for g in &mut self.embedded {
            *g = g.map_coeffs(&k, f);
        }
        for br in &mut self.branches {
            br.steps = br.steps.iter().map(|s| s.map_coeffs(f)).collect();
            br.local = br.local.map_coeffs(&k, f);
            if let BranchEnd::Root { mu, .. } = &mut br.end {
                *mu = f(mu);
            }
        }
        self.k = k;
    }

    fn label_of(parts: &[Part<F::Elem>], axis: impl Fn(&NewtonPolygon) -> u32) -> usize {
        parts
            .iter()
            .find(|p| axis(&NewtonPolygon::from_points(p.poly.support()).unwrap()) > 0)
            .map(|p| p.label)
            .unwrap()
    }

    fn axis_arrow(
        &mut self,
        item: &Item<F::Elem>,
        at: Option<(usize, u64, u64)>,
        end: BranchEnd<F::Elem>,
    ) -> Result<usize, TreeError> {
        let label = match end {
            BranchEnd::XAxis => Self::label_of(&item.parts, |p| p.i0),
            _ => Self::label_of(&item.parts, |p| p.j0),
        };
        let id = self.tree.add_node(NodeKind::Branch, 0, None, Some(label));
        let local = item.parts.iter().find(|p| p.label == label).unwrap().poly.clone();
        self.branches.push(BranchInfo { arrow: id, label, steps: item.steps.clone(), end, local });
        if let Some((v, near, _)) = at {
            self.tree.add_edge(v, id, near, 1);
        }
        Ok(id)
    }

    fn zero_arrow(&mut self, v: usize, n_v: u64, near: u64) -> Result<usize, TreeError> {
        if n_v % near != 0 {
            return Err(TreeError::IndivisibleArrowhead { n: n_v, a: near });
        }
        let id = self.tree.add_node(NodeKind::Zero, n_v / near, None, None);
        self.tree.add_edge(v, id, near, 1);
        Ok(id)
    }

    fn process(&mut self, mut item: Item<F::Elem>) -> Result<(), TreeError> {
        if item.steps.len() > self.cap {
            return Err(TreeError::RecursionCapExceeded(self.cap));
        }
        let poly = product_polygon(&item.parts);
        if poly.i0 > 1 || poly.j0 > 1 {
            return Err(TreeError::NotReduced);
        }
        self.stages.push(Stage { depth: item.steps.len(), polygon: poly.clone() });

        if poly.faces.is_empty() {
            // No compact face: only coordinate axes pass through the origin.
            if item.parent.is_some() {
                return Err(TreeError::NotReduced);
            }
            return match (poly.i0, poly.j0) {
                (0, 0) => Err(TreeError::UnitInput),
                (1, 1) => {
                    let a = self.axis_arrow(&item, None, BranchEnd::XAxis)?;
                    self.axis_arrow(&item, Some((a, 1, 1)), BranchEnd::YAxis)?;
                    Ok(())
                }
                (i0, _) => {
                    let end = if i0 == 1 { BranchEnd::XAxis } else { BranchEnd::YAxis };
                    let a = self.axis_arrow(&item, None, end)?;
                    let z = self.tree.add_node(NodeKind::Zero, 1, None, None);
                    self.tree.add_edge(a, z, 1, 1);
                    Ok(())
                }
            };
        }

        let n_parent = item.parent.map_or(0, |p| p.2);
        let mut chain = Vec::new();
        for face in &poly.faces {
            let (p, q) = (face.p as u64, face.q as u64);
            let decorations = match item.parent {
                None => (q, p),
                Some((_, (u, l), _)) => (q + u * l * p, p),
            };
            let n = face.n as u64 + p * n_parent;
            let v = self.tree.add_node(NodeKind::Vertex, n, Some(decorations), None);
            chain.push((v, decorations, n));
        }

        let (first, last) = (chain[0], *chain.last().unwrap());
        match item.parent {
            Some((pv, _, _)) => self.tree.add_edge(pv, first.0, 1, first.1 .0),
            None if poly.i0 == 1 => {
                self.axis_arrow(&item, Some((first.0, first.1 .0, 1)), BranchEnd::XAxis)?;
            }
            None => {
                self.zero_arrow(first.0, first.2, first.1 .0)?;
            }
        }
        for w in chain.windows(2) {
            self.tree.add_edge(w[0].0, w[1].0, w[0].1 .1, w[1].1 .0);
        }
        if poly.j0 == 1 {
            self.axis_arrow(&item, Some((last.0, last.1 .1, 1)), BranchEnd::YAxis)?;
        } else {
            self.zero_arrow(last.0, last.2, last.1 .1)?;
        }

        for (face, &(v, decorations, n_v)) in poly.faces.iter().zip(&chain) {
            let (p, q) = (face.p, face.q);
            let inits: Vec<_> = item
                .parts
                .iter()
                .map(|part| weighted_initial(&part.poly, p, q, &self.k))
                .collect();
            let product = inits
                .iter()
                .fold(UniPoly::one(&self.k), |acc, w| acc.mul(&w.poly, &self.k));
            let split = self.k.adjoin_splitting(&product)?;
            if let Some(emb) = &split.embedding {
                self.embed(emb, &mut item);
            }
            let k = self.k.clone();
            let inits: Vec<_> = item.parts.iter().map(|part| weighted_initial(&part.poly, p, q, &k)).collect();

            for (mu, nu) in split.roots {
                let lin = UniPoly::linear(&k, &mu);
                let mults: Vec<usize> = inits.iter().map(|w| multiplicity_of(&w.poly, &lin, &k)).collect();
                debug_assert_eq!(mults.iter().sum::<usize>(), nu);
                if nu == 1 {
                    let idx = mults.iter().position(|&m| m == 1).unwrap();
                    let label = item.parts[idx].label;
                    let id = self.tree.add_node(NodeKind::Branch, 0, None, Some(label));
                    self.tree.add_edge(v, id, 1, 1);
                    self.branches.push(BranchInfo {
                        arrow: id,
                        label,
                        steps: item.steps.clone(),
                        end: BranchEnd::Root { p, q, mu: mu.clone() },
                        local: item.parts[idx].poly.clone(),
                    });
                    continue;
                }
                let mut parts = Vec::new();
                for (part, (w, &m)) in item.parts.iter().zip(inits.iter().zip(&mults)) {
                    if m == 0 {
                        continue;
                    }
                    let (_, cof) = hn_transform(&part.poly, (p, q, w.n), (&mu, m), &k)?;
                    parts.push(Part { poly: cof, label: part.label });
                }
                let mut steps = item.steps.clone();
                steps.push(hn_map(p, q, &mu, &k)?);
                self.pending.push(Item { parts, parent: Some((v, decorations, n_v)), steps });
            }
        }
        Ok(())
    }
}

fn multiplicity_of<F: Field>(f: &UniPoly<F::Elem>, lin: &UniPoly<F::Elem>, k: &F) -> usize {
    let mut m = 0;
    let mut g = f.clone();
    while g.degree().unwrap_or(0) > 0 {
        let (quo, rem) = g.divrem(lin, k).unwrap();
        if !rem.is_zero() {
            break;
        }
        g = quo;
        m += 1;
    }
    m
}
