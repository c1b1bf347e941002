//! Invariants read off Newton trees: intersection multiplicities, Zariski
//! sequences and semigroups, δ, and the area identity.

pub(crate) mod series;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::hn::hn_map;
use crate::poly::{common_component_at_origin, reduced_check, BiPoly};
use crate::tree::{build_tree, build_tree_parts, BranchEnd, NewtonTree, NodeKind, Stage, TreeBuild, TreeError, RECURSION_CAP};

/// Largest precision tried when looking for an intersection order.
pub const MAX_PRECISION: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("polynomial has {0} branches, expected one")]
    NotIrreducible(usize),
    #[error("minimal tree is not a single chain: {0}")]
    NotIrreducibleBranchShape(String),
    #[error("no nonzero coefficient below t^{0}")]
    PrecisionExhausted(usize),
    #[error("-M + r = {0} is odd")]
    ParityViolation(i64),
    #[error("not a Zariski characteristic sequence: {0}")]
    InvalidZariski(String),
}

pub type InvResult<T> = Result<T, InvariantError>;

/// An intersection multiplicity, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Intersection {
    Finite(u128),
    Infinite,
}

impl std::fmt::Display for Intersection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Intersection::Finite(n) => write!(f, "{n}"),
            Intersection::Infinite => write!(f, "infinity"),
        }
    }
}

/// `Σ ρ(α_f, α_g)` over branch arrows of `f` and of `g` in the tree of `fg`.
pub fn intersect_tree<F: Field>(f: &BiPoly<F::Elem>, g: &BiPoly<F::Elem>, k: &F) -> InvResult<Intersection> {
    if f.is_zero() || g.is_zero() {
        return Ok(Intersection::Infinite);
    }
    if !k.is_zero(&f.constant_term(k)) || !k.is_zero(&g.constant_term(k)) {
        return Ok(Intersection::Finite(0));
    }
    if common_component_at_origin(f, g, k) {
        return Ok(Intersection::Infinite);
    }
    for h in [f, g] {
        if !reduced_check(h, k).reduced {
            return Err(TreeError::NotReduced.into());
        }
    }
    let b = build_tree_parts(&[f.clone(), g.clone()], &[], k, RECURSION_CAP)?;
    Ok(Intersection::Finite(intersection_in_tree(&b.tree, 0, 1)))
}

/// `Σ ρ(α, β)` over arrows labelled `a` and arrows labelled `b`.
pub fn intersection_in_tree(t: &NewtonTree, a: usize, b: usize) -> u128 {
    let of = |l: usize| -> Vec<usize> { t.branch_arrows().filter(|n| n.label == Some(l)).map(|n| n.id).collect() };
    let (fa, gb) = (of(a), of(b));
    fa.iter()
        .flat_map(|&x| gb.iter().map(move |&y| (x, y)))
        .map(|(x, y)| t.rho(x, y).expect("tree is connected"))
        .sum()
}

/// A branch `t ↦ (φ(t), ψ(t))`, exact modulo `t^precision`.
#[derive(Debug, Clone)]
pub struct Parametrization<F: Field> {
    pub field: F,
    pub phi: Vec<F::Elem>,
    pub psi: Vec<F::Elem>,
    pub precision: usize,
}

impl<F: Field> Parametrization<F> {
    pub fn ord_phi(&self) -> Option<usize> {
        series::order(&self.phi, &self.field)
    }

    pub fn ord_psi(&self) -> Option<usize> {
        series::order(&self.psi, &self.field)
    }

    /// `g(φ(t), ψ(t))` modulo `t^precision`; `g` must live in `self.field`.
    pub fn substitute(&self, g: &BiPoly<F::Elem>) -> Vec<F::Elem> {
        series::eval_bipoly(g, &self.phi, &self.psi, &self.field)
    }

    /// Render the first `terms` nonzero coefficients of each series.
    pub fn format(&self, terms: usize) -> (String, String) {
        let show = |s: &[F::Elem]| {
            let k = &self.field;
            let parts: Vec<String> = s
                .iter()
                .enumerate()
                .filter(|(_, c)| !k.is_zero(c))
                .take(terms)
                .map(|(i, c)| {
                    let c = k.format_elem(c);
                    let c = if c[1..].contains(['+', '-']) { format!("({c})") } else { c };
                    match i {
                        0 => c,
                        1 => format!("{c}*t"),
                        _ => format!("{c}*t^{i}"),
                    }
                })
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                format!("{} + O(t^{})", parts.join(" + "), self.precision)
            }
        };
        (show(&self.phi), show(&self.psi))
    }
}

/// Parametrize the single branch of `build` carrying label 0.
fn parametrize_from_build<F: Field>(b: &TreeBuild<F>, prec: usize) -> InvResult<Parametrization<F>> {
    let k = &b.field;
    let info = match b.branches.as_slice() {
        [one] => one,
        many => return Err(InvariantError::NotIrreducible(many.len())),
    };
    let t = series::shift(&series::constant(k, k.one(), prec), 1, k);
    let z = series::zero(k, prec);
    let apply = |m: &crate::poly::MonomialMap<F::Elem>, (x, y): (Vec<F::Elem>, Vec<F::Elem>)| {
        let s = m.shift.clone().unwrap_or_else(|| k.zero());
        let unit = series::add(&y, &series::constant(k, s, prec), k);
        let xs = series::mul(&series::pow(&x, m.x.0, k), &series::pow(&unit, m.x.1, k), k);
        let ys = series::mul(&series::pow(&x, m.y.0, k), &series::pow(&unit, m.y.1, k), k);
        (xs, ys)
    };
    let mut cur = match &info.end {
        BranchEnd::XAxis => (z.clone(), t.clone()),
        BranchEnd::YAxis => (t.clone(), z.clone()),
        BranchEnd::Root { p, q, mu } => {
            let m = hn_map(*p, *q, mu, k).map_err(TreeError::from)?;
            let g = m.map.apply(&info.local, k);
            let n = g.x_order().unwrap_or(0);
            let c = g.div_monomial(n, 0).unwrap();
            let h = series::implicit_root(&c, prec, k);
            apply(&m.map, (t.clone(), h))
        }
    };
    for step in info.steps.iter().rev() {
        cur = apply(&step.map, cur);
    }
    Ok(Parametrization { field: k.clone(), phi: cur.0, psi: cur.1, precision: prec })
}

/// Parametrization of an irreducible `f` to precision `prec`.
pub fn parametrize_branch<F: Field>(f: &BiPoly<F::Elem>, prec: usize, k: &F) -> InvResult<Parametrization<F>> {
    let b = build_tree(f, k)?;
    parametrize_from_build(&b, prec)
}

/// `ord_t g(φ(t), ψ(t))` for the branch `f`, doubling the precision from
/// `start` until the order is below half of it.
pub fn intersect_param<F: Field>(
    f: &BiPoly<F::Elem>,
    g: &BiPoly<F::Elem>,
    start: usize,
    k: &F,
) -> InvResult<u64> {
    if !reduced_check(f, k).reduced {
        return Err(TreeError::NotReduced.into());
    }
    if !k.is_zero(&f.constant_term(k)) {
        return Err(TreeError::UnitInput.into());
    }
    let b = build_tree_parts(std::slice::from_ref(f), std::slice::from_ref(g), k, RECURSION_CAP)?;
    let g = &b.embedded[1];
    let mut prec = start.max(8);
    loop {
        let par = parametrize_from_build(&b, prec)?;
        let s = par.substitute(g);
        if let Some(o) = series::order(&s, &b.field) {
            if 2 * o < prec {
                return Ok(o as u64);
            }
        }
        if prec >= MAX_PRECISION {
            return Err(InvariantError::PrecisionExhausted(prec));
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// A Zariski characteristic sequence `(v_0, …, v_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZariskiSeq {
    pub v: Vec<u64>,
}

impl ZariskiSeq {
    /// Validate the axioms: strictly decreasing gcds ending at 1, and
    /// `n_k v_k < v_{k+1}`.
    pub fn new(v: Vec<u64>) -> InvResult<Self> {
        let s = ZariskiSeq { v };
        if s.v.is_empty() || s.v.contains(&0) {
            return Err(InvariantError::InvalidZariski(format!("{:?}", s.v)));
        }
        let d = s.d();
        if *d.last().unwrap() != 1 || d.windows(2).any(|w| w[0] <= w[1]) {
            return Err(InvariantError::InvalidZariski(format!("gcds {d:?}")));
        }
        let n = s.n();
        for k in 1..s.v.len() - 1 {
            if n[k] * s.v[k] >= s.v[k + 1] {
                return Err(InvariantError::InvalidZariski(format!("n_{k} v_{k} >= v_{}", k + 1)));
            }
        }
        Ok(s)
    }

    /// `d_k = gcd(v_0, …, v_k)`.
    pub fn d(&self) -> Vec<u64> {
        let mut g = 0;
        self.v.iter().map(|&x| {
            g = g.gcd(&x);
            g
        }).collect()
    }

    /// `n_k = d_{k-1} / d_k`, with `n_0 = 1`.
    pub fn n(&self) -> Vec<u64> {
        let d = self.d();
        (0..d.len()).map(|k| if k == 0 { 1 } else { d[k - 1] / d[k] }).collect()
    }

    /// `c = Σ_{k≥1} (n_k - 1) v_k - v_0 + 1`.
    pub fn conductor(&self) -> u64 {
        let n = self.n();
        let s: u64 = (1..self.v.len()).map(|k| (n[k] - 1) * self.v[k]).sum();
        s + 1 - self.v[0]
    }

    /// Whether `m` lies in the semigroup generated by the `v_k`.
    pub fn contains(&self, m: u64) -> bool {
        if m >= self.conductor() {
            return true;
        }
        let m = m as usize;
        let mut reach = vec![false; m + 1];
        reach[0] = true;
        for i in 1..=m {
            reach[i] = self.v.iter().any(|&g| g as usize <= i && reach[i - g as usize]);
        }
        reach[m]
    }
}

pub fn conductor(s: &ZariskiSeq) -> u64 {
    s.conductor()
}

pub fn semigroup_membership(s: &ZariskiSeq, m: u64) -> bool {
    s.contains(m)
}

/// Read `v_0 = N_1/b_1, v_1 = N_1/a_1, v_k = N_k/a_k` off the minimal tree of
/// an irreducible curve.
pub fn zariski_sequence(t: &NewtonTree) -> InvResult<ZariskiSeq> {
    let m = t.minimalize();
    let arrows: Vec<usize> = m.branch_arrows().map(|a| a.id).collect();
    let [arrow] = arrows.as_slice() else {
        return Err(InvariantError::NotIrreducible(arrows.len()));
    };
    let shape = |msg: &str| InvariantError::NotIrreducibleBranchShape(msg.to_string());
    let kind = |id: usize| m.node(id).unwrap().kind;
    if m.vertices().count() == 0 {
        return ZariskiSeq::new(vec![1]);
    }
    // Walk from the arrow along the chain of vertices.
    let mut levels = Vec::new();
    let (mut prev, mut cur) = (*arrow, m.neighbours(*arrow)[0].0);
    loop {
        if kind(cur) != NodeKind::Vertex {
            return Err(shape("arrow not attached to a vertex"));
        }
        let nb = m.neighbours(cur);
        let zeros: Vec<u64> = nb
            .iter()
            .filter(|(id, _, _)| kind(*id) == NodeKind::Zero)
            .map(|(id, _, _)| m.node(*id).unwrap().n)
            .collect();
        let next: Vec<usize> = nb
            .iter()
            .map(|x| x.0)
            .filter(|&id| id != prev && kind(id) == NodeKind::Vertex)
            .collect();
        match (zeros.as_slice(), next.as_slice()) {
            ([z], [n]) if nb.len() == 3 => {
                levels.push(*z);
                (prev, cur) = (cur, *n);
            }
            ([a, b], []) if nb.len() == 3 => {
                levels.push(*a.max(b));
                levels.push(*a.min(b));
                break;
            }
            _ => return Err(shape("unexpected valency or dead ends")),
        }
    }
    levels.reverse();
    ZariskiSeq::new(levels)
}

/// `δ = (-M + r) / 2`.
pub fn delta_of_tree(t: &NewtonTree) -> InvResult<u64> {
    let m = t.multiplicity();
    let s = -m + t.r() as i64;
    if s % 2 != 0 || s < 0 {
        return Err(InvariantError::ParityViolation(s));
    }
    Ok((s / 2) as u64)
}

pub fn delta<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> InvResult<u64> {
    delta_of_tree(&build_tree(f, k)?.tree)
}

/// `μ̄ = 2δ - r + 1 = 1 - M`.
pub fn mu_bar<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> InvResult<i64> {
    Ok(1 - build_tree(f, k)?.tree.multiplicity())
}

/// Both sides of `-M = 2A_0 - a - b + Σ (2A_ℓ - a_ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AreaIdentity {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
    /// `2A_0 - a - b`, then one term per Hamburger-Noether transform.
    pub terms: Vec<i64>,
}

/// Twice the area under the polygon through `pts` (left to right) down to
/// `y = 0`.
fn twice_area_under(pts: &[(i64, i64)]) -> i64 {
    pts.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}

fn stage_term(s: &Stage) -> i64 {
    let p = &s.polygon;
    let pts: Vec<(i64, i64)> = p
        .vertices
        .iter()
        .map(|v| ((v.0 + p.i0) as i64, (v.1 + p.j0) as i64))
        .collect();
    let (top, bottom) = (pts[0], *pts.last().unwrap());
    let area = twice_area_under(&pts);
    // A coordinate factor leaves the polygon one unit off the axis; closing it
    // up adds a strip whose contribution does not depend on how it is closed.
    let b_term = if s.depth == 0 {
        if top.0 == 1 {
            top.1
        } else {
            -top.1
        }
    } else {
        0
    };
    area + b_term - bottom.0
}

pub fn area_identity_of(b: &TreeBuild<impl Field>) -> AreaIdentity {
    let lhs = -b.tree.multiplicity();
    let terms: Vec<i64> = b.stages.iter().map(stage_term).collect();
    let rhs = terms.iter().sum();
    AreaIdentity { lhs, rhs, equal: lhs == rhs, terms }
}

pub fn area_identity<F: Field>(f: &BiPoly<F::Elem>, k: &F) -> InvResult<AreaIdentity> {
    Ok(area_identity_of(&build_tree(f, k)?))
}

/// Check `δ(Π f_i) = Σ δ(f_i) + Σ_{i<j} i(f_i, f_j)`.
pub fn delta_additivity_check<F: Field>(factors: &[BiPoly<F::Elem>], k: &F) -> InvResult<bool> {
    let product = factors
        .iter()
        .fold(BiPoly::one(k), |acc, f| acc.mul(f, k));
    let total = delta(&product, k)? as u128;
    let mut sum: u128 = 0;
    for (i, f) in factors.iter().enumerate() {
        sum += delta(f, k)? as u128;
        for g in &factors[i + 1..] {
            match intersect_tree(f, g, k)? {
                Intersection::Finite(n) => sum += n,
                Intersection::Infinite => return Ok(false),
            }
        }
    }
    Ok(total == sum)
}
