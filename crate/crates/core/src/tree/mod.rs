//! Decorated Newton trees.

mod build;
mod render;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldError;
use crate::hn::HnError;
use crate::newton::NewtonError;

pub use build::{build_tree, build_tree_parts, BranchEnd, BranchInfo, Stage, TreeBuild};
pub use render::{TreeJson, TreeJsonArrow, TreeJsonEdge, TreeJsonVertex};

/// Default cap on the number of nested Hamburger-Noether transforms.
pub const RECURSION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("polynomial is not reduced at the origin")]
    NotReduced,
    #[error("polynomial does not vanish at the origin")]
    UnitInput,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("more than {0} nested transforms")]
    RecursionCapExceeded(usize),
    #[error("zero arrow multiplicity: {a} does not divide {n}")]
    IndivisibleArrowhead { n: u64, a: u64 },
    #[error("invalid tree description: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hn(#[from] HnError),
}

impl From<NewtonError> for TreeError {
    fn from(e: NewtonError) -> Self {
        match e {
            NewtonError::ZeroPolynomial => TreeError::ZeroPolynomial,
            NewtonError::UnitInput => TreeError::UnitInput,
            NewtonError::NotReduced => TreeError::NotReduced,
            NewtonError::Field(f) => TreeError::Field(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Vertex,
    Branch,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    /// `N_v` for vertices, `N_v / a` for zero arrows, 0 for branch arrows.
    pub n: u64,
    /// `(upper, lower)` decorations of a chain vertex.
    pub decorations: Option<(u64, u64)>,
    /// For branch arrows: which input polynomial the branch belongs to.
    pub label: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub near_a: u64,
    pub near_b: u64,
}

impl Edge {
    fn other(&self, id: usize) -> usize {
        if self.a == id {
            self.b
        } else {
            self.a
        }
    }

    fn near(&self, id: usize) -> u64 {
        if self.a == id {
            self.near_a
        } else {
            self.near_b
        }
    }
}

/// A Newton tree: vertices carrying `N_v`, arrows, and edges with a
/// decoration at each end.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NewtonTree {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl NewtonTree {
    pub(crate) fn add_node(
        &mut self,
        kind: NodeKind,
        n: u64,
        decorations: Option<(u64, u64)>,
        label: Option<usize>,
    ) -> usize {
        let id = self.nodes.iter().map(|n| n.id + 1).max().unwrap_or(0);
        self.nodes.push(Node { id, kind, n, decorations, label });
        id
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize, near_a: u64, near_b: u64) {
        self.edges.push(Edge { a, b, near_a, near_b });
    }

    pub fn node(&self, id: usize) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Vertex)
    }

    pub fn branch_arrows(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Branch)
    }

    pub fn zero_arrows(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Zero)
    }

    /// Number of branches `r`.
    pub fn r(&self) -> usize {
        self.branch_arrows().count()
    }

    /// Edges incident to `id`.
    pub fn incident(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.a == id || e.b == id)
    }

    pub fn valency(&self, id: usize) -> usize {
        self.incident(id).count()
    }

    /// `(neighbour, near-decoration at id, near-decoration at neighbour)`.
    pub fn neighbours(&self, id: usize) -> Vec<(usize, u64, u64)> {
        self.incident(id)
            .map(|e| (e.other(id), e.near(id), e.near(e.other(id))))
            .collect()
    }

    /// Node ids on the path from `v` to `w`, both included.
    pub fn path(&self, v: usize, w: usize) -> Option<Vec<usize>> {
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([v]);
        prev.insert(v, v);
        while let Some(u) = queue.pop_front() {
            if u == w {
                let mut out = vec![w];
                let mut cur = w;
                while cur != v {
                    cur = prev[&cur];
                    out.push(cur);
                }
                out.reverse();
                return Some(out);
            }
            for (nb, _, _) in self.neighbours(u) {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(nb) {
                    e.insert(u);
                    queue.push_back(nb);
                }
            }
        }
        None
    }

    /// Product of the decorations at `u` on edges not leading to `a` or `b`.
    fn off_path(&self, u: usize, a: Option<usize>, b: Option<usize>) -> u128 {
        self.neighbours(u)
            .into_iter()
            .filter(|(nb, _, _)| Some(*nb) != a && Some(*nb) != b)
            .map(|(_, near, _)| near as u128)
            .product()
    }

    /// `ρ(v, w)`: product over interior path vertices of their off-path decorations.
    pub fn rho(&self, v: usize, w: usize) -> Option<u128> {
        let path = self.path(v, w)?;
        Some(
            (1..path.len().saturating_sub(1))
                .map(|i| self.off_path(path[i], Some(path[i - 1]), Some(path[i + 1])))
                .product(),
        )
    }

    /// `ρ̄(v, w)`: `ρ(v, w)` times the off-path decorations at `v` itself.
    pub fn rho_bar(&self, v: usize, w: usize) -> Option<u128> {
        let path = self.path(v, w)?;
        let own = self.off_path(v, path.get(1).copied(), None);
        Some(own * self.rho(v, w)?)
    }

    /// Erase dead ends decorated 1 and vertices of valency 2 until none remain.
    pub fn minimalize(&self) -> NewtonTree {
        let mut t = self.clone();
        loop {
            let mut changed = false;
            let dead: Option<(usize, usize)> = t.zero_arrows().find_map(|z| {
                let e = t.incident(z.id).next()?;
                let v = e.other(z.id);
                let is_vertex = t.node(v).is_some_and(|n| n.kind == NodeKind::Vertex);
                (is_vertex && e.near(v) == 1 && t.valency(z.id) == 1).then_some((z.id, v))
            });
            if let Some((z, _)) = dead {
                t.remove_node(z);
                changed = true;
            }
            let two = t.vertices().find(|v| t.valency(v.id) == 2).map(|v| v.id);
            if let Some(v) = two {
                let nb = t.neighbours(v);
                let ((a, _, na), (b, _, nb_)) = (nb[0], nb[1]);
                t.remove_node(v);
                t.add_edge(a, b, na, nb_);
                changed = true;
            }
            if !changed {
                return t;
            }
        }
    }

    fn remove_node(&mut self, id: usize) {
        self.nodes.retain(|n| n.id != id);
        self.edges.retain(|e| e.a != id && e.b != id);
    }

    /// `M(T) = -Σ_{v ∈ V ∪ A_0} N_v (δ_v - 2)` on the minimal tree.
    pub fn multiplicity(&self) -> i64 {
        let t = self.minimalize();
        t.raw_multiplicity()
    }

    /// The defining sum evaluated on this tree as it is.
    pub fn raw_multiplicity(&self) -> i64 {
        let mut m: i64 = 0;
        for n in &self.nodes {
            match n.kind {
                NodeKind::Vertex => m -= n.n as i64 * (self.valency(n.id) as i64 - 2),
                NodeKind::Zero => m -= n.n as i64 * (1 - 2),
                NodeKind::Branch => {}
            }
        }
        m
    }

    /// `N_v` for every vertex and zero arrow of the minimal tree.
    pub fn vertex_report(&self) -> Vec<u64> {
        let t = self.minimalize();
        t.vertices().chain(t.zero_arrows()).map(|n| n.n).collect()
    }

    /// Check `N_v = Σ_α ρ̄(v, α)` over branch arrows, at every vertex.
    pub fn check_rho_bar_sums(&self) -> bool {
        let arrows: Vec<usize> = self.branch_arrows().map(|a| a.id).collect();
        self.vertices().all(|v| {
            let s: u128 = arrows.iter().map(|&a| self.rho_bar(v.id, a).unwrap()).sum();
            s == v.n as u128
        })
    }

    /// Every chain vertex has coprime decorations.
    pub fn check_coprime_decorations(&self) -> bool {
        use num_integer::Integer;
        self.vertices()
            .filter_map(|v| v.decorations)
            .all(|(u, l)| u.gcd(&l) == 1)
    }

    pub fn is_connected(&self) -> bool {
        match self.nodes.first() {
            None => true,
            Some(first) => self.nodes.iter().all(|n| self.path(first.id, n.id).is_some()),
        }
    }
}

#[cfg(test)]
mod tests;
