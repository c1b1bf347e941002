use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{NewtonTree, NodeKind, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decorations {
    pub upper: u64,
    pub lower: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJsonVertex {
    pub id: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub decorations: Option<Decorations>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJsonEdge {
    pub a: usize,
    pub b: usize,
    pub near_a: u64,
    pub near_b: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJsonArrow {
    pub id: usize,
    pub kind: NodeKind,
    /// The node the arrow is attached to.
    pub at: usize,
    /// Decoration of the arrow's edge at `at`.
    pub near_vertex: u64,
    /// `N_v / a` for zero arrows.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<usize>,
}

/// Serialized form: vertex–vertex edges in `edges`, everything touching an
/// arrow in `arrows`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<TreeJsonVertex>,
    pub edges: Vec<TreeJsonEdge>,
    pub arrows: Vec<TreeJsonArrow>,
}

impl NewtonTree {
    pub fn to_json(&self) -> TreeJson {
        let is_vertex = |id: usize| self.node(id).is_some_and(|n| n.kind == NodeKind::Vertex);
        let vertices = self
            .vertices()
            .map(|v| TreeJsonVertex {
                id: v.id,
                n: v.n,
                decorations: v.decorations.map(|(upper, lower)| Decorations { upper, lower }),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| is_vertex(e.a) && is_vertex(e.b))
            .map(|e| TreeJsonEdge { a: e.a, b: e.b, near_a: e.near_a, near_b: e.near_b })
            .collect();
        let arrows = self
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::Vertex)
            .map(|a| {
                let (at, _, near) = self.neighbours(a.id)[0];
                let near = if is_vertex(at) { near } else { 1 };
                TreeJsonArrow {
                    id: a.id,
                    kind: a.kind,
                    at,
                    near_vertex: near,
                    n: (a.kind == NodeKind::Zero).then_some(a.n),
                    label: a.label,
                }
            })
            .collect();
        TreeJson { vertices, edges, arrows }
    }

    pub fn from_json(j: &TreeJson) -> Result<NewtonTree, TreeError> {
        let mut t = NewtonTree::default();
        for v in &j.vertices {
            t.nodes.push(super::Node {
                id: v.id,
                kind: NodeKind::Vertex,
                n: v.n,
                decorations: v.decorations.as_ref().map(|d| (d.upper, d.lower)),
                label: None,
            });
        }
        for a in &j.arrows {
            if a.kind == NodeKind::Vertex {
                return Err(TreeError::Malformed(format!("arrow {} has kind vertex", a.id)));
            }
            t.nodes.push(super::Node {
                id: a.id,
                kind: a.kind,
                n: a.n.unwrap_or(0),
                decorations: None,
                label: a.label,
            });
        }
        let mut ids: Vec<usize> = t.nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeError::Malformed("duplicate node id".into()));
        }
        for e in &j.edges {
            t.add_edge(e.a, e.b, e.near_a, e.near_b);
        }
        for a in &j.arrows {
            let target = t
                .node(a.at)
                .ok_or_else(|| TreeError::Malformed(format!("arrow {} attached to unknown node", a.id)))?;
            // An edge between two arrows is listed by both; keep one copy.
            if target.kind != NodeKind::Vertex && a.at < a.id {
                continue;
            }
            t.add_edge(a.at, a.id, a.near_vertex, 1);
        }
        if t.edges.len() + 1 != t.nodes.len() || !t.is_connected() {
            return Err(TreeError::Malformed("not a tree".into()));
        }
        Ok(t)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph newton_tree {\n  node [shape=circle];\n");
        for n in &self.nodes {
            let _ = match n.kind {
                NodeKind::Vertex => writeln!(s, "  n{} [label=\"({})\"];", n.id, n.n),
                NodeKind::Zero => writeln!(s, "  n{} [shape=none, label=\"(0) {}\"];", n.id, n.n),
                NodeKind::Branch => writeln!(
                    s,
                    "  n{} [shape=none, label=\"branch {}\"];",
                    n.id,
                    n.label.map_or(String::new(), |l| l.to_string())
                ),
            };
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  n{} -- n{} [taillabel=\"{}\", headlabel=\"{}\"];",
                e.a, e.b, e.near_a, e.near_b
            );
        }
        s.push_str("}\n");
        s
    }

    /// Indented text rendering: each vertex with its decorations, children
    /// below it, every edge annotated `near_parent/near_child`.
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        let Some(root) = self
            .vertices()
            .next()
            .or_else(|| self.nodes.first())
            .map(|n| n.id)
        else {
            return "(empty tree)\n".into();
        };
        self.ascii_node(root, None, 0, &mut s);
        s
    }

    fn label(&self, id: usize) -> String {
        let n = self.node(id).unwrap();
        match n.kind {
            NodeKind::Vertex => match n.decorations {
                Some((u, l)) => format!("({}) [{} above, {} below]", n.n, u, l),
                None => format!("({})", n.n),
            },
            NodeKind::Zero => format!("--> (0) N={}", n.n),
            NodeKind::Branch => format!("--> branch{}", n.label.map_or(String::new(), |l| format!(" {l}"))),
        }
    }

    fn ascii_node(&self, id: usize, parent: Option<(usize, u64, u64)>, depth: usize, s: &mut String) {
        let pad = "  ".repeat(depth);
        match parent {
            None => {
                let _ = writeln!(s, "{pad}{}", self.label(id));
            }
            Some((_, np, nc)) => {
                let _ = writeln!(s, "{pad}{np}/{nc} {}", self.label(id));
            }
        }
        for (nb, near_here, near_there) in self.neighbours(id) {
            if Some(nb) == parent.map(|p| p.0) {
                continue;
            }
            self.ascii_node(nb, Some((id, near_here, near_there)), depth + 1, s);
        }
    }
}
