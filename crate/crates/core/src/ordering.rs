//! Ordering of the components of a compact-type curve ending at a chosen root,
//! together with the separating subcurves `A_1, …, A_{γ−1}`.
//!
//! The construction peels the root off, orders the connected pieces of the
//! rest by their smallest component id, orders each piece recursively so that
//! it ends at the component touching the root, and concatenates. This is a
//! post-order walk of the tree rooted at the chosen component, children taken
//! in order of the smallest id in their subtree; it is done with an explicit
//! stack.

use std::collections::BTreeSet;
use std::fmt;

use crate::curve::{ComponentId, NodalCurve, NodeId, Subcurve};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDecomposition {
    /// `order[j-1] = π(j)`; the last entry is the root.
    pub order: Vec<ComponentId>,
    /// `subcurves[j-1] = A_j` for `j = 1..γ−1`.
    pub subcurves: Vec<Subcurve>,
    /// `separating_nodes[j-1] = p_j`, the single node of `A_j ∩ A_j^c`.
    pub separating_nodes: Vec<NodeId>,
}

impl OrderedDecomposition {
    pub fn gamma(&self) -> usize {
        self.order.len()
    }

    pub fn root(&self) -> ComponentId {
        *self.order.last().expect("empty ordering")
    }

    /// Position (1-based) of every component in the ordering, indexed by id.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len() + 1];
        for (j, &c) in self.order.iter().enumerate() {
            if c < pos.len() {
                pos[c] = j + 1;
            }
        }
        pos
    }
}

pub fn order_components(curve: &NodalCurve, root: ComponentId) -> Result<OrderedDecomposition> {
    curve.require_compact_type()?;
    curve.check_component(root)?;
    let gamma = curve.gamma();

    // parent pointers and subtree minima of the tree rooted at `root`
    let mut parent = vec![0usize; gamma + 1];
    let mut visit = vec![root];
    let mut seen = vec![false; gamma + 1];
    seen[root] = true;
    let mut bfs = Vec::with_capacity(gamma);
    while let Some(c) = visit.pop() {
        bfs.push(c);
        for n in curve.neighbors(c) {
            if !seen[n] {
                seen[n] = true;
                parent[n] = c;
                visit.push(n);
            }
        }
    }
    let mut subtree_min: Vec<usize> = (0..=gamma).collect();
    for &c in bfs.iter().rev() {
        if c != root {
            let p = parent[c];
            subtree_min[p] = subtree_min[p].min(subtree_min[c]);
        }
    }
    let mut children: Vec<Vec<ComponentId>> = vec![Vec::new(); gamma + 1];
    for c in curve.component_ids().filter(|&c| c != root) {
        children[parent[c]].push(c);
    }
    for list in &mut children {
        list.sort_by_key(|&c| subtree_min[c]);
    }

    // iterative post-order
    let mut order = Vec::with_capacity(gamma);
    let mut stack: Vec<(ComponentId, usize)> = vec![(root, 0)];
    while let Some(top) = stack.last_mut() {
        let (c, next) = *top;
        if next < children[c].len() {
            top.1 += 1;
            stack.push((children[c][next], 0));
        } else {
            order.push(c);
            stack.pop();
        }
    }

    let mut subcurves = Vec::with_capacity(gamma.saturating_sub(1));
    let mut separating_nodes = Vec::with_capacity(gamma.saturating_sub(1));
    let all: BTreeSet<_> = curve.component_ids().collect();
    for (j, &c) in order.iter().enumerate().take(gamma.saturating_sub(1)) {
        // D_j: the piece of C_{π(j)}^c holding the tail (which contains the root)
        let mut rest = all.clone();
        rest.remove(&c);
        let tail_piece = curve.reachable_within(root, &rest);
        let a_j: BTreeSet<_> = all.difference(&tail_piece).copied().collect();
        let crossing = curve.crossing_nodes(&a_j);
        let node = match crossing.as_slice() {
            [n] => *n,
            _ => {
                return Err(Error::InvalidDecomposition(format!(
                    "A_{} meets its complement in {} nodes",
                    j + 1,
                    crossing.len()
                )))
            }
        };
        subcurves.push(Subcurve::from_set(a_j));
        separating_nodes.push(node);
    }
    Ok(OrderedDecomposition {
        order,
        subcurves,
        separating_nodes,
    })
}

/// The canonical root used when none is requested: the largest component id.
pub fn default_root(curve: &NodalCurve) -> ComponentId {
    curve.gamma()
}

/// A violated clause of the ordering properties, with the witness index `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    /// (a): the last component is not the declared root.
    Root { expected: ComponentId, found: ComponentId },
    /// (b): `C_{π(j+1)} ∪ … ∪ C_{π(γ)}` is disconnected.
    TailDisconnected { j: usize },
    /// (c): `C_{π(j)} ⊄ A_j`.
    NotContained { j: usize },
    /// (c): `A_j` is disconnected.
    SubcurveDisconnected { j: usize },
    /// (c): `A_j^c` is empty or disconnected.
    ComplementDisconnected { j: usize },
    /// (c): `A_j ∩ A_j^c` is not the single node `p_j`.
    SeparatingNode { j: usize, crossing: Vec<NodeId> },
    /// `C_{π(i)} ⊆ A_j` with `i > j`.
    Triangularity { j: usize, i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(msg) => write!(f, "shape: {msg}"),
            Violation::Root { expected, found } => {
                write!(f, "(a) last component is {found}, expected root {expected}")
            }
            Violation::TailDisconnected { j } => write!(f, "(b) j={j}: tail is disconnected"),
            Violation::NotContained { j } => write!(f, "(c) j={j}: C_pi(j) not in A_j"),
            Violation::SubcurveDisconnected { j } => write!(f, "(c) j={j}: A_j disconnected"),
            Violation::ComplementDisconnected { j } => {
                write!(f, "(c) j={j}: complement of A_j disconnected")
            }
            Violation::SeparatingNode { j, crossing } => write!(
                f,
                "(c) j={j}: A_j meets its complement in nodes [{}], not in p_j alone",
                crate::rational::fmt_ints(crossing)
            ),
            Violation::Triangularity { j, i } => {
                write!(f, "triangularity j={j}: A_j contains C_pi({i}) with {i} > {j}")
            }
        }
    }
}

/// Checks every ordering property literally; an empty list means pass.
pub fn verify_decomposition(curve: &NodalCurve, d: &OrderedDecomposition) -> Vec<Violation> {
    verify_with_root(curve, d, None)
}

/// As [`verify_decomposition`], additionally requiring `π(γ) = root`.
pub fn verify_with_root(
    curve: &NodalCurve,
    d: &OrderedDecomposition,
    root: Option<ComponentId>,
) -> Vec<Violation> {
    let gamma = curve.gamma();
    let mut out = Vec::new();
    let as_set: BTreeSet<_> = d.order.iter().copied().collect();
    if d.order.len() != gamma || as_set != curve.component_ids().collect() {
        out.push(Violation::Shape("order is not a permutation of the components".into()));
        return out;
    }
    if d.subcurves.len() + 1 != gamma || d.separating_nodes.len() + 1 != gamma {
        out.push(Violation::Shape(format!(
            "expected {} subcurves and separating nodes",
            gamma - 1
        )));
        return out;
    }
    if let Some(r) = root {
        if d.root() != r {
            out.push(Violation::Root {
                expected: r,
                found: d.root(),
            });
        }
    }
    let pos = d.positions();
    for j in 1..gamma {
        let tail: BTreeSet<_> = d.order[j..].iter().copied().collect();
        if !curve.is_connected_set(&tail) {
            out.push(Violation::TailDisconnected { j });
        }
        let a = &d.subcurves[j - 1];
        if !a.contains(d.order[j - 1]) {
            out.push(Violation::NotContained { j });
        }
        if !a.is_connected(curve) {
            out.push(Violation::SubcurveDisconnected { j });
        }
        match a.complement(curve) {
            Some(c) if c.is_connected(curve) => {}
            _ => out.push(Violation::ComplementDisconnected { j }),
        }
        let crossing = curve.crossing_nodes(a.ids());
        if crossing != [d.separating_nodes[j - 1]] {
            out.push(Violation::SeparatingNode { j, crossing });
        }
        for &c in a.ids() {
            let i = pos[c];
            if i > j {
                out.push(Violation::Triangularity { j, i });
            }
        }
    }
    out
}
