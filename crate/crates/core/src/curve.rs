//! Dual graphs of connected nodal curves with smooth components.
//!
//! Components are numbered `1..=γ` and that numbering is the canonical order:
//! every list this module returns is sorted by id.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::{Error, ParseError, Result};

pub type ComponentId = usize;
pub type NodeId = usize;

/// A node joining two distinct components. The endpoint order is kept because
/// local stalk data refers to the `first` and `second` side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    pub id: NodeId,
    pub first: ComponentId,
    pub second: ComponentId,
}

impl Node {
    pub fn new(id: NodeId, first: ComponentId, second: ComponentId) -> Self {
        Self { id, first, second }
    }

    pub fn touches(&self, c: ComponentId) -> bool {
        self.first == c || self.second == c
    }

    pub fn other(&self, c: ComponentId) -> Option<ComponentId> {
        if self.first == c {
            Some(self.second)
        } else if self.second == c {
            Some(self.first)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveShape {
    Chain,
    Comb,
    ChainAndComb,
    Other,
    NotCompactType,
}

impl CurveShape {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveShape::Chain => "chain",
            CurveShape::Comb => "comb",
            CurveShape::ChainAndComb => "chain_and_comb",
            CurveShape::Other => "other",
            CurveShape::NotCompactType => "not_compact_type",
        }
    }

    pub fn is_chain(self) -> bool {
        matches!(self, CurveShape::Chain | CurveShape::ChainAndComb)
    }

    pub fn is_comb(self) -> bool {
        matches!(self, CurveShape::Comb | CurveShape::ChainAndComb)
    }
}

/// Connected nodal curve with smooth components of genus at least 2.
///
/// Immutable after construction. Multi-edges are allowed (the curve is then
/// not of compact type); self-nodes are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodalCurve {
    genera: Vec<u32>,
    nodes: Vec<Node>,
}

impl NodalCurve {
    pub fn new(genera: Vec<u32>, mut nodes: Vec<Node>) -> Result<Self> {
        if genera.is_empty() {
            return Err(Error::InvalidCurve("a curve needs at least one component".into()));
        }
        if let Some(pos) = genera.iter().position(|&g| g < 2) {
            return Err(Error::InvalidCurve(format!(
                "component {} has genus {} (components must have genus >= 2)",
                pos + 1,
                genera[pos]
            )));
        }
        let gamma = genera.len();
        nodes.sort_by_key(|n| n.id);
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::InvalidCurve(format!("duplicate node id {}", pair[0].id)));
            }
        }
        for n in &nodes {
            if n.id == 0 {
                return Err(Error::InvalidCurve("node ids must be positive".into()));
            }
            for c in [n.first, n.second] {
                if c == 0 || c > gamma {
                    return Err(Error::InvalidCurve(format!(
                        "node {} references unknown component {c}",
                        n.id
                    )));
                }
            }
            if n.first == n.second {
                return Err(Error::InvalidCurve(format!(
                    "node {} glues component {} to itself",
                    n.id, n.first
                )));
            }
        }
        let curve = Self { genera, nodes };
        let all: BTreeSet<_> = curve.component_ids().collect();
        if !curve.is_connected_set(&all) {
            return Err(Error::InvalidCurve("the dual graph is not connected".into()));
        }
        Ok(curve)
    }

    /// Builds a curve from endpoint pairs; node ids are assigned `1, 2, …`.
    pub fn from_edges(genera: Vec<u32>, edges: &[(ComponentId, ComponentId)]) -> Result<Self> {
        let nodes = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Node::new(k + 1, a, b))
            .collect();
        Self::new(genera, nodes)
    }

    pub fn smooth(genus: u32) -> Result<Self> {
        Self::new(vec![genus], Vec::new())
    }

    /// Path `C_1 – C_2 – … – C_γ`.
    pub fn chain(genera: Vec<u32>) -> Result<Self> {
        let edges: Vec<_> = (1..genera.len()).map(|i| (i, i + 1)).collect();
        Self::from_edges(genera, &edges)
    }

    /// Star whose grip is the last component `C_γ`.
    pub fn comb(genera: Vec<u32>) -> Result<Self> {
        let gamma = genera.len();
        let edges: Vec<_> = (1..gamma).map(|i| (i, gamma)).collect();
        Self::from_edges(genera, &edges)
    }

    /// Number of components γ.
    pub fn gamma(&self) -> usize {
        self.genera.len()
    }

    /// Number of nodes δ.
    pub fn delta(&self) -> usize {
        self.nodes.len()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn component_ids(&self) -> impl Iterator<Item = ComponentId> {
        1..=self.genera.len()
    }

    pub fn check_component(&self, id: ComponentId) -> Result<()> {
        if id == 0 || id > self.gamma() {
            Err(Error::UnknownComponent(id))
        } else {
            Ok(())
        }
    }

    pub fn genus(&self, id: ComponentId) -> Result<u32> {
        self.check_component(id)?;
        Ok(self.genera[id - 1])
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// `p_a(C) = Σ g_i + δ − γ + 1`.
    pub fn arithmetic_genus(&self) -> i64 {
        let sum: i64 = self.genera.iter().map(|&g| i64::from(g)).sum();
        sum + self.delta() as i64 - self.gamma() as i64 + 1
    }

    /// δ_i, the number of nodes lying on `C_i`.
    pub fn node_degree(&self, id: ComponentId) -> Result<usize> {
        self.check_component(id)?;
        Ok(self.nodes.iter().filter(|n| n.touches(id)).count())
    }

    /// Neighbouring components, sorted, with multiplicity removed.
    pub fn neighbors(&self, id: ComponentId) -> Vec<ComponentId> {
        let set: BTreeSet<_> = self.nodes.iter().filter_map(|n| n.other(id)).collect();
        set.into_iter().collect()
    }

    /// True iff the dual graph is a tree.
    pub fn is_compact_type(&self) -> bool {
        // connected by construction, so acyclic ⇔ δ = γ − 1
        self.delta() + 1 == self.gamma()
    }

    pub fn require_compact_type(&self) -> Result<()> {
        if self.is_compact_type() {
            Ok(())
        } else {
            Err(Error::NotCompactType)
        }
    }

    pub fn classify(&self) -> CurveShape {
        if !self.is_compact_type() {
            return CurveShape::NotCompactType;
        }
        let gamma = self.gamma();
        let degrees: Vec<usize> = self
            .component_ids()
            .map(|c| self.nodes.iter().filter(|n| n.touches(c)).count())
            .collect();
        let chain = degrees.iter().all(|&d| d <= 2);
        let comb = degrees.iter().any(|&d| d + 1 == gamma) || gamma == 1;
        match (chain, comb) {
            (true, true) => CurveShape::ChainAndComb,
            (true, false) => CurveShape::Chain,
            (false, true) => CurveShape::Comb,
            (false, false) => CurveShape::Other,
        }
    }

    /// Whether the components in `set` span a connected subgraph. The empty
    /// set is not connected.
    pub fn is_connected_set(&self, set: &BTreeSet<ComponentId>) -> bool {
        let Some(&start) = set.iter().next() else {
            return false;
        };
        self.reachable_within(start, set).len() == set.len()
    }

    /// Components of `set` reachable from `start` without leaving `set`.
    pub fn reachable_within(
        &self,
        start: ComponentId,
        set: &BTreeSet<ComponentId>,
    ) -> BTreeSet<ComponentId> {
        let mut seen = BTreeSet::new();
        if !set.contains(&start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(c) = queue.pop_front() {
            for n in &self.nodes {
                if let Some(o) = n.other(c) {
                    if set.contains(&o) && seen.insert(o) {
                        queue.push_back(o);
                    }
                }
            }
        }
        seen
    }

    /// Connected pieces of the subgraph spanned by `set`, ordered by their
    /// smallest component id.
    pub fn connected_pieces(&self, set: &BTreeSet<ComponentId>) -> Vec<BTreeSet<ComponentId>> {
        let mut left = set.clone();
        let mut pieces = Vec::new();
        while let Some(&c) = left.iter().next() {
            let piece = self.reachable_within(c, &left);
            for x in &piece {
                left.remove(x);
            }
            pieces.push(piece);
        }
        pieces
    }

    /// Nodes with exactly one endpoint in `set`; their count is `B·B^c`.
    pub fn crossing_nodes(&self, set: &BTreeSet<ComponentId>) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| set.contains(&n.first) != set.contains(&n.second))
            .map(|n| n.id)
            .collect()
    }

    /// Nodes with both endpoints in `set`.
    pub fn internal_node_count(&self, set: &BTreeSet<ComponentId>) -> usize {
        self.nodes
            .iter()
            .filter(|n| set.contains(&n.first) && set.contains(&n.second))
            .count()
    }

    /// For every node of a compact-type curve, the two connected sides left by
    /// deleting it. `B` is the side holding the node's smaller endpoint.
    pub fn edge_splits(&self) -> Result<Vec<EdgeSplit>> {
        self.require_compact_type()?;
        let all: BTreeSet<_> = self.component_ids().collect();
        let mut out = Vec::with_capacity(self.delta());
        for n in &self.nodes {
            let start = n.first.min(n.second);
            let side = self.reachable_avoiding(start, n.id);
            let rest: BTreeSet<_> = all.difference(&side).copied().collect();
            out.push(EdgeSplit {
                node: n.id,
                side: Subcurve(side),
                complement: Subcurve(rest),
            });
        }
        Ok(out)
    }

    fn reachable_avoiding(&self, start: ComponentId, skip: NodeId) -> BTreeSet<ComponentId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for n in self.nodes.iter().filter(|n| n.id != skip) {
                if let Some(o) = n.other(c) {
                    if seen.insert(o) {
                        queue.push_back(o);
                    }
                }
            }
        }
        seen
    }

    /// Canonical text form, re-parseable by [`FromStr`].
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.genera.iter().enumerate() {
            let _ = writeln!(s, "component {} genus {}", i + 1, g);
        }
        for n in &self.nodes {
            let _ = writeln!(s, "node {} {} {}", n.id, n.first, n.second);
        }
        s
    }
}

/// A nonempty set of components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subcurve(BTreeSet<ComponentId>);

impl Subcurve {
    pub fn new(curve: &NodalCurve, ids: impl IntoIterator<Item = ComponentId>) -> Result<Self> {
        let set: BTreeSet<_> = ids.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidArgument("a subcurve must be nonempty".into()));
        }
        for &c in &set {
            curve.check_component(c)?;
        }
        Ok(Self(set))
    }

    pub fn whole(curve: &NodalCurve) -> Self {
        Self(curve.component_ids().collect())
    }

    pub fn single(id: ComponentId) -> Self {
        Self(BTreeSet::from([id]))
    }

    pub(crate) fn from_set(set: BTreeSet<ComponentId>) -> Self {
        debug_assert!(!set.is_empty());
        Self(set)
    }

    pub fn ids(&self) -> &BTreeSet<ComponentId> {
        &self.0
    }

    pub fn contains(&self, id: ComponentId) -> bool {
        self.0.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `B^c`, or `None` when `B` is the whole curve.
    pub fn complement(&self, curve: &NodalCurve) -> Option<Subcurve> {
        let rest: BTreeSet<_> = curve.component_ids().filter(|c| !self.0.contains(c)).collect();
        if rest.is_empty() {
            None
        } else {
            Some(Self(rest))
        }
    }

    pub fn is_connected(&self, curve: &NodalCurve) -> bool {
        curve.is_connected_set(&self.0)
    }

    /// `B·B^c`, the number of nodes joining `B` to its complement.
    pub fn intersection_with_complement(&self, curve: &NodalCurve) -> usize {
        curve.crossing_nodes(&self.0).len()
    }

    pub fn to_vec(&self) -> Vec<ComponentId> {
        self.0.iter().copied().collect()
    }
}

impl std::fmt::Display for Subcurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", crate::rational::fmt_ints(&self.to_vec()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSplit {
    pub node: NodeId,
    pub side: Subcurve,
    pub complement: Subcurve,
}

/// Strips a `#` comment and splits on whitespace.
pub(crate) fn tokens(line: &str) -> Vec<&str> {
    let line = line.split('#').next().unwrap_or("");
    line.split_whitespace().collect()
}

fn parse_positive(token: &str, line: usize, what: &str) -> std::result::Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(ParseError::new(line, format!("{what} must be a positive integer, got {token:?}"))),
    }
}

/// Parses the curve section of a curve file. Parsing stops at the first
/// `sheaf` line; descriptor blocks are read by [`crate::sheaf::parse_descriptors`].
impl FromStr for NodalCurve {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let mut genera: Vec<(usize, u32, usize)> = Vec::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut node_lines: Vec<usize> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks = tokens(raw);
            let Some(&head) = toks.first() else { continue };
            match head {
                "component" => {
                    if !nodes.is_empty() {
                        return Err(ParseError::new(line, "component lines must precede node lines"));
                    }
                    if toks.len() != 4 || toks[2] != "genus" {
                        return Err(ParseError::new(line, "expected `component <id> genus <g>`"));
                    }
                    let id = parse_positive(toks[1], line, "component id")?;
                    let g: u32 = toks[3]
                        .parse()
                        .map_err(|_| ParseError::new(line, format!("genus must be an integer, got {:?}", toks[3])))?;
                    if g < 2 {
                        return Err(ParseError::new(line, format!("component genus must be >= 2, got {g}")));
                    }
                    if genera.iter().any(|&(i, _, _)| i == id) {
                        return Err(ParseError::new(line, format!("duplicate component id {id}")));
                    }
                    genera.push((id, g, line));
                }
                "node" => {
                    if toks.len() != 4 {
                        return Err(ParseError::new(line, "expected `node <id> <comp_a> <comp_b>`"));
                    }
                    let id = parse_positive(toks[1], line, "node id")?;
                    let a = parse_positive(toks[2], line, "component id")?;
                    let b = parse_positive(toks[3], line, "component id")?;
                    if a == b {
                        return Err(ParseError::new(line, format!("self-node: node {id} glues component {a} to itself")));
                    }
                    for c in [a, b] {
                        if !genera.iter().any(|&(i, _, _)| i == c) {
                            return Err(ParseError::new(line, format!("node {id} references undeclared component {c}")));
                        }
                    }
                    if nodes.iter().any(|n| n.id == id) {
                        return Err(ParseError::new(line, format!("duplicate node id {id}")));
                    }
                    nodes.push(Node::new(id, a, b));
                    node_lines.push(line);
                }
                "sheaf" => break,
                other => {
                    return Err(ParseError::new(line, format!("unknown keyword {other:?}")));
                }
            }
        }
        if genera.is_empty() {
            return Err(ParseError::new(0, "no component lines"));
        }
        let gamma = genera.len();
        if let Some(&(id, _, line)) = genera.iter().find(|&&(id, _, _)| id > gamma) {
            return Err(ParseError::new(
                line,
                format!("component ids must be contiguous 1..{gamma}, found {id}"),
            ));
        }
        genera.sort_by_key(|&(id, _, _)| id);
        let genera = genera.into_iter().map(|(_, g, _)| g).collect();
        NodalCurve::new(genera, nodes).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn arithmetic_genus_examples() {
        assert_eq!(NodalCurve::smooth(3).unwrap().arithmetic_genus(), 3);
        assert_eq!(NodalCurve::chain(vec![2, 3]).unwrap().arithmetic_genus(), 5);
        assert_eq!(NodalCurve::comb(vec![2, 2, 2]).unwrap().arithmetic_genus(), 6);
        // two nodes between two components
        let banana = NodalCurve::from_edges(vec![2, 2], &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(banana.arithmetic_genus(), 5);
    }

    #[test]
    fn node_degree_examples() {
        let chain = NodalCurve::chain(vec![2, 2, 2]).unwrap();
        assert_eq!(chain.node_degree(2).unwrap(), 2);
        let comb = NodalCurve::comb(vec![2, 2, 2, 2]).unwrap();
        assert_eq!(comb.node_degree(4).unwrap(), 3);
        assert_eq!(NodalCurve::smooth(4).unwrap().node_degree(1).unwrap(), 0);
        assert!(matches!(chain.node_degree(4), Err(Error::UnknownComponent(4))));
    }

    #[test]
    fn compact_type_and_classification() {
        let chain3 = NodalCurve::chain(vec![2, 2, 2]).unwrap();
        assert!(chain3.is_compact_type());
        let banana = NodalCurve::from_edges(vec![2, 3], &[(1, 2), (2, 1)]).unwrap();
        assert!(!banana.is_compact_type());
        assert_eq!(banana.classify(), CurveShape::NotCompactType);
        assert!(NodalCurve::smooth(2).unwrap().is_compact_type());

        assert_eq!(NodalCurve::chain(vec![2; 4]).unwrap().classify(), CurveShape::Chain);
        assert_eq!(NodalCurve::comb(vec![2; 4]).unwrap().classify(), CurveShape::Comb);
        assert_eq!(NodalCurve::chain(vec![2, 3]).unwrap().classify(), CurveShape::ChainAndComb);
        // a path on three vertices is also a star
        assert_eq!(chain3.classify(), CurveShape::ChainAndComb);
        // spider with legs of length 1, 1, 2
        let other = NodalCurve::from_edges(vec![2; 5], &[(1, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        assert_eq!(other.classify(), CurveShape::Other);
    }

    #[test]
    fn edge_split_examples() {
        let two = NodalCurve::chain(vec![2, 3]).unwrap();
        let splits = two.edge_splits().unwrap();
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].side.ids(), &set(&[1]));
        assert_eq!(splits[0].complement.ids(), &set(&[2]));

        let chain = NodalCurve::chain(vec![2, 2, 2]).unwrap();
        let s = chain.edge_splits().unwrap();
        assert_eq!((s[0].side.ids(), s[0].complement.ids()), (&set(&[1]), &set(&[2, 3])));
        assert_eq!((s[1].side.ids(), s[1].complement.ids()), (&set(&[1, 2]), &set(&[3])));

        let comb = NodalCurve::comb(vec![2, 2, 2]).unwrap();
        let s = comb.edge_splits().unwrap();
        assert_eq!((s[0].side.ids(), s[0].complement.ids()), (&set(&[1]), &set(&[2, 3])));
        assert_eq!((s[1].side.ids(), s[1].complement.ids()), (&set(&[2]), &set(&[1, 3])));

        let banana = NodalCurve::from_edges(vec![2, 3], &[(1, 2), (2, 1)]).unwrap();
        assert!(matches!(banana.edge_splits(), Err(Error::NotCompactType)));
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(NodalCurve::new(vec![], vec![]).is_err());
        assert!(NodalCurve::smooth(1).is_err());
        assert!(NodalCurve::from_edges(vec![2, 2], &[(1, 1)]).is_err());
        assert!(NodalCurve::from_edges(vec![2, 2, 2], &[(1, 2)]).is_err());
        assert!(NodalCurve::from_edges(vec![2, 2], &[(1, 3)]).is_err());
    }

    #[test]
    fn subcurve_queries() {
        let chain = NodalCurve::chain(vec![2, 2, 2]).unwrap();
        let ends = Subcurve::new(&chain, [1, 3]).unwrap();
        assert!(!ends.is_connected(&chain));
        assert_eq!(ends.intersection_with_complement(&chain), 2);
        assert_eq!(ends.complement(&chain).unwrap().to_vec(), vec![2]);
        assert!(Subcurve::whole(&chain).complement(&chain).is_none());
        assert!(Subcurve::new(&chain, []).is_err());
        assert!(Subcurve::new(&chain, [4]).is_err());
    }

    #[test]
    fn parses_and_echoes() {
        let text = "# two components\ncomponent 2 genus 3\ncomponent 1 genus 2\nnode 7 1 2  # the node\n";
        let curve: NodalCurve = text.parse().unwrap();
        assert_eq!(curve.genera(), &[2, 3]);
        assert_eq!(curve.nodes()[0], Node::new(7, 1, 2));
        let again: NodalCurve = curve.to_file_string().parse().unwrap();
        assert_eq!(again, curve);
    }

    #[test]
    fn parse_errors_name_line_and_rule() {
        let cases = [
            ("component 1 genus 1\n", 1, "genus must be >= 2"),
            ("component 1 genus 2\nnode 1 1 1\n", 2, "self-node"),
            ("component 1 genus 2\ncomponent 3 genus 2\nnode 1 1 3\n", 2, "contiguous"),
            ("component 1 genus 2\ncomponent 1 genus 2\n", 2, "duplicate component"),
            ("component 1 genus 2\ncomponent 2 genus 2\nnode 1 1 2\ncomponent 3 genus 2\n", 4, "precede"),
            ("component 1 genus 2\nnode 1 1 2\n", 2, "undeclared"),
            ("component 1 genus 2\nfoo\n", 2, "unknown keyword"),
            ("component 1 genus 2\ncomponent 2 genus 2\n", 0, "not connected"),
        ];
        for (text, line, rule) in cases {
            let err = text.parse::<NodalCurve>().unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
            assert!(err.rule.contains(rule), "{text:?}: {err}");
        }
    }
}
