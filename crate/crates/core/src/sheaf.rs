//! Numerical descriptors of depth-one sheaves.
//!
//! A descriptor records multirank, Euler characteristic, optional restriction
//! degrees and the stalk type `O_p^s ⊕ O_{x_1}^{a_1} ⊕ O_{x_2}^{a_2}` at every
//! node. The Euler characteristic is an input: it is not determined by the
//! restriction degrees unless the sheaf is locally free.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::curve::{tokens, NodalCurve, NodeId, Subcurve};
use crate::polarization::{check_len, euler_characteristic_structure_sheaf, Polarization};
use crate::rational::{int, Rational};
use crate::{Error, ParseError, Result};

/// Stalk type at a node. `first`/`second` refer to the node's endpoint order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LocalType {
    pub free: u32,
    pub first: u32,
    pub second: u32,
}

impl LocalType {
    pub fn new(free: u32, first: u32, second: u32) -> Self {
        Self { free, first, second }
    }

    pub fn free(rank: u32) -> Self {
        Self::new(rank, 0, 0)
    }

    pub fn is_free(&self) -> bool {
        self.first == 0 && self.second == 0
    }

    /// The same module with the roles of the two branches exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.free, self.second, self.first)
    }
}

/// `dim Ext¹(M, N) = a_1·b_2 + a_2·b_1` over the local ring of a node.
pub fn local_ext_dim(m: &LocalType, n: &LocalType) -> u64 {
    u64::from(m.first) * u64::from(n.second) + u64::from(m.second) * u64::from(n.first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafDescriptor<'c> {
    curve: &'c NodalCurve,
    multirank: Vec<u32>,
    chi: i64,
    degrees: Option<Vec<i64>>,
    stalks: BTreeMap<NodeId, LocalType>,
}

impl<'c> SheafDescriptor<'c> {
    /// Validates the stalk/multirank compatibility at every node.
    pub fn new(
        curve: &'c NodalCurve,
        multirank: Vec<u32>,
        chi: i64,
        degrees: Option<Vec<i64>>,
        stalks: BTreeMap<NodeId, LocalType>,
    ) -> Result<Self> {
        let gamma = curve.gamma();
        if multirank.len() != gamma {
            return Err(Error::InvalidSheaf(format!(
                "multirank has {} entries for {gamma} components",
                multirank.len()
            )));
        }
        if let Some(d) = &degrees {
            if d.len() != gamma {
                return Err(Error::InvalidSheaf(format!(
                    "{} restriction degrees for {gamma} components",
                    d.len()
                )));
            }
        }
        for id in stalks.keys() {
            if curve.node(*id).is_none() {
                return Err(Error::InvalidSheaf(format!("stalk given for unknown node {id}")));
            }
        }
        for n in curve.nodes() {
            let Some(t) = stalks.get(&n.id) else {
                return Err(Error::InvalidSheaf(format!("missing stalk type at node {}", n.id)));
            };
            let (ra, rb) = (multirank[n.first - 1], multirank[n.second - 1]);
            if ra != t.free + t.first || rb != t.free + t.second {
                return Err(Error::InvalidSheaf(format!(
                    "node {}: stalk ({}, {}, {}) incompatible with ranks r_{}={ra}, r_{}={rb}",
                    n.id, t.free, t.first, t.second, n.first, n.second
                )));
            }
        }
        Ok(Self {
            curve,
            multirank,
            chi,
            degrees,
            stalks,
        })
    }

    /// Vector bundle of rank `rank` with restriction degrees `degrees`;
    /// `χ = Σ d_i + r(1 − p_a)`.
    pub fn locally_free(curve: &'c NodalCurve, rank: u32, degrees: Vec<i64>) -> Result<Self> {
        let chi = degrees.iter().sum::<i64>() + i64::from(rank) * (1 - curve.arithmetic_genus());
        let stalks = curve.nodes().iter().map(|n| (n.id, LocalType::free(rank))).collect();
        Self::new(curve, vec![rank; curve.gamma()], chi, Some(degrees), stalks)
    }

    /// `O_B`: rank 1 on `B`, 0 elsewhere, restriction degrees 0.
    pub fn structure_sheaf(curve: &'c NodalCurve, b: &Subcurve) -> Result<Self> {
        let multirank = curve.component_ids().map(|c| u32::from(b.contains(c))).collect();
        let stalks = curve
            .nodes()
            .iter()
            .map(|n| {
                let t = match (b.contains(n.first), b.contains(n.second)) {
                    (true, true) => LocalType::free(1),
                    (true, false) => LocalType::new(0, 1, 0),
                    (false, true) => LocalType::new(0, 0, 1),
                    (false, false) => LocalType::default(),
                };
                (n.id, t)
            })
            .collect();
        let chi = euler_characteristic_structure_sheaf(curve, b.ids());
        Self::new(curve, multirank, chi, Some(vec![0; curve.gamma()]), stalks)
    }

    pub fn curve(&self) -> &'c NodalCurve {
        self.curve
    }

    pub fn multirank(&self) -> &[u32] {
        &self.multirank
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chi
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    pub fn stalks(&self) -> &BTreeMap<NodeId, LocalType> {
        &self.stalks
    }

    pub fn with_degrees(mut self, degrees: Vec<i64>) -> Result<Self> {
        if degrees.len() != self.curve.gamma() {
            return Err(Error::InvalidSheaf("wrong number of restriction degrees".into()));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    /// `rk_ω(E) = Σ r_i w_i`.
    pub fn wrank(&self, omega: &Polarization) -> Result<Rational> {
        check_len(self.curve, omega)?;
        Ok(self
            .multirank
            .iter()
            .zip(omega.weights())
            .map(|(&r, w)| int(i64::from(r)) * w)
            .sum())
    }

    /// `deg_ω(E) = χ(E) − rk_ω(E)·(1 − p_a)`.
    pub fn wdeg(&self, omega: &Polarization) -> Result<Rational> {
        let rk = self.wrank(omega)?;
        Ok(int(self.chi) - rk * int(1 - self.curve.arithmetic_genus()))
    }

    /// `μ_ω(E) = deg_ω(E) / rk_ω(E)`.
    pub fn wslope(&self, omega: &Polarization) -> Result<Rational> {
        let rk = self.wrank(omega)?;
        if rk.is_zero() {
            return Err(Error::InvalidSheaf("slope undefined for zero ω-rank".into()));
        }
        Ok(self.wdeg(omega)? / rk)
    }

    /// `Δ_ω(E) = deg_ω(E) − Σ deg(E_i)`; needs restriction degrees.
    pub fn delta(&self, omega: &Polarization) -> Result<Rational> {
        let degrees = self
            .degrees
            .as_ref()
            .ok_or_else(|| Error::InvalidSheaf("restriction degrees are required for Δ".into()))?;
        Ok(self.wdeg(omega)? - int(degrees.iter().sum()))
    }

    pub fn is_locally_free(&self) -> bool {
        self.stalks.values().all(LocalType::is_free)
    }
}

/// `Σ_nodes (a_1 b_2 + a_2 b_1)`: the contribution of the local Ext sheaves to
/// `dim Ext¹(E, F)`. The `h¹(Hom(E, F))` summand is not computed.
pub fn global_ext_defect(e: &SheafDescriptor<'_>, f: &SheafDescriptor<'_>) -> Result<u64> {
    if e.curve != f.curve {
        return Err(Error::InvalidSheaf("descriptors live on different curves".into()));
    }
    Ok(e
        .curve
        .nodes()
        .iter()
        .map(|n| local_ext_dim(&e.stalks[&n.id], &f.stalks[&n.id]))
        .sum())
}

/// Reads every `sheaf` block of a curve file.
///
/// Grammar inside a block: `rank r_1 … r_γ`, `chi <int>`, optional
/// `degrees d_1 … d_γ`, and `stalk <node> <s> <a_first> <a_second>` per node.
/// A node without a `stalk` line gets the free type when the ranks on both
/// sides agree.
pub fn parse_descriptors<'c>(curve: &'c NodalCurve, text: &str) -> std::result::Result<Vec<SheafDescriptor<'c>>, ParseError> {
    #[derive(Default)]
    struct Block {
        start: usize,
        rank: Option<Vec<u32>>,
        chi: Option<i64>,
        degrees: Option<Vec<i64>>,
        stalks: BTreeMap<NodeId, LocalType>,
    }

    fn finish<'c>(curve: &'c NodalCurve, b: Block) -> std::result::Result<SheafDescriptor<'c>, ParseError> {
        let rank = b.rank.ok_or_else(|| ParseError::new(b.start, "sheaf block without `rank` line"))?;
        let chi = b.chi.ok_or_else(|| ParseError::new(b.start, "sheaf block without `chi` line"))?;
        let mut stalks = b.stalks;
        for n in curve.nodes() {
            if let std::collections::btree_map::Entry::Vacant(e) = stalks.entry(n.id) {
                let (ra, rb) = (rank.get(n.first - 1), rank.get(n.second - 1));
                match (ra, rb) {
                    (Some(&x), Some(&y)) if x == y => {
                        e.insert(LocalType::free(x));
                    }
                    _ => {
                        return Err(ParseError::new(
                            b.start,
                            format!("node {} needs a `stalk` line (ranks differ across it)", n.id),
                        ))
                    }
                }
            }
        }
        SheafDescriptor::new(curve, rank, chi, b.degrees, stalks)
            .map_err(|e| ParseError::new(b.start, e.to_string()))
    }

    fn ints<T: std::str::FromStr>(toks: &[&str], line: usize) -> std::result::Result<Vec<T>, ParseError> {
        toks.iter()
            .map(|t| t.parse::<T>().map_err(|_| ParseError::new(line, format!("bad integer {t:?}"))))
            .collect()
    }

    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    let gamma = curve.gamma();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&head) = toks.first() else { continue };
        if head == "sheaf" {
            if toks.len() != 1 {
                return Err(ParseError::new(line, "`sheaf` takes no arguments"));
            }
            if let Some(b) = current.take() {
                out.push(finish(curve, b)?);
            }
            current = Some(Block {
                start: line,
                ..Block::default()
            });
            continue;
        }
        let Some(block) = current.as_mut() else {
            // curve section
            continue;
        };
        match head {
            "rank" | "degrees" if toks.len() != gamma + 1 => {
                return Err(ParseError::new(line, format!("`{head}` needs {gamma} values")));
            }
            "rank" => block.rank = Some(ints(&toks[1..], line)?),
            "degrees" => block.degrees = Some(ints(&toks[1..], line)?),
            "chi" => {
                if toks.len() != 2 {
                    return Err(ParseError::new(line, "expected `chi <int>`"));
                }
                block.chi = Some(ints(&toks[1..], line)?[0]);
            }
            "stalk" => {
                if toks.len() != 5 {
                    return Err(ParseError::new(line, "expected `stalk <node> <s> <a_first> <a_second>`"));
                }
                let v: Vec<u32> = ints(&toks[1..], line)?;
                let node = v[0] as NodeId;
                if curve.node(node).is_none() {
                    return Err(ParseError::new(line, format!("unknown node {node}")));
                }
                if block.stalks.insert(node, LocalType::new(v[1], v[2], v[3])).is_some() {
                    return Err(ParseError::new(line, format!("duplicate stalk for node {node}")));
                }
            }
            other => return Err(ParseError::new(line, format!("unknown keyword {other:?} in sheaf block"))),
        }
    }
    if let Some(b) = current.take() {
        out.push(finish(curve, b)?);
    }
    Ok(out)
}
