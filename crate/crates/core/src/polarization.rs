//! Polarizations: rational weights `0 < w_i < 1` on the components summing to 1.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::curve::{ComponentId, NodalCurve, NodeId, Subcurve};
use crate::rational::{fmt_list, frac, int, one, zero, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    weights: Vec<Rational>,
}

impl Polarization {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPolarization("no weights".into()));
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidPolarization(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        if weights.len() > 1 {
            if let Some(i) = weights
                .iter()
                .position(|w| !w.is_positive() || *w >= one())
            {
                return Err(Error::InvalidPolarization(format!(
                    "weight w_{} = {} is outside (0,1)",
                    i + 1,
                    weights[i]
                )));
            }
        }
        Ok(Self { weights })
    }

    /// Validates that the vector has one weight per component of `curve`.
    pub fn for_curve(curve: &NodalCurve, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != curve.gamma() {
            return Err(Error::InvalidPolarization(format!(
                "{} weights for {} components",
                weights.len(),
                curve.gamma()
            )));
        }
        Self::new(weights)
    }

    /// The polarization induced by the dualizing sheaf:
    /// `η_i = (2g_i − 2 + δ_i) / (2p_a − 2)`.
    pub fn canonical(curve: &NodalCurve) -> Result<Self> {
        let pa = curve.arithmetic_genus();
        if pa < 2 {
            return Err(Error::InvalidPolarization(format!(
                "canonical polarization needs p_a >= 2, got {pa}"
            )));
        }
        let weights = curve
            .component_ids()
            .map(|c| {
                let g = i64::from(curve.genera()[c - 1]);
                let deg = curve.node_degree(c).expect("valid id") as i64;
                frac(2 * g - 2 + deg, 2 * pa - 2)
            })
            .collect();
        Self::new(weights)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, id: ComponentId) -> &Rational {
        &self.weights[id - 1]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `rk_ω(O_B) = Σ_{C_i ⊆ B} w_i`.
    pub fn wrank_subcurve(&self, b: &Subcurve) -> Rational {
        self.wrank_set(b.ids())
    }

    pub(crate) fn wrank_set(&self, set: &BTreeSet<ComponentId>) -> Rational {
        set.iter().map(|&c| &self.weights[c - 1]).sum()
    }

    /// `ω + ε`, requiring `Σ ε_i = 0` and a valid result.
    pub fn perturb(&self, eps: &[Rational]) -> Result<Self> {
        if eps.len() != self.weights.len() {
            return Err(Error::InvalidPolarization(format!(
                "perturbation has {} entries for {} weights",
                eps.len(),
                self.weights.len()
            )));
        }
        let sum: Rational = eps.iter().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidPolarization(format!(
                "perturbation sums to {sum}, not 0"
            )));
        }
        Self::new(self.weights.iter().zip(eps).map(|(w, e)| w + e).collect())
    }

    /// Components with `w_j ≥ 1/2`. There can be two (γ = 2, equal weights).
    pub fn heavy_components(&self) -> Vec<ComponentId> {
        let half = frac(1, 2);
        (1..=self.weights.len())
            .filter(|&c| self.weights[c - 1] >= half)
            .collect()
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_list(&self.weights))
    }
}

/// `χ(O_B) = Σ_{C_i ⊆ B}(1 − g_i) − #(nodes inside B)`.
pub fn euler_characteristic_structure_sheaf(curve: &NodalCurve, b: &BTreeSet<ComponentId>) -> i64 {
    let genus_part: i64 = b.iter().map(|&c| 1 - i64::from(curve.genera()[c - 1])).sum();
    genus_part - curve.internal_node_count(b) as i64
}

/// `Δ_ω(O_B) = χ(O_B) − rk_ω(O_B)·(1 − p_a(C))`.
///
/// For connected `B` of a compact-type curve `χ(O_B) = 1 − Σ g_i`.
pub fn delta_structure_sheaf(curve: &NodalCurve, omega: &Polarization, b: &Subcurve) -> Rational {
    delta_set(curve, omega, b.ids())
}

pub(crate) fn delta_set(curve: &NodalCurve, omega: &Polarization, b: &BTreeSet<ComponentId>) -> Rational {
    let chi = int(euler_characteristic_structure_sheaf(curve, b));
    chi - omega.wrank_set(b) * int(1 - curve.arithmetic_genus())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDelta {
    pub node: NodeId,
    pub side: Subcurve,
    pub delta: Rational,
    pub ok: bool,
}

/// Edge-split goodness proxy: `0 < Δ_ω(O_B) < 1` for every edge split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub splits: Vec<SplitDelta>,
}

impl GoodnessReport {
    pub fn pass(&self) -> bool {
        self.splits.iter().all(|s| s.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SplitDelta> {
        self.splits.iter().filter(|s| !s.ok)
    }
}

pub fn goodness_proxy(curve: &NodalCurve, omega: &Polarization) -> Result<GoodnessReport> {
    check_len(curve, omega)?;
    let splits = curve
        .edge_splits()?
        .into_iter()
        .map(|split| {
            let delta = delta_structure_sheaf(curve, omega, &split.side);
            let ok = delta.is_positive() && delta < one();
            SplitDelta {
                node: split.node,
                side: split.side,
                delta,
                ok,
            }
        })
        .collect();
    Ok(GoodnessReport { splits })
}

pub(crate) fn check_len(curve: &NodalCurve, omega: &Polarization) -> Result<()> {
    if omega.len() != curve.gamma() {
        Err(Error::InvalidPolarization(format!(
            "{} weights for {} components",
            omega.len(),
            curve.gamma()
        )))
    } else {
        Ok(())
    }
}

/// Zero vector of length `n`.
pub fn no_perturbation(n: usize) -> Vec<Rational> {
    vec![zero(); n]
}
