//! Components of the moduli space of ω-semistable depth-one sheaves of
//! multirank `s·1` and ω-degree `d` on a compact-type curve.
//!
//! Components correspond to degree tuples `(d_1, …, d_γ)` with `Σ d_i = d`
//! satisfying, for every separating subcurve `A_j` of an ordering,
//!
//! ```text
//! (⋆)_j   rk_ω(O_{A_j})·d − s·Δ_ω(O_{A_j})  <  Σ_{C_i ⊆ A_j} d_i  <  rk_ω(O_{A_j})·d + s·(1 − Δ_ω(O_{A_j}))
//! ```
//!
//! Each interval is open of width exactly `s`. Since `A_j` contains `C_{π(j)}`
//! and otherwise only earlier components, the partial sums determine the
//! degrees by back-substitution, which is how [`enumerate_components`] walks
//! the catalog.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::curve::{ComponentId, CurveShape, NodalCurve, Subcurve};
use crate::ordering::{default_root, order_components, verify_decomposition, OrderedDecomposition};
use crate::polarization::{check_len, delta_structure_sheaf, Polarization};
use crate::rational::{ceil_strict, fmt_ints, frac, int, open_interval_integers, to_i64, Rational};
use crate::{Error, Result};

/// Degrees `(d_1, …, d_γ)` indexed by component id, for rank `s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentTuple {
    pub rank: u32,
    pub degrees: Vec<i64>,
}

impl ComponentTuple {
    pub fn new(rank: u32, degrees: Vec<i64>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank s must be positive".into()));
        }
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("empty degree tuple".into()));
        }
        Ok(Self { rank, degrees })
    }

    pub fn total(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn degree(&self, id: ComponentId) -> i64 {
        self.degrees[id - 1]
    }

    /// Every restriction slope `d_i / s` lies in `(0, 1]`.
    pub fn is_small_slope(&self) -> bool {
        let s = i64::from(self.rank);
        self.degrees.iter().all(|&x| 0 < x && x <= s)
    }
}

impl fmt::Display for ComponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_ints(&self.degrees))
    }
}

/// One `(⋆)_j` interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarBound {
    pub j: usize,
    pub subcurve: Subcurve,
    pub wrank: Rational,
    pub delta: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

/// The `(⋆)_j` intervals for fixed `(C, ω, ordering, s, d)`.
#[derive(Debug, Clone)]
pub struct StarSystem {
    pub rank: u32,
    pub degree: i64,
    pub decomposition: OrderedDecomposition,
    pub bounds: Vec<StarBound>,
}

impl StarSystem {
    pub fn new(
        curve: &NodalCurve,
        omega: &Polarization,
        decomposition: &OrderedDecomposition,
        rank: u32,
        degree: i64,
    ) -> Result<Self> {
        curve.require_compact_type()?;
        check_len(curve, omega)?;
        if rank == 0 {
            return Err(Error::InvalidArgument("rank s must be positive".into()));
        }
        let violations = verify_decomposition(curve, decomposition);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidDecomposition(v.to_string()));
        }
        let s = int(i64::from(rank));
        let d = int(degree);
        let bounds = decomposition
            .subcurves
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let wrank = omega.wrank_subcurve(a);
                let delta = delta_structure_sheaf(curve, omega, a);
                let lower = &wrank * &d - &s * &delta;
                let upper = &wrank * &d + &s * (int(1) - &delta);
                StarBound {
                    j: k + 1,
                    subcurve: a.clone(),
                    wrank,
                    delta,
                    lower,
                    upper,
                }
            })
            .collect();
        Ok(Self {
            rank,
            degree,
            decomposition: decomposition.clone(),
            bounds,
        })
    }

    pub fn check(&self, tuple: &ComponentTuple) -> Result<StabilityReport> {
        let gamma = self.decomposition.gamma();
        if tuple.degrees.len() != gamma {
            return Err(Error::InvalidArgument(format!(
                "tuple has {} degrees for {gamma} components",
                tuple.degrees.len()
            )));
        }
        if tuple.rank != self.rank {
            return Err(Error::InvalidArgument(format!(
                "tuple rank {} differs from s = {}",
                tuple.rank, self.rank
            )));
        }
        let rows = self
            .bounds
            .iter()
            .map(|b| {
                let sigma: i64 = b.subcurve.ids().iter().map(|&c| tuple.degree(c)).sum();
                let sq = int(sigma);
                StarRow {
                    j: b.j,
                    subcurve: b.subcurve.clone(),
                    lower: b.lower.clone(),
                    partial_sum: sigma,
                    upper: b.upper.clone(),
                    pass: b.lower < sq && sq < b.upper,
                }
            })
            .collect();
        Ok(StabilityReport {
            degree_matches: tuple.total() == self.degree,
            rows,
        })
    }

    /// All tuples of total degree `d` satisfying every `(⋆)_j`, sorted.
    pub fn enumerate(&self) -> Vec<ComponentTuple> {
        let gamma = self.decomposition.gamma();
        let order = &self.decomposition.order;
        // for step j: the members of A_j other than π(j)
        let others: Vec<Vec<ComponentId>> = self
            .bounds
            .iter()
            .zip(order)
            .map(|(b, &c)| b.subcurve.ids().iter().copied().filter(|&x| x != c).collect())
            .collect();
        let choices: Vec<Vec<i64>> = self
            .bounds
            .iter()
            .map(|b| open_interval_integers(&b.lower, &b.upper))
            .collect();

        let mut out = Vec::new();
        let mut degrees = vec![0i64; gamma];
        self.descend(0, &choices, &others, &mut degrees, &mut out);
        out.sort();
        out
    }

    fn descend(
        &self,
        step: usize,
        choices: &[Vec<i64>],
        others: &[Vec<ComponentId>],
        degrees: &mut [i64],
        out: &mut Vec<ComponentTuple>,
    ) {
        let order = &self.decomposition.order;
        if step == choices.len() {
            let root = *order.last().expect("nonempty");
            let assigned: i64 = order[..step].iter().map(|&c| degrees[c - 1]).sum();
            degrees[root - 1] = self.degree - assigned;
            out.push(ComponentTuple {
                rank: self.rank,
                degrees: degrees.to_vec(),
            });
            return;
        }
        let c = order[step];
        let below: i64 = others[step].iter().map(|&x| degrees[x - 1]).sum();
        for &sigma in &choices[step] {
            degrees[c - 1] = sigma - below;
            self.descend(step + 1, choices, others, degrees, out);
        }
    }

    /// `d + s·χ(O_C) = d + s(1 − p_a)`, the rate at which the bounds move
    /// under a perturbation of ω.
    pub fn perturbation_coefficient(&self, curve: &NodalCurve) -> Rational {
        int(self.degree + i64::from(self.rank) * (1 - curve.arithmetic_genus()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarRow {
    pub j: usize,
    pub subcurve: Subcurve,
    pub lower: Rational,
    pub partial_sum: i64,
    pub upper: Rational,
    pub pass: bool,
}

impl StarRow {
    pub fn slack_lower(&self) -> Rational {
        int(self.partial_sum) - &self.lower
    }

    pub fn slack_upper(&self) -> Rational {
        &self.upper - int(self.partial_sum)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub degree_matches: bool,
    pub rows: Vec<StarRow>,
}

impl StabilityReport {
    pub fn pass(&self) -> bool {
        self.degree_matches && self.rows.iter().all(|r| r.pass)
    }
}

pub fn star_conditions(
    curve: &NodalCurve,
    omega: &Polarization,
    decomposition: &OrderedDecomposition,
    tuple: &ComponentTuple,
) -> Result<StabilityReport> {
    StarSystem::new(curve, omega, decomposition, tuple.rank, tuple.total())?.check(tuple)
}

pub fn enumerate_components(
    curve: &NodalCurve,
    omega: &Polarization,
    decomposition: &OrderedDecomposition,
    rank: u32,
    degree: i64,
) -> Result<Vec<ComponentTuple>> {
    Ok(StarSystem::new(curve, omega, decomposition, rank, degree)?.enumerate())
}

/// Keeps the tuples with `0 < d_i ≤ s` for all `i`.
pub fn small_slope_filter(catalog: &[ComponentTuple], rank: u32) -> Vec<ComponentTuple> {
    catalog
        .iter()
        .filter(|t| t.rank == rank && t.is_small_slope())
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    Finite(Rational),
    Unbounded,
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Guaranteed ∞-norm radius around ω inside which every `(⋆)_j` persists:
/// `min_j min(slack_lo, slack_hi) / (|d + s(1 − p_a)|·a_j)`.
pub fn robustness_radius(
    curve: &NodalCurve,
    omega: &Polarization,
    decomposition: &OrderedDecomposition,
    tuple: &ComponentTuple,
) -> Result<Radius> {
    Ok(binding_condition(curve, omega, decomposition, tuple)?
        .map_or(Radius::Unbounded, |b| Radius::Finite(b.ratio)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// The `(⋆)_j` with the smallest slack-to-coefficient ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingCondition {
    pub j: usize,
    pub side: BoundSide,
    pub slack: Rational,
    pub coefficient: Rational,
    pub ratio: Rational,
}

pub fn binding_condition(
    curve: &NodalCurve,
    omega: &Polarization,
    decomposition: &OrderedDecomposition,
    tuple: &ComponentTuple,
) -> Result<Option<BindingCondition>> {
    let system = StarSystem::new(curve, omega, decomposition, tuple.rank, tuple.total())?;
    let report = system.check(tuple)?;
    if !report.pass() {
        return Err(Error::Hypothesis(format!(
            "tuple ({tuple}) fails the stability conditions at the given polarization"
        )));
    }
    let coefficient = system.perturbation_coefficient(curve);
    if coefficient.is_zero() {
        return Ok(None);
    }
    let mut best: Option<BindingCondition> = None;
    for row in &report.rows {
        let (lo, hi) = (row.slack_lower(), row.slack_upper());
        let (side, slack) = if lo <= hi {
            (BoundSide::Lower, lo)
        } else {
            (BoundSide::Upper, hi)
        };
        let a_j = int(row.subcurve.len() as i64);
        let ratio = &slack / (coefficient.abs() * a_j);
        if best.as_ref().is_none_or(|b| ratio < b.ratio) {
            best = Some(BindingCondition {
                j: row.j,
                side,
                slack,
                coefficient: coefficient.clone(),
                ratio,
            });
        }
    }
    Ok(best)
}

/// A perturbation ε (Σ ε = 0) of ∞-norm above the radius that breaks the
/// binding condition: ε is constant on `A_j`, pushing the binding bound past
/// the partial sum by the factor `1 + overshoot`, and balanced evenly on the
/// complement.
pub fn binding_witness(
    curve: &NodalCurve,
    omega: &Polarization,
    decomposition: &OrderedDecomposition,
    tuple: &ComponentTuple,
    overshoot: &Rational,
) -> Result<Option<(BindingCondition, Vec<Rational>)>> {
    if !overshoot.is_positive() {
        return Err(Error::InvalidArgument("overshoot must be positive".into()));
    }
    let Some(b) = binding_condition(curve, omega, decomposition, tuple)? else {
        return Ok(None);
    };
    let a = &decomposition.subcurves[b.j - 1];
    let gamma = curve.gamma() as i64;
    let a_len = a.len() as i64;
    let t = &b.ratio * (int(1) + overshoot);
    // lower bound rises when coefficient·Σ_{A_j} ε > 0
    let up = match b.side {
        BoundSide::Lower => b.coefficient.is_positive(),
        BoundSide::Upper => b.coefficient.is_negative(),
    };
    let inside = if up { t.clone() } else { -t.clone() };
    let outside = -&inside * frac(a_len, gamma - a_len);
    let eps = curve
        .component_ids()
        .map(|c| if a.contains(c) { inside.clone() } else { outside.clone() })
        .collect();
    Ok(Some((b, eps)))
}

/// Result of enumerating the catalog once per root choice.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub reference_root: ComponentId,
    pub reference: Vec<ComponentTuple>,
    /// `(root, tuples only in this root's catalog, tuples only in the reference)`
    pub differences: Vec<(ComponentId, Vec<ComponentTuple>, Vec<ComponentTuple>)>,
}

impl InvarianceReport {
    pub fn pass(&self) -> bool {
        self.differences.is_empty()
    }
}

pub fn catalog_invariance_check(
    curve: &NodalCurve,
    omega: &Polarization,
    rank: u32,
    degree: i64,
) -> Result<InvarianceReport> {
    let reference_root = default_root(curve);
    let reference = catalog_for_root(curve, omega, reference_root, rank, degree)?;
    let ref_set: BTreeSet<_> = reference.iter().cloned().collect();
    let mut differences = Vec::new();
    for root in curve.component_ids().filter(|&r| r != reference_root) {
        let cat: BTreeSet<_> = catalog_for_root(curve, omega, root, rank, degree)?
            .into_iter()
            .collect();
        if cat != ref_set {
            let extra = cat.difference(&ref_set).cloned().collect();
            let missing = ref_set.difference(&cat).cloned().collect();
            differences.push((root, extra, missing));
        }
    }
    Ok(InvarianceReport {
        reference_root,
        reference,
        differences,
    })
}

pub fn catalog_for_root(
    curve: &NodalCurve,
    omega: &Polarization,
    root: ComponentId,
    rank: u32,
    degree: i64,
) -> Result<Vec<ComponentTuple>> {
    let d = order_components(curve, root)?;
    enumerate_components(curve, omega, &d, rank, degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TecCase {
    /// `γ ≤ d ≤ s/2 + 1`
    A,
    /// `s/2 + 1 < d ≤ s`, `s/2 ≥ γ − 1`, some `η_i d ≥ s/2`
    B,
    /// `s/2 + 1 < d ≤ sγ`, `s/2 ≥ γ − 1`, `η_i d` near `n + 1/2` for all but one `i`
    C,
}

impl TecCase {
    pub fn as_str(self) -> &'static str {
        match self {
            TecCase::A => "a",
            TecCase::B => "b",
            TecCase::C => "c",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TecOutcome {
    pub case: Option<TecCase>,
    pub tuple: Option<ComponentTuple>,
    /// The component that plays the role of `C_γ` in the construction.
    pub special: Option<ComponentId>,
}

/// Degree tuple `1` everywhere except `d − γ + 1` on `special`.
fn ones_except(gamma: usize, special: ComponentId, rank: u32, degree: i64) -> ComponentTuple {
    let mut degrees = vec![1i64; gamma];
    degrees[special - 1] = degree - gamma as i64 + 1;
    ComponentTuple { rank, degrees }
}

/// Sufficient numerical conditions (a), (b), (c) for a small-slope component
/// at the canonical polarization, tested in that order.
pub fn tec_builder(curve: &NodalCurve, rank: u32, degree: i64) -> Result<TecOutcome> {
    curve.require_compact_type()?;
    if rank == 0 {
        return Err(Error::InvalidArgument("rank s must be positive".into()));
    }
    let eta = Polarization::canonical(curve)?;
    let gamma = curve.gamma();
    let g = gamma as i64;
    let s = int(i64::from(rank));
    let d = int(degree);
    let half_s = &s / int(2);
    let none = TecOutcome {
        case: None,
        tuple: None,
        special: None,
    };

    if g <= degree && d <= &half_s + int(1) {
        let special = gamma;
        return Ok(TecOutcome {
            case: Some(TecCase::A),
            tuple: Some(ones_except(gamma, special, rank, degree)),
            special: Some(special),
        });
    }
    let mid = d > &half_s + int(1) && half_s >= int(g - 1);
    if !mid {
        return Ok(none);
    }
    if degree <= i64::from(rank) {
        if let Some(special) = curve
            .component_ids()
            .find(|&c| eta.weight(c) * &d >= half_s)
        {
            return Ok(TecOutcome {
                case: Some(TecCase::B),
                tuple: Some(ones_except(gamma, special, rank, degree)),
                special: Some(special),
            });
        }
    }
    if gamma >= 2 && degree <= i64::from(rank) * g {
        let n = degree.div_euclid(g);
        let m = degree.rem_euclid(g) as usize;
        let spread = &s / int(2 * (g - 1));
        let lo = int(n + 1) - &spread;
        let hi = int(n) + &spread;
        let outliers: Vec<ComponentId> = curve
            .component_ids()
            .filter(|&c| {
                let x = eta.weight(c) * &d;
                !(lo < x && x < hi)
            })
            .collect();
        if outliers.len() <= 1 {
            let degrees = (0..gamma).map(|i| if i < m { n + 1 } else { n }).collect();
            return Ok(TecOutcome {
                case: Some(TecCase::C),
                tuple: Some(ComponentTuple { rank, degrees }),
                special: Some(outliers.first().copied().unwrap_or(gamma)),
            });
        }
    }
    Ok(none)
}

fn single_component(rank: u32, degree: i64) -> Result<ComponentTuple> {
    if 0 < degree && degree <= i64::from(rank) {
        ComponentTuple::new(rank, vec![degree])
    } else {
        Err(Error::Hypothesis(format!(
            "single component needs 0 < d <= s, got d = {degree}, s = {rank}"
        )))
    }
}

fn check_small_range(gamma: usize, rank: u32, degree: i64) -> Result<()> {
    let g = gamma as i64;
    let s = i64::from(rank);
    if s < 2 * (g - 1) {
        return Err(Error::Hypothesis(format!(
            "s >= 2(gamma-1) fails: s = {s}, 2(gamma-1) = {}",
            2 * (g - 1)
        )));
    }
    if !(g <= degree && degree <= s) {
        return Err(Error::Hypothesis(format!(
            "gamma <= d <= s fails: gamma = {g}, d = {degree}, s = {s}"
        )));
    }
    Ok(())
}

/// Endpoints of a path-shaped dual graph, smallest first.
fn path_ends(curve: &NodalCurve) -> (ComponentId, ComponentId) {
    let ends: Vec<_> = curve
        .component_ids()
        .filter(|&c| curve.node_degree(c).expect("valid id") == 1)
        .collect();
    (ends[0], ends[ends.len() - 1])
}

/// Builds a small-slope tuple on a chain-like curve by the prefix-sum
/// recurrence, taking the smallest admissible prefix sum at every step.
/// The ordering walks the chain towards its larger-id end.
pub fn chain_builder(curve: &NodalCurve, rank: u32, degree: i64) -> Result<ComponentTuple> {
    let shape = curve.classify();
    if !shape.is_chain() {
        return Err(Error::Hypothesis(format!("curve is {}, not chain-like", shape.as_str())));
    }
    let gamma = curve.gamma();
    if gamma == 1 {
        return single_component(rank, degree);
    }
    check_small_range(gamma, rank, degree)?;
    let (_, root) = path_ends(curve);
    let decomposition = order_components(curve, root)?;
    let order = &decomposition.order;
    let eta = Polarization::canonical(curve)?;
    let g = gamma as i64;
    let d = int(degree);
    let half_s = int(i64::from(rank)) / int(2);

    let mut degrees = vec![0i64; gamma];
    let mut prefix = 0i64;
    let mut weight = int(0);
    for j in 1..gamma {
        let c = order[j - 1];
        weight += eta.weight(c);
        let centre = &weight * &d;
        let lower_strict = &centre - &half_s;
        let upper_strict = &centre + &half_s - int(g - j as i64 - 1);
        let upper_weak = degree - (g - j as i64);
        let x = (prefix + 1).max(to_i64(&ceil_strict(&lower_strict)));
        if x > upper_weak || int(x) >= upper_strict {
            return Err(Error::Hypothesis(format!(
                "step j={j}: no integer x with max({}, {lower_strict}) < x, x <= {upper_weak}, x < {upper_strict}",
                prefix
            )));
        }
        degrees[c - 1] = x - prefix;
        prefix = x;
    }
    degrees[root - 1] = degree - prefix;
    ComponentTuple::new(rank, degrees)
}

/// Builds `(1, …, 1, d − γ + 1)` with the grip last on a comb-like curve,
/// or defers to case (b) of [`tec_builder`] when some `η_j d ≥ s/2 + 1`.
pub fn comb_builder(curve: &NodalCurve, rank: u32, degree: i64) -> Result<ComponentTuple> {
    let shape = curve.classify();
    if !shape.is_comb() {
        return Err(Error::Hypothesis(format!("curve is {}, not comb-like", shape.as_str())));
    }
    let gamma = curve.gamma();
    if gamma == 1 {
        return single_component(rank, degree);
    }
    check_small_range(gamma, rank, degree)?;
    let eta = Polarization::canonical(curve)?;
    let d = int(degree);
    let threshold = int(i64::from(rank)) / int(2) + int(1);
    if curve.component_ids().any(|c| eta.weight(c) * &d >= threshold) {
        let outcome = tec_builder(curve, rank, degree)?;
        return match (outcome.case, outcome.tuple) {
            (Some(TecCase::B), Some(t)) => Ok(t),
            _ => Err(Error::Hypothesis(
                "heavy component present but case (b) does not apply".into(),
            )),
        };
    }
    let grip = curve
        .component_ids()
        .filter(|&c| curve.node_degree(c).expect("valid id") + 1 == gamma)
        .max()
        .expect("comb-like curve has a grip");
    ComponentTuple::new(rank, ones_except(gamma, grip, rank, degree).degrees)
}

/// Which builder's hypotheses a `(C, s, d)` instance satisfies.
pub fn builder_hypotheses(curve: &NodalCurve, rank: u32, degree: i64) -> (bool, bool) {
    let shape: CurveShape = curve.classify();
    let in_range = check_small_range(curve.gamma(), rank, degree).is_ok()
        || (curve.gamma() == 1 && 0 < degree && degree <= i64::from(rank));
    (shape.is_chain() && in_range, shape.is_comb() && in_range)
}
