//! Brill-Noether arithmetic and nonemptiness certificates.
//!
//! A certificate for `B(r·1, d, k)` with `r = s + k` is assembled from a
//! small-slope component `X_{d_1,…,d_γ}` of the rank-`s` moduli space: the
//! locus then contains a component birational to a Grassmannian fibration
//! over `X`, so its dimension is `dim X + k·(h¹(F*) − k)`, which must equal
//! the Brill-Noether number.

use std::ops::RangeInclusive;

use num_traits::Zero;
use rayon::prelude::*;

use crate::components::{enumerate_components, small_slope_filter, ComponentTuple, StabilityReport};
use crate::curve::{ComponentId, NodalCurve};
use crate::ordering::{default_root, order_components};
use crate::polarization::{check_len, goodness_proxy, Polarization};
use crate::rational::{frac, int, Rational};
use crate::{Error, Result};

/// `β_C(r, d, k) = r²(p_a − 1) + 1 − k(k − d + r(p_a − 1))`.
pub fn bn_number(pa: i64, r: i64, d: i64, k: i64) -> Result<i128> {
    if pa < 2 || r < 1 || k < 0 {
        return Err(Error::InvalidArgument(format!(
            "need p_a >= 2, r >= 1, k >= 0 (got p_a={pa}, r={r}, k={k})"
        )));
    }
    let (pa, r, d, k) = (i128::from(pa), i128::from(r), i128::from(d), i128::from(k));
    Ok(r * r * (pa - 1) + 1 - k * (k - d + r * (pa - 1)))
}

/// Upper bound on the codimension of a Brill-Noether component in its moduli
/// component: `k(k − d + (Σ w_i r_i)(p_a − 1))`.
pub fn expected_codim(
    omega: &Polarization,
    multirank: &[u32],
    d: &Rational,
    k: i64,
    pa: i64,
) -> Result<Rational> {
    let r = weighted_rank(omega, multirank)?;
    Ok(int(k) * (int(k) - d + r * int(pa - 1)))
}

fn weighted_rank(omega: &Polarization, multirank: &[u32]) -> Result<Rational> {
    if multirank.len() != omega.len() {
        return Err(Error::InvalidArgument(format!(
            "multirank has {} entries for {} weights",
            multirank.len(),
            omega.len()
        )));
    }
    Ok(multirank
        .iter()
        .zip(omega.weights())
        .map(|(&r, w)| int(i64::from(r)) * w)
        .sum())
}

/// A named numerical clause with its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Clause {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub clauses: Vec<Clause>,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.pass)
    }
}

/// Necessary conditions for `B(r, d, k) ≠ ∅` with a good polarization:
/// `d ≥ 0`, and `d > 0` whenever `k < Σ w_i r_i`.
pub fn necessary_conditions(
    omega: &Polarization,
    multirank: &[u32],
    d: &Rational,
    k: i64,
) -> Result<Verdict> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let r = weighted_rank(omega, multirank)?;
    let mut clauses = vec![Clause::new("d >= 0", d >= &Rational::zero(), format!("d = {d}"))];
    let small_k = int(k) < r;
    clauses.push(Clause::new(
        "k < rk_w => d > 0",
        !small_k || d > &int(0),
        format!("k = {k}, rk_w = {r}, d = {d}"),
    ));
    Ok(Verdict { clauses })
}

/// Numerical conclusions for a BGN-type Brill-Noether element:
/// `d > 0`, `k < r` and `r ≤ d + (r − k)p_a`.
pub fn bgn_bounds(pa: i64, r: i64, d: i64, k: i64) -> Result<Verdict> {
    if r < 2 || k < 1 {
        return Err(Error::InvalidArgument(format!("need r >= 2 and k >= 1 (got r={r}, k={k})")));
    }
    Ok(Verdict {
        clauses: vec![
            Clause::new("d > 0", d > 0, format!("d = {d}")),
            Clause::new("k < r", k < r, format!("k = {k}, r = {r}")),
            Clause::new(
                "r <= d + (r-k)p_a",
                r <= d + (r - k) * pa,
                format!("{r} <= {}", d + (r - k) * pa),
            ),
        ],
    })
}

/// Per-component check `k ≤ (d_i + r(g_i − 1)) / g_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentBound {
    pub component: ComponentId,
    pub bound: Rational,
    pub pass: bool,
}

pub fn per_component_bgn(r: i64, k: i64, degrees: &[i64], genera: &[u32]) -> Result<Vec<ComponentBound>> {
    if degrees.len() != genera.len() {
        return Err(Error::InvalidArgument(format!(
            "{} degrees for {} genera",
            degrees.len(),
            genera.len()
        )));
    }
    Ok(degrees
        .iter()
        .zip(genera)
        .enumerate()
        .map(|(i, (&d, &g))| {
            let g = i64::from(g);
            let bound = frac(d + r * (g - 1), g);
            ComponentBound {
                component: i + 1,
                pass: int(k) <= bound,
                bound,
            }
        })
        .collect())
}

/// Right endpoint `d / (r − k)` of the open α-range `(0, d/(r − k))` of
/// nonempty coherent-system moduli for a good polarization.
pub fn alpha_range(r: i64, d: i64, k: i64) -> Result<Rational> {
    if k >= r {
        return Err(Error::InvalidArgument(format!("need k < r (got k={k}, r={r})")));
    }
    if d <= 0 {
        return Err(Error::InvalidArgument(format!("need d > 0 (got d={d})")));
    }
    Ok(frac(d, r - k))
}

/// `μ_{ω,α}(E, V) = deg_ω(E)/rk_ω(E) + α·k/rk_ω(E)`.
pub fn coherent_slope(wrank: &Rational, wdeg: &Rational, k: i64, alpha: &Rational) -> Result<Rational> {
    if wrank <= &Rational::zero() {
        return Err(Error::InvalidArgument("ω-rank must be positive".into()));
    }
    Ok(wdeg / wrank + alpha * int(k) / wrank)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNCertificate {
    pub genera: Vec<u32>,
    pub arithmetic_genus: i64,
    pub omega: Polarization,
    pub root: ComponentId,
    pub s: u32,
    pub k: i64,
    pub d: i64,
    pub r: i64,
    pub tuple: ComponentTuple,
    pub stability: StabilityReport,
    pub checklist: Vec<Clause>,
    pub component_bounds: Vec<ComponentBound>,
    pub beta: i128,
    pub dim_x: i128,
    pub h1_dual: i128,
    pub fiber_dim: i128,
}

impl BNCertificate {
    /// `β = dim X + k(h¹(F*) − k)`.
    pub fn identity_holds(&self) -> bool {
        self.beta == self.dim_x + self.fiber_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureReport {
    pub checklist: Vec<Clause>,
}

impl FailureReport {
    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.checklist.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified(Box<BNCertificate>),
    Failed(FailureReport),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }

    pub fn checklist(&self) -> &[Clause] {
        match self {
            Certification::Certified(c) => &c.checklist,
            Certification::Failed(f) => &f.checklist,
        }
    }
}

/// Attempts to certify a component of `B(r·1, d, k)`, `r = s + k`, of
/// dimension `β_C(r, d, k)`. The goodness proxy failing is an error; other
/// failed hypotheses give [`Certification::Failed`].
pub fn certify_bn_component(
    curve: &NodalCurve,
    omega: &Polarization,
    s: u32,
    k: i64,
    d: i64,
    root: Option<ComponentId>,
) -> Result<Certification> {
    curve.require_compact_type()?;
    check_len(curve, omega)?;
    if s < 1 || k < 1 {
        return Err(Error::InvalidArgument(format!("need s >= 1 and k >= 1 (got s={s}, k={k})")));
    }
    let goodness = goodness_proxy(curve, omega)?;
    if !goodness.pass() {
        let bad: Vec<String> = goodness
            .failures()
            .map(|f| format!("node {} side {} delta {}", f.node, f.side, f.delta))
            .collect();
        return Err(Error::Hypothesis(format!(
            "goodness proxy fails: {}",
            bad.join("; ")
        )));
    }
    let root = root.unwrap_or_else(|| default_root(curve));
    let decomposition = order_components(curve, root)?;
    let si = i64::from(s);
    let r = si + k;
    let pa = curve.arithmetic_genus();
    let genera = curve.genera();

    let mut checklist = vec![
        Clause::new("compact_type", true, format!("delta = {} = gamma - 1", curve.delta())),
        Clause::new("goodness_proxy", true, format!("{} edge splits with 0 < delta < 1", goodness.splits.len())),
    ];
    for (i, &g) in genera.iter().enumerate() {
        let cap = 1 + si * (i64::from(g) - 1);
        checklist.push(Clause::new(
            format!("k_bound_{}", i + 1),
            k <= cap,
            format!("k = {k} <= 1 + s(g_{} - 1) = {cap}", i + 1),
        ));
    }
    let catalog = enumerate_components(curve, omega, &decomposition, s, d)?;
    let small = small_slope_filter(&catalog, s);
    checklist.push(Clause::new(
        "small_slope_tuple",
        !small.is_empty(),
        format!("{} components, {} with 0 < d_i <= s", catalog.len(), small.len()),
    ));
    if curve.gamma() == 1 {
        let g = i64::from(genera[0]);
        let ok = d > 0 && d <= r && k * g <= r * (g - 1) + d && (d, k) != (r, r);
        checklist.push(Clause::new(
            "classical_smooth",
            ok,
            format!("0 < d <= r, kg = {} <= r(g-1)+d = {}, (d,k) != (r,r)", k * g, r * (g - 1) + d),
        ));
    }
    let Some(tuple) = small.into_iter().next().filter(|_| checklist.iter().all(|c| c.pass)) else {
        return Ok(Certification::Failed(FailureReport { checklist }));
    };

    let component_bounds = per_component_bgn(r, k, &tuple.degrees, genera)?;
    checklist.push(Clause::new(
        "per_component_bgn",
        component_bounds.iter().all(|b| b.pass),
        format!(
            "k <= (d_i + r(g_i - 1))/g_i with bounds {}",
            component_bounds
                .iter()
                .map(|b| b.bound.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    ));
    checklist.push(Clause::new(
        "degrees_within_r",
        tuple.degrees.iter().all(|&x| 0 < x && x <= r),
        format!("0 < d_i <= r = {r}"),
    ));
    let stability = crate::components::star_conditions(curve, omega, &decomposition, &tuple)?;

    let beta = bn_number(pa, r, d, k)?;
    let (s128, k128, pa128) = (i128::from(si), i128::from(k), i128::from(pa));
    let dim_x = s128 * s128 * (pa128 - 1) + 1;
    let h1_dual = i128::from(d) + s128 * (pa128 - 1);
    let fiber_dim = k128 * (h1_dual - k128);
    checklist.push(Clause::new(
        "dimension_identity",
        beta == dim_x + fiber_dim,
        format!("{beta} = {dim_x} + {fiber_dim}"),
    ));
    if !checklist.iter().all(|c| c.pass) || !stability.pass() {
        return Ok(Certification::Failed(FailureReport { checklist }));
    }
    Ok(Certification::Certified(Box::new(BNCertificate {
        genera: genera.to_vec(),
        arithmetic_genus: pa,
        omega: omega.clone(),
        root,
        s,
        k,
        d,
        r,
        tuple,
        stability,
        checklist,
        component_bounds,
        beta,
        dim_x,
        h1_dual,
        fiber_dim,
    })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScanStatus {
    Certified,
    /// Hypotheses hold but no certificate was found; not a counterexample.
    Open,
}

impl ScanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanStatus::Certified => "certified",
            ScanStatus::Open => "OPEN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScanRow {
    pub gamma: usize,
    pub genera: Vec<u32>,
    pub s: u32,
    pub d: i64,
    pub k: i64,
    pub status: ScanStatus,
    pub tuple: Option<Vec<i64>>,
    pub beta: Option<i128>,
}

/// Hypotheses of the nonemptiness conjecture: `2(γ−1) ≤ s`, `γ ≤ d ≤ s`,
/// `k·g_i ≤ 1 + s(g_i − 1)` for all `i`, and `k ≥ 1`.
pub fn conjecture_hypotheses(curve: &NodalCurve, s: u32, d: i64, k: i64) -> bool {
    let g = curve.gamma() as i64;
    let s = i64::from(s);
    k >= 1
        && 2 * (g - 1) <= s
        && g <= d
        && d <= s
        && curve
            .genera()
            .iter()
            .all(|&gi| k * i64::from(gi) <= 1 + s * (i64::from(gi) - 1))
}

/// Tries to certify every `(C, s, d, k)` of the grid that satisfies the
/// conjecture's hypotheses, at the canonical polarization. Rows are sorted
/// by `(γ, genera, s, d, k)`.
pub fn conjecture_scan(
    family: &[NodalCurve],
    s_range: RangeInclusive<u32>,
    d_range: RangeInclusive<i64>,
    k_range: RangeInclusive<i64>,
) -> Result<Vec<ScanRow>> {
    let mut jobs = Vec::new();
    for (ci, curve) in family.iter().enumerate() {
        curve.require_compact_type()?;
        for s in s_range.clone() {
            for d in d_range.clone() {
                for k in k_range.clone() {
                    if conjecture_hypotheses(curve, s, d, k) {
                        jobs.push((ci, s, d, k));
                    }
                }
            }
        }
    }
    let etas: Vec<Polarization> = family
        .iter()
        .map(Polarization::canonical)
        .collect::<Result<_>>()?;
    let mut rows = jobs
        .par_iter()
        .map(|&(ci, s, d, k)| {
            let curve = &family[ci];
            let cert = certify_bn_component(curve, &etas[ci], s, k, d, None)?;
            let (status, tuple, beta) = match cert {
                Certification::Certified(c) => (ScanStatus::Certified, Some(c.tuple.degrees), Some(c.beta)),
                Certification::Failed(_) => (ScanStatus::Open, None, None),
            };
            Ok(ScanRow {
                gamma: curve.gamma(),
                genera: curve.genera().to_vec(),
                s,
                d,
                k,
                status,
                tuple,
                beta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort();
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Chain,
    Comb,
}

/// All chain (or comb, grip last) curves with `1 ≤ γ ≤ gamma_max` and genera in
/// `2..=genus_max`, in lexicographic order of `(γ, genera)`.
pub fn curve_family(family: Family, gamma_max: usize, genus_max: u32) -> Result<Vec<NodalCurve>> {
    let mut out = Vec::new();
    for gamma in 1..=gamma_max {
        let mut genera = vec![2u32; gamma];
        loop {
            out.push(match family {
                Family::Chain => NodalCurve::chain(genera.clone())?,
                Family::Comb => NodalCurve::comb(genera.clone())?,
            });
            // odometer over 2..=genus_max
            let mut pos = gamma;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if genera[pos] < genus_max {
                    genera[pos] += 1;
                    for g in &mut genera[pos + 1..] {
                        *g = 2;
                    }
                    break;
                }
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX || genus_max < 2 {
                break;
            }
        }
    }
    Ok(out)
}
