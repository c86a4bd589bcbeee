//! Reference implementations used by the integration tests. Nothing here
//! calls into the ordering or enumeration code under test.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use nodal_bn::curve::NodalCurve;
use nodal_bn::polarization::{goodness_proxy, Polarization};
use nodal_bn::rational::{frac, to_i64, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// Small exact fraction over i128, always reduced with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q {
    pub n: i128,
    pub d: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Q {
    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Q { n: s * n / g, d: s * d / g }
    }
    pub fn int(n: i128) -> Self {
        Q { n, d: 1 }
    }
    pub fn add(self, o: Q) -> Q {
        Q::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }
    pub fn sub(self, o: Q) -> Q {
        self.add(Q { n: -o.n, d: o.d })
    }
    pub fn mul(self, o: Q) -> Q {
        Q::new(self.n * o.n, self.d * o.d)
    }
    pub fn from_big(x: &Rational) -> Q {
        Q::new(i128::from(to_i64(x.numer())), i128::from(to_i64(x.denom())))
    }
    pub fn to_big(self) -> Rational {
        frac(self.n as i64, self.d as i64)
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
}

/// Plain description of a tree-shaped curve.
#[derive(Debug, Clone)]
pub struct Tree {
    pub genera: Vec<i128>,
    /// 1-based endpoints, one entry per node
    pub edges: Vec<(usize, usize)>,
}

impl Tree {
    pub fn of(curve: &NodalCurve) -> Tree {
        Tree {
            genera: curve.genera().iter().map(|&g| i128::from(g)).collect(),
            edges: curve.nodes().iter().map(|n| (n.first, n.second)).collect(),
        }
    }

    pub fn gamma(&self) -> usize {
        self.genera.len()
    }

    pub fn pa(&self) -> i128 {
        self.genera.iter().sum::<i128>() + self.edges.len() as i128 - self.gamma() as i128 + 1
    }

    pub fn crossing(&self, b: &BTreeSet<usize>) -> usize {
        self.edges
            .iter()
            .filter(|(x, y)| b.contains(x) != b.contains(y))
            .count()
    }

    pub fn internal(&self, b: &BTreeSet<usize>) -> usize {
        self.edges
            .iter()
            .filter(|(x, y)| b.contains(x) && b.contains(y))
            .count()
    }

    pub fn connected(&self, b: &BTreeSet<usize>) -> bool {
        let Some(&start) = b.iter().next() else { return false };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(x, y) in &self.edges {
                for (p, q) in [(x, y), (y, x)] {
                    if p == v && b.contains(&q) && seen.insert(q) {
                        queue.push_back(q);
                    }
                }
            }
        }
        seen.len() == b.len()
    }

    /// Components on the side of edge `e` containing its first endpoint.
    pub fn side(&self, e: usize) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (1..=self.gamma()).collect();
        let (a, _) = self.edges[e];
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for (i, &(x, y)) in self.edges.iter().enumerate() {
                if i == e {
                    continue;
                }
                for (p, q) in [(x, y), (y, x)] {
                    if p == v && all.contains(&q) && seen.insert(q) {
                        queue.push_back(q);
                    }
                }
            }
        }
        seen
    }

    /// `χ(O_B) − w_B(1 − p_a)` with `χ(O_B) = Σ(1 − g_i) − internal nodes`.
    pub fn delta(&self, w: &[Q], b: &BTreeSet<usize>) -> Q {
        let chi: i128 = b.iter().map(|&i| 1 - self.genera[i - 1]).sum::<i128>() - self.internal(b) as i128;
        let wb = b.iter().fold(Q::int(0), |acc, &i| acc.add(w[i - 1]));
        Q::int(chi).sub(wb.mul(Q::int(1 - self.pa())))
    }

    pub fn eta(&self) -> Vec<Q> {
        let pa = self.pa();
        (1..=self.gamma())
            .map(|i| {
                let deg = self.edges.iter().filter(|(x, y)| *x == i || *y == i).count() as i128;
                Q::new(2 * self.genera[i - 1] - 2 + deg, 2 * pa - 2)
            })
            .collect()
    }

    /// Open interval for `Σ_B d_i` from the split `B | B^c`.
    fn window(&self, w: &[Q], s: i128, d: i128, b: &BTreeSet<usize>) -> (Q, Q) {
        let wb = b.iter().fold(Q::int(0), |acc, &i| acc.add(w[i - 1]));
        let delta = self.delta(w, b);
        let centre = wb.mul(Q::int(d));
        (
            centre.sub(Q::int(s).mul(delta)),
            centre.add(Q::int(s).mul(Q::int(1).sub(delta))),
        )
    }

    /// Both sides of every node with the open window for their degree sum.
    fn windows(&self, w: &[Q], s: i128, d: i128) -> Vec<(Vec<usize>, Q, Q)> {
        let mut out = Vec::new();
        for e in 0..self.edges.len() {
            let side = self.side(e);
            for b in [self.complement(&side), side] {
                let (lo, hi) = self.window(w, s, d, &b);
                out.push((b.into_iter().collect(), lo, hi));
            }
        }
        out
    }

    fn inside(windows: &[(Vec<usize>, Q, Q)], tuple: &[i64]) -> bool {
        windows.iter().all(|(b, lo, hi)| {
            let sigma = Q::int(b.iter().map(|&i| i128::from(tuple[i - 1])).sum());
            *lo < sigma && sigma < *hi
        })
    }

    /// Stability of a degree tuple: strict bounds on both sides of every node.
    pub fn stable(&self, w: &[Q], s: i128, tuple: &[i64]) -> bool {
        let d: i128 = tuple.iter().map(|&x| i128::from(x)).sum();
        Self::inside(&self.windows(w, s, d), tuple)
    }

    pub fn complement(&self, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        (1..=self.gamma()).filter(|i| !b.contains(i)).collect()
    }

    /// Every stable tuple of total degree `d`, by scanning a box. Component `i`
    /// is `d` minus the branch sums at `i`, each inside its open window.
    pub fn brute_force(&self, w: &[Q], s: i128, d: i128) -> BTreeSet<Vec<i64>> {
        let gamma = self.gamma();
        if gamma == 1 {
            return BTreeSet::from([vec![d as i64]]);
        }
        let mut ranges = Vec::new();
        for i in 1..=gamma {
            let (mut lo, mut hi) = (Q::int(d), Q::int(d));
            for (e, &(x, y)) in self.edges.iter().enumerate() {
                if x != i && y != i {
                    continue;
                }
                let side = self.side(e);
                let branch = if side.contains(&i) { self.complement(&side) } else { side };
                let (blo, bhi) = self.window(w, s, d, &branch);
                lo = lo.sub(bhi);
                hi = hi.sub(blo);
            }
            let lo = lo.n.div_euclid(lo.d) - 1;
            let hi = hi.n.div_euclid(hi.d) + 1;
            ranges.push((lo as i64, hi as i64));
        }
        let windows = self.windows(w, s, d);
        let mut out = BTreeSet::new();
        let mut cur = vec![0i64; gamma];
        fn rec(
            windows: &[(Vec<usize>, Q, Q)],
            d: i128,
            ranges: &[(i64, i64)],
            i: usize,
            cur: &mut Vec<i64>,
            out: &mut BTreeSet<Vec<i64>>,
        ) {
            let gamma = cur.len();
            if i == gamma - 1 {
                let rest = d as i64 - cur[..i].iter().sum::<i64>();
                if rest < ranges[i].0 || rest > ranges[i].1 {
                    return;
                }
                cur[i] = rest;
                if Tree::inside(windows, cur) {
                    out.insert(cur.clone());
                }
                return;
            }
            for x in ranges[i].0..=ranges[i].1 {
                cur[i] = x;
                rec(windows, d, ranges, i + 1, cur, out);
            }
        }
        rec(&windows, d, &ranges, 0, &mut cur, &mut out);
        out
    }
}

pub fn small_slope(tuple: &[i64], s: i64) -> bool {
    tuple.iter().all(|&x| 0 < x && x <= s)
}

pub fn weights(p: &Polarization) -> Vec<Q> {
    p.weights().iter().map(Q::from_big).collect()
}

/// Random labelled tree on `gamma` vertices with genera in `lo..=hi`.
pub fn random_tree<R: Rng>(rng: &mut R, gamma: usize, lo: u32, hi: u32) -> NodalCurve {
    let mut labels: Vec<usize> = (1..=gamma).collect();
    labels.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..gamma)
        .map(|i| (labels[rng.gen_range(0..i)], labels[i]))
        .collect();
    let genera = (0..gamma).map(|_| rng.gen_range(lo..=hi)).collect();
    NodalCurve::from_edges(genera, &edges).expect("tree")
}

/// Every labelled tree on `gamma ≤ 4` vertices (1, 1, 3, 16 of them).
pub fn labelled_trees(gamma: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (1..=gamma)
        .flat_map(|a| (a + 1..=gamma).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let m = all.len();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize + 1 != gamma {
            continue;
        }
        let edges: Vec<_> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        let t = Tree {
            genera: vec![2; gamma],
            edges: edges.clone(),
        };
        if t.connected(&(1..=gamma).collect()) {
            out.push(edges);
        }
    }
    out
}

/// A random polarization with positive integer numerators over their sum.
pub fn random_polarization<R: Rng>(rng: &mut R, gamma: usize) -> Polarization {
    if gamma == 1 {
        return Polarization::new(vec![frac(1, 1)]).unwrap();
    }
    let n: Vec<i64> = (0..gamma).map(|_| rng.gen_range(1..=30)).collect();
    let total: i64 = n.iter().sum();
    Polarization::new(n.iter().map(|&x| frac(x, total)).collect()).unwrap()
}

/// A random polarization passing the edge-split goodness proxy.
pub fn random_good_polarization<R: Rng>(rng: &mut R, curve: &NodalCurve) -> Polarization {
    for _ in 0..500 {
        let w = random_polarization(rng, curve.gamma());
        if goodness_proxy(curve, &w).unwrap().pass() {
            return w;
        }
    }
    // fall back to small perturbations of η
    let eta = Polarization::canonical(curve).unwrap();
    let gamma = curve.gamma() as i64;
    let scale = 8 * gamma * (curve.arithmetic_genus() - 1) * 100;
    loop {
        let mut eps: Vec<i64> = (0..gamma - 1).map(|_| rng.gen_range(-100..=100)).collect();
        eps.push(-eps.iter().sum::<i64>());
        let eps: Vec<Rational> = eps.iter().map(|&e| frac(e, scale)).collect();
        if let Ok(w) = eta.perturb(&eps) {
            if goodness_proxy(curve, &w).unwrap().pass() {
                return w;
            }
        }
    }
}

/// Ordering-lemma clauses checked directly: `π(γ)` is the root, `A_j` is the
/// root-free branch containing `π(j)`, it holds no later component, it and
/// its complement are connected, and exactly one node crosses.
pub fn decomposition_ok(t: &Tree, root: usize, order: &[usize], subcurves: &[BTreeSet<usize>]) -> bool {
    let gamma = t.gamma();
    if order.len() != gamma || *order.last().unwrap() != root {
        return false;
    }
    if order.iter().copied().collect::<BTreeSet<_>>() != (1..=gamma).collect() {
        return false;
    }
    if subcurves.len() + 1 != gamma {
        return false;
    }
    for (j, a) in subcurves.iter().enumerate() {
        let c = t.complement(a);
        if !a.contains(&order[j]) || a.contains(&root) {
            return false;
        }
        if order[j + 1..].iter().any(|x| a.contains(x)) {
            return false;
        }
        if !t.connected(a) || !t.connected(&c) || t.crossing(a) != 1 {
            return false;
        }
        // A_j ⊆ A_k or disjoint for k > j, and A_j covers everything it must
        let below: BTreeSet<usize> = order[..=j].iter().copied().collect();
        if !a.is_subset(&below) {
            return false;
        }
    }
    true
}
