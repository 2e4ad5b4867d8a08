//! Single-parameter greedy heuristics and their payoff as a function of the
//! parameter.
//!
//! Every family scores candidates with a line `a + b * rho` (a log-domain
//! score, or one multiplied through by `rho > 0`), so greedy choices only
//! change where two lines cross. [`payoff_curve`] refines `[0,1)` stage by
//! stage along those crossings and returns the exact piecewise-constant
//! payoff. The `greedy` methods on each instance are direct simulations
//! kept separate from the curve code.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseConstantFn;

/// Smallest `rho` used for k-means; `x` in `[0,1)` maps to
/// `KMEANS_RHO_MIN + x (1 - KMEANS_RHO_MIN)`.
pub const KMEANS_RHO_MIN: f64 = 1e-3;

const CROSSING_TOL: f64 = 1e-12;

/// A candidate and its score line in `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub id: usize,
    pub a: f64,
    pub b: f64,
}

impl Line {
    pub fn score(&self, rho: f64) -> f64 {
        self.a + self.b * rho
    }
}

/// Greedy heuristic run as a sequence of argmax stages.
pub trait GreedyFamily {
    type State: Clone;

    fn initial(&self) -> Self::State;
    /// Candidates of the next stage; empty when the heuristic has finished.
    fn candidates(&self, state: &Self::State) -> Vec<Line>;
    fn apply(&self, state: &mut Self::State, id: usize);
    /// Normalized payoff of a finished run.
    fn payoff(&self, state: &Self::State) -> f64;

    /// Parameter used at learner position `x`.
    fn rho_of(&self, x: f64) -> f64 {
        x
    }

    fn x_of(&self, rho: f64) -> f64 {
        rho
    }
}

fn argmax(lines: &[Line], rho: f64) -> Line {
    let mut best = lines[0];
    let mut best_score = best.score(rho);
    for l in &lines[1..] {
        let s = l.score(rho);
        if s > best_score || (s == best_score && l.id < best.id) {
            best = *l;
            best_score = s;
        }
    }
    best
}

/// Runs the family at learner position `x` through the same stage machinery
/// the curve uses.
pub fn simulate<F: GreedyFamily>(family: &F, x: f64) -> f64 {
    let rho = family.rho_of(x);
    let mut state = family.initial();
    loop {
        let lines = family.candidates(&state);
        if lines.is_empty() {
            return family.payoff(&state);
        }
        let id = argmax(&lines, rho).id;
        family.apply(&mut state, id);
    }
}

/// Exact payoff over `x` in `[0,1)`, with equal neighbouring pieces merged.
pub fn payoff_curve<F: GreedyFamily>(family: &F) -> PiecewiseConstantFn {
    let mut pieces = Vec::new();
    refine(family, family.initial(), 0.0, 1.0, &mut pieces);
    let mut breakpoints: Vec<f64> = pieces.iter().map(|&(lo, _)| lo).collect();
    breakpoints.push(1.0);
    let values = pieces.into_iter().map(|(_, v)| v).collect();
    PiecewiseConstantFn::new(breakpoints, values)
        .expect("refinement yields an increasing partition")
        .merge_equal()
}

fn refine<F: GreedyFamily>(family: &F, state: F::State, lo: f64, hi: f64, out: &mut Vec<(f64, f64)>) {
    let lines = family.candidates(&state);
    if lines.is_empty() {
        out.push((lo, family.payoff(&state)));
        return;
    }
    let mut cur = lo;
    while cur < hi {
        let probe = cur + CROSSING_TOL.min((hi - cur) / 2.0);
        let rho = family.rho_of(probe);
        let w = argmax(&lines, rho);
        // Only steeper lines can overtake the winner to the right.
        let mut next = hi;
        for l in &lines {
            if l.b > w.b {
                let x = family.x_of((w.a - l.a) / (l.b - w.b));
                if x > probe && x < next && x < hi - CROSSING_TOL {
                    next = x;
                }
            }
        }
        let mut child = state.clone();
        family.apply(&mut child, w.id);
        refine(family, child, cur, next, out);
        cur = next;
    }
}

fn positive_finite(xs: &[f64], what: &str) -> Result<()> {
    match xs.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(Error::domain(format!("{what} must be finite and positive, got {v}"))),
        None => Ok(()),
    }
}

fn open_unit_upper<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

struct Tokens<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            lines: text.lines().enumerate(),
            line_no: 0,
        }
    }

    /// Next non-blank line split on whitespace.
    fn row(&mut self) -> Result<Vec<&'a str>> {
        for (i, line) in self.lines.by_ref() {
            self.line_no = i + 1;
            let t = line.trim();
            if !t.is_empty() {
                return Ok(t.split_whitespace().collect());
            }
        }
        Err(Error::parse(self.line_no + 1, "unexpected end of input"))
    }

    fn fixed<T: std::str::FromStr>(&mut self, n: usize) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let row = self.row()?;
        if row.len() != n {
            return Err(Error::parse(self.line_no, format!("expected {n} fields, found {}", row.len())));
        }
        row.iter()
            .map(|s| s.parse::<T>().map_err(|e| Error::parse(self.line_no, format!("{s:?}: {e}"))))
            .collect()
    }

    fn finish(&mut self) -> Result<()> {
        match self.row() {
            Ok(_) => Err(Error::parse(self.line_no, "trailing data")),
            Err(_) => Ok(()),
        }
    }
}

// ---------------------------------------------------------------- knapsack

/// Items `(v_i, s_i)` and a capacity. Greedy scans items by non-increasing
/// `v_i / s_i^rho` and keeps each one that still fits.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    values: Vec<f64>,
    sizes: Vec<f64>,
    capacity: f64,
    log_v: Vec<f64>,
    log_s: Vec<f64>,
    total_value: f64,
}

#[derive(Debug, Clone)]
pub struct KnapsackState {
    chosen: Vec<usize>,
    open: Vec<usize>,
    used: f64,
}

impl KnapsackInstance {
    pub fn new(values: Vec<f64>, sizes: Vec<f64>, capacity: f64) -> Result<Self> {
        if values.is_empty() || values.len() != sizes.len() {
            return Err(Error::domain("need n >= 1 items with one size per value"));
        }
        positive_finite(&values, "values")?;
        positive_finite(&sizes, "sizes")?;
        positive_finite(&[capacity], "capacity")?;
        Ok(KnapsackInstance {
            log_v: values.iter().map(|v| v.ln()).collect(),
            log_s: sizes.iter().map(|s| s.ln()).collect(),
            total_value: values.iter().sum(),
            values,
            sizes,
            capacity,
        })
    }

    /// Values uniform in `(0,1)`, sizes uniform in `(0,1]`.
    pub fn random<R: Rng + ?Sized>(n: usize, capacity: f64, rng: &mut R) -> Result<Self> {
        let values = (0..n)
            .map(|_| loop {
                let v = rng.random::<f64>();
                if v > 0.0 {
                    break v;
                }
            })
            .collect();
        let sizes = (0..n).map(|_| open_unit_upper(rng)).collect();
        Self::new(values, sizes, capacity)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Total value of `set`, summed in index order.
    pub fn value_of(&self, set: &[usize]) -> f64 {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.iter().map(|&i| self.values[i]).sum()
    }

    /// `raw / sum v_i`.
    pub fn normalized(&self, raw: f64) -> f64 {
        raw / self.total_value
    }

    /// Direct simulation: sort once, scan once.
    pub fn greedy(&self, rho: f64) -> (Vec<usize>, f64) {
        let score = |i: usize| self.log_v[i] - rho * self.log_s[i];
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| score(j).total_cmp(&score(i)).then(i.cmp(&j)));
        let mut used = 0.0;
        let mut chosen = Vec::new();
        for i in order {
            if used + self.sizes[i] <= self.capacity {
                used += self.sizes[i];
                chosen.push(i);
            }
        }
        let value = self.value_of(&chosen);
        (chosen, value)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.len(), self.capacity);
        for (v, w) in self.values.iter().zip(&self.sizes) {
            s.push_str(&format!("{v} {w}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tok = Tokens::new(text);
        let header = tok.row()?;
        let line = tok.line_no;
        if header.len() != 2 {
            return Err(Error::parse(line, "expected header \"n C\""));
        }
        let n: usize = header[0].parse().map_err(|e| Error::parse(line, format!("n: {e}")))?;
        let c: f64 = header[1].parse().map_err(|e| Error::parse(line, format!("C: {e}")))?;
        let mut values = Vec::with_capacity(n);
        let mut sizes = Vec::with_capacity(n);
        for _ in 0..n {
            let row = tok.fixed::<f64>(2)?;
            values.push(row[0]);
            sizes.push(row[1]);
        }
        tok.finish()?;
        Self::new(values, sizes, c)
    }
}

impl GreedyFamily for KnapsackInstance {
    type State = KnapsackState;

    fn initial(&self) -> KnapsackState {
        KnapsackState {
            chosen: Vec::new(),
            open: (0..self.len()).filter(|&i| self.sizes[i] <= self.capacity).collect(),
            used: 0.0,
        }
    }

    fn candidates(&self, st: &KnapsackState) -> Vec<Line> {
        st.open
            .iter()
            .map(|&i| Line {
                id: i,
                a: self.log_v[i],
                b: -self.log_s[i],
            })
            .collect()
    }

    fn apply(&self, st: &mut KnapsackState, id: usize) {
        st.open.retain(|&j| j != id);
        st.used += self.sizes[id];
        st.chosen.push(id);
        // Capacity only shrinks, so an item that misses now never fits.
        let used = st.used;
        st.open.retain(|&j| used + self.sizes[j] <= self.capacity);
    }

    fn payoff(&self, st: &KnapsackState) -> f64 {
        self.normalized(self.value_of(&st.chosen))
    }
}

// -------------------------------------------------------------------- mwis

/// Vertex-weighted simple graph. Greedy absorbs isolated vertices, then adds
/// the vertex maximizing `w_i / deg(i)^rho` and deletes its neighbourhood.
#[derive(Debug, Clone, PartialEq)]
pub struct MwisInstance {
    weights: Vec<f64>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    log_w: Vec<f64>,
    total_weight: f64,
}

#[derive(Debug, Clone)]
pub struct MwisState {
    alive: Vec<bool>,
    degree: Vec<usize>,
    chosen: Vec<usize>,
}

impl MwisInstance {
    pub fn new(weights: Vec<f64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::domain("need at least one vertex"));
        }
        positive_finite(&weights, "weights")?;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(MwisInstance {
            log_w: weights.iter().map(|w| w.ln()).collect(),
            total_weight: weights.iter().sum(),
            weights,
            edges,
            adj,
        })
    }

    /// `G(n, p)` with weights uniform in `(0,1]`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("edge probability {p} outside [0,1]")));
        }
        let weights = (0..n).map(|_| open_unit_upper(rng)).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Self::new(weights, edges)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.edges.iter().all(|&(u, v)| !(set.contains(&u) && set.contains(&v)))
    }

    pub fn weight_of(&self, set: &[usize]) -> f64 {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn normalized(&self, raw: f64) -> f64 {
        raw / self.total_weight
    }

    fn take(&self, st: &mut MwisState, v: usize) {
        st.chosen.push(v);
        let mut removed = vec![v];
        removed.extend(self.adj[v].iter().copied().filter(|&u| st.alive[u]));
        for &r in &removed {
            st.alive[r] = false;
        }
        for &r in &removed {
            for &u in &self.adj[r] {
                if st.alive[u] {
                    st.degree[u] -= 1;
                }
            }
        }
    }

    fn absorb_isolated(&self, st: &mut MwisState) {
        for v in 0..self.len() {
            if st.alive[v] && st.degree[v] == 0 {
                st.alive[v] = false;
                st.chosen.push(v);
            }
        }
    }

    /// Direct simulation.
    pub fn greedy(&self, rho: f64) -> (Vec<usize>, f64) {
        let n = self.len();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut chosen = Vec::new();
        loop {
            for v in 0..n {
                if alive[v] && degree[v] == 0 {
                    alive[v] = false;
                    chosen.push(v);
                }
            }
            let mut best: Option<(usize, f64)> = None;
            for v in (0..n).filter(|&v| alive[v]) {
                let s = self.log_w[v] - rho * (degree[v] as f64).ln();
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((v, s));
                }
            }
            let Some((v, _)) = best else { break };
            chosen.push(v);
            let mut gone = vec![v];
            gone.extend(self.adj[v].iter().copied().filter(|&u| alive[u]));
            for &g in &gone {
                alive[g] = false;
            }
            for &g in &gone {
                for &u in &self.adj[g] {
                    if alive[u] {
                        degree[u] -= 1;
                    }
                }
            }
        }
        let w = self.weight_of(&chosen);
        (chosen, w)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.len(), self.edges.len());
        let ws: Vec<String> = self.weights.iter().map(f64::to_string).collect();
        s.push_str(&ws.join(" "));
        s.push('\n');
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tok = Tokens::new(text);
        let header = tok.fixed::<usize>(2)?;
        let (n, m) = (header[0], header[1]);
        let weights = tok.fixed::<f64>(n)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let e = tok.fixed::<usize>(2)?;
            edges.push((e[0], e[1]));
        }
        tok.finish()?;
        Self::new(weights, edges)
    }
}

impl GreedyFamily for MwisInstance {
    type State = MwisState;

    fn initial(&self) -> MwisState {
        let mut st = MwisState {
            alive: vec![true; self.len()],
            degree: self.adj.iter().map(Vec::len).collect(),
            chosen: Vec::new(),
        };
        self.absorb_isolated(&mut st);
        st
    }

    fn candidates(&self, st: &MwisState) -> Vec<Line> {
        (0..self.len())
            .filter(|&v| st.alive[v])
            .map(|v| Line {
                id: v,
                a: self.log_w[v],
                b: -(st.degree[v] as f64).ln(),
            })
            .collect()
    }

    fn apply(&self, st: &mut MwisState, id: usize) {
        self.take(st, id);
        self.absorb_isolated(st);
    }

    fn payoff(&self, st: &MwisState) -> f64 {
        self.normalized(self.weight_of(&st.chosen))
    }
}

// ------------------------------------------------------------------ kmeans

/// Weighted points in the plane and a center count `k`.
///
/// The first center is the heaviest point. Each later center maximizes
/// `max_{i in S} w_p / d(p, i)^{1/rho}`, scored as
/// `rho ln w_p - ln min_{i in S} d(p, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansInstance {
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
    k: usize,
    dist: Vec<Vec<f64>>,
    log_w: Vec<f64>,
    normalizer: f64,
}

#[derive(Debug, Clone)]
pub struct KMeansState {
    centers: Vec<usize>,
    nearest: Vec<f64>,
}

impl KMeansInstance {
    pub fn new(points: Vec<(f64, f64)>, weights: Vec<f64>, k: usize) -> Result<Self> {
        let n = points.len();
        if n != weights.len() {
            return Err(Error::domain("need one weight per point"));
        }
        if k == 0 || k > n {
            return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        positive_finite(&weights, "weights")?;
        if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
            return Err(Error::domain("coordinates must be finite"));
        }
        let dist: Vec<Vec<f64>> = points
            .iter()
            .map(|p| points.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).collect())
            .collect();
        for (i, row) in dist.iter().enumerate() {
            for (j, &d) in row.iter().enumerate().skip(i + 1) {
                if d == 0.0 {
                    return Err(Error::domain(format!("points {i} and {j} coincide")));
                }
            }
        }
        let max_d = dist.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        let normalizer = weights.iter().sum::<f64>() * max_d * max_d;
        if !(normalizer > 0.0 && normalizer.is_finite()) {
            return Err(Error::domain("normalizer sum w * maxd^2 must be positive"));
        }
        Ok(KMeansInstance {
            log_w: weights.iter().map(|w| w.ln()).collect(),
            points,
            weights,
            k,
            dist,
            normalizer,
        })
    }

    /// `n` points from `gaussians` unit-variance clusters whose means sit on
    /// a circle of radius 5; weights uniform in `(0,1]`.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, gaussians: usize, rng: &mut R) -> Result<Self> {
        if gaussians == 0 {
            return Err(Error::domain("need at least one gaussian"));
        }
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let c = rng.random_range(0..gaussians) as f64;
            let angle = std::f64::consts::TAU * c / gaussians as f64;
            let dx: f64 = StandardNormal.sample(rng);
            let dy: f64 = StandardNormal.sample(rng);
            points.push((5.0 * angle.cos() + dx, 5.0 * angle.sin() + dy));
        }
        let weights = (0..n).map(|_| open_unit_upper(rng)).collect();
        Self::new(points, weights, k)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// `sum_i w_i min_{j in S} d(i,j)^2`.
    pub fn cost_of(&self, centers: &[usize]) -> f64 {
        (0..self.len())
            .map(|i| {
                let d = centers.iter().map(|&c| self.dist[i][c]).fold(f64::INFINITY, f64::min);
                self.weights[i] * d * d
            })
            .sum()
    }

    /// `1 - cost / (sum w * maxd^2)`.
    pub fn normalized(&self, cost: f64) -> f64 {
        1.0 - cost / self.normalizer
    }

    fn first_center(&self) -> usize {
        let mut best = 0;
        for i in 1..self.len() {
            if self.weights[i] > self.weights[best] {
                best = i;
            }
        }
        best
    }

    /// Direct simulation for `rho` in `(0,1]`.
    pub fn greedy(&self, rho: f64) -> (Vec<usize>, f64) {
        let n = self.len();
        let first = self.first_center();
        let mut centers = vec![first];
        let mut nearest: Vec<f64> = self.dist[first].clone();
        while centers.len() < self.k {
            let mut best: Option<(usize, f64)> = None;
            for p in (0..n).filter(|p| !centers.contains(p)) {
                let s = rho * self.log_w[p] - nearest[p].ln();
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((p, s));
                }
            }
            let (p, _) = best.expect("k <= n leaves a candidate");
            centers.push(p);
            for (q, d) in nearest.iter_mut().enumerate() {
                *d = d.min(self.dist[p][q]);
            }
        }
        let cost = self.cost_of(&centers);
        (centers, cost)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.len(), self.k);
        for ((x, y), w) in self.points.iter().zip(&self.weights) {
            s.push_str(&format!("{x} {y} {w}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tok = Tokens::new(text);
        let header = tok.fixed::<usize>(2)?;
        let (n, k) = (header[0], header[1]);
        let mut points = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            let r = tok.fixed::<f64>(3)?;
            points.push((r[0], r[1]));
            weights.push(r[2]);
        }
        tok.finish()?;
        Self::new(points, weights, k)
    }
}

impl GreedyFamily for KMeansInstance {
    type State = KMeansState;

    fn initial(&self) -> KMeansState {
        KMeansState {
            centers: Vec::new(),
            nearest: vec![f64::INFINITY; self.len()],
        }
    }

    fn candidates(&self, st: &KMeansState) -> Vec<Line> {
        if st.centers.len() == self.k {
            return Vec::new();
        }
        if st.centers.is_empty() {
            return vec![Line {
                id: self.first_center(),
                a: 0.0,
                b: 0.0,
            }];
        }
        (0..self.len())
            .filter(|p| !st.centers.contains(p))
            .map(|p| Line {
                id: p,
                a: -st.nearest[p].ln(),
                b: self.log_w[p],
            })
            .collect()
    }

    fn apply(&self, st: &mut KMeansState, id: usize) {
        st.centers.push(id);
        for (q, d) in st.nearest.iter_mut().enumerate() {
            *d = d.min(self.dist[id][q]);
        }
    }

    fn payoff(&self, st: &KMeansState) -> f64 {
        self.normalized(self.cost_of(&st.centers))
    }

    fn rho_of(&self, x: f64) -> f64 {
        KMEANS_RHO_MIN + x * (1.0 - KMEANS_RHO_MIN)
    }

    fn x_of(&self, rho: f64) -> f64 {
        (rho - KMEANS_RHO_MIN) / (1.0 - KMEANS_RHO_MIN)
    }
}
