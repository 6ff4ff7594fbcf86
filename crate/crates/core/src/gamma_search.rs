//! Search for large-circle angle-counts `xi` with `onec(xi)` and
//! `xi . gamma(r, s) = 2 pi` at a given point, under a node budget.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::angles::{angle_vector_unchecked, dot_angles, AngleVector, Kind};
use crate::error::{Error, Result};
use crate::precision::{to_decimal, Precision};
use crate::tuples::{onec, AngleCount};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_TOLERANCE_EXP: i64 = 20;

/// Slack of the double-precision pruning; candidates are confirmed at full precision.
const SLACK: f64 = 1e-9;
const FLUSH: u64 = 4096;

#[derive(Clone, Debug)]
pub struct GammaQuery {
    pub r: Float,
    pub s: Float,
    pub tolerance: Float,
    pub budget: u64,
    pub digits: u32,
}

impl GammaQuery {
    /// Query with the default budget and a tolerance of `10^-20`.
    pub fn new(r: Float, s: Float, digits: u32) -> Result<GammaQuery> {
        let tol = Precision::new(digits)?.ten_pow_neg(DEFAULT_TOLERANCE_EXP);
        GammaQuery { r, s, tolerance: tol, budget: DEFAULT_BUDGET, digits }.validated()
    }

    pub fn with_tolerance(mut self, tol: Float) -> Result<GammaQuery> {
        self.tolerance = tol;
        self.validated()
    }

    pub fn with_budget(mut self, budget: u64) -> GammaQuery {
        self.budget = budget;
        self
    }

    fn validated(self) -> Result<GammaQuery> {
        if !(self.s > 0u32 && self.s < self.r && self.r < 1u32) {
            return Err(Error::Domain(format!("({}, {}) is not in the open triangle", self.r.to_f64(), self.s.to_f64())));
        }
        let floor = Precision::new(self.digits)?.ten_pow_neg(self.digits as i64 - 10);
        if self.tolerance < floor || !self.tolerance.is_sign_positive() {
            return Err(Error::Precondition(format!("tolerance must be at least 1e-{}", self.digits - 10)));
        }
        Ok(self)
    }

    fn gamma(&self) -> AngleVector {
        let bits = Precision::new(self.digits).map(|p| p.bits()).unwrap_or(self.r.prec()).max(self.r.prec());
        let r = Float::with_val(bits, &self.r);
        let s = Float::with_val(bits, &self.s);
        angle_vector_unchecked(Kind::Gamma, &r, &s)
    }
}

/// Per-coordinate caps `floor(2 pi / gamma_i)`.
pub fn gamma_bounds(r: &Float, s: &Float) -> Result<[u64; 6]> {
    if !(*s > 0u32 && s < r && *r < 1u32) {
        return Err(Error::Domain(format!("({}, {}) is not in the open triangle", r.to_f64(), s.to_f64())));
    }
    let g = angle_vector_unchecked(Kind::Gamma, r, s);
    Ok(bounds_of(&g))
}

fn bounds_of(g: &AngleVector) -> [u64; 6] {
    let prec = g[0].prec();
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    g.clone().map(|v| {
        let q = Float::with_val(prec, &two_pi / &v).floor();
        q.to_integer().and_then(|i| i.to_u64()).unwrap_or(u64::MAX)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSolution {
    pub xi: AngleCount,
    /// `|xi . gamma - 2 pi|`.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { solutions: Vec<GammaSolution>, nodes: u64 },
    ExhaustedNone { nodes: u64 },
    BudgetExceeded { nodes: u64, partial: Vec<GammaSolution> },
}

impl SearchOutcome {
    pub fn solutions(&self) -> &[GammaSolution] {
        match self {
            SearchOutcome::Found { solutions, .. } => solutions,
            SearchOutcome::BudgetExceeded { partial, .. } => partial,
            SearchOutcome::ExhaustedNone { .. } => &[],
        }
    }

    pub fn contains(&self, xi: &AngleCount) -> bool {
        self.solutions().iter().any(|s| &s.xi == xi)
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::ExhaustedNone { nodes } | SearchOutcome::BudgetExceeded { nodes, .. } => *nodes,
        }
    }
}

struct Walk<'a> {
    order: [usize; 6],
    g: [f64; 6],
    caps: [u64; 6],
    /// `tail[i]`: largest sum attainable by coordinates `order[i..]`.
    tail: [f64; 7],
    nodes: &'a AtomicU64,
    budget: u64,
    flush_every: u64,
    local: u64,
    stopped: bool,
    hits: Vec<[u64; 6]>,
}

impl Walk<'_> {
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == self.flush_every {
            let total = self.nodes.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if total > self.budget {
                self.stopped = true;
            }
        }
        !self.stopped
    }

    fn flush(&mut self) {
        self.nodes.fetch_add(self.local, Ordering::Relaxed);
        self.local = 0;
    }

    fn dfs(&mut self, depth: usize, rest: f64, xi: &mut [u64; 6]) {
        if !self.tick() {
            return;
        }
        let c = self.order[depth];
        let g = self.g[c];
        if depth == 5 {
            let k = (rest / g).round();
            if k >= 0.0 && (k as u64) <= self.caps[c] && (rest - k * g).abs() <= SLACK {
                xi[c] = k as u64;
                self.hits.push(*xi);
                xi[c] = 0;
            }
            return;
        }
        let top = self.caps[c].min(((rest + SLACK) / g).floor().max(0.0) as u64);
        for k in 0..=top {
            let next = rest - k as f64 * g;
            if next < -SLACK {
                break;
            }
            if self.tail[depth + 1] < next - SLACK {
                continue;
            }
            xi[c] = k;
            self.dfs(depth + 1, next, xi);
            if self.stopped {
                break;
            }
        }
        xi[c] = 0;
    }
}

/// Depth-first search over the coordinates with residual-angle pruning.
pub fn search(query: &GammaQuery) -> SearchOutcome {
    let gamma = query.gamma();
    let prec = gamma[0].prec();
    let caps = bounds_of(&gamma);
    let g: [f64; 6] = std::array::from_fn(|i| gamma[i].to_f64());
    // the widest coordinate is solved for directly at the leaf
    let mut order = [0usize, 1, 2, 3, 4, 5];
    order.sort_by_key(|&i| (caps[i], i));
    let mut tail = [0f64; 7];
    for d in (0..6).rev() {
        let c = order[d];
        tail[d] = tail[d + 1] + caps[c] as f64 * g[c];
    }
    let two_pi = std::f64::consts::TAU;
    let nodes = AtomicU64::new(0);
    let c0 = order[0];
    let firsts: Vec<u64> = (0..=caps[c0].min(((two_pi + SLACK) / g[c0]) as u64)).collect();
    let results: Vec<(Vec<[u64; 6]>, bool)> = firsts
        .par_iter()
        .map(|&k| {
            let mut w = Walk {
                order,
                g,
                caps,
                tail,
                nodes: &nodes,
                budget: query.budget,
                flush_every: FLUSH.min((query.budget / 64).max(1)),
                local: 0,
                stopped: false,
                hits: Vec::new(),
            };
            let rest = two_pi - k as f64 * g[c0];
            if rest >= -SLACK && tail[1] >= rest - SLACK {
                let mut xi = [0u64; 6];
                xi[c0] = k;
                w.dfs(1, rest, &mut xi);
            }
            w.flush();
            (w.hits, w.stopped)
        })
        .collect();
    let exceeded = results.iter().any(|r| r.1);
    let two_pi_hp = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let mut solutions: Vec<GammaSolution> = results
        .into_iter()
        .flat_map(|r| r.0)
        .filter_map(|x| {
            let xi = AngleCount(x.map(|v| u32::try_from(v).unwrap_or(u32::MAX)));
            if !onec(&xi) {
                return None;
            }
            let res = (dot_angles(&xi, &gamma) - &two_pi_hp).abs();
            (res < query.tolerance).then(|| GammaSolution { xi, residual: to_decimal(&res, 6) })
        })
        .collect();
    solutions.sort_by_key(|a| a.xi);
    let nodes = nodes.load(Ordering::Relaxed);
    if exceeded {
        SearchOutcome::BudgetExceeded { nodes, partial: solutions }
    } else if solutions.is_empty() {
        SearchOutcome::ExhaustedNone { nodes }
    } else {
        SearchOutcome::Found { solutions, nodes }
    }
}

/// Plain enumeration of every box point, for checking the pruned search.
pub fn search_unpruned(query: &GammaQuery) -> Vec<AngleCount> {
    let gamma = query.gamma();
    let prec = gamma[0].prec();
    let caps = bounds_of(&gamma);
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let mut out = Vec::new();
    let mut x = [0u64; 6];
    loop {
        let xi = AngleCount(x.map(|v| v as u32));
        if onec(&xi) && (dot_angles(&xi, &gamma) - &two_pi).abs() < query.tolerance {
            out.push(xi);
        }
        let mut i = 0;
        loop {
            if i == 6 {
                out.sort();
                return out;
            }
            if x[i] < caps[i] {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}
