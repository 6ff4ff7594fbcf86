//! Finite packings of circles with radii `s`, `r` and `1`: coronas, patch
//! growth by tangency propagation, verification and SVG output.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::angles::{angle_vector_unchecked, component_index, dot_angles, petal_angle_unchecked, Kind, Size};
use crate::error::{Error, Result};
use crate::gamma_search::{search, GammaQuery, SearchOutcome};
use crate::precision::{to_decimal, Precision};
use crate::tuples::{enumerate_rnec, enumerate_snec, AngleCount};

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub x: Float,
    pub y: Float,
    pub label: Size,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Packing {
    pub r: Float,
    pub s: Float,
    pub circles: Vec<Circle>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn square(half: f64) -> BBox {
        BBox { min_x: -half, min_y: -half, max_x: half, max_y: half }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }
}

#[derive(Serialize, Deserialize)]
struct RadiiFile {
    s: String,
    r: String,
}

#[derive(Serialize, Deserialize)]
struct CircleFile {
    x: String,
    y: String,
    label: Size,
}

#[derive(Serialize, Deserialize)]
struct PackingFile {
    radii: RadiiFile,
    circles: Vec<CircleFile>,
}

impl Packing {
    pub fn new(r: Float, s: Float) -> Result<Packing> {
        if !(s > 0u32 && s < r && r < 1u32) {
            return Err(Error::Domain(format!("radii ({}, {}) are not in the open triangle", r.to_f64(), s.to_f64())));
        }
        Ok(Packing { r, s, circles: Vec::new() })
    }

    pub fn prec(&self) -> u32 {
        self.r.prec()
    }

    pub fn radius(&self, label: Size) -> Float {
        match label {
            Size::Small => self.s.clone(),
            Size::Mid => self.r.clone(),
            Size::Large => Float::with_val(self.prec(), 1u32),
        }
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn bounding_box(&self) -> Option<BBox> {
        let mut it = self.circles.iter();
        let first = it.next()?;
        let rad = |c: &Circle| self.radius(c.label).to_f64();
        let (x, y, q) = (first.x.to_f64(), first.y.to_f64(), rad(first));
        let mut b = BBox { min_x: x - q, min_y: y - q, max_x: x + q, max_y: y + q };
        for c in it {
            let (x, y, q) = (c.x.to_f64(), c.y.to_f64(), rad(c));
            b.min_x = b.min_x.min(x - q);
            b.min_y = b.min_y.min(y - q);
            b.max_x = b.max_x.max(x + q);
            b.max_y = b.max_y.max(y + q);
        }
        Some(b)
    }

    pub fn translated(&self, dx: &Float, dy: &Float) -> Packing {
        let mut out = self.clone();
        for c in &mut out.circles {
            c.x += dx;
            c.y += dy;
        }
        out
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(&self, angle: &Float) -> Packing {
        let (sin, cos) = Float::with_val(self.prec(), angle).sin_cos(Float::new(self.prec()));
        let mut out = self.clone();
        for c in &mut out.circles {
            let x = Float::with_val(self.prec(), &c.x * &cos) - Float::with_val(self.prec(), &c.y * &sin);
            let y = Float::with_val(self.prec(), &c.x * &sin) + Float::with_val(self.prec(), &c.y * &cos);
            c.x = x;
            c.y = y;
        }
        out
    }

    fn gap(&self, i: usize, j: usize) -> Float {
        let (a, b) = (&self.circles[i], &self.circles[j]);
        let dx = Float::with_val(self.prec(), &a.x - &b.x);
        let dy = Float::with_val(self.prec(), &a.y - &b.y);
        let d = (dx.square() + dy.square()).sqrt();
        d - self.radius(a.label) - self.radius(b.label)
    }

    fn grid(&self) -> Grid {
        let mut g = Grid::default();
        for (i, c) in self.circles.iter().enumerate() {
            g.insert(i, c.x.to_f64(), c.y.to_f64());
        }
        g
    }

    /// Pairs whose center distance equals the sum of radii within `tol`.
    pub fn tangencies(&self, tol: &Float) -> Vec<(usize, usize)> {
        let grid = self.grid();
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let c = &self.circles[i];
                let near = grid.near(c.x.to_f64(), c.y.to_f64());
                near.into_iter().filter(move |&j| j > i).filter(move |&j| self.gap(i, j).abs() <= *tol).map(move |j| (i, j)).collect::<Vec<_>>()
            })
            .collect();
        out.sort();
        out
    }

    pub fn to_json(&self, digits: u32) -> Result<String> {
        let file = PackingFile {
            radii: RadiiFile { s: to_decimal(&self.s, digits), r: to_decimal(&self.r, digits) },
            circles: self.circles.iter().map(|c| CircleFile { x: to_decimal(&c.x, digits), y: to_decimal(&c.y, digits), label: c.label }).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str, digits: u32) -> Result<Packing> {
        let file: PackingFile = serde_json::from_str(text)?;
        let p = Precision::new(digits)?;
        let mut out = Packing::new(p.parse(&file.radii.r)?, p.parse(&file.radii.s)?)?;
        for c in file.circles {
            out.circles.push(Circle { x: p.parse(&c.x)?, y: p.parse(&c.y)?, label: c.label });
        }
        Ok(out)
    }
}

/// Uniform hash grid with cells wider than the largest diameter.
#[derive(Default)]
struct Grid {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    const CELL: f64 = 2.5;

    fn cell(x: f64, y: f64) -> (i64, i64) {
        ((x / Self::CELL).floor() as i64, (y / Self::CELL).floor() as i64)
    }

    fn insert(&mut self, i: usize, x: f64, y: f64) {
        self.cells.entry(Self::cell(x, y)).or_default().push(i);
    }

    fn remove(&mut self, i: usize, x: f64, y: f64) {
        if let Some(v) = self.cells.get_mut(&Self::cell(x, y)) {
            v.retain(|&j| j != i);
        }
    }

    fn near(&self, x: f64, y: f64) -> Vec<usize> {
        let (cx, cy) = Self::cell(x, y);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.cells.get(&(cx + dx, cy + dy)) {
                    out.extend_from_slice(v);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A circle with its neighbors placed around it.
#[derive(Clone, Debug)]
pub struct Corona {
    pub packing: Packing,
    pub closes: bool,
    /// Distance between the first neighbor and its re-placement after a full turn.
    pub residual: Float,
}

fn two_pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi) * 2u32
}

/// Center at the origin, first neighbor on the positive x-axis, each next
/// neighbor rotated counterclockwise by the petal angle.
pub fn build_corona(center: Size, cycle: &[Size], r: &Float, s: &Float, tol: &Float) -> Result<Corona> {
    if cycle.is_empty() {
        return Err(Error::Precondition("empty neighbor cycle".into()));
    }
    let mut packing = Packing::new(r.clone(), s.clone())?;
    let prec = packing.prec();
    let rc = packing.radius(center);
    packing.circles.push(Circle { x: Float::with_val(prec, 0u32), y: Float::with_val(prec, 0u32), label: center });
    let place = |theta: &Float, label: Size, packing: &Packing| {
        let d = Float::with_val(prec, &rc + &packing.radius(label));
        let (sin, cos) = Float::with_val(prec, theta).sin_cos(Float::new(prec));
        Circle { x: Float::with_val(prec, &d * &cos), y: Float::with_val(prec, &d * &sin), label }
    };
    let mut theta = Float::with_val(prec, 0u32);
    for (i, &label) in cycle.iter().enumerate() {
        if i > 0 {
            theta += petal_angle_unchecked(&rc, &packing.radius(cycle[i - 1]), &packing.radius(label));
        }
        let c = place(&theta, label, &packing);
        packing.circles.push(c);
    }
    theta += petal_angle_unchecked(&rc, &packing.radius(cycle[cycle.len() - 1]), &packing.radius(cycle[0]));
    let again = place(&theta, cycle[0], &packing);
    let first = &packing.circles[1];
    let dx = Float::with_val(prec, &again.x - &first.x);
    let dy = Float::with_val(prec, &again.y - &first.y);
    let residual = (dx.square() + dy.square()).sqrt();
    let winding_ok = theta < Float::with_val(prec, two_pi(prec) * 1.5f64);
    let closes = winding_ok && residual < *tol;
    Ok(Corona { packing, closes, residual })
}

/// Admissible angle-counts around each circle size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoronaRules {
    pub small: Vec<AngleCount>,
    pub mid: Vec<AngleCount>,
    pub large: Vec<AngleCount>,
}

impl CoronaRules {
    pub fn for_size(&self, size: Size) -> &[AngleCount] {
        match size {
            Size::Small => &self.small,
            Size::Mid => &self.mid,
            Size::Large => &self.large,
        }
    }

    /// All tuples passing the necessary conditions whose angle sum is `2 pi` at `(r, s)`.
    pub fn discover(r: &Float, s: &Float, digits: u32) -> Result<CoronaRules> {
        let prec = Precision::new(digits)?;
        let tol = prec.ten_pow_neg((digits / 2) as i64);
        let (r, s) = (prec.float(r), prec.float(s));
        let hits = |kind: Kind, tuples: Vec<AngleCount>| -> Vec<AngleCount> {
            let tau = angle_vector_unchecked(kind, &r, &s);
            let tp = two_pi(prec.bits());
            tuples.into_iter().filter(|xi| (dot_angles(xi, &tau) - &tp).abs() < tol).collect()
        };
        let large = match search(&GammaQuery::new(r.clone(), s.clone(), digits)?) {
            SearchOutcome::Found { solutions, .. } => solutions.into_iter().map(|x| x.xi).collect(),
            SearchOutcome::ExhaustedNone { .. } => Vec::new(),
            SearchOutcome::BudgetExceeded { nodes, .. } => {
                return Err(Error::Resource(format!("gamma search stopped after {nodes} nodes")));
            }
        };
        Ok(CoronaRules { small: hits(Kind::Alpha, enumerate_snec()), mid: hits(Kind::Beta, enumerate_rnec()), large })
    }
}

/// Every cyclic neighbor sequence with transition counts `xi`, one per
/// rotation class; mirror images count separately.
pub fn cycles_of(xi: &AngleCount) -> Result<Vec<Vec<Size>>> {
    let n = xi.total() as usize;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > 24 {
        return Err(Error::Resource(format!("{xi} has too many neighbors to list its cycles")));
    }
    fn go(seq: &mut Vec<Size>, left: &mut [u32; 6], n: usize, out: &mut BTreeSet<Vec<Size>>) {
        let last = *seq.last().unwrap();
        if seq.len() == n {
            let k = component_index(last, seq[0]);
            if left[k] == 1 && left.iter().sum::<u32>() == 1 {
                let rot = (0..n).map(|j| seq[j..].iter().chain(&seq[..j]).copied().collect::<Vec<_>>()).min().unwrap();
                out.insert(rot);
            }
            return;
        }
        for next in [Size::Small, Size::Mid, Size::Large] {
            let k = component_index(last, next);
            if left[k] > 0 {
                left[k] -= 1;
                seq.push(next);
                go(seq, left, n, out);
                seq.pop();
                left[k] += 1;
            }
        }
    }
    let mut out = BTreeSet::new();
    for first in [Size::Small, Size::Mid, Size::Large] {
        let mut left = xi.0;
        go(&mut vec![first], &mut left, n, &mut out);
    }
    let mut all: BTreeSet<Vec<Size>> = BTreeSet::new();
    for c in out {
        let mut rev = c.clone();
        rev.reverse();
        let rot = (0..rev.len()).map(|j| rev[j..].iter().chain(&rev[..j]).copied().collect::<Vec<_>>()).min().unwrap();
        all.insert(c);
        all.insert(rot);
    }
    Ok(all.into_iter().collect())
}

fn arc_fits(arc: &[Size], cycle: &[Size], closed: bool) -> bool {
    let n = cycle.len();
    if arc.len() > n || (closed && arc.len() != n) {
        return false;
    }
    (0..n).any(|j| arc.iter().enumerate().all(|(i, a)| cycle[(j + i) % n] == *a))
}

#[derive(Clone, Debug)]
pub struct GrowOptions {
    pub max_steps: usize,
    /// Distances within this of the sum of radii count as tangent.
    pub tangency_tol: Float,
}

impl GrowOptions {
    pub fn new(digits: u32) -> Result<GrowOptions> {
        Ok(GrowOptions { max_steps: 200_000, tangency_tol: Precision::new(digits)?.ten_pow_neg((digits / 2) as i64) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stall {
    pub reason: String,
    pub steps: usize,
    /// The circle that could not be surrounded.
    pub circle: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GrowOutcome {
    pub packing: Packing,
    pub stall: Option<Stall>,
    pub steps: usize,
}

struct Node {
    x: Float,
    y: Float,
    fx: f64,
    fy: f64,
    label: Size,
}

struct Grower<'a> {
    prec: u32,
    radii: [Float; 3],
    nodes: Vec<Node>,
    adj: Vec<Vec<usize>>,
    complete: Vec<bool>,
    grid: Grid,
    cycles: [Vec<Vec<Size>>; 3],
    tol: &'a Float,
    region: &'a BBox,
}

fn slot(size: Size) -> usize {
    match size {
        Size::Small => 0,
        Size::Mid => 1,
        Size::Large => 2,
    }
}

enum Gap {
    Closed,
    After(usize),
}

impl Grower<'_> {
    fn rad(&self, size: Size) -> &Float {
        &self.radii[slot(size)]
    }

    fn dist_gap(&self, x: &Float, y: &Float, rx: &Float, j: usize) -> Float {
        let n = &self.nodes[j];
        let dx = Float::with_val(self.prec, x - &n.x);
        let dy = Float::with_val(self.prec, y - &n.y);
        (dx.square() + dy.square()).sqrt() - rx - self.rad(n.label)
    }

    fn sorted_neighbors(&self, i: usize) -> Vec<(f64, usize)> {
        let c = &self.nodes[i];
        let mut v: Vec<(f64, usize)> = self.adj[i]
            .iter()
            .map(|&j| {
                let a = (self.nodes[j].fy - c.fy).atan2(self.nodes[j].fx - c.fx);
                (if a < 0.0 { a + std::f64::consts::TAU } else { a }, j)
            })
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        v
    }

    /// Whether the `j`-th neighbor is followed counterclockwise by a tangent one.
    fn closes(&self, nb: &[(f64, usize)], j: usize) -> bool {
        let k = nb.len();
        let (a, b) = (nb[j], nb[(j + 1) % k]);
        let mut turn = b.0 - a.0;
        if turn < 0.0 {
            turn += std::f64::consts::TAU;
        }
        k >= 2 && turn < std::f64::consts::PI && self.tangent(a.1, b.1)
    }

    fn tangent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    /// Arcs of consecutively tangent neighbors in counterclockwise order.
    fn arcs(&self, i: usize) -> (Vec<Vec<usize>>, bool) {
        let nb = self.sorted_neighbors(i);
        let k = nb.len();
        if k == 0 {
            return (Vec::new(), false);
        }
        let breaks: Vec<usize> = (0..k).filter(|&j| !self.closes(&nb, j)).collect();
        if breaks.is_empty() {
            return (vec![nb.into_iter().map(|p| p.1).collect()], true);
        }
        let mut arcs = Vec::new();
        for (t, &b) in breaks.iter().enumerate() {
            let start = (b + 1) % k;
            let end = breaks[(t + 1) % breaks.len()];
            let mut arc = Vec::new();
            let mut j = start;
            loop {
                arc.push(nb[j].1);
                if j == end {
                    break;
                }
                j = (j + 1) % k;
            }
            arcs.push(arc);
        }
        (arcs, false)
    }

    fn gap(&self, i: usize) -> Gap {
        let nb = self.sorted_neighbors(i);
        match (0..nb.len()).find(|&j| !self.closes(&nb, j)) {
            Some(j) => Gap::After(nb[j].1),
            None => Gap::Closed,
        }
    }

    fn conforms(&self, i: usize) -> bool {
        let cycles = &self.cycles[slot(self.nodes[i].label)];
        let (arcs, closed) = self.arcs(i);
        arcs.iter().all(|arc| {
            let labels: Vec<Size> = arc.iter().map(|&j| self.nodes[j].label).collect();
            cycles.iter().any(|c| arc_fits(&labels, c, closed))
        })
    }

    fn push(&mut self, x: Float, y: Float, label: Size, touching: &[usize]) -> usize {
        let i = self.nodes.len();
        let (fx, fy) = (x.to_f64(), y.to_f64());
        self.nodes.push(Node { x, y, fx, fy, label });
        self.grid.insert(i, fx, fy);
        self.adj.push(touching.to_vec());
        for &j in touching {
            self.adj[j].push(i);
        }
        self.complete.push(false);
        i
    }

    fn pop(&mut self) {
        let i = self.nodes.len() - 1;
        let n = self.nodes.pop().unwrap();
        self.grid.remove(i, n.fx, n.fy);
        for j in self.adj.pop().unwrap() {
            self.adj[j].retain(|&k| k != i);
            self.complete[j] = false;
        }
        self.complete.pop();
    }

    /// Place a circle of `label` tangent to `c` and to `a`, counterclockwise from `a`.
    fn try_place(&mut self, c: usize, a: usize, label: Size) -> bool {
        let p = self.prec;
        let (cn, an) = (&self.nodes[c], &self.nodes[a]);
        let rc = self.rad(cn.label).clone();
        let rx = self.rad(label).clone();
        let ta = Float::with_val(p, &an.y - &cn.y).atan2(&Float::with_val(p, &an.x - &cn.x));
        let theta = ta + petal_angle_unchecked(&rc, self.rad(an.label), &rx);
        let d = Float::with_val(p, &rc + &rx);
        let (sin, cos) = theta.sin_cos(Float::new(p));
        let x = Float::with_val(p, &cn.x + Float::with_val(p, &d * &cos));
        let y = Float::with_val(p, &cn.y + Float::with_val(p, &d * &sin));
        let mut touching = Vec::new();
        for j in self.grid.near(x.to_f64(), y.to_f64()) {
            let g = self.dist_gap(&x, &y, &rx, j);
            if Float::with_val(self.prec, g.abs_ref()) <= *self.tol {
                touching.push(j);
            } else if g < 0u32 {
                return false;
            }
        }
        let i = self.push(x, y, label, &touching);
        let ok = self.conforms(i) && touching.iter().all(|&j| self.conforms(j));
        if !ok {
            self.pop();
        }
        ok
    }

    fn target(&self) -> Option<usize> {
        (0..self.nodes.len()).filter(|&i| !self.complete[i] && self.region.contains(self.nodes[i].fx, self.nodes[i].fy)).min_by(|&i, &j| {
            let key = |k: usize| {
                let n = &self.nodes[k];
                (n.fx * n.fx + n.fy * n.fy, n.fy.atan2(n.fx))
            };
            let (a, b) = (key(i), key(j));
            a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(i.cmp(&j))
        })
    }

    fn packing(&self, r: &Float, s: &Float) -> Packing {
        Packing { r: r.clone(), s: s.clone(), circles: self.nodes.iter().map(|n| Circle { x: n.x.clone(), y: n.y.clone(), label: n.label }).collect() }
    }
}

struct Frame {
    /// Circles present before this frame placed anything.
    base: usize,
    target: usize,
    after: usize,
    options: Vec<Size>,
    next: usize,
}

/// Grow `seed` until every circle centered in `region` is surrounded by a
/// closed corona allowed by `rules`, backtracking over placement choices.
/// On a stall the largest partial packing reached is returned.
pub fn grow_patch(seed: &Packing, region: &BBox, rules: &CoronaRules, opts: &GrowOptions) -> Result<GrowOutcome> {
    let prec = seed.prec();
    let mut cycles: [Vec<Vec<Size>>; 3] = Default::default();
    for size in [Size::Small, Size::Mid, Size::Large] {
        let radii = (seed.r.clone(), seed.s.clone());
        for xi in rules.for_size(size) {
            for cyc in cycles_of(xi)? {
                let corona = build_corona(size, &cyc, &radii.0, &radii.1, &opts.tangency_tol)?;
                if corona.closes {
                    cycles[slot(size)].push(cyc);
                }
            }
        }
    }
    let mut g = Grower {
        prec,
        radii: [seed.s.clone(), seed.r.clone(), Float::with_val(prec, 1u32)],
        nodes: Vec::new(),
        adj: Vec::new(),
        complete: Vec::new(),
        grid: Grid::default(),
        cycles,
        tol: &opts.tangency_tol,
        region,
    };
    for c in &seed.circles {
        let rx = g.rad(c.label).clone();
        let mut touching = Vec::new();
        for j in g.grid.near(c.x.to_f64(), c.y.to_f64()) {
            let d = g.dist_gap(&c.x, &c.y, &rx, j);
            if Float::with_val(prec, d.abs_ref()) <= *g.tol {
                touching.push(j);
            } else if d < 0u32 {
                return Err(Error::Precondition("seed circles overlap".into()));
            }
        }
        g.push(c.x.clone(), c.y.clone(), c.label, &touching);
    }
    let mut frames: Vec<Frame> = Vec::new();
    let mut best = g.packing(&seed.r, &seed.s);
    let mut steps = 0usize;
    let stall = |reason: &str, steps: usize, circle: Option<usize>| Some(Stall { reason: reason.into(), steps, circle });
    loop {
        steps += 1;
        if steps > opts.max_steps {
            let t = g.target();
            return Ok(GrowOutcome { packing: best, stall: stall("step budget exhausted", steps, t), steps });
        }
        let mut failed = false;
        match g.target() {
            None => return Ok(GrowOutcome { packing: g.packing(&seed.r, &seed.s), stall: None, steps }),
            Some(c) => match g.gap(c) {
                Gap::Closed => {
                    if g.conforms(c) {
                        g.complete[c] = true;
                        continue;
                    }
                    failed = true;
                }
                Gap::After(a) => {
                    frames.push(Frame { base: g.nodes.len(), target: c, after: a, options: vec![Size::Small, Size::Mid, Size::Large], next: 0 });
                }
            },
        }
        // advance the innermost frame, unwinding frames that run out of options
        loop {
            let Some(f) = frames.last_mut() else {
                let t = g.target();
                return Ok(GrowOutcome { packing: best, stall: stall("no legal placement", steps, t), steps });
            };
            if failed {
                while g.nodes.len() > f.base {
                    g.pop();
                }
            }
            let (target, after) = (f.target, f.after);
            let mut placed = false;
            while f.next < f.options.len() {
                let label = f.options[f.next];
                f.next += 1;
                if g.try_place(target, after, label) {
                    placed = true;
                    break;
                }
            }
            if placed {
                if g.nodes.len() > best.len() {
                    best = g.packing(&seed.r, &seed.s);
                }
                break;
            }
            frames.pop();
            failed = true;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    /// Penetration depth.
    pub depth: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    pub tangencies: usize,
    /// `(circle, compact)` for circles far enough inside the patch.
    pub interior: Vec<(usize, bool)>,
    /// Largest `|distance - sum of radii|` over tangent pairs.
    pub worst_residual: f64,
}

impl VerificationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn all_compact(&self) -> bool {
        self.interior.iter().all(|c| c.1)
    }
}

fn hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut p: Vec<(f64, f64)> = points.to_vec();
    p.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut h: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

/// Distance from `q` to the boundary of a counterclockwise convex polygon,
/// negative outside.
fn inset(poly: &[(f64, f64)], q: (f64, f64)) -> f64 {
    if poly.len() < 3 {
        return f64::NEG_INFINITY;
    }
    let mut best = f64::INFINITY;
    for k in 0..poly.len() {
        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let len = (ex * ex + ey * ey).sqrt();
        let d = (ex * (q.1 - a.1) - ey * (q.0 - a.0)) / len;
        best = best.min(d);
    }
    best
}

/// Circles judged for compactness lie at least this far inside the hull of all centers.
pub const INTERIOR_MARGIN: f64 = 3.0;

/// Overlaps, tangencies and compactness of circles well inside the patch.
pub fn verify(p: &Packing, tol: &Float) -> VerificationReport {
    let grid = p.grid();
    let prec = p.prec();
    struct Local {
        violations: Vec<Violation>,
        tangent: Vec<usize>,
        worst: f64,
    }
    let per: Vec<Local> = (0..p.len())
        .into_par_iter()
        .map(|i| {
            let c = &p.circles[i];
            let mut out = Local { violations: Vec::new(), tangent: Vec::new(), worst: 0.0 };
            for j in grid.near(c.x.to_f64(), c.y.to_f64()) {
                if j == i {
                    continue;
                }
                let g = p.gap(i, j);
                if g.clone().abs() <= *tol {
                    out.tangent.push(j);
                    out.worst = out.worst.max(g.to_f64().abs());
                } else if g < 0u32 && j > i {
                    out.violations.push(Violation { i, j, depth: to_decimal(&Float::with_val(prec, -g), 6) });
                }
            }
            out
        })
        .collect();
    let centers: Vec<(f64, f64)> = p.circles.iter().map(|c| (c.x.to_f64(), c.y.to_f64())).collect();
    let h = hull(&centers);
    let mut interior = Vec::new();
    for i in 0..p.len() {
        if inset(&h, centers[i]) < INTERIOR_MARGIN {
            continue;
        }
        let mut nb: Vec<(f64, usize)> = per[i].tangent.iter().map(|&j| ((centers[j].1 - centers[i].1).atan2(centers[j].0 - centers[i].0), j)).collect();
        nb.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = nb.len();
        let compact = k >= 3 && (0..k).all(|t| per[nb[t].1].tangent.contains(&nb[(t + 1) % k].1));
        interior.push((i, compact));
    }
    let mut violations: Vec<Violation> = per.iter().flat_map(|l| l.violations.iter().cloned()).collect();
    violations.sort_by_key(|a| (a.i, a.j));
    VerificationReport {
        violations,
        tangencies: per.iter().map(|l| l.tangent.len()).sum::<usize>() / 2,
        interior,
        worst_residual: per.iter().map(|l| l.worst).fold(0.0, f64::max),
    }
}

#[derive(Clone, Debug)]
pub struct SvgStyle {
    /// Pixels per unit length.
    pub scale: f64,
    /// Draw segments between tangent centers.
    pub tangency: bool,
    pub tol: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { scale: 100.0, tangency: false, tol: 1e-9 }
    }
}

/// SVG 1.1 document with one `circle` element per circle.
pub fn render_svg(p: &Packing, style: &SvgStyle) -> String {
    let b = p.bounding_box().unwrap_or(BBox { min_x: -1.0, min_y: -1.0, max_x: 1.0, max_y: 1.0 });
    let pad = 0.05 * (b.max_x - b.min_x).max(b.max_y - b.min_y).max(1.0);
    let (w, h) = (b.max_x - b.min_x + 2.0 * pad, b.max_y - b.min_y + 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {:.6} {:.6}" width="{:.0}" height="{:.0}">"#,
        b.min_x - pad,
        -(b.max_y + pad),
        w,
        h,
        w * style.scale,
        h * style.scale
    );
    let stroke = 0.004 * w.max(h) / 4.0;
    let _ = writeln!(
        out,
        "<style>circle{{stroke:#000;stroke-width:{stroke:.6}}} .small{{fill:#e4572e}} .mid{{fill:#4c9f70}} .large{{fill:#f3f1e0}} line{{stroke:#1d3557;stroke-width:{:.6}}}</style>",
        stroke / 2.0
    );
    for c in &p.circles {
        let _ =
            writeln!(out, r#"<circle class="{}" cx="{:.6}" cy="{:.6}" r="{:.6}"/>"#, c.label.name(), c.x.to_f64(), -c.y.to_f64(), p.radius(c.label).to_f64());
    }
    if style.tangency {
        let tol = Float::with_val(p.prec(), style.tol);
        for (i, j) in p.tangencies(&tol) {
            let (a, b) = (&p.circles[i], &p.circles[j]);
            let _ = writeln!(out, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, a.x.to_f64(), -a.y.to_f64(), b.x.to_f64(), -b.y.to_f64());
        }
    }
    out.push_str("</svg>\n");
    out
}
