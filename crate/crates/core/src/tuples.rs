//! Angle-count tuples: the predicates used to prune them, realizability as a
//! cyclic neighbor sequence, and the two finite enumerations.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angles::{component_index, Size};
use crate::error::{Error, Result};

/// Six non-negative counts in component order `{1,1}, {r,r}, {s,s}, {1,r}, {1,s}, {r,s}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleCount(pub [u32; 6]);

impl AngleCount {
    pub const fn new(xi: [u32; 6]) -> Self {
        AngleCount(xi)
    }

    pub fn dot(&self, w: [i64; 6]) -> i64 {
        self.0.iter().zip(w).map(|(&x, w)| x as i64 * w).sum()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Vertex degrees of the neighbor multigraph, loops counted twice.
    pub fn degrees(&self) -> [u32; 3] {
        let x = &self.0;
        [2 * x[0] + x[3] + x[4], 2 * x[1] + x[3] + x[5], 2 * x[2] + x[4] + x[5]]
    }
}

impl fmt::Display for AngleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = &self.0;
        write!(f, "({},{},{},{},{},{})", x[0], x[1], x[2], x[3], x[4], x[5])
    }
}

impl FromStr for AngleCount {
    type Err = Error;

    /// Accepts `1,0,3,0,2,0`, `(1,0,3,0,2,0)` or `[1,0,3,0,2,0]`.
    fn from_str(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Parse(format!("angle-count needs 6 entries, got {text:?}")));
        }
        let mut xi = [0u32; 6];
        for (slot, p) in xi.iter_mut().zip(parts) {
            *slot = p.parse().map_err(|_| Error::Parse(format!("bad angle-count entry {p:?} in {text:?}")))?;
        }
        Ok(AngleCount(xi))
    }
}

/// An `(eta, zeta)` pair: angle-counts around a small and a mid circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidatePair {
    pub eta: AngleCount,
    pub zeta: AngleCount,
}

impl CandidatePair {
    pub fn new(eta: AngleCount, zeta: AngleCount) -> Self {
        Self { eta, zeta }
    }

    pub fn in_k(&self) -> bool {
        snec(&self.eta) && rnec(&self.zeta) && rboundsextra(&self.zeta) && srdisjunct(&self.eta, &self.zeta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Seq,
    Mod2,
    Sbounds,
    Snonhex,
    Snec,
    Rbounds,
    Rnonhex,
    Rfewlargeneighbors,
    Rnec,
    Rverticalcont,
    Rboundsextra,
    Ononhex,
    Onec,
}

impl Predicate {
    pub const ALL: [Predicate; 13] = [
        Predicate::Seq,
        Predicate::Mod2,
        Predicate::Sbounds,
        Predicate::Snonhex,
        Predicate::Snec,
        Predicate::Rbounds,
        Predicate::Rnonhex,
        Predicate::Rfewlargeneighbors,
        Predicate::Rnec,
        Predicate::Rverticalcont,
        Predicate::Rboundsextra,
        Predicate::Ononhex,
        Predicate::Onec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Seq => "seq",
            Predicate::Mod2 => "mod2",
            Predicate::Sbounds => "sbounds",
            Predicate::Snonhex => "snonhex",
            Predicate::Snec => "snec",
            Predicate::Rbounds => "rbounds",
            Predicate::Rnonhex => "rnonhex",
            Predicate::Rfewlargeneighbors => "rfewlargeneighbors",
            Predicate::Rnec => "rnec",
            Predicate::Rverticalcont => "rverticalcont",
            Predicate::Rboundsextra => "rboundsextra",
            Predicate::Ononhex => "ononhex",
            Predicate::Onec => "onec",
        }
    }

    pub fn eval(self, xi: &AngleCount) -> bool {
        match self {
            Predicate::Seq => seq_realizable(xi),
            Predicate::Mod2 => mod2(xi),
            Predicate::Sbounds => sbounds(xi),
            Predicate::Snonhex => snonhex(xi),
            Predicate::Snec => snec(xi),
            Predicate::Rbounds => rbounds(xi),
            Predicate::Rnonhex => rnonhex(xi),
            Predicate::Rfewlargeneighbors => rfewlargeneighbors(xi),
            Predicate::Rnec => rnec(xi),
            Predicate::Rverticalcont => rverticalcont(xi),
            Predicate::Rboundsextra => rboundsextra(xi),
            Predicate::Ononhex => ononhex(xi),
            Predicate::Onec => onec(xi),
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        Predicate::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| Error::Usage(format!("unknown predicate {name:?}")))
    }
}

/// Evaluate a predicate by name.
pub fn predicate(name: &str, xi: &AngleCount) -> Result<bool> {
    Ok(name.parse::<Predicate>()?.eval(xi))
}

pub fn mod2(xi: &AngleCount) -> bool {
    xi.dot([2, 0, 0, 1, 1, 0]) % 2 == 0 && xi.dot([0, 2, 0, 1, 0, 1]) % 2 == 0 && xi.dot([0, 0, 2, 0, 1, 1]) % 2 == 0
}

pub fn sbounds(xi: &AngleCount) -> bool {
    xi.dot([1, 1, 1, 1, 1, 1]) < 6 && xi.dot([6, 6, 2, 6, 3, 3]) > 12
}

pub fn snonhex(xi: &AngleCount) -> bool {
    xi.dot([1, 1, 0, 1, 1, 1]) != 0
}

pub fn snec(xi: &AngleCount) -> bool {
    sbounds(xi) && snonhex(xi) && seq_realizable(xi) && mod2(xi)
}

pub fn rbounds(xi: &AngleCount) -> bool {
    xi.dot([1, 1, 0, 1, 0, 0]) < 6 && xi.dot([6, 2, 2, 3, 3, 2]) > 12 && xi.dot([2, 2, 0, 2, 1, 1]) <= 12
}

pub fn rnonhex(xi: &AngleCount) -> bool {
    xi.dot([1, 0, 1, 1, 1, 1]) != 0
}

pub fn rfewlargeneighbors(xi: &AngleCount) -> bool {
    xi.dot([2, 0, 0, 1, 1, 0]) <= 0 || xi.dot([2, 2, 0, 2, 1, 1]) < 12
}

pub fn rnec(xi: &AngleCount) -> bool {
    rbounds(xi) && rnonhex(xi) && seq_realizable(xi) && mod2(xi) && rfewlargeneighbors(xi)
}

pub fn rverticalcont(xi: &AngleCount) -> bool {
    xi.dot([0, 0, 1, 0, 1, 1]) == 0
}

pub fn rboundsextra(xi: &AngleCount) -> bool {
    xi.0[2] < 35
}

pub fn srdisjunct(eta: &AngleCount, zeta: &AngleCount) -> bool {
    eta.dot([1, 0, 0, 1, 1, 0]) != 0 || zeta.dot([1, 0, 0, 1, 1, 0]) != 0
}

pub fn ononhex(xi: &AngleCount) -> bool {
    xi.dot([0, 1, 1, 1, 1, 1]) != 0 && xi.0[0] < 6
}

pub fn onec(xi: &AngleCount) -> bool {
    ononhex(xi) && seq_realizable(xi) && mod2(xi)
}

/// Is there a cyclic sequence over `{s, r, 1}` whose transition counts are `xi`?
///
/// Equivalent to the neighbor multigraph (loops `xi_1..xi_3`, edges
/// `xi_4..xi_6`) having an Eulerian circuit.
pub fn seq_realizable(xi: &AngleCount) -> bool {
    if xi.total() == 0 {
        return false;
    }
    let deg = xi.degrees();
    if deg.iter().any(|d| d % 2 != 0) {
        return false;
    }
    connected(xi)
}

fn connected(xi: &AngleCount) -> bool {
    let deg = xi.degrees();
    let x = &xi.0;
    // edges between the three vertices: 0-1 (x4), 0-2 (x5), 1-2 (x6)
    let linked = |a: usize, b: usize| -> bool {
        match (a.min(b), a.max(b)) {
            (0, 1) => x[3] > 0,
            (0, 2) => x[4] > 0,
            (1, 2) => x[5] > 0,
            _ => true,
        }
    };
    let active: Vec<usize> = (0..3).filter(|&v| deg[v] > 0).collect();
    let Some(&start) = active.first() else { return false };
    let mut seen = [false; 3];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in 0..3 {
            if !seen[w] && deg[w] > 0 && linked(v, w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    active.iter().all(|&v| seen[v])
}

const VERTICES: [Size; 3] = [Size::Large, Size::Mid, Size::Small];

/// Transition counts of a cyclic neighbor sequence.
pub fn encode_cycle(cycle: &[Size]) -> AngleCount {
    let mut xi = [0u32; 6];
    let n = cycle.len();
    for j in 0..n {
        xi[component_index(cycle[j], cycle[(j + 1) % n])] += 1;
    }
    AngleCount(xi)
}

/// One cyclic neighbor order realizing `xi`, fixed for a given input.
pub fn decode_cycle(xi: &AngleCount) -> Result<Vec<Size>> {
    if !seq_realizable(xi) {
        return Err(Error::Precondition(format!("angle-count {xi} is not realizable as a corona")));
    }
    let x = &xi.0;
    // adjacency multiplicities, loops stored on the diagonal
    let mut adj = [[0u32; 3]; 3];
    adj[0][0] = x[0];
    adj[1][1] = x[1];
    adj[2][2] = x[2];
    adj[0][1] = x[3];
    adj[1][0] = x[3];
    adj[0][2] = x[4];
    adj[2][0] = x[4];
    adj[1][2] = x[5];
    adj[2][1] = x[5];
    let deg = xi.degrees();
    let start = (0..3).find(|&v| deg[v] > 0).expect("realizable tuple has an edge");
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(xi.total() as usize + 1);
    while let Some(&v) = stack.last() {
        // prefer edges to other vertices before loops, lowest index first
        let next = (0..3).filter(|&w| w != v).find(|&w| adj[v][w] > 0).or(if adj[v][v] > 0 { Some(v) } else { None });
        match next {
            Some(w) => {
                adj[v][w] -= 1;
                if w != v {
                    adj[w][v] -= 1;
                }
                stack.push(w);
            }
            None => {
                circuit.push(v);
                stack.pop();
            }
        }
    }
    circuit.pop();
    circuit.reverse();
    Ok(circuit.into_iter().map(|v| VERTICES[v]).collect())
}

fn scan_box(caps: [u32; 6], mut keep: impl FnMut(&AngleCount) -> bool) -> Vec<AngleCount> {
    let mut out = Vec::new();
    let mut xi = [0u32; 6];
    loop {
        let t = AngleCount(xi);
        if keep(&t) {
            out.push(t);
        }
        let mut i = 5;
        loop {
            if xi[i] < caps[i] {
                xi[i] += 1;
                break;
            }
            xi[i] = 0;
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
        }
    }
}

/// All `eta` with `snec(eta)`, sorted. Scans the box `0..=scan` per coordinate.
pub fn enumerate_snec_in_box(scan: u32) -> Vec<AngleCount> {
    scan_box([scan; 6], snec)
}

/// All `eta` with `snec(eta)`, sorted.
///
/// sbounds forces every coordinate sum below 6, so each entry is at most 5.
pub fn enumerate_snec() -> Vec<AngleCount> {
    enumerate_snec_in_box(5)
}

/// All `zeta` with `rnec(zeta)` and `rboundsextra(zeta)`, sorted.
///
/// rbounds gives `zeta_1 + zeta_2 + zeta_4 <= 5` and `zeta_5, zeta_6 <= 12`;
/// rboundsextra gives `zeta_3 <= 34`.
pub fn enumerate_rnec() -> Vec<AngleCount> {
    enumerate_rnec_in_box([5, 5, 34, 5, 12, 12])
}

pub fn enumerate_rnec_in_box(caps: [u32; 6]) -> Vec<AngleCount> {
    scan_box(caps, |z| rnec(z) && rboundsextra(z))
}

/// Which beta-side tuples enter K.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KScope {
    /// Every tuple allowed by the predicates.
    #[default]
    Full,
    /// Additionally `zeta_5 <= 6`.
    Capped,
}

impl KScope {
    pub fn parse(text: &str) -> Result<KScope> {
        match text {
            "full" => Ok(KScope::Full),
            "capped" => Ok(KScope::Capped),
            other => Err(Error::Parse(format!("unknown K scope {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KScope::Full => "full",
            KScope::Capped => "capped",
        }
    }

    pub fn admits(self, zeta: &AngleCount) -> bool {
        match self {
            KScope::Full => true,
            KScope::Capped => zeta.0[4] <= 6,
        }
    }
}

/// The candidate set K, sorted by `(eta, zeta)`.
pub fn enumerate_k() -> Vec<CandidatePair> {
    enumerate_k_scoped(KScope::Full)
}

pub fn enumerate_k_scoped(scope: KScope) -> Vec<CandidatePair> {
    let etas = enumerate_snec();
    let zetas: Vec<AngleCount> = enumerate_rnec().into_iter().filter(|z| scope.admits(z)).collect();
    let mut out = Vec::new();
    for eta in &etas {
        for zeta in &zetas {
            if srdisjunct(eta, zeta) {
                out.push(CandidatePair::new(*eta, *zeta));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct EtaRecord<'a> {
    eta: &'a AngleCount,
}

/// One `{"eta":[..]}` object per line.
pub fn write_tuples_jsonl<W: Write>(mut w: W, tuples: &[AngleCount]) -> Result<()> {
    for t in tuples {
        serde_json::to_writer(&mut w, &EtaRecord { eta: t })?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_tuples_csv<W: Write>(w: W, tuples: &[AngleCount]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["eta1", "eta2", "eta3", "eta4", "eta5", "eta6"])?;
    for t in tuples {
        csv.write_record(t.0.iter().map(|v| v.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

/// One `{"eta":[..],"zeta":[..]}` object per line.
pub fn write_pairs_jsonl<W: Write>(mut w: W, pairs: &[CandidatePair]) -> Result<()> {
    for p in pairs {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_pairs_csv<W: Write>(w: W, pairs: &[CandidatePair]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=6).map(|i| format!("eta{i}")).collect();
    header.extend((1..=6).map(|i| format!("zeta{i}")));
    csv.write_record(&header)?;
    for p in pairs {
        csv.write_record(p.eta.0.iter().chain(p.zeta.0.iter()).map(|v| v.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_pairs_jsonl(text: &str) -> Result<Vec<CandidatePair>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(Error::from)).collect()
}
