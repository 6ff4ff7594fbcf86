//! Exact decisions for numerically tied boundary comparisons, and intercept
//! certificates built on resultants.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::angles::Kind;
use crate::contours::{Check, Comparison, ContourProfile, Ctx, InterceptResult, Quantity, Status};
use crate::error::{Error, Result};
use crate::symbolic::boundary::{endpoint_poly, Endpoint};
use crate::symbolic::{algebraic_cmp, contour_poly, eliminate, AlgebraicNumber, AlgebraicRecord, Cap, Poly1, Poly2, Specialization, Var};
use crate::tuples::{AngleCount, CandidatePair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

/// Exact outcome of one tied comparison `lower < upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieResolution {
    pub comparison: Comparison,
    pub relation: Relation,
    pub lower: AlgebraicRecord,
    pub upper: AlgebraicRecord,
}

type PolyKey = (Kind, AngleCount, Endpoint);

/// The two quantities a comparison reads, as `(lower, upper)`.
fn sides(c: Comparison) -> ((Kind, Endpoint), (Kind, Endpoint)) {
    match c {
        Comparison::VerticalAbscissa => ((Kind::Alpha, Endpoint::Diagonal), (Kind::Beta, Endpoint::Edge)),
        Comparison::Diagonal => ((Kind::Alpha, Endpoint::Diagonal), (Kind::Beta, Endpoint::Diagonal)),
        Comparison::OriginSlope => ((Kind::Beta, Endpoint::OriginSlope), (Kind::Alpha, Endpoint::OriginSlope)),
        Comparison::AtOne => ((Kind::Alpha, Endpoint::AtOne), (Kind::Beta, Endpoint::AtOne)),
    }
}

fn key(pair: &CandidatePair, side: (Kind, Endpoint)) -> PolyKey {
    let t = if side.0 == Kind::Alpha { pair.eta } else { pair.zeta };
    (side.0, t, side.1)
}

fn exact(v: i64) -> AlgebraicNumber {
    let q = Rational::from(v);
    AlgebraicNumber { poly: Poly1::from_i64(&[-v, 1]), lo: q.clone(), hi: q }
}

/// Bits of a value computed to `digits` decimal digits, less a margin.
fn trusted_bits(digits: u32) -> u32 {
    ((digits.saturating_sub(4)) as f64 * std::f64::consts::LOG2_10) as u32
}

fn algebraic(q: &Quantity, poly: Option<&Poly1>, digits: u32) -> Result<AlgebraicNumber> {
    match q {
        Quantity::Zero => Ok(exact(0)),
        Quantity::One => Ok(exact(1)),
        Quantity::Value(v) => {
            let p = poly.ok_or_else(|| Error::Solver("no defining polynomial".into()))?;
            AlgebraicNumber::near(p, v, trusted_bits(digits))
        }
    }
}

fn resolve_check(pair: &CandidatePair, check: &Check, polys: &BTreeMap<PolyKey, Poly1>, digits: u32) -> Result<TieResolution> {
    let (lo_side, hi_side) = sides(check.comparison);
    let lower = algebraic(&check.lower, polys.get(&key(pair, lo_side)), digits)?;
    let upper = algebraic(&check.upper, polys.get(&key(pair, hi_side)), digits)?;
    let relation = match algebraic_cmp(&lower, &upper) {
        std::cmp::Ordering::Less => Relation::Less,
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Greater => Relation::Greater,
    };
    Ok(TieResolution { comparison: check.comparison, relation, lower: lower.record(digits), upper: upper.record(digits) })
}

fn needed_keys(e: &InterceptResult) -> Vec<PolyKey> {
    let mut out = Vec::new();
    for ch in e.checks.iter().filter(|c| e.ties.contains(&c.comparison)) {
        let (lo, hi) = sides(ch.comparison);
        if !ch.lower.is_exact() {
            out.push(key(&e.pair, lo));
        }
        if !ch.upper.is_exact() {
            out.push(key(&e.pair, hi));
        }
    }
    out
}

/// Decide every ambiguous entry exactly. Equality of the two quantities means
/// the contours meet on the boundary of the triangle, so the pair has no
/// intercept. Entries whose polynomials exceed `cap` stay ambiguous.
pub(crate) fn resolve_ties(
    ctx: &Ctx,
    entries: &mut [InterceptResult],
    etas: &BTreeMap<AngleCount, ContourProfile>,
    zetas: &BTreeMap<AngleCount, ContourProfile>,
    cap: &Cap,
) -> Result<()> {
    let mut keys: Vec<PolyKey> = entries.iter().filter(|e| e.status == Status::Ambiguous).flat_map(needed_keys).collect();
    keys.sort();
    keys.dedup();
    let built: Vec<(PolyKey, Result<Poly1>)> = keys
        .par_iter()
        .map(|k| {
            let c = Cap::new(cap.terms, format!("{} {} {:?}", k.0.name(), k.1, k.2));
            (*k, endpoint_poly(k.0, &k.1, k.2, &c))
        })
        .collect();
    let mut polys = BTreeMap::new();
    let mut failures = BTreeMap::new();
    for (k, r) in built {
        match r {
            Ok(p) => {
                polys.insert(k, p);
            }
            Err(e) => {
                failures.insert(k, e.to_string());
            }
        }
    }
    let outcomes: Vec<(usize, Result<InterceptResult>)> = entries
        .par_iter()
        .enumerate()
        .filter(|(_, e)| e.status == Status::Ambiguous)
        .map(|(i, e)| (i, resolve_entry(ctx, e, &etas[&e.pair.eta], &zetas[&e.pair.zeta], &polys, &failures)))
        .collect();
    for (i, r) in outcomes {
        entries[i] = r?;
    }
    Ok(())
}

fn resolve_entry(
    ctx: &Ctx,
    e: &InterceptResult,
    eta: &ContourProfile,
    zeta: &ContourProfile,
    polys: &BTreeMap<PolyKey, Poly1>,
    failures: &BTreeMap<PolyKey, String>,
) -> Result<InterceptResult> {
    let mut out = e.clone();
    if let Some(msg) = needed_keys(e).iter().find_map(|k| failures.get(k)) {
        out.note = Some(msg.clone());
        return Ok(out);
    }
    let mut passed = true;
    for ch in e.checks.iter().filter(|c| e.ties.contains(&c.comparison)) {
        let res = match resolve_check(&e.pair, ch, polys, ctx.digits()) {
            Ok(r) => r,
            Err(err) => {
                out.note = Some(err.to_string());
                out.resolutions.clear();
                return Ok(out);
            }
        };
        passed &= res.relation == Relation::Less;
        out.resolutions.push(res);
    }
    if passed {
        out.status = Status::Found;
        crate::contours::complete_found(ctx, &mut out, eta, zeta)?;
    } else {
        out.status = Status::None;
    }
    Ok(out)
}

/// Entries that were tied numerically, with their exact resolutions, as JSON lines.
pub fn write_tie_ledger_jsonl<W: Write>(mut w: W, entries: &[InterceptResult]) -> Result<()> {
    #[derive(Serialize)]
    struct Line<'a> {
        eta: AngleCount,
        zeta: AngleCount,
        ties: &'a [Comparison],
        status: Status,
        resolutions: &'a [TieResolution],
        #[serde(skip_serializing_if = "Option::is_none")]
        note: &'a Option<String>,
    }
    for e in entries.iter().filter(|e| !e.ties.is_empty()) {
        let line = Line { eta: e.pair.eta, zeta: e.pair.zeta, ties: &e.ties, status: e.status, resolutions: &e.resolutions, note: &e.note };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Exact description of an intercept: both contour polynomials, their
/// resultants and the isolated coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub eta: AngleCount,
    pub zeta: AngleCount,
    pub digits: u32,
    /// Contour polynomial of `eta . alpha = 2 pi` in `(r, s)`.
    pub p: Poly2,
    /// Contour polynomial of `zeta . beta = 2 pi`.
    pub q: Poly2,
    /// `res_s(p, q)`, a polynomial in `r`.
    pub in_r: Poly1,
    /// `res_r(p, q)`, a polynomial in `s`.
    pub in_s: Poly1,
    pub r: AlgebraicRecord,
    pub s: AlgebraicRecord,
}

/// Certify the point `(r, s)` of a found pair.
pub fn certify(pair: &CandidatePair, r: &Float, s: &Float, digits: u32, cap: &Cap) -> Result<Certificate> {
    let label = |k: Kind, t: &AngleCount| Cap::new(cap.terms, format!("{} {t}", k.name()));
    let p: Poly2 = contour_poly(Kind::Alpha, &pair.eta, Specialization::General, &label(Kind::Alpha, &pair.eta))?;
    let q: Poly2 = contour_poly(Kind::Beta, &pair.zeta, Specialization::General, &label(Kind::Beta, &pair.zeta))?;
    let bound = Float::with_val(r.prec(), Float::i_exp(1, -(trusted_bits(digits) as i32) / 2));
    for (name, f) in [("p", &p), ("q", &q)] {
        let v = f.relative_residual(r, s);
        if v > bound {
            return Err(Error::Verification(format!("{name} does not vanish at the point: relative residual {:e}", v.to_f64())));
        }
    }
    let in_r = eliminate(&p, &q, Var::S)?;
    let in_s = eliminate(&p, &q, Var::R)?;
    let ra = AlgebraicNumber::near(&in_r, r, trusted_bits(digits))?;
    let sa = AlgebraicNumber::near(&in_s, s, trusted_bits(digits))?;
    Ok(Certificate { eta: pair.eta, zeta: pair.zeta, digits, p, q, in_r, in_s, r: ra.record(digits), s: sa.record(digits) })
}

impl Certificate {
    /// Re-derive both roots from the stored intervals and check them against the stored decimals.
    pub fn check(&self) -> Result<()> {
        for (name, rec, poly) in [("r", &self.r, &self.in_r), ("s", &self.s, &self.in_s)] {
            let lo: Rational = rec.lo.parse().map_err(|_| Error::Parse(format!("bad interval end {:?}", rec.lo)))?;
            let hi: Rational = rec.hi.parse().map_err(|_| Error::Parse(format!("bad interval end {:?}", rec.hi)))?;
            if rec.poly != poly.squarefree() {
                return Err(Error::Verification(format!("{name}: stored polynomial is not the square-free part of the resultant")));
            }
            let a = AlgebraicNumber { poly: rec.poly.clone(), lo: lo.clone(), hi: hi.clone() };
            if lo != hi {
                let n = crate::symbolic::roots::Sturm::new(&a.poly).count(&lo, &hi);
                if n != 1 || a.poly.sign_at(&lo) == 0 {
                    return Err(Error::Verification(format!("{name}: interval does not isolate one root")));
                }
            }
            if a.to_decimal(self.digits) != rec.approx {
                return Err(Error::Verification(format!("{name}: stored decimal disagrees with the interval")));
            }
        }
        Ok(())
    }

    pub fn r_decimal(&self) -> &str {
        &self.r.approx
    }

    pub fn s_decimal(&self) -> &str {
        &self.s.approx
    }
}
