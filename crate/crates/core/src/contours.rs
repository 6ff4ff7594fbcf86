//! The 2pi-contours of `eta . alpha` and `zeta . beta`: implicit functions,
//! boundary quantities, intercept decisions and the catalog of intercept points.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::angles::{origin_limit_cosines_closed, petal_angle_unchecked, Kind, RadiiPair, COMPONENT_PAIRS};
use crate::certify::{resolve_ties, TieResolution};
use crate::error::{Error, Result};
use crate::precision::{to_decimal, Precision};
use crate::solve::{illinois, Tolerance};
use crate::symbolic::Cap;
use crate::tuples::{rnec, rverticalcont, snec, AngleCount, CandidatePair};

/// Extra decimal digits carried internally on top of the requested budget.
pub const GUARD_DIGITS: u32 = 8;

/// Working context: precision and the constants every evaluation needs.
#[derive(Clone, Debug)]
pub struct Ctx {
    digits: u32,
    bits: u32,
    pi3: Float,
    pi6: Float,
    two_pi: Float,
    tol: Tolerance,
}

impl Ctx {
    pub fn new(digits: u32) -> Result<Self> {
        let base = Precision::new(digits)?;
        let work = base.widened(GUARD_DIGITS);
        let bits = work.bits();
        let pi = work.pi();
        Ok(Ctx {
            digits,
            bits,
            pi3: Float::with_val(bits, &pi / 3u32),
            pi6: Float::with_val(bits, &pi / 6u32),
            two_pi: pi * 2u32,
            tol: Tolerance::for_bits(bits, digits + GUARD_DIGITS),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn two_pi(&self) -> &Float {
        &self.two_pi
    }

    /// `10^-(digits/2)`: gaps at or below this are not trusted.
    pub fn threshold(&self) -> Float {
        Float::with_val(self.bits, Precision::new(self.digits).expect("validated").ambiguity_threshold())
    }

    /// `10^-(digits-10)`: residual bound for solved equations.
    pub fn residual_bound(&self) -> Float {
        Precision::new(self.digits).expect("validated").residual_tolerance()
    }

    fn units(&self, n: i64) -> Float {
        Float::with_val(self.bits, &self.pi6 * n)
    }
}

fn constant_component(kind: Kind, i: usize) -> bool {
    matches!((kind, i), (Kind::Alpha, 2) | (Kind::Beta, 1) | (Kind::Gamma, 0))
}

/// `xi . tau(r, s)`, also valid on the closed edges `s = r`, `r = 1` and,
/// for beta, `s = 0`.
pub(crate) fn f_raw(ctx: &Ctx, kind: Kind, xi: &AngleCount, r: &Float, s: &Float) -> Float {
    let one = ctx.float(1u32);
    let center = kind.center().radius(r, s, &one);
    let mut acc = ctx.float(0u32);
    for (i, &(b, c)) in COMPONENT_PAIRS.iter().enumerate() {
        let n = xi.0[i];
        if n == 0 {
            continue;
        }
        if constant_component(kind, i) {
            acc += Float::with_val(ctx.bits, &ctx.pi3 * n);
        } else {
            let ang = petal_angle_unchecked(center, b.radius(r, s, &one), c.radius(r, s, &one));
            acc += ang * n;
        }
    }
    acc
}

fn minus_two_pi(ctx: &Ctx, v: Float) -> Float {
    v - &ctx.two_pi
}

/// `xi . tau(p)`.
pub fn eval_f(kind: Kind, xi: &AngleCount, p: &RadiiPair) -> Float {
    let bits = p.r().prec().max(p.s().prec());
    let digits = ((bits.saturating_sub(16)) as f64 / std::f64::consts::LOG2_10).floor().max(10.0) as u32;
    let ctx = Ctx::new(digits).expect("digits derived from a valid precision");
    let r = Float::with_val(ctx.bits, p.r());
    let s = Float::with_val(ctx.bits, p.s());
    f_raw(&ctx, kind, xi, &r, &s)
}

/// A boundary quantity that is either an exact 0 or 1 or a numeric value.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Zero,
    One,
    Value(Float),
}

impl Quantity {
    pub fn to_float(&self, bits: u32) -> Float {
        match self {
            Quantity::Zero => Float::with_val(bits, 0u32),
            Quantity::One => Float::with_val(bits, 1u32),
            Quantity::Value(v) => Float::with_val(bits, v),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Quantity::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Quantity::One)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Quantity::Value(_))
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        match self {
            Quantity::Zero => "0".into(),
            Quantity::One => "1".into(),
            Quantity::Value(v) => to_decimal(v, digits),
        }
    }
}

/// Boundary data of one 2pi-contour.
#[derive(Clone, Debug)]
pub struct ContourProfile {
    pub kind: Kind,
    pub tuple: AngleCount,
    pub vertical: bool,
    /// Abscissa of a vertical contour.
    pub r_vert: Option<Float>,
    /// Alpha side: the diagonal crossing `a`.
    pub a_endpoint: Option<Quantity>,
    /// Beta side: where `psi` leaves the `s = 0` edge.
    pub c_endpoint: Option<Quantity>,
    /// Beta side: the diagonal crossing `d`.
    pub d_endpoint: Option<Quantity>,
    /// `lim_{r -> 0} phi(r)/r` (when `a = 0`) or `psi(r)/r` (when `c = 0`).
    pub origin_slope: Option<Quantity>,
    /// `lim_{r -> 1} phi(r)` or `psi(r)` (beta side only when `d = 1`).
    pub value_at_one: Option<Quantity>,
}

fn solve_with(ctx: &Ctx, f: impl FnMut(&Float) -> Result<Float>, lo: Float, f_lo: Float, hi: Float, f_hi: Float) -> Result<Float> {
    illinois(f, lo, f_lo, hi, f_hi, ctx.tol)
}

fn phi_raw(ctx: &Ctx, eta: &AngleCount, r: &Float) -> Result<Option<Float>> {
    let g = |s: &Float| Ok(minus_two_pi(ctx, f_raw(ctx, Kind::Alpha, eta, r, s)));
    let g_hi = g(r)?;
    if !g_hi.is_sign_negative() || g_hi.is_zero() {
        return Ok(None);
    }
    let mut lo = Float::with_val(ctx.bits, r / 10u32);
    let mut g_lo = g(&lo)?;
    let mut tries = 0;
    while !g_lo.is_sign_positive() || g_lo.is_zero() {
        tries += 1;
        if tries > 40 {
            return Err(Error::Solver(format!("phi bracket failed for {eta} at r = {}", r.to_f64())));
        }
        lo /= 16u32;
        g_lo = g(&lo)?;
    }
    solve_with(ctx, g, lo, g_lo, r.clone(), g_hi).map(Some)
}

fn psi_raw(ctx: &Ctx, zeta: &AngleCount, r: &Float) -> Result<Option<Float>> {
    let zero = ctx.float(0u32);
    let g = |s: &Float| Ok(minus_two_pi(ctx, f_raw(ctx, Kind::Beta, zeta, r, s)));
    let g_lo = g(&zero)?;
    let g_hi = g(r)?;
    if !g_lo.is_sign_negative() || g_lo.is_zero() || !g_hi.is_sign_positive() || g_hi.is_zero() {
        return Ok(None);
    }
    solve_with(ctx, g, zero, g_lo, r.clone(), g_hi).map(Some)
}

fn check_open_unit(r: &Float) -> Result<()> {
    if !(*r > 0u32 && *r < 1u32) {
        return Err(Error::Domain(format!("r = {} is not in (0, 1)", r.to_f64())));
    }
    Ok(())
}

/// The `s` with `eta . alpha(r, s) = 2pi`, if the contour crosses this `r`.
pub fn phi_eval(eta: &AngleCount, r: &Float, digits: u32) -> Result<Option<Float>> {
    if !snec(eta) {
        return Err(Error::Precondition(format!("{eta} does not satisfy snec")));
    }
    check_open_unit(r)?;
    let ctx = Ctx::new(digits)?;
    phi_raw(&ctx, eta, &Float::with_val(ctx.bits, r))
}

/// The `s` with `zeta . beta(r, s) = 2pi`, if the contour crosses this `r`.
pub fn psi_eval(zeta: &AngleCount, r: &Float, digits: u32) -> Result<Option<Float>> {
    if !rnec(zeta) {
        return Err(Error::Precondition(format!("{zeta} does not satisfy rnec")));
    }
    if rverticalcont(zeta) {
        return Err(Error::Precondition(format!("{zeta} has a vertical contour; use vertical_abscissa")));
    }
    check_open_unit(r)?;
    let ctx = Ctx::new(digits)?;
    psi_raw(&ctx, zeta, &Float::with_val(ctx.bits, r))
}

/// Integer weights (in units of pi/6) of each component on the diagonal at `r -> 0`.
const DIAG_AT_ZERO: [i64; 6] = [6, 2, 2, 3, 3, 2];
/// The `s -> 0` edge of beta at `r -> 0`: only components 1, 2, 4 survive.
const EDGE_AT_ZERO: [i64; 6] = [6, 2, 0, 3, 0, 0];

fn edge_h(ctx: &Ctx, zeta: &AngleCount, r: &Float) -> Float {
    f_raw(ctx, Kind::Beta, zeta, r, &ctx.float(0u32))
}

/// Root in `(0, 1)` of a decreasing function given its limits in units of pi/6.
fn solve_unit_decreasing(ctx: &Ctx, mut f: impl FnMut(&Float) -> Float, at_zero_units: i64, at_one_units: i64) -> Result<Float> {
    let lo = ctx.float(0u32);
    let hi = ctx.float(1u32);
    let f_lo = minus_two_pi(ctx, ctx.units(at_zero_units));
    let f_hi = minus_two_pi(ctx, ctx.units(at_one_units));
    solve_with(ctx, |x| Ok(minus_two_pi(ctx, f(x))), lo, f_lo, hi, f_hi)
}

fn vertical_raw(ctx: &Ctx, zeta: &AngleCount) -> Result<Float> {
    let z = &zeta.0;
    let at0 = zeta.dot(EDGE_AT_ZERO);
    let at1 = 2 * (z[0] + z[1] + z[3]) as i64;
    if at0 <= 12 || at1 >= 12 {
        return Err(Error::Solver(format!("vertical contour of {zeta} has no abscissa in (0,1)")));
    }
    solve_unit_decreasing(ctx, |r| edge_h(ctx, zeta, r), at0, at1)
}

/// Abscissa of the vertical contour of `zeta`.
pub fn vertical_abscissa(zeta: &AngleCount, digits: u32) -> Result<Float> {
    if !(rnec(zeta) && rverticalcont(zeta)) {
        return Err(Error::Precondition(format!("{zeta} is not an rnec tuple with a vertical contour")));
    }
    vertical_raw(&Ctx::new(digits)?, zeta)
}

fn limit_angle_sum(ctx: &Ctx, kind: Kind, xi: &AngleCount, m: &Float) -> Float {
    let cos = origin_limit_cosines_closed(kind, m);
    let mut acc = ctx.float(0u32);
    for (i, c) in cos.iter().enumerate() {
        if xi.0[i] != 0 {
            let clamped = Float::with_val(ctx.bits, c.clamp_ref(&-1i32, &1i32));
            acc += clamped.acos() * xi.0[i];
        }
    }
    acc
}

fn alpha_profile(ctx: &Ctx, eta: &AngleCount) -> Result<ContourProfile> {
    let diag0 = eta.dot(DIAG_AT_ZERO);
    let diag1 = 2 * eta.total() as i64;
    let a = if diag0 <= 12 { Quantity::Zero } else { Quantity::Value(solve_unit_decreasing(ctx, |r| f_raw(ctx, Kind::Alpha, eta, r, r), diag0, diag1)?) };
    let origin_slope = if !a.is_zero() {
        None
    } else if diag0 == 12 {
        Some(Quantity::One)
    } else {
        let lo = ctx.float(0u32);
        let hi = ctx.float(1u32);
        let f_lo = minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Alpha, eta, &lo));
        let f_hi = minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Alpha, eta, &hi));
        let m = solve_with(ctx, |m| Ok(minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Alpha, eta, m))), lo, f_lo, hi, f_hi)?;
        Some(Quantity::Value(m))
    };
    let one = ctx.float(1u32);
    let at_one = phi_raw(ctx, eta, &one)?.ok_or_else(|| Error::Solver(format!("phi(1) bracket failed for {eta}")))?;
    Ok(ContourProfile {
        kind: Kind::Alpha,
        tuple: *eta,
        vertical: false,
        r_vert: None,
        a_endpoint: Some(a),
        c_endpoint: None,
        d_endpoint: None,
        origin_slope,
        value_at_one: Some(Quantity::Value(at_one)),
    })
}

fn beta_profile(ctx: &Ctx, zeta: &AngleCount) -> Result<ContourProfile> {
    if rverticalcont(zeta) {
        let r_vert = vertical_raw(ctx, zeta)?;
        return Ok(ContourProfile {
            kind: Kind::Beta,
            tuple: *zeta,
            vertical: true,
            r_vert: Some(r_vert),
            a_endpoint: None,
            c_endpoint: None,
            d_endpoint: None,
            origin_slope: None,
            value_at_one: None,
        });
    }
    let z = &zeta.0;
    let edge0 = zeta.dot(EDGE_AT_ZERO);
    let edge1 = 2 * (z[0] + z[1] + z[3]) as i64;
    let c = if edge0 <= 12 { Quantity::Zero } else { Quantity::Value(solve_unit_decreasing(ctx, |r| edge_h(ctx, zeta, r), edge0, edge1)?) };
    let diag0 = zeta.dot(DIAG_AT_ZERO);
    let diag1 = 2 * zeta.total() as i64;
    let d = if diag1 >= 12 { Quantity::One } else { Quantity::Value(solve_unit_decreasing(ctx, |r| f_raw(ctx, Kind::Beta, zeta, r, r), diag0, diag1)?) };
    let origin_slope = if !c.is_zero() {
        None
    } else if edge0 == 12 {
        Some(Quantity::Zero)
    } else {
        let lo = ctx.float(0u32);
        let hi = ctx.float(1u32);
        let f_lo = minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Beta, zeta, &lo));
        let f_hi = minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Beta, zeta, &hi));
        let m = solve_with(ctx, |m| Ok(minus_two_pi(ctx, limit_angle_sum(ctx, Kind::Beta, zeta, m))), lo, f_lo, hi, f_hi)?;
        Some(Quantity::Value(m))
    };
    let value_at_one = if !d.is_one() {
        None
    } else if diag1 == 12 {
        Some(Quantity::One)
    } else {
        let one = ctx.float(1u32);
        let v = psi_raw(ctx, zeta, &one)?.ok_or_else(|| Error::Solver(format!("psi(1) bracket failed for {zeta}")))?;
        Some(Quantity::Value(v))
    };
    Ok(ContourProfile {
        kind: Kind::Beta,
        tuple: *zeta,
        vertical: false,
        r_vert: None,
        a_endpoint: None,
        c_endpoint: Some(c),
        d_endpoint: Some(d),
        origin_slope,
        value_at_one,
    })
}

pub(crate) fn profile_in(ctx: &Ctx, kind: Kind, xi: &AngleCount) -> Result<ContourProfile> {
    match kind {
        Kind::Alpha => {
            if !snec(xi) {
                return Err(Error::Precondition(format!("{xi} does not satisfy snec")));
            }
            alpha_profile(ctx, xi)
        }
        Kind::Beta => {
            if !rnec(xi) {
                return Err(Error::Precondition(format!("{xi} does not satisfy rnec")));
            }
            beta_profile(ctx, xi)
        }
        Kind::Gamma => Err(Error::Usage("contour profiles exist for alpha and beta only".into())),
    }
}

/// Boundary quantities of the contour of `xi . tau = 2pi`.
pub fn profile(kind: Kind, xi: &AngleCount, digits: u32) -> Result<ContourProfile> {
    profile_in(&Ctx::new(digits)?, kind, xi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Found,
    None,
    Ambiguous,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Found => "found",
            Status::None => "none",
            Status::Ambiguous => "ambiguous",
        }
    }
}

/// The boundary comparisons that decide whether a pair has an intercept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Vertical contour: `a < r_vert`.
    VerticalAbscissa,
    /// `a < d`.
    Diagonal,
    /// With `a = c = 0`: `lim psi/r < lim phi/r`.
    OriginSlope,
    /// With `d = 1`: `phi(1) < psi(1)`.
    AtOne,
}

impl Comparison {
    pub fn name(self) -> &'static str {
        match self {
            Comparison::VerticalAbscissa => "vertical-abscissa",
            Comparison::Diagonal => "diagonal",
            Comparison::OriginSlope => "origin-slope",
            Comparison::AtOne => "at-one",
        }
    }
}

/// One comparison `lower < upper` with its numeric gap `upper - lower`.
#[derive(Clone, Debug)]
pub struct Check {
    pub comparison: Comparison,
    pub lower: Quantity,
    pub upper: Quantity,
    pub gap: Float,
}

#[derive(Clone, Debug)]
pub struct InterceptResult {
    pub pair: CandidatePair,
    pub status: Status,
    pub point: Option<(Float, Float)>,
    /// Smallest absolute gap among the deciding comparisons.
    pub margin: Float,
    pub digits: u32,
    pub checks: Vec<Check>,
    /// Comparisons whose gap was at or below the threshold.
    pub ties: Vec<Comparison>,
    pub residuals: Option<(Float, Float)>,
    /// Exact decisions of the tied comparisons.
    pub resolutions: Vec<TieResolution>,
    /// Why a tie was left undecided.
    pub note: Option<String>,
}

fn push_check(ctx: &Ctx, checks: &mut Vec<Check>, comparison: Comparison, lower: Quantity, upper: Quantity) {
    let gap = upper.to_float(ctx.bits) - lower.to_float(ctx.bits);
    checks.push(Check { comparison, lower, upper, gap });
}

/// Outcome of the boundary comparisons before any root is solved for.
#[derive(Clone, Debug)]
pub struct Decision {
    pub status: Status,
    pub margin: Float,
    pub checks: Vec<Check>,
    pub ties: Vec<Comparison>,
}

pub(crate) fn decide(ctx: &Ctx, eta: &ContourProfile, zeta: &ContourProfile) -> Decision {
    let a = eta.a_endpoint.clone().expect("alpha profile has a");
    let mut checks = Vec::new();
    if zeta.vertical {
        let rv = zeta.r_vert.clone().expect("vertical profile has r_vert");
        push_check(ctx, &mut checks, Comparison::VerticalAbscissa, a, Quantity::Value(rv));
    } else {
        let c = zeta.c_endpoint.clone().expect("beta profile has c");
        let d = zeta.d_endpoint.clone().expect("beta profile has d");
        if a.is_zero() && c.is_zero() {
            let m_phi = eta.origin_slope.clone().expect("a = 0 gives an origin slope");
            let m_psi = zeta.origin_slope.clone().expect("c = 0 gives an origin slope");
            push_check(ctx, &mut checks, Comparison::OriginSlope, m_psi, m_phi);
        }
        if d.is_one() {
            let phi1 = eta.value_at_one.clone().expect("alpha profile has phi(1)");
            let psi1 = zeta.value_at_one.clone().expect("d = 1 gives psi(1)");
            push_check(ctx, &mut checks, Comparison::AtOne, phi1, psi1);
        }
        push_check(ctx, &mut checks, Comparison::Diagonal, a, d);
    }
    let thr = ctx.threshold();
    let mut margin: Option<Float> = None;
    let mut failed = false;
    let mut ties = Vec::new();
    for ch in &checks {
        let abs = Float::with_val(ctx.bits, ch.gap.abs_ref());
        if abs <= thr {
            ties.push(ch.comparison);
        } else if ch.gap.is_sign_negative() {
            failed = true;
        }
        margin = Some(match margin {
            Some(m) if m < abs => m,
            _ => abs,
        });
    }
    let status = if failed {
        Status::None
    } else if !ties.is_empty() {
        Status::Ambiguous
    } else {
        Status::Found
    };
    Decision { status, margin: margin.unwrap_or_else(|| ctx.float(0u32)), checks, ties }
}

/// Solve for the intercept once the comparisons say one exists.
pub(crate) fn solve_intercept(ctx: &Ctx, eta: &ContourProfile, zeta: &ContourProfile) -> Result<(Float, Float)> {
    let e = &eta.tuple;
    let z = &zeta.tuple;
    if zeta.vertical {
        let r = zeta.r_vert.clone().expect("vertical profile has r_vert");
        let s = phi_raw(ctx, e, &r)?.ok_or_else(|| Error::Solver(format!("phi undefined at r_vert for {e}")))?;
        return Ok((r, s));
    }
    let a = eta.a_endpoint.as_ref().expect("alpha profile has a").to_float(ctx.bits);
    let c = zeta.c_endpoint.as_ref().expect("beta profile has c").to_float(ctx.bits);
    let d = zeta.d_endpoint.as_ref().expect("beta profile has d").to_float(ctx.bits);
    let phi_or_diag = |r: &Float| -> Result<Float> { Ok(phi_raw(ctx, e, r)?.unwrap_or_else(|| r.clone())) };
    let big_f = |r: &Float| -> Result<Float> {
        let s = phi_or_diag(r)?;
        Ok(minus_two_pi(ctx, f_raw(ctx, Kind::Beta, z, r, &s)))
    };
    let hi = d.clone();
    let f_hi = big_f(&hi)?;
    let (lo, f_lo) = if a.is_zero() && c.is_zero() {
        let mut r = Float::with_val(ctx.bits, &hi / 2u32);
        let mut v = big_f(&r)?;
        let mut steps = 0;
        while !v.is_sign_positive() || v.is_zero() {
            steps += 1;
            if steps > ctx.bits {
                return Err(Error::Solver(format!("no positive lower bracket for {e} / {z}")));
            }
            r /= 2u32;
            v = big_f(&r)?;
        }
        (r, v)
    } else if a >= c {
        let v = minus_two_pi(ctx, f_raw(ctx, Kind::Beta, z, &a, &a));
        (a, v)
    } else {
        let v = big_f(&c)?;
        (c, v)
    };
    let r = solve_with(ctx, big_f, lo, f_lo, hi, f_hi)?;
    let s = phi_or_diag(&r)?;
    Ok((r, s))
}

fn residuals(ctx: &Ctx, pair: &CandidatePair, r: &Float, s: &Float) -> (Float, Float) {
    let ra = minus_two_pi(ctx, f_raw(ctx, Kind::Alpha, &pair.eta, r, s)).abs();
    let rb = minus_two_pi(ctx, f_raw(ctx, Kind::Beta, &pair.zeta, r, s)).abs();
    (ra, rb)
}

pub(crate) fn intercept_with(ctx: &Ctx, pair: &CandidatePair, eta: &ContourProfile, zeta: &ContourProfile) -> Result<InterceptResult> {
    let dec = decide(ctx, eta, zeta);
    let mut out = InterceptResult {
        pair: *pair,
        status: dec.status,
        point: None,
        margin: dec.margin,
        digits: ctx.digits,
        checks: dec.checks,
        ties: dec.ties,
        residuals: None,
        resolutions: Vec::new(),
        note: None,
    };
    if out.status == Status::Found {
        complete_found(ctx, &mut out, eta, zeta)?;
    }
    Ok(out)
}

/// Solve and check the point of an entry decided as found.
pub(crate) fn complete_found(ctx: &Ctx, out: &mut InterceptResult, eta: &ContourProfile, zeta: &ContourProfile) -> Result<()> {
    let pair = out.pair;
    let (r, s) = solve_intercept(ctx, eta, zeta)?;
    let res = residuals(ctx, &pair, &r, &s);
    let bound = ctx.residual_bound();
    if res.0 >= bound || res.1 >= bound {
        return Err(Error::Solver(format!("intercept of {} / {} has residuals {:e}, {:e}", pair.eta, pair.zeta, res.0.to_f64(), res.1.to_f64())));
    }
    if !(s > 0u32 && s < r && r < 1u32) {
        return Err(Error::Solver(format!("intercept of {} / {} left the triangle", pair.eta, pair.zeta)));
    }
    out.point = Some((r, s));
    out.residuals = Some(res);
    Ok(())
}

/// Decide and, when it exists, solve for the unique common point of both contours.
pub fn intercept(pair: &CandidatePair, digits: u32) -> Result<InterceptResult> {
    if !pair.in_k() {
        return Err(Error::Precondition(format!("({}, {}) is not in K", pair.eta, pair.zeta)));
    }
    let ctx = Ctx::new(digits)?;
    let eta = profile_in(&ctx, Kind::Alpha, &pair.eta)?;
    let zeta = profile_in(&ctx, Kind::Beta, &pair.zeta)?;
    intercept_with(&ctx, pair, &eta, &zeta)
}

/// Found points that agree to within the grouping tolerance.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub r: Float,
    pub s: Float,
    /// Indices into [`Catalog::entries`].
    pub members: Vec<usize>,
    /// Largest coordinate spread inside the group.
    pub spread: Float,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: usize,
    pub found_pairs: usize,
    pub none_pairs: usize,
    pub ambiguous_pairs: usize,
    pub distinct_points: usize,
    /// Groups whose spread or separation from a neighbor is close to the tolerance.
    pub borderline_groups: usize,
    pub digits: u32,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub entries: Vec<InterceptResult>,
    pub groups: Vec<PointGroup>,
    pub summary: Summary,
}

/// Profiles for every tuple appearing in `pairs`, keyed by tuple.
pub(crate) type ProfileMap = BTreeMap<AngleCount, ContourProfile>;

pub(crate) fn build_profiles(ctx: &Ctx, kind: Kind, tuples: Vec<AngleCount>) -> Result<ProfileMap> {
    let built: Vec<Result<(AngleCount, ContourProfile)>> = tuples.par_iter().map(|t| profile_in(ctx, kind, t).map(|p| (*t, p))).collect();
    built.into_iter().collect()
}

/// Map `intercept` over `pairs` and group the found points.
pub fn compute_l(pairs: &[CandidatePair], digits: u32) -> Result<Catalog> {
    compute_l_with(pairs, digits, None)
}

/// As [`compute_l`], deciding numerically tied pairs exactly when `tie_cap` is given.
pub fn compute_l_with(pairs: &[CandidatePair], digits: u32, tie_cap: Option<&Cap>) -> Result<Catalog> {
    let ctx = Ctx::new(digits)?;
    for p in pairs {
        if !p.in_k() {
            return Err(Error::Precondition(format!("({}, {}) is not in K", p.eta, p.zeta)));
        }
    }
    let mut sorted: Vec<CandidatePair> = pairs.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut etas: Vec<AngleCount> = sorted.iter().map(|p| p.eta).collect();
    etas.sort();
    etas.dedup();
    let mut zetas: Vec<AngleCount> = sorted.iter().map(|p| p.zeta).collect();
    zetas.sort();
    zetas.dedup();
    let eta_map = build_profiles(&ctx, Kind::Alpha, etas)?;
    let zeta_map = build_profiles(&ctx, Kind::Beta, zetas)?;
    let entries: Vec<Result<InterceptResult>> = sorted.par_iter().map(|p| intercept_with(&ctx, p, &eta_map[&p.eta], &zeta_map[&p.zeta])).collect();
    let mut entries: Vec<InterceptResult> = entries.into_iter().collect::<Result<_>>()?;
    if let Some(cap) = tie_cap {
        resolve_ties(&ctx, &mut entries, &eta_map, &zeta_map, cap)?;
    }
    Ok(assemble(&ctx, entries))
}

/// Group found points and count.
pub(crate) fn assemble(ctx: &Ctx, entries: Vec<InterceptResult>) -> Catalog {
    let thr = ctx.threshold();
    let near = Float::with_val(ctx.bits, &thr * 1_000_000u32);
    let far = Float::with_val(ctx.bits, &thr / 1_000_000u32);
    let mut found: Vec<usize> = entries.iter().enumerate().filter(|(_, e)| e.point.is_some()).map(|(i, _)| i).collect();
    found.sort_by(|&i, &j| {
        let (ri, si) = entries[i].point.as_ref().unwrap();
        let (rj, sj) = entries[j].point.as_ref().unwrap();
        ri.partial_cmp(rj).unwrap().then(si.partial_cmp(sj).unwrap()).then(i.cmp(&j))
    });
    // union-find over points closer than thr in both coordinates
    let n = found.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut borderline_pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let (ri, si) = entries[found[i]].point.as_ref().unwrap();
        for j in i + 1..n {
            let (rj, sj) = entries[found[j]].point.as_ref().unwrap();
            let dr = Float::with_val(ctx.bits, rj - ri);
            if dr > near {
                break;
            }
            let ds = Float::with_val(ctx.bits, sj - si).abs();
            let dist = if dr > ds { dr } else { ds };
            if dist <= thr {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
                if dist > far {
                    borderline_pairs.push((i, j));
                }
            } else if dist <= near {
                borderline_pairs.push((i, j));
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let mut borderline_roots = std::collections::BTreeSet::new();
    for (i, j) in borderline_pairs {
        borderline_roots.insert(root(&mut parent, i));
        borderline_roots.insert(root(&mut parent, j));
    }
    let mut groups = Vec::with_capacity(by_root.len());
    for members in by_root.values() {
        let idx: Vec<usize> = members.iter().map(|&k| found[k]).collect();
        let (r0, s0) = entries[idx[0]].point.clone().unwrap();
        let mut spread = ctx.float(0u32);
        for &k in &idx[1..] {
            let (r, s) = entries[k].point.as_ref().unwrap();
            let d = Float::with_val(ctx.bits, r - &r0).abs().max(&Float::with_val(ctx.bits, s - &s0).abs());
            if d > spread {
                spread = d;
            }
        }
        let mut idx = idx;
        idx.sort();
        groups.push(PointGroup { r: r0, s: s0, members: idx, spread });
    }
    let count = |st: Status| entries.iter().filter(|e| e.status == st).count();
    let summary = Summary {
        pairs: entries.len(),
        found_pairs: count(Status::Found),
        none_pairs: count(Status::None),
        ambiguous_pairs: count(Status::Ambiguous),
        distinct_points: groups.len(),
        borderline_groups: borderline_roots.len(),
        digits: ctx.digits,
    };
    Catalog { entries, groups, summary }
}

/// One catalog line as persisted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub eta: AngleCount,
    pub zeta: AngleCount,
    pub status: Status,
    pub r: Option<String>,
    pub s: Option<String>,
    pub digits: u32,
    pub margin: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ties: Vec<Comparison>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolutions: Vec<TieResolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InterceptResult {
    pub fn record(&self) -> CatalogRecord {
        let (r, s) = match &self.point {
            Some((r, s)) => (Some(to_decimal(r, self.digits)), Some(to_decimal(s, self.digits))),
            None => (None, None),
        };
        CatalogRecord {
            eta: self.pair.eta,
            zeta: self.pair.zeta,
            status: self.status,
            r,
            s,
            digits: self.digits,
            margin: to_decimal(&self.margin, 6),
            ties: self.ties.clone(),
            resolutions: self.resolutions.clone(),
            note: self.note.clone(),
        }
    }
}

pub fn write_catalog_jsonl<W: Write>(mut w: W, catalog: &Catalog) -> Result<()> {
    for e in &catalog.entries {
        serde_json::to_writer(&mut w, &e.record())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_catalog_csv<W: Write>(w: W, catalog: &Catalog) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["eta", "zeta", "status", "r", "s", "digits", "margin", "ties"])?;
    for e in &catalog.entries {
        let rec = e.record();
        let ties: Vec<&str> = rec.ties.iter().map(|t| t.name()).collect();
        csv.write_record([
            rec.eta.to_string(),
            rec.zeta.to_string(),
            rec.status.name().to_string(),
            rec.r.unwrap_or_default(),
            rec.s.unwrap_or_default(),
            rec.digits.to_string(),
            rec.margin,
            ties.join(";"),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_catalog_jsonl(text: &str) -> Result<Vec<CatalogRecord>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(Error::from)).collect()
}

/// Grouped points as `{"r":..,"s":..,"pairs":[[eta,zeta],..]}` lines.
pub fn write_points_jsonl<W: Write>(mut w: W, catalog: &Catalog) -> Result<()> {
    #[derive(Serialize)]
    struct Point<'a> {
        r: String,
        s: String,
        pairs: Vec<&'a CandidatePair>,
    }
    for g in &catalog.groups {
        let p = Point {
            r: to_decimal(&g.r, catalog.summary.digits),
            s: to_decimal(&g.s, catalog.summary.digits),
            pairs: g.members.iter().map(|&i| &catalog.entries[i].pair).collect(),
        };
        serde_json::to_writer(&mut w, &p)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: [u32; 6]) -> AngleCount {
        AngleCount(x)
    }

    fn close(x: &Float, v: f64, tol: f64) -> bool {
        (x.to_f64() - v).abs() < tol
    }

    #[test]
    fn hexagon_of_small_circles() {
        let ctx = Ctx::new(40).unwrap();
        let v = f_raw(&ctx, Kind::Alpha, &t([0, 0, 6, 0, 0, 0]), &ctx.float(0.5), &ctx.float(0.2));
        assert!(Float::with_val(ctx.bits, v - ctx.two_pi()).abs() < 1e-45);
    }

    #[test]
    fn example_91_intercept() {
        let pair = CandidatePair::new(t([0, 0, 0, 1, 1, 3]), t([1, 0, 3, 0, 2, 0]));
        let res = intercept(&pair, 50).unwrap();
        assert_eq!(res.status, Status::Found);
        let (r, s) = res.point.unwrap();
        assert!(close(&r, 0.438405, 5e-7) && close(&s, 0.299248, 5e-7));
    }

    #[test]
    fn phi_example() {
        let p = Precision::new(40).unwrap();
        let s = phi_eval(&t([0, 0, 0, 1, 1, 3]), &p.float(0.438405), 40).unwrap().unwrap();
        assert!(close(&s, 0.299248, 1e-5));
    }

    #[test]
    fn psi_vertical_rejected() {
        let p = Precision::new(30).unwrap();
        assert!(matches!(psi_eval(&t([1, 2, 0, 2, 0, 0]), &p.float(0.5), 30), Err(Error::Precondition(_))));
        let rv = vertical_abscissa(&t([1, 2, 0, 2, 0, 0]), 30).unwrap();
        assert!(rv > 0u32 && rv < 1u32);
    }
}
