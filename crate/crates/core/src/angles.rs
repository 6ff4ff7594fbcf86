//! Petal angles of three mutually tangent circles and the six-component
//! angle vectors around circles of radius `s`, `r` and `1`.
//!
//! Component order is fixed throughout the crate: neighbor pairs
//! `{1,1}, {r,r}, {s,s}, {1,r}, {1,s}, {r,s}`.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::tuples::AngleCount;

/// The three circle sizes of a 3-packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Size {
    Small,
    Mid,
    Large,
}

impl Size {
    pub const ALL: [Size; 3] = [Size::Large, Size::Mid, Size::Small];

    pub fn name(self) -> &'static str {
        match self {
            Size::Small => "small",
            Size::Mid => "mid",
            Size::Large => "large",
        }
    }

    pub fn parse(text: &str) -> Result<Size> {
        match text {
            "small" | "s" => Ok(Size::Small),
            "mid" | "r" => Ok(Size::Mid),
            "large" | "1" => Ok(Size::Large),
            other => Err(Error::Parse(format!("unknown circle label {other:?}"))),
        }
    }

    /// The radius this label stands for at radii `(r, s)`.
    pub fn radius<'a>(self, r: &'a Float, s: &'a Float, one: &'a Float) -> &'a Float {
        match self {
            Size::Small => s,
            Size::Mid => r,
            Size::Large => one,
        }
    }
}

/// Neighbor-pair type of each angle-count coordinate.
pub const COMPONENT_PAIRS: [(Size, Size); 6] = [
    (Size::Large, Size::Large),
    (Size::Mid, Size::Mid),
    (Size::Small, Size::Small),
    (Size::Large, Size::Mid),
    (Size::Large, Size::Small),
    (Size::Mid, Size::Small),
];

/// Coordinate index (0-based) of the transition between neighbor sizes `a` and `b`.
pub fn component_index(a: Size, b: Size) -> usize {
    use Size::*;
    match (a, b) {
        (Large, Large) => 0,
        (Mid, Mid) => 1,
        (Small, Small) => 2,
        (Large, Mid) | (Mid, Large) => 3,
        (Large, Small) | (Small, Large) => 4,
        (Mid, Small) | (Small, Mid) => 5,
    }
}

/// Which circle sits at the center: alpha for `s`, beta for `r`, gamma for `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Alpha,
    Beta,
    Gamma,
}

impl Kind {
    pub fn center(self) -> Size {
        match self {
            Kind::Alpha => Size::Small,
            Kind::Beta => Size::Mid,
            Kind::Gamma => Size::Large,
        }
    }

    pub fn for_center(size: Size) -> Kind {
        match size {
            Size::Small => Kind::Alpha,
            Size::Mid => Kind::Beta,
            Size::Large => Kind::Gamma,
        }
    }

    pub fn parse(text: &str) -> Result<Kind> {
        match text {
            "alpha" => Ok(Kind::Alpha),
            "beta" => Ok(Kind::Beta),
            "gamma" => Ok(Kind::Gamma),
            other => Err(Error::Parse(format!("unknown angle kind {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Alpha => "alpha",
            Kind::Beta => "beta",
            Kind::Gamma => "gamma",
        }
    }
}

/// A point `0 < s < r < 1` of the parameter triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiiPair {
    r: Float,
    s: Float,
}

impl RadiiPair {
    pub fn new(r: Float, s: Float) -> Result<Self> {
        if !(s.is_sign_positive() && !s.is_zero() && s < r && r < 1u32) {
            return Err(Error::Domain(format!("radii pair (r={}, s={}) is not in 0 < s < r < 1", r.to_f64(), s.to_f64())));
        }
        Ok(Self { r, s })
    }

    pub fn from_f64(r: f64, s: f64, prec: &Precision) -> Result<Self> {
        Self::new(prec.float(r), prec.float(s))
    }

    pub fn r(&self) -> &Float {
        &self.r
    }

    pub fn s(&self) -> &Float {
        &self.s
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.r, self.s)
    }
}

/// Six angles in component order.
pub type AngleVector = [Float; 6];

/// The cosine-rule fraction `((a+b)^2 + (a+c)^2 - (b+c)^2) / (2(a+c)(a+b))`.
pub fn petal_cosine(a: &Float, b: &Float, c: &Float) -> Result<Float> {
    check_positive(a, b, c)?;
    let ab = Float::with_val(a.prec(), a + b);
    let ac = Float::with_val(a.prec(), a + c);
    let bc = Float::with_val(a.prec(), b + c);
    let num = Float::with_val(a.prec(), ab.square_ref()) + Float::with_val(a.prec(), ac.square_ref()) - Float::with_val(a.prec(), bc.square_ref());
    let den = ab * ac * 2u32;
    Ok(num / den)
}

/// Angle at the center of the radius-`a` circle between the centers of the
/// tangent radius-`b` and radius-`c` circles.
pub fn petal_angle(a: &Float, b: &Float, c: &Float) -> Result<Float> {
    check_positive(a, b, c)?;
    Ok(petal_angle_unchecked(a, b, c))
}

fn check_positive(a: &Float, b: &Float, c: &Float) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v.is_finite() && v.is_sign_positive() && !v.is_zero()) {
            return Err(Error::Domain(format!("radius {name} = {} is not positive", v.to_f64())));
        }
    }
    Ok(())
}

/// Evaluated as `atan2(2*sqrt(abc(a+b+c)), (a+b)(a+c) - 2bc)`, which equals the
/// cosine-rule arccos but stays well conditioned when the angle is near 0 or pi.
/// Zero `b` or `c` is accepted when `a > 0` (the angle tends to 0 there).
pub(crate) fn petal_angle_unchecked(a: &Float, b: &Float, c: &Float) -> Float {
    let prec = a.prec().max(b.prec()).max(c.prec());
    if a == b && b == c {
        return Float::with_val(prec, rug::float::Constant::Pi) / 3u32;
    }
    let ab = Float::with_val(prec, a + b);
    let ac = Float::with_val(prec, a + c);
    let bc2 = Float::with_val(prec, b * c) * 2u32;
    let x = Float::with_val(prec, &ab * &ac) - bc2;
    let sum = Float::with_val(prec, &ab + c);
    let heron = Float::with_val(prec, a * b) * c * sum;
    let y = heron.sqrt() * 2u32;
    y.atan2(&x)
}

/// Angle vector of the given kind at `(r, s)`, allowing the closed boundary
/// `s = r` or `r = 1`.
pub(crate) fn angle_vector_unchecked(kind: Kind, r: &Float, s: &Float) -> AngleVector {
    let one = Float::with_val(r.prec(), 1u32);
    let center = kind.center().radius(r, s, &one);
    COMPONENT_PAIRS.map(|(b, c)| petal_angle_unchecked(center, b.radius(r, s, &one), c.radius(r, s, &one)))
}

pub fn angle_vector(kind: Kind, p: &RadiiPair) -> AngleVector {
    angle_vector_unchecked(kind, &p.r, &p.s)
}

/// `xi . tau(r, s)` without domain checks.
pub(crate) fn dot_angles(xi: &AngleCount, angles: &AngleVector) -> Float {
    let prec = angles[0].prec();
    let mut acc = Float::new(prec);
    for (n, a) in xi.0.iter().zip(angles.iter()) {
        if *n != 0 {
            acc += Float::with_val(prec, a * *n);
        }
    }
    acc
}

/// Closed-form derivative of `g(r) = xi . tau(r, m r)` for `tau` alpha or beta.
pub fn ray_derivative(kind: Kind, xi: &AngleCount, m: &Float, r: &Float) -> Result<Float> {
    if !(*m > 0u32 && *m < 1u32 && *r > 0u32 && *r < 1u32) {
        return Err(Error::Domain(format!("ray derivative needs m, r in (0,1), got m={}, r={}", m.to_f64(), r.to_f64())));
    }
    let prec = m.prec().max(r.prec());
    let f = |v: f64| Float::with_val(prec, v);
    let mr = Float::with_val(prec, m * r);
    let (u, v, w) = match kind {
        Kind::Alpha => {
            // 2m / ((mr+1) sqrt(mr(mr+2)))
            let mr1 = Float::with_val(prec, &mr + 1u32);
            let mr2 = Float::with_val(prec, &mr + 2u32);
            let u = Float::with_val(prec, m * 2u32) / (Float::with_val(prec, &mr1 * (Float::with_val(prec, &mr * &mr2).sqrt())));
            // m / ((mr+1) sqrt(m(mr+r+1)))
            let inner = Float::with_val(prec, &mr + r) + 1u32;
            let v = Float::with_val(prec, m) / (Float::with_val(prec, &mr1 * Float::with_val(prec, m * inner).sqrt()));
            // m / ((mr+1) sqrt(2mr+1))
            let two_mr1 = Float::with_val(prec, &mr * 2u32) + 1u32;
            let w = Float::with_val(prec, m) / (mr1 * two_mr1.sqrt());
            (u, v, w)
        }
        Kind::Beta => {
            let r1 = Float::with_val(prec, r + 1u32);
            // 2 / ((r+1) sqrt(r(r+2)))
            let r2 = Float::with_val(prec, r + 2u32);
            let u = f(2.0) / (Float::with_val(prec, &r1 * Float::with_val(prec, r * r2).sqrt()));
            // 1 / ((r+1) sqrt(2r+1))
            let two_r1 = Float::with_val(prec, r * 2u32) + 1u32;
            let v = f(1.0) / (Float::with_val(prec, &r1 * two_r1.sqrt()));
            // m / ((r+1) sqrt(m(mr+r+1)))
            let inner = Float::with_val(prec, &mr + r) + 1u32;
            let w = Float::with_val(prec, m) / (r1 * Float::with_val(prec, m * inner).sqrt());
            (u, v, w)
        }
        Kind::Gamma => return Err(Error::Usage("ray derivative is defined for alpha and beta only".into())),
    };
    let x = &xi.0;
    let mut total = Float::new(prec);
    if x[0] != 0 {
        total += u * x[0];
    }
    if x[3] != 0 {
        total += v * x[3];
    }
    if x[4] != 0 {
        total += w * x[4];
    }
    Ok(-total)
}

/// Limits of the six cosine-rule arguments along `s = m r` as `r -> 0`.
pub fn origin_limit_cosines(kind: Kind, m: &Float) -> Result<[Float; 6]> {
    if !(*m > 0u32 && *m < 1u32) {
        return Err(Error::Domain(format!("origin limit needs m in (0,1), got {}", m.to_f64())));
    }
    Ok(origin_limit_cosines_closed(kind, m))
}

/// Same as [`origin_limit_cosines`] but valid on the closed interval `[0, 1]`.
pub(crate) fn origin_limit_cosines_closed(kind: Kind, m: &Float) -> [Float; 6] {
    let prec = m.prec();
    let one = Float::with_val(prec, 1u32);
    let m1 = Float::with_val(prec, m + 1u32);
    let half = Float::with_val(prec, 0.5);
    match kind {
        Kind::Alpha => [
            -one.clone(),
            // 1 - 2/(m+1)^2
            Float::with_val(prec, 1u32) - Float::with_val(prec, 2u32) / Float::with_val(prec, m1.square_ref()),
            half,
            // (m-1)/(m+1)
            Float::with_val(prec, m - 1u32) / &m1,
            Float::new(prec),
            // m/(m+1)
            Float::with_val(prec, m / &m1),
        ],
        Kind::Beta => [
            -one.clone(),
            half,
            // 1 - 2m^2/(1+m)^2
            one.clone() - Float::with_val(prec, m.square_ref()) * 2u32 / Float::with_val(prec, m1.square_ref()),
            Float::new(prec),
            // (1-m)/(1+m)
            Float::with_val(prec, 1u32 - m) / &m1,
            // 1/(1+m)
            one / m1,
        ],
        Kind::Gamma => [half, one.clone(), one.clone(), one.clone(), one.clone(), one],
    }
}

/// Arccos of a cosine that should lie in `[-1, 1]`. Values outside by less
/// than `10^-(digits-5)` are clamped, anything further is a domain error.
pub fn acos_clamped(x: &Float, digits: u32) -> Result<Float> {
    let prec = x.prec();
    let slack = Float::with_val(prec, 10u32).pow(-(digits as i32 - 5));
    let one = Float::with_val(prec, 1u32);
    let outside = Float::with_val(prec, x.abs_ref()) - &one;
    if outside > 0u32 {
        if outside > slack {
            return Err(Error::Domain(format!("cosine {} outside [-1, 1]", x.to_f64())));
        }
        return Ok(if x.is_sign_positive() { Float::new(prec) } else { Float::with_val(prec, rug::float::Constant::Pi) });
    }
    Ok(Float::with_val(prec, x.acos_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(60).unwrap()
    }

    #[test]
    fn equilateral_is_third_pi() {
        let p = prec();
        let third = p.pi() / 3u32;
        for t in [1.0, 0.25, 1e-7] {
            let x = p.float(t);
            let a = petal_angle(&x, &x, &x).unwrap();
            assert!(Float::with_val(p.bits(), &a - &third).abs() < 1e-55);
        }
    }

    #[test]
    fn unit_half_half() {
        let p = prec();
        let a = petal_angle(&p.float(1.0), &p.float(0.5), &p.float(0.5)).unwrap();
        let expected = p.float(7u32) / 9u32;
        let expected = expected.acos();
        assert!(Float::with_val(p.bits(), &a - &expected).abs() < 1e-55);
        assert!((a.to_f64() - 0.679674).abs() < 1e-6);
    }

    #[test]
    fn cosine_matches_angle() {
        let p = prec();
        let (a, b, c) = (p.float(0.3), p.float(0.7), p.float(1.0));
        let cos = petal_cosine(&a, &b, &c).unwrap();
        let ang = petal_angle(&a, &b, &c).unwrap();
        assert!(Float::with_val(p.bits(), ang.cos() - cos).abs() < 1e-55);
    }

    #[test]
    fn non_positive_radius_rejected() {
        let p = prec();
        assert!(petal_angle(&p.float(0.0), &p.float(1.0), &p.float(1.0)).is_err());
        assert!(petal_angle(&p.float(1.0), &p.float(-1.0), &p.float(1.0)).is_err());
    }

    #[test]
    fn fixed_components_are_third_pi() {
        let p = prec();
        let pt = RadiiPair::from_f64(0.6, 0.2, &p).unwrap();
        let third = p.pi() / 3u32;
        let al = angle_vector(Kind::Alpha, &pt);
        let be = angle_vector(Kind::Beta, &pt);
        let ga = angle_vector(Kind::Gamma, &pt);
        for v in [&al[2], &be[1], &ga[0]] {
            assert!(Float::with_val(p.bits(), v - &third).abs() < 1e-55);
        }
    }

    #[test]
    fn radii_pair_domain() {
        let p = prec();
        assert!(RadiiPair::from_f64(0.5, 0.6, &p).is_err());
        assert!(RadiiPair::from_f64(1.0, 0.6, &p).is_err());
        assert!(RadiiPair::from_f64(0.5, 0.0, &p).is_err());
        assert!(RadiiPair::from_f64(0.5, 0.25, &p).is_ok());
    }

    #[test]
    fn ray_derivative_zero_for_unit_free_tuple() {
        let p = prec();
        let xi = AngleCount([0, 3, 0, 0, 0, 0]);
        let d = ray_derivative(Kind::Alpha, &xi, &p.float(0.4), &p.float(0.3)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn origin_limit_examples() {
        let p = prec();
        let m = p.float(0.3);
        let a = origin_limit_cosines(Kind::Alpha, &m).unwrap();
        assert_eq!(a[2], 0.5);
        let expected = (0.3 - 1.0) / (0.3 + 1.0);
        assert!((a[3].to_f64() - expected).abs() < 1e-15);
        let b = origin_limit_cosines(Kind::Beta, &m).unwrap();
        assert!((b[5].to_f64() - 1.0 / 1.3).abs() < 1e-15);
        assert!(origin_limit_cosines(Kind::Alpha, &p.float(1.5)).is_err());
    }

    #[test]
    fn acos_clamp_window() {
        let p = Precision::new(30).unwrap();
        let just_over = p.float(1u32) + p.ten_pow_neg(28);
        assert!(acos_clamped(&just_over, 30).unwrap().is_zero());
        let far_over = p.float(1.001);
        assert!(acos_clamped(&far_over, 30).is_err());
    }
}
