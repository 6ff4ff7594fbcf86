//! Five known compact 3-packings with their radii, angle-counts and
//! defining polynomials.

use rug::Float;

use crate::symbolic::Poly1;
use crate::tuples::{AngleCount, CandidatePair};

#[derive(Clone, Debug)]
pub struct KnownPacking {
    pub name: &'static str,
    pub eta: AngleCount,
    pub zeta: AngleCount,
    /// Angle-count around a large circle.
    pub xi: AngleCount,
    /// Six-decimal approximations.
    pub r: f64,
    pub s: f64,
    /// Ascending coefficients.
    r_poly: &'static [i64],
    s_poly: &'static [i64],
}

impl KnownPacking {
    pub fn pair(&self) -> CandidatePair {
        CandidatePair::new(self.eta, self.zeta)
    }

    pub fn r_poly(&self) -> Poly1 {
        Poly1::from_i64(self.r_poly)
    }

    pub fn s_poly(&self) -> Poly1 {
        Poly1::from_i64(self.s_poly)
    }
}

const fn t(x: [u32; 6]) -> AngleCount {
    AngleCount(x)
}

pub const KNOWN: [KnownPacking; 5] = [
    KnownPacking {
        name: "example-1",
        eta: t([0, 0, 0, 1, 1, 3]),
        zeta: t([1, 0, 3, 0, 2, 0]),
        xi: t([0, 0, 2, 4, 0, 4]),
        r: 0.438405,
        s: 0.299248,
        r_poly: &[1, -10, 19, -28, 39, 38, 5],
        s_poly: &[1, -6, 15, -68, 175, -54, 1],
    },
    KnownPacking {
        name: "example-2",
        eta: t([0, 0, 0, 1, 1, 3]),
        zeta: t([0, 0, 3, 2, 2, 0]),
        xi: t([0, 2, 2, 0, 0, 4]),
        r: 0.822210,
        s: 0.468169,
        r_poly: &[1, 2, -40, -88, -2, 60, 56, 120, 17, 2],
        s_poly: &[4, -7, -64, 64, 560, -378, -1600, 1200, -340, 49],
    },
    KnownPacking {
        name: "example-3",
        eta: t([0, 0, 0, 1, 1, 3]),
        zeta: t([2, 0, 3, 0, 2, 0]),
        xi: t([0, 0, 1, 4, 0, 2]),
        r: 0.865150,
        s: 0.484497,
        r_poly: &[128, -1120, -670, 121, -680, 308, 1788, 1454, 568, 132, 18, 1],
        s_poly: &[-512, 192, 5480, -3375, -13520, 15404, -20688, 24438, -14096, 5452, -824, 1],
    },
    KnownPacking {
        name: "example-4",
        eta: t([0, 0, 0, 2, 2, 0]),
        zeta: t([0, 0, 0, 2, 6, 0]),
        xi: t([0, 1, 3, 0, 0, 6]),
        r: 0.948799,
        s: 0.275178,
        r_poly: &[-2, -38, 15, 24, 5],
        s_poly: &[-2, 6, 13, -36, 20],
    },
    KnownPacking {
        name: "example-5",
        eta: t([0, 0, 0, 2, 2, 0]),
        zeta: t([1, 1, 0, 2, 2, 0]),
        xi: t([2, 1, 1, 2, 0, 2]),
        r: 0.667499,
        s: 0.237538,
        r_poly: &[9, 276, 5314, 332, -46657, -29400, 81500, 56696, 727, -3324, 66, -4, 1],
        s_poly: &[9, -102, 307, 136, -1757, 3322, -4859, -4540, 29964, -33536, 15792, -704, 64],
    },
];

/// The pair whose intercept lies closest to the origin among those discussed
/// for the gamma search, with the degree-16 factors of its resultants.
pub struct NearOrigin {
    pub eta: AngleCount,
    pub zeta: AngleCount,
    pub r: &'static str,
    pub s: &'static str,
    r_poly: &'static [i64],
    s_poly: &'static [i64],
}

impl NearOrigin {
    pub fn pair(&self) -> CandidatePair {
        CandidatePair::new(self.eta, self.zeta)
    }

    pub fn r_poly(&self) -> Poly1 {
        Poly1::from_i64(self.r_poly)
    }

    pub fn s_poly(&self) -> Poly1 {
        Poly1::from_i64(self.s_poly)
    }
}

pub const NEAR_ORIGIN: NearOrigin = NearOrigin {
    eta: t([0, 0, 1, 1, 1, 1]),
    zeta: t([1, 0, 4, 0, 2, 0]),
    r: "0.0000581261602",
    s: "0.0000125188787",
    r_poly: &[
        1369,
        -23293776,
        -4432749936,
        -232167452096,
        5684720044996,
        18998456541200,
        -79130757636960,
        -312172905934624,
        -55749863701666,
        135832773328592,
        80565633090512,
        17900565761408,
        1743725080084,
        58464363120,
        -659124096,
        -41484960,
        471537,
    ],
    s_poly: &[
        1369,
        -109340424,
        -1151616584,
        -2996664152,
        4034895724,
        14055271864,
        -13037319960,
        -17475748952,
        30925167782,
        -19303597784,
        6454982728,
        -1264707784,
        146307340,
        -9490392,
        297624,
        -2952,
        9,
    ],
};

/// Polynomials from the first nontrivial example figure with their roots in (0, 1).
pub const FIGURE_ROOTS: [(&[i64], f64); 2] = [(&[1, 2, -27, -28, 4], 0.208266), (&[-1, -12, -18, 60, 3], 0.635671)];

/// Whether `x` is within one unit in the last place of the decimal `shown`.
pub fn agrees_with_shown(shown: &str, x: &Float) -> bool {
    let places = shown.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
    let Ok(v) = Float::parse(shown) else { return false };
    let v = Float::with_val(x.prec(), v);
    let unit = Float::with_val(x.prec(), Float::i_exp(1, 0)) / Float::with_val(x.prec(), Float::u_pow_u(10, places as u32));
    Float::with_val(x.prec(), x - &v).abs() < unit
}
