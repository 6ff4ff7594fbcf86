//! Univariate polynomials for the boundary quantities of a contour.

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::poly::{Poly1, Poly2, Ring};
use super::radical::{contour_poly, Cap, Specialization};
use crate::angles::Kind;
use crate::error::{Error, Result};
use crate::tuples::AngleCount;

/// Specializations of the general contour polynomial `p(r, s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolys {
    /// `p(r, r)`.
    pub diagonal: Poly1,
    /// `p(1, s)`.
    pub at_one: Poly1,
    /// Lowest-order coefficient of `p(r, m r)` in `r`, as a polynomial in `m`.
    pub origin: Poly1,
}

/// `p(r, r)`, `p(1, s)` and the ray-leading form of the general contour polynomial.
pub fn boundary_polys(kind: Kind, xi: &AngleCount, cap: &Cap) -> Result<BoundaryPolys> {
    let p: Poly2 = contour_poly(kind, xi, Specialization::General, cap)?;
    let out = BoundaryPolys { diagonal: p.diagonal(), at_one: p.at_x(&Integer::from(1)), origin: p.ray_leading() };
    for (name, q) in [("p(r, r)", &out.diagonal), ("p(1, s)", &out.at_one), ("lim p(r, m r)", &out.origin)] {
        if q.is_zero() {
            return Err(Error::Domain(format!("{name} vanishes identically for {} {xi}", kind.name())));
        }
    }
    Ok(out)
}

/// A boundary quantity of one contour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    /// Crossing of the diagonal `s = r` (`a` or `d`).
    Diagonal,
    /// Crossing of the edge `s = 0` (`c`), also the abscissa of a vertical contour.
    Edge,
    /// Slope at the origin.
    OriginSlope,
    /// Value at `r = 1`.
    AtOne,
}

impl Endpoint {
    pub fn specialization(self) -> Specialization {
        match self {
            Endpoint::Diagonal => Specialization::Diagonal,
            Endpoint::Edge => Specialization::ZeroS,
            Endpoint::OriginSlope => Specialization::Origin,
            Endpoint::AtOne => Specialization::AtOne,
        }
    }
}

/// A polynomial with the quantity among its roots, computed directly on the
/// specialized angles rather than by specializing the general polynomial.
pub fn endpoint_poly(kind: Kind, xi: &AngleCount, endpoint: Endpoint, cap: &Cap) -> Result<Poly1> {
    let p: Poly1 = contour_poly(kind, xi, endpoint.specialization(), cap)?;
    if p.deg() == 0 {
        return Err(Error::Domain(format!("{} {xi} has no {endpoint:?} crossing", kind.name())));
    }
    Ok(p)
}
