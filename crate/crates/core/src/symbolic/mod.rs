//! Exact certification: radical elimination, resultants and real roots.

pub mod boundary;
pub mod poly;
pub mod radical;
pub mod resultant;
pub mod roots;

pub use poly::{Poly1, Poly2, Ring};
pub use radical::{contour_poly, cos_sum_expr, detrig, Cap, Specialization};
pub use resultant::{eliminate, Var};
pub use roots::{algebraic_cmp, algebraic_equal, isolate_roots, AlgebraicNumber, AlgebraicRecord};
