//! Bracketing root finders on big floats.

use rug::Float;

use crate::error::{Error, Result};

/// Stopping rule shared by the bracketing solvers.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    /// Stop once the bracket is narrower than `2^-rel_bits` relative to the root.
    pub rel_bits: u32,
    /// Stop once `|f| <= 2^-abs_bits`.
    pub abs_bits: u32,
    pub max_iter: u32,
}

impl Tolerance {
    pub fn for_bits(bits: u32, digits: u32) -> Self {
        Tolerance { rel_bits: bits.saturating_sub(6), abs_bits: bits.saturating_sub(8), max_iter: digits * 4 }
    }
}

fn sign(x: &Float) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_sign_negative() {
        -1
    } else {
        1
    }
}

fn small(x: &Float, bits: u32) -> bool {
    x.is_zero() || x.get_exp().is_none_or(|e| e < -(bits as i32))
}

/// Root of `f` inside `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
///
/// Illinois-modified regula falsi with a bisection step whenever the
/// bracket fails to halve twice in a row.
pub fn illinois<F>(mut f: F, lo: Float, f_lo: Float, hi: Float, f_hi: Float, tol: Tolerance) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let (sl, sh) = (sign(&f_lo), sign(&f_hi));
    if sl == 0 {
        return Ok(lo);
    }
    if sh == 0 {
        return Ok(hi);
    }
    if sl == sh {
        return Err(Error::Solver(format!("no sign change on [{}, {}] (f = {}, {})", lo.to_f64(), hi.to_f64(), f_lo.to_f64(), f_hi.to_f64())));
    }
    let prec = lo.prec().max(hi.prec());
    let (mut a, mut fa, mut b, mut fb) = (lo, f_lo, hi, f_hi);
    let mut slow = 0u32;
    let mut last_width = Float::with_val(prec, &b - &a).abs();
    for _ in 0..tol.max_iter.max(8) {
        let width = Float::with_val(prec, &b - &a).abs();
        let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
        if scale.is_zero() || small(&Float::with_val(prec, &width / &scale), tol.rel_bits) {
            break;
        }
        let c = if slow >= 2 {
            slow = 0;
            Float::with_val(prec, &a + &b) / 2u32
        } else {
            let denom = Float::with_val(prec, &fb - &fa);
            let step = Float::with_val(prec, &fb * Float::with_val(prec, &b - &a)) / denom;
            let c = Float::with_val(prec, &b - step);
            let inside = if a < b { c > a && c < b } else { c > b && c < a };
            if inside && c.is_finite() {
                c
            } else {
                Float::with_val(prec, &a + &b) / 2u32
            }
        };
        let fc = f(&c)?;
        if small(&fc, tol.abs_bits) {
            return Ok(c);
        }
        if sign(&fc) != sign(&fb) {
            a = std::mem::replace(&mut b, c);
            fa = std::mem::replace(&mut fb, fc);
        } else {
            fa /= 2u32;
            b = c;
            fb = fc;
        }
        let w = Float::with_val(prec, &b - &a).abs();
        if Float::with_val(prec, &w * 2u32) > last_width {
            slow += 1;
        } else {
            slow = 0;
        }
        last_width = w;
    }
    let width = Float::with_val(prec, &b - &a).abs();
    let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if !scale.is_zero() && !small(&Float::with_val(prec, &width / &scale), tol.rel_bits.saturating_sub(16)) {
        return Err(Error::Solver(format!("bracket did not converge near {}", b.to_f64())));
    }
    Ok(if fa.clone().abs() < fb.clone().abs() { a } else { b })
}

/// Plain bisection, used where only the sign of `f` is trustworthy.
pub fn bisect<F>(mut f: F, lo: Float, hi: Float, increasing: bool, iterations: u32) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let prec = lo.prec().max(hi.prec());
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iterations {
        let c = Float::with_val(prec, &a + &b) / 2u32;
        let v = f(&c)?;
        if v.is_zero() {
            return Ok(c);
        }
        if v.is_sign_positive() == increasing {
            b = c;
        } else {
            a = c;
        }
    }
    Ok(Float::with_val(prec, &a + &b) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let prec = 200;
        let f = |x: &Float| Ok(Float::with_val(prec, x.square_ref()) - 2u32);
        let lo = Float::with_val(prec, 1u32);
        let hi = Float::with_val(prec, 2u32);
        let tol = Tolerance::for_bits(prec, 60);
        let r = illinois(f, lo, Float::with_val(prec, -1), hi, Float::with_val(prec, 2), tol).unwrap();
        let exact = Float::with_val(prec, 2u32).sqrt();
        assert!(Float::with_val(prec, r - exact).abs() < 1e-55);
    }

    #[test]
    fn tiny_root_relative() {
        let prec = 200;
        let target = Float::with_val(prec, 1e-30);
        let t2 = target.clone();
        let f = move |x: &Float| Ok(Float::with_val(prec, x - &t2) * -1i32);
        let lo = Float::with_val(prec, 1e-40);
        let hi = Float::with_val(prec, 1u32);
        let flo = f(&lo).unwrap();
        let fhi = f(&hi).unwrap();
        let r = illinois(f, lo, flo, hi, fhi, Tolerance::for_bits(prec, 60)).unwrap();
        let rel = Float::with_val(prec, Float::with_val(prec, &r - &target) / &target).abs();
        assert!(rel < 1e-50, "{}", r.to_f64());
    }

    #[test]
    fn same_sign_is_error() {
        let prec = 64;
        let f = |x: &Float| Ok(Float::with_val(prec, x.square_ref()) + 1u32);
        let one = Float::with_val(prec, 1u32);
        let r = illinois(f, one.clone(), one.clone(), one.clone() * 2u32, one.clone() * 5u32, Tolerance::for_bits(prec, 15));
        assert!(r.is_err());
    }
}
