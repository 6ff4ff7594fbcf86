//! Real roots of integer polynomials: Sturm sequences, isolation by
//! bisection, and exact comparison of algebraic numbers.

use std::cmp::Ordering;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::poly::{Poly1, Ring};
use crate::error::{Error, Result};

fn reduce_content(p: &Poly1) -> Poly1 {
    let c = p.content();
    if c <= 1 {
        return p.clone();
    }
    Poly1::new(p.coeffs().iter().map(|v| Integer::from(v.div_exact_ref(&c))).collect())
}

/// Sturm chain `p, p', -rem(p, p'), ...` with positive content removed.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<Poly1>,
}

impl Sturm {
    pub fn new(p: &Poly1) -> Self {
        let mut chain = vec![reduce_content(p)];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(reduce_content(&d));
        }
        while chain.len() >= 2 {
            let n = chain.len();
            if chain[n - 1].deg() == 0 {
                break;
            }
            let r = chain[n - 2].signed_prem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(reduce_content(&r.neg_ref()));
        }
        Sturm { chain }
    }

    pub fn variations(&self, x: &Rational) -> usize {
        let mut last = 0;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// A real algebraic number: the only root of `poly` in `[lo, hi]`.
///
/// `poly` is square-free; when `lo < hi` neither endpoint is a root.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicNumber {
    pub poly: Poly1,
    pub lo: Rational,
    pub hi: Rational,
}

/// Serializable view with decimal approximation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraicRecord {
    pub poly: Poly1,
    pub lo: String,
    pub hi: String,
    pub approx: String,
}

impl AlgebraicNumber {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    /// Bisect until the interval is narrower than `2^-bits`.
    pub fn refine(&mut self, bits: u32) {
        let target = Rational::from((1, Integer::from(1) << bits));
        let s_hi = self.poly.sign_at(&self.hi);
        while !self.is_exact() && self.width() > target {
            let mid = Rational::from(&self.lo + &self.hi) / 2u32;
            let sm = self.poly.sign_at(&mid);
            if sm == 0 {
                self.lo = mid.clone();
                self.hi = mid;
            } else if sm == s_hi {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let mut a = self.clone();
        a.refine(prec + 8);
        Float::with_val(prec, Rational::from(&a.lo + &a.hi) / 2u32)
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        let prec = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
        crate::precision::to_decimal(&self.to_float(prec), digits)
    }

    pub fn record(&self, digits: u32) -> AlgebraicRecord {
        AlgebraicRecord { poly: self.poly.clone(), lo: self.lo.to_string(), hi: self.hi.to_string(), approx: self.to_decimal(digits) }
    }

    /// Locate the root of `poly` near `approx`: the narrowest interval
    /// `approx +- 2^-k` (k descending from `bits`) holding exactly one root.
    pub fn near(poly: &Poly1, approx: &Float, bits: u32) -> Result<AlgebraicNumber> {
        let sf = poly.squarefree();
        if sf.deg() == 0 {
            return Err(Error::Domain("constant polynomial has no roots".into()));
        }
        let sturm = Sturm::new(&sf);
        let centre = approx.to_rational().ok_or_else(|| Error::Domain("non-finite approximation".into()))?;
        let mut k = bits as i64;
        while k > -4 {
            let rad = if k >= 0 { Rational::from((1, Integer::from(1) << k as u32)) } else { Rational::from(Integer::from(1) << (-k) as u32) };
            let lo = Rational::from(&centre - &rad);
            let hi = Rational::from(&centre + &rad);
            let (slo, shi) = (sf.sign_at(&lo), sf.sign_at(&hi));
            if slo != 0 && shi != 0 {
                match sturm.count(&lo, &hi) {
                    1 => return Ok(AlgebraicNumber { poly: sf, lo, hi }),
                    0 => {}
                    _ => return Err(Error::Verification(format!("several roots within 2^-{k} of {}", approx.to_f64()))),
                }
            }
            k -= 8;
        }
        Err(Error::Verification(format!("no root near {}", approx.to_f64())))
    }
}

/// Isolating intervals for the distinct real roots of `f` in the open
/// interval `(lo, hi)`, in increasing order.
pub fn isolate_roots(f: &Poly1, lo: &Rational, hi: &Rational) -> Vec<AlgebraicNumber> {
    let sf = f.squarefree();
    if sf.deg() == 0 || lo >= hi {
        return Vec::new();
    }
    let sturm = Sturm::new(&sf);
    let mut out = Vec::new();
    // roots in (lo, hi): count on (lo, hi] minus a root at hi
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let mut n = sturm.count(&a, &b);
        if sf.sign_at(&b) == 0 {
            n -= 1;
            if &b != hi {
                out.push(AlgebraicNumber { poly: sf.clone(), lo: b.clone(), hi: b.clone() });
            }
        }
        match n {
            0 => {}
            1 if sf.sign_at(&a) != 0 => out.push(AlgebraicNumber { poly: sf.clone(), lo: a, hi: b }),
            _ => {
                let mid = Rational::from(&a + &b) / 2u32;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Exact equality: the defining polynomials must share a root inside the
/// intersection of the two isolating intervals.
pub fn algebraic_equal(x: &AlgebraicNumber, y: &AlgebraicNumber) -> bool {
    let lo = (&x.lo).max(&y.lo).clone();
    let hi = (&x.hi).min(&y.hi).clone();
    if lo > hi {
        return false;
    }
    let g = x.poly.gcd(&y.poly);
    if g.deg() == 0 {
        return false;
    }
    if g.sign_at(&lo) == 0 || g.sign_at(&hi) == 0 {
        return true;
    }
    lo < hi && Sturm::new(&g).count(&lo, &hi) > 0
}

/// Exact order of two algebraic numbers.
pub fn algebraic_cmp(x: &AlgebraicNumber, y: &AlgebraicNumber) -> Ordering {
    if algebraic_equal(x, y) {
        return Ordering::Equal;
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut bits = 64;
    loop {
        if a.hi < b.lo {
            return Ordering::Less;
        }
        if b.hi < a.lo {
            return Ordering::Greater;
        }
        a.refine(bits);
        b.refine(bits);
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn sqrt_two() {
        let p = Poly1::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&p, &q(0, 1), &q(2, 1));
        assert_eq!(roots.len(), 1);
        let v = roots[0].to_float(100);
        assert!((v.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rational_roots_and_counts() {
        // (2x - 1)(x - 3/4)(x + 1) * 4 = (2x-1)(4x-3)(x+1)
        let p = &(&Poly1::from_i64(&[-1, 2]) * &Poly1::from_i64(&[-3, 4])) * &Poly1::from_i64(&[1, 1]);
        let roots = isolate_roots(&p, &q(-2, 1), &q(1, 1));
        assert_eq!(roots.len(), 3);
        let vals: Vec<f64> = roots.iter().map(|r| r.to_float(80).to_f64()).collect();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 0.5).abs() < 1e-12 && (vals[2] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn equality_via_gcd() {
        let a = isolate_roots(&Poly1::from_i64(&[-2, 0, 1]), &q(1, 1), &q(2, 1)).remove(0);
        let b = AlgebraicNumber::near(&Poly1::from_i64(&[-4, 0, 2]), &Float::with_val(64, std::f64::consts::SQRT_2), 20).unwrap();
        assert!(algebraic_equal(&a, &b));
        let c = isolate_roots(&Poly1::from_i64(&[-3, 0, 1]), &q(1, 1), &q(2, 1)).remove(0);
        assert!(!algebraic_equal(&a, &c));
        assert_eq!(algebraic_cmp(&a, &c), Ordering::Less);
    }
}
