//! Resultants: univariate by subresultants, bivariate by evaluation and
//! interpolation over consecutive integers.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use super::poly::{Poly1, Poly2, Ring};
use crate::error::{Error, Result};

/// Which variable of a [`Poly2`] to eliminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    R,
    S,
}

impl Var {
    pub fn parse(text: &str) -> Result<Var> {
        match text {
            "r" => Ok(Var::R),
            "s" => Ok(Var::S),
            other => Err(Error::Parse(format!("unknown variable {other:?}"))),
        }
    }

    pub fn other(self) -> Var {
        match self {
            Var::R => Var::S,
            Var::S => Var::R,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::S => "s",
        }
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
pub fn prem(a: &Poly1, b: &Poly1) -> Poly1 {
    let db = b.deg();
    let lc = b.lead();
    let mut r: Vec<Integer> = a.coeffs().to_vec();
    if r.len() <= db {
        return a.clone();
    }
    let mut e = (a.deg() - db + 1) as u32;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r.pop().unwrap();
        for v in r.iter_mut() {
            *v *= &lc;
        }
        for (i, bv) in b.coeffs().iter().enumerate().take(db) {
            r[i + k] -= Integer::from(&top * bv);
        }
        e -= 1;
        while r.last().is_some_and(|v| *v == 0) {
            r.pop();
        }
    }
    let mut out = Poly1::new(r);
    if e > 0 {
        out = out.scale(&Integer::from(Pow::pow(&lc, e)));
    }
    out
}

/// Resultant of two nonzero polynomials at their true degrees.
pub fn resultant(a: &Poly1, b: &Poly1) -> Integer {
    if a.is_zero() || b.is_zero() {
        return Integer::new();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let (ca, cb) = (a.content(), b.content());
    let mut t = Integer::from(Pow::pow(&ca, b.deg() as u32)) * Integer::from(Pow::pow(&cb, a.deg() as u32));
    a = Poly1::new(a.coeffs().iter().map(|v| Integer::from(v.div_exact_ref(&ca))).collect());
    b = Poly1::new(b.coeffs().iter().map(|v| Integer::from(v.div_exact_ref(&cb))).collect());
    let mut sign = 1i32;
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -1;
        }
    }
    if b.deg() == 0 {
        let h = Integer::from(Pow::pow(&b.lead(), a.deg() as u32));
        t *= h;
        return if sign < 0 { -t } else { t };
    }
    let mut g = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b);
        a = b;
        let div = &g * Integer::from(Pow::pow(&h, delta));
        b = Poly1::new(r.coeffs().iter().map(|v| Integer::from(v.div_exact_ref(&div))).collect());
        g = a.lead();
        // h <- h^(1 - delta) g^delta
        h = if delta == 0 { h } else { Integer::from(Pow::pow(&g, delta)).div_exact(&Integer::from(Pow::pow(&h, delta - 1))) };
        if b.is_zero() {
            return Integer::new();
        }
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let num = Integer::from(Pow::pow(&b.lead(), da));
            h = if da == 0 { h } else { num.div_exact(&Integer::from(Pow::pow(&h, da - 1))) };
            let out = t * h;
            return if sign < 0 { -out } else { out };
        }
    }
}

/// Determinant of the Sylvester matrix of `a` and `b` taken with formal
/// degrees `m >= deg a` and `n >= deg b`.
pub fn resultant_formal(a: &Poly1, m: usize, b: &Poly1, n: usize) -> Integer {
    let (da, db) = (a.degree(), b.degree());
    let (Some(da), Some(db)) = (da, db) else {
        return if (a.is_zero() && n == 0) || (b.is_zero() && m == 0) { Integer::from(1) } else { Integer::new() };
    };
    if da < m && db < n {
        return Integer::new();
    }
    if da < m {
        // each missing leading coefficient of a contributes (-1)^n lc(b)
        let mut f = Integer::from(Pow::pow(&b.lead(), (m - da) as u32));
        if n % 2 == 1 && (m - da) % 2 == 1 {
            f = -f;
        }
        return f * resultant_true(a, b);
    }
    if db < n {
        let f = Integer::from(Pow::pow(&a.lead(), (n - db) as u32));
        return f * resultant_true(a, b);
    }
    resultant_true(a, b)
}

fn resultant_true(a: &Poly1, b: &Poly1) -> Integer {
    match (a.deg(), b.deg()) {
        (0, db) => Integer::from(Pow::pow(&a.lead(), db as u32)),
        (da, 0) => Integer::from(Pow::pow(&b.lead(), da as u32)),
        _ => resultant(a, b),
    }
}

/// Polynomial through `(i, values[i])` for `i = 0..values.len()`.
pub fn interpolate_consecutive(values: &[Integer]) -> Poly1 {
    let n = values.len();
    if n == 0 {
        return Poly1::default();
    }
    let mut diffs = values.to_vec();
    let mut lead = Vec::with_capacity(n);
    for k in 0..n {
        lead.push(diffs[0].clone());
        for i in 0..n - 1 - k {
            diffs[i] = Integer::from(&diffs[i + 1] - &diffs[i]);
        }
    }
    // p(x) = sum_k lead[k] * x(x-1)...(x-k+1) / k!
    let d = n - 1;
    let mut fact_ratio = vec![Integer::from(1); n]; // d!/k!
    for k in (0..d).rev() {
        fact_ratio[k] = Integer::from(&fact_ratio[k + 1] * (k as u64 + 1));
    }
    let mut total = vec![Integer::new(); n];
    let mut falling = vec![Integer::from(1)];
    for k in 0..n {
        let w = Integer::from(&lead[k] * &fact_ratio[k]);
        if w != 0 {
            for (i, f) in falling.iter().enumerate() {
                total[i] += Integer::from(f * &w);
            }
        }
        // falling <- falling * (x - k)
        let mut next = vec![Integer::new(); falling.len() + 1];
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] += f;
            next[i] -= Integer::from(f * (k as u64));
        }
        falling = next;
    }
    let dfact = fact_ratio[0].clone();
    Poly1::new(total.into_iter().map(|v| v.div_exact(&dfact)).collect())
}

/// Resultant of `p` and `q` with respect to `which`, as a polynomial in the
/// other variable.
pub fn eliminate(p: &Poly2, q: &Poly2, which: Var) -> Result<Poly1> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Precondition("cannot eliminate from a zero polynomial".into()));
    }
    // rows of Poly2 are indexed by r; keep r as the survivor when eliminating s
    let (p, q) = match which {
        Var::S => (p.clone(), q.clone()),
        Var::R => (p.transpose(), q.transpose()),
    };
    let (m, n) = (p.deg_y(), q.deg_y());
    if m == 0 && n == 0 {
        return Err(Error::Precondition(format!("neither polynomial involves {}", which.name())));
    }
    let bound = (p.deg_x() * n + q.deg_x() * m).min(p.total_degree() * q.total_degree());
    let points: Vec<usize> = (0..=bound + 1).collect();
    let values: Vec<Integer> = points
        .par_iter()
        .map(|&x| {
            let x = Integer::from(x);
            resultant_formal(&p.at_x(&x), m, &q.at_x(&x), n)
        })
        .collect();
    let out = interpolate_consecutive(&values[..=bound]);
    if out.eval_integer(&Integer::from(bound + 1)) != values[bound + 1] {
        return Err(Error::Verification("resultant interpolation failed its check point".into()));
    }
    if out.is_zero() {
        return Err(Error::Solver(format!("zero resultant in {}: the polynomials share a common factor", which.name())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sylvester_det(a: &Poly1, b: &Poly1) -> Integer {
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut mat = vec![vec![Integer::new(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = b.coeff(n - j);
            }
        }
        // Bareiss
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..size {
            if mat[k][k] == 0 {
                let Some(sw) = (k + 1..size).find(|&i| mat[i][k] != 0) else { return Integer::new() };
                mat.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = Integer::from(&mat[i][j] * &mat[k][k]) - Integer::from(&mat[i][k] * &mat[k][j]);
                    mat[i][j] = v.div_exact(&prev);
                }
            }
            prev = mat[k][k].clone();
        }
        let d = mat[size - 1][size - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    #[test]
    fn subresultant_matches_sylvester() {
        let cases = [
            (Poly1::from_i64(&[1, 2, 3, 4]), Poly1::from_i64(&[-5, 0, 2])),
            (Poly1::from_i64(&[3, 0, 0, 0, 1]), Poly1::from_i64(&[7, -3, 0, 5, 2, 1])),
            (Poly1::from_i64(&[-2, 0, 1]), Poly1::from_i64(&[-2, 0, 1, 1])),
            (Poly1::from_i64(&[6, 9]), Poly1::from_i64(&[4, 4, 1])),
        ];
        for (a, b) in cases {
            assert_eq!(resultant(&a, &b), sylvester_det(&a, &b), "{a:?} {b:?}");
            assert_eq!(resultant(&b, &a), sylvester_det(&b, &a));
        }
    }

    #[test]
    fn formal_degree_drop() {
        let a = Poly1::from_i64(&[1]);
        let b = Poly1::from_i64(&[-2, 1]);
        assert_eq!(resultant_formal(&a, 1, &b, 1), Integer::from(-1));
        let c = Poly1::from_i64(&[3]);
        assert_eq!(resultant_formal(&b, 1, &c, 1), Integer::from(3));
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = Poly1::from_i64(&[5, -3, 0, 7, -1]);
        let vals: Vec<Integer> = (0..5).map(|x| p.eval_integer(&Integer::from(x))).collect();
        assert_eq!(interpolate_consecutive(&vals), p);
    }

    #[test]
    fn line_pair() {
        // r - s and r + s eliminating r leave a multiple of s
        let p = Poly2::from_terms(&[(1, 0, 1), (0, 1, -1)]);
        let q = Poly2::from_terms(&[(1, 0, 1), (0, 1, 1)]);
        let out = eliminate(&p, &q, Var::R).unwrap();
        assert_eq!(out.deg(), 1);
        assert_eq!(out.coeff(0), 0);
    }
}
