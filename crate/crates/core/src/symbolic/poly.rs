//! Dense integer polynomials in one and two variables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Ring operations shared by [`Poly1`] and [`Poly2`].
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn from_int(c: Integer) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Integer) -> Self;
    /// Number of nonzero coefficients.
    fn term_count(&self) -> usize;
    /// `c0 + cx x + cy y`; univariate rings reject `cy != 0`.
    fn lin(c0: i64, cx: i64, cy: i64) -> Self;
    fn exact_quotient(&self, d: &Self) -> Option<Self>;
    fn primitive_part(&self) -> Self;
    /// Remove monomial factors.
    fn strip_monomials(&self) -> Self;

    fn one() -> Self {
        Self::from_int(Integer::from(1))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// `c[0] + c[1] x + ...`, trimmed so the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly1 {
    c: Vec<Integer>,
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl Poly1 {
    pub fn new(mut c: Vec<Integer>) -> Self {
        while c.last().is_some_and(|v| *v == 0) {
            c.pop();
        }
        Poly1 { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Integer::from(v)).collect())
    }

    pub fn constant(v: Integer) -> Self {
        Self::new(vec![v])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `a + b x`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64(&[a, b])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.c
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> Integer {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> Integer {
        self.c.iter().map(|v| v.clone().abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for v in &self.c {
            g.gcd_mut(v);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead() < 0 {
            g = -g;
        }
        Poly1::new(self.c.iter().map(|v| Integer::from(v.div_exact_ref(&g))).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly1::new(self.c.iter().enumerate().skip(1).map(|(i, v)| Integer::from(v * i as u64)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut c = vec![Integer::new(); k];
        c.extend(self.c.iter().cloned());
        Poly1 { c }
    }

    /// Largest `k` with `x^k | self`.
    pub fn x_valuation(&self) -> usize {
        self.c.iter().take_while(|v| **v == 0).count()
    }

    pub fn strip_x(&self) -> Self {
        let k = self.x_valuation();
        Poly1::new(self.c[k.min(self.c.len())..].to_vec())
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for v in self.c.iter().rev() {
            acc *= x;
            acc += v;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        // homogenized Horner on numerator and denominator
        let (n, d) = (x.numer(), x.denom());
        let mut acc = Integer::new();
        let mut dpow = Integer::from(1);
        for v in self.c.iter().rev() {
            acc *= n;
            acc += Integer::from(v * &dpow);
            dpow *= d;
        }
        let deg = self.deg() as u32;
        let den = Integer::from(Pow::pow(d, deg));
        Rational::from((acc, den))
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let (n, d) = (x.numer(), x.denom());
        let mut acc = Integer::new();
        let mut dpow = Integer::from(1);
        for v in self.c.iter().rev() {
            acc *= n;
            acc += Integer::from(v * &dpow);
            dpow *= d;
        }
        acc.cmp0() as i32
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for v in self.c.iter().rev() {
            acc *= x;
            acc += v;
        }
        acc
    }

    /// `|p(x)| / max |coeff|`, a scale-free residual.
    pub fn relative_residual(&self, x: &Float) -> Float {
        let v = self.eval_float(x).abs();
        let m = Float::with_val(x.prec(), self.max_abs_coeff());
        if m.is_zero() {
            v
        } else {
            v / m
        }
    }

    /// Pseudo-remainder with the multiplier `|lc(b)|^(deg a - deg b + 1)`, so the
    /// sign of the remainder matches the true remainder.
    pub fn signed_prem(&self, b: &Poly1) -> Poly1 {
        let db = b.degree().expect("pseudo-remainder by zero");
        let lc = b.lead();
        let lc_abs = lc.clone().abs();
        let mut r = self.c.clone();
        let mut steps = 0u32;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let lr = r.last().cloned().unwrap();
            // r = |lc| r - sign(lc) lr x^k b
            for v in r.iter_mut() {
                *v *= &lc_abs;
            }
            let f = if lc < 0 { -lr } else { lr };
            for (i, bv) in b.c.iter().enumerate() {
                r[i + k] -= Integer::from(&f * bv);
            }
            steps += 1;
            while r.last().is_some_and(|v| *v == 0) {
                r.pop();
            }
        }
        let full = (self.deg() + 1).saturating_sub(db) as u32;
        let mut out = Poly1::new(r);
        if full > steps {
            out = out.scale(&Integer::from(Pow::pow(&lc_abs, full - steps)));
        }
        out
    }

    /// Exact quotient if `b` divides `self` over the integers.
    pub fn div_exact(&self, b: &Poly1) -> Option<Poly1> {
        let db = b.degree()?;
        if self.c.is_empty() {
            return Some(Poly1::default());
        }
        if self.deg() < db {
            return None;
        }
        let lc = b.lead();
        let mut r = self.c.clone();
        let mut q = vec![Integer::new(); self.deg() - db + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + db].clone();
            if top == 0 {
                continue;
            }
            if !top.is_divisible(&lc) {
                return None;
            }
            let f = top.div_exact(&lc);
            for (i, bv) in b.c.iter().enumerate() {
                r[i + k] -= Integer::from(&f * bv);
            }
            q[k] = f;
        }
        if r.iter().any(|v| *v != 0) {
            return None;
        }
        Some(Poly1::new(q))
    }

    pub fn divides(&self, other: &Poly1) -> bool {
        other.div_exact(self).is_some()
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.c.is_empty() {
            return b;
        }
        if b.c.is_empty() {
            return a;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        let g_content = a.content().gcd(&b.content());
        while !b.c.is_empty() {
            let r = a.signed_prem(&b);
            a = b;
            b = r.primitive();
            if b.degree() == Some(0) {
                return Poly1::constant(g_content);
            }
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors, up to content.
    pub fn squarefree(&self) -> Poly1 {
        let p = self.primitive();
        if p.deg() < 1 {
            return p;
        }
        let g = p.gcd(&p.derivative());
        if g.deg() == 0 {
            return p;
        }
        p.div_exact(&g).expect("gcd divides").primitive()
    }

    /// Exact integer square root, if `self` is `g^2`.
    pub fn sqrt_exact(&self) -> Option<Poly1> {
        if self.c.is_empty() {
            return Some(Poly1::default());
        }
        if !self.x_valuation().is_multiple_of(2) || !self.deg().is_multiple_of(2) {
            return None;
        }
        let lc = self.lead();
        if lc < 0 || !lc.is_perfect_square() {
            return None;
        }
        let n = self.deg() / 2;
        let l = lc.sqrt();
        // top-down: g_{n-k} from coefficient of x^{2n-k}
        let mut g = vec![Integer::new(); n + 1];
        g[n] = l.clone();
        let two_l = Integer::from(&l * 2u32);
        for k in 1..=n {
            let mut target = self.c[2 * n - k].clone();
            for i in 1..k {
                target -= Integer::from(&g[n - i] * &g[n - k + i]);
            }
            if !target.is_divisible(&two_l) {
                return None;
            }
            g[n - k] = target.div_exact(&two_l);
        }
        let gp = Poly1::new(g);
        if &gp.mul_ref(&gp) == self {
            Some(gp)
        } else {
            None
        }
    }

    /// `self(a + b x)`.
    pub fn compose_linear(&self, a: &Integer, b: &Integer) -> Poly1 {
        let lin = Poly1::new(vec![a.clone(), b.clone()]);
        let mut acc = Poly1::default();
        for v in self.c.iter().rev() {
            acc = acc.mul_ref(&lin).add_ref(&Poly1::constant(v.clone()));
        }
        acc
    }

    /// `x^deg self(1/x)`.
    pub fn reverse(&self) -> Poly1 {
        let mut c = self.c.clone();
        c.reverse();
        Poly1::new(c)
    }

    pub fn display(&self, var: &str) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, v) in self.c.iter().enumerate().rev() {
            if *v == 0 {
                continue;
            }
            let neg = *v < 0;
            let mag = v.clone().abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() || mag != 1 {
                out.push_str(&mag.to_string());
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

impl Ring for Poly1 {
    fn zero() -> Self {
        Poly1::default()
    }

    fn from_int(c: Integer) -> Self {
        Poly1::constant(c)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (long, short) = if self.c.len() >= other.c.len() { (self, other) } else { (other, self) };
        let mut c = long.c.clone();
        for (i, v) in short.c.iter().enumerate() {
            c[i] += v;
        }
        Poly1::new(c)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = self.c.clone();
        c.resize(n, Integer::new());
        for (i, v) in other.c.iter().enumerate() {
            c[i] -= v;
        }
        Poly1::new(c)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.c.is_empty() || other.c.is_empty() {
            return Poly1::default();
        }
        let mut c = vec![Integer::new(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly1::new(c)
    }

    fn neg_ref(&self) -> Self {
        Poly1 { c: self.c.iter().map(|v| Integer::from(-v)).collect() }
    }

    fn scale(&self, k: &Integer) -> Self {
        Poly1::new(self.c.iter().map(|v| Integer::from(v * k)).collect())
    }

    fn term_count(&self) -> usize {
        self.c.iter().filter(|v| **v != 0).count()
    }

    fn lin(c0: i64, cx: i64, cy: i64) -> Self {
        assert_eq!(cy, 0, "univariate polynomial has no second variable");
        Poly1::from_i64(&[c0, cx])
    }

    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        self.div_exact(d)
    }

    fn primitive_part(&self) -> Self {
        self.primitive()
    }

    fn strip_monomials(&self) -> Self {
        self.strip_x()
    }
}

/// `sum_i x^i * rows[i](y)`: rows are polynomials in the second variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    rows: Vec<Poly1>,
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("r", "s"))
    }
}

impl Poly2 {
    pub fn from_rows(mut rows: Vec<Poly1>) -> Self {
        while rows.last().is_some_and(|r| r.c.is_empty()) {
            rows.pop();
        }
        Poly2 { rows }
    }

    /// From `(i, j, c)` triples meaning `c x^i y^j`.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut rows: Vec<Vec<Integer>> = Vec::new();
        for &(i, j, c) in terms {
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            if rows[i].len() <= j {
                rows[i].resize(j + 1, Integer::new());
            }
            rows[i][j] += c;
        }
        Poly2::from_rows(rows.into_iter().map(Poly1::new).collect())
    }

    pub fn x() -> Self {
        Poly2::from_rows(vec![Poly1::default(), Poly1::constant(Integer::from(1))])
    }

    pub fn y() -> Self {
        Poly2::from_rows(vec![Poly1::x()])
    }

    /// `a + b x + c y`.
    pub fn linear(a: i64, b: i64, c: i64) -> Self {
        Poly2::from_terms(&[(0, 0, a), (1, 0, b), (0, 1, c)])
    }

    pub fn rows(&self) -> &[Poly1] {
        &self.rows
    }

    pub fn deg_x(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.rows.iter().map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.rows.iter().enumerate().filter(|(_, r)| !r.c.is_empty()).map(|(i, r)| i + r.deg()).max().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Integer {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Integer)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.c.iter().enumerate().filter(|(_, v)| **v != 0).map(move |(j, v)| (i, j, v)))
    }

    pub fn max_abs_coeff(&self) -> Integer {
        self.rows.iter().map(|r| r.max_abs_coeff()).max().unwrap_or_default()
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for r in &self.rows {
            g.gcd_mut(&r.content());
        }
        g
    }

    /// Divide out the integer content; sign fixed by the highest term in `x`, then `y`.
    pub fn primitive(&self) -> Self {
        let Some(top) = self.rows.last() else { return self.clone() };
        let mut g = self.content();
        if top.lead() < 0 {
            g = -g;
        }
        Poly2::from_rows(self.rows.iter().map(|r| Poly1::new(r.c.iter().map(|v| Integer::from(v.div_exact_ref(&g))).collect())).collect())
    }

    /// Swap the roles of the two variables.
    pub fn transpose(&self) -> Poly2 {
        let dy = self.deg_y();
        let mut rows = vec![vec![Integer::new(); self.rows.len()]; dy + 1];
        for (i, j, v) in self.terms() {
            rows[j][i] = v.clone();
        }
        Poly2::from_rows(rows.into_iter().map(Poly1::new).collect())
    }

    /// Coefficients in `y` as polynomials in `x`: `self = sum_j y^j out[j](x)`.
    pub fn coeffs_in_y(&self) -> Vec<Poly1> {
        self.transpose().rows
    }

    pub fn eval_float(&self, x: &Float, y: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for r in self.rows.iter().rev() {
            acc *= x;
            acc += r.eval_float(y);
        }
        acc
    }

    pub fn relative_residual(&self, x: &Float, y: &Float) -> Float {
        let v = self.eval_float(x, y).abs();
        let m = Float::with_val(x.prec(), self.max_abs_coeff());
        if m.is_zero() {
            v
        } else {
            v / m
        }
    }

    /// `self(x, x)`.
    pub fn diagonal(&self) -> Poly1 {
        let mut acc: Vec<Integer> = Vec::new();
        for (i, j, v) in self.terms() {
            if acc.len() <= i + j {
                acc.resize(i + j + 1, Integer::new());
            }
            acc[i + j] += v;
        }
        Poly1::new(acc)
    }

    /// `self(x0, y)` for an integer `x0`.
    pub fn at_x(&self, x0: &Integer) -> Poly1 {
        let mut acc = Poly1::default();
        for r in self.rows.iter().rev() {
            acc = acc.scale(x0).add_ref(r);
        }
        acc
    }

    /// `self(x, y0)` for an integer `y0`.
    pub fn at_y(&self, y0: &Integer) -> Poly1 {
        Poly1::new(self.rows.iter().map(|r| r.eval_integer(y0)).collect())
    }

    /// Lowest-order coefficient in `x` of `self(x, m x)`, as a polynomial in `m`.
    pub fn ray_leading(&self) -> Poly1 {
        let mut by_total: std::collections::BTreeMap<usize, Vec<Integer>> = Default::default();
        for (i, j, v) in self.terms() {
            let e = by_total.entry(i + j).or_default();
            if e.len() <= j {
                e.resize(j + 1, Integer::new());
            }
            e[j] += v;
        }
        for (_, c) in by_total {
            let p = Poly1::new(c);
            if !p.c.is_empty() {
                return p;
            }
        }
        Poly1::default()
    }

    /// Remove the largest monomial factor `x^i y^j`.
    pub fn strip_monomial(&self) -> Poly2 {
        let vx = self.rows.iter().take_while(|r| r.c.is_empty()).count();
        let vy = self.rows.iter().filter(|r| !r.c.is_empty()).map(|r| r.x_valuation()).min().unwrap_or(0);
        Poly2::from_rows(self.rows[vx.min(self.rows.len())..].iter().map(|r| Poly1::new(r.c[vy.min(r.c.len())..].to_vec())).collect())
    }

    /// Exact quotient by `b` if it divides over the integers.
    pub fn div_exact(&self, b: &Poly2) -> Option<Poly2> {
        if b.rows.is_empty() {
            return None;
        }
        if self.rows.is_empty() {
            return Some(Poly2::default());
        }
        // long division in x with exact division of y-polynomials
        let db = b.rows.len() - 1;
        if self.rows.len() - 1 < db {
            return None;
        }
        let lb = &b.rows[db];
        let mut rem = self.rows.clone();
        let mut q = vec![Poly1::default(); self.rows.len() - db];
        for k in (0..q.len()).rev() {
            let top = rem[k + db].clone();
            if top.c.is_empty() {
                continue;
            }
            let f = top.div_exact(lb)?;
            for (i, brow) in b.rows.iter().enumerate() {
                rem[i + k] = rem[i + k].sub_ref(&f.mul_ref(brow));
            }
            q[k] = f;
        }
        if rem.iter().any(|r| !r.c.is_empty()) {
            return None;
        }
        Some(Poly2::from_rows(q))
    }

    /// Exact square root if `self = g^2`, found one `x`-row at a time.
    pub fn sqrt_exact(&self) -> Option<Poly2> {
        if self.rows.is_empty() {
            return Some(Poly2::default());
        }
        let vx = self.rows.iter().take_while(|r| r.c.is_empty()).count();
        if vx % 2 != 0 || !(self.rows.len() - 1 - vx).is_multiple_of(2) {
            return None;
        }
        let shifted = Poly2::from_rows(self.rows[vx..].to_vec());
        let n = shifted.rows.len() - 1;
        let half = n / 2;
        let top = shifted.rows[n].sqrt_exact()?;
        let two_top = top.scale(&Integer::from(2));
        let mut g = vec![Poly1::default(); half + 1];
        g[half] = top;
        for k in 1..=half {
            let mut target = shifted.rows[n - k].clone();
            for i in 1..k {
                target = target.sub_ref(&g[half - i].mul_ref(&g[half - k + i]));
            }
            g[half - k] = target.div_exact(&two_top)?;
        }
        let mut rows = vec![Poly1::default(); vx / 2];
        rows.extend(g);
        let root = Poly2::from_rows(rows);
        if &root.mul_ref(&root) == self {
            Some(root)
        } else {
            None
        }
    }

    pub fn display(&self, xv: &str, yv: &str) -> String {
        let mut terms: Vec<(usize, usize, &Integer)> = self.terms().collect();
        if terms.is_empty() {
            return "0".into();
        }
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 + t.1, t.0)));
        let mut out = String::new();
        for (i, j, v) in terms {
            let neg = *v < 0;
            let mag = v.clone().abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = Vec::new();
            match i {
                0 => {}
                1 => mono.push(xv.to_string()),
                _ => mono.push(format!("{xv}^{i}")),
            }
            match j {
                0 => {}
                1 => mono.push(yv.to_string()),
                _ => mono.push(format!("{yv}^{j}")),
            }
            if mono.is_empty() || mag != 1 {
                mono.insert(0, mag.to_string());
            }
            out.push_str(&mono.join("*"));
        }
        out
    }
}

impl Ring for Poly2 {
    fn zero() -> Self {
        Poly2::default()
    }

    fn from_int(c: Integer) -> Self {
        Poly2::from_rows(vec![Poly1::constant(c)])
    }

    fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.rows.len().max(other.rows.len());
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push(match (self.rows.get(i), other.rows.get(i)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly2::from_rows(rows)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.rows.is_empty() || other.rows.is_empty() {
            return Poly2::default();
        }
        let mut rows = vec![Vec::<Integer>::new(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.c.is_empty() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                if b.c.is_empty() {
                    continue;
                }
                let row = &mut rows[i + j];
                let need = a.c.len() + b.c.len() - 1;
                if row.len() < need {
                    row.resize(need, Integer::new());
                }
                for (p, av) in a.c.iter().enumerate() {
                    if *av == 0 {
                        continue;
                    }
                    for (q, bv) in b.c.iter().enumerate() {
                        row[p + q] += av * bv;
                    }
                }
            }
        }
        Poly2::from_rows(rows.into_iter().map(Poly1::new).collect())
    }

    fn neg_ref(&self) -> Self {
        Poly2 { rows: self.rows.iter().map(|r| r.neg_ref()).collect() }
    }

    fn scale(&self, k: &Integer) -> Self {
        Poly2::from_rows(self.rows.iter().map(|r| r.scale(k)).collect())
    }

    fn term_count(&self) -> usize {
        self.rows.iter().map(|r| r.term_count()).sum()
    }

    fn lin(c0: i64, cx: i64, cy: i64) -> Self {
        Poly2::linear(c0, cx, cy)
    }

    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        self.div_exact(d)
    }

    fn primitive_part(&self) -> Self {
        self.primitive()
    }

    fn strip_monomials(&self) -> Self {
        self.strip_monomial()
    }
}

/// Coefficients serialize as decimal strings, ascending degree.
impl Serialize for Poly1 {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.c.iter().map(|v| v.to_string()))
    }
}

impl<'de> Deserialize<'de> for Poly1 {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        let c = raw.iter().map(|t| t.parse::<Integer>().map_err(D::Error::custom)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly1::new(c))
    }
}

/// Rows are coefficient polynomials in the second variable, by power of the first.
impl Serialize for Poly2 {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.rows.iter())
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly2::from_rows(Vec::<Poly1>::deserialize(de)?))
    }
}

macro_rules! ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.add_ref(o)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.sub_ref(o)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                self.mul_ref(o)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
    };
}

ops!(Poly1);
ops!(Poly2);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_divide() {
        let a = Poly1::from_i64(&[1, 2, 3]);
        let b = Poly1::from_i64(&[-1, 1]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&Poly1::from_i64(&[2, 1])).is_none());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let f = Poly1::from_i64(&[-2, 0, 1]);
        let a = &f * &Poly1::from_i64(&[3, 1]);
        let b = &f.scale(&Integer::from(6)) * &Poly1::from_i64(&[-5, 7]);
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn squares() {
        let g = Poly1::from_i64(&[3, -1, 4]);
        assert_eq!((&g * &g).sqrt_exact().unwrap(), g);
        assert!(Poly1::from_i64(&[1, 0, 2]).sqrt_exact().is_none());
        let h = Poly2::from_terms(&[(0, 1, 2), (1, 0, -1), (2, 1, 5)]);
        let sq = (&h * &h).sqrt_exact().unwrap();
        assert!(sq == h || sq == -&h);
    }

    #[test]
    fn bivariate_division_and_specializations() {
        let p = Poly2::linear(1, 2, 3);
        let q = Poly2::from_terms(&[(1, 1, 1), (0, 0, -4)]);
        let pq = &p * &q;
        assert_eq!(pq.div_exact(&q).unwrap(), p);
        assert_eq!(p.diagonal(), Poly1::from_i64(&[1, 5]));
        assert_eq!(pq.transpose().transpose(), pq);
        // ray leading part of x + y - x^2 is 1 + m
        let r = Poly2::from_terms(&[(1, 0, 1), (0, 1, 1), (2, 0, -1)]);
        assert_eq!(r.ray_leading(), Poly1::from_i64(&[1, 1]));
    }

    #[test]
    fn signed_prem_keeps_sign() {
        let a = Poly1::from_i64(&[1, 0, 0, 1]);
        let b = Poly1::from_i64(&[1, -2]);
        let r = a.signed_prem(&b);
        // a(1/2) = 9/8 > 0
        assert_eq!(r.deg(), 0);
        assert!(r.coeff(0) > 0);
    }
}
