//! Polynomials carrying square roots of linear forms, the trigonometric
//! expansion of `cos(xi . theta) - 1`, and radical elimination.

use std::collections::{BTreeMap, HashMap};

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::poly::Ring;
use crate::angles::{Kind, Size, COMPONENT_PAIRS};
use crate::error::{Error, Result};
use crate::tuples::AngleCount;

/// `c[0] + c[1] x + c[2] y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lin(pub [i64; 3]);

impl Lin {
    pub const ONE: Lin = Lin([1, 0, 0]);
    pub const X: Lin = Lin([0, 1, 0]);
    pub const Y: Lin = Lin([0, 0, 1]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn is_constant(&self) -> bool {
        self.0[1] == 0 && self.0[2] == 0
    }

    pub fn plus(self, o: Lin) -> Lin {
        Lin([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn times(self, k: i64) -> Lin {
        Lin([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    fn content(&self) -> i64 {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        gcd(gcd(self.0[0], self.0[1]), self.0[2])
    }

    /// Split into a positive integer content and a primitive form.
    fn split(self) -> (i64, Lin) {
        let c = self.content();
        (c, Lin([self.0[0] / c, self.0[1] / c, self.0[2] / c]))
    }

    pub fn to_ring<R: Ring>(self) -> R {
        R::lin(self.0[0], self.0[1], self.0[2])
    }
}

/// A circle radius after specialization: a linear form, zero, or unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radius {
    Zero,
    Finite(Lin),
    Infinite,
}

/// Where the angle equation is evaluated before eliminating radicals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Specialization {
    /// Both variables free: `x = r`, `y = s`.
    General,
    /// `s = r`, univariate in `r`.
    Diagonal,
    /// `r = 1`, univariate in `s`.
    AtOne,
    /// `s = 0`, univariate in `r`.
    ZeroS,
    /// Blow-up at the origin along `s = m r`, univariate in `m`.
    Origin,
}

impl Specialization {
    pub const ALL: [Specialization; 5] =
        [Specialization::General, Specialization::Diagonal, Specialization::AtOne, Specialization::ZeroS, Specialization::Origin];

    pub fn name(self) -> &'static str {
        match self {
            Specialization::General => "general",
            Specialization::Diagonal => "diagonal",
            Specialization::AtOne => "at-one",
            Specialization::ZeroS => "zero-s",
            Specialization::Origin => "origin",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Specialization::ALL.into_iter().find(|s| s.name() == text).ok_or_else(|| Error::Parse(format!("unknown specialization {text:?}")))
    }

    /// Name of the polynomial variable (the first one for `General`).
    pub fn variable(self) -> &'static str {
        match self {
            Specialization::General | Specialization::Diagonal | Specialization::ZeroS => "r",
            Specialization::AtOne => "s",
            Specialization::Origin => "m",
        }
    }

    pub fn radius(self, size: Size) -> Radius {
        use Specialization::*;
        match (self, size) {
            (Origin, Size::Large) => Radius::Infinite,
            (Origin, Size::Mid) => Radius::Finite(Lin::ONE),
            (Origin, Size::Small) => Radius::Finite(Lin::X),
            (_, Size::Large) => Radius::Finite(Lin::ONE),
            (AtOne, Size::Mid) => Radius::Finite(Lin::ONE),
            (AtOne, Size::Small) => Radius::Finite(Lin::X),
            (_, Size::Mid) => Radius::Finite(Lin::X),
            (General, Size::Small) => Radius::Finite(Lin::Y),
            (Diagonal, Size::Small) => Radius::Finite(Lin::X),
            (ZeroS, Size::Small) => Radius::Zero,
        }
    }

    /// Nonconstant primitive forms `a u + b v + c w` (coefficients 0..=2) built
    /// from the finite radii; all are positive on the domain and may be
    /// divided out of contour polynomials.
    pub fn positive_forms(self) -> Vec<Lin> {
        let radii: Vec<Lin> = Size::ALL
            .iter()
            .filter_map(|&z| match self.radius(z) {
                Radius::Finite(l) => Some(l),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        let n = radii.len() as u32;
        for code in 1..3u32.pow(n) {
            let mut acc = Lin([0, 0, 0]);
            let mut c = code;
            for l in &radii {
                acc = acc.plus(l.times((c % 3) as i64));
                c /= 3;
            }
            if acc.is_constant() {
                continue;
            }
            let (_, p) = acc.split();
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKey {
    Prime(u64),
    Form(Lin),
}

/// Table of radical atoms: primes and primitive linear forms.
#[derive(Clone, Debug)]
pub struct Atoms<R> {
    keys: Vec<AtomKey>,
    values: Vec<R>,
}

impl<R: Ring> Default for Atoms<R> {
    fn default() -> Self {
        Atoms { keys: Vec::new(), values: Vec::new() }
    }
}

impl<R: Ring> Atoms<R> {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> AtomKey {
        self.keys[i]
    }

    pub fn value(&self, i: usize) -> &R {
        &self.values[i]
    }

    fn intern(&mut self, key: AtomKey) -> usize {
        if let Some(i) = self.keys.iter().position(|k| *k == key) {
            return i;
        }
        assert!(self.keys.len() < 64, "too many radical atoms");
        self.keys.push(key);
        self.values.push(match key {
            AtomKey::Prime(p) => R::from_int(Integer::from(p)),
            AtomKey::Form(l) => l.to_ring(),
        });
        self.keys.len() - 1
    }

    /// Product of the atoms in `mask`.
    pub fn product(&self, mask: u64) -> R {
        let mut acc = R::one();
        for i in bits(mask) {
            acc = acc.mul_ref(&self.values[i]);
        }
        acc
    }

    pub fn describe(&self, i: usize, var_x: &str, var_y: &str) -> String {
        match self.keys[i] {
            AtomKey::Prime(p) => p.to_string(),
            AtomKey::Form(l) => {
                let mut parts = Vec::new();
                for (c, v) in [(l.0[1], var_x), (l.0[2], var_y), (l.0[0], "")] {
                    if c == 0 {
                        continue;
                    }
                    parts.push(match (c, v) {
                        (c, "") => c.to_string(),
                        (1, v) => v.to_string(),
                        (c, v) => format!("{c}{v}"),
                    });
                }
                parts.join("+")
            }
        }
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn factor_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `prod atom^exps * sqrt(prod of atoms in mask)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomMono {
    exps: BTreeMap<usize, u32>,
    mask: u64,
}

impl AtomMono {
    /// Square root of a product of nonzero linear forms.
    fn sqrt_of<R: Ring>(atoms: &mut Atoms<R>, forms: &[Lin]) -> AtomMono {
        let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
        for f in forms {
            let (c, p) = f.split();
            for q in factor_small(c as u64) {
                *mult.entry(atoms.intern(AtomKey::Prime(q))).or_default() += 1;
            }
            if !p.is_constant() {
                *mult.entry(atoms.intern(AtomKey::Form(p))).or_default() += 1;
            }
        }
        let mut m = AtomMono::default();
        for (a, k) in mult {
            if k / 2 > 0 {
                m.exps.insert(a, k / 2);
            }
            if k % 2 == 1 {
                m.mask |= 1 << a;
            }
        }
        m
    }

    fn one() -> AtomMono {
        AtomMono::default()
    }

    /// Divide both monomials by their common atom factors, radicals included.
    fn reduce_pair(a: &mut AtomMono, b: &mut AtomMono) {
        let common: Vec<(usize, u32)> = a.exps.iter().filter_map(|(k, e)| b.exps.get(k).map(|f| (*k, (*e).min(*f)))).collect();
        for (k, e) in common {
            for m in [&mut *a, &mut *b] {
                let v = m.exps.get_mut(&k).unwrap();
                *v -= e;
                if *v == 0 {
                    m.exps.remove(&k);
                }
            }
        }
        let shared = a.mask & b.mask;
        a.mask &= !shared;
        b.mask &= !shared;
    }

    fn coefficient<R: Ring>(&self, atoms: &Atoms<R>) -> R {
        let mut acc = R::one();
        for (&a, &e) in &self.exps {
            acc = acc.mul_ref(&atoms.value(a).pow(e));
        }
        acc
    }

    /// The square, a plain polynomial.
    fn square<R: Ring>(&self, atoms: &Atoms<R>) -> R {
        let c = self.coefficient(atoms);
        c.mul_ref(&c).mul_ref(&atoms.product(self.mask))
    }

    fn to_poly<R: Ring>(&self, atoms: &Atoms<R>) -> RadicalPoly<R> {
        RadicalPoly::term(self.mask, self.coefficient(atoms))
    }
}

/// Finite sum of `coefficient * sqrt(prod of atoms in mask)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalPoly<R> {
    terms: BTreeMap<u64, R>,
}

impl<R: Ring> Default for RadicalPoly<R> {
    fn default() -> Self {
        RadicalPoly { terms: BTreeMap::new() }
    }
}

impl<R: Ring> RadicalPoly<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(mask: u64, c: R) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(mask, c);
        }
        p
    }

    pub fn constant(c: R) -> Self {
        Self::term(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &R)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    /// Total coefficient count across all radical terms.
    pub fn size(&self) -> usize {
        self.terms.values().map(|c| c.term_count()).sum()
    }

    /// Radical-free part, if there are no radicals left.
    pub fn as_rational(&self) -> Option<R> {
        match self.terms.len() {
            0 => Some(R::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn accumulate(&mut self, mask: u64, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RadicalPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &R) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.accumulate(*m, c.mul_ref(k));
        }
        out
    }

    pub fn mul(&self, o: &Self, atoms: &Atoms<R>) -> Self {
        let mut cache: HashMap<u64, R> = HashMap::new();
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let shared = m1 & m2;
                let mut c = c1.mul_ref(c2);
                if shared != 0 {
                    let f = cache.entry(shared).or_insert_with(|| atoms.product(shared));
                    c = c.mul_ref(f);
                }
                out.accumulate(m1 ^ m2, c);
            }
        }
        out
    }

    /// Multiply by `sqrt(prod of atoms in mask)`.
    pub fn mul_sqrt(&self, mask: u64, atoms: &Atoms<R>) -> Self {
        self.mul(&Self::term(mask, R::one()), atoms)
    }

    /// Split by atom `t`: `self = sqrt(t) * with + without`.
    fn split(&self, t: usize) -> (Self, Self) {
        let (mut with, mut without) = (Self::zero(), Self::zero());
        for (m, c) in &self.terms {
            if m >> t & 1 == 1 {
                with.terms.insert(m & !(1 << t), c.clone());
            } else {
                without.terms.insert(*m, c.clone());
            }
        }
        (with, without)
    }
}

/// `re + i im` with radical-polynomial parts.
#[derive(Clone, Debug)]
struct Complex<R> {
    re: RadicalPoly<R>,
    im: RadicalPoly<R>,
}

impl<R: Ring> Complex<R> {
    fn one() -> Self {
        Complex { re: RadicalPoly::constant(R::one()), im: RadicalPoly::zero() }
    }

    fn size(&self) -> usize {
        self.re.size() + self.im.size()
    }

    fn mul(&self, o: &Self, atoms: &Atoms<R>) -> Self {
        let re = self.re.mul(&o.re, atoms).sub(&self.im.mul(&o.im, atoms));
        let im = self.re.mul(&o.im, atoms).add(&self.im.mul(&o.re, atoms));
        Complex { re, im }
    }

    fn square(&self, atoms: &Atoms<R>) -> Self {
        let re = self.re.mul(&self.re, atoms).sub(&self.im.mul(&self.im, atoms));
        let cross = self.re.mul(&self.im, atoms);
        Complex { re, im: cross.add(&cross) }
    }

    fn pow(&self, mut e: u32, atoms: &Atoms<R>, cap: &Cap) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, atoms);
                cap.check(acc.size())?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square(atoms);
                cap.check(base.size())?;
            }
        }
        Ok(acc)
    }
}

/// Term budget for intermediate expressions.
#[derive(Clone, Debug)]
pub struct Cap {
    pub terms: usize,
    pub label: String,
}

impl Cap {
    pub const DEFAULT_TERMS: usize = 5_000_000;

    pub fn new(terms: usize, label: impl Into<String>) -> Self {
        Cap { terms, label: label.into() }
    }

    fn check(&self, size: usize) -> Result<()> {
        if size > self.terms {
            return Err(Error::Resource(format!("{}: intermediate expression has {size} terms, over the cap of {}", self.label, self.terms)));
        }
        Ok(())
    }
}

/// Half-angle factor `C + i S` of one petal angle, up to a positive scalar.
#[derive(Clone, Debug)]
enum HalfAngle {
    /// The angle is zero.
    Trivial,
    /// `C + i S`; `c = None` means the angle is `pi`.
    Pair { c: Option<AtomMono>, s: AtomMono },
}

fn half_angle<R: Ring>(atoms: &mut Atoms<R>, center: Radius, b: Radius, c: Radius) -> HalfAngle {
    let Radius::Finite(a) = center else {
        panic!("petal angle needs a finite nonzero center");
    };
    match (b, c) {
        (Radius::Zero, _) | (_, Radius::Zero) => HalfAngle::Trivial,
        (Radius::Infinite, Radius::Infinite) => HalfAngle::Pair { c: None, s: AtomMono::one() },
        (Radius::Infinite, Radius::Finite(f)) | (Radius::Finite(f), Radius::Infinite) => {
            let mut cc = AtomMono::sqrt_of(atoms, &[a]);
            let mut ss = AtomMono::sqrt_of(atoms, &[f]);
            AtomMono::reduce_pair(&mut cc, &mut ss);
            HalfAngle::Pair { c: Some(cc), s: ss }
        }
        (Radius::Finite(fb), Radius::Finite(fc)) => {
            let mut cc = AtomMono::sqrt_of(atoms, &[a, a.plus(fb).plus(fc)]);
            let mut ss = AtomMono::sqrt_of(atoms, &[fb, fc]);
            AtomMono::reduce_pair(&mut cc, &mut ss);
            HalfAngle::Pair { c: Some(cc), s: ss }
        }
    }
}

/// Half-angle factors of every component with nonzero count.
fn factors<R: Ring>(atoms: &mut Atoms<R>, kind: Kind, xi: &AngleCount, spec: Specialization) -> Vec<(HalfAngle, u32)> {
    let center = spec.radius(kind.center());
    let mut out = Vec::new();
    for (i, &(b, c)) in COMPONENT_PAIRS.iter().enumerate() {
        let k = xi.0[i];
        if k == 0 {
            continue;
        }
        let f = half_angle(atoms, center, spec.radius(b), spec.radius(c));
        if !matches!(f, HalfAngle::Trivial) {
            out.push((f, k));
        }
    }
    out
}

fn to_complex<R: Ring>(f: &HalfAngle, atoms: &Atoms<R>) -> Complex<R> {
    match f {
        HalfAngle::Trivial => Complex::one(),
        HalfAngle::Pair { c, s } => Complex { re: c.as_ref().map(|m| m.to_poly(atoms)).unwrap_or_default(), im: s.to_poly(atoms) },
    }
}

fn norm2<R: Ring>(f: &HalfAngle, atoms: &Atoms<R>) -> R {
    match f {
        HalfAngle::Trivial => R::one(),
        HalfAngle::Pair { c, s } => {
            let cs = c.as_ref().map(|m| m.square(atoms)).unwrap_or_else(R::zero);
            cs.add_ref(&s.square(atoms))
        }
    }
}

/// `cos(xi . theta) - 1` as `numerator / denominator`.
#[derive(Clone, Debug)]
pub struct CosSum<R> {
    pub kind: Kind,
    pub xi: AngleCount,
    pub specialization: Specialization,
    pub atoms: Atoms<R>,
    pub numerator: RadicalPoly<R>,
    pub denominator: R,
}

/// Expand `cos(xi . theta) - 1` with `cos theta = (C^2 - S^2) / (C^2 + S^2)` and
/// `sin theta = 2 C S / (C^2 + S^2)` for each petal angle.
pub fn cos_sum_expr<R: Ring>(kind: Kind, xi: &AngleCount, spec: Specialization, cap: &Cap) -> Result<CosSum<R>> {
    let mut atoms: Atoms<R> = Atoms::default();
    let fs = factors(&mut atoms, kind, xi, spec);
    let mut w = Complex::one();
    let mut den = R::one();
    for (f, k) in &fs {
        let z = to_complex(f, &atoms).square(&atoms);
        w = w.mul(&z.pow(*k, &atoms, cap)?, &atoms);
        cap.check(w.size())?;
        den = den.mul_ref(&norm2(f, &atoms).pow(*k));
    }
    let numerator = w.re.sub(&RadicalPoly::constant(den.clone()));
    Ok(CosSum { kind, xi: *xi, specialization: spec, atoms, numerator, denominator: den })
}

/// `Im prod (C + i S)^xi`, which vanishes exactly where `xi . theta` is a
/// multiple of `2 pi`. It is scaled by one radical so that every mask lies in
/// the span of mask differences, saving one squaring in [`detrig`].
pub fn half_angle_expr<R: Ring>(kind: Kind, xi: &AngleCount, spec: Specialization, cap: &Cap) -> Result<(RadicalPoly<R>, Atoms<R>)> {
    let mut atoms: Atoms<R> = Atoms::default();
    let fs = factors(&mut atoms, kind, xi, spec);
    let mut v = Complex::one();
    for (f, k) in &fs {
        v = v.mul(&to_complex(f, &atoms).pow(*k, &atoms, cap)?, &atoms);
        cap.check(v.size())?;
    }
    let im = v.im;
    let shift = im.masks().next().unwrap_or(0);
    Ok((im.mul_sqrt(shift, &atoms), atoms))
}

/// Eliminate every radical from `expr`: repeatedly split on one atom `t` as
/// `sqrt(t) L + R` and replace by `t L^2 - R^2`. The atom occurring in the
/// fewest terms goes first.
pub fn detrig<R: Ring>(expr: &RadicalPoly<R>, atoms: &Atoms<R>, cap: &Cap) -> Result<R> {
    let mut cur = expr.clone();
    loop {
        if let Some(p) = cur.as_rational() {
            return Ok(p);
        }
        let mut counts = vec![0usize; atoms.len()];
        for m in cur.masks() {
            for b in bits(m) {
                counts[b] += 1;
            }
        }
        let t = (0..atoms.len()).filter(|&b| counts[b] > 0).min_by_key(|&b| (counts[b], b)).expect("radical present");
        let (l, r) = cur.split(t);
        let l2 = l.mul(&l, atoms).scale(atoms.value(t));
        cap.check(l2.size())?;
        let r2 = r.mul(&r, atoms);
        cur = l2.sub(&r2);
        cap.check(cur.size())?;
    }
}

/// Content, monomial factors and positive linear factors removed.
pub fn strip_positive_factors<R: Ring>(p: &R, spec: Specialization) -> R {
    if p.is_zero() {
        return p.clone();
    }
    let mut q = p.strip_monomials().primitive_part();
    for f in spec.positive_forms() {
        let d: R = f.to_ring();
        while let Some(next) = q.exact_quotient(&d) {
            q = next;
        }
    }
    q.primitive_part()
}

/// A polynomial vanishing wherever `xi . theta = 2 pi` under `spec`, with
/// factors that cannot vanish on the domain removed.
pub fn contour_poly<R: Ring>(kind: Kind, xi: &AngleCount, spec: Specialization, cap: &Cap) -> Result<R> {
    let (expr, atoms) = half_angle_expr::<R>(kind, xi, spec, cap)?;
    let p = detrig(&expr, &atoms, cap)?;
    if p.is_zero() {
        return Err(Error::Domain(format!("{} {} under {} gives an identically satisfied equation", kind.name(), xi, spec.name())));
    }
    Ok(strip_positive_factors(&p, spec))
}
