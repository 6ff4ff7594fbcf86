mod common;

use std::collections::BTreeSet;

use compack::angles::Kind;
use compack::certify::certify;
use compack::contours::{intercept, Status};
use compack::gamma_search::{search, GammaQuery};
use compack::known::{agrees_with_shown, FIGURE_ROOTS, KNOWN, NEAR_ORIGIN};
use compack::symbolic::{contour_poly, cos_sum_expr, detrig, eliminate, isolate_roots, AlgebraicNumber, Cap, Poly1, Poly2, Specialization, Var};
use compack::tuples::{enumerate_snec, AngleCount};
use rug::{Float, Rational};

fn cap() -> Cap {
    Cap::new(Cap::DEFAULT_TERMS, "test")
}

fn bracket() -> Poly2 {
    Poly2::from_terms(&[
        (6, 1, 1),
        (6, 0, -4),
        (5, 2, 12),
        (5, 1, -26),
        (5, 0, -4),
        (4, 3, 54),
        (4, 2, -40),
        (4, 1, -7),
        (3, 4, 108),
        (3, 3, 28),
        (3, 2, 12),
        (2, 5, 81),
        (2, 4, 60),
        (2, 3, 14),
        (1, 5, -18),
        (1, 4, -16),
        (0, 5, 1),
    ])
}

#[test]
fn small_tuples_match_table() {
    let got: BTreeSet<[u32; 6]> = enumerate_snec().into_iter().map(|t| t.0).collect();
    let want: BTreeSet<[u32; 6]> = common::TABLE.into_iter().collect();
    assert_eq!(want.len(), 55);
    assert_eq!(got, want);
}

#[test]
fn detrig_divisible_by_squared_bracket() {
    let eta = AngleCount([0, 0, 0, 1, 1, 3]);
    let e = cos_sum_expr::<Poly2>(Kind::Alpha, &eta, Specialization::General, &cap()).unwrap();
    let p = detrig(&e.numerator, &e.atoms, &cap()).unwrap();
    let b = bracket();
    assert!(p.div_exact(&(&b * &b)).is_some());
}

#[test]
fn contour_poly_is_bracket() {
    let eta = AngleCount([0, 0, 0, 1, 1, 3]);
    let c: Poly2 = contour_poly(Kind::Alpha, &eta, Specialization::General, &cap()).unwrap();
    let b = bracket();
    assert!(c == b || c == -&b);
}

fn eliminations(eta: AngleCount, zeta: AngleCount) -> (Poly1, Poly1) {
    let p: Poly2 = contour_poly(Kind::Alpha, &eta, Specialization::General, &cap()).unwrap();
    let q: Poly2 = contour_poly(Kind::Beta, &zeta, Specialization::General, &cap()).unwrap();
    (eliminate(&p, &q, Var::S).unwrap(), eliminate(&p, &q, Var::R).unwrap())
}

#[test]
fn first_example_resultants() {
    let k = &KNOWN[0];
    let (in_r, in_s) = eliminations(k.eta, k.zeta);
    assert!(k.r_poly().divides(&in_r));
    assert!(k.s_poly().divides(&in_s));
}

fn near(p: &Poly1, v: f64) -> Float {
    AlgebraicNumber::near(p, &Float::with_val(256, v), 40).unwrap().to_float(256)
}

#[test]
fn near_origin_resultants_and_roots() {
    let (in_r, in_s) = eliminations(NEAR_ORIGIN.eta, NEAR_ORIGIN.zeta);
    assert!(NEAR_ORIGIN.r_poly().divides(&in_r));
    assert!(NEAR_ORIGIN.s_poly().divides(&in_s));
    for (poly, text) in [(NEAR_ORIGIN.r_poly(), NEAR_ORIGIN.r), (NEAR_ORIGIN.s_poly(), NEAR_ORIGIN.s)] {
        let got = near(&poly, text.parse().unwrap());
        assert!(agrees_with_shown(text, &got), "{got} vs {text}");
    }
}

#[test]
fn near_origin_intercept_agrees() {
    let res = intercept(&NEAR_ORIGIN.pair(), 50).unwrap();
    assert_eq!(res.status, Status::Found);
    let (r, s) = res.point.unwrap();
    for (x, text) in [(r, NEAR_ORIGIN.r), (s, NEAR_ORIGIN.s)] {
        assert!(agrees_with_shown(text, &x), "{x} vs {text}");
    }
}

#[test]
fn figure_roots() {
    for (c, want) in FIGURE_ROOTS {
        let roots = isolate_roots(&Poly1::from_i64(c), &Rational::from(0), &Rational::from(1));
        assert_eq!(roots.len(), 1);
        let mut x = roots[0].clone();
        x.refine(64);
        assert!((x.to_float(128).to_f64() - want).abs() < 5e-7);
    }
}

#[test]
fn known_examples() {
    for k in &KNOWN {
        let res = intercept(&k.pair(), 50).unwrap();
        assert_eq!(res.status, Status::Found, "{}", k.name);
        let (r, s) = res.point.clone().unwrap();
        assert!((r.to_f64() - k.r).abs() < 5e-7, "{} r {}", k.name, r.to_f64());
        assert!((s.to_f64() - k.s).abs() < 5e-7, "{} s {}", k.name, s.to_f64());
        let (er, es) = res.residuals.clone().unwrap();
        assert!(er.to_f64().abs() < 1e-30 && es.to_f64().abs() < 1e-30, "{}", k.name);
        assert!(k.r_poly().relative_residual(&r).to_f64() < 1e-25, "{}", k.name);
        assert!(k.s_poly().relative_residual(&s).to_f64() < 1e-25, "{}", k.name);
        let q = GammaQuery::new(r, s, 50).unwrap();
        assert!(search(&q).contains(&k.xi), "{}", k.name);
    }
}

#[test]
fn certificates_check() {
    for k in &KNOWN[..2] {
        let (r, s) = intercept(&k.pair(), 50).unwrap().point.unwrap();
        let c = certify(&k.pair(), &r, &s, 50, &cap()).unwrap();
        c.check().unwrap();
        assert!((c.r_decimal().parse::<f64>().unwrap() - k.r).abs() < 5e-7);
        let mut bad = c.clone();
        bad.r.approx = bad.s.approx.clone();
        assert!(bad.check().is_err());
    }
}

#[test]
fn example_four_root() {
    let k = &KNOWN[3];
    let roots = isolate_roots(&k.r_poly(), &Rational::from(0), &Rational::from(1));
    assert!(roots.iter().any(|x| {
        let mut x = x.clone();
        x.refine(64);
        (x.to_float(128).to_f64() - 0.948799).abs() < 5e-7
    }));
}
