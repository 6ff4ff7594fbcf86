mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use common::{f, two_pi, BITS};
use compack::angles::{Kind, RadiiPair, Size};
use compack::contours::{compute_l, eval_f, intercept, phi_eval, psi_eval, read_catalog_jsonl, vertical_abscissa, write_catalog_jsonl};
use compack::gamma_search::{search, GammaQuery};
use compack::known::KNOWN;
use compack::packing::{build_corona, cycles_of, verify, Packing};
use compack::symbolic::{contour_poly, Cap, Poly2, Specialization};
use compack::tuples::{encode_cycle, enumerate_k, enumerate_snec, AngleCount};
use proptest::prelude::*;
use rug::Float;

#[test]
fn eulerian_matches_brute_force() {
    common::eulerian_check().unwrap();
}

#[test]
fn small_tuples_exceed_full_turn_near_the_edge() {
    common::edge_bound_check().unwrap();
}

fn etas() -> &'static [AngleCount] {
    static E: OnceLock<Vec<AngleCount>> = OnceLock::new();
    E.get_or_init(enumerate_snec)
}

fn zetas() -> &'static [AngleCount] {
    static Z: OnceLock<Vec<AngleCount>> = OnceLock::new();
    Z.get_or_init(common::small_zetas)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn ray_derivative_matches_differences(
        alpha in any::<bool>(),
        i in 0..1000usize,
        m in 0.02f64..0.98,
        r in 0.02f64..0.98,
    ) {
        let (kind, xi) = if alpha { (Kind::Alpha, etas()[i % etas().len()]) } else { (Kind::Beta, zetas()[i % zetas().len()]) };
        let res = common::ray_case(kind, &xi, m, r);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}

fn contour_polys(kind: Kind) -> &'static BTreeMap<AngleCount, Poly2> {
    static A: OnceLock<BTreeMap<AngleCount, Poly2>> = OnceLock::new();
    static B: OnceLock<BTreeMap<AngleCount, Poly2>> = OnceLock::new();
    let build = |pool: &[AngleCount]| {
        let cap = Cap::new(Cap::DEFAULT_TERMS, "test");
        pool.iter().map(|t| (*t, contour_poly(kind, t, Specialization::General, &cap).unwrap())).collect()
    };
    match kind {
        Kind::Alpha => A.get_or_init(|| build(etas())),
        _ => B.get_or_init(|| build(&zetas().iter().copied().filter(|z| z.total() <= 10).collect::<Vec<_>>())),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn contour_points_are_polynomial_roots(alpha in any::<bool>(), i in 0..1000usize, r in 0.02f64..0.98) {
        let kind = if alpha { Kind::Alpha } else { Kind::Beta };
        let polys = contour_polys(kind);
        let (xi, p) = polys.iter().nth(i % polys.len()).unwrap();
        let vertical = !alpha && xi.0[2] == 0 && xi.0[4] == 0 && xi.0[5] == 0;
        let (x, s) = if vertical {
            let x = vertical_abscissa(xi, 60).unwrap();
            let s = Float::with_val(BITS, &x * r);
            (x, Some(s))
        } else if alpha {
            (f(r), phi_eval(xi, &f(r), 60).unwrap())
        } else {
            (f(r), psi_eval(xi, &f(r), 60).unwrap())
        };
        if let Some(s) = s {
            prop_assert!(p.relative_residual(&x, &s).to_f64() < 1e-40, "{xi} at r = {r}");
        }
    }

    #[test]
    fn random_coronas_close_iff_identity(
        center in 0..3usize,
        cycle in prop::collection::vec(0..3usize, 3..9),
        r in 0.05f64..0.95,
        m in 0.05f64..0.95,
    ) {
        let size = Size::ALL[center];
        let cycle: Vec<Size> = cycle.into_iter().map(|i| Size::ALL[i]).collect();
        let (r, s) = (f(r), f(r * m));
        let tol = f(1e-30);
        let c = build_corona(size, &cycle, &r, &s, &tol).unwrap();
        let turn = eval_f(Kind::for_center(size), &encode_cycle(&cycle), &RadiiPair::new(r, s).unwrap());
        prop_assert_eq!(c.closes, (turn - two_pi()).abs() < 1e-30);
    }
}

#[test]
fn corona_closure_is_the_identity_at_known_points() {
    common::closure_check().unwrap();
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn catalogs_do_not_depend_on_workers() {
    let pairs: Vec<_> = enumerate_k().into_iter().step_by(97).collect();
    let text = |threads| {
        in_pool(threads, || {
            let cat = compute_l(&pairs, 40).unwrap();
            let mut buf = Vec::new();
            write_catalog_jsonl(&mut buf, &cat).unwrap();
            (String::from_utf8(buf).unwrap(), cat.summary)
        })
    };
    let (a, sa) = text(1);
    let (b, sb) = text(4);
    assert_eq!(sa, sb);
    assert_eq!(a, b);
    assert!(sa.found_pairs > 0);

    let k = &KNOWN[1];
    let (r, s) = intercept(&k.pair(), 50).unwrap().point.unwrap();
    let q = GammaQuery::new(r, s, 50).unwrap();
    assert_eq!(in_pool(1, || search(&q)), in_pool(3, || search(&q)));
}

#[test]
fn catalog_round_trip() {
    let pairs: Vec<_> = KNOWN.iter().map(|k| k.pair()).chain(enumerate_k().into_iter().step_by(5003)).collect();
    let cat = compute_l(&pairs, 40).unwrap();
    let mut buf = Vec::new();
    write_catalog_jsonl(&mut buf, &cat).unwrap();
    let back = read_catalog_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
    let want: Vec<_> = cat.entries.iter().map(|e| e.record()).collect();
    assert_eq!(back, want);
}

fn example_corona() -> &'static Packing {
    static P: OnceLock<Packing> = OnceLock::new();
    P.get_or_init(|| {
        let k = &KNOWN[0];
        let (r, s) = intercept(&k.pair(), 50).unwrap().point.unwrap();
        let tol = Float::with_val(r.prec(), 1e-25);
        let cyc = &cycles_of(&k.zeta).unwrap()[0];
        build_corona(Size::Mid, cyc, &r, &s, &tol).unwrap().packing
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn verification_is_rigid_motion_invariant(angle in -7.0f64..7.0, dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
        let p = example_corona();
        let tol = Float::with_val(p.prec(), 1e-9);
        let q = p.rotated(&Float::with_val(p.prec(), angle)).translated(&Float::with_val(p.prec(), dx), &Float::with_val(p.prec(), dy));
        let (a, b) = (verify(p, &tol), verify(&q, &tol));
        prop_assert_eq!(a.violations.len(), b.violations.len());
        prop_assert_eq!(a.tangencies, b.tangencies);
        prop_assert_eq!(a.interior, b.interior);
    }
}
