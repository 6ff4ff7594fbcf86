use compack::angles::Size;
use compack::contours::intercept;
use compack::known::KNOWN;
use compack::packing::{build_corona, cycles_of, grow_patch, render_svg, verify, BBox, CoronaRules, GrowOptions, Packing, SvgStyle};
use compack::tuples::AngleCount;
use rug::Float;

fn hex_patch(half: f64) -> Packing {
    let r = Float::with_val(200, 0.5);
    let s = Float::with_val(200, 0.25);
    let tol = Float::with_val(200, 1e-30);
    let seed = build_corona(Size::Large, &[Size::Large; 6], &r, &s, &tol).unwrap();
    assert!(seed.closes);
    assert_eq!(seed.packing.len(), 7);
    let rules = CoronaRules { small: vec![], mid: vec![], large: vec![AngleCount([6, 0, 0, 0, 0, 0])] };
    let out = grow_patch(&seed.packing, &BBox::square(half), &rules, &GrowOptions::new(50).unwrap()).unwrap();
    assert!(out.stall.is_none());
    out.packing
}

#[test]
fn hexagonal_growth() {
    let p = hex_patch(4.0);
    let rep = verify(&p, &Float::with_val(200, 1e-9));
    assert!(rep.valid());
    assert!(!rep.interior.is_empty());
    assert!(rep.all_compact());
    assert!(rep.worst_residual < 1e-20);
}

#[test]
fn five_circles_do_not_close() {
    let r = Float::with_val(200, 0.5);
    let s = Float::with_val(200, 0.25);
    let tol = Float::with_val(200, 1e-30);
    let c = build_corona(Size::Large, &[Size::Large; 5], &r, &s, &tol).unwrap();
    assert!(!c.closes);
    assert!(c.residual > 0.1);
}

#[test]
fn overlap_is_reported() {
    let text = r#"{"radii":{"r":"0.5","s":"0.25"},"circles":[
        {"x":"0","y":"0","label":"large"},{"x":"1.9","y":"0","label":"large"},{"x":"0","y":"1.5","label":"mid"}]}"#;
    let p = Packing::from_json(text, 30).unwrap();
    let rep = verify(&p, &Float::with_val(p.prec(), 1e-9));
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.tangencies, 1);
}

#[test]
fn json_round_trip() {
    let p = hex_patch(2.0);
    let back = Packing::from_json(&p.to_json(40).unwrap(), 40).unwrap();
    assert_eq!(back.len(), p.len());
    assert_eq!(back.to_json(40).unwrap(), p.to_json(40).unwrap());
    assert!(Packing::from_json("{\"r\":\"0.5\"}", 40).is_err());
}

#[test]
fn svg_has_one_element_per_circle() {
    let p = hex_patch(2.0);
    let svg = render_svg(&p, &SvgStyle { tangency: true, ..SvgStyle::default() });
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), p.len());
    assert!(svg.contains("<line"));
}

#[test]
fn first_example_grows_compact() {
    let k = &KNOWN[0];
    let (r, s) = intercept(&k.pair(), 50).unwrap().point.unwrap();
    let rules = CoronaRules::discover(&r, &s, 50).unwrap();
    assert!(rules.for_size(Size::Small).contains(&k.eta));
    assert!(rules.for_size(Size::Mid).contains(&k.zeta));
    assert!(rules.for_size(Size::Large).contains(&k.xi));
    let opts = GrowOptions::new(50).unwrap();
    let cyc = &cycles_of(&k.eta).unwrap()[0];
    let seed = build_corona(Size::Small, cyc, &r, &s, &opts.tangency_tol).unwrap();
    assert!(seed.closes);
    let out = grow_patch(&seed.packing, &BBox::square(2.5), &rules, &opts).unwrap();
    assert!(out.stall.is_none(), "{:?}", out.stall);
    let rep = verify(&out.packing, &Float::with_val(r.prec(), 1e-9));
    assert!(rep.valid());
    assert!(rep.all_compact());
}
