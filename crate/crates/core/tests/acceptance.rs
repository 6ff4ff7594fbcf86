mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use compack::angles::{Kind, Size};
use compack::certify::write_tie_ledger_jsonl;
use compack::contours::{compute_l, compute_l_with, intercept, write_catalog_jsonl, Catalog, Status};
use compack::gamma_search::{search, GammaQuery};
use compack::known::{agrees_with_shown, FIGURE_ROOTS, KNOWN, NEAR_ORIGIN};
use compack::packing::{build_corona, cycles_of, grow_patch, verify, BBox, CoronaRules, GrowOptions};
use compack::symbolic::{contour_poly, cos_sum_expr, detrig, eliminate, isolate_roots, AlgebraicNumber, Cap, Poly1, Poly2, Ring, Specialization, Var};
use compack::tuples::{enumerate_k, enumerate_k_scoped, enumerate_snec, AngleCount, KScope};
use rug::{Float, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cap() -> Cap {
    Cap::new(Cap::DEFAULT_TERMS, "acceptance")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let got: BTreeSet<[u32; 6]> = enumerate_snec().into_iter().map(|x| x.0).collect();
    let took = t.elapsed();
    let want: BTreeSet<[u32; 6]> = common::TABLE.into_iter().collect();
    let msg = format!("{} tuples, table {} in {}", got.len(), want.len(), secs(took));
    if got == want && took < Duration::from_secs(1) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let n = in_pool(1, || enumerate_k().len());
    let took = t.elapsed();
    let capped = enumerate_k_scoped(KScope::Capped).len();
    let msg = format!("{n} pairs in {} (expected 248395; zeta_5 <= 6 gives {capped})", secs(took));
    if n == 248395 && took < Duration::from_secs(600) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn distinct_with(cat: &Catalog, keep: impl Fn(usize) -> bool) -> usize {
    cat.groups.iter().filter(|g| g.members.iter().any(|&i| keep(i))).count()
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let cat = compute_l_with(&enumerate_k(), 50, Some(&cap())).map_err(err)?;
    let took = t.elapsed();
    let mut ledger = Vec::new();
    write_tie_ledger_jsonl(&mut ledger, &cat.entries).map_err(err)?;
    let tied = String::from_utf8_lossy(&ledger).lines().count();
    let resolved = cat.entries.iter().filter(|e| !e.ties.is_empty() && !e.resolutions.is_empty()).count();
    let numeric = distinct_with(&cat, |i| cat.entries[i].ties.is_empty());
    let capped = |i: usize| KScope::Capped.admits(&cat.entries[i].pair.zeta);
    let capped_found = cat.entries.iter().enumerate().filter(|(i, e)| e.status == Status::Found && capped(*i)).count();
    let s = &cat.summary;
    let msg = format!(
        "{} distinct points (expected 13617) from {} found pairs in {}; tie ledger {tied} pairs, {resolved} resolved, {} still ambiguous; \
         numeric-only {numeric} points (range 13600..=13640); zeta_5 <= 6 gives {capped_found} found pairs, {} points",
        s.distinct_points,
        s.found_pairs,
        secs(took),
        s.ambiguous_pairs,
        distinct_with(&cat, capped),
    );
    if s.distinct_points == 13617 && tied > 0 && resolved == tied {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for k in &KNOWN {
        let res = intercept(&k.pair(), 50).map_err(err)?;
        let (r, s) = res.point.clone().ok_or(format!("{}: no intercept", k.name))?;
        let (dr, ds) = ((r.to_f64() - k.r).abs(), (s.to_f64() - k.s).abs());
        if dr >= 5e-7 || ds >= 5e-7 {
            return Err(format!("{}: (r, s) off by ({dr:e}, {ds:e})", k.name));
        }
        let (er, es) = res.residuals.clone().ok_or("no residuals")?;
        if er.to_f64().abs() >= 1e-30 || es.to_f64().abs() >= 1e-30 {
            return Err(format!("{}: residuals {:e}, {:e}", k.name, er.to_f64(), es.to_f64()));
        }
        let (pr, ps) = (k.r_poly().relative_residual(&r).to_f64(), k.s_poly().relative_residual(&s).to_f64());
        if pr >= 1e-25 || ps >= 1e-25 {
            return Err(format!("{}: polynomial residuals {pr:e}, {ps:e}", k.name));
        }
        let out = search(&GammaQuery::new(r, s, 50).map_err(err)?);
        if !out.contains(&k.xi) {
            return Err(format!("{}: gamma search misses {}", k.name, k.xi));
        }
        notes.push(format!("{} xi {} among {}", k.name, k.xi, out.solutions().len()));
    }
    Ok(notes.join("; "))
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

fn criterion_5() -> Outcome {
    let eta = AngleCount([0, 0, 0, 1, 1, 3]);
    let e = cos_sum_expr::<Poly2>(Kind::Alpha, &eta, Specialization::General, &cap()).map_err(err)?;
    let p = detrig(&e.numerator, &e.atoms, &cap()).map_err(err)?;
    let b = bracket();
    let msg = format!("detrig polynomial of total degree {} with {} terms", p.total_degree(), p.term_count());
    match p.div_exact(&(&b * &b)) {
        Some(_) => Ok(msg + ", squared bracket divides it"),
        None => Err(msg + ", squared bracket does not divide it"),
    }
}

fn criterion_6() -> Outcome {
    let p: Poly2 = contour_poly(Kind::Alpha, &NEAR_ORIGIN.eta, Specialization::General, &cap()).map_err(err)?;
    let q: Poly2 = contour_poly(Kind::Beta, &NEAR_ORIGIN.zeta, Specialization::General, &cap()).map_err(err)?;
    let in_r = eliminate(&p, &q, Var::S).map_err(err)?;
    let in_s = eliminate(&p, &q, Var::R).map_err(err)?;
    if !NEAR_ORIGIN.r_poly().divides(&in_r) || !NEAR_ORIGIN.s_poly().divides(&in_s) {
        return Err(format!("resultants of degree {} and {} are not divisible", in_r.deg(), in_s.deg()));
    }
    let mut got = Vec::new();
    for (poly, shown) in [(NEAR_ORIGIN.r_poly(), NEAR_ORIGIN.r), (NEAR_ORIGIN.s_poly(), NEAR_ORIGIN.s)] {
        let x = AlgebraicNumber::near(&poly, &common::f(shown.parse().unwrap()), 40).map_err(err)?.to_float(256);
        if !agrees_with_shown(shown, &x) {
            return Err(format!("root {} does not match {shown}", x.to_string_radix(10, Some(12))));
        }
        got.push(x.to_string_radix(10, Some(12)));
    }
    Ok(format!("degrees {} and {} divisible; roots {} and {}", in_r.deg(), in_s.deg(), got[0], got[1]))
}

fn criterion_7() -> Outcome {
    let mut got = Vec::new();
    for (c, want) in FIGURE_ROOTS {
        let roots = isolate_roots(&Poly1::from_i64(c), &Rational::from(0), &Rational::from(1));
        let vals: Vec<f64> = roots.iter().map(|x| x.to_float(128).to_f64()).collect();
        if vals.len() != 1 || (vals[0] - want).abs() >= 5e-7 {
            return Err(format!("roots {vals:?}, expected {want}"));
        }
        got.push(format!("{:.6}", vals[0]));
    }
    Ok(format!("roots {}", got.join(", ")))
}

fn grown_patches() -> Outcome {
    let mut notes = Vec::new();
    for k in &KNOWN {
        let (r, s) = intercept(&k.pair(), 50).map_err(err)?.point.ok_or("no intercept")?;
        let rules = CoronaRules::discover(&r, &s, 50).map_err(err)?;
        let opts = GrowOptions::new(50).map_err(err)?;
        let cyc = cycles_of(&k.eta).map_err(err)?.remove(0);
        let seed = build_corona(Size::Small, &cyc, &r, &s, &opts.tangency_tol).map_err(err)?;
        let out = grow_patch(&seed.packing, &BBox::square(3.0), &rules, &opts).map_err(err)?;
        let rep = verify(&out.packing, &Float::with_val(r.prec(), 1e-9));
        if !rep.valid() {
            return Err(format!("{}: {} overlaps", k.name, rep.violations.len()));
        }
        let state = match &out.stall {
            None if rep.all_compact() => format!("{} interior compact", rep.interior.len()),
            None => return Err(format!("{}: interior circle not compact", k.name)),
            Some(st) => format!("stalled after {} steps ({})", st.steps, st.reason),
        };
        notes.push(format!("{} {} circles, {state}", k.name, out.packing.len()));
    }
    Ok(notes.join("; "))
}

fn determinism() -> Outcome {
    let pairs: Vec<_> = enumerate_k().into_iter().step_by(53).collect();
    let run = |threads| {
        in_pool(threads, || {
            let cat = compute_l(&pairs, 50).unwrap();
            let mut buf = Vec::new();
            write_catalog_jsonl(&mut buf, &cat).unwrap();
            buf
        })
    };
    if run(1) != run(4) {
        return Err("catalog differs between 1 and 4 workers".into());
    }
    let (r, s) = intercept(&KNOWN[0].pair(), 50).map_err(err)?.point.ok_or("no intercept")?;
    let q = GammaQuery::new(r, s, 50).map_err(err)?;
    if in_pool(1, || search(&q)) != in_pool(4, || search(&q)) {
        return Err("gamma search differs between 1 and 4 workers".into());
    }
    Ok(format!("{} pairs and a gamma search agree under 1 and 4 workers", pairs.len()))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let checks: [(&str, &dyn Fn() -> Outcome); 6] = [
        ("eulerian", &|| common::eulerian_check().map(|n| format!("{n} tuples"))),
        ("ray derivative", &|| common::ray_check(1000).map(|()| "1000 samples".into())),
        ("r/10 bounds", &|| common::edge_bound_check().map(|()| "200 points".into())),
        ("corona closure", &|| common::closure_check().map(|n| format!("{n} closing coronas"))),
        ("grown patches", &grown_patches),
        ("determinism", &determinism),
    ];
    let mut ok = true;
    for (name, check) in checks {
        match check() {
            Ok(m) => parts.push(format!("{name} ok: {m}")),
            Err(m) => {
                ok = false;
                parts.push(format!("{name} FAILED: {m}"));
            }
        }
    }
    let msg = parts.join(" | ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("small-circle angle-counts", criterion_1),
        ("candidate pair count", criterion_2),
        ("intercept catalog", criterion_3),
        ("known examples", criterion_4),
        ("detrig divisibility", criterion_5),
        ("near-origin resultants", criterion_6),
        ("figure roots", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let (mark, msg) = match out {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {}: {mark} {name} [{}]: {msg}", i + 1, secs(t.elapsed()));
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
