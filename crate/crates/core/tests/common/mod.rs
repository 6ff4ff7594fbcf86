#![allow(dead_code)]

/// The published list of small-circle angle-counts, row by row.
pub const TABLE: [[u32; 6]; 55] = [
    [0, 0, 0, 1, 1, 3],
    [0, 0, 1, 2, 2, 0],
    [0, 1, 2, 0, 0, 2],
    [1, 0, 0, 0, 4, 0],
    [1, 2, 0, 2, 0, 0],
    [0, 0, 0, 1, 3, 1],
    [0, 0, 2, 1, 1, 1],
    [0, 2, 0, 0, 0, 2],
    [1, 0, 0, 1, 1, 1],
    [2, 0, 0, 0, 2, 0],
    [0, 0, 0, 2, 0, 2],
    [0, 1, 0, 0, 0, 4],
    [0, 2, 0, 1, 1, 1],
    [1, 0, 0, 2, 0, 0],
    [2, 0, 0, 1, 1, 1],
    [0, 0, 0, 2, 2, 0],
    [0, 1, 0, 0, 2, 2],
    [0, 2, 0, 2, 0, 0],
    [1, 0, 0, 2, 0, 2],
    [2, 0, 0, 2, 0, 0],
    [0, 0, 0, 3, 1, 1],
    [0, 1, 0, 1, 1, 1],
    [0, 2, 1, 0, 0, 2],
    [1, 0, 0, 2, 2, 0],
    [2, 0, 1, 0, 2, 0],
    [0, 0, 0, 4, 0, 0],
    [0, 1, 0, 2, 0, 0],
    [0, 3, 0, 0, 0, 0],
    [1, 0, 0, 4, 0, 0],
    [2, 1, 0, 2, 0, 0],
    [0, 0, 1, 0, 0, 4],
    [0, 1, 0, 2, 0, 2],
    [0, 3, 0, 0, 0, 2],
    [1, 0, 1, 0, 2, 0],
    [3, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 2, 2],
    [0, 1, 0, 2, 2, 0],
    [0, 3, 0, 2, 0, 0],
    [1, 0, 1, 1, 1, 1],
    [3, 0, 0, 0, 2, 0],
    [0, 0, 1, 0, 4, 0],
    [0, 1, 0, 4, 0, 0],
    [0, 4, 0, 0, 0, 0],
    [1, 0, 2, 0, 2, 0],
    [3, 0, 0, 2, 0, 0],
    [0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 2],
    [0, 5, 0, 0, 0, 0],
    [1, 1, 0, 1, 1, 1],
    [4, 0, 0, 0, 0, 0],
    [0, 0, 1, 2, 0, 2],
    [0, 1, 1, 1, 1, 1],
    [1, 0, 0, 0, 2, 2],
    [1, 1, 0, 2, 0, 0],
    [5, 0, 0, 0, 0, 0],
];

use std::collections::BTreeSet;

use compack::angles::{angle_vector, ray_derivative, Kind, RadiiPair, Size};
use compack::contours::{eval_f, intercept};
use compack::known::KNOWN;
use compack::packing::{build_corona, cycles_of};
use compack::tuples::{encode_cycle, enumerate_rnec, enumerate_snec, seq_realizable, AngleCount};
use compack::Precision;
use proptest::prelude::RngCore;
use proptest::test_runner::{RngAlgorithm, TestRng};
use rug::Float;

pub const BITS: u32 = 256;

pub fn f(v: f64) -> Float {
    Float::with_val(BITS, v)
}

pub fn two_pi() -> Float {
    Precision::new(70).unwrap().two_pi()
}

/// Every tuple with coordinate sum at most `max`.
pub fn all_tuples(max: u32) -> Vec<AngleCount> {
    let mut out = Vec::new();
    let mut x = [0u32; 6];
    loop {
        if x.iter().sum::<u32>() <= max {
            out.push(AngleCount(x));
        }
        let mut i = 0;
        while i < 6 {
            x[i] += 1;
            if x.iter().sum::<u32>() <= max {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == 6 {
            return out;
        }
    }
}

/// Compare the Eulerian test with the transition counts of every cyclic word of length at most 7.
pub fn eulerian_check() -> Result<usize, String> {
    let mut seen = BTreeSet::new();
    for n in 1..=7u32 {
        for code in 0..3usize.pow(n) {
            let mut c = code;
            let cycle: Vec<Size> = (0..n)
                .map(|_| {
                    let v = Size::ALL[c % 3];
                    c /= 3;
                    v
                })
                .collect();
            seen.insert(encode_cycle(&cycle));
        }
    }
    let all = all_tuples(7);
    for xi in &all {
        if seq_realizable(xi) != seen.contains(xi) {
            return Err(format!("disagreement at {xi}"));
        }
    }
    Ok(all.len())
}

/// `f_eta(r, r/10) > 2 pi` for every small tuple and `35 beta_3(r, r/10) > 2 pi`, on 200 values of `r`.
pub fn edge_bound_check() -> Result<(), String> {
    let tau = two_pi();
    let etas = enumerate_snec();
    for i in 1..=200 {
        let r = f(i as f64 / 201.0);
        let s = Float::with_val(BITS, &r / 10u32);
        let p = RadiiPair::new(r, s).unwrap();
        for eta in &etas {
            if eval_f(Kind::Alpha, eta, &p) <= tau {
                return Err(format!("{eta} at r = {}", p.r().to_f64()));
            }
        }
        if Float::with_val(BITS, &angle_vector(Kind::Beta, &p)[2] * 35u32) <= tau {
            return Err(format!("beta bound at r = {}", p.r().to_f64()));
        }
    }
    Ok(())
}

pub fn ray_case(kind: Kind, xi: &AngleCount, m: f64, r: f64) -> Result<(), String> {
    let m = f(m);
    let g = |r: &Float| eval_f(kind, xi, &RadiiPair::new(r.clone(), Float::with_val(BITS, r * &m)).unwrap());
    let h = f(1e-25);
    let hi = Float::with_val(BITS, &f(r) + &h);
    let lo = Float::with_val(BITS, &f(r) - &h);
    let fd = (g(&hi) - g(&lo)) / Float::with_val(BITS, &h * 2u32);
    let exact = ray_derivative(kind, xi, &m, &f(r)).map_err(|e| e.to_string())?;
    let scale = exact.to_f64().abs().max(1e-12);
    let rel = ((fd.to_f64() - exact.to_f64()) / scale).abs();
    if rel < 1e-6 {
        Ok(())
    } else {
        Err(format!("{} {xi} at m = {}, r = {r}: relative error {rel:e}", kind.name(), m.to_f64()))
    }
}

/// Beta-side tuples small enough for quick checks.
pub fn small_zetas() -> Vec<AngleCount> {
    enumerate_rnec().into_iter().filter(|z| z.total() <= 20).collect()
}

/// Closed-form ray derivatives against central differences at seeded random samples.
pub fn ray_check(samples: usize) -> Result<(), String> {
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut unit = || 0.02 + 0.96 * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let etas = enumerate_snec();
    let zetas = small_zetas();
    for i in 0..samples {
        let (m, r) = (unit(), unit());
        if i % 2 == 0 {
            ray_case(Kind::Alpha, &etas[i / 2 % etas.len()], m, r)?;
        } else {
            ray_case(Kind::Beta, &zetas[i / 2 % zetas.len()], m, r)?;
        }
    }
    Ok(())
}

/// At each known point, a corona closes exactly when its angle-count sums to a full turn.
pub fn closure_check() -> Result<usize, String> {
    let tol = f(1e-30);
    let mut closing = 0;
    for k in &KNOWN {
        let (r, s) = intercept(&k.pair(), 60).map_err(|e| e.to_string())?.point.ok_or("no intercept")?;
        let p = RadiiPair::new(r.clone(), s.clone()).unwrap();
        for size in Size::ALL {
            for xi in all_tuples(9) {
                if !seq_realizable(&xi) {
                    continue;
                }
                let identity = (eval_f(Kind::for_center(size), &xi, &p) - two_pi()).abs() < 1e-30;
                for cyc in cycles_of(&xi).map_err(|e| e.to_string())? {
                    let c = build_corona(size, &cyc, &r, &s, &tol).map_err(|e| e.to_string())?;
                    if c.closes != identity {
                        return Err(format!("{} {size:?} {xi}: closes {} identity {identity}", k.name, c.closes));
                    }
                    closing += usize::from(identity);
                }
            }
        }
    }
    if closing < 10 {
        return Err(format!("only {closing} closing coronas"));
    }
    Ok(closing)
}
