//! Command-line front end. All file and terminal I/O of the crate happens here.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::Serialize;
use serde_json::{json, Value};

use crate::angles::{Kind, Size};
use crate::certify::{certify, write_tie_ledger_jsonl};
use crate::contours::{compute_l_with, intercept, profile, write_catalog_csv, write_catalog_jsonl, write_points_jsonl, Catalog, Status};
use crate::error::{Error, Result};
use crate::gamma_search::{search, GammaQuery, SearchOutcome, DEFAULT_BUDGET};
use crate::known::{agrees_with_shown, FIGURE_ROOTS, KNOWN, NEAR_ORIGIN};
use crate::packing::{build_corona, cycles_of, grow_patch, render_svg, verify, BBox, CoronaRules, GrowOptions, Packing, SvgStyle};
use crate::precision::{to_decimal, Precision};
use crate::symbolic::{contour_poly, eliminate, isolate_roots, Cap, Poly1, Poly2, Specialization, Var};
use crate::tuples::{
    enumerate_k_scoped, enumerate_snec, read_pairs_jsonl, write_pairs_csv, write_pairs_jsonl, write_tuples_csv, write_tuples_jsonl, AngleCount, CandidatePair,
    KScope,
};

#[derive(Parser, Debug)]
#[command(name = "compack", version, about = "Radii of compact 3-packings of the plane")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each has a `COMPACK_` environment override.
#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Significant decimal digits (at least 30).
    #[arg(long, global = true, env = "COMPACK_DIGITS", default_value_t = 50)]
    pub digits: u32,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "COMPACK_JOBS")]
    pub jobs: Option<usize>,
    /// Output directory for artifacts.
    #[arg(long, global = true, env = "COMPACK_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, env = "COMPACK_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Node budget of the gamma search.
    #[arg(long, global = true, env = "COMPACK_BUDGET_NODES", default_value_t = DEFAULT_BUDGET)]
    pub budget_nodes: u64,
    /// Term cap of symbolic expansions.
    #[arg(long, global = true, env = "COMPACK_TERM_CAP", default_value_t = Cap::DEFAULT_TERMS)]
    pub term_cap: usize,
    /// Numeric tolerance as a decimal, e.g. `1e-20`; the default depends on the command.
    #[arg(long, global = true, env = "COMPACK_TOLERANCE")]
    pub tolerance: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "COMPACK_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// Validated run settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub digits: u32,
    pub jobs: usize,
    pub out: PathBuf,
    pub format: Format,
    pub budget_nodes: u64,
    pub term_cap: usize,
    pub tolerance: Option<String>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<RunConfig> {
        if a.digits < 30 {
            return Err(Error::Usage(format!("--digits must be at least 30, got {}", a.digits)));
        }
        let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        Precision::new(a.digits)?;
        Ok(RunConfig {
            digits: a.digits,
            jobs,
            out: a.out.clone(),
            format: a.format,
            budget_nodes: a.budget_nodes,
            term_cap: a.term_cap,
            tolerance: a.tolerance.clone(),
            seed: a.seed,
        })
    }

    fn prec(&self) -> Precision {
        Precision::new(self.digits).expect("validated")
    }

    fn tolerance_or(&self, default: Float) -> Result<Float> {
        match &self.tolerance {
            Some(t) => {
                let v = self.prec().parse(t)?;
                if v.is_nan() || v <= 0u32 {
                    return Err(Error::Usage(format!("--tolerance must be positive, got {t}")));
                }
                Ok(v)
            }
            None => Ok(default),
        }
    }

    fn cap(&self, label: &str) -> Cap {
        Cap::new(self.term_cap, label)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn ext(&self) -> &'static str {
        match self.format {
            Format::Json => "jsonl",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the small-circle angle-counts.
    EnumerateS,
    /// List the candidate pairs.
    EnumerateK {
        #[arg(long, default_value = "full")]
        scope: String,
    },
    /// Solve for contour intercepts of candidate pairs.
    Intercepts {
        /// `k` for every candidate pair, `examples` for the five known packings, or a JSON-lines file of pairs.
        #[arg(long, default_value = "k")]
        pairs: String,
        #[arg(long, default_value = "full")]
        scope: String,
        /// Decide numerically tied pairs exactly.
        #[arg(long)]
        tie_break: bool,
    },
    /// Boundary data of one contour.
    Profile {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        tuple: AngleCount,
    },
    /// Contour polynomial of `xi . tau = 2 pi`.
    Detrig {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        tuple: AngleCount,
        /// general, diagonal, at-one, zero-s or origin.
        #[arg(long, default_value = "general")]
        spec: String,
    },
    /// Resultant of the two contour polynomials of a pair.
    Eliminate {
        #[arg(long)]
        eta: AngleCount,
        #[arg(long)]
        zeta: AngleCount,
        /// Variable to eliminate.
        #[arg(long, default_value = "s")]
        var: String,
    },
    /// Exact certificate of an intercept.
    Certify {
        #[arg(long)]
        eta: AngleCount,
        #[arg(long)]
        zeta: AngleCount,
    },
    /// Large-circle angle-counts at a point.
    GammaSearch {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Build the coronas of one angle-count.
    Corona {
        #[arg(long)]
        center: String,
        #[arg(long)]
        tuple: AngleCount,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Grow a patch from a corona.
    Grow {
        #[command(flatten)]
        point: PointArgs,
        /// Half side of the square region around the seed.
        #[arg(long, default_value_t = 3.0)]
        half: f64,
        /// Size of the seed's center circle.
        #[arg(long, default_value = "small")]
        seed_size: String,
        /// Placement attempts before giving up.
        #[arg(long, default_value_t = 200_000)]
        max_steps: usize,
    },
    /// Check a packing file for overlaps and compactness.
    Verify {
        #[arg(long)]
        packing: PathBuf,
    },
    /// Render a packing file as SVG.
    Render {
        #[arg(long)]
        packing: PathBuf,
        /// Pixels per unit length.
        #[arg(long, default_value_t = 100.0)]
        scale: f64,
        /// Draw the tangency graph.
        #[arg(long)]
        tangency: bool,
    },
    /// Run the whole pipeline and print a summary table.
    Reproduce {
        /// Skip the full intercept catalog.
        #[arg(long)]
        skip_l: bool,
    },
}

/// A point of the triangle: a known example, a pair whose intercept is used, or explicit radii.
#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    /// `example-1` .. `example-5`.
    #[arg(long, conflicts_with_all = ["eta", "r"])]
    pub example: Option<String>,
    /// Small-circle angle-count of a pair, e.g. `0,0,0,1,1,3`.
    #[arg(long, requires = "zeta", conflicts_with = "r")]
    pub eta: Option<AngleCount>,
    /// Mid-circle angle-count of a pair.
    #[arg(long, requires = "eta")]
    pub zeta: Option<AngleCount>,
    /// Mid radius as a decimal.
    #[arg(long, requires = "s")]
    pub r: Option<String>,
    /// Small radius as a decimal.
    #[arg(long, requires = "r")]
    pub s: Option<String>,
}

fn intercept_point(pair: &CandidatePair, digits: u32) -> Result<(Float, Float)> {
    let res = intercept(pair, digits)?;
    match (res.status, res.point) {
        (Status::Found, Some(p)) => Ok(p),
        (st, _) => Err(Error::Domain(format!("({}, {}) has no intercept (status {})", pair.eta, pair.zeta, st.name()))),
    }
}

fn known_pair(name: &str) -> Result<CandidatePair> {
    KNOWN.iter().find(|k| k.name == name).map(|k| k.pair()).ok_or_else(|| Error::Usage(format!("unknown example {name:?}; expected example-1 .. example-5")))
}

impl PointArgs {
    fn resolve(&self, cfg: &RunConfig) -> Result<(Float, Float)> {
        if let Some(name) = &self.example {
            return intercept_point(&known_pair(name)?, cfg.digits);
        }
        if let (Some(eta), Some(zeta)) = (self.eta, self.zeta) {
            return intercept_point(&CandidatePair::new(eta, zeta), cfg.digits);
        }
        if let (Some(r), Some(s)) = (&self.r, &self.s) {
            let p = cfg.prec();
            return Ok((p.parse(r)?, p.parse(s)?));
        }
        Err(Error::Usage("give --example, --eta/--zeta or --r/--s".into()))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn poly1_json(p: &Poly1, var: &str) -> Value {
    json!({ "degree": p.deg(), "coeffs": p, "display": p.display(var) })
}

fn poly2_json(p: &Poly2) -> Value {
    json!({ "deg_r": p.deg_x(), "deg_s": p.deg_y(), "terms": p.terms().count(), "coeffs": p })
}

fn roots_json(p: &Poly1, digits: u32) -> Vec<String> {
    let (lo, hi) = (rug::Rational::from(0), rug::Rational::from(1));
    isolate_roots(&p.squarefree(), &lo, &hi).iter().map(|a| a.to_decimal(digits)).collect()
}

fn catalog_summary(cat: &Catalog) -> Value {
    serde_json::to_value(&cat.summary).unwrap_or(Value::Null)
}

fn write_catalog(cfg: &RunConfig, cat: &Catalog, ties: bool) -> Result<Value> {
    let path = cfg.path(&format!("catalog.{}", cfg.ext()));
    let mut w = create(&path)?;
    match cfg.format {
        Format::Json => write_catalog_jsonl(&mut w, cat)?,
        Format::Csv => write_catalog_csv(&mut w, cat)?,
    }
    w.flush()?;
    let points = cfg.path("points.jsonl");
    let mut pw = create(&points)?;
    write_points_jsonl(&mut pw, cat)?;
    pw.flush()?;
    let mut files = vec![show(&path), show(&points)];
    if ties {
        let tp = cfg.path("ties.jsonl");
        let mut tw = create(&tp)?;
        write_tie_ledger_jsonl(&mut tw, &cat.entries)?;
        tw.flush()?;
        files.push(show(&tp));
    }
    Ok(json!({ "summary": catalog_summary(cat), "files": files }))
}

fn resolve_pairs(spec: &str, scope: KScope) -> Result<Vec<CandidatePair>> {
    match spec {
        "k" => Ok(enumerate_k_scoped(scope)),
        "examples" => Ok(KNOWN.iter().map(|k| k.pair()).collect()),
        path => read_pairs_jsonl(&fs::read_to_string(path)?),
    }
}

fn profile_json(kind: Kind, xi: &AngleCount, digits: u32) -> Result<Value> {
    let p = profile(kind, xi, digits)?;
    let q = |v: &Option<crate::contours::Quantity>| v.as_ref().map(|q| q.to_decimal(digits));
    Ok(json!({
        "kind": kind.name(),
        "tuple": xi,
        "vertical": p.vertical,
        "r_vert": p.r_vert.as_ref().map(|v| to_decimal(v, digits)),
        "a": q(&p.a_endpoint),
        "c": q(&p.c_endpoint),
        "d": q(&p.d_endpoint),
        "origin_slope": q(&p.origin_slope),
        "value_at_one": q(&p.value_at_one),
    }))
}

fn gamma_json(cfg: &RunConfig, r: &Float, s: &Float) -> Result<(Value, SearchOutcome)> {
    let mut q = GammaQuery::new(r.clone(), s.clone(), cfg.digits)?.with_budget(cfg.budget_nodes);
    if cfg.tolerance.is_some() {
        let tol = cfg.tolerance_or(q.tolerance.clone())?;
        q = q.with_tolerance(tol)?;
    }
    let out = search(&q);
    let v = json!({ "r": to_decimal(r, cfg.digits), "s": to_decimal(s, cfg.digits), "result": &out });
    Ok((v, out))
}

fn seed_corona(size: Size, rules: &CoronaRules, r: &Float, s: &Float, tol: &Float) -> Result<Packing> {
    for xi in rules.for_size(size) {
        for cyc in cycles_of(xi)? {
            let c = build_corona(size, &cyc, r, s, tol)?;
            if c.closes {
                return Ok(c.packing);
            }
        }
    }
    Err(Error::Domain(format!("no {} corona closes at this point", size.name())))
}

fn verification_json(p: &Packing, tol: &Float) -> (Value, bool) {
    let rep = verify(p, tol);
    let compact = rep.interior.iter().filter(|c| c.1).count();
    let ok = rep.valid() && rep.all_compact();
    let v = json!({
        "circles": p.len(),
        "violations": rep.violations,
        "tangencies": rep.tangencies,
        "interior": rep.interior.len(),
        "interior_compact": compact,
        "worst_residual": rep.worst_residual,
        "valid": rep.valid(),
        "compact": rep.all_compact(),
    });
    (v, ok)
}

/// Execute one parsed command and return its report.
pub fn execute(cfg: &RunConfig, cmd: &Command) -> Result<Value> {
    let digits = cfg.digits;
    match cmd {
        Command::EnumerateS => {
            let tuples = enumerate_snec();
            let path = cfg.path(&format!("s_tuples.{}", cfg.ext()));
            let mut w = create(&path)?;
            match cfg.format {
                Format::Json => write_tuples_jsonl(&mut w, &tuples)?,
                Format::Csv => write_tuples_csv(&mut w, &tuples)?,
            }
            w.flush()?;
            Ok(json!({ "command": "enumerate-s", "count": tuples.len(), "file": show(&path) }))
        }
        Command::EnumerateK { scope } => {
            let scope = KScope::parse(scope)?;
            let pairs = enumerate_k_scoped(scope);
            let path = cfg.path(&format!("k_pairs.{}", cfg.ext()));
            let mut w = create(&path)?;
            match cfg.format {
                Format::Json => write_pairs_jsonl(&mut w, &pairs)?,
                Format::Csv => write_pairs_csv(&mut w, &pairs)?,
            }
            w.flush()?;
            Ok(json!({ "command": "enumerate-k", "scope": scope.name(), "count": pairs.len(), "file": show(&path) }))
        }
        Command::Intercepts { pairs, scope, tie_break } => {
            let list = resolve_pairs(pairs, KScope::parse(scope)?)?;
            let cap = cfg.cap("ties");
            let cat = compute_l_with(&list, digits, tie_break.then_some(&cap))?;
            let mut v = write_catalog(cfg, &cat, *tie_break)?;
            v["command"] = json!("intercepts");
            Ok(v)
        }
        Command::Profile { kind, tuple } => {
            let v = profile_json(Kind::parse(kind)?, tuple, digits)?;
            write_json(&cfg.path("profile.json"), &v)?;
            Ok(v)
        }
        Command::Detrig { kind, tuple, spec } => {
            let kind = Kind::parse(kind)?;
            let spec = Specialization::parse(spec)?;
            let cap = cfg.cap(&format!("{} {tuple}", kind.name()));
            let poly = if spec == Specialization::General {
                poly2_json(&contour_poly::<Poly2>(kind, tuple, spec, &cap)?)
            } else {
                let p: Poly1 = contour_poly(kind, tuple, spec, &cap)?;
                let mut v = poly1_json(&p, spec.variable());
                v["roots_in_unit_interval"] = json!(roots_json(&p, 20));
                v
            };
            let v = json!({ "kind": kind.name(), "tuple": tuple, "spec": spec.name(), "poly": poly });
            write_json(&cfg.path("detrig.json"), &v)?;
            Ok(v)
        }
        Command::Eliminate { eta, zeta, var } => {
            let var = Var::parse(var)?;
            let p: Poly2 = contour_poly(Kind::Alpha, eta, Specialization::General, &cfg.cap(&format!("alpha {eta}")))?;
            let q: Poly2 = contour_poly(Kind::Beta, zeta, Specialization::General, &cfg.cap(&format!("beta {zeta}")))?;
            let res = eliminate(&p, &q, var)?;
            let left = var.other().name();
            let mut out = poly1_json(&res, left);
            out["roots_in_unit_interval"] = json!(roots_json(&res, 20));
            let v = json!({ "eta": eta, "zeta": zeta, "eliminated": var.name(), "resultant": out });
            write_json(&cfg.path("eliminate.json"), &v)?;
            Ok(v)
        }
        Command::Certify { eta, zeta } => {
            let pair = CandidatePair::new(*eta, *zeta);
            let (r, s) = intercept_point(&pair, digits)?;
            let cert = certify(&pair, &r, &s, digits, &cfg.cap("certificate"))?;
            let path = cfg.path("certificate.json");
            write_json(&path, &cert)?;
            cert.check()?;
            Ok(json!({ "command": "certify", "eta": eta, "zeta": zeta, "r": cert.r_decimal(), "s": cert.s_decimal(), "file": show(&path) }))
        }
        Command::GammaSearch { point } => {
            let (r, s) = point.resolve(cfg)?;
            let (v, out) = gamma_json(cfg, &r, &s)?;
            write_json(&cfg.path("gamma.json"), &v)?;
            if let SearchOutcome::BudgetExceeded { nodes, .. } = out {
                return Err(Error::Resource(format!("gamma search stopped after {nodes} nodes; partial results in {}", show(&cfg.path("gamma.json")))));
            }
            Ok(v)
        }
        Command::Corona { center, tuple, point } => {
            let center = Size::parse(center)?;
            let (r, s) = point.resolve(cfg)?;
            let tol = cfg.tolerance_or(cfg.prec().ten_pow_neg((digits / 2) as i64))?;
            let mut rows = Vec::new();
            let mut first = None;
            for cyc in cycles_of(tuple)? {
                let c = build_corona(center, &cyc, &r, &s, &tol)?;
                let names: Vec<&str> = cyc.iter().map(|x| x.name()).collect();
                rows.push(json!({ "cycle": names, "closes": c.closes, "residual": to_decimal(&c.residual, 6) }));
                if c.closes && first.is_none() {
                    first = Some(c.packing);
                }
            }
            let mut v = json!({ "center": center.name(), "tuple": tuple, "coronas": rows });
            if let Some(p) = first {
                let path = cfg.path("corona.json");
                let mut w = create(&path)?;
                w.write_all(p.to_json(digits)?.as_bytes())?;
                w.flush()?;
                v["file"] = json!(show(&path));
            }
            write_json(&cfg.path("corona-report.json"), &v)?;
            Ok(v)
        }
        Command::Grow { point, half, seed_size, max_steps } => {
            let (r, s) = point.resolve(cfg)?;
            let rules = CoronaRules::discover(&r, &s, digits)?;
            let mut opts = GrowOptions::new(digits)?;
            opts.max_steps = *max_steps;
            if cfg.tolerance.is_some() {
                opts.tangency_tol = cfg.tolerance_or(opts.tangency_tol.clone())?;
            }
            let seed = seed_corona(Size::parse(seed_size)?, &rules, &r, &s, &opts.tangency_tol)?;
            let out = grow_patch(&seed, &BBox::square(*half), &rules, &opts)?;
            let path = cfg.path("packing.json");
            let mut w = create(&path)?;
            w.write_all(out.packing.to_json(digits)?.as_bytes())?;
            w.flush()?;
            let (check, _) = verification_json(&out.packing, &Float::with_val(r.prec(), 1e-9));
            Ok(json!({ "command": "grow", "rules": rules, "steps": out.steps, "stall": out.stall, "verification": check, "file": show(&path) }))
        }
        Command::Verify { packing } => {
            let p = Packing::from_json(&fs::read_to_string(packing)?, digits)?;
            let tol = cfg.tolerance_or(Float::with_val(p.prec(), 1e-9))?;
            let (v, ok) = verification_json(&p, &tol);
            write_json(&cfg.path("verification.json"), &v)?;
            if !ok {
                return Err(Error::Verification(format!(
                    "{} overlaps, compact interior {}; report in {}",
                    v["violations"].as_array().map_or(0, |a| a.len()),
                    v["compact"],
                    show(&cfg.path("verification.json"))
                )));
            }
            Ok(v)
        }
        Command::Render { packing, scale, tangency } => {
            let p = Packing::from_json(&fs::read_to_string(packing)?, digits)?;
            let style = SvgStyle { scale: *scale, tangency: *tangency, ..SvgStyle::default() };
            let path = cfg.path(&format!("{}.svg", packing.file_stem().and_then(|s| s.to_str()).unwrap_or("packing")));
            let mut w = create(&path)?;
            w.write_all(render_svg(&p, &style).as_bytes())?;
            w.flush()?;
            Ok(json!({ "command": "render", "circles": p.len(), "file": show(&path) }))
        }
        Command::Reproduce { skip_l } => reproduce(cfg, *skip_l),
    }
}

fn row(name: &str, expected: impl ToString, got: impl ToString, ok: bool) -> Value {
    json!({ "check": name, "expected": expected.to_string(), "got": got.to_string(), "ok": ok })
}

fn near_decimal(x: &Float, target: f64, within: f64) -> bool {
    (x.to_f64() - target).abs() < within
}

fn reproduce(cfg: &RunConfig, skip_l: bool) -> Result<Value> {
    let digits = cfg.digits;
    let mut rows = Vec::new();
    rows.push(row("|S|", 55, enumerate_snec().len(), enumerate_snec().len() == 55));
    let k_full = enumerate_k_scoped(KScope::Full).len();
    let k_capped = enumerate_k_scoped(KScope::Capped).len();
    rows.push(row("|K|", 248395, k_full, k_full == 248395));
    rows.push(row("|K| capped", 248395, k_capped, k_capped == 248395));
    if !skip_l {
        let cap = cfg.cap("ties");
        let cat = compute_l_with(&enumerate_k_scoped(KScope::Full), digits, Some(&cap))?;
        write_catalog(cfg, &cat, true)?;
        let n = cat.summary.distinct_points;
        rows.push(row("|L| distinct points", 13617, n, n == 13617));
        let capped: Vec<CandidatePair> = enumerate_k_scoped(KScope::Capped);
        let capped_set: std::collections::BTreeSet<CandidatePair> = capped.into_iter().collect();
        let found = cat.entries.iter().filter(|e| e.status == Status::Found && capped_set.contains(&e.pair)).count();
        rows.push(row("found pairs, capped", 13617, found, found == 13617));
    }
    for k in KNOWN.iter() {
        let (r, s) = intercept_point(&k.pair(), digits)?;
        let ok = near_decimal(&r, k.r, 5e-7) && near_decimal(&s, k.s, 5e-7);
        rows.push(row(&format!("{} (r, s)", k.name), format!("({}, {})", k.r, k.s), format!("({}, {})", to_decimal(&r, 8), to_decimal(&s, 8)), ok));
        let (_, out) = gamma_json(cfg, &r, &s)?;
        rows.push(row(&format!("{} xi", k.name), k.xi, out.solutions().iter().map(|x| x.xi.to_string()).collect::<Vec<_>>().join(" "), out.contains(&k.xi)));
    }
    let near = NEAR_ORIGIN.pair();
    let (r, s) = intercept_point(&near, digits)?;
    let cert = certify(&near, &r, &s, digits, &cfg.cap("certificate"))?;
    let divides = NEAR_ORIGIN.r_poly().divides(&cert.in_r) && NEAR_ORIGIN.s_poly().divides(&cert.in_s);
    rows.push(row("near-origin resultants divisible", true, divides, divides));
    rows.push(row("near-origin r", NEAR_ORIGIN.r, to_decimal(&r, 12), agrees_with_shown(NEAR_ORIGIN.r, &r)));
    rows.push(row("near-origin s", NEAR_ORIGIN.s, to_decimal(&s, 12), agrees_with_shown(NEAR_ORIGIN.s, &s)));
    for (coeffs, want) in FIGURE_ROOTS {
        let p = Poly1::from_i64(coeffs);
        let roots = roots_json(&p, 20);
        let got: Vec<f64> = roots.iter().filter_map(|t| t.parse().ok()).collect();
        let ok = got.iter().any(|g| (g - want).abs() < 5e-7);
        rows.push(row(&format!("root of {}", p.display("x")), want, roots.join(" "), ok));
    }
    let mut text = String::new();
    for r in &rows {
        let mark = if r["ok"] == json!(true) { "ok  " } else { "FAIL" };
        text.push_str(&format!(
            "{mark} {:<44} expected {:<30} got {}\n",
            r["check"].as_str().unwrap_or(""),
            r["expected"].as_str().unwrap_or(""),
            r["got"].as_str().unwrap_or("")
        ));
    }
    let path = cfg.path("reproduce.json");
    write_json(&path, &rows)?;
    let txt = cfg.path("reproduce.txt");
    let mut w = create(&txt)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(json!({ "command": "reproduce", "table": text, "rows": rows, "file": show(&path) }))
}

/// Error record written to stderr: `{"error":{"kind":..,"message":..,"exit_code":..}}`.
pub fn error_record(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } })
}

/// Parse `args`, run the command on a pool of `--jobs` workers and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return 0;
            }
            let rec = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end(), "exit_code": 2 } });
            eprintln!("{rec}");
            return 2;
        }
    };
    let result = RunConfig::from_args(&cli.config).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().map_err(|e| Error::Resource(e.to_string()))?;
        pool.install(|| execute(&cfg, &cli.command))
    });
    match result {
        Ok(v) => {
            if let Some(t) = v.get("table").and_then(|t| t.as_str()) {
                print!("{t}");
            } else {
                println!("{v}");
            }
            0
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            e.exit_code()
        }
    }
}
