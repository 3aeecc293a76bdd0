//! Named checks, suites and their configuration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classh;
use crate::corpus;
use crate::error::{Error, Result};
use crate::operators::{Factor, OperatorSpec};
use crate::optimal;
use crate::phifun::{self, psi_marcinkiewicz, Band, EquivalenceReport, EvaluationGrid, PhiExpr};
use crate::report::{Report, Verdict};
use crate::search::geomspace;
use crate::spaces::{norm, range0_upper, range_norm_lower, DecreasingFamily, SpaceSpec};
use crate::stepfn::StepFunction;

/// One entry of a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

/// A list of checks run on a common grid and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSuiteConfig {
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub grid: EvaluationGrid,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    7
}

impl Default for CheckSuiteConfig {
    fn default() -> Self {
        CheckSuiteConfig { checks: vec![], grid: EvaluationGrid::default(), seed: default_seed() }
    }
}

pub const CHECKS: &[&str] = &[
    "rearrangement_oracle",
    "psi_closed_form",
    "psi_band",
    "tilde_match",
    "lorentz_tail",
    "lorentz_sandwich",
    "duality_attainment",
    "classh",
    "pointwise_domination",
    "range_nonexistence",
    "domain_existence",
    "domain_band",
    "domain_iterate",
    "functor_shadows",
    "functor_match",
    "rx_idempotence",
    "bound_ordering",
    "criterio_dlambda",
    "restricted_type",
];

struct Params<'a> {
    check: &'a str,
    v: &'a Value,
}

impl Params<'_> {
    fn bad(&self, what: String) -> Error {
        Error::InvalidInput(format!("{}: {what}", self.check))
    }

    fn get(&self, k: &str) -> Result<&Value> {
        self.v.get(k).ok_or_else(|| self.bad(format!("missing parameter {k:?}")))
    }

    fn phi(&self, k: &str) -> Result<PhiExpr> {
        PhiExpr::from_json(self.get(k)?)
    }

    fn space(&self, k: &str) -> Result<SpaceSpec> {
        SpaceSpec::from_json(self.get(k)?)
    }

    fn operator(&self, k: &str) -> Result<OperatorSpec> {
        OperatorSpec::from_json(self.get(k)?)
    }

    fn step(&self, k: &str) -> Result<StepFunction> {
        serde_json::from_value(self.get(k)?.clone()).map_err(|e| self.bad(format!("{k}: {e}")))
    }

    fn f64_or(&self, k: &str, d: f64) -> Result<f64> {
        match self.v.get(k) {
            None => Ok(d),
            Some(x) => x.as_f64().ok_or_else(|| self.bad(format!("{k} must be a number"))),
        }
    }

    fn usize_or(&self, k: &str, d: usize) -> Result<usize> {
        match self.v.get(k) {
            None => Ok(d),
            Some(x) => x.as_u64().map(|n| n as usize).ok_or_else(|| self.bad(format!("{k} must be a count"))),
        }
    }

    fn str_or<'b>(&'b self, k: &str, d: &'b str) -> Result<&'b str> {
        match self.v.get(k) {
            None => Ok(d),
            Some(x) => x.as_str().ok_or_else(|| self.bad(format!("{k} must be a string"))),
        }
    }

    fn bool_or(&self, k: &str, d: bool) -> Result<bool> {
        match self.v.get(k) {
            None => Ok(d),
            Some(x) => x.as_bool().ok_or_else(|| self.bad(format!("{k} must be true or false"))),
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::InvalidInput(_) | Error::InvalidOperator(_))
}

fn report(check: &str, formula: &str, grid: Option<EvaluationGrid>, band: Option<Band>, verdict: Verdict, details: Value) -> Report {
    Report { check: check.into(), formula: formula.into(), grid, band, verdict, details }
}

fn band_report(check: &str, formula: &str, rep: &EquivalenceReport, extra: Value) -> Report {
    let mut details = serde_json::to_value(rep).expect("report serializes");
    if let (Value::Object(d), Value::Object(e)) = (&mut details, extra) {
        d.extend(e);
    }
    report(check, formula, Some(rep.grid), Some(rep.band), Verdict::from_bool(rep.pass), details)
}

fn formula(name: &str) -> &'static str {
    match name {
        "rearrangement_oracle" => "f*(t) = inf{s : d_f(s) <= t}; int f* = int |f|",
        "psi_closed_form" | "psi_band" => "Psi(t) = t / int_0^t ds/phi(s)",
        "tilde_match" => "tilde phi(t) = inf_r t phi(r) / (r log(1 + t/r))",
        "lorentz_tail" => "int_t^inf tilde phi(s)/s^2 ds <= C phi(t)/t",
        "lorentz_sandwich" => "tilde phi(t)/3 <= Psi_{S,Lambda_phi}(t) <= tilde phi(t)",
        "duality_attainment" => "Psi_{S,X}(t) = t / ||S' chi_(0,t)||_{X'}",
        "classh" => "Tf decreasing; Tf < Tf* (HLP); S chi_(0,t) <= S T chi_(0,t)",
        "pointwise_domination" => "Tf <= Tf* pointwise",
        "range_nonexistence" => "R[S,X] exists iff log+(1/t) in X'",
        "domain_existence" => "D[S,X] exists iff 1/(1+s) in X",
        "domain_band" => "phi_{D[S,X]}(t) = ||S chi_(0,t)||_X",
        "domain_iterate" => "D[S^2,X] = D[S, D[S,X]]",
        "functor_shadows" => "phi_{R_X} >= phi_X >= phi_{D_X}",
        "functor_match" => "R_X = X = D_X when S is bounded on X",
        "rx_idempotence" => "R_{R_X} = R_X",
        "bound_ordering" => "sup_g int f*g / ||S'g||_{X'} <= ||f||_{M_Psi} <= inf{||g||_X : f** <= (Sg*)**}",
        "criterio_dlambda" => "phi(t)/(K t) <= SS'g(t) <= K phi(t)/t",
        "restricted_type" => "||min(1,t/s)||_X <= 2 ||1/(1+s/t)||_X",
        _ => "",
    }
}

/// Runs one check. Malformed parameters are errors; evaluation failures
/// become failing reports.
pub fn run_check(entry: &CheckEntry, grid: &EvaluationGrid, seed: u64) -> Result<Report> {
    let name = entry.name.as_str();
    if !CHECKS.contains(&name) {
        return Err(Error::InvalidInput(format!("unknown check {name:?}")));
    }
    let p = Params { check: name, v: &entry.params };
    let out = dispatch(name, &p, grid, seed);
    match out {
        Ok(r) => Ok(r),
        Err(e) if is_input_error(&e) => Err(e),
        Err(e) => Ok(report(name, formula(name), Some(*grid), None, Verdict::Fail, json!({"error": e.to_string()}))),
    }
}

fn dispatch(name: &str, p: &Params, grid: &EvaluationGrid, seed: u64) -> Result<Report> {
    let f = formula(name);
    match name {
        "rearrangement_oracle" => {
            let count = p.usize_or("count", 1000)?;
            let fs = corpus::steps(count, p.usize_or("seed", seed as usize)? as u64);
            let mut worst: f64 = 0.0;
            let mut mass: f64 = 0.0;
            for g in &fs {
                let r = g.rearrange();
                let vs = r.values();
                for (i, &b) in r.breakpoints().iter().enumerate() {
                    let below = vs.get(i + 1).copied().unwrap_or(0.0);
                    worst = worst.max((g.distribution(below) - b).abs() / b);
                }
                mass = mass.max((r.integral() - g.integral()).abs() / g.integral());
            }
            let pass = worst <= 1e-12 && mass <= 1e-12;
            Ok(report(name, f, None, None, Verdict::from_bool(pass), json!({"count": count, "max_breakpoint_error": worst, "max_mass_error": mass})))
        }
        "psi_closed_form" => {
            let phi = p.phi("phi")?;
            let reference = p.phi("reference")?;
            let rel = p.f64_or("rel", 1e-9)?;
            let rep = phifun::compare_equivalence(&PhiExpr::psi_of(phi), &reference, grid, Band::around_one(rel))?;
            Ok(band_report(name, f, &rep, json!({"reference": reference.to_string()})))
        }
        "psi_band" | "tilde_match" => {
            let phi = p.phi("phi")?;
            let reference = p.phi("reference")?;
            let value = if name == "psi_band" { PhiExpr::psi_of(phi) } else { PhiExpr::tilde_of(phi) };
            let mut rep = phifun::compare_equivalence(&value, &reference, grid, Band::finite())?;
            if name == "psi_band" {
                let spread = p.f64_or("max_spread", 4.0)?;
                rep.pass = rep.pass && rep.spread() <= spread;
                Ok(band_report(name, f, &rep, json!({"spread": rep.spread(), "max_spread": spread})))
            } else {
                let rel = p.f64_or("rel", 1e-4)?;
                rep.band = Band::around_one(rel);
                rep.pass = rep.ratio_min >= 1.0 - rel && rep.ratio_max <= 1.0 + rel;
                Ok(band_report(name, f, &rep, json!({})))
            }
        }
        "lorentz_tail" => {
            let phi = p.phi("phi")?;
            let expect = p.str_or("expect", "bounded")?;
            let rep = if p.bool_or("two_sided", false)? {
                optimal::lorentz_lorentz_two_sided(&phi, grid)?
            } else {
                optimal::lorentz_range_is_lorentz(&phi, grid)?
            };
            let mut r = band_report(name, f, &rep, json!({"expect": expect}));
            r.verdict = match (expect, rep.pass) {
                ("bounded", true) => Verdict::Pass,
                ("unbounded", false) => Verdict::CorrectlyRejected,
                _ => Verdict::Fail,
            };
            Ok(r)
        }
        "lorentz_sandwich" => {
            let phi = p.phi("phi")?;
            let slack = p.f64_or("slack", 1e-9)?;
            let r = optimal::range_of_lorentz(&phi, grid)?;
            let ratios: Vec<f64> = r.fundamental_lower.iter().zip(&r.fundamental_upper).map(|(l, u)| l / u).collect();
            let rep = EquivalenceReport::from_ratios(*grid, &r.points, &ratios, Band::new(1.0 / 3.0 - slack, 1.0 + slack));
            Ok(band_report(name, f, &rep, json!({"closed_form": r.closed_form, "notes": r.notes})))
        }
        "duality_attainment" => {
            let phi = p.phi("phi")?;
            let count = p.usize_or("count", 20)?;
            let tol = p.f64_or("tol", 1e-6)?;
            let x = SpaceSpec::Marcinkiewicz(phi.clone());
            let ts = geomspace(1e-3, 1e3, count);
            let chars = DecreasingFamily::characteristic(&geomspace(1e-8, 1e8, 385))?
                .extend(DecreasingFamily::characteristic(&ts)?);
            let random = DecreasingFamily::random(64, seed);
            let rows = ts
                .par_iter()
                .map(|&t| {
                    let chi = StepFunction::indicator(0.0, t)?;
                    let psi = psi_marcinkiewicz(&phi, t)?;
                    let lower = range_norm_lower(&x, &chi, &chars, &OperatorSpec::HardyS)?.value;
                    let rnd = range_norm_lower(&x, &chi, &random, &OperatorSpec::HardyS)?.value;
                    Ok((t, psi, lower, rnd))
                })
                .collect::<Result<Vec<_>>>()?;
            let attained = rows.iter().all(|&(_, psi, l, _)| (l - psi).abs() <= tol * psi);
            let dominated = rows.iter().all(|&(_, psi, _, r)| r <= psi * (1.0 + tol));
            let table: Vec<Value> = rows.iter().map(|r| json!({"t": r.0, "psi": r.1, "characteristic": r.2, "random": r.3})).collect();
            Ok(report(name, f, None, None, Verdict::from_bool(attained && dominated), json!({"rows": table, "tol": tol})))
        }
        "classh" => {
            let op = p.operator("operator")?;
            op.validate(grid)?;
            let corpus = p.usize_or("corpus", 200)?;
            let expect = p.str_or("expect", "pass")?;
            let rep = classh::verify(&op, corpus, seed);
            let verdict = match (expect, rep.pass) {
                ("pass", true) => Verdict::Pass,
                ("fail", false) => Verdict::CorrectlyRejected,
                _ => Verdict::Fail,
            };
            Ok(report(name, f, None, None, verdict, serde_json::to_value(&rep).expect("report serializes")))
        }
        "pointwise_domination" => {
            let op = p.operator("operator")?;
            let g = p.step("function")?;
            let expect = p.str_or("expect", "fail")?;
            let s = classh::verify_pointwise(&op, &[g], grid);
            let verdict = match (expect, s.pass) {
                ("pass", true) => Verdict::Pass,
                ("fail", false) => Verdict::CorrectlyRejected,
                _ => Verdict::Fail,
            };
            Ok(report(name, f, Some(*grid), None, verdict, serde_json::to_value(&s).expect("section serializes")))
        }
        "range_nonexistence" => {
            let x = p.space("space")?;
            let e = optimal::existence_range(&x);
            let verdict = if e.exists { Verdict::Fail } else { Verdict::CorrectlyRejected };
            Ok(report(name, f, None, None, verdict, json!({"space": x, "existence": e})))
        }
        "domain_existence" => {
            let x = p.space("space")?;
            let want = p.bool_or("expect", true)?;
            let e = optimal::existence_domain(&x);
            let verdict = match (want, e.exists) {
                (true, true) => Verdict::Pass,
                (false, false) => Verdict::CorrectlyRejected,
                _ => Verdict::Fail,
            };
            Ok(report(name, f, None, None, verdict, json!({"space": x, "existence": e})))
        }
        "domain_band" => {
            let x = p.space("space")?;
            let reference = p.phi("reference")?;
            let spread = p.f64_or("max_spread", 4.0)?;
            let d = optimal::domain(&x, grid)?;
            let refs = phifun::tabulate(&reference, grid)?;
            let ratios: Vec<f64> = d.fundamental.iter().zip(&refs).map(|(a, b)| a / b).collect();
            let mut rep = EquivalenceReport::from_ratios(*grid, &d.points, &ratios, Band::finite());
            rep.pass = rep.pass && rep.spread() <= spread;
            Ok(band_report(name, f, &rep, json!({"spread": rep.spread(), "max_spread": spread})))
        }
        "domain_iterate" => {
            let x = p.space("space")?;
            let rep = optimal::domain_iterate_check(&x, grid)?;
            Ok(band_report(name, f, &rep, json!({})))
        }
        "functor_shadows" => {
            let x = p.space("space")?;
            let slack = p.f64_or("slack", 1e-9)?;
            let phi_x = grid.points().par_iter().map(|&t| x.fundamental(t)).collect::<Result<Vec<f64>>>()?;
            let mut details = serde_json::Map::new();
            let mut pass = true;
            match optimal::functor_rx(&x, grid) {
                Ok(r) => {
                    let ok = r.fundamental_upper.iter().zip(&phi_x).all(|(u, v)| *u >= v * (1.0 - slack));
                    pass &= ok;
                    details.insert("range_functor".into(), json!({"above_phi_x": ok}));
                }
                Err(e) => {
                    details.insert("range_functor".into(), json!({"skipped": e.to_string()}));
                }
            }
            match optimal::functor_dx(&x, grid) {
                Ok(d) => {
                    let ok = d.fundamental.iter().zip(&phi_x).all(|(w, v)| *w <= v * (1.0 + slack));
                    pass &= ok;
                    details.insert("domain_functor".into(), json!({"below_phi_x": ok, "exact": d.is_exact()}));
                }
                Err(e) => {
                    details.insert("domain_functor".into(), json!({"skipped": e.to_string()}));
                }
            }
            details.insert("space".into(), json!(x));
            Ok(report(name, f, Some(*grid), None, Verdict::from_bool(pass), Value::Object(details)))
        }
        "functor_match" => {
            let x = p.space("space")?;
            let rel = p.f64_or("rel", 1e-6)?;
            let pts = grid.points();
            let phi_x = pts.par_iter().map(|&t| x.fundamental(t)).collect::<Result<Vec<f64>>>()?;
            let r = optimal::functor_rx(&x, grid)?;
            let d = optimal::functor_dx(&x, grid)?;
            let rr: Vec<f64> = r.fundamental_upper.iter().zip(&phi_x).map(|(a, b)| a / b).collect();
            let dr: Vec<f64> = d.fundamental.iter().zip(&phi_x).map(|(a, b)| a / b).collect();
            let r_rep = EquivalenceReport::from_ratios(*grid, &pts, &rr, Band::around_one(rel));
            let d_rep = EquivalenceReport::from_ratios(*grid, &pts, &dr, Band::finite());
            let d_flat = d_rep.pass && d_rep.spread() <= 1.0 + rel;
            let verdict = Verdict::from_bool(r_rep.pass && d_flat);
            Ok(report(
                name,
                f,
                Some(*grid),
                Some(Band::around_one(rel)),
                verdict,
                json!({"range_functor": r_rep, "domain_functor": d_rep, "domain_constant": d_rep.ratio_min, "domain_flat": d_flat}),
            ))
        }
        "rx_idempotence" => {
            let x = p.space("space")?;
            let rep = optimal::rx_idempotence_check(&x, grid, p.f64_or("rel", 1e-6)?)?;
            Ok(band_report(name, f, &rep, json!({})))
        }
        "bound_ordering" => {
            let pairs = p.usize_or("pairs", 200)?;
            let (violations, feasible, rows) = bound_ordering(pairs, seed)?;
            Ok(report(
                name,
                f,
                None,
                None,
                Verdict::from_bool(violations == 0),
                json!({"pairs": pairs, "feasible": feasible, "violations": violations, "rows": rows}),
            ))
        }
        "criterio_dlambda" => {
            let phi = p.phi("phi")?;
            let density_of = p.phi("density_of")?;
            let k = p.f64_or("k", optimal::DEFAULT_K)?;
            let g = optimal::density_step(&density_of, 1e-10, 1e10, p.usize_or("per_decade", 20)?)?;
            let rep = optimal::criterio_dlambda_check(&phi, &g, k, grid)?;
            let mut r = band_report(name, f, &rep.ratios, json!({"smallest_k": rep.smallest_k, "message": rep.verdict}));
            r.verdict = Verdict::from_bool(rep.pass);
            Ok(r)
        }
        "restricted_type" => {
            let x = p.space("space")?;
            let r = optimal::restricted_type_space(&x, grid)?;
            let q = phifun::quasiconcave_table(&r.points, &r.fundamental);
            let mut rep = band_report(name, f, &r.comparison, json!({"quasiconcave": q}));
            rep.verdict = Verdict::from_bool(r.comparison.pass && q.pass);
            Ok(rep)
        }
        _ => unreachable!("checked against CHECKS"),
    }
}

/// Marcinkiewicz parameters with 1/φ integrable at 0.
pub fn bound_ordering_spaces() -> Vec<PhiExpr> {
    vec![
        PhiExpr::t().powf(0.5),
        PhiExpr::t().powf(0.25),
        PhiExpr::t().powf(0.75),
        PhiExpr::max1t(),
        PhiExpr::t() / PhiExpr::t().log1p(),
    ]
}

/// lower ≤ ‖f‖_{M_Ψ} ≤ upper on random (X, f); returns (violations,
/// feasible pairs, per-pair rows).
pub fn bound_ordering(pairs: usize, seed: u64) -> Result<(usize, usize, Vec<Value>)> {
    use rand::Rng;
    let phis = bound_ordering_spaces();
    let mut r = corpus::rng(seed);
    let picks: Vec<(usize, StepFunction)> =
        (0..pairs).map(|_| (r.gen_range(0..phis.len()), corpus::random_step(&mut r))).collect();
    let family = DecreasingFamily::characteristic(&geomspace(1e-6, 1e6, 97))?.extend(DecreasingFamily::random(16, seed));
    let candidates = DecreasingFamily::standard(seed)?;
    let psis: Vec<PhiExpr> = phis.iter().map(|p| PhiExpr::psi_of(p.clone())).collect();
    let rows = picks
        .par_iter()
        .map(|(i, f)| {
            let x = SpaceSpec::Marcinkiewicz(phis[*i].clone());
            let lower = range_norm_lower(&x, f, &family, &OperatorSpec::HardyS)?.value;
            let exact = norm(&SpaceSpec::Marcinkiewicz(psis[*i].clone()), f)?;
            let upper = match range0_upper(&x, f, &candidates) {
                Ok(u) => Some(u),
                Err(Error::NoFeasibleCandidate) => None,
                Err(e) => return Err(e),
            };
            let bad = lower > exact * (1.0 + 1e-9) || upper.is_some_and(|u| exact > u * (1.0 + 1e-9));
            Ok((bad, upper.is_some(), json!({"space": i, "lower": lower, "exact": exact, "upper": upper})))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|r| r.0).count();
    let feasible = rows.iter().filter(|r| r.1).count();
    Ok((violations, feasible, rows.into_iter().map(|r| r.2).collect()))
}

/// Runs every check; reports come back in config order.
pub fn run_suite(config: &CheckSuiteConfig) -> Result<Vec<Report>> {
    for c in &config.checks {
        if !CHECKS.contains(&c.name.as_str()) {
            return Err(Error::InvalidInput(format!("unknown check {:?}", c.name)));
        }
    }
    config.checks.iter().map(|c| run_check(c, &config.grid, config.seed)).collect()
}

fn entry(name: &str, params: Value) -> CheckEntry {
    CheckEntry { name: name.into(), params }
}

/// Built-in suites by name.
pub fn builtin_suite(name: &str) -> Option<CheckSuiteConfig> {
    match name {
        "paper-examples" => Some(CheckSuiteConfig { checks: worked_examples(), ..CheckSuiteConfig::default() }),
        "empty" => Some(CheckSuiteConfig::default()),
        _ => None,
    }
}

fn worked_examples() -> Vec<CheckEntry> {
    let t = PhiExpr::t;
    let sqrt = || t().powf(0.5);
    let max1t = PhiExpr::max1t;
    let t_over_log = || t() / t().log1p();
    let t_over_log2 = || t() / t().powf(0.5).log1p().powf(2.0);
    let phi = PhiExpr::phi_alpha;
    let s = OperatorSpec::HardyS;
    let sp = OperatorSpec::AdjointSprime;
    let mut v = vec![
        entry("rearrangement_oracle", json!({"count": 1000})),
        entry("psi_closed_form", json!({"phi": sqrt().to_json(), "reference": (sqrt() * PhiExpr::constant(0.5)).to_json()})),
        entry("psi_band", json!({"phi": max1t().to_json(), "reference": t_over_log().to_json(), "max_spread": 4.0})),
        entry("psi_band", json!({"phi": t_over_log().to_json(), "reference": t_over_log2().to_json(), "max_spread": 8.0})),
        entry("tilde_match", json!({"phi": phi(2.0).to_json(), "reference": phi(1.0).to_json(), "rel": 1e-4})),
        entry("lorentz_tail", json!({"phi": phi(2.0).to_json(), "expect": "bounded"})),
        entry("lorentz_tail", json!({"phi": max1t().to_json(), "expect": "unbounded"})),
    ];
    for p in [phi(1.0), phi(2.0), phi(3.0), max1t()] {
        v.push(entry("lorentz_sandwich", json!({"phi": p.to_json()})));
    }
    v.push(entry("duality_attainment", json!({"phi": max1t().to_json(), "count": 20})));
    for op in [
        s.clone(),
        sp.clone(),
        OperatorSpec::compose(&[Factor::S, Factor::Sprime]),
        OperatorSpec::compose(&[Factor::S, Factor::S]),
        OperatorSpec::combo(1.0, s.clone(), 1.0, sp.clone()),
    ] {
        v.push(entry("classh", json!({"operator": op.to_json(), "corpus": 200})));
    }
    v.push(entry(
        "pointwise_domination",
        json!({"operator": sp.to_json(), "function": {"breakpoints": [1.0, 2.0], "values": [0.0, 1.0]}, "expect": "fail"}),
    ));
    v.push(entry(
        "classh",
        json!({"operator": OperatorSpec::combo(0.3, s.clone(), 0.3, sp.clone()).to_json(), "corpus": 200, "expect": "fail"}),
    ));
    v.push(entry("range_nonexistence", json!({"space": SpaceSpec::l1().to_json()})));
    v.push(entry("range_nonexistence", json!({"space": SpaceSpec::Marcinkiewicz(phi(1.0)).to_json()})));
    v.push(entry("domain_existence", json!({"space": SpaceSpec::L1plusLinf.to_json(), "expect": true})));
    v.push(entry("domain_existence", json!({"space": SpaceSpec::L1capLinf.to_json(), "expect": false})));
    v.push(entry("domain_band", json!({"space": SpaceSpec::L1plusLinf.to_json(), "reference": phi(1.0).to_json(), "max_spread": 4.0})));
    v.push(entry(
        "domain_band",
        json!({"space": SpaceSpec::Marcinkiewicz(t_over_log()).to_json(), "reference": max1t().to_json(), "max_spread": 4.0}),
    ));
    v.push(entry("domain_iterate", json!({"space": SpaceSpec::Marcinkiewicz(t_over_log2()).to_json()})));
    v.push(entry("functor_match", json!({"space": SpaceSpec::Marcinkiewicz(sqrt()).to_json()})));
    for x in [
        SpaceSpec::Marcinkiewicz(sqrt()),
        SpaceSpec::Marcinkiewicz(t_over_log()),
        SpaceSpec::Lorentz(phi(1.0)),
        SpaceSpec::L1plusLinf,
        SpaceSpec::L1capLinf,
    ] {
        v.push(entry("functor_shadows", json!({"space": x.to_json()})));
    }
    v.push(entry("rx_idempotence", json!({"space": SpaceSpec::Marcinkiewicz(sqrt()).to_json()})));
    v.push(entry("bound_ordering", json!({"pairs": 200})));
    v.push(entry("criterio_dlambda", json!({"phi": phi(2.0).to_json(), "density_of": phi(1.0).to_json()})));
    v.push(entry("restricted_type", json!({"space": SpaceSpec::L1plusLinf.to_json()})));
    v
}
