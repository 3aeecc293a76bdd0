//! Optimal ranges and domains of the Hardy operator, the 𝒟/ℛ functors,
//! restricted-type spaces and the SS′ criteria.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{ss_char, ssprime_char};
use crate::phifun::{
    self, log_infimum, tilde_objective, tilde_search, Band, EquivalenceReport,
    EvaluationGrid, PhiExpr, TildeOptions,
};
use crate::profile::Profile;
use crate::quad::{self, Tolerance};
use crate::search::{self, geomspace};
use crate::spaces::{norm_decreasing, SpaceSpec};
use crate::stepfn::{DecreasingStep, StepFunction};

/// Verdict of an existence test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Existence {
    pub exists: bool,
    pub diagnostic: String,
}

impl Existence {
    fn yes(msg: impl Into<String>) -> Self {
        Existence { exists: true, diagnostic: msg.into() }
    }

    fn no(msg: impl Into<String>) -> Self {
        Existence { exists: false, diagnostic: msg.into() }
    }

    fn require(&self, stage: &str) -> Result<()> {
        if self.exists {
            Ok(())
        } else {
            Err(Error::Existence(format!("{stage}: {}", self.diagnostic)))
        }
    }
}

/// Fundamental function of an optimal range, exact or bracketed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeResult {
    pub closed_form: Option<SpaceSpec>,
    pub grid: EvaluationGrid,
    pub points: Vec<f64>,
    pub fundamental_lower: Vec<f64>,
    pub fundamental_upper: Vec<f64>,
    pub notes: Vec<String>,
}

impl RangeResult {
    /// Lower and upper coincide.
    pub fn is_exact(&self) -> bool {
        self.fundamental_lower == self.fundamental_upper
    }

    pub fn bracket_holds(&self) -> bool {
        self.fundamental_lower.iter().zip(&self.fundamental_upper).all(|(l, u)| l <= u)
    }

    /// Upper bracket as a tabulated φ.
    pub fn upper_phi(&self) -> Result<PhiExpr> {
        PhiExpr::table(&self.points, &self.fundamental_upper)
    }
}

/// Fundamental function of an optimal domain, with the space whose S-norm
/// defines it when that is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainResult {
    pub space: Option<SpaceSpec>,
    pub grid: EvaluationGrid,
    pub points: Vec<f64>,
    pub fundamental: Vec<f64>,
    pub fundamental_upper: Vec<f64>,
    pub notes: Vec<String>,
}

impl DomainResult {
    /// ‖f‖ = ‖S f*‖_X.
    pub fn norm(&self, f: &StepFunction) -> Result<f64> {
        self.norm_profile(&Profile::Step(f.rearrange().into_step()))
    }

    /// Same for a nonincreasing profile.
    pub fn norm_profile(&self, h: &Profile) -> Result<f64> {
        let x = self
            .space
            .as_ref()
            .ok_or_else(|| Error::Unsupported("this domain is only known through its fundamental bracket".into()))?;
        norm_decreasing(x, &h.clone().hardy())
    }

    pub fn is_exact(&self) -> bool {
        self.fundamental == self.fundamental_upper
    }
}

/// L¹+L∞ and L¹∩L∞ as the Lorentz and Marcinkiewicz spaces they equal
/// isometrically.
pub fn canonical(x: &SpaceSpec) -> SpaceSpec {
    match x {
        SpaceSpec::L1plusLinf => SpaceSpec::Lorentz(PhiExpr::t().min(PhiExpr::constant(1.0))),
        SpaceSpec::L1capLinf => SpaceSpec::Marcinkiewicz(PhiExpr::max1t()),
        other => other.clone(),
    }
}

fn chi(t: f64) -> Result<StepFunction> {
    StepFunction::indicator(0.0, t)
}

/// log⁺(1/t) ∈ X′, tested on S′χ_(0,1) = log⁺(1/t) itself; for
/// Marcinkiewicz X, local integrability of 1/φ.
pub fn existence_range(x: &SpaceSpec) -> Existence {
    match canonical(x) {
        SpaceSpec::Marcinkiewicz(phi) => {
            let inv = |s: f64| phi.eval(s).map(|v| 1.0 / v);
            match quad::from_zero(&inv, 1.0, Tolerance::default()) {
                Ok(v) => Existence::yes(format!("int_0^1 1/phi = {v:.6e}")),
                Err(e) => Existence::no(format!("1/phi is not locally integrable at 0: {e}")),
            }
        }
        SpaceSpec::WeakLorentz(_) => Existence::no("weak-Lorentz spaces are not supported"),
        other => {
            let dual = match other.associate() {
                Ok(d) => d,
                Err(e) => return Existence::no(e.to_string()),
            };
            let probe = chi(1.0).map(|c| Profile::Step(c).adjoint());
            match probe.and_then(|p| norm_decreasing(&dual, &p)) {
                Ok(v) => Existence::yes(format!("||log+(1/t)||_X' = {v:.6e}")),
                Err(e) => Existence::no(format!("log+(1/t) is not in the associate space: {e}")),
            }
        }
    }
}

/// 1/(1+s) ∈ X, tested on Sχ_(0,1) = min(1, 1/s).
pub fn existence_domain(x: &SpaceSpec) -> Existence {
    let probe = chi(1.0).map(|c| Profile::Step(c).hardy());
    match probe.and_then(|p| norm_decreasing(x, &p)) {
        Ok(v) => Existence::yes(format!("||min(1,1/s)||_X = {v:.6e}")),
        Err(e) => Existence::no(format!("min(1,1/s) is not in X: {e}")),
    }
}

/// Ψ_{S,X}(t) = t / ‖S′χ_(0,t)‖_{X′}.
pub fn psi_general(x: &SpaceSpec, t: f64) -> Result<f64> {
    let dual = x.associate()?;
    Ok(t / norm_decreasing(&dual, &Profile::Step(chi(t)?).adjoint())?)
}

/// Objective of Ψ_{S,Λ_φ} at r ≤ t: tφ(r) / (r(1 + ln(t/r))).
pub fn psi_lorentz_objective(phi: &PhiExpr, t: f64, r: f64) -> Result<f64> {
    Ok(t * phi.eval(r)? / (r * ssprime_char(t, r)))
}

/// Ψ_{S,Λ_φ}(t) = t / sup_r r·SS′χ_(0,t)(r)/φ(r) and its minimizer. On
/// r > t the ratio is t/φ(r), largest at r = t, so only r ≤ t is searched.
pub fn psi_lorentz(phi: &PhiExpr, t: f64) -> Result<search::Extremum> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("psi needs t > 0, got {t}")));
    }
    let opts = TildeOptions::for_point(t);
    let lt = t.ln();
    let obj = |u: f64| psi_lorentz_objective(phi, t, u.exp());
    log_infimum(&obj, lt, lt - opts.decades * std::f64::consts::LN_10, lt, &opts, (true, false))
}

/// Ψ_{S,Λ_φ} and φ̃ at t, each also evaluated at the other's minimizer.
fn lorentz_pair(phi: &PhiExpr, t: f64) -> Result<(f64, f64)> {
    let te = tilde_search(phi, t, &TildeOptions::for_point(t))?;
    let pe = psi_lorentz(phi, t)?;
    let mut psi = pe.value.min(phi.eval(t)?);
    if te.x <= t {
        psi = psi.min(psi_lorentz_objective(phi, t, te.x)?);
    }
    let tl = te.value.min(tilde_objective(phi, t, pe.x)?);
    // Ψ ≤ φ̃ holds exactly; both may be extrapolated limits
    Ok((psi.min(tl), tl))
}

/// 𝔑[S, M_φ] = M_Ψ.
pub fn range_of_marcinkiewicz(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<RangeResult> {
    let x = SpaceSpec::Marcinkiewicz(phi.clone());
    let ex = existence_range(&x);
    if !ex.exists {
        return Err(Error::Divergent(ex.diagnostic));
    }
    let psi = PhiExpr::psi_of(phi.clone());
    let points = grid.points();
    let vals = phifun::tabulate(&psi, grid)?;
    Ok(RangeResult {
        closed_form: Some(SpaceSpec::Marcinkiewicz(psi)),
        grid: *grid,
        points,
        fundamental_lower: vals.clone(),
        fundamental_upper: vals,
        notes: vec!["Marcinkiewicz input: range is M_Psi, Psi(t) = t / int_0^t 1/phi".into()],
    })
}

/// Brackets Ψ_{S,Λ_φ} ≤ φ_𝔑 ≤ φ̃ for 𝔑[S, Λ_φ].
pub fn range_of_lorentz(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<RangeResult> {
    let c = phifun::logc_constant(phi, grid)?;
    if !(c > 0.0) {
        return Err(Error::Existence(format!("phi(t) / (t log(1+1/t)) has infimum {c} on the grid")));
    }
    let points = grid.points();
    let pairs = points.par_iter().map(|&t| lorentz_pair(phi, t)).collect::<Result<Vec<_>>>()?;
    let (lower, upper): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let mut notes = vec![format!("logc constant on grid: {c:.6e}")];
    let tail = lorentz_range_is_lorentz(phi, grid);
    let closed_form = match tail {
        Ok(rep) if rep.pass => {
            notes.push(format!("int_t^inf tilde/s^2 * t/phi in [{:.4e}, {:.4e}]", rep.ratio_min, rep.ratio_max));
            Some(SpaceSpec::Lorentz(PhiExpr::tilde_of(phi.clone())))
        }
        Ok(rep) => {
            notes.push(format!("tail integral unbounded (ratio_max = {:e}); range is M_tilde, not Lorentz", rep.ratio_max));
            None
        }
        Err(e) => {
            notes.push(format!("tail test inconclusive: {e}"));
            None
        }
    };
    Ok(RangeResult { closed_form, grid: *grid, points, fundamental_lower: lower, fundamental_upper: upper, notes })
}

/// 𝔑[S, X] for any supported X.
pub fn range(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<RangeResult> {
    let ex = existence_range(x);
    ex.require("range")?;
    match canonical(x) {
        SpaceSpec::Marcinkiewicz(phi) => range_of_marcinkiewicz(&phi, grid),
        SpaceSpec::Lorentz(phi) => range_of_lorentz(&phi, grid),
        other => Err(Error::Unsupported(format!("range of {}", other.name()))),
    }
}

/// I(t)·t/φ(t) with I(t) = ∫ₜ^∞ φ̃(s)/s² ds, accumulated from the top of the
/// grid. A divergent tail gives +∞ everywhere.
fn tail_ratios(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let pts = grid.points();
    let tl = PhiExpr::tilde_of(phi.clone());
    let f = |s: f64| Ok(tl.eval(s)? / (s * s));
    let tol = Tolerance { rel: 1e-9, ..Tolerance::default() };
    let cells = pts
        .par_windows(2)
        .map(|w| quad::adaptive(&f, w[0], w[1], tol))
        .collect::<Result<Vec<f64>>>()?;
    let last = *pts.last().expect("grid has points");
    let tail = match quad::to_infinity_fixed(&f, last) {
        Ok(v) => v,
        Err(Error::Divergent(_)) => f64::INFINITY,
        Err(e) => return Err(Error::Inconclusive(format!("tail of int tilde/s^2: {e}"))),
    };
    let mut acc = tail;
    let mut ratios = vec![0.0; pts.len()];
    for i in (0..pts.len()).rev() {
        if i + 1 < pts.len() {
            acc += cells[i];
        }
        ratios[i] = acc * pts[i] / phi.eval(pts[i])?;
    }
    Ok((pts, ratios))
}

/// Upper estimate ∫ₜ^∞ φ̃(s)/s² ds ≲ φ(t)/t: passes iff the ratio stays
/// finite.
pub fn lorentz_range_is_lorentz(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<EquivalenceReport> {
    let (pts, ratios) = tail_ratios(phi, grid)?;
    Ok(EquivalenceReport::from_ratios(*grid, &pts, &ratios, Band::new(0.0, f64::MAX)))
}

/// Two-sided ∫ₜ^∞ φ̃(s)/s² ds ≈ φ(t)/t.
pub fn lorentz_lorentz_two_sided(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<EquivalenceReport> {
    let (pts, ratios) = tail_ratios(phi, grid)?;
    Ok(EquivalenceReport::from_ratios(*grid, &pts, &ratios, Band::finite()))
}

fn tabulate_w(x: &SpaceSpec, pts: &[f64]) -> Result<Vec<f64>> {
    pts.par_iter().map(|&t| norm_decreasing(x, &Profile::Step(chi(t)?).hardy())).collect()
}

/// 𝔇[S, X]: ‖f‖ = ‖S f*‖_X, fundamental W_X(t) = ‖Sχ_(0,t)‖_X.
pub fn domain(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<DomainResult> {
    existence_domain(x).require("domain")?;
    let points = grid.points();
    let w = tabulate_w(x, &points)?;
    Ok(DomainResult {
        space: Some(x.clone()),
        grid: *grid,
        points,
        fundamental: w.clone(),
        fundamental_upper: w,
        notes: vec![],
    })
}

/// ‖S²χ_(0,t)‖_X nested (S applied to the profile Sχ) against the closed
/// form of S²χ.
pub fn domain_iterate_check(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<EquivalenceReport> {
    let nested = |t: f64| norm_decreasing(x, &Profile::Step(chi(t)?).hardy().hardy());
    if let Err(e) = nested(1.0) {
        return Err(Error::Existence(format!("S^2 into {}: {e}", x.name())));
    }
    let pts = grid.points();
    let ratios = pts
        .par_iter()
        .map(|&t| Ok(nested(t)? / norm_decreasing(x, &Profile::HardySquaredChar(t))?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(EquivalenceReport::from_ratios(*grid, &pts, &ratios, Band::around_one(1e-6)))
}

/// ‖S²χ_(0,t)‖_X on the grid.
pub fn nested_fundamental(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<Vec<f64>> {
    grid.points().par_iter().map(|&t| norm_decreasing(x, &Profile::HardySquaredChar(t))).collect()
}

const AUX_PER_DECADE: f64 = 16.0;
const AUX_SPAN: f64 = 1e6;

fn aux_grid(grid: &EvaluationGrid) -> Vec<f64> {
    let (lo, hi) = (grid.t_min / AUX_SPAN, grid.t_max * AUX_SPAN);
    let n = ((hi / lo).log10() * AUX_PER_DECADE).ceil() as usize + 1;
    geomspace(lo, hi, n)
}

/// sup over u of k(u), sampled on `us` (values `ks`) and refined in ln u
/// around the best sample.
fn sup_over_u(k: &(dyn Fn(f64) -> Result<f64> + Sync), us: &[f64], ks: &[f64]) -> Result<f64> {
    let (i, best) = ks
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let lo = us[i.saturating_sub(1)].ln();
    let hi = us[(i + 1).min(us.len() - 1)].ln();
    let g = |v: f64| k(v.exp());
    Ok(best.max(search::golden_max(&g, lo, hi, 1e-10)?.value))
}

/// ℛ_X = 𝔑[S, 𝔇[S, X]], bracketed by φ_X ≤ φ_ℛ ≤ t/L(t) with
/// L(t) = sup_u t·SSχ_(0,u)(t) / W_X(u).
pub fn functor_rx(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<RangeResult> {
    existence_domain(x).require("inner domain")?;
    let us = aux_grid(grid);
    let ws = tabulate_w(x, &us)?;
    let points = grid.points();
    let upper = points
        .par_iter()
        .map(|&t| {
            let k = |u: f64| Ok(t * ss_char(u, t) / norm_decreasing(x, &Profile::Step(chi(u)?).hardy())?);
            let ks: Vec<f64> = us.iter().zip(&ws).map(|(&u, &w)| t * ss_char(u, t) / w).collect();
            Ok(t / sup_over_u(&k, &us, &ks)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let lower = points.par_iter().map(|&t| x.fundamental(t)).collect::<Result<Vec<f64>>>()?;
    // the two bounds are computed independently; keep the bracket ordered
    let upper: Vec<f64> = upper.iter().zip(&lower).map(|(u, l)| u.max(*l)).collect();
    Ok(RangeResult {
        closed_form: None,
        grid: *grid,
        points,
        fundamental_lower: lower,
        fundamental_upper: upper,
        notes: vec!["lower: phi_X; upper: t / sup_u t SSchi_u(t) / W_X(u)".into()],
    })
}

/// 𝒟_X = 𝔇[S, 𝔑[S, X]]. Exact for Marcinkiewicz X (the inner range is
/// M_Ψ); for Lorentz X bracketed by sup_u t·SS′χ_(0,u)(t)·Ψ(u)/u ≤ φ_𝒟 ≤ φ_X.
pub fn functor_dx(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<DomainResult> {
    existence_range(x).require("inner range")?;
    match canonical(x) {
        SpaceSpec::Marcinkiewicz(phi) => {
            let inner = SpaceSpec::Marcinkiewicz(PhiExpr::psi_of(phi));
            let mut d = domain(&inner, grid).map_err(|e| Error::Existence(format!("outer domain: {e}")))?;
            d.notes.push("inner range M_Psi in closed form".into());
            Ok(d)
        }
        SpaceSpec::Lorentz(phi) => {
            let us = aux_grid(grid);
            let psis = us.par_iter().map(|&u| Ok(lorentz_pair(&phi, u)?.0)).collect::<Result<Vec<f64>>>()?;
            let points = grid.points();
            let lower = points
                .par_iter()
                .map(|&t| {
                    let k = |u: f64| Ok(t * ssprime_char(u, t) * lorentz_pair(&phi, u)?.0 / u);
                    let ks: Vec<f64> =
                        us.iter().zip(&psis).map(|(&u, &p)| t * ssprime_char(u, t) * p / u).collect();
                    sup_over_u(&k, &us, &ks)
                })
                .collect::<Result<Vec<f64>>>()?;
            let upper = points.par_iter().map(|&t| x.fundamental(t)).collect::<Result<Vec<f64>>>()?;
            let lower: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| l.min(*u)).collect();
            Ok(DomainResult {
                space: None,
                grid: *grid,
                points,
                fundamental: lower,
                fundamental_upper: upper,
                notes: vec!["lower: sup_u t SS'chi_u(t) Psi(u)/u; upper: phi_X".into()],
            })
        }
        other => Err(Error::Unsupported(format!("functor D for {}", other.name()))),
    }
}

/// Upper fundamentals of ℛ_X and of ℛ_Y with Y = M_{φ_ℛX}.
pub fn rx_idempotence_check(x: &SpaceSpec, grid: &EvaluationGrid, rel: f64) -> Result<EquivalenceReport> {
    let first = functor_rx(x, grid)?;
    let y = SpaceSpec::Marcinkiewicz(first.upper_phi()?);
    let second = functor_rx(&y, grid)?;
    let ratios: Vec<f64> =
        second.fundamental_upper.iter().zip(&first.fundamental_upper).map(|(a, b)| a / b).collect();
    Ok(EquivalenceReport::from_ratios(*grid, &first.points, &ratios, Band::around_one(rel)))
}

/// R(X) = Λ_{W_X}, with the comparison of ‖min(1, t/·)‖_X against
/// ‖1/(1 + ·/t)‖_X (ratio in [1, 2]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedType {
    pub lorentz_parameter: PhiExpr,
    pub points: Vec<f64>,
    pub fundamental: Vec<f64>,
    pub comparison: EquivalenceReport,
}

pub fn restricted_type_space(x: &SpaceSpec, grid: &EvaluationGrid) -> Result<RestrictedType> {
    let d = domain(x, grid)?;
    let other = d
        .points
        .par_iter()
        .map(|&t| {
            let h = PhiExpr::constant(1.0) / (PhiExpr::constant(1.0) + PhiExpr::t() * PhiExpr::constant(1.0 / t));
            norm_decreasing(x, &Profile::Analytic(h, vec![t]))
        })
        .collect::<Result<Vec<f64>>>()?;
    let ratios: Vec<f64> = d.fundamental.iter().zip(&other).map(|(a, b)| a / b).collect();
    let slack = 1e-9;
    let comparison = EquivalenceReport::from_ratios(*grid, &d.points, &ratios, Band::new(1.0 - slack, 2.0 + slack));
    Ok(RestrictedType {
        lorentz_parameter: PhiExpr::table(&d.points, &d.fundamental)?,
        points: d.points,
        fundamental: d.fundamental,
        comparison,
    })
}

/// Per-point outcome of the SS′ test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaracPoint {
    pub t: f64,
    /// max_s SS′g_t(s)·s/φ(s) over the grid.
    pub upper_ratio: f64,
    /// SS′g_t(t)·t/φ(t).
    pub lower_ratio: f64,
    /// Smallest K passing at this t.
    pub k_needed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaracReport {
    pub k: f64,
    pub points: Vec<CaracPoint>,
    pub smallest_k: f64,
    pub pass: bool,
}

pub const DEFAULT_K: f64 = 16.0;

fn ssprime(g: &DecreasingStep) -> Profile {
    Profile::Step(g.as_step().clone()).adjoint().hardy()
}

/// SS′g_t(s) ≤ Kφ(s)/s for all grid s, and SS′g_t(t) ≥ φ(t)/(Kt).
pub fn carac_rx_check(
    phi: &PhiExpr,
    family: &(dyn Fn(f64) -> Result<DecreasingStep> + Sync),
    k: f64,
    grid: &EvaluationGrid,
) -> Result<CaracReport> {
    let pts = grid.points();
    let scale = pts.iter().map(|&s| Ok(s / phi.eval(s)?)).collect::<Result<Vec<f64>>>()?;
    let points = pts
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let h = ssprime(&family(t)?);
            let mut upper: f64 = 0.0;
            for (&s, &c) in pts.iter().zip(&scale) {
                upper = upper.max(h.value(s)? * c);
            }
            let lower = h.value(t)? * scale[i];
            let k_needed = upper.max(1.0 / lower);
            Ok(CaracPoint { t, upper_ratio: upper, lower_ratio: lower, k_needed, pass: k_needed <= k })
        })
        .collect::<Result<Vec<_>>>()?;
    let smallest_k = points.iter().map(|p| p.k_needed).fold(1.0, f64::max);
    Ok(CaracReport { k, pass: points.iter().all(|p| p.pass), points, smallest_k })
}

/// Two-sided φ(t)/(Kt) ≤ SS′g(t) ≤ Kφ(t)/t for a single g.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterioReport {
    pub k: f64,
    pub ratios: EquivalenceReport,
    pub smallest_k: f64,
    pub pass: bool,
    pub verdict: String,
}

pub fn criterio_dlambda_check(phi: &PhiExpr, g: &DecreasingStep, k: f64, grid: &EvaluationGrid) -> Result<CriterioReport> {
    let h = ssprime(g);
    let pts = grid.points();
    let ratios = pts.par_iter().map(|&t| Ok(h.value(t)? * t / phi.eval(t)?)).collect::<Result<Vec<f64>>>()?;
    let rep = EquivalenceReport::from_ratios(*grid, &pts, &ratios, Band::new(1.0 / k, k));
    let smallest_k = rep.ratio_max.max(1.0 / rep.ratio_min).max(1.0);
    let pass = rep.pass;
    let verdict = if pass {
        format!("D_Lambda_phi = Lambda_phi certified at level {k} on grid")
    } else {
        format!("not certified at level {k} (needs {smallest_k:.4e})")
    };
    Ok(CriterioReport { k, ratios: rep, smallest_k, pass, verdict })
}

/// Decreasing step approximating φ′: slope of φ on geometric cells of
/// [lo, hi], φ(lo)/lo on (0, lo], zero beyond hi. Slopes are made
/// nonincreasing by a running minimum.
pub fn density_step(phi: &PhiExpr, lo: f64, hi: f64, per_decade: usize) -> Result<DecreasingStep> {
    if !(lo > 0.0 && hi > lo && per_decade > 0) {
        return Err(Error::InvalidInput(format!("density grid [{lo}, {hi}] x {per_decade}")));
    }
    let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize + 1;
    let bs = geomspace(lo, hi, n);
    let vals = bs.iter().map(|&b| phi.eval(b)).collect::<Result<Vec<f64>>>()?;
    let mut vs = Vec::with_capacity(n);
    let mut cur = vals[0] / bs[0];
    vs.push(cur);
    for i in 1..n {
        cur = cur.min((vals[i] - vals[i - 1]) / (bs[i] - bs[i - 1])).max(0.0);
        vs.push(cur);
    }
    DecreasingStep::new(bs, vs)
}
