//! Rearrangement-invariant spaces: norms, associates, range-norm bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus;
use crate::error::{Error, Result};
use crate::operators::OperatorSpec;
use crate::phifun::{associate_fun, PhiExpr};
use crate::profile::{integrate_from, integrate_to, Profile};
use crate::search::{self, geomspace};
use crate::stepfn::{DecreasingStep, StepFunction};

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// ‖f‖ = ∫ f* dφ.
    Lorentz(PhiExpr),
    /// ‖f‖ = sup f**(t)φ(t).
    Marcinkiewicz(PhiExpr),
    /// ‖f‖ = sup f*(t)φ(t).
    WeakLorentz(PhiExpr),
    /// ‖f‖ = ∫₀¹ f*.
    L1plusLinf,
    /// ‖f‖ = max(‖f‖₁, ‖f‖∞).
    L1capLinf,
}

impl SpaceSpec {
    /// L¹ as the Lorentz space with φ(t) = t.
    pub fn l1() -> Self {
        SpaceSpec::Lorentz(PhiExpr::t())
    }

    pub fn name(&self) -> String {
        match self {
            SpaceSpec::Lorentz(p) => format!("Lorentz[{p}]"),
            SpaceSpec::Marcinkiewicz(p) => format!("Marcinkiewicz[{p}]"),
            SpaceSpec::WeakLorentz(p) => format!("WeakLorentz[{p}]"),
            SpaceSpec::L1plusLinf => "L1+Linf".into(),
            SpaceSpec::L1capLinf => "L1capLinf".into(),
        }
    }

    pub fn associate(&self) -> Result<SpaceSpec> {
        match self {
            SpaceSpec::Lorentz(p) => Ok(SpaceSpec::Marcinkiewicz(associate_fun(p))),
            SpaceSpec::Marcinkiewicz(p) => Ok(SpaceSpec::Lorentz(associate_fun(p))),
            SpaceSpec::L1plusLinf => Ok(SpaceSpec::L1capLinf),
            SpaceSpec::L1capLinf => Ok(SpaceSpec::L1plusLinf),
            SpaceSpec::WeakLorentz(_) => {
                Err(Error::Unsupported("weak-Lorentz spaces have no associate here".into()))
            }
        }
    }

    /// Fundamental function ‖χ_(0,t)‖.
    pub fn fundamental(&self, t: f64) -> Result<f64> {
        norm(self, &StepFunction::indicator(0.0, t)?)
    }

    pub fn to_json(&self) -> Value {
        match self {
            SpaceSpec::Lorentz(p) => json!({"space": "lorentz", "phi": p.to_json()}),
            SpaceSpec::Marcinkiewicz(p) => json!({"space": "marcinkiewicz", "phi": p.to_json()}),
            SpaceSpec::WeakLorentz(p) => json!({"space": "weak_lorentz", "phi": p.to_json()}),
            SpaceSpec::L1plusLinf => json!({"space": "l1_plus_linf"}),
            SpaceSpec::L1capLinf => json!({"space": "l1_cap_linf"}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: String| Error::InvalidInput(format!("space: {w}"));
        let m = v.as_object().ok_or_else(|| bad("expected an object".into()))?;
        let kind = m.get("space").and_then(Value::as_str).ok_or_else(|| bad("missing \"space\"".into()))?;
        let phi = || PhiExpr::from_json(m.get("phi").ok_or_else(|| bad(format!("{kind} needs \"phi\"")))?);
        match kind {
            "lorentz" => Ok(SpaceSpec::Lorentz(phi()?)),
            "marcinkiewicz" => Ok(SpaceSpec::Marcinkiewicz(phi()?)),
            "weak_lorentz" => Ok(SpaceSpec::WeakLorentz(phi()?)),
            "l1_plus_linf" => Ok(SpaceSpec::L1plusLinf),
            "l1_cap_linf" => Ok(SpaceSpec::L1capLinf),
            "l1" => Ok(SpaceSpec::l1()),
            other => Err(bad(format!("unknown space {other:?}"))),
        }
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SpaceSpec::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// ‖f‖_X for a step f.
pub fn norm(x: &SpaceSpec, f: &StepFunction) -> Result<f64> {
    norm_decreasing_step(x, &f.rearrange())
}

fn norm_decreasing_step(x: &SpaceSpec, d: &DecreasingStep) -> Result<f64> {
    if d.is_zero() {
        return Ok(0.0);
    }
    let bs = d.breakpoints();
    let vs = d.values();
    let next = |i: usize| vs.get(i + 1).copied().unwrap_or(0.0);
    match x {
        SpaceSpec::Lorentz(phi) => {
            // Abel summation of ∫ f* dφ
            let mut acc = 0.0;
            for (i, &b) in bs.iter().enumerate() {
                acc += phi.eval(b)? * (vs[i] - next(i));
            }
            Ok(acc)
        }
        SpaceSpec::WeakLorentz(phi) => {
            let mut best: f64 = 0.0;
            for (i, &b) in bs.iter().enumerate() {
                best = best.max(vs[i] * phi.eval(b)?);
            }
            Ok(best)
        }
        SpaceSpec::Marcinkiewicz(phi) => marcinkiewicz_step(phi, d),
        SpaceSpec::L1plusLinf => Ok(d.primitive().eval(1.0)),
        SpaceSpec::L1capLinf => Ok(d.integral().max(vs[0])),
    }
}

/// sup_t f**(t)φ(t): on each piece f** φ = (c/t + h)φ, maximized by
/// sampling plus golden section; beyond the support f**φ = ‖f‖₁ φ(t)/t is
/// nonincreasing, so the last breakpoint covers the tail.
fn marcinkiewicz_step(phi: &PhiExpr, d: &DecreasingStep) -> Result<f64> {
    let mut best: f64 = 0.0;
    let mut acc = 0.0;
    for (a, b, v) in d.pieces() {
        let f0 = acc;
        let q = |t: f64| Ok((f0 + v * (t - a)) / t * phi.eval(t)?);
        best = best.max(q(b)?);
        if a > 0.0 {
            let xs = geomspace(a, b, 9);
            best = best.max(search::sampled_max(&q, &xs, 2, 1e-10)?.value);
        }
        acc += v * (b - a);
    }
    Ok(best)
}

const SAMPLES_PER_DECADE: f64 = 8.0;
const SPAN: f64 = 1e12;

/// Value at 0 of the interpolating polynomial through (h, v).
fn neville_at_zero(h: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// sup over t > 0 of q, sampled on a log grid around the knots and
/// checked for growth toward 0 and infinity.
fn sup_half_line(q: &dyn Fn(f64) -> Result<f64>, knots: &[f64]) -> Result<f64> {
    let kmin = knots.first().copied().unwrap_or(1.0);
    let kmax = knots.last().copied().unwrap_or(1.0);
    let lo = (kmin / SPAN).max(1e-290);
    let hi = (kmax * SPAN).min(1e290);
    let n = ((hi / lo).log10() * SAMPLES_PER_DECADE).ceil() as usize + 1;
    let mut xs = geomspace(lo, hi, n.max(2));
    xs.extend(knots.iter().copied().filter(|&k| k > lo && k < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let best = search::sampled_max(q, &xs, 6, 1e-9)?.value;

    let mut result = best;
    for (base, toward_zero) in [(lo, true), (hi, false)] {
        let room = if toward_zero { (base / 1e-300).log10() } else { (1e300 / base).log10() };
        if room < 40.0 {
            continue;
        }
        let d = room.min(240.0);
        let point = |frac: f64| {
            let e = d * frac;
            if toward_zero {
                base / 10f64.powf(e)
            } else {
                base * 10f64.powf(e)
            }
        };
        let fracs = [0.25, 0.5, 0.75, 1.0];
        let vs = fracs.iter().map(|&f| q(point(f))).collect::<Result<Vec<f64>>>()?;
        let (v1, v2, v3) = (vs[0], vs[1], vs[3]);
        let (d1, d2) = (v2 - v1, v3 - v2);
        if d1 > 0.0 && d2 > 0.0 && d2 >= 0.75 * d1 && v3 > best * (1.0 + 1e-9) {
            let side = if toward_zero { "t -> 0" } else { "t -> infinity" };
            return Err(Error::Divergent(format!("supremum grows without bound as {side}")));
        }
        result = result.max(v3);
        if vs.windows(2).all(|w| w[1] > w[0]) {
            // bounded slow approach, polynomial in 1/L with L measured from
            // the knots, extrapolated to 1/L = 0
            let center = (kmin * kmax).sqrt();
            let hs: Vec<f64> = fracs.iter().map(|&f| 1.0 / (point(f) / center).ln().abs()).collect();
            let a = neville_at_zero(&hs, &vs);
            if a.is_finite() {
                result = result.max(a);
            }
        }
    }
    Ok(result)
}

/// ‖h‖_X for a nonincreasing profile h.
pub fn norm_decreasing(x: &SpaceSpec, h: &Profile) -> Result<f64> {
    if let Profile::Step(f) = h {
        let d = DecreasingStep::try_from(f.clone())
            .map_err(|_| Error::InvalidInput("profile is not nonincreasing".into()))?;
        return norm_decreasing_step(x, &d);
    }
    let knots = h.knots();
    match x {
        SpaceSpec::Lorentz(phi) => {
            let mut acc = 0.0;
            for (t, jump) in h.jumps() {
                acc += phi.eval(t)? * jump;
            }
            let f = |s: f64| Ok(phi.eval(s)? * h.density(s)?);
            let split = knots.first().copied().unwrap_or(1.0);
            acc += integrate_to(&f, split, &knots)?;
            acc += integrate_from(&f, split, &knots, h.support_end())?;
            Ok(acc)
        }
        SpaceSpec::Marcinkiewicz(phi) => {
            let q = |t: f64| Ok(h.mean(t)? * phi.eval(t)?);
            sup_half_line(&q, &knots)
        }
        SpaceSpec::WeakLorentz(phi) => {
            let q = |t: f64| Ok(h.value(t)? * phi.eval(t)?);
            sup_half_line(&q, &knots)
        }
        SpaceSpec::L1plusLinf => h.primitive(1.0),
        SpaceSpec::L1capLinf => {
            let top = h.value_at_zero()?;
            if !top.is_finite() {
                return Err(Error::Divergent("unbounded near 0".into()));
            }
            Ok(h.total()?.max(top))
        }
    }
}

/// Finite list of decreasing test functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecreasingFamily {
    pub members: Vec<DecreasingStep>,
}

impl DecreasingFamily {
    /// {χ_(0,u)} for u on the given points.
    pub fn characteristic(us: &[f64]) -> Result<Self> {
        Ok(DecreasingFamily { members: us.iter().map(|&u| DecreasingStep::characteristic(u)).collect::<Result<_>>()? })
    }

    pub fn random(count: usize, seed: u64) -> Self {
        DecreasingFamily { members: corpus::decreasing_steps(count, seed) }
    }

    /// Characteristic functions on 24 points per decade of [1e-8, 1e8] plus 64
    /// seeded random members.
    pub fn standard(seed: u64) -> Result<Self> {
        let mut f = Self::characteristic(&geomspace(1e-8, 1e8, 385))?;
        f.members.extend(Self::random(64, seed).members);
        Ok(f)
    }

    pub fn extend(mut self, other: DecreasingFamily) -> Self {
        self.members.extend(other.members);
        self
    }
}

/// ∫ f g for step functions, exact.
pub fn pairing(f: &StepFunction, g: &StepFunction) -> f64 {
    let mut bs: Vec<f64> = f.breakpoints().iter().chain(g.breakpoints()).copied().collect();
    bs.sort_by(f64::total_cmp);
    bs.dedup();
    let mut acc = 0.0;
    let mut prev = 0.0;
    for b in bs {
        acc += f.eval(b) * g.eval(b) * (b - prev);
        prev = b;
    }
    acc
}

/// Largest member ratio of the duality supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub best_member: usize,
}

/// max over g in the family of ∫f*g / ‖T′g‖_{X′}; a lower bound for the
/// optimal-range norm of f.
pub fn range_norm_lower(
    x: &SpaceSpec,
    f: &StepFunction,
    family: &DecreasingFamily,
    op: &OperatorSpec,
) -> Result<LowerBound> {
    if family.members.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let fs = f.rearrange();
    if fs.is_zero() {
        return Ok(LowerBound { value: 0.0, best_member: 0 });
    }
    let dual = x.associate()?;
    let transpose = op.transpose();
    let ratios = family
        .members
        .par_iter()
        .map(|g| {
            let num = pairing(fs.as_step(), g.as_step());
            if num == 0.0 {
                return Ok(0.0);
            }
            let den = norm_decreasing(&dual, &transpose.image(g.as_step())?).map_err(|e| match e {
                Error::Divergent(m) => Error::Existence(format!("T'g has infinite associate norm: {m}")),
                other => other,
            })?;
            Ok(num / den)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (i, v) = ratios
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok(LowerBound { value: v, best_member: i })
}

/// f** ≤ (Sg*)** at the combined breakpoints, near 0 and on 50 tail points.
pub fn range0_membership(f: &StepFunction, g: &StepFunction) -> Result<bool> {
    let fs = f.rearrange();
    if fs.is_zero() {
        return Ok(true);
    }
    let gs = g.rearrange();
    let sg = Profile::Step(gs.as_step().clone()).hardy();
    let mut pts: Vec<f64> = fs.breakpoints().iter().chain(gs.breakpoints()).copied().collect();
    pts.sort_by(f64::total_cmp);
    let first = pts[0];
    let last = *pts.last().unwrap();
    pts.push(first * 1e-6);
    pts.extend(geomspace(last, last * 1e6, 50));
    for t in pts {
        let lhs = fs.doublestar(t)?;
        let rhs = sg.mean(t)?;
        if lhs > rhs * (1.0 + 1e-12) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// min ‖g‖_X over candidates g with f** ≤ (Sg*)**.
pub fn range0_upper(x: &SpaceSpec, f: &StepFunction, candidates: &DecreasingFamily) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let norms = candidates
        .members
        .par_iter()
        .map(|g| {
            if range0_membership(f, g.as_step())? {
                norm(x, g.as_step()).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<Option<f64>>>>()?;
    norms.into_iter().flatten().reduce(f64::min).ok_or(Error::NoFeasibleCandidate)
}
