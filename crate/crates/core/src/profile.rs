//! Evaluable nonnegative functions on (0, ∞) produced by operators.
//!
//! A profile knows its value, its primitive ∫₀ᵗ, its density −h′, its
//! downward jumps and the knots where it is not smooth. Steps, S of a step
//! and S′ of a step are evaluated in closed form; deeper nestings fall back
//! to quadrature on the inner profile.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::phifun::PhiExpr;
use crate::quad::{self, Tolerance};
use crate::stepfn::StepFunction;

#[derive(Debug, Clone)]
pub enum Profile {
    Step(StepFunction),
    /// S h(t) = (1/t) ∫₀ᵗ h.
    Hardy(Arc<Profile>),
    /// S′ h(t) = ∫ₜ^∞ h(s)/s ds.
    Adjoint(Arc<Profile>),
    Scaled(f64, Arc<Profile>),
    Sum(Arc<Profile>, Arc<Profile>),
    /// A smooth expression, with points worth splitting quadratures at.
    Analytic(PhiExpr, Vec<f64>),
    /// S²χ_(0,t₀) in closed form.
    HardySquaredChar(f64),
}

fn tol() -> Tolerance {
    Tolerance { rel: 1e-12, ..Tolerance::default() }
}

/// ∫₀ᵗ f, split at the knots below t.
pub(crate) fn integrate_to(f: &dyn Fn(f64) -> Result<f64>, t: f64, knots: &[f64]) -> Result<f64> {
    let inner: Vec<f64> = knots.iter().copied().filter(|&k| k > 0.0 && k < t).collect();
    let first = inner.first().copied().unwrap_or(t);
    let mut total = quad::from_zero(f, first, tol())?;
    if first < t {
        total += quad::with_knots(f, first, t, &inner, tol())?;
    }
    Ok(total)
}

/// ∫ₜ^∞ f, split at the knots above t; `end` cuts the range when f vanishes
/// beyond it.
pub(crate) fn integrate_from(
    f: &dyn Fn(f64) -> Result<f64>,
    t: f64,
    knots: &[f64],
    end: Option<f64>,
) -> Result<f64> {
    let above: Vec<f64> = knots.iter().copied().filter(|&k| k > t).collect();
    match end {
        Some(e) if e <= t => Ok(0.0),
        Some(e) => quad::with_knots(f, t, e, &above, tol()),
        None => {
            let last = above.last().copied().unwrap_or(t);
            let mut total = 0.0;
            if last > t {
                total += quad::with_knots(f, t, last, &above, tol())?;
            }
            Ok(total + quad::to_infinity(f, last, tol())?)
        }
    }
}

/// Antiderivative in u of lnⁿ(t/u)/n!, namely u·Σₖ₌₀ⁿ lnᵏ(t/u)/k!.
fn log_power_antider(n: usize, t: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let l = (t / u).ln();
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..=n {
        term *= l / k as f64;
        sum += term;
    }
    u * sum
}

/// ∫₀ᵗ Sⁿf for a step f: ∫₀ᵗ f(u) lnⁿ(t/u)/n! du.
fn iterated_hardy_primitive(n: usize, f: &StepFunction, t: f64) -> f64 {
    let mut acc = 0.0;
    for (a, b, v) in f.pieces() {
        if a >= t {
            break;
        }
        acc += v * (log_power_antider(n, t, b.min(t)) - log_power_antider(n, t, a));
    }
    acc
}

/// S′f(t) for a step f; +∞ at t = 0 when f(0+) > 0.
pub fn adjoint_step_value(f: &StepFunction, t: f64) -> f64 {
    let mut acc = 0.0;
    for (a, b, v) in f.pieces() {
        if t < b {
            let lo = t.max(a);
            if lo <= 0.0 {
                if v > 0.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            acc += v * (b / lo).ln();
        }
    }
    acc
}

fn merge_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl Profile {
    pub fn step(f: StepFunction) -> Self {
        Profile::Step(f)
    }

    pub fn hardy(self) -> Self {
        Profile::Hardy(Arc::new(self))
    }

    pub fn adjoint(self) -> Self {
        Profile::Adjoint(Arc::new(self))
    }

    pub fn scaled(self, c: f64) -> Self {
        Profile::Scaled(c, Arc::new(self))
    }

    pub fn plus(self, o: Profile) -> Self {
        Profile::Sum(Arc::new(self), Arc::new(o))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("profile evaluated at t = {t}")));
        }
        match self {
            Profile::Step(f) => Ok(f.eval(t)),
            Profile::Hardy(g) => Ok(g.primitive(t)? / t),
            Profile::Adjoint(g) => match &**g {
                Profile::Step(f) => Ok(adjoint_step_value(f, t)),
                _ => {
                    let f = |s: f64| Ok(g.value(s)? / s);
                    integrate_from(&f, t, &g.knots(), g.support_end())
                }
            },
            Profile::Scaled(c, g) => Ok(c * g.value(t)?),
            Profile::Sum(a, b) => Ok(a.value(t)? + b.value(t)?),
            Profile::Analytic(w, _) => w.eval(t),
            Profile::HardySquaredChar(t0) => Ok(crate::operators::ss_char(*t0, t)),
        }
    }

    /// Sⁿf with f a step, as (n, f).
    fn hardy_tower(&self) -> Option<(usize, &StepFunction)> {
        match self {
            Profile::Step(f) => Some((0, f)),
            Profile::Hardy(g) => g.hardy_tower().map(|(n, f)| (n + 1, f)),
            _ => None,
        }
    }

    /// ∫₀ᵗ h.
    pub fn primitive(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        match self {
            Profile::Step(f) => Ok(iterated_hardy_primitive(0, f, t)),
            Profile::Hardy(g) => match self.hardy_tower() {
                Some((n, f)) => Ok(iterated_hardy_primitive(n, f, t)),
                None => {
                    let f = |s: f64| Ok(g.primitive(s)? / s);
                    integrate_to(&f, t, &g.knots())
                }
            },
            Profile::Adjoint(g) => Ok(g.primitive(t)? + t * self.value(t)?),
            Profile::Scaled(c, g) => Ok(c * g.primitive(t)?),
            Profile::Sum(a, b) => Ok(a.primitive(t)? + b.primitive(t)?),
            Profile::Analytic(w, k) => integrate_to(&|s| w.eval(s), t, k),
            Profile::HardySquaredChar(t0) => {
                if t <= *t0 {
                    Ok(t)
                } else {
                    let l = (t / t0).ln();
                    Ok(t0 * (1.0 + l + 0.5 * l * l))
                }
            }
        }
    }

    /// ∫₀ˣ h at each point of an increasing mesh. Closed-form primitives
    /// are evaluated pointwise, the others accumulated cell by cell.
    pub fn primitives_on(&self, xs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Profile::Scaled(c, g) => Ok(g.primitives_on(xs)?.into_iter().map(|v| c * v).collect()),
            Profile::Sum(a, b) => {
                Ok(a.primitives_on(xs)?.into_iter().zip(b.primitives_on(xs)?).map(|(u, v)| u + v).collect())
            }
            Profile::Step(_) | Profile::HardySquaredChar(_) => xs.iter().map(|&x| self.primitive(x)).collect(),
            Profile::Hardy(_) if self.hardy_tower().is_some() => xs.iter().map(|&x| self.primitive(x)).collect(),
            Profile::Adjoint(g) if matches!(**g, Profile::Step(_)) => xs.iter().map(|&x| self.primitive(x)).collect(),
            _ => {
                let Some(&x0) = xs.first() else { return Ok(vec![]) };
                let knots = self.knots();
                let f = |s: f64| self.value(s);
                let mut acc = self.primitive(x0)?;
                let mut out = Vec::with_capacity(xs.len());
                out.push(acc);
                for w in xs.windows(2) {
                    let inner: Vec<f64> = knots.iter().copied().filter(|&k| k > w[0] && k < w[1]).collect();
                    acc += quad::with_knots(&f, w[0], w[1], &inner, tol())?;
                    out.push(acc);
                }
                Ok(out)
            }
        }
    }

    /// h**(t) = (1/t)∫₀ᵗ h, valid as the maximal function when h is decreasing.
    pub fn mean(&self, t: f64) -> Result<f64> {
        Ok(self.primitive(t)? / t)
    }

    /// −h′(t) away from knots.
    pub fn density(&self, t: f64) -> Result<f64> {
        match self {
            Profile::Step(_) => Ok(0.0),
            Profile::Hardy(g) => Ok((self.value(t)? - g.value(t)?) / t),
            Profile::Adjoint(g) => Ok(g.value(t)? / t),
            Profile::Scaled(c, g) => Ok(c * g.density(t)?),
            Profile::Sum(a, b) => Ok(a.density(t)? + b.density(t)?),
            Profile::Analytic(w, _) => Ok(-w.derivative(t)?),
            Profile::HardySquaredChar(t0) => Ok(if t <= *t0 { 0.0 } else { t0 * (t / t0).ln() / (t * t) }),
        }
    }

    /// Downward jumps (location, h(t−) − h(t+)).
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        match self {
            Profile::Step(f) => {
                let vs = f.values();
                f.breakpoints()
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| (b, vs[i] - vs.get(i + 1).copied().unwrap_or(0.0)))
                    .filter(|j| j.1 != 0.0)
                    .collect()
            }
            Profile::Hardy(_) | Profile::Adjoint(_) | Profile::Analytic(..) | Profile::HardySquaredChar(_) => vec![],
            Profile::Scaled(c, g) => g.jumps().into_iter().map(|(t, d)| (t, c * d)).collect(),
            Profile::Sum(a, b) => {
                let mut all = a.jumps();
                all.extend(b.jumps());
                all.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut out: Vec<(f64, f64)> = Vec::with_capacity(all.len());
                for (t, d) in all {
                    match out.last_mut() {
                        Some(last) if last.0 == t => last.1 += d,
                        _ => out.push((t, d)),
                    }
                }
                out
            }
        }
    }

    /// Points where h is not smooth, sorted.
    pub fn knots(&self) -> Vec<f64> {
        match self {
            Profile::Step(f) => f.breakpoints().to_vec(),
            Profile::Hardy(g) | Profile::Adjoint(g) | Profile::Scaled(_, g) => g.knots(),
            Profile::Sum(a, b) => {
                let mut v = a.knots();
                v.extend(b.knots());
                merge_sorted(v)
            }
            Profile::Analytic(_, k) => k.clone(),
            Profile::HardySquaredChar(t0) => vec![*t0],
        }
    }

    /// h vanishes beyond this point, if such a point is known.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Profile::Step(f) => Some(f.support_end()),
            Profile::Hardy(g) => match g.support_end() {
                Some(e) if e == 0.0 => Some(0.0),
                _ => None,
            },
            Profile::Adjoint(g) | Profile::Scaled(_, g) => g.support_end(),
            Profile::Sum(a, b) => Some(a.support_end()?.max(b.support_end()?)),
            Profile::Analytic(..) | Profile::HardySquaredChar(_) => None,
        }
    }

    /// ∫₀^∞ h.
    pub fn total(&self) -> Result<f64> {
        match self {
            Profile::Step(f) => Ok(f.integral()),
            Profile::Hardy(g) => {
                if g.total()? == 0.0 {
                    Ok(0.0)
                } else {
                    Err(Error::Divergent("S h decays like 1/t and is not integrable".into()))
                }
            }
            Profile::Adjoint(g) => g.total(),
            Profile::Scaled(c, g) => Ok(c * g.total()?),
            Profile::Sum(a, b) => Ok(a.total()? + b.total()?),
            Profile::Analytic(w, k) => {
                let f = |s: f64| w.eval(s);
                let split = k.first().copied().unwrap_or(1.0);
                Ok(integrate_to(&f, split, k)? + integrate_from(&f, split, k, None)?)
            }
            Profile::HardySquaredChar(_) => Err(Error::Divergent("S²χ decays like ln(t)/t".into())),
        }
    }

    /// lim h(t) as t → 0⁺, possibly +∞.
    pub fn value_at_zero(&self) -> Result<f64> {
        match self {
            Profile::Step(f) => Ok(f.eval(0.0)),
            Profile::Hardy(g) => g.value_at_zero(),
            Profile::Adjoint(g) => {
                if g.value_at_zero()? > 0.0 {
                    return Ok(f64::INFINITY);
                }
                match self.knots().first() {
                    Some(&k) => self.value(0.5 * k),
                    None => Ok(0.0),
                }
            }
            Profile::Scaled(c, g) => {
                let v = g.value_at_zero()?;
                Ok(if *c == 0.0 { 0.0 } else { c * v })
            }
            Profile::Sum(a, b) => Ok(a.value_at_zero()? + b.value_at_zero()?),
            Profile::HardySquaredChar(_) => Ok(1.0),
            Profile::Analytic(w, _) => {
                let (near, far) = (w.eval(1e-200)?, w.eval(1e-300)?);
                if far > 2.0 * near {
                    Ok(f64::INFINITY)
                } else {
                    Ok(far)
                }
            }
        }
    }
}

impl From<StepFunction> for Profile {
    fn from(f: StepFunction) -> Self {
        Profile::Step(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(t: f64) -> Profile {
        Profile::Step(StepFunction::indicator(0.0, t).unwrap())
    }

    #[test]
    fn hardy_of_indicator() {
        let p = chi(2.0).hardy();
        for s in [0.5, 2.0, 5.0] {
            assert!((p.value(s).unwrap() - (2.0f64 / s).min(1.0)).abs() < 1e-15);
        }
        // ∫₀ˢ min(1, 2/u) du = 2 + 2 ln(s/2) for s > 2
        let s: f64 = 9.0;
        assert!((p.primitive(s).unwrap() - (2.0 + 2.0 * (s / 2.0).ln())).abs() < 1e-13);
        assert!((p.density(5.0).unwrap() - 2.0 / 25.0).abs() < 1e-15);
        assert_eq!(p.density(1.0).unwrap(), 0.0);
    }

    #[test]
    fn adjoint_of_indicator() {
        let p = chi(1.0).adjoint();
        assert!((p.value((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p.value(2.0).unwrap(), 0.0);
        // ∫₀ᵗ ln(1/s) ds = t(1 + ln(1/t))
        let t: f64 = 0.3;
        assert!((p.primitive(t).unwrap() - t * (1.0 + (1.0 / t).ln())).abs() < 1e-15);
        assert_eq!(p.value_at_zero().unwrap(), f64::INFINITY);
        let q = Profile::Step(StepFunction::indicator(1.0, std::f64::consts::E).unwrap()).adjoint();
        assert!((q.value(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((q.value_at_zero().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nested_matches_closed_form() {
        // S²χ_(0,1)(s) = (1/s)(1 + ln s) for s > 1
        let p = chi(1.0).hardy().hardy();
        for s in [0.5, 1.0, 3.0, 100.0] {
            let exact = if s <= 1.0 { 1.0 } else { (1.0 + f64::ln(s)) / s };
            assert!((p.value(s).unwrap() / exact - 1.0).abs() < 1e-10, "s={s}");
        }
        // S S′ = S + S′ on characteristic functions
        let a = chi(1.0).adjoint().hardy();
        let b = chi(1.0).hardy().adjoint();
        for s in [0.01f64, 0.5, 2.0, 40.0] {
            let exact = if s <= 1.0 { 1.0 + (1.0 / s).ln() } else { 1.0 / s };
            assert!((a.value(s).unwrap() / exact - 1.0).abs() < 1e-10, "s={s}");
            assert!((b.value(s).unwrap() / exact - 1.0).abs() < 1e-9, "s={s}");
        }
    }

    #[test]
    fn cubed_char_closed_form() {
        // S³χ_(0,1)(s) = (1 + L + L²/2)/s, L = ln s, for s > 1
        let p = chi(1.0).hardy().hardy().hardy();
        for s in [0.3, 2.0, 50.0, 1e5] {
            let l = f64::ln(s);
            let exact = if s <= 1.0 { 1.0 } else { (1.0 + l + 0.5 * l * l) / s };
            assert!((p.value(s).unwrap() / exact - 1.0).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn squared_char_matches_nested() {
        let a = Profile::HardySquaredChar(2.0);
        let b = chi(2.0).hardy().hardy();
        for s in [0.5, 2.0, 3.0, 1e3, 1e200] {
            assert!((a.value(s).unwrap() / b.value(s).unwrap() - 1.0).abs() < 1e-12);
            assert!((a.primitive(s).unwrap() / b.primitive(s).unwrap() - 1.0).abs() < 1e-9, "s={s}");
        }
        assert!((a.density(7.0).unwrap() / b.density(7.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cumulative_primitives() {
        let p = chi(1.0).adjoint().hardy().hardy();
        let xs = [0.1, 0.5, 1.0, 3.0, 40.0];
        let fast = p.primitives_on(&xs).unwrap();
        for (x, v) in xs.iter().zip(fast) {
            assert!((v / p.primitive(*x).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_profile() {
        let w = Profile::Analytic(PhiExpr::t().powf(-0.5), vec![]);
        assert!((w.primitive(4.0).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(w.value_at_zero().unwrap(), f64::INFINITY);
        assert!((w.density(4.0).unwrap() - 0.5 * 4f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn jumps_and_totals() {
        let f = StepFunction::new(vec![1.0, 3.0], vec![2.0, 1.0]).unwrap();
        let p = Profile::Step(f.clone()).plus(Profile::Step(f).scaled(2.0));
        assert_eq!(p.jumps(), vec![(1.0, 3.0), (3.0, 3.0)]);
        assert_eq!(p.total().unwrap(), 12.0);
        assert!(chi(1.0).hardy().total().unwrap_err().is_divergent());
        assert_eq!(chi(1.0).adjoint().total().unwrap(), 1.0);
    }
}
