//! Compactly supported step functions on (0, ∞).

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparisons of exactly computed values.
pub const EXACT_TOL: f64 = 1e-12;

/// Piecewise-constant f with f = values[i] on (breakpoints[i-1], breakpoints[i]]
/// (breakpoints[-1] = 0) and f = 0 beyond the last breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;
    fn try_from(r: RawStep) -> Result<Self> {
        StepFunction::new(r.breakpoints, r.values)
    }
}

impl From<StepFunction> for RawStep {
    fn from(s: StepFunction) -> Self {
        RawStep { breakpoints: s.breakpoints, values: s.values }
    }
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut prev = 0.0;
        for &b in &breakpoints {
            if !(b.is_finite() && b > prev) {
                return Err(Error::InvalidInput(format!(
                    "breakpoints must be finite, positive and strictly increasing (got {b} after {prev})"
                )));
            }
            prev = b;
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidInput(format!("value {v} is not a finite nonnegative number")));
        }
        Ok(Self::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut bs: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<f64> = Vec::with_capacity(values.len());
        for (b, v) in breakpoints.into_iter().zip(values) {
            if vs.last() == Some(&v) {
                *bs.last_mut().unwrap() = b;
            } else {
                bs.push(b);
                vs.push(v);
            }
        }
        while vs.last() == Some(&0.0) {
            vs.pop();
            bs.pop();
        }
        StepFunction { breakpoints: bs, values: vs }
    }

    pub fn zero() -> Self {
        StepFunction { breakpoints: vec![], values: vec![] }
    }

    /// χ_(a,b).
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 {
            Self::new(vec![b], vec![1.0])
        } else {
            Self::new(vec![a, b], vec![0.0, 1.0])
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Pieces as (left, right, value).
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.iter().enumerate().map(move |(i, &b)| {
            let a = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
            (a, b, self.values[i])
        })
    }

    pub fn support_end(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let i = self.breakpoints.partition_point(|&b| b < t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// Value on the piece to the right of t.
    pub fn eval_right(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        self.pieces().map(|(a, b, v)| v * (b - a)).sum()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.breakpoints.clone(), self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &StepFunction) -> StepFunction {
        let mut bs: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        bs.sort_by(f64::total_cmp);
        bs.dedup();
        let vs = bs.iter().map(|&b| self.eval(b) + other.eval(b)).collect();
        Self::canonical(bs, vs)
    }

    /// |{f > r}|.
    pub fn distribution(&self, r: f64) -> f64 {
        self.pieces().filter(|p| p.2 > r).map(|(a, b, _)| b - a).sum()
    }

    pub fn rearrange(&self) -> DecreasingStep {
        let mut pieces: Vec<(f64, f64)> =
            self.pieces().filter(|p| p.2 > 0.0).map(|(a, b, v)| (v, b - a)).collect();
        pieces.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut bs = Vec::with_capacity(pieces.len());
        let mut vs = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for (v, len) in pieces {
            acc += len;
            bs.push(acc);
            vs.push(v);
        }
        DecreasingStep(Self::canonical(bs, vs))
    }

    pub fn primitive(&self) -> PiecewiseLinear {
        let mut knots = Vec::with_capacity(self.len() + 1);
        let mut vals = Vec::with_capacity(self.len() + 1);
        knots.push(0.0);
        vals.push(0.0);
        let mut acc = 0.0;
        for (a, b, v) in self.pieces() {
            acc += v * (b - a);
            knots.push(b);
            vals.push(acc);
        }
        PiecewiseLinear { knots, values: vals }
    }

    /// f**(t) = (1/t) ∫₀ᵗ f*.
    pub fn doublestar(&self, t: f64) -> Result<f64> {
        self.rearrange().doublestar(t)
    }

    /// f ≺ g with the default tolerance.
    pub fn hlp_leq(&self, g: &StepFunction) -> bool {
        self.hlp_leq_tol(g, EXACT_TOL)
    }

    /// ∫₀ᵗ f* ≤ ∫₀ᵗ g* + tol·max(1, ‖g‖₁) at every breakpoint of either
    /// rearrangement. Both primitives are piecewise linear there, so this is
    /// exact.
    pub fn hlp_leq_tol(&self, g: &StepFunction, tol: f64) -> bool {
        self.hlp_violation(g, tol).is_none()
    }

    /// First t (with both primitives there) where the relation above fails.
    pub fn hlp_violation(&self, g: &StepFunction, tol: f64) -> Option<(f64, f64, f64)> {
        let fp = self.rearrange().primitive();
        let gp = g.rearrange().primitive();
        let slack = tol * gp.final_value().max(1.0);
        let mut xs: Vec<f64> = fp.knots.iter().chain(&gp.knots).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.into_iter()
            .map(|x| (x, fp.eval(x), gp.eval(x)))
            .find(|&(_, a, b)| a > b + slack)
    }
}

/// A step function with nonincreasing values.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DecreasingStep(StepFunction);

impl<'de> Deserialize<'de> for DecreasingStep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = StepFunction::deserialize(d)?;
        DecreasingStep::try_from(s).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<StepFunction> for DecreasingStep {
    type Error = Error;
    fn try_from(s: StepFunction) -> Result<Self> {
        if s.is_nonincreasing() {
            Ok(DecreasingStep(s))
        } else {
            Err(Error::InvalidInput("values are not nonincreasing".into()))
        }
    }
}

impl Deref for DecreasingStep {
    type Target = StepFunction;
    fn deref(&self) -> &StepFunction {
        &self.0
    }
}

impl DecreasingStep {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        StepFunction::new(breakpoints, values)?.try_into()
    }

    /// χ_(0,t).
    pub fn characteristic(t: f64) -> Result<Self> {
        Self::new(vec![t], vec![1.0])
    }

    pub fn as_step(&self) -> &StepFunction {
        &self.0
    }

    pub fn into_step(self) -> StepFunction {
        self.0
    }

    pub fn doublestar(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("doublestar needs t > 0, got {t}")));
        }
        Ok(self.primitive().eval(t) / t)
    }
}

/// Continuous piecewise-linear function through (knots[i], values[i]),
/// starting at (0, 0) and constant after the last knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn final_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let i = self.knots.partition_point(|&k| k < t);
        if i >= self.knots.len() {
            return self.final_value();
        }
        let (k0, k1) = (self.knots[i - 1], self.knots[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if t == k1 {
            return v1;
        }
        v0 + (v1 - v0) * (t - k0) / (k1 - k0)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}
