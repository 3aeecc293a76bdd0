//! Hardy-type operators on step functions.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::phifun::{EvaluationGrid, PhiExpr};
use crate::profile::{adjoint_step_value, Profile};
use crate::quad::{self, Tolerance};
use crate::stepfn::StepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    S,
    Sprime,
}

/// Declarative Hardy-type operator.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    HardyS,
    AdjointSprime,
    /// Factors applied right to left.
    Composition(Vec<Factor>),
    /// f ↦ w·∫ f w.
    RankOne(PhiExpr),
    LinearCombo { alpha: f64, first: Box<OperatorSpec>, beta: f64, second: Box<OperatorSpec> },
}

impl OperatorSpec {
    pub fn compose(factors: &[Factor]) -> Self {
        OperatorSpec::Composition(factors.to_vec())
    }

    pub fn combo(alpha: f64, first: OperatorSpec, beta: f64, second: OperatorSpec) -> Self {
        OperatorSpec::LinearCombo { alpha, first: Box::new(first), beta, second: Box::new(second) }
    }

    /// Structural checks plus the rank-one weight test on `grid`.
    pub fn validate(&self, grid: &EvaluationGrid) -> Result<()> {
        match self {
            OperatorSpec::HardyS | OperatorSpec::AdjointSprime => Ok(()),
            OperatorSpec::Composition(f) if f.is_empty() => {
                Err(Error::InvalidOperator("empty composition".into()))
            }
            OperatorSpec::Composition(_) => Ok(()),
            OperatorSpec::RankOne(w) => check_weight(w, grid),
            OperatorSpec::LinearCombo { alpha, first, beta, second } => {
                if !(*alpha >= 0.0 && *beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::InvalidOperator(format!(
                        "combination coefficients must be nonnegative (got {alpha}, {beta})"
                    )));
                }
                first.validate(grid)?;
                second.validate(grid)
            }
        }
    }

    /// Tf as an evaluable profile.
    pub fn image(&self, f: &StepFunction) -> Result<Profile> {
        match self {
            OperatorSpec::HardyS => Ok(Profile::Step(f.clone()).hardy()),
            OperatorSpec::AdjointSprime => Ok(Profile::Step(f.clone()).adjoint()),
            OperatorSpec::Composition(factors) => {
                if factors.is_empty() {
                    return Err(Error::InvalidOperator("empty composition".into()));
                }
                Ok(factors.iter().rev().fold(Profile::Step(f.clone()), |p, fac| match fac {
                    Factor::S => p.hardy(),
                    Factor::Sprime => p.adjoint(),
                }))
            }
            OperatorSpec::RankOne(w) => {
                check_weight(w, &EvaluationGrid::default())?;
                let c = pair_with_weight(f, w)?;
                Ok(Profile::Analytic(w.clone(), vec![]).scaled(c))
            }
            OperatorSpec::LinearCombo { alpha, first, beta, second } => {
                Ok(first.image(f)?.scaled(*alpha).plus(second.image(f)?.scaled(*beta)))
            }
        }
    }

    /// The associate operator T′ (S ↔ S′, compositions reversed; rank-one
    /// kernels are symmetric).
    pub fn transpose(&self) -> OperatorSpec {
        match self {
            OperatorSpec::HardyS => OperatorSpec::AdjointSprime,
            OperatorSpec::AdjointSprime => OperatorSpec::HardyS,
            OperatorSpec::Composition(f) => OperatorSpec::Composition(
                f.iter()
                    .rev()
                    .map(|x| match x {
                        Factor::S => Factor::Sprime,
                        Factor::Sprime => Factor::S,
                    })
                    .collect(),
            ),
            OperatorSpec::RankOne(w) => OperatorSpec::RankOne(w.clone()),
            OperatorSpec::LinearCombo { alpha, first, beta, second } => {
                OperatorSpec::combo(*alpha, first.transpose(), *beta, second.transpose())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            OperatorSpec::HardyS => json!("S"),
            OperatorSpec::AdjointSprime => json!("Sprime"),
            OperatorSpec::Composition(f) => json!({
                "op": "compose",
                "factors": f.iter().map(|x| match x { Factor::S => "S", Factor::Sprime => "Sprime" }).collect::<Vec<_>>(),
            }),
            OperatorSpec::RankOne(w) => json!({"op": "rank_one", "weight": w.to_json()}),
            OperatorSpec::LinearCombo { alpha, first, beta, second } => json!({
                "op": "combo", "alpha": alpha, "first": first.to_json(), "beta": beta, "second": second.to_json(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: String| Error::InvalidOperator(what);
        match v {
            Value::String(s) => match s.as_str() {
                "S" => Ok(OperatorSpec::HardyS),
                "Sprime" => Ok(OperatorSpec::AdjointSprime),
                other => Err(bad(format!("unknown operator {other:?}"))),
            },
            Value::Object(m) => {
                let op = m.get("op").and_then(Value::as_str).ok_or_else(|| bad("missing \"op\"".into()))?;
                match op {
                    "compose" => {
                        let fs = m
                            .get("factors")
                            .and_then(Value::as_array)
                            .ok_or_else(|| bad("compose needs \"factors\"".into()))?;
                        let factors = fs
                            .iter()
                            .map(|x| match x.as_str() {
                                Some("S") => Ok(Factor::S),
                                Some("Sprime") => Ok(Factor::Sprime),
                                _ => Err(bad(format!("bad factor {x}"))),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        if factors.is_empty() {
                            return Err(bad("empty composition".into()));
                        }
                        Ok(OperatorSpec::Composition(factors))
                    }
                    "rank_one" => {
                        let w = m.get("weight").ok_or_else(|| bad("rank_one needs \"weight\"".into()))?;
                        Ok(OperatorSpec::RankOne(PhiExpr::from_json(w)?))
                    }
                    "combo" => {
                        let num = |k: &str| {
                            m.get(k).and_then(Value::as_f64).ok_or_else(|| bad(format!("combo needs \"{k}\"")))
                        };
                        let sub = |k: &str| {
                            OperatorSpec::from_json(m.get(k).ok_or_else(|| bad(format!("combo needs \"{k}\"")))?)
                        };
                        Ok(OperatorSpec::combo(num("alpha")?, sub("first")?, num("beta")?, sub("second")?))
                    }
                    other => Err(bad(format!("unknown op {other:?}"))),
                }
            }
            _ => Err(bad("expected a name or an object".into())),
        }
    }
}

impl Serialize for OperatorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        OperatorSpec::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// w decreasing and w(r) ≥ r^(-1/2)/2 on the grid.
fn check_weight(w: &PhiExpr, grid: &EvaluationGrid) -> Result<()> {
    let pts = grid.points();
    let mut prev = f64::INFINITY;
    for &r in &pts {
        let v = w.eval(r)?;
        if v > prev {
            return Err(Error::InvalidOperator(format!("rank-one weight increases at r = {r:e}")));
        }
        if v < 0.5 / r.sqrt() {
            return Err(Error::InvalidOperator(format!("rank-one weight below r^-1/2 / 2 at r = {r:e}")));
        }
        prev = v;
    }
    Ok(())
}

/// ∫ f·w, piece by piece.
fn pair_with_weight(f: &StepFunction, w: &PhiExpr) -> Result<f64> {
    let tol = Tolerance { rel: 1e-12, ..Tolerance::default() };
    let g = |s: f64| w.eval(s);
    let mut acc = 0.0;
    for (a, b, v) in f.pieces() {
        if v == 0.0 {
            continue;
        }
        let i = if a == 0.0 { quad::from_zero(&g, b, tol)? } else { quad::adaptive(&g, a, b, tol)? };
        acc += v * i;
    }
    Ok(acc)
}

/// Sf(t), exact.
pub fn apply_s(f: &StepFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("S needs t > 0, got {t}")));
    }
    Ok(f.primitive().eval(t) / t)
}

/// S′f(t), exact; +∞ at t = 0 when f(0+) > 0.
pub fn apply_sprime(f: &StepFunction, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("S' needs t >= 0, got {t}")));
    }
    Ok(adjoint_step_value(f, t))
}

pub fn apply(spec: &OperatorSpec, f: &StepFunction, t: f64) -> Result<f64> {
    spec.image(f)?.value(t)
}

/// SS′χ_(0,t₀)(r).
pub fn ssprime_char(t0: f64, r: f64) -> f64 {
    if r <= t0 {
        1.0 + (t0 / r).ln()
    } else {
        t0 / r
    }
}

/// S²χ_(0,t₀)(r).
pub fn ss_char(t0: f64, r: f64) -> f64 {
    if r <= t0 {
        1.0
    } else {
        (t0 / r) * (1.0 + (r / t0).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(t: f64) -> StepFunction {
        StepFunction::indicator(0.0, t).unwrap()
    }

    #[test]
    fn s_examples() {
        assert_eq!(apply_s(&chi(1.0), 2.0).unwrap(), 0.5);
        for s in [0.1, 3.0, 7.0] {
            assert!((apply_s(&chi(3.0), s).unwrap() - (3.0f64 / s).min(1.0)).abs() < 1e-15);
        }
        let f = StepFunction::new(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(apply_s(&f, 2.0).unwrap(), 1.5);
        assert!(apply_s(&f, 0.0).is_err());
    }

    #[test]
    fn sprime_examples() {
        assert!((apply_sprime(&chi(1.0), (-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(apply_sprime(&chi(1.0), 2.0).unwrap(), 0.0);
        let f = StepFunction::indicator(1.0, std::f64::consts::E).unwrap();
        assert!((apply_sprime(&f, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(apply_sprime(&chi(1.0), 0.0).unwrap(), f64::INFINITY);
        assert!((apply_sprime(&f, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn composition_matches_sum() {
        let spec = OperatorSpec::compose(&[Factor::S, Factor::Sprime]);
        let f = chi(2.0);
        for s in [1e-3, 0.5, 2.0, 9.0] {
            let v = apply(&spec, &f, s).unwrap();
            let w = apply_s(&f, s).unwrap() + apply_sprime(&f, s).unwrap();
            assert!((v - w).abs() <= 1e-10 * w);
            assert!((v - ssprime_char(2.0, s)).abs() <= 1e-10 * w);
        }
    }

    #[test]
    fn ssprime_char_examples() {
        assert_eq!(ssprime_char(1.0, 1.0), 1.0);
        assert!((ssprime_char(1.0, (-1.0f64).exp()) - 2.0).abs() < 1e-15);
        assert_eq!(ssprime_char(1.0, 2.0), 0.5);
    }

    #[test]
    fn rank_one() {
        let spec = OperatorSpec::RankOne(PhiExpr::t().powf(-0.5));
        for t in [0.01, 1.0, 50.0] {
            let v = apply(&spec, &chi(1.0), t).unwrap();
            assert!((v / (2.0 / t.sqrt()) - 1.0).abs() < 1e-10);
        }
        let bad = OperatorSpec::RankOne(PhiExpr::t().powf(-0.25));
        assert!(matches!(bad.image(&chi(1.0)), Err(Error::InvalidOperator(_))));
        let inc = OperatorSpec::RankOne(PhiExpr::t());
        assert!(matches!(inc.validate(&EvaluationGrid::default()), Err(Error::InvalidOperator(_))));
    }

    #[test]
    fn combo_collapse() {
        let spec = OperatorSpec::combo(0.5, OperatorSpec::HardyS, 0.5, OperatorSpec::HardyS);
        let f = StepFunction::new(vec![0.5, 1.0, 4.0], vec![1.0, 3.0, 0.5]).unwrap();
        for t in [0.1, 0.7, 2.0, 10.0] {
            assert!((apply(&spec, &f, t).unwrap() - apply_s(&f, t).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn json_forms() {
        let src = r#"{"op":"combo","alpha":1,"beta":0.5,"first":"S","second":{"op":"compose","factors":["S","Sprime","S"]}}"#;
        let op: OperatorSpec = serde_json::from_str(src).unwrap();
        let back: OperatorSpec = serde_json::from_value(serde_json::to_value(&op).unwrap()).unwrap();
        assert_eq!(op, back);
        assert!(serde_json::from_str::<OperatorSpec>(r#"{"op":"compose","factors":[]}"#).is_err());
        assert!(serde_json::from_str::<OperatorSpec>(r#""T""#).is_err());
    }

    #[test]
    fn transpose_swaps() {
        let op = OperatorSpec::compose(&[Factor::S, Factor::S, Factor::Sprime]);
        assert_eq!(op.transpose(), OperatorSpec::compose(&[Factor::S, Factor::Sprime, Factor::Sprime]));
        assert_eq!(OperatorSpec::HardyS.transpose(), OperatorSpec::AdjointSprime);
    }
}
