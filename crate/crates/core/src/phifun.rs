//! Expression trees for quasiconcave functions and the constructions built
//! on them: t/φ, φ̃, Ψ.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Direction, Error, Result};
use crate::quad::{self, Tolerance};
use crate::search::{self, Extremum};

/// Number type for generic evaluation: plain `f64` or a forward-mode dual.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn cst(c: f64) -> Self;
    fn val(self) -> f64;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn ln_1p(self) -> Self;
    fn powf(self, p: f64) -> Self;
    /// Apply a scalar map g given g(x) and g'(x) at x = self.val().
    fn lift(self, g: f64, dg: f64) -> Self;
    const DUAL: bool;
}

impl Scalar for f64 {
    const DUAL: bool = false;
    fn cst(c: f64) -> Self {
        c
    }
    fn val(self) -> f64 {
        self
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn lift(self, g: f64, _dg: f64) -> Self {
        g
    }
}

/// Value and first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn var(x: f64) -> Self {
        Dual { v: x, d: 1.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
}

impl Scalar for Dual {
    const DUAL: bool = true;
    fn cst(c: f64) -> Self {
        Dual { v: c, d: 0.0 }
    }
    fn val(self) -> f64 {
        self.v
    }
    fn ln(self) -> Self {
        Dual { v: self.v.ln(), d: self.d / self.v }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual { v: e, d: self.d * e }
    }
    fn ln_1p(self) -> Self {
        Dual { v: self.v.ln_1p(), d: self.d / (1.0 + self.v) }
    }
    fn powf(self, p: f64) -> Self {
        let v = self.v.powf(p);
        let d = if self.d == 0.0 { 0.0 } else { self.d * p * self.v.powf(p - 1.0) };
        Dual { v, d }
    }
    fn lift(self, g: f64, dg: f64) -> Self {
        Dual { v: g, d: dg * self.d }
    }
}

/// ln(1 + 1/x), stable at both ends.
fn ln_1p_recip<S: Scalar>(x: S) -> S {
    if x.val() < 1.0 {
        x.ln_1p() - x.ln()
    } else {
        (S::cst(1.0) / x).ln_1p()
    }
}

/// Positive samples interpolated linearly in log-log coordinates, extended
/// as power laws beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    lt: Vec<f64>,
    lv: Vec<f64>,
}

impl Table {
    pub fn new(t: &[f64], v: &[f64]) -> Result<Self> {
        if t.len() != v.len() || t.len() < 2 {
            return Err(Error::InvalidInput("table needs at least two (t, v) pairs".into()));
        }
        if !t.windows(2).all(|w| w[0] < w[1]) || t[0] <= 0.0 {
            return Err(Error::InvalidInput("table abscissae must be positive and increasing".into()));
        }
        if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidInput(format!("table value {x} is not positive")));
        }
        Ok(Table { lt: t.iter().map(|x| x.ln()).collect(), lv: v.iter().map(|x| x.ln()).collect() })
    }

    pub fn abscissae(&self) -> Vec<f64> {
        self.lt.iter().map(|x| x.exp()).collect()
    }

    pub fn ordinates(&self) -> Vec<f64> {
        self.lv.iter().map(|x| x.exp()).collect()
    }

    fn value_slope(&self, x: f64) -> (f64, f64) {
        let lx = x.ln();
        let n = self.lt.len();
        let i = self.lt.partition_point(|&a| a < lx).clamp(1, n - 1);
        let m = (self.lv[i] - self.lv[i - 1]) / (self.lt[i] - self.lt[i - 1]);
        let v = (self.lv[i - 1] + m * (lx - self.lt[i - 1])).exp();
        (v, v * m / x)
    }
}

const PSI_LEVELS: i32 = 120;

/// Ψ(t) = t / ∫₀ᵗ ds/φ(s), with the integral cached at powers of two.
#[derive(Debug)]
pub struct PsiNode {
    phi: PhiExpr,
    cache: OnceLock<Result<Vec<f64>>>,
}

impl PsiNode {
    fn cumulative(&self) -> Result<&Vec<f64>> {
        self.cache
            .get_or_init(|| {
                let inv = |s: f64| self.phi.eval(s).map(|v| 1.0 / v);
                let tol = Tolerance::default();
                let mut acc = quad::from_zero(&inv, (-PSI_LEVELS as f64).exp2(), tol)
                    .map_err(not_integrable)?;
                let mut out = Vec::with_capacity(2 * PSI_LEVELS as usize + 1);
                out.push(acc);
                for k in -PSI_LEVELS..PSI_LEVELS {
                    let a = (k as f64).exp2();
                    acc += quad::adaptive(&inv, a, 2.0 * a, tol)?;
                    out.push(acc);
                }
                Ok(out)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// ∫₀ˣ ds/φ(s).
    pub fn integral(&self, x: f64) -> Result<f64> {
        let cum = self.cumulative()?;
        let inv = |s: f64| self.phi.eval(s).map(|v| 1.0 / v);
        let tol = Tolerance::default();
        let k = x.log2().floor();
        if k < -PSI_LEVELS as f64 {
            return quad::from_zero(&inv, x, tol).map_err(not_integrable);
        }
        let k = (k as i32).min(PSI_LEVELS);
        let base = (k as f64).exp2();
        let mut acc = cum[(k + PSI_LEVELS) as usize];
        let mut lo = base;
        while 2.0 * lo < x {
            acc += quad::adaptive(&inv, lo, 2.0 * lo, tol)?;
            lo *= 2.0;
        }
        Ok(acc + quad::adaptive(&inv, lo, x, tol)?)
    }

    pub fn phi(&self) -> &PhiExpr {
        &self.phi
    }
}

fn not_integrable(e: Error) -> Error {
    match e {
        Error::Divergent(msg) => Error::Divergent(format!("1/phi is not locally integrable at 0 ({msg})")),
        other => other,
    }
}

/// Search settings for the infimum defining φ̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeOptions {
    /// Search r in [t·10^-decades, t·10^decades].
    pub decades: f64,
    pub starts: usize,
    /// Golden-section tolerance in ln r.
    pub tol: f64,
}

impl Default for TildeOptions {
    fn default() -> Self {
        TildeOptions { decades: 8.0, starts: 32, tol: 1e-8 }
    }
}

impl TildeOptions {
    /// Default bracket inside [1e-6, 1e6], widened beyond it so that minimizers
    /// at r ~ 1 or r ~ t² stay inside.
    pub fn for_point(t: f64) -> Self {
        let d = (2.0 * t.log10().abs() - 4.0).max(8.0);
        TildeOptions { decades: d, starts: (4.0 * d).round() as usize, tol: 1e-8 }
    }
}

#[derive(Debug)]
pub struct TildeNode {
    phi: PhiExpr,
}

/// Quasiconcave-function expression.
#[derive(Debug, Clone)]
pub enum PhiExpr {
    Var,
    Const(f64),
    Add(Vec<PhiExpr>),
    Mul(Vec<PhiExpr>),
    Div(Box<PhiExpr>, Box<PhiExpr>),
    Min(Vec<PhiExpr>),
    Max(Vec<PhiExpr>),
    Pow(Box<PhiExpr>, f64),
    Log1p(Box<PhiExpr>),
    /// outer(inner(t)).
    Compose(Box<PhiExpr>, Box<PhiExpr>),
    /// t·ln^α(1 + t^(-1/α)).
    PhiAlpha(f64),
    /// (1+t)·ln(1 + 1/t).
    PsiHelper,
    Table(Arc<Table>),
    /// t / ∫₀ᵗ ds/φ.
    Psi(Arc<PsiNode>),
    /// inf_r tφ(r) / (r ln(1 + t/r)).
    Tilde(Arc<TildeNode>),
}

impl PartialEq for PhiExpr {
    fn eq(&self, other: &Self) -> bool {
        use PhiExpr::*;
        match (self, other) {
            (Var, Var) | (PsiHelper, PsiHelper) => true,
            (Const(a), Const(b)) | (PhiAlpha(a), PhiAlpha(b)) => a == b,
            (Add(a), Add(b)) | (Mul(a), Mul(b)) | (Min(a), Min(b)) | (Max(a), Max(b)) => a == b,
            (Div(a, b), Div(c, d)) | (Compose(a, b), Compose(c, d)) => a == c && b == d,
            (Pow(a, p), Pow(b, q)) => a == b && p == q,
            (Log1p(a), Log1p(b)) => a == b,
            (Table(a), Table(b)) => a == b,
            (Psi(a), Psi(b)) => a.phi == b.phi,
            (Tilde(a), Tilde(b)) => a.phi == b.phi,
            _ => false,
        }
    }
}

impl PhiExpr {
    pub fn t() -> Self {
        PhiExpr::Var
    }

    pub fn constant(c: f64) -> Self {
        PhiExpr::Const(c)
    }

    pub fn phi_alpha(alpha: f64) -> Self {
        PhiExpr::PhiAlpha(alpha)
    }

    pub fn psi_helper() -> Self {
        PhiExpr::PsiHelper
    }

    /// max(1, t).
    pub fn max1t() -> Self {
        PhiExpr::Max(vec![PhiExpr::Const(1.0), PhiExpr::Var])
    }

    pub fn table(t: &[f64], v: &[f64]) -> Result<Self> {
        Ok(PhiExpr::Table(Arc::new(Table::new(t, v)?)))
    }

    /// Ψ of the Marcinkiewicz space M_φ as an expression.
    pub fn psi_of(phi: PhiExpr) -> Self {
        PhiExpr::Psi(Arc::new(PsiNode { phi, cache: OnceLock::new() }))
    }

    pub fn tilde_of(phi: PhiExpr) -> Self {
        PhiExpr::Tilde(Arc::new(TildeNode { phi }))
    }

    pub fn powf(self, p: f64) -> Self {
        PhiExpr::Pow(Box::new(self), p)
    }

    pub fn log1p(self) -> Self {
        PhiExpr::Log1p(Box::new(self))
    }

    pub fn min(self, o: PhiExpr) -> Self {
        PhiExpr::Min(vec![self, o])
    }

    pub fn max(self, o: PhiExpr) -> Self {
        PhiExpr::Max(vec![self, o])
    }

    pub fn compose(self, inner: PhiExpr) -> Self {
        PhiExpr::Compose(Box::new(self), Box::new(inner))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = self.eval_s(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::eval(t, format!("{self} is not finite")))
        }
    }

    pub fn eval_dual(&self, t: f64) -> Result<Dual> {
        let v = self.eval_s(Dual::var(t))?;
        if v.v.is_finite() {
            Ok(v)
        } else {
            Err(Error::eval(t, format!("{self} is not finite")))
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        Ok(self.eval_dual(t)?.d)
    }

    pub fn eval_s<S: Scalar>(&self, t: S) -> Result<S> {
        use PhiExpr::*;
        let x = t.val();
        Ok(match self {
            Var => t,
            Const(c) => S::cst(*c),
            Add(args) => {
                let mut acc = S::cst(0.0);
                for a in args {
                    acc = acc + a.eval_s(t)?;
                }
                acc
            }
            Mul(args) => {
                let mut acc = S::cst(1.0);
                for a in args {
                    acc = acc * a.eval_s(t)?;
                }
                acc
            }
            Div(a, b) => {
                let den = b.eval_s(t)?;
                if den.val() == 0.0 {
                    return Err(Error::eval(x, format!("division by zero in {self}")));
                }
                a.eval_s(t)? / den
            }
            Min(args) | Max(args) => {
                let mut best: Option<S> = None;
                for a in args {
                    let v = a.eval_s(t)?;
                    best = Some(match best {
                        None => v,
                        Some(b) => {
                            let take = if matches!(self, Min(_)) { v.val() < b.val() } else { v.val() > b.val() };
                            if take { v } else { b }
                        }
                    });
                }
                best.ok_or_else(|| Error::eval(x, "empty min/max"))?
            }
            Pow(a, p) => {
                let b = a.eval_s(t)?;
                if b.val() < 0.0 || (b.val() == 0.0 && *p < 0.0) {
                    return Err(Error::eval(x, format!("power of nonpositive base in {self}")));
                }
                b.powf(*p)
            }
            Log1p(a) => {
                let b = a.eval_s(t)?;
                if b.val() <= -1.0 {
                    return Err(Error::eval(x, format!("log of nonpositive number in {self}")));
                }
                b.ln_1p()
            }
            Compose(outer, inner) => outer.eval_s(inner.eval_s(t)?)?,
            PhiAlpha(alpha) => {
                if !(x > 0.0) {
                    return Err(Error::eval(x, "phi_alpha needs t > 0"));
                }
                t * ln_1p_recip(t.powf(1.0 / alpha)).powf(*alpha)
            }
            PsiHelper => {
                if !(x > 0.0) {
                    return Err(Error::eval(x, "psi_helper needs t > 0"));
                }
                (S::cst(1.0) + t) * ln_1p_recip(t)
            }
            Table(tab) => {
                if !(x > 0.0) {
                    return Err(Error::eval(x, "table needs t > 0"));
                }
                let (v, dv) = tab.value_slope(x);
                t.lift(v, dv)
            }
            Psi(node) => {
                if !(x > 0.0) {
                    return Err(Error::eval(x, "psi needs t > 0"));
                }
                let i = node.integral(x)?;
                let v = x / i;
                let dv = if S::DUAL { (i - x / node.phi.eval(x)?) / (i * i) } else { 0.0 };
                t.lift(v, dv)
            }
            Tilde(node) => {
                let e = tilde_search(&node.phi, x, &TildeOptions::for_point(x))?;
                let dv = if S::DUAL {
                    let r = e.x;
                    let l = (x / r).ln_1p();
                    let phr = node.phi.eval(r)?;
                    phr / (r * l) - x * phr / (r * l * l * (r + x))
                } else {
                    0.0
                };
                t.lift(e.value, dv)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        use PhiExpr::*;
        match self {
            Var => json!("t"),
            Const(c) => json!(c),
            Add(a) => json!({"op": "add", "args": a.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Mul(a) => json!({"op": "mul", "args": a.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Min(a) => json!({"op": "min", "args": a.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Max(a) => json!({"op": "max", "args": a.iter().map(|e| e.to_json()).collect::<Vec<_>>()}),
            Div(a, b) => json!({"op": "div", "args": [a.to_json(), b.to_json()]}),
            Pow(a, p) => json!({"op": "pow", "arg": a.to_json(), "exp": p}),
            Log1p(a) => json!({"op": "log1p", "arg": a.to_json()}),
            Compose(o, i) => json!({"op": "compose", "outer": o.to_json(), "inner": i.to_json()}),
            PhiAlpha(a) => json!(format!("phi_alpha:{a}")),
            PsiHelper => json!("psi_helper"),
            Table(tab) => json!({"op": "table", "t": tab.abscissae(), "v": tab.ordinates()}),
            Psi(n) => json!({"op": "psi", "arg": n.phi.to_json()}),
            Tilde(n) => json!({"op": "tilde", "arg": n.phi.to_json()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidInput(format!("phi expression: {what}"));
        match v {
            Value::Number(n) => {
                let c = n.as_f64().ok_or_else(|| bad("number out of range"))?;
                if !c.is_finite() {
                    return Err(bad("non-finite constant"));
                }
                Ok(PhiExpr::Const(c))
            }
            Value::String(s) => match s.as_str() {
                "t" => Ok(PhiExpr::Var),
                "max1t" => Ok(PhiExpr::max1t()),
                "psi_helper" => Ok(PhiExpr::PsiHelper),
                other => {
                    if let Some(a) = other.strip_prefix("phi_alpha:") {
                        let alpha: f64 = a.trim().parse().map_err(|_| bad(&format!("bad alpha in {other:?}")))?;
                        if !(alpha > 0.0 && alpha.is_finite()) {
                            return Err(bad("alpha must be positive"));
                        }
                        Ok(PhiExpr::PhiAlpha(alpha))
                    } else {
                        Err(bad(&format!("unknown name {other:?}")))
                    }
                }
            },
            Value::Object(m) => {
                let op = m.get("op").and_then(Value::as_str).ok_or_else(|| bad("missing \"op\""))?;
                let arg = |k: &str| -> Result<PhiExpr> {
                    PhiExpr::from_json(m.get(k).ok_or_else(|| bad(&format!("{op} needs \"{k}\"")))?)
                };
                let args = || -> Result<Vec<PhiExpr>> {
                    let a = m.get("args").and_then(Value::as_array).ok_or_else(|| bad(&format!("{op} needs \"args\"")))?;
                    if a.is_empty() {
                        return Err(bad(&format!("{op} with no arguments")));
                    }
                    a.iter().map(PhiExpr::from_json).collect()
                };
                let nums = |k: &str| -> Result<Vec<f64>> {
                    m.get(k)
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad(&format!("table needs \"{k}\"")))?
                        .iter()
                        .map(|x| x.as_f64().ok_or_else(|| bad("table entries must be numbers")))
                        .collect()
                };
                match op {
                    "add" => Ok(PhiExpr::Add(args()?)),
                    "mul" => Ok(PhiExpr::Mul(args()?)),
                    "min" => Ok(PhiExpr::Min(args()?)),
                    "max" => Ok(PhiExpr::Max(args()?)),
                    "div" => {
                        let mut a = args()?;
                        if a.len() != 2 {
                            return Err(bad("div takes two arguments"));
                        }
                        let d = a.pop().unwrap();
                        Ok(PhiExpr::Div(Box::new(a.pop().unwrap()), Box::new(d)))
                    }
                    "pow" => {
                        let p = m.get("exp").and_then(Value::as_f64).ok_or_else(|| bad("pow needs \"exp\""))?;
                        Ok(arg("arg")?.powf(p))
                    }
                    "log1p" => Ok(arg("arg")?.log1p()),
                    "compose" => Ok(arg("outer")?.compose(arg("inner")?)),
                    "table" => PhiExpr::table(&nums("t")?, &nums("v")?),
                    "psi" => Ok(PhiExpr::psi_of(arg("arg")?)),
                    "tilde" => Ok(PhiExpr::tilde_of(arg("arg")?)),
                    other => Err(bad(&format!("unknown op {other:?}"))),
                }
            }
            _ => Err(bad("expected a number, a name or an object")),
        }
    }
}

impl fmt::Display for PhiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PhiExpr::*;
        let list = |f: &mut fmt::Formatter<'_>, name: &str, a: &[PhiExpr]| {
            write!(f, "{name}(")?;
            for (i, e) in a.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")
        };
        match self {
            Var => f.write_str("t"),
            Const(c) => write!(f, "{c}"),
            Add(a) => list(f, "add", a),
            Mul(a) => list(f, "mul", a),
            Min(a) => list(f, "min", a),
            Max(a) => list(f, "max", a),
            Div(a, b) => write!(f, "({a})/({b})"),
            Pow(a, p) => write!(f, "({a})^{p}"),
            Log1p(a) => write!(f, "log1p({a})"),
            Compose(o, i) => write!(f, "({o})∘({i})"),
            PhiAlpha(a) => write!(f, "phi_alpha({a})"),
            PsiHelper => f.write_str("psi_helper"),
            Table(t) => write!(f, "table[{} points]", t.lt.len()),
            Psi(n) => write!(f, "Psi[{}]", n.phi),
            Tilde(n) => write!(f, "tilde[{}]", n.phi),
        }
    }
}

impl Serialize for PhiExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhiExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        PhiExpr::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl Add for PhiExpr {
    type Output = PhiExpr;
    fn add(self, o: PhiExpr) -> PhiExpr {
        PhiExpr::Add(vec![self, o])
    }
}

impl Mul for PhiExpr {
    type Output = PhiExpr;
    fn mul(self, o: PhiExpr) -> PhiExpr {
        PhiExpr::Mul(vec![self, o])
    }
}

impl Div for PhiExpr {
    type Output = PhiExpr;
    fn div(self, o: PhiExpr) -> PhiExpr {
        PhiExpr::Div(Box::new(self), Box::new(o))
    }
}

/// Log-spaced evaluation points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for EvaluationGrid {
    fn default() -> Self {
        EvaluationGrid { t_min: 1e-6, t_max: 1e6, count: 200 }
    }
}

impl EvaluationGrid {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite() && count >= 2) {
            return Err(Error::InvalidInput(format!("bad grid {t_min},{t_max},{count}")));
        }
        Ok(EvaluationGrid { t_min, t_max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        search::geomspace(self.t_min, self.t_max, self.count)
    }
}

impl FromStr for EvaluationGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidInput(format!("grid must be tmin,tmax,n (got {s:?})"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let a = parts[0].parse().map_err(|_| bad())?;
        let b = parts[1].parse().map_err(|_| bad())?;
        let n = parts[2].parse().map_err(|_| bad())?;
        EvaluationGrid::new(a, b, n)
    }
}

/// Accepted interval for a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
}

impl Band {
    pub fn new(min: f64, max: f64) -> Self {
        Band { min, max }
    }

    /// Any finite positive ratio.
    pub fn finite() -> Self {
        Band { min: f64::MIN_POSITIVE, max: f64::MAX }
    }

    pub fn around_one(rel: f64) -> Self {
        Band { min: 1.0 - rel, max: 1.0 + rel }
    }
}

/// Extremes of a ratio a/b over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub t_at_min: f64,
    pub t_at_max: f64,
    pub grid: EvaluationGrid,
    pub band: Band,
    pub pass: bool,
}

impl EquivalenceReport {
    pub fn from_ratios(grid: EvaluationGrid, points: &[f64], ratios: &[f64], band: Band) -> Self {
        let mut lo = (f64::INFINITY, f64::NAN);
        let mut hi = (f64::NEG_INFINITY, f64::NAN);
        let mut nan = false;
        for (&t, &r) in points.iter().zip(ratios) {
            if r.is_nan() {
                nan = true;
                continue;
            }
            if r < lo.0 {
                lo = (r, t);
            }
            if r > hi.0 {
                hi = (r, t);
            }
        }
        let pass = !nan && lo.0 >= band.min && hi.0 <= band.max && lo.0 > 0.0 && hi.0.is_finite();
        EquivalenceReport { ratio_min: lo.0, ratio_max: hi.0, t_at_min: lo.1, t_at_max: hi.1, grid, band, pass }
    }

    /// ratio_max / ratio_min.
    pub fn spread(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }
}

/// Values of φ on the grid, in grid order.
pub fn tabulate(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<Vec<f64>> {
    grid.points().par_iter().map(|&t| phi.eval(t)).collect()
}

pub fn compare_equivalence(a: &PhiExpr, b: &PhiExpr, grid: &EvaluationGrid, band: Band) -> Result<EquivalenceReport> {
    let pts = grid.points();
    let ratios = pts
        .par_iter()
        .map(|&t| Ok(a.eval(t)? / b.eval(t)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivalenceReport::from_ratios(*grid, &pts, &ratios, band))
}

/// Outcome of the grid quasiconcavity test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiconcavityReport {
    pub pass: bool,
    /// First offending pair (t_i, t_{i+1}) and which condition failed.
    pub violation: Option<(f64, f64, String)>,
}

pub fn is_quasiconcave(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<QuasiconcavityReport> {
    let pts = grid.points();
    let vals = tabulate(phi, grid)?;
    Ok(quasiconcave_table(&pts, &vals))
}

/// Same test on tabulated values.
pub fn quasiconcave_table(pts: &[f64], vals: &[f64]) -> QuasiconcavityReport {
    const REL: f64 = 1e-12;
    for i in 0..pts.len().saturating_sub(1) {
        let (a, b) = (vals[i], vals[i + 1]);
        let viol = if !(a > 0.0 && b > 0.0) {
            Some("not positive")
        } else if b < a * (1.0 - REL) {
            Some("phi decreases")
        } else if b / pts[i + 1] > (a / pts[i]) * (1.0 + REL) {
            Some("phi(t)/t increases")
        } else {
            None
        };
        if let Some(v) = viol {
            return QuasiconcavityReport { pass: false, violation: Some((pts[i], pts[i + 1], v.to_string())) };
        }
    }
    QuasiconcavityReport { pass: true, violation: None }
}

/// t/φ(t).
pub fn associate_fun(phi: &PhiExpr) -> PhiExpr {
    PhiExpr::Var / phi.clone()
}

/// Grid infimum of φ(t) / (t ln(1 + 1/t)).
pub fn logc_constant(phi: &PhiExpr, grid: &EvaluationGrid) -> Result<f64> {
    let pts = grid.points();
    let r = pts
        .par_iter()
        .map(|&t| Ok(phi.eval(t)? / (t * ln_1p_recip(t))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(r.into_iter().fold(f64::INFINITY, f64::min))
}

/// t / ∫₀ᵗ ds/φ(s), computed directly.
pub fn psi_marcinkiewicz(phi: &PhiExpr, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("psi needs t > 0, got {t}")));
    }
    let inv = |s: f64| phi.eval(s).map(|v| 1.0 / v);
    let i = quad::from_zero(&inv, t, Tolerance::default()).map_err(not_integrable)?;
    Ok(t / i)
}

/// φ̃(t) with the default bracket.
pub fn tilde(phi: &PhiExpr, t: f64) -> Result<f64> {
    Ok(tilde_search(phi, t, &TildeOptions::for_point(t))?.value)
}

/// The objective of φ̃ at r.
pub fn tilde_objective(phi: &PhiExpr, t: f64, r: f64) -> Result<f64> {
    Ok(t * phi.eval(r)? / (r * (t / r).ln_1p()))
}

/// ln of the smallest r probed.
pub(crate) const R_FLOOR: f64 = -690.0;

/// Infimum and minimizer r of the φ̃ objective.
pub fn tilde_search(phi: &PhiExpr, t: f64, opts: &TildeOptions) -> Result<Extremum> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("tilde needs t > 0, got {t}")));
    }
    let lt = t.ln();
    let half = opts.decades * std::f64::consts::LN_10;
    let obj = |u: f64| tilde_objective(phi, t, u.exp());
    log_infimum(&obj, lt, lt - half, lt + half, opts, (true, true))
}

/// Multistart minimum of `obj` over u = ln r in [lo, hi] (clamped to
/// ±690). A minimizer on a checked edge continues the search outward to
/// the clamp; if it still sits on the far edge the limit is extrapolated
/// from v ≈ a + b/|u - center|, and a near zero is reported as degenerate.
pub(crate) fn log_infimum(
    obj: &dyn Fn(f64) -> Result<f64>,
    center: f64,
    lo: f64,
    hi: f64,
    opts: &TildeOptions,
    check: (bool, bool),
) -> Result<Extremum> {
    let (lo, hi) = (lo.max(R_FLOOR), hi.min(-R_FLOOR));
    let mut e = search::multistart_min(obj, lo, hi, opts.starts.min(256), opts.tol)?;
    let edge = if check.0 && e.x <= lo + 2.0 * opts.tol {
        Some((Direction::TowardZero, -1.0, R_FLOOR, lo))
    } else if check.1 && e.x >= hi - 2.0 * opts.tol {
        Some((Direction::TowardInfinity, 1.0, hi, -R_FLOOR))
    } else {
        None
    };
    if let Some((direction, sign, a, b)) = edge {
        if b - a > 2.0 * opts.tol {
            let n = 32;
            let us: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
            let vs = us.iter().map(|&u| obj(u)).collect::<Result<Vec<f64>>>()?;
            let k = (0..n).min_by(|&i, &j| vs[i].total_cmp(&vs[j])).expect("nonempty");
            let outer = if k == 0 || k == n - 1 {
                Extremum { x: us[k], value: vs[k] }
            } else {
                search::golden_min(obj, us[k - 1], us[k + 1], opts.tol)?
            };
            if outer.value < e.value {
                e = outer;
            }
        }
        let far = if sign < 0.0 { a } else { b };
        if (e.x - far).abs() <= 2.0 * opts.tol {
            let (l1, l2) = (0.5 * (far - center).abs(), (far - center).abs());
            let (v1, v2) = (obj(center + sign * l1)?, obj(center + sign * l2)?);
            if v2 < v1 {
                let limit = (v2 * l2 - v1 * l1) / (l2 - l1);
                if limit <= 0.01 * v2 {
                    return Err(Error::DegenerateInfimum { direction });
                }
                e.value = e.value.min(limit);
            }
        }
    }
    Ok(Extremum { x: e.x.exp(), value: e.value })
}
