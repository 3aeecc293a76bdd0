//! Gauss–Legendre quadrature: adaptive on finite intervals, geometric panels
//! toward 0 and toward infinity.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;
const MAX_PANELS: usize = 200;

/// Nodes and weights of the n-point rule on [-1, 1], by Newton on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Fixed-order rule on [a, b].
pub fn fixed<F>(f: &F, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut sum = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        sum += wi * f(mid + half * xi)?;
    }
    Ok(sum * half)
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_depth: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-11, abs: 1e-300, max_depth: 40 }
    }
}

/// Adaptive bisection on [a, b].
pub fn adaptive<F>(f: &F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("quadrature bounds [{a}, {b}]")));
    }
    if b <= a {
        return Ok(0.0);
    }
    if a > 0.0 && b > 4.0 * a {
        // long ranges are cut into geometric panels first
        let mut total = 0.0;
        let mut lo = a;
        while lo < b {
            let hi = (2.0 * lo).min(b);
            let whole = fixed(f, lo, hi)?;
            total += refine(f, lo, hi, whole, tol, 0)?;
            lo = hi;
        }
        return Ok(total);
    }
    let whole = fixed(f, a, b)?;
    refine(f, a, b, whole, tol, 0)
}

fn refine<F>(f: &F, a: f64, b: f64, whole: f64, tol: Tolerance, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m)?;
    let right = fixed(f, m, b)?;
    let sum = left + right;
    let err = (sum - whole).abs();
    if err <= tol.abs.max(tol.rel * sum.abs()) || depth >= tol.max_depth || m <= a || m >= b {
        return Ok(sum);
    }
    Ok(refine(f, a, m, left, tol, depth + 1)? + refine(f, m, b, right, tol, depth + 1)?)
}

/// Adaptive quadrature split at the given interior knots.
pub fn with_knots<F>(f: &F, a: f64, b: f64, knots: &[f64], tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let mut total = 0.0;
    let mut lo = a;
    for &k in knots {
        if k > lo && k < b {
            total += adaptive(f, lo, k, tol)?;
            lo = k;
        }
    }
    total += adaptive(f, lo, b, tol)?;
    Ok(total)
}

/// Sum of a sequence of panel contributions that should decay.
///
/// Stops once a panel adds less than 1e-12 of the running total. After
/// `MAX_PANELS` panels the decay rate is fitted as c_k ~ k^-p; p > 1.5 is
/// accepted with an extrapolated tail, anything slower is divergent.
fn panel_sum<P>(mut panel: P, what: &str) -> Result<f64>
where
    P: FnMut(usize) -> Result<f64>,
{
    let mut total = 0.0;
    let mut history = Vec::with_capacity(MAX_PANELS);
    for k in 0..MAX_PANELS {
        let c = panel(k)?;
        if !c.is_finite() {
            return Err(Error::Divergent(format!("{what}: non-finite panel {k}")));
        }
        total += c;
        history.push(c.abs());
        if k >= 3 && c.abs() <= 1e-12 * total.abs() {
            return Ok(total);
        }
    }
    let n = history.len();
    let late = history[n - 1];
    if late == 0.0 {
        return Ok(total);
    }
    // panel k ≈ C·r^k or C·k^-p; pick the model that fits three points
    let ks = [n / 4, n / 2, n];
    let h = ks.map(|k| history[k - 1].ln());
    let geo = ((h[1] - h[0]) / (ks[1] - ks[0]) as f64, (h[2] - h[1]) / (ks[2] - ks[1]) as f64);
    let lk = ks.map(|k| (k as f64).ln());
    let pow = ((h[1] - h[0]) / (lk[1] - lk[0]), (h[2] - h[1]) / (lk[2] - lk[1]));
    let mismatch = |(a, b): (f64, f64)| (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
    if mismatch(geo) < mismatch(pow) && late <= 0.1 * history[n / 2 - 1] {
        let r = geo.1.exp();
        if r < 1.0 {
            return Ok(total + late * r / (1.0 - r));
        }
        return Err(Error::Divergent(format!("{what}: panel contributions grow like {r:.4}^k")));
    }
    let p = -pow.1;
    if p > 1.5 {
        let tail = late * n as f64 / (p - 1.0);
        Ok(total + tail)
    } else {
        Err(Error::Divergent(format!(
            "{what}: panel contributions decay like k^-{p:.3} after {n} panels"
        )))
    }
}

/// ∫₀ᵗ f over panels [t·2^-(k+1), t·2^-k].
pub fn from_zero<F>(f: &F, t: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("upper limit {t} must be positive")));
    }
    panel_sum(
        |k| {
            let hi = t * (-(k as f64)).exp2();
            adaptive(f, 0.5 * hi, hi, tol)
        },
        "integral toward 0",
    )
}

/// ∫ₐ^∞ f over panels [a·2^k, a·2^(k+1)].
pub fn to_infinity<F>(f: &F, a: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("lower limit {a} must be positive")));
    }
    panel_sum(
        |k| {
            let lo = a * (k as f64).exp2();
            adaptive(f, lo, 2.0 * lo, tol)
        },
        "integral toward infinity",
    )
}

/// Like [`to_infinity`] but each panel uses the fixed rule only.
pub fn to_infinity_fixed<F>(f: &F, a: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("lower limit {a} must be positive")));
    }
    panel_sum(
        |k| {
            let lo = a * (k as f64).exp2();
            fixed(f, lo, 2.0 * lo)
        },
        "integral toward infinity",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 15, 30] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // 15 points integrate degree 29 exactly
        let f = ok(|x: f64| x.powi(28) + 3.0 * x.powi(7));
        let v = fixed(&f, 0.0, 1.0).unwrap();
        assert!((v - (1.0 / 29.0 + 3.0 / 8.0)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_kink() {
        let f = ok(|x: f64| (x - 0.3).abs());
        let v = adaptive(&f, 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
        let v = with_knots(&f, 0.0, 1.0, &[0.3], Tolerance::default()).unwrap();
        assert!((v - 0.29).abs() < 1e-14);
    }

    #[test]
    fn adaptive_long_range() {
        let f = ok(|x: f64| 1.0 / (x * x));
        let v = adaptive(&f, 1.0, 1e200, Tolerance::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn singular_at_zero() {
        let f = ok(|x: f64| x.powf(-0.5));
        let v = from_zero(&f, 4.0, Tolerance::default()).unwrap();
        assert!((v / 4.0 - 1.0).abs() < 1e-10);
        let f = ok(|x: f64| -x.ln());
        let v = from_zero(&f, 1.0, Tolerance::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        // panels shrink only by 2^-0.06 each
        let f = ok(|x: f64| x.powf(-0.94));
        let v = from_zero(&f, 1.0, Tolerance::default()).unwrap();
        assert!((v * 0.06 - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn divergent_at_zero() {
        let f = ok(|x: f64| 1.0 / x);
        assert!(from_zero(&f, 1.0, Tolerance::default()).unwrap_err().is_divergent());
        let f = ok(|x: f64| 1.0 / (x * (1.0 + 1.0 / x).ln()));
        assert!(from_zero(&f, 1.0, Tolerance::default()).unwrap_err().is_divergent());
    }

    #[test]
    fn tails() {
        let f = ok(|x: f64| x.powf(-1.5));
        let v = to_infinity(&f, 1.0, Tolerance::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let f = ok(|x: f64| 1.0 / (x * (1.0 + x).ln()));
        assert!(to_infinity(&f, 1.0, Tolerance::default()).unwrap_err().is_divergent());
        let f = ok(|x: f64| (-x).exp());
        let v = to_infinity_fixed(&f, 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-8);
    }
}
