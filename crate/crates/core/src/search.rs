//! One-dimensional golden-section search.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Point and value of a one-dimensional optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

impl Extremum {
    fn better_min(self, other: Extremum) -> Extremum {
        if other.value < self.value {
            other
        } else {
            self
        }
    }
}

/// Golden-section minimization of `f` on [a, b] until the bracket is below
/// `tol` (absolute, in the units of x). Returns the best evaluated point,
/// endpoints included.
pub fn golden_min<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let mut best = Extremum { x: a, value: f(a)? }.better_min(Extremum { x: b, value: f(b)? });
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    best = best.better_min(Extremum { x: x1, value: f1 });
    best = best.better_min(Extremum { x: x2, value: f2 });
    let mut iter = 0;
    while hi - lo > tol && iter < 200 {
        iter += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
            best = best.better_min(Extremum { x: x1, value: f1 });
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
            best = best.better_min(Extremum { x: x2, value: f2 });
        }
    }
    Ok(best)
}

pub fn golden_max<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let neg = |x: f64| f(x).map(|v| -v);
    let e = golden_min(&neg, a, b, tol)?;
    Ok(Extremum { x: e.x, value: -e.value })
}

/// Splits [a, b] into `starts` equal cells and runs golden search in each.
pub fn multistart_min<F>(f: &F, a: f64, b: f64, starts: usize, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let starts = starts.max(1);
    let h = (b - a) / starts as f64;
    let mut best: Option<Extremum> = None;
    for i in 0..starts {
        let lo = a + h * i as f64;
        let hi = if i + 1 == starts { b } else { lo + h };
        let e = golden_min(f, lo, hi, tol)?;
        best = Some(match best {
            Some(b) => b.better_min(e),
            None => e,
        });
    }
    Ok(best.expect("at least one start"))
}

/// Maximum of `f` over sorted sample points, refined by golden search in
/// the neighbouring cells of the `refine` largest local maxima.
pub fn sampled_max<F>(f: &F, xs: &[f64], refine: usize, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    assert!(!xs.is_empty());
    let vals = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let n = xs.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            (i == 0 || vals[i] >= vals[i - 1]) && (i + 1 == n || vals[i] >= vals[i + 1])
        })
        .collect();
    peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let mut best = Extremum { x: xs[peaks[0]], value: vals[peaks[0]] };
    for &i in peaks.iter().take(refine) {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(n - 1)];
        if hi > lo {
            let e = golden_max(f, lo, hi, tol * (hi - lo))?;
            if e.value > best.value {
                best = e;
            }
        }
    }
    Ok(best)
}

/// `n` log-spaced points on [lo, hi], endpoints included.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let f = |x: f64| Ok((x - 0.3) * (x - 0.3) + 1.0);
        let e = golden_min(&f, -2.0, 5.0, 1e-10).unwrap();
        assert!((e.x - 0.3).abs() < 1e-8);
        assert!((e.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_minimum() {
        let f = |x: f64| Ok(x);
        let e = golden_min(&f, 1.0, 2.0, 1e-10).unwrap();
        assert_eq!(e.x, 1.0);
    }

    #[test]
    fn multistart_finds_global() {
        let f = |x: f64| Ok((3.0 * x).sin() + 0.1 * x);
        let e = multistart_min(&f, -10.0, 10.0, 32, 1e-10).unwrap();
        let brute = (0..200_001)
            .map(|i| -10.0 + 20.0 * i as f64 / 200_000.0)
            .map(|x| f(x).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(e.value <= brute + 1e-9);
    }

    #[test]
    fn sampled_max_refines() {
        let f = |x: f64| Ok(-(x.ln() - 1.234).powi(2));
        let xs = geomspace(1e-3, 1e3, 50);
        let e = sampled_max(&f, &xs, 3, 1e-12).unwrap();
        assert!((e.x.ln() - 1.234).abs() < 1e-5);
    }

    #[test]
    fn geomspace_endpoints() {
        let g = geomspace(1e-6, 1e6, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 1e-6);
        assert_eq!(g[199], 1e6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
