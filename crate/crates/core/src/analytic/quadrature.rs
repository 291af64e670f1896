//! Adaptive Simpson quadrature over fixed panels.

use rayon::prelude::*;

/// An integral with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const MAX_DEPTH: u32 = 40;

fn simpson(a: f64, fa: f64, fm: f64, b: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Integral {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, fa, flm, m, fm);
    let right = simpson(m, fm, frm, b, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return Integral {
            value: left + right + delta / 15.0,
            error: delta.abs() / 15.0,
        };
    }
    let l = refine(f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth + 1);
    let r = refine(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth + 1);
    Integral {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

/// `∫_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Integral {
    if a == b {
        return Integral::default();
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, fa, fm, b, fb);
    refine(f, a, fa, m, fm, b, fb, whole, tol, 0)
}

/// Splits `[a, b]` into panels no wider than `max_width`, integrates each
/// adaptively with a share of `tol` proportional to its width, and adds the
/// panels in index order so the result does not depend on scheduling.
pub fn panel_integral<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    a: f64,
    b: f64,
    max_width: f64,
    tol: f64,
) -> Integral {
    if a == b {
        return Integral::default();
    }
    let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let share = tol / panels as f64;
    let parts: Vec<Integral> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
            adaptive_simpson(f, lo, hi, share)
        })
        .collect();
    parts.iter().fold(Integral::default(), |acc, p| Integral {
        value: acc.value + p.value,
        error: acc.error + p.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let r = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 3.0, 1e-12);
        assert!((r.value - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_panels() {
        let f = |u: f64| (2.0 * PI * 7.5 * u).cos() * (-u * u).exp();
        // ∫_0^∞ cos(2πνu) e^{−u²} du = (√π/2) e^{−π²ν²}
        let want = PI.sqrt() / 2.0 * (-(PI * 7.5f64).powi(2)).exp();
        let r = panel_integral(&f, 0.0, 12.0, 1.0 / 15.0, 1e-12);
        assert!((r.value - want).abs() < 1e-11, "{} vs {}", r.value, want);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(panel_integral(&|x: f64| x, 2.0, 2.0, 0.1, 1e-9).value, 0.0);
    }
}
