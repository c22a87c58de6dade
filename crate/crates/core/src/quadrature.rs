//! Adaptive Simpson quadrature and the error function.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` with adaptive Simpson refinement to an
/// absolute tolerance `tol`. Reversed bounds give the negated integral.
pub fn adaptive_simpson<T, F>(f: F, a: T, b: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return adaptive_simpson(f, b, a, tol).map(|v| -v);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = (a + b) * T::half();
    let fm = f(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    refine(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<T, F>(f: &F, a: T, b: T, fa: T, fm: T, fb: T, whole: T, tol: T, depth: u32) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let m = (a + b) * T::half();
    let lm = (a + m) * T::half();
    let rm = (m + b) * T::half();
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = T::lit(15.0);
    let noise = T::epsilon() * T::lit(64.0) * (left.abs() + right.abs());
    if delta.abs() <= fifteen * tol || delta.abs() <= noise || m <= a || b <= m {
        return Ok(left + right + delta / fifteen);
    }
    if depth == 0 {
        return Err(Error::Quadrature {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    let half_tol = tol * T::half();
    Ok(refine(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

/// Error function `erf(x) = 2/√π ∫₀ˣ e^(−t²) dt`.
///
/// Uses the positive-term series `e^(−x²) Σ 2ⁿ x^(2n+1) / (2n+1)!!` for
/// `|x| ≤ 2` and a Lentz continued fraction for `erfc` beyond, which keeps
/// the absolute error near machine precision on both sides.
pub fn erf<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let value = if ax <= T::two() {
        erf_series(ax)
    } else {
        T::one() - erfc_continued_fraction(ax)
    };
    if x < T::zero() {
        -value
    } else {
        value
    }
}

/// Complementary error function `1 - erf(x)`.
pub fn erfc<T: Scalar>(x: T) -> T {
    if x > T::two() {
        erfc_continued_fraction(x)
    } else {
        T::one() - erf(x)
    }
}

fn erf_series<T: Scalar>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    while n < 200 {
        n += 1;
        let denom = T::from_usize_lossy(2 * n + 1);
        term = term * T::two() * x2 / denom;
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * (-x2).exp() * sum
}

/// `erfc(x) = e^(−x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))` for `x > 0`.
fn erfc_continued_fraction<T: Scalar>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..500usize {
        let a = T::from_usize_lossy(n) * T::half();
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let step = c * d;
        f = f * step;
        if (step - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * T::half() * (-x * x).exp() / f
}
