use crate::error::Result;
use crate::scalar::Scalar;

/// One classical fourth-order Runge–Kutta step of `dy/ds = f(s, y)` from `s`
/// to `s + h`. Errors raised by `f` at any stage abort the step.
pub fn rk4_step<T, const N: usize, F>(mut f: F, s: T, y: &[T; N], h: T) -> Result<[T; N]>
where
    T: Scalar,
    F: FnMut(T, &[T; N]) -> Result<[T; N]>,
{
    let half = h * T::half();
    let k1 = f(s, y)?;
    let k2 = f(s + half, &axpy(y, half, &k1))?;
    let k3 = f(s + half, &axpy(y, half, &k2))?;
    let k4 = f(s + h, &axpy(y, h, &k3))?;
    let sixth = h / T::lit(6.0);
    let two = T::two();
    let mut out = *y;
    for n in 0..N {
        out[n] = y[n] + sixth * (k1[n] + two * k2[n] + two * k3[n] + k4[n]);
    }
    Ok(out)
}

fn axpy<T: Scalar, const N: usize>(y: &[T; N], a: T, k: &[T; N]) -> [T; N] {
    let mut out = *y;
    for n in 0..N {
        out[n] = y[n] + a * k[n];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let err = |h: f64| {
            let mut y = [1.0];
            let steps = (1.0 / h).round() as usize;
            for i in 0..steps {
                y = rk4_step(|_, y: &[f64; 1]| Ok([-y[0]]), i as f64 * h, &y, h).unwrap();
            }
            (y[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn pure_quadrature_matches_simpson() {
        // For dy/ds = g(s) a step reduces to Simpson's rule on [s, s + h].
        let y = rk4_step(|s: f64, _: &[f64; 1]| Ok([s * s]), 0.0, &[0.0], 3.0).unwrap();
        assert!((y[0] - 9.0).abs() < 1e-14);
    }
}
