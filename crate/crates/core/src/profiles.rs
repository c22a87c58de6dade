//! Scalar functions of arc length used as curvature, rotation angle or
//! torsion inputs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A scalar function of arc length on an explicit closed domain.
///
/// Closed-form kinds default to the whole real line; tabulated profiles are
/// defined exactly on the span of their knots. Nothing is extrapolated.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarProfile<T> {
    shape: ProfileShape<T>,
    domain: (T, T),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape<T> {
    Constant(T),
    /// `slope * s + intercept`
    Linear { slope: T, intercept: T },
    /// `kappa0 * exp(-s²)`
    Gaussian { kappa0: T },
    Tabulated(MonotoneCubic<T>),
}

impl<T: Scalar> ScalarProfile<T> {
    pub fn constant(value: T) -> Self {
        Self::unbounded(ProfileShape::Constant(value))
    }

    pub fn linear(slope: T, intercept: T) -> Self {
        Self::unbounded(ProfileShape::Linear { slope, intercept })
    }

    pub fn gaussian(kappa0: T) -> Self {
        Self::unbounded(ProfileShape::Gaussian { kappa0 })
    }

    /// Builds a tabulated profile from `(s, value)` knots with strictly
    /// increasing abscissae.
    pub fn tabulated(samples: &[(T, T)]) -> Result<Self> {
        let table = MonotoneCubic::new(samples)?;
        let domain = table.domain();
        Ok(Self {
            shape: ProfileShape::Tabulated(table),
            domain,
        })
    }

    fn unbounded(shape: ProfileShape<T>) -> Self {
        Self {
            shape,
            domain: (T::neg_infinity(), T::infinity()),
        }
    }

    /// Restricts the domain of a closed-form profile. A tabulated profile can
    /// only be narrowed, never widened past its knots.
    pub fn with_domain(mut self, lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidProfile(format!(
                "domain [{lo}, {hi}] is empty"
            )));
        }
        if let ProfileShape::Tabulated(table) = &self.shape {
            let (tlo, thi) = table.domain();
            if lo < tlo || hi > thi {
                return Err(Error::InvalidProfile(format!(
                    "domain [{lo}, {hi}] exceeds tabulated range [{tlo}, {thi}]"
                )));
            }
        }
        self.domain = (lo, hi);
        Ok(self)
    }

    pub fn shape(&self) -> &ProfileShape<T> {
        &self.shape
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn covers(&self, lo: T, hi: T) -> bool {
        self.domain.0 <= lo && hi <= self.domain.1
    }

    fn check_domain(&self, s: T) -> Result<()> {
        let (lo, hi) = self.domain;
        if s >= lo && s <= hi {
            Ok(())
        } else {
            Err(Error::Domain {
                s: s.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            })
        }
    }

    /// Evaluates the profile at `s`.
    pub fn eval(&self, s: T) -> Result<T> {
        self.check_domain(s)?;
        Ok(match &self.shape {
            ProfileShape::Constant(c) => *c,
            ProfileShape::Linear { slope, intercept } => *slope * s + *intercept,
            ProfileShape::Gaussian { kappa0 } => *kappa0 * (-s * s).exp(),
            ProfileShape::Tabulated(table) => table.value(s),
        })
    }

    /// Evaluates the profile in its curvature role, rejecting negative values.
    pub fn eval_curvature(&self, s: T) -> Result<T> {
        let v = self.eval(s)?;
        if v < T::zero() {
            return Err(Error::NegativeCurvature {
                s: s.as_f64(),
                value: v.as_f64(),
            });
        }
        Ok(v)
    }

    /// Derivative with respect to arc length.
    pub fn derivative(&self, s: T) -> Result<T> {
        self.check_domain(s)?;
        Ok(match &self.shape {
            ProfileShape::Constant(_) => T::zero(),
            ProfileShape::Linear { slope, .. } => *slope,
            ProfileShape::Gaussian { kappa0 } => -T::two() * s * *kappa0 * (-s * s).exp(),
            ProfileShape::Tabulated(table) => table.slope_at(s),
        })
    }

    /// Value and derivative in one call.
    pub fn eval_with_derivative(&self, s: T) -> Result<(T, T)> {
        Ok((self.eval(s)?, self.derivative(s)?))
    }
}

/// Piecewise cubic Hermite interpolant with Fritsch–Carlson slope limiting.
///
/// On each interval the interpolant stays within the range of the two
/// endpoint values, so non-negative data interpolate to non-negative values.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Scalar> MonotoneCubic<T> {
    pub fn new(samples: &[(T, T)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "tabulated profile needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (idx, &(x, y)) in samples.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidProfile(format!(
                    "sample {idx} is not finite"
                )));
            }
        }
        for (idx, w) in samples.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidProfile(format!(
                    "abscissae not strictly increasing at sample {}",
                    idx + 1
                )));
            }
        }
        let xs: Vec<T> = samples.iter().map(|p| p.0).collect();
        let ys: Vec<T> = samples.iter().map(|p| p.1).collect();
        let slopes = limited_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    pub fn domain(&self) -> (T, T) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn knots(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Index `k` of the interval `[x_k, x_{k+1}]` containing `x` (clamped).
    fn interval(&self, x: T) -> usize {
        let n = self.xs.len();
        match self
            .xs
            .binary_search_by(|probe| probe.partial_cmp(&x).expect("finite knots"))
        {
            Ok(k) => k.min(n - 2),
            Err(0) => 0,
            Err(k) => (k - 1).min(n - 2),
        }
    }

    pub fn value(&self, x: T) -> T {
        let k = self.interval(x);
        if x == self.xs[k] {
            return self.ys[k];
        }
        if x == self.xs[k + 1] {
            return self.ys[k + 1];
        }
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::two();
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let v = h00 * self.ys[k]
            + h10 * h * self.slopes[k]
            + h01 * self.ys[k + 1]
            + h11 * h * self.slopes[k + 1];
        let lo = self.ys[k].min(self.ys[k + 1]);
        let hi = self.ys[k].max(self.ys[k + 1]);
        v.max(lo).min(hi)
    }

    pub fn slope_at(&self, x: T) -> T {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let six = T::lit(6.0);
        let three = T::lit(3.0);
        let four = T::lit(4.0);
        let d00 = six * t2 - six * t;
        let d10 = three * t2 - four * t + T::one();
        let d01 = -six * t2 + six * t;
        let d11 = three * t2 - T::two() * t;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / h
            + d10 * self.slopes[k]
            + d11 * self.slopes[k + 1]
    }
}

/// Knot slopes from three-point estimates, then limited so each interval's
/// Hermite cubic is monotone (Fritsch–Carlson).
fn limited_slopes<T: Scalar>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let secants: Vec<T> = (0..n - 1)
        .map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]))
        .collect();
    if n == 2 {
        return vec![secants[0], secants[0]];
    }
    let widths: Vec<T> = (0..n - 1).map(|k| xs[k + 1] - xs[k]).collect();
    let mut m = vec![T::zero(); n];
    for k in 1..n - 1 {
        let (hl, hr) = (widths[k - 1], widths[k]);
        let (dl, dr) = (secants[k - 1], secants[k]);
        m[k] = (hr * dl + hl * dr) / (hl + hr);
    }
    m[0] = end_slope(widths[0], widths[1], secants[0], secants[1]);
    m[n - 1] = end_slope(widths[n - 2], widths[n - 3], secants[n - 2], secants[n - 3]);

    let three = T::lit(3.0);
    for k in 0..n - 1 {
        let d = secants[k];
        if d == T::zero() {
            m[k] = T::zero();
            m[k + 1] = T::zero();
            continue;
        }
        if m[k].signum() != d.signum() {
            m[k] = T::zero();
        }
        if m[k + 1].signum() != d.signum() {
            m[k + 1] = T::zero();
        }
        let a = m[k] / d;
        let b = m[k + 1] / d;
        let r = a * a + b * b;
        if r > three * three {
            let tau = three / r.sqrt();
            m[k] = tau * a * d;
            m[k + 1] = tau * b * d;
        }
    }
    // Extrema at interior knots get a flat tangent.
    for k in 1..n - 1 {
        if secants[k - 1] * secants[k] < T::zero() {
            m[k] = T::zero();
        }
    }
    m
}

/// One-sided three-point slope at an end knot, kept shape-preserving.
fn end_slope<T: Scalar>(h0: T, h1: T, d0: T, d1: T) -> T {
    let m = ((T::two() * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        T::zero()
    } else if d0.signum() != d1.signum() && m.abs() > (T::lit(3.0) * d0).abs() {
        T::lit(3.0) * d0
    } else {
        m
    }
}
