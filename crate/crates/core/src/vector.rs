use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cartesian vector in the fixed global basis `i`, `j`, `k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3<T> {
    pub i: T,
    pub j: T,
    pub k: T,
}

impl<T: Scalar> Vector3<T> {
    pub const fn new(i: T, j: T, k: T) -> Self {
        Self { i, j, k }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_i() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_j() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_k() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.i, self.j, self.k]
    }

    pub fn dot(self, other: Self) -> T {
        self.i * other.i + self.j * other.j + self.k * other.k
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.j * other.k - self.k * other.j,
            self.k * other.i - self.i * other.k,
            self.i * other.j - self.j * other.i,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, f: T) -> Self {
        Self::new(self.i * f, self.j * f, self.k * f)
    }

    /// Returns the unit vector along `self`, or `None` for a zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self.scale(n.recip()))
        } else {
            None
        }
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Fails with [`Error::NotUnit`] unless `| |self| - 1 | <= tol`.
    pub fn ensure_unit(self, tol: T) -> Result<Self> {
        let n = self.norm();
        if (n - T::one()).abs() <= tol {
            Ok(self)
        } else {
            Err(Error::NotUnit { norm: n.as_f64() })
        }
    }

    pub fn map<U: Scalar>(self, f: impl Fn(T) -> U) -> Vector3<U> {
        Vector3::new(f(self.i), f(self.j), f(self.k))
    }

    pub fn is_finite(self) -> bool {
        self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }
}

impl<T: Scalar> Add for Vector3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.i + rhs.i, self.j + rhs.j, self.k + rhs.k)
    }
}

impl<T: Scalar> AddAssign for Vector3<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> Sub for Vector3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.i - rhs.i, self.j - rhs.j, self.k - rhs.k)
    }
}

impl<T: Scalar> Neg for Vector3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.i, -self.j, -self.k)
    }
}

impl<T: Scalar> Mul<T> for Vector3<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

/// An orthonormal triple `(T, N, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame<T> {
    pub tangent: Vector3<T>,
    pub normal: Vector3<T>,
    pub binormal: Vector3<T>,
}

impl<T: Scalar> Frame<T> {
    pub fn new(tangent: Vector3<T>, normal: Vector3<T>, binormal: Vector3<T>) -> Self {
        Self {
            tangent,
            normal,
            binormal,
        }
    }

    /// Builds the frame from `T` and `N` with `B = T × N`.
    pub fn from_tangent_normal(tangent: Vector3<T>, normal: Vector3<T>) -> Self {
        Self::new(tangent, normal, tangent.cross(normal))
    }

    /// Largest deviation from a right-handed orthonormal triple: unit norms,
    /// pairwise orthogonality and `B = T × N`.
    pub fn orthonormality_defect(&self) -> T {
        let (t, n, b) = (self.tangent, self.normal, self.binormal);
        [
            (t.norm() - T::one()).abs(),
            (n.norm() - T::one()).abs(),
            (b.norm() - T::one()).abs(),
            t.dot(n).abs(),
            t.dot(b).abs(),
            n.dot(b).abs(),
            (t.cross(n) - b).norm(),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }

    /// Largest component-wise distance between two frames.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.tangent
            .distance(other.tangent)
            .max(self.normal.distance(other.normal))
            .max(self.binormal.distance(other.binormal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_is_right_handed() {
        let c = Vector3::<f64>::unit_i().cross(Vector3::unit_j());
        assert_eq!(c, Vector3::unit_k());
        let c = Vector3::<f32>::unit_j().cross(Vector3::unit_k());
        assert_eq!(c, Vector3::unit_i());
    }

    #[test]
    fn not_unit_is_rejected() {
        let v = Vector3::new(1.0, 1.0, 0.0);
        assert!(matches!(v.ensure_unit(1e-9), Err(Error::NotUnit { .. })));
        assert!(Vector3::<f64>::unit_k().ensure_unit(1e-9).is_ok());
    }

    #[test]
    fn standard_frame_has_no_defect() {
        let f = Frame::<f64>::from_tangent_normal(Vector3::unit_i(), Vector3::unit_j());
        assert_eq!(f.binormal, Vector3::unit_k());
        assert_eq!(f.orthonormality_defect(), 0.0);
    }
}
