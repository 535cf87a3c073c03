//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the analyses are written against (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Row-major 3x3 matrix used for laminate and shell stiffnesses.
pub type Mat3<T> = [[T; 3]; 3];

pub(crate) fn zero3<T: num_traits::Zero + Copy>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub(crate) fn det3<T>(m: &Mat3<T>) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>,
{
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse by cofactors; `None` when the determinant is exactly zero.
pub(crate) fn inv3<T>(m: &Mat3<T>) -> Option<Mat3<T>>
where
    T: num_traits::Num + Copy,
{
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [c(1, 2, 1, 2), T::zero() - c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [T::zero() - c(1, 2, 0, 2), c(0, 2, 0, 2), T::zero() - c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), T::zero() - c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ];
    let mut out = adj;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v = *v / d;
        }
    }
    Some(out)
}

pub(crate) fn mul3v<T>(m: &Mat3<T>, v: &[T; 3]) -> [T; 3]
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[cfg(test)]
pub(crate) fn mul3<T>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T>
where
    T: num_traits::Num + Copy,
{
    let mut out = zero3();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = T::zero();
            for k in 0..3 {
                acc = acc + a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}
