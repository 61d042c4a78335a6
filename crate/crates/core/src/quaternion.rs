//! Real quaternions, their complex-pair form `z1 + z2 j`, the embedding into
//! 2x2 complex matrices, and conjugacy classes.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// `a0 + a1 i + a2 j + a3 k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Quaternion { a0, a1, a2, a3 }
    }

    #[inline]
    pub const fn from_real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    /// Embeds a complex number along the `i` axis.
    #[inline]
    pub fn embed_complex(c: Complex64) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    /// Reassembles `z1 + z2 j`.
    #[inline]
    pub fn from_pair(pair: ComplexPair) -> Self {
        Quaternion::new(pair.z1.re, pair.z1.im, pair.z2.re, pair.z2.im)
    }

    /// Splits into `(a0 + a1 i) + (a2 + a3 i) j`.
    #[inline]
    pub fn split(self) -> ComplexPair {
        ComplexPair {
            z1: Complex64::new(self.a0, self.a1),
            z2: Complex64::new(self.a2, self.a3),
        }
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.a0
    }

    /// The vector part `a1 i + a2 j + a3 k`.
    #[inline]
    pub fn vector(self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.a0, -self.a1, -self.a2, -self.a3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.a0 * self.a0 + self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }

    #[inline]
    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge components finite
        let m = self
            .a0
            .abs()
            .max(self.a1.abs())
            .max(self.a2.abs())
            .max(self.a3.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        (self / m).norm_sqr().sqrt() * m
    }

    /// Length of the vector part.
    #[inline]
    pub fn imag_norm(self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3).sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.a0 == 0.0 && self.a1 == 0.0 && self.a2 == 0.0 && self.a3 == 0.0
    }

    /// True when the `j` and `k` components vanish.
    pub fn is_complex(self) -> bool {
        self.a2 == 0.0 && self.a3 == 0.0
    }

    pub fn is_real(self) -> bool {
        self.a1 == 0.0 && self.is_complex()
    }

    /// `conj(q) / |q|^2`.
    pub fn inverse(self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let n2 = self.norm_sqr();
        if n2.is_finite() && n2 > f64::MIN_POSITIVE {
            return Ok(self.conj() / n2);
        }
        // rescale first when |q|^2 would under- or overflow
        let n = self.norm();
        Ok((self.conj() / n) / n)
    }

    pub fn powi(self, n: usize) -> Self {
        let mut acc = Quaternion::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Euclidean distance in R^4.
    pub fn distance(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    pub fn sigma(self) -> ComplexMatrix2 {
        let ComplexPair { z1, z2 } = self.split();
        ComplexMatrix2 {
            m11: z1,
            m12: z2,
            m21: -z2.conj(),
            m22: z1.conj(),
        }
    }
}

impl From<f64> for Quaternion {
    fn from(a: f64) -> Self {
        Quaternion::from_real(a)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Quaternion::embed_complex(c)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a0 + rhs.a0,
            self.a1 + rhs.a1,
            self.a2 + rhs.a2,
            self.a3 + rhs.a3,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a0 - rhs.a0,
            self.a1 - rhs.a1,
            self.a2 - rhs.a2,
            self.a3 - rhs.a3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a0, -self.a1, -self.a2, -self.a3)
    }
}

/// Hamilton product: `i^2 = j^2 = k^2 = -1`, `ij = k`, `jk = i`, `ki = j`.
impl Mul for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a0 * q.a0 - p.a1 * q.a1 - p.a2 * q.a2 - p.a3 * q.a3,
            p.a0 * q.a1 + p.a1 * q.a0 + p.a2 * q.a3 - p.a3 * q.a2,
            p.a0 * q.a2 - p.a1 * q.a3 + p.a2 * q.a0 + p.a3 * q.a1,
            p.a0 * q.a3 + p.a1 * q.a2 - p.a2 * q.a1 + p.a3 * q.a0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.a0 * s, self.a1 * s, self.a2 * s, self.a3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;

    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.a0 / s, self.a1 / s, self.a2 / s, self.a3 / s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |x: f64| if x.is_sign_negative() { '-' } else { '+' };
        write!(
            f,
            "{} {} {}i {} {}j {} {}k",
            self.a0,
            sign(self.a1),
            self.a1.abs(),
            sign(self.a2),
            self.a2.abs(),
            sign(self.a3),
            self.a3.abs()
        )
    }
}

/// The pair `(z1, z2)` with `q = z1 + z2 j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// A 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl ComplexMatrix2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ComplexMatrix2 {
            m11: one,
            m12: zero,
            m21: zero,
            m22: one,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }
}

impl Add for ComplexMatrix2 {
    type Output = ComplexMatrix2;

    fn add(self, rhs: ComplexMatrix2) -> ComplexMatrix2 {
        ComplexMatrix2 {
            m11: self.m11 + rhs.m11,
            m12: self.m12 + rhs.m12,
            m21: self.m21 + rhs.m21,
            m22: self.m22 + rhs.m22,
        }
    }
}

impl Sub for ComplexMatrix2 {
    type Output = ComplexMatrix2;

    fn sub(self, rhs: ComplexMatrix2) -> ComplexMatrix2 {
        ComplexMatrix2 {
            m11: self.m11 - rhs.m11,
            m12: self.m12 - rhs.m12,
            m21: self.m21 - rhs.m21,
            m22: self.m22 - rhs.m22,
        }
    }
}

impl Mul for ComplexMatrix2 {
    type Output = ComplexMatrix2;

    fn mul(self, b: ComplexMatrix2) -> ComplexMatrix2 {
        let a = self;
        ComplexMatrix2 {
            m11: a.m11 * b.m11 + a.m12 * b.m21,
            m12: a.m11 * b.m12 + a.m12 * b.m22,
            m21: a.m21 * b.m11 + a.m22 * b.m21,
            m22: a.m21 * b.m12 + a.m22 * b.m22,
        }
    }
}

/// `true` iff `u1` and `u2` share real part and modulus, each compared at
/// `tol * max(1, |u1|, |u2|)`.
pub fn same_class(u1: Quaternion, u2: Quaternion, tol: f64) -> bool {
    let (n1, n2) = (u1.norm(), u2.norm());
    let s = 1f64.max(n1).max(n2);
    (u1.re() - u2.re()).abs() <= tol * s && (n1 - n2).abs() <= tol * s
}

/// The conjugacy class `[q]` of a nonreal quaternion, stored as the complex
/// member with positive imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    representative: Complex64,
}

impl ConjugacyClass {
    /// The class containing `c` (or `conj(c)`). `None` for real `c`.
    pub fn from_complex(c: Complex64) -> Option<Self> {
        if c.im == 0.0 || !c.im.is_finite() || !c.re.is_finite() {
            return None;
        }
        Some(ConjugacyClass {
            representative: Complex64::new(c.re, c.im.abs()),
        })
    }

    /// The class of a nonreal quaternion.
    pub fn of(q: Quaternion) -> Option<Self> {
        ConjugacyClass::from_complex(Complex64::new(q.re(), q.imag_norm()))
    }

    /// The class with the given real part and modulus; requires `|re| < modulus`.
    pub fn from_re_modulus(re: f64, modulus: f64) -> Option<Self> {
        let im2 = modulus * modulus - re * re;
        if im2 <= 0.0 {
            return None;
        }
        ConjugacyClass::from_complex(Complex64::new(re, im2.sqrt()))
    }

    pub fn representative(&self) -> Complex64 {
        self.representative
    }

    pub fn re(&self) -> f64 {
        self.representative.re
    }

    pub fn modulus(&self) -> f64 {
        self.representative.norm()
    }

    /// Length of the vector part shared by every member.
    pub fn imag_norm(&self) -> f64 {
        self.representative.im
    }

    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        same_class(Quaternion::embed_complex(self.representative), q, tol)
    }

    /// The member `re + |Im| (d1 i + d2 j + d3 k)` for a unit direction `d`.
    pub fn member(&self, direction: [f64; 3]) -> Quaternion {
        let [x, y, z] = direction;
        let len = (x * x + y * y + z * z).sqrt();
        let s = self.representative.im / len;
        Quaternion::new(self.representative.re, s * x, s * y, s * z)
    }

    /// Distance between classes in the `(re, modulus)` plane.
    pub fn distance(&self, other: &ConjugacyClass) -> f64 {
        (self.representative - other.representative).norm()
    }
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `n` members of `cls` with directions on a Fibonacci sphere, rotated about
/// the `k` axis by an angle derived from `seed`. Seed 0 with `n == 1` yields
/// the direction `i`.
pub fn class_sample(cls: &ConjugacyClass, n: usize, seed: u64) -> Vec<Quaternion> {
    let phase = {
        // fractional part of seed * golden ratio, scaled to a full turn
        let g = 0.618_033_988_749_894_9_f64;
        let f = (seed as f64 * g).fract();
        f * std::f64::consts::TAU
    };
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = phase + i as f64 * GOLDEN_ANGLE;
            cls.member([r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: Quaternion, q: Quaternion, tol: f64) -> bool {
        (p - q).norm() <= tol
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::J, -Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::I * Q::K, -Q::J);
        for u in [Q::I, Q::J, Q::K] {
            assert_eq!(u * u, -Q::ONE);
        }
    }

    #[test]
    fn identity_and_bilinear_expansion() {
        let q = Quaternion::new(2.0, 3.0, -1.0, 1.0);
        assert_eq!(q * Quaternion::ONE, q);
        // (1+i)(1+j) = 1 + j + i + ij
        let lhs = Quaternion::new(1.0, 1.0, 0.0, 0.0) * Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(lhs, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverses() {
        assert_eq!(Quaternion::I.inverse().unwrap(), -Quaternion::I);
        assert_eq!(Quaternion::from_real(2.0).inverse().unwrap(), Quaternion::from_real(0.5));
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let inv = q.inverse().unwrap();
        assert!(close(inv, Quaternion::new(0.25, -0.25, -0.25, -0.25), 1e-15));
        assert!(close(q * inv, Quaternion::ONE, 1e-15));
        assert!(close(inv * q, Quaternion::ONE, 1e-15));
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivision)));
        let tiny = Quaternion::new(1e-200, 0.0, 3e-200, 0.0);
        assert!(close(tiny * tiny.inverse().unwrap(), Quaternion::ONE, 1e-14));
    }

    #[test]
    fn split_examples() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(Quaternion::K.split(), ComplexPair { z1: c(0.0, 0.0), z2: c(0.0, 1.0) });
        assert_eq!(Quaternion::J.split(), ComplexPair { z1: c(0.0, 0.0), z2: c(1.0, 0.0) });
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.split(), ComplexPair { z1: c(1.0, 2.0), z2: c(3.0, 4.0) });
        assert_eq!(Quaternion::from_pair(q.split()), q);
        // z2 j really is (a2 + a3 i) j
        let z2j = Quaternion::embed_complex(c(3.0, 4.0)) * Quaternion::J;
        assert_eq!(Quaternion::embed_complex(c(1.0, 2.0)) + z2j, q);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(Quaternion::ONE.sigma(), ComplexMatrix2::identity());
        let sj = Quaternion::J.sigma();
        let c = |re| Complex64::new(re, 0.0);
        assert_eq!(sj.m11, c(0.0));
        assert_eq!(sj.m12, c(1.0));
        assert_eq!(sj.m21, c(-1.0));
        assert_eq!(sj.m22, c(0.0));
        let lhs = (Quaternion::I * Quaternion::J).sigma();
        let rhs = Quaternion::I.sigma() * Quaternion::J.sigma();
        assert_eq!(lhs, rhs);
        let s3 = Quaternion::from_real(3.0).sigma();
        assert_eq!(s3.m12, c(0.0));
        assert_eq!(s3.m11, c(3.0));
        assert_eq!(s3.m22, c(3.0));
    }

    #[test]
    fn embedding() {
        assert_eq!(Quaternion::embed_complex(Complex64::i()), Quaternion::I);
        let c = Complex64::new(0.5, 0.866);
        assert_eq!(Quaternion::embed_complex(c), Quaternion::new(0.5, 0.866, 0.0, 0.0));
        assert_eq!(
            Quaternion::embed_complex(c.conj()),
            Quaternion::embed_complex(c).conj()
        );
    }

    #[test]
    fn class_membership() {
        assert!(same_class(Quaternion::I, -Quaternion::I, 1e-12));
        // j = (1 + k) i (1 + k)^{-1}
        let a = Quaternion::ONE + Quaternion::K;
        let conjugated = a * Quaternion::I * a.inverse().unwrap();
        assert!(close(conjugated, Quaternion::J, 1e-15));
        assert!(same_class(Quaternion::I, Quaternion::J, 1e-12));
        assert!(!same_class(Quaternion::ONE, Quaternion::I, 1e-12));
    }

    #[test]
    fn class_constructors() {
        assert!(ConjugacyClass::from_complex(Complex64::new(2.0, 0.0)).is_none());
        let c = ConjugacyClass::from_complex(Complex64::new(0.5, -2.0)).unwrap();
        assert_eq!(c.representative(), Complex64::new(0.5, 2.0));
        let d = ConjugacyClass::from_re_modulus(0.0, 1.0).unwrap();
        assert!((d.representative() - Complex64::i()).norm() < 1e-15);
        assert!(ConjugacyClass::from_re_modulus(2.0, 1.0).is_none());
        let e = ConjugacyClass::of(Quaternion::new(1.0, 0.0, 3.0, 4.0)).unwrap();
        assert_eq!(e.representative(), Complex64::new(1.0, 5.0));
    }

    #[test]
    fn samples_of_unit_imaginary_class() {
        let cls = ConjugacyClass::from_complex(Complex64::i()).unwrap();
        let one = class_sample(&cls, 1, 0);
        assert!(close(one[0], Quaternion::I, 1e-15));
        for q in class_sample(&cls, 3, 7) {
            assert!(q.re().abs() < 1e-15);
            assert!((q.norm() - 1.0).abs() < 1e-15);
        }
        // every member of [i] solves x^2 + 1 = 0
        for q in class_sample(&cls, 16, 3) {
            assert!(close(q * q + Quaternion::ONE, Quaternion::ZERO, 1e-14));
        }
    }

    #[test]
    fn samples_spread_over_sphere() {
        let cls = ConjugacyClass::from_complex(Complex64::new(-1.0, 2.0)).unwrap();
        let pts = class_sample(&cls, 50, 11);
        let mean: [f64; 3] = pts.iter().fold([0.0; 3], |acc, q| {
            let v = q.vector();
            [acc[0] + v[0], acc[1] + v[1], acc[2] + v[2]]
        });
        let m = (mean[0].powi(2) + mean[1].powi(2) + mean[2].powi(2)).sqrt() / 50.0;
        assert!(m < 0.2, "directions clustered: |mean| = {m}");
        for q in pts {
            assert!(cls.contains(q, 1e-12));
        }
    }

    #[test]
    fn conj_product_is_real() {
        let q = Quaternion::new(1.5, -2.0, 0.25, 7.0);
        let p = q * q.conj();
        assert!((p.a0 - q.norm_sqr()).abs() <= 1e-15 * q.norm_sqr());
        assert!(p.imag_norm() <= 1e-15 * q.norm_sqr());
    }
}
