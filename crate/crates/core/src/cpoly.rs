//! Dense univariate polynomials with complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots;

/// Coefficients at or below this fraction of the largest one are dropped from
/// the top of the coefficient list.
pub const TRIM_RELATIVE: f64 = 1e-30;

/// Default relative remainder cutoff for [`gcd`].
pub const DEFAULT_GCD_TOL: f64 = 1e-8;

/// `coeffs[k]` multiplies `t^k`. The zero polynomial has no coefficients and
/// a nonzero polynomial always has a nonzero leading coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = ComplexPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexPolynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPolynomial::new(vec![c])
    }

    pub fn one() -> Self {
        ComplexPolynomial::constant(Complex64::new(1.0, 0.0))
    }

    /// `prod (t - r)` over `roots`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(ComplexPolynomial::one(), |acc, &r| {
            &acc * &ComplexPolynomial::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    fn trim(&mut self) {
        let max = self.max_abs();
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(c) = self.coeffs.last() {
            if c.norm() <= TRIM_RELATIVE * max {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Horner evaluation.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    /// Value and first derivative at `t`.
    pub fn eval_with_derivative(&self, t: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    /// `sum |c_k| r^k`: the scale against which rounding in [`eval`] is measured.
    ///
    /// [`eval`]: ComplexPolynomial::eval
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj_coeffs(&self) -> Self {
        ComplexPolynomial {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = lc.inv();
                let mut coeffs: Vec<_> = self.coeffs.iter().map(|&c| c * inv).collect();
                *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
                ComplexPolynomial::new(coeffs)
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder with `self = q * d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &ComplexPolynomial) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let Some(pd) = self.degree() else {
            return Ok((ComplexPolynomial::zero(), ComplexPolynomial::zero()));
        };
        if pd < dd {
            return Ok((ComplexPolynomial::zero(), self.clone()));
        }
        let lc_inv = d.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); pd - dd + 1];
        for k in (0..=pd - dd).rev() {
            let q = rem[k + dd] * lc_inv;
            quot[k] = q;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= q * dc;
            }
            rem[k + dd] = Complex64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        Ok((ComplexPolynomial::new(quot), ComplexPolynomial::new(rem)))
    }

    /// Every coefficient's imaginary part is at most `tol` times the largest
    /// coefficient modulus.
    pub fn is_real_coeffs(&self, tol: f64) -> bool {
        let max = self.max_abs();
        self.coeffs.iter().all(|c| c.im.abs() <= tol * max)
    }

    /// Largest `|Im c_k|` relative to the largest coefficient modulus.
    pub fn relative_imag(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / max
    }

    /// Drops imaginary parts.
    pub fn real_part(&self) -> Self {
        ComplexPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        )
    }

    /// Exactly real coefficients.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Removes leading coefficients of modulus at most `abs_tol`.
    fn strip_leading(&mut self, abs_tol: f64) {
        while let Some(c) = self.coeffs.last() {
            if c.norm() <= abs_tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn add(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn sub(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn mul(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl fmt::Display for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Approximate monic gcd by the Euclidean remainder sequence.
///
/// A divisor in the sequence becomes a candidate once the next remainder is
/// small (norm at most `sqrt(tol)` times the dividend norm; leading
/// coefficients at or below `tol` times it are discarded as rounding noise).
/// The candidate rebuilt from its roots polished against `p`, or failing that
/// the candidate itself, is returned if it divides both inputs with relative
/// remainder at most `tol`. A remainder that vanishes without such a divisor ends the
/// search with 1.
/// `gcd(p, 0)` is `monic(p)`; `gcd(0, 0)` is the zero polynomial.
pub fn gcd(p: &ComplexPolynomial, q: &ComplexPolynomial, tol: f64) -> ComplexPolynomial {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let (mut a, mut b) = if p.degree() >= q.degree() {
        (normalized(p), normalized(q))
    } else {
        (normalized(q), normalized(p))
    };
    loop {
        if b.degree() == Some(0) {
            return ComplexPolynomial::one();
        }
        // b has positive degree and a nonzero leading coefficient here
        let (_, mut r) = a.divrem(&b).expect("divisor is nonzero");
        let cutoff = tol * a.norm();
        r.strip_leading(cutoff);
        // the remainder sequence loses digits with every step, so candidates
        // are screened loosely and then must divide both inputs to `tol`
        let rho = r.norm() / a.norm();
        if rho <= tol.sqrt() {
            // b carries errors of about max(rho, tol); an m-fold root of b
            // is split by about the m-th root of that
            let level = rho.max(tol);
            for radius in [level.sqrt(), level.cbrt()] {
                if let Some(g) = refine_divisor(&b, p, radius) {
                    if divides_both(&g, p, q, tol) {
                        return g;
                    }
                }
            }
            if divides_both(&b, p, q, tol) {
                return b.monic();
            }
        }
        if r.is_zero() {
            // noise-level remainder but b is not a true common factor:
            // nothing further can be extracted
            return ComplexPolynomial::one();
        }
        a = b;
        b = normalized(&r);
    }
}

/// Pairwise fold of [`gcd`] over `ps`, ignoring zero polynomials.
pub fn gcd_many(ps: &[ComplexPolynomial], tol: f64) -> ComplexPolynomial {
    ps.iter()
        .fold(ComplexPolynomial::zero(), |acc, p| gcd(&acc, p, tol))
}

fn normalized(p: &ComplexPolynomial) -> ComplexPolynomial {
    let n = p.norm();
    ComplexPolynomial::new(p.coeffs.iter().map(|&c| c / n).collect())
}

/// Rebuilds `d` from its roots after polishing them against `p`, where they
/// are roots of at least the same multiplicity. Roots of `d` closer than
/// `radius * (1 + |z|)` are merged first, since coefficient errors split
/// multiple roots.
fn refine_divisor(d: &ComplexPolynomial, p: &ComplexPolynomial, radius: f64) -> Option<ComplexPolynomial> {
    let rl = roots::all_roots(d).ok()?;
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for r in &rl.roots {
        let near = groups
            .iter_mut()
            .find(|(z, _)| (*z - r.value).norm() <= radius * (1.0 + z.norm()));
        match near {
            Some((z, m)) => {
                *z = (*z * *m as f64 + r.value * r.multiplicity as f64) / (*m + r.multiplicity) as f64;
                *m += r.multiplicity;
            }
            None => groups.push((r.value, r.multiplicity)),
        }
    }
    let mut polished = Vec::with_capacity(rl.total_multiplicity());
    for (z, m) in groups {
        let z = roots::polish_multiple(p, z, m);
        polished.extend(std::iter::repeat(z).take(m));
    }
    Some(ComplexPolynomial::from_roots(&polished))
}

fn divides_both(d: &ComplexPolynomial, p: &ComplexPolynomial, q: &ComplexPolynomial, tol: f64) -> bool {
    [p, q].iter().all(|x| match x.divrem(d) {
        Ok((_, r)) => r.norm() <= tol * x.norm(),
        Err(_) => false,
    })
}
