//! Companion-polynomial method: the independent cross-check for [`crate::solver`].
//!
//! For a monic `p`, the real polynomial `b_k = sum_j conj(q_j) q_(k-j)` has
//! every class `[x]` containing a zero of `p` among its roots. For a root `z`
//! the powers reduce as `x^j = alpha_j x + beta_j` on `[z]`, so `p(x) = A x + B`
//! there and the zero (if unique) is `-A^-1 B`.

use num_complex::Complex64;

use crate::cpoly::ComplexPolynomial;
use crate::error::{Error, Result};
use crate::quaternion::{ConjugacyClass, Quaternion};
use crate::roots;
use crate::solver::{SimplePolynomial, Tolerances, ZeroSet};

/// Allowed relative imaginary residue of the companion coefficients.
pub const COMPANION_IMAG_TOL: f64 = 1e-10;

/// Real coefficients `b_0 ..= b_2n`, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionPolynomial {
    pub b: Vec<f64>,
}

impl CompanionPolynomial {
    pub fn to_complex(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_real(&self.b)
    }
}

pub fn companion(p: &SimplePolynomial) -> Result<CompanionPolynomial> {
    let q = p.coeffs();
    if q.is_empty() {
        return Err(Error::DegreeZero);
    }
    let n = q.len() - 1;
    let mut b = Vec::with_capacity(2 * n + 1);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for k in 0..=2 * n {
        let lo = k.saturating_sub(n);
        let hi = k.min(n);
        let mut s = Quaternion::ZERO;
        for j in lo..=hi {
            s = s + q[j].conj() * q[k - j];
        }
        worst = worst.max(s.imag_norm());
        scale = scale.max(s.a0.abs());
        b.push(s.a0);
    }
    if scale > 0.0 && worst > COMPANION_IMAG_TOL * scale {
        return Err(Error::NonRealCompanion { relative_imag: worst / scale });
    }
    Ok(CompanionPolynomial { b })
}

/// `x^j = alpha[j] x + beta[j]` for every `x` in a fixed class.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerDecomposition {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

/// The decomposition for `j = 0 ..= n`; depends on `x` only through
/// `Re x` and `|x|`.
pub fn power_decomp(x: Quaternion, n: usize) -> PowerDecomposition {
    let t = 2.0 * x.re();
    let m = x.norm_sqr();
    let mut alpha = Vec::with_capacity(n + 1);
    let mut beta = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..=n {
        alpha.push(a);
        beta.push(b);
        (a, b) = (t * a + b, -m * a);
    }
    PowerDecomposition { alpha, beta }
}

/// `(A, B)` with `p(x) = A x + B` on the class of `z`.
pub fn ab(p: &SimplePolynomial, z: Quaternion) -> (Quaternion, Quaternion) {
    let n = p.degree().unwrap_or(0);
    let pd = power_decomp(z, n);
    p.coeffs()
        .iter()
        .zip(pd.alpha.iter().zip(&pd.beta))
        .fold((Quaternion::ZERO, Quaternion::ZERO), |(a, b), (&q, (&al, &be))| {
            (a + q * al, b + q * be)
        })
}

/// `|q_j|` weighted by `|alpha_j|` and `|beta_j|`: the magnitudes `A` and `B`
/// would have without cancellation.
fn ab_scale(p: &SimplePolynomial, z: Quaternion) -> (f64, f64) {
    let pd = power_decomp(z, p.degree().unwrap_or(0));
    p.coeffs()
        .iter()
        .zip(pd.alpha.iter().zip(&pd.beta))
        .fold((0.0, 0.0), |(sa, sb), (q, (al, be))| {
            (sa + q.norm() * al.abs(), sb + q.norm() * be.abs())
        })
}

/// The zero of `p` in `[z]`: `None` if the whole class is a zero.
fn zero_in_class(p: &SimplePolynomial, z: Complex64, tol_zero: f64) -> Option<Quaternion> {
    let zq = Quaternion::embed_complex(z);
    let (a, b) = ab(p, zq);
    let (sa, sb) = ab_scale(p, zq);
    let scale = sa.max(sb).max(f64::MIN_POSITIVE);
    let v = a.conj() * b;
    if v.norm() < tol_zero * scale * scale {
        return None;
    }
    let w = v.vector();
    let wn = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if wn <= f64::EPSILON * v.norm() {
        // v real: fall back to the unprojected solution
        return Some(-(a.inverse().ok()? * b));
    }
    let s = z.im.abs() / wn;
    Some(Quaternion::new(z.re, -s * w[0], -s * w[1], -s * w[2]))
}

/// `-A^-1 B` projected into `[z]`, ignoring how small `v` is.
fn isolated_in_class(p: &SimplePolynomial, z: Complex64) -> Option<Quaternion> {
    zero_in_class(p, z, 0.0)
}

pub fn solve_jo(p: &SimplePolynomial, tols: &Tolerances) -> Result<ZeroSet> {
    match p.degree() {
        Some(n) if n >= 1 => {}
        _ => return Err(Error::DegreeZero),
    }
    let lead_inv = p.leading().expect("degree >= 1").inverse()?;
    let monic = p.left_mul(lead_inv);
    let comp = companion(&monic)?;
    let split = roots::classify_real(&roots::all_roots(&comp.to_complex())?, tols.real)?;

    let mut zs = ZeroSet::default();
    for &(x, _) in &split.reals {
        zs.real_zeros.push(x);
    }
    for &(z, m) in &split.pairs {
        let z = Complex64::new(z.re, z.im.abs());
        // a whole class of zeros makes its quadratic factor divide the companion twice
        let found = if m >= 2 {
            zero_in_class(&monic, z, tols.zero)
        } else {
            isolated_in_class(&monic, z)
        };
        match found {
            None => zs.spherical.push(ConjugacyClass::from_complex(z).expect("z is nonreal")),
            Some(q) => {
                let dup = zs
                    .isolated_zeros
                    .iter()
                    .any(|y| y.distance(q) <= tols.dedup * q.norm().max(1.0));
                if !dup {
                    zs.isolated_zeros.push(q);
                }
            }
        }
    }
    zs.real_zeros.sort_by(f64::total_cmp);
    zs.isolated_zeros.sort_by(|a, b| {
        a.to_array()
            .iter()
            .zip(b.to_array().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    zs.spherical.sort_by(|a, b| {
        a.re()
            .total_cmp(&b.re())
            .then(a.imag_norm().total_cmp(&b.imag_norm()))
    });
    Ok(zs)
}
