//! Zeros of simple quaternionic polynomials from the roots of the real
//! discriminant polynomial.
//!
//! After scaling the constant term to 0 or 1, each coefficient is split as
//! `p_i = t1_i + t2_i j` and the derived complex polynomials
//! `f1 = sum t1_i t^i + d0`, `f2 = sum t2_i t^i` are formed. The discriminant
//! `f1 * conj(f1) + f2 * conj(f2)` has real coefficients. Its real roots are
//! real zeros; every conjugate pair `(eta, conj(eta))` yields either a whole
//! spherical class `[eta]` (all four derived polynomials vanish at `eta`) or
//! a single isolated zero in `[eta]` given in closed form by [`omega`].
//!
//! [`solve_alg1prime`] first removes the common factor `g = gcd(f1, f2)`,
//! which makes the spherical test exact and the isolated-zero formula
//! branch-free.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::{self, ComplexPolynomial};
use crate::error::{Error, Result};
use crate::quaternion::{same_class, ConjugacyClass, Quaternion};
use crate::roots::{self, RootList};

/// Coefficients at or below this fraction of the largest modulus count as zero.
pub const ZERO_COEFF_RELATIVE: f64 = 1e-30;
/// Allowed relative imaginary residue of the discriminant coefficients.
pub const DISCRIMINANT_IMAG_TOL: f64 = 1e-10;

/// Numerical thresholds shared by all solver paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|Im z|` below which a root is real.
    pub real: f64,
    /// Relative threshold for "this polynomial value is zero".
    pub zero: f64,
    /// Relative remainder cutoff of the approximate gcd.
    pub gcd: f64,
    /// Zeros closer than `dedup * max(1, |z|)` are the same zero.
    pub dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            real: roots::DEFAULT_REAL_TOL,
            zero: 1e-10,
            gcd: cpoly::DEFAULT_GCD_TOL,
            dedup: 1e-8,
        }
    }
}

/// `q_n x^n + ... + q_1 x + q_0` with coefficients left of the powers.
/// `coeffs[k]` multiplies `x^k`; trailing (top) zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolynomial {
    coeffs: Vec<Quaternion>,
}

impl SimplePolynomial {
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        let max = coeffs.iter().map(|q| q.norm()).fold(0.0, f64::max);
        while let Some(q) = coeffs.last() {
            if max == 0.0 || q.norm() <= ZERO_COEFF_RELATIVE * max {
                coeffs.pop();
            } else {
                break;
            }
        }
        SimplePolynomial { coeffs }
    }

    pub fn from_arrays(coeffs: &[[f64; 4]]) -> Self {
        SimplePolynomial::new(coeffs.iter().map(|&a| Quaternion::from_array(a)).collect())
    }

    /// Real coefficients, constant term first.
    pub fn from_real(coeffs: &[f64]) -> Self {
        SimplePolynomial::new(coeffs.iter().map(|&a| Quaternion::from_real(a)).collect())
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Quaternion> {
        self.coeffs.last().copied()
    }

    /// `sum |q_k|`.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|q| q.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// `c * p(x)`, which has the same zeros for `c != 0`.
    pub fn left_mul(&self, c: Quaternion) -> Self {
        SimplePolynomial::new(self.coeffs.iter().map(|&q| c * q).collect())
    }

    /// Coefficient-wise quaternion conjugate. `x^n q_n + ... + q_0 = 0` holds
    /// iff `conj(x)` is a zero of the conjugated left polynomial.
    pub fn conj_coeffs(&self) -> Self {
        SimplePolynomial::new(self.coeffs.iter().map(|q| q.conj()).collect())
    }

    pub fn has_complex_coeffs(&self) -> bool {
        self.coeffs.iter().all(|q| q.is_complex())
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|q| q.is_real())
    }
}

/// `p_n x^n + ... + p_1 x + d0` with `d0` exactly 0 or 1; `coeffs[0] == d0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedPolynomial {
    coeffs: Vec<Quaternion>,
}

impl NormalizedPolynomial {
    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn d0(&self) -> f64 {
        self.coeffs[0].a0
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn as_simple(&self) -> SimplePolynomial {
        SimplePolynomial::new(self.coeffs.clone())
    }
}

/// `f1, f2` and their coefficient conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedPolynomials {
    pub f1: ComplexPolynomial,
    pub f2: ComplexPolynomial,
    pub f1bar: ComplexPolynomial,
    pub f2bar: ComplexPolynomial,
}

impl DerivedPolynomials {
    fn all(&self) -> [&ComplexPolynomial; 4] {
        [&self.f1, &self.f2, &self.f1bar, &self.f2bar]
    }
}

/// All zeros of a simple polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub real_zeros: Vec<f64>,
    pub isolated_zeros: Vec<Quaternion>,
    pub spherical: Vec<ConjugacyClass>,
}

impl ZeroSet {
    /// Number of conjugacy classes met by the zero set.
    pub fn class_count(&self) -> usize {
        self.real_zeros.len() + self.isolated_zeros.len() + self.spherical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.spherical.is_empty()
    }

    /// Zeros of `x^n q_n + ...` from the zeros of `conj(q_n) x^n + ...`.
    pub fn conjugated(&self) -> ZeroSet {
        ZeroSet {
            real_zeros: self.real_zeros.clone(),
            isolated_zeros: self.isolated_zeros.iter().map(|q| q.conj()).collect(),
            spherical: self.spherical.clone(),
        }
    }
}

fn dedup_scale(x: f64) -> f64 {
    x.max(1.0)
}

/// Accumulates zeros, dropping near-duplicates.
#[derive(Debug)]
struct ZeroSetBuilder {
    set: ZeroSet,
    tol: f64,
}

impl ZeroSetBuilder {
    fn new(tol: f64) -> Self {
        ZeroSetBuilder { set: ZeroSet::default(), tol }
    }

    fn real(&mut self, x: f64) {
        let tol = self.tol;
        if !self
            .set
            .real_zeros
            .iter()
            .any(|&y| (x - y).abs() <= tol * dedup_scale(x.abs().max(y.abs())))
        {
            self.set.real_zeros.push(x);
        }
    }

    fn isolated(&mut self, q: Quaternion) {
        let tol = self.tol;
        if !self
            .set
            .isolated_zeros
            .iter()
            .any(|&y| q.distance(y) <= tol * dedup_scale(q.norm().max(y.norm())))
        {
            self.set.isolated_zeros.push(q);
        }
    }

    fn class(&mut self, c: ConjugacyClass) {
        let tol = self.tol;
        if !self
            .set
            .spherical
            .iter()
            .any(|y| c.distance(y) <= tol * dedup_scale(c.modulus().max(y.modulus())))
        {
            self.set.spherical.push(c);
        }
    }

    fn finish(self) -> ZeroSet {
        let ZeroSet { mut real_zeros, isolated_zeros, mut spherical } = self.set;
        let tol = self.tol;
        let mut isolated_zeros: Vec<Quaternion> = isolated_zeros
            .into_iter()
            .filter(|&q| !spherical.iter().any(|c| c.contains(q, tol)))
            .collect();
        real_zeros.sort_by(f64::total_cmp);
        isolated_zeros.sort_by(|a, b| {
            a.to_array()
                .iter()
                .zip(b.to_array().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        spherical.sort_by(|a, b| {
            a.re()
                .total_cmp(&b.re())
                .then(a.imag_norm().total_cmp(&b.imag_norm()))
        });
        ZeroSet { real_zeros, isolated_zeros, spherical }
    }
}

/// Components of a product below this multiple of `eps * |q|` are rounding
/// residue of exact zeros.
const SNAP_ULPS: f64 = 16.0;

fn snap_noise(q: Quaternion) -> Quaternion {
    let cut = SNAP_ULPS * f64::EPSILON * q.norm();
    let a = q.to_array().map(|x| if x.abs() <= cut { 0.0 } else { x });
    Quaternion::from_array(a)
}

/// Left-multiplies by `q0^-1` when the constant term is nonzero. Components
/// left at rounding level by the product are set to zero, so that a
/// coefficient like `q0^-1 q0 j` keeps its exact complex or real structure.
pub fn normalize(p: &SimplePolynomial) -> Result<NormalizedPolynomial> {
    match p.degree() {
        Some(n) if n >= 1 => {}
        _ => return Err(Error::DegreeZero),
    }
    let q0 = p.coeffs[0];
    let coeffs = if q0.norm() <= ZERO_COEFF_RELATIVE * p.max_abs() {
        let mut c = p.coeffs.clone();
        c[0] = Quaternion::ZERO;
        c
    } else {
        let inv = q0.inverse()?;
        let mut c: Vec<Quaternion> = p.coeffs.iter().map(|&q| snap_noise(inv * q)).collect();
        c[0] = Quaternion::ONE;
        c
    };
    Ok(NormalizedPolynomial { coeffs })
}

/// Splits each `p_i = t1 + t2 j` into the derived polynomials.
pub fn derived(np: &NormalizedPolynomial) -> DerivedPolynomials {
    let mut c1 = Vec::with_capacity(np.coeffs.len());
    let mut c2 = Vec::with_capacity(np.coeffs.len());
    c1.push(Complex64::new(np.d0(), 0.0));
    c2.push(Complex64::new(0.0, 0.0));
    for q in &np.coeffs[1..] {
        let pair = q.split();
        c1.push(pair.z1);
        c2.push(pair.z2);
    }
    let f1 = ComplexPolynomial::new(c1);
    let f2 = ComplexPolynomial::new(c2);
    DerivedPolynomials {
        f1bar: f1.conj_coeffs(),
        f2bar: f2.conj_coeffs(),
        f1,
        f2,
    }
}

/// `f1 conj(f1) + f2 conj(f2)` with the (rounding-level) imaginary parts dropped.
pub fn discriminant(dp: &DerivedPolynomials) -> Result<ComplexPolynomial> {
    hermitian_sum(&dp.f1, &dp.f2)
}

fn hermitian_sum(a: &ComplexPolynomial, b: &ComplexPolynomial) -> Result<ComplexPolynomial> {
    let s = &(a * &a.conj_coeffs()) + &(b * &b.conj_coeffs());
    let relative_imag = s.relative_imag();
    if relative_imag > DISCRIMINANT_IMAG_TOL {
        return Err(Error::NonRealDiscriminant { relative_imag });
    }
    Ok(s.real_part())
}

/// Whether a discriminant root spans a spherical class (`T1`) or yields a
/// single isolated zero (`T2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaClass {
    T1,
    T2,
}

/// `T1` iff all four derived polynomials vanish at `eta`, each value measured
/// against `max|c_k| * max(1, |eta|)^n` taken over the coefficients of both
/// `f1` and `f2`.
pub fn classify_eta(dp: &DerivedPolynomials, eta: Complex64, tol_zero: f64) -> EtaClass {
    let n = dp.f1.degree().max(dp.f2.degree()).unwrap_or(0) as i32;
    let scale = dp.f1.max_abs().max(dp.f2.max_abs()) * eta.norm().max(1.0).powi(n);
    if dp.all().iter().all(|f| f.eval(eta).norm() <= tol_zero * scale) {
        EtaClass::T1
    } else {
        EtaClass::T2
    }
}

#[inline]
fn times_k(c: Complex64) -> Quaternion {
    Quaternion::embed_complex(c) * Quaternion::K
}

/// Rescales `(a, b)` to unit max-modulus; the formulas are homogeneous of
/// degree zero in the pair.
fn unit_pair(a: Complex64, b: Complex64) -> Option<(Complex64, Complex64)> {
    let m = a.norm().max(b.norm());
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    Some((a / m, b / m))
}

/// `(|b|^2 eta + |a|^2 conj(eta) - 2 b conj(a) Im(eta) k) / (|a|^2 + |b|^2)`
/// with `a = f1(eta)`, `b = f2(eta)`.
fn omega_at_eta(a: Complex64, b: Complex64, eta: Complex64) -> Option<Quaternion> {
    let (a, b) = unit_pair(a, b)?;
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let num = Quaternion::embed_complex(eta) * nb + Quaternion::embed_complex(eta.conj()) * na
        - times_k(b * a.conj() * (2.0 * eta.im));
    Some(num / (na + nb))
}

/// `(|a|^2 eta + |b|^2 conj(eta) + 2 b conj(a) Im(eta) k) / (|a|^2 + |b|^2)`
/// with `a = f1(conj eta)`, `b = f2(conj eta)`.
fn omega_at_conj(a: Complex64, b: Complex64, eta: Complex64) -> Option<Quaternion> {
    let (a, b) = unit_pair(a, b)?;
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let num = Quaternion::embed_complex(eta) * na
        + Quaternion::embed_complex(eta.conj()) * nb
        + times_k(b * a.conj() * (2.0 * eta.im));
    Some(num / (na + nb))
}

/// The isolated zero in `[eta]` for a discriminant root `eta` outside `T1`.
///
/// Both closed forms are available whenever their denominators
/// `|f1|^2 + |f2|^2` (at `eta` and at `conj(eta)`) are nonzero; the one with
/// the larger denominator is used, ties going to the form at `eta`.
pub fn omega(dp: &DerivedPolynomials, eta: Complex64) -> Result<Quaternion> {
    let (a, b) = (dp.f1.eval(eta), dp.f2.eval(eta));
    let (ac, bc) = (dp.f1.eval(eta.conj()), dp.f2.eval(eta.conj()));
    let d_plus = a.norm_sqr() + b.norm_sqr();
    let d_minus = ac.norm_sqr() + bc.norm_sqr();
    let w = if d_plus >= d_minus {
        omega_at_eta(a, b, eta)
    } else {
        omega_at_conj(ac, bc, eta)
    };
    w.ok_or(Error::BothDenominatorsZero { eta })
}

fn canonical(eta: Complex64) -> Complex64 {
    Complex64::new(eta.re, eta.im.abs())
}

/// Discriminant-root method: real roots, then one spherical class or one
/// isolated zero per conjugate pair.
pub fn solve_alg1(p: &SimplePolynomial, tols: &Tolerances) -> Result<ZeroSet> {
    let np = normalize(p)?;
    let dp = derived(&np);
    let disc = discriminant(&dp)?;
    let split = roots::classify_real(&roots::all_roots(&disc)?, tols.real)?;
    let real_coeffs = np.coeffs.iter().all(|q| q.is_real());

    let mut out = ZeroSetBuilder::new(tols.dedup);
    for &(x, _) in &split.reals {
        out.real(x);
    }
    for &(eta, _) in &split.pairs {
        let eta = canonical(eta);
        let class = if real_coeffs {
            EtaClass::T1
        } else {
            classify_eta(&dp, eta, tols.zero)
        };
        match class {
            EtaClass::T1 => out.class(ConjugacyClass::from_complex(eta).expect("eta is nonreal")),
            EtaClass::T2 => out.isolated(omega(&dp, eta)?),
        }
    }
    Ok(out.finish())
}

/// `f1 = g g1`, `f2 = g g2` with `g` the monic approximate gcd.
#[derive(Clone, Debug, PartialEq)]
pub struct GcdFactorization {
    pub g: ComplexPolynomial,
    pub g1: ComplexPolynomial,
    pub g2: ComplexPolynomial,
}

impl GcdFactorization {
    /// `g1 conj(g1) + g2 conj(g2)`.
    pub fn reduced_discriminant(&self) -> Result<ComplexPolynomial> {
        hermitian_sum(&self.g1, &self.g2)
    }
}

pub fn factor_g(np: &NormalizedPolynomial, tol: f64) -> Result<GcdFactorization> {
    let dp = derived(np);
    let g = cpoly::gcd(&dp.f1, &dp.f2, tol);
    let (g1, r1) = dp.f1.divrem(&g)?;
    let (g2, r2) = dp.f2.divrem(&g)?;
    let relative = |r: &ComplexPolynomial, f: &ComplexPolynomial| {
        if r.is_zero() {
            0.0
        } else {
            r.norm() / f.norm()
        }
    };
    let relative_remainder = relative(&r1, &dp.f1).max(relative(&r2, &dp.f2));
    if relative_remainder > tol {
        return Err(Error::InexactDivision { relative_remainder });
    }
    Ok(GcdFactorization { g, g1, g2 })
}

/// Roots of a complex polynomial sorted into reals, conjugate pairs (both
/// `z` and `conj z` are roots; stored once with `Im > 0`) and the rest.
#[derive(Clone, Debug, Default)]
struct ComplexRootSplit {
    reals: Vec<f64>,
    pairs: Vec<Complex64>,
    unpaired: Vec<Complex64>,
}

fn split_complex_roots(rl: &RootList, tol_real: f64) -> ComplexRootSplit {
    let mut out = ComplexRootSplit::default();
    let nonreal: Vec<Complex64> = rl
        .values()
        .filter(|z| {
            if z.im.abs() < tol_real {
                out.reals.push(z.re);
                false
            } else {
                true
            }
        })
        .collect();
    let mut used = vec![false; nonreal.len()];
    for i in 0..nonreal.len() {
        if used[i] {
            continue;
        }
        let zi = nonreal[i];
        let target = zi.conj();
        let partner = (0..nonreal.len())
            .filter(|&j| j != i && !used[j] && nonreal[j].im * zi.im < 0.0)
            .filter(|&j| (nonreal[j] - target).norm() <= roots::CLUSTER_TOL * (1.0 + zi.norm()))
            .min_by(|&a, &b| {
                (nonreal[a] - target)
                    .norm()
                    .total_cmp(&(nonreal[b] - target).norm())
            });
        used[i] = true;
        match partner {
            Some(j) => {
                used[j] = true;
                out.pairs.push(canonical((zi + nonreal[j].conj()) * 0.5));
            }
            None => out.unpaired.push(zi),
        }
    }
    out
}

/// The `gcd`-reduced method: real roots of `g` are real zeros, conjugate
/// pairs of roots of `g` are spherical classes, and every other nonreal root
/// of `g`, together with one root from each conjugate pair of the reduced
/// discriminant not already met among the roots of `g`, gives an isolated zero.
pub fn solve_alg1prime(p: &SimplePolynomial, tols: &Tolerances) -> Result<ZeroSet> {
    let np = normalize(p)?;
    let fac = factor_g(&np, tols.gcd)?;
    let reduced = fac.reduced_discriminant()?;

    let g_split = match fac.g.degree() {
        Some(d) if d >= 1 => split_complex_roots(&roots::all_roots(&fac.g)?, tols.real),
        _ => ComplexRootSplit::default(),
    };
    let g_roots: Vec<Complex64> = g_split
        .unpaired
        .iter()
        .copied()
        .chain(g_split.pairs.iter().flat_map(|&z| [z, z.conj()]))
        .chain(g_split.reals.iter().map(|&x| Complex64::new(x, 0.0)))
        .collect();

    let mut out = ZeroSetBuilder::new(tols.dedup);
    for &x in &g_split.reals {
        out.real(x);
    }
    for &lambda in &g_split.pairs {
        out.class(ConjugacyClass::from_complex(lambda).expect("lambda is nonreal"));
    }

    let mut etas: Vec<Complex64> = g_split.unpaired.clone();
    if reduced.degree().unwrap_or(0) >= 1 {
        let split = roots::classify_real(&roots::all_roots(&reduced)?, tols.real)?;
        // the reduced discriminant has no real roots when gcd(g1, g2) = 1
        for &(x, _) in &split.reals {
            out.real(x);
        }
        for &(eta, _) in &split.pairs {
            let seen = g_roots.iter().any(|&r| {
                let rad = roots::CLUSTER_TOL * (1.0 + r.norm());
                (r - eta).norm() <= rad || (r - eta.conj()).norm() <= rad
            });
            if !seen {
                etas.push(eta);
            }
        }
    }

    for eta in etas {
        let a = fac.g1.eval(eta.conj());
        let b = fac.g2.eval(eta.conj());
        out.isolated(omega_at_conj(a, b, eta).ok_or(Error::BothDenominatorsZero { eta })?);
    }
    Ok(out.finish())
}

/// Zeros of a polynomial whose coefficients are all complex (no `j`, `k`
/// parts): real roots and unpaired complex roots are isolated zeros, and
/// conjugate pairs of roots become spherical classes.
pub fn solve_complex_shortcut(p: &SimplePolynomial, tols: &Tolerances) -> Result<ZeroSet> {
    if let Some(index) = p.coeffs.iter().position(|q| !q.is_complex()) {
        return Err(Error::NotComplexCoefficients { index });
    }
    match p.degree() {
        Some(n) if n >= 1 => {}
        _ => return Err(Error::DegreeZero),
    }
    let poly = ComplexPolynomial::new(p.coeffs.iter().map(|q| q.split().z1).collect());
    let split = split_complex_roots(&roots::all_roots(&poly)?, tols.real);

    let mut out = ZeroSetBuilder::new(tols.dedup);
    for &x in &split.reals {
        out.real(x);
    }
    for &z in &split.unpaired {
        out.isolated(Quaternion::embed_complex(z));
    }
    for &z in &split.pairs {
        out.class(ConjugacyClass::from_complex(z).expect("pair is nonreal"));
    }
    Ok(out.finish())
}

/// `true` iff the zero set has no spherical class, decided from the roots of
/// `gcd(f1, f2, conj f1, conj f2)`.
pub fn is_finite_zero_set(dp: &DerivedPolynomials, tols: &Tolerances) -> Result<bool> {
    let g = cpoly::gcd_many(
        &[dp.f1.clone(), dp.f2.clone(), dp.f1bar.clone(), dp.f2bar.clone()],
        tols.gcd,
    );
    match g.degree() {
        Some(d) if d >= 1 => {
            let rl = roots::all_roots(&g)?;
            let finite = rl.values().all(|z| z.im.abs() < tols.real);
            Ok(finite)
        }
        _ => Ok(true),
    }
}

/// `true` iff `u` lies in one of the classes or matches one of the isolated
/// or real zeros of `zs` at relative tolerance `tol`.
pub fn zero_set_contains(zs: &ZeroSet, u: Quaternion, tol: f64) -> bool {
    zs.real_zeros
        .iter()
        .any(|&x| u.distance(Quaternion::from_real(x)) <= tol * dedup_scale(u.norm()))
        || zs
            .isolated_zeros
            .iter()
            .any(|&q| u.distance(q) <= tol * dedup_scale(u.norm().max(q.norm())))
        || (!u.is_real() && zs.spherical.iter().any(|c| same_class(Quaternion::embed_complex(c.representative()), u, tol)))
}
