//! Residual checks and zero-set comparison, independent of the solvers.

use serde::{Deserialize, Serialize};

use crate::quaternion::{class_sample, ConjugacyClass, Quaternion};
use crate::solver::{SimplePolynomial, ZeroSet};

/// Relative residual below which a zero is accepted.
pub const ACCEPT_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES_PER_CLASS: usize = 8;

/// `sum q_j z^j`, building the powers by repeated multiplication.
pub fn eval_qpoly(p: &SimplePolynomial, z: Quaternion) -> Quaternion {
    let mut power = Quaternion::ONE;
    let mut sum = Quaternion::ZERO;
    for (j, &q) in p.coeffs().iter().enumerate() {
        if j > 0 {
            power = power * z;
        }
        sum = sum + q * power;
    }
    sum
}

/// `sum |q_i| * max(1, |z|)^n`.
pub fn residual_scale(p: &SimplePolynomial, z: Quaternion) -> f64 {
    let n = p.degree().unwrap_or(0) as i32;
    p.abs_sum() * z.norm().max(1.0).powi(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroDescriptor {
    Real { value: f64 },
    Isolated { zero: Quaternion },
    /// `point` is the class member that was evaluated.
    Spherical { class: ConjugacyClass, point: Quaternion },
}

impl ZeroDescriptor {
    pub fn point(&self) -> Quaternion {
        match *self {
            ZeroDescriptor::Real { value } => Quaternion::from_real(value),
            ZeroDescriptor::Isolated { zero } => zero,
            ZeroDescriptor::Spherical { point, .. } => point,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub zero: ZeroDescriptor,
    /// `|p(z)|`
    pub residual: f64,
    /// `|p(z)| / residual_scale(p, z)`
    pub relative: f64,
}

/// Zeros present in only one of two compared sets.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub unmatched_left: Vec<ZeroDescriptor>,
    pub unmatched_right: Vec<ZeroDescriptor>,
}

impl Agreement {
    pub fn is_empty(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<ResidualEntry>,
    /// Largest relative residual.
    pub max_residual: f64,
    /// At most `n` classes and at most `n / 2` spherical ones.
    pub bounds_ok: bool,
    pub agreement: Option<Agreement>,
}

impl VerificationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.bounds_ok
            && self.max_residual <= tol
            && self.agreement.as_ref().map_or(true, Agreement::is_empty)
    }
}

fn entry(p: &SimplePolynomial, zero: ZeroDescriptor) -> ResidualEntry {
    let z = zero.point();
    let residual = eval_qpoly(p, z).norm();
    let scale = residual_scale(p, z);
    let relative = if scale > 0.0 { residual / scale } else { residual };
    ResidualEntry { zero, residual, relative }
}

pub fn audit(p: &SimplePolynomial, zs: &ZeroSet, samples_per_class: usize) -> VerificationReport {
    let mut entries = Vec::new();
    for &value in &zs.real_zeros {
        entries.push(entry(p, ZeroDescriptor::Real { value }));
    }
    for &zero in &zs.isolated_zeros {
        entries.push(entry(p, ZeroDescriptor::Isolated { zero }));
    }
    for (i, class) in zs.spherical.iter().enumerate() {
        for point in class_sample(class, samples_per_class, i as u64) {
            entries.push(entry(p, ZeroDescriptor::Spherical { class: class.clone(), point }));
        }
    }
    let max_residual = entries.iter().map(|e| e.relative).fold(0.0, f64::max);
    let n = p.degree().unwrap_or(0);
    let bounds_ok = zs.class_count() <= n && zs.spherical.len() <= n / 2;
    VerificationReport { entries, max_residual, bounds_ok, agreement: None }
}

/// Greedy nearest matching; returns the indices of `left` and `right` left over.
fn greedy<T>(left: &[T], right: &[T], dist: impl Fn(&T, &T) -> f64, size: impl Fn(&T) -> f64, tol: f64) -> (Vec<usize>, Vec<usize>) {
    let mut taken = vec![false; right.len()];
    let mut lonely = Vec::new();
    for (i, a) in left.iter().enumerate() {
        let best = (0..right.len())
            .filter(|&j| !taken[j])
            .map(|j| (j, dist(a, &right[j])))
            .filter(|&(j, d)| d <= tol * size(a).max(size(&right[j])).max(1.0))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, _)) => taken[j] = true,
            None => lonely.push(i),
        }
    }
    let rest = (0..right.len()).filter(|&j| !taken[j]).collect();
    (lonely, rest)
}

/// Matches real zeros, isolated zeros and classes separately, each within
/// `tol * max(1, size)`.
pub fn compare(a: &ZeroSet, b: &ZeroSet, tol: f64) -> Agreement {
    let mut out = Agreement::default();

    let (l, r) = greedy(&a.real_zeros, &b.real_zeros, |x, y| (x - y).abs(), |x| x.abs(), tol);
    out.unmatched_left.extend(l.into_iter().map(|i| ZeroDescriptor::Real { value: a.real_zeros[i] }));
    out.unmatched_right.extend(r.into_iter().map(|i| ZeroDescriptor::Real { value: b.real_zeros[i] }));

    let (l, r) = greedy(&a.isolated_zeros, &b.isolated_zeros, |x, y| x.distance(*y), |x| x.norm(), tol);
    out.unmatched_left.extend(l.into_iter().map(|i| ZeroDescriptor::Isolated { zero: a.isolated_zeros[i] }));
    out.unmatched_right.extend(r.into_iter().map(|i| ZeroDescriptor::Isolated { zero: b.isolated_zeros[i] }));

    let class = |c: &ConjugacyClass| ZeroDescriptor::Spherical {
        class: c.clone(),
        point: Quaternion::embed_complex(c.representative()),
    };
    let (l, r) = greedy(&a.spherical, &b.spherical, |x, y| x.distance(y), |x| x.modulus(), tol);
    out.unmatched_left.extend(l.into_iter().map(|i| class(&a.spherical[i])));
    out.unmatched_right.extend(r.into_iter().map(|i| class(&b.spherical[i])));
    out
}
