//! All complex roots of a [`ComplexPolynomial`].
//!
//! Roots come from Aberth-Ehrlich simultaneous iteration started on a circle
//! whose radius is the Cauchy bound. Estimates are then Newton-polished,
//! grouped into multiple roots, and each group of size `m` is refined as a
//! simple root of the `(m-1)`-th derivative.

use num_complex::Complex64;

use crate::cpoly::ComplexPolynomial;
use crate::error::{Error, Result};

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITERATIONS: usize = 500;
/// Per-root step criterion, relative to `1 + |z|`.
pub const STEP_TOL: f64 = 1e-14;
/// Estimates closer than this (relative to `1 + |z|`) form one multiple root.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Accepted residual `|p(z)|` relative to `max|c_k| * max(1, |z|)^n`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Default `|Im z|` below which a root counts as real.
pub const DEFAULT_REAL_TOL: f64 = 1e-5;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
/// Largest inclusion radius used for clustering, relative to `1 + |z|`.
const MAX_INCLUSION: f64 = 1e-2;

// residual is at rounding level once |p(z)| <= NOISE * eps * sum |c_k| |z|^k
const NOISE: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Distinct roots with multiplicities summing to `source_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootList {
    pub roots: Vec<Root>,
    pub source_degree: usize,
}

impl RootList {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.roots.iter().map(|r| r.value)
    }
}

/// Unpolished output of the simultaneous iteration.
#[derive(Clone, Debug)]
pub struct RawRoots {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Real roots and conjugate pairs (stored once, `Im > 0`), with multiplicities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealSplit {
    pub reals: Vec<(f64, usize)>,
    pub pairs: Vec<(Complex64, usize)>,
}

#[inline]
fn cluster_radius(z: Complex64) -> f64 {
    CLUSTER_TOL * (1.0 + z.norm())
}

/// Residual bound `RESIDUAL_TOL * max|c_k| * max(1, |z|)^n`.
pub fn residual_bound(p: &ComplexPolynomial, z: Complex64) -> f64 {
    let n = p.degree().unwrap_or(0) as i32;
    RESIDUAL_TOL * p.max_abs() * z.norm().max(1.0).powi(n)
}

/// Positive root of `|c_n| x^n - sum_{k<n} |c_k| x^k`.
pub fn cauchy_radius(p: &ComplexPolynomial) -> f64 {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return 0.0,
    };
    let lead = p.coeffs()[n].norm();
    let ratios: Vec<f64> = p.coeffs()[..n].iter().map(|c| c.norm() / lead).collect();
    if ratios.iter().all(|&r| r == 0.0) {
        return 0.0;
    }
    // g(x) = sum_k ratios[k] x^(k - n) is decreasing; solve g(x) = 1
    let g = |x: f64| {
        let y = 1.0 / x;
        ratios.iter().fold(0.0, |acc, &r| (acc + r) * y)
    };
    let mut hi = 1.0 + ratios.iter().copied().fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

struct Evaluator<'a> {
    p: &'a ComplexPolynomial,
    rev: ComplexPolynomial,
    n: usize,
}

impl<'a> Evaluator<'a> {
    fn new(p: &'a ComplexPolynomial) -> Self {
        let mut rc = p.coeffs().to_vec();
        rc.reverse();
        Evaluator {
            p,
            rev: ComplexPolynomial::new(rc),
            n: p.degree().unwrap_or(0),
        }
    }

    /// Newton correction `p(z)/p'(z)` and whether `p(z)` is at rounding level.
    /// Evaluates the reversed polynomial at `1/z` outside the unit disc.
    fn newton(&self, z: Complex64) -> (Complex64, bool) {
        let eps = f64::EPSILON;
        if z.norm() <= 1.0 {
            let (v, dv) = self.p.eval_with_derivative(z);
            let noise = v.norm() <= NOISE * eps * self.p.eval_abs(z.norm());
            (v / dv, noise)
        } else {
            let w = z.inv();
            let (q, dq) = self.rev.eval_with_derivative(w);
            let noise = q.norm() <= NOISE * eps * self.rev.eval_abs(w.norm());
            (z * q / (q * self.n as f64 - w * dq), noise)
        }
    }
}

/// Aberth-Ehrlich iteration without polishing or grouping.
///
/// Exact zero roots (vanishing low-order coefficients) are returned as exact
/// zeros. On hitting the iteration cap the estimates are still returned with
/// `converged == false`.
pub fn aberth(p: &ComplexPolynomial) -> Result<RawRoots> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::DegreeZero),
    };
    let zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPolynomial::new(p.coeffs()[zeros..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let m = n - zeros;
    if m == 0 {
        return Ok(RawRoots { roots, iterations: 0, converged: true });
    }
    if m == 1 {
        let c = reduced.coeffs();
        roots.push(-c[0] / c[1]);
        return Ok(RawRoots { roots, iterations: 0, converged: true });
    }

    let radius = cauchy_radius(&reduced);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = (std::f64::consts::TAU * k as f64 + GOLDEN_ANGLE) / m as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; m];
    let eval = Evaluator::new(&reduced);
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (ratio, noise) = eval.newton(zi);
            if noise {
                done[i] = true;
                continue;
            }
            let sum: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| (zi - zj).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                // critical point or coincident estimates: nudge and retry
                z[i] = zi * Complex64::from_polar(1.0 + 1e-7, 1e-3) + Complex64::new(1e-12, 0.0);
                continue;
            }
            z[i] = zi - step;
            if step.norm() < STEP_TOL * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
    }

    let converged = done.iter().all(|&d| d);
    roots.extend(z);
    Ok(RawRoots { roots, iterations, converged })
}

/// All roots of `p` with multiplicities.
pub fn all_roots(p: &ComplexPolynomial) -> Result<RootList> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::DegreeZero),
    };
    let raw = aberth(p)?;
    let mut z = raw.roots;

    for zi in z.iter_mut() {
        *zi = newton_polish(p, *zi);
    }
    if p.has_real_coeffs() {
        symmetrize(&mut z);
    }

    let radii = inclusion_radii(p, &z);
    let mut roots: Vec<Root> = Vec::with_capacity(n);
    for members in clusters(&z, &radii) {
        let root = merge(p, &z, &members);
        if members.len() == 1 || root.value_ok(p) {
            roots.push(root);
            continue;
        }
        // the disc overlap merged too much; fall back to the fixed radius
        let sub: Vec<Complex64> = members.iter().map(|&k| z[k]).collect();
        for group in clusters(&sub, &vec![0.0; sub.len()]) {
            roots.push(merge(p, &sub, &group));
        }
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });

    let residuals: Vec<f64> = roots.iter().map(|r| p.eval(r.value).norm()).collect();
    let failing = roots
        .iter()
        .zip(&residuals)
        .any(|(r, &res)| !(res <= residual_bound(p, r.value)));
    if failing {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        return Err(Error::NoConvergence {
            iterations: raw.iterations,
            roots: roots.iter().map(|r| r.value).collect(),
            residuals,
            max_residual,
        });
    }
    Ok(RootList { roots, source_degree: n })
}

impl Root {
    fn value_ok(&self, p: &ComplexPolynomial) -> bool {
        p.eval(self.value).norm() <= residual_bound(p, self.value)
    }
}

/// One root of multiplicity `members.len()` at the polished cluster mean.
fn merge(p: &ComplexPolynomial, z: &[Complex64], members: &[usize]) -> Root {
    let m = members.len();
    let mean = members.iter().map(|&k| z[k]).sum::<Complex64>() / m as f64;
    let value = if m >= 2 { polish_multiple(p, mean, m) } else { z[members[0]] };
    Root { value, multiplicity: m }
}

/// Radii `n |p(z_i)| / |c_n prod_(j != i) (z_i - z_j)|` of discs whose union
/// contains every root; a connected component of `m` discs holds `m` roots.
/// Capped at `MAX_INCLUSION * (1 + |z_i|)`.
fn inclusion_radii(p: &ComplexPolynomial, z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let lead = p.leading().map_or(0.0, |c| c.norm());
    z.iter()
        .enumerate()
        .map(|(i, &zi)| {
            let cap = MAX_INCLUSION * (1.0 + zi.norm());
            // accumulate in log space to avoid overflow at high degree
            let log_prod: f64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| (zi - zj).norm().ln())
                .sum();
            // a residual below rounding level carries no information
            let noise = NOISE * f64::EPSILON * p.eval_abs(zi.norm());
            let r = (n as f64 * p.eval(zi).norm().max(noise) / lead).ln() - log_prod;
            let r = r.exp();
            if r.is_finite() {
                r.min(cap)
            } else {
                cap
            }
        })
        .collect()
}

/// A few Newton steps on `p`, keeping only improvements.
fn newton_polish(p: &ComplexPolynomial, z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_res = p.eval(z0).norm();
    let mut z = z0;
    for _ in 0..3 {
        if best_res == 0.0 {
            break;
        }
        let (v, dv) = p.eval_with_derivative(z);
        let next = z - v / dv;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let res = p.eval(next).norm();
        if res < best_res {
            best = next;
            best_res = res;
        }
        z = next;
    }
    best
}

/// Pairs each estimate above the real axis with the nearest estimate below it
/// and replaces both by an exactly conjugate pair.
fn symmetrize(z: &mut [Complex64]) {
    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[b].im.total_cmp(&z[a].im));
    let mut matched = vec![false; n];
    for &i in &order {
        if matched[i] || z[i].im <= 0.0 {
            continue;
        }
        let target = z[i].conj();
        let partner = (0..n)
            .filter(|&j| j != i && !matched[j] && z[j].im < 0.0)
            .min_by(|&a, &b| (z[a] - target).norm().total_cmp(&(z[b] - target).norm()));
        if let Some(j) = partner {
            if (z[j] - target).norm() <= cluster_radius(z[i]) {
                let avg = (z[i] + z[j].conj()) * 0.5;
                z[i] = avg;
                z[j] = avg.conj();
                matched[i] = true;
                matched[j] = true;
            }
        }
    }
}

/// Single-linkage groups of estimates within [`CLUSTER_TOL`] or within twice
/// the smaller of their two radii. A simple root next to a cluster has a small
/// disc of its own and stays apart.
fn clusters(z: &[Complex64], radii: &[f64]) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let r = cluster_radius(z[i])
                .max(cluster_radius(z[j]))
                .max(2.0 * radii[i].min(radii[j]));
            if (z[i] - z[j]).norm() <= r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Refines an approximation of a root of multiplicity `m >= 1` by Newton's
/// method on `p^(m-1)`, where the root is simple. Returns `z0` if no iterate
/// improves `|p^(m-1)|`.
pub fn polish_multiple(p: &ComplexPolynomial, z0: Complex64, m: usize) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    if d.degree().unwrap_or(0) == 0 {
        return z0;
    }
    let start = d.eval(z0).norm();
    let mut best = z0;
    let mut best_res = start;
    let mut z = z0;
    for _ in 0..60 {
        if best_res == 0.0 {
            break;
        }
        let (v, dv) = d.eval_with_derivative(z);
        let step = v / dv;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        let res = d.eval(z).norm();
        if res < best_res {
            best = z;
            best_res = res;
        }
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if best_res < start {
        best
    } else {
        z0
    }
}

/// Newton's method on `p'` for a double root near `z0`.
pub fn polish_double(p: &ComplexPolynomial, z0: Complex64) -> Complex64 {
    polish_multiple(p, z0, 2)
}

/// Splits the roots of a real-coefficient polynomial into real roots
/// (`|Im| < tol_real`, snapped to the real axis) and conjugate pairs, each
/// pair averaged into an exactly conjugate one and reported once with
/// positive imaginary part.
pub fn classify_real(rl: &RootList, tol_real: f64) -> Result<RealSplit> {
    let mut reals: Vec<(f64, usize)> = Vec::new();
    let mut upper: Vec<Root> = Vec::new();
    let mut lower: Vec<Root> = Vec::new();
    for r in &rl.roots {
        if r.value.im.abs() < tol_real {
            reals.push((r.value.re, r.multiplicity));
        } else if r.value.im > 0.0 {
            upper.push(*r);
        } else {
            lower.push(*r);
        }
    }

    reals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, usize)> = Vec::with_capacity(reals.len());
    for (x, m) in reals {
        match merged.last_mut() {
            Some((y, my)) if (x - *y).abs() <= CLUSTER_TOL * (1.0 + x.abs()) => {
                *y = (*y * *my as f64 + x * m as f64) / (*my + m) as f64;
                *my += m;
            }
            _ => merged.push((x, m)),
        }
    }

    let mut used = vec![false; lower.len()];
    let mut pairs = Vec::with_capacity(upper.len());
    for u in &upper {
        let target = u.value.conj();
        let best = (0..lower.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (lower[a].value - target)
                    .norm()
                    .total_cmp(&(lower[b].value - target).norm())
            });
        match best {
            Some(j)
                if (lower[j].value - target).norm() <= cluster_radius(u.value)
                    && lower[j].multiplicity == u.multiplicity =>
            {
                used[j] = true;
                pairs.push(((u.value + lower[j].value.conj()) * 0.5, u.multiplicity));
            }
            _ => return Err(Error::UnpairedRoot { root: u.value }),
        }
    }
    if let Some(j) = used.iter().position(|&u| !u) {
        return Err(Error::UnpairedRoot { root: lower[j].value });
    }
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(RealSplit { reals: merged, pairs })
}
