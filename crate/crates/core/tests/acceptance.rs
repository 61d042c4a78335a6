//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use quatroots::baseline::{ab, companion, power_decomp, solve_jo};
use quatroots::roots::{aberth, polish_double};
use quatroots::solver::{derived, discriminant, normalize, solve_alg1, solve_alg1prime, solve_complex_shortcut};
use quatroots::verify::{audit, compare, eval_qpoly};
use quatroots::{Complex64, ComplexPolynomial, Quaternion, SimplePolynomial, Tolerances, ZeroSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

type Solver = fn(&SimplePolynomial, &Tolerances) -> quatroots::Result<ZeroSet>;

const GENERAL: [(&str, Solver); 3] = [("alg1", solve_alg1), ("alg1'", solve_alg1prime), ("jo", solve_jo)];

fn run(p: &SimplePolynomial, name: &str, solver: Solver) -> Result<ZeroSet, String> {
    solver(p, &Tolerances::default()).map_err(|e| format!("{name}: {e}"))
}

fn matches_isolated(zs: &ZeroSet, want: &[Quaternion], tol: f64) -> bool {
    zs.isolated_zeros.len() == want.len()
        && want.iter().all(|w| {
            zs.isolated_zeros.iter().any(|q| {
                q.to_array().iter().zip(w.to_array()).all(|(a, b)| (a - b).abs() <= tol)
            })
        })
}

fn matches_reals(zs: &ZeroSet, want: &[f64], tol: f64) -> bool {
    zs.real_zeros.len() == want.len()
        && zs.real_zeros.iter().zip(want).all(|(a, b)| (a - b).abs() <= tol)
}

fn unit_class(zs: &ZeroSet, tol: f64) -> bool {
    zs.spherical.len() == 1
        && zs.spherical[0].re().abs() <= tol
        && (zs.spherical[0].modulus() - 1.0).abs() <= tol
}

fn criterion_1() -> Check {
    let p = ijk_cubic();
    let h = FRAC_1_SQRT_2;
    let want = [Quaternion::K, Quaternion::new(h, 0.5, 0.0, 0.5), Quaternion::new(-h, 0.5, 0.0, 0.5)];
    let mut slowest = Duration::ZERO;
    for (name, solver) in GENERAL {
        let start = Instant::now();
        let zs = run(&p, name, solver)?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure!(zs.real_zeros.is_empty() && zs.spherical.is_empty(), "{name}: unexpected {zs:?}");
        ensure!(matches_isolated(&zs, &want, 1e-8), "{name}: got {:?}", zs.isolated_zeros);
        ensure!(elapsed < Duration::from_millis(10), "{name} took {elapsed:?}");
    }
    Ok(format!("three isolated zeros from every solver; slowest {slowest:?}"))
}

fn criterion_2() -> Check {
    let p = real_cubic();
    let paths: [(&str, Solver); 4] = [
        ("alg1", solve_alg1),
        ("alg1'", solve_alg1prime),
        ("complex shortcut", solve_complex_shortcut),
        ("jo", solve_jo),
    ];
    for (name, solver) in paths {
        let zs = run(&p, name, solver)?;
        ensure!(matches_reals(&zs, &[-1.0], 1e-8), "{name}: reals {:?}", zs.real_zeros);
        ensure!(zs.isolated_zeros.is_empty(), "{name}: isolated {:?}", zs.isolated_zeros);
        ensure!(unit_class(&zs, 1e-8), "{name}: classes {:?}", zs.spherical);
    }
    Ok("{-1} and [i] from all four paths".into())
}

fn integer_coeffs(name: &str, got: &[f64], want: &[f64]) -> Result<(), String> {
    ensure!(got.len() == want.len(), "{name}: degree {} vs {}", got.len() - 1, want.len() - 1);
    for (k, (a, b)) in got.iter().zip(want).enumerate() {
        ensure!((a - b).abs() <= 1e-10, "{name}: coefficient {k} is {a}, want {b}");
    }
    Ok(())
}

fn criterion_3() -> Check {
    let p = sextic();
    let want = [
        Quaternion::new(0.5, -0.5, -0.5, -0.5),
        Quaternion::new(-0.5, 0.5, -0.5, -0.5),
    ];
    for (name, solver) in GENERAL {
        let zs = run(&p, name, solver)?;
        ensure!(matches_reals(&zs, &[-1.0, 1.0], 1e-8), "{name}: reals {:?}", zs.real_zeros);
        ensure!(matches_isolated(&zs, &want, 1e-8), "{name}: isolated {:?}", zs.isolated_zeros);
        ensure!(unit_class(&zs, 1e-8), "{name}: classes {:?}", zs.spherical);
    }
    // descending powers; the sequence is a palindrome
    let coeffs = [1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -2.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0];
    let np = normalize(&p).map_err(|e| e.to_string())?;
    let disc = discriminant(&derived(&np)).map_err(|e| e.to_string())?;
    let disc: Vec<f64> = disc.coeffs().iter().rev().map(|c| c.re).collect();
    integer_coeffs("discriminant", &disc, &coeffs)?;
    let comp = companion(&p).map_err(|e| e.to_string())?;
    let comp: Vec<f64> = comp.b.iter().rev().copied().collect();
    integer_coeffs("companion", &comp, &coeffs)?;
    Ok("zero set and both degree-12 polynomials match".into())
}

fn criterion_4() -> Check {
    let disc = ComplexPolynomial::from_real(&[1.0, 0.0, 1.0, 0.0, -1.0, 0.0, -2.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0]);
    let raw = aberth(&disc).map_err(|e| e.to_string())?;
    ensure!(raw.roots.len() == 12, "{} raw roots", raw.roots.len());
    let c = Complex64::new;
    let s = 3f64.sqrt() / 2.0;
    let doubles = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let simples = [c(0.5, s), c(0.5, -s), c(-0.5, s), c(-0.5, -s)];
    let nearest = |t: Complex64| -> (usize, f64) {
        raw.roots
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - t).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
    };
    let mut simple_err = 0.0f64;
    for t in simples {
        simple_err = simple_err.max(nearest(t).1);
    }
    let mut raw_double_err = 0.0f64;
    let mut polished_err = 0.0f64;
    for t in doubles {
        let mut near: Vec<(f64, Complex64)> = raw.roots.iter().map(|z| ((z - t).norm(), *z)).collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(d, z) in &near[..2] {
            raw_double_err = raw_double_err.max(d);
            polished_err = polished_err.max((polish_double(&disc, z) - t).norm());
        }
    }
    ensure!(simple_err <= 1e-12, "simple roots off by {simple_err:e}");
    ensure!(raw_double_err <= 1e-6, "raw double roots off by {raw_double_err:e}");
    ensure!(polished_err <= 1e-12, "polished double roots off by {polished_err:e}");
    Ok(format!(
        "simple roots {simple_err:.1e}, raw double roots {raw_double_err:.1e}, polished {polished_err:.1e}"
    ))
}

fn criterion_5() -> Check {
    let n = 1000;
    let start = Instant::now();
    let zs = run(&power_minus_two(n), "complex shortcut", solve_complex_shortcut)?;
    let elapsed = start.elapsed();
    let r = 2f64.powf(1.0 / n as f64);
    ensure!(matches_reals(&zs, &[-r, r], 1e-10), "reals {:?}", zs.real_zeros);
    ensure!(zs.isolated_zeros.is_empty(), "{} isolated zeros", zs.isolated_zeros.len());
    ensure!(zs.spherical.len() == 499, "{} classes", zs.spherical.len());
    let worst = zs.spherical.iter().map(|c| (c.modulus() - r).abs()).fold(0.0, f64::max);
    ensure!(worst <= 1e-10, "class modulus off by {worst:e}");
    ensure!(elapsed < Duration::from_secs(5), "degree 1000 took {elapsed:?}");

    let n = 50;
    let p = power_minus_two(n);
    let r50 = 2f64.powf(1.0 / n as f64);
    let mut worst_residual = 0.0f64;
    for (name, solver) in GENERAL {
        let zs = run(&p, name, solver)?;
        ensure!(matches_reals(&zs, &[-r50, r50], 1e-8), "{name}: reals {:?}", zs.real_zeros);
        ensure!(zs.isolated_zeros.is_empty(), "{name}: {} isolated zeros", zs.isolated_zeros.len());
        ensure!(zs.spherical.len() == 24, "{name}: {} classes", zs.spherical.len());
        let report = audit(&p, &zs, 8);
        ensure!(report.max_residual < 1e-6, "{name}: residual {:e}", report.max_residual);
        worst_residual = worst_residual.max(report.max_residual);
    }
    Ok(format!("degree 1000 in {elapsed:?}; degree 50 residual {worst_residual:.1e}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (idx, p) in corpus(200).iter().enumerate() {
        let sets: Vec<ZeroSet> = GENERAL
            .iter()
            .map(|&(name, solver)| run(p, name, solver).map_err(|e| format!("#{idx}: {e}")))
            .collect::<Result<_, _>>()?;
        for (k, zs) in sets.iter().enumerate() {
            let r = audit(p, zs, 8);
            ensure!(r.max_residual < 1e-8, "#{idx} {}: residual {:e}", GENERAL[k].0, r.max_residual);
            worst = worst.max(r.max_residual);
        }
        for k in 1..3 {
            let d = compare(&sets[0], &sets[k], 1e-6);
            ensure!(d.is_empty(), "#{idx}: alg1 vs {} differ: {d:?}", GENERAL[k].0);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "corpus took {elapsed:?}");
    Ok(format!("200 polynomials agree; max residual {worst:.1e}; {elapsed:?}"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rel = 0.0f64;
    for (idx, p) in corpus(200).iter().enumerate() {
        let n = p.degree().unwrap();
        for (name, solver) in GENERAL {
            let zs = run(p, name, solver)?;
            ensure!(zs.class_count() <= n, "#{idx} {name}: {} classes, degree {n}", zs.class_count());
            ensure!(zs.spherical.len() <= n / 2, "#{idx} {name}: {} spherical", zs.spherical.len());
        }
        let np = normalize(p).map_err(|e| e.to_string())?;
        let disc = discriminant(&derived(&np)).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            let scale: f64 = disc.coeffs().iter().enumerate().map(|(k, c)| c.norm() * t.abs().powi(k as i32)).sum();
            let v = disc.eval(Complex64::new(t, 0.0)).re;
            ensure!(v >= -1e-8 * scale, "#{idx}: discriminant {v:e} at {t}");
        }
        let monic = p.left_mul(p.leading().unwrap().inverse().map_err(|e| e.to_string())?);
        let comp = companion(&monic).map_err(|e| e.to_string())?;
        let d: Vec<f64> = disc.coeffs().iter().map(|c| c.re).collect();
        ensure!(d.len() == comp.b.len(), "#{idx}: degree mismatch");
        let (dl, cl) = (d[d.len() - 1], comp.b[comp.b.len() - 1]);
        ensure!(dl > 0.0 && cl > 0.0, "#{idx}: leading coefficients {dl}, {cl}");
        let cmax = comp.b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let rel = d
            .iter()
            .zip(&comp.b)
            .map(|(a, b)| (a * cl / dl - b).abs())
            .fold(0.0, f64::max)
            / cmax;
        ensure!(rel <= 1e-8, "#{idx}: companion vs discriminant {rel:e}");
        worst_rel = worst_rel.max(rel);
    }
    Ok(format!("count bounds and nonnegativity hold; companion/discriminant {worst_rel:.1e}"))
}

fn random_quaternion(rng: &mut impl Rng, r: f64) -> Quaternion {
    Quaternion::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..1000 {
        let (p, q) = (random_quaternion(&mut rng, 10.0), random_quaternion(&mut rng, 10.0));
        let scale = p.norm() * q.norm();
        let lhs = (p * q).sigma();
        let rhs = p.sigma() * q.sigma();
        ensure!((lhs - rhs).max_abs() <= 1e-12 * scale, "trial {trial}: sigma(pq) != sigma(p)sigma(q)");
        ensure!(((p * q).norm() - scale).abs() <= 1e-12 * scale, "trial {trial}: |pq| != |p||q|");

        let x = random_quaternion(&mut rng, 1.5);
        let pd = power_decomp(x, 12);
        for j in 0..=12 {
            let direct = x.powi(j);
            let split = x * pd.alpha[j] + Quaternion::from_real(pd.beta[j]);
            let tol = 1e-9 * x.norm().max(1.0).powi(j as i32);
            ensure!(direct.distance(split) <= tol, "trial {trial}: x^{j} decomposition");
        }

        let n = rng.gen_range(1..=8);
        let poly = SimplePolynomial::new((0..=n).map(|_| random_quaternion(&mut rng, 5.0)).collect());
        let z = random_quaternion(&mut rng, 1.5);
        let (a, b) = ab(&poly, z);
        let direct = eval_qpoly(&poly, z);
        let scale = poly.abs_sum() * z.norm().max(1.0).powi(n as i32);
        ensure!(direct.distance(a * z + b) <= 1e-9 * scale, "trial {trial}: p(z) != A z + B");
    }
    Ok("1000 trials each".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 ijk cubic golden set", criterion_1),
        ("2 real cubic on four paths", criterion_2),
        ("3 sextic golden set and discriminant", criterion_3),
        ("4 root table for the degree-12 discriminant", criterion_4),
        ("5 z^1000 - 2 shortcut and z^50 - 2 general", criterion_5),
        ("6 random corpus solver agreement", criterion_6),
        ("7 random corpus structural bounds", criterion_7),
        ("8 algebra identities", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        // written past the test harness capture so the verdicts always show
        let line = match outcome {
            Ok(detail) => format!("PASS criterion {name}: {detail}\n"),
            Err(detail) => {
                failed.push(name);
                format!("FAIL criterion {name}: {detail}\n")
            }
        };
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
