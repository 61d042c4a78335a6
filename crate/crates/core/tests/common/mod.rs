#![allow(dead_code)]

use quatroots::{Quaternion, SimplePolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_2024;

/// Degree 1..=8, integer coefficient components in [-5, 5], nonzero leading term.
pub fn random_integer_poly(rng: &mut impl Rng) -> SimplePolynomial {
    let n = rng.gen_range(1..=8);
    let mut coeffs: Vec<Quaternion> = (0..=n).map(|_| integer_quaternion(rng)).collect();
    while coeffs[n].is_zero() {
        coeffs[n] = integer_quaternion(rng);
    }
    SimplePolynomial::new(coeffs)
}

pub fn integer_quaternion(rng: &mut impl Rng) -> Quaternion {
    let mut c = || rng.gen_range(-5..=5) as f64;
    Quaternion::new(c(), c(), c(), c())
}

pub fn corpus(count: usize) -> Vec<SimplePolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..count).map(|_| random_integer_poly(&mut rng)).collect()
}

pub fn ijk_cubic() -> SimplePolynomial {
    SimplePolynomial::new(vec![Quaternion::ONE, Quaternion::K, Quaternion::J, Quaternion::I])
}

pub fn real_cubic() -> SimplePolynomial {
    SimplePolynomial::from_real(&[1.0, 1.0, 1.0, 1.0])
}

pub fn sextic() -> SimplePolynomial {
    let q = Quaternion::new;
    SimplePolynomial::new(vec![
        q(0.0, -1.0, 0.0, 0.0),
        q(0.0, 0.0, -1.0, 0.0),
        q(-1.0, 0.0, 0.0, 0.0),
        Quaternion::ZERO,
        Quaternion::I,
        Quaternion::J,
        Quaternion::ONE,
    ])
}

/// `z^n - 2`
pub fn power_minus_two(n: usize) -> SimplePolynomial {
    let mut c = vec![0.0; n + 1];
    c[0] = -2.0;
    c[n] = 1.0;
    SimplePolynomial::from_real(&c)
}
