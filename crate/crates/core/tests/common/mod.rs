#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use oscitime::PhasePolyFourier;
use rand::Rng;

/// Sum of `terms` random monomials with degree ≤ `max_degree`, |k| ≤ `max_k`,
/// coefficients uniform in the unit disc.
pub fn random_function<R: Rng>(rng: &mut R, max_degree: u32, max_k: i64, terms: usize) -> PhasePolyFourier {
    let mut f = PhasePolyFourier::zero();
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        let k = rng.gen_range(-max_k..=max_k);
        let c = Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
        f = f.add(&PhasePolyFourier::monomial(d, k, c));
    }
    f
}

pub fn max_coeff(f: &PhasePolyFourier) -> f64 {
    f.coefficients().map(|(_, _, c)| c.norm()).fold(0.0, f64::max)
}

pub fn max_coeff_diff(a: &PhasePolyFourier, b: &PhasePolyFourier) -> f64 {
    max_coeff(&a.sub(b))
}
