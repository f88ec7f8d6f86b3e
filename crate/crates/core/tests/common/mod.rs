//! Shared helpers for the integration and acceptance suites.
#![allow(dead_code)]

use invkit_core::exact::ExactComplex;
use invkit_core::poly::Poly;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let x = radius * (2.0 * rng.random::<f64>() - 1.0);
        let y = radius * (2.0 * rng.random::<f64>() - 1.0);
        if x * x + y * y <= radius * radius {
            return Complex64::new(x, y);
        }
    }
}

/// Random Gaussian rational with numerators below 40 and denominators
/// below 8.
pub fn random_exact(rng: &mut ChaCha8Rng) -> ExactComplex {
    let part = |rng: &mut ChaCha8Rng| {
        let num = rng.random_range(-40i64..=40);
        let den = rng.random_range(1i64..=8);
        (num, den)
    };
    let (a, b) = part(rng);
    let (c, d) = part(rng);
    ExactComplex::new(
        num_rational::BigRational::new(a.into(), b.into()),
        num_rational::BigRational::new(c.into(), d.into()),
    )
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    loop {
        let coeffs: Vec<ExactComplex> = (0..=degree).map(|_| random_exact(rng)).collect();
        let p = Poly::from_coeffs(coeffs);
        if p.degree() == Some(degree) {
            return p;
        }
    }
}

/// Exact polynomial with the given rational roots (re/im out of a coarse
/// grid), pairwise separated by at least `min_sep`.
pub fn random_separated_rooted_poly(
    rng: &mut ChaCha8Rng,
    degree: usize,
    min_sep: f64,
    scale: i64,
) -> (Poly, Vec<Complex64>) {
    let mut roots: Vec<ExactComplex> = Vec::new();
    let mut numeric: Vec<Complex64> = Vec::new();
    while roots.len() < degree {
        let cand = ExactComplex::new(
            num_rational::BigRational::new(rng.random_range(-scale..=scale).into(), 16.into()),
            num_rational::BigRational::new(rng.random_range(-scale..=scale).into(), 16.into()),
        );
        let z = cand.to_complex64();
        if numeric.iter().all(|r| (r - z).norm() >= min_sep) {
            roots.push(cand);
            numeric.push(z);
        }
    }
    (Poly::from_roots(&roots), numeric)
}

/// True when the directed Hausdorff distances between the point sets both
/// stay at or below `eps`, decided with a spatial hash at cell size `eps`.
pub fn within_hausdorff(a: &[Complex64], b: &[Complex64], eps: f64) -> bool {
    directed_within(a, b, eps) && directed_within(b, a, eps)
}

fn directed_within(a: &[Complex64], b: &[Complex64], eps: f64) -> bool {
    let cell = |z: &Complex64| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    for z in b {
        grid.entry(cell(z)).or_default().push(*z);
    }
    'outer: for z in a {
        let (cx, cy) = cell(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    if bucket.iter().any(|w| (w - z).norm() <= eps) {
                        continue 'outer;
                    }
                }
            }
        }
        return false;
    }
    true
}
