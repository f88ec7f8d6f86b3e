//! Simultaneous complex root finding and root-location tests.
//!
//! Numeric roots come from an Aberth–Ehrlich iteration with Newton-polygon
//! initial guesses. Location tests for exact polynomials (unit disk,
//! half-plane, real-rootedness, interlacing, Wronskian sign) run in exact
//! Gaussian-rational arithmetic wherever the answer is decidable there.

use crate::exact::ExactComplex;
use crate::poly::{Poly, PolyF};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootsError {
    #[error("root iteration did not converge within {0} iterations")]
    NonConvergence(u32),
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("operation requires real coefficients")]
    NonRealCoefficients,
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
}

/// Verdict of a certified root-location test.
#[derive(Debug, Clone, PartialEq)]
pub enum LocationVerdict {
    AllInside,
    SomeOutside(Complex64),
    BoundaryUncertain,
}

const MAX_ITERATIONS: u32 = 600;

/// All roots of `p`, with multiplicity.
///
/// Each returned root `r` satisfies
/// `|p(r)| <= tol * max|coeff| * (1 + |r|)^deg`; anything worse reports
/// `NonConvergence`. Roots closer than `1e-8 * scale` are merged onto their
/// cluster centroid so multiple roots come out as repeated values.
pub fn find_roots(p: &PolyF, tol: f64) -> Result<Vec<Complex64>, RootsError> {
    let deg = p.degree().ok_or(RootsError::ZeroPolynomial)?;
    if deg == 0 {
        return Err(RootsError::DegreeTooSmall);
    }
    // deflate exact zero roots at the origin
    let zeros_at_origin = p
        .coeffs()
        .iter()
        .take_while(|c| c.norm_sqr() == 0.0)
        .count();
    let mut roots = vec![Complex64::ZERO; zeros_at_origin];
    let reduced = PolyF::from_coeffs(p.coeffs()[zeros_at_origin..].to_vec());
    match reduced.degree() {
        None | Some(0) => {}
        Some(1) => {
            let r = -reduced.coeff(0) / reduced.coeff(1);
            roots.push(r);
        }
        Some(2) => {
            let (r1, r2) = quadratic_roots(reduced.coeff(2), reduced.coeff(1), reduced.coeff(0));
            roots.push(r1);
            roots.push(r2);
        }
        Some(_) => {
            roots.extend(aberth(&reduced)?);
        }
    }
    // residual acceptance bound from the post-condition
    let max_coeff = p.max_coeff_norm();
    for &r in &roots {
        let bound = tol * max_coeff * (1.0 + r.norm()).powi(deg as i32);
        if p.eval(r).norm() > bound {
            return Err(RootsError::NonConvergence(MAX_ITERATIONS));
        }
    }
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    cluster_roots(&mut roots, 1e-8 * scale);
    sort_roots(&mut roots);
    Ok(roots)
}

/// Numerically stable quadratic formula.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = b * b - 4.0 * a * c;
    let sq = disc.sqrt();
    // pick the sign that avoids cancellation in b + s*sq
    let s = if (b.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(b + s * sq) / 2.0;
    if q.norm_sqr() == 0.0 {
        let r = -b / (2.0 * a);
        return (r, r);
    }
    (q / a, c / q)
}

/// Aberth–Ehrlich simultaneous iteration, degree >= 3.
fn aberth(p: &PolyF) -> Result<Vec<Complex64>, RootsError> {
    let deg = p.degree().unwrap();
    let monic = p.monic();
    let mut z = initial_guesses(&monic);
    debug_assert_eq!(z.len(), deg);
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        let mut corrections = vec![Complex64::ZERO; deg];
        for i in 0..deg {
            let (pv, dv, emag) = eval_with_derivative(&monic, z[i]);
            // below the attainable evaluation accuracy the value is noise
            let eval_floor = f64::EPSILON * emag * (2 * deg + 2) as f64;
            if pv.norm() <= eval_floor {
                continue;
            }
            let newton = if dv.norm_sqr() > 0.0 {
                pv / dv
            } else {
                // flat spot: nudge off the critical point
                Complex64::new(1e-6, 1e-6) * (1.0 + z[i].norm())
            };
            let mut s = Complex64::ZERO;
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm_sqr() > 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * s;
            let w = if denom.norm() > 1e-12 {
                newton / denom
            } else {
                newton
            };
            corrections[i] = w;
            let rel = w.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        for i in 0..deg {
            z[i] -= corrections[i];
        }
        if max_step < 1e-14 {
            break;
        }
    }
    Ok(z)
}

/// Horner evaluation of `p`, `p'`, and the error magnitude
/// `sum |a_j| |z|^j` that bounds the attainable evaluation accuracy.
fn eval_with_derivative(p: &PolyF, z: Complex64) -> (Complex64, Complex64, f64) {
    let mut v = Complex64::ZERO;
    let mut d = Complex64::ZERO;
    let mut e = 0.0_f64;
    let az = z.norm();
    for c in p.coeffs().iter().rev() {
        d = d * z + v;
        v = v * z + c;
        e = e * az + c.norm();
    }
    (v, d, e)
}

/// Starting points on circles read off the Newton polygon of the
/// coefficient moduli (Bini's heuristic): one circle per upper-hull edge,
/// radius the local coefficient ratio.
fn initial_guesses(p: &PolyF) -> Vec<Complex64> {
    let deg = p.degree().unwrap();
    let pts: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(j, c)| (j, c.norm().ln()))
        .collect();
    // upper convex hull over (j, ln|a_j|)
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (y - y1) - (x as f64 - x1 as f64) * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut out = Vec::with_capacity(deg);
    let mut g = 0usize;
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let r = ((y1 - y2) / (k2 - k1) as f64).exp().clamp(1e-12, 1e12);
        for _ in 0..(k2 - k1) {
            let theta = 2.0 * std::f64::consts::PI * (g as f64) / (deg as f64) + 0.7;
            out.push(Complex64::from_polar(r, theta));
            g += 1;
        }
    }
    while out.len() < deg {
        let theta = 2.0 * std::f64::consts::PI * (out.len() as f64) / (deg as f64) + 0.7;
        out.push(Complex64::from_polar(1.0, theta));
    }
    out
}

fn cluster_roots(roots: &mut [Complex64], radius: f64) {
    let n = roots.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(group: &mut Vec<usize>, i: usize) -> usize {
        if group[i] != i {
            let r = find(group, group[i]);
            group[i] = r;
        }
        group[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a] = b;
                }
            }
        }
    }
    for rep in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut group, i) == rep).collect();
        if members.len() > 1 {
            let centroid =
                members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            for &i in &members {
                roots[i] = centroid;
            }
        }
    }
}

pub(crate) fn sort_roots(roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        // normalize -0.0 so total_cmp sorting cannot split symmetric pairs
        *r = Complex64::new(r.re + 0.0, r.im + 0.0);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Roots of an exact polynomial: square-free decomposition first, then the
/// numeric solver on each (simple-rooted) factor. This keeps multiple roots
/// accurate to solver precision instead of its m-th root.
pub fn exact_roots(p: &Poly, tol: f64) -> Result<Vec<Complex64>, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        let rs = find_roots(&factor.to_polyf(), tol)?;
        for r in rs {
            for _ in 0..mult {
                out.push(r);
            }
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Schur–Cohn reduction: decides `all roots strictly inside the unit disk`
/// exactly. Total on nonzero input: a `false` is as certain as a `true`.
pub fn all_roots_strictly_inside_exact(p: &Poly) -> Result<bool, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let mut cur = p.clone();
    loop {
        if cur.is_constant() {
            return Ok(true);
        }
        let a0 = cur.coeff(0);
        let an = cur.leading().unwrap().clone();
        let delta = an.norm_sqr() - a0.norm_sqr();
        if !delta.is_positive() {
            // |const| >= |lead| forces a root with modulus >= 1
            return Ok(false);
        }
        let dag = cur.reverse_conj();
        let num = cur.scale(&an.conj()).sub(&dag.scale(&a0));
        debug_assert!(num.coeff(0).is_zero());
        cur = Poly::from_coeffs(num.coeffs()[1..].to_vec());
    }
}

/// Decides `all roots in the closed unit disk` exactly.
///
/// Circle roots and reciprocal pairs are split off into `gcd(q, q†)`; the
/// off-circle remainder goes through the strict Schur–Cohn test and the
/// self-inversive part is checked to have all roots on the circle via a
/// Cayley transform and a Sturm count.
pub fn all_roots_in_closed_unit_disk_exact(p: &Poly) -> Result<bool, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(true);
    }
    let q = p.squarefree_part();
    let dag = q.reverse_conj();
    let c = q.gcd(&dag).expect("q nonzero");
    let h = q.div_exact(&c).expect("gcd divides");
    if !all_roots_strictly_inside_exact(&h)? {
        // h carries no circle roots, so failure means a root strictly outside
        return Ok(false);
    }
    if c.is_constant() {
        return Ok(true);
    }
    let r = cayley_to_line(&c);
    let s = r.mul(&r.conj());
    debug_assert!(s.is_real());
    is_real_rooted_real_input(&s)
}

/// `(1-it)^d c((1+it)/(1-it))`: maps circle roots of `c` (minus z = -1) to
/// real roots in `t`.
fn cayley_to_line(c: &Poly) -> Poly {
    let d = c.degree().unwrap();
    let plus = Poly::from_coeffs(vec![ExactComplex::one(), ExactComplex::i()]);
    let minus = Poly::from_coeffs(vec![ExactComplex::one(), -&ExactComplex::i()]);
    let mut acc = Poly::zero();
    for (j, cj) in c.coeffs().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let term = plus.pow(j as u32).mul(&minus.pow((d - j) as u32)).scale(cj);
        acc = acc.add(&term);
    }
    acc
}

/// True iff every complex root of `p` is real; exact via Sturm sequences.
pub fn is_real_rooted(p: &Poly) -> Result<bool, RootsError> {
    if !p.is_real() {
        return Err(RootsError::NonRealCoefficients);
    }
    is_real_rooted_real_input(p)
}

fn is_real_rooted_real_input(p: &Poly) -> Result<bool, RootsError> {
    if p.is_constant() {
        // includes the zero polynomial: no roots to test
        return Ok(true);
    }
    let q = p.squarefree_part();
    let coeffs = q.real_coeffs().ok_or(RootsError::NonRealCoefficients)?;
    Ok(sturm_distinct_real_roots(&coeffs) == q.degree().unwrap())
}

// ---- real polynomial helpers for Sturm sequences ----

fn rtrim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rderiv(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![];
    }
    rtrim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(k.into()))
            .collect(),
    )
}

fn rrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut rem: Vec<BigRational> = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[k + j] = &rem[k + j] - &t;
        }
        rem.pop();
        rem = rtrim(rem);
        if rem.is_empty() {
            break;
        }
    }
    rem
}

fn rnormalize(p: Vec<BigRational>) -> Vec<BigRational> {
    // divide by the largest absolute coefficient (positive scaling only,
    // sign information must survive)
    let m = p.iter().map(|c| c.abs()).max();
    match m {
        Some(m) if !m.is_zero() => p.into_iter().map(|c| c / &m).collect(),
        _ => p,
    }
}

/// Number of distinct real roots of a square-free real polynomial.
fn sturm_distinct_real_roots(p: &[BigRational]) -> usize {
    let p0 = rtrim(p.to_vec());
    if p0.len() <= 1 {
        return 0;
    }
    let mut chain = vec![p0.clone(), rderiv(&p0)];
    loop {
        let last = &chain[chain.len() - 1];
        if last.is_empty() || last.len() == 1 {
            break;
        }
        let prev = &chain[chain.len() - 2];
        let r = rrem(prev, last);
        let neg: Vec<BigRational> = r.into_iter().map(|c| -c).collect();
        if neg.is_empty() {
            break;
        }
        chain.push(rnormalize(neg));
    }
    let sign_at = |inf_positive: bool| -> Vec<i8> {
        chain
            .iter()
            .filter(|q| !q.is_empty())
            .map(|q| {
                let lead = q.last().unwrap();
                let deg = q.len() - 1;
                let mut s: i8 = if lead.is_positive() { 1 } else { -1 };
                if !inf_positive && deg % 2 == 1 {
                    s = -s;
                }
                s
            })
            .collect()
    };
    let variations = |signs: &[i8]| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let v_neg = variations(&sign_at(false));
    let v_pos = variations(&sign_at(true));
    v_neg.saturating_sub(v_pos)
}

/// Certified test against the closed unit disk with boundary margin.
///
/// `AllInside` and `SomeOutside` are definite; roots within `margin` of the
/// unit circle that prevent a definite call yield `BoundaryUncertain`.
pub fn roots_in_closed_unit_disk(p: &Poly, margin: f64) -> Result<LocationVerdict, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(LocationVerdict::AllInside);
    }
    if all_roots_strictly_inside_exact(p)? {
        return Ok(LocationVerdict::AllInside);
    }
    let roots = exact_roots(p, 1e-12)?;
    let worst = roots
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    if worst.norm() > 1.0 + margin {
        return Ok(LocationVerdict::SomeOutside(worst));
    }
    Ok(LocationVerdict::BoundaryUncertain)
}

/// Certified test that all roots satisfy `Re >= c` (or `Re > c` when
/// `strict`), with the same margin semantics as the disk test.
pub fn roots_re_at_least(
    p: &Poly,
    c: f64,
    strict: bool,
    margin: f64,
) -> Result<LocationVerdict, RootsError> {
    let _ = strict; // strict and closed verdicts coincide off the margin band
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(LocationVerdict::AllInside);
    }
    let roots = exact_roots(p, 1e-12)?;
    let worst = roots
        .iter()
        .copied()
        .min_by(|a, b| a.re.total_cmp(&b.re))
        .unwrap();
    if worst.re < c - margin {
        return Ok(LocationVerdict::SomeOutside(worst));
    }
    if roots.iter().all(|r| r.re >= c + margin) {
        return Ok(LocationVerdict::AllInside);
    }
    Ok(LocationVerdict::BoundaryUncertain)
}

/// Interlacing and Wronskian-sign report for a pair of real polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterlaceReport {
    pub interlacing: bool,
    pub wronskian_nonnegative: bool,
}

/// Checks whether the real roots of `f` and `g` interlace and whether
/// `W(f,g) = f'g - fg' >= 0` on the whole real line.
///
/// The Wronskian sign is decided exactly: `W >= 0` iff `W = 0`, or every
/// real root of `W` has even multiplicity and the leading coefficient is
/// positive. Constants (and the zero polynomial) interlace anything
/// real-rooted.
pub fn interlace_and_wronskian(f: &Poly, g: &Poly) -> Result<InterlaceReport, RootsError> {
    if !f.is_real() || !g.is_real() {
        return Err(RootsError::NonRealCoefficients);
    }
    if f.is_zero() && g.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let w = f.derivative().mul(g).sub(&f.mul(&g.derivative()));
    Ok(InterlaceReport {
        interlacing: interlacing(f, g)?,
        wronskian_nonnegative: wronskian_nonnegative(&w),
    })
}

fn wronskian_nonnegative(w: &Poly) -> bool {
    if w.is_zero() {
        return true;
    }
    let lead_positive = w.leading().unwrap().re().is_positive();
    if w.is_constant() {
        return lead_positive;
    }
    if !lead_positive {
        return false;
    }
    for (factor, mult) in w.squarefree_decomposition() {
        if mult % 2 == 1 {
            let coeffs = factor.real_coeffs().expect("real wronskian");
            if sturm_distinct_real_roots(&coeffs) > 0 {
                return false;
            }
        }
    }
    true
}

fn interlacing(f: &Poly, g: &Poly) -> Result<bool, RootsError> {
    if f.is_constant() && g.is_constant() {
        return Ok(true);
    }
    if f.is_constant() {
        return is_real_rooted(g);
    }
    if g.is_constant() {
        return is_real_rooted(f);
    }
    if !is_real_rooted(f)? || !is_real_rooted(g)? {
        return Ok(false);
    }
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    if df.abs_diff(dg) > 1 {
        return Ok(false);
    }
    let rf = real_sorted_roots(f)?;
    let rg = real_sorted_roots(g)?;
    let span = rf
        .iter()
        .chain(rg.iter())
        .fold(1.0_f64, |m, r| m.max(r.abs()));
    let tol = 1e-9 * span;
    let ok = if df == dg {
        alternates(&rf, &rg, tol) || alternates(&rg, &rf, tol)
    } else if df == dg + 1 {
        alternates(&rf, &rg, tol)
    } else {
        alternates(&rg, &rf, tol)
    };
    Ok(ok)
}

fn real_sorted_roots(p: &Poly) -> Result<Vec<f64>, RootsError> {
    let mut rs: Vec<f64> = exact_roots(p, 1e-12)?.iter().map(|r| r.re).collect();
    rs.sort_by(f64::total_cmp);
    Ok(rs)
}

/// Weak alternation `a_1 <= b_1 <= a_2 <= ...`; `b` has the same length as
/// `a` or one element fewer.
fn alternates(a: &[f64], b: &[f64], tol: f64) -> bool {
    if b.len() + 1 != a.len() && b.len() != a.len() {
        return false;
    }
    for (i, x) in b.iter().enumerate() {
        if *x < a[i] - tol {
            return false;
        }
        if i + 1 < a.len() && *x > a[i + 1] + tol {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactComplex as EC;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| EC::from_int(c)).collect())
    }

    #[test]
    fn find_roots_quadratic_units() {
        // x^2 + 1 -> {i, -i}
        let roots = find_roots(&p(&[1, 0, 1]).to_polyf(), 1e-10).unwrap();
        assert_eq!(roots.len(), 2);
        let mut ims: Vec<f64> = roots.iter().map(|r| r.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
        assert!(roots.iter().all(|r| r.re.abs() < 1e-12));
    }

    #[test]
    fn find_roots_x_squared_plus_i() {
        // x^2 = -i has roots +/- (sqrt(2)/2)(1 - i)
        let q = PolyF::from_coeffs(vec![
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
            Complex64::ONE,
        ]);
        let roots = find_roots(&q, 1e-10).unwrap();
        let expect = Complex64::new(
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        );
        assert!(roots.iter().any(|r| (r - expect).norm() < 1e-10));
        assert!(roots.iter().any(|r| (r + expect).norm() < 1e-10));
    }

    #[test]
    fn find_roots_paper_factored_pair() {
        // (x - 2z)(x - z/2 - 1/2) at z = 1: roots {2, 1}
        let q = PolyF::from_roots(&[Complex64::new(2.0, 0.0), Complex64::ONE]);
        let roots = find_roots(&q, 1e-10).unwrap();
        assert!((roots[0] - Complex64::ONE).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn find_roots_higher_degree() {
        let expect: Vec<Complex64> = vec![
            Complex64::new(-2.0, 0.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(0.1, -1.3),
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 2.0),
        ];
        let q = PolyF::from_roots(&expect);
        let roots = find_roots(&q, 1e-10).unwrap();
        for e in &expect {
            assert!(roots.iter().any(|r| (r - e).norm() < 1e-9), "missing {e}");
        }
    }

    #[test]
    fn unit_disk_fixtures() {
        // x - 1/2 inside
        let inside = Poly::from_coeffs(vec![EC::from_ratio(-1, 2), EC::one()]);
        assert_eq!(
            roots_in_closed_unit_disk(&inside, 1e-9).unwrap(),
            LocationVerdict::AllInside
        );
        // x - 2 outside with witness 2
        match roots_in_closed_unit_disk(&p(&[-2, 1]), 1e-9).unwrap() {
            LocationVerdict::SomeOutside(w) => {
                assert!((w - Complex64::new(2.0, 0.0)).norm() < 1e-9)
            }
            v => panic!("expected SomeOutside, got {v:?}"),
        }
        // (1+x)^3 has a boundary root
        assert_eq!(
            roots_in_closed_unit_disk(&p(&[1, 1]).pow(3), 1e-9).unwrap(),
            LocationVerdict::BoundaryUncertain
        );
    }

    #[test]
    fn closed_disk_exact_handles_boundary() {
        assert!(all_roots_in_closed_unit_disk_exact(&p(&[1, 1]).pow(3)).unwrap());
        assert!(all_roots_in_closed_unit_disk_exact(&p(&[-1, 0, 1])).unwrap()); // x^2-1
        assert!(!all_roots_in_closed_unit_disk_exact(&p(&[-2, 1])).unwrap()); // x-2
        assert!(all_roots_in_closed_unit_disk_exact(&p(&[0, 1])).unwrap()); // x
                                                                            // mixed: root 1/2 inside and 3 outside
        assert!(!all_roots_in_closed_unit_disk_exact(
            &p(&[-3, 1]).mul(&Poly::from_coeffs(vec![EC::from_ratio(-1, 2), EC::one()]))
        )
        .unwrap());
        // reciprocal pair 2 and 1/2 shares gcd with its reversal but fails
        let pair = p(&[-2, 1]).mul(&Poly::from_coeffs(vec![EC::from_ratio(-1, 2), EC::one()]));
        assert!(!all_roots_in_closed_unit_disk_exact(&pair).unwrap());
    }

    #[test]
    fn strict_disk_exact() {
        assert!(all_roots_strictly_inside_exact(&Poly::from_coeffs(vec![
            EC::from_ratio(-1, 2),
            EC::one()
        ]))
        .unwrap());
        assert!(!all_roots_strictly_inside_exact(&p(&[-1, 1])).unwrap()); // root at 1
        assert!(!all_roots_strictly_inside_exact(&p(&[-2, 1])).unwrap());
        assert!(all_roots_strictly_inside_exact(&p(&[1])).unwrap());
    }

    #[test]
    fn half_plane_fixtures() {
        match roots_re_at_least(&p(&[2, 1]), -0.5, false, 1e-9).unwrap() {
            LocationVerdict::SomeOutside(w) => assert!((w.re + 2.0).abs() < 1e-9),
            v => panic!("{v:?}"),
        }
        assert_eq!(
            roots_re_at_least(&p(&[0, 1]), -0.5, false, 1e-9).unwrap(),
            LocationVerdict::AllInside
        );
        // 2 + 3x: root -2/3 violates Re >= -1/2
        match roots_re_at_least(&p(&[2, 3]), -0.5, false, 1e-9).unwrap() {
            LocationVerdict::SomeOutside(w) => assert!((w.re + 2.0 / 3.0).abs() < 1e-9),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn real_rootedness() {
        assert!(is_real_rooted(&p(&[-1, 0, 1])).unwrap());
        assert!(!is_real_rooted(&p(&[1, 0, 1])).unwrap());
        assert!(is_real_rooted(&p(&[0, -3, 0, 1])).unwrap()); // x^3 - 3x
        assert!(is_real_rooted(&p(&[-1, 1]).pow(4)).unwrap());
        assert_eq!(
            is_real_rooted(&Poly::from_coeffs(vec![EC::i()])),
            Err(RootsError::NonRealCoefficients)
        );
    }

    #[test]
    fn interlace_fixtures() {
        // f = x^2-1, g = x: interlacing, W = x^2+1 >= 0
        let rep = interlace_and_wronskian(&p(&[-1, 0, 1]), &p(&[0, 1])).unwrap();
        assert!(rep.interlacing && rep.wronskian_nonnegative);
        // f = x, g = 1
        let rep = interlace_and_wronskian(&p(&[0, 1]), &p(&[1])).unwrap();
        assert!(rep.interlacing && rep.wronskian_nonnegative);
        // f = x^2-1, g = x-3: 3 is outside [-1, 1]
        let rep = interlace_and_wronskian(&p(&[-1, 0, 1]), &p(&[-3, 1])).unwrap();
        assert!(!rep.interlacing);
    }

    #[test]
    fn sturm_counts() {
        let q = p(&[0, -3, 0, 1]); // x^3 - 3x: three real roots
        let coeffs = q.real_coeffs().unwrap();
        assert_eq!(sturm_distinct_real_roots(&coeffs), 3);
        let q = p(&[1, 0, 1]);
        assert_eq!(sturm_distinct_real_roots(&q.real_coeffs().unwrap()), 0);
    }
}
