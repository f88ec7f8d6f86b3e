//! Decision procedures and certified lower bounds for invariant sets:
//! large-disk criteria, sampled disk falsification, the Lame condition,
//! Hermite-Biehler real-line checks, constant-coefficient cones, eigenroot
//! clouds, and the combined operator report.

use crate::diffop::{DiffOp, DiffOpError};
use crate::exact::{rational_approx, ExactComplex};
use crate::newton::{
    classify_ne, leading_constants, ne_border, positive_cone, ConeDesc, NeOutcome, NewtonClass,
    NewtonError,
};
use crate::poly::{Poly, PolyF};
use crate::roots::{
    all_roots_in_closed_unit_disk_exact, all_roots_strictly_inside_exact, exact_roots, find_roots,
    interlace_and_wronskian, is_real_rooted, roots_re_at_least, LocationVerdict, RootsError,
};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvarianceError {
    #[error("operator is degenerate for this n: deg T(x^n) - n falls short of the Fuchs index")]
    DegenerateForN,
    #[error("operator has rank at most one on degree-n polynomials")]
    RankOne,
    #[error("leading coefficient is constant; no fundamental polygon")]
    ConstantLeadingCoefficient,
    #[error("operator does not have the two-consecutive-top-terms shape")]
    WrongShape,
    #[error("leading coefficient is not square-free")]
    NonSquareFreeLeading,
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

// ---- plane geometry helpers ----

/// Convex hull (counterclockwise vertex list) of a finite point set.
/// Degenerate inputs give a single point or the two segment endpoints.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points
        .iter()
        .map(|p| Complex64::new(p.re + 0.0, p.im + 0.0))
        .collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // fully collinear input collapses the chains; keep the farthest pair
        let mut best = (pts[0], pts[0], -1.0f64);
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = (pts[i] - pts[j]).norm();
                if d > best.2 {
                    best = (pts[i], pts[j], d);
                }
            }
        }
        return vec![best.0, best.1];
    }
    lower
}

/// Distance from `z` to the convex hull (0 when inside).
pub fn hull_distance(hull: &[Complex64], z: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => segment_distance(hull[0], hull[1], z),
        _ => {
            let inside = (0..hull.len()).all(|i| {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                (b.re - a.re) * (z.im - a.im) - (b.im - a.im) * (z.re - a.re) >= -1e-12
            });
            if inside {
                return 0.0;
            }
            (0..hull.len())
                .map(|i| segment_distance(hull[i], hull[(i + 1) % hull.len()], z))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Convex hull of the zero locus of the leading coefficient.
pub fn fundamental_polygon(t: &DiffOp) -> Result<Vec<Complex64>, InvarianceError> {
    let qk = t.leading();
    if qk.degree().unwrap() < 1 {
        return Err(InvarianceError::ConstantLeadingCoefficient);
    }
    let roots = exact_roots(qk, 1e-12)?;
    Ok(convex_hull(&roots))
}

// ---- large-disk decision ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiskVerdict {
    InvariantForLargeR,
    NotInvariantForLargeR,
    Uncertain,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskDiagnostics {
    pub g: String,
    pub p_rho_over_g: String,
    pub g_zeros: Vec<Complex64>,
    pub quotient_zeros: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskDecision {
    pub verdict: DiskVerdict,
    pub witnesses: Vec<Complex64>,
    pub diagnostics: DiskDiagnostics,
}

/// Exact rank of the coefficient matrix of a polynomial family.
fn poly_family_rank(polys: &[Poly]) -> usize {
    let width = polys
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let mut rows: Vec<Vec<ExactComplex>> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut row = vec![ExactComplex::zero(); width];
            for (k, c) in p.coeffs().iter().enumerate() {
                row[k] = c.clone();
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip().unwrap();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            let (head, tail) = rows.split_at_mut(r);
            let pivot_row = &head[rank];
            for (c, cell) in tail[0].iter_mut().enumerate().skip(col) {
                let sub = &pivot_row[c] * &factor;
                *cell = &*cell - &sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Large-disk invariance decision for `T` acting on degree-`n` polynomials:
/// invariant for all sufficiently large centered disks iff all zeros of
/// `g = gcd_l P_l^n` lie in the closed unit disk and all zeros of
/// `P_rho^n / g` lie strictly inside. Both conditions are decided exactly.
pub fn large_disk_decision(t: &DiffOp, n: u32) -> Result<DiskDecision, InvarianceError> {
    let images: Vec<Poly> = (0..=n as usize)
        .map(|j| t.apply(&Poly::monomial(ExactComplex::one(), j)))
        .collect();
    if poly_family_rank(&images) <= 1 {
        return Err(InvarianceError::RankOne);
    }
    let rho = images
        .iter()
        .enumerate()
        .filter_map(|(j, im)| im.degree().map(|d| d as i64 - j as i64))
        .max()
        .expect("rank > 1");
    let top_shift = images[n as usize].degree().map(|d| d as i64 - n as i64);
    if top_shift != Some(rho) {
        return Err(InvarianceError::DegenerateForN);
    }
    let mut family: Vec<Poly> = Vec::new();
    for ell in -(n as i64)..=rho {
        let p = t.p_ell(n, ell)?;
        if !p.is_zero() {
            family.push(p);
        }
    }
    let mut g = family[0].monic();
    for p in &family[1..] {
        g = g.gcd(p)?;
    }
    let p_rho = t.p_ell(n, rho)?;
    debug_assert_eq!(p_rho.degree(), Some(n as usize));
    let quotient = p_rho.div_exact(&g).expect("gcd divides");

    let cond1 = all_roots_in_closed_unit_disk_exact(&g)?;
    let cond2 = quotient.is_constant() || all_roots_strictly_inside_exact(&quotient)?;
    let g_zeros = if g.is_constant() {
        vec![]
    } else {
        exact_roots(&g, 1e-12)?
    };
    let quotient_zeros = if quotient.is_constant() {
        vec![]
    } else {
        exact_roots(&quotient, 1e-12)?
    };
    let mut witnesses = Vec::new();
    if !cond1 {
        if let Some(w) = g_zeros
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        {
            witnesses.push(w);
        }
    }
    if !cond2 {
        if let Some(w) = quotient_zeros
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        {
            witnesses.push(w);
        }
    }
    let verdict = if cond1 && cond2 {
        DiskVerdict::InvariantForLargeR
    } else {
        DiskVerdict::NotInvariantForLargeR
    };
    Ok(DiskDecision {
        verdict,
        witnesses,
        diagnostics: DiskDiagnostics {
            g: g.to_string(),
            p_rho_over_g: quotient.to_string(),
            g_zeros,
            quotient_zeros,
        },
    })
}

// ---- half-plane form (advisory) ----

#[derive(Debug, Clone, Serialize)]
pub struct HalfPlaneVerdict {
    pub tag: String,
    pub witness: Option<Complex64>,
}

impl From<LocationVerdict> for HalfPlaneVerdict {
    fn from(v: LocationVerdict) -> Self {
        match v {
            LocationVerdict::AllInside => HalfPlaneVerdict {
                tag: "AllInside".into(),
                witness: None,
            },
            LocationVerdict::SomeOutside(w) => HalfPlaneVerdict {
                tag: "SomeOutside".into(),
                witness: Some(w),
            },
            LocationVerdict::BoundaryUncertain => HalfPlaneVerdict {
                tag: "BoundaryUncertain".into(),
                witness: None,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaCandidate {
    pub beta: Complex64,
    pub re_exceeds_half: bool,
}

/// Advisory half-plane report. The raw data (zeros of `h`, of `f_rho/h`,
/// factorization probe) is reported without overriding the large-disk
/// decision, which is cross-linked in `large_disk_verdict`.
#[derive(Debug, Clone, Serialize)]
pub struct HalfPlaneAdvisory {
    pub advisory: bool,
    pub h: String,
    pub h_zeros: Vec<Complex64>,
    pub h_verdict: HalfPlaneVerdict,
    pub quotient: String,
    pub quotient_zeros: Vec<Complex64>,
    pub quotient_verdict: HalfPlaneVerdict,
    pub beta_candidates: Vec<BetaCandidate>,
    pub order_one_ratio: Option<OrderOneRatio>,
    pub large_disk_verdict: DiskVerdict,
}

/// `Re(a_0/a_1)` against `n/2` for order-one operators with
/// `deg Q_1 = deg Q_0 + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct OrderOneRatio {
    pub ratio: Complex64,
    pub threshold: f64,
    pub below_threshold: bool,
}

pub fn half_plane_advisory(t: &DiffOp, n: u32) -> Result<HalfPlaneAdvisory, InvarianceError> {
    let disk = large_disk_decision(t, n)?;
    let rho = t.nth_fuchs_index(n as usize).expect("rank checked");
    let mut family: Vec<Poly> = Vec::new();
    for ell in -(n as i64)..=rho {
        let f = t.f_ell(n, ell)?;
        if !f.is_zero() {
            family.push(f);
        }
    }
    let mut h = family[0].monic();
    for f in &family[1..] {
        h = h.gcd(f)?;
    }
    let f_rho = t.f_ell(n, rho)?;
    let quotient = f_rho.div_exact(&h).expect("gcd divides");
    let h_zeros = if h.is_constant() {
        vec![]
    } else {
        exact_roots(&h, 1e-12)?
    };
    let quotient_zeros = if quotient.is_constant() {
        vec![]
    } else {
        exact_roots(&quotient, 1e-12)?
    };
    let h_verdict = if h.is_constant() {
        LocationVerdict::AllInside
    } else {
        roots_re_at_least(&h, -0.5, false, 1e-9)?
    };
    let quotient_verdict = if quotient.is_constant() {
        LocationVerdict::AllInside
    } else {
        roots_re_at_least(&quotient, -0.5, true, 1e-9)?
    };

    // factorization probe: betas solving sum_j (n)_j x^(k-j) Q_j(x) beta^j = 0
    let beta_candidates = beta_probe(t, n)?;
    let order_one_ratio = order_one_ratio(t, n);

    Ok(HalfPlaneAdvisory {
        advisory: true,
        h: h.to_string(),
        h_zeros,
        h_verdict: h_verdict.into(),
        quotient: quotient.to_string(),
        quotient_zeros,
        quotient_verdict: quotient_verdict.into(),
        beta_candidates,
        order_one_ratio,
        large_disk_verdict: disk.verdict,
    })
}

fn beta_probe(t: &DiffOp, n: u32) -> Result<Vec<BetaCandidate>, InvarianceError> {
    use crate::poly::falling_factorial_int;
    let k = t.order();
    // column j: (n)_j x^(k-j) Q_j(x); rows: coefficients of x^m as
    // polynomials in beta
    let cols: Vec<Poly> = (0..=k.min(n as usize))
        .map(|j| {
            let fall = ExactComplex::from_bigint(falling_factorial_int(n as u64, j as u64));
            t.q(j).mul_xpow(k - j).scale(&fall)
        })
        .collect();
    let width = cols
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let mut rows: Vec<Poly> = Vec::new();
    for m in 0..width {
        let beta_poly = Poly::from_coeffs(cols.iter().map(|c| c.coeff(m)).collect());
        if !beta_poly.is_zero() {
            rows.push(beta_poly);
        }
    }
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let mut hb = rows[0].clone();
    for r in &rows[1..] {
        hb = hb.gcd(r)?;
    }
    if hb.is_constant() {
        return Ok(vec![]);
    }
    Ok(exact_roots(&hb, 1e-12)?
        .into_iter()
        .map(|beta| BetaCandidate {
            beta,
            re_exceeds_half: beta.re > 0.5,
        })
        .collect())
}

fn order_one_ratio(t: &DiffOp, n: u32) -> Option<OrderOneRatio> {
    if t.order() != 1 {
        return None;
    }
    let q1 = t.q(1);
    let q0 = t.q(0);
    let d1 = q1.degree()?;
    let d0 = q0.degree()?;
    if d1 != d0 + 1 {
        return None;
    }
    let ratio = (q0.leading().unwrap() / q1.leading().unwrap()).to_complex64();
    let threshold = n as f64 / 2.0;
    Some(OrderOneRatio {
        ratio,
        threshold,
        below_threshold: ratio.re < threshold,
    })
}

// ---- diagonal operators ----

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalDecision {
    pub invariant_all_r: bool,
    pub zeros: Vec<Complex64>,
}

/// For a diagonal operator `T(x^i) = lambda_i x^i` on degree-n polynomials
/// (`lambdas` has length n+1), every centered disk is invariant iff all
/// zeros of `sum lambda_i C(n,i) x^i` lie in the closed unit disk.
pub fn diagonal_disk_check(lambdas: &[ExactComplex]) -> Result<DiagonalDecision, InvarianceError> {
    use crate::poly::binomial;
    let n = lambdas.len().saturating_sub(1);
    let coeffs: Vec<ExactComplex> = lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| l * &ExactComplex::from_bigint(binomial(n as u64, i as u64)))
        .collect();
    let p = Poly::from_coeffs(coeffs);
    if p.is_constant() {
        return Ok(DiagonalDecision {
            invariant_all_r: true,
            zeros: vec![],
        });
    }
    Ok(DiagonalDecision {
        invariant_all_r: all_roots_in_closed_unit_disk_exact(&p)?,
        zeros: exact_roots(&p, 1e-12)?,
    })
}

// ---- sampled disk verification ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn centered(radius: f64) -> Disk {
        Disk {
            center: Complex64::ZERO,
            radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SampledOutcome {
    VerifiedSampled,
    Falsified { y: Complex64, root: Complex64 },
}

/// Sampled (not proved) check that the disk is invariant under degree-n
/// root maps: for each sampled `y` in the disk, every root of
/// `T((x-y)^n)` other than `y` itself must stay within `radius*(1+margin)`
/// of the center. The boundary circle is scanned first, then a radial
/// spiral through the interior; the first falsification in this fixed
/// order wins.
pub fn disk_invariance_sampled(
    t: &DiffOp,
    n: u32,
    disk: Disk,
    boundary_samples: usize,
    interior_samples: usize,
    margin: f64,
) -> Result<SampledOutcome, InvarianceError> {
    let mut samples = Vec::with_capacity(boundary_samples + interior_samples);
    for m in 0..boundary_samples {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / boundary_samples.max(1) as f64;
        samples.push(disk.center + Complex64::from_polar(disk.radius, theta));
    }
    let golden = 2.0 * std::f64::consts::PI * (1.0 - 1.0 / 1.618_033_988_749_895);
    for m in 0..interior_samples {
        let r = disk.radius * ((m as f64 + 0.5) / interior_samples.max(1) as f64).sqrt();
        samples.push(disk.center + Complex64::from_polar(r, golden * m as f64));
    }
    let limit = disk.radius * (1.0 + margin);
    for y in samples {
        let roots = image_roots(t, y, n)?;
        for root in roots {
            if (root - disk.center).norm() > limit {
                return Ok(SampledOutcome::Falsified { y, root });
            }
        }
    }
    Ok(SampledOutcome::VerifiedSampled)
}

/// Roots of `T((x-y)^n)` with the trivial factor `(x-y)^(n-k)` removed.
fn image_roots(t: &DiffOp, y: Complex64, n: u32) -> Result<Vec<Complex64>, InvarianceError> {
    let k = t.order();
    let p = if n as usize >= k {
        t.psi(y, n as f64)
    } else {
        let mut xt = PolyF::constant(Complex64::ONE);
        for _ in 0..n {
            xt = xt.mul_linear(y);
        }
        t.apply_f(&xt)
    };
    match p.degree() {
        None | Some(0) => Ok(vec![]),
        Some(_) => Ok(find_roots(&p, 1e-11)?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MinDiskOutcome {
    Bracket { lo: f64, hi: f64 },
    NotFoundBelow(f64),
}

/// Bisection over the radius for the sampled-invariance threshold of
/// centered disks. Returns a bracket of width at most `tol`.
pub fn min_disk_radius(
    t: &DiffOp,
    n: u32,
    r_max: f64,
    tol: f64,
) -> Result<MinDiskOutcome, InvarianceError> {
    let samples = (64, 64);
    let margin = 1e-9;
    let verified = |r: f64| -> Result<bool, InvarianceError> {
        Ok(matches!(
            disk_invariance_sampled(t, n, Disk::centered(r), samples.0, samples.1, margin)?,
            SampledOutcome::VerifiedSampled
        ))
    };
    if !verified(r_max)? {
        return Ok(MinDiskOutcome::NotFoundBelow(r_max));
    }
    let mut lo = 0.0;
    let mut hi = r_max;
    if verified(0.0)? {
        return Ok(MinDiskOutcome::Bracket { lo: 0.0, hi: 0.0 });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if verified(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MinDiskOutcome::Bracket { lo, hi })
}

// ---- Lame condition ----

#[derive(Debug, Clone, Serialize)]
pub struct LameReport {
    pub applies: bool,
    pub residues: Vec<Complex64>,
    pub exact: bool,
}

/// For `T = Q_k d^k + Q_(k-1) d^(k-1)` with square-free `Q_k`, computes the
/// partial-fraction residues `kappa_i = Q_(k-1)(x_i)/Q_k'(x_i)` at the roots
/// of `Q_k`; `applies` iff `deg Q_(k-1) < deg Q_k` and every residue is real
/// and nonnegative. Residues are evaluated exactly when the roots
/// reconstruct as Gaussian rationals.
pub fn lame_check(t: &DiffOp) -> Result<LameReport, InvarianceError> {
    let k = t.order();
    if k == 0 {
        return Err(InvarianceError::WrongShape);
    }
    for j in 0..k.saturating_sub(1) {
        if !t.q(j).is_zero() {
            return Err(InvarianceError::WrongShape);
        }
    }
    let qk = t.leading();
    if qk.degree().unwrap() < 1 {
        return Err(InvarianceError::WrongShape);
    }
    if qk.gcd(&qk.derivative()).expect("nonzero").degree() != Some(0) {
        return Err(InvarianceError::NonSquareFreeLeading);
    }
    let qk1 = t.q(k - 1);
    let qk_prime = qk.derivative();
    let roots = exact_roots(qk, 1e-12)?;
    let mut residues = Vec::with_capacity(roots.len());
    let mut all_exact = true;
    let mut all_ok = true;
    for r in roots {
        let candidate = rational_root(qk, r);
        let (kappa, is_exact_real_nonneg) = match candidate {
            Some(x) => {
                use num_traits::Signed;
                let kappa = &qk1.eval(&x) / &qk_prime.eval(&x);
                let ok = kappa.is_real() && !kappa.re().is_negative();
                (kappa.to_complex64(), ok)
            }
            None => {
                all_exact = false;
                let kappa = qk1.to_polyf().eval(r) / qk_prime.to_polyf().eval(r);
                let ok = kappa.im.abs() <= 1e-9 && kappa.re >= -1e-9;
                (kappa, ok)
            }
        };
        if !is_exact_real_nonneg {
            all_ok = false;
        }
        residues.push(kappa);
    }
    let deg_drop = match qk1.degree() {
        None => true,
        Some(d) => d < qk.degree().unwrap(),
    };
    Ok(LameReport {
        applies: deg_drop && all_ok,
        residues,
        exact: all_exact,
    })
}

/// Try to promote a numeric root to an exact Gaussian-rational root.
fn rational_root(p: &Poly, r: Complex64) -> Option<ExactComplex> {
    let re = rational_approx(r.re, 1_000_000)?;
    let im = rational_approx(r.im, 1_000_000)?;
    let candidate = ExactComplex::new(re, im);
    if p.eval(&candidate).is_zero() {
        Some(candidate)
    } else {
        None
    }
}

// ---- Hermite-Biehler real-line check ----

#[derive(Debug, Clone, Serialize)]
pub struct HbReport {
    pub preserves_real_line: bool,
    pub u_real_rooted: bool,
    pub v_real_rooted: bool,
    pub interlacing: bool,
    pub wronskian_nonnegative: bool,
}

/// Divide out a common complex phase: returns `(U/xi, V/xi)` with real
/// coefficients when some scalar makes both polynomials real, using the
/// top coefficient of the higher-degree input as the reference.
pub fn normalize_common_phase(u: &Poly, v: &Poly) -> Option<(Poly, Poly)> {
    if u.is_real() && v.is_real() {
        return Some((u.clone(), v.clone()));
    }
    let reference = if u.degree() >= v.degree() {
        u.leading().or_else(|| v.leading())
    } else {
        v.leading()
    }?;
    let inv = reference.recip()?;
    let (nu, nv) = (u.scale(&inv), v.scale(&inv));
    if nu.is_real() && nv.is_real() {
        Some((nu, nv))
    } else {
        None
    }
}

/// Real-line invariance for `T = U(d/dx) + x V(d/dx)` with real `U`, `V`:
/// true iff `U` and `V` are real-rooted, their zeros interlace, and
/// `W(V, U) >= 0` on the real line.
pub fn hb_real_line_check(u: &Poly, v: &Poly) -> Result<HbReport, InvarianceError> {
    if !u.is_real() || !v.is_real() {
        return Err(InvarianceError::Roots(RootsError::NonRealCoefficients));
    }
    if v.is_zero() {
        let urr = is_real_rooted(u)?;
        return Ok(HbReport {
            preserves_real_line: urr,
            u_real_rooted: urr,
            v_real_rooted: true,
            interlacing: true,
            wronskian_nonnegative: true,
        });
    }
    let urr = is_real_rooted(u)?;
    let vrr = is_real_rooted(v)?;
    let rep = interlace_and_wronskian(v, u)?;
    Ok(HbReport {
        preserves_real_line: urr && vrr && rep.interlacing && rep.wronskian_nonnegative,
        u_real_rooted: urr,
        v_real_rooted: vrr,
        interlacing: rep.interlacing,
        wronskian_nonnegative: rep.wronskian_nonnegative,
    })
}

// ---- constant coefficients ----

#[derive(Debug, Clone, Serialize)]
pub struct ConstantCoeffCone {
    pub lambdas: Vec<Complex64>,
    pub cone: ConeDesc,
}

/// Characteristic roots of `sum a_j t^j` and the positive cone of the
/// inverses of the nonzero roots (zero roots are dropped).
pub fn constant_coeff_cone(coeffs: &[ExactComplex]) -> Result<ConstantCoeffCone, InvarianceError> {
    let p = Poly::from_coeffs(coeffs.to_vec());
    if p.is_constant() {
        return Ok(ConstantCoeffCone {
            lambdas: vec![],
            cone: ConeDesc::Origin,
        });
    }
    // zero roots come off exactly as the trailing x-power
    let low = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly::from_coeffs(p.coeffs()[low..].to_vec());
    let mut lambdas = vec![Complex64::ZERO; low];
    let nonzero = if reduced.is_constant() {
        vec![]
    } else {
        exact_roots(&reduced, 1e-12)?
    };
    lambdas.extend(nonzero.iter().copied());
    if nonzero.is_empty() {
        return Ok(ConstantCoeffCone {
            lambdas,
            cone: ConeDesc::Origin,
        });
    }
    let inverses: Vec<Complex64> = nonzero.iter().map(|l| 1.0 / l).collect();
    Ok(ConstantCoeffCone {
        lambdas,
        cone: positive_cone(&inverses)?,
    })
}

// ---- eigenroot clouds and lower-bound regions ----

#[derive(Debug, Clone, Serialize)]
pub struct EigenCloudEntry {
    pub m: usize,
    pub roots: Vec<Complex64>,
}

/// Union of eigenpolynomial roots over `m` in `[m_min, m_max]`, restricted
/// to degrees where `|lambda_j| < |lambda_m|` holds strictly for all
/// `j < m` (decided exactly).
pub fn eigenroot_cloud(
    t: &DiffOp,
    m_min: usize,
    m_max: usize,
) -> Result<Vec<EigenCloudEntry>, InvarianceError> {
    let spectrum = t.spectrum(m_max)?;
    let norms: Vec<_> = spectrum.eigenvalues.iter().map(|l| l.norm_sqr()).collect();
    let mut out = Vec::new();
    for m in m_min..=m_max {
        if !(0..m).all(|j| norms[j] < norms[m]) {
            continue;
        }
        let p = t.eigenpolynomial(m)?;
        let roots = if m == 0 {
            vec![]
        } else {
            exact_roots(&p, 1e-12)?
        };
        out.push(EigenCloudEntry { m, roots });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundRegion {
    pub polygon: Vec<Complex64>,
    pub cone: Option<ConeDesc>,
    pub minkowski_sum: bool,
    pub eigen_cloud: Vec<EigenCloudEntry>,
    pub notes: Vec<String>,
}

/// Certified subset of every invariant set: the convex hull of the roots of
/// `Q_k` and `Q_0`, the escape cone (for degenerate operators) attached as
/// a Minkowski sum, and the eigenroot cloud for exactly solvable operators.
pub fn lower_bound_region(t: &DiffOp) -> Result<LowerBoundRegion, InvarianceError> {
    let mut seeds = Vec::new();
    if t.leading().degree().unwrap() >= 1 {
        seeds.extend(exact_roots(t.leading(), 1e-12)?);
    }
    let q0 = t.q(0);
    if q0.degree().unwrap_or(0) >= 1 {
        seeds.extend(exact_roots(&q0, 1e-12)?);
    }
    let polygon = convex_hull(&seeds);
    let basic = t.classify_basic();
    let mut notes = Vec::new();
    let cone = if basic.nondegenerate {
        None
    } else {
        let (_, cone, _) = escape_data(t)?;
        Some(cone)
    };
    let minkowski_sum = match &cone {
        Some(c) => !polygon.is_empty() && *c != ConeDesc::FullPlane && *c != ConeDesc::Origin,
        None => false,
    };
    let eigen_cloud = if basic.exactly_solvable {
        eigenroot_cloud(t, 0, 10)?
    } else {
        vec![]
    };
    if let Ok(rep) = lame_check(t) {
        if rep.applies {
            notes.push("minimal invariant set equals the fundamental polygon".into());
        }
    }
    Ok(LowerBoundRegion {
        polygon,
        cone,
        minkowski_sum,
        eigen_cloud,
        notes,
    })
}

// ---- combined report ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Subclass {
    NotConstantLeading,
    #[serde(rename = "A-ConstantCoefficients")]
    ConstantCoefficients,
    #[serde(rename = "B")]
    ConstantLeadingShapeB {
        edges: usize,
    },
    ConstantLeadingOther,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorReport {
    pub fuchs_index: i64,
    pub nondegenerate: bool,
    pub exactly_solvable: bool,
    pub newton_class: NewtonClass,
    pub fundamental_polygon: Vec<Complex64>,
    pub escape_cone: ConeDesc,
    pub subclass: Subclass,
    pub notes: Vec<String>,
}

pub const NOTE_UNBOUNDED: &str = "all invariant sets unbounded";
pub const NOTE_ONLY_PLANE: &str = "only invariant set is the whole plane";
pub const NOTE_ALMOST_COLLINEAR: &str =
    "almost defining with leading constants collinear through 0; whole-plane conclusion not guaranteed";

/// Newton class of the shifted border, escape cone, and leading constants
/// of `psi~_T`.
fn escape_data(t: &DiffOp) -> Result<(NewtonClass, ConeDesc, Vec<Complex64>), InvarianceError> {
    let psi = t.psi_tilde();
    let outcome = ne_border(&psi);
    let class = classify_ne(&outcome);
    match outcome {
        NeOutcome::SinglePoint(_) => Ok((class, ConeDesc::Origin, vec![])),
        NeOutcome::Border(_) => {
            let data = leading_constants(&psi)?;
            let upsilon: Vec<Complex64> = data
                .iter()
                .flat_map(|e| e.leading_constants.iter().copied())
                .collect();
            let cone = positive_cone(&upsilon)?;
            Ok((class, cone, upsilon))
        }
    }
}

fn collinear_through_zero(dirs: &[Complex64]) -> bool {
    let Some(reference) = dirs.iter().find(|d| d.norm() > 0.0) else {
        return true;
    };
    dirs.iter()
        .all(|d| (d * reference.conj()).im.abs() <= 1e-9 * d.norm() * reference.norm())
}

/// Aggregate classification: basic flags, shifted Newton class, escape
/// cone, fundamental polygon, constant-leading subclass, and verdict notes.
pub fn classify_operator(t: &DiffOp) -> Result<OperatorReport, InvarianceError> {
    let basic = t.classify_basic();
    let (newton_class, escape_cone, upsilon) = escape_data(t)?;
    let fundamental = if t.leading().degree().unwrap() >= 1 {
        fundamental_polygon(t)?
    } else {
        vec![]
    };
    let subclass = subclass_of(t)?;
    let mut notes: Vec<String> = Vec::new();
    if !basic.nondegenerate {
        notes.push(NOTE_UNBOUNDED.into());
    }
    match newton_class {
        NewtonClass::Defining => notes.push(NOTE_ONLY_PLANE.into()),
        NewtonClass::AlmostDefining => {
            if collinear_through_zero(&upsilon) {
                notes.push(NOTE_ALMOST_COLLINEAR.into());
            } else {
                notes.push(NOTE_ONLY_PLANE.into());
            }
        }
        _ => {}
    }
    if escape_cone == ConeDesc::FullPlane && !notes.iter().any(|n| n == NOTE_ONLY_PLANE) {
        notes.push(NOTE_ONLY_PLANE.into());
    }
    Ok(OperatorReport {
        fuchs_index: t.fuchs_index(),
        nondegenerate: basic.nondegenerate,
        exactly_solvable: basic.exactly_solvable,
        newton_class,
        fundamental_polygon: fundamental,
        escape_cone,
        subclass,
        notes,
    })
}

fn subclass_of(t: &DiffOp) -> Result<Subclass, InvarianceError> {
    let k = t.order();
    if t.leading().degree().unwrap() >= 1 {
        return Ok(Subclass::NotConstantLeading);
    }
    if t.coeffs().iter().all(|q| q.is_constant()) {
        return Ok(Subclass::ConstantCoefficients);
    }
    // shape B: deg Q_(k-1) = 1, deg Q_j <= 1 below, and everything more
    // than two slots under the lowest degree-one coefficient vanishes
    // (slot j_min - 2 itself may carry the last constant; the three-edge
    // normal form puts its bottom term exactly there)
    let deg_of = |j: usize| t.q(j).degree();
    let shape_b = k >= 1
        && deg_of(k - 1) == Some(1)
        && (0..k.saturating_sub(1)).all(|j| deg_of(j).unwrap_or(0) <= 1)
        && {
            let j_min = (0..k).find(|&j| deg_of(j) == Some(1)).unwrap_or(k - 1);
            (0..j_min.saturating_sub(2)).all(|j| t.q(j).is_zero())
        };
    if shape_b {
        let edges = match ne_border(&t.psi_tilde()) {
            NeOutcome::SinglePoint(_) => 0,
            NeOutcome::Border(b) => b.edges.len(),
        };
        return Ok(Subclass::ConstantLeadingShapeB { edges });
    }
    Ok(Subclass::ConstantLeadingOther)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactComplex as EC;
    use crate::parse::{parse_diffop, parse_poly};

    #[test]
    fn fundamental_polygon_fixtures() {
        // Q_k = x^3 + 2x: hull of {0, +/- i sqrt(2)} is a vertical segment
        let t = parse_diffop("(x^3+2x) D3 + x D2 + 1").unwrap();
        let hull = fundamental_polygon(&t).unwrap();
        assert_eq!(hull.len(), 2);
        assert!(hull.iter().all(|z| z.re.abs() < 1e-9));
        let s2 = 2.0_f64.sqrt();
        assert!(hull.iter().any(|z| (z.im - s2).abs() < 1e-9));
        assert!(hull.iter().any(|z| (z.im + s2).abs() < 1e-9));
        // Q_k = x(x-1): segment [0,1]
        let t = parse_diffop("x(x-1) D2 + (2x-1) D1").unwrap();
        let hull = fundamental_polygon(&t).unwrap();
        assert_eq!(hull.len(), 2);
        // Q_k = x: single point
        let t = parse_diffop("x D1 + 1").unwrap();
        assert_eq!(fundamental_polygon(&t).unwrap(), vec![Complex64::ZERO]);
        let t = parse_diffop("D2 + 1").unwrap();
        assert!(matches!(
            fundamental_polygon(&t),
            Err(InvarianceError::ConstantLeadingCoefficient)
        ));
    }

    #[test]
    fn large_disk_euler_family() {
        // T = x d/dx + 2, n = 1: invariant (g zero at -2/3)
        let t = parse_diffop("x D1 + 2").unwrap();
        let d = large_disk_decision(&t, 1).unwrap();
        assert_eq!(d.verdict, DiskVerdict::InvariantForLargeR);
        assert!((d.diagnostics.g_zeros[0] - Complex64::new(-2.0 / 3.0, 0.0)).norm() < 1e-12);
        // Re c < -n/2 escapes
        let t = parse_diffop("x D1 + -3").unwrap();
        let d = large_disk_decision(&t, 1).unwrap();
        assert_eq!(d.verdict, DiskVerdict::NotInvariantForLargeR);
        assert!((d.witnesses[0] - Complex64::new(-1.5, 0.0)).norm() < 1e-12);
        // boundary case Re c = -n/2 exactly: zeros on the circle, closed
        // condition still holds
        let t = parse_diffop("x D1 + -1").unwrap();
        let d = large_disk_decision(&t, 2).unwrap();
        assert_eq!(d.verdict, DiskVerdict::InvariantForLargeR);
        // derivative operator: P_(-1) = n x (1+x)^(n-1), boundary zeros decided
        let t = parse_diffop("D1").unwrap();
        let d = large_disk_decision(&t, 3).unwrap();
        assert_eq!(d.verdict, DiskVerdict::InvariantForLargeR);
    }

    #[test]
    fn large_disk_preconditions() {
        // Euler - 1 kills x, rank drops to 1 on degree-1 polynomials
        let t = parse_diffop("x D1 + -1").unwrap();
        assert!(matches!(
            large_disk_decision(&t, 1),
            Err(InvarianceError::RankOne)
        ));
        // Euler - 3 kills x^3: degenerate for n = 3
        let t = parse_diffop("x D1 + -3").unwrap();
        assert!(matches!(
            large_disk_decision(&t, 3),
            Err(InvarianceError::DegenerateForN)
        ));
        // the worked non-compact example degenerates for n = 3
        let t = parse_diffop("(x^2-x^3) D3 + (x+x^2) D2 + 2x D1 - 6").unwrap();
        assert!(matches!(
            large_disk_decision(&t, 3),
            Err(InvarianceError::DegenerateForN)
        ));
    }

    #[test]
    fn half_plane_advisory_disagrees_on_order_one_case() {
        // T = x d/dx + 2, n = 1: the disk decision says invariant, the half-plane form
        // reports f_0 = 2 + x with zero at -2 (real part < -1/2)
        let t = parse_diffop("x D1 + 2").unwrap();
        let rep = half_plane_advisory(&t, 1).unwrap();
        assert!(rep.advisory);
        assert_eq!(rep.large_disk_verdict, DiskVerdict::InvariantForLargeR);
        assert!((rep.h_zeros[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        assert_eq!(rep.h_verdict.tag, "SomeOutside");
        let r = rep.order_one_ratio.unwrap();
        assert!((r.ratio - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(!r.below_threshold);
    }

    #[test]
    fn beta_probe_detects_factorization() {
        // T = beta n - x D1 with beta = 2, n = 1: Q_1 = -x, Q_0 = 2
        let t = parse_diffop("-x D1 + 2").unwrap();
        let rep = half_plane_advisory(&t, 1).unwrap();
        assert_eq!(rep.beta_candidates.len(), 1);
        assert!((rep.beta_candidates[0].beta - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(rep.beta_candidates[0].re_exceeds_half);
        // Re beta > 1/2 forces escape; the disk decision agrees
        assert_eq!(rep.large_disk_verdict, DiskVerdict::NotInvariantForLargeR);
    }

    #[test]
    fn diagonal_fixtures() {
        // identity on degree 3: (1+x)^3, boundary zeros allowed
        let ones = vec![EC::one(); 4];
        let d = diagonal_disk_check(&ones).unwrap();
        assert!(d.invariant_all_r);
        // Euler on degree 2: 2x(x+1)
        let euler: Vec<EC> = (0..=2).map(EC::from_int).collect();
        let d = diagonal_disk_check(&euler).unwrap();
        assert!(d.invariant_all_r);
        // lambda = (1, 0, 4): 1 + 4x^2, zeros +/- i/2
        let l = vec![EC::from_int(1), EC::zero(), EC::from_int(4)];
        let d = diagonal_disk_check(&l).unwrap();
        assert!(d.invariant_all_r);
        assert!(d.zeros.iter().all(|z| (z.norm() - 0.5).abs() < 1e-12));
        // an escaping eigenvalue
        let l = vec![EC::from_int(5), EC::from_int(1)];
        let d = diagonal_disk_check(&l).unwrap();
        assert!(!d.invariant_all_r);
    }

    #[test]
    fn sampled_disk_fixtures() {
        // derivative operator: Gauss-Lucas
        let t = parse_diffop("D1").unwrap();
        assert_eq!(
            disk_invariance_sampled(&t, 3, Disk::centered(5.0), 16, 16, 1e-9).unwrap(),
            SampledOutcome::VerifiedSampled
        );
        // x d/dx + 2 at any radius
        let t = parse_diffop("x D1 + 2").unwrap();
        assert_eq!(
            disk_invariance_sampled(&t, 1, Disk::centered(1000.0), 32, 32, 1e-9).unwrap(),
            SampledOutcome::VerifiedSampled
        );
        // the non-compact example: root 2y escapes at radius 10
        let t = parse_diffop("(-1/4 x^2 + 1/4 x) D2 + (1/4 x - 1/2) D1 + 1").unwrap();
        match disk_invariance_sampled(&t, 2, Disk::centered(10.0), 16, 16, 1e-9).unwrap() {
            SampledOutcome::Falsified { y, root } => {
                assert!((root - 2.0 * y).norm() < 1e-6);
            }
            v => panic!("expected falsification, got {v:?}"),
        }
    }

    #[test]
    fn min_radius_fixtures() {
        let t = parse_diffop("x D1 + 2").unwrap();
        match min_disk_radius(&t, 1, 100.0, 0.5).unwrap() {
            MinDiskOutcome::Bracket { lo, hi } => {
                assert_eq!(lo, 0.0);
                assert!(hi <= 0.5);
            }
            v => panic!("{v:?}"),
        }
        let t = parse_diffop("(-1/4 x^2 + 1/4 x) D2 + (1/4 x - 1/2) D1 + 1").unwrap();
        assert_eq!(
            min_disk_radius(&t, 2, 1000.0, 1.0).unwrap(),
            MinDiskOutcome::NotFoundBelow(1000.0)
        );
        // roots drift right for T = d/dx - 1
        let t = parse_diffop("D1 - 1").unwrap();
        assert!(matches!(
            min_disk_radius(&t, 1, 50.0, 1.0).unwrap(),
            MinDiskOutcome::NotFoundBelow(_)
        ));
    }

    #[test]
    fn lame_fixtures() {
        let t = parse_diffop("x(x-1) D2 + (2x-1) D1").unwrap();
        let rep = lame_check(&t).unwrap();
        assert!(rep.applies && rep.exact);
        assert_eq!(rep.residues.len(), 2);
        for k in &rep.residues {
            assert!((k - Complex64::ONE).norm() < 1e-12);
        }
        let rep = lame_check(&parse_diffop("x D1 + 1").unwrap()).unwrap();
        assert!(rep.applies);
        assert!((rep.residues[0] - Complex64::ONE).norm() < 1e-12);
        let rep = lame_check(&parse_diffop("x D1 - 1").unwrap()).unwrap();
        assert!(!rep.applies);
        assert!(matches!(
            lame_check(&parse_diffop("x D2 + x D1 + 1").unwrap()),
            Err(InvarianceError::WrongShape)
        ));
        assert!(matches!(
            lame_check(&parse_diffop("x^2 D1 + 1").unwrap()),
            Err(InvarianceError::NonSquareFreeLeading)
        ));
    }

    #[test]
    fn phase_normalization() {
        // (i U, i V) normalizes back to real polynomials
        let u = parse_poly("x^2 - 1").unwrap();
        let v = parse_poly("x").unwrap();
        let iu = u.scale(&EC::i());
        let iv = v.scale(&EC::i());
        let (nu, nv) = normalize_common_phase(&iu, &iv).unwrap();
        assert_eq!(nu, u);
        assert_eq!(nv, v);
        // mismatched phases cannot be repaired
        assert!(normalize_common_phase(&iu, &v).is_none());
    }

    #[test]
    fn shifted_border_pullback() {
        // psi-polygon vertices (0,1)-(2,0) pull back to the truncated
        // symbol's exponents (0,1)-(1,0)
        let t = parse_diffop("D1 - x").unwrap();
        let sb = t.shifted_ne_border();
        assert_eq!(sb.pulled_back_vertices, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn hb_fixtures() {
        // T = d/dx - x: U = y, V = -1
        let u = parse_poly("x").unwrap();
        let v = parse_poly("-1").unwrap();
        let rep = hb_real_line_check(&u, &v).unwrap();
        assert!(rep.preserves_real_line);
        // U = y^2, V = -1: wronskian 2y changes sign
        let u2 = parse_poly("x^2").unwrap();
        let rep = hb_real_line_check(&u2, &v).unwrap();
        assert!(!rep.preserves_real_line);
        assert!(rep.interlacing && !rep.wronskian_nonnegative);
        // V = 0 branch
        let rep = hb_real_line_check(&parse_poly("1").unwrap(), &Poly::zero()).unwrap();
        assert!(rep.preserves_real_line);
    }

    #[test]
    fn constant_coefficient_cones() {
        // d/dx + 1: lambda = -1, cone is the ray toward -1
        let c = constant_coeff_cone(&[EC::one(), EC::one()]).unwrap();
        match c.cone {
            ConeDesc::Ray { direction } => assert!((direction + Complex64::ONE).norm() < 1e-9),
            v => panic!("{v:?}"),
        }
        // d^2 - 1: lambda = +/-1, line
        let c = constant_coeff_cone(&[-EC::one(), EC::zero(), EC::one()]).unwrap();
        assert!(matches!(c.cone, ConeDesc::Line { .. }));
        // d^3 - 1: cube roots of unity, full plane
        let c = constant_coeff_cone(&[-EC::one(), EC::zero(), EC::zero(), EC::one()]).unwrap();
        assert_eq!(c.cone, ConeDesc::FullPlane);
        // pure derivative: all roots zero, cone collapses to the origin
        let c = constant_coeff_cone(&[EC::zero(), EC::one()]).unwrap();
        assert_eq!(c.cone, ConeDesc::Origin);
    }

    #[test]
    fn eigenroot_cloud_fixtures() {
        // Euler + 2: eigenpolynomials are monomials, cloud sits at 0
        let t = parse_diffop("x D1 + 2").unwrap();
        let cloud = eigenroot_cloud(&t, 1, 4).unwrap();
        assert_eq!(cloud.len(), 4);
        assert!(cloud
            .iter()
            .all(|e| e.roots.iter().all(|r| r.norm() < 1e-12)));
        // the cubic-spectrum operator: m <= 2 collide, all m in [3,8] admitted
        let t = parse_diffop("(x^3+2x) D3 + x D2 + 1").unwrap();
        let cloud = eigenroot_cloud(&t, 3, 8).unwrap();
        assert_eq!(cloud.len(), 6);
        let total: usize = cloud.iter().map(|e| e.roots.len()).sum();
        assert_eq!(total, (3..=8).sum::<usize>());
        let cloud = eigenroot_cloud(&t, 0, 2).unwrap();
        assert!(cloud.len() <= 1); // only m = 0 passes the vacuous dominance
    }

    #[test]
    fn lower_bound_fixtures() {
        // Lame case: segment [0,1]
        let t = parse_diffop("x(x-1) D2 + (2x-1) D1").unwrap();
        let region = lower_bound_region(&t).unwrap();
        assert_eq!(region.polygon.len(), 2);
        assert!(region
            .notes
            .iter()
            .any(|n| n.contains("fundamental polygon")));
        // T with Q_0 = x - 5, Q_k = x: hull {0, 5}
        let t = parse_diffop("x D1 + (x - 5)").unwrap();
        let region = lower_bound_region(&t).unwrap();
        assert_eq!(region.polygon.len(), 2);
        assert!(region
            .polygon
            .iter()
            .any(|z| (z - Complex64::new(5.0, 0.0)).norm() < 1e-9));
        // constant coefficients: cone ray, no polygon
        let t = parse_diffop("D1 + 1").unwrap();
        let region = lower_bound_region(&t).unwrap();
        assert!(region.polygon.is_empty());
        assert!(matches!(region.cone, Some(ConeDesc::Ray { .. })));
        assert!(!region.minkowski_sum);
    }

    #[test]
    fn classify_operator_fixtures() {
        // Table 1 row 2: degenerate
        let t = parse_diffop("(x+1) D3 + x^4 D2 + 2x").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert!(!rep.nondegenerate);
        assert!(rep.notes.iter().any(|n| n == NOTE_UNBOUNDED));
        // d/dx - x: subclass B with one edge
        let t = parse_diffop("D1 - x").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.subclass, Subclass::ConstantLeadingShapeB { edges: 1 });
        // two- and three-edge normal forms of the same subclass
        let t = parse_diffop("D3 - x D2 - 2x D1 + 5").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.subclass, Subclass::ConstantLeadingShapeB { edges: 2 });
        let t = parse_diffop("D5 - x D4 - 2x D3 + 3 D2 + 4 D1").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.subclass, Subclass::ConstantLeadingShapeB { edges: 3 });
        // a deeper constant slot leaves the three-subcase shape (and its
        // shifted polygon stops being non-defining)
        let t = parse_diffop("D5 - x D4 - 2x D3 + 4").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.subclass, Subclass::ConstantLeadingOther);
        assert_eq!(rep.newton_class, NewtonClass::AlmostDefining);
        // constant coefficients
        let t = parse_diffop("D2 + 1").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.subclass, Subclass::ConstantCoefficients);
        // d^3 - 1: full-plane cone note
        let t = parse_diffop("D3 - 1").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.escape_cone, ConeDesc::FullPlane);
        assert!(rep.notes.iter().any(|n| n == NOTE_ONLY_PLANE));
        // nondegenerate operator: single-point psi border
        let t = parse_diffop("(x^3+2x) D3 + x D2 + 1").unwrap();
        let rep = classify_operator(&t).unwrap();
        assert_eq!(rep.newton_class, NewtonClass::SinglePoint);
        assert_eq!(rep.escape_cone, ConeDesc::Origin);
        assert!(rep.notes.is_empty());
    }

    #[test]
    fn hull_utilities() {
        let pts = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.2, 0.2),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 3);
        assert_eq!(hull_distance(&hull, Complex64::new(0.1, 0.1)), 0.0);
        assert!((hull_distance(&hull, Complex64::new(2.0, 0.0)) - 1.0).abs() < 1e-12);
        // collinear: extremes only
        let pts = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert_eq!(convex_hull(&pts).len(), 2);
    }
}
