//! Newton polygons of sparse bivariate polynomials: northeastern borders,
//! characteristic exponents, leading constants, border classification, the
//! exponent map `A`, slope conversion, and positive cones of directions.

use crate::exact::ExactComplex;
use crate::poly::{binomial, Poly, PolyF};
use crate::roots::{exact_roots, sort_roots, RootsError};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("bivariate polynomial has no terms")]
    EmptyPolynomial,
    #[error("northeastern border is a single point; no edges to analyze")]
    SinglePointBorder,
    #[error("direction list is empty")]
    EmptyInput,
    #[error("slope conversion has a pole at slope 1")]
    PoleAtOne,
    #[error("inverse slope conversion has a pole at -1")]
    PoleAtMinusOne,
    #[error("leading u-coefficient vanishes at w = {0}; pick a larger w")]
    DegenerateAtW(f64),
    #[error("vertex list is not a valid northeastern border: {0}")]
    InvalidBorder(String),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

/// Sparse bivariate polynomial `sum a_(i,j) u^i v^j` with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), ExactComplex>,
}

impl BiPoly {
    pub fn from_terms<I>(terms: I) -> Result<Self, NewtonError>
    where
        I: IntoIterator<Item = ((u32, u32), ExactComplex)>,
    {
        let mut map: BTreeMap<(u32, u32), ExactComplex> = BTreeMap::new();
        for (key, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(key).or_insert_with(ExactComplex::zero);
            *entry = &*entry + &c;
            if entry.is_zero() {
                map.remove(&key);
            }
        }
        if map.is_empty() {
            return Err(NewtonError::EmptyPolynomial);
        }
        Ok(BiPoly { terms: map })
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), ExactComplex> {
        &self.terms
    }

    pub fn u_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap()
    }

    /// Coefficient of `u^m` as a polynomial in `v`.
    pub fn u_coeff_poly(&self, m: u32) -> Poly {
        let jmax = self
            .terms
            .keys()
            .filter(|&&(i, _)| i == m)
            .map(|&(_, j)| j)
            .max();
        let Some(jmax) = jmax else {
            return Poly::zero();
        };
        let mut coeffs = vec![ExactComplex::zero(); jmax as usize + 1];
        for (&(i, j), c) in &self.terms {
            if i == m {
                coeffs[j as usize] = c.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Substitute `v = w`: the resulting univariate polynomial in `u`.
    pub fn eval_v(&self, w: Complex64) -> PolyF {
        let mut coeffs = vec![Complex64::ZERO; self.u_degree() as usize + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[i as usize] += c.to_complex64() * w.powu(j);
        }
        PolyF::from_coeffs(coeffs)
    }

    /// `B(u + alpha, v + beta)`, exact.
    pub fn translate(&self, alpha: &ExactComplex, beta: &ExactComplex) -> BiPoly {
        let mut out: Vec<((u32, u32), ExactComplex)> = Vec::new();
        for (&(i, j), c) in &self.terms {
            // (u+alpha)^i (v+beta)^j expanded by binomials
            for a in 0..=i {
                for b in 0..=j {
                    let mut coeff = c.clone();
                    coeff = &coeff
                        * &ExactComplex::from_bigint(
                            binomial(i as u64, a as u64) * binomial(j as u64, b as u64),
                        );
                    for _ in 0..(i - a) {
                        coeff = &coeff * alpha;
                    }
                    for _ in 0..(j - b) {
                        coeff = &coeff * beta;
                    }
                    out.push(((a, b), coeff));
                }
            }
        }
        BiPoly::from_terms(out).expect("translation preserves nonzeroness")
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms
            .keys()
            .map(|&(i, j)| (i as i64, j as i64))
            .collect()
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_real() || c.re().is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})")?;
            }
            if i > 0 {
                write!(f, " u^{i}")?;
            }
            if j > 0 {
                write!(f, " v^{j}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One edge of a northeastern border. The slope is `-alpha/beta` with
/// `alpha, beta` coprime and positive; `integer_length` counts the lattice
/// points on the closed edge (a primitive segment has integer length 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeGeom {
    pub start: (i64, i64),
    pub end: (i64, i64),
    pub alpha: i64,
    pub beta: i64,
    pub integer_length: i64,
}

impl EdgeGeom {
    fn from_endpoints(start: (i64, i64), end: (i64, i64)) -> Self {
        let di = end.0 - start.0;
        let dj = start.1 - end.1;
        debug_assert!(di > 0 && dj > 0);
        let g = gcd_i64(di, dj);
        EdgeGeom {
            start,
            end,
            alpha: dj / g,
            beta: di / g,
            integer_length: g + 1,
        }
    }

    pub fn slope(&self) -> Rational64 {
        -Rational64::new(self.alpha, self.beta)
    }

    /// Projection length onto the u-axis.
    pub fn u_projection(&self) -> i64 {
        self.end.0 - self.start.0
    }

    fn contains(&self, p: (i64, i64)) -> bool {
        let (x1, y1) = self.start;
        let (x2, y2) = self.end;
        if p.0 < x1 || p.0 > x2 {
            return false;
        }
        (x2 - x1) * (p.1 - y1) - (p.0 - x1) * (y2 - y1) == 0
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The northeastern border: hull vertices from the northern vertex `V_n`
/// to the eastern vertex `V_e`, edges of negative slope with strictly
/// increasing absolute slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NEBorder {
    pub vertices: Vec<(i64, i64)>,
    pub edges: Vec<EdgeGeom>,
}

/// Outcome of the border computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeOutcome {
    SinglePoint((i64, i64)),
    Border(NEBorder),
}

impl NeOutcome {
    pub fn border(&self) -> Option<&NEBorder> {
        match self {
            NeOutcome::Border(b) => Some(b),
            NeOutcome::SinglePoint(_) => None,
        }
    }
}

/// Northeastern border of the Newton polygon of `B`.
pub fn ne_border(b: &BiPoly) -> NeOutcome {
    ne_border_of_points(&b.support()).expect("support of a valid BiPoly")
}

/// Border of an arbitrary nonempty exponent set.
pub fn ne_border_of_points(points: &[(i64, i64)]) -> Result<NeOutcome, NewtonError> {
    if points.is_empty() {
        return Err(NewtonError::EmptyPolynomial);
    }
    let v_n = *points.iter().max_by_key(|&&(i, j)| (j, i)).unwrap();
    let v_e = *points.iter().max_by_key(|&&(i, j)| (i, j)).unwrap();
    if v_n == v_e {
        return Ok(NeOutcome::SinglePoint(v_n));
    }
    // upper hull, then the part from V_n to V_e
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let start = hull
        .iter()
        .position(|&p| p == v_n)
        .expect("V_n on upper hull");
    let vertices: Vec<(i64, i64)> = hull[start..].to_vec();
    debug_assert_eq!(*vertices.last().unwrap(), v_e);
    let edges = vertices
        .windows(2)
        .map(|w| EdgeGeom::from_endpoints(w[0], w[1]))
        .collect();
    Ok(NeOutcome::Border(NEBorder { vertices, edges }))
}

/// Edge data with the restriction rewritten in the leading constant `eps`:
/// on an edge of slope `-alpha/beta`, substituting `u = eps w^(alpha/beta)`
/// turns the edge monomials into `w^c * E(eps)`.
#[derive(Debug, Clone)]
pub struct EdgeData {
    pub geom: EdgeGeom,
    pub edge_poly: Poly,
    pub leading_constants: Vec<Complex64>,
}

/// Per-edge leading constants of `B` (the union over edges is `Upsilon_B`).
pub fn leading_constants(b: &BiPoly) -> Result<Vec<EdgeData>, NewtonError> {
    let border = match ne_border(b) {
        NeOutcome::SinglePoint(_) => return Err(NewtonError::SinglePointBorder),
        NeOutcome::Border(border) => border,
    };
    border
        .edges
        .iter()
        .map(|geom| {
            let mut coeffs = vec![ExactComplex::zero(); geom.end.0 as usize + 1];
            for (&(i, j), c) in b.terms() {
                if geom.contains((i as i64, j as i64)) {
                    coeffs[i as usize] = c.clone();
                }
            }
            let edge_poly = Poly::from_coeffs(coeffs);
            // nonzero roots only: deflate the power of eps at the low end
            let low = edge_poly
                .coeffs()
                .iter()
                .take_while(|c| c.is_zero())
                .count();
            let reduced = Poly::from_coeffs(edge_poly.coeffs()[low..].to_vec());
            let mut leading_constants = if reduced.is_constant() {
                vec![]
            } else {
                exact_roots(&reduced, 1e-12)?
            };
            sort_roots(&mut leading_constants);
            Ok(EdgeData {
                geom: geom.clone(),
                edge_poly,
                leading_constants,
            })
        })
        .collect()
}

/// Degree of the escaping divisor: length of the projection of the border
/// onto the u-axis.
pub fn u_infty_degree(b: &BiPoly) -> i64 {
    match ne_border(b) {
        NeOutcome::SinglePoint(_) => 0,
        NeOutcome::Border(border) => {
            border.vertices.last().unwrap().0 - border.vertices.first().unwrap().0
        }
    }
}

/// Border classes of Newton polygons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NewtonClass {
    Defining,
    AlmostDefining,
    NonDefining,
    SinglePoint,
}

impl fmt::Display for NewtonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NewtonClass::Defining => "Defining",
            NewtonClass::AlmostDefining => "AlmostDefining",
            NewtonClass::NonDefining => "NonDefining",
            NewtonClass::SinglePoint => "SinglePoint",
        };
        write!(f, "{s}")
    }
}

/// Defining / almost defining / non-defining split of a border.
pub fn classify_ne(outcome: &NeOutcome) -> NewtonClass {
    let border = match outcome {
        NeOutcome::SinglePoint(_) => return NewtonClass::SinglePoint,
        NeOutcome::Border(b) => b,
    };
    if border.edges.iter().any(|e| e.beta >= 3) {
        return NewtonClass::Defining;
    }
    let half: Vec<&EdgeGeom> = border.edges.iter().filter(|e| e.beta == 2).collect();
    if half.iter().any(|e| e.integer_length > 2) || half.len() >= 2 {
        return NewtonClass::AlmostDefining;
    }
    NewtonClass::NonDefining
}

/// Classify a border given directly as its vertex list (north to east).
pub fn classify_vertices(vertices: &[(i64, i64)]) -> Result<NewtonClass, NewtonError> {
    if vertices.is_empty() {
        return Err(NewtonError::InvalidBorder("empty vertex list".into()));
    }
    if vertices.len() == 1 {
        return Ok(NewtonClass::SinglePoint);
    }
    let mut edges = Vec::new();
    for w in vertices.windows(2) {
        if w[1].0 <= w[0].0 || w[1].1 >= w[0].1 {
            return Err(NewtonError::InvalidBorder(format!(
                "consecutive vertices {:?} -> {:?} do not step southeast",
                w[0], w[1]
            )));
        }
        edges.push(EdgeGeom::from_endpoints(w[0], w[1]));
    }
    for w in edges.windows(2) {
        // |slope| strictly increasing: alpha1/beta1 < alpha2/beta2
        if w[0].alpha * w[1].beta >= w[1].alpha * w[0].beta {
            return Err(NewtonError::InvalidBorder(
                "absolute slopes must strictly increase".into(),
            ));
        }
    }
    Ok(classify_ne(&NeOutcome::Border(NEBorder {
        vertices: vertices.to_vec(),
        edges,
    })))
}

/// The exponent map `A: (i,j) -> (i + k - j, j)` taking the truncated
/// symbol's Newton polygon to the psi-polygon.
pub fn affine_map_a(points: &[(i64, i64)], k: i64) -> Vec<(i64, i64)> {
    points.iter().map(|&(i, j)| (i + k - j, j)).collect()
}

/// Inverse of [`affine_map_a`].
pub fn affine_map_a_inverse(points: &[(i64, i64)], k: i64) -> Vec<(i64, i64)> {
    points.iter().map(|&(i, j)| (i - k + j, j)).collect()
}

/// Slope conversion under `A`: `asl = sl / (1 - sl)`.
pub fn slope_to_asl(sl: Rational64) -> Result<Rational64, NewtonError> {
    if sl == Rational64::one() {
        return Err(NewtonError::PoleAtOne);
    }
    Ok(sl / (Rational64::one() - sl))
}

/// Inverse conversion: `sl = asl / (1 + asl)`.
pub fn asl_to_slope(asl: Rational64) -> Result<Rational64, NewtonError> {
    if asl == -Rational64::one() {
        return Err(NewtonError::PoleAtMinusOne);
    }
    Ok(asl / (Rational64::one() + asl))
}

/// Positive cone generated by a set of directions in the plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ConeDesc {
    FullPlane,
    HalfPlane { normal: Complex64 },
    Sector { from: Complex64, to: Complex64 },
    Line { direction: Complex64 },
    Ray { direction: Complex64 },
    Origin,
}

const ANGLE_TOL: f64 = 1e-9;

/// Classify the positive hull `{ sum alpha_i u_i : alpha_i >= 0 }` of the
/// given nonzero directions.
pub fn positive_cone(dirs: &[Complex64]) -> Result<ConeDesc, NewtonError> {
    let mut angles: Vec<f64> = dirs
        .iter()
        .filter(|d| d.norm() > 0.0)
        .map(|d| {
            let a = d.arg();
            if a < 0.0 {
                a + 2.0 * std::f64::consts::PI
            } else {
                a
            }
        })
        .collect();
    if angles.is_empty() {
        return Err(NewtonError::EmptyInput);
    }
    angles.sort_by(f64::total_cmp);
    // dedupe within tolerance, folding 2pi onto 0
    let tau = 2.0 * std::f64::consts::PI;
    let mut unique: Vec<f64> = Vec::new();
    for a in angles {
        let a = if tau - a < ANGLE_TOL { 0.0 } else { a };
        if !unique.iter().any(|u| (u - a).abs() < ANGLE_TOL) {
            unique.push(a);
        }
    }
    unique.sort_by(f64::total_cmp);
    let dir = |theta: f64| Complex64::from_polar(1.0, theta);
    if unique.len() == 1 {
        return Ok(ConeDesc::Ray {
            direction: dir(unique[0]),
        });
    }
    let pi = std::f64::consts::PI;
    if unique.len() == 2 && ((unique[1] - unique[0]) - pi).abs() < ANGLE_TOL {
        return Ok(ConeDesc::Line {
            direction: dir(unique[0]),
        });
    }
    // angular gaps between consecutive directions, cyclically
    let mut max_gap = 0.0_f64;
    let mut gap_start = 0usize;
    for i in 0..unique.len() {
        let next = unique[(i + 1) % unique.len()];
        let gap = if i + 1 == unique.len() {
            next + tau - unique[i]
        } else {
            next - unique[i]
        };
        if gap > max_gap {
            max_gap = gap;
            gap_start = i;
        }
    }
    let theta_a = unique[gap_start];
    let theta_b = unique[(gap_start + 1) % unique.len()];
    if max_gap < pi - ANGLE_TOL {
        return Ok(ConeDesc::FullPlane);
    }
    if (max_gap - pi).abs() <= ANGLE_TOL {
        // covered arc spans [theta_b, theta_a + tau], length pi
        return Ok(ConeDesc::HalfPlane {
            normal: dir(theta_b + pi / 2.0),
        });
    }
    Ok(ConeDesc::Sector {
        from: dir(theta_b),
        to: dir(theta_a),
    })
}

/// Predicted escaping roots `{ eps * w^(alpha/beta) }` of `B(., w)`.
pub fn asymptotic_roots(b: &BiPoly, w: f64) -> Result<Vec<Complex64>, NewtonError> {
    let lead = b.u_coeff_poly(b.u_degree()).to_polyf();
    let lead_val = lead.eval(Complex64::new(w, 0.0));
    let scale = lead.max_coeff_norm() * (1.0 + w.powi(lead.degree().unwrap_or(0) as i32));
    if lead_val.norm() <= 1e-12 * scale {
        return Err(NewtonError::DegenerateAtW(w));
    }
    let border = match ne_border(b) {
        NeOutcome::SinglePoint(_) => return Ok(vec![]),
        NeOutcome::Border(_) => leading_constants(b)?,
    };
    let mut out = Vec::new();
    for edge in &border {
        let growth = w.powf(edge.geom.alpha as f64 / edge.geom.beta as f64);
        for eps in &edge.leading_constants {
            out.push(eps * growth);
        }
    }
    Ok(out)
}
