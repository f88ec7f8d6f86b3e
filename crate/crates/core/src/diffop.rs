//! Linear ordinary differential operators `T = sum_j Q_j(x) d^j/dx^j` with
//! polynomial coefficients, and the quantities computed directly from them:
//! application to polynomials, Fuchs indices, symbol polynomials, the
//! `P_l` / `f_l` families, spectra, eigenpolynomials, and the psi/phi
//! factor polynomials that drive the samplers.

use crate::exact::ExactComplex;
use crate::newton::BiPoly;
use crate::poly::{binomial, falling_factorial, falling_factorial_int, Poly, PolyF};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffOpError {
    #[error("all coefficients are zero; not a differential operator")]
    ZeroOperator,
    #[error("operator is not exactly solvable (nonzero Fuchs index)")]
    NotExactlySolvable,
    #[error("eigenvalue collision with degree {0}: eigenpolynomial is not unique")]
    EigenvalueCollision(usize),
    #[error("affine substitution requires a nonzero scale")]
    ZeroScale,
    #[error("index {0} outside the admissible range [{1}, {2}]")]
    IndexOutOfRange(i64, i64, i64),
}

/// `T = Q_0 + Q_1 d/dx + ... + Q_k d^k/dx^k`, with `Q_k` nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<Poly>,
}

/// Result of the degeneracy/solvability classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicClass {
    pub nondegenerate: bool,
    pub exactly_solvable: bool,
}

/// The eigenvalue sequence `lambda_j` = coefficient of `x^j` in `T(x^j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub eigenvalues: Vec<ExactComplex>,
}

impl DiffOp {
    /// Build from `Q_0..Q_k`; trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<Poly>) -> Result<Self, DiffOpError> {
        while coeffs.last().is_some_and(|q| q.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(DiffOpError::ZeroOperator);
        }
        Ok(DiffOp { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `Q_j`, zero when `j` exceeds the order.
    pub fn q(&self, j: usize) -> Poly {
        self.coeffs.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// `T(p) = sum_j Q_j p^(j)`, exact.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        let mut deriv = p.clone();
        for q in &self.coeffs {
            acc = acc.add(&q.mul(&deriv));
            deriv = deriv.derivative();
        }
        acc
    }

    /// Floating-point application, used by samplers and oracles.
    pub fn apply_f(&self, p: &PolyF) -> PolyF {
        let mut acc = PolyF::zero();
        let mut deriv = p.clone();
        for q in &self.coeffs {
            acc = acc.add(&q.to_polyf().mul(&deriv));
            deriv = deriv.derivative();
        }
        acc
    }

    /// Fuchs index `rho_T = max_j (deg Q_j - j)` over nonzero coefficients.
    pub fn fuchs_index(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, q)| q.degree().map(|d| d as i64 - j as i64))
            .max()
            .expect("Q_k nonzero")
    }

    /// `rho_n = max_{0<=j<=n} (deg T(x^j) - j)`, computed by actual
    /// application so that accidental cancellations are respected.
    /// `None` when `T` annihilates every monomial of degree `<= n`.
    pub fn nth_fuchs_index(&self, n: usize) -> Option<i64> {
        (0..=n)
            .filter_map(|j| {
                self.apply(&Poly::monomial(ExactComplex::one(), j))
                    .degree()
                    .map(|d| d as i64 - j as i64)
            })
            .max()
    }

    pub fn classify_basic(&self) -> BasicClass {
        let rho = self.fuchs_index();
        let k = self.order();
        let lead_shift = self.leading().degree().unwrap() as i64 - k as i64;
        BasicClass {
            nondegenerate: lead_shift == rho,
            exactly_solvable: rho == 0,
        }
    }

    /// `G_T(x,y) = T[(1+xy)^n] = sum_j (n)_j Q_j(x) y^j (1+xy)^(n-j)`, exact.
    pub fn symbol_one_plus_xy(&self, n: u32) -> BiPoly {
        let mut terms: Vec<((u32, u32), ExactComplex)> = Vec::new();
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() || j as u32 > n {
                continue;
            }
            let fall = ExactComplex::from_bigint(falling_factorial_int(n as u64, j as u64));
            if fall.is_zero() {
                continue;
            }
            for m in 0..=(n - j as u32) {
                let binom = ExactComplex::from_bigint(binomial((n - j as u32) as u64, m as u64));
                for (i, qc) in q.coeffs().iter().enumerate() {
                    if qc.is_zero() {
                        continue;
                    }
                    let c = &(&fall * &binom) * qc;
                    terms.push(((i as u32 + m, j as u32 + m), c));
                }
            }
        }
        BiPoly::from_terms(terms).expect("symbol of a nonzero operator")
    }

    /// `G_n(x,y) = T((x-y)^n) = sum_j (n)_j Q_j(x) (x-y)^(n-j)`, exact.
    pub fn symbol_x_minus_y(&self, n: u32) -> BiPoly {
        let mut terms: Vec<((u32, u32), ExactComplex)> = Vec::new();
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() || j as u32 > n {
                continue;
            }
            let fall = ExactComplex::from_bigint(falling_factorial_int(n as u64, j as u64));
            if fall.is_zero() {
                continue;
            }
            let pow = n - j as u32;
            for m in 0..=pow {
                let mut c = ExactComplex::from_bigint(binomial(pow as u64, m as u64));
                if m % 2 == 1 {
                    c = -&c;
                }
                for (i, qc) in q.coeffs().iter().enumerate() {
                    if qc.is_zero() {
                        continue;
                    }
                    let coeff = &(&fall * &c) * qc;
                    terms.push(((i as u32 + pow - m, m), coeff));
                }
            }
        }
        BiPoly::from_terms(terms).expect("symbol of a nonzero operator")
    }

    /// Coefficient `a_{l,j}` of `x^(j+l)` in `Q_j`.
    pub fn a_coeff(&self, ell: i64, j: usize) -> ExactComplex {
        let idx = j as i64 + ell;
        if idx < 0 {
            return ExactComplex::zero();
        }
        self.q(j).coeff(idx as usize)
    }

    /// `P_l^n(x) = sum_j (n)_j a_{l,j} x^j (1+x)^(n-j)`.
    pub fn p_ell(&self, n: u32, ell: i64) -> Result<Poly, DiffOpError> {
        self.check_ell_range(n, ell)?;
        let one_plus_x = Poly::from_coeffs(vec![ExactComplex::one(), ExactComplex::one()]);
        let mut acc = Poly::zero();
        for j in 0..=self.order().min(n as usize) {
            let a = self.a_coeff(ell, j);
            if a.is_zero() {
                continue;
            }
            let fall = ExactComplex::from_bigint(falling_factorial_int(n as u64, j as u64));
            let term = one_plus_x
                .pow(n - j as u32)
                .mul_xpow(j)
                .scale(&(&a * &fall));
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `f_l^n(x) = sum_j (n)_j a_{l,j} x^j`.
    pub fn f_ell(&self, n: u32, ell: i64) -> Result<Poly, DiffOpError> {
        self.check_ell_range(n, ell)?;
        let mut out = Vec::new();
        for j in 0..=self.order().min(n as usize) {
            let a = self.a_coeff(ell, j);
            let fall = ExactComplex::from_bigint(falling_factorial_int(n as u64, j as u64));
            out.push(&a * &fall);
        }
        Ok(Poly::from_coeffs(out))
    }

    fn check_ell_range(&self, n: u32, ell: i64) -> Result<(), DiffOpError> {
        let rho = self.nth_fuchs_index(n as usize).unwrap_or(-(n as i64));
        if ell < -(n as i64) || ell > rho {
            return Err(DiffOpError::IndexOutOfRange(ell, -(n as i64), rho));
        }
        Ok(())
    }

    /// Eigenvalues `lambda_0..lambda_n`.
    pub fn spectrum(&self, n: usize) -> Result<Spectrum, DiffOpError> {
        if self.fuchs_index() != 0 {
            return Err(DiffOpError::NotExactlySolvable);
        }
        let eigenvalues = (0..=n)
            .map(|j| self.apply(&Poly::monomial(ExactComplex::one(), j)).coeff(j))
            .collect();
        Ok(Spectrum { eigenvalues })
    }

    /// The monic degree-`n` eigenpolynomial, by back-substitution in the
    /// lower-triangular monomial-basis matrix of `T`.
    pub fn eigenpolynomial(&self, n: usize) -> Result<Poly, DiffOpError> {
        if self.fuchs_index() != 0 {
            return Err(DiffOpError::NotExactlySolvable);
        }
        // column m holds T(x^m)
        let images: Vec<Poly> = (0..=n)
            .map(|m| self.apply(&Poly::monomial(ExactComplex::one(), m)))
            .collect();
        let lambda: Vec<ExactComplex> = images
            .iter()
            .enumerate()
            .map(|(m, im)| im.coeff(m))
            .collect();
        for (j, lj) in lambda.iter().enumerate().take(n) {
            if *lj == lambda[n] {
                return Err(DiffOpError::EigenvalueCollision(j));
            }
        }
        let mut c = vec![ExactComplex::zero(); n + 1];
        c[n] = ExactComplex::one();
        for i in (0..n).rev() {
            let mut s = ExactComplex::zero();
            for m in (i + 1)..=n {
                s = &s + &(&images[m].coeff(i) * &c[m]);
            }
            let denom = &lambda[n] - &lambda[i];
            c[i] = &s / &denom;
        }
        let p = Poly::from_coeffs(c);
        debug_assert_eq!(self.apply(&p), p.scale(&lambda[n]));
        Ok(p)
    }

    /// `psi(x, t, n) = sum_j (n)_j Q_j(x) (x-t)^(k-j)` with real falling
    /// factorials. For integer `n >= k` this is `T((x-t)^n) / (x-t)^(n-k)`;
    /// for real `n` it is the unique polynomial-in-`n` interpolation of that
    /// quotient.
    pub fn psi(&self, t: Complex64, n: f64) -> PolyF {
        let k = self.order();
        let mut powers = vec![PolyF::constant(Complex64::ONE)];
        for _ in 0..k {
            powers.push(powers.last().unwrap().mul_linear(t));
        }
        let mut acc = PolyF::zero();
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let fall = falling_factorial(n, j);
            if fall == 0.0 {
                continue;
            }
            acc = acc.add(&q.to_polyf().mul(&powers[k - j]).scale(fall.into()));
        }
        acc
    }

    /// Two-point factor polynomial:
    /// `phi = sum_j Q_j sum_i C(j,i) (n1)_i (n2)_(j-i) (x-t1)^(k-i) (x-t2)^(k-j+i)`.
    pub fn phi_two_point(&self, t1: Complex64, n1: f64, t2: Complex64, n2: f64) -> PolyF {
        let k = self.order();
        let mut pow1 = vec![PolyF::constant(Complex64::ONE)];
        let mut pow2 = vec![PolyF::constant(Complex64::ONE)];
        for _ in 0..k {
            pow1.push(pow1.last().unwrap().mul_linear(t1));
            pow2.push(pow2.last().unwrap().mul_linear(t2));
        }
        let mut acc = PolyF::zero();
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let mut inner = PolyF::zero();
            for i in 0..=j {
                let c = binomial_f(j, i) * falling_factorial(n1, i) * falling_factorial(n2, j - i);
                if c == 0.0 {
                    continue;
                }
                inner = inner.add(&pow1[k - i].mul(&pow2[k - j + i]).scale(c.into()));
            }
            acc = acc.add(&q.to_polyf().mul(&inner));
        }
        acc
    }

    /// Truncated symbol `G~_T(x,y) = sum_j a_j y^j x^(d_j)` built from the
    /// leading monomials `a_j x^(d_j)` of the nonzero coefficients.
    pub fn truncated_symbol(&self) -> BiPoly {
        let terms = self.coeffs.iter().enumerate().filter_map(|(j, q)| {
            q.degree()
                .map(|d| ((d as u32, j as u32), q.leading().unwrap().clone()))
        });
        BiPoly::from_terms(terms).expect("nonzero operator")
    }

    /// `psi~_T(x,n) = sum_j a_j n^j x^(d_j + k - j)`: the truncated symbol
    /// with the row-`j` exponent shifted by `k - j`.
    pub fn psi_tilde(&self) -> BiPoly {
        let k = self.order();
        let terms = self.coeffs.iter().enumerate().filter_map(|(j, q)| {
            q.degree()
                .map(|d| (((d + k - j) as u32, j as u32), q.leading().unwrap().clone()))
        });
        BiPoly::from_terms(terms).expect("nonzero operator")
    }

    /// Rewrite `T` in the variable `X` where `x = a X + b`:
    /// coefficients become `Q_j(aX + b) a^(-j)`.
    pub fn affine_substitute(
        &self,
        a: &ExactComplex,
        b: &ExactComplex,
    ) -> Result<DiffOp, DiffOpError> {
        let a_inv = a.recip().ok_or(DiffOpError::ZeroScale)?;
        let mut scale = ExactComplex::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for q in &self.coeffs {
            out.push(q.compose_affine(a, b).scale(&scale));
            scale = &scale * &a_inv;
        }
        DiffOp::new(out)
    }

    /// Coefficient strings lowest order first ("array of coefficient
    /// strings" wire format).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|q| q.to_string()).collect()
    }

    /// Northeastern border of the shifted polygon: the border of the
    /// psi-truncation, together with its preimage under the exponent map
    /// `A` (the shifted border of the truncated symbol's polygon).
    pub fn shifted_ne_border(&self) -> ShiftedBorder {
        let psi = self.psi_tilde();
        let outcome = crate::newton::ne_border(&psi);
        let vertices = match &outcome {
            crate::newton::NeOutcome::SinglePoint(p) => vec![*p],
            crate::newton::NeOutcome::Border(b) => b.vertices.clone(),
        };
        let pulled_back = crate::newton::affine_map_a_inverse(&vertices, self.order() as i64);
        ShiftedBorder {
            psi_border: outcome,
            pulled_back_vertices: pulled_back,
        }
    }
}

/// Border of the psi-polygon plus its preimage in symbol coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedBorder {
    pub psi_border: crate::newton::NeOutcome,
    pub pulled_back_vertices: Vec<(i64, i64)>,
}

// Wire format: array of coefficient strings, lowest order first.
impl serde::Serialize for DiffOp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(serializer)
    }
}

fn binomial_f(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for m in 0..k {
        acc = acc * (n - m) as f64 / (m + 1) as f64;
    }
    acc
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, q) in self.coeffs.iter().enumerate().rev() {
            if q.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let nterms = q.coeffs().iter().filter(|c| !c.is_zero()).count();
            let text = q.to_string();
            if j == 0 {
                write!(f, "{text}")?;
            } else {
                if nterms > 1 {
                    write!(f, "({text})")?;
                } else {
                    write!(f, "{text}")?;
                }
                write!(f, " D{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
