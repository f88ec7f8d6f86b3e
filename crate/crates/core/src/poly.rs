//! Dense univariate polynomials over exact Gaussian rationals (`Poly`) and
//! over `f64` complex numbers (`PolyF`).
//!
//! Coefficients are stored constant term first. The empty coefficient list
//! encodes the zero polynomial; otherwise the top coefficient is nonzero.

use crate::exact::ExactComplex;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division left a nonzero remainder")]
    InexactDivision,
}

/// Polynomial with exact Gaussian-rational coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    coeffs: Vec<ExactComplex>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(ExactComplex::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![ExactComplex::zero(), ExactComplex::one()])
    }

    pub fn constant(c: ExactComplex) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: ExactComplex, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactComplex::zero(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero when out of range).
    pub fn coeff(&self, k: usize) -> ExactComplex {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ExactComplex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactComplex> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &ExactComplex) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ExactComplex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// Multiply by `x^k`.
    pub fn mul_xpow(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactComplex::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_rational(&BigRational::from_integer(BigInt::from(k))))
            .collect();
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, z: &ExactComplex) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// `p(a x + b)`, exact.
    pub fn compose_affine(&self, a: &ExactComplex, b: &ExactComplex) -> Poly {
        let inner = Poly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Monic product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[ExactComplex]) -> Poly {
        let mut acc = Poly::one();
        for r in roots {
            acc = acc.mul(&Poly::from_coeffs(vec![-r, ExactComplex::one()]));
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// The reversed-conjugate polynomial `p†(x) = x^d conj(p)(1/x)`:
    /// its roots are the unit-circle inversions of the roots of `p`.
    pub fn reverse_conj(&self) -> Poly {
        let mut v: Vec<ExactComplex> = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Poly { coeffs: v }
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.leading().unwrap().recip().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![ExactComplex::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * d);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact quotient; error when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip().unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor over the field Q(i).
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            // normalizing each remainder keeps the rational coefficients small
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Square-free decomposition `p = lead * prod g_i^i` with monic,
    /// pairwise-coprime, square-free `g_i` (Yun's algorithm).
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        if self.is_constant() {
            return vec![];
        }
        let p = self.monic();
        let dp = p.derivative();
        let a = p.gcd(&dp).expect("nonzero input");
        let mut b = p.div_exact(&a).unwrap();
        let mut c = dp.div_exact(&a).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut out = vec![];
        let mut mult = 1usize;
        while !b.is_constant() {
            let g = b.gcd(&d).expect("nonzero");
            if g.degree() > Some(0) {
                out.push((g.clone(), mult));
            }
            b = b.div_exact(&g).unwrap();
            c = d.div_exact(&g).unwrap();
            d = c.sub(&b.derivative());
            mult += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors (radical).
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative()).expect("nonzero input");
        self.div_exact(&g).unwrap().monic()
    }

    pub fn to_polyf(&self) -> PolyF {
        PolyF::from_coeffs(self.coeffs.iter().map(|c| c.to_complex64()).collect())
    }

    /// Real parts as rationals; `None` when any coefficient has an
    /// imaginary component.
    pub fn real_coeffs(&self) -> Option<Vec<BigRational>> {
        if !self.is_real() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.re().clone()).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign_neg, mag) = display_split(c);
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let needs_coeff = k == 0 || mag != ExactComplex::one();
            if needs_coeff {
                if mag.is_real() || mag.re().is_zero() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            if k >= 1 {
                if needs_coeff {
                    write!(f, " ")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Pull a leading minus out of a scalar for display purposes.
fn display_split(c: &ExactComplex) -> (bool, ExactComplex) {
    let neg = if c.re().is_zero() {
        c.im().is_negative()
    } else {
        c.re().is_negative()
    };
    if neg {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Polynomial over f64 complex numbers, constant term first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyF {
    coeffs: Vec<Complex64>,
}

impl PolyF {
    pub fn from_coeffs(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        PolyF { coeffs }
    }

    pub fn zero() -> Self {
        PolyF { coeffs: vec![] }
    }

    pub fn constant(c: Complex64) -> Self {
        PolyF::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, rhs: &PolyF) -> PolyF {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyF::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn scale(&self, s: Complex64) -> PolyF {
        PolyF::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, rhs: &PolyF) -> PolyF {
        if self.is_zero() || rhs.is_zero() {
            return PolyF::zero();
        }
        let mut out = vec![Complex64::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyF::from_coeffs(out)
    }

    /// Multiply by `(x - t)`.
    pub fn mul_linear(&self, t: Complex64) -> PolyF {
        self.mul(&PolyF::from_coeffs(vec![-t, Complex64::ONE]))
    }

    pub fn derivative(&self) -> PolyF {
        if self.coeffs.len() <= 1 {
            return PolyF::zero();
        }
        PolyF::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn monic(&self) -> PolyF {
        match self.leading() {
            None => PolyF::zero(),
            Some(l) => self.scale(1.0 / l),
        }
    }

    pub fn from_roots(roots: &[Complex64]) -> PolyF {
        let mut acc = PolyF::constant(Complex64::ONE);
        for &r in roots {
            acc = acc.mul_linear(r);
        }
        acc
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Falling factorial `(n)_j = n (n-1) ... (n-j+1)` for real `n`; 1 for `j = 0`.
pub fn falling_factorial(n: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, m| acc * (n - m as f64))
}

/// Exact falling factorial for integer `n >= 0`.
pub fn falling_factorial_int(n: u64, j: u64) -> BigInt {
    let mut acc = BigInt::one();
    for m in 0..j {
        if m >= n {
            return BigInt::zero();
        }
        acc *= BigInt::from(n - m);
    }
    acc
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for m in 0..k {
        num *= BigInt::from(n - m);
        den *= BigInt::from(m + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactComplex as EC;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| EC::from_int(c)).collect())
    }

    #[test]
    fn derivative_power_rule() {
        // d/dx x^3 = 3x^2
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        assert!(Poly::zero().derivative().is_zero());
    }

    #[test]
    fn multiply_difference_of_squares() {
        assert_eq!(p(&[-1, 1]).mul(&p(&[1, 1])), p(&[-1, 0, 1]));
    }

    #[test]
    fn affine_composition() {
        // x^2 at x -> 2x+1 gives 4x^2+4x+1
        let q = p(&[0, 0, 1]).compose_affine(&EC::from_int(2), &EC::from_int(1));
        assert_eq!(q, p(&[1, 4, 4]));
    }

    #[test]
    fn gcd_fixtures() {
        // gcd(x^2-1, x-1) = x-1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        // coprime pair
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[2, 1])).unwrap(), Poly::one());
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Err(PolyError::BothZero));
    }

    #[test]
    fn gcd_shared_factors() {
        // gcd((1+x)^2 (2+3x), (1+x)(2+3x)) = (1+x)(x+2/3), monic
        let a = p(&[1, 1]).pow(2).mul(&p(&[2, 3]));
        let b = p(&[1, 1]).mul(&p(&[2, 3]));
        let g = a.gcd(&b).unwrap();
        let expected = p(&[1, 1]).mul(&Poly::from_coeffs(vec![EC::from_ratio(2, 3), EC::one()]));
        assert_eq!(g, expected);
        assert!(a.div_exact(&g).is_ok());
        assert!(b.div_exact(&g).is_ok());
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5.0, 3), 60.0);
        assert_eq!(falling_factorial(3.5, 2), 8.75);
        assert_eq!(falling_factorial(2.0, 3), 0.0);
        assert_eq!(falling_factorial(7.0, 0), 1.0);
        assert_eq!(falling_factorial_int(5, 3), BigInt::from(60));
        assert_eq!(binomial(6, 2), BigInt::from(15));
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // (x-1)^2 (x+2)^3 x
        let q = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[0, 1]));
        let dec = q.squarefree_decomposition();
        let mut mults: Vec<(usize, usize)> =
            dec.iter().map(|(g, m)| (g.degree().unwrap(), *m)).collect();
        mults.sort();
        assert_eq!(mults, vec![(1, 1), (1, 2), (1, 3)]);
        // product reconstructs the monic input
        let mut rec = Poly::one();
        for (g, m) in &dec {
            rec = rec.mul(&g.pow(*m as u32));
        }
        assert_eq!(rec, q.monic());
    }

    #[test]
    fn display_roundtrip_shapes() {
        let q = Poly::from_coeffs(vec![
            EC::from_ratio(3, 4),
            EC::from_parts(0, 1),
            EC::from_parts(1, 2),
        ]);
        assert_eq!(q.to_string(), "(1+2i) x^2 + 1i x + 3/4");
    }
}
