//! Dense polynomials and truncated power series over exact rationals.
//!
//! Coefficients are stored in ascending powers: index `i` holds the
//! coefficient of `s^i`. The zero polynomial is the empty sequence, so
//! degenerate-case tests are structural rather than numeric.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{int, sign, to_f64, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// Series division needs a unit constant term in the denominator.
    #[error("series division requires a nonzero constant term in the denominator")]
    ZeroConstantDenominator,
    /// Polynomial division by the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Polynomial with exact rational coefficients, ascending powers.
///
/// Invariant: the last stored coefficient is nonzero; the zero polynomial
/// stores nothing.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zeros to restore the invariant.
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// Convenience constructor from small integers, ascending powers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `c * s^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `s^i`, zero-extended beyond the stored range.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient, or `None` if zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `s^k`; callers must ensure the valuation allows it.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.valuation().is_none_or(|v| v >= k));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Coefficient sequence reversed (degree-mirror), trimmed.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Exact evaluation at a rational point via Horner's scheme.
    pub fn eval_rational(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Floating-point evaluation at a complex point via Horner's scheme.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + to_f64(c);
        }
        acc
    }

    /// Euclidean division: returns `(q, r)` with `self = q*d + r`,
    /// `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for i in 0..=dd {
                let t = &d.coeffs[i] * &factor;
                rem[k + i] -= t;
            }
            // The leading term cancels exactly.
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) && rem.len() > k {
                rem.pop();
            }
            quo[k] = factor;
        }
        Ok((Polynomial::new(quo), Polynomial::new(rem)))
    }

    /// Monic greatest common divisor by the Euclidean remainder sequence.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let (mut p, mut q) = (a.clone(), b.clone());
        while !q.is_zero() {
            let r = p.div_rem(&q).expect("nonzero divisor").1;
            p = q;
            q = r;
        }
        match p.leading() {
            Some(l) => {
                let inv = Scalar::one() / l;
                p.scale(&inv)
            }
            None => p,
        }
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free_part(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = Self::gcd(self, &self.derivative());
        self.div_rem(&g).expect("gcd divides").0
    }

    /// Square-free decomposition (Yun): returns `(factor, multiplicity)`
    /// pairs with distinct roots per factor, multiplicities ascending.
    pub fn square_free_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let dp = self.derivative();
        let mut a = Self::gcd(self, &dp);
        let mut b = self.div_rem(&a).unwrap().0;
        let mut c = dp.div_rem(&a).unwrap().0;
        let mut d = &c - &b.derivative();
        let mut mult = 1usize;
        loop {
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            a = Self::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            b = b.div_rem(&a).unwrap().0;
            c = d.div_rem(&a).unwrap().0;
            d = &c - &b.derivative();
            mult += 1;
        }
        out
    }

    /// Splits `p(jω)` into `re(u) + jω·od(u)` with `u = ω²`.
    ///
    /// `re(u) = Σ p_{2i}(−1)^i u^i` and `od(u) = Σ p_{2i+1}(−1)^i u^i`.
    pub fn complex_axis_split(&self) -> (Polynomial, Polynomial) {
        let mut re = Vec::new();
        let mut od = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let slot = if i % 2 == 0 { &mut re } else { &mut od };
            let j = i / 2;
            if slot.len() <= j {
                slot.resize(j + 1, Scalar::zero());
            }
            slot[j] = if j % 2 == 0 { c.clone() } else { -c.clone() };
        }
        (Polynomial::new(re), Polynomial::new(od))
    }

    /// `|p(jω)|²` as a polynomial in `u = ω²`.
    pub fn modulus_sq_poly(&self) -> Polynomial {
        let (re, od) = self.complex_axis_split();
        &(&re * &re) + &(&od * &od).mul_monomial(1)
    }

    /// `self * s^k`.
    pub fn mul_monomial(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Integer-coefficient polynomial with the same sign everywhere:
    /// clears denominators and divides by the content's absolute value.
    pub fn sign_normalized(&self) -> Polynomial {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return Polynomial::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Polynomial {
            coeffs: ints
                .into_iter()
                .map(|c| Scalar::from_integer(c / &gcd))
                .collect(),
        }
    }

    /// Positive content: gcd of coefficient numerators over lcm of their
    /// denominators, so `self / content` is a primitive integer polynomial.
    /// The zero polynomial reports content 1.
    pub fn content(&self) -> Scalar {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return Scalar::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Scalar::new(num_gcd, den_lcm)
    }

    /// Cauchy bound: every real root has absolute value below the result.
    pub fn root_bound(&self) -> Scalar {
        match self.leading() {
            None => Scalar::one(),
            Some(lead) => {
                let mut m = Scalar::zero();
                for c in &self.coeffs[..self.coeffs.len() - 1] {
                    let r = (c / lead).abs();
                    if r > m {
                        m = r;
                    }
                }
                m + Scalar::one()
            }
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    /// Ascending-power rendering, e.g. `1 + 2s + 6s^2 + 2s^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if sign(c) < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign(c) < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", crate::scalar::format_scalar(&mag))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}s", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}s^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Truncated power series: exactly `order + 1` coefficients, ascending.
/// Coefficients beyond the truncation order are undefined, never assumed zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least order 0");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }
}

/// Taylor coefficients of `num/den` at `s = 0` up to `order`, by long
/// division of power series.
///
/// Errors with [`PolyError::ZeroConstantDenominator`] when `den(0) = 0`.
pub fn series_div(num: &Polynomial, den: &Polynomial, order: usize) -> Result<PowerSeries, PolyError> {
    let b0 = den.coeff(0);
    if b0.is_zero() {
        return Err(PolyError::ZeroConstantDenominator);
    }
    let mut c: Vec<Scalar> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.coeff(k);
        for j in 1..=k {
            acc -= den.coeff(j) * &c[k - j];
        }
        c.push(acc / &b0);
    }
    Ok(PowerSeries::new(c))
}

/// Numerator of `Im[num(jω)·conj(den(jω))]` with the odd ω factored out:
/// returns `Q(u)` such that the imaginary part equals `ω·Q(ω²)`.
///
/// `num/den` is real on the whole imaginary axis iff `Q` is the zero
/// polynomial.
pub fn imag_part_poly(num: &Polynomial, den: &Polynomial) -> Polynomial {
    let (ae, ao) = num.complex_axis_split();
    let (be, bo) = den.complex_axis_split();
    &(&ao * &be) - &(&ae * &bo)
}

/// `Re[num(jω)·conj(den(jω))]` as a polynomial `P(u)`, `u = ω²`.
pub fn real_part_poly(num: &Polynomial, den: &Polynomial) -> Polynomial {
    let (ae, ao) = num.complex_axis_split();
    let (be, bo) = den.complex_axis_split();
    &(&ae * &be) + &(&ao * &bo).mul_monomial(1)
}
