//! Transfer-function data model: construction, parsing, dualization, and
//! endpoint summaries.
//!
//! A transfer function is stored as `gain / s^origin_poles * num(s)/den(s)`
//! where `num` and `den` have nonzero constant and leading coefficients.
//! Construction enforces this by factoring common powers of `s` out of the
//! polynomials and into `origin_poles`, so callers never pre-normalize.

mod parse;

pub use parse::ParseError;

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::scalar::{format_scalar, int, parse_scalar, ratio, sign, to_f64, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum XferError {
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("gain must be nonzero")]
    ZeroGain,
    #[error("invalid scalar in document: {0}")]
    BadScalar(String),
}

/// Rational transfer function with poles/zeros at the origin factored out.
#[derive(Clone, PartialEq, Eq)]
pub struct TransferFunction {
    gain: Scalar,
    origin_poles: i32,
    num: Polynomial,
    den: Polynomial,
}

impl TransferFunction {
    /// Builds a transfer function, moving common `s` powers from the
    /// polynomials into the origin-pole count.
    pub fn new(
        gain: Scalar,
        origin_poles: i32,
        num: Polynomial,
        den: Polynomial,
    ) -> Result<Self, XferError> {
        if gain.is_zero() {
            return Err(XferError::ZeroGain);
        }
        let vn = num.valuation().ok_or(XferError::ZeroNumerator)?;
        let vd = den.valuation().ok_or(XferError::ZeroDenominator)?;
        Ok(Self {
            gain,
            origin_poles: origin_poles + vd as i32 - vn as i32,
            num: num.shift_down(vn),
            den: den.shift_down(vd),
        })
    }

    /// Parses the textual grammar (see crate docs).
    ///
    /// ```
    /// use nyqual_core::TransferFunction;
    ///
    /// let tf = TransferFunction::parse("(s^2+12s+35)/(s*(s^4+12s^3+30s^2+28s+9))").unwrap();
    /// assert_eq!(tf.origin_poles(), 1);
    /// assert_eq!(tf.relative_degree(), 3);
    /// ```
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_tf(text)
    }

    pub fn gain(&self) -> &Scalar {
        &self.gain
    }

    /// Number of poles at the origin; negative values are zeros at the origin.
    pub fn origin_poles(&self) -> i32 {
        self.origin_poles
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Numerator degree `m`.
    pub fn num_degree(&self) -> usize {
        self.num.degree().expect("numerator is nonzero")
    }

    /// Denominator degree `n`.
    pub fn den_degree(&self) -> usize {
        self.den.degree().expect("denominator is nonzero")
    }

    /// Relative degree `r = origin_poles + n − m` of the full function.
    pub fn relative_degree(&self) -> i32 {
        self.origin_poles + self.den_degree() as i32 - self.num_degree() as i32
    }

    /// Static value `a₀/b₀` of the origin-free part.
    pub fn g_low(&self) -> Scalar {
        self.num.coeff(0) / self.den.coeff(0)
    }

    /// High-frequency value `a_m/b_n` of the origin-free part.
    pub fn g_high(&self) -> Scalar {
        self.num.leading().unwrap() / self.den.leading().unwrap()
    }

    /// The coefficient-reversed dual: the function of `1/s`.
    ///
    /// Reversing both coefficient sequences and negating the relative
    /// degree into the origin slot gives exactly the original evaluated at
    /// the reciprocal variable, so dualizing twice is the identity and the
    /// dual's low-frequency coefficient machinery is this function's
    /// high-frequency machinery. Note the reciprocal substitution reflects
    /// the frequency axis: the dual's own Nyquist curve is the complex
    /// conjugate trace, which is why the high-frequency phase rule carries
    /// an extra sign.
    pub fn dual(&self) -> TransferFunction {
        TransferFunction {
            gain: self.gain.clone(),
            origin_poles: -self.relative_degree(),
            num: self.num.reversed(),
            den: self.den.reversed(),
        }
    }

    /// Start and end point summaries of the Nyquist curve.
    pub fn endpoints(&self) -> (EndpointSummary, EndpointSummary) {
        let start = self.endpoint(WhichEnd::Start);
        let end = self.endpoint(WhichEnd::End);
        (start, end)
    }

    fn endpoint(&self, which: WhichEnd) -> EndpointSummary {
        let (power, g_value) = match which {
            WhichEnd::Start => (self.origin_poles, self.g_low()),
            WhichEnd::End => (self.relative_degree(), self.g_high()),
        };
        // |gain|/ω^power · |g|: a positive power diverges as ω→0⁺ (start)
        // and vanishes as ω→∞ (end).
        let modulus_kind = if power == 0 {
            ModulusKind::Finite(self.gain.abs() * g_value.abs())
        } else {
            let diverges = match which {
                WhichEnd::Start => power > 0,
                WhichEnd::End => power < 0,
            };
            if diverges {
                ModulusKind::Infinite
            } else {
                ModulusKind::Zero
            }
        };
        // arg of a nonzero real is 0 or π; phases stay unreduced.
        let arg_gain = if self.gain.is_negative() { int(1) } else { int(0) };
        let arg_g = if g_value.is_negative() { int(1) } else { int(0) };
        let phase_over_pi = arg_gain - ratio(power as i64, 2) + arg_g;
        EndpointSummary {
            which_end: which,
            modulus_kind,
            phase_over_pi,
            g_value,
        }
    }

    /// Floating-point frequency response at `ω`, origin poles included.
    pub fn eval_response(&self, omega: f64) -> Complex64 {
        let jw = Complex64::new(0.0, omega);
        let base = self.num.eval_complex(jw) / self.den.eval_complex(jw);
        to_f64(&self.gain) * jw.powi(-self.origin_poles) * base
    }
}

impl fmt::Debug for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TransferFunction(gain={}, origin_poles={}, num={:?}, den={:?})",
            format_scalar(&self.gain),
            self.origin_poles,
            self.num,
            self.den
        )
    }
}

impl fmt::Display for TransferFunction {
    /// Canonical text form; reparsing yields an equal function whenever the
    /// value was itself produced by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gain == -Scalar::one() {
            write!(f, "-")?;
        } else if !self.gain.is_one() {
            write!(f, "{}*", format_scalar(&self.gain))?;
        }
        let h = self.origin_poles;
        let mut num_part = String::new();
        if h < 0 {
            num_part.push_str(&pow_s(-h as u32));
        }
        if !(self.num.is_zero() || (self.num == Polynomial::one() && h < 0)) {
            if !num_part.is_empty() {
                num_part.push('*');
            }
            num_part.push_str(&format!("({})", self.num));
        }
        let mut den_part = String::new();
        let mut den_composite = false;
        if h > 0 {
            den_part.push_str(&pow_s(h as u32));
        }
        if self.den != Polynomial::one() {
            if !den_part.is_empty() {
                den_part.push('*');
                den_composite = true;
            }
            den_part.push_str(&format!("({})", self.den));
        }
        if den_part.is_empty() {
            write!(f, "{num_part}")
        } else if den_composite {
            write!(f, "{num_part}/({den_part})")
        } else {
            write!(f, "{num_part}/{den_part}")
        }
    }
}

fn pow_s(k: u32) -> String {
    if k == 1 {
        "s".to_string()
    } else {
        format!("s^{k}")
    }
}

/// Which end of the Nyquist curve a record describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhichEnd {
    Start,
    End,
}

/// Limit magnitude of an endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    Zero,
    Finite(Scalar),
    Infinite,
}

/// Limit point of the Nyquist curve at one end: magnitude class and exact
/// phase as a rational multiple of π (never reduced modulo 2π, so the
/// winding near the endpoint stays readable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointSummary {
    pub which_end: WhichEnd,
    pub modulus_kind: ModulusKind,
    pub phase_over_pi: Scalar,
    pub g_value: Scalar,
}

/// Serialized form of a transfer function: exact rationals as strings,
/// coefficient arrays in ascending powers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TransferFunctionDoc {
    pub gain: String,
    pub origin_poles: i32,
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl From<&TransferFunction> for TransferFunctionDoc {
    fn from(tf: &TransferFunction) -> Self {
        Self {
            gain: format_scalar(&tf.gain),
            origin_poles: tf.origin_poles,
            num: tf.num.coeffs().iter().map(format_scalar).collect(),
            den: tf.den.coeffs().iter().map(format_scalar).collect(),
        }
    }
}

impl TryFrom<&TransferFunctionDoc> for TransferFunction {
    type Error = XferError;

    fn try_from(doc: &TransferFunctionDoc) -> Result<Self, XferError> {
        let gain = parse_scalar(&doc.gain).map_err(|e| XferError::BadScalar(e.to_string()))?;
        let read = |xs: &[String]| -> Result<Polynomial, XferError> {
            let coeffs = xs
                .iter()
                .map(|s| parse_scalar(s).map_err(|e| XferError::BadScalar(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Polynomial::new(coeffs))
        };
        TransferFunction::new(gain, doc.origin_poles, read(&doc.num)?, read(&doc.den)?)
    }
}

/// Parser normalization: fold the constant-term signs of both polynomials
/// into the gain so that `a₀ > 0` and `b₀ > 0`.
pub(crate) fn sign_normalize(tf: TransferFunction) -> TransferFunction {
    let sa = int(sign(&tf.num.coeff(0)) as i64);
    let sb = int(sign(&tf.den.coeff(0)) as i64);
    TransferFunction {
        gain: tf.gain * &sa * &sb,
        origin_poles: tf.origin_poles,
        num: tf.num.scale(&sa),
        den: tf.den.scale(&sb),
    }
}
