//! Non-endpoint features of the Nyquist curve: real-axis crossings, the
//! vertical asymptote of single-origin-pole systems, endpoint tangent
//! directions, and the dense validation sweep.

pub mod roots;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{imag_part_poly, real_part_poly, Polynomial};
use crate::scalar::{ratio, to_f64, Scalar};
use crate::taylor::{CoefficientMethod, FullRecursion};
use crate::xfer::{TransferFunction, WhichEnd};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    /// The imaginary part vanishes identically: every frequency lies on
    /// the real axis, so there is no discrete crossing set.
    #[error("the response is real at every frequency; crossings are not discrete")]
    DegenerateOnAxis,
    #[error("invalid sweep range: need 0 < omega_min < omega_max and points_per_decade >= 1")]
    BadRange,
}

/// A positive frequency where the curve meets the real axis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisCrossing {
    pub omega: f64,
    /// Abscissa of the curve at the crossing.
    pub real_value: f64,
    /// Root multiplicity of the underlying crossing polynomial; an even
    /// value marks a tangency rather than a transversal crossing.
    pub multiplicity_hint: usize,
}

/// Vertical asymptote approached when there is exactly one origin pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Asymptote {
    /// Exact abscissa of the vertical line.
    pub abscissa: Scalar,
}

/// Unit tangent direction at one end of the curve.
#[derive(Clone, Copy, Debug)]
pub struct TangentVector {
    pub end: WhichEnd,
    pub direction: Complex64,
}

/// One evaluated point of the frequency sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepSample {
    pub omega: f64,
    pub value: Complex64,
    pub modulus: f64,
    pub phase_unwrapped: f64,
}

/// The polynomial in `u = ω²` whose positive roots are the real-axis
/// crossings of the full function, together with the parity bookkeeping.
///
/// With `num(jω)·conj(den(jω)) = P(u) + jω·Q(u)`, the origin-pole factor
/// `(jω)^{-h}` rotates the pair by quarter turns: the imaginary part of
/// the full response is proportional to `Q` for even `h` and to `P` for
/// odd `h` (positive factors dropped).
fn crossing_polynomial(tf: &TransferFunction) -> Polynomial {
    if tf.origin_poles().rem_euclid(2) == 0 {
        imag_part_poly(tf.num(), tf.den())
    } else {
        real_part_poly(tf.num(), tf.den())
    }
}

/// All real-axis crossings at positive frequency, sorted by ω.
///
/// Roots are isolated exactly, then each interval is shrunk until it is
/// narrower than 1e−12 and the evaluated residual imaginary part at its
/// midpoint is negligible against the local curve magnitude.
pub fn real_axis_crossings(tf: &TransferFunction) -> Result<Vec<AxisCrossing>, FeatureError> {
    let mut cross = crossing_polynomial(tf);
    if cross.is_zero() {
        return Err(FeatureError::DegenerateOnAxis);
    }
    // Poles on the imaginary axis force shared roots between the crossing
    // polynomial and |den(jω)|²; there the imaginary part diverges rather
    // than vanishes, so those factors are cancelled, not reported.
    let den_sq = tf.den().modulus_sq_poly();
    let shared = Polynomial::gcd(&cross, &den_sq);
    if shared.degree().unwrap_or(0) > 0 {
        cross = cross.div_rem(&shared).expect("gcd divides").0;
    }
    let width_cap = ratio(1, 1_000_000_000_000); // 1e-12
    let mut out = Vec::new();
    for mut root in roots::isolate_positive_roots(&cross) {
        root.refine_until(
            |lo, hi| {
                if (hi - lo) >= width_cap {
                    return false;
                }
                let mid = (lo + hi) / Scalar::from_integer(2.into());
                let omega = to_f64(&mid).sqrt();
                let g = tf.eval_response(omega);
                g.im.abs() < 1e-10 * g.norm().max(1.0)
            },
            300,
        );
        let omega = to_f64(&root.midpoint()).sqrt();
        let g = tf.eval_response(omega);
        out.push(AxisCrossing {
            omega,
            real_value: g.re,
            multiplicity_hint: root.multiplicity,
        });
    }
    out.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(out)
}

/// Positive frequencies where the denominator vanishes on the imaginary
/// axis (resonance poles). The imaginary part of the response flips sign
/// across each of them without a real-axis crossing.
pub fn axis_pole_frequencies(tf: &TransferFunction) -> Vec<f64> {
    let den_sq = tf.den().modulus_sq_poly();
    let width_cap = ratio(1, 1_000_000_000_000);
    let mut out = Vec::new();
    for mut root in roots::isolate_positive_roots(&den_sq) {
        root.refine_until(|lo, hi| &(hi - lo) < &width_cap, 300);
        out.push(to_f64(&root.midpoint()).sqrt());
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Exact abscissa `gain · G₁` of the vertical asymptote; present only for
/// systems with exactly one origin pole.
///
/// Near ω = 0 the response is `gain·(G₀ + G₁·jω + …)/(jω)`, whose real
/// part tends to `gain·G₁` while the imaginary part diverges.
pub fn asymptote_abscissa(tf: &TransferFunction) -> Option<Asymptote> {
    if tf.origin_poles() != 1 {
        return None;
    }
    let g1 = FullRecursion
        .table(tf, 1)
        .get(1)
        .expect("full recursion covers index 1")
        .clone();
    Some(Asymptote {
        abscissa: tf.gain() * g1,
    })
}

/// Unit tangent directions at both ends.
///
/// Finite endpoints are differentiated numerically (central differences at
/// ω = 10⁻⁶ and 10⁶); divergent or vanishing endpoints take the direction
/// of the dominant origin-pole term, i.e. radially along the endpoint
/// phase, outward when the modulus grows and inward when it collapses.
pub fn tangent_vectors(tf: &TransferFunction) -> (TangentVector, TangentVector) {
    let (start_summary, end_summary) = tf.endpoints();
    let start = match tf.origin_poles() {
        0 => central_difference(tf, 1e-6),
        h => radial(to_f64(&start_summary.phase_over_pi) * PI, h < 0),
    };
    let end = match tf.relative_degree() {
        0 => central_difference(tf, 1e6),
        r => radial(to_f64(&end_summary.phase_over_pi) * PI, r < 0),
    };
    (
        TangentVector {
            end: WhichEnd::Start,
            direction: start,
        },
        TangentVector {
            end: WhichEnd::End,
            direction: end,
        },
    )
}

fn central_difference(tf: &TransferFunction, omega: f64) -> Complex64 {
    let delta = omega / 2.0;
    let d = (tf.eval_response(omega + delta) - tf.eval_response(omega - delta)) / (2.0 * delta);
    normalize(d)
}

fn radial(phase: f64, outward: bool) -> Complex64 {
    let e = Complex64::from_polar(1.0, phase);
    if outward {
        e
    } else {
        -e
    }
}

fn normalize(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n.is_finite() && n > 0.0 {
        z / n
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Logarithmically spaced sweep of the full response with continuous phase
/// unwrapping.
///
/// Extra samples are inserted wherever the principal phase step between
/// neighbors exceeds π/2, so the nearest-multiple-of-2π continuation never
/// sees an ambiguous jump (bounded subdivision depth guards imaginary-axis
/// poles, where a genuine π jump exists).
pub fn sweep(
    tf: &TransferFunction,
    omega_min: f64,
    omega_max: f64,
    points_per_decade: u32,
) -> Result<Vec<SweepSample>, FeatureError> {
    if !(omega_min > 0.0 && omega_min < omega_max && omega_max.is_finite()) || points_per_decade < 1
    {
        return Err(FeatureError::BadRange);
    }
    let decades = (omega_max / omega_min).log10();
    let segments = ((decades * points_per_decade as f64).ceil() as usize).max(1);
    let mut raw: Vec<(f64, Complex64)> = Vec::with_capacity(segments + 1);
    let at = |i: usize| omega_min * 10f64.powf(decades * i as f64 / segments as f64);
    let mut prev = (omega_min, tf.eval_response(omega_min));
    raw.push(prev);
    for i in 1..=segments {
        let omega = if i == segments { omega_max } else { at(i) };
        let value = tf.eval_response(omega);
        subdivide(tf, prev, (omega, value), 0, &mut raw);
        raw.push((omega, value));
        prev = (omega, value);
    }
    let mut out = Vec::with_capacity(raw.len());
    let mut prev_phase: Option<f64> = None;
    for (omega, value) in raw {
        let principal = value.arg();
        let phase_unwrapped = match prev_phase {
            Some(p) if principal.is_finite() => {
                principal + 2.0 * PI * ((p - principal) / (2.0 * PI)).round()
            }
            _ => principal,
        };
        if phase_unwrapped.is_finite() {
            prev_phase = Some(phase_unwrapped);
        }
        out.push(SweepSample {
            omega,
            value,
            modulus: value.norm(),
            phase_unwrapped,
        });
    }
    Ok(out)
}

fn subdivide(
    tf: &TransferFunction,
    lo: (f64, Complex64),
    hi: (f64, Complex64),
    depth: u32,
    out: &mut Vec<(f64, Complex64)>,
) {
    if depth >= 24 {
        return;
    }
    let ratio = hi.1 / lo.1;
    if !ratio.is_finite() || ratio.arg().abs() <= PI / 2.0 {
        return;
    }
    let mid = (lo.0 * hi.0).sqrt();
    if !(mid > lo.0 && mid < hi.0) {
        return;
    }
    let value = tf.eval_response(mid);
    subdivide(tf, lo, (mid, value), depth + 1, out);
    out.push((mid, value));
    subdivide(tf, (mid, value), hi, depth + 1, out);
}

/// Characteristic frequency of the coefficient set: the geometric mean of
/// the low-vs-high coefficient ratios of both polynomials. Used for
/// scale-aware default sweep ranges.
pub fn natural_frequency_scale(tf: &TransferFunction) -> f64 {
    let mut factors: Vec<f64> = Vec::new();
    let m = tf.num_degree();
    let n = tf.den_degree();
    if m > 0 {
        let r = (to_f64(&tf.num().coeff(0)) / to_f64(tf.num().leading().unwrap())).abs();
        factors.push(r.powf(1.0 / m as f64));
    }
    if n > 0 {
        let r = (to_f64(&tf.den().coeff(0)) / to_f64(tf.den().leading().unwrap())).abs();
        factors.push(r.powf(1.0 / n as f64));
    }
    if factors.is_empty() {
        return 1.0;
    }
    let log_mean = factors.iter().map(|f| f.ln()).sum::<f64>() / factors.len() as f64;
    let scale = log_mean.exp();
    if scale.is_finite() && scale > 0.0 {
        scale
    } else {
        1.0
    }
}
