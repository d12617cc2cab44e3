//! Self-verification: pits independent computation routes against each
//! other over given inputs or a randomized corpus.
//!
//! Exact checks (engine agreement, series reconstruction, the determinant
//! closed form, duality) must hold bit for bit. Floating checks compare
//! classified signs against sweep measurements; predictions whose
//! magnitude falls below 1e−12 are excluded as unmeasurable.

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify_entry, classify_exit, Archetype, ModulusTrend};
use crate::features::{natural_frequency_scale, real_axis_crossings, sweep, FeatureError};
use crate::poly::{series_div, Polynomial};
use crate::scalar::{int, ratio, sign, to_f64, Scalar};
use crate::taylor::{
    default_order, deviation_series, deviation_via_det_sum, methods, CoefficientMethod,
    FullRecursion, SeriesDivision,
};
use crate::xfer::{ModulusKind, TransferFunction};

/// Result of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            detail: detail.into(),
        }
    }

    fn from(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        if passed {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

const VERIFY_ORDER: usize = 12;

/// Runs every applicable check on one transfer function.
pub fn verify_tf(tf: &TransferFunction) -> Vec<CheckOutcome> {
    let mut out = vec![
        method_agreement(tf),
        series_reconstruction(tf),
        closed_form(tf),
        dual_involution(tf),
        entry_exit_duality(tf),
    ];
    out.extend(phase_sign_checks(tf));
    out.extend(modulus_sign_checks(tf));
    if let Some(check) = sigma_a(tf) {
        out.push(check);
    }
    out.push(crossing_completeness(tf));
    out.push(sweep_endpoint_convergence(tf));
    out
}

/// Runs the randomized corpus: exact identities on every trial, sign
/// predictions with exclusions, and the heavier sweep-based checks on a
/// bounded subset.
pub fn verify_random(trials: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes: Vec<CheckOutcome> = Vec::new();

    let mut exact_failures = Vec::new();
    let mut sign_failures = Vec::new();
    let mut sign_excluded = 0usize;
    let mut sign_checked = 0usize;
    for i in 0..trials {
        let tf = random_tf(&mut rng);
        for check in [
            method_agreement(&tf),
            series_reconstruction(&tf),
            closed_form(&tf),
            dual_involution(&tf),
            entry_exit_duality(&tf),
        ] {
            if !check.passed {
                exact_failures.push(format!("trial {i} [{}]: {}", check.name, check.detail));
            }
        }
        for check in phase_sign_checks(&tf)
            .into_iter()
            .chain(modulus_sign_checks(&tf))
        {
            if check.detail.contains("excluded") {
                sign_excluded += 1;
            } else {
                sign_checked += 1;
                if !check.passed {
                    sign_failures.push(format!(
                        "trial {i} [{}]: {} ({tf})",
                        check.name, check.detail
                    ));
                }
            }
        }
    }
    outcomes.push(CheckOutcome::from(
        "random-exact-identities",
        exact_failures.is_empty(),
        if exact_failures.is_empty() {
            format!("{trials} trials, all exact routes agree")
        } else {
            exact_failures.join("; ")
        },
    ));
    outcomes.push(CheckOutcome::from(
        "random-sign-predictions",
        sign_failures.is_empty(),
        if sign_failures.is_empty() {
            format!(
                "{sign_checked} sign measurements matched, {sign_excluded} below measurement floor"
            )
        } else {
            sign_failures.join("; ")
        },
    ));

    // Asymptote abscissa over a single-origin-pole subcorpus.
    let asymptote_trials = trials.clamp(1, 50);
    let mut asym_failures = Vec::new();
    for i in 0..asymptote_trials {
        let tf = random_tf_with_origin_poles(&mut rng, 1);
        if let Some(check) = sigma_a(&tf) {
            if !check.passed {
                asym_failures.push(format!("trial {i}: {} ({tf})", check.detail));
            }
        }
    }
    outcomes.push(CheckOutcome::from(
        "random-asymptote",
        asym_failures.is_empty(),
        if asym_failures.is_empty() {
            format!("{asymptote_trials} single-origin-pole trials within tolerance")
        } else {
            asym_failures.join("; ")
        },
    ));

    // Crossing completeness is sweep-heavy; bound the subset.
    let crossing_trials = trials.clamp(1, 50);
    let mut crossing_failures = Vec::new();
    for i in 0..crossing_trials {
        let tf = random_tf(&mut rng);
        let check = crossing_completeness(&tf);
        if !check.passed {
            crossing_failures.push(format!("trial {i}: {} ({tf})", check.detail));
        }
    }
    outcomes.push(CheckOutcome::from(
        "random-crossings",
        crossing_failures.is_empty(),
        if crossing_failures.is_empty() {
            format!("{crossing_trials} trials, sweeps and exact roots agree")
        } else {
            crossing_failures.join("; ")
        },
    ));
    outcomes
}

/// Demonstrates the failure path: corrupts a coefficient table and runs
/// the agreement check against it. The returned outcome must be a failure.
pub fn corrupted_table_demo() -> CheckOutcome {
    let tf = TransferFunction::parse("(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)")
        .expect("built-in expression parses");
    let mut table = FullRecursion.table(&tf, 8);
    table.corrupt_entry(3);
    let reference = SeriesDivision.table(&tf, 8);
    CheckOutcome::from(
        "method-agreement(corrupted-table)",
        table.agrees_with(&reference),
        "agreement check over a deliberately corrupted table",
    )
}

// ---------------------------------------------------------------------
// Exact checks
// ---------------------------------------------------------------------

pub fn method_agreement(tf: &TransferFunction) -> CheckOutcome {
    let order = VERIFY_ORDER.max(default_order(tf));
    let tables: Vec<_> = methods().iter().map(|m| m.table(tf, order)).collect();
    let mut ok = true;
    for i in 1..tables.len() {
        ok &= tables[0].agrees_with(&tables[i]) && tables[i].agrees_with(&tables[0]);
    }
    CheckOutcome::from(
        "method-agreement",
        ok,
        format!("three engines over indices 0..={order}"),
    )
}

pub fn series_reconstruction(tf: &TransferFunction) -> CheckOutcome {
    let order = VERIFY_ORDER;
    let series = series_div(tf.num(), tf.den(), order).expect("nonzero constant term");
    let truncated = Polynomial::new(series.coeffs().to_vec());
    let product = &truncated * tf.den();
    let ok = (0..=order).all(|k| product.coeff(k) == tf.num().coeff(k));
    CheckOutcome::from(
        "series-reconstruction",
        ok,
        format!("den · series ≡ num through order {order}"),
    )
}

pub fn closed_form(tf: &TransferFunction) -> CheckOutcome {
    let series = deviation_series(tf, default_order(tf));
    let Some(k) = series.first_nonzero_odd() else {
        return CheckOutcome::pass("closed-form", "no odd deviation; hypothesis never engages");
    };
    for j in (1..=k).step_by(2) {
        match deviation_via_det_sum(tf, j) {
            Ok(v) if &v == series.value(j) => {}
            Ok(v) => {
                return CheckOutcome::fail(
                    "closed-form",
                    format!("index {j}: closed form {v} != series {}", series.value(j)),
                )
            }
            Err(e) => return CheckOutcome::fail("closed-form", format!("index {j}: {e}")),
        }
    }
    CheckOutcome::pass(
        "closed-form",
        format!("agrees through first nonzero odd index {k}"),
    )
}

pub fn dual_involution(tf: &TransferFunction) -> CheckOutcome {
    CheckOutcome::from(
        "dual-involution",
        &tf.dual().dual() == tf,
        "dualizing twice restores the function",
    )
}

pub fn entry_exit_duality(tf: &TransferFunction) -> CheckOutcome {
    let entry = classify_entry(tf);
    let exit_of_dual = classify_exit(&tf.dual());
    let mut ok = entry.phase_sense == exit_of_dual.phase_sense.flipped();
    ok &= entry.k_odd == exit_of_dual.k_odd && entry.h_even == exit_of_dual.h_even;
    ok &= matches!(
        (entry.modulus_trend, exit_of_dual.modulus_trend),
        (ModulusTrend::ApproachFromAbove, ModulusTrend::IncreasingFromStart)
            | (ModulusTrend::ApproachFromBelow, ModulusTrend::DecreasingFromStart)
            | (ModulusTrend::Constant, ModulusTrend::Constant)
    );
    // The entry table reads the odd sign negated, which swaps 1↔2 and 3↔4.
    let swapped = exit_of_dual.archetype.map(|a| match a {
        Archetype::Curve1 => Archetype::Curve2,
        Archetype::Curve2 => Archetype::Curve1,
        Archetype::Curve3 => Archetype::Curve4,
        Archetype::Curve4 => Archetype::Curve3,
    });
    ok &= entry.archetype == swapped;
    CheckOutcome::from(
        "entry-exit-duality",
        ok,
        "entry classification equals the sign-adjusted exit of the dual",
    )
}

// ---------------------------------------------------------------------
// Floating sign checks
// ---------------------------------------------------------------------

fn eval_origin_free(tf: &TransferFunction, omega: f64) -> Complex64 {
    let jw = Complex64::new(0.0, omega);
    tf.num().eval_complex(jw) / tf.den().eval_complex(jw)
}

/// The origin-free part re-expressed in the reciprocal variable:
/// `(jω)^{n−m} · num(jω)/den(jω)`, which settles onto `a_m/b_n` as ω → ∞.
/// High-frequency deviations are measured against this value.
fn eval_reciprocal_frame(tf: &TransferFunction, omega: f64) -> Complex64 {
    let jw = Complex64::new(0.0, omega);
    let twist = jw.powi(tf.den_degree() as i32 - tf.num_degree() as i32);
    twist * eval_origin_free(tf, omega)
}

fn log10_abs(x: &Scalar) -> f64 {
    let f = to_f64(x);
    if f.is_finite() && f != 0.0 {
        return f.abs().log10();
    }
    let n = x.numer().magnitude().bits() as f64;
    let d = x.denom().magnitude().bits() as f64;
    (n - d) * std::f64::consts::LOG10_2
}

const LOW_OMEGA: f64 = 1e-4;
const HIGH_OMEGA: f64 = 1e4;
const MEASUREMENT_FLOOR_LOG10: f64 = -12.0;

pub fn phase_sign_checks(tf: &TransferFunction) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    // Low-frequency side.
    let series = deviation_series(tf, default_order(tf));
    out.push(match series.first_nonzero_odd() {
        None => CheckOutcome::pass("phase-sign-low", "excluded: response is real everywhere"),
        Some(k) => {
            let value = series.value(k);
            let predicted_log = log10_abs(value) + (k as f64) * LOW_OMEGA.log10();
            if predicted_log < MEASUREMENT_FLOOR_LOG10 {
                CheckOutcome::pass("phase-sign-low", "excluded: predicted offset below 1e-12")
            } else {
                let g0 = to_f64(&tf.g_low());
                let measured = (eval_origin_free(tf, LOW_OMEGA) / g0).arg();
                CheckOutcome::from(
                    "phase-sign-low",
                    measured_sign_matches(measured, sign(value)),
                    format!("offset {measured:.3e} vs first odd index {k}"),
                )
            }
        }
    });
    // High-frequency side via the dual, with the extra sign flip.
    let dual = tf.dual();
    let dual_series = deviation_series(&dual, default_order(&dual));
    out.push(match dual_series.first_nonzero_odd() {
        None => CheckOutcome::pass("phase-sign-high", "excluded: response is real everywhere"),
        Some(k) => {
            let value = dual_series.value(k);
            let predicted_log = log10_abs(value) - (k as f64) * HIGH_OMEGA.log10();
            if predicted_log < MEASUREMENT_FLOOR_LOG10 {
                CheckOutcome::pass("phase-sign-high", "excluded: predicted offset below 1e-12")
            } else {
                let ginf = to_f64(&tf.g_high());
                let measured = (eval_reciprocal_frame(tf, HIGH_OMEGA) / ginf).arg();
                CheckOutcome::from(
                    "phase-sign-high",
                    measured_sign_matches(measured, -sign(value)),
                    format!("offset {measured:.3e} vs negated first odd dual index {k}"),
                )
            }
        }
    });
    out
}

pub fn modulus_sign_checks(tf: &TransferFunction) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let series = deviation_series(tf, default_order(tf));
    out.push(modulus_check_one(
        "modulus-sign-low",
        series.first_nonzero_odd(),
        series.first_nonzero_even(),
        |h| series.value(h).clone(),
        || {
            let g0 = to_f64(&tf.g_low()).abs();
            eval_origin_free(tf, LOW_OMEGA).norm() / g0 - 1.0
        },
        LOW_OMEGA,
        false,
    ));
    let dual = tf.dual();
    let dual_series = deviation_series(&dual, default_order(&dual));
    out.push(modulus_check_one(
        "modulus-sign-high",
        dual_series.first_nonzero_odd(),
        dual_series.first_nonzero_even(),
        |h| dual_series.value(h).clone(),
        || {
            let ginf = to_f64(&tf.g_high()).abs();
            eval_reciprocal_frame(tf, HIGH_OMEGA).norm() / ginf - 1.0
        },
        HIGH_OMEGA,
        true,
    ));
    out
}

fn modulus_check_one(
    name: &str,
    k_odd: Option<usize>,
    h_even: Option<usize>,
    value_at: impl Fn(usize) -> Scalar,
    measure: impl Fn() -> f64,
    omega: f64,
    inverse_powers: bool,
) -> CheckOutcome {
    let Some(h) = h_even else {
        return CheckOutcome::pass(name, "excluded: real part never deviates");
    };
    // The real-part argument controls the modulus only when the odd index
    // dominates twice over; outside that regime the verdict is reported
    // but not measurable against the true modulus.
    let regime_ok = matches!(k_odd, Some(k) if 2 * k > h);
    if !regime_ok {
        return CheckOutcome::pass(name, "excluded: outside the 2k>h regime");
    }
    let value = value_at(h);
    let power = if inverse_powers { -(h as f64) } else { h as f64 };
    let predicted_log = log10_abs(&value) + power * omega.log10();
    if predicted_log < MEASUREMENT_FLOOR_LOG10 {
        return CheckOutcome::pass(name, "excluded: predicted deviation below 1e-12");
    }
    let measured = measure();
    CheckOutcome::from(
        name,
        measured_sign_matches(measured, sign(&value)),
        format!("relative deviation {measured:.3e} vs even index {h}"),
    )
}

fn measured_sign_matches(measured: f64, predicted: i8) -> bool {
    if !measured.is_finite() || predicted == 0 {
        return false;
    }
    (measured > 0.0) == (predicted > 0)
}

// ---------------------------------------------------------------------
// Sweep-based checks
// ---------------------------------------------------------------------

pub fn sigma_a(tf: &TransferFunction) -> Option<CheckOutcome> {
    let asymptote = crate::features::asymptote_abscissa(tf)?;
    let target = to_f64(&asymptote.abscissa);
    let measured = tf.eval_response(1e-6).re;
    let ok = (measured - target).abs() < 1e-3 * target.abs().max(1.0);
    Some(CheckOutcome::from(
        "sigma-a",
        ok,
        format!("Re at 1e-6 = {measured:.6e}, abscissa = {target:.6e}"),
    ))
}

/// Every sweep sign change of the imaginary part is bracketed by exactly
/// one reported crossing, and every reported transversal crossing shows a
/// local sign change.
pub fn crossing_completeness(tf: &TransferFunction) -> CheckOutcome {
    let crossings = match real_axis_crossings(tf) {
        Ok(c) => c,
        Err(FeatureError::DegenerateOnAxis) => {
            return CheckOutcome::pass(
                "crossing-completeness",
                "excluded: response real everywhere",
            )
        }
        Err(e) => return CheckOutcome::fail("crossing-completeness", e.to_string()),
    };
    let samples = match sweep(tf, LOW_OMEGA, HIGH_OMEGA, 200) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::fail("crossing-completeness", e.to_string()),
    };
    // Sign-change brackets from the dense sweep.
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for w in samples.windows(2) {
        let (a, b) = (w[0].value.im, w[1].value.im);
        if a.is_finite() && b.is_finite() && a != 0.0 && b != 0.0 && (a > 0.0) != (b > 0.0) {
            brackets.push((w[0].omega, w[1].omega));
        }
    }
    let transversal: Vec<&crate::features::AxisCrossing> = crossings
        .iter()
        .filter(|c| c.multiplicity_hint % 2 == 1)
        .collect();
    // The imaginary part also flips sign across poles sitting on the
    // imaginary axis; those brackets are expected and carry no crossing.
    let poles = crate::features::axis_pole_frequencies(tf);
    for (lo, hi) in &brackets {
        if poles.iter().any(|p| p >= lo && p <= hi) {
            continue;
        }
        let inside = transversal
            .iter()
            .filter(|c| c.omega >= *lo && c.omega <= *hi)
            .count();
        if inside != 1 {
            return CheckOutcome::fail(
                "crossing-completeness",
                format!("sweep bracket [{lo:.6e}, {hi:.6e}] holds {inside} crossings"),
            );
        }
    }
    // Residual invariant at every reported crossing, tangencies included.
    for c in &crossings {
        let g = tf.eval_response(c.omega);
        if !(g.im.abs() < 1e-9 * g.norm().max(1.0)) {
            return CheckOutcome::fail(
                "crossing-completeness",
                format!("residual imaginary part {:.3e} at ω = {:.6e}", g.im, c.omega),
            );
        }
    }
    // Local confirmation with a window clear of neighboring crossings and
    // poles.
    for (i, c) in transversal.iter().enumerate() {
        let mut half_gap: f64 = c.omega * 1e-3;
        if i > 0 {
            half_gap = half_gap.min((c.omega - transversal[i - 1].omega) / 2.0);
        }
        if i + 1 < transversal.len() {
            half_gap = half_gap.min((transversal[i + 1].omega - c.omega) / 2.0);
        }
        for p in &poles {
            half_gap = half_gap.min((p - c.omega).abs() / 2.0);
        }
        let a = tf.eval_response(c.omega - half_gap).im;
        let b = tf.eval_response(c.omega + half_gap).im;
        if !(a.is_finite() && b.is_finite() && (a > 0.0) != (b > 0.0)) {
            return CheckOutcome::fail(
                "crossing-completeness",
                format!(
                    "no local sign change at reported crossing ω = {:.6e}",
                    c.omega
                ),
            );
        }
    }
    CheckOutcome::pass(
        "crossing-completeness",
        format!(
            "{} sweep brackets matched {} transversal crossings",
            brackets.len(),
            transversal.len()
        ),
    )
}

pub fn sweep_endpoint_convergence(tf: &TransferFunction) -> CheckOutcome {
    let scale = natural_frequency_scale(tf);
    let (start, end) = tf.endpoints();
    let lo = tf.eval_response(1e-6 * scale);
    let hi = tf.eval_response(1e6 * scale);
    let mut failures = Vec::new();
    let mut check_kind = |label: &str, value: Complex64, summary: &crate::xfer::EndpointSummary| {
        match &summary.modulus_kind {
            ModulusKind::Finite(v) => {
                let target = Complex64::from_polar(
                    to_f64(v),
                    to_f64(&summary.phase_over_pi) * std::f64::consts::PI,
                );
                if (value - target).norm() > 1e-3 * target.norm().max(1.0) {
                    failures.push(format!("{label}: {value} does not approach {target}"));
                }
            }
            ModulusKind::Zero => {
                if value.norm() > 1e-3 {
                    failures.push(format!("{label}: modulus {} not collapsing", value.norm()));
                }
            }
            ModulusKind::Infinite => {
                if value.norm() < 1e3 {
                    failures.push(format!("{label}: modulus {} not diverging", value.norm()));
                }
            }
        }
    };
    check_kind("start", lo, &start);
    check_kind("end", hi, &end);
    CheckOutcome::from(
        "sweep-endpoint-convergence",
        failures.is_empty(),
        if failures.is_empty() {
            "extremes approach endpoint summaries".to_string()
        } else {
            failures.join("; ")
        },
    )
}

// ---------------------------------------------------------------------
// Random corpus
// ---------------------------------------------------------------------

fn random_scalar(rng: &mut impl Rng) -> Scalar {
    let q = rng.gen_range(1..=10i64);
    let p = rng.gen_range(-10 * q..=10 * q);
    ratio(p, q)
}

fn random_nonzero_scalar(rng: &mut impl Rng) -> Scalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_poly(rng: &mut impl Rng, degree: usize) -> Polynomial {
    let mut coeffs: Vec<Scalar> = (0..=degree).map(|_| random_scalar(rng)).collect();
    coeffs[0] = random_nonzero_scalar(rng);
    let last = coeffs.len() - 1;
    coeffs[last] = random_nonzero_scalar(rng);
    Polynomial::new(coeffs)
}

/// Random transfer function with rational coefficients in [−10, 10],
/// degrees at most 8, and nonzero constant/leading coefficients.
pub fn random_tf(rng: &mut impl Rng) -> TransferFunction {
    let h = rng.gen_range(-2..=2);
    random_tf_with_origin_poles(rng, h)
}

/// Same corpus with a fixed origin-pole count.
pub fn random_tf_with_origin_poles(rng: &mut impl Rng, origin_poles: i32) -> TransferFunction {
    let m = rng.gen_range(0..=8usize);
    let n = rng.gen_range(0..=8usize);
    TransferFunction::new(int(1), origin_poles, random_poly(rng, m), random_poly(rng, n))
        .expect("nonzero polynomials by construction")
}
