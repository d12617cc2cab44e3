//! Property tests for the structural invariants: exactness of the ring
//! operations, oracle linkage, normalization, duality, and degeneracy
//! soundness.

use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

use nyqual_core::classify::PhaseSense;
use nyqual_core::features::{sweep, tangent_vectors};
use nyqual_core::poly::{imag_part_poly, series_div, Polynomial};
use nyqual_core::scalar::{int, ratio, Scalar};
use nyqual_core::taylor::{
    default_order, deviation_series, deviation_via_det_sum, cross_det, CoefficientMethod,
    FullRecursion,
};
use nyqual_core::xfer::{ModulusKind, TransferFunction};

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-100i64..=100, 1i64..=10).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_scalar_strategy() -> impl Strategy<Value = Scalar> {
    (prop_oneof![-100i64..=-1, 1i64..=100], 1i64..=10).prop_map(|(p, q)| ratio(p, q))
}

fn poly_strategy(max_extra: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(scalar_strategy(), 0..=max_extra).prop_map(Polynomial::new)
}

/// Polynomial with nonzero constant and leading coefficients, degree ≤ 8.
fn anchored_poly_strategy() -> impl Strategy<Value = Polynomial> {
    (
        nonzero_scalar_strategy(),
        prop::collection::vec(scalar_strategy(), 0..=7),
        nonzero_scalar_strategy(),
    )
        .prop_map(|(lo, mid, hi)| {
            let mut coeffs = vec![lo];
            coeffs.extend(mid);
            coeffs.push(hi);
            Polynomial::new(coeffs)
        })
}

fn tf_strategy() -> impl Strategy<Value = TransferFunction> {
    (
        anchored_poly_strategy(),
        anchored_poly_strategy(),
        -2i32..=2,
    )
        .prop_map(|(num, den, h)| TransferFunction::new(int(1), h, num, den).unwrap())
}

proptest! {
    #[test]
    fn multiplication_commutes_with_evaluation(
        p in poly_strategy(9),
        q in poly_strategy(9),
        re in -10.0f64..10.0,
        im in -10.0f64..10.0,
    ) {
        let z = Complex64::new(re, im);
        let lhs = (&p * &q).eval_complex(z);
        let rhs = p.eval_complex(z) * q.eval_complex(z);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn series_division_reconstructs_numerator(
        num in anchored_poly_strategy(),
        den in anchored_poly_strategy(),
    ) {
        let series = series_div(&num, &den, 12).unwrap();
        let truncated = Polynomial::new(series.coeffs().to_vec());
        let product = &truncated * &den;
        for k in 0..=12usize {
            prop_assert_eq!(product.coeff(k), num.coeff(k));
        }
    }

    #[test]
    fn imag_part_zero_iff_no_odd_deviation(tf in tf_strategy()) {
        let structurally_real = imag_part_poly(tf.num(), tf.den()).is_zero();
        let series = deviation_series(&tf, default_order(&tf));
        prop_assert_eq!(structurally_real, series.first_nonzero_odd().is_none());
        prop_assert_eq!(structurally_real, series.degenerate_imag());
    }

    #[test]
    fn even_functions_are_structurally_real(
        num_even in prop::collection::vec(scalar_strategy(), 1..=4),
        den_even in prop::collection::vec(scalar_strategy(), 1..=4),
    ) {
        // Plant polynomials in s²: the response is real at every ω.
        let spread = |cs: &[Scalar]| {
            let mut out = Vec::new();
            for c in cs {
                out.push(c.clone());
                out.push(Scalar::zero());
            }
            out.pop();
            Polynomial::new(out)
        };
        let num = spread(&num_even);
        let den = spread(&den_even);
        prop_assume!(!num.is_zero() && !den.is_zero());
        prop_assert!(imag_part_poly(&num, &den).is_zero());
    }

    #[test]
    fn parse_format_parse_is_identity(tf in tf_strategy()) {
        let first = TransferFunction::parse(&tf.to_string()).unwrap();
        let second = TransferFunction::parse(&first.to_string()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn construction_normalizes_planted_s_factors(
        base_num in anchored_poly_strategy(),
        base_den in anchored_poly_strategy(),
        shift_num in 0usize..=4,
        shift_den in 0usize..=4,
        h0 in -2i32..=2,
    ) {
        let tf = TransferFunction::new(
            int(1),
            h0,
            base_num.mul_monomial(shift_num),
            base_den.mul_monomial(shift_den),
        )
        .unwrap();
        prop_assert_eq!(tf.origin_poles(), h0 + shift_den as i32 - shift_num as i32);
        prop_assert!(!tf.num().coeff(0).is_zero());
        prop_assert!(!tf.den().coeff(0).is_zero());
        prop_assert_eq!(tf.num(), &base_num);
        prop_assert_eq!(tf.den(), &base_den);
    }

    #[test]
    fn endpoint_kind_matches_power_sign(tf in tf_strategy()) {
        let (start, end) = tf.endpoints();
        let h = tf.origin_poles();
        let r = tf.relative_degree();
        prop_assert_eq!(matches!(start.modulus_kind, ModulusKind::Infinite), h > 0);
        prop_assert_eq!(matches!(start.modulus_kind, ModulusKind::Zero), h < 0);
        prop_assert_eq!(matches!(end.modulus_kind, ModulusKind::Zero), r > 0);
        prop_assert_eq!(matches!(end.modulus_kind, ModulusKind::Infinite), r < 0);
    }

    #[test]
    fn cross_det_is_antisymmetric(tf in tf_strategy()) {
        let bound = tf.num_degree().max(tf.den_degree()) + 1;
        for i in 0..=bound {
            for j in 0..=bound {
                prop_assert_eq!(cross_det(&tf, i, j), -cross_det(&tf, j, i));
            }
        }
    }

    #[test]
    fn deviation_definition_consistency(tf in tf_strategy()) {
        let order = default_order(&tf);
        let series = deviation_series(&tf, order);
        let table = FullRecursion.table(&tf, order);
        let g0 = table.get(0).unwrap().clone();
        for k in 1..=order {
            let restored = if (k / 2) % 2 == 0 {
                series.value(k) * &g0
            } else {
                -(series.value(k) * &g0)
            };
            prop_assert_eq!(&restored, table.get(k).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_when_hypothesis_holds(tf in tf_strategy()) {
        let series = deviation_series(&tf, default_order(&tf));
        if let Some(k) = series.first_nonzero_odd() {
            for j in (1..=k).step_by(2) {
                prop_assert_eq!(&deviation_via_det_sum(&tf, j).unwrap(), series.value(j));
            }
        }
    }

    #[test]
    fn degeneracy_is_sound(tf in tf_strategy()) {
        let order = default_order(&tf);
        let series = deviation_series(&tf, order);
        let table = FullRecursion.table(&tf, order);
        if series.degenerate_imag() {
            for k in (1..=order).step_by(2) {
                prop_assert!(table.get(k).unwrap().is_zero());
            }
            prop_assert_eq!(classify_phase(&tf), PhaseSense::OnRealAxis);
        } else {
            let bound = tf.num_degree() + tf.den_degree();
            let k = series.first_nonzero_odd().unwrap();
            prop_assert!(k <= bound.max(1));
        }
    }

    #[test]
    fn dual_is_involutive(tf in tf_strategy()) {
        prop_assert_eq!(tf.dual().dual(), tf);
    }

    #[test]
    fn archetype_is_total_for_non_degenerate_inputs(tf in tf_strategy()) {
        for behavior in [
            nyqual_core::classify::classify_exit(&tf),
            nyqual_core::classify::classify_entry(&tf),
        ] {
            match (behavior.k_odd, behavior.h_even) {
                (Some(_), Some(_)) => {
                    let index = behavior.archetype.map(|a| a.index()).unwrap_or(0);
                    prop_assert!((1..=4).contains(&index));
                    prop_assert_ne!(
                        behavior.approach_axis,
                        nyqual_core::classify::ApproachAxis::Degenerate
                    );
                }
                _ => {
                    prop_assert_eq!(behavior.archetype, None);
                    prop_assert_eq!(
                        behavior.approach_axis,
                        nyqual_core::classify::ApproachAxis::Degenerate
                    );
                }
            }
        }
    }
}

fn classify_phase(tf: &TransferFunction) -> PhaseSense {
    nyqual_core::classify::classify_exit(tf).phase_sense
}

/// Limiting tangent direction at a finite start: perpendicular cases move
/// along ±j, parallel cases along ±1, signed by the static value and the
/// governing deviation parameter.
fn expected_start_direction(tf: &TransferFunction) -> Option<(Complex64, f64)> {
    let series = deviation_series(tf, default_order(tf));
    let (k, h) = (series.first_nonzero_odd()?, series.first_nonzero_even()?);
    let g0 = nyqual_core::scalar::to_f64(&tf.g_low());
    let vk = nyqual_core::scalar::to_f64(series.value(k));
    let vh = nyqual_core::scalar::to_f64(series.value(h));
    let omega: f64 = 1e-6;
    let odd_term = (k as f64) * vk.abs() * omega.powi(k as i32 - 1);
    let even_term = (h as f64) * vh.abs() * omega.powi(h as i32 - 1);
    let (dominant, subdominant, direction) = if k < h {
        (odd_term, even_term, Complex64::new(0.0, (g0 * vk).signum()))
    } else {
        (even_term, odd_term, Complex64::new((g0 * vh).signum(), 0.0))
    };
    if !(dominant.is_finite() && subdominant.is_finite()) {
        return None;
    }
    Some((direction, dominant / subdominant.max(1e-300)))
}

/// Limiting tangent direction at a finite end, from the dual parameters.
fn expected_end_direction(tf: &TransferFunction) -> Option<(Complex64, f64)> {
    let dual = tf.dual();
    let series = deviation_series(&dual, default_order(&dual));
    let (k, h) = (series.first_nonzero_odd()?, series.first_nonzero_even()?);
    let g0 = nyqual_core::scalar::to_f64(&dual.g_low());
    let vk = nyqual_core::scalar::to_f64(series.value(k));
    let vh = nyqual_core::scalar::to_f64(series.value(h));
    let omega: f64 = 1e6;
    let odd_term = (k as f64) * vk.abs() / omega.powi(k as i32 + 1);
    let even_term = (h as f64) * vh.abs() / omega.powi(h as i32 + 1);
    let (dominant, subdominant, direction) = if k < h {
        (odd_term, even_term, Complex64::new(0.0, (g0 * vk).signum()))
    } else {
        (even_term, odd_term, Complex64::new(-(g0 * vh).signum(), 0.0))
    };
    if !(dominant.is_finite() && subdominant.is_finite()) {
        return None;
    }
    Some((direction, dominant / subdominant.max(1e-300)))
}

#[test]
fn tangent_directions_match_classification_at_finite_endpoints() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let five_degrees = 5.0_f64.to_radians();
    let dominance_floor = 1e5;
    let mut start_checked = 0;
    let mut end_checked = 0;
    for _ in 0..400 {
        let tf = nyqual_core::verify::random_tf_with_origin_poles(&mut rng, 0);
        let (start_tangent, end_tangent) = tangent_vectors(&tf);
        if let Some((expected, dominance)) = expected_start_direction(&tf) {
            if dominance >= dominance_floor {
                let angle = (start_tangent.direction / expected).arg().abs();
                assert!(
                    angle <= five_degrees,
                    "start tangent off by {:.2}° for {tf}",
                    angle.to_degrees()
                );
                start_checked += 1;
            }
        }
        if tf.relative_degree() == 0 {
            if let Some((expected, dominance)) = expected_end_direction(&tf) {
                if dominance >= dominance_floor {
                    let angle = (end_tangent.direction / expected).arg().abs();
                    assert!(
                        angle <= five_degrees,
                        "end tangent off by {:.2}° for {tf}",
                        angle.to_degrees()
                    );
                    end_checked += 1;
                }
            }
        }
    }
    assert!(start_checked > 200, "only {start_checked} start checks engaged");
    assert!(end_checked > 10, "only {end_checked} end checks engaged");
}

#[test]
fn case_study_tangents_match_their_archetypes() {
    // First case study: parallel exit toward smaller real parts, and a
    // perpendicular entry rising onto the final point.
    let tf = TransferFunction::parse("(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)").unwrap();
    let (start, end) = tangent_vectors(&tf);
    let one_degree = 1.0_f64.to_radians();
    let exit_angle = (start.direction / Complex64::new(-1.0, 0.0)).arg().abs();
    assert!(exit_angle <= one_degree, "exit off by {:.3}°", exit_angle.to_degrees());
    let entry_angle = (end.direction / Complex64::new(0.0, 1.0)).arg().abs();
    assert!(entry_angle <= one_degree, "entry off by {:.3}°", entry_angle.to_degrees());

    // 1/(1+s): straight-down exit.
    let lag = TransferFunction::parse("1/(1+s)").unwrap();
    let (start, _) = tangent_vectors(&lag);
    assert!((start.direction - Complex64::new(0.0, -1.0)).norm() < 2e-3);
}

#[test]
fn tangents_are_unit_vectors_and_sweep_phase_is_continuous() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let tf = nyqual_core::verify::random_tf(&mut rng);
        let (start, end) = tangent_vectors(&tf);
        assert!((start.direction.norm() - 1.0).abs() < 1e-9);
        assert!((end.direction.norm() - 1.0).abs() < 1e-9);
        let samples = sweep(&tf, 1e-3, 1e3, 40).unwrap();
        assert!(samples.windows(2).all(|w| w[0].omega < w[1].omega));
        for w in samples.windows(2) {
            let step = (w[1].phase_unwrapped - w[0].phase_unwrapped).abs();
            assert!(
                step < std::f64::consts::PI,
                "phase step {step} at ω = {} for {tf}",
                w[1].omega
            );
        }
    }
}
