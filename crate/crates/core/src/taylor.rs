//! Taylor coefficient machinery for the origin-free part of a transfer
//! function: determinant tables, the two coefficient recursions, the series
//! division route, and the normalized deviation parameters that drive the
//! endpoint classification.
//!
//! Three interchangeable coefficient engines live behind
//! [`CoefficientMethod`] and are registered by name in [`methods`]:
//!
//! * `series-division` — long division of power series (the reference route),
//! * `full-recursion`  — determinant-based recursion over all indices
//!   (the production route),
//! * `odd-recursion`   — an independent recursion that reaches only the odd
//!   indices, kept as a cross-check because its arithmetic shares nothing
//!   with the other two beyond the coefficients themselves.
//!
//! All tables built over the same function agree exactly on shared indices;
//! the verification layer and the acceptance suite both enforce this.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{imag_part_poly, series_div};
use crate::scalar::{sign, Scalar};
use crate::xfer::TransferFunction;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaylorError {
    #[error("index {0} is not odd")]
    OddIndexRequired(usize),
    #[error("closed form needs all odd coefficients below {k} to vanish; index {bad} is nonzero")]
    HypothesisViolated { k: usize, bad: usize },
}

/// `a_i·b_j − a_j·b_i` over the origin-free numerator/denominator, with
/// coefficients zero-extended beyond the stored degrees.
pub fn cross_det(tf: &TransferFunction, i: usize, j: usize) -> Scalar {
    let a = tf.num();
    let b = tf.den();
    a.coeff(i) * b.coeff(j) - a.coeff(j) * b.coeff(i)
}

/// Alternating sum `Σ_{j=0}^{(k−1)/2} (−1)^j · cross_det(k−j, j)` for odd
/// `k`; the determinant combination that drives the odd-index recursion.
pub fn cross_det_alt_sum(tf: &TransferFunction, k: usize) -> Result<Scalar, TaylorError> {
    if k.is_multiple_of(2) {
        return Err(TaylorError::OddIndexRequired(k));
    }
    let mut acc = Scalar::zero();
    for j in 0..=(k - 1) / 2 {
        let term = cross_det(tf, k - j, j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `b_h² + 2·Σ_{j=1}^{h} (−1)^j b_{h−j}·b_{h+j}` for `h ≥ 1`.
///
/// Equals the coefficient of `ω^{2h}` in `|den(jω)|²`, which
/// [`CrossDetTable`] uses as an internal consistency check.
pub fn den_sq_coeff(tf: &TransferFunction, h: usize) -> Scalar {
    let b = tf.den();
    let mut acc = b.coeff(h).clone() * b.coeff(h);
    for j in 1..=h {
        let term = b.coeff(h - j) * b.coeff(h + j) * Scalar::from_integer(2.into());
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Materialized determinant tables up to a chosen index.
#[derive(Clone, Debug)]
pub struct CrossDetTable {
    max_index: usize,
    det: Vec<Vec<Scalar>>,
    alt_sums: Vec<Scalar>,
    den_sq: Vec<Scalar>,
}

impl CrossDetTable {
    pub fn compute(tf: &TransferFunction, max_index: usize) -> Self {
        let det = (0..=max_index)
            .map(|i| (0..=max_index).map(|j| cross_det(tf, i, j)).collect())
            .collect();
        let alt_sums = (0..=max_index)
            .map(|k| {
                if k % 2 == 1 {
                    cross_det_alt_sum(tf, k).unwrap()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        let den_sq = (0..=max_index).map(|h| den_sq_coeff(tf, h)).collect();
        Self {
            max_index,
            det,
            alt_sums,
            den_sq,
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn det(&self, i: usize, j: usize) -> &Scalar {
        &self.det[i][j]
    }

    /// Alternating determinant sum for odd `k`.
    pub fn alt_sum(&self, k: usize) -> &Scalar {
        debug_assert!(k % 2 == 1);
        &self.alt_sums[k]
    }

    pub fn den_sq(&self, h: usize) -> &Scalar {
        &self.den_sq[h]
    }
}

/// Which engine produced a Taylor table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaylorSource {
    SeriesDivision,
    FullRecursion,
    OddRecursion,
}

/// Taylor coefficients of the origin-free part at `s = 0`.
///
/// Entries are `None` where the producing engine does not reach (the odd
/// recursion covers index 0 and the odd indices only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorTable {
    entries: Vec<Option<Scalar>>,
    source: TaylorSource,
}

impl TaylorTable {
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn source(&self) -> TaylorSource {
        self.source
    }

    /// Coefficient `k`, if this table's engine produces it.
    pub fn get(&self, k: usize) -> Option<&Scalar> {
        self.entries.get(k).and_then(Option::as_ref)
    }

    /// Exact agreement on every index both tables populate.
    pub fn agrees_with(&self, other: &TaylorTable) -> bool {
        let shared = self.entries.len().min(other.entries.len());
        (0..shared).all(|k| match (self.get(k), other.get(k)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
    }

    /// Testing hook: perturbs entry `k` so downstream agreement checks must
    /// fail. Drives the verification failure path end to end.
    pub fn corrupt_entry(&mut self, k: usize) {
        if let Some(Some(v)) = self.entries.get_mut(k) {
            *v += Scalar::one();
        }
    }
}

/// A strategy for producing Taylor coefficient tables.
pub trait CoefficientMethod: Sync {
    /// Registry name, usable from the command line.
    fn name(&self) -> &'static str;

    fn source(&self) -> TaylorSource;

    /// Whether the engine produces every index up to the order (rather
    /// than a subset).
    fn complete(&self) -> bool {
        true
    }

    /// Builds the coefficient table for the origin-free part of `tf`.
    fn table(&self, tf: &TransferFunction, order: usize) -> TaylorTable;
}

/// Long division of power series.
pub struct SeriesDivision;

impl CoefficientMethod for SeriesDivision {
    fn name(&self) -> &'static str {
        "series-division"
    }

    fn source(&self) -> TaylorSource {
        TaylorSource::SeriesDivision
    }

    fn table(&self, tf: &TransferFunction, order: usize) -> TaylorTable {
        let series = series_div(tf.num(), tf.den(), order)
            .expect("transfer functions have nonzero denominator constant terms");
        TaylorTable {
            entries: series.coeffs().iter().cloned().map(Some).collect(),
            source: TaylorSource::SeriesDivision,
        }
    }
}

/// Determinant-based recursion reaching every index: coefficient 0 is
/// `a₀/b₀` and
/// `G_k = (cross_det(k,0) − b₀·Σ_{j=1}^{k−1} G_{k−j}·b_j) / b₀²`.
pub struct FullRecursion;

impl CoefficientMethod for FullRecursion {
    fn name(&self) -> &'static str {
        "full-recursion"
    }

    fn source(&self) -> TaylorSource {
        TaylorSource::FullRecursion
    }

    fn table(&self, tf: &TransferFunction, order: usize) -> TaylorTable {
        let b = tf.den();
        let b0 = b.coeff(0);
        let b0_sq = &b0 * &b0;
        let mut g: Vec<Scalar> = Vec::with_capacity(order + 1);
        g.push(tf.g_low());
        for k in 1..=order {
            let mut acc = cross_det(tf, k, 0);
            let mut correction = Scalar::zero();
            for j in 1..k {
                correction += &g[k - j] * b.coeff(j);
            }
            acc -= &b0 * correction;
            g.push(acc / &b0_sq);
        }
        TaylorTable {
            entries: g.into_iter().map(Some).collect(),
            source: TaylorSource::FullRecursion,
        }
    }
}

/// Recursion reaching the odd indices only:
/// `G_k = (alt_sum(k) − Σ_{h=1}^{(k−1)/2} (−1)^h G_{k−2h}·den_sq(h)) / b₀²`.
///
/// Each odd coefficient depends only on earlier odd ones, so the engine is
/// self-contained; index 0 is included as the normalization anchor.
pub struct OddRecursion;

impl CoefficientMethod for OddRecursion {
    fn name(&self) -> &'static str {
        "odd-recursion"
    }

    fn source(&self) -> TaylorSource {
        TaylorSource::OddRecursion
    }

    fn complete(&self) -> bool {
        false
    }

    fn table(&self, tf: &TransferFunction, order: usize) -> TaylorTable {
        let b0 = tf.den().coeff(0);
        let b0_sq = &b0 * &b0;
        let mut entries: Vec<Option<Scalar>> = vec![None; order + 1];
        entries[0] = Some(tf.g_low());
        let mut odd: Vec<Scalar> = Vec::new(); // odd[i] = G_{2i+1}
        for k in (1..=order).step_by(2) {
            let mut acc = cross_det_alt_sum(tf, k).expect("odd index");
            for h in 1..=(k - 1) / 2 {
                let term = &odd[(k - 2 * h - 1) / 2] * den_sq_coeff(tf, h);
                if h % 2 == 0 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            let g_k = acc / &b0_sq;
            entries[k] = Some(g_k.clone());
            odd.push(g_k);
        }
        TaylorTable {
            entries,
            source: TaylorSource::OddRecursion,
        }
    }
}

/// The registered coefficient engines.
pub fn methods() -> [&'static dyn CoefficientMethod; 3] {
    [&SeriesDivision, &FullRecursion, &OddRecursion]
}

/// Looks up an engine by its registry name.
pub fn method_by_name(name: &str) -> Option<&'static dyn CoefficientMethod> {
    methods().into_iter().find(|m| m.name() == name)
}

/// Order that makes the first-nonzero searches below provably complete:
/// the imaginary-part polynomial has ω-degree ≤ m+n, and the real-part
/// deviation polynomial (in ω²) has degree ≤ max(m,n), so any nonzero odd
/// or even deviation index lies within this bound.
pub fn default_order(tf: &TransferFunction) -> usize {
    let m = tf.num_degree();
    let n = tf.den_degree();
    (m + n + 1).max(2 * m.max(n) + 1)
}

/// Normalized, sign-alternating Taylor coefficients
/// `values[k] = (−1)^⌊k/2⌋ · G_k/G₀` for `k ≥ 1`.
///
/// The first nonzero odd entry fixes the sign of the phase deviation near
/// the start point, the first nonzero even entry the direction of the
/// real-part (≈ modulus) deviation. Degenerate cases are decided by exact
/// structural polynomial tests rather than by running out of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationSeries {
    values: Vec<Scalar>,
    reported: usize,
    first_nonzero_odd: Option<usize>,
    first_nonzero_even: Option<usize>,
    degenerate_imag: bool,
    degenerate_modulus: bool,
}

impl DeviationSeries {
    /// Entry for `k ≥ 1`; available up to the internal scan bound even when
    /// a shorter table was requested, so the first-nonzero entries can
    /// always be read back.
    pub fn value(&self, k: usize) -> &Scalar {
        assert!(k >= 1, "deviation parameters start at index 1");
        &self.values[k - 1]
    }

    /// Entries `1..=order` as requested at construction.
    pub fn values(&self) -> &[Scalar] {
        &self.values[..self.reported]
    }

    pub fn order(&self) -> usize {
        self.reported
    }

    /// Smallest odd `k` with a nonzero entry; `None` iff the frequency
    /// response is real for every ω.
    pub fn first_nonzero_odd(&self) -> Option<usize> {
        self.first_nonzero_odd
    }

    /// Smallest even `k ≥ 2` with a nonzero entry; `None` iff the real part
    /// of the frequency response is constant.
    pub fn first_nonzero_even(&self) -> Option<usize> {
        self.first_nonzero_even
    }

    /// Exact test: the frequency response is real on the whole axis.
    pub fn degenerate_imag(&self) -> bool {
        self.degenerate_imag
    }

    /// Exact test: the frequency-response modulus is constant on the whole
    /// axis (all-pass behavior). Independent of `first_nonzero_even`; a
    /// constant modulus can coexist with nonzero even entries.
    pub fn degenerate_modulus(&self) -> bool {
        self.degenerate_modulus
    }
}

/// Builds the deviation series for the origin-free part of `tf` with
/// entries `1..=order`.
///
/// The first-nonzero searches always scan to [`default_order`] even when a
/// smaller table is requested, so the reported indices and the degeneracy
/// flags stay consistent regardless of the truncation.
pub fn deviation_series(tf: &TransferFunction, order: usize) -> DeviationSeries {
    let scan = order.max(default_order(tf));
    let table = FullRecursion.table(tf, scan);
    let g0 = table.get(0).unwrap().clone();
    let mut values = Vec::with_capacity(scan);
    for k in 1..=scan {
        let g_k = table.get(k).unwrap();
        let signed = if (k / 2) % 2 == 0 {
            g_k / &g0
        } else {
            -(g_k / &g0)
        };
        values.push(signed);
    }
    let first_nonzero_odd = (1..=scan)
        .step_by(2)
        .find(|&k| !values[k - 1].is_zero());
    let first_nonzero_even = (2..=scan)
        .step_by(2)
        .find(|&k| !values[k - 1].is_zero());

    let degenerate_imag = imag_part_poly(tf.num(), tf.den()).is_zero();
    // |num(jω)|²·b₀² − |den(jω)|²·a₀² ≡ 0 ⟺ |G(jω)| ≡ |G₀|.
    let a0 = tf.num().coeff(0);
    let b0 = tf.den().coeff(0);
    let deviation = &tf.num().modulus_sq_poly().scale(&(&b0 * &b0))
        - &tf.den().modulus_sq_poly().scale(&(&a0 * &a0));
    let degenerate_modulus = deviation.is_zero();

    debug_assert_eq!(first_nonzero_odd.is_none(), degenerate_imag);
    DeviationSeries {
        values,
        reported: order,
        first_nonzero_odd,
        first_nonzero_even,
        degenerate_imag,
        degenerate_modulus,
    }
}

/// Closed form for the deviation parameter at an odd index `k`:
/// `(−1)^{(k−1)/2} · alt_sum(k) / (a₀·b₀)`.
///
/// Valid only when every odd coefficient below `k` vanishes; the
/// hypothesis is checked and [`TaylorError::HypothesisViolated`] is
/// returned otherwise.
pub fn deviation_via_det_sum(tf: &TransferFunction, k: usize) -> Result<Scalar, TaylorError> {
    if k.is_multiple_of(2) {
        return Err(TaylorError::OddIndexRequired(k));
    }
    let table = OddRecursion.table(tf, k.max(1));
    for prior in (1..k).step_by(2) {
        if !table.get(prior).unwrap().is_zero() {
            return Err(TaylorError::HypothesisViolated { k, bad: prior });
        }
    }
    let alt = cross_det_alt_sum(tf, k)?;
    let denom = tf.num().coeff(0) * tf.den().coeff(0);
    let value = alt / denom;
    Ok(if ((k - 1) / 2).is_multiple_of(2) { value } else { -value })
}

/// Sign of the deviation entry `k`, convenience for the classifier.
pub fn deviation_sign(series: &DeviationSeries, k: usize) -> i8 {
    sign(series.value(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn case1() -> TransferFunction {
        TransferFunction::parse("(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)").unwrap()
    }

    fn case2() -> TransferFunction {
        TransferFunction::parse("(s^2+12s+35)/(s*(s^4+12s^3+30s^2+28s+9))").unwrap()
    }

    #[test]
    fn cross_det_values() {
        let tf = case1();
        assert_eq!(cross_det(&tf, 1, 0), int(0));
        assert_eq!(cross_det(&tf, 3, 0), int(-2));
        assert_eq!(cross_det(&tf, 2, 2), int(0));
        // Antisymmetry over a grid including zero-extended indices.
        for i in 0..=5 {
            for j in 0..=5 {
                assert_eq!(cross_det(&tf, i, j), -cross_det(&tf, j, i));
            }
        }
    }

    #[test]
    fn alt_sum_values() {
        let tf = case1();
        assert_eq!(cross_det_alt_sum(&tf, 1).unwrap(), int(0));
        assert_eq!(cross_det_alt_sum(&tf, 3).unwrap(), int(-4));
        assert_eq!(
            cross_det_alt_sum(&tf, 2),
            Err(TaylorError::OddIndexRequired(2))
        );
        let tf2 = case2();
        assert_eq!(cross_det_alt_sum(&tf2, 1).unwrap(), int(-872));
    }

    #[test]
    fn den_sq_coeff_values() {
        let tf = case1();
        assert_eq!(den_sq_coeff(&tf, 1), int(-6));
        assert_eq!(den_sq_coeff(&tf, 2), int(9));
        let flat = TransferFunction::parse("(1+s)/(1)").unwrap();
        assert_eq!(den_sq_coeff(&flat, 1), int(0));
    }

    #[test]
    fn den_sq_coeff_matches_modulus_polynomial() {
        let tf = case2();
        let msq = tf.den().modulus_sq_poly();
        for h in 0..=6 {
            assert_eq!(den_sq_coeff(&tf, h), msq.coeff(h), "mismatch at {h}");
        }
    }

    #[test]
    fn odd_recursion_values() {
        let tf = case1();
        let table = OddRecursion.table(&tf, 3);
        assert_eq!(table.get(1), Some(&int(0)));
        assert_eq!(table.get(3), Some(&int(-4)));
        assert_eq!(table.get(2), None);
        let lag = TransferFunction::parse("1/(1+s)").unwrap();
        assert_eq!(OddRecursion.table(&lag, 3).get(3), Some(&int(-1)));
    }

    #[test]
    fn full_recursion_values() {
        let tf = case1();
        let table = FullRecursion.table(&tf, 3);
        assert_eq!(table.get(0), Some(&int(1)));
        assert_eq!(table.get(2), Some(&int(1)));
        let tf2 = case2();
        assert_eq!(FullRecursion.table(&tf2, 1).get(1), Some(&ratio(-872, 81)));
    }

    #[test]
    fn engines_agree_on_case_studies() {
        for tf in [case1(), case2(), case1().dual(), case2().dual()] {
            let tables: Vec<TaylorTable> = methods().iter().map(|m| m.table(&tf, 12)).collect();
            for pair in tables.windows(2) {
                assert!(pair[0].agrees_with(&pair[1]));
            }
        }
    }

    #[test]
    fn deviation_series_case1() {
        let tf = case1();
        let dev = deviation_series(&tf, 6);
        assert_eq!(dev.value(1), &int(0));
        assert_eq!(dev.value(2), &int(-1));
        assert_eq!(dev.value(3), &int(4));
        assert_eq!(dev.first_nonzero_odd(), Some(3));
        assert_eq!(dev.first_nonzero_even(), Some(2));
        assert!(!dev.degenerate_imag());
        assert!(!dev.degenerate_modulus());

        let dual = deviation_series(&tf.dual(), 4);
        assert_eq!(dual.value(1), &ratio(7, 4));
        assert_eq!(dual.value(2), &ratio(27, 16));
    }

    #[test]
    fn deviation_series_case2() {
        let tf = case2();
        let dev = deviation_series(&tf, 4);
        assert_eq!(dev.value(1), &ratio(-872, 315));
        let dual = deviation_series(&tf.dual(), 4);
        assert_eq!(dual.value(1), &int(0));
        assert_eq!(dual.value(2), &int(-5));
        assert_eq!(dual.value(3), &int(88));
        assert_eq!(dual.first_nonzero_odd(), Some(3));
        assert_eq!(dual.first_nonzero_even(), Some(2));
    }

    #[test]
    fn real_response_is_degenerate() {
        let tf = TransferFunction::parse("(1+s^2)/(2+s^2)").unwrap();
        let dev = deviation_series(&tf, 8);
        assert!(dev.degenerate_imag());
        assert_eq!(dev.first_nonzero_odd(), None);
    }

    #[test]
    fn all_pass_modulus_is_degenerate_but_even_entries_are_not() {
        let tf = TransferFunction::parse("(1-s)/(1+s)").unwrap();
        let dev = deviation_series(&tf, 4);
        assert!(dev.degenerate_modulus());
        assert_eq!(dev.first_nonzero_even(), Some(2));
        assert_eq!(dev.value(2), &int(-2));
    }

    #[test]
    fn closed_form_matches_series() {
        let tf = case1();
        assert_eq!(deviation_via_det_sum(&tf, 3).unwrap(), int(4));
        assert_eq!(deviation_via_det_sum(&tf, 1).unwrap(), int(0));
        let tf2 = case2();
        assert_eq!(deviation_via_det_sum(&tf2, 1).unwrap(), ratio(-872, 315));
        // 1/(1+s) has G₁ = −1 ≠ 0, so the k=3 hypothesis fails.
        let lag = TransferFunction::parse("1/(1+s)").unwrap();
        assert_eq!(
            deviation_via_det_sum(&lag, 3),
            Err(TaylorError::HypothesisViolated { k: 3, bad: 1 })
        );
    }

    #[test]
    fn det_table_matches_free_functions() {
        let tf = case2();
        let table = CrossDetTable::compute(&tf, 6);
        for i in 0..=6 {
            assert!(table.det(i, i).is_zero());
            for j in 0..=6 {
                assert_eq!(table.det(i, j), &cross_det(&tf, i, j));
                assert_eq!(table.det(i, j), &-table.det(j, i).clone());
            }
        }
        for k in (1..=5).step_by(2) {
            assert_eq!(table.alt_sum(k), &cross_det_alt_sum(&tf, k).unwrap());
        }
        for h in 0..=6 {
            assert_eq!(table.den_sq(h), &den_sq_coeff(&tf, h));
        }
        assert_eq!(table.max_index(), 6);
    }

    #[test]
    fn alt_sum_is_signed_imag_poly_coefficient() {
        // The alternating determinant sum at odd k equals the signed
        // u^{(k-1)/2} coefficient of the imaginary-part polynomial — an
        // independent construction of the same quantity.
        for tf in [case1(), case2(), case1().dual(), case2().dual()] {
            let q = imag_part_poly(tf.num(), tf.den());
            for k in (1..=9usize).step_by(2) {
                let j = (k - 1) / 2;
                let signed = if j % 2 == 0 { q.coeff(j) } else { -q.coeff(j) };
                assert_eq!(cross_det_alt_sum(&tf, k).unwrap(), signed, "k = {k}");
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert!(method_by_name("full-recursion").is_some());
        assert!(method_by_name("series-division").is_some());
        assert!(method_by_name("odd-recursion").is_some_and(|m| !m.complete()));
        assert!(method_by_name("nope").is_none());
    }

    #[test]
    fn default_order_covers_both_searches() {
        let tf = case2();
        // m = 2, n = 4: imag degree ≤ 6, real deviation even index ≤ 8.
        assert_eq!(default_order(&tf), 9);
    }
}
