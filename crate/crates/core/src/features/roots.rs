//! Exact isolation of positive real polynomial roots.
//!
//! Sturm chains give provably complete root counts; bisection on exact
//! rationals then shrinks each isolating interval as far as the caller
//! needs. Multiplicities come from a square-free decomposition, so every
//! interval carries a simple root of its `factor` and a guaranteed sign
//! change at its endpoints.

use num_traits::Zero;

use crate::poly::Polynomial;
use crate::scalar::{sign, Scalar};

/// An isolating interval `(low, high)` for one distinct positive root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub low: Scalar,
    pub high: Scalar,
    /// Multiplicity of the root in the original polynomial.
    pub multiplicity: usize,
    /// Square-free factor with a simple root (and therefore a sign change)
    /// inside the interval; use it to refine further.
    pub factor: Polynomial,
}

impl IsolatedRoot {
    pub fn width(&self) -> Scalar {
        &self.high - &self.low
    }

    pub fn midpoint(&self) -> Scalar {
        (&self.low + &self.high) / Scalar::from_integer(2.into())
    }

    /// Halves the interval keeping the sign change, until `stop` says the
    /// interval is good enough or the iteration cap is reached.
    pub fn refine_until(&mut self, mut stop: impl FnMut(&Scalar, &Scalar) -> bool, cap: usize) {
        let mut lo_sign = sign(&self.factor.eval_rational(&self.low));
        debug_assert_ne!(lo_sign, 0);
        for _ in 0..cap {
            if stop(&self.low, &self.high) {
                break;
            }
            let mid = self.midpoint();
            let mid_sign = sign(&self.factor.eval_rational(&mid));
            if mid_sign == 0 {
                // Exact rational root: shrink symmetrically around it.
                let mut w = self.width() / Scalar::from_integer(4.into());
                self.low = &mid - &w;
                self.high = &mid + &w;
                for _ in 0..cap {
                    if stop(&self.low, &self.high) {
                        break;
                    }
                    w /= Scalar::from_integer(4.into());
                    self.low = &mid - &w;
                    self.high = &mid + &w;
                }
                break;
            }
            if mid_sign == lo_sign {
                self.low = mid;
                lo_sign = mid_sign;
            } else {
                self.high = mid;
            }
        }
    }
}

/// Sturm chain with each element scaled to integer coefficients (signs are
/// what matter; positive scaling preserves them).
fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.sign_normalized()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.sign_normalized());
    loop {
        let n = chain.len();
        let rem = chain[n - 2]
            .div_rem(&chain[n - 1])
            .expect("nonzero divisor in Sturm chain")
            .1;
        if rem.is_zero() {
            break;
        }
        chain.push((-&rem).sign_normalized());
    }
    chain
}

/// Number of sign variations of the chain at `x`, zeros skipped.
fn variations(chain: &[Polynomial], x: &Scalar) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let s = sign(&q.eval_rational(x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Picks a split point strictly inside `(lo, hi)` where `p` does not
/// vanish; tries the midpoint first, then a few offsets (a polynomial has
/// only finitely many roots, so one of them works).
fn split_point(p: &Polynomial, lo: &Scalar, hi: &Scalar) -> Scalar {
    let width = hi - lo;
    let deg = p.degree().unwrap_or(0);
    for i in 0..=(deg + 2) {
        let frac = Scalar::new((2 * i as i64 + 1).into(), (2 * (deg as i64 + 3)).into());
        let candidate = lo + &width * &frac;
        if !p.eval_rational(&candidate).is_zero() {
            return candidate;
        }
    }
    unreachable!("more roots than the degree allows");
}

/// Isolates every distinct positive root of `p` (roots at 0 are ignored),
/// returning disjoint intervals sorted by position, each tagged with its
/// multiplicity in `p`.
pub fn isolate_positive_roots(p: &Polynomial) -> Vec<IsolatedRoot> {
    assert!(!p.is_zero(), "cannot isolate roots of the zero polynomial");
    let v = p.valuation().unwrap_or(0);
    let reduced = p.shift_down(v);
    if reduced.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (factor, multiplicity) in reduced.square_free_decomposition() {
        for (low, high) in isolate_simple_positive_roots(&factor) {
            out.push(IsolatedRoot {
                low,
                high,
                multiplicity,
                factor: factor.clone(),
            });
        }
    }
    // Roots of distinct square-free factors never coincide, but their raw
    // intervals may overlap; shrink until the list is pairwise disjoint.
    out.sort_by(|a, b| a.low.cmp(&b.low));
    loop {
        let mut overlapped = false;
        for i in 1..out.len() {
            if out[i].low < out[i - 1].high {
                overlapped = true;
                let (left, right) = out.split_at_mut(i);
                let a = &mut left[i - 1];
                let b = &mut right[0];
                let target_a = a.width() / Scalar::from_integer(2.into());
                let target_b = b.width() / Scalar::from_integer(2.into());
                a.refine_until(|lo, hi| (hi - lo) <= target_a, 4);
                b.refine_until(|lo, hi| (hi - lo) <= target_b, 4);
            }
        }
        if !overlapped {
            break;
        }
        out.sort_by(|a, b| a.low.cmp(&b.low));
    }
    out
}

/// Sturm-based isolation for a square-free polynomial; intervals are
/// `(lo, hi)` open at both ends with a sign change across them.
fn isolate_simple_positive_roots(p: &Polynomial) -> Vec<(Scalar, Scalar)> {
    let chain = sturm_chain(p);
    let bound = p.root_bound();
    let zero = Scalar::zero();
    if p.eval_rational(&zero).is_zero() {
        // Callers strip zero roots first.
        unreachable!("square-free factor with a root at zero");
    }
    let mut intervals = Vec::new();
    // Work queue of (lo, hi] with p nonzero at both endpoints.
    let mut queue = vec![(zero.clone(), bound)];
    while let Some((lo, hi)) = queue.pop() {
        let n = variations(&chain, &lo).saturating_sub(variations(&chain, &hi));
        match n {
            0 => {}
            1 => intervals.push((lo, hi)),
            _ => {
                let mid = split_point(p, &lo, &hi);
                queue.push((lo, mid.clone()));
                queue.push((mid, hi));
            }
        }
    }
    intervals.sort_by(|a, b| a.0.cmp(&b.0));
    // Bisect once where needed so a sign change is strictly inside; a
    // Sturm interval (lo, hi] always has its root ≤ hi, and hi is not a
    // root (p(hi) ≠ 0 by the split-point choice and the Cauchy bound), so
    // the sign change is already present.
    for (lo, hi) in &intervals {
        debug_assert_ne!(sign(&p.eval_rational(lo)), 0);
        debug_assert_ne!(sign(&p.eval_rational(hi)), 0);
        debug_assert_ne!(
            sign(&p.eval_rational(lo)),
            sign(&p.eval_rational(hi)),
            "isolating interval must straddle its simple root"
        );
    }
    intervals
}
