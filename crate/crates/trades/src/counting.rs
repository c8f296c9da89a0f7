//! Counting bounds for balanced pairings.
//!
//! The exact number of balanced pairings of {1, ..., v} grows too fast to
//! tabulate far; this module brackets it. The lower bound counts only the
//! pairings that refine the canonical consecutive-fours matching. The
//! upper estimate counts sum-matched partners for one perfect matching
//! class via a constrained-composition probability and multiplies by the
//! number of ways to match 2-sets, using the leading-order asymptotic for
//! the integer partition function.

use std::f64::consts::PI;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Exact count (when known) bracketed by the two bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct CountBounds {
    pub exact: Option<BigUint>,
    pub lower: BigUint,
    pub upper_asymptotic: f64,
}

/// Assembles [`CountBounds`] for ground size `v`. Pass the exact count if
/// an enumeration has produced one.
pub fn counting_bounds(v: u32, exact: Option<BigUint>) -> Result<CountBounds> {
    Ok(CountBounds {
        exact,
        lower: pairing_count_lower_bound(v)?,
        upper_asymptotic: pairing_count_upper_asymptotic(v)?,
    })
}

/// (2n)! / (n! 2^n) for n = v/4: the number of perfect matchings on the
/// n companion pairs of the canonical family, each of which induces a
/// distinct balanced pairing.
pub fn pairing_count_lower_bound(v: u32) -> Result<BigUint> {
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 4 {
        return Err(Error::GroundTooSmall { v, min: 4 });
    }
    let n = (v / 4) as u64;
    Ok(factorial(2 * n) / (factorial(n) << n))
}

/// Leading-order asymptotic for the partition function:
/// p(n) ~ exp(pi sqrt(2n/3)) / (4 n sqrt(3)).
pub fn partition_number_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    (PI * (2.0 * nf / 3.0).sqrt()).exp() / (4.0 * nf * 3f64.sqrt())
}

/// Asymptotic upper estimate for the number of balanced pairings of
/// {1, ..., v}.
///
/// With s = v(v+1)/2, the estimate is the number of ways to write s as
/// an ordered sum of v/2 parts conditioned to form matchable 2-set sums,
/// multiplied by p(s) and by the (v/2)^{v/2} / (v/2)! ways to assign
/// parts to 2-sets. All factors are evaluated in the log domain and
/// exponentiated once.
pub fn pairing_count_upper_asymptotic(v: u32) -> Result<f64> {
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 8 {
        return Err(Error::GroundTooSmall { v, min: 8 });
    }
    let s = (v as u64) * (v as u64 + 1) / 2;
    let sf = s as f64;
    let ln_lambda = -PI * (1.0 / (6.0 * sf)).sqrt();
    let lambda = ln_lambda.exp();

    let ln_composition = ln_binomial((v / 4 + 2 * v - 8) as u64, (2 * v - 8) as u64)
        + sf * ln_lambda
        + euler_product_ln(lambda, s);
    let ln_partitions = partition_number_asymptotic(s).ln();
    let half = (v / 2) as f64;
    let ln_assignments = half * half.ln() - ln_factorial((v / 2) as u64);

    Ok((ln_composition + ln_partitions + ln_assignments).exp())
}

/// ln of prod_{i=1..s} (1 - lambda^i); terms below 1e-18 are negligible
/// and the loop stops early.
pub(crate) fn euler_product_ln(lambda: f64, s: u64) -> f64 {
    let mut power = lambda;
    let mut total = 0.0;
    for _ in 0..s {
        if power < 1e-18 {
            break;
        }
        total += (-power).ln_1p();
        power *= lambda;
    }
    total
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_values() {
        let expect = |v: u32, n: u64| {
            assert_eq!(pairing_count_lower_bound(v).unwrap(), BigUint::from(n));
        };
        expect(4, 1);
        expect(8, 3);
        expect(12, 15);
        expect(16, 105);
        expect(20, 945);
    }

    #[test]
    fn lower_bound_rejects_bad_v() {
        assert!(pairing_count_lower_bound(6).is_err());
        assert!(pairing_count_lower_bound(0).is_err());
    }

    #[test]
    fn partition_asymptotic_at_one() {
        let expected = (PI * (2.0f64 / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt());
        assert!((partition_number_asymptotic(1) - expected).abs() < 1e-12);
        assert!((partition_number_asymptotic(1) - 1.88).abs() < 0.01);
    }

    #[test]
    fn partition_asymptotic_near_exact_at_100() {
        let exact = 190_569_292.0;
        let estimate = partition_number_asymptotic(100);
        assert!((estimate / exact - 1.0).abs() < 0.05);
    }

    #[test]
    fn partition_asymptotic_is_increasing() {
        let mut previous = partition_number_asymptotic(1);
        for n in 2..=2000 {
            let value = partition_number_asymptotic(n);
            assert!(value > previous, "decrease at n = {n}");
            previous = value;
        }
    }

    #[test]
    fn euler_product_factor_is_a_probability() {
        for v in [8u32, 12, 16, 20, 24, 28, 32] {
            let s = (v as u64) * (v as u64 + 1) / 2;
            let lambda = (-PI * (1.0 / (6.0 * s as f64)).sqrt()).exp();
            let factor = euler_product_ln(lambda, s).exp();
            assert!(factor > 0.0 && factor < 1.0, "v = {v}: {factor}");
        }
    }

    #[test]
    fn upper_estimate_dominates_known_counts() {
        let at_12 = pairing_count_upper_asymptotic(12).unwrap();
        let at_16 = pairing_count_upper_asymptotic(16).unwrap();
        assert!(at_12 > 86.0, "{at_12}");
        assert!(at_16 > 1990.0, "{at_16}");
        // regression anchor, first recorded from this implementation
        assert!((at_12 - 768.9911263478).abs() < 1e-4, "{at_12}");
    }

    #[test]
    fn upper_estimate_grows_with_v() {
        let mut previous = 0.0;
        for v in (8..=32).step_by(4) {
            let value = pairing_count_upper_asymptotic(v).unwrap();
            assert!(value.is_finite() && value > previous, "v = {v}");
            previous = value;
        }
    }

    #[test]
    fn bounds_bracket_the_exact_count() {
        let bounds = counting_bounds(12, Some(BigUint::from(86u32))).unwrap();
        assert_eq!(bounds.lower, BigUint::from(15u32));
        let exact = bounds.exact.unwrap();
        assert!(bounds.lower <= exact);
        assert!(bounds.upper_asymptotic > 86.0);
    }
}
