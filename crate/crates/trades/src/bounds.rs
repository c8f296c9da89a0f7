//! Analytic lower bounds on the worst-case total set discrepancy of any
//! balanced pairing with t+1 companion pairs.

/// `general` holds for every t; `divisible_19` is the sharper bound
/// 14(t+1)/19, available exactly when 19 divides t+1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscrepancyLowerBounds {
    pub general: f64,
    pub divisible_19: Option<f64>,
}

pub fn discrepancy_lower_bounds(t: u32) -> DiscrepancyLowerBounds {
    let tf = t as f64;
    DiscrepancyLowerBounds {
        general: 2.0 / 3.0 * (tf + 2.0 / 3.0),
        divisible_19: (t + 1).is_multiple_of(19).then(|| 14.0 * (t as f64 + 1.0) / 19.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_bound_at_small_t() {
        let bounds = discrepancy_lower_bounds(2);
        assert!((bounds.general - 16.0 / 9.0).abs() < 1e-12);
        assert_eq!(bounds.divisible_19, None);
    }

    #[test]
    fn sharper_bound_when_19_divides() {
        let bounds = discrepancy_lower_bounds(18);
        assert!((bounds.general - 112.0 / 9.0).abs() < 1e-12);
        assert_eq!(bounds.divisible_19, Some(14.0));

        let bounds = discrepancy_lower_bounds(37);
        assert_eq!(bounds.divisible_19, Some(28.0));
    }

    #[test]
    fn divisibility_gate_is_exact() {
        for t in 0..60 {
            let bounds = discrepancy_lower_bounds(t);
            assert_eq!(bounds.divisible_19.is_some(), (t + 1) % 19 == 0, "t = {t}");
        }
    }
}
