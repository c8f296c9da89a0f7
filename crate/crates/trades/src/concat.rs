//! Concatenated constructions: robust pairings for large point counts
//! assembled from optimal patterns on 24 or fewer points.
//!
//! The points 1..=v are cut into consecutive groups and each group gets
//! a shifted copy of a pattern whose worst case is known. Swaps inside a
//! group are covered by the pattern's guarantee; a swap straddling two
//! groups adds at most 2p, and at most one straddle fits per junction,
//! which yields the closed-form guarantee tables below.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::defining_sets::DefiningSets;
use crate::error::{Error, Result};
use crate::pairing::BalancedPairing;
use crate::search::first_pairing_with_worst_at_most;

/// Guarantee for a concatenated family on v points: with m full groups
/// and a remainder of m_prime points, the worst-case total set
/// discrepancy is at most `guaranteed` = 12m + delta (p = 1) or
/// 26m + delta (p = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatGuarantee {
    pub m: u32,
    pub m_prime: u32,
    pub delta: i64,
    pub guaranteed: u64,
}

const FULL_GROUP: [u32; 2] = [24, 20]; // per magnitude p = 1, 2
const JUNCTION: [u64; 2] = [2, 4];

fn delta_for(p: u32, m_prime: u32) -> i64 {
    match (p, m_prime) {
        (1, 0) => -2,
        (1, 4) => 2,
        (1, 8) => 4,
        (1, 12) => 6,
        (1, 16) => 6,
        (1, 20) => 8,
        (2, 0) => -4,
        (2, 4) => 4,
        (2, 8) => 8,
        (2, 12) => 12,
        (2, 16) => 18,
        _ => unreachable!("m_prime is a multiple of 4 below the group size"),
    }
}

/// Worst case each group of the given size must attain for the table to
/// hold. These equal the true optima on the group sizes in use.
fn group_target(size: u32, p: u32) -> u64 {
    match (p, size) {
        (1, 12) => 6,
        (1, 16) => 6,
        (1, 20) => 8,
        (1, 24) => 10,
        (2, 4) => 4,
        (2, 8) => 8,
        (2, 12) => 12,
        (2, 16) => 18,
        (2, 20) => 22,
        _ => unreachable!("layouts only emit supported group sizes"),
    }
}

fn layout(v: u32, p: u32) -> (Vec<u32>, u32, u32) {
    let full = FULL_GROUP[p as usize - 1];
    let m = v / full;
    let m_prime = v - m * full;
    let mut groups = Vec::new();
    match (p, m_prime) {
        (1, 4) => {
            groups.extend(std::iter::repeat_n(24, m as usize - 1));
            groups.extend([16, 12]);
        }
        (1, 8) => {
            groups.extend(std::iter::repeat_n(24, m as usize - 1));
            groups.extend([20, 12]);
        }
        (_, 0) => groups.extend(std::iter::repeat_n(full, m as usize)),
        _ => {
            groups.extend(std::iter::repeat_n(full, m as usize));
            groups.push(m_prime);
        }
    }
    (groups, m, m_prime)
}

/// The guarantee alone, without building the family.
pub fn concat_guarantee(v: u32, p: u32) -> Result<ConcatGuarantee> {
    if p != 1 && p != 2 {
        return Err(Error::UnsupportedMagnitude { p });
    }
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 12 {
        return Err(Error::GroundTooSmall { v, min: 12 });
    }
    let (groups, m, m_prime) = layout(v, p);
    let delta = delta_for(p, m_prime);
    let per_group = if p == 1 { 12 } else { 26 };
    let guaranteed = (per_group * m as i64 + delta) as u64;

    // the closed form must agree with summing the layout directly
    let direct: u64 = groups.iter().map(|&size| group_target(size, p)).sum::<u64>()
        + JUNCTION[p as usize - 1] * (groups.len() as u64 - 1);
    debug_assert_eq!(guaranteed, direct);

    Ok(ConcatGuarantee {
        m,
        m_prime,
        delta,
        guaranteed,
    })
}

fn pattern_cache() -> &'static Mutex<HashMap<(u32, u32), BalancedPairing>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), BalancedPairing>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A pairing of {1, ..., size} attaining the group target, found by
/// scanning the enumeration for the first sufficient pairing. Cached per
/// (size, p).
pub(crate) fn group_pattern(size: u32, p: u32) -> Result<BalancedPairing> {
    if let Some(pattern) = pattern_cache().lock().unwrap().get(&(size, p)) {
        return Ok(pattern.clone());
    }
    let target = group_target(size, p);
    let Some((pattern, _)) = first_pairing_with_worst_at_most(size, p, target)? else {
        return Err(Error::PatternNotFound { size, p, target });
    };
    pattern_cache()
        .lock()
        .unwrap()
        .insert((size, p), pattern.clone());
    Ok(pattern)
}

/// Builds a balanced family on v points whose worst-case total set
/// discrepancy under magnitude-p swaps is at most the returned
/// guarantee. Requires v divisible by 4, v >= 12, p in {1, 2}.
pub fn build_concatenated(v: u32, p: u32) -> Result<(DefiningSets, ConcatGuarantee)> {
    let guarantee = concat_guarantee(v, p)?;
    let (groups, _, _) = layout(v, p);
    let mut pairs = Vec::with_capacity(v as usize / 4);
    let mut offset = 0;
    for size in groups {
        let pattern = group_pattern(size, p)?;
        for &((a, b), (c, d)) in pattern.companion_pairs() {
            pairs.push((vec![a + offset, b + offset], vec![c + offset, d + offset]));
        }
        offset += size;
    }
    Ok((DefiningSets::new(v, pairs, Vec::new()), guarantee))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::worst_case_discrepancy;

    #[test]
    fn guarantee_table_magnitude_one() {
        let cases = [
            (12, 0, 12, 6, 6),
            (16, 0, 16, 6, 6),
            (20, 0, 20, 8, 8),
            (24, 1, 0, -2, 10),
            (28, 1, 4, 2, 14),
            (32, 1, 8, 4, 16),
            (36, 1, 12, 6, 18),
            (40, 1, 16, 6, 18),
            (44, 1, 20, 8, 20),
            (48, 2, 0, -2, 22),
            (52, 2, 4, 2, 26),
        ];
        for (v, m, m_prime, delta, guaranteed) in cases {
            let guarantee = concat_guarantee(v, 1).unwrap();
            assert_eq!(
                guarantee,
                ConcatGuarantee {
                    m,
                    m_prime,
                    delta,
                    guaranteed,
                },
                "v = {v}"
            );
        }
    }

    #[test]
    fn guarantee_table_magnitude_two() {
        let cases = [
            (12, 0, 12, 12, 12),
            (16, 0, 16, 18, 18),
            (20, 1, 0, -4, 22),
            (24, 1, 4, 4, 30),
            (28, 1, 8, 8, 34),
            (32, 1, 12, 12, 38),
            (36, 1, 16, 18, 44),
            (40, 2, 0, -4, 48),
        ];
        for (v, m, m_prime, delta, guaranteed) in cases {
            let guarantee = concat_guarantee(v, 2).unwrap();
            assert_eq!(
                guarantee,
                ConcatGuarantee {
                    m,
                    m_prime,
                    delta,
                    guaranteed,
                },
                "v = {v}"
            );
        }
    }

    #[test]
    fn rejects_unsupported_parameters() {
        assert!(matches!(
            build_concatenated(8, 1),
            Err(Error::GroundTooSmall { v: 8, min: 12 })
        ));
        assert!(matches!(
            build_concatenated(26, 1),
            Err(Error::NotDivisibleByFour { v: 26 })
        ));
        assert!(matches!(
            build_concatenated(24, 3),
            Err(Error::UnsupportedMagnitude { p: 3 })
        ));
    }

    #[test]
    fn single_group_meets_its_target_exactly() {
        let (sets, guarantee) = build_concatenated(16, 1).unwrap();
        assert_eq!(guarantee.guaranteed, 6);
        BalancedPairing::from_sets(&sets).unwrap();
        let report = worst_case_discrepancy(&sets, 1).unwrap();
        assert_eq!(report.value, 6);
    }

    #[test]
    fn two_groups_stay_within_guarantee() {
        let (sets, guarantee) = build_concatenated(28, 1).unwrap();
        assert_eq!(guarantee.guaranteed, 14);
        let pairing = BalancedPairing::from_sets(&sets).unwrap();
        assert_eq!(pairing.v(), 28);
        let report = worst_case_discrepancy(&sets, 1).unwrap();
        assert!(report.value <= 14, "worst case {}", report.value);
    }

    #[test]
    fn concatenated_family_covers_every_point() {
        let (sets, _) = build_concatenated(28, 1).unwrap();
        let mut seen = [false; 29];
        for (_, set) in sets.iter_sets() {
            for &element in set {
                assert!(!seen[element as usize]);
                seen[element as usize] = true;
            }
        }
        assert!(seen[1..].iter().all(|&covered| covered));
    }

    #[test]
    fn magnitude_two_single_groups() {
        for (v, expected) in [(12u32, 12u64), (16, 18)] {
            let (sets, guarantee) = build_concatenated(v, 2).unwrap();
            assert_eq!(guarantee.guaranteed, expected);
            let report = worst_case_discrepancy(&sets, 2).unwrap();
            assert_eq!(report.value, expected);
        }
    }
}
