//! Balanced pairings: partitions of {1, ..., v} into companion pairs of
//! 2-point sets with matching sums.
//!
//! A balanced pairing is a defining-set family in which every set has
//! exactly two points, the tail is empty, and the two sets of each
//! companion pair have the same sum. Trades built from such a family
//! have all block sums equal, so their block discrepancy is zero.

use crate::defining_sets::DefiningSets;
use crate::error::{Error, Result};

/// One companion pair: two 2-point sets, each as (low, high).
pub type CompanionPair = ((u32, u32), (u32, u32));

/// A balanced pairing in canonical form: points within a set ascending,
/// the set with the smaller minimum first within a pair, pairs ordered
/// by their minima. Canonical form makes equality and ordering of
/// pairings meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BalancedPairing {
    v: u32,
    pairs: Vec<CompanionPair>,
}

impl BalancedPairing {
    pub fn new(v: u32, pairs: Vec<CompanionPair>) -> Result<Self> {
        if !v.is_multiple_of(4) {
            return Err(Error::NotDivisibleByFour { v });
        }
        if pairs.len() != v as usize / 4 {
            return Err(Error::InvalidPairing(format!(
                "{} companion pairs cannot partition {v} points",
                pairs.len()
            )));
        }
        let mut canonical: Vec<CompanionPair> = pairs
            .into_iter()
            .map(|(first, second)| {
                let sort = |(x, y): (u32, u32)| (x.min(y), x.max(y));
                let (first, second) = (sort(first), sort(second));
                if first.0 <= second.0 {
                    (first, second)
                } else {
                    (second, first)
                }
            })
            .collect();
        canonical.sort_unstable();

        let mut seen = vec![false; v as usize + 1];
        for &((a, b), (c, d)) in &canonical {
            for point in [a, b, c, d] {
                if point < 1 || point > v {
                    return Err(Error::InvalidPairing(format!(
                        "point {point} is outside 1..={v}"
                    )));
                }
                if seen[point as usize] {
                    return Err(Error::InvalidPairing(format!("point {point} appears twice")));
                }
                seen[point as usize] = true;
            }
            if a + b != c + d {
                return Err(Error::InvalidPairing(format!(
                    "sets {{{a},{b}}} and {{{c},{d}}} have sums {} and {}",
                    a + b,
                    c + d
                )));
            }
        }
        Ok(BalancedPairing {
            v,
            pairs: canonical,
        })
    }

    pub(crate) fn new_unchecked(v: u32, pairs: Vec<CompanionPair>) -> Self {
        BalancedPairing { v, pairs }
    }

    /// Reads a cardinality-2, empty-tail, balanced family as a pairing.
    pub fn from_sets(sets: &DefiningSets) -> Result<Self> {
        if !sets.tail().is_empty() {
            return Err(Error::InvalidPairing(format!(
                "tail has {} points, expected none",
                sets.tail().len()
            )));
        }
        let pairs = sets
            .pairs()
            .iter()
            .map(|(left, right)| match (left.as_slice(), right.as_slice()) {
                (&[a, b], &[c, d]) => Ok(((a, b), (c, d))),
                _ => Err(Error::InvalidPairing(format!(
                    "sets of sizes {} and {}, expected 2 and 2",
                    left.len(),
                    right.len()
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BalancedPairing::new(sets.v(), pairs)
    }

    pub fn to_sets(&self) -> DefiningSets {
        let pairs = self
            .pairs
            .iter()
            .map(|&((a, b), (c, d))| (vec![a, b], vec![c, d]))
            .collect();
        DefiningSets::new(self.v, pairs, Vec::new())
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn companion_pairs(&self) -> &[CompanionPair] {
        &self.pairs
    }

    /// Strength of the trade the pairing defines: one less than the
    /// number of companion pairs.
    pub fn strength(&self) -> u32 {
        self.pairs.len() as u32 - 1
    }
}

/// Calls `visitor` with every balanced pairing of {1, ..., v} and returns
/// how many there are. Pairings arrive in increasing canonical order, and
/// the count does not depend on what the visitor does.
///
/// The enumeration walks a search tree: the lowest unplaced point is
/// grouped with each possible partner, and each candidate companion set
/// with the matching sum is tried in turn.
pub fn enumerate_balanced_pairings<F: FnMut(&BalancedPairing)>(
    v: u32,
    mut visitor: F,
) -> Result<u64> {
    enumerate_balanced_pairings_while(v, |pairing| {
        visitor(pairing);
        true
    })
}

/// Enumeration variant whose visitor may stop early by returning `false`.
/// The returned count covers only the pairings visited.
pub(crate) fn enumerate_balanced_pairings_while<F: FnMut(&BalancedPairing) -> bool>(
    v: u32,
    visitor: F,
) -> Result<u64> {
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 4 {
        return Err(Error::GroundTooSmall { v, min: 4 });
    }
    if v > 64 {
        return Err(Error::GroundTooLarge { v, max: 64 });
    }
    let mut walk = Walk {
        v,
        acc: Vec::with_capacity(v as usize / 4),
        count: 0,
        keep_going: true,
        visitor,
    };
    let all = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
    walk.descend(all);
    Ok(walk.count)
}

struct Walk<F> {
    v: u32,
    acc: Vec<CompanionPair>,
    count: u64,
    keep_going: bool,
    visitor: F,
}

impl<F: FnMut(&BalancedPairing) -> bool> Walk<F> {
    fn descend(&mut self, avail: u64) {
        if avail == 0 {
            self.count += 1;
            let pairing = BalancedPairing::new_unchecked(self.v, self.acc.clone());
            self.keep_going = (self.visitor)(&pairing);
            return;
        }
        let bit = |point: u32| 1u64 << (point - 1);
        let a = avail.trailing_zeros() + 1;
        let rest0 = avail & (avail - 1);
        let mut b_bits = rest0;
        while b_bits != 0 && self.keep_going {
            let b = b_bits.trailing_zeros() + 1;
            b_bits &= b_bits - 1;
            let target = a + b;
            let rest1 = rest0 & !bit(b);
            let mut c_bits = rest1;
            while c_bits != 0 && self.keep_going {
                let c = c_bits.trailing_zeros() + 1;
                c_bits &= c_bits - 1;
                if 2 * c >= target {
                    break;
                }
                let d = target - c;
                if d <= self.v && rest1 & bit(d) != 0 {
                    self.acc.push(((a, b), (c, d)));
                    self.descend(rest1 & !bit(c) & !bit(d));
                    self.acc.pop();
                }
            }
        }
    }
}
