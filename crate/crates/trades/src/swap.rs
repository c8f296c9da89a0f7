//! Popularity swaps: exchanges of nearby points.
//!
//! A swap exchanges two points whose distance is at most a magnitude
//! bound p; a swap set is a collection of swaps with pairwise disjoint
//! supports, applied simultaneously. Swaps model limited drift in the
//! popularity ranking the points stand for.

use std::collections::HashSet;

use crate::defining_sets::DefiningSets;
use crate::error::{Error, Result};

/// An exchange of two distinct points, stored as (lo, hi).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Swap {
    lo: u32,
    hi: u32,
}

impl Swap {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == j {
            return Err(Error::DegenerateSwap { point: i });
        }
        Ok(Swap {
            lo: i.min(j),
            hi: i.max(j),
        })
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    pub fn magnitude(&self) -> u32 {
        self.hi - self.lo
    }
}

/// Disjoint swaps of magnitude at most `magnitude`, kept sorted by
/// position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SwapSet {
    swaps: Vec<Swap>,
    magnitude: u32,
}

impl SwapSet {
    pub fn new(mut swaps: Vec<Swap>, magnitude: u32) -> Result<Self> {
        swaps.sort_unstable();
        let mut touched = HashSet::new();
        for swap in &swaps {
            if swap.magnitude() > magnitude {
                return Err(Error::SwapMagnitude {
                    lo: swap.lo,
                    hi: swap.hi,
                    p: magnitude,
                });
            }
            for point in [swap.lo, swap.hi] {
                if !touched.insert(point) {
                    return Err(Error::OverlappingSwaps { element: point });
                }
            }
        }
        Ok(SwapSet { swaps, magnitude })
    }

    pub fn empty(magnitude: u32) -> Self {
        SwapSet {
            swaps: Vec::new(),
            magnitude,
        }
    }

    pub fn swaps(&self) -> &[Swap] {
        &self.swaps
    }

    pub fn magnitude(&self) -> u32 {
        self.magnitude
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }
}

/// Calls `visitor` with every swap set on points 1..=v of magnitude at
/// most p and returns how many there are. The empty set is included.
/// Only p = 1 and p = 2 are supported.
///
/// Sets are emitted in a fixed order: at each point, leaving it fixed is
/// tried before swapping it with a partner 1 then p positions above.
pub fn enumerate_swap_sets<F: FnMut(&SwapSet)>(v: u32, p: u32, mut visitor: F) -> Result<u64> {
    if p != 1 && p != 2 {
        return Err(Error::UnsupportedMagnitude { p });
    }
    let mut used = vec![false; v as usize + 2];
    let mut acc = Vec::new();
    let mut count = 0;
    descend(1, v, p, &mut used, &mut acc, &mut count, &mut visitor);
    Ok(count)
}

fn descend<F: FnMut(&SwapSet)>(
    pos: u32,
    v: u32,
    p: u32,
    used: &mut Vec<bool>,
    acc: &mut Vec<Swap>,
    count: &mut u64,
    visitor: &mut F,
) {
    if pos > v {
        *count += 1;
        visitor(&SwapSet {
            swaps: acc.clone(),
            magnitude: p,
        });
        return;
    }
    if used[pos as usize] {
        descend(pos + 1, v, p, used, acc, count, visitor);
        return;
    }
    descend(pos + 1, v, p, used, acc, count, visitor);
    for delta in 1..=p {
        let partner = pos + delta;
        if partner > v || used[partner as usize] {
            continue;
        }
        used[partner as usize] = true;
        acc.push(Swap {
            lo: pos,
            hi: partner,
        });
        descend(pos + 1, v, p, used, acc, count, visitor);
        acc.pop();
        used[partner as usize] = false;
    }
}

/// Applies the swaps to every element of every set, returning the
/// relabelled family. The swap set guarantees disjointness, so the
/// result does not depend on application order; applying the same set
/// twice restores the original family.
pub fn apply_swaps(sets: &DefiningSets, swaps: &SwapSet) -> Result<DefiningSets> {
    let v = sets.v();
    for swap in swaps.swaps() {
        for point in [swap.lo, swap.hi] {
            if point < 1 || point > v {
                return Err(Error::PointOutOfRange { point, v });
            }
        }
    }
    let mut image: Vec<u32> = (0..=v).collect();
    for swap in swaps.swaps() {
        image[swap.lo as usize] = swap.hi;
        image[swap.hi as usize] = swap.lo;
    }
    let relabel = |set: &[u32]| set.iter().map(|&e| image[e as usize]).collect::<Vec<u32>>();
    let pairs = sets
        .pairs()
        .iter()
        .map(|(left, right)| (relabel(left), relabel(right)))
        .collect();
    Ok(DefiningSets::new(v, pairs, relabel(sets.tail())))
}

/// Total set discrepancy: the sum over companion pairs of the absolute
/// difference of the two set sums. Zero exactly when the family is
/// balanced.
pub fn set_discrepancy(sets: &DefiningSets) -> u64 {
    sets.pairs()
        .iter()
        .map(|(left, right)| {
            let sum = |set: &[u32]| set.iter().map(|&e| e as i64).sum::<i64>();
            (sum(left) - sum(right)).unsigned_abs()
        })
        .sum()
}
