//! Trade construction and the brute-force strength check.
//!
//! A (v, k, t) trade is a pair of disjoint, equally sized families of
//! k-point blocks in which every t-subset of points is contained in
//! equally many blocks of either family. The trades built here have the
//! minimum possible volume 2^t per side.

use std::collections::HashSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::defining_sets::{validate_defining_sets, DefiningSets, TradeParams};
use crate::error::{Error, Result};

/// A block: a set of points, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<u32>);

impl Block {
    pub fn new(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        for window in elements.windows(2) {
            if window[0] == window[1] {
                return Err(Error::RepeatedPoint { point: window[0] });
            }
        }
        Ok(Block(elements))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the points in the block.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&element| element as u64).sum()
    }

    /// True when every point of the sorted slice `subset` lies in the block.
    pub fn contains_all(&self, subset: &[u32]) -> bool {
        let mut elements = self.0.iter();
        'outer: for &wanted in subset {
            for &element in elements.by_ref() {
                if element == wanted {
                    continue 'outer;
                }
                if element > wanted {
                    return false;
                }
            }
            return false;
        }
        true
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<u32>::deserialize(deserializer)?;
        Block::new(elements).map_err(D::Error::custom)
    }
}

/// Two block families labelled by trade parameters.
///
/// Construction rejects repeated blocks within a side and points outside
/// 1..=v, but does not check the trade property itself; that is what
/// [`verify_trade`] is for, and it reports failures as `false` rather
/// than errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trade {
    params: TradeParams,
    side1: Vec<Block>,
    side2: Vec<Block>,
}

impl Trade {
    pub fn new(params: TradeParams, side1: Vec<Block>, side2: Vec<Block>) -> Result<Self> {
        for side in [&side1, &side2] {
            let mut seen = HashSet::new();
            for block in side {
                for &point in block.elements() {
                    if point < 1 || point > params.v {
                        return Err(Error::PointOutOfRange {
                            point,
                            v: params.v,
                        });
                    }
                }
                if !seen.insert(block.elements()) {
                    return Err(Error::DuplicateBlock {
                        elements: block.elements().to_vec(),
                    });
                }
            }
        }
        Ok(Trade {
            params,
            side1,
            side2,
        })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(params: TradeParams, side1: Vec<Block>, side2: Vec<Block>) -> Self {
        Trade {
            params,
            side1,
            side2,
        }
    }

    pub fn params(&self) -> TradeParams {
        self.params
    }

    pub fn side1(&self) -> &[Block] {
        &self.side1
    }

    pub fn side2(&self) -> &[Block] {
        &self.side2
    }
}

impl<'de> Deserialize<'de> for Trade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct TradeRepr {
            params: TradeParams,
            side1: Vec<Block>,
            side2: Vec<Block>,
        }
        let repr = TradeRepr::deserialize(deserializer)?;
        Trade::new(repr.params, repr.side1, repr.side2).map_err(D::Error::custom)
    }
}

const MAX_PAIRS: usize = 24;

/// Builds the minimal trade defined by a valid family of defining sets.
///
/// For every subset F of the t+1 companion pairs, the union of S_{2i} for
/// i in F, S_{2i-1} for i not in F, and the tail forms one block; blocks
/// with |F| even make up side 1 and blocks with |F| odd side 2. Subsets
/// are enumerated as binary counters, bit i of the counter flipping pair
/// i+1, so within each side blocks appear in increasing counter order.
pub fn construct_trade(sets: &DefiningSets) -> Result<Trade> {
    let params = sets.params();
    let verdict = validate_defining_sets(sets, &params);
    if !verdict.is_ok() {
        return Err(Error::InvalidSets(verdict));
    }
    let pairs = sets.pairs();
    if pairs.len() > MAX_PAIRS {
        return Err(Error::VolumeTooLarge {
            pairs: pairs.len(),
            max: MAX_PAIRS,
        });
    }

    let mut side1 = Vec::new();
    let mut side2 = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut elements = Vec::with_capacity(params.k as usize);
        for (i, (left, right)) in pairs.iter().enumerate() {
            let chosen = if mask >> i & 1 == 0 { left } else { right };
            elements.extend_from_slice(chosen);
        }
        elements.extend_from_slice(sets.tail());
        let block = Block::new(elements).expect("disjoint defining sets yield distinct points");
        if mask.count_ones() % 2 == 0 {
            side1.push(block);
        } else {
            side2.push(block);
        }
    }
    Trade::new(params, side1, side2)
}

/// Default cap on the number of t-subsets [`verify_trade`] will examine.
pub const DEFAULT_SUBSET_CAP: u64 = 10_000_000;

/// Checks the trade property by enumerating every t-subset of points:
/// true iff both sides have the same size, share no block, all blocks
/// have size k, and every t-subset lies in equally many blocks of each
/// side. Refuses with an error when more than [`DEFAULT_SUBSET_CAP`]
/// subsets would be needed; use [`verify_trade_with_cap`] to override.
pub fn verify_trade(trade: &Trade) -> Result<bool> {
    verify_trade_with_cap(trade, DEFAULT_SUBSET_CAP)
}

pub fn verify_trade_with_cap(trade: &Trade, cap: u64) -> Result<bool> {
    let TradeParams { v, k, t } = trade.params();

    if trade.side1().len() != trade.side2().len() {
        return Ok(false);
    }
    for side in [trade.side1(), trade.side2()] {
        if side.iter().any(|block| block.len() != k as usize) {
            return Ok(false);
        }
    }
    let blocks1: HashSet<&[u32]> = trade.side1().iter().map(Block::elements).collect();
    if trade.side2().iter().any(|block| blocks1.contains(block.elements())) {
        return Ok(false);
    }

    let required = binomial(v, t);
    if required > cap as u128 {
        return Err(Error::SubsetCapExceeded { required, cap });
    }

    let mut subsets = Combinations::new(v, t);
    while let Some(subset) = subsets.next() {
        let count1 = trade
            .side1()
            .iter()
            .filter(|block| block.contains_all(subset))
            .count();
        let count2 = trade
            .side2()
            .iter()
            .filter(|block| block.contains_all(subset))
            .count();
        if count1 != count2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest minus smallest block point sum within one side.
pub fn block_discrepancy(side: &[Block]) -> Result<u64> {
    let sums = side.iter().map(Block::sum);
    match (sums.clone().max(), sums.min()) {
        (Some(max), Some(min)) => Ok(max - min),
        _ => Err(Error::EmptySide),
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k as u128 {
        result = result * (n as u128 - k as u128 + i) / i;
    }
    result
}

/// Iterator over the k-subsets of {1, ..., n} in lexicographic order.
struct Combinations {
    n: u32,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl Combinations {
    fn new(n: u32, k: u32) -> Self {
        Combinations {
            n,
            current: (1..=k).collect(),
            started: false,
            done: k > n,
        }
    }

    fn next(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.n - (k - 1 - i) as u32 {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}
