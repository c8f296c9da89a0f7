//! Defining sets and their validation.
//!
//! A defining-set family over the points {1, ..., v} consists of t+1
//! companion pairs (S1, S2), (S3, S4), ..., (S_{2t+1}, S_{2t+2}) plus one
//! unpaired tail set S_{2t+3}. Picking one set from every companion pair
//! and appending the tail yields a block; the 2^{t+1} such blocks, split
//! by the parity of the number of "second" choices, form a minimal trade.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parameters of a trade: `v` points, blocks of size `k`, strength `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TradeParams {
    pub v: u32,
    pub k: u32,
    pub t: u32,
}

/// A family of point sets organized as companion pairs plus a tail.
///
/// Construction does not validate; use [`validate_defining_sets`] to obtain
/// a verdict, or feed the family to an operation that requires validity.
/// Element lists are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefiningSets {
    v: u32,
    pairs: Vec<(Vec<u32>, Vec<u32>)>,
    tail: Vec<u32>,
}

impl DefiningSets {
    pub fn new(v: u32, pairs: Vec<(Vec<u32>, Vec<u32>)>, tail: Vec<u32>) -> Self {
        let mut sets = DefiningSets { v, pairs, tail };
        for (left, right) in &mut sets.pairs {
            left.sort_unstable();
            right.sort_unstable();
        }
        sets.tail.sort_unstable();
        sets
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn pairs(&self) -> &[(Vec<u32>, Vec<u32>)] {
        &self.pairs
    }

    pub fn tail(&self) -> &[u32] {
        &self.tail
    }

    /// The (v, k, t) this family encodes: t+1 companion pairs and
    /// k = |tail| + sum of one set per pair.
    pub fn params(&self) -> TradeParams {
        let t = (self.pairs.len() as u32).saturating_sub(1);
        let k = self.tail.len() as u32
            + self
                .pairs
                .iter()
                .map(|(left, _)| left.len() as u32)
                .sum::<u32>();
        TradeParams { v: self.v, k, t }
    }

    /// All sets with their 1-based indices: S1, S2, ..., S_{2t+3}.
    /// The tail is last and may be empty.
    pub fn iter_sets(&self) -> impl Iterator<Item = (usize, &[u32])> {
        self.pairs
            .iter()
            .flat_map(|(left, right)| [left.as_slice(), right.as_slice()])
            .chain(std::iter::once(self.tail.as_slice()))
            .enumerate()
            .map(|(i, set)| (i + 1, set))
    }
}

/// One structural defect in a defining-set family.
///
/// Set indices are 1-based (S1 is the first set of the first pair);
/// pair indices are 1-based as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GroundMismatch { sets_v: u32, params_v: u32 },
    PairCount { expected: usize, found: usize },
    OutOfRange { set: usize, element: u32, v: u32 },
    RepeatedElement { set: usize, element: u32 },
    SharedElement { first: usize, second: usize, element: u32 },
    EmptyPairSet { pair: usize },
    UnequalPair { pair: usize, left: usize, right: usize },
    SizeSum { expected: u32, found: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GroundMismatch { sets_v, params_v } => {
                write!(f, "sets are over {sets_v} points but params say v = {params_v}")
            }
            Violation::PairCount { expected, found } => {
                write!(f, "expected {expected} companion pairs, found {found}")
            }
            Violation::OutOfRange { set, element, v } => {
                write!(f, "S{set} contains {element}, outside 1..={v}")
            }
            Violation::RepeatedElement { set, element } => {
                write!(f, "S{set} repeats element {element}")
            }
            Violation::SharedElement {
                first,
                second,
                element,
            } => write!(f, "S{first} and S{second} share element {element}"),
            Violation::EmptyPairSet { pair } => {
                write!(f, "pair {pair} has an empty set")
            }
            Violation::UnequalPair { pair, left, right } => {
                write!(f, "pair {pair} has sets of sizes {left} and {right}")
            }
            Violation::SizeSum { expected, found } => {
                write!(f, "one set per pair plus the tail covers {found} points, expected k = {expected}")
            }
        }
    }
}

/// Outcome of validating a defining-set family. Violations are data, not
/// failures: an empty list means the family is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationVerdict {
    violations: Vec<Violation>,
}

impl ValidationVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, violation) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{violation}")?;
        }
        Ok(())
    }
}

/// Checks a family against the structural requirements for parameters
/// `params`: t+1 companion pairs, pairwise disjoint sets within 1..=v,
/// nonempty equal-size sets within each pair, and one-set-per-pair unions
/// of size k.
pub fn validate_defining_sets(sets: &DefiningSets, params: &TradeParams) -> ValidationVerdict {
    let mut violations = Vec::new();

    if sets.v != params.v {
        violations.push(Violation::GroundMismatch {
            sets_v: sets.v,
            params_v: params.v,
        });
    }

    let expected_pairs = params.t as usize + 1;
    if sets.pairs.len() != expected_pairs {
        violations.push(Violation::PairCount {
            expected: expected_pairs,
            found: sets.pairs.len(),
        });
    }

    let mut owner: BTreeMap<u32, usize> = BTreeMap::new();
    for (index, set) in sets.iter_sets() {
        let mut previous = None;
        for &element in set {
            if element < 1 || element > sets.v {
                violations.push(Violation::OutOfRange {
                    set: index,
                    element,
                    v: sets.v,
                });
                continue;
            }
            if previous == Some(element) {
                violations.push(Violation::RepeatedElement {
                    set: index,
                    element,
                });
                continue;
            }
            previous = Some(element);
            if let Some(&first) = owner.get(&element) {
                violations.push(Violation::SharedElement {
                    first,
                    second: index,
                    element,
                });
            } else {
                owner.insert(element, index);
            }
        }
    }

    for (i, (left, right)) in sets.pairs.iter().enumerate() {
        if left.is_empty() || right.is_empty() {
            violations.push(Violation::EmptyPairSet { pair: i + 1 });
        }
        if left.len() != right.len() {
            violations.push(Violation::UnequalPair {
                pair: i + 1,
                left: left.len(),
                right: right.len(),
            });
        }
    }

    let found = sets.tail.len() as u32
        + sets
            .pairs
            .iter()
            .map(|(left, _)| left.len() as u32)
            .sum::<u32>();
    if found != params.k {
        violations.push(Violation::SizeSum {
            expected: params.k,
            found,
        });
    }

    ValidationVerdict { violations }
}

/// The balanced family on v = 4(t+1) points: pair i is
/// ({4i-3, 4i}, {4i-2, 4i-1}), the tail is empty. Every set in pair i sums
/// to 8i-3, so all blocks of the resulting trade have the same point sum.
pub fn canonical_balanced_sets(v: u32) -> Result<DefiningSets> {
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 4 {
        return Err(Error::GroundTooSmall { v, min: 4 });
    }
    let pairs = (1..=v / 4)
        .map(|i| {
            let base = 4 * (i - 1);
            (vec![base + 1, base + 4], vec![base + 2, base + 3])
        })
        .collect();
    Ok(DefiningSets::new(v, pairs, Vec::new()))
}

/// A balanced family pairing low points with their mirror images: pair j is
/// ({2j-1, v-2j+1}, {2j, v-2j}) for j = 1, ..., v/4 - 1, tail empty. Every
/// set sums to v. Points v/2 and v stay unused, so the family has one pair
/// fewer than the canonical one on the same v.
pub fn mirror_balanced_sets(v: u32) -> Result<DefiningSets> {
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 8 {
        return Err(Error::GroundTooSmall { v, min: 8 });
    }
    let pairs = (1..=v / 4 - 1)
        .map(|j| (vec![2 * j - 1, v - 2 * j + 1], vec![2 * j, v - 2 * j]))
        .collect();
    Ok(DefiningSets::new(v, pairs, Vec::new()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DefiningSetsRepr {
    v: u32,
    t: u32,
    pairs: Vec<[Vec<u32>; 2]>,
    #[serde(default)]
    tail: Vec<u32>,
}

impl Serialize for DefiningSets {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = DefiningSetsRepr {
            v: self.v,
            t: (self.pairs.len() as u32).saturating_sub(1),
            pairs: self
                .pairs
                .iter()
                .map(|(left, right)| [left.clone(), right.clone()])
                .collect(),
            tail: self.tail.clone(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DefiningSets {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DefiningSetsRepr::deserialize(deserializer)?;
        if repr.pairs.len() != repr.t as usize + 1 {
            return Err(D::Error::custom(format!(
                "t = {} implies {} companion pairs, found {}",
                repr.t,
                repr.t + 1,
                repr.pairs.len()
            )));
        }
        let pairs = repr
            .pairs
            .into_iter()
            .map(|[left, right]| (left, right))
            .collect();
        Ok(DefiningSets::new(repr.v, pairs, repr.tail))
    }
}
