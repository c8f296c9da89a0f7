//! Exact worst-case discrepancy and the search for robust pairings.
//!
//! The worst case ranges over every collection of disjoint swaps of
//! magnitude at most p. The search walks swap collections depth first,
//! tracking per-pair sum differences incrementally; a branch is cut when
//! even 2p per remaining swap cannot beat the best value found. Swap
//! collections are visited in lexicographic order of their sorted swap
//! lists, so the first collection attaining the maximum is also the
//! lexicographically smallest one.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::Duration;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::defining_sets::{validate_defining_sets, DefiningSets};
use crate::error::{Error, Result};
use crate::pairing::{enumerate_balanced_pairings_while, BalancedPairing};
use crate::swap::{apply_swaps, Swap, SwapSet};

/// Default cap on swap applications per worst-case search.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

/// Result of a worst-case search: the maximum total set discrepancy, a
/// maximizing swap collection (the lexicographically smallest one), and
/// the family after those swaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub value: u64,
    pub witness: SwapSet,
    pub sets_after: DefiningSets,
}

impl Serialize for DiscrepancyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("DiscrepancyReport", 3)?;
        state.serialize_field("value", &self.value)?;
        let witness: Vec<[u32; 2]> = self
            .witness
            .swaps()
            .iter()
            .map(|swap| [swap.lo(), swap.hi()])
            .collect();
        state.serialize_field("witness", &witness)?;
        state.serialize_field("sets_after", &self.sets_after)?;
        state.end()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Owner {
    Set { pair: u32, right: bool },
    Outside,
}

/// Incremental evaluator: per-pair signed sum differences plus their
/// absolute total, updated in O(1) per swap.
struct Engine {
    v: u32,
    owner: Vec<Owner>,
    diffs: Vec<i64>,
    total: u64,
}

impl Engine {
    fn from_sets(sets: &DefiningSets) -> Self {
        let v = sets.v();
        let paired = 2 * sets.pairs().len();
        let mut owner = vec![Owner::Outside; v as usize + 1];
        for (index, set) in sets.iter_sets() {
            if index > paired {
                break;
            }
            for &element in set {
                owner[element as usize] = Owner::Set {
                    pair: (index as u32 - 1) / 2,
                    right: index % 2 == 0,
                };
            }
        }
        let diffs: Vec<i64> = sets
            .pairs()
            .iter()
            .map(|(left, right)| {
                let sum = |set: &[u32]| set.iter().map(|&e| e as i64).sum::<i64>();
                sum(right) - sum(left)
            })
            .collect();
        let total = diffs.iter().map(|d| d.unsigned_abs()).sum();
        Engine {
            v,
            owner,
            diffs,
            total,
        }
    }

    fn from_pairing(pairing: &BalancedPairing) -> Self {
        let v = pairing.v();
        let mut owner = vec![Owner::Outside; v as usize + 1];
        for (index, &((a, b), (c, d))) in pairing.companion_pairs().iter().enumerate() {
            let pair = index as u32;
            owner[a as usize] = Owner::Set { pair, right: false };
            owner[b as usize] = Owner::Set { pair, right: false };
            owner[c as usize] = Owner::Set { pair, right: true };
            owner[d as usize] = Owner::Set { pair, right: true };
        }
        Engine {
            v,
            owner,
            diffs: vec![0; pairing.companion_pairs().len()],
            total: 0,
        }
    }

    /// Relabels x to y and y to x. The owner map stays keyed by original
    /// positions, which is sound because the swaps of one collection are
    /// disjoint; undoing therefore needs the negated deltas rather than
    /// a second application.
    fn apply_swap(&mut self, x: u32, y: u32) {
        self.shift(x, y as i64 - x as i64);
        self.shift(y, x as i64 - y as i64);
    }

    fn undo_swap(&mut self, x: u32, y: u32) {
        self.shift(x, x as i64 - y as i64);
        self.shift(y, y as i64 - x as i64);
    }

    fn shift(&mut self, point: u32, delta: i64) {
        if let Owner::Set { pair, right } = self.owner[point as usize] {
            let diff = &mut self.diffs[pair as usize];
            self.total -= diff.unsigned_abs();
            *diff += if right { delta } else { -delta };
            self.total += diff.unsigned_abs();
        }
    }
}

struct Dfs<'a> {
    engine: &'a mut Engine,
    p: u32,
    used: u64,
    current: Vec<Swap>,
    best: u64,
    witness: Vec<Swap>,
    nodes: u64,
    budget: u64,
    abandon_above: Option<u64>,
    abandoned: bool,
}

impl<'a> Dfs<'a> {
    fn new(engine: &'a mut Engine, p: u32, budget: u64, abandon_above: Option<u64>) -> Self {
        let best = engine.total;
        Dfs {
            engine,
            p,
            used: 0,
            current: Vec::new(),
            best,
            witness: Vec::new(),
            nodes: 0,
            budget,
            abandon_above,
            abandoned: false,
        }
    }

    fn run(&mut self) -> Result<()> {
        if let Some(threshold) = self.abandon_above {
            if self.best > threshold {
                self.abandoned = true;
                return Ok(());
            }
        }
        self.walk(1)
    }

    fn walk(&mut self, from: u32) -> Result<()> {
        let v = self.engine.v;
        let bit = |point: u32| 1u64 << (point - 1);
        for lo in from..v {
            // no extension over points lo..=v can strictly beat the best
            let slack = 2 * self.p as u64 * (v - lo).div_ceil(2) as u64;
            if self.engine.total + slack <= self.best {
                return Ok(());
            }
            if self.used & bit(lo) != 0 {
                continue;
            }
            for delta in 1..=self.p {
                let hi = lo + delta;
                if hi > v || self.used & bit(hi) != 0 {
                    continue;
                }
                if self.engine.owner[lo as usize] == self.engine.owner[hi as usize] {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::SearchBudgetExceeded {
                        budget: self.budget,
                        reached: self.best,
                    });
                }
                self.engine.apply_swap(lo, hi);
                self.used |= bit(lo) | bit(hi);
                self.current.push(Swap::new(lo, hi).expect("lo < hi"));

                if self.engine.total > self.best {
                    self.best = self.engine.total;
                    self.witness = self.current.clone();
                    if let Some(threshold) = self.abandon_above {
                        if self.best > threshold {
                            self.abandoned = true;
                        }
                    }
                }
                if !self.abandoned {
                    self.walk(lo + 1)?;
                }

                self.current.pop();
                self.used &= !(bit(lo) | bit(hi));
                self.engine.undo_swap(lo, hi);
                if self.abandoned {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Exact worst-case total set discrepancy of a family under disjoint
/// swaps of magnitude at most p, with the default node budget.
pub fn worst_case_discrepancy(sets: &DefiningSets, p: u32) -> Result<DiscrepancyReport> {
    worst_case_discrepancy_with_budget(sets, p, DEFAULT_NODE_BUDGET)
}

/// As [`worst_case_discrepancy`], refusing with an error once more than
/// `budget` swap applications have been tried. The error carries the
/// best value reached, which is a valid lower bound on the worst case.
pub fn worst_case_discrepancy_with_budget(
    sets: &DefiningSets,
    p: u32,
    budget: u64,
) -> Result<DiscrepancyReport> {
    if p != 1 && p != 2 {
        return Err(Error::UnsupportedMagnitude { p });
    }
    if sets.v() > 64 {
        return Err(Error::GroundTooLarge {
            v: sets.v(),
            max: 64,
        });
    }
    let verdict = validate_defining_sets(sets, &sets.params());
    if !verdict.is_ok() {
        return Err(Error::InvalidSets(verdict));
    }
    let mut engine = Engine::from_sets(sets);
    let mut dfs = Dfs::new(&mut engine, p, budget, None);
    dfs.run()?;
    let witness = SwapSet::new(dfs.witness.clone(), p).expect("search emits disjoint swaps");
    let sets_after = apply_swaps(sets, &witness)?;
    Ok(DiscrepancyReport {
        value: dfs.best,
        witness,
        sets_after,
    })
}

/// Outcome of an optimum hunt over all balanced pairings of {1, ..., v}.
/// `complete` is false when a pairing budget stopped the enumeration
/// early, in which case `value` is only the best found so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSearch {
    pub value: u64,
    pub count: u64,
    pub optima: Vec<BalancedPairing>,
    pub complete: bool,
    pub pairings_examined: u64,
}

/// Checkpoint data for resuming an interrupted hunt: how many pairings
/// (in enumeration order) are already done, the best worst-case value
/// among them, and the pairings attaining it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResumeState {
    pub processed: u64,
    pub incumbent: Option<u64>,
    pub optima: Vec<BalancedPairing>,
}

/// Periodic snapshot handed to the progress callback; identical in shape
/// to [`ResumeState`] so it can be persisted directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProgress {
    pub processed: u64,
    pub incumbent: Option<u64>,
    pub optima: Vec<BalancedPairing>,
}

#[derive(Default)]
pub struct SearchOptions<'a> {
    /// Worker threads; defaults to the available parallelism.
    pub threads: Option<usize>,
    /// Stop after examining this many pairings beyond the resume point.
    pub pairing_budget: Option<u64>,
    pub resume: Option<ResumeState>,
    pub progress: Option<&'a mut dyn FnMut(&SearchProgress)>,
}

/// Finds the balanced pairings of {1, ..., v} minimizing the worst-case
/// total set discrepancy under magnitude-p swaps, with default options.
pub fn search_optimal_pairings(v: u32, p: u32) -> Result<OptimalSearch> {
    search_optimal_pairings_with(v, p, SearchOptions::default())
}

/// The optimum hunt. Pairings stream from the enumeration to a worker
/// pool; each worker computes the exact worst case of its pairing but
/// abandons it as soon as the running maximum exceeds the best minimum
/// seen so far, since such a pairing cannot be optimal. Results are
/// independent of thread count and scheduling: the surviving minimum and
/// the set of pairings attaining it are determined by the enumeration
/// alone, and optima are returned in canonical order.
pub fn search_optimal_pairings_with(
    v: u32,
    p: u32,
    options: SearchOptions<'_>,
) -> Result<OptimalSearch> {
    if p != 1 && p != 2 {
        return Err(Error::UnsupportedMagnitude { p });
    }
    if !v.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour { v });
    }
    if v < 4 {
        return Err(Error::GroundTooSmall { v, min: 4 });
    }
    if v > 64 {
        return Err(Error::GroundTooLarge { v, max: 64 });
    }

    let SearchOptions {
        threads,
        pairing_budget,
        resume,
        mut progress,
    } = options;
    let threads = threads
        .unwrap_or_else(|| {
            thread::available_parallelism()
                .map(std::num::NonZeroUsize::get)
                .unwrap_or(1)
        })
        .max(1);
    let resume = resume.unwrap_or_default();
    let skip = resume.processed;

    let incumbent = AtomicU64::new(resume.incumbent.unwrap_or(u64::MAX));
    let processed = AtomicU64::new(skip);
    let completed: Mutex<Vec<(BalancedPairing, u64)>> = Mutex::new(
        resume
            .optima
            .into_iter()
            .map(|pairing| (pairing, resume.incumbent.unwrap_or(u64::MAX)))
            .collect(),
    );
    let exhausted = AtomicBool::new(false);
    let active_workers = AtomicUsize::new(threads);
    let (sender, receiver) = mpsc::sync_channel::<Vec<BalancedPairing>>(256);
    let receiver = Mutex::new(receiver);

    thread::scope(|scope| {
        let exhausted = &exhausted;
        let incumbent = &incumbent;
        let processed = &processed;
        let completed = &completed;
        let active_workers = &active_workers;
        let receiver = &receiver;

        scope.spawn(move || {
            let mut index: u64 = 0;
            let mut batch = Vec::with_capacity(64);
            let mut stopped = false;
            let outcome = enumerate_balanced_pairings_while(v, |pairing| {
                index += 1;
                if index <= skip {
                    return true;
                }
                if let Some(budget) = pairing_budget {
                    if index > skip + budget {
                        stopped = true;
                        return false;
                    }
                }
                batch.push(pairing.clone());
                if batch.len() == 64 {
                    if sender.send(std::mem::take(&mut batch)).is_err() {
                        stopped = true;
                        return false;
                    }
                    batch.reserve(64);
                }
                true
            });
            if !batch.is_empty() {
                let _ = sender.send(batch);
            }
            if outcome.is_ok() && !stopped {
                exhausted.store(true, Ordering::Relaxed);
            }
        });

        for _ in 0..threads {
            scope.spawn(move || {
                loop {
                    let received = receiver.lock().unwrap().recv();
                    let batch = match received {
                        Ok(batch) => batch,
                        Err(_) => break,
                    };
                    for pairing in batch {
                        let threshold = incumbent.load(Ordering::Relaxed);
                        let mut engine = Engine::from_pairing(&pairing);
                        let abandon = (threshold != u64::MAX).then_some(threshold);
                        let mut dfs = Dfs::new(&mut engine, p, u64::MAX, abandon);
                        dfs.run().expect("search without node budget cannot refuse");
                        if !dfs.abandoned {
                            incumbent.fetch_min(dfs.best, Ordering::Relaxed);
                            let mut list = completed.lock().unwrap();
                            list.push((pairing, dfs.best));
                            if list.len() > 4096 {
                                let cut = incumbent.load(Ordering::Relaxed);
                                list.retain(|&(_, value)| value <= cut);
                            }
                        }
                        processed.fetch_add(1, Ordering::Relaxed);
                    }
                }
                active_workers.fetch_sub(1, Ordering::Relaxed);
            });
        }

        if let Some(callback) = progress.as_mut() {
            loop {
                let finished = active_workers.load(Ordering::Relaxed) == 0;
                callback(&snapshot(processed, incumbent, completed));
                if finished {
                    break;
                }
                thread::sleep(Duration::from_millis(200));
            }
        }
    });

    let list = completed.into_inner().unwrap();
    let Some(value) = list.iter().map(|&(_, value)| value).min() else {
        return Err(Error::SearchBudgetExceeded {
            budget: pairing_budget.unwrap_or(0),
            reached: 0,
        });
    };
    let mut optima: Vec<BalancedPairing> = list
        .into_iter()
        .filter(|&(_, candidate)| candidate == value)
        .map(|(pairing, _)| pairing)
        .collect();
    optima.sort_unstable();
    optima.dedup();
    Ok(OptimalSearch {
        value,
        count: optima.len() as u64,
        optima,
        complete: exhausted.load(Ordering::Relaxed),
        pairings_examined: processed.load(Ordering::Relaxed),
    })
}

fn snapshot(
    processed: &AtomicU64,
    incumbent: &AtomicU64,
    completed: &Mutex<Vec<(BalancedPairing, u64)>>,
) -> SearchProgress {
    let bound = incumbent.load(Ordering::Relaxed);
    let optima = if bound == u64::MAX {
        Vec::new()
    } else {
        completed
            .lock()
            .unwrap()
            .iter()
            .filter(|&&(_, value)| value == bound)
            .map(|(pairing, _)| pairing.clone())
            .collect()
    };
    SearchProgress {
        processed: processed.load(Ordering::Relaxed),
        incumbent: (bound != u64::MAX).then_some(bound),
        optima,
    }
}

/// First pairing in enumeration order whose worst case under magnitude-p
/// swaps is at most `target`, together with that worst case. Because the
/// enumeration is in canonical order, the result is deterministic.
pub(crate) fn first_pairing_with_worst_at_most(
    v: u32,
    p: u32,
    target: u64,
) -> Result<Option<(BalancedPairing, u64)>> {
    if p != 1 && p != 2 {
        return Err(Error::UnsupportedMagnitude { p });
    }
    let mut found = None;
    enumerate_balanced_pairings_while(v, |pairing| {
        let mut engine = Engine::from_pairing(pairing);
        let mut dfs = Dfs::new(&mut engine, p, u64::MAX, Some(target));
        dfs.run().expect("search without node budget cannot refuse");
        if dfs.abandoned {
            true
        } else {
            found = Some((pairing.clone(), dfs.best));
            false
        }
    })?;
    Ok(found)
}
