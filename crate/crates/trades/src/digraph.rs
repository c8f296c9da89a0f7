//! The digraph of adjacent-point moves between defining sets.
//!
//! For every point s such that s and s+1 lie in different paired sets,
//! a magnitude-1 swap of s and s+1 moves weight between those sets. The
//! digraph records one arc per such adjacency; its density limits how
//! robust a pairing can be.

use crate::defining_sets::DefiningSets;

/// Vertices are the paired sets, numbered 0..2(t+1) in family order
/// (S1 is vertex 0). Parallel arcs are kept; a point adjacent to another
/// point of the same set contributes nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapDigraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl SwapDigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Arcs (from, to), one per adjacency s -> s+1, in increasing order
    /// of s.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}

/// Builds the adjacency digraph of a family. Tail points own no vertex,
/// so adjacencies touching the tail or unused points are skipped.
pub fn build_swap_digraph(sets: &DefiningSets) -> SwapDigraph {
    let v = sets.v() as usize;
    let vertex_count = 2 * sets.pairs().len();
    let mut owner: Vec<Option<usize>> = vec![None; v + 2];
    for (index, set) in sets.iter_sets() {
        if index > vertex_count {
            break;
        }
        for &element in set {
            if (element as usize) <= v {
                owner[element as usize] = Some(index - 1);
            }
        }
    }
    let mut arcs = Vec::new();
    for s in 1..v {
        if let (Some(from), Some(to)) = (owner[s], owner[s + 1]) {
            if from != to {
                arcs.push((from, to));
            }
        }
    }
    SwapDigraph { vertex_count, arcs }
}
