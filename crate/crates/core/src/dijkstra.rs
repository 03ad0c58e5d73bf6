//! Positive-energy (En⁺) values by a two-player generalisation of Dijkstra.
//!
//! En⁺ of a play is the sum of its weights before the first negative one.
//! Starting from the seed set `N` (vertices where Min can force a negative
//! edge right away, value 0), vertices are settled in two ways:
//!
//! 1. a Max vertex whose non-negative edges all lead to settled vertices
//!    takes the largest `w + value(dst)` among them;
//! 2. otherwise the unsettled Min vertex with the cheapest edge into the
//!    settled set is extracted from a priority queue.
//!
//! Step 1 is exhausted before every step 2. Vertices never settled have
//! value `inf`.
//!
//! The values are exact when the arena has no cycle made of zero-weight
//! edges: on such a cycle Min could keep the running sum flat forever. Any
//! such cycle is a zero-sum cycle, so it is reported as non-simplicity
//! before the search starts. Zero-sum cycles mixing signs do not affect
//! En⁺, since a play stops at its first negative edge.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::arena::{Arena, Player, ReverseIndex, Strategy};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum DijkstraError {
    #[error("arena not simple: zero-weight cycle through vertex {vertex}")]
    NotSimple { vertex: usize },
    #[error("integer overflow while summing energy values")]
    Overflow,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DijkstraStats {
    /// `|N|`.
    pub seeds: usize,
    /// Step-1 settlements (Max vertices).
    pub max_closures: usize,
    /// Step-2 settlements (Min vertices).
    pub min_extractions: usize,
    pub heap_pushes: usize,
    pub heap_pops: usize,
    /// Pops discarded because their vertex was already settled.
    pub stale_pops: usize,
    /// Final size of the settled set `F`.
    pub settled: usize,
}

impl DijkstraStats {
    pub fn heap_operations(&self) -> usize {
        self.heap_pushes + self.heap_pops
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnPlusResult {
    pub values: Vec<Weight>,
    pub min_strategy: Strategy,
    pub max_strategy: Strategy,
    /// The seed set `N`, sorted.
    pub seeds: Vec<usize>,
    pub stats: DijkstraStats,
}

/// Vertices from which Min can force a negative edge immediately: Min
/// vertices with a negative outgoing edge and Max vertices whose outgoing
/// edges are all negative.
pub fn seed_set(arena: &Arena) -> Vec<usize> {
    (0..arena.n()).filter(|&v| in_seed_set(arena, v)).collect()
}

fn in_seed_set(arena: &Arena, v: usize) -> bool {
    let mut weights = arena.out_edges(v).iter().map(|&e| arena.edge(e).weight);
    match arena.owner(v) {
        Player::Min => weights.any(Weight::is_negative),
        Player::Max => weights.all(Weight::is_negative),
    }
}

/// En⁺ values and witnessing strategies. Runs in `O(m log m)`.
pub fn compute_en_plus(arena: &Arena) -> Result<EnPlusResult, DijkstraError> {
    compute_en_plus_indexed(arena, &arena.reverse_index())
}

/// As [`compute_en_plus`], reusing a reverse index built for the same graph.
pub fn compute_en_plus_indexed(arena: &Arena, reverse: &ReverseIndex) -> Result<EnPlusResult, DijkstraError> {
    if let Some(vertex) = zero_weight_cycle(arena, reverse) {
        return Err(DijkstraError::NotSimple { vertex });
    }
    let n = arena.n();
    let mut value: Vec<Option<i64>> = vec![None; n];
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut stats = DijkstraStats::default();

    // Non-negative edges of an unsettled Max vertex not yet known to lead
    // into the settled set, and the best such edge seen so far.
    let mut pending = vec![0usize; n];
    let mut best: Vec<Option<(i64, usize)>> = vec![None; n];

    let mut seeds = Vec::new();
    for v in 0..n {
        let out = arena.out_edges(v);
        match arena.owner(v) {
            Player::Min => {
                if let Some(&e) = out.iter().find(|&&e| arena.edge(e).weight.is_negative()) {
                    value[v] = Some(0);
                    choice[v] = Some(e);
                    seeds.push(v);
                }
            }
            Player::Max => {
                pending[v] = out.iter().filter(|&&e| !arena.edge(e).weight.is_negative()).count();
                if pending[v] == 0 {
                    value[v] = Some(0);
                    choice[v] = Some(out[0]);
                    seeds.push(v);
                }
            }
        }
    }
    stats.seeds = seeds.len();

    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
    let mut ready: VecDeque<usize> = VecDeque::new();
    let mut frontier: VecDeque<usize> = seeds.iter().copied().collect();
    let mut last_extracted = 0i64;

    loop {
        // Propagate settled vertices and close Max vertices (step 1) until
        // nothing is left to do.
        loop {
            if let Some(v) = frontier.pop_front() {
                let dist = value[v].expect("frontier vertices are settled");
                for &e in reverse.in_edges(v) {
                    let edge = arena.edge(e);
                    let u = edge.src;
                    if value[u].is_some() {
                        continue;
                    }
                    // Infinite weights never lead to a finite value; negative
                    // edges are only taken by Min, and those vertices are seeds.
                    let Weight::Finite(w) = edge.weight else { continue };
                    if w < 0 {
                        continue;
                    }
                    let candidate = w.checked_add(dist).ok_or(DijkstraError::Overflow)?;
                    match arena.owner(u) {
                        Player::Max => {
                            pending[u] -= 1;
                            let improves = match best[u] {
                                None => true,
                                Some((b, be)) => candidate > b || (candidate == b && e < be),
                            };
                            if improves {
                                best[u] = Some((candidate, e));
                            }
                            if pending[u] == 0 {
                                ready.push_back(u);
                            }
                        }
                        Player::Min => {
                            heap.push(Reverse((candidate, e)));
                            stats.heap_pushes += 1;
                        }
                    }
                }
            } else if let Some(u) = ready.pop_front() {
                let (val, e) = best[u].expect("closed Max vertex saw its edges");
                value[u] = Some(val);
                choice[u] = Some(e);
                stats.max_closures += 1;
                frontier.push_back(u);
            } else {
                break;
            }
        }

        // Step 2: cheapest Min vertex.
        let mut extracted = false;
        while let Some(Reverse((dist, e))) = heap.pop() {
            stats.heap_pops += 1;
            let u = arena.edge(e).src;
            if value[u].is_some() {
                stats.stale_pops += 1;
                continue;
            }
            debug_assert!(dist >= last_extracted, "extraction order must be monotone");
            last_extracted = dist;
            value[u] = Some(dist);
            choice[u] = Some(e);
            stats.min_extractions += 1;
            frontier.push_back(u);
            extracted = true;
            break;
        }
        if !extracted {
            break;
        }
    }

    stats.settled = value.iter().filter(|v| v.is_some()).count();

    // Unsettled vertices: Max keeps to non-negative edges among them.
    for v in (0..n).filter(|&v| value[v].is_none()) {
        let out = arena.out_edges(v);
        choice[v] = Some(match arena.owner(v) {
            Player::Min => out[0],
            Player::Max => *out
                .iter()
                .find(|&&e| {
                    let edge = arena.edge(e);
                    edge.weight == Weight::Inf
                        || (!edge.weight.is_negative() && value[edge.dst].is_none())
                })
                .expect("an unsettled Max vertex keeps a non-negative edge out of F"),
        });
    }

    let values: Vec<Weight> = value.iter().map(|v| v.map_or(Weight::Inf, Weight::Finite)).collect();
    let split = |player: Player| {
        let c = (0..n).map(|v| if arena.owner(v) == player { choice[v] } else { None }).collect();
        Strategy::new(arena, player, c).expect("choices are outgoing edges of the right owner")
    };
    Ok(EnPlusResult {
        values,
        min_strategy: split(Player::Min),
        max_strategy: split(Player::Max),
        seeds,
        stats,
    })
}

/// A vertex on a cycle of zero-weight edges, if there is one.
fn zero_weight_cycle(arena: &Arena, reverse: &ReverseIndex) -> Option<usize> {
    let n = arena.n();
    let inside = |e: usize| arena.edge(e).weight == Weight::ZERO;
    // Kahn's algorithm on the zero-edge subgraph; leftovers lie on a cycle or
    // downstream of one.
    let mut indegree = vec![0usize; n];
    for e in (0..arena.m()).filter(|&e| inside(e)) {
        indegree[arena.edge(e).dst] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(v) = queue.pop() {
        removed[v] = true;
        for &e in arena.out_edges(v) {
            if inside(e) {
                let d = arena.edge(e).dst;
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    queue.push(d);
                }
            }
        }
    }
    let mut v = (0..n).find(|&v| !removed[v])?;
    // Every leftover keeps a zero in-edge from another leftover. Walk those
    // backwards until a vertex repeats: that vertex is on a cycle.
    let mut seen = vec![false; n];
    while !seen[v] {
        seen[v] = true;
        v = reverse
            .in_edges(v)
            .iter()
            .copied()
            .filter(|&e| inside(e))
            .map(|e| arena.edge(e).src)
            .find(|&s| !removed[s])
            .expect("a vertex left by Kahn's algorithm has a zero in-edge from another one");
    }
    Some(v)
}

/// A fixed-point equation that fails at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointViolation {
    pub vertex: usize,
    pub expected: Weight,
    pub found: Weight,
}

/// Check the En⁺ equations at every vertex in `O(m)`:
/// seeds have value 0, other Min vertices the minimum of `w + value(dst)`
/// over their edges, other Max vertices the maximum over their
/// non-negative edges.
pub fn check_fixed_point(arena: &Arena, values: &[Weight]) -> Result<(), Vec<FixedPointViolation>> {
    assert_eq!(values.len(), arena.n(), "values must be total");
    let mut violations = Vec::new();
    for v in 0..arena.n() {
        let expected = if in_seed_set(arena, v) {
            Weight::ZERO
        } else {
            let options = arena.out_edges(v).iter().filter_map(|&e| {
                let edge = arena.edge(e);
                (!edge.weight.is_negative()).then(|| edge.weight.checked_add(values[edge.dst]))
            });
            let options: Vec<Weight> = options.map(|x| x.unwrap_or(Weight::Inf)).collect();
            match arena.owner(v) {
                Player::Min => options.into_iter().min(),
                Player::Max => options.into_iter().max(),
            }
            .expect("a non-seed vertex has a non-negative edge")
        };
        if values[v] != expected || values[v].is_negative() {
            violations.push(FixedPointViolation { vertex: v, expected, found: values[v] });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
