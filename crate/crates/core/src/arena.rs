//! Game arenas: the weighted two-player graph, its text format and the
//! transformations applied to whole arenas (canonicalisation, simplicity
//! lifting, dualisation, random generation).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::weight::{Weight, WeightError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Player {
    Min,
    Max,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Min => Player::Max,
            Player::Max => Player::Min,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Player::Min => "MIN",
            Player::Max => "MAX",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: Weight,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: impl Into<Weight>) -> Self {
        Edge { src, dst, weight: weight.into() }
    }
}

/// A broken arena invariant, reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Sink { vertex: usize },
    DanglingEdge { edge: usize, endpoint: usize },
    /// `i64::MIN` has no negation; every finite weight must satisfy `|w| <= i64::MAX`.
    WeightOutOfRange { edge: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Sink { vertex } => write!(f, "sink at vertex {vertex}"),
            Violation::DanglingEdge { edge, endpoint } => {
                write!(f, "dangling edge {edge}: endpoint {endpoint} is not a vertex")
            }
            Violation::WeightOutOfRange { edge } => write!(f, "weight of edge {edge} out of range"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid arena: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("edge {edge} has an infinite weight")]
    InfiniteWeight { edge: usize },
    #[error("weight arithmetic: {0}")]
    Weight(#[from] WeightError),
}

fn join_violations(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Check every arena invariant on raw parts, reporting all violations.
pub fn validate(owners: &[Player], edges: &[Edge]) -> Result<(), Vec<Violation>> {
    let n = owners.len();
    let mut violations = Vec::new();
    let mut has_out = vec![false; n];
    for (e, edge) in edges.iter().enumerate() {
        let mut ok = true;
        for endpoint in [edge.src, edge.dst] {
            if endpoint >= n {
                violations.push(Violation::DanglingEdge { edge: e, endpoint });
                ok = false;
            }
        }
        if edge.weight == Weight::Finite(i64::MIN) {
            violations.push(Violation::WeightOutOfRange { edge: e });
        }
        if ok {
            has_out[edge.src] = true;
        }
    }
    for (vertex, _) in has_out.iter().enumerate().filter(|(_, has)| !**has) {
        violations.push(Violation::Sink { vertex });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A validated, immutable game arena.
///
/// Vertices are dense ids `0..n`. Outgoing edges are kept in a CSR layout
/// ordered by edge index; the reverse index is built on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    owners: Vec<Player>,
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
    out_edges: Vec<usize>,
    max_abs_weight: i64,
}

/// Incoming edges per vertex, CSR layout.
#[derive(Clone, Debug)]
pub struct ReverseIndex {
    offsets: Vec<usize>,
    edges: Vec<usize>,
}

impl ReverseIndex {
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.edges[self.offsets[v]..self.offsets[v + 1]]
    }
}

fn csr<F: Fn(&Edge) -> usize>(n: usize, edges: &[Edge], key: F) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    for edge in edges {
        offsets[key(edge) + 1] += 1;
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut slots = vec![0usize; edges.len()];
    for (e, edge) in edges.iter().enumerate() {
        let k = key(edge);
        slots[fill[k]] = e;
        fill[k] += 1;
    }
    (offsets, slots)
}

impl Arena {
    pub fn new(owners: Vec<Player>, edges: Vec<Edge>) -> Result<Self, ArenaError> {
        validate(&owners, &edges).map_err(ArenaError::Invalid)?;
        let (out_offsets, out_edges) = csr(owners.len(), &edges, |e| e.src);
        let max_abs_weight = max_abs_finite(&edges);
        Ok(Arena { owners, edges, out_offsets, out_edges, max_abs_weight })
    }

    /// Same graph and owners, new weights. Lengths must match.
    pub(crate) fn with_weights(&self, weights: &[Weight]) -> Result<Arena, ArenaError> {
        assert_eq!(weights.len(), self.edges.len(), "one weight per edge");
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &weight)| Edge { weight, ..*e })
            .collect();
        if let Some(e) = edges.iter().position(|e| e.weight == Weight::Finite(i64::MIN)) {
            return Err(ArenaError::Invalid(vec![Violation::WeightOutOfRange { edge: e }]));
        }
        Ok(Arena {
            owners: self.owners.clone(),
            max_abs_weight: max_abs_finite(&edges),
            edges,
            out_offsets: self.out_offsets.clone(),
            out_edges: self.out_edges.clone(),
        })
    }

    /// Same graph and weights with some vertices handed to the other player.
    pub(crate) fn with_owners(&self, owners: Vec<Player>) -> Arena {
        assert_eq!(owners.len(), self.owners.len());
        Arena { owners, ..self.clone() }
    }

    pub fn n(&self) -> usize {
        self.owners.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Largest absolute finite weight (`W`); zero when there is none.
    pub fn max_abs_weight(&self) -> i64 {
        self.max_abs_weight
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Indices of the edges leaving `v`, in increasing order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn vertices_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| self.owners[v] == player)
    }

    pub fn reverse_index(&self) -> ReverseIndex {
        let (offsets, edges) = csr(self.n(), &self.edges, |e| e.dst);
        ReverseIndex { offsets, edges }
    }

    pub fn has_infinite_weight(&self) -> bool {
        self.edges.iter().any(|e| e.weight.is_infinite())
    }

    /// Re-check the invariants. Always `Ok` for arenas built through [`Arena::new`].
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate(&self.owners, &self.edges)
    }

    /// Edges sorted by `(src, dst, weight)`; the form produced by [`serialize`].
    pub fn canonical(&self) -> Arena {
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| (e.src, e.dst, e.weight));
        Arena::new(self.owners.clone(), edges).expect("permuting edges keeps an arena valid")
    }
}

fn max_abs_finite(edges: &[Edge]) -> i64 {
    edges
        .iter()
        .filter_map(|e| e.weight.finite())
        .map(|w| w.checked_abs().unwrap_or(i64::MAX))
        .max()
        .unwrap_or(0)
}

impl fmt::Display for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

/// Parse the line-based text format:
///
/// ```text
/// arena <n> <m>
/// vertex <id> <MIN|MAX>          # exactly n lines
/// edge <src> <dst> <weight>      # exactly m lines; integer, "inf" or "-inf"
/// ```
///
/// `#` starts a comment. Vertex and edge lines may appear in any order
/// after the header. Structural problems (sinks, dangling edges) surface
/// as [`ArenaError::Invalid`] once all lines are read.
pub fn parse(text: &str) -> Result<Arena, ArenaError> {
    let err = |line: usize, reason: String| ArenaError::Parse { line, reason };
    let mut header: Option<(usize, usize)> = None;
    let mut owners: Vec<Option<Player>> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let number = |tok: &str, what: &str| -> Result<usize, ArenaError> {
            tok.parse::<usize>().map_err(|_| err(line, format!("invalid {what} {tok:?}")))
        };
        match tokens[0] {
            "arena" => {
                if header.is_some() {
                    return Err(err(line, "duplicate arena header".into()));
                }
                if tokens.len() != 3 {
                    return Err(err(line, "expected `arena <n> <m>`".into()));
                }
                let n = number(tokens[1], "vertex count")?;
                let m = number(tokens[2], "edge count")?;
                owners = vec![None; n];
                edges.reserve(m);
                header = Some((n, m));
            }
            kind @ ("vertex" | "edge") => {
                let Some((n, m)) = header else {
                    return Err(err(line, format!("`{kind}` before the arena header")));
                };
                if kind == "vertex" {
                    if tokens.len() != 3 {
                        return Err(err(line, "expected `vertex <id> <MIN|MAX>`".into()));
                    }
                    let id = number(tokens[1], "vertex id")?;
                    if id >= n {
                        return Err(err(line, format!("vertex id {id} out of range 0..{n}")));
                    }
                    let owner = match tokens[2] {
                        "MIN" => Player::Min,
                        "MAX" => Player::Max,
                        other => return Err(err(line, format!("unknown owner token {other:?}"))),
                    };
                    if owners[id].replace(owner).is_some() {
                        return Err(err(line, format!("duplicate vertex id {id}")));
                    }
                } else {
                    if tokens.len() != 4 {
                        return Err(err(line, "expected `edge <src> <dst> <weight>`".into()));
                    }
                    if edges.len() == m {
                        return Err(err(line, format!("more than {m} edge lines")));
                    }
                    let src = number(tokens[1], "edge source")?;
                    let dst = number(tokens[2], "edge target")?;
                    let weight: Weight = tokens[3].parse().map_err(|e| err(line, format!("{e}")))?;
                    edges.push(Edge { src, dst, weight });
                }
            }
            other => return Err(err(line, format!("unknown directive {other:?}"))),
        }
    }

    let Some((_, m)) = header else {
        return Err(err(last_line.max(1), "missing arena header".into()));
    };
    if let Some(missing) = owners.iter().position(Option::is_none) {
        return Err(err(last_line, format!("no vertex line for id {missing}")));
    }
    if edges.len() != m {
        return Err(err(last_line, format!("expected {m} edge lines, found {}", edges.len())));
    }
    Arena::new(owners.into_iter().map(Option::unwrap).collect(), edges)
}

/// Canonical text form: vertices by id, edges by `(src, dst, weight)`.
pub fn serialize(arena: &Arena) -> String {
    let mut out = format!("arena {} {}\n", arena.n(), arena.m());
    for (v, owner) in arena.owners.iter().enumerate() {
        out.push_str(&format!("vertex {v} {owner}\n"));
    }
    let mut edges = arena.edges.clone();
    edges.sort_by_key(|e| (e.src, e.dst, e.weight));
    for e in edges {
        out.push_str(&format!("edge {} {} {}\n", e.src, e.dst, e.weight));
    }
    out
}

/// Replace every weight `w` by `(n + 1) * w - 1`.
///
/// The result has no zero-sum simple cycle and the same set of vertices
/// with positive mean payoff. All weights must be finite.
pub fn lift_simplicity(arena: &Arena) -> Result<Arena, ArenaError> {
    let factor = i64::try_from(arena.n() + 1).map_err(|_| WeightError::Overflow)?;
    let weights = arena
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| match edge.weight {
            Weight::Finite(w) => Ok(w
                .checked_mul(factor)
                .and_then(|x| x.checked_sub(1))
                .filter(|&x| x != i64::MIN)
                .map(Weight::Finite)
                .ok_or(WeightError::Overflow)?),
            _ => Err(ArenaError::InfiniteWeight { edge: e }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    arena.with_weights(&weights)
}

/// Swap owners and negate every weight (`inf` and `-inf` trade places).
pub fn dualize(arena: &Arena) -> Arena {
    let weights: Vec<Weight> = arena
        .edges
        .iter()
        .map(|e| e.weight.checked_neg().expect("validated weights are negatable"))
        .collect();
    let owners = arena.owners.iter().map(|p| p.opponent()).collect();
    arena
        .with_weights(&weights)
        .expect("negation keeps weights in range")
        .with_owners(owners)
}

/// Deterministic random arena with `n` vertices and `m` edges.
///
/// Each vertex first receives one outgoing edge to a uniform target; the
/// remaining `m - n` edges have uniform endpoints. Owners are uniform and
/// weights uniform in `[-max_weight, max_weight]`.
pub fn generate_random(n: usize, m: usize, max_weight: i64, seed: u64) -> Result<Arena, ArenaError> {
    if n == 0 {
        return Err(ArenaError::Infeasible("n must be at least 1".into()));
    }
    if m < n {
        return Err(ArenaError::Infeasible(format!("m = {m} < n = {n} cannot be sinkless")));
    }
    if !(1..i64::MAX).contains(&max_weight) {
        return Err(ArenaError::Infeasible(format!("weight bound {max_weight} must be in 1..{}", i64::MAX)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let owners: Vec<Player> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Max } else { Player::Min })
        .collect();
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let src = if i < n { i } else { rng.gen_range(0..n) };
        let dst = rng.gen_range(0..n);
        let w = rng.gen_range(-max_weight..=max_weight);
        edges.push(Edge::new(src, dst, w));
    }
    Arena::new(owners, edges)
}

/// Search for a simple cycle of finite weight sum zero, returned as edge
/// indices. Exhaustive and exponential in the worst case; meant for small
/// arenas (n around 10 or less).
pub fn find_zero_sum_cycle(arena: &Arena) -> Option<Vec<usize>> {
    fn dfs(
        arena: &Arena,
        start: usize,
        v: usize,
        sum: i128,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
    ) -> bool {
        for &e in arena.out_edges(v) {
            let edge = arena.edge(e);
            let Weight::Finite(w) = edge.weight else { continue };
            let next = sum + w as i128;
            if edge.dst == start {
                if next == 0 {
                    path.push(e);
                    return true;
                }
            } else if edge.dst > start && !on_path[edge.dst] {
                on_path[edge.dst] = true;
                path.push(e);
                if dfs(arena, start, edge.dst, next, on_path, path) {
                    return true;
                }
                path.pop();
                on_path[edge.dst] = false;
            }
        }
        false
    }

    let mut on_path = vec![false; arena.n()];
    let mut path = Vec::new();
    for start in 0..arena.n() {
        on_path[start] = true;
        if dfs(arena, start, start, 0, &mut on_path, &mut path) {
            return Some(path);
        }
        on_path[start] = false;
    }
    None
}

/// True when every simple cycle has nonzero sum. See [`find_zero_sum_cycle`].
pub fn is_simple(arena: &Arena) -> bool {
    find_zero_sum_cycle(arena).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("vertex {vertex} belongs to the player but has no choice")]
    Missing { vertex: usize },
    #[error("vertex {vertex} does not belong to the player")]
    Foreign { vertex: usize },
    #[error("edge {edge} does not leave vertex {vertex}")]
    NotOutgoing { vertex: usize, edge: usize },
    #[error("expected {expected} choices, got {got}")]
    Length { expected: usize, got: usize },
}

/// A positional strategy: one outgoing edge per vertex of `player`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strategy {
    player: Player,
    choice: Vec<Option<usize>>,
}

impl Strategy {
    pub fn new(arena: &Arena, player: Player, choice: Vec<Option<usize>>) -> Result<Self, StrategyError> {
        if choice.len() != arena.n() {
            return Err(StrategyError::Length { expected: arena.n(), got: choice.len() });
        }
        for (vertex, c) in choice.iter().enumerate() {
            match (arena.owner(vertex) == player, c) {
                (true, None) => return Err(StrategyError::Missing { vertex }),
                (false, Some(_)) => return Err(StrategyError::Foreign { vertex }),
                (true, Some(edge)) => {
                    if *edge >= arena.m() || arena.edge(*edge).src != vertex {
                        return Err(StrategyError::NotOutgoing { vertex, edge: *edge });
                    }
                }
                (false, None) => {}
            }
        }
        Ok(Strategy { player, choice })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    /// Chosen edge at `v`, `None` when `v` belongs to the opponent.
    pub fn choice(&self, v: usize) -> Option<usize> {
        self.choice.get(v).copied().flatten()
    }

    /// `(vertex, edge)` pairs in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.choice.iter().enumerate().filter_map(|(v, c)| c.map(|e| (v, e)))
    }

    /// Same choices, reinterpreted for the opposite player (used when a
    /// strategy computed on the dual arena is mapped back).
    pub(crate) fn relabel(self) -> Strategy {
        Strategy { player: self.player.opponent(), choice: self.choice }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g3_fixture_counts() {
        let g3 = fixtures::g3();
        assert_eq!((g3.n(), g3.m(), g3.max_abs_weight()), (3, 5, 5));
        assert_eq!(g3.validate(), Ok(()));
        assert_eq!(g3.out_edges(0), &[0, 1]);
        assert_eq!(g3.reverse_index().in_edges(0), &[3, 4]);
    }

    #[test]
    fn sink_is_reported() {
        let err = Arena::new(vec![Player::Min, Player::Max], vec![Edge::new(0, 1, 1)]).unwrap_err();
        assert_eq!(err, ArenaError::Invalid(vec![Violation::Sink { vertex: 1 }]));
        assert!(err.to_string().contains("sink at vertex 1"));
    }

    #[test]
    fn dangling_edge_is_reported() {
        let owners = vec![Player::Min, Player::Min];
        let edges = vec![Edge::new(0, 1, 0), Edge::new(1, 2, 0), Edge::new(1, 0, 0)];
        let violations = validate(&owners, &edges).unwrap_err();
        assert_eq!(violations, vec![Violation::DanglingEdge { edge: 1, endpoint: 2 }]);
        assert!(violations[0].to_string().contains("dangling edge"));
    }

    #[test]
    fn all_violations_are_listed() {
        let owners = vec![Player::Min, Player::Max, Player::Min];
        let edges = vec![Edge::new(0, 5, 1), Edge::new(7, 0, 1)];
        let violations = validate(&owners, &edges).unwrap_err();
        assert_eq!(violations.len(), 2 + 3);
    }

    #[test]
    fn min_weight_is_rejected() {
        let err = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, i64::MIN)]).unwrap_err();
        assert_eq!(err, ArenaError::Invalid(vec![Violation::WeightOutOfRange { edge: 0 }]));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("vertex 0 MIN\n", 1, "before the arena header"),
            ("arena 1 1\nvertex 0 MIDDLE\nedge 0 0 1\n", 2, "unknown owner token"),
            ("arena 2 2\nvertex 0 MIN\nvertex 0 MAX\n", 3, "duplicate vertex id"),
            ("arena 1 1\nvertex 0 MIN\nedge 0 0 x\n", 3, "invalid weight"),
            ("arena 1 1\nvertex 0 MIN\n", 2, "expected 1 edge lines"),
            ("arena 1 1\n\nvertex 3 MIN\n", 3, "out of range"),
            ("arena 1 0\nvertex 0 MIN\nedge 0 0 1\n", 3, "more than 0 edge lines"),
            ("# nothing\n", 1, "missing arena header"),
            ("arena 1 1\nnode 0 MIN\n", 2, "unknown directive"),
        ];
        for (text, line, needle) in cases {
            match parse(text) {
                Err(ArenaError::Parse { line: got, reason }) => {
                    assert_eq!(got, line, "{text:?}");
                    assert!(reason.contains(needle), "{reason} / {needle}");
                }
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn vertex_without_edges_fails_validation() {
        let err = parse("arena 2 1\nvertex 0 MIN\nvertex 1 MIN\nedge 1 1 0\n").unwrap_err();
        assert_eq!(err, ArenaError::Invalid(vec![Violation::Sink { vertex: 0 }]));
    }

    #[test]
    fn serialize_is_canonical() {
        let text = "arena 2 3 # header\nvertex 1 MAX\nvertex 0 MIN\n\nedge 1 0 inf\nedge 0 1 -2\nedge 0 0 4\n";
        let arena = parse(text).unwrap();
        let expected = "arena 2 3\nvertex 0 MIN\nvertex 1 MAX\nedge 0 0 4\nedge 0 1 -2\nedge 1 0 inf\n";
        assert_eq!(serialize(&arena), expected);
        assert_eq!(parse(expected).unwrap(), arena.canonical());
    }

    #[test]
    fn lift_single_zero_loop() {
        let a = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, 0)]).unwrap();
        let lifted = lift_simplicity(&a).unwrap();
        assert_eq!(lifted.edge(0).weight, Weight::Finite(-1));
        assert!(!is_simple(&a));
        assert!(is_simple(&lifted));
    }

    #[test]
    fn lift_rejects_infinite_and_overflowing_weights() {
        let a = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, Weight::Inf)]).unwrap();
        assert_eq!(lift_simplicity(&a), Err(ArenaError::InfiniteWeight { edge: 0 }));
        let b = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, i64::MAX / 2 + 1)]).unwrap();
        assert_eq!(lift_simplicity(&b), Err(ArenaError::Weight(WeightError::Overflow)));
    }

    #[test]
    fn lifted_g3_bound() {
        let g3 = fixtures::g3();
        let lifted = lift_simplicity(&g3).unwrap();
        let n = g3.n() as i64;
        assert!(lifted.max_abs_weight() <= (n + 1) * g3.max_abs_weight() + 1);
        let weights: Vec<_> = lifted.edges().iter().map(|e| e.weight).collect();
        assert_eq!(weights, [7, -1, 19, 3, -13].map(Weight::Finite));
    }

    #[test]
    fn dualize_g3() {
        let d = dualize(&fixtures::g3());
        assert_eq!(d.owners(), &[Player::Max, Player::Min, Player::Max]);
        assert_eq!(d.edge(4), &Edge::new(2, 0, 3));
        assert_eq!(dualize(&d), fixtures::g3());
    }

    #[test]
    fn dualize_swaps_infinities() {
        let a = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, Weight::Inf)]).unwrap();
        assert_eq!(dualize(&a).edge(0).weight, Weight::NegInf);
    }

    #[test]
    fn generator_contract() {
        assert_eq!(generate_random(4, 8, 3, 7), generate_random(4, 8, 3, 7));
        for seed in 0..1000 {
            let a = generate_random(5, 10, 3, seed).unwrap();
            assert_eq!(a.validate(), Ok(()));
            assert_eq!((a.n(), a.m()), (5, 10));
            assert!(a.max_abs_weight() <= 3);
        }
        assert!(matches!(generate_random(5, 4, 3, 0), Err(ArenaError::Infeasible(_))));
        assert!(matches!(generate_random(0, 0, 3, 0), Err(ArenaError::Infeasible(_))));
        assert!(matches!(generate_random(2, 4, 0, 0), Err(ArenaError::Infeasible(_))));
    }

    #[test]
    fn zero_cycle_search() {
        let g3 = fixtures::g3();
        assert!(is_simple(&g3));
        let a = Arena::new(
            vec![Player::Min, Player::Max],
            vec![Edge::new(0, 1, 2), Edge::new(1, 0, -2), Edge::new(0, 0, 1)],
        )
        .unwrap();
        assert_eq!(find_zero_sum_cycle(&a), Some(vec![0, 1]));
    }

    #[test]
    fn strategy_validation() {
        let g3 = fixtures::g3();
        assert!(Strategy::new(&g3, Player::Min, vec![Some(0), None, Some(4)]).is_ok());
        assert_eq!(
            Strategy::new(&g3, Player::Min, vec![Some(0), None, None]),
            Err(StrategyError::Missing { vertex: 2 })
        );
        assert_eq!(
            Strategy::new(&g3, Player::Min, vec![Some(0), Some(2), Some(4)]),
            Err(StrategyError::Foreign { vertex: 1 })
        );
        assert_eq!(
            Strategy::new(&g3, Player::Min, vec![Some(2), None, Some(4)]),
            Err(StrategyError::NotOutgoing { vertex: 0, edge: 2 })
        );
    }
}
