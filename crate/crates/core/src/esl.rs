//! The main solver: repeatedly compute En⁺ of the current game and use it
//! as a potential reduction, until every finite En⁺ value is zero.
//!
//! With `G_0` the input and `G_{j+1}` the game `G_j` modified by
//! `phi_j = En⁺(G_j)`, the accumulated potential `Phi = phi_0 + ... + phi_j`
//! is sound at every step. The iteration stops once `phi_j` is zero on every
//! vertex of finite potential, i.e. `Phi` no longer changes; the last game has
//! energy values in `{0, inf}`, so `Phi` is exactly the energy value of the
//! input. A dual solver (via [`dualize`]) and an experimental alternating
//! variant live here as well.

use serde::Serialize;
use thiserror::Error;

use crate::arena::{dualize, lift_simplicity, Arena, ArenaError, Player, Strategy};
use crate::dijkstra::{compute_en_plus_indexed, DijkstraError, DijkstraStats};
use crate::oracle::{verify_strategy, Counterexample};
use crate::potential::{self, compose, modified_weights, Potential, PotentialError, PotentialMode};
use crate::weight::{Weight, WeightError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// On a non-simple arena, fall back to the lifted arena and report
    /// the threshold verdict only.
    pub auto_lift: bool,
    /// Check both strategies with the one-player oracle before returning.
    /// Pseudo-polynomial; disable on large instances.
    pub verify_strategies: bool,
    /// Keep every `phi_j` in the per-iteration records.
    pub record_potentials: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { auto_lift: false, verify_strategies: true, record_potentials: false }
    }
}

/// Sign of the mean-payoff value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Threshold {
    /// `MP <= 0`, equivalently finite energy.
    NonPositive,
    /// `MP > 0`.
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    pub index: usize,
    /// `phi_j`, when recording is enabled.
    pub phi: Option<Vec<Weight>>,
    /// Largest finite `phi_j` over vertices whose potential was finite.
    pub max_finite_phi: i64,
    /// Number of vertices with `0 < phi_j < inf`.
    pub positive: usize,
    /// The seed set `N_j`.
    pub seeds: Vec<usize>,
    pub newly_infinite: Vec<usize>,
    pub dijkstra: DijkstraStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    /// Exact energy values; `None` when the solve went through the lifted arena.
    pub en_values: Option<Vec<Weight>>,
    pub threshold: Vec<Threshold>,
    pub min_strategy: Strategy,
    pub max_strategy: Strategy,
    pub iterations: usize,
    pub per_iteration: Vec<IterationRecord>,
    pub total_potential: Potential,
    pub lifted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("iteration {iteration}: vertex {vertex} joined the seed set")]
    SeedsGrew { iteration: usize, vertex: usize },
    #[error("iteration {iteration}: potential {value} at vertex {vertex} exceeds n*W = {bound}")]
    PotentialBound { iteration: usize, vertex: usize, value: i64, bound: i128 },
    #[error("finite vertex {vertex} has no non-positive edge in the final game")]
    NoNonPositiveEdge { vertex: usize },
    #[error("Max vertex {vertex} is not attracted to the zero region")]
    NotAttracted { vertex: usize },
    #[error("Max vertex {vertex} became infinite without a witness edge")]
    MissingWitness { vertex: usize },
    #[error("alternating iteration stalled with {0} unclassified vertices")]
    AlternatingStalled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("arena not simple (zero-weight cycle through vertex {vertex}, iteration {iteration})")]
    NotSimple { vertex: usize, iteration: usize },
    #[error("edge {edge} has weight -inf")]
    NegativeInfinity { edge: usize },
    #[error("integer overflow")]
    Overflow,
    #[error("iteration cap {cap} exceeded")]
    CapExceeded { cap: usize, trace: Vec<IterationRecord> },
    #[error("invariant violated: {0}")]
    Invariant(#[from] InvariantViolation),
    #[error("{player:?} strategy fails at vertex {}: claimed {}, achieved {}", .counterexample.vertex, .counterexample.claimed, .counterexample.achieved)]
    StrategyCheck { player: Player, counterexample: Counterexample },
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

impl SolveError {
    /// Errors that point at a bug rather than at the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, SolveError::CapExceeded { .. } | SolveError::Invariant(_) | SolveError::StrategyCheck { .. })
    }
}

impl From<WeightError> for SolveError {
    fn from(_: WeightError) -> Self {
        SolveError::Overflow
    }
}

impl From<PotentialError> for SolveError {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::Arena(a) => SolveError::Arena(a),
            _ => SolveError::Overflow,
        }
    }
}

fn dijkstra_error(e: DijkstraError, iteration: usize) -> SolveError {
    match e {
        DijkstraError::NotSimple { vertex } => SolveError::NotSimple { vertex, iteration },
        DijkstraError::Overflow => SolveError::Overflow,
    }
}

/// Safety cap on the number of iterations: `n^2 * W + n`.
pub fn iteration_cap(arena: &Arena) -> usize {
    let n = arena.n() as u128;
    let cap = n * n * arena.max_abs_weight() as u128 + n;
    usize::try_from(cap).unwrap_or(usize::MAX)
}

/// Vertices finite in `before` and infinite (either sign) in `after`.
pub fn newly_infinite(before: &[Weight], after: &[Weight]) -> Vec<usize> {
    before
        .iter()
        .zip(after)
        .enumerate()
        .filter(|(_, (b, a))| b.is_finite() && a.is_infinite())
        .map(|(v, _)| v)
        .collect()
}

/// Exact energy values, threshold verdicts and optimal strategies.
pub fn solve(arena: &Arena, options: SolveOptions) -> Result<SolveReport, SolveError> {
    let start = Potential::zero(arena.n(), PotentialMode::Natural);
    match solve_from(arena, start.clone(), vec![None; arena.n()], options) {
        Err(SolveError::NotSimple { .. }) if options.auto_lift && !arena.has_infinite_weight() => {
            let lifted = lift_simplicity(arena)?;
            let mut report = solve_from(&lifted, start, vec![None; arena.n()], options)?;
            report.en_values = None;
            report.lifted = true;
            Ok(report)
        }
        other => other,
    }
}

/// Run the iteration from a sound starting potential. `witness` gives, for
/// Max vertices already infinite in `start`, an edge that keeps them there.
pub(crate) fn solve_from(
    arena: &Arena,
    start: Potential,
    mut witness: Vec<Option<usize>>,
    options: SolveOptions,
) -> Result<SolveReport, SolveError> {
    if let Some(edge) = arena.edges().iter().position(|e| e.weight == Weight::NegInf) {
        return Err(SolveError::NegativeInfinity { edge });
    }
    let n = arena.n();
    let bound = n as i128 * arena.max_abs_weight() as i128;
    let cap = iteration_cap(arena);
    let reverse = arena.reverse_index();

    let mut total = start;
    let mut current = potential::apply(arena, &total)?;
    let mut previous_seeds: Option<Vec<bool>> = None;
    let mut records: Vec<IterationRecord> = Vec::new();

    for iteration in 0.. {
        if iteration >= cap.max(1) {
            return Err(SolveError::CapExceeded { cap, trace: records });
        }
        let step = compute_en_plus_indexed(&current, &reverse).map_err(|e| dijkstra_error(e, iteration))?;

        let mut in_seeds = vec![false; n];
        for &v in &step.seeds {
            in_seeds[v] = true;
        }
        if let Some(prev) = &previous_seeds {
            if let Some(vertex) = (0..n).find(|&v| in_seeds[v] && !prev[v]) {
                return Err(InvariantViolation::SeedsGrew { iteration, vertex }.into());
            }
        }
        previous_seeds = Some(in_seeds);

        let newly = newly_infinite(total.values(), &step.values);
        for &v in &newly {
            if arena.owner(v) == Player::Max {
                witness[v] = step.max_strategy.choice(v);
            }
        }
        let finite_phi = (0..n).filter(|&v| total.get(v).is_finite()).filter_map(|v| step.values[v].finite());
        let max_finite_phi = finite_phi.clone().max().unwrap_or(0);
        let positive = finite_phi.filter(|&x| x > 0).count();

        let phi = Potential::sound(step.values.clone())?;
        total = compose(&total, &phi)?;
        for (vertex, value) in total.values().iter().enumerate() {
            if let Weight::Finite(value) = *value {
                if value as i128 > bound {
                    return Err(InvariantViolation::PotentialBound { iteration, vertex, value, bound }.into());
                }
            }
        }

        records.push(IterationRecord {
            index: iteration,
            phi: options.record_potentials.then(|| step.values.clone()),
            max_finite_phi,
            positive,
            seeds: step.seeds.clone(),
            newly_infinite: newly,
            dijkstra: step.stats,
        });
        if max_finite_phi == 0 && records.last().is_some_and(|r| r.newly_infinite.is_empty()) {
            break;
        }
        current = potential::apply(&current, &phi)?;
    }

    let (min_strategy, max_strategy) = extract_strategies(arena, &total, &witness)?;
    let en_values = total.values().to_vec();
    if options.verify_strategies {
        for strategy in [&min_strategy, &max_strategy] {
            verify_strategy(arena, strategy, &en_values)
                .map_err(|counterexample| SolveError::StrategyCheck { player: strategy.player(), counterexample })?;
        }
    }
    let threshold = en_values
        .iter()
        .map(|v| if v.is_finite() { Threshold::NonPositive } else { Threshold::Positive })
        .collect();
    Ok(SolveReport {
        en_values: Some(en_values),
        threshold,
        min_strategy,
        max_strategy,
        iterations: records.len(),
        per_iteration: records,
        total_potential: total,
        lifted: false,
    })
}

/// Optimal positional strategies from the final potential `total` (the
/// exact energy values).
///
/// * Min, finite vertex: an edge of non-positive modified weight into the
///   finite region.
/// * Max, infinite vertex: `witness`, the Dijkstra choice from the
///   iteration in which the vertex became infinite.
/// * Max, finite vertex of positive value: an attractor strategy towards
///   the zero-value region along edges of modified weight exactly 0. This
///   forbids cycles on which neither player gains, which a mere tight-edge
///   choice would allow.
/// * Elsewhere any edge is optimal; the first one is taken.
pub fn extract_strategies(
    arena: &Arena,
    total: &Potential,
    witness: &[Option<usize>],
) -> Result<(Strategy, Strategy), SolveError> {
    let n = arena.n();
    let modified = modified_weights(arena, total)?;
    let finite = |v: usize| total.get(v).is_finite();
    let positive = |v: usize| total.get(v).is_positive() && finite(v);
    let tight = |e: usize| {
        let edge = arena.edge(e);
        finite(edge.src) && finite(edge.dst) && modified[e] == Weight::ZERO
    };

    let mut min_choice = vec![None; n];
    let mut max_choice = vec![None; n];
    for v in 0..n {
        let out = arena.out_edges(v);
        match (arena.owner(v), finite(v)) {
            (Player::Min, true) => {
                let e = out
                    .iter()
                    .copied()
                    .find(|&e| finite(arena.edge(e).dst) && modified[e] <= Weight::ZERO)
                    .ok_or(InvariantViolation::NoNonPositiveEdge { vertex: v })?;
                min_choice[v] = Some(e);
            }
            (Player::Min, false) => min_choice[v] = Some(out[0]),
            (Player::Max, false) => {
                max_choice[v] = Some(witness[v].ok_or(InvariantViolation::MissingWitness { vertex: v })?);
            }
            (Player::Max, true) => {
                if !positive(v) {
                    max_choice[v] = Some(out[0]);
                }
            }
        }
    }

    // Attractor to the zero region in the tight-edge graph.
    let reverse = arena.reverse_index();
    let mut pending: Vec<usize> = (0..n)
        .map(|v| if arena.owner(v) == Player::Min { arena.out_edges(v).iter().filter(|&&e| tight(e)).count() } else { 0 })
        .collect();
    let mut attracted = vec![false; n];
    let mut queue: Vec<usize> = Vec::new();
    for v in (0..n).filter(|&v| finite(v)) {
        if !positive(v) || (arena.owner(v) == Player::Min && pending[v] == 0) {
            attracted[v] = true;
            queue.push(v);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &e in reverse.in_edges(x) {
            let y = arena.edge(e).src;
            if attracted[y] || !tight(e) || !positive(y) {
                continue;
            }
            match arena.owner(y) {
                Player::Max => {
                    max_choice[y] = Some(e);
                    attracted[y] = true;
                    queue.push(y);
                }
                Player::Min => {
                    pending[y] -= 1;
                    if pending[y] == 0 {
                        attracted[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
    }
    if let Some(vertex) = (0..n).find(|&v| arena.owner(v) == Player::Max && positive(v) && !attracted[v]) {
        return Err(InvariantViolation::NotAttracted { vertex }.into());
    }

    let min = Strategy::new(arena, Player::Min, min_choice).expect("one outgoing edge per Min vertex");
    let max = Strategy::new(arena, Player::Max, max_choice).expect("one outgoing edge per Max vertex");
    Ok((min, max))
}

/// Sign of the mean payoff relative to the dual objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DualThreshold {
    /// `MP >= 0`.
    NonNegative,
    /// `MP < 0`.
    Negative,
}

/// Energy from below: `values(v)` is the best `inf_k (w_0 + ... + w_{k-1})`
/// Max can guarantee against Min, in `[-inf, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualReport {
    pub values: Option<Vec<Weight>>,
    pub threshold: Vec<DualThreshold>,
    pub min_strategy: Strategy,
    pub max_strategy: Strategy,
    pub iterations: usize,
    pub per_iteration: Vec<IterationRecord>,
    pub lifted: bool,
}

/// The dual solver: iterate En⁻ reductions, implemented as the main
/// solver on the dual arena with results negated.
pub fn solve_dual(arena: &Arena, options: SolveOptions) -> Result<DualReport, SolveError> {
    let report = solve(&dualize(arena), options)?;
    let values = report
        .en_values
        .map(|vs| vs.into_iter().map(|v| v.checked_neg()).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let threshold = report
        .threshold
        .iter()
        .map(|t| match t {
            Threshold::NonPositive => DualThreshold::NonNegative,
            Threshold::Positive => DualThreshold::Negative,
        })
        .collect();
    Ok(DualReport {
        values,
        threshold,
        min_strategy: report.max_strategy.relabel(),
        max_strategy: report.min_strategy.relabel(),
        iterations: report.iterations,
        per_iteration: report.per_iteration,
        lifted: report.lifted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// An En⁺ reduction.
    Up,
    /// An En⁻ reduction.
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingStep {
    pub index: usize,
    pub direction: Direction,
    /// Vertices with finite potential whose value moved.
    pub changed: usize,
    pub newly_positive_infinite: Vec<usize>,
    pub newly_negative_infinite: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingReport {
    /// Reduction steps until every vertex was classified.
    pub steps: usize,
    /// `+inf` potentials mark `MP > 0`, `-inf` potentials `MP <= 0`.
    pub threshold: Vec<Threshold>,
    /// Energy values, recovered by the main iteration started from the
    /// classification. `None` for arenas with `-inf` weights.
    pub en_values: Option<Vec<Weight>>,
    pub finish: Option<SolveReport>,
    pub potential: Potential,
    pub trace: Vec<AlternatingStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlternatingOutcome {
    Terminated(Box<AlternatingReport>),
    NonTermination { trace: Vec<AlternatingStep> },
}

/// Experimental: alternate En⁺ and En⁻ reductions with potentials in
/// `Z ∪ {-inf, inf}` until every vertex has an infinite potential.
///
/// Both kinds of reduction keep cycle sums, so the sign of the potential
/// a vertex ends up with is the sign of its mean payoff; an `inf` comes
/// with a Max strategy keeping the play on non-negative edges, a `-inf`
/// with a Min strategy keeping it on non-positive ones. Termination is not
/// known in general: after `cap` steps the trace is returned instead.
pub fn solve_alternating(arena: &Arena, cap: usize, options: SolveOptions) -> Result<AlternatingOutcome, SolveError> {
    assert!(cap >= 1, "alternating cap must be positive");
    let n = arena.n();
    let reverse = arena.reverse_index();
    let mut total = Potential::zero(n, PotentialMode::Extended);
    let mut current = arena.clone();
    let mut witness: Vec<Option<usize>> = vec![None; n];
    let mut trace = Vec::new();
    let mut quiet = 0;

    for index in 0..cap {
        let direction = if index % 2 == 0 { Direction::Up } else { Direction::Down };
        let values = match direction {
            Direction::Up => {
                let step = compute_en_plus_indexed(&current, &reverse).map_err(|e| dijkstra_error(e, index))?;
                for v in newly_infinite(total.values(), &step.values) {
                    if arena.owner(v) == Player::Max {
                        witness[v] = step.max_strategy.choice(v);
                    }
                }
                step.values
            }
            Direction::Down => {
                let step =
                    compute_en_plus_indexed(&dualize(&current), &reverse).map_err(|e| dijkstra_error(e, index))?;
                step.values.into_iter().map(|v| v.checked_neg()).collect::<Result<Vec<_>, _>>()?
            }
        };
        let changed = (0..n).filter(|&v| total.get(v).is_finite() && values[v] != Weight::ZERO).count();
        let fresh = newly_infinite(total.values(), &values);
        let (newly_positive_infinite, newly_negative_infinite) =
            fresh.into_iter().partition(|&v| values[v] == Weight::Inf);

        let phi = Potential::new(values, PotentialMode::Extended)?;
        total = compose(&total, &phi)?;
        current = potential::apply(&current, &phi)?;
        trace.push(AlternatingStep { index, direction, changed, newly_positive_infinite, newly_negative_infinite });

        quiet = if changed == 0 { quiet + 1 } else { 0 };
        let unclassified = total.values().iter().filter(|v| v.is_finite()).count();
        if unclassified == 0 {
            return finish_alternating(arena, total, witness, trace, options)
                .map(|r| AlternatingOutcome::Terminated(Box::new(r)));
        }
        if quiet >= 2 {
            return Err(InvariantViolation::AlternatingStalled(unclassified).into());
        }
    }
    Ok(AlternatingOutcome::NonTermination { trace })
}

fn finish_alternating(
    arena: &Arena,
    total: Potential,
    witness: Vec<Option<usize>>,
    trace: Vec<AlternatingStep>,
    options: SolveOptions,
) -> Result<AlternatingReport, SolveError> {
    let threshold: Vec<Threshold> = total
        .values()
        .iter()
        .map(|&v| if v == Weight::Inf { Threshold::Positive } else { Threshold::NonPositive })
        .collect();
    let finish = if arena.edges().iter().any(|e| e.weight == Weight::NegInf) {
        None
    } else {
        // Energy is infinite exactly where the mean payoff is positive, so
        // this starting potential is sound whenever the classification is right.
        let start = threshold
            .iter()
            .map(|t| if *t == Threshold::Positive { Weight::Inf } else { Weight::ZERO })
            .collect();
        let start = Potential::new(start, PotentialMode::Natural)?.assume_sound();
        Some(solve_from(arena, start, witness, options)?)
    };
    Ok(AlternatingReport {
        steps: trace.len(),
        threshold,
        en_values: finish.as_ref().and_then(|r| r.en_values.clone()),
        finish,
        potential: total,
        trace,
    })
}
