//! Independent reference solvers, deliberately naive.
//!
//! * [`evaluate`] computes a valuation on an ultimately periodic weight word;
//! * [`value_iteration_en`] computes energy values as the least fixed point
//!   of the lifting operator, capped at `(n - 1) * W`;
//! * [`brute_force`] enumerates all pairs of positional strategies;
//! * [`verify_strategy`] checks a strategy by solving the one-player game
//!   it leaves to the opponent.
//!
//! None of these share code with the Dijkstra-based solver.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::arena::{Arena, Edge, Player, Strategy};
use crate::weight::Weight;

pub const DEFAULT_BRUTE_FORCE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Valuation {
    MeanPayoff,
    Energy,
    PositiveEnergy,
    NegativeEnergy,
}

/// A real number extended with both infinities; rationals are enough here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Ratio<i64>),
    Inf,
}

impl Extended {
    pub fn integer(x: i64) -> Self {
        Extended::Finite(Ratio::from_integer(x))
    }

    /// The value as an extended integer, if it is one.
    pub fn to_weight(self) -> Option<Weight> {
        match self {
            Extended::NegInf => Some(Weight::NegInf),
            Extended::Inf => Some(Weight::Inf),
            Extended::Finite(r) => r.is_integer().then(|| Weight::Finite(r.to_integer())),
        }
    }
}

impl From<Weight> for Extended {
    fn from(w: Weight) -> Self {
        match w {
            Weight::NegInf => Extended::NegInf,
            Weight::Finite(x) => Extended::integer(x),
            Weight::Inf => Extended::Inf,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cycle of an ultimately periodic word must be nonempty")]
    EmptyCycle,
    #[error("{pairs} strategy pairs exceed the brute-force limit {limit}")]
    LimitExceeded { pairs: u64, limit: u64 },
}

/// `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltimatelyPeriodicWord {
    prefix: Vec<Weight>,
    cycle: Vec<Weight>,
}

impl UltimatelyPeriodicWord {
    pub fn new(prefix: Vec<Weight>, cycle: Vec<Weight>) -> Result<Self, OracleError> {
        if cycle.is_empty() {
            return Err(OracleError::EmptyCycle);
        }
        Ok(UltimatelyPeriodicWord { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Weight] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Weight] {
        &self.cycle
    }

    /// Prefix followed by one copy of the cycle.
    fn unrolled(&self) -> impl Iterator<Item = Weight> + '_ {
        self.prefix.iter().chain(&self.cycle).copied()
    }

    fn cycle_sum(&self) -> Extended {
        sum_extended(&self.cycle)
    }
}

fn sum_extended(ws: &[Weight]) -> Extended {
    if ws.contains(&Weight::Inf) {
        return Extended::Inf;
    }
    if ws.contains(&Weight::NegInf) {
        return Extended::NegInf;
    }
    let s: i128 = ws.iter().map(|w| w.finite().unwrap() as i128).sum();
    Extended::integer(i64::try_from(s).expect("word sums fit in i64"))
}

/// Running partial sums over `ws`, in `i128` with explicit infinities.
#[derive(Clone, Copy)]
enum Running {
    Finite(i128),
    Inf,
    NegInf,
}

impl Running {
    fn step(self, w: Weight) -> Running {
        match (self, w) {
            (Running::NegInf, _) => Running::NegInf,
            (Running::Inf, _) => Running::Inf,
            (_, Weight::Inf) => Running::Inf,
            (_, Weight::NegInf) => Running::NegInf,
            (Running::Finite(s), Weight::Finite(x)) => Running::Finite(s + x as i128),
        }
    }

    fn to_extended(self) -> Extended {
        match self {
            Running::Finite(s) => Extended::integer(i64::try_from(s).expect("word sums fit in i64")),
            Running::Inf => Extended::Inf,
            Running::NegInf => Extended::NegInf,
        }
    }
}

/// Value of an ultimately periodic word under a valuation.
///
/// One unrolled copy of the cycle suffices everywhere: for the energy
/// valuation, when the cycle sum is non-positive every partial sum in a
/// later copy is bounded by the matching partial sum in the first one;
/// for the (positive|negative) energy valuations the first stopping weight,
/// if any, already occurs in the first copy.
pub fn evaluate(word: &UltimatelyPeriodicWord, which: Valuation) -> Extended {
    match which {
        Valuation::MeanPayoff => match word.cycle_sum() {
            Extended::Finite(s) => Extended::Finite(s / Ratio::from_integer(word.cycle.len() as i64)),
            other => other,
        },
        Valuation::Energy => {
            let mut sum = Running::Finite(0);
            let mut best = Running::Finite(0);
            for w in word.unrolled() {
                sum = sum.step(w);
                match sum {
                    Running::Inf => return Extended::Inf,
                    Running::NegInf => return best.to_extended(),
                    Running::Finite(s) => {
                        if let Running::Finite(b) = best {
                            best = Running::Finite(b.max(s));
                        }
                    }
                }
            }
            if word.cycle_sum() > Extended::integer(0) {
                Extended::Inf
            } else {
                best.to_extended()
            }
        }
        Valuation::PositiveEnergy => stop_sum(word, Weight::is_negative, |s| s > Extended::integer(0)),
        Valuation::NegativeEnergy => stop_sum(word, Weight::is_positive, |s| s < Extended::integer(0)),
    }
}

/// Sum of the weights before the first weight satisfying `stops`; when the
/// word never stops, the limit of the partial sums (`diverges` tells
/// whether a cycle sum drives them to infinity).
fn stop_sum(word: &UltimatelyPeriodicWord, stops: fn(Weight) -> bool, diverges: fn(Extended) -> bool) -> Extended {
    let mut sum = Running::Finite(0);
    for w in word.unrolled() {
        if stops(w) {
            return sum.to_extended();
        }
        sum = sum.step(w);
        if !matches!(sum, Running::Finite(_)) {
            return sum.to_extended();
        }
    }
    let cycle = word.cycle_sum();
    if diverges(cycle) {
        if cycle > Extended::integer(0) {
            Extended::Inf
        } else {
            Extended::NegInf
        }
    } else {
        sum.to_extended()
    }
}

/// Energy values by round-robin value iteration of
/// `f(v) = opt over edges v->v' of max(0, w + f(v'))`
/// (min at Min vertices, max at Max vertices), starting from 0.
/// Any value above `(n - 1) * W` is reported as `inf`.
pub fn value_iteration_en(arena: &Arena) -> Vec<Weight> {
    let n = arena.n();
    let cap = (n.saturating_sub(1) as i128) * (arena.max_abs_weight() as i128);
    let mut f: Vec<Option<i128>> = vec![Some(0); n];
    let lift = |w: Weight, target: Option<i128>| -> Option<i128> {
        match (w, target) {
            (Weight::NegInf, _) => Some(0),
            (Weight::Inf, _) | (_, None) => None,
            (Weight::Finite(x), Some(t)) => {
                let r = (x as i128 + t).max(0);
                (r <= cap).then_some(r)
            }
        }
    };
    // None is +inf: min and max over Option<i128> with that convention.
    let better = |player: Player, a: Option<i128>, b: Option<i128>| -> Option<i128> {
        match (player, a, b) {
            (Player::Min, None, x) | (Player::Min, x, None) => x,
            (Player::Min, Some(x), Some(y)) => Some(x.min(y)),
            (Player::Max, None, _) | (Player::Max, _, None) => None,
            (Player::Max, Some(x), Some(y)) => Some(x.max(y)),
        }
    };
    loop {
        let mut changed = false;
        for v in 0..n {
            let player = arena.owner(v);
            let mut out = arena.out_edges(v).iter().map(|&e| {
                let edge = arena.edge(e);
                lift(edge.weight, f[edge.dst])
            });
            let first = out.next().expect("sinkless");
            let next = out.fold(first, |acc, x| better(player, acc, x));
            if next != f[v] {
                f[v] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    f.into_iter()
        .map(|x| x.map_or(Weight::Inf, |x| Weight::Finite(x as i64)))
        .collect()
}

/// Result of [`brute_force`]: values and a pair of optimal positional strategies.
#[derive(Clone, Debug)]
pub struct BruteForce {
    pub values: Vec<Extended>,
    pub min_strategy: Strategy,
    pub max_strategy: Strategy,
    pub pairs: u64,
}

/// Number of positional strategy pairs, saturating.
pub fn strategy_pairs(arena: &Arena) -> u64 {
    (0..arena.n()).fold(1u64, |acc, v| acc.saturating_mul(arena.out_edges(v).len() as u64))
}

/// Mixed-radix enumeration of the positional strategies of one player.
struct Enumeration<'a> {
    arena: &'a Arena,
    vertices: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Enumeration<'a> {
    fn new(arena: &'a Arena, player: Player) -> Self {
        let vertices: Vec<usize> = arena.vertices_of(player).collect();
        let digits = vec![0; vertices.len()];
        Enumeration { arena, vertices, digits, done: false }
    }

    /// Writes the current strategy into `succ` and advances.
    fn next_into(&mut self, succ: &mut [usize]) -> bool {
        if self.done {
            return false;
        }
        for (i, &v) in self.vertices.iter().enumerate() {
            succ[v] = self.arena.out_edges(v)[self.digits[i]];
        }
        self.done = true;
        for (i, &v) in self.vertices.iter().enumerate() {
            self.digits[i] += 1;
            if self.digits[i] < self.arena.out_edges(v).len() {
                self.done = false;
                break;
            }
            self.digits[i] = 0;
        }
        true
    }
}

/// The play from `start` when every vertex follows `succ` (an edge index).
fn lasso(arena: &Arena, succ: &[usize], start: usize, seen: &mut [usize], buf: &mut Vec<Weight>) -> UltimatelyPeriodicWord {
    const UNSEEN: usize = usize::MAX;
    seen.fill(UNSEEN);
    buf.clear();
    let mut v = start;
    while seen[v] == UNSEEN {
        seen[v] = buf.len();
        let e = arena.edge(succ[v]);
        buf.push(e.weight);
        v = e.dst;
    }
    let split = seen[v];
    UltimatelyPeriodicWord { prefix: buf[..split].to_vec(), cycle: buf[split..].to_vec() }
}

/// Values of `which` by enumerating every pair of positional strategies:
/// `min over Min strategies of max over Max strategies`, per vertex.
///
/// Optimal strategies are found in a second pass, as the first Min
/// strategy whose worst case and the first Max strategy whose best case
/// match the values everywhere.
pub fn brute_force(arena: &Arena, which: Valuation, limit: u64) -> Result<BruteForce, OracleError> {
    let pairs = strategy_pairs(arena);
    if pairs > limit {
        return Err(OracleError::LimitExceeded { pairs, limit });
    }
    let mut plays = Plays::new(arena, which);
    let mut values = vec![Extended::Inf; arena.n()];
    plays.for_each_outer(Player::Min, |row| {
        for (v, x) in values.iter_mut().zip(row) {
            *v = (*v).min(*x);
        }
        false
    });
    let min_strategy = plays.optimal(Player::Min, &values);
    let max_strategy = plays.optimal(Player::Max, &values);
    Ok(BruteForce { values, min_strategy, max_strategy, pairs })
}

/// Scratch space for evaluating plays of strategy pairs.
struct Plays<'a> {
    arena: &'a Arena,
    which: Valuation,
    succ: Vec<usize>,
    seen: Vec<usize>,
    buf: Vec<Weight>,
}

impl<'a> Plays<'a> {
    fn new(arena: &'a Arena, which: Valuation) -> Self {
        let n = arena.n();
        Plays { arena, which, succ: vec![0; n], seen: vec![0; n], buf: Vec::new() }
    }

    /// For each strategy of `outer`, the opponent's best response row
    /// (max over Max strategies if `outer` is Min, min otherwise). Stops
    /// early when `visit` returns true; the stopping strategy stays in `succ`.
    fn for_each_outer(&mut self, outer: Player, mut visit: impl FnMut(&[Extended]) -> bool) {
        let n = self.arena.n();
        let mut outer_enum = Enumeration::new(self.arena, outer);
        let mut response = vec![Extended::Inf; n];
        let mut outer_choice = vec![0; n];
        while outer_enum.next_into(&mut self.succ) {
            outer_choice.copy_from_slice(&self.succ);
            response.fill(match outer {
                Player::Min => Extended::NegInf,
                Player::Max => Extended::Inf,
            });
            let mut inner_enum = Enumeration::new(self.arena, outer.opponent());
            while inner_enum.next_into(&mut self.succ) {
                for (v, r) in response.iter_mut().enumerate() {
                    let x = evaluate(&lasso(self.arena, &self.succ, v, &mut self.seen, &mut self.buf), self.which);
                    *r = match outer {
                        Player::Min => (*r).max(x),
                        Player::Max => (*r).min(x),
                    };
                }
            }
            self.succ.copy_from_slice(&outer_choice);
            if visit(&response) {
                return;
            }
        }
    }

    fn optimal(&mut self, player: Player, values: &[Extended]) -> Strategy {
        let mut found = false;
        self.for_each_outer(player, |row| {
            found = row == values;
            found
        });
        assert!(found, "positional determinacy: some strategy is optimal everywhere");
        let arena = self.arena;
        let choice = (0..arena.n()).map(|v| (arena.owner(v) == player).then_some(self.succ[v])).collect();
        Strategy::new(arena, player, choice).expect("enumerated edges are outgoing")
    }
}

/// Energy values by strategy enumeration with the default limit.
pub fn brute_force_en(arena: &Arena) -> Result<Vec<Weight>, OracleError> {
    Ok(brute_force(arena, Valuation::Energy, DEFAULT_BRUTE_FORCE_LIMIT)?
        .values
        .into_iter()
        .map(|x| x.to_weight().expect("energy values are integers"))
        .collect())
}

/// Where a strategy falls short of the claimed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub vertex: usize,
    pub claimed: Weight,
    pub achieved: Weight,
}

/// Fix `strategy` and let the opponent play freely: the strategy is
/// confirmed when the resulting energy values are `<= claimed` (Min) or
/// `>= claimed` (Max) at every vertex.
pub fn verify_strategy(arena: &Arena, strategy: &Strategy, claimed: &[Weight]) -> Result<(), Counterexample> {
    assert_eq!(claimed.len(), arena.n(), "claims must be total");
    let kept: Vec<Edge> = (0..arena.n())
        .flat_map(|v| match strategy.choice(v) {
            Some(e) => vec![*arena.edge(e)],
            None => arena.out_edges(v).iter().map(|&e| *arena.edge(e)).collect(),
        })
        .collect();
    let restricted = Arena::new(arena.owners().to_vec(), kept).expect("restriction keeps one edge per vertex");
    let achieved = value_iteration_en(&restricted);
    for v in 0..arena.n() {
        let ok = match strategy.player() {
            Player::Min => achieved[v] <= claimed[v],
            Player::Max => achieved[v] >= claimed[v],
        };
        if !ok {
            return Err(Counterexample { vertex: v, claimed: claimed[v], achieved: achieved[v] });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(xs: &[i64]) -> Vec<Weight> {
        xs.iter().map(|&x| Weight::Finite(x)).collect()
    }

    fn word(prefix: &[i64], cycle: &[i64]) -> UltimatelyPeriodicWord {
        UltimatelyPeriodicWord::new(w(prefix), w(cycle)).unwrap()
    }

    fn int(x: i64) -> Extended {
        Extended::integer(x)
    }

    #[test]
    fn immediate_negative() {
        let x = word(&[], &[-1]);
        assert_eq!(evaluate(&x, Valuation::MeanPayoff), int(-1));
        assert_eq!(evaluate(&x, Valuation::Energy), int(0));
        assert_eq!(evaluate(&x, Valuation::PositiveEnergy), int(0));
        assert_eq!(evaluate(&x, Valuation::NegativeEnergy), Extended::NegInf);
    }

    #[test]
    fn prefix_then_descent() {
        assert_eq!(evaluate(&word(&[5], &[-1]), Valuation::Energy), int(5));
    }

    #[test]
    fn alternating_cycle() {
        let x = word(&[], &[2, -3]);
        assert_eq!(evaluate(&x, Valuation::MeanPayoff), Extended::Finite(Ratio::new(-1, 2)));
        assert_eq!(evaluate(&x, Valuation::Energy), int(2));
        assert_eq!(evaluate(&x, Valuation::PositiveEnergy), int(2));
        assert_eq!(evaluate(&x, Valuation::NegativeEnergy), int(0));
    }

    #[test]
    fn positive_cycle() {
        let x = word(&[], &[1]);
        assert_eq!(evaluate(&x, Valuation::Energy), Extended::Inf);
        assert_eq!(evaluate(&x, Valuation::PositiveEnergy), Extended::Inf);
    }

    #[test]
    fn zero_cycle_keeps_finite_sums() {
        let x = word(&[3, 1], &[0, 2, -2]);
        assert_eq!(evaluate(&x, Valuation::Energy), int(6));
        assert_eq!(evaluate(&x, Valuation::PositiveEnergy), int(6));
        assert_eq!(evaluate(&word(&[4], &[0]), Valuation::PositiveEnergy), int(4));
    }

    #[test]
    fn infinite_weights() {
        let x = UltimatelyPeriodicWord::new(w(&[2]), vec![Weight::Inf]).unwrap();
        assert_eq!(evaluate(&x, Valuation::Energy), Extended::Inf);
        let y = UltimatelyPeriodicWord::new(vec![Weight::Finite(-1), Weight::Inf], w(&[0])).unwrap();
        assert_eq!(evaluate(&y, Valuation::PositiveEnergy), int(0));
    }

    #[test]
    fn empty_cycle_rejected() {
        assert_eq!(UltimatelyPeriodicWord::new(w(&[1]), vec![]), Err(OracleError::EmptyCycle));
    }

    #[test]
    fn value_iteration_g3_and_loops() {
        assert_eq!(value_iteration_en(&fixtures::g3()), w(&[2, 5, 0]));
        let min = Arena::new(vec![Player::Min], vec![Edge::new(0, 0, -1)]).unwrap();
        assert_eq!(value_iteration_en(&min), w(&[0]));
        let max = Arena::new(vec![Player::Max], vec![Edge::new(0, 0, 1)]).unwrap();
        assert_eq!(value_iteration_en(&max), vec![Weight::Inf]);
    }

    #[test]
    fn brute_force_g3() {
        let r = brute_force(&fixtures::g3(), Valuation::Energy, DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
        assert_eq!(r.values, vec![int(2), int(5), int(0)]);
        assert_eq!(r.pairs, 4);
        assert_eq!(r.min_strategy.choice(0), Some(0));
        assert_eq!(r.max_strategy.choice(1), Some(2));
        assert_eq!(brute_force_en(&fixtures::g3()).unwrap(), value_iteration_en(&fixtures::g3()));
    }

    #[test]
    fn brute_force_single_vertex_matches_evaluate() {
        for x in -2..=2 {
            let a = Arena::new(vec![Player::Max], vec![Edge::new(0, 0, x)]).unwrap();
            for which in [Valuation::MeanPayoff, Valuation::Energy, Valuation::PositiveEnergy, Valuation::NegativeEnergy] {
                let direct = evaluate(&word(&[], &[x]), which);
                assert_eq!(brute_force(&a, which, 10).unwrap().values, vec![direct]);
            }
        }
    }

    #[test]
    fn brute_force_limit() {
        let err = brute_force(&fixtures::g3(), Valuation::Energy, 3).unwrap_err();
        assert_eq!(err, OracleError::LimitExceeded { pairs: 4, limit: 3 });
    }

    #[test]
    fn verify_g3_strategies() {
        let g3 = fixtures::g3();
        let good = Strategy::new(&g3, Player::Min, vec![Some(0), None, Some(4)]).unwrap();
        let claims = [Weight::Finite(2), Weight::Inf, Weight::Finite(0)];
        assert_eq!(verify_strategy(&g3, &good, &claims), Ok(()));

        // a -> b lets Max close the positive cycle a -> b -> c -> a.
        let bad = Strategy::new(&g3, Player::Min, vec![Some(1), None, Some(4)]).unwrap();
        let claims = [Weight::Finite(2), Weight::Inf, Weight::Inf];
        let cex = verify_strategy(&g3, &bad, &claims).unwrap_err();
        assert_eq!(cex.vertex, 0);
        assert!(cex.achieved > Weight::Finite(2));

        assert_eq!(verify_strategy(&g3, &bad, &[Weight::Inf; 3]), Ok(()));
    }
}
