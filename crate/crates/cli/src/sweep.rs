//! Seeded sweeps over random arenas. One NDJSON record per instance, in
//! index order, then a summary record.
//!
//! Instance record fields: `index`, `arena_seed`, `n`, `m`, `w`,
//! `not_simple`, `esl_iterations`, `dual_iterations`, `alternating_steps`,
//! `alternating_terminated`, `alternating_not_simple`, `agree` (`oracle`, `brute_force`,
//! `strategies`, `dual`, `alternating`; `null` when not run), `error`, and
//! `timings_us` with `--timings`. `esl gen --n N --m M --w W --seed
//! ARENA_SEED` reproduces an instance.

use std::io::Write;
use std::time::Instant;

use clap::{Args, ValueEnum};
use esl_core::arena::{dualize, generate_random, is_simple, Arena};
use esl_core::esl::{self, AlternatingOutcome, SolveError, SolveOptions, Threshold};
use esl_core::oracle::{brute_force_en, value_iteration_en};
use esl_core::Weight;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::solve::default_alternating_cap;
use crate::Failure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `n <= 8`, `m <= 3n`, `W <= 4`, simple (rejection sampled).
    #[default]
    Small,
    /// `9 <= n <= 24`, `m <= 3n`, `W <= 16`, not filtered for simplicity.
    /// No brute force.
    Medium,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t)]
    family: Family,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long)]
    seed: u64,
    /// Add wall-clock timings to each record (makes the output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Default, Serialize)]
struct Agreement {
    oracle: bool,
    brute_force: Option<bool>,
    strategies: bool,
    dual: Option<bool>,
    alternating: Option<bool>,
}

#[derive(Debug, Default, Serialize)]
struct Timings {
    esl: u128,
    dual: u128,
    alternating: u128,
}

#[derive(Debug, Serialize)]
struct Record {
    index: usize,
    arena_seed: u64,
    n: usize,
    m: usize,
    w: i64,
    not_simple: bool,
    esl_iterations: Option<usize>,
    dual_iterations: Option<usize>,
    alternating_steps: Option<usize>,
    alternating_terminated: bool,
    alternating_not_simple: bool,
    agree: Agreement,
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_us: Option<Timings>,
}

impl Record {
    fn disagrees(&self) -> bool {
        let a = &self.agree;
        self.error.is_some()
            || !a.oracle
            || !a.strategies
            || [a.brute_force, a.dual, a.alternating].contains(&Some(false))
    }
}

fn sample(family: Family, rng: &mut ChaCha8Rng) -> (Arena, u64, i64) {
    loop {
        let (n, w) = match family {
            Family::Small => (rng.gen_range(1..=8), rng.gen_range(1..=4)),
            Family::Medium => (rng.gen_range(9..=24), rng.gen_range(1..=16)),
        };
        let m = rng.gen_range(n..=3 * n);
        let seed = rng.gen();
        let a = generate_random(n, m, w, seed).expect("feasible parameters");
        if family == Family::Medium || is_simple(&a) {
            return (a, seed, w);
        }
    }
}

fn micros(t: Instant) -> u128 {
    t.elapsed().as_micros()
}

fn run_instance(family: Family, seed: u64, index: usize, timings: bool) -> Record {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let (arena, arena_seed, w) = sample(family, &mut rng);
    let mut record = Record {
        index,
        arena_seed,
        n: arena.n(),
        m: arena.m(),
        w,
        not_simple: false,
        esl_iterations: None,
        dual_iterations: None,
        alternating_steps: None,
        alternating_terminated: false,
        alternating_not_simple: false,
        agree: Agreement::default(),
        error: None,
        timings_us: None,
    };
    let mut time = Timings::default();
    let oracle = value_iteration_en(&arena);

    let t = Instant::now();
    let primal = esl::solve(&arena, SolveOptions::default());
    time.esl = micros(t);
    let values = match primal {
        Ok(r) => {
            record.esl_iterations = Some(r.iterations);
            record.agree.strategies = true;
            r.en_values.expect("exact values without lifting")
        }
        Err(SolveError::NotSimple { .. }) => {
            record.not_simple = true;
            let lifted = SolveOptions { auto_lift: true, ..SolveOptions::default() };
            match esl::solve(&arena, lifted) {
                Ok(r) => {
                    record.esl_iterations = Some(r.iterations);
                    record.agree.strategies = true;
                    record.agree.oracle = r
                        .threshold
                        .iter()
                        .zip(&oracle)
                        .all(|(t, v)| (*t == Threshold::Positive) == v.is_infinite());
                }
                Err(e) => record.error = Some(e.to_string()),
            }
            return finish(record, time, timings);
        }
        Err(e) => {
            record.error = Some(e.to_string());
            return finish(record, time, timings);
        }
    };
    record.agree.oracle = values == oracle;
    if family == Family::Small {
        if let Ok(b) = brute_force_en(&arena) {
            record.agree.brute_force = Some(b == values);
        }
    }

    let t = Instant::now();
    let dual = esl::solve_dual(&dualize(&arena), SolveOptions::default());
    time.dual = micros(t);
    match dual {
        Ok(d) => {
            record.dual_iterations = Some(d.iterations);
            let negated: Vec<Weight> = values.iter().map(|v| v.checked_neg().expect("energy is non-negative")).collect();
            record.agree.dual = Some(d.values == Some(negated));
        }
        Err(e) => record.error = Some(format!("dual: {e}")),
    }

    let t = Instant::now();
    let alternating = esl::solve_alternating(&arena, default_alternating_cap(&arena), SolveOptions::default());
    time.alternating = micros(t);
    match alternating {
        Ok(AlternatingOutcome::Terminated(r)) => {
            record.alternating_terminated = true;
            record.alternating_steps = Some(r.steps);
            record.agree.alternating = Some(r.en_values.as_ref() == Some(&values));
        }
        Ok(AlternatingOutcome::NonTermination { trace }) => record.alternating_steps = Some(trace.len()),
        // Its potentials differ from the main run's, so it can meet a zero
        // cycle the main run never saw.
        Err(SolveError::NotSimple { .. }) => record.alternating_not_simple = true,
        Err(e) => record.error = Some(format!("alternating: {e}")),
    }
    finish(record, time, timings)
}

fn finish(mut record: Record, time: Timings, timings: bool) -> Record {
    if timings {
        record.timings_us = Some(time);
    }
    record
}

pub fn run(args: &SweepArgs, out: &mut impl Write) -> Result<(), Failure> {
    let records: Vec<Record> = (0..args.count)
        .into_par_iter()
        .map(|i| run_instance(args.family, args.seed, i, args.timings))
        .collect();

    let (mut disagreements, mut not_simple, mut terminated) = (0, 0, 0);
    let (mut fewer, mut equal, mut more) = (0, 0, 0);
    for r in &records {
        writeln!(out, "{}", serde_json::to_string(r).expect("record serializes"))?;
        disagreements += r.disagrees() as usize;
        not_simple += r.not_simple as usize;
        if let (true, Some(steps), Some(iterations)) = (r.alternating_terminated, r.alternating_steps, r.esl_iterations) {
            terminated += 1;
            match steps.cmp(&iterations) {
                std::cmp::Ordering::Less => fewer += 1,
                std::cmp::Ordering::Equal => equal += 1,
                std::cmp::Ordering::Greater => more += 1,
            }
        }
    }
    let win_rate = if terminated > 0 { fewer as f64 / terminated as f64 } else { 0.0 };
    let summary = json!({
        "summary": {
            "family": format!("{:?}", args.family).to_lowercase(),
            "seed": args.seed,
            "instances": records.len(),
            "disagreements": disagreements,
            "not_simple": not_simple,
            "alternating_terminated": terminated,
            "alternating_fewer_steps": fewer,
            "alternating_equal_steps": equal,
            "alternating_more_steps": more,
            "alternating_win_rate": win_rate,
        }
    });
    writeln!(out, "{summary}")?;
    eprintln!("disagreements: {disagreements}");
    if disagreements > 0 {
        return Err(Failure::Disagreement(format!("{disagreements} instances disagree")));
    }
    Ok(())
}
