use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use esl_core::arena::{Arena, Strategy};
use esl_core::esl::{
    self, AlternatingOutcome, AlternatingStep, DualThreshold, IterationRecord, SolveOptions, Threshold,
};
use esl_core::oracle::value_iteration_en;
use esl_core::{Potential, PotentialMode, Weight};
use serde_json::json;

use crate::{read_arena, Failure, Format};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    #[default]
    Esl,
    Dual,
    Alternating,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    variant: Variant,
    /// Print every iteration's potential, seed set and newly infinite vertices.
    #[arg(long)]
    trace: bool,
    /// Solve a non-simple arena through the lifted arena (threshold only).
    #[arg(long)]
    auto_lift: bool,
    /// Compare the result with value iteration.
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Step cap for the alternating variant; defaults to 10 n^2 W.
    #[arg(long)]
    cap: Option<usize>,
}

pub fn run(args: &SolveArgs, out: &mut impl Write) -> Result<(), Failure> {
    let arena = read_arena(&args.file)?;
    let options = SolveOptions { auto_lift: args.auto_lift, verify_strategies: true, record_potentials: args.trace };
    match args.variant {
        Variant::Esl => {
            let r = esl::solve(&arena, options)?;
            match args.format {
                Format::Ndjson => writeln!(out, "{}", serde_json::to_string(&r).expect("report serializes"))?,
                Format::Text => {
                    if args.trace {
                        write_trace(out, &r.per_iteration)?;
                    }
                    match &r.en_values {
                        Some(values) => write_values(out, values)?,
                        None => writeln!(out, "values withheld: solved on the lifted arena")?,
                    }
                    writeln!(out, "iterations {}", r.iterations)?;
                    for (v, t) in r.threshold.iter().enumerate() {
                        let t = match t {
                            Threshold::NonPositive => "mp<=0",
                            Threshold::Positive => "mp>0",
                        };
                        writeln!(out, "threshold {v} {t}")?;
                    }
                    write_strategies(out, &arena, [&r.min_strategy, &r.max_strategy])?;
                }
            }
            if args.oracle_check {
                match &r.en_values {
                    Some(values) => oracle_check(out, &arena, values)?,
                    None => {
                        let positive: Vec<bool> = r.threshold.iter().map(|t| *t == Threshold::Positive).collect();
                        threshold_check(out, &arena, &positive)?
                    }
                }
            }
        }
        Variant::Dual => {
            let r = esl::solve_dual(&arena, options)?;
            match args.format {
                Format::Ndjson => writeln!(out, "{}", serde_json::to_string(&r).expect("report serializes"))?,
                Format::Text => {
                    if args.trace {
                        write_trace(out, &r.per_iteration)?;
                    }
                    match &r.values {
                        Some(values) => write_values(out, values)?,
                        None => writeln!(out, "values withheld: solved on the lifted arena")?,
                    }
                    writeln!(out, "iterations {}", r.iterations)?;
                    for (v, t) in r.threshold.iter().enumerate() {
                        let t = match t {
                            DualThreshold::NonNegative => "mp>=0",
                            DualThreshold::Negative => "mp<0",
                        };
                        writeln!(out, "threshold {v} {t}")?;
                    }
                    write_strategies(out, &arena, [&r.min_strategy, &r.max_strategy])?;
                }
            }
            if args.oracle_check {
                // Energy from below is the negated energy of the dual arena.
                let dual = esl_core::arena::dualize(&arena);
                match &r.values {
                    Some(values) => {
                        let expected = value_iteration_en(&dual).iter().map(|x| x.checked_neg().expect("energy is non-negative")).collect::<Vec<_>>();
                        compare(out, &expected, values)?
                    }
                    None => {
                        let negative: Vec<bool> = r.threshold.iter().map(|t| *t == DualThreshold::Negative).collect();
                        threshold_check(out, &dual, &negative)?
                    }
                }
            }
        }
        Variant::Alternating => {
            let cap = args.cap.unwrap_or_else(|| default_alternating_cap(&arena));
            if cap == 0 {
                return Err(Failure::Input("--cap must be positive".into()));
            }
            match esl::solve_alternating(&arena, cap, options)? {
                AlternatingOutcome::NonTermination { trace } => match args.format {
                    Format::Ndjson => writeln!(out, "{}", json!({ "terminated": false, "cap": cap, "trace": trace }))?,
                    Format::Text => {
                        write_alternating_trace(out, &trace)?;
                        writeln!(out, "no termination within {cap} steps")?;
                    }
                },
                AlternatingOutcome::Terminated(r) => {
                    match args.format {
                        Format::Ndjson => writeln!(out, "{}", json!({ "terminated": true, "report": r }))?,
                        Format::Text => {
                            if args.trace {
                                write_alternating_trace(out, &r.trace)?;
                            }
                            if let Some(values) = &r.en_values {
                                write_values(out, values)?;
                            }
                            writeln!(out, "steps {}", r.steps)?;
                            if let Some(finish) = &r.finish {
                                writeln!(out, "iterations {}", finish.iterations)?;
                            }
                            for (v, t) in r.threshold.iter().enumerate() {
                                let t = match t {
                                    Threshold::NonPositive => "mp<=0",
                                    Threshold::Positive => "mp>0",
                                };
                                writeln!(out, "threshold {v} {t}")?;
                            }
                            if let Some(finish) = &r.finish {
                                write_strategies(out, &arena, [&finish.min_strategy, &finish.max_strategy])?;
                            }
                        }
                    }
                    if args.oracle_check {
                        match &r.en_values {
                            Some(values) => oracle_check(out, &arena, values)?,
                            None => {
                                let positive: Vec<bool> =
                                    r.threshold.iter().map(|t| *t == Threshold::Positive).collect();
                                threshold_check(out, &arena, &positive)?
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn default_alternating_cap(arena: &Arena) -> usize {
    let n = arena.n();
    10usize.saturating_mul(n).saturating_mul(n).saturating_mul(arena.max_abs_weight() as usize).max(1)
}

fn write_values(out: &mut impl Write, values: &[Weight]) -> std::io::Result<()> {
    for (v, x) in values.iter().enumerate() {
        writeln!(out, "{v} {x}")?;
    }
    Ok(())
}

fn write_strategies<'a>(
    out: &mut impl Write,
    arena: &Arena,
    strategies: impl IntoIterator<Item = &'a Strategy>,
) -> std::io::Result<()> {
    for s in strategies {
        for (v, e) in s.iter() {
            let edge = arena.edge(e);
            writeln!(out, "strategy {v} {} edge {e} ({} -> {})", s.player(), edge.src, edge.dst)?;
        }
    }
    Ok(())
}

fn write_trace(out: &mut impl Write, records: &[IterationRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "iteration {}", r.index)?;
        if let Some(phi) = &r.phi {
            let phi = Potential::new(phi.clone(), PotentialMode::Natural).expect("En+ values are non-negative");
            write!(out, "{phi}")?;
        }
        writeln!(out, "seeds {}", list(&r.seeds))?;
        writeln!(out, "newly-infinite {}", list(&r.newly_infinite))?;
    }
    Ok(())
}

fn write_alternating_trace(out: &mut impl Write, trace: &[AlternatingStep]) -> std::io::Result<()> {
    for s in trace {
        writeln!(
            out,
            "step {} {:?} changed {} newly-inf {} newly-neg-inf {}",
            s.index,
            s.direction,
            s.changed,
            list(&s.newly_positive_infinite),
            list(&s.newly_negative_infinite)
        )?;
    }
    Ok(())
}

fn list(xs: &[usize]) -> String {
    if xs.is_empty() {
        "-".to_string()
    } else {
        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn oracle_check(out: &mut impl Write, arena: &Arena, values: &[Weight]) -> Result<(), Failure> {
    compare(out, &value_iteration_en(arena), values)
}

fn compare(out: &mut impl Write, expected: &[Weight], values: &[Weight]) -> Result<(), Failure> {
    match (0..values.len()).find(|&v| expected[v] != values[v]) {
        None => {
            writeln!(out, "oracle: agree")?;
            Ok(())
        }
        Some(v) => Err(Failure::Disagreement(format!(
            "oracle: disagree at vertex {v}: solver {}, value iteration {}",
            values[v], expected[v]
        ))),
    }
}

/// Threshold-only check: energy is infinite exactly where `positive` holds.
fn threshold_check(out: &mut impl Write, arena: &Arena, positive: &[bool]) -> Result<(), Failure> {
    let expected = value_iteration_en(arena);
    match (0..arena.n()).find(|&v| expected[v].is_infinite() != positive[v]) {
        None => {
            writeln!(out, "oracle: agree")?;
            Ok(())
        }
        Some(v) => Err(Failure::Disagreement(format!("oracle: threshold disagrees at vertex {v}"))),
    }
}
