use std::io::Write;

use esl_core::arena::{dualize, Arena};
use esl_core::esl::{self, AlternatingOutcome, SolveOptions};
use esl_core::oracle::{brute_force_en, strategy_pairs, value_iteration_en, OracleError};
use esl_core::Weight;

use crate::solve::default_alternating_cap;
use crate::Failure;

/// Solve with every variant and compare against both oracles. Strategy
/// verification is part of the main solve.
pub fn run(arena: &Arena, out: &mut impl Write) -> Result<(), Failure> {
    let report = esl::solve(arena, SolveOptions::default())?;
    let values = report.en_values.expect("exact values without lifting");
    writeln!(out, "solve: {} iterations, strategies verified", report.iterations)?;
    let mut disagreements = Vec::new();
    let mut verdict = |out: &mut dyn Write, name: &str, agree: bool| -> std::io::Result<()> {
        if !agree {
            disagreements.push(name.to_string());
        }
        writeln!(out, "{name}: {}", if agree { "agree" } else { "DISAGREE" })
    };

    verdict(out, "value-iteration", value_iteration_en(arena) == values)?;
    match brute_force_en(arena) {
        Ok(b) => verdict(out, "brute-force", b == values)?,
        Err(OracleError::LimitExceeded { .. }) => {
            writeln!(out, "brute-force: skipped ({} strategy pairs)", strategy_pairs(arena))?
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }

    if arena.has_infinite_weight() {
        writeln!(out, "dual: skipped (infinite weights)")?;
    } else {
        let dual = esl::solve_dual(&dualize(arena), SolveOptions::default())?;
        let negated: Vec<Weight> = values.iter().map(|v| v.checked_neg().expect("energy is non-negative")).collect();
        verdict(out, "dual", dual.values == Some(negated))?;
    }

    let cap = default_alternating_cap(arena);
    match esl::solve_alternating(arena, cap, SolveOptions::default())? {
        AlternatingOutcome::Terminated(r) => {
            verdict(out, "alternating", r.en_values.as_ref() == Some(&values) && r.threshold == report.threshold)?
        }
        AlternatingOutcome::NonTermination { .. } => writeln!(out, "alternating: no termination within {cap} steps")?,
    }

    if disagreements.is_empty() {
        writeln!(out, "oracle: agree")?;
        Ok(())
    } else {
        Err(Failure::Disagreement(format!("disagreement: {}", disagreements.join(", "))))
    }
}
