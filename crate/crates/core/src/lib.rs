//! Energy and mean-payoff games on weighted two-player arenas, solved by
//! iterated potential reductions driven by a two-player Dijkstra.
//!
//! The entry point is [`esl::solve`]. [`oracle`] holds slow reference
//! solvers used by the tests and the `--oracle-check` flag of the CLI.

pub mod arena;
pub mod dijkstra;
pub mod esl;
pub mod oracle;
pub mod potential;
pub mod weight;

pub use arena::{Arena, ArenaError, Edge, Player, Strategy};
pub use esl::{solve, solve_alternating, solve_dual, SolveError, SolveOptions, SolveReport, Threshold};
pub use potential::{Potential, PotentialMode};
pub use weight::Weight;

/// Small arenas shared by tests, the CLI and the demo.
pub mod fixtures {
    use crate::arena::{parse, Arena};

    /// Three vertices, energy values `(2, 5, 0)`.
    pub const G3: &str = include_str!("../fixtures/g3.arena");

    pub fn g3() -> Arena {
        parse(G3).expect("fixture parses")
    }
}
