//! Potentials and potential reductions.
//!
//! A potential `phi` rewrites every edge weight `w(u -> v)` into
//! `w + phi(v) - phi(u)`. Cycle sums are unchanged, so simplicity and the
//! sign of mean payoffs survive. When `phi` is sound (`phi <= En`), energy
//! values shift by exactly `phi`: `En = phi + En_phi`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arena::{Arena, ArenaError};
use crate::weight::{Weight, WeightError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialMode {
    /// Values in `N ∪ {inf}`; used by the main iteration.
    Natural,
    /// Values in `Z ∪ {-inf, inf}`; used by the alternating variant.
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("vertex {vertex}: value {value} not allowed in {mode:?} mode")]
    OutOfDomain { vertex: usize, value: Weight, mode: PotentialMode },
    #[error("potential has {got} values, arena has {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("cannot combine {0:?} and {1:?} potentials")]
    ModeMismatch(PotentialMode, PotentialMode),
    #[error("edge {edge} does not start at vertex {expected}")]
    PathMismatch { edge: usize, expected: usize },
    #[error("path visits vertex {vertex} with infinite potential")]
    InfiniteOnPath { vertex: usize },
    #[error("weight arithmetic: {0}")]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Potential {
    values: Vec<Weight>,
    mode: PotentialMode,
    /// Provenance flag: set only by constructors known to produce
    /// `phi <= En` (En⁺ values, sums of sound potentials). Never verified.
    sound: bool,
}

impl Potential {
    pub fn zero(n: usize, mode: PotentialMode) -> Self {
        Potential { values: vec![Weight::ZERO; n], mode, sound: true }
    }

    /// An arbitrary potential; not marked sound.
    pub fn new(values: Vec<Weight>, mode: PotentialMode) -> Result<Self, PotentialError> {
        if mode == PotentialMode::Natural {
            if let Some(vertex) = values.iter().position(|w| w.is_negative()) {
                return Err(PotentialError::OutOfDomain { vertex, value: values[vertex], mode });
            }
        }
        Ok(Potential { values, mode, sound: false })
    }

    /// A natural potential known to be sound, such as En⁺ values.
    pub fn sound(values: Vec<Weight>) -> Result<Self, PotentialError> {
        Ok(Potential { sound: true, ..Self::new(values, PotentialMode::Natural)? })
    }

    pub(crate) fn assume_sound(mut self) -> Self {
        self.sound = true;
        self
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    pub fn get(&self, v: usize) -> Weight {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mode(&self) -> PotentialMode {
        self.mode
    }

    pub fn is_sound(&self) -> bool {
        self.sound
    }

    /// Largest finite value, or `None` if every value is infinite.
    pub fn max_finite(&self) -> Option<i64> {
        self.values.iter().filter_map(|w| w.finite()).max()
    }
}

/// `potential <vertex> <value>` lines.
impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, value) in self.values.iter().enumerate() {
            writeln!(f, "potential {v} {value}")?;
        }
        Ok(())
    }
}

/// The `phi`-modified weight of an edge `src -> dst` of weight `w`.
///
/// An infinite endpoint potential makes the edge infinite with the same
/// sign (the source is checked first, then the target); otherwise an
/// infinite `w` stays as is; otherwise `w + phi_dst - phi_src`.
pub fn modified_weight(w: Weight, phi_src: Weight, phi_dst: Weight) -> Result<Weight, WeightError> {
    match (phi_src, phi_dst, w) {
        (Weight::Inf, _, _) | (_, Weight::Inf, _) if phi_src != Weight::NegInf => Ok(Weight::Inf),
        (Weight::NegInf, _, _) => Ok(Weight::NegInf),
        (_, Weight::NegInf, _) => Ok(Weight::NegInf),
        (_, _, Weight::Inf) => Ok(Weight::Inf),
        (_, _, Weight::NegInf) => Ok(Weight::NegInf),
        (Weight::Finite(s), Weight::Finite(d), Weight::Finite(x)) => {
            let r = (x as i128) + (d as i128) - (s as i128);
            i64::try_from(r)
                .ok()
                .filter(|&r| r != i64::MIN)
                .map(Weight::Finite)
                .ok_or(WeightError::Overflow)
        }
        _ => unreachable!("all infinite cases handled above"),
    }
}

fn check_len(arena: &Arena, phi: &Potential) -> Result<(), PotentialError> {
    if phi.len() != arena.n() {
        return Err(PotentialError::Length { expected: arena.n(), got: phi.len() });
    }
    Ok(())
}

/// Modified weights for every edge of `arena`, in edge order.
pub fn modified_weights(arena: &Arena, phi: &Potential) -> Result<Vec<Weight>, PotentialError> {
    check_len(arena, phi)?;
    arena
        .edges()
        .iter()
        .map(|e| Ok(modified_weight(e.weight, phi.get(e.src), phi.get(e.dst))?))
        .collect()
}

/// The `phi`-modified arena: same graph, modified weights.
pub fn apply(arena: &Arena, phi: &Potential) -> Result<Arena, PotentialError> {
    Ok(arena.with_weights(&modified_weights(arena, phi)?)?)
}

/// Pointwise sum with infinity absorption. `inf + -inf` is an error.
///
/// The result is marked sound when both inputs are, which is the
/// composition property as long as `phi2` is sound for the game already
/// modified by `phi`.
pub fn compose(phi: &Potential, phi2: &Potential) -> Result<Potential, PotentialError> {
    if phi.mode != phi2.mode {
        return Err(PotentialError::ModeMismatch(phi.mode, phi2.mode));
    }
    assert_eq!(phi.len(), phi2.len(), "potentials over the same vertices");
    let values = phi
        .values
        .iter()
        .zip(&phi2.values)
        .map(|(a, b)| a.checked_add(*b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Potential { values, mode: phi.mode, sound: phi.sound && phi2.sound })
}

/// Sum of a path (given as edge indices from `start`) in the modified game:
/// `sum(path) - phi(start) + phi(end)`.
pub fn path_sum(arena: &Arena, start: usize, path: &[usize], phi: &Potential) -> Result<Weight, PotentialError> {
    check_len(arena, phi)?;
    let mut at = start;
    let mut sum = Weight::ZERO;
    if phi.get(at).is_infinite() {
        return Err(PotentialError::InfiniteOnPath { vertex: at });
    }
    for &e in path {
        let edge = arena.edge(e);
        if edge.src != at {
            return Err(PotentialError::PathMismatch { edge: e, expected: at });
        }
        at = edge.dst;
        if phi.get(at).is_infinite() {
            return Err(PotentialError::InfiniteOnPath { vertex: at });
        }
        sum = sum.checked_add(edge.weight)?;
    }
    Ok(sum.checked_sub(phi.get(start))?.checked_add(phi.get(at))?)
}
