//! Terminalization by repeated crepant-or-better extractions.

use crate::error::{Error, Result};
use crate::num::{LatticeVector, Rat};
use crate::pair::{low_points, ToricPair};
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionStep {
    pub ray: LatticeVector,
    /// ψ at the new ray before extraction; at most 1. Its coefficient is 0.
    pub psi_before: Rat,
}

/// Extract, one at a time, the lattice point of least ψ ≤ 1 (ties: the
/// lexicographically smallest vector) until the pair is terminal.
///
/// The default budget is `10 N^2` with `N` the number of rays plus the
/// number of initial candidates; candidates never appear, so that bounds
/// the final ray count.
pub fn terminalize(
    pair: &ToricPair,
    max_steps: Option<usize>,
) -> Result<(ToricPair, Vec<ExtractionStep>)> {
    let mut cur = pair.clone();
    let mut steps = Vec::new();
    let mut low = low_points(&cur, &Rat::one(), false)?;
    let budget = max_steps.unwrap_or_else(|| {
        let n = pair.fan.rays().len() + low.len();
        10 * n * n
    });
    while let Some((w, psi)) = low.first().cloned() {
        if steps.len() >= budget {
            return Err(Error::StepBudget(budget));
        }
        cur = cur.with_fan(cur.fan.star_subdivision(&w)?);
        steps.push(ExtractionStep {
            ray: w,
            psi_before: psi,
        });
        low = low_points(&cur, &Rat::one(), false)?;
    }
    Ok((cur, steps))
}

pub fn replay_extractions(pair: &ToricPair, steps: &[ExtractionStep]) -> Result<ToricPair> {
    let mut cur = pair.clone();
    for s in steps {
        cur = cur.with_fan(cur.fan.star_subdivision(&s.ray)?);
    }
    Ok(cur)
}
