//! Flips, contractions, regular triangulations, flop decomposition, the
//! relative MMP and terminalization.

pub mod flip;
pub mod regular;
pub mod relative;
pub mod sweep;
pub mod terminal;

pub use flip::{bistellar_flip, contract_circuit, divisorial_contract, flip_circuit, Contraction};
pub use regular::{
    ample_heights, lower_hull_by_enumeration, regular_triangulation, regular_triangulation_seeded,
};
pub use relative::{relative_mmp, replay_mmp, MmpStep, MmpStepKind};
pub use sweep::{flop_decompose, replay_flops, FlopStep};
pub use terminal::{replay_extractions, terminalize, ExtractionStep};

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::num::{fmt_vec, Int, LatticeVector};
use crate::wall::WallRelation;

/// A wall named by ray vectors, independent of indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRef {
    pub shared: Vec<LatticeVector>,
    pub apexes: [LatticeVector; 2],
    /// Nonzero circuit coefficients by ray.
    pub circuit: Vec<(LatticeVector, Int)>,
}

impl WallRef {
    pub fn new(fan: &Fan, wall: &Wall, rel: &WallRelation) -> Self {
        let rays = fan.rays();
        let mut shared: Vec<LatticeVector> = wall.shared.iter().map(|&i| rays[i].clone()).collect();
        shared.sort();
        let mut apexes = [rays[wall.apex_a].clone(), rays[wall.apex_b].clone()];
        apexes.sort();
        let circuit = rel
            .ray_indices
            .iter()
            .zip(&rel.coeffs)
            .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
            .map(|(&i, a)| (rays[i].clone(), a.clone()))
            .collect();
        WallRef {
            shared,
            apexes,
            circuit,
        }
    }

    /// Find this wall in `fan`.
    pub fn locate(&self, fan: &Fan) -> Result<Wall> {
        let idx = |v: &LatticeVector| {
            fan.ray_index(v)
                .ok_or_else(|| Error::invalid(format!("step ray {} is not in the fan", fmt_vec(v))))
        };
        let mut shared: Vec<usize> = self.shared.iter().map(idx).collect::<Result<_>>()?;
        shared.sort_unstable();
        let (a, b) = (idx(&self.apexes[0])?, idx(&self.apexes[1])?);
        fan.walls()?
            .into_iter()
            .find(|w| {
                w.shared == shared
                    && ((w.apex_a == a && w.apex_b == b) || (w.apex_a == b && w.apex_b == a))
            })
            .ok_or_else(|| Error::invalid(format!("wall {:?} is not in the fan", self.shared)))
    }
}

pub(crate) fn default_budget(rays: usize) -> usize {
    10 * rays * rays
}
