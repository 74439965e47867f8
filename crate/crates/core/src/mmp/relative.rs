//! The toric MMP relative to an affine base.

use super::flip::{contract_circuit, flip_circuit};
use super::{default_budget, WallRef};
use crate::error::{Error, Result};
use crate::fan::{Fan, SupportKind};
use crate::lattice::primitive;
use crate::num::{to_rat_vec, LatticeVector, Rat};
use crate::pair::{psi_heights, ToricPair};
use crate::wall::{all_relations, WallType};
use num_traits::Signed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MmpStepKind {
    Flip,
    DivisorialContraction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpStep {
    pub kind: MmpStepKind,
    pub wall: WallRef,
    /// ψ-defect of the wall when it was executed; positive.
    pub defect: Rat,
    pub removed_ray: Option<LatticeVector>,
    /// Rays spanning the cone whose orbit closure is the image of the
    /// exceptional locus.
    pub center: Vec<LatticeVector>,
}

/// Checks that the fan covers exactly the simplicial cone spanned by `base`.
fn check_base(fan: &Fan, base: &[LatticeVector]) -> Result<()> {
    let n = fan.dim();
    if base.len() != n {
        return Err(Error::invalid("base cone must be spanned by n vectors"));
    }
    let prim: Vec<LatticeVector> = base.iter().map(|v| primitive(v)).collect::<Result<_>>()?;
    let cone = Fan::new(n, prim.clone(), vec![(0..n).collect()])
        .map_err(|_| Error::invalid("base cone is not simplicial"))?;
    if fan.support_kind() != SupportKind::ConeSupported {
        return Err(Error::invalid("fan is not supported on a convex cone"));
    }
    let inside = fan.rays().iter().all(|r| cone.contains(&to_rat_vec(r)));
    let covers = prim.iter().all(|b| fan.contains(&to_rat_vec(b)));
    if !(inside && covers) {
        return Err(Error::invalid("fan support differs from the base cone"));
    }
    Ok(())
}

/// Run the MMP for `K + B` over `base` (`None`: over the fan's own support).
/// Walls with positive ψ-defect are K-negative; the largest defect goes
/// first, ties by the smaller pair of apex rays.
pub fn relative_mmp(
    pair: &ToricPair,
    base: Option<&[LatticeVector]>,
    max_steps: Option<usize>,
) -> Result<(ToricPair, Vec<MmpStep>)> {
    if let Some(b) = base {
        check_base(&pair.fan, b)?;
    }
    let budget = max_steps.unwrap_or_else(|| default_budget(pair.fan.rays().len()));
    let mut cur = pair.clone();
    let mut steps = Vec::new();
    loop {
        let psi = psi_heights(&cur);
        let rels = all_relations(&cur.fan)?;
        let mut negative: Vec<(Rat, WallRef, crate::wall::WallRelation)> =
            crate::par::map(&rels, |(w, r)| {
                let d = r.defect(&psi);
                d.is_positive()
                    .then(|| (d, WallRef::new(&cur.fan, w, r), r.clone()))
            })
            .into_iter()
            .flatten()
            .collect();
        if negative.is_empty() {
            break;
        }
        if steps.len() >= budget {
            return Err(Error::StepBudget(budget));
        }
        negative.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.apexes.cmp(&b.1.apexes)));
        let mut done = false;
        for (d, wref, rel) in negative {
            match rel.classify() {
                WallType::Fiber => {
                    return Err(Error::FiberTypeWall(format!("{:?}", wref.shared)));
                }
                WallType::Flipping => match flip_circuit(&cur.fan, &rel) {
                    Ok(f) => {
                        let center = wref.circuit.iter().map(|(v, _)| v.clone()).collect();
                        cur = cur.with_fan(f);
                        steps.push(MmpStep {
                            kind: MmpStepKind::Flip,
                            wall: wref,
                            defect: d,
                            removed_ray: None,
                            center,
                        });
                    }
                    Err(Error::NotIsolated(_)) => continue,
                    Err(e) => return Err(e),
                },
                WallType::Divisorial(j) => match contract_circuit(&cur.fan, &rel) {
                    Ok(c) => {
                        let rays = cur.fan.rays();
                        let removed = rays[j].clone();
                        let center = c.center.iter().map(|&i| rays[i].clone()).collect();
                        cur = cur.with_fan(c.fan);
                        steps.push(MmpStep {
                            kind: MmpStepKind::DivisorialContraction,
                            wall: wref,
                            defect: d,
                            removed_ray: Some(removed),
                            center,
                        });
                    }
                    Err(Error::StarMismatch(_)) => continue,
                    Err(e) => return Err(e),
                },
            }
            done = true;
            break;
        }
        if !done {
            return Err(Error::invariant("no K-negative wall can be contracted"));
        }
    }
    Ok((cur, steps))
}

/// Re-apply recorded MMP steps.
pub fn replay_mmp(pair: &ToricPair, steps: &[MmpStep]) -> Result<ToricPair> {
    let mut cur = pair.clone();
    for s in steps {
        let w = s.wall.locate(&cur.fan)?;
        let f = match s.kind {
            MmpStepKind::Flip => super::flip::bistellar_flip(&cur.fan, &w)?,
            MmpStepKind::DivisorialContraction => {
                super::flip::divisorial_contract(&cur.fan, &w)?.fan
            }
        };
        cur = cur.with_fan(f);
    }
    Ok(cur)
}
