//! Flop decomposition by a kinetic sweep of height functions.
//!
//! `h_t = (1 - t) h_0 + t h_1` moves from an ample function on `Δ_X` to one on
//! `Δ_Y`. The current fan stays regular for `h_t`; when a wall defect reaches
//! zero its circuit is flipped. `h_1` carries an infinitesimal perturbation
//! `δ^(i+1)` at ray `i`, so event times are compared as polynomials in `δ`.

use super::flip::flip_circuit;
use super::regular::ample_heights;
use super::{default_budget, WallRef};
use crate::error::{Error, Result};
use crate::fan::{fans_equal, Fan};
use crate::num::Rat;
use crate::pair::{k_equivalent, psi_heights, ToricPair};
use crate::wall::{all_relations, WallRelation, WallType};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlopStep {
    pub wall: WallRef,
    /// Unperturbed crossing time.
    pub event_time: Rat,
    /// Defect of ψ on the flopped wall; always zero.
    pub k_defect_check: Rat,
}

/// Coefficients in increasing powers of δ.
#[derive(Debug, Clone)]
struct Lex(Vec<Rat>);

impl Lex {
    fn sign(&self) -> Ordering {
        self.0
            .iter()
            .find(|c| !c.is_zero())
            .map_or(Ordering::Equal, |c| {
                if c.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            })
    }

    fn scaled(&self, s: &Rat) -> Lex {
        Lex(self.0.iter().map(|c| c * s).collect())
    }

    fn minus(&self, other: &Lex) -> Lex {
        Lex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn minus_scalar(&self, s: &Rat) -> Lex {
        let mut v = self.0.clone();
        v[0] -= s;
        Lex(v)
    }
}

struct Event {
    rel: WallRelation,
    wall: WallRef,
    d0: Rat,
    slope: Lex,
}

/// Defect data of one wall: `d(t) = d0 - t · slope`.
fn wall_motion(rel: &WallRelation, h0: &[Rat], h1: &[Rat], k: usize) -> (Rat, Lex) {
    let d0 = rel.defect(h0);
    let d1 = rel.defect(h1);
    let mut p = vec![Rat::zero(); k + 1];
    p[0] = &d0 - &d1;
    for (&i, a) in rel.ray_indices.iter().zip(&rel.coeffs) {
        p[i + 1] = -Rat::from_integer(a.clone());
    }
    (d0, Lex(p))
}

fn check_ample(fan: &Fan, h: &[Rat], name: &str) -> Result<()> {
    if h.len() != fan.rays().len() {
        return Err(Error::invalid(format!(
            "{name}: one height per ray required"
        )));
    }
    if all_relations(fan)?
        .iter()
        .any(|(_, r)| !r.defect(h).is_positive())
    {
        return Err(Error::invalid(format!(
            "{name} is not strictly convex on its fan"
        )));
    }
    Ok(())
}

/// Decompose the birational map `X ⇢ Y` of K-equivalent pairs into flops.
pub fn flop_decompose(
    x: &ToricPair,
    y: &ToricPair,
    ample_x: Option<&[Rat]>,
    ample_y: Option<&[Rat]>,
    max_steps: Option<usize>,
) -> Result<Vec<FlopStep>> {
    if !k_equivalent(x, y)? {
        return Err(Error::NotKEquivalent(
            "ray sets, coefficients or ψ differ between the two fans".into(),
        ));
    }
    let yfan = y.fan.reindexed(x.fan.rays())?;
    let h0 = match ample_x {
        Some(h) => h.to_vec(),
        None => ample_heights(&x.fan)?,
    };
    check_ample(&x.fan, &h0, "ample height on X")?;
    let h1 = match ample_y {
        Some(h) => {
            // given in Y's ray order
            let lookup = y.fan.ray_lookup();
            x.fan.rays().iter().map(|r| h[lookup[r]].clone()).collect()
        }
        None => ample_heights(&yfan)?,
    };
    check_ample(&yfan, &h1, "ample height on Y")?;

    let psi = psi_heights(x);
    let k = x.fan.rays().len();
    let budget = max_steps.unwrap_or_else(|| default_budget(k));
    let mut fan = x.fan.clone();
    let mut steps = Vec::new();
    loop {
        let rels = all_relations(&fan)?;
        let candidates: Vec<Option<Event>> = crate::par::map(&rels, |(w, rel)| {
            let (d0, slope) = wall_motion(rel, &h0, &h1, k);
            // decreasing, and crossing zero before t = 1
            if slope.sign() != Ordering::Greater
                || slope.minus_scalar(&d0).sign() != Ordering::Greater
            {
                return None;
            }
            Some(Event {
                rel: rel.clone(),
                wall: WallRef::new(&fan, w, rel),
                d0,
                slope,
            })
        });
        let mut first: Option<Event> = None;
        for ev in candidates.into_iter().flatten() {
            let earlier = match &first {
                None => true,
                Some(f) => {
                    ev.slope.scaled(&f.d0).minus(&f.slope.scaled(&ev.d0)).sign()
                        == Ordering::Greater
                }
            };
            if earlier {
                first = Some(ev);
            }
        }
        let Some(ev) = first else { break };
        if steps.len() >= budget {
            return Err(Error::StepBudget(budget));
        }
        if ev.d0.is_negative() {
            return Err(Error::invariant(
                "current fan is not regular for the swept height",
            ));
        }
        let k_defect = ev.rel.defect(&psi);
        if !k_defect.is_zero() {
            return Err(Error::invariant(format!(
                "flop event on a wall with ψ-defect {k_defect}"
            )));
        }
        if ev.rel.classify() != WallType::Flipping {
            return Err(Error::NotFlipping(format!(
                "event wall {:?} is not small; the map is not an isomorphism in codimension one",
                ev.wall.shared
            )));
        }
        fan = flip_circuit(&fan, &ev.rel).map_err(|e| match e {
            Error::NotIsolated(m) => Error::invariant(format!("event circuit not isolated: {m}")),
            other => other,
        })?;
        let event_time = &ev.d0 / &ev.slope.0[0];
        steps.push(FlopStep {
            wall: ev.wall,
            event_time,
            k_defect_check: k_defect,
        });
    }
    if !fans_equal(&fan, &y.fan) {
        return Err(Error::invariant("sweep ended away from the target fan"));
    }
    Ok(steps)
}

/// Apply recorded flops to `fan`.
pub fn replay_flops(fan: &Fan, steps: &[FlopStep]) -> Result<Fan> {
    let mut fan = fan.clone();
    for s in steps {
        let w = s.wall.locate(&fan)?;
        fan = super::flip::bistellar_flip(&fan, &w)?;
    }
    Ok(fan)
}
