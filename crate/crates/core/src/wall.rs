//! Circuit relations across walls, convexity defects and contraction types.

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::num::{gcd_all, lcm_denominators, to_rat_vec, Int, Rat};
use num_traits::{Signed, Zero};

/// The primitive integer relation `Σ a_i v_i = 0` among the `n + 1` rays of
/// two adjacent cones, with both apex coefficients positive.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WallRelation {
    pub ray_indices: Vec<usize>,
    pub coeffs: Vec<Int>,
    pub s_plus: Vec<usize>,
    pub s_zero: Vec<usize>,
    pub s_minus: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallType {
    Fiber,
    /// Contracts the divisor of this ray.
    Divisorial(usize),
    Flipping,
}

impl WallRelation {
    pub fn coeff_of(&self, ray: usize) -> Int {
        self.ray_indices
            .iter()
            .position(|&i| i == ray)
            .map(|k| self.coeffs[k].clone())
            .unwrap_or_default()
    }

    /// `Σ a_i h(v_i)`; positive iff `h` is strictly convex across the wall.
    pub fn defect(&self, h: &[Rat]) -> Rat {
        self.ray_indices
            .iter()
            .zip(&self.coeffs)
            .map(|(&i, a)| &h[i] * Rat::from_integer(a.clone()))
            .sum()
    }

    pub fn classify(&self) -> WallType {
        match self.s_minus.as_slice() {
            [] => WallType::Fiber,
            [j] => WallType::Divisorial(*j),
            _ => WallType::Flipping,
        }
    }
}

pub fn wall_relation(fan: &Fan, wall: &Wall) -> Result<WallRelation> {
    let cone_a = &fan.cones()[wall.cone_a];
    let lambda = fan.barycentric(wall.cone_a, &to_rat_vec(&fan.rays()[wall.apex_b]));
    let apex_pos = cone_a
        .iter()
        .position(|&i| i == wall.apex_a)
        .ok_or_else(|| Error::invalid("apex does not belong to its cone"))?;
    if !lambda[apex_pos].is_negative() {
        return Err(Error::InvalidFan(format!(
            "apexes of wall {:?} are not on opposite sides",
            wall.shared
        )));
    }
    // apex_b - Σ λ_i v_i = 0
    let mut pairs: Vec<(usize, Rat)> = cone_a
        .iter()
        .zip(&lambda)
        .map(|(&i, l)| (i, -l.clone()))
        .collect();
    pairs.push((wall.apex_b, Rat::from_integer(1.into())));
    pairs.sort_by_key(|p| p.0);
    let rats: Vec<Rat> = pairs.iter().map(|p| p.1.clone()).collect();
    let l = lcm_denominators(&rats);
    let ints: Vec<Int> = rats
        .iter()
        .map(|r| (r * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let g = gcd_all(&ints);
    let coeffs: Vec<Int> = ints.into_iter().map(|x| x / &g).collect();
    let ray_indices: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut rel = WallRelation {
        ray_indices,
        coeffs,
        s_plus: Vec::new(),
        s_zero: Vec::new(),
        s_minus: Vec::new(),
    };
    for (&i, a) in rel.ray_indices.iter().zip(&rel.coeffs) {
        if a.is_positive() {
            rel.s_plus.push(i);
        } else if a.is_zero() {
            rel.s_zero.push(i);
        } else {
            rel.s_minus.push(i);
        }
    }
    Ok(rel)
}

/// Relations for every wall, in wall order.
pub fn all_relations(fan: &Fan) -> Result<Vec<(Wall, WallRelation)>> {
    fan.walls()?
        .into_iter()
        .map(|w| {
            let r = wall_relation(fan, &w)?;
            Ok((w, r))
        })
        .collect()
}

/// True iff every wall defect of `h` is nonnegative.
pub fn is_nef(fan: &Fan, h: &[Rat]) -> Result<bool> {
    Ok(all_relations(fan)?
        .iter()
        .all(|(_, r)| !r.defect(h).is_negative()))
}
