//! Seeded generator of K-equivalent pairs for the flop tests.
//!
//! Rays sit at height 1 in `Z^3` or `Z^4`, so every circuit relation sums
//! to zero and `K` is trivial on every wall. `X` is the regular
//! triangulation for `|p|^2` plus small noise; `Y` is reached by 1 to 6
//! random flips, each kept only if the new fan is still regular.

use crate::error::{Error, Result};
use crate::fan::{fans_equal, Fan};
use crate::mmp::{ample_heights, flip_circuit, regular_triangulation_seeded};
use crate::num::{int, LatticeVector, Rat};
use crate::pair::ToricPair;
use crate::wall::{all_relations, WallType};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct FlopCase {
    pub seed: u64,
    pub x: ToricPair,
    pub y: ToricPair,
    pub flips: usize,
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<LatticeVector> {
    let k = rng.gen_range(n + 2..=n + 5);
    let mut seen = BTreeSet::new();
    while seen.len() < k {
        let mut p: LatticeVector = (0..n - 1).map(|_| int(rng.gen_range(-2..=2))).collect();
        p.push(int(1));
        seen.insert(p);
    }
    let mut pts: Vec<LatticeVector> = seen.into_iter().collect();
    pts.shuffle(rng);
    pts
}

fn lifted(rng: &mut ChaCha8Rng, pts: &[LatticeVector]) -> Vec<Rat> {
    pts.iter()
        .map(|p| {
            let sq: i64 = p
                .iter()
                .map(|x| {
                    let x: i64 = x.try_into().unwrap_or(0);
                    x * x
                })
                .sum();
            Rat::from_integer(int(sq)) + Rat::new(int(rng.gen_range(0..1000)), int(10_000))
        })
        .collect()
}

fn initial_fan(rng: &mut ChaCha8Rng, n: usize) -> Option<Fan> {
    for _ in 0..32 {
        let pts = random_points(rng, n);
        let h = lifted(rng, &pts);
        if let Ok(f) = regular_triangulation_seeded(&pts, &h, rng.gen()) {
            return Some(f);
        }
    }
    None
}

/// Flip a random flipping wall whose result is still regular.
fn random_regular_flip(rng: &mut ChaCha8Rng, fan: &Fan) -> Result<Option<Fan>> {
    let mut rels = all_relations(fan)?;
    rels.shuffle(rng);
    for (_, rel) in rels {
        if rel.classify() != WallType::Flipping {
            continue;
        }
        let Ok(next) = flip_circuit(fan, &rel) else {
            continue;
        };
        if ample_heights(&next).is_ok() {
            return Ok(Some(next));
        }
    }
    Ok(None)
}

/// Case `seed`: dimension 3 for even seeds, 4 for odd.
pub fn flop_case(seed: u64) -> Result<FlopCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = if seed.is_multiple_of(2) { 3 } else { 4 };
    for _ in 0..64 {
        let Some(x) = initial_fan(&mut rng, n) else {
            continue;
        };
        let target = rng.gen_range(1..=6);
        let mut y = x.clone();
        let mut flips = 0;
        while flips < target {
            match random_regular_flip(&mut rng, &y)? {
                Some(next) => {
                    y = next;
                    flips += 1;
                }
                None => break,
            }
        }
        if flips == 0 || fans_equal(&x, &y) {
            continue;
        }
        return Ok(FlopCase {
            seed,
            x: ToricPair::with_zero_boundary(x),
            y: ToricPair::with_zero_boundary(y),
            flips,
        });
    }
    Err(Error::invariant(format!(
        "seed {seed}: no flippable configuration found"
    )))
}

pub fn flop_corpus(count: u64) -> Result<Vec<FlopCase>> {
    let seeds: Vec<u64> = (0..count).collect();
    crate::par::map(&seeds, |&s| flop_case(s))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::SupportKind;
    use crate::pair::k_equivalent;

    #[test]
    fn cases_are_deterministic() {
        let a = flop_case(7).unwrap();
        let b = flop_case(7).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.y, b.y);
        assert_eq!(a.flips, b.flips);
    }

    #[test]
    fn cases_are_k_equivalent_and_distinct() {
        for seed in 0..6 {
            let c = flop_case(seed).unwrap();
            assert_eq!(c.x.dim(), if seed % 2 == 0 { 3 } else { 4 });
            assert!((1..=6).contains(&c.flips));
            assert!(!fans_equal(&c.x.fan, &c.y.fan));
            assert_eq!(c.x.fan.support_kind(), SupportKind::ConeSupported);
            assert!(k_equivalent(&c.x, &c.y).unwrap());
        }
    }
}
