//! Circuit surgery: bistellar flips and divisorial contractions.

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::wall::{wall_relation, WallRelation, WallType};
use std::collections::BTreeSet;

/// Links of the face `Z \ {z}`: the complements `σ \ (Z \ {z})` over all cones
/// `σ` containing it.
fn links(fan: &Fan, face: &BTreeSet<usize>) -> BTreeSet<Vec<usize>> {
    fan.cones()
        .iter()
        .filter(|c| face.iter().all(|i| c.contains(i)))
        .map(|c| c.iter().copied().filter(|i| !face.contains(i)).collect())
        .collect()
}

fn support_of(rel: &WallRelation) -> BTreeSet<usize> {
    rel.s_plus.iter().chain(&rel.s_minus).copied().collect()
}

/// The common link of `Z \ {z}` for every `z` in `side`, if they agree.
fn common_link(fan: &Fan, z: &BTreeSet<usize>, side: &[usize]) -> Option<BTreeSet<Vec<usize>>> {
    let mut common: Option<BTreeSet<Vec<usize>>> = None;
    for &i in side {
        let mut face = z.clone();
        face.remove(&i);
        let l = links(fan, &face);
        if l.is_empty() {
            return None;
        }
        match &common {
            None => common = Some(l),
            Some(c) if *c == l => {}
            Some(_) => return None,
        }
    }
    common
}

fn joins(z: &BTreeSet<usize>, side: &[usize], link: &BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for &i in side {
        for l in link {
            let mut c: Vec<usize> = z
                .iter()
                .copied()
                .filter(|&k| k != i)
                .chain(l.iter().copied())
                .collect();
            c.sort_unstable();
            out.push(c);
        }
    }
    out
}

/// Replace the positive side of the circuit by the negative side.
pub fn flip_circuit(fan: &Fan, rel: &WallRelation) -> Result<Fan> {
    if rel.classify() != WallType::Flipping {
        return Err(Error::NotFlipping(format!("{:?}", rel.coeffs)));
    }
    let z = support_of(rel);
    let link = common_link(fan, &z, &rel.s_plus)
        .ok_or_else(|| Error::NotIsolated(format!("rays {:?}", rel.ray_indices)))?;
    let remove: BTreeSet<Vec<usize>> = joins(&z, &rel.s_plus, &link).into_iter().collect();
    let add = joins(&z, &rel.s_minus, &link);
    Ok(fan.replace_cones(&remove, add))
}

pub fn bistellar_flip(fan: &Fan, wall: &Wall) -> Result<Fan> {
    flip_circuit(fan, &wall_relation(fan, wall)?)
}

/// Result of a divisorial contraction; `center` lists the old ray indices
/// spanning the image cone of the contracted divisor.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub fan: Fan,
    pub removed: usize,
    pub center: Vec<usize>,
}

pub fn contract_circuit(fan: &Fan, rel: &WallRelation) -> Result<Contraction> {
    let WallType::Divisorial(j) = rel.classify() else {
        return Err(Error::NotDivisorial(format!("{:?}", rel.coeffs)));
    };
    let z = support_of(rel);
    let mismatch = || Error::StarMismatch(format!("{j}"));
    let link = common_link(fan, &z, &rel.s_plus).ok_or_else(mismatch)?;
    let star: BTreeSet<Vec<usize>> = fan
        .cones()
        .iter()
        .filter(|c| c.contains(&j))
        .cloned()
        .collect();
    let expected: BTreeSet<Vec<usize>> = joins(&z, &rel.s_plus, &link).into_iter().collect();
    if star != expected {
        return Err(mismatch());
    }
    let cones: Vec<Vec<usize>> = fan
        .cones()
        .iter()
        .filter(|c| !star.contains(*c))
        .cloned()
        .chain(joins(&z, &[j], &link))
        .collect();
    Ok(Contraction {
        fan: fan.without_ray(cones, j),
        removed: j,
        center: rel.s_plus.clone(),
    })
}

pub fn divisorial_contract(fan: &Fan, wall: &Wall) -> Result<Contraction> {
    contract_circuit(fan, &wall_relation(fan, wall)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fans_equal;
    use crate::num::ivec;
    use crate::wall::all_relations;

    fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(
            dim,
            rays.iter().map(|r| ivec(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    const ATIYAH: &[&[i64]] = &[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1], &[0, 1, 1]];

    #[test]
    fn atiyah_flip_and_back() {
        let x = fan(3, ATIYAH, &[&[0, 1, 2], &[0, 2, 3]]);
        let w = &x.walls().unwrap()[0];
        let y = bistellar_flip(&x, w).unwrap();
        assert_eq!(y.cones(), &[vec![0, 1, 3], vec![1, 2, 3]]);
        let back = bistellar_flip(&y, &y.walls().unwrap()[0]).unwrap();
        assert!(fans_equal(&back, &x));
    }

    #[test]
    fn flips_need_flipping_walls() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 2], &[1, 2]]);
        let w = &f.walls().unwrap()[0];
        assert!(matches!(bistellar_flip(&f, w), Err(Error::NotFlipping(_))));
    }

    #[test]
    fn contraction_inverts_subdivision() {
        let o = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        let b = o.star_subdivision(&ivec(&[1, 1])).unwrap();
        let c = divisorial_contract(&b, &b.walls().unwrap()[0]).unwrap();
        assert!(fans_equal(&c.fan, &o));
        assert_eq!(c.removed, 2);
        assert_eq!(c.center, vec![0, 1]);
    }

    #[test]
    fn contraction_of_three_dimensional_blow_up() {
        let o = fan(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 1, 2]]);
        let b = o.star_subdivision(&ivec(&[1, 1, 1])).unwrap();
        let rels = all_relations(&b).unwrap();
        assert_eq!(rels.len(), 3);
        for (_, r) in rels {
            let c = contract_circuit(&b, &r).unwrap();
            assert!(fans_equal(&c.fan, &o));
        }
        // after subdividing a face of the star, the circuit of w is broken
        let b2 = b.star_subdivision(&ivec(&[1, 1, 0])).unwrap();
        let (_, rel) = all_relations(&b2)
            .unwrap()
            .into_iter()
            .find(|(w, _)| w.shared == vec![2, 3])
            .unwrap();
        assert_eq!(rel.classify(), WallType::Divisorial(3));
        assert!(matches!(
            contract_circuit(&b2, &rel),
            Err(Error::StarMismatch(_))
        ));
    }
}
