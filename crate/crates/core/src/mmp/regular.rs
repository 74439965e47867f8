//! Regular triangulations: the fan of the lower hull of lifted rays.

use crate::error::{Error, Result};
use crate::fan::{hyperplane_normal, Fan};
use crate::linalg::{det_int, inverse, to_rat_matrix};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::num::{dot_int, dot_rat_int, fmt_vec, rat_int, LatticeVector, Rat};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, VecDeque};

/// Linear form agreeing with `h` on the rays of `cone`.
fn cone_form(rays: &[LatticeVector], h: &[Rat], cone: &[usize]) -> Option<Vec<Rat>> {
    let n = rays[0].len();
    // rows are the rays: R m = h_cone
    let m: Vec<Vec<_>> = cone.iter().map(|&i| rays[i].clone()).collect();
    let inv = inverse(&to_rat_matrix(&m))?;
    Some(
        (0..n)
            .map(|r| {
                cone.iter()
                    .enumerate()
                    .map(|(k, &i)| &inv[r][k] * &h[i])
                    .sum()
            })
            .collect(),
    )
}

fn starting_cone(rays: &[LatticeVector], h: &[Rat], seed: u64) -> Result<Vec<usize>> {
    let n = rays[0].len();
    let k = rays.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let c: Vec<Rat> = (0..k)
            .map(|_| Rat::from_integer(rng.gen_range(1..=997).into()))
            .collect();
        let p: Vec<Rat> = (0..n)
            .map(|r| rays.iter().zip(&c).map(|(v, ci)| rat_int(&v[r]) * ci).sum())
            .collect();
        let mut lp = LinearProgram::new(k);
        lp.objective = h.iter().map(|x| -x.clone()).collect();
        for r in 0..n {
            lp.add(
                rays.iter().map(|v| rat_int(&v[r])).collect(),
                Cmp::Eq,
                p[r].clone(),
            );
        }
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                let support: Vec<usize> = (0..k).filter(|&i| x[i].is_positive()).collect();
                if support.len() == n {
                    return Ok(support);
                }
            }
            LpOutcome::Unbounded => {
                return Err(Error::NonGeneric(
                    "heights have no lower hull over these rays".into(),
                ))
            }
            LpOutcome::Infeasible => {
                return Err(Error::invariant("interior point not in the cone"))
            }
        }
    }
    Err(Error::NonGeneric("no generic starting point found".into()))
}

/// The fan whose cones are the lower faces of `{(v_i, h_i)}`. Every wall of
/// the result has strictly positive defect for `h`. `seed` only picks the
/// starting cone.
pub fn regular_triangulation_seeded(rays: &[LatticeVector], h: &[Rat], seed: u64) -> Result<Fan> {
    if rays.is_empty() || h.len() != rays.len() {
        return Err(Error::invalid("need one height per ray"));
    }
    let n = rays[0].len();
    if crate::linalg::rank_int(rays) < n {
        return Err(Error::DependentRays);
    }
    let start = starting_cone(rays, h, seed)?;
    let m0 = cone_form(rays, h, &start).ok_or(Error::DependentRays)?;
    for (j, v) in rays.iter().enumerate() {
        if start.contains(&j) {
            continue;
        }
        let val = dot_rat_int(&m0, v);
        if val == h[j] {
            return Err(Error::NonGeneric(format!(
                "ray {} lies on a lower face",
                fmt_vec(v)
            )));
        }
        if val > h[j] {
            return Err(Error::invariant("starting cone is not a lower face"));
        }
    }
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    cones.insert(start.clone());
    let mut queue = VecDeque::from([(start, m0)]);
    while let Some((cone, m)) = queue.pop_front() {
        for &apex in &cone {
            let facet: Vec<usize> = cone.iter().copied().filter(|&i| i != apex).collect();
            let face: Vec<&LatticeVector> = facet.iter().map(|&i| &rays[i]).collect();
            let mut u = hyperplane_normal(&face, n);
            if dot_int(&u, &rays[apex]).is_positive() {
                u = u.into_iter().map(|x| -x).collect();
            }
            // u is positive on the far side; rotate m about the facet
            let mut best: Option<(Rat, usize)> = None;
            let mut tie = false;
            for (j, v) in rays.iter().enumerate() {
                let side = dot_int(&u, v);
                if !side.is_positive() {
                    continue;
                }
                let slope = (&h[j] - dot_rat_int(&m, v)) / rat_int(&side);
                match &best {
                    Some((s, _)) if slope > *s => {}
                    Some((s, _)) if slope == *s => tie = true,
                    _ => {
                        best = Some((slope, j));
                        tie = false;
                    }
                }
            }
            let Some((slope, j)) = best else { continue };
            if tie || slope.is_zero() {
                return Err(Error::NonGeneric(format!(
                    "facet {:?} has several lower neighbours",
                    facet
                )));
            }
            if slope.is_negative() {
                return Err(Error::invariant("ray below the current lower face"));
            }
            let mut next = facet.clone();
            next.push(j);
            next.sort_unstable();
            if cones.contains(&next) {
                continue;
            }
            let un: Vec<Rat> = u.iter().map(rat_int).collect();
            let m2: Vec<Rat> = m.iter().zip(&un).map(|(a, b)| a + &slope * b).collect();
            cones.insert(next.clone());
            queue.push_back((next, m2));
        }
    }
    let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    if let Some(j) = (0..rays.len()).find(|j| !used.contains(j)) {
        return Err(Error::DroppedRay(fmt_vec(&rays[j])));
    }
    debug_assert!(cones
        .iter()
        .all(|c| !det_int(&c.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>()).is_zero()));
    Ok(Fan::from_parts(
        n,
        rays.to_vec(),
        cones.into_iter().collect(),
    ))
}

pub fn regular_triangulation(rays: &[LatticeVector], h: &[Rat]) -> Result<Fan> {
    regular_triangulation_seeded(rays, h, 0)
}

/// Exhaustive reference: every `n`-subset whose linear form lies strictly
/// below all other lifted rays. Exponential; for tests and small inputs.
pub fn lower_hull_by_enumeration(rays: &[LatticeVector], h: &[Rat]) -> Vec<Vec<usize>> {
    let n = rays[0].len();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        rays: &[LatticeVector],
        h: &[Rat],
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if subset.len() == n {
            if let Some(m) = cone_form(rays, h, subset) {
                let below = rays
                    .iter()
                    .enumerate()
                    .all(|(j, v)| subset.contains(&j) || dot_rat_int(&m, v) < h[j]);
                if below {
                    out.push(subset.clone());
                }
            }
            return;
        }
        for i in start..rays.len() {
            subset.push(i);
            rec(i + 1, n, rays, h, subset, out);
            subset.pop();
        }
    }
    rec(0, n, rays, h, &mut subset, &mut out);
    out
}

/// Heights with every wall defect at least `t > 0`, maximizing `t ≤ 1` with
/// heights in `[-1, 1]`.
pub fn ample_heights(fan: &Fan) -> Result<Vec<Rat>> {
    let rels = crate::wall::all_relations(fan)?;
    let k = fan.rays().len();
    if rels.is_empty() {
        return Ok(vec![Rat::zero(); k]);
    }
    let mut lp = LinearProgram::new(k + 1);
    lp.free = vec![true; k + 1];
    lp.objective[k] = Rat::one();
    for i in 0..k {
        let mut row = vec![Rat::zero(); k + 1];
        row[i] = Rat::one();
        lp.add(row.clone(), Cmp::Le, Rat::one());
        lp.add(row, Cmp::Ge, -Rat::one());
    }
    let mut cap = vec![Rat::zero(); k + 1];
    cap[k] = Rat::one();
    lp.add(cap, Cmp::Le, Rat::one());
    let mut seen = BTreeSet::new();
    for (_, r) in &rels {
        let mut row = vec![Rat::zero(); k + 1];
        for (&i, a) in r.ray_indices.iter().zip(&r.coeffs) {
            row[i] = Rat::from_integer(a.clone());
        }
        row[k] = -Rat::one();
        if seen.insert(row.clone()) {
            lp.add(row, Cmp::Ge, Rat::zero());
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => Ok(x[..k].to_vec()),
        _ => Err(Error::NotProjective),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{ivec, rat};
    use crate::wall::all_relations;

    fn rv(v: &[&[i64]]) -> Vec<LatticeVector> {
        v.iter().map(|r| ivec(r)).collect()
    }

    #[test]
    fn resolution_of_the_a1_point() {
        let rays = rv(&[&[1, 0], &[0, 1], &[1, 1]]);
        let f = regular_triangulation(&rays, &[rat(1, 1), rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(f.cones(), &[vec![0, 2], vec![1, 2]]);
        let err = regular_triangulation(&rays, &[rat(1, 1), rat(1, 1), rat(3, 1)]).unwrap_err();
        assert_eq!(err, Error::DroppedRay("(1,1)".into()));
    }

    #[test]
    fn linear_heights_are_not_generic() {
        let rays = rv(&[&[1, 0], &[0, 1], &[1, 1]]);
        let h = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        assert!(matches!(
            regular_triangulation(&rays, &h),
            Err(Error::NonGeneric(_))
        ));
    }

    #[test]
    fn complete_fan_from_heights() {
        let rays = rv(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]);
        let h = vec![rat(1, 1); 4];
        let f = regular_triangulation(&rays, &h).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.cones().len(), 4);
        for (_, r) in all_relations(&f).unwrap() {
            assert!(r.defect(&h).is_positive());
        }
    }

    #[test]
    fn seeds_agree_with_enumeration() {
        let rays = rv(&[
            &[0, 0, 1],
            &[1, 0, 1],
            &[1, 1, 1],
            &[0, 1, 1],
            &[2, 1, 1],
            &[1, 2, 1],
        ]);
        // |p|^2 plus small distinct offsets
        let h = vec![
            rat(1, 2),
            rat(4, 3),
            rat(11, 5),
            rat(8, 7),
            rat(56, 11),
            rat(66, 13),
        ];
        let a = regular_triangulation_seeded(&rays, &h, 1).unwrap();
        let b = regular_triangulation_seeded(&rays, &h, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cones(), lower_hull_by_enumeration(&rays, &h).as_slice());
    }

    #[test]
    fn ample_heights_exist_for_regular_fans() {
        let rays = rv(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let f = Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let h = ample_heights(&f).unwrap();
        for (_, r) in all_relations(&f).unwrap() {
            assert!(r.defect(&h).is_positive());
        }
    }
}
