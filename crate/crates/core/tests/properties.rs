use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toric_mmp::fan::fans_equal;
use toric_mmp::json::{fan_from_json, fan_to_json, pair_from_json, pair_to_json};
use toric_mmp::lattice::{
    box_points_in_coords, cone_multiplicity_in_coords, hermite_normal_form, smith_normal_form,
};
use toric_mmp::linalg::{det_int, mat_mul_int};
use toric_mmp::mckay::{
    case_a_components, hj_resolution, mckay_pipeline, quotient_pair, Generator, GroupData,
};
use toric_mmp::mmp::{flip_circuit, lower_hull_by_enumeration, regular_triangulation, terminalize};
use toric_mmp::num::{gcd_all, int, ivec, Int, LatticeVector, Rat};
use toric_mmp::pair::{is_terminal, k_equivalent, low_points, psi_heights, stack_rank, ToricPair};
use toric_mmp::wall::{all_relations, WallType};
use toric_mmp::{Error, Fan};

fn matrix(n: usize, m: usize, range: i64) -> impl Strategy<Value = Vec<Vec<Int>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, m), n)
        .prop_map(|rows| rows.into_iter().map(|r| ivec(&r)).collect())
}

fn cone(n: usize) -> impl Strategy<Value = Vec<LatticeVector>> {
    matrix(n, n, 4).prop_filter("independent primitive rays", |rays| {
        !det_int(rays).is_zero() && rays.iter().all(|v| gcd_all(v).is_one())
    })
}

/// Distinct points at height 1 with heights near `|p|^2`.
fn configuration() -> impl Strategy<Value = (Vec<LatticeVector>, Vec<Rat>)> {
    (
        2usize..=3,
        prop::collection::btree_set((-3i64..=3, -3i64..=3), 4..=8),
        any::<u64>(),
    )
        .prop_map(|(n, pts, salt)| {
            let rays: Vec<LatticeVector> = pts
                .into_iter()
                .map(|(x, y)| {
                    if n == 2 {
                        ivec(&[x, 1])
                    } else {
                        ivec(&[x, y, 1])
                    }
                })
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let h = rays
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let sq: Int = v.iter().map(|x| x * x).sum();
                    let noise = (salt.wrapping_mul(2654435761).wrapping_add(i as u64 * 97)) % 1000;
                    Rat::from_integer(sq * 1000) + Rat::new(int(noise as i64), int(1000))
                })
                .collect();
            (rays, h)
        })
}

fn group() -> impl Strategy<Value = GroupData> {
    (
        2usize..=3,
        prop::collection::vec((1u64..=9, prop::collection::vec(0u64..9, 3)), 1..=2),
    )
        .prop_map(|(n, gens)| GroupData {
            n,
            gens: gens
                .into_iter()
                .map(|(r, w)| Generator {
                    r,
                    weights: w.into_iter().take(n).map(|a| a % r).collect(),
                })
                .collect(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_form_is_unimodular_reduction(m in matrix(3, 3, 9)) {
        prop_assume!(!det_int(&m).is_zero());
        let (h, u) = hermite_normal_form(&m).unwrap();
        prop_assert_eq!(mat_mul_int(&u, &m), h.clone());
        prop_assert!(det_int(&u).abs().is_one());
        for i in 0..3 {
            prop_assert!(h[i][i].is_positive());
            for j in i + 1..3 {
                prop_assert!(h[i][j].is_zero());
            }
        }
    }

    #[test]
    fn smith_form_divisibility(m in matrix(3, 4, 9)) {
        let (d, u, v) = smith_normal_form(&m);
        prop_assert_eq!(mat_mul_int(&mat_mul_int(&u, &m), &v), d.clone());
        for i in 0..3 {
            for j in 0..4 {
                prop_assert!(i == j || d[i][j].is_zero());
            }
        }
        for i in 0..2 {
            let (a, b) = (&d[i][i], &d[i + 1][i + 1]);
            prop_assert!(!a.is_negative());
            let divides = if a.is_zero() { b.is_zero() } else { b.is_multiple_of(a) };
            prop_assert!(divides);
        }
    }

    #[test]
    fn lattice_coordinates_round_trip(g in group(), y in prop::collection::vec(-20i64..=20, 3)) {
        let l = g.lattice().unwrap();
        let y = ivec(&y[..g.n]);
        prop_assert_eq!(l.coords_of(&l.to_ambient(&y)), Some(y));
        prop_assert!(l.index_over_standard().unwrap().is_positive());
    }

    #[test]
    fn box_points_count_multiplicity(rays in cone(3)) {
        let m = cone_multiplicity_in_coords(&rays).unwrap();
        prop_assume!(m <= int(200));
        let b = box_points_in_coords(&rays).unwrap();
        prop_assert_eq!(Int::from(b.len()), m - 1);
        for p in &b {
            prop_assert!(p.barycentric.iter().all(|t| !t.is_negative() && *t < Rat::one()));
        }
    }

    #[test]
    fn wall_relations_are_primitive_circuits((rays, h) in configuration()) {
        let Ok(f) = regular_triangulation(&rays, &h) else { return Ok(()) };
        for (w, r) in all_relations(&f).unwrap() {
            let n = f.dim();
            let mut sum = vec![Int::zero(); n];
            for (&i, a) in r.ray_indices.iter().zip(&r.coeffs) {
                for k in 0..n {
                    sum[k] += a * &f.rays()[i][k];
                }
            }
            prop_assert!(sum.iter().all(|x| x.is_zero()));
            prop_assert!(gcd_all(&r.coeffs).is_one());
            prop_assert!(r.coeff_of(w.apex_a).is_positive() && r.coeff_of(w.apex_b).is_positive());
            // height one: the relation sums to zero, so ψ = 1 has no defect
            prop_assert!(r.coeffs.iter().sum::<Int>().is_zero());
            prop_assert!(r.defect(&h).is_positive());
        }
    }

    #[test]
    fn regular_triangulation_matches_lower_hull((rays, h) in configuration()) {
        let mut reference = lower_hull_by_enumeration(&rays, &h);
        reference.sort();
        match regular_triangulation(&rays, &h) {
            Ok(f) => prop_assert_eq!(f.cones(), reference.as_slice()),
            Err(Error::DroppedRay(_)) => {
                let used: std::collections::BTreeSet<usize> = reference.iter().flatten().copied().collect();
                prop_assert!(used.len() < rays.len());
            }
            Err(Error::NonGeneric(_)) | Err(Error::RankDeficient) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn flips_are_involutions((rays, h) in configuration()) {
        let Ok(f) = regular_triangulation(&rays, &h) else { return Ok(()) };
        for (_, r) in all_relations(&f).unwrap() {
            if r.classify() != WallType::Flipping {
                continue;
            }
            let Ok(g) = flip_circuit(&f, &r) else { continue };
            let back = all_relations(&g)
                .unwrap()
                .into_iter()
                .find_map(|(_, s)| {
                    let neg: Vec<Int> = s.coeffs.iter().map(|a| -a).collect();
                    (s.ray_indices == r.ray_indices && neg == r.coeffs).then(|| flip_circuit(&g, &s).unwrap())
                });
            prop_assert!(back.is_some_and(|b| fans_equal(&b, &f)));
            let x = ToricPair::with_zero_boundary(f.clone());
            prop_assert!(k_equivalent(&x, &x.with_fan(g)).unwrap());
        }
    }

    #[test]
    fn json_round_trip((rays, h) in configuration(), big in any::<i64>()) {
        let Ok(f) = regular_triangulation(&rays, &h) else { return Ok(()) };
        prop_assert_eq!(fan_from_json(&fan_to_json(&f)).unwrap(), f.clone());
        let p = ToricPair::with_zero_boundary(f);
        prop_assert_eq!(pair_from_json(&pair_to_json(&p)).unwrap(), p);
        let huge = Int::from(big) * Int::from(big) * 7;
        let v = toric_mmp::json::int_to_json(&huge);
        prop_assert_eq!(toric_mmp::json::int_from_json(&v).unwrap(), huge);
    }

    #[test]
    fn quotient_rank_is_group_order(g in group()) {
        let x = quotient_pair(&g).unwrap();
        prop_assert_eq!(stack_rank(&x).unwrap(), g.order().unwrap());
    }

    #[test]
    fn pipeline_checks_hold(g in group()) {
        let rep = mckay_pipeline(&g, None).unwrap();
        prop_assert!(rep.checks.all_pass(), "{:?}", rep.checks);
        prop_assert!(is_terminal(&rep.terminal).unwrap());
    }

    #[test]
    fn terminalization_raises_psi(r in 2u64..=15, w in prop::collection::vec(0u64..15, 3)) {
        let w: Vec<u64> = w.into_iter().map(|a| a % r).collect();
        let x = quotient_pair(&GroupData::cyclic(r, &w)).unwrap();
        let (t, steps) = terminalize(&x, None).unwrap();
        prop_assert!(is_terminal(&t).unwrap());
        prop_assert!(low_points(&t, &Rat::one(), false).unwrap().is_empty());
        for s in &steps {
            prop_assert!(s.psi_before.is_positive() && s.psi_before <= Rat::one());
        }
        // ψ of the new model is 1 on extracted rays and untouched on old ones
        let psi = psi_heights(&t);
        for (v, p) in t.fan.rays().iter().zip(&psi) {
            match x.fan.ray_index(v) {
                Some(i) => prop_assert_eq!(p, &(Rat::one() - &x.coeffs[i])),
                None => prop_assert!(p.is_one()),
            }
        }
    }

    #[test]
    fn case_a_count(r in 1u64..=200, s in 1u64..=200) {
        prop_assume!(s <= r);
        let c = case_a_components(r, s).unwrap();
        prop_assert_eq!(c.len() as u64, r - s);
        prop_assert!(c.iter().all(|&l| 1 <= l && l < r));
    }

    #[test]
    fn hirzebruch_jung_chain_expands_to_r_over_a(r in 2u64..=200, a in 1u64..200) {
        prop_assume!(a < r && r.gcd(&a) == 1);
        let (p, chain) = hj_resolution(r, a).unwrap();
        // [b_1, ..., b_k] = b_1 - 1/(b_2 - ...)
        let mut x: Option<Rat> = None;
        for b in chain.iter().rev() {
            let b = Rat::from_integer(int(-b));
            x = Some(match x {
                None => b,
                Some(t) => b - t.recip(),
            });
        }
        prop_assert_eq!(x.unwrap(), Rat::new(Int::from(r), Int::from(a)));
        prop_assert_eq!(p.fan.cones().len(), chain.len() + 1);
        for c in 0..p.fan.cones().len() {
            prop_assert!(cone_multiplicity_in_coords(&p.fan.cone_rays(c)).unwrap().is_one());
        }
    }
}

#[test]
fn fan_rejects_overlapping_cones() {
    let r = vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])];
    assert!(Fan::new(2, r, vec![vec![0, 1], vec![0, 2]]).is_err());
}
