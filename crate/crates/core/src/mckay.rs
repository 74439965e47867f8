//! Abelian quotients `A^n / G`: the quotient pair, the extraction and MMP
//! pipeline, and its ledger of centers and rank changes.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{complete_to_basis, LatticeBasis};
use crate::linalg::mat_mul_int;
use crate::mmp::{relative_mmp, terminalize, ExtractionStep, MmpStep, MmpStepKind};
use crate::num::{gcd_all, int, rat, Int, LatticeVector, Rat, RationalVector};
use crate::pair::{psi_heights, stack_rank, standard_orders, ToricPair};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// One generator `(1/r)(a_1, ..., a_n)` of a diagonal group.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Generator {
    pub r: u64,
    pub weights: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GroupData {
    pub n: usize,
    pub gens: Vec<Generator>,
}

impl GroupData {
    pub fn cyclic(r: u64, weights: &[u64]) -> Self {
        GroupData {
            n: weights.len(),
            gens: vec![Generator {
                r,
                weights: weights.to_vec(),
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("group dimension must be positive"));
        }
        for g in &self.gens {
            if g.r == 0 {
                return Err(Error::invalid("generator order must be at least 1"));
            }
            if g.weights.len() != self.n {
                return Err(Error::invalid(format!(
                    "generator needs {} weights",
                    self.n
                )));
            }
            if g.weights.iter().any(|&a| a >= g.r) {
                return Err(Error::invalid(format!("weights must lie in [0, {})", g.r)));
            }
        }
        Ok(())
    }

    /// `N = Z^n + Σ Z (1/r)(a)`.
    pub fn lattice(&self) -> Result<LatticeBasis> {
        self.validate()?;
        let n = self.n;
        let mut gens: Vec<RationalVector> = (0..n)
            .map(|i| (0..n).map(|j| rat((i == j) as i64, 1)).collect())
            .collect();
        for g in &self.gens {
            gens.push(
                g.weights
                    .iter()
                    .map(|&a| Rat::new(Int::from(a), Int::from(g.r)))
                    .collect(),
            );
        }
        LatticeBasis::from_generators(&gens)
    }

    pub fn order(&self) -> Result<Int> {
        self.lattice()?
            .index_over_standard()
            .ok_or_else(|| Error::invariant("group lattice does not contain Z^n"))
    }
}

fn unit(n: usize, i: usize) -> RationalVector {
    (0..n).map(|j| rat((i == j) as i64, 1)).collect()
}

/// The orthant over `N` with rays `e_i / m_i` and boundary `Σ (1 - 1/m_i) D_i`.
pub fn quotient_pair(g: &GroupData) -> Result<ToricPair> {
    let lat = g.lattice()?;
    let n = g.n;
    let mut rays = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        let c = lat
            .coords_of(&unit(n, i))
            .ok_or_else(|| Error::invariant("unit vector outside the group lattice"))?;
        let m = gcd_all(&c);
        rays.push(c.into_iter().map(|x| x / &m).collect::<LatticeVector>());
        coeffs.push(Rat::one() - Rat::new(Int::one(), m));
    }
    let fan = Fan::new(n, rays, vec![(0..n).collect()])?;
    ToricPair::new(fan, coeffs, lat)
}

pub fn is_sl(g: &GroupData) -> bool {
    g.gens
        .iter()
        .all(|gen| gen.weights.iter().sum::<u64>() % gen.r == 0)
}

/// `{ l ∈ [1, r-1] : l ≠ ⌊k r / s⌋ for k = 1..s-1 }`.
pub fn case_a_components(r: u64, s: u64) -> Result<Vec<u64>> {
    if s == 0 || s > r {
        return Err(Error::invalid(format!(
            "need 1 <= s <= r, got r = {r}, s = {s}"
        )));
    }
    let excluded: std::collections::BTreeSet<u64> = (1..s).map(|k| k * r / s).collect();
    Ok((1..r).filter(|l| !excluded.contains(l)).collect())
}

/// The pair induced on the divisor of ray `i`: the star of `v_i` projected
/// to `N / Z v_i`, with coefficient `1 - 1/(c_j m_j)` where `v_j` maps to
/// `c_j` times a primitive vector.
pub fn boundary_divisor_pair(pair: &ToricPair, i: usize) -> Result<ToricPair> {
    let n = pair.dim();
    if n < 2 {
        return Err(Error::invalid("divisor of a curve has dimension zero"));
    }
    if i >= pair.fan.rays().len() {
        return Err(Error::invalid(format!("no ray {i}")));
    }
    let m = standard_orders(pair)?;
    let u = complete_to_basis(&pair.fan.rays()[i])?;
    let project = |v: &LatticeVector| -> LatticeVector {
        let col: Vec<Vec<Int>> = v.iter().map(|x| vec![x.clone()]).collect();
        mat_mul_int(&u, &col)
            .into_iter()
            .take(n - 1)
            .map(|r| r[0].clone())
            .collect()
    };
    let star: Vec<&Vec<usize>> = pair.fan.cones().iter().filter(|c| c.contains(&i)).collect();
    let mut index: Vec<usize> = star
        .iter()
        .flat_map(|c| c.iter().copied())
        .filter(|&j| j != i)
        .collect();
    index.sort_unstable();
    index.dedup();
    let mut rays = Vec::new();
    let mut coeffs = Vec::new();
    for &j in &index {
        let img = project(&pair.fan.rays()[j]);
        let c = gcd_all(&img);
        rays.push(img.into_iter().map(|x| x / &c).collect::<LatticeVector>());
        coeffs.push(Rat::one() - Rat::new(Int::one(), c * &m[j]));
    }
    let cones = star
        .iter()
        .map(|c| {
            c.iter()
                .filter(|&&j| j != i)
                .map(|j| index.binary_search(j).unwrap())
                .collect()
        })
        .collect();
    let fan = Fan::new(n - 1, rays, cones)?;
    ToricPair::new(fan, coeffs, LatticeBasis::standard(n - 1))
}

/// Minimal resolution of `(1/r)(1, a)`: the fan over the group lattice and
/// the chain `(-b_1, ..., -b_k)` from the `e_2` end, where
/// `r / a = b_1 - 1/(b_2 - ...)`.
pub fn hj_resolution(r: u64, a: u64) -> Result<(ToricPair, Vec<i64>)> {
    if a == 0 || a >= r || r.gcd(&a) != 1 {
        return Err(Error::invalid(format!(
            "need 0 < a < r with gcd(r, a) = 1, got ({r}, {a})"
        )));
    }
    let mut bs = Vec::new();
    let (mut x, mut y) = (r, a);
    while y != 0 {
        let b = x.div_ceil(y);
        bs.push(b);
        (x, y) = (y, b * y - x);
    }
    let g = GroupData::cyclic(r, &[1, a]);
    let lat = g.lattice()?;
    let mut amb: Vec<RationalVector> = vec![
        vec![rat(0, 1), rat(1, 1)],
        vec![
            Rat::new(int(1), Int::from(r)),
            Rat::new(Int::from(a), Int::from(r)),
        ],
    ];
    for (k, &b) in bs.iter().enumerate() {
        let next: RationalVector = amb[k + 1]
            .iter()
            .zip(&amb[k])
            .map(|(p, q)| p * Rat::from_integer(Int::from(b)) - q)
            .collect();
        amb.push(next);
    }
    if amb.last() != Some(&vec![rat(1, 1), rat(0, 1)]) {
        return Err(Error::invariant(
            "continued fraction chain does not end at e_1",
        ));
    }
    let rays: Vec<LatticeVector> = amb
        .iter()
        .map(|v| {
            lat.coords_of(v)
                .ok_or_else(|| Error::invariant("chain leaves the lattice"))
        })
        .collect::<Result<_>>()?;
    let cones = (0..rays.len() - 1).map(|k| vec![k, k + 1]).collect();
    let fan = Fan::new(2, rays, cones)?;
    let k = fan.rays().len();
    let pair = ToricPair::new(fan, vec![Rat::zero(); k], lat)?;
    Ok((pair, bs.iter().map(|&b| -(b as i64)).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerKind {
    Extraction,
    CoefficientDrop,
    Flip,
    Divisorial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub kind: LedgerKind,
    /// Rays of the base orthant spanning the cone whose orbit closure is
    /// the center.
    pub center: Vec<LatticeVector>,
    pub rank_delta: Int,
    /// Admissible `l` values, for coefficient drops.
    pub components: Option<Vec<u64>>,
    /// `|components| · rank(divisor pair)`, for coefficient drops.
    pub predicted_delta: Option<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientDrop {
    pub ray: LatticeVector,
    pub from: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RankChecks {
    pub order: Int,
    pub rank_x: Int,
    pub rank_y: Int,
    pub ledger_total: Int,
    pub rank_x_is_order: bool,
    pub telescopes: bool,
    pub deltas_nonnegative: bool,
    pub case_a_matches: bool,
    pub sl: bool,
    pub crepant_extractions: bool,
    pub mmp_steps: usize,
}

impl RankChecks {
    pub fn all_pass(&self) -> bool {
        self.rank_x_is_order
            && self.telescopes
            && self.deltas_nonnegative
            && self.case_a_matches
            && (!self.sl || (self.crepant_extractions && self.mmp_steps == 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McKayReport {
    pub group: GroupData,
    pub x: ToricPair,
    pub extractions: Vec<ExtractionStep>,
    pub terminal: ToricPair,
    pub drops: Vec<CoefficientDrop>,
    pub mmp_steps: Vec<MmpStep>,
    pub y: ToricPair,
    pub ledger: Vec<LedgerEntry>,
    pub checks: RankChecks,
}

/// Rays of the smallest face of the base simplicial cone containing `p`.
fn base_face(base: &Fan, p: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let pr: RationalVector = p.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let lambda = base.barycentric(0, &pr);
    if lambda.iter().any(|l| l.is_negative()) {
        return Err(Error::invariant("center outside the base cone"));
    }
    Ok(base.cones()[0]
        .iter()
        .zip(&lambda)
        .filter(|(_, l)| l.is_positive())
        .map(|(&i, _)| base.rays()[i].clone())
        .collect())
}

/// quotient pair, terminalization, coefficient drops, then the MMP over the
/// orthant with zero boundary.
pub fn mckay_pipeline(g: &GroupData, max_steps: Option<usize>) -> Result<McKayReport> {
    let x = quotient_pair(g)?;
    let order = g.order()?;
    let base = x.fan.clone();
    let rank_x = stack_rank(&x)?;
    let mut ledger = Vec::new();

    let (terminal, extractions) = terminalize(&x, max_steps)?;
    let mut cur = x.clone();
    for step in &extractions {
        let next = cur.with_fan(cur.fan.star_subdivision(&step.ray)?);
        ledger.push(LedgerEntry {
            kind: LedgerKind::Extraction,
            center: base_face(&base, &step.ray)?,
            rank_delta: stack_rank(&cur)? - stack_rank(&next)?,
            components: None,
            predicted_delta: None,
        });
        cur = next;
    }
    debug_assert_eq!(cur, terminal);

    let mut drops = Vec::new();
    let mut case_a_matches = true;
    for i in 0..cur.fan.rays().len() {
        let m = standard_orders(&cur)?[i].clone();
        if m.is_one() {
            continue;
        }
        let mu = m
            .to_u64()
            .ok_or_else(|| Error::invalid("coefficient order too large"))?;
        let components = case_a_components(mu, 1)?;
        let divisor_rank = stack_rank(&boundary_divisor_pair(&cur, i)?)?;
        let predicted = Int::from(components.len()) * divisor_rank;
        let mut next = cur.clone();
        next.coeffs[i] = Rat::zero();
        let delta = stack_rank(&cur)? - stack_rank(&next)?;
        case_a_matches &= delta == predicted;
        let ray = cur.fan.rays()[i].clone();
        drops.push(CoefficientDrop {
            ray: ray.clone(),
            from: cur.coeffs[i].clone(),
        });
        ledger.push(LedgerEntry {
            kind: LedgerKind::CoefficientDrop,
            center: base_face(&base, &ray)?,
            rank_delta: delta,
            components: Some(components),
            predicted_delta: Some(predicted),
        });
        cur = next;
    }

    let (y, mmp_steps) = relative_mmp(&cur, Some(base.rays()), max_steps)?;
    for s in &mmp_steps {
        let after = crate::mmp::relative::replay_mmp(&cur, std::slice::from_ref(s))?;
        let mut p: LatticeVector = vec![Int::zero(); g.n];
        for (v, a) in &s.wall.circuit {
            if a.is_positive() {
                for (x, y) in p.iter_mut().zip(v) {
                    *x += a * y;
                }
            }
        }
        ledger.push(LedgerEntry {
            kind: match s.kind {
                MmpStepKind::Flip => LedgerKind::Flip,
                MmpStepKind::DivisorialContraction => LedgerKind::Divisorial,
            },
            center: base_face(&base, &p)?,
            rank_delta: stack_rank(&cur)? - stack_rank(&after)?,
            components: None,
            predicted_delta: None,
        });
        cur = after;
    }
    if cur != y {
        return Err(Error::invariant(
            "replayed MMP differs from the recorded run",
        ));
    }

    let rank_y = stack_rank(&y)?;
    let ledger_total: Int = ledger.iter().map(|e| e.rank_delta.clone()).sum();
    let sl = is_sl(g);
    let checks = RankChecks {
        rank_x_is_order: rank_x == order,
        telescopes: order == &rank_y + &ledger_total,
        deltas_nonnegative: ledger.iter().all(|e| !e.rank_delta.is_negative()),
        case_a_matches,
        sl,
        crepant_extractions: extractions.iter().all(|e| e.psi_before.is_one()),
        mmp_steps: mmp_steps.len(),
        order,
        rank_x,
        rank_y,
        ledger_total,
    };
    Ok(McKayReport {
        group: g.clone(),
        x,
        extractions,
        terminal,
        drops,
        mmp_steps,
        y,
        ledger,
        checks,
    })
}

/// Run the pipeline over many groups on the rayon pool (sequentially
/// without the `parallel` feature). Results keep the input order.
pub fn mckay_batch(groups: &[GroupData], max_steps: Option<usize>) -> Vec<Result<McKayReport>> {
    crate::par::map(groups, |g| mckay_pipeline(g, max_steps))
}

pub fn mckay_batch_sequential(
    groups: &[GroupData],
    max_steps: Option<usize>,
) -> Vec<Result<McKayReport>> {
    crate::par::map_sequential(groups, |g| mckay_pipeline(g, max_steps))
}

/// All cyclic groups `(1/r)(a_1, ..., a_n)` with `r <= max_r` and every
/// weight tuple in `[0, r)^n`.
pub fn cyclic_groups(n: usize, max_r: u64) -> Vec<GroupData> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        let mut w = vec![0u64; n];
        loop {
            out.push(GroupData::cyclic(r, &w));
            let mut k = 0;
            while k < n {
                w[k] += 1;
                if w[k] < r {
                    break;
                }
                w[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

/// ψ of the final model at its rays, for reporting.
pub fn final_psi(report: &McKayReport) -> Vec<Rat> {
    psi_heights(&report.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fans_equal;
    use crate::lattice::cone_multiplicity_in_coords;

    #[test]
    fn quotient_pairs() {
        let p = quotient_pair(&GroupData::cyclic(2, &[1, 1])).unwrap();
        assert_eq!(p.coeffs, vec![rat(0, 1); 2]);
        assert_eq!(
            cone_multiplicity_in_coords(&p.fan.cone_rays(0)).unwrap(),
            int(2)
        );

        let q = quotient_pair(&GroupData::cyclic(2, &[0, 1])).unwrap();
        assert_eq!(q.coeffs, vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(
            cone_multiplicity_in_coords(&q.fan.cone_rays(0)).unwrap(),
            int(1)
        );

        let t = quotient_pair(&GroupData { n: 3, gens: vec![] }).unwrap();
        assert_eq!(t.coeffs, vec![rat(0, 1); 3]);
        assert_eq!(GroupData { n: 3, gens: vec![] }.order().unwrap(), int(1));
        assert!(quotient_pair(&GroupData::cyclic(2, &[2, 1])).is_err());
    }

    #[test]
    fn group_enumeration() {
        assert_eq!(cyclic_groups(2, 3).len(), 1 + 4 + 9);
        assert_eq!(
            cyclic_groups(3, 12).len(),
            (1..=12u64).map(|r| r * r * r).sum::<u64>() as usize
        );
        let seq = mckay_batch_sequential(&cyclic_groups(2, 4), None);
        let par = mckay_batch(&cyclic_groups(2, 4), None);
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.as_ref().unwrap(), b.as_ref().unwrap());
        }
    }

    #[test]
    fn sl_test() {
        assert!(is_sl(&GroupData::cyclic(2, &[1, 1])));
        assert!(!is_sl(&GroupData::cyclic(2, &[1, 1, 1])));
        assert!(is_sl(&GroupData::cyclic(3, &[1, 1, 1])));
    }

    #[test]
    fn case_a_examples() {
        assert!(case_a_components(4, 4).unwrap().is_empty());
        assert_eq!(case_a_components(2, 1).unwrap(), vec![1]);
        assert_eq!(case_a_components(5, 2).unwrap(), vec![1, 3, 4]);
        assert!(case_a_components(2, 3).is_err());
    }

    #[test]
    fn divisor_pairs() {
        let o = quotient_pair(&GroupData { n: 2, gens: vec![] }).unwrap();
        let d = boundary_divisor_pair(&o, 0).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.coeffs, vec![rat(0, 1)]);

        let p = quotient_pair(&GroupData::cyclic(2, &[1, 1])).unwrap();
        let d = boundary_divisor_pair(&p, 0).unwrap();
        assert_eq!(d.coeffs, vec![rat(1, 2)]);
    }

    /// Largest `c` with `(v_j + k v_i) / c ∈ N` for some `k`.
    fn imprimitivity(vj: &LatticeVector, vi: &LatticeVector) -> i64 {
        (1..=60i64)
            .filter(|&c| {
                (0..c).any(|k| {
                    vj.iter()
                        .zip(vi)
                        .all(|(a, b)| ((a + b * Int::from(k)) % Int::from(c)).is_zero())
                })
            })
            .max()
            .unwrap()
    }

    #[test]
    fn divisor_coefficients_match_stabilizer_orders() {
        for (r, w) in [
            (6u64, vec![1u64, 2, 3]),
            (4, vec![0, 1, 2]),
            (12, vec![2, 3, 6]),
            (5, vec![1, 2, 0]),
        ] {
            let p = quotient_pair(&GroupData::cyclic(r, &w)).unwrap();
            let m = standard_orders(&p).unwrap();
            for i in 0..3 {
                let d = boundary_divisor_pair(&p, i).unwrap();
                let mut expected: Vec<Rat> = (0..3)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let c = imprimitivity(&p.fan.rays()[j], &p.fan.rays()[i]);
                        Rat::one() - Rat::new(Int::one(), Int::from(c) * &m[j])
                    })
                    .collect();
                let mut got = d.coeffs.clone();
                expected.sort();
                got.sort();
                assert_eq!(got, expected, "r = {r}, w = {w:?}, ray {i}");
            }
        }
    }

    /// Boundary lattice points of the hull of nonzero points of the orthant,
    /// by a lower-hull scan from e_2 to e_1.
    fn newton_polygon(r: u64, a: u64) -> Vec<RationalVector> {
        let mut pts: Vec<(Rat, Rat)> = (1..r)
            .map(|k| {
                (
                    Rat::new(Int::from(k), Int::from(r)),
                    Rat::new(Int::from((k * a) % r), Int::from(r)),
                )
            })
            .filter(|(_, y)| !y.is_zero())
            .collect();
        pts.push((rat(0, 1), rat(1, 1)));
        pts.push((rat(1, 1), rat(0, 1)));
        pts.sort();
        let mut hull: Vec<(Rat, Rat)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
                let cross = (&a.0 - &o.0) * (&p.1 - &o.1) - (&a.1 - &o.1) * (&p.0 - &o.0);
                if cross.is_negative() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        // keep collinear points; drop anything after e_1
        hull.into_iter().map(|(x, y)| vec![x, y]).collect()
    }

    #[test]
    fn hirzebruch_jung_examples() {
        let (_, c) = hj_resolution(2, 1).unwrap();
        assert_eq!(c, vec![-2]);
        let (_, c) = hj_resolution(3, 1).unwrap();
        assert_eq!(c, vec![-3]);
        let (p, c) = hj_resolution(5, 2).unwrap();
        assert_eq!(c, vec![-3, -2]);
        for c in 0..p.fan.cones().len() {
            assert_eq!(
                cone_multiplicity_in_coords(&p.fan.cone_rays(c)).unwrap(),
                int(1)
            );
        }
        assert!(hj_resolution(4, 2).is_err());
    }

    #[test]
    fn hirzebruch_jung_matches_newton_polygon() {
        for r in 2..=15u64 {
            for a in 1..r {
                if r.gcd(&a) != 1 {
                    continue;
                }
                let (p, _) = hj_resolution(r, a).unwrap();
                let mut got: Vec<RationalVector> = p
                    .fan
                    .rays()
                    .iter()
                    .map(|v| p.lattice.to_ambient(v))
                    .collect();
                let mut want = newton_polygon(r, a);
                got.sort();
                want.sort();
                assert_eq!(got, want, "(r, a) = ({r}, {a})");
            }
        }
    }

    #[test]
    fn pipeline_examples() {
        let rep = mckay_pipeline(&GroupData::cyclic(2, &[1, 1, 1]), None).unwrap();
        assert!(rep.extractions.is_empty() && rep.ledger.is_empty());
        assert_eq!(rep.checks.rank_x, int(2));
        assert!(rep.checks.all_pass());

        let rep = mckay_pipeline(&GroupData::cyclic(3, &[1, 1, 1]), None).unwrap();
        assert!(rep.checks.sl);
        assert_eq!(rep.extractions.len(), 1);
        assert!(rep.mmp_steps.is_empty());
        assert_eq!(rep.y.fan.cones().len(), 3);
        assert!(rep.checks.all_pass());

        let rep = mckay_pipeline(&GroupData::cyclic(2, &[0, 1]), None).unwrap();
        assert_eq!(rep.ledger.len(), 1);
        let e = &rep.ledger[0];
        assert_eq!(e.kind, LedgerKind::CoefficientDrop);
        assert_eq!(e.components, Some(vec![1]));
        assert_eq!(e.rank_delta, int(1));
        assert_eq!(e.center, vec![rep.x.fan.rays()[1].clone()]);
        assert_eq!(rep.checks.rank_y, int(1));
        assert!(rep.checks.all_pass());
    }

    #[test]
    fn surface_pipeline_gives_minimal_resolution() {
        for (r, a) in [(5u64, 2u64), (7, 3), (3, 1), (8, 3)] {
            let rep = mckay_pipeline(&GroupData::cyclic(r, &[1, a]), None).unwrap();
            let (hj, _) = hj_resolution(r, a).unwrap();
            assert!(fans_equal(&rep.y.fan, &hj.fan), "({r}, {a})");
        }
    }
}
