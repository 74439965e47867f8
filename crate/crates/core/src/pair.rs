//! Toric pairs `(X, B)`, the log-discrepancy function ψ, singularity tests,
//! K-equivalence and K-comparison.

use crate::error::{Error, Result};
use crate::fan::{Fan, SupportKind};
use crate::lattice::{box_points_in_coords, is_primitive, LatticeBasis};
use crate::linalg::det_int;
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::num::{rat_int, standard_order, to_rat_vec, Int, LatticeVector, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// Values of a piecewise-linear function at the rays of a fan.
pub type HeightFunction = Vec<Rat>;

/// A simplicial toric pair. Rays are integer coordinates in the basis of
/// `lattice`; `coeffs[i]` is the boundary coefficient of ray `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPair {
    pub fan: Fan,
    pub coeffs: Vec<Rat>,
    pub lattice: LatticeBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KComparison {
    Equal,
    /// `K_X + B >= K_Y + C`, i.e. `ψ_X <= ψ_Y` everywhere.
    XGeY,
    YGeX,
    Incomparable,
}

impl ToricPair {
    pub fn new(fan: Fan, coeffs: Vec<Rat>, lattice: LatticeBasis) -> Result<Self> {
        if coeffs.len() != fan.rays().len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} rays",
                coeffs.len(),
                fan.rays().len()
            )));
        }
        if let Some(d) = coeffs.iter().find(|d| d.is_negative() || **d >= Rat::one()) {
            return Err(Error::invalid(format!("coefficient {d} outside [0, 1)")));
        }
        if lattice.dim() != fan.dim() {
            return Err(Error::invalid("lattice and fan dimensions differ"));
        }
        Ok(ToricPair {
            fan,
            coeffs,
            lattice,
        })
    }

    /// The pair with zero boundary on the standard lattice.
    pub fn with_zero_boundary(fan: Fan) -> Self {
        let n = fan.dim();
        let k = fan.rays().len();
        ToricPair {
            fan,
            coeffs: vec![Rat::zero(); k],
            lattice: LatticeBasis::standard(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn coeff_of(&self, v: &[Int]) -> Option<&Rat> {
        self.fan.ray_index(v).map(|i| &self.coeffs[i])
    }

    /// Replace the fan, carrying coefficients by ray identity; rays new to
    /// `fan` get coefficient 0.
    pub fn with_fan(&self, fan: Fan) -> ToricPair {
        let old = self.fan.ray_lookup();
        let coeffs = fan
            .rays()
            .iter()
            .map(|r| {
                old.get(r)
                    .map(|&i| self.coeffs[i].clone())
                    .unwrap_or_else(Rat::zero)
            })
            .collect();
        ToricPair {
            fan,
            coeffs,
            lattice: self.lattice.clone(),
        }
    }
}

/// ψ at the rays: `1 - d_i`.
pub fn psi_heights(pair: &ToricPair) -> HeightFunction {
    pair.coeffs.iter().map(|d| Rat::one() - d).collect()
}

pub fn pl_eval(fan: &Fan, h: &[Rat], p: &[Rat]) -> Result<Rat> {
    let (c, lambda) = fan.locate(p)?;
    Ok(fan.cones()[c]
        .iter()
        .zip(&lambda)
        .map(|(&i, l)| l * &h[i])
        .sum())
}

/// Primitive non-ray lattice points `p` of the support with `ψ(p) <= bound`
/// (or `< bound` when `strict`), with their ψ values, sorted by
/// `(ψ, p)`.
pub fn low_points(
    pair: &ToricPair,
    bound: &Rat,
    strict: bool,
) -> Result<Vec<(LatticeVector, Rat)>> {
    let fan = &pair.fan;
    let psi = psi_heights(pair);
    let within = |x: &Rat| if strict { x < bound } else { x <= bound };
    let mut found: BTreeMap<LatticeVector, Rat> = BTreeMap::new();
    for (ci, cone) in fan.cones().iter().enumerate() {
        let rays = fan.cone_rays(ci);
        let hs: Vec<Rat> = cone.iter().map(|&i| psi[i].clone()).collect();
        let mut starts: Vec<(LatticeVector, Rat)> =
            vec![(vec![Int::zero(); fan.dim()], Rat::zero())];
        for b in box_points_in_coords(&rays)? {
            let val: Rat = b.barycentric.iter().zip(&hs).map(|(t, h)| t * h).sum();
            if within(&val) {
                starts.push((b.coords, val));
            }
        }
        for (p, val) in starts {
            add_ray_multiples(&rays, &hs, 0, p, val, &within, &mut found);
        }
    }
    let rays: std::collections::HashSet<&LatticeVector> = fan.rays().iter().collect();
    let mut out: Vec<(LatticeVector, Rat)> = found
        .into_iter()
        .filter(|(p, _)| !p.iter().all(|x| x.is_zero()) && !rays.contains(p) && is_primitive(p))
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn add_ray_multiples(
    rays: &[LatticeVector],
    hs: &[Rat],
    k: usize,
    p: LatticeVector,
    val: Rat,
    within: &dyn Fn(&Rat) -> bool,
    found: &mut BTreeMap<LatticeVector, Rat>,
) {
    if k == rays.len() {
        found.insert(p, val);
        return;
    }
    let mut p = p;
    let mut val = val;
    loop {
        add_ray_multiples(rays, hs, k + 1, p.clone(), val.clone(), within, found);
        val += &hs[k];
        if !within(&val) {
            break;
        }
        for (x, r) in p.iter_mut().zip(&rays[k]) {
            *x += r;
        }
    }
}

/// Terminal: ψ > 1 at every primitive lattice point of the support that is
/// not a ray.
pub fn is_terminal(pair: &ToricPair) -> Result<bool> {
    Ok(low_points(pair, &Rat::one(), false)?.is_empty())
}

/// Canonical: ψ ≥ 1 at every primitive non-ray lattice point.
pub fn is_canonical(pair: &ToricPair) -> Result<bool> {
    Ok(low_points(pair, &Rat::one(), true)?.is_empty())
}

/// Both supports must be the whole space or the same convex cone.
fn check_same_support(x: &Fan, y: &Fan) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::SupportMismatch("dimensions differ".into()));
    }
    match (x.support_kind(), y.support_kind()) {
        (SupportKind::Complete, SupportKind::Complete) => Ok(()),
        (SupportKind::ConeSupported, SupportKind::ConeSupported) => {
            let inside = |a: &Fan, b: &Fan| a.rays().iter().all(|r| b.contains(&to_rat_vec(r)));
            if inside(x, y) && inside(y, x) {
                Ok(())
            } else {
                Err(Error::SupportMismatch("the support cones differ".into()))
            }
        }
        (a, b) => Err(Error::SupportMismatch(format!("{a:?} vs {b:?}"))),
    }
}

/// Range of `f · x` over `σ ∩ τ`, normalised by the barycentric sum in `σ`.
/// `None` when the intersection is lower dimensional.
fn form_range(x: &Fan, sx: usize, y: &Fan, ty: usize, f: &[Rat]) -> Option<(Rat, Rat)> {
    let n = x.dim();
    let rays = x.cone_rays(sx);
    // p = Σ λ_k v_k ; μ = barycentric of p in τ, linear in λ
    let mu_cols: Vec<Vec<Rat>> = rays
        .iter()
        .map(|v| y.barycentric(ty, &to_rat_vec(v)))
        .collect();
    let obj: Vec<Rat> = rays
        .iter()
        .map(|v| v.iter().zip(f).map(|(a, b)| rat_int(a) * b).sum())
        .collect();
    // full dimensional iff some point has every λ_k, μ_j ≥ s > 0
    let mut lp = LinearProgram::new(n + 1);
    lp.objective[n] = Rat::one();
    let mut sum = vec![Rat::one(); n];
    sum.push(Rat::zero());
    lp.add(sum.clone(), Cmp::Eq, Rat::one());
    for k in 0..n {
        let mut row = vec![Rat::zero(); n + 1];
        row[k] = Rat::one();
        row[n] = -Rat::one();
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for j in 0..n {
        let mut row: Vec<Rat> = mu_cols.iter().map(|c| c[j].clone()).collect();
        row.push(-Rat::one());
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } if value.is_positive() => {}
        _ => return None,
    }
    let extreme = |sign: i64| {
        let mut lp = LinearProgram::new(n);
        lp.objective = obj
            .iter()
            .map(|c| c * Rat::from_integer(sign.into()))
            .collect();
        lp.add(vec![Rat::one(); n], Cmp::Eq, Rat::one());
        for j in 0..n {
            lp.add(
                mu_cols.iter().map(|c| c[j].clone()).collect(),
                Cmp::Ge,
                Rat::zero(),
            );
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => value * Rat::from_integer(sign.into()),
            other => unreachable!("bounded feasible slice: {other:?}"),
        }
    };
    Some((extreme(-1), extreme(1)))
}

fn same_rays_and_coeffs(x: &ToricPair, y: &ToricPair) -> bool {
    if x.lattice != y.lattice || !x.fan.same_ray_set(&y.fan) {
        return false;
    }
    let lookup: HashMap<LatticeVector, usize> = y.fan.ray_lookup();
    x.fan
        .rays()
        .iter()
        .zip(&x.coeffs)
        .all(|(r, d)| y.coeffs[lookup[r]] == *d)
}

/// ψ_X and ψ_Y agree as functions on the common support.
pub fn k_equivalent(x: &ToricPair, y: &ToricPair) -> Result<bool> {
    if x.dim() != y.dim() || !same_rays_and_coeffs(x, y) {
        return Ok(false);
    }
    check_same_support(&x.fan, &y.fan)?;
    let (px, py) = (psi_heights(x), psi_heights(y));
    let fx: Vec<Vec<Rat>> = (0..x.fan.cones().len())
        .map(|c| x.fan.linear_form(c, &px))
        .collect();
    let fy: Vec<Vec<Rat>> = (0..y.fan.cones().len())
        .map(|c| y.fan.linear_form(c, &py))
        .collect();
    for (a, ma) in fx.iter().enumerate() {
        for (b, mb) in fy.iter().enumerate() {
            if ma == mb {
                continue;
            }
            let diff: Vec<Rat> = ma.iter().zip(mb).map(|(p, q)| p - q).collect();
            if form_range(&x.fan, a, &y.fan, b, &diff).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compare `K_X + B` with `K_Y + C` pulled back to a common refinement.
/// Results are in divisor order; ψ order is the reverse.
pub fn k_compare(x: &ToricPair, y: &ToricPair) -> Result<KComparison> {
    check_same_support(&x.fan, &y.fan)?;
    let (px, py) = (psi_heights(x), psi_heights(y));
    let (mut x_above, mut y_above) = (false, false);
    for a in 0..x.fan.cones().len() {
        let ma = x.fan.linear_form(a, &px);
        for b in 0..y.fan.cones().len() {
            let mb = y.fan.linear_form(b, &py);
            if ma == mb {
                continue;
            }
            let diff: Vec<Rat> = ma.iter().zip(&mb).map(|(p, q)| p - q).collect();
            if let Some((lo, hi)) = form_range(&x.fan, a, &y.fan, b, &diff) {
                x_above |= hi.is_positive();
                y_above |= lo.is_negative();
            }
        }
    }
    Ok(match (x_above, y_above) {
        (false, false) => KComparison::Equal,
        (false, true) => KComparison::XGeY,
        (true, false) => KComparison::YGeX,
        (true, true) => KComparison::Incomparable,
    })
}

/// Orders `m_i` with `d_i = 1 - 1/m_i`.
pub fn standard_orders(pair: &ToricPair) -> Result<Vec<Int>> {
    pair.coeffs
        .iter()
        .map(|d| standard_order(d).ok_or_else(|| Error::NonStandardCoefficient(d.to_string())))
        .collect()
}

/// Σ over maximal cones of the multiplicity of the cone spanned by
/// `m_i v_i`.
pub fn stack_rank(pair: &ToricPair) -> Result<Int> {
    let m = standard_orders(pair)?;
    let fan = &pair.fan;
    Ok(fan
        .cones()
        .iter()
        .map(|c| {
            let rows: Vec<Vec<Int>> = c.iter().map(|&i| fan.rays()[i].clone()).collect();
            let scale: Int = c.iter().map(|&i| m[i].clone()).product();
            det_int(&rows).abs() * scale
        })
        .sum())
}
