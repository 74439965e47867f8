//! Simplicial fans: validation, walls, point location, star subdivision and
//! exact equality.

use crate::error::{Error, Result};
use crate::lattice::{is_primitive, primitive};
use crate::linalg::{det_int, inverse, to_rat_matrix, RatMatrix};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::num::{dot_int, fmt_vec, rat_int, Int, LatticeVector, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportKind {
    Complete,
    /// The support is the convex cone spanned by the rays.
    ConeSupported,
    Other,
}

/// A codimension-one face shared by two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub shared: Vec<usize>,
    pub cone_a: usize,
    pub cone_b: usize,
    pub apex_a: usize,
    pub apex_b: usize,
}

#[derive(Debug, Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
    support: SupportKind,
    inverses: OnceLock<Vec<RatMatrix>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.cones == other.cones
    }
}

impl Eq for Fan {}

/// Integer normal of the hyperplane spanned by `n - 1` vectors: `u · x` is
/// the determinant of the face vectors stacked on `x`.
pub(crate) fn hyperplane_normal(face: &[&LatticeVector], n: usize) -> Vec<Int> {
    (0..n)
        .map(|k| {
            let mut m: Vec<Vec<Int>> = face.iter().map(|v| (*v).clone()).collect();
            let mut e = vec![Int::zero(); n];
            e[k] = Int::one();
            m.push(e);
            det_int(&m)
        })
        .collect()
}

impl Fan {
    /// Build and fully validate a fan.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for r in &rays {
            if r.len() != dim {
                return Err(Error::InvalidFan(format!(
                    "ray {} has wrong dimension",
                    fmt_vec(r)
                )));
            }
            if r.iter().all(|x| x.is_zero()) {
                return Err(Error::InvalidFan("zero ray".into()));
            }
            if !is_primitive(r) {
                return Err(Error::InvalidFan(format!(
                    "ray {} is not primitive",
                    fmt_vec(r)
                )));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::InvalidFan(format!("duplicate ray {}", fmt_vec(r))));
            }
        }
        let mut used = vec![false; rays.len()];
        let mut normalized = Vec::with_capacity(cones.len());
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if c.len() != dim || c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone {c:?} must list {dim} distinct valid ray indices"
                )));
            }
            let m: Vec<Vec<Int>> = c.iter().map(|&i| rays[i].clone()).collect();
            if det_int(&m).is_zero() {
                return Err(Error::InvalidFan(format!("cone {c:?} is not simplicial")));
            }
            for &i in &c {
                used[i] = true;
            }
            normalized.push(c);
        }
        if normalized.is_empty() {
            return Err(Error::InvalidFan("no maximal cones".into()));
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!(
                "ray {i} is not used by any cone"
            )));
        }
        let fan = Fan::from_parts(dim, rays, normalized);
        let distinct: BTreeSet<_> = fan.cones.iter().collect();
        if distinct.len() != fan.cones.len() {
            return Err(Error::InvalidFan("repeated cone".into()));
        }
        for (facet, inc) in fan.facet_incidence() {
            if inc.len() > 2 {
                return Err(Error::InvalidFan(format!(
                    "face {facet:?} lies in {} cones",
                    inc.len()
                )));
            }
        }
        fan.check_pairwise_intersections()?;
        Ok(fan)
    }

    /// Assemble without validation; cones are put in canonical order.
    pub(crate) fn from_parts(dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Self {
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        let mut fan = Fan {
            dim,
            rays,
            cones,
            support: SupportKind::Other,
            inverses: OnceLock::new(),
        };
        fan.support = fan.compute_support_kind();
        fan
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn support_kind(&self) -> SupportKind {
        self.support
    }

    pub fn is_complete(&self) -> bool {
        self.support == SupportKind::Complete
    }

    pub fn ray_index(&self, v: &[Int]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    pub fn cone_rays(&self, cone: usize) -> Vec<LatticeVector> {
        self.cones[cone]
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect()
    }

    pub fn cone_index(&self, sorted: &[usize]) -> Option<usize> {
        self.cones
            .binary_search_by(|c| c.as_slice().cmp(sorted))
            .ok()
    }

    fn inverses(&self) -> &Vec<RatMatrix> {
        self.inverses.get_or_init(|| {
            self.cones
                .iter()
                .map(|c| {
                    let cols: Vec<Vec<Int>> = (0..self.dim)
                        .map(|r| c.iter().map(|&i| self.rays[i][r].clone()).collect())
                        .collect();
                    inverse(&to_rat_matrix(&cols)).expect("simplicial cone")
                })
                .collect()
        })
    }

    /// Coordinates of `p` with respect to the rays of `cone`.
    pub fn barycentric(&self, cone: usize, p: &[Rat]) -> Vec<Rat> {
        let inv = &self.inverses()[cone];
        inv.iter()
            .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The linear form `m` with `m · v_i = h[v_i]` on the rays of `cone`.
    pub fn linear_form(&self, cone: usize, h: &[Rat]) -> Vec<Rat> {
        let inv = &self.inverses()[cone];
        let c = &self.cones[cone];
        (0..self.dim)
            .map(|j| c.iter().enumerate().map(|(k, &i)| &h[i] * &inv[k][j]).sum())
            .collect()
    }

    /// Every cone containing `p`, with its barycentric coordinates.
    pub fn cones_containing(&self, p: &[Rat]) -> Vec<(usize, Vec<Rat>)> {
        (0..self.cones.len())
            .filter_map(|c| {
                let l = self.barycentric(c, p);
                l.iter().all(|x| !x.is_negative()).then_some((c, l))
            })
            .collect()
    }

    /// First cone (in canonical order) containing `p`.
    pub fn locate(&self, p: &[Rat]) -> Result<(usize, Vec<Rat>)> {
        if p.len() != self.dim {
            return Err(Error::invalid("point dimension mismatch"));
        }
        (0..self.cones.len())
            .find_map(|c| {
                let l = self.barycentric(c, p);
                l.iter().all(|x| !x.is_negative()).then_some((c, l))
            })
            .ok_or_else(|| Error::OutsideSupport(fmt_vec(p)))
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.locate(p).is_ok()
    }

    /// Facet (sorted `n - 1` ray indices) to the `(cone, apex)` pairs containing it.
    pub fn facet_incidence(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.cones.iter().enumerate() {
            for (k, &apex) in c.iter().enumerate() {
                let mut f = c.clone();
                f.remove(k);
                map.entry(f).or_default().push((ci, apex));
            }
        }
        map
    }

    /// Interior walls, one per facet shared by two cones, ordered by facet.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        let mut out = Vec::new();
        for (shared, inc) in self.facet_incidence() {
            match inc.as_slice() {
                [_] => {}
                [(ca, aa), (cb, ab)] => out.push(Wall {
                    shared,
                    cone_a: *ca,
                    cone_b: *cb,
                    apex_a: *aa,
                    apex_b: *ab,
                }),
                _ => {
                    return Err(Error::InvalidFan(format!(
                        "face {shared:?} lies in {} cones",
                        inc.len()
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Facets lying in exactly one cone, with that cone's apex.
    pub fn boundary_facets(&self) -> Vec<(Vec<usize>, usize)> {
        self.facet_incidence()
            .into_iter()
            .filter_map(|(f, inc)| (inc.len() == 1).then(|| (f, inc[0].1)))
            .collect()
    }

    fn compute_support_kind(&self) -> SupportKind {
        let boundary = self.boundary_facets();
        if boundary.is_empty() {
            return SupportKind::Complete;
        }
        let convex = boundary.iter().all(|(f, apex)| {
            let face: Vec<&LatticeVector> = f.iter().map(|&i| &self.rays[i]).collect();
            let mut u = hyperplane_normal(&face, self.dim);
            if dot_int(&u, &self.rays[*apex]).is_negative() {
                u = u.into_iter().map(|x| -x).collect();
            }
            self.rays.iter().all(|r| !dot_int(&u, r).is_negative())
        });
        if convex {
            SupportKind::ConeSupported
        } else {
            SupportKind::Other
        }
    }

    /// Inward facet normals of a cone: `normals[k] · ray_j` vanishes for
    /// `j != k` and is positive for `j == k`.
    fn dual_normals(&self, cone: usize) -> Vec<Vec<Int>> {
        let c = &self.cones[cone];
        (0..c.len())
            .map(|k| {
                let face: Vec<&LatticeVector> = c
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, &i)| &self.rays[i])
                    .collect();
                let u = hyperplane_normal(&face, self.dim);
                if dot_int(&u, &self.rays[c[k]]).is_negative() {
                    u.into_iter().map(|x| -x).collect()
                } else {
                    u
                }
            })
            .collect()
    }

    fn separated_by_dual_sum(&self, a: usize, b: usize, shared: &BTreeSet<usize>) -> bool {
        let normals = self.dual_normals(a);
        let mut u = vec![Int::zero(); self.dim];
        for (k, &i) in self.cones[a].iter().enumerate() {
            if !shared.contains(&i) {
                for (x, y) in u.iter_mut().zip(&normals[k]) {
                    *x += y;
                }
            }
        }
        self.cones[b]
            .iter()
            .filter(|i| !shared.contains(i))
            .all(|&t| dot_int(&u, &self.rays[t]).is_negative())
    }

    /// Exact check that two cones meet in the cone over their common rays.
    fn meet_in_common_face(&self, a: usize, b: usize) -> bool {
        let sa: BTreeSet<usize> = self.cones[a].iter().copied().collect();
        let sb: BTreeSet<usize> = self.cones[b].iter().copied().collect();
        let shared: BTreeSet<usize> = sa.intersection(&sb).copied().collect();
        if self.separated_by_dual_sum(a, b, &shared) || self.separated_by_dual_sum(b, a, &shared) {
            return true;
        }
        // is there a point of both cones using a non-shared ray?
        let n = self.dim;
        let vars: Vec<(usize, bool)> = self.cones[a]
            .iter()
            .map(|&i| (i, true))
            .chain(self.cones[b].iter().map(|&i| (i, false)))
            .collect();
        let mut lp = LinearProgram::new(vars.len());
        for r in 0..n {
            let row = vars
                .iter()
                .map(|&(i, first)| {
                    let x = rat_int(&self.rays[i][r]);
                    if first {
                        x
                    } else {
                        -x
                    }
                })
                .collect();
            lp.add(row, Cmp::Eq, Rat::zero());
        }
        let norm = vars
            .iter()
            .map(|(i, _)| {
                if shared.contains(i) {
                    Rat::zero()
                } else {
                    Rat::one()
                }
            })
            .collect();
        lp.add(norm, Cmp::Eq, Rat::one());
        matches!(lp.solve(), LpOutcome::Infeasible)
    }

    fn check_pairwise_intersections(&self) -> Result<()> {
        for a in 0..self.cones.len() {
            for b in a + 1..self.cones.len() {
                if !self.meet_in_common_face(a, b) {
                    return Err(Error::InvalidFan(format!(
                        "cones {:?} and {:?} overlap",
                        self.cones[a], self.cones[b]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rebuild after replacing some cones; rays are kept.
    pub(crate) fn replace_cones(&self, remove: &BTreeSet<Vec<usize>>, add: Vec<Vec<usize>>) -> Fan {
        let cones: Vec<Vec<usize>> = self
            .cones
            .iter()
            .filter(|c| !remove.contains(*c))
            .cloned()
            .chain(add)
            .collect();
        Fan::from_parts(self.dim, self.rays.clone(), cones)
    }

    /// Drop an unused ray and shift the indices above it.
    pub(crate) fn without_ray(&self, cones: Vec<Vec<usize>>, ray: usize) -> Fan {
        let rays: Vec<LatticeVector> = self
            .rays
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ray)
            .map(|(_, r)| r.clone())
            .collect();
        let cones = cones
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|i| {
                        debug_assert_ne!(i, ray);
                        if i > ray {
                            i - 1
                        } else {
                            i
                        }
                    })
                    .collect()
            })
            .collect();
        Fan::from_parts(self.dim, rays, cones)
    }

    /// Insert the ray through `w`, subdividing every cone that contains it.
    /// The new ray is appended.
    pub fn star_subdivision(&self, w: &[Int]) -> Result<Fan> {
        if w.len() != self.dim {
            return Err(Error::invalid("subdivision vector has wrong dimension"));
        }
        let w = primitive(w)?;
        if self.ray_index(&w).is_some() {
            return Err(Error::DuplicateRay(fmt_vec(&w)));
        }
        let p: Vec<Rat> = w.iter().map(rat_int).collect();
        let hits = self.cones_containing(&p);
        if hits.is_empty() {
            return Err(Error::OutsideSupport(fmt_vec(&w)));
        }
        let k = self.rays.len();
        let mut remove = BTreeSet::new();
        let mut add = Vec::new();
        for (ci, lambda) in hits {
            let c = &self.cones[ci];
            remove.insert(c.clone());
            for (j, l) in lambda.iter().enumerate() {
                if l.is_positive() {
                    let mut nc = c.clone();
                    nc[j] = k;
                    add.push(nc);
                }
            }
        }
        let mut rays = self.rays.clone();
        rays.push(w);
        let cones = self
            .cones
            .iter()
            .filter(|c| !remove.contains(*c))
            .cloned()
            .chain(add)
            .collect();
        Ok(Fan::from_parts(self.dim, rays, cones))
    }

    /// Cones as sets of ray vectors.
    fn cone_vector_sets(&self) -> BTreeSet<Vec<LatticeVector>> {
        self.cones
            .iter()
            .map(|c| {
                let mut v: Vec<LatticeVector> = c.iter().map(|&i| self.rays[i].clone()).collect();
                v.sort();
                v
            })
            .collect()
    }

    /// Map from ray vector to index.
    pub fn ray_lookup(&self) -> HashMap<LatticeVector, usize> {
        self.rays
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect()
    }

    /// Rewrite this fan's ray order to follow `order` (a permutation given as
    /// ray vectors).
    pub fn reindexed(&self, order: &[LatticeVector]) -> Result<Fan> {
        let lookup: HashMap<&LatticeVector, usize> =
            order.iter().enumerate().map(|(i, r)| (r, i)).collect();
        if order.len() != self.rays.len() {
            return Err(Error::invalid("ray sets differ"));
        }
        let map: Vec<usize> = self
            .rays
            .iter()
            .map(|r| {
                lookup
                    .get(r)
                    .copied()
                    .ok_or_else(|| Error::invalid("ray sets differ"))
            })
            .collect::<Result<_>>()?;
        let cones = self
            .cones
            .iter()
            .map(|c| c.iter().map(|&i| map[i]).collect())
            .collect();
        Ok(Fan::from_parts(self.dim, order.to_vec(), cones))
    }

    pub fn same_ray_set(&self, other: &Fan) -> bool {
        let a: BTreeSet<&LatticeVector> = self.rays.iter().collect();
        let b: BTreeSet<&LatticeVector> = other.rays.iter().collect();
        a == b
    }
}

/// Equal ray sets and equal cone sets, regardless of indexing.
pub fn fans_equal(a: &Fan, b: &Fan) -> bool {
    a.dim == b.dim && a.same_ray_set(b) && a.cone_vector_sets() == b.cone_vector_sets()
}
