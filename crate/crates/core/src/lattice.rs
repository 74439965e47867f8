//! Integer lattices: Hermite and Smith normal forms, primitive vectors,
//! cone multiplicities and box-point enumeration.
//!
//! Lattices are full-rank subgroups `N ⊂ Q^n` containing `Z^n` or contained in
//! it. A [`LatticeBasis`] stores `N` as an integer Hermite basis over a single
//! minimal common denominator, so two bases describe the same lattice exactly
//! when they compare equal.

use crate::error::{Error, Result};
use crate::linalg::{self, det_int, ext_gcd, identity_int, IntMatrix};
use crate::num::{
    fmt_vec, frac, gcd_all, is_integral, lcm_denominators, rat_int, Int, LatticeVector, Rat,
    RationalVector,
};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

fn row_combine(m: &mut IntMatrix, i: usize, j: usize, coeffs: [&Int; 4]) {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    let [a, b, c, d] = coeffs;
    for k in 0..m[i].len() {
        let x = m[i][k].clone();
        let y = m[j][k].clone();
        m[i][k] = a * &x + b * &y;
        m[j][k] = c * &x + d * &y;
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for k in 0..m[target].len() {
        let v = &m[src][k] * q;
        m[target][k] -= v;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -x.clone();
    }
}

/// Lower echelon Hermite reduction by unimodular row operations.
///
/// Pivots are placed from the bottom row upwards, scanning columns from the
/// right; rows left without a pivot are zero and sit on top. Every pivot is
/// positive and the entries below it are reduced into `[0, pivot)`.
/// Returns `(H, U, rank)` with `U · M = H`.
pub(crate) fn hermite_rows(m: &[Vec<Int>]) -> (IntMatrix, IntMatrix, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut h: IntMatrix = m.to_vec();
    let mut u = identity_int(rows);
    let mut pr = rows as isize - 1;
    let mut rank = 0;
    for c in (0..cols).rev() {
        if pr < 0 {
            break;
        }
        let p = pr as usize;
        for i in 0..p {
            if h[i][c].is_zero() {
                continue;
            }
            if h[p][c].is_zero() {
                h.swap(i, p);
                u.swap(i, p);
                continue;
            }
            let a = h[p][c].clone();
            let b = h[i][c].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let na = -(&b / &g);
            let nb = &a / &g;
            // new row p = x*row_p + y*row_i ; new row i = -(b/g)*row_p + (a/g)*row_i
            row_combine(&mut h, p, i, [&x, &y, &na, &nb]);
            row_combine(&mut u, p, i, [&x, &y, &na, &nb]);
        }
        if h[p][c].is_zero() {
            continue;
        }
        if h[p][c].is_negative() {
            negate_row(&mut h, p);
            negate_row(&mut u, p);
        }
        for k in p + 1..rows {
            let q = h[k][c].div_floor(&h[p][c]);
            row_axpy(&mut h, k, p, &q);
            row_axpy(&mut u, k, p, &q);
        }
        rank += 1;
        pr -= 1;
    }
    (h, u, rank)
}

/// Hermite normal form `(H, U)` with `U · M = H`, `H` lower triangular with
/// positive pivots and reduced entries below each pivot, `det U = ±1`.
pub fn hermite_normal_form(m: &[Vec<Int>]) -> Result<(IntMatrix, IntMatrix)> {
    let (h, u, rank) = hermite_rows(m);
    if rank < m.len() {
        return Err(Error::RankDeficient);
    }
    Ok((h, u))
}

/// Smith normal form `(D, U, V)` with `U · M · V = D`, `D` diagonal with
/// nonnegative entries `d_i | d_{i+1}`, and `U`, `V` unimodular.
pub fn smith_normal_form(m: &[Vec<Int>]) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d: IntMatrix = m.to_vec();
    let mut u = identity_int(rows);
    let mut v = identity_int(cols);

    let swap_cols = |a: &mut IntMatrix, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
    };
    let col_axpy = |a: &mut IntMatrix, target: usize, src: usize, q: &Int| {
        for r in a.iter_mut() {
            let val = &r[src] * q;
            r[target] -= val;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, u, v);
            };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);

            let mut dirty = false;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !d[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => {
                    let one = -Int::one();
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    (d, u, v)
}

/// `v / gcd(v)`.
pub fn primitive(v: &[Int]) -> Result<LatticeVector> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[Int]) -> bool {
    gcd_all(v).is_one()
}

/// A full-rank lattice `N ⊂ Q^n`, stored as `rows / denominator` where `rows`
/// is the Hermite basis of `denominator · N` and `denominator` is minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBasis {
    denominator: Int,
    rows: IntMatrix,
}

impl LatticeBasis {
    pub fn standard(n: usize) -> Self {
        LatticeBasis {
            denominator: Int::one(),
            rows: identity_int(n),
        }
    }

    /// The lattice generated by the given rational vectors (must span `Q^n`).
    pub fn from_generators(gens: &[RationalVector]) -> Result<Self> {
        let n = gens.first().map_or(0, |g| g.len());
        if n == 0 || gens.iter().any(|g| g.len() != n) {
            return Err(Error::invalid(
                "lattice generators must share a positive dimension",
            ));
        }
        let l = gens
            .iter()
            .fold(Int::one(), |acc, g| acc.lcm(&lcm_denominators(g)));
        let scaled: IntMatrix = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * rat_int(&l)).to_integer()).collect())
            .collect();
        let (h, _, rank) = hermite_rows(&scaled);
        if rank < n {
            return Err(Error::RankDeficient);
        }
        let rows: IntMatrix = h[h.len() - n..].to_vec();
        Ok(Self::normalized(rows, l))
    }

    fn normalized(rows: IntMatrix, denominator: Int) -> Self {
        let content = rows.iter().fold(Int::zero(), |g, r| g.gcd(&gcd_all(r)));
        let g = content.gcd(&denominator);
        LatticeBasis {
            denominator: &denominator / &g,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(|x| x / &g).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn denominator(&self) -> &Int {
        &self.denominator
    }

    pub fn hermite_rows(&self) -> &IntMatrix {
        &self.rows
    }

    /// Basis vectors in ambient coordinates.
    pub fn basis(&self) -> Vec<RationalVector> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| Rat::new(x.clone(), self.denominator.clone()))
                    .collect()
            })
            .collect()
    }

    /// Covolume `|det|` of the basis.
    pub fn covolume(&self) -> Rat {
        let n = self.dim() as u32;
        Rat::new(
            det_int(&self.rows).abs(),
            num_traits::pow(self.denominator.clone(), n as usize),
        )
    }

    /// `[N : Z^n]` when `Z^n ⊂ N`.
    pub fn index_over_standard(&self) -> Option<Int> {
        let inv = self.covolume().recip();
        let contains = (0..self.dim()).all(|i| {
            let mut e = vec![Rat::zero(); self.dim()];
            e[i] = Rat::one();
            self.coords_of(&e).is_some()
        });
        (contains && inv.is_integer()).then(|| inv.to_integer())
    }

    /// Integer coordinates of an ambient vector in this basis, if it lies in `N`.
    pub fn coords_of(&self, x: &[Rat]) -> Option<LatticeVector> {
        let y = linalg::row_coords(&self.basis(), x)?;
        is_integral(&y).then(|| y.into_iter().map(|c| c.to_integer()).collect())
    }

    /// Rational coordinates of an ambient vector in this basis.
    pub fn rational_coords_of(&self, x: &[Rat]) -> Option<RationalVector> {
        linalg::row_coords(&self.basis(), x)
    }

    pub fn to_ambient(&self, y: &[Int]) -> RationalVector {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let s: Int = y.iter().zip(&self.rows).map(|(c, r)| c * &r[j]).sum();
                Rat::new(s, self.denominator.clone())
            })
            .collect()
    }

    pub fn to_ambient_rational(&self, y: &[Rat]) -> RationalVector {
        let b = self.basis();
        (0..self.dim())
            .map(|j| y.iter().zip(&b).map(|(c, r)| c * &r[j]).sum())
            .collect()
    }
}

fn to_lattice_coords(
    rays: &[RationalVector],
    lattice: &LatticeBasis,
) -> Result<Vec<LatticeVector>> {
    rays.iter()
        .map(|r| {
            if r.len() != lattice.dim() {
                return Err(Error::invalid("ray dimension does not match lattice"));
            }
            lattice
                .coords_of(r)
                .ok_or_else(|| Error::NotInLattice(fmt_vec(r)))
        })
        .collect()
}

fn check_square(rays: &[LatticeVector]) -> Result<usize> {
    let n = rays.len();
    if n == 0 || rays.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(
            "a simplicial full-dimensional cone needs exactly dim rays",
        ));
    }
    Ok(n)
}

/// Index of the sublattice spanned by `rays` (lattice coordinates).
pub fn cone_multiplicity_in_coords(rays: &[LatticeVector]) -> Result<Int> {
    check_square(rays)?;
    let d = det_int(rays).abs();
    if d.is_zero() {
        return Err(Error::DependentRays);
    }
    Ok(d)
}

/// Index of the sublattice spanned by `rays` (ambient coordinates) in `lattice`.
pub fn cone_multiplicity(rays: &[RationalVector], lattice: &LatticeBasis) -> Result<Int> {
    cone_multiplicity_in_coords(&to_lattice_coords(rays, lattice)?)
}

/// A nonzero lattice point `Σ t_i v_i` with every `t_i ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxPoint {
    /// Lattice coordinates.
    pub coords: LatticeVector,
    pub barycentric: RationalVector,
}

/// Box points of a simplicial cone given in lattice coordinates, enumerated
/// through the Smith form of the ray matrix: the finite group
/// `Z^n / span(rays)` is walked coset by coset. Sorted by coordinates.
pub fn box_points_in_coords(rays: &[LatticeVector]) -> Result<Vec<BoxPoint>> {
    let n = check_square(rays)?;
    // columns are the rays
    let r: IntMatrix = (0..n)
        .map(|i| rays.iter().map(|v| v[i].clone()).collect())
        .collect();
    if det_int(&r).is_zero() {
        return Err(Error::DependentRays);
    }
    let (d, u, _) = smith_normal_form(&r);
    let diag: Vec<Int> = (0..n).map(|i| d[i][i].clone()).collect();
    let u_inv = linalg::inverse(&linalg::to_rat_matrix(&u))
        .ok_or_else(|| Error::invariant("Smith transform not invertible"))?;
    let r_inv = linalg::inverse(&linalg::to_rat_matrix(&r))
        .ok_or_else(|| Error::invariant("ray matrix not invertible"))?;

    let mut out = Vec::new();
    let mut y: Vec<Int> = vec![Int::zero(); n];
    loop {
        if y.iter().any(|c| !c.is_zero()) {
            let p: Vec<Rat> = (0..n)
                .map(|i| (0..n).map(|j| &u_inv[i][j] * rat_int(&y[j])).sum())
                .collect();
            let t: Vec<Rat> = (0..n)
                .map(|i| frac(&(0..n).map(|j| &r_inv[i][j] * &p[j]).sum::<Rat>()))
                .collect();
            let coords: LatticeVector = (0..n)
                .map(|i| {
                    let s: Rat = (0..n).map(|j| rat_int(&r[i][j]) * &t[j]).sum();
                    s.to_integer()
                })
                .collect();
            out.push(BoxPoint {
                coords,
                barycentric: t,
            });
        }
        // odometer over the invariant factors
        let mut k = 0;
        loop {
            if k == n {
                out.sort_by(|a, b| a.coords.cmp(&b.coords));
                return Ok(out);
            }
            y[k] += 1;
            if y[k] < diag[k] {
                break;
            }
            y[k] = Int::zero();
            k += 1;
        }
    }
}

/// Box points of the cone spanned by `rays` (ambient coordinates) in `lattice`.
pub fn box_points(rays: &[RationalVector], lattice: &LatticeBasis) -> Result<Vec<BoxPoint>> {
    box_points_in_coords(&to_lattice_coords(rays, lattice)?)
}

/// A unimodular `U` with `U · v = e_last` for primitive `v`; the first `n-1`
/// rows of `U` then give coordinates on `N / Z v`.
pub(crate) fn complete_to_basis(v: &[Int]) -> Result<IntMatrix> {
    if !is_primitive(v) {
        return Err(Error::invalid(format!("{} is not primitive", fmt_vec(v))));
    }
    let col: IntMatrix = v.iter().map(|x| vec![x.clone()]).collect();
    let (h, u, _) = hermite_rows(&col);
    debug_assert!(h[h.len() - 1][0].is_one());
    Ok(u)
}
