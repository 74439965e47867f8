//! A small exact linear-programming solver: dense two-phase simplex over
//! `BigRational` with Bland's rule. Problems here have at most a few dozen
//! variables, so clarity wins over sparse bookkeeping.

use crate::num::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub cmp: Cmp,
    pub rhs: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

/// Maximize `objective · x` subject to the constraints. Variables flagged in
/// `free` are unrestricted in sign; all others are `≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub free: Vec<bool>,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            free: vec![false; n_vars],
            objective: vec![Rat::zero(); n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: split variables, then slacks/surplus, then artificials
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n_vars);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let m = self.constraints.len();
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rat> = Vec::with_capacity(m);
        let mut kinds: Vec<Cmp> = Vec::with_capacity(m);
        for c in &self.constraints {
            let mut row = vec![Rat::zero(); ncols];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (p, neg) = col_of[j];
                row[p] = a.clone();
                if let Some(q) = neg {
                    row[q] = -a.clone();
                }
            }
            let mut b = c.rhs.clone();
            let mut kind = c.cmp;
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
                kind = match kind {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
            rows.push(row);
            rhs.push(b);
            kinds.push(kind);
        }
        let n_slack = kinds.iter().filter(|k| **k != Cmp::Eq).count();
        let n_art = kinds.iter().filter(|k| **k != Cmp::Le).count();
        let total = ncols + n_slack + n_art;
        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut basis = vec![0usize; m];
        let mut s = ncols;
        let mut a = ncols + n_slack;
        let art_start = a;
        for i in 0..m {
            let mut row = rows[i].clone();
            row.resize(total, Rat::zero());
            match kinds[i] {
                Cmp::Le => {
                    row[s] = Rat::one();
                    basis[i] = s;
                    s += 1;
                }
                Cmp::Ge => {
                    row[s] = -Rat::one();
                    s += 1;
                    row[a] = Rat::one();
                    basis[i] = a;
                    a += 1;
                }
                Cmp::Eq => {
                    row[a] = Rat::one();
                    basis[i] = a;
                    a += 1;
                }
            }
            row.push(rhs[i].clone());
            tab.push(row);
        }

        let mut t = Tableau { tab, basis, total };
        if n_art > 0 {
            let mut phase1 = vec![Rat::zero(); total];
            for c in phase1.iter_mut().skip(art_start) {
                *c = -Rat::one();
            }
            if !t.optimize(&phase1, total) {
                unreachable!("phase one is bounded");
            }
            if t.value(&phase1).is_negative() {
                return LpOutcome::Infeasible;
            }
            t.drive_out_artificials(art_start);
        }
        let mut obj = vec![Rat::zero(); total];
        for (j, c) in self.objective.iter().enumerate() {
            let (p, neg) = col_of[j];
            obj[p] = c.clone();
            if let Some(q) = neg {
                obj[q] = -c.clone();
            }
        }
        if !t.optimize(&obj, art_start) {
            return LpOutcome::Unbounded;
        }
        let vals = t.column_values();
        let x: Vec<Rat> = col_of
            .iter()
            .map(|&(p, neg)| match neg {
                Some(q) => &vals[p] - &vals[q],
                None => vals[p].clone(),
            })
            .collect();
        let value = t.value(&obj);
        LpOutcome::Optimal { x, value }
    }
}

struct Tableau {
    tab: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    total: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.tab[i][self.total]
    }

    fn value(&self, obj: &[Rat]) -> Rat {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| &obj[b] * self.rhs(i))
            .sum()
    }

    fn column_values(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.total];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs(i).clone();
        }
        v
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.tab[r][c].recip();
        for x in self.tab[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.tab[r].clone();
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= p * &f;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximize over columns `< allowed`; false when unbounded.
    fn optimize(&mut self, obj: &[Rat], allowed: usize) -> bool {
        loop {
            // reduced cost c_j - c_B B^-1 A_j ; Bland: first improving column
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: Rat = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| &obj[b] * &self.tab[i][j])
                    .sum();
                (&obj[j] - z).is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.tab.len() {
                if self.tab[i][c].is_positive() {
                    let ratio = self.rhs(i) / &self.tab[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        for i in 0..self.tab.len() {
            if self.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !self.tab[i][j].is_zero()) {
                    self.pivot(i, c);
                }
                // otherwise the row is redundant and its artificial stays at 0
            }
        }
        for row in self.tab.iter_mut() {
            for x in row.iter_mut().take(self.total).skip(art_start) {
                *x = Rat::zero();
            }
        }
    }
}
