//! Dense exact simplex over `A x = b, x >= 0` with Bland's rule.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Phase1 {
    /// Farkas vector `y` with `y^T A >= 0` and `y^T b < 0`.
    Infeasible(Vec<Rational>),
    Feasible(Tableau),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Optimum {
    Bounded { value: Rational, x: Vec<Rational> },
    Unbounded,
}

/// A feasible basis over the original columns.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, k: usize) -> &Rational {
        &self.rows[k][self.rows[k].len() - 1]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `objective . x` over columns `0..allowed`.
    fn run(&mut self, objective: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = objective[j].clone();
                for (k, &b) in self.basis.iter().enumerate() {
                    if !objective[b].is_zero() && !self.rows[k][j].is_zero() {
                        d -= &objective[b] * &self.rows[k][j];
                    }
                }
                d.is_positive()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for k in 0..self.rows.len() {
                if !self.rows[k][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(k) / &self.rows[k][j];
                let better = match &best {
                    None => true,
                    Some((bk, br)) => {
                        ratio < *br || (ratio == *br && self.basis[k] < self.basis[*bk])
                    }
                };
                if better {
                    best = Some((k, ratio));
                }
            }
            match best {
                Some((k, _)) => self.pivot(k, j),
                None => return false,
            }
        }
    }

    fn value(&self, objective: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, &b)| {
                acc + &objective[b] * self.rhs(k)
            })
    }

    pub(crate) fn solution(&self) -> Vec<Rational> {
        let mut x = alloc::vec![Rational::zero(); self.cols];
        for (k, &b) in self.basis.iter().enumerate() {
            if b < self.cols {
                x[b] = self.rhs(k).clone();
            }
        }
        x
    }

    /// Maximizes `objective . x` starting from this basis.
    pub(crate) fn maximize(&self, objective: &[Rational]) -> Optimum {
        let mut t = self.clone();
        let mut obj = objective.to_vec();
        obj.resize(
            t.rows.first().map_or(t.cols, |r| r.len() - 1),
            Rational::zero(),
        );
        if t.run(&obj, t.cols) {
            Optimum::Bounded {
                value: t.value(&obj),
                x: t.solution(),
            }
        } else {
            Optimum::Unbounded
        }
    }
}

/// Finds a basic feasible solution of `A x = b, x >= 0`.
pub(crate) fn phase_one(a: &[Vec<Rational>], b: &[Rational]) -> Phase1 {
    let m = b.len();
    let n = a.first().map_or(0, Vec::len);
    let mut signs = alloc::vec![Rational::one(); m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        if flip {
            signs[i] = -Rational::one();
        }
        let mut row = Vec::with_capacity(n + m + 1);
        for v in &a[i] {
            row.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        cols: n,
    };
    let mut objective = alloc::vec![Rational::zero(); n + m];
    for c in objective.iter_mut().skip(n) {
        *c = -Rational::one();
    }
    t.run(&objective, n + m);
    if t.value(&objective).is_negative() {
        let y = (0..m)
            .map(|i| {
                let dual = t
                    .basis
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, &bv)| {
                        acc + &objective[bv] * &t.rows[k][n + i]
                    });
                dual * &signs[i]
            })
            .collect();
        return Phase1::Infeasible(y);
    }
    let mut k = 0;
    while k < t.rows.len() {
        if t.basis[k] >= n {
            match (0..n).find(|&j| !t.rows[k][j].is_zero()) {
                Some(j) => t.pivot(k, j),
                None => {
                    t.rows.remove(k);
                    t.basis.remove(k);
                    continue;
                }
            }
        }
        k += 1;
    }
    for row in t.rows.iter_mut() {
        row.drain(n..n + m);
    }
    Phase1::Feasible(t)
}
