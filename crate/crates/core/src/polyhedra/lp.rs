//! Dense exact simplex method over `BigRational` with Bland's rule.
//!
//! Solves `maximize c·x subject to A x <= b` with `x` free. Sizes here are
//! tiny (a few dozen rows, d <= 6 columns), so a dense tableau is fine.

use num_traits::{Signed, Zero};

use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    width: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [Rat]) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &piv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= p * &f;
                }
            }
        }
        if !reduced[c].is_zero() {
            let f = reduced[c].clone();
            for (v, p) in reduced.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= p * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row `c_B B^-1 A - c` (last entry holds the objective value).
    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut r: Vec<Rat> =
            (0..=self.width).map(|j| if j < self.width { -cost[j].clone() } else { Rat::zero() }).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in r.iter_mut().enumerate() {
                let t = &self.rows[i][j];
                if !t.is_zero() {
                    *v += t * cb;
                }
            }
        }
        r
    }

    fn optimize(&mut self, cost: &[Rat], allowed: usize) -> (Phase, Vec<Rat>) {
        let mut reduced = self.reduced_costs(cost);
        loop {
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_negative()) else {
                return (Phase::Optimal, reduced);
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return (Phase::Unbounded, reduced);
            };
            self.pivot(r, enter, &mut reduced);
        }
    }
}

/// Maximizes `c·x` over `{x : a x <= b}`.
pub fn maximize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    solve(a, b, Some(c))
}

/// Exact feasibility of `{x : a x <= b}`.
pub fn feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    solve(a, b, None).is_feasible()
}

/// Some point of `{x : a x <= b}`, if any.
pub fn feasible_point(a: &[Vec<Rat>], b: &[Rat], n: usize) -> Option<Vec<Rat>> {
    let zero = vec![Rat::zero(); n];
    match solve_with_dim(a, b, Some(&zero), n) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

fn solve(a: &[Vec<Rat>], b: &[Rat], c: Option<&[Rat]>) -> LpOutcome {
    let n = c.map(|c| c.len()).or_else(|| a.first().map(|r| r.len())).unwrap_or(0);
    solve_with_dim(a, b, c, n)
}

fn solve_with_dim(a: &[Vec<Rat>], b: &[Rat], c: Option<&[Rat]>, n: usize) -> LpOutcome {
    let m = a.len();
    if m == 0 {
        return match c {
            Some(c) if c.iter().any(|x| !x.is_zero()) => LpOutcome::Unbounded,
            _ => LpOutcome::Optimal { value: Rat::zero(), point: vec![Rat::zero(); n] },
        };
    }
    // columns: x+ (n), x- (n), slack (m), artificial (one per negative rhs)
    let neg_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let n_struct = 2 * n + m;
    let width = n_struct + neg_rows.len();
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let mut row = vec![Rat::zero(); width + 1];
        let sign_neg = b[i].is_negative();
        for j in 0..n {
            let v = &a[i][j];
            if v.is_zero() {
                continue;
            }
            row[j] = if sign_neg { -v.clone() } else { v.clone() };
            row[n + j] = -row[j].clone();
        }
        row[2 * n + i] = if sign_neg { Rat::from_integer((-1).into()) } else { Rat::from_integer(1.into()) };
        row[width] = b[i].abs();
        if sign_neg {
            let col = n_struct + art;
            row[col] = Rat::from_integer(1.into());
            basis.push(col);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, width };

    if !neg_rows.is_empty() {
        let mut cost = vec![Rat::zero(); width];
        for c in cost.iter_mut().skip(n_struct) {
            *c = Rat::from_integer((-1).into());
        }
        let (_, reduced) = t.optimize(&cost, width);
        if reduced[width].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials (at level zero) out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n_struct {
                let mut dummy = vec![Rat::zero(); width + 1];
                if let Some(j) = (0..n_struct).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j, &mut dummy);
                    i += 1;
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![Rat::zero(); width];
    if let Some(c) = c {
        for j in 0..n {
            cost[j] = c[j].clone();
            cost[n + j] = -c[j].clone();
        }
    }
    let (phase, reduced) = t.optimize(&cost, n_struct);
    if let Phase::Unbounded = phase {
        return LpOutcome::Unbounded;
    }
    let mut vals = vec![Rat::zero(); width];
    for (i, &bv) in t.basis.iter().enumerate() {
        vals[bv] = t.rhs(i).clone();
    }
    let point: Vec<Rat> = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    LpOutcome::Optimal { value: reduced[width].clone(), point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_i};

    fn unit_square() -> (Vec<Vec<Rat>>, Vec<Rat>) {
        (vec![vec_i(&[1, 0]), vec_i(&[-1, 0]), vec_i(&[0, 1]), vec_i(&[0, -1])], vec_i(&[1, 0, 1, 0]))
    }

    #[test]
    fn optimum_on_square() {
        let (a, b) = unit_square();
        match maximize(&a, &b, &vec_i(&[1, 2])) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(3));
                assert_eq!(point, vec_i(&[1, 1]));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec_i(&[1]), vec_i(&[-1])];
        assert!(!feasible(&a, &vec_i(&[0, -1])));
        assert!(feasible(&a, &vec_i(&[1, 0])));
        let a = vec![vec_i(&[1, 0])];
        assert_eq!(maximize(&a, &vec_i(&[1]), &vec_i(&[0, 1])), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // x >= 1/2, y >= 1/3, x + y <= 1: minimize x + y -> 5/6
        let a = vec![vec_i(&[-1, 0]), vec_i(&[0, -1]), vec_i(&[1, 1])];
        let b = vec![frac(-1, 2), frac(-1, 3), int(1)];
        match maximize(&a, &b, &vec_i(&[-1, -1])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, frac(-5, 6)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn degenerate_equalities() {
        // x = 1 written twice plus y in [0, 2]
        let a = vec![vec_i(&[1, 0]), vec_i(&[-1, 0]), vec_i(&[1, 0]), vec_i(&[-1, 0]), vec_i(&[0, 1]), vec_i(&[0, -1])];
        let b = vec_i(&[1, -1, 1, -1, 2, 0]);
        let p = feasible_point(&a, &b, 2).unwrap();
        assert_eq!(p[0], int(1));
    }
}
