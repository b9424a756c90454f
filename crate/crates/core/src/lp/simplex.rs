//! Dense two-phase tableau simplex for small programs with free variables.
//!
//! Maximizes `c·x` subject to sparse equality rows `a·x = b` and inequality
//! rows `a·x <= b`, all variables free. Equalities are first eliminated by
//! Gauss-Jordan reduction with full pivoting, leaving `x = x0 + N z` and an
//! inequality-only program in `z`. Each free `z` is split as `z = z⁺ - z⁻`.
//! Entering and leaving choices follow Bland's rule, so the method terminates
//! and the result is a deterministic function of the input.

use serde::{Deserialize, Serialize};

/// Entries with magnitude at or below this are never pivoted on.
pub const PIVOT_TOL: f64 = 1e-9;
/// A reduced cost must exceed this to enter the basis.
pub const COST_TOL: f64 = 1e-10;
/// Phase-one optimum below `-FEAS_TOL * (1 + |b|_1)` means infeasible.
pub const FEAS_TOL: f64 = 1e-9;

/// Sparse row `sum coeffs[j].1 * x[coeffs[j].0]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl SparseRow {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized objective, sparse.
    pub objective: Vec<(usize, f64)>,
    pub equalities: Vec<SparseRow>,
    pub inequalities: Vec<SparseRow>,
    /// Typical magnitude of each variable; empty means all ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scale: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// The pivot budget ran out; the returned point is not certified.
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexResult {
    pub status: Status,
    pub objective: f64,
    pub x: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major, `cols + 1` entries per row; the last is the right-hand side.
    a: Vec<f64>,
    /// The initial tableau, used to refactor away accumulated rounding.
    orig: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    Limit,
}

/// Pivots between refactorizations.
const REFACTOR_EVERY: usize = 25;
/// Slack allowed on each right-hand side in the ratio test.
const RATIO_SLACK: f64 = 1e-12;

/// Gauss-Jordan step on a row-major `rows x w` block.
fn eliminate_on(a: &mut [f64], rows: usize, w: usize, pr: usize, pc: usize) {
    let inv = 1.0 / a[pr * w + pc];
    for v in &mut a[pr * w..(pr + 1) * w] {
        *v *= inv;
    }
    a[pr * w + pc] = 1.0;
    let pivot_row: Vec<f64> = a[pr * w..(pr + 1) * w].to_vec();
    let nz: Vec<usize> = (0..w).filter(|&c| pivot_row[c] != 0.0).collect();
    for r in (0..rows).filter(|&r| r != pr) {
        let factor = a[r * w + pc];
        if factor == 0.0 {
            continue;
        }
        let row = &mut a[r * w..(r + 1) * w];
        for &c in &nz {
            row[c] -= factor * pivot_row[c];
        }
        row[pc] = 0.0;
    }
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.a[r * (self.cols + 1) + self.cols]
    }

    /// Reduced costs of `c_full`; the last entry is the negated objective.
    fn reduced_costs(&self, c_full: &[f64]) -> Vec<f64> {
        let w = self.cols + 1;
        let mut cost = c_full.to_vec();
        for r in 0..self.rows {
            let cb = c_full[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    cost[c] -= cb * self.at(r, c);
                }
            }
        }
        for &b in &self.basis {
            cost[b] = 0.0;
        }
        cost
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        eliminate_on(&mut self.a, self.rows, self.cols + 1, pr, pc);
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Rebuilds the tableau for the current basis from the initial data, with
    /// partial pivoting. Keeps the old tableau if the basis looks singular.
    fn refactor(&mut self) {
        let w = self.cols + 1;
        let mut fresh = self.orig.clone();
        let mut assigned = vec![false; self.rows];
        let mut new_basis = vec![0; self.rows];
        for &bc in &self.basis {
            let Some(r) = (0..self.rows)
                .filter(|&r| !assigned[r])
                .max_by(|&x, &y| fresh[x * w + bc].abs().total_cmp(&fresh[y * w + bc].abs()))
            else {
                return;
            };
            if fresh[r * w + bc].abs() < 1e-12 {
                return;
            }
            eliminate_on(&mut fresh, self.rows, w, r, bc);
            assigned[r] = true;
            new_basis[r] = bc;
        }
        self.a = fresh;
        self.basis = new_basis;
    }

    fn drop_row(&mut self, r: usize) {
        let w = self.cols + 1;
        self.a.drain(r * w..(r + 1) * w);
        self.orig.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.rows -= 1;
    }

    /// Primal simplex maximizing `c_full` over columns allowed by `allowed`.
    /// Bland's entering rule; the leaving row is the largest pivot among rows
    /// whose ratio is within [`RATIO_SLACK`] of the minimum.
    fn run(&mut self, c_full: &[f64], allowed: &[bool], budget: usize) -> Outcome {
        let mut since = 0;
        let mut cost = self.reduced_costs(c_full);
        loop {
            if self.pivots >= budget {
                return Outcome::Limit;
            }
            if since >= REFACTOR_EVERY {
                self.refactor();
                cost = self.reduced_costs(c_full);
                since = 0;
            }
            let Some(pc) = (0..self.cols).find(|&c| allowed[c] && cost[c] > COST_TOL) else {
                if since == 0 {
                    return Outcome::Optimal;
                }
                since = REFACTOR_EVERY;
                continue;
            };
            let candidates: Vec<usize> = (0..self.rows).filter(|&r| self.at(r, pc) > PIVOT_TOL).collect();
            let Some(theta) = candidates
                .iter()
                .map(|&r| (self.rhs(r).max(0.0) + RATIO_SLACK) / self.at(r, pc))
                .reduce(f64::min)
            else {
                if since == 0 {
                    return Outcome::Unbounded;
                }
                since = REFACTOR_EVERY;
                continue;
            };
            let pr = candidates
                .into_iter()
                .filter(|&r| self.rhs(r).max(0.0) / self.at(r, pc) <= theta)
                .max_by(|&x, &y| {
                    self.at(x, pc)
                        .total_cmp(&self.at(y, pc))
                        .then(self.basis[y].cmp(&self.basis[x]))
                })
                .expect("the minimizing row qualifies");
            self.pivot(pr, pc);
            let w = self.cols + 1;
            for r in 0..self.rows {
                let v = &mut self.a[r * w + self.cols];
                if *v < 0.0 && *v > -RATIO_SLACK {
                    *v = 0.0;
                }
            }
            cost = self.reduced_costs(c_full);
            since += 1;
        }
    }
}

/// Entries at or below this (relative to the row scale) end elimination.
pub const ELIM_TOL: f64 = 1e-13;

/// `x = x0 + sum_q basis[j][q] z_q`, with `z` the scaled free columns.
struct Reduction {
    x0: Vec<f64>,
    /// Row-major `num_vars x free`.
    basis: Vec<f64>,
    free: usize,
}

impl Reduction {
    fn lift(&self, z: &[f64]) -> Vec<f64> {
        self.x0
            .iter()
            .enumerate()
            .map(|(j, &x)| x + (0..self.free).map(|q| self.basis[j * self.free + q] * z[q]).sum::<f64>())
            .collect()
    }
}

/// Parametrizes the solution set of the equalities, or `None` if it is empty.
/// Works on `u = x / scale`, so large-scale columns are pivoted out first.
fn eliminate(lp: &LinearProgram) -> Option<Reduction> {
    let n = lp.num_vars;
    let sc = |j: usize| lp.scale.get(j).copied().filter(|s| *s > 0.0).unwrap_or(1.0);
    let m = lp.equalities.len();
    let w = n + 1;
    let mut a = vec![0.0; m * w];
    for (r, row) in lp.equalities.iter().enumerate() {
        for &(j, v) in &row.coeffs {
            assert!(j < n, "variable index {j} out of range");
            a[r * w + j] += v * sc(j);
        }
        a[r * w + n] = row.rhs;
    }
    let scale = a.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut row_done = vec![false; m];
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for r in (0..m).filter(|&r| !row_done[r]) {
            for c in (0..n).filter(|&c| pivot_of_col[c].is_none()) {
                let v = a[r * w + c].abs();
                if v > ELIM_TOL * scale && best.is_none_or(|(_, _, b)| v > b) {
                    best = Some((r, c, v));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let inv = 1.0 / a[pr * w + pc];
        for v in &mut a[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        a[pr * w + pc] = 1.0;
        let prow = a[pr * w..(pr + 1) * w].to_vec();
        for r in (0..m).filter(|&r| r != pr) {
            let f = a[r * w + pc];
            if f != 0.0 {
                for c in 0..w {
                    a[r * w + c] -= f * prow[c];
                }
                a[r * w + pc] = 0.0;
            }
        }
        row_done[pr] = true;
        pivot_of_col[pc] = Some(pr);
    }
    let b_scale = lp.equalities.iter().fold(1.0f64, |s, r| s.max(r.rhs.abs()));
    if (0..m).any(|r| !row_done[r] && a[r * w + n].abs() > FEAS_TOL * b_scale) {
        return None;
    }
    let free_cols: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
    let free = free_cols.len();
    let mut x0 = vec![0.0; n];
    let mut basis = vec![0.0; n * free];
    for j in 0..n {
        match pivot_of_col[j] {
            Some(r) => {
                x0[j] = sc(j) * a[r * w + n];
                for (q, &c) in free_cols.iter().enumerate() {
                    basis[j * free + q] = -sc(j) * a[r * w + c];
                }
            }
            None => {
                let q = free_cols.binary_search(&j).unwrap();
                basis[j * free + q] = sc(j);
            }
        }
    }
    Some(Reduction { x0, basis, free })
}

/// Solves `lp`. Never panics on well-formed input; malformed variable indices
/// are a caller bug and do panic.
pub fn solve(lp: &LinearProgram) -> SimplexResult {
    let Some(red) = eliminate(lp) else {
        return SimplexResult {
            status: Status::Infeasible,
            objective: 0.0,
            x: vec![0.0; lp.num_vars],
            pivots: 0,
        };
    };
    let d = red.free;
    let project = |coeffs: &[(usize, f64)]| -> (Vec<(usize, f64)>, f64) {
        let mut g = vec![0.0; d];
        let mut shift = 0.0;
        for &(j, v) in coeffs {
            shift += v * red.x0[j];
            for q in 0..d {
                g[q] += v * red.basis[j * d + q];
            }
        }
        (g.into_iter().enumerate().filter(|&(_, v)| v.abs() > 1e-15).collect(), shift)
    };
    let reduced = LinearProgram {
        num_vars: d,
        objective: {
            let c = project(&lp.objective).0;
            let norm = c.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
            c.into_iter().map(|(q, v)| (q, v / norm)).collect()
        },
        equalities: Vec::new(),
        inequalities: lp
            .inequalities
            .iter()
            .map(|row| {
                let (coeffs, shift) = project(&row.coeffs);
                let norm = coeffs.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
                let norm = if norm > 0.0 { norm } else { 1.0 };
                SparseRow {
                    coeffs: coeffs.into_iter().map(|(q, v)| (q, v / norm)).collect(),
                    rhs: (row.rhs - shift) / norm,
                }
            })
            .collect(),
        scale: Vec::new(),
    };
    let inner = solve_tableau(&reduced);
    let x = red.lift(&inner.x);
    let objective = lp.objective.iter().map(|&(j, v)| v * x[j]).sum();
    SimplexResult {
        status: inner.status,
        objective,
        x,
        pivots: inner.pivots,
    }
}

/// Inequality-only programs: `max c·z` subject to `a·z <= b`, `z` free.
fn solve_tableau(lp: &LinearProgram) -> SimplexResult {
    assert!(lp.equalities.is_empty(), "equalities are eliminated first");
    let n = lp.num_vars;
    let rows = lp.inequalities.len();
    let slack0 = 2 * n;
    let art0 = slack0 + rows;

    // Rows are sign-normalized to a nonnegative right-hand side; a row whose
    // slack then enters with coefficient -1 starts on an artificial.
    let needs_art: Vec<bool> = lp.inequalities.iter().map(|row| row.rhs < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let cols = art0 + n_art;
    let w = cols + 1;
    let mut a = vec![0.0; rows * w];
    let mut basis = vec![0; rows];
    let mut next_art = art0;
    for (r, row) in lp.inequalities.iter().enumerate() {
        let s = if needs_art[r] { -1.0 } else { 1.0 };
        let base = r * w;
        for &(j, v) in &row.coeffs {
            assert!(j < n, "variable index {j} out of range");
            a[base + 2 * j] += s * v;
            a[base + 2 * j + 1] -= s * v;
        }
        a[base + cols] = s * row.rhs;
        a[base + slack0 + r] = s;
        if needs_art[r] {
            a[base + next_art] = 1.0;
            basis[r] = next_art;
            next_art += 1;
        } else {
            basis[r] = slack0 + r;
        }
    }
    let mut t = Tableau {
        rows,
        cols,
        orig: a.clone(),
        a,
        basis,
        pivots: 0,
    };

    let budget = 50 * (rows + cols) + 10_000;
    let b_norm: f64 = (0..rows).map(|r| t.rhs(r)).sum();

    if n_art > 0 {
        let mut phase_one = vec![0.0; w];
        for c in art0..cols {
            phase_one[c] = -1.0;
        }
        if let Outcome::Limit = t.run(&phase_one, &vec![true; cols], budget) {
            return finish(n, lp, &t, Status::IterationLimit);
        }
        let infeasibility: f64 = (0..t.rows).filter(|&r| t.basis[r] >= art0).map(|r| t.rhs(r)).sum();
        if infeasibility > FEAS_TOL * (1.0 + b_norm) {
            return finish(n, lp, &t, Status::Infeasible);
        }
        // Drive zero-level artificials out of the basis; rows with no
        // non-artificial entry are redundant and dropped.
        let mut r = 0;
        while r < t.rows {
            if t.basis[r] >= art0 {
                let entering = (0..art0)
                    .filter(|&c| t.at(r, c).abs() > 1e-9)
                    .max_by(|&x, &y| t.at(r, x).abs().total_cmp(&t.at(r, y).abs()));
                match entering {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.drop_row(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        t.refactor();
    }

    let mut c_full = vec![0.0; w];
    for &(j, v) in &lp.objective {
        c_full[2 * j] += v;
        c_full[2 * j + 1] -= v;
    }
    let allowed: Vec<bool> = (0..cols).map(|c| c < art0).collect();
    let status = match t.run(&c_full, &allowed, budget) {
        Outcome::Optimal => Status::Optimal,
        Outcome::Unbounded => Status::Unbounded,
        Outcome::Limit => Status::IterationLimit,
    };
    finish(n, lp, &t, status)
}

fn finish(n: usize, lp: &LinearProgram, t: &Tableau, status: Status) -> SimplexResult {
    let mut split = vec![0.0; 2 * n];
    for r in 0..t.rows {
        let b = t.basis[r];
        if b < 2 * n {
            split[b] = t.rhs(r);
        }
    }
    let x: Vec<f64> = (0..n).map(|j| split[2 * j] - split[2 * j + 1]).collect();
    let objective = lp.objective.iter().map(|&(j, v)| v * x[j]).sum();
    SimplexResult {
        status,
        objective,
        x,
        pivots: t.pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[(usize, f64)], rhs: f64) -> SparseRow {
        SparseRow {
            coeffs: coeffs.to_vec(),
            rhs,
        }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0 -> 36 at (2, 6).
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, 3.0), (1, 5.0)],
            equalities: vec![],
            inequalities: vec![
                row(&[(0, 1.0)], 4.0),
                row(&[(1, 2.0)], 12.0),
                row(&[(0, 3.0), (1, 2.0)], 18.0),
                row(&[(0, -1.0)], 0.0),
                row(&[(1, -1.0)], 0.0),
            ],
            scale: vec![],
        };
        let s = solve(&lp);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -x - y with x - y = -3, x >= -5, y <= 10 -> x = -5, y = -2.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, -1.0), (1, -1.0)],
            equalities: vec![row(&[(0, 1.0), (1, -1.0)], -3.0)],
            inequalities: vec![row(&[(0, -1.0)], 5.0), row(&[(1, 1.0)], 10.0)],
            scale: vec![],
        };
        let s = solve(&lp);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 7.0).abs() < 1e-12);
        assert!((s.x[0] + 5.0).abs() < 1e-12 && (s.x[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            num_vars: 1,
            objective: vec![(0, 1.0)],
            equalities: vec![row(&[(0, 1.0)], 1.0), row(&[(0, 1.0)], 2.0)],
            inequalities: vec![],
            scale: vec![],
        };
        assert_eq!(solve(&infeasible).status, Status::Infeasible);
        let unbounded = LinearProgram {
            num_vars: 2,
            objective: vec![(0, 1.0)],
            equalities: vec![],
            inequalities: vec![row(&[(1, 1.0)], 1.0)],
            scale: vec![],
        };
        assert_eq!(solve(&unbounded).status, Status::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, 1.0), (1, 1.0)],
            equalities: vec![
                row(&[(0, 1.0), (1, 1.0)], 2.0),
                row(&[(0, 2.0), (1, 2.0)], 4.0),
            ],
            inequalities: vec![row(&[(0, 1.0)], 1.5)],
            scale: vec![],
        };
        let s = solve(&lp);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_program_terminates() {
        // Many tied zero ratios; Bland's rule must not cycle.
        let n = 6;
        let mut ineq = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    ineq.push(row(&[(i, 1.0), (j, -1.0)], 0.0));
                }
            }
            ineq.push(row(&[(i, 1.0)], 1.0));
        }
        let lp = LinearProgram {
            num_vars: n,
            objective: (0..n).map(|i| (i, 1.0)).collect(),
            equalities: vec![],
            inequalities: ineq,
            scale: vec![],
        };
        let s = solve(&lp);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - n as f64).abs() < 1e-10);
        assert_eq!(solve(&lp), s);
    }
}
