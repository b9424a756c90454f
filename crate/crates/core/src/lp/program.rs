//! The program over discrete derivatives of a noisy mutual information.
//!
//! Variables are `x^R_{S,i}` for `i ∈ S ⊆ [k]`, `S ≠ ∅` and `R ⊆ S`; general
//! `R` is identified with `R ∩ S`. The rows are
//!
//! 1. `x^∅_{S,i} = y_{S,i}`;
//! 2. for every `R ⊆ [k]` and ordering `σ`, the path sum
//!    `sum_j x^{R ∩ P_j}_{P_j, σ(j)}`, `P_j = {σ(1..j)}`, equals the path sum of
//!    the identity ordering;
//! 3. `x^R_{S,i} <= λ x^{R-i}_{S,i}` for `i ∈ R`;
//!
//! and the objective is the identity path sum at `R = [k]`.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, domain, Error, Result};
use crate::info::{mutual_info_sets, y_boundary, BoundaryData};
use crate::lp::simplex::{self, LinearProgram, SparseRow, Status};
use crate::subsets::{expand, permutations, SubsetMask};
use crate::symmetric::{symmetric_value, SymmetricData, SymmetricSolution};

/// Largest `k` for which the program is built.
pub const MAX_BUILD_K: usize = 5;
/// Largest `k` solved without an explicit override.
pub const MAX_SOLVE_K: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarKey {
    #[serde(rename = "R")]
    pub r: SubsetMask,
    #[serde(rename = "S")]
    pub s: SubsetMask,
    pub i: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Boundary,
    PathSum,
    Contraction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpRow {
    pub kind: RowKind,
    pub row: SparseRow,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpProblem {
    pub k: usize,
    pub lambda: f64,
    pub boundary: BoundaryData,
    pub vars: Vec<VarKey>,
    index: Vec<usize>,
    pub objective: Vec<(usize, f64)>,
    pub equalities: Vec<LpRow>,
    pub inequalities: Vec<LpRow>,
}

/// `sum_s C(k,s) s 2^s`.
pub fn variable_count(k: usize) -> usize {
    (1..=k)
        .map(|s| crate::scalar::binomial_u64(k as u64, s as u64) as usize * (s << s))
        .sum()
}

impl LpProblem {
    #[inline]
    fn slot(k: usize, key: VarKey) -> usize {
        ((key.s.0 as usize * k) + key.i) << k | key.r.0 as usize
    }

    /// Index of `x^{R ∩ S}_{S,i}`.
    pub fn var(&self, r: SubsetMask, s: SubsetMask, i: usize) -> usize {
        let key = VarKey { r: r & s, s, i };
        let v = self.index[Self::slot(self.k, key)];
        assert!(v != usize::MAX, "no variable for {key:?}");
        v
    }

    /// Identity path sum `sum_j x^{R ∩ [j]}_{[j], j}` as sparse coefficients.
    fn identity_path(&self, r: SubsetMask) -> Vec<(usize, f64)> {
        let order: Vec<usize> = (0..self.k).collect();
        self.path(r, &order)
    }

    fn path(&self, r: SubsetMask, order: &[usize]) -> Vec<(usize, f64)> {
        let mut prefix = SubsetMask::EMPTY;
        order
            .iter()
            .map(|&i| {
                prefix = prefix.with(i);
                (self.var(r, prefix, i), 1.0)
            })
            .collect()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(j, c)| c * x[j]).sum()
    }

    /// Largest violation over equality rows (absolute) and inequality rows
    /// (positive part).
    pub fn residuals(&self, x: &[f64]) -> Residuals {
        let eq = self
            .equalities
            .iter()
            .map(|r| (r.row.eval(x) - r.row.rhs).abs())
            .fold(0.0, f64::max);
        let le = self
            .inequalities
            .iter()
            .map(|r| r.row.eval(x) - r.row.rhs)
            .fold(0.0, f64::max);
        Residuals {
            equality: eq,
            inequality: le,
        }
    }

    pub fn as_linear_program(&self) -> LinearProgram {
        LinearProgram {
            num_vars: self.vars.len(),
            objective: self.objective.clone(),
            equalities: self.equalities.iter().map(|r| r.row.clone()).collect(),
            inequalities: self.inequalities.iter().map(|r| r.row.clone()).collect(),
            scale: self
                .vars
                .iter()
                .map(|v| self.lambda.max(SCALE_FLOOR).powi(v.r.len() as i32))
                .collect(),
        }
    }

    /// Plain-text standard form: objective, equality rows, inequality rows and
    /// the variable map.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let term = |out: &mut String, coeffs: &[(usize, f64)]| {
            for &(j, c) in coeffs {
                let _ = write!(out, " {c:+} x{j}");
            }
        };
        let _ = writeln!(out, "# k = {} lambda = {}", self.k, self.lambda);
        let _ = writeln!(out, "maximize");
        term(&mut out, &self.objective);
        let _ = writeln!(out);
        let _ = writeln!(out, "equalities {}", self.equalities.len());
        for (n, r) in self.equalities.iter().enumerate() {
            let _ = write!(out, "e{n}:");
            term(&mut out, &r.row.coeffs);
            let _ = writeln!(out, " = {}", r.row.rhs);
        }
        let _ = writeln!(out, "inequalities {}", self.inequalities.len());
        for (n, r) in self.inequalities.iter().enumerate() {
            let _ = write!(out, "l{n}:");
            term(&mut out, &r.row.coeffs);
            let _ = writeln!(out, " <= {}", r.row.rhs);
        }
        let _ = writeln!(out, "variables {} free", self.vars.len());
        for (j, v) in self.vars.iter().enumerate() {
            let _ = writeln!(out, "x{j} R={:?} S={:?} i={}", v.r, v.s, v.i);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub equality: f64,
    pub inequality: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.equality.max(self.inequality)
    }
}

/// Merged, zero-free and sign-normalized so that a row and its negation coincide.
fn canonical(coeffs: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut merged = canonical_sum(coeffs);
    merged.retain(|&(_, v)| v != 0.0);
    if merged.first().is_some_and(|&(_, v)| v < 0.0) {
        for t in &mut merged {
            t.1 = -t.1;
        }
    }
    merged
}

/// Smallest per-layer factor used when scaling variables by `λ^{|R|}`.
const SCALE_FLOOR: f64 = 1e-6;

/// Builds the program for boundary data over `[k]`, `k <= MAX_BUILD_K`.
pub fn build_lp(boundary: &BoundaryData, lambda: f64) -> Result<LpProblem> {
    let k = boundary.k();
    if k > MAX_BUILD_K {
        return Err(Error::Size(format!("program size guard: k = {k} > {MAX_BUILD_K}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain(format!("lambda = {lambda} is outside [0, 1]")));
    }
    let mut vars = Vec::with_capacity(variable_count(k));
    let mut index = vec![usize::MAX; (k << k) << k];
    for s in 1u32..1 << k {
        let s = SubsetMask(s);
        for i in s.iter() {
            for r in s.submasks() {
                let key = VarKey { r, s, i };
                index[LpProblem::slot(k, key)] = vars.len();
                vars.push(key);
            }
        }
    }
    let mut p = LpProblem {
        k,
        lambda,
        boundary: boundary.clone(),
        vars,
        index,
        objective: Vec::new(),
        equalities: Vec::new(),
        inequalities: Vec::new(),
    };

    for (s, i) in boundary.pairs() {
        p.equalities.push(LpRow {
            kind: RowKind::Boundary,
            row: SparseRow {
                coeffs: vec![(p.var(SubsetMask::EMPTY, s, i), 1.0)],
                rhs: boundary.get(s, i),
            },
        });
    }

    let mut seen: HashSet<Vec<(usize, i64)>> = HashSet::new();
    for r in 0u32..1 << k {
        let r = SubsetMask(r);
        let id = p.identity_path(r);
        for order in permutations(k).skip(1) {
            let mut coeffs = p.path(r, &order);
            coeffs.extend(id.iter().map(|&(j, c)| (j, -c)));
            let coeffs = canonical(coeffs);
            if coeffs.is_empty() {
                continue;
            }
            let key: Vec<(usize, i64)> = coeffs.iter().map(|&(j, c)| (j, c as i64)).collect();
            if seen.insert(key) {
                p.equalities.push(LpRow {
                    kind: RowKind::PathSum,
                    row: SparseRow { coeffs, rhs: 0.0 },
                });
            }
        }
    }

    for j in 0..p.vars.len() {
        let VarKey { r, s, i } = p.vars[j];
        if r.contains(i) {
            p.inequalities.push(LpRow {
                kind: RowKind::Contraction,
                row: SparseRow {
                    coeffs: vec![(j, 1.0), (p.var(r.without(i), s, i), -lambda)],
                    rhs: 0.0,
                },
            });
        }
    }

    p.objective = p.identity_path(SubsetMask::full(k));
    Ok(p)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: Status,
    pub objective: f64,
    pub assignment: Vec<f64>,
    pub residuals: Residuals,
    pub pivots: usize,
}

/// Solves the program; `k > MAX_SOLVE_K` needs `allow_large`.
pub fn solve_lp_with(p: &LpProblem, allow_large: bool) -> Result<LpSolution> {
    if p.k > MAX_SOLVE_K && !allow_large {
        return Err(Error::Size(format!(
            "solving k = {} exceeds {MAX_SOLVE_K}; pass the override to proceed",
            p.k
        )));
    }
    let r = simplex::solve(&p.as_linear_program());
    let residuals = p.residuals(&r.x);
    Ok(LpSolution {
        status: r.status,
        objective: r.objective,
        assignment: r.x,
        residuals,
        pivots: r.pivots,
    })
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    solve_lp_with(p, false)
}

/// The assignment induced by a function, with `x^R_{S,i}` the boundary value
/// at `(S, i)` of `T_{ε_R} f`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionSolution {
    pub problem: LpProblem,
    pub assignment: Vec<f64>,
    pub objective: f64,
    /// `I_{T_{ε_A} f}(A, m)` computed directly.
    pub direct: f64,
    pub residuals: Residuals,
}

pub fn feasible_from_function(f: &CubeFunction, a: SubsetMask, m: usize, noise: NoiseParam) -> Result<FunctionSolution> {
    if a.len() > MAX_BUILD_K || a.is_empty() {
        return Err(argument(format!("|A| = {} must be in 1..={MAX_BUILD_K}", a.len())));
    }
    let boundary = y_boundary(f, a, m)?;
    let k = boundary.k();
    let problem = build_lp(&boundary, noise.lambda())?;
    let mut assignment = vec![0.0; problem.vars.len()];
    for r in 0u32..1 << k {
        let r = SubsetMask(r);
        let dirs = SubsetMask(expand(r.0 as usize, a) as u32);
        let noisy = y_boundary(&f.noise_directions(noise, dirs), a, m)?;
        for (j, key) in problem.vars.iter().enumerate() {
            if key.r == r {
                assignment[j] = noisy.get(key.s, key.i);
            }
        }
    }
    let objective = problem.objective_value(&assignment);
    let direct = mutual_info_sets(&f.noise_directions(noise, a), a, m)?;
    let residuals = problem.residuals(&assignment);
    Ok(FunctionSolution {
        problem,
        assignment,
        objective,
        direct,
        residuals,
    })
}

/// Feasible point `x^R_{S,i} = λ^{|R|} I(S) - λ^{|R|-[i∈R]} I(S-i)` for data
/// given as the gradient of a nonnegative set function `I`.
pub fn set_function_solution(p: &LpProblem, values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != 1 << p.k {
        return Err(argument("set function needs 2^k values"));
    }
    Ok(p.vars
        .iter()
        .map(|v| {
            let r = v.r.len() as i32;
            let r_minus = r - i32::from(v.r.contains(v.i));
            p.lambda.powi(r) * values[v.s.0 as usize] - p.lambda.powi(r_minus) * values[v.s.without(v.i).0 as usize]
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominanceReport {
    pub k: usize,
    pub lambda: f64,
    pub status: Status,
    pub lp_optimum: f64,
    pub symmetric_value: f64,
    /// `symmetric_value - lp_optimum`.
    pub margin: f64,
    pub residual: f64,
    pub pass: bool,
}

pub const DOMINANCE_TOL: f64 = 1e-7;

/// Solves the program and compares its optimum with the value of the
/// symmetric solution of the layer-averaged data.
pub fn check_symmetric_dominance(boundary: &BoundaryData, lambda: f64) -> Result<DominanceReport> {
    let p = build_lp(boundary, lambda)?;
    let sol = solve_lp(&p)?;
    let sym = symmetric_value(&SymmetricData::from_boundary(boundary, lambda)?)?;
    let margin = sym - sol.objective;
    Ok(DominanceReport {
        k: p.k,
        lambda,
        status: sol.status,
        lp_optimum: sol.objective,
        symmetric_value: sym,
        margin,
        residual: sol.residuals.max(),
        pass: sol.status == Status::Optimal && margin >= -DOMINANCE_TOL && sol.residuals.max() <= 1e-9,
    })
}

/// For each `r = 0..=k`: the maximum over the program of the average identity
/// path sum over `|R| = r`, and the symmetric value of that average.
pub fn layer_dominance(boundary: &BoundaryData, lambda: f64) -> Result<Vec<(f64, f64)>> {
    let mut p = build_lp(boundary, lambda)?;
    let k = p.k;
    let sym = SymmetricSolution::new(SymmetricData::from_boundary(boundary, lambda)?);
    (0..=k)
        .map(|r| {
            let layer: Vec<SubsetMask> = crate::subsets::fixed_size(k, r).collect();
            let w = 1.0 / layer.len() as f64;
            let coeffs = layer
                .iter()
                .flat_map(|&set| p.identity_path(set))
                .map(|(j, c)| (j, c * w))
                .collect();
            p.objective = canonical_sum(coeffs);
            let sol = solve_lp(&p)?;
            if sol.status != Status::Optimal {
                return Err(Error::Consistency {
                    what: "layer program status",
                    lhs: r as f64,
                    rhs: f64::NAN,
                    residual: f64::NAN,
                });
            }
            Ok((sol.objective, sym.mu(k, r)?))
        })
        .collect()
}

fn canonical_sum(coeffs: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut c = coeffs;
    c.sort_by_key(|&(j, _)| j);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(c.len());
    for (j, v) in c {
        match merged.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => merged.push((j, v)),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_product, seeded_rng};
    use rand::Rng;

    fn consistent(k: usize, seed: u64) -> (BoundaryData, Vec<f64>) {
        let mut rng = seeded_rng(seed);
        let mut values = vec![0.0; 1 << k];
        for s in 1usize..1 << k {
            let best = SubsetMask(s as u32)
                .iter()
                .map(|j| values[s & !(1 << j)])
                .fold(0.0, f64::max);
            values[s] = best + rng.random::<f64>();
        }
        (BoundaryData::from_set_function(k, &values).unwrap(), values)
    }

    #[test]
    fn counts() {
        assert_eq!(variable_count(1), 2);
        assert_eq!(variable_count(2), 12);
        assert_eq!(variable_count(4), 216);
        assert_eq!(variable_count(5), 810);
        for k in 1..=4 {
            let p = build_lp(&BoundaryData::zeros(k).unwrap(), 0.5).unwrap();
            assert_eq!(p.vars.len(), variable_count(k));
        }
        assert!(build_lp(&BoundaryData::zeros(6).unwrap(), 0.5).is_err());
    }

    #[test]
    fn one_variable_program() {
        let mut b = BoundaryData::zeros(1).unwrap();
        b.set(SubsetMask(1), 0, 1.0).unwrap();
        let p = build_lp(&b, 0.25).unwrap();
        assert_eq!(p.inequalities.len(), 1);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_boundary_optimum() {
        for k in 1..=3 {
            let s = solve_lp(&build_lp(&BoundaryData::zeros(k).unwrap(), 0.4).unwrap()).unwrap();
            assert_eq!(s.status, Status::Optimal);
            assert!(s.objective.abs() < 1e-12);
        }
    }

    #[test]
    fn set_function_point_is_feasible() {
        for k in 1..=4 {
            let (b, values) = consistent(k, k as u64);
            let p = build_lp(&b, 0.3).unwrap();
            let x = set_function_solution(&p, &values).unwrap();
            assert!(p.residuals(&x).max() < 1e-12);
        }
    }

    #[test]
    fn random_dominance() {
        for k in 2..=3 {
            for seed in 0..5 {
                let (b, _) = consistent(k, 100 + seed);
                let r = check_symmetric_dominance(&b, 0.4).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn layers_dominated() {
        let (b, _) = consistent(3, 9);
        for (opt, sym) in layer_dominance(&b, 0.6).unwrap() {
            assert!(opt <= sym + 1e-7, "{opt} > {sym}");
        }
    }

    #[test]
    fn function_assignment_is_feasible() {
        let noise = NoiseParam::new(0.15).unwrap();
        for seed in 0..4 {
            let f = random_density(5, &mut seeded_rng(seed)).unwrap();
            let s = feasible_from_function(&f, SubsetMask(0b01101), 1, noise).unwrap();
            assert!(s.residuals.max() < 1e-9, "{:?}", s.residuals);
            assert!((s.objective - s.direct).abs() < 1e-9);
            let opt = solve_lp(&s.problem).unwrap();
            assert!(s.objective <= opt.objective + 1e-7);
        }
        let p = random_product(4, &mut seeded_rng(1)).unwrap();
        let s = feasible_from_function(&p, SubsetMask(0b0011), 3, noise).unwrap();
        assert!(s.assignment.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn export_mentions_every_row() {
        let (b, _) = consistent(2, 1);
        let p = build_lp(&b, 0.5).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("# k = 2"));
        assert_eq!(text.lines().filter(|l| l.starts_with('e')).count(), p.equalities.len() + 1);
        assert_eq!(text.lines().filter(|l| l.starts_with('x')).count(), p.vars.len());
    }

    #[test]
    fn iid_boundary_is_infeasible() {
        let mut rng = seeded_rng(4);
        let mut b = BoundaryData::zeros(3).unwrap();
        for (s, i) in b.pairs().collect::<Vec<_>>() {
            b.set(s, i, rng.random::<f64>()).unwrap();
        }
        let s = solve_lp(&build_lp(&b, 0.5).unwrap()).unwrap();
        assert_eq!(s.status, Status::Infeasible);
    }
}
