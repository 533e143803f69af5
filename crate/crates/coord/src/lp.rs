//! Dense two-phase simplex for the small linear programs produced by the
//! coordination tests.
//!
//! Problems are stated as `minimize c'x` over rows `a'x {<=,=,>=} b` with
//! per-variable bounds (possibly infinite). Sizes here are at most a few
//! thousand nonzeros, so a dense tableau is used throughout. Dantzig pricing
//! switches to Bland's rule after `5 * (rows + cols)` pivots to break
//! degenerate cycles.
//!
//! Set `COORD_LP_TRACE=1` to dump per-solve pivot summaries to stderr.

use thiserror::Error;

/// Feasibility tolerance for witness re-substitution.
pub const FEAS_TOL: f64 = 1e-7;
/// Entries below this magnitude are treated as zero during pivoting.
pub const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(&'static str),
    #[error("malformed program: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, relation: Relation::Le, rhs }
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, relation: Relation::Eq, rhs }
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, relation: Relation::Ge, rhs }
    }

    /// Signed violation of the row at `x` (positive means violated).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs - self.rhs,
            Relation::Ge => self.rhs - lhs,
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Per-variable interval; use `f64::NEG_INFINITY` / `f64::INFINITY` for
/// one-sided or free variables.
#[derive(Debug, Clone, Copy)]
pub struct Bound {
    pub lo: f64,
    pub hi: f64,
}

impl Bound {
    pub fn nonnegative() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY }
    }

    pub fn free() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn at_least(lo: f64) -> Self {
        Self { lo, hi: f64::INFINITY }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Minimized objective; all-zero means a pure feasibility query.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Feasible { x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { x, .. } | LpOutcome::Feasible { x } => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Yes(Vec<f64>),
    No,
}

/// True when `x` satisfies every row and bound of `lp` within `tol`,
/// measured relative to the row's magnitude at `x` (so rows evaluated with
/// large basic values are not failed on cancellation noise alone; for
/// well-scaled problems this coincides with the absolute test).
pub fn satisfies(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    if x.len() != lp.objective.len() {
        return false;
    }
    for row in &lp.constraints {
        let scale: f64 = row
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, v)| (a * v).abs())
            .sum::<f64>()
            + row.rhs.abs();
        if row.violation(x) > tol * (1.0 + scale) {
            return false;
        }
    }
    for (b, &v) in lp.bounds.iter().zip(x) {
        let scale = 1.0 + v.abs();
        if v < b.lo - tol * scale || v > b.hi + tol * scale {
            return false;
        }
    }
    true
}

/// Phase-1 wrapper: reports a witness point or infeasibility.
pub fn feasible(constraints: &[Constraint], bounds: &[Bound]) -> Result<Feasibility, LpError> {
    let n = bounds.len();
    let lp = LinearProgram {
        objective: vec![0.0; n],
        constraints: constraints.to_vec(),
        bounds: bounds.to_vec(),
    };
    Ok(match solve(&lp)? {
        LpOutcome::Feasible { x } | LpOutcome::Optimal { x, .. } => Feasibility::Yes(x),
        LpOutcome::Infeasible => Feasibility::No,
        LpOutcome::Unbounded => unreachable!("feasibility query cannot be unbounded"),
    })
}

/// Two-phase simplex. With an all-zero objective the result is
/// `Feasible`/`Infeasible`; otherwise `Optimal`/`Infeasible`/`Unbounded`.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let n = lp.objective.len();
    if lp.bounds.len() != n {
        return Err(LpError::Shape(format!(
            "{} bounds for {n} variables",
            lp.bounds.len()
        )));
    }
    for (k, row) in lp.constraints.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(LpError::Shape(format!("row {k} has wrong length")));
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
            return Err(LpError::Shape(format!("row {k} has non-finite entries")));
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if b.lo > b.hi {
            return Err(LpError::Shape(format!("variable {j} has lo > hi")));
        }
    }

    let trace = std::env::var("COORD_LP_TRACE").map(|v| v == "1").unwrap_or(false);
    let pure_feasibility = lp.objective.iter().all(|&c| c == 0.0);

    let mut tab = Tableau::build(lp);
    if trace {
        eprintln!(
            "lp: {} rows, {} structural cols, {} slack, {} artificial",
            tab.rows.len(),
            tab.n_struct,
            tab.n_slack,
            tab.n_art
        );
        if tab.width <= 32 && tab.rows.len() <= 24 {
            for (r, row) in tab.rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:+.3}")).collect();
                eprintln!("lp: tableau[{r}] {}", cells.join(" "));
            }
        }
    }

    // Phase 1: minimize the artificial sum. The phase-1 objective is
    // bounded below by zero, so an apparent unbounded ray is pricing noise
    // and must not terminate the phase. The incrementally maintained
    // objective row can drift on badly scaled bases, so feasibility is
    // judged on the artificial values read from the basis itself, with a
    // fresh re-pricing pass whenever the two disagree.
    if tab.n_art > 0 {
        let tol = 1e-8 * (1.0 + tab.rhs_scale);
        tab.set_phase1_objective();
        let mut feasible_basis = false;
        for _ in 0..5 {
            tab.optimize(trace, false)?;
            if tab.artificial_residual() <= tol {
                feasible_basis = true;
                break;
            }
            if tab.obj_value() <= tol {
                // maintained row believes we are done: re-price exactly and
                // try again; a second agreement means genuinely infeasible
                tab.set_phase1_objective();
                if tab.obj_value() <= tol {
                    break;
                }
            }
        }
        if !feasible_basis && tab.artificial_residual() > tol {
            if trace {
                eprintln!(
                    "lp: phase 1 residual {:e} -> infeasible",
                    tab.artificial_residual()
                );
            }
            return Ok(LpOutcome::Infeasible);
        }
        tab.purge_artificials();
    }

    if pure_feasibility {
        let x = tab.extract();
        check_witness(lp, &x)?;
        return Ok(LpOutcome::Feasible { x });
    }

    // Phase 2: minimize the real objective.
    tab.set_phase2_objective();
    if !tab.optimize(trace, true)? {
        return Ok(LpOutcome::Unbounded);
    }
    let x = tab.extract();
    check_witness(lp, &x)?;
    let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}

fn check_witness(lp: &LinearProgram, x: &[f64]) -> Result<(), LpError> {
    if satisfies(lp, x, FEAS_TOL) {
        Ok(())
    } else {
        if std::env::var("COORD_LP_TRACE").map(|v| v == "1").unwrap_or(false) {
            for (k, row) in lp.constraints.iter().enumerate() {
                let v = row.violation(x);
                if v > 0.0 {
                    eprintln!("lp: row {k} violated by {v:e}");
                }
            }
            for (j, (b, &v)) in lp.bounds.iter().zip(x).enumerate() {
                if v < b.lo || v > b.hi {
                    eprintln!("lp: bound {j} [{}, {}] holds {v}", b.lo, b.hi);
                }
            }
        }
        Err(LpError::NumericalBreakdown("witness violates a constraint"))
    }
}

/// How an original variable maps into the nonnegative standard form.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + z`
    Shift { col: usize, lo: f64 },
    /// `x = hi - z`
    Mirror { col: usize, hi: f64 },
    /// `x = z_pos - z_neg`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    /// Constraint rows; each row has `width` coefficients then the rhs.
    rows: Vec<Vec<f64>>,
    /// Objective row (reduced costs), same layout as `rows`.
    obj: Vec<f64>,
    /// Column index of the basic variable for each row.
    basis: Vec<usize>,
    /// Pristine copy of the standard-form rows, for refactorization.
    frozen: Vec<Vec<f64>>,
    /// Index into `frozen` for each live tableau row.
    row_ids: Vec<usize>,
    var_map: Vec<VarMap>,
    /// Phase-2 cost per standard-form column.
    costs: Vec<f64>,
    n_struct: usize,
    n_slack: usize,
    n_art: usize,
    width: usize,
    art_start: usize,
    rhs_scale: f64,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.objective.len();
        let mut var_map = Vec::with_capacity(n);
        let mut n_struct = 0usize;
        // extra `x <= hi` rows for doubly bounded variables
        let mut upper_rows: Vec<(usize, f64)> = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            if b.lo.is_finite() {
                var_map.push(VarMap::Shift { col: n_struct, lo: b.lo });
                n_struct += 1;
                if b.hi.is_finite() {
                    upper_rows.push((j, b.hi));
                }
            } else if b.hi.is_finite() {
                var_map.push(VarMap::Mirror { col: n_struct, hi: b.hi });
                n_struct += 1;
            } else {
                var_map.push(VarMap::Split { pos: n_struct, neg: n_struct + 1 });
                n_struct += 2;
            }
        }

        // Transform every row (user rows plus bound rows) to A z rel b with
        // b >= 0, recording the relation after any sign flip.
        let mut std_rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
        let mut push_row = |coeffs: &dyn Fn(usize) -> f64, relation: Relation, rhs: f64| {
            let mut z = vec![0.0; n_struct];
            let mut b = rhs;
            for (j, vm) in var_map.iter().enumerate() {
                let a = coeffs(j);
                if a == 0.0 {
                    continue;
                }
                match *vm {
                    VarMap::Shift { col, lo } => {
                        z[col] += a;
                        b -= a * lo;
                    }
                    VarMap::Mirror { col, hi } => {
                        z[col] -= a;
                        b -= a * hi;
                    }
                    VarMap::Split { pos, neg } => {
                        z[pos] += a;
                        z[neg] -= a;
                    }
                }
            }
            let mut rel = relation;
            if b < 0.0 {
                for v in &mut z {
                    *v = -*v;
                }
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            std_rows.push((z, rel, b));
        };
        for row in &lp.constraints {
            push_row(&|j| row.coeffs[j], row.relation, row.rhs);
        }
        for &(j, hi) in &upper_rows {
            push_row(&|k| if k == j { 1.0 } else { 0.0 }, Relation::Le, hi);
        }

        let m = std_rows.len();
        let n_slack = m; // one slack or surplus column per row
        let n_art = std_rows
            .iter()
            .filter(|(_, rel, b)| !matches!(rel, Relation::Le) || *b < 0.0)
            .count();
        let width = n_struct + n_slack + n_art;
        let art_start = n_struct + n_slack;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut rhs_scale = 0.0f64;
        let mut art = art_start;
        for (r, (z, rel, b)) in std_rows.into_iter().enumerate() {
            let mut row = vec![0.0; width + 1];
            row[..n_struct].copy_from_slice(&z);
            row[width] = b;
            rhs_scale = rhs_scale.max(b.abs());
            match rel {
                Relation::Le => {
                    row[n_struct + r] = 1.0;
                    basis.push(n_struct + r);
                }
                Relation::Ge => {
                    row[n_struct + r] = -1.0;
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }

        // Phase-2 costs in standard-form coordinates. Constant offsets from
        // the variable transforms are dropped; the objective value is
        // recomputed from the recovered x.
        let mut costs = vec![0.0; width];
        for (j, vm) in var_map.iter().enumerate() {
            let c = lp.objective[j];
            match *vm {
                VarMap::Shift { col, .. } => costs[col] += c,
                VarMap::Mirror { col, .. } => costs[col] -= c,
                VarMap::Split { pos, neg } => {
                    costs[pos] += c;
                    costs[neg] -= c;
                }
            }
        }

        let frozen = rows.clone();
        let row_ids = (0..rows.len()).collect();
        Self {
            rows,
            obj: vec![0.0; width + 1],
            basis,
            frozen,
            row_ids,
            var_map,
            costs,
            n_struct,
            n_slack,
            n_art,
            width,
            art_start,
            rhs_scale,
        }
    }

    /// Recomputes the basic values by solving `B x_B = b` against the
    /// pristine rows, wiping out pivot-accumulated drift. Returns the full
    /// standard-form vector, or `None` when the basis matrix is singular.
    fn refactored_solution(&self) -> Option<Vec<f64>> {
        let m = self.rows.len();
        if m == 0 {
            return Some(vec![0.0; self.width]);
        }
        let mut basis_mat = nalgebra::DMatrix::zeros(m, m);
        let mut rhs = nalgebra::DVector::zeros(m);
        for (r, &fid) in self.row_ids.iter().enumerate() {
            for (k, &bj) in self.basis.iter().enumerate() {
                basis_mat[(r, k)] = self.frozen[fid][bj];
            }
            rhs[r] = self.frozen[fid][self.width];
        }
        let lu = basis_mat.lu();
        let x_b = lu.solve(&rhs)?;
        let mut z = vec![0.0; self.width];
        for (k, &bj) in self.basis.iter().enumerate() {
            z[bj] = x_b[k];
        }
        Some(z)
    }

    fn obj_value(&self) -> f64 {
        -self.obj[self.width]
    }

    /// Exact phase-1 infeasibility of the current basis, computed from the
    /// refactored solution: leftover artificial mass plus any negative
    /// basic values. Immune to pivot drift.
    fn artificial_residual(&self) -> f64 {
        match self.refactored_solution() {
            Some(z) => {
                let art: f64 = z[self.art_start..self.width].iter().map(|&v| v.max(0.0)).sum();
                let neg: f64 = self
                    .basis
                    .iter()
                    .map(|&bj| (-z[bj]).max(0.0))
                    .sum();
                art + neg
            }
            None => f64::INFINITY,
        }
    }

    /// Sets the objective row to `costs`, then prices out the basic columns.
    fn price_out(&mut self, costs: &[f64]) {
        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..self.width].copy_from_slice(costs);
        for (r, &bj) in self.basis.iter().enumerate() {
            let c = self.obj[bj];
            if c != 0.0 {
                let row = &self.rows[r];
                for (o, a) in self.obj.iter_mut().zip(row) {
                    *o -= c * a;
                }
            }
        }
    }

    fn set_phase1_objective(&mut self) {
        let mut costs = vec![0.0; self.width];
        for c in &mut costs[self.art_start..] {
            *c = 1.0;
        }
        self.price_out(&costs);
    }

    fn set_phase2_objective(&mut self) {
        let costs = self.costs.clone();
        self.price_out(&costs);
    }

    /// Columns eligible to enter (artificials are frozen once purged).
    fn enterable(&self) -> usize {
        if self.n_art == 0 {
            self.art_start
        } else {
            self.width
        }
    }

    /// Runs the simplex on the current objective row. Returns false on an
    /// unbounded ray; when `allow_unbounded` is false (objective known to be
    /// bounded below), a ray-like column is treated as pricing noise and
    /// excluded instead.
    fn optimize(&mut self, trace: bool, allow_unbounded: bool) -> Result<bool, LpError> {
        let m = self.rows.len();
        let bland_after = 5 * (m + self.width);
        let max_pivots = 10_000 + 100 * (m + self.width);
        let cols = self.enterable();
        let mut pivots = 0usize;
        loop {
            // pricing tolerance relative to the objective-row magnitude
            let obj_scale = 1.0 + self.obj[..cols].iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            let threshold = -PIVOT_TOL * obj_scale;

            let mut enter = None;
            if pivots < bland_after {
                let mut best = threshold;
                for j in 0..cols {
                    if self.obj[j] < best {
                        best = self.obj[j];
                        enter = Some(j);
                    }
                }
            } else {
                for j in 0..cols {
                    if self.obj[j] < threshold {
                        enter = Some(j);
                        break;
                    }
                }
            }
            let Some(enter) = enter else {
                if trace {
                    eprintln!("lp: optimal after {pivots} pivots, obj {:e}", self.obj_value());
                }
                return Ok(true);
            };

            // ratio test
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..m {
                let a = self.rows[r][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rows[r][self.width].max(0.0) / a;
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.is_some_and(|l| self.basis[r] < self.basis[l]));
                    if better {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
            let Some(leave) = leave else {
                if allow_unbounded {
                    if trace {
                        eprintln!("lp: unbounded ray in column {enter}");
                    }
                    return Ok(false);
                }
                // bounded objective: the negative reduced cost is roundoff
                self.obj[enter] = 0.0;
                continue;
            };

            self.pivot(leave, enter);
            pivots += 1;
            if pivots > max_pivots {
                return Err(LpError::NumericalBreakdown("pivot limit exceeded"));
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        let inv = 1.0 / piv;
        for v in &mut self.rows[r] {
            *v *= inv;
        }
        self.rows[r][c] = 1.0; // exact
        let piv_row = std::mem::take(&mut self.rows[r]);
        for (rr, row) in self.rows.iter_mut().enumerate() {
            if rr == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&piv_row) {
                    *v -= f * p;
                }
                row[c] = 0.0; // exact
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&piv_row) {
                *v -= f * p;
            }
            self.obj[c] = 0.0;
        }
        self.rows[r] = piv_row;
        self.basis[r] = c;
    }

    /// After phase 1: pivot artificials out of the basis where possible and
    /// drop redundant rows, then freeze artificial columns.
    ///
    /// The replacement pivot must be numerically solid: dividing a row by a
    /// roundoff-sized entry would blow a near-zero artificial value up into
    /// a real infeasibility, so rows whose non-artificial entries are all
    /// negligible are treated as redundant and removed.
    fn purge_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.art_start {
                let row_scale = 1.0 + self.rows[r][..self.width]
                    .iter()
                    .fold(0.0f64, |a, &v| a.max(v.abs()));
                let mut pivot_col = None;
                let mut best = 1e-7 * row_scale;
                for j in 0..self.art_start {
                    if self.rows[r][j].abs() > best {
                        best = self.rows[r][j].abs();
                        pivot_col = Some(j);
                    }
                }
                match pivot_col {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.rows.swap_remove(r);
                        self.basis.swap_remove(r);
                        self.row_ids.swap_remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // freeze artificial columns for phase 2
        for row in &mut self.rows {
            for v in &mut row[self.art_start..self.width] {
                *v = 0.0;
            }
        }
        self.n_art = 0;
    }

    /// Reads the standard-form solution (refactored when possible) and maps
    /// it back to original variables.
    fn extract(&self) -> Vec<f64> {
        let z = self.refactored_solution().unwrap_or_else(|| {
            let mut z = vec![0.0; self.width];
            for (r, &bj) in self.basis.iter().enumerate() {
                z[bj] = self.rows[r][self.width];
            }
            z
        });
        let z: Vec<f64> = z.into_iter().map(|v| v.max(0.0)).collect();
        self.var_map
            .iter()
            .map(|vm| match *vm {
                VarMap::Shift { col, lo } => lo + z[col],
                VarMap::Mirror { col, hi } => hi - z[col],
                VarMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(
        objective: Vec<f64>,
        constraints: Vec<Constraint>,
        bounds: Vec<Bound>,
    ) -> LinearProgram {
        LinearProgram { objective, constraints, bounds }
    }

    #[test]
    fn one_variable_minimum_at_bound() {
        // minimize x s.t. x >= 3
        let p = lp(
            vec![1.0],
            vec![Constraint::ge(vec![1.0], 3.0)],
            vec![Bound::free()],
        );
        match solve(&p).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((x[0] - 3.0).abs() < 1e-9);
                assert!((value - 3.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_polytope_is_infeasible() {
        let p = lp(
            vec![0.0],
            vec![
                Constraint::le(vec![1.0], 1.0),
                Constraint::ge(vec![1.0], 2.0),
            ],
            vec![Bound::free()],
        );
        assert_eq!(solve(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_ray_detected() {
        // minimize -x s.t. x >= 0
        let p = lp(vec![-1.0], vec![], vec![Bound::nonnegative()]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn feasibility_wrapper() {
        let yes = feasible(
            &[Constraint::le(vec![1.0, 1.0], 1.0)],
            &[Bound::nonnegative(), Bound::nonnegative()],
        )
        .unwrap();
        match yes {
            Feasibility::Yes(x) => {
                assert!(x[0] >= -FEAS_TOL && x[1] >= -FEAS_TOL);
                assert!(x[0] + x[1] <= 1.0 + FEAS_TOL);
            }
            Feasibility::No => panic!("expected feasible"),
        }
        let no = feasible(
            &[
                Constraint::le(vec![1.0], -1.0),
                Constraint::ge(vec![1.0], 1.0),
            ],
            &[Bound::free()],
        )
        .unwrap();
        assert_eq!(no, Feasibility::No);
    }

    #[test]
    fn equality_and_double_bounds() {
        // minimize x + y s.t. x + y = 2, 0 <= x <= 0.5, y free
        let p = lp(
            vec![1.0, 1.0],
            vec![Constraint::eq(vec![1.0, 1.0], 2.0)],
            vec![Bound::interval(0.0, 0.5), Bound::free()],
        );
        match solve(&p).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 2.0).abs() < 1e-9);
                assert!(x[0] >= -FEAS_TOL && x[0] <= 0.5 + FEAS_TOL);
                assert!((x[0] + x[1] - 2.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_ties_terminate() {
        // Many redundant rows through the origin; exercises the Bland
        // fallback path.
        let mut rows = Vec::new();
        for k in 0..12 {
            let a = 1.0 + k as f64 * 0.0; // identical rows
            rows.push(Constraint::ge(vec![a, a], 0.0));
        }
        rows.push(Constraint::le(vec![1.0, 2.0], 4.0));
        let p = lp(vec![-1.0, -1.0], rows, vec![Bound::nonnegative(), Bound::nonnegative()]);
        match solve(&p).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value + 4.0).abs() < 1e-7, "value {value}");
                assert!(satisfies(&p, &x, FEAS_TOL));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mirrored_variable() {
        // minimize -x s.t. x <= 5 (upper bound only)
        let p = lp(vec![-1.0], vec![], vec![Bound { lo: f64::NEG_INFINITY, hi: 5.0 }]);
        match solve(&p).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((x[0] - 5.0).abs() < 1e-9);
                assert!((value + 5.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
