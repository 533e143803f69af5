//! Shared independent oracles for integration tests. Everything here is
//! deliberately brute-force and kept free of the solver paths it checks.

#![allow(dead_code)]

use coord::lp::{Constraint, Relation};

/// Solves a small square system by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is numerically singular.
pub fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let (piv, piv_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if piv_val < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col && m[r][col] != 0.0 {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Exhaustive vertex enumeration for a system of constraint rows in
/// dimension `<= 3`. Every subset of `dim` rows is intersected as
/// equalities; candidate points satisfying all rows within `tol` are
/// feasible vertices. Sound for bounded polytopes (always include box rows).
pub fn enumerate_feasible_vertices(rows: &[Constraint], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    assert!(dim >= 1 && dim <= 3, "oracle limited to dimension <= 3");
    let k = rows.len();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; dim];
    fn rec(
        rows: &[Constraint],
        dim: usize,
        tol: f64,
        start: usize,
        depth: usize,
        idx: &mut Vec<usize>,
        found: &mut Vec<Vec<f64>>,
        k: usize,
    ) {
        if depth == dim {
            let a: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].coeffs.clone()).collect();
            let b: Vec<f64> = idx.iter().map(|&i| rows[i].rhs).collect();
            if let Some(x) = solve_square(&a, &b) {
                if rows.iter().all(|r| r.violation(&x) <= tol) {
                    found.push(x);
                }
            }
            return;
        }
        for i in start..k {
            idx[depth] = i;
            rec(rows, dim, tol, i + 1, depth + 1, idx, found, k);
        }
    }
    rec(rows, dim, tol, 0, 0, &mut idx, &mut found, k);
    found
}

/// Box rows `-bound <= x_j <= bound` in constraint form.
pub fn box_rows(dim: usize, bound: f64) -> Vec<Constraint> {
    let mut rows = Vec::new();
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        rows.push(Constraint {
            coeffs: e.clone(),
            relation: Relation::Le,
            rhs: bound,
        });
        rows.push(Constraint {
            coeffs: e,
            relation: Relation::Ge,
            rhs: -bound,
        });
    }
    rows
}

/// Per-agent cyclical-consistency oracle: the classical combinatorial
/// equivalent of the multiplier-system feasibility. Observation `t` weakly
/// reveals preference over `s` when `alpha_t' (beta_s - beta_t) <= 0`;
/// consistency fails exactly when some chain of weak revelations closes a
/// cycle containing a strict one.
pub fn garp_consistent(probes: &[Vec<f64>], responses: &[Vec<f64>]) -> bool {
    const EPS: f64 = 1e-12;
    let t_len = probes.len();
    let gap = |t: usize, s: usize| -> f64 {
        probes[t]
            .iter()
            .zip(responses[s].iter().zip(&responses[t]))
            .map(|(a, (bs, bt))| a * (bs - bt))
            .sum()
    };
    // weak revealed-preference relation and its transitive closure
    let mut reach = vec![vec![false; t_len]; t_len];
    for t in 0..t_len {
        for s in 0..t_len {
            if t != s && gap(t, s) <= EPS {
                reach[t][s] = true;
            }
        }
    }
    for k in 0..t_len {
        for i in 0..t_len {
            if reach[i][k] {
                for j in 0..t_len {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    for t in 0..t_len {
        for s in 0..t_len {
            if t != s && reach[t][s] && gap(s, t) < -EPS {
                return false;
            }
        }
    }
    true
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    pearson(&ra, &rb)
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    cov / (va.sqrt() * vb.sqrt())
}
