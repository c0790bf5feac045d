//! Exact rational simplex for the ℓ1-filling linear programs.
//!
//! Textbook two-phase primal simplex on equality-form LPs with a sparse
//! row tableau and Bland's rule over a caller-supplied column order (any
//! fixed order keeps Bland's termination guarantee, and putting likely
//! basis columns first makes warm starts effective).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// min c·x subject to A x = b, x >= 0 (b may carry any signs; rows are
/// normalized internally).
pub struct SparseLp {
    pub num_vars: usize,
    /// Rows as sparse (col, coeff) lists, sorted by column.
    pub rows: Vec<Vec<(usize, BigRational)>>,
    pub rhs: Vec<BigRational>,
    pub objective: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        solution: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    rows: Vec<Vec<(usize, BigRational)>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    /// rank[col] = position in the Bland order (lower enters first).
    rank: Vec<usize>,
}

fn row_get(row: &[(usize, BigRational)], col: usize) -> Option<&BigRational> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

/// target -= f * source, merging sorted sparse rows.
fn row_axpy(target: &mut Vec<(usize, BigRational)>, source: &[(usize, BigRational)], f: &BigRational) {
    if f.is_zero() {
        return;
    }
    let mut out = Vec::with_capacity(target.len() + source.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some(&(tc, ref tv)), Some(&(sc, ref sv))) => {
                if tc < sc {
                    out.push((tc, tv.clone()));
                    i += 1;
                } else if tc > sc {
                    out.push((sc, -(f * sv)));
                    j += 1;
                } else {
                    let v = tv - f * sv;
                    if !v.is_zero() {
                        out.push((tc, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some(&(tc, ref tv)), None) => {
                out.push((tc, tv.clone()));
                i += 1;
            }
            (None, Some(&(sc, ref sv))) => {
                out.push((sc, -(f * sv)));
                j += 1;
            }
            (None, None) => break,
        }
    }
    *target = out;
}

impl Tableau {
    fn pivot(&mut self, objective: &mut Vec<BigRational>, prow: usize, pcol: usize) {
        let pval = row_get(&self.rows[prow], pcol)
            .expect("pivot entry must be nonzero")
            .clone();
        if !pval.is_one() {
            for e in self.rows[prow].iter_mut() {
                e.1 = &e.1 / &pval;
            }
            self.rhs[prow] = &self.rhs[prow] / &pval;
        }
        let prow_data = self.rows[prow].clone();
        let prhs = self.rhs[prow].clone();
        for r in 0..self.rows.len() {
            if r == prow {
                continue;
            }
            if let Some(f) = row_get(&self.rows[r], pcol).cloned() {
                row_axpy(&mut self.rows[r], &prow_data, &f);
                self.rhs[r] -= &f * &prhs;
            }
        }
        let obj_f = objective[pcol].clone();
        if !obj_f.is_zero() {
            for &(c, ref v) in &prow_data {
                objective[c] -= &obj_f * v;
            }
        }
        self.basis[prow] = pcol;
    }

    /// Bland entering rule over the fixed rank order; `allowed` bounds the
    /// eligible column range.
    fn entering(&self, objective: &[BigRational], allowed: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for col in 0..allowed {
            if objective[col].is_negative() {
                match best {
                    None => best = Some(col),
                    Some(b) if self.rank[col] < self.rank[b] => best = Some(col),
                    _ => {}
                }
            }
        }
        best
    }

    /// Ratio test with Bland tie-breaking (smallest basis rank).
    fn leaving(&self, pcol: usize) -> Option<usize> {
        let mut best: Option<(usize, BigRational)> = None;
        for r in 0..self.rows.len() {
            let Some(a) = row_get(&self.rows[r], pcol) else {
                continue;
            };
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / a;
            match &best {
                None => best = Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < *bratio
                        || (ratio == *bratio
                            && self.rank[self.basis[r]] < self.rank[self.basis[*br]])
                    {
                        best = Some((r, ratio));
                    }
                }
            }
        }
        best.map(|(r, _)| r)
    }
}

/// Solve the LP. `priority` is an optional list of columns to try first
/// when entering (a warm-start hint); `max_pivots` caps total work.
pub fn solve(lp: &SparseLp, priority: Option<&[usize]>, max_pivots: usize) -> LpOutcome {
    let n = lp.num_vars;
    let m = lp.rows.len();

    // Bland order: priority columns first, then the rest ascending,
    // artificials last.
    let mut rank = vec![usize::MAX; n + m];
    let mut next = 0;
    if let Some(p) = priority {
        for &c in p {
            if c < n && rank[c] == usize::MAX {
                rank[c] = next;
                next += 1;
            }
        }
    }
    for c in 0..n + m {
        if rank[c] == usize::MAX {
            rank[c] = next;
            next += 1;
        }
    }

    // Normalize rhs >= 0 and install artificial columns n..n+m.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let mut r: Vec<(usize, BigRational)> = row
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .cloned()
            .collect();
        r.sort_by_key(|e| e.0);
        let mut b = lp.rhs[i].clone();
        if b.is_negative() {
            for e in r.iter_mut() {
                e.1 = -e.1.clone();
            }
            b = -b;
        }
        r.push((n + i, BigRational::one()));
        rows.push(r);
        rhs.push(b);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        rank,
    };

    let mut pivots = 0usize;

    // Phase 1: minimize the artificial sum. In canonical form the reduced
    // cost of column j is -sum of its coefficients over the rows.
    let mut obj1 = vec![BigRational::zero(); n + m];
    for row in &tab.rows {
        for &(c, ref v) in row {
            if c < n {
                obj1[c] -= v;
            }
        }
    }
    loop {
        let Some(pcol) = tab.entering(&obj1, n) else {
            break;
        };
        let Some(prow) = tab.leaving(pcol) else {
            // Phase-1 objective is bounded below by zero; no leaving row
            // would mean an unbounded improving ray, which cannot happen.
            return LpOutcome::Infeasible;
        };
        tab.pivot(&mut obj1, prow, pcol);
        pivots += 1;
        if pivots > max_pivots {
            return LpOutcome::IterationLimit;
        }
    }
    let artificial_mass: BigRational = (0..tab.rows.len())
        .filter(|&r| tab.basis[r] >= n)
        .map(|r| tab.rhs[r].clone())
        .sum();
    if artificial_mass.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; delete redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            let pivot_col = tab.rows[r]
                .iter()
                .find(|&&(c, ref v)| c < n && !v.is_zero())
                .map(|&(c, _)| c);
            match pivot_col {
                Some(c) => {
                    tab.pivot(&mut obj1, r, c);
                    pivots += 1;
                }
                None => {
                    // Structurally empty row: redundant constraint.
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    // Strip artificial columns entirely.
    for row in tab.rows.iter_mut() {
        row.retain(|&(c, _)| c < n);
    }

    // Phase 2: canonicalize the real objective against the current basis.
    let mut obj = vec![BigRational::zero(); n + m];
    obj[..n].clone_from_slice(&lp.objective);
    for r in 0..tab.rows.len() {
        let b = tab.basis[r];
        let cb = obj[b].clone();
        if cb.is_zero() {
            continue;
        }
        let row_data = tab.rows[r].clone();
        for &(c, ref v) in &row_data {
            obj[c] -= &cb * v;
        }
    }
    loop {
        let Some(pcol) = tab.entering(&obj, n) else {
            break;
        };
        let Some(prow) = tab.leaving(pcol) else {
            return LpOutcome::Unbounded;
        };
        tab.pivot(&mut obj, prow, pcol);
        pivots += 1;
        if pivots > max_pivots {
            return LpOutcome::IterationLimit;
        }
    }

    let mut solution = vec![BigRational::zero(); n];
    for r in 0..tab.rows.len() {
        if tab.basis[r] < n {
            solution[tab.basis[r]] = tab.rhs[r].clone();
        }
    }
    let value = lp
        .objective
        .iter()
        .zip(&solution)
        .map(|(c, x)| c * x)
        .sum();
    LpOutcome::Optimal { value, solution }
}
