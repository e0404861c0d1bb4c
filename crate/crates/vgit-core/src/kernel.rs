//! Exact rational linear algebra and convex-feasibility primitives.
//!
//! All decisions here are made with arbitrary-precision rational pivoting;
//! there is no floating point anywhere. Hull membership is an exact
//! phase-one simplex on the barycentric formulation, and relative-interior
//! membership maximizes the smallest barycentric coordinate with a full
//! two-phase simplex. Bland's rule guarantees termination.

use num::{One, Signed, Zero};

use crate::{invalid, Rational, Result};

/// Vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVector {
    entries: Vec<Rational>,
}

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    /// Build from integer entries.
    pub fn from_ints(entries: &[i64]) -> Self {
        Self {
            entries: entries.iter().map(|&v| Rational::from_integer(v.into())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.entries.iter()
    }
}

impl std::ops::Index<usize> for QVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.entries[i]
    }
}

/// A system of linear equations `rows · x = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    rows: Vec<QVector>,
    rhs: Vec<Rational>,
}

impl LinearSystem {
    /// All rows must share one length, and there must be one rhs entry per row.
    pub fn new(rows: Vec<QVector>, rhs: Vec<Rational>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("linear system needs at least one row"));
        }
        let width = rows[0].len();
        if width == 0 {
            return Err(invalid("linear system rows must be nonempty"));
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(invalid("linear system rows have unequal lengths"));
        }
        if rhs.len() != rows.len() {
            return Err(invalid("rhs length does not match row count"));
        }
        Ok(Self { rows, rhs })
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
}

/// Solves `system`, returning the solution only when it exists and is
/// unique. Inconsistent and underdetermined systems both yield `None`.
pub fn solve_unique(system: &LinearSystem) -> Option<QVector> {
    let m = system.rows.len();
    let n = system.rows[0].len();

    // Augmented matrix [A | b].
    let mut a: Vec<Vec<Rational>> = system
        .rows
        .iter()
        .zip(system.rhs.iter())
        .map(|(row, b)| {
            let mut r: Vec<Rational> = row.entries.to_vec();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].clone();
        for entry in a[rank].iter_mut() {
            *entry = &*entry / &inv;
        }
        for r in 0..m {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..=n {
                    let delta = &factor * &a[rank][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }

    // Inconsistent: a zero row with nonzero rhs.
    for r in rank..m {
        if !a[r][n].is_zero() {
            return None;
        }
    }
    // Underdetermined: free columns remain.
    if rank < n {
        return None;
    }

    let mut solution = vec![Rational::zero(); n];
    for (r, &col) in pivot_cols.iter().enumerate() {
        solution[col] = a[r][n].clone();
    }
    Some(QVector::new(solution))
}

/// Rank of the affine span of `points` (0 for a single point).
pub(crate) fn affine_rank(points: &[QVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| {
            p.entries
                .iter()
                .zip(base.entries.iter())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    matrix_rank(rows)
}

fn matrix_rank(mut a: Vec<Vec<Rational>>) -> usize {
    if a.is_empty() {
        return 0;
    }
    let m = a.len();
    let n = a[0].len();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..m {
            if !a[r][col].is_zero() {
                let factor = &a[r][col] / &pivot;
                for c in col..n {
                    let delta = &factor * &a[rank][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Outcome of the simplex solver on `max c·x, A x = b, x ≥ 0`.
enum LpOutcome {
    Infeasible,
    Optimal(Rational),
}

/// Dense two-phase simplex with Bland's anti-cycling rule. The callers
/// only pose bounded problems, so an unbounded phase two is a logic error.
fn simplex_max(objective: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = objective.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau columns: n structural + m artificial + rhs.
    let total = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let negate = b[i].is_negative();
        let mut tr: Vec<Rational> = Vec::with_capacity(total + 1);
        for v in row {
            tr.push(if negate { -v.clone() } else { v.clone() });
        }
        for j in 0..m {
            tr.push(if j == i { Rational::one() } else { Rational::zero() });
        }
        tr.push(if negate { -b[i].clone() } else { b[i].clone() });
        t.push(tr);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase one: maximize -(sum of artificials). Reduced-cost row.
    let mut obj: Vec<Rational> = vec![Rational::zero(); total + 1];
    for j in n..total {
        obj[j] = -Rational::one();
    }
    for i in 0..m {
        // Basic artificial i has cost -1; restore zero reduced cost.
        for j in 0..=total {
            let delta = t[i][j].clone();
            obj[j] = &obj[j] + &delta;
        }
    }
    run_pivots(&mut t, &mut obj, &mut basis, total);

    // Phase-one value = -(sum of artificial basics).
    let mut artificial_sum = Rational::zero();
    for (i, &bv) in basis.iter().enumerate() {
        if bv >= n {
            artificial_sum = &artificial_sum + &t[i][total];
        }
    }
    if !artificial_sum.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut keep: Vec<bool> = vec![true; m];
    for i in 0..m {
        if basis[i] < n {
            continue;
        }
        if let Some(col) = (0..n).find(|&j| !t[i][j].is_zero()) {
            pivot(&mut t, &mut obj, &mut basis, i, col);
        } else {
            keep[i] = false;
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut new_basis: Vec<usize> = Vec::new();
    for i in 0..m {
        if keep[i] {
            rows.push(std::mem::take(&mut t[i]));
            new_basis.push(basis[i]);
        }
    }
    let mut t = rows;
    let mut basis = new_basis;

    // Phase two: real objective, artificial columns barred.
    let mut obj: Vec<Rational> = vec![Rational::zero(); total + 1];
    obj[..n].clone_from_slice(objective);
    for j in n..total {
        obj[j] = Rational::zero();
    }
    for i in 0..t.len() {
        if !obj[basis[i]].is_zero() {
            let factor = obj[basis[i]].clone();
            for j in 0..=total {
                let delta = &factor * &t[i][j];
                obj[j] = &obj[j] - &delta;
            }
        }
    }
    run_pivots(&mut t, &mut obj, &mut basis, n);

    let mut value = Rational::zero();
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n && !objective[bv].is_zero() {
            let term = &objective[bv] * &t[i][total];
            value = &value + &term;
        }
    }
    LpOutcome::Optimal(value)
}

/// Bland's rule pivot loop over columns `0..allowed`.
fn run_pivots(
    t: &mut [Vec<Rational>],
    obj: &mut [Rational],
    basis: &mut [usize],
    allowed: usize,
) {
    loop {
        let Some(entering) = (0..allowed).find(|&j| obj[j].is_positive()) else {
            return;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        let rhs = t[0].len() - 1;
        for (i, row) in t.iter().enumerate() {
            if row[entering].is_positive() {
                let ratio = &row[rhs] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            // Callers only pose bounded problems.
            panic!("simplex: unbounded objective in a bounded formulation");
        };
        pivot(t, obj, basis, row, entering);
    }
}

fn pivot(
    t: &mut [Vec<Rational>],
    obj: &mut [Rational],
    basis: &mut [usize],
    row: usize,
    col: usize,
) {
    let inv = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v = &*v / &inv;
    }
    let width = t[row].len();
    for r in 0..t.len() {
        if r != row && !t[r][col].is_zero() {
            let factor = t[r][col].clone();
            for c in 0..width {
                let delta = &factor * &t[row][c];
                t[r][c] = &t[r][c] - &delta;
            }
        }
    }
    if !obj[col].is_zero() {
        let factor = obj[col].clone();
        for c in 0..width {
            let delta = &factor * &t[row][c];
            obj[c] = &obj[c] - &delta;
        }
    }
    basis[row] = col;
}

fn check_dims(point: &QVector, generators: &[QVector]) -> Result<usize> {
    if generators.is_empty() {
        return Err(invalid("convex hull needs at least one generator"));
    }
    let dim = point.len();
    if generators.iter().any(|g| g.len() != dim) {
        return Err(invalid(format!(
            "dimension mismatch: point has length {dim}, generators differ"
        )));
    }
    Ok(dim)
}

/// Exact membership of `point` in the convex hull of `generators`:
/// feasibility of `Σ λ_j g_j = point, Σ λ_j = 1, λ ≥ 0`.
pub fn in_convex_hull(point: &QVector, generators: &[QVector]) -> Result<bool> {
    let dim = check_dims(point, generators)?;
    let g = generators.len();

    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    let mut b: Vec<Rational> = Vec::with_capacity(dim + 1);
    for coord in 0..dim {
        a.push(generators.iter().map(|gv| gv[coord].clone()).collect());
        b.push(point[coord].clone());
    }
    a.push(vec![Rational::one(); g]);
    b.push(Rational::one());

    let zero_obj = vec![Rational::zero(); g];
    Ok(matches!(simplex_max(&zero_obj, &a, &b), LpOutcome::Optimal(_)))
}

/// Exact membership of `point` in the interior of the hull of `generators`,
/// taken inside an ambient affine subspace of dimension `ambient_affine_dim`.
/// A hull whose affine dimension falls short of the ambient dimension has
/// empty interior there, so the answer is `false`.
///
/// Interior membership itself is the strict-barycentric characterization:
/// `point = Σ λ_j g_j` with `Σ λ_j = 1` and every `λ_j > 0`, decided by
/// maximizing the smallest coordinate with an exact simplex.
pub fn in_relative_interior(
    point: &QVector,
    generators: &[QVector],
    ambient_affine_dim: usize,
) -> Result<bool> {
    let dim = check_dims(point, generators)?;
    if affine_rank(generators) != ambient_affine_dim {
        return Ok(false);
    }

    // Variables: μ_0..μ_{g-1}, ε with λ_j = μ_j + ε. Maximize ε.
    let g = generators.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    let mut b: Vec<Rational> = Vec::with_capacity(dim + 1);
    for coord in 0..dim {
        let mut row: Vec<Rational> = generators.iter().map(|gv| gv[coord].clone()).collect();
        let mut eps_coeff = Rational::zero();
        for gv in generators {
            eps_coeff = &eps_coeff + &gv[coord];
        }
        row.push(eps_coeff);
        a.push(row);
        b.push(point[coord].clone());
    }
    let mut ones = vec![Rational::one(); g];
    ones.push(Rational::from_integer((g as i64).into()));
    a.push(ones);
    b.push(Rational::one());

    let mut obj = vec![Rational::zero(); g + 1];
    obj[g] = Rational::one();

    match simplex_max(&obj, &a, &b) {
        LpOutcome::Infeasible => Ok(false),
        LpOutcome::Optimal(eps) => Ok(eps.is_positive()),
    }
}
