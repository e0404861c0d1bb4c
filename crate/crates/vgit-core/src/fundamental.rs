//! Enumeration of the fundamental finite set `S(n,d)` of normalized
//! one-parameter subgroups, together with its on-disk cache.
//!
//! An element is a primitive integer weight vector `c·(γ0,...,γ{n+1})`
//! where `γ0 = 1 ≥ γ1 ≥ ... ≥ γ{n+1} = -1 - Σγi` and the `γi` solve a
//! uniquely-determined linear system built from `n` rows of the equation
//! pool: the chain equations `γi - γ{i+1} = 0` together with all pairwise
//! differences of degree-`d` exponent vectors.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use num::{BigInt, Integer, One};
use serde::{Deserialize, Serialize};

use crate::kernel::{solve_unique, LinearSystem, QVector};
use crate::monomial::{enumerate_monomials, OneParamSubgroup};
use crate::{invalid, Rational, Result};

/// The computed set for one `(n, d)`, sorted in canonical vector order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalSet {
    pub n: u32,
    pub d: u32,
    pub elements: Vec<OneParamSubgroup>,
}

impl FundamentalSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OneParamSubgroup> {
        self.elements.iter()
    }
}

/// Canonical integer form of a pool row: content 1, first nonzero entry
/// positive. Returns `None` for the zero row.
fn canonical_row(mut row: Vec<i64>) -> Option<Vec<i64>> {
    let mut g: i64 = 0;
    for &v in &row {
        g = g.gcd(&v);
    }
    if g == 0 {
        return None;
    }
    for v in row.iter_mut() {
        *v /= g;
    }
    if let Some(first) = row.iter().find(|&&v| v != 0) {
        if *first < 0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
    }
    Some(row)
}

fn equation_pool_rows(n: u32, d: u32) -> Vec<Vec<i64>> {
    let vars = (n + 2) as usize;
    let mut pool: BTreeSet<Vec<i64>> = BTreeSet::new();

    // Chain equations γi - γ{i+1} = 0 for i = 0..=n.
    for i in 0..vars - 1 {
        let mut row = vec![0i64; vars];
        row[i] = 1;
        row[i + 1] = -1;
        pool.insert(row);
    }

    // Differences of distinct degree-d exponent vectors.
    let monomials = enumerate_monomials(n, d);
    for (a, b) in monomials.iter().tuple_combinations() {
        let row: Vec<i64> = a
            .exponents()
            .iter()
            .zip(b.exponents())
            .map(|(&x, &y)| x as i64 - y as i64)
            .collect();
        if let Some(row) = canonical_row(row) {
            pool.insert(row);
        }
    }

    pool.into_iter().collect()
}

/// The deduplicated coefficient pool of Definition-style equations in the
/// variables `γ0..γ{n+1}`, sorted canonically.
pub fn equation_pool(n: u32, d: u32) -> Vec<QVector> {
    equation_pool_rows(n, d)
        .into_iter()
        .map(|row| QVector::from_ints(&row))
        .collect()
}

/// Substitutes `γ0 = 1` and `γ{n+1} = -1 - Σ_{i=1..n} γi` into a pool row,
/// producing one equation in the unknowns `γ1..γn`.
fn reduce_row(row: &[i64], n: usize) -> (Vec<i64>, i64) {
    let last = row[n + 1];
    let coeffs: Vec<i64> = (1..=n).map(|i| row[i] - last).collect();
    let rhs = last - row[0];
    (coeffs, rhs)
}

/// Full γ-vector from a solution of the reduced system.
fn gamma_vector(solution: &[Rational]) -> Vec<Rational> {
    let one = Rational::one();
    let mut gamma = Vec::with_capacity(solution.len() + 2);
    gamma.push(one.clone());
    gamma.extend_from_slice(solution);
    let mut tail = -one;
    for v in solution {
        tail = tail - v;
    }
    gamma.push(tail);
    gamma
}

fn chain_holds(gamma: &[Rational]) -> bool {
    gamma.windows(2).all(|w| w[0] >= w[1])
}

/// Clears denominators by the lcm, yielding the primitive integer weights.
fn scale_to_integer(gamma: &[Rational]) -> Option<Vec<i64>> {
    let mut scale = BigInt::one();
    for g in gamma {
        scale = scale.lcm(g.denom());
    }
    let mut weights = Vec::with_capacity(gamma.len());
    for g in gamma {
        let w = g.numer() * (&scale / g.denom());
        weights.push(i64::try_from(&w).ok()?);
    }
    if weights.iter().all(|&w| w == 0) {
        return None;
    }
    Some(weights)
}

fn solutions_for_subsets<'a, I>(n: u32, subsets: I) -> BTreeSet<Vec<i64>>
where
    I: Iterator<Item = Vec<&'a Vec<i64>>>,
{
    let n = n as usize;
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    for subset in subsets {
        let solution: Vec<Rational> = if n == 0 {
            Vec::new()
        } else {
            let mut rows = Vec::with_capacity(subset.len());
            let mut rhs = Vec::with_capacity(subset.len());
            for row in &subset {
                let (coeffs, r) = reduce_row(row, n);
                rows.push(QVector::from_ints(&coeffs));
                rhs.push(Rational::from_integer(r.into()));
            }
            let Ok(system) = LinearSystem::new(rows, rhs) else {
                continue;
            };
            match solve_unique(&system) {
                Some(sol) => sol.entries().to_vec(),
                None => continue,
            }
        };
        let gamma = gamma_vector(&solution);
        if !chain_holds(&gamma) {
            continue;
        }
        if let Some(weights) = scale_to_integer(&gamma) {
            found.insert(weights);
        }
    }
    found
}

/// Computes `S(n,d)` by brute force over all `n`-subsets of the pool.
pub fn fundamental_set(n: u32, d: u32) -> FundamentalSet {
    let pool = equation_pool_rows(n, d);
    let weights = solutions_for_subsets(n, pool.iter().combinations(n as usize));
    let elements = weights
        .into_iter()
        .map(|w| OneParamSubgroup::new(w).expect("nonzero sum-zero weights"))
        .collect();
    FundamentalSet { n, d, elements }
}

const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    n: u32,
    d: u32,
    elements: Vec<Vec<i64>>,
}

fn cache_path(dir: &Path, n: u32, d: u32) -> PathBuf {
    dir.join(format!("s_n{n}_d{d}.json"))
}

/// Reads a cached set, returning `None` on any mismatch or absence.
pub fn load_cached(dir: &Path, n: u32, d: u32) -> Option<FundamentalSet> {
    let bytes = std::fs::read(cache_path(dir, n, d)).ok()?;
    let file: CacheFile = serde_json::from_slice(&bytes).ok()?;
    if file.format_version != CACHE_FORMAT_VERSION || file.n != n || file.d != d {
        return None;
    }
    let mut elements = Vec::with_capacity(file.elements.len());
    for w in file.elements {
        elements.push(OneParamSubgroup::new(w).ok()?);
    }
    Some(FundamentalSet { n, d, elements })
}

/// Writes the cache file atomically (temp file + rename).
pub fn store_cached(dir: &Path, set: &FundamentalSet) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let file = CacheFile {
        format_version: CACHE_FORMAT_VERSION,
        n: set.n,
        d: set.d,
        elements: set.elements.iter().map(|l| l.weights().to_vec()).collect(),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &file)?;
    tmp.write_all(b"\n")?;
    tmp.persist(cache_path(dir, set.n, set.d))
        .map_err(|e| crate::Error::Io(e.error))?;
    Ok(())
}

/// Cache-backed accessor: loads when present, otherwise computes and tries
/// to populate the cache (failure to write only degrades to a recompute
/// next time).
pub fn fundamental_set_cached(dir: &Path, n: u32, d: u32) -> (FundamentalSet, Option<crate::Error>) {
    if let Some(set) = load_cached(dir, n, d) {
        return (set, None);
    }
    let set = fundamental_set(n, d);
    let warn = store_cached(dir, &set).err();
    (set, warn)
}

/// Verifies the defining conditions for a claimed member independently of
/// the search that produced it: primitive integer weights with `γ0`-scaling,
/// the monotone chain, and the existence of an `n`-row pool subsystem with
/// this as its unique solution.
pub fn satisfies_definition(n: u32, d: u32, lambda: &OneParamSubgroup) -> Result<bool> {
    let vars = (n + 2) as usize;
    if lambda.len() != vars {
        return Err(invalid("wrong ambient dimension"));
    }
    let w = lambda.weights();
    if w[0] <= 0 || !lambda.is_normalized() || w.iter().sum::<i64>() != 0 {
        return Ok(false);
    }
    // Primitivity: c = lcm of the γ denominators makes gcd of weights 1.
    let mut g = 0i64;
    for &v in w {
        g = g.gcd(&v);
    }
    if g != 1 {
        return Ok(false);
    }

    // Condition (3): some n-subset of the rows vanishing on γ pins it down.
    let pool = equation_pool_rows(n, d);
    let vanishing: Vec<&Vec<i64>> = pool
        .iter()
        .filter(|row| row.iter().zip(w).map(|(&c, &x)| c * x).sum::<i64>() == 0)
        .collect();
    if n == 0 {
        return Ok(w == [1, -1]);
    }
    for subset in vanishing.iter().copied().combinations(n as usize) {
        let sols = solutions_for_subsets(n, std::iter::once(subset));
        if sols.contains(&w.to_vec()) {
            return Ok(true);
        }
    }
    Ok(false)
}
