//! Monomials of fixed degree, diagonal one-parameter subgroups, the
//! weight pairing between them, and the Mukai partial order.
//!
//! Ambient dimension is always `n + 2`: coordinates `x0..x{n+1}` of
//! projective (n+1)-space. The canonical order on monomials of one degree
//! is lexicographic descending on exponent vectors, so `x0^k` comes first
//! and `x{n+1}^k` last.

use crate::{invalid, Error, Result};

/// A monomial `x0^a0 * ... * x{n+1}^a{n+1}` stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    /// The monomial `x_i` in `vars` variables.
    pub fn variable(index: usize, vars: usize) -> Self {
        let mut exponents = vec![0; vars];
        exponents[index] = 1;
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Number of variables (ambient `n + 2`).
    pub fn vars(&self) -> usize {
        self.exponents.len()
    }

    /// Index of the variable for a degree-one monomial.
    pub fn variable_index(&self) -> Option<usize> {
        if self.degree() != 1 {
            return None;
        }
        self.exponents.iter().position(|&e| e == 1)
    }

    /// Exponent vector with the given coordinate removed.
    pub fn drop_coordinate(&self, index: usize) -> Self {
        let mut exponents = self.exponents.clone();
        exponents.remove(index);
        Self { exponents }
    }

    /// Image under a coordinate relabeling: coordinate `i` moves to
    /// position `sigma[i]`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let mut exponents = vec![0; self.exponents.len()];
        for (i, &e) in self.exponents.iter().enumerate() {
            exponents[sigma[i]] = e;
        }
        Self { exponents }
    }

    /// Text form `x0^2*x1`; unit exponents lose the caret, zero exponents
    /// are omitted entirely.
    pub fn text_form(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text_form())
    }
}

/// A diagonal one-parameter subgroup of SL(n+2): an integer weight vector
/// summing to zero, not identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneParamSubgroup {
    weights: Vec<i64>,
}

impl OneParamSubgroup {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(invalid("one-parameter subgroup must be nonzero"));
        }
        if weights.iter().sum::<i64>() != 0 {
            return Err(invalid("one-parameter subgroup weights must sum to zero"));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Normalized means the weights are non-increasing.
    pub fn is_normalized(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Sorts a monomial list into the canonical (lex descending) order.
pub fn canonical_sort(monomials: &mut [Monomial]) {
    monomials.sort_by(|a, b| b.cmp(a));
}

/// All monomials of degree `k` in `n + 2` variables, in canonical order.
/// The count is `C(n+1+k, k)`.
pub fn enumerate_monomials(n: u32, k: u32) -> Vec<Monomial> {
    let vars = (n + 2) as usize;
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fill(&mut out, &mut current, 0, k);
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    // Descending leading exponent yields lex-descending output.
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// The pairing `⟨m, λ⟩ = Σ a_i r_i`.
pub fn pairing(m: &Monomial, lambda: &OneParamSubgroup) -> Result<i64> {
    if m.vars() != lambda.len() {
        return Err(Error::InvalidInput(format!(
            "pairing length mismatch: monomial has {} variables, subgroup {}",
            m.vars(),
            lambda.len()
        )));
    }
    Ok(m.exponents()
        .iter()
        .zip(lambda.weights())
        .map(|(&a, &r)| a as i64 * r)
        .sum())
}

/// Mukai order: `v ≤ m` iff `⟨v, λ⟩ ≤ ⟨m, λ⟩` for every normalized λ.
/// Equivalent to prefix-sum dominance of the exponent vectors, which is the
/// pairing test against the extremal rays of the normalized-weight cone.
pub fn mukai_leq(v: &Monomial, m: &Monomial) -> Result<bool> {
    if v.degree() != m.degree() || v.vars() != m.vars() {
        return Err(invalid("mukai_leq requires equal degree and dimension"));
    }
    let mut pv = 0i64;
    let mut pm = 0i64;
    for (&a, &b) in v.exponents().iter().zip(m.exponents()) {
        pv += a as i64;
        pm += b as i64;
        if pv > pm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Mukai-minimal variable of a nonempty set of degree-one monomials:
/// on `Ξ_1` the order is total with `x0 > x1 > ... > x{n+1}`, so the
/// minimum is the variable with the largest index.
pub fn mukai_min_variable(h: &[Monomial]) -> Result<Monomial> {
    if h.is_empty() {
        return Err(invalid("mukai_min_variable on an empty set"));
    }
    let mut best: Option<(usize, &Monomial)> = None;
    for m in h {
        let idx = m
            .variable_index()
            .ok_or_else(|| invalid(format!("{m} is not a variable")))?;
        if best.map_or(true, |(bi, _)| idx > bi) {
            best = Some((idx, m));
        }
    }
    Ok(best.expect("nonempty").1.clone())
}
