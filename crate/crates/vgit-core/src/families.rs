//! Maximal destabilizing monomial families, their annihilators, and the
//! supports of candidate strictly semistable closed orbits.
//!
//! For a normalized subgroup λ and pivot variable `x_i`, the family pairs
//! every degree-`d` monomial `v` with `⟨v, λ⟩ + t·r_i > 0` (strict kind)
//! or `≥ 0` (weak kind) against the upward-closed variable set
//! `B = {x_0, ..., x_i}`. Containment-maximal families classify all
//! non-stable supports; the weight-zero locus inside a weak family factors
//! as a cartesian product and carries the closed-orbit candidates.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::{Signed, Zero};

use crate::fundamental::FundamentalSet;
use crate::monomial::{enumerate_monomials, pairing, Monomial, OneParamSubgroup};
use crate::stability::t_max;
use crate::{domain, invalid, Rational, Result};

/// Strict families destabilize; weak families witness failure of stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    /// `+`: strict inequality.
    Strict,
    /// `⊕`: weak inequality.
    Weak,
}

impl FamilyKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            FamilyKind::Strict => "+",
            FamilyKind::Weak => "⊕",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DestabilizingFamily {
    pub lambda: OneParamSubgroup,
    /// Index of the pivot variable `x_i`.
    pub pivot: usize,
    /// Monomials `v` satisfying the defining inequality, canonical order.
    pub v_set: Vec<Monomial>,
    /// Variable indices `{0, ..., pivot}`.
    pub b_set: Vec<usize>,
    pub kind: FamilyKind,
    pub t: Rational,
}

impl DestabilizingFamily {
    pub fn pivot_monomial(&self) -> Monomial {
        Monomial::variable(self.pivot, self.lambda.len())
    }
}

fn check_family_args(lambda: &OneParamSubgroup, pivot: usize, t: &Rational) -> Result<()> {
    if !lambda.is_normalized() {
        return Err(invalid("family construction requires a normalized subgroup"));
    }
    if pivot >= lambda.len() {
        return Err(invalid(format!("pivot index {pivot} out of range")));
    }
    if t.is_negative() {
        return Err(domain("family construction requires t ≥ 0".to_string()));
    }
    Ok(())
}

fn family_from_pool(
    pool: &[Monomial],
    lambda: &OneParamSubgroup,
    pivot: usize,
    t: &Rational,
    kind: FamilyKind,
) -> DestabilizingFamily {
    let r_pivot = Rational::from_integer(lambda.weights()[pivot].into());
    let shift = t * r_pivot;
    let v_set: Vec<Monomial> = pool
        .iter()
        .filter(|m| {
            let w = Rational::from_integer(
                pairing(m, lambda).expect("matching dimensions").into(),
            );
            let value = w + shift.clone();
            match kind {
                FamilyKind::Strict => value.is_positive(),
                FamilyKind::Weak => !value.is_negative(),
            }
        })
        .cloned()
        .collect();
    DestabilizingFamily {
        lambda: lambda.clone(),
        pivot,
        v_set,
        b_set: (0..=pivot).collect(),
        kind,
        t: t.clone(),
    }
}

/// The family of `(λ, x_pivot)` at `t`. The monomial set may be empty;
/// callers building classifications drop such families.
pub fn family(
    d: u32,
    lambda: &OneParamSubgroup,
    pivot: usize,
    t: &Rational,
    kind: FamilyKind,
) -> Result<DestabilizingFamily> {
    check_family_args(lambda, pivot, t)?;
    let n = lambda.len() as u32 - 2;
    let pool = enumerate_monomials(n, d);
    Ok(family_from_pool(&pool, lambda, pivot, t, kind))
}

fn contains_all(bigger: &[Monomial], smaller: &[Monomial]) -> bool {
    smaller.iter().all(|m| bigger.contains(m))
}

/// All families over the fundamental set and every pivot, filtered to the
/// containment-maximal ones. Families with identical `(V, B)` data are
/// listed once, keyed by their first witness in the deterministic
/// generation order.
pub fn maximal_families(
    n: u32,
    d: u32,
    t: &Rational,
    kind: FamilyKind,
    s_set: &FundamentalSet,
) -> Result<Vec<DestabilizingFamily>> {
    if t.is_negative() || *t > t_max(n, d) {
        return Err(domain(format!(
            "t must lie in [0, {}], got {t}",
            t_max(n, d)
        )));
    }
    let pool = enumerate_monomials(n, d);
    let vars = (n + 2) as usize;

    let mut generated: Vec<DestabilizingFamily> = Vec::new();
    for lambda in s_set.iter() {
        for pivot in 0..vars {
            let f = family_from_pool(&pool, lambda, pivot, t, kind);
            if !f.v_set.is_empty() {
                generated.push(f);
            }
        }
    }
    generated.sort_by(|a, b| {
        (a.pivot, &a.v_set, a.lambda.weights()).cmp(&(b.pivot, &b.v_set, b.lambda.weights()))
    });

    let mut kept: Vec<DestabilizingFamily> = Vec::new();
    for f in &generated {
        let dominated = generated.iter().any(|g| {
            (g.v_set != f.v_set || g.b_set != f.b_set)
                && contains_all(&g.v_set, &f.v_set)
                && f.pivot <= g.pivot
        });
        if dominated {
            continue;
        }
        if kept
            .iter()
            .any(|k: &DestabilizingFamily| k.v_set == f.v_set && k.b_set == f.b_set)
        {
            continue;
        }
        kept.push(f.clone());
    }
    Ok(kept)
}

/// The weight-zero locus of a weak family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorData {
    pub lambda: OneParamSubgroup,
    pub pivot: usize,
    /// Monomials of the family paired to zero by some element of `B`.
    pub v0: Vec<Monomial>,
    /// Variables of `B` with minimal weight.
    pub b0: Vec<usize>,
    pub t: Rational,
}

struct AnnihilatorComputation {
    data: Option<AnnihilatorData>,
    product_law_holds: bool,
}

fn annihilator_at(
    d: u32,
    lambda: &OneParamSubgroup,
    pivot: usize,
    t: &Rational,
) -> Result<AnnihilatorComputation> {
    check_family_args(lambda, pivot, t)?;
    let fam = family(d, lambda, pivot, t, FamilyKind::Weak)?;

    let b_weights: Vec<(usize, i64)> = fam
        .b_set
        .iter()
        .map(|&i| (i, lambda.weights()[i]))
        .collect();

    let mut zero_pairs: BTreeSet<(Monomial, usize)> = BTreeSet::new();
    for v in &fam.v_set {
        let vw = Rational::from_integer(pairing(v, lambda)?.into());
        for &(i, rw) in &b_weights {
            if (&vw + t * Rational::from_integer(rw.into())).is_zero() {
                zero_pairs.insert((v.clone(), i));
            }
        }
    }
    if zero_pairs.is_empty() {
        return Ok(AnnihilatorComputation {
            data: None,
            product_law_holds: true,
        });
    }

    let min_weight = b_weights.iter().map(|&(_, w)| w).min().expect("nonempty");
    let b0: Vec<usize> = b_weights
        .iter()
        .filter(|&&(_, w)| w == min_weight)
        .map(|&(i, _)| i)
        .collect();
    let mut v0: Vec<Monomial> = zero_pairs.iter().map(|(v, _)| v.clone()).collect();
    v0.dedup();
    crate::monomial::canonical_sort(&mut v0);

    let mut product: BTreeSet<(Monomial, usize)> = BTreeSet::new();
    for v in &v0 {
        for &i in &b0 {
            product.insert((v.clone(), i));
        }
    }

    Ok(AnnihilatorComputation {
        product_law_holds: product == zero_pairs,
        data: Some(AnnihilatorData {
            lambda: lambda.clone(),
            pivot,
            v0,
            b0,
            t: t.clone(),
        }),
    })
}

/// Annihilator of `(λ, x_pivot)` at `t`, for `t` strictly inside
/// `(0, t_max)`. `None` when the weight-zero locus is empty; otherwise the
/// cartesian-product structure is verified before returning.
pub fn annihilator(
    d: u32,
    lambda: &OneParamSubgroup,
    pivot: usize,
    t: &Rational,
) -> Result<Option<AnnihilatorData>> {
    let n = lambda.len() as u32 - 2;
    if !t.is_positive() || *t >= t_max(n, d) {
        return Err(domain(format!(
            "annihilator requires t strictly inside (0, {}), got {t}",
            t_max(n, d)
        )));
    }
    let computed = annihilator_at(d, lambda, pivot, t)?;
    if !computed.product_law_holds {
        return Err(invalid(
            "annihilator zero set is not a cartesian product".to_string(),
        ));
    }
    Ok(computed.data)
}

/// One candidate closed-orbit support, canonicalized up to coordinate
/// relabeling, with every `(λ, pivot)` that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedOrbitCandidate {
    pub v0: Vec<Monomial>,
    pub b0: Vec<usize>,
    pub witnesses: Vec<(OneParamSubgroup, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedOrbitReport {
    pub n: u32,
    pub d: u32,
    pub t: Rational,
    /// Set at `t ∈ {0, t_max}`: the product structure of the annihilator
    /// is only guaranteed strictly inside, so endpoint data is advisory.
    pub boundary_warning: bool,
    pub candidates: Vec<ClosedOrbitCandidate>,
}

/// Canonical representative of `(V0, B0)` under simultaneous coordinate
/// relabeling: the image maximizing the (sorted) monomial list, ties
/// broken toward high-index `B0`.
fn canonicalize_support(v0: &[Monomial], b0: &[usize], vars: usize) -> (Vec<Monomial>, Vec<usize>) {
    let mut best: Option<(Vec<Monomial>, Vec<usize>)> = None;
    for sigma in (0..vars).permutations(vars) {
        let mut v: Vec<Monomial> = v0.iter().map(|m| m.permuted(&sigma)).collect();
        crate::monomial::canonical_sort(&mut v);
        let mut b: Vec<usize> = b0.iter().map(|&i| sigma[i]).collect();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let better = match &best {
            None => true,
            Some((bv, bb)) => (&v, &b) > (bv, bb),
        };
        if better {
            best = Some((v, b));
        }
    }
    let (v, mut b) = best.expect("at least the identity relabeling");
    b.reverse();
    (v, b)
}

/// Closed-orbit candidate supports at `t ∈ [0, t_max]`: the annihilator
/// data of every maximal weak family, deduplicated up to coordinate
/// relabeling with witnesses merged.
pub fn closed_orbit_candidates(
    n: u32,
    d: u32,
    t: &Rational,
    s_set: &FundamentalSet,
) -> Result<ClosedOrbitReport> {
    let tm = t_max(n, d);
    if t.is_negative() || *t > tm {
        return Err(domain(format!("t must lie in [0, {tm}], got {t}")));
    }
    let boundary = t.is_zero() || *t == tm;
    let vars = (n + 2) as usize;

    let mut merged: BTreeMap<(Vec<Monomial>, Vec<usize>), BTreeSet<(OneParamSubgroup, usize)>> =
        BTreeMap::new();
    for fam in maximal_families(n, d, t, FamilyKind::Weak, s_set)? {
        let computed = annihilator_at(d, &fam.lambda, fam.pivot, t)?;
        if !boundary && !computed.product_law_holds {
            return Err(invalid(
                "annihilator zero set is not a cartesian product".to_string(),
            ));
        }
        if let Some(data) = computed.data {
            let key = canonicalize_support(&data.v0, &data.b0, vars);
            merged
                .entry(key)
                .or_default()
                .insert((fam.lambda.clone(), fam.pivot));
        }
    }

    let candidates = merged
        .into_iter()
        .map(|((v0, b0), witnesses)| ClosedOrbitCandidate {
            v0,
            b0,
            witnesses: witnesses.into_iter().collect(),
        })
        .collect();

    Ok(ClosedOrbitReport {
        n,
        d,
        t: t.clone(),
        boundary_warning: boundary,
        candidates,
    })
}
