//! Hilbert-Mumford evaluation, centroid-criterion stability tests,
//! intervals of stability, and the wall/chamber decomposition of the
//! stability parameter.
//!
//! Every test here is taken at the level of the full diagonal torus in the
//! fixed coordinates together with all coordinate relabelings. A pair is
//! probed through its stability-relevant reduction: the hyperplane enters
//! only through its Mukai-minimal variable (the pivot), exactly as in the
//! convex-hull formulation, so the finite sweep over fundamental
//! subgroups and relabelings and the centroid test decide the same
//! predicate.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::{Signed, Zero};
use rayon::prelude::*;

use crate::families::{maximal_families, FamilyKind};
use crate::fundamental::FundamentalSet;
use crate::kernel::{in_convex_hull, QVector};
use crate::monomial::{
    canonical_sort, enumerate_monomials, mukai_min_variable, pairing, Monomial, OneParamSubgroup,
};
use crate::{domain, invalid, Rational, Result};

/// The stability-relevant data of a pair `(X, H)`: the monomial supports
/// of its defining equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSupport {
    n: u32,
    d: u32,
    x_set: Vec<Monomial>,
    h_set: Vec<Monomial>,
}

impl PairSupport {
    pub fn new(n: u32, d: u32, x_set: Vec<Monomial>, h_set: Vec<Monomial>) -> Result<Self> {
        let vars = (n + 2) as usize;
        if x_set.is_empty() {
            return Err(invalid("pair support needs a nonempty hypersurface set"));
        }
        if h_set.is_empty() {
            return Err(invalid("pair support needs a nonempty hyperplane set"));
        }
        for m in &x_set {
            if m.vars() != vars || m.degree() != d {
                return Err(invalid(format!(
                    "hypersurface monomial {m} must have degree {d} in {vars} variables"
                )));
            }
        }
        for m in &h_set {
            if m.vars() != vars || m.degree() != 1 {
                return Err(invalid(format!(
                    "hyperplane monomial {m} must be one of the {vars} variables"
                )));
            }
        }
        let mut x_set = x_set;
        let mut h_set = h_set;
        canonical_sort(&mut x_set);
        x_set.dedup();
        canonical_sort(&mut h_set);
        h_set.dedup();
        Ok(Self { n, d, x_set, h_set })
    }

    /// Convenience constructor from raw exponent vectors and variable indices.
    pub fn from_exponents(n: u32, d: u32, x: &[Vec<u32>], h_vars: &[usize]) -> Result<Self> {
        let vars = (n + 2) as usize;
        for &i in h_vars {
            if i >= vars {
                return Err(invalid(format!("variable index {i} out of range")));
            }
        }
        let x_set = x.iter().map(|e| Monomial::new(e.clone())).collect();
        let h_set = h_vars.iter().map(|&i| Monomial::variable(i, vars)).collect();
        Self::new(n, d, x_set, h_set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn x_set(&self) -> &[Monomial] {
        &self.x_set
    }

    pub fn h_set(&self) -> &[Monomial] {
        &self.h_set
    }

    /// Index of the Mukai-minimal variable of `H`.
    pub fn pivot_index(&self) -> usize {
        mukai_min_variable(&self.h_set)
            .expect("validated nonempty")
            .variable_index()
            .expect("validated degree one")
    }
}

/// `μ(X, λ)`: minimum pairing over the support of `X`.
pub fn mu(x_set: &[Monomial], lambda: &OneParamSubgroup) -> Result<i64> {
    if x_set.is_empty() {
        return Err(invalid("mu of an empty monomial set"));
    }
    let mut best: Option<i64> = None;
    for m in x_set {
        let v = pairing(m, lambda)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    Ok(best.expect("nonempty"))
}

/// `μ_t(X, H, λ) = μ(X, λ) + t · min{ r_i : x_i ∈ H }`.
pub fn mu_t(p: &PairSupport, lambda: &OneParamSubgroup, t: &Rational) -> Result<Rational> {
    let x_part = mu(&p.x_set, lambda)?;
    let h_part = mu(&p.h_set, lambda)?;
    Ok(Rational::from_integer(x_part.into()) + t * Rational::from_integer(h_part.into()))
}

/// Upper end of the stability range: `d / (n+1)`.
pub fn t_max(n: u32, d: u32) -> Rational {
    Rational::new((d as i64).into(), (n as i64 + 1).into())
}

fn binomial(n: u64, k: u64) -> i64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as i64
}

/// Dimension of the compactified moduli of pairs,
/// `C(n+d+1, d) - n^2 - 3n - 3`, defined for `d ≥ 3`.
pub fn moduli_dimension(n: u32, d: u32) -> Result<i64> {
    if d < 3 {
        return Err(domain(format!("moduli dimension requires d ≥ 3, got {d}")));
    }
    let n = n as i64;
    Ok(binomial((n + d as i64 + 1) as u64, d as u64) - n * n - 3 * n - 3)
}

/// The distinguished point `((d+t)/(n+2), ..., (d+t)/(n+2))`.
pub fn centroid(n: u32, d: u32, t: &Rational) -> QVector {
    let vars = n as i64 + 2;
    let entry = (Rational::from_integer((d as i64).into()) + t) / Rational::from_integer(vars.into());
    QVector::new(vec![entry; vars as usize])
}

/// Hull generators of the pair at `t`: each support monomial of `X`,
/// shifted by `t` in the pivot coordinate.
pub fn conv_generators(p: &PairSupport, t: &Rational) -> Vec<QVector> {
    let b = p.pivot_index();
    p.x_set
        .iter()
        .map(|m| {
            QVector::new(
                m.exponents()
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| {
                        let mut entry = Rational::from_integer((e as i64).into());
                        if i == b {
                            entry += t;
                        }
                        entry
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Centroid criterion for semistability: the centroid lies in the closed
/// hull of the shifted support.
pub fn is_semistable_torus(p: &PairSupport, t: &Rational) -> bool {
    let point = centroid(p.n, p.d, t);
    let gens = conv_generators(p, t);
    in_convex_hull(&point, &gens).expect("generators share the ambient dimension")
}

/// All distinct weight arrangements of `lambda` under coordinate
/// relabelings, each with one witnessing relabeling. Arrangement `w`
/// assigns weight `w[i]` to coordinate `i`; the witness satisfies
/// `w[i] = r[sigma[i]]`.
fn arrangements(lambda: &OneParamSubgroup) -> Vec<(Vec<i64>, Vec<usize>)> {
    let vars = lambda.len();
    let mut seen: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for sigma in (0..vars).permutations(vars) {
        let w: Vec<i64> = sigma.iter().map(|&j| lambda.weights()[j]).collect();
        seen.entry(w).or_insert(sigma);
    }
    seen.into_iter().collect()
}

fn arrangement_value(p: &PairSupport, w: &[i64], pivot: usize, t: &Rational) -> Rational {
    let x_min = p
        .x_set
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .zip(w)
                .map(|(&e, &r)| e as i64 * r)
                .sum::<i64>()
        })
        .min()
        .expect("nonempty support");
    Rational::from_integer(x_min.into()) + t * Rational::from_integer(w[pivot].into())
}

/// Stability status of a pair at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::StrictlySemistable => "strictly-semistable",
            Status::Unstable => "unstable",
        }
    }
}

/// A maximizing fundamental subgroup and coordinate relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub lambda: OneParamSubgroup,
    pub sigma: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

fn sweep_max(p: &PairSupport, t: &Rational, s_set: &FundamentalSet) -> (Rational, Witness) {
    let pivot = p.pivot_index();
    let mut best: Option<(Rational, Witness)> = None;
    for lambda in s_set.iter() {
        for (w, sigma) in arrangements(lambda) {
            let value = arrangement_value(p, &w, pivot, t);
            if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
                best = Some((
                    value,
                    Witness {
                        lambda: lambda.clone(),
                        sigma,
                    },
                ));
            }
        }
    }
    best.expect("fundamental set is nonempty")
}

/// Stability against every fundamental subgroup in every coordinate
/// relabeling: all values strictly negative. Equivalent to the centroid
/// sitting in the interior of the hull inside its ambient hyperplane.
pub fn is_stable_torus(p: &PairSupport, t: &Rational, s_set: &FundamentalSet) -> bool {
    let pivot = p.pivot_index();
    for lambda in s_set.iter() {
        for (w, _) in arrangements(lambda) {
            if !arrangement_value(p, &w, pivot, t).is_negative() {
                return false;
            }
        }
    }
    true
}

/// Full classification at `t`, with a maximizing witness when not stable.
pub fn verdict(p: &PairSupport, t: &Rational, s_set: &FundamentalSet) -> StabilityVerdict {
    let (max, witness) = sweep_max(p, t, s_set);
    if max.is_negative() {
        StabilityVerdict {
            status: Status::Stable,
            witness: None,
        }
    } else {
        StabilityVerdict {
            status: if max.is_zero() {
                Status::StrictlySemistable
            } else {
                Status::Unstable
            },
            witness: Some(witness),
        }
    }
}

/// The set `{ t ≥ 0 : pair is semistable at t }` as a closed rational
/// interval, or `None` when empty. Each fundamental subgroup arrangement
/// contributes one affine-in-`t` constraint; the interval is their
/// intersection with the ray `t ≥ 0`.
pub fn stability_interval(p: &PairSupport, s_set: &FundamentalSet) -> Option<(Rational, Rational)> {
    let pivot = p.pivot_index();
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for lambda in s_set.iter() {
        for (w, _) in arrangements(lambda) {
            let slope = w[pivot];
            let intercept = p
                .x_set
                .iter()
                .map(|m| {
                    m.exponents()
                        .iter()
                        .zip(&w)
                        .map(|(&e, &r)| e as i64 * r)
                        .sum::<i64>()
                })
                .min()
                .expect("nonempty support");
            match slope.cmp(&0) {
                std::cmp::Ordering::Equal => {
                    if intercept > 0 {
                        return None;
                    }
                }
                std::cmp::Ordering::Greater => {
                    let bound = Rational::new((-intercept).into(), slope.into());
                    if hi.as_ref().map_or(true, |h| bound < *h) {
                        hi = Some(bound);
                    }
                }
                std::cmp::Ordering::Less => {
                    let bound = Rational::new((-intercept).into(), slope.into());
                    if bound > lo {
                        lo = bound;
                    }
                }
            }
        }
    }
    let hi = hi.expect("some arrangement has positive pivot weight");
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Candidate wall values `-⟨m, λ⟩ / ⟨x_i, λ⟩` clipped to `[0, t_max]`,
/// with both endpoints always present.
pub fn candidate_walls(n: u32, d: u32, s_set: &FundamentalSet) -> Vec<Rational> {
    let tm = t_max(n, d);
    let mut walls: BTreeSet<Rational> = BTreeSet::new();
    walls.insert(Rational::zero());
    walls.insert(tm.clone());
    let monomials = enumerate_monomials(n, d);
    for lambda in s_set.iter() {
        for m in &monomials {
            let pm = pairing(m, lambda).expect("matching dimensions");
            for &ri in lambda.weights() {
                if ri == 0 {
                    continue;
                }
                let q = Rational::new((-pm).into(), ri.into());
                if !q.is_negative() && q <= tm {
                    walls.insert(q);
                }
            }
        }
    }
    walls.into_iter().collect()
}

/// One open chamber with its exact midpoint representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub lo: Rational,
    pub hi: Rational,
    pub representative: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallChamberDecomposition {
    pub n: u32,
    pub d: u32,
    pub candidates: Vec<Rational>,
    pub walls: Vec<Rational>,
    pub chambers: Vec<Chamber>,
}

type FamilySignature = Vec<(Vec<Monomial>, Vec<usize>)>;

fn family_signature(n: u32, d: u32, t: &Rational, s_set: &FundamentalSet) -> FamilySignature {
    maximal_families(n, d, t, FamilyKind::Weak, s_set)
        .expect("t within range")
        .into_iter()
        .map(|f| (f.v_set, f.b_set))
        .collect()
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2.into())
}

/// Filters the candidate walls down to the true ones: an interior
/// candidate survives only if the maximal weak-family classification at it
/// differs from the classification in both adjacent open intervals. The
/// endpoints 0 and `t_max` bound the parameter segment and are always
/// kept. Chambers are the open intervals between consecutive walls, and
/// classification constancy is re-verified at three sample points inside
/// each chamber.
pub fn wall_chamber_decomposition(
    n: u32,
    d: u32,
    s_set: &FundamentalSet,
) -> WallChamberDecomposition {
    let candidates = candidate_walls(n, d, s_set);
    let gap_mids: Vec<Rational> = candidates
        .windows(2)
        .map(|w| midpoint(&w[0], &w[1]))
        .collect();

    let mut points: Vec<Rational> = candidates.clone();
    points.extend(gap_mids.iter().cloned());
    let signatures: Vec<FamilySignature> = points
        .par_iter()
        .map(|t| family_signature(n, d, t, s_set))
        .collect();
    let (cand_sigs, mid_sigs) = signatures.split_at(candidates.len());

    let last = candidates.len() - 1;
    let mut walls: Vec<Rational> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let keep = i == 0
            || i == last
            || (cand_sigs[i] != mid_sigs[i - 1] && cand_sigs[i] != mid_sigs[i]);
        if keep {
            walls.push(c.clone());
        }
    }

    let chambers: Vec<Chamber> = walls
        .windows(2)
        .map(|w| Chamber {
            lo: w[0].clone(),
            hi: w[1].clone(),
            representative: midpoint(&w[0], &w[1]),
        })
        .collect();

    // Constancy check across each chamber at 1/4, 1/2, 3/4.
    let quarter = Rational::new(1.into(), 4.into());
    let three_quarter = Rational::new(3.into(), 4.into());
    let samples: Vec<(usize, Rational)> = chambers
        .iter()
        .enumerate()
        .flat_map(|(i, ch)| {
            let span = &ch.hi - &ch.lo;
            vec![
                (i, &ch.lo + &span * &quarter),
                (i, ch.representative.clone()),
                (i, &ch.lo + &span * &three_quarter),
            ]
        })
        .collect();
    let sample_sigs: Vec<FamilySignature> = samples
        .par_iter()
        .map(|(_, t)| family_signature(n, d, t, s_set))
        .collect();
    for pair in sample_sigs.chunks(3) {
        assert!(
            pair.windows(2).all(|w| w[0] == w[1]),
            "family classification is not constant on a chamber"
        );
    }

    WallChamberDecomposition {
        n,
        d,
        candidates,
        walls,
        chambers,
    }
}

/// Support of `X ∩ H` for a coordinate hyperplane `H = {x_i}`: the
/// monomials of `X` free of `x_i`, re-indexed to `n+1` variables. An empty
/// result signals that `x_i` divides the support of `X`.
pub fn restriction_at_tmax(p: &PairSupport) -> Result<Vec<Monomial>> {
    if p.h_set.len() != 1 {
        return Err(invalid(
            "restriction requires a single coordinate hyperplane",
        ));
    }
    let i = p.h_set[0].variable_index().expect("degree one");
    Ok(p.x_set
        .iter()
        .filter(|m| m.exponents()[i] == 0)
        .map(|m| m.drop_coordinate(i))
        .collect())
}
