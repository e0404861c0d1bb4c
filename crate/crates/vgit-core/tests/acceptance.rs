//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Expected values are either fixed by independent oracles computed inside
//! this file (brute-force enumeration, double loops) or are exact formula
//! evaluations.

use std::collections::BTreeSet;
use std::time::Instant;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use vgit_core::families::{closed_orbit_candidates, maximal_families, FamilyKind};
use vgit_core::fundamental::{fundamental_set, FundamentalSet};
use vgit_core::monomial::{enumerate_monomials, pairing, Monomial, OneParamSubgroup};
use vgit_core::stability::{
    candidate_walls, is_semistable_torus, is_stable_torus, moduli_dimension, stability_interval,
    t_max, verdict, wall_chamber_decomposition, PairSupport, Status,
};
use vgit_core::Rational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// All nonempty supports (X, H) for the given (n, d).
fn all_supports(n: u32, d: u32) -> Vec<PairSupport> {
    let monomials = enumerate_monomials(n, d);
    let vars = (n + 2) as usize;
    let mut out = Vec::new();
    for x_bits in 1u64..(1u64 << monomials.len()) {
        let x: Vec<Monomial> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| x_bits & (1 << i) != 0)
            .map(|(_, m)| m.clone())
            .collect();
        for h_bits in 1u64..(1u64 << vars) {
            let h: Vec<Monomial> = (0..vars)
                .filter(|i| h_bits & (1 << i) != 0)
                .map(|i| Monomial::variable(i, vars))
                .collect();
            out.push(PairSupport::new(n, d, x.clone(), h).unwrap());
        }
    }
    out
}

/// Candidate walls plus chamber representatives.
fn sweep_points(n: u32, d: u32, s: &FundamentalSet) -> Vec<Rational> {
    let mut points = candidate_walls(n, d, s);
    for c in wall_chamber_decomposition(n, d, s).chambers {
        points.push(c.representative);
    }
    points.sort();
    points.dedup();
    points
}

// ---------------------------------------------------------------------
// Criterion 1: independent brute-force oracle for the fundamental sets.
// ---------------------------------------------------------------------

/// Composition enumeration written from scratch (iterative odometer, no
/// shared code with the library path).
fn oracle_exponent_vectors(vars: usize, degree: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut stack: Vec<(Vec<i64>, i64)> = vec![(Vec::new(), degree)];
    while let Some((prefix, rest)) = stack.pop() {
        if prefix.len() + 1 == vars {
            let mut full = prefix.clone();
            full.push(rest);
            out.push(full);
            continue;
        }
        for take in 0..=rest {
            let mut next = prefix.clone();
            next.push(take);
            stack.push((next, rest - take));
        }
    }
    out
}

/// Plain rational Gauss elimination for the oracle, deciding existence and
/// uniqueness, independent of the library solver.
fn oracle_solve(rows: &[(Vec<i64>, i64)], unknowns: usize) -> Option<Vec<BigRational>> {
    if unknowns == 0 {
        return rows
            .iter()
            .all(|(_, rhs)| *rhs == 0)
            .then(Vec::new);
    }
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|(coeffs, rhs)| {
            coeffs
                .iter()
                .chain(std::iter::once(rhs))
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect();
    let m = a.len();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(pr) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let p = a[rank][col].clone();
        for v in a[rank].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..m {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=unknowns {
                    let d = &f * &a[rank][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for r in rank..m {
        if !a[r][unknowns].is_zero() {
            return None;
        }
    }
    if rank < unknowns {
        return None;
    }
    let mut sol = vec![BigRational::zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][unknowns].clone();
    }
    Some(sol)
}

/// Brute force over ALL subsets of the raw (undeduplicated) equation list.
fn oracle_fundamental_set(n: u32, d: u32) -> BTreeSet<Vec<i64>> {
    let vars = (n + 2) as usize;
    let unknowns = n as usize;

    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..vars - 1 {
        let mut row = vec![0i64; vars];
        row[i] = 1;
        row[i + 1] = -1;
        rows.push(row);
    }
    let exps = oracle_exponent_vectors(vars, d as i64);
    for i in 0..exps.len() {
        for j in i + 1..exps.len() {
            let diff: Vec<i64> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a - b).collect();
            rows.push(diff);
        }
    }

    // Substitute γ0 = 1 and γ_{n+1} = -1 - Σ γi once per row. A subset of
    // equal rows poses the same system as one of them, so enumerating
    // subsets of the exactly-distinct reduced rows covers every subset of
    // the raw list.
    let reduced: BTreeSet<(Vec<i64>, i64)> = rows
        .iter()
        .map(|row| {
            let last = row[vars - 1];
            let coeffs: Vec<i64> = (1..=unknowns).map(|i| row[i] - last).collect();
            (coeffs, last - row[0])
        })
        .collect();
    let reduced: Vec<(Vec<i64>, i64)> = reduced.into_iter().collect();
    assert!(reduced.len() <= 24, "mask width exceeded");

    let mut found = BTreeSet::new();
    for mask in 0u64..(1u64 << reduced.len()) {
        let chosen: Vec<(Vec<i64>, i64)> = reduced
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.clone())
            .collect();
        let Some(sol) = oracle_solve(&chosen, unknowns) else {
            continue;
        };
        let mut gamma = vec![BigRational::one()];
        gamma.extend(sol.iter().cloned());
        let mut tail = -BigRational::one();
        for v in &sol {
            tail = tail - v;
        }
        gamma.push(tail);
        if gamma.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let mut scale = BigInt::one();
        for g in &gamma {
            scale = scale.lcm(g.denom());
        }
        let weights: Vec<i64> = gamma
            .iter()
            .map(|g| i64::try_from(&(g.numer() * (&scale / g.denom()))).unwrap())
            .collect();
        if weights.iter().any(|&w| w != 0) {
            found.insert(weights);
        }
    }
    found
}

#[test]
fn criterion_1_fundamental_set_oracle() {
    let start = Instant::now();

    let expected_12: BTreeSet<Vec<i64>> =
        [vec![1, 1, -2], vec![2, -1, -1], vec![1, 0, -1]].into_iter().collect();
    assert_eq!(oracle_fundamental_set(1, 2), expected_12);
    let computed_12: BTreeSet<Vec<i64>> = fundamental_set(1, 2)
        .iter()
        .map(|l| l.weights().to_vec())
        .collect();
    assert_eq!(computed_12, expected_12);

    let expected_02: BTreeSet<Vec<i64>> = [vec![1, -1]].into_iter().collect();
    assert_eq!(oracle_fundamental_set(0, 2), expected_02);
    let computed_02: BTreeSet<Vec<i64>> = fundamental_set(0, 2)
        .iter()
        .map(|l| l.weights().to_vec())
        .collect();
    assert_eq!(computed_02, expected_02);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1s");
    println!("criterion 1 (fundamental-set oracle, < 1s): PASS ({elapsed:?})");
}

// ---------------------------------------------------------------------
// Criterion 2: centroid criterion vs. the finite sweep sign test.
// ---------------------------------------------------------------------

#[test]
fn criterion_2_criterion_equivalence() {
    let start = Instant::now();
    let mut checked = 0usize;
    for (n, d, expected_supports) in [(0u32, 2u32, 21usize), (1, 2, 441)] {
        let s = fundamental_set(n, d);
        let supports = all_supports(n, d);
        assert_eq!(supports.len(), expected_supports);
        let points = sweep_points(n, d, &s);
        for p in &supports {
            for t in &points {
                let by_hull = is_semistable_torus(p, t);
                let by_sweep = verdict(p, t, &s).status != Status::Unstable;
                assert_eq!(by_hull, by_sweep, "disagreement at {p:?}, t = {t}");
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "criterion 2 (criterion equivalence, {checked} checks, < 60s): PASS ({elapsed:?})"
    );
}

// ---------------------------------------------------------------------
// Criterion 3: intervals of stability.
// ---------------------------------------------------------------------

#[test]
fn criterion_3_interval_structure() {
    let start = Instant::now();
    for (n, d) in [(0u32, 2u32), (1, 2)] {
        let s = fundamental_set(n, d);
        let walls = candidate_walls(n, d, &s);
        let points = sweep_points(n, d, &s);
        for p in all_supports(n, d) {
            let interval = stability_interval(&p, &s);
            if let Some((a, b)) = &interval {
                assert!(a <= b);
                assert!(walls.contains(a), "endpoint {a} of {p:?} not a candidate");
                assert!(walls.contains(b), "endpoint {b} of {p:?} not a candidate");
            }
            // The semistable locus is exactly the interval.
            for t in &points {
                let inside = interval.as_ref().map_or(false, |(a, b)| a <= t && t <= b);
                assert_eq!(is_semistable_torus(&p, t), inside, "{p:?} at t = {t}");
            }
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 3 (interval structure): PASS ({elapsed:?})");
}

// ---------------------------------------------------------------------
// Criterion 4: endpoint behavior.
// ---------------------------------------------------------------------

#[test]
fn criterion_4_endpoint_theorems() {
    let start = Instant::now();
    let configs = [(0u32, 2u32), (1, 2), (1, 3), (2, 3)];

    // (a) Full-support pairs are semistable exactly on [0, t_max].
    for &(n, d) in &configs {
        let s = fundamental_set(n, d);
        let full = PairSupport::new(
            n,
            d,
            enumerate_monomials(n, d),
            enumerate_monomials(n, 1),
        )
        .unwrap();
        let tm = t_max(n, d);
        assert_eq!(
            stability_interval(&full, &s),
            Some((Rational::zero(), tm.clone())),
            "full-support interval at ({n}, {d})"
        );
        assert!(is_semistable_torus(&full, &Rational::zero()));
        assert!(is_semistable_torus(&full, &tm));
        assert!(is_semistable_torus(&full, &(&tm * rat(1, 2))));
        assert!(!is_semistable_torus(&full, &(&tm + rat(1, 7))));
    }

    // (b) A pair whose hypersurface is divisible by the pivot variable of H
    // is unstable strictly inside the range, at worst strictly semistable
    // at t_max (requires d ≤ n+2).
    for &(n, d) in &configs {
        assert!(d <= n + 2);
        let s = fundamental_set(n, d);
        let vars = (n + 2) as usize;
        let tm = t_max(n, d);
        let interior = [&tm * rat(1, 4), &tm * rat(1, 2), &tm * rat(3, 4)];
        let factors = enumerate_monomials(n, d - 1);
        for b in 0..vars {
            let divisible: Vec<Monomial> = factors
                .iter()
                .map(|f| {
                    let mut e = f.exponents().to_vec();
                    e[b] += 1;
                    Monomial::new(e)
                })
                .collect();
            for x_bits in 1u64..(1u64 << divisible.len()) {
                let x: Vec<Monomial> = divisible
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| x_bits & (1 << i) != 0)
                    .map(|(_, m)| m.clone())
                    .collect();
                for h_bits in 0u64..(1u64 << b) {
                    let mut h: Vec<Monomial> = (0..b)
                        .filter(|i| h_bits & (1 << i) != 0)
                        .map(|i| Monomial::variable(i, vars))
                        .collect();
                    h.push(Monomial::variable(b, vars));
                    let p = PairSupport::new(n, d, x.clone(), h).unwrap();
                    for t in &interior {
                        assert!(
                            !is_semistable_torus(&p, t),
                            "divisible pair {p:?} semistable at t = {t}"
                        );
                    }
                    assert!(
                        !is_stable_torus(&p, &tm, &s),
                        "divisible pair {p:?} stable at t_max"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 4 (endpoint theorems): PASS ({elapsed:?})");
}

// ---------------------------------------------------------------------
// Criterion 5: annihilator product law by brute-force double loop.
// ---------------------------------------------------------------------

#[test]
fn criterion_5_annihilator_product_law() {
    let start = Instant::now();
    let mut nonempty = 0usize;
    for n in 0..=1u32 {
        for d in 1..=3u32 {
            let s = fundamental_set(n, d);
            let tm = t_max(n, d);
            let vars = (n + 2) as usize;
            let monomials = enumerate_monomials(n, d);
            for t in candidate_walls(n, d, &s) {
                if t.is_zero() || t == tm {
                    continue;
                }
                for lambda in s.iter() {
                    for pivot in 0..vars {
                        // Brute-force double loop over the weak family.
                        let r_pivot = rat(lambda.weights()[pivot], 1);
                        let v_weak: Vec<&Monomial> = monomials
                            .iter()
                            .filter(|m| {
                                let w = rat(pairing(m, lambda).unwrap(), 1);
                                !(w + &t * &r_pivot).is_negative()
                            })
                            .collect();
                        let mut zero_pairs: BTreeSet<(Vec<u32>, usize)> = BTreeSet::new();
                        for v in &v_weak {
                            for i in 0..=pivot {
                                let w = rat(pairing(v, lambda).unwrap(), 1)
                                    + &t * rat(lambda.weights()[i], 1);
                                if w.is_zero() {
                                    zero_pairs.insert((v.exponents().to_vec(), i));
                                }
                            }
                        }
                        let data = vgit_core::families::annihilator(d, lambda, pivot, &t)
                            .unwrap();
                        match data {
                            None => assert!(zero_pairs.is_empty()),
                            Some(ann) => {
                                nonempty += 1;
                                let mut product: BTreeSet<(Vec<u32>, usize)> = BTreeSet::new();
                                for v in &ann.v0 {
                                    for &i in &ann.b0 {
                                        product.insert((v.exponents().to_vec(), i));
                                    }
                                }
                                assert_eq!(
                                    product, zero_pairs,
                                    "λ={lambda:?} pivot={pivot} t={t}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30s");
    assert!(nonempty > 0, "sweep exercised no nonempty annihilators");
    println!(
        "criterion 5 (annihilator product law, {nonempty} nonempty cases, < 30s): PASS ({elapsed:?})"
    );
}

// ---------------------------------------------------------------------
// Criterion 6: closed-orbit candidates.
// ---------------------------------------------------------------------

#[test]
fn criterion_6_closed_orbit_consistency() {
    let start = Instant::now();
    for (n, d) in [(0u32, 2u32), (1, 2), (1, 3)] {
        let s = fundamental_set(n, d);
        let vars = (n + 2) as usize;
        for t in sweep_points(n, d, &s) {
            let report = closed_orbit_candidates(n, d, &t, &s).unwrap();
            for c in &report.candidates {
                let h: Vec<Monomial> =
                    c.b0.iter().map(|&i| Monomial::variable(i, vars)).collect();
                let p = PairSupport::new(n, d, c.v0.clone(), h).unwrap();
                assert_eq!(
                    verdict(&p, &t, &s).status,
                    Status::StrictlySemistable,
                    "candidate {c:?} at t = {t}"
                );
            }
        }
    }

    let s = fundamental_set(0, 2);
    let report = closed_orbit_candidates(0, 2, &rat(2, 1), &s).unwrap();
    assert_eq!(report.candidates.len(), 1);
    assert_eq!(report.candidates[0].v0, vec![Monomial::new(vec![2, 0])]);
    assert_eq!(report.candidates[0].b0, vec![1]);

    let elapsed = start.elapsed();
    println!("criterion 6 (closed-orbit consistency): PASS ({elapsed:?})");
}

// ---------------------------------------------------------------------
// Criterion 7: utility formulas.
// ---------------------------------------------------------------------

#[test]
fn criterion_7_utility_formulas() {
    assert_eq!(t_max(2, 3), rat(1, 1));
    assert_eq!(t_max(3, 3), rat(3, 4));
    assert_eq!(moduli_dimension(2, 3).unwrap(), 7);
    println!("criterion 7 (utility formulas): PASS");
}

// ---------------------------------------------------------------------
// Criterion 8: cubic-surface-scale pipeline, timing and determinism.
// ---------------------------------------------------------------------

fn render_pipeline(n: u32, d: u32, s: &FundamentalSet) -> String {
    let mut out = String::new();
    for l in s.iter() {
        out.push_str(&format!("{:?}\n", l.weights()));
    }
    let dec = wall_chamber_decomposition(n, d, s);
    out.push_str(&format!("candidates {:?}\n", dec.candidates));
    out.push_str(&format!("walls {:?}\n", dec.walls));
    let mut points: Vec<Rational> = dec.walls.clone();
    points.extend(dec.chambers.iter().map(|c| c.representative.clone()));
    points.sort();
    points.dedup();
    for t in &points {
        for kind in [FamilyKind::Weak, FamilyKind::Strict] {
            let fams = maximal_families(n, d, t, kind, s).unwrap();
            out.push_str(&format!("t {t} kind {} families {}\n", kind.symbol(), fams.len()));
            for f in fams {
                out.push_str(&format!(
                    "  {:?} pivot {} V {:?} B {:?}\n",
                    f.lambda.weights(),
                    f.pivot,
                    f.v_set.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
                    f.b_set
                ));
            }
        }
    }
    out
}

#[test]
fn criterion_8_scale_and_determinism() {
    let start = Instant::now();
    let s = fundamental_set(2, 3);

    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let run1 = pool1.install(|| render_pipeline(2, 3, &s));
    let run4 = pool4.install(|| render_pipeline(2, 3, &s));
    let rerun = pool4.install(|| render_pipeline(2, 3, &s));
    assert_eq!(run1, run4, "outputs differ across worker counts");
    assert_eq!(run4, rerun, "outputs differ across runs");

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "took {elapsed:?}, budget 5 minutes"
    );
    println!(
        "criterion 8 (full (2,3) pipeline x3, byte-identical, < 5 min): PASS ({elapsed:?})"
    );
}
