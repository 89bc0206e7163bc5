//! Exact enumeration and counting of subset-tuple families, and the tree
//! probabilities they induce.
//!
//! For an occupancy vector `p` over `[k]` and a tuple length `r`, the family
//! `S(p, r)` holds every tuple `(S_1, …, S_r)` of subsets of `[k]` in which
//! element `j` appears in exactly `p_j` subsets; `M(p, r)` is the subfamily
//! of proper tuples (no entry equals `[k]`). Tree probabilities condition on
//! `M(p, r)` and average over assignment maps; everything here is exact.

use num::bigint::{BigInt, BigUint};
use num::{One, Signed, ToPrimitive, Zero};

use crate::assignment::{AssignmentMap, AssignmentMode};
use crate::digraph::{endpoints_form_pseudo_forest, endpoints_form_tree, ArcRule};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::ratio::{ratio_u64, BigCount, Rational};
use crate::tuple::{OccupancyVector, SubsetTuple};

/// `C(n, m)` with the convention that out-of-range `m` gives 0.
pub fn binomial(n: u32, m: i64) -> BigCount {
    if m < 0 || m > n as i64 {
        return BigCount::zero();
    }
    let m = (m as u32).min(n - m as u32);
    let mut acc = BigCount::one();
    for t in 0..m {
        acc = acc * BigCount::from(n - t) / BigCount::from(t + 1);
    }
    acc
}

/// `|S(p, r)| = prod_j C(r, p_j)`: memberships are chosen independently per
/// element. Zero when some `p_j > r`.
pub fn cardinality_s(p: &OccupancyVector, r: u32) -> BigCount {
    let mut acc = BigCount::one();
    for &pj in p.counts() {
        acc *= binomial(r, pj as i64);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `|M(p, r)|` for a signed occupancy vector; any negative entry makes the
/// family empty. Accepts `r = 0`, where the only tuple is the empty one and
/// it exists exactly when `q` is the zero vector.
fn proper_family_count(q: &[i64], r: u32) -> BigCount {
    if q.iter().any(|&x| x < 0) {
        return BigCount::zero();
    }
    // Inclusion-exclusion on the number s of entries equal to [k]: the
    // remaining r-s subsets absorb occupancy q_j - s per element.
    let mut acc = BigInt::zero();
    for s in 0..=r {
        let mut term = BigInt::from(binomial(r, s as i64));
        for &qj in q {
            if term.is_zero() {
                break;
            }
            term *= BigInt::from(binomial(r - s, qj - s as i64));
        }
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    assert!(!acc.is_negative(), "count must be non-negative");
    acc.to_biguint().expect("non-negative")
}

/// `|M(p, r)|`, the number of proper tuples with occupancy `p`.
pub fn cardinality_m(p: &OccupancyVector, r: u32) -> BigCount {
    let q: Vec<i64> = p.counts().iter().map(|&x| x as i64).collect();
    proper_family_count(&q, r)
}

/// Dense expansion of the generating polynomial whose coefficient at
/// `x_1^{p_1} ··· x_k^{p_k}` is `|M(p, r)|`: the `r`-th power of the sum of
/// `x^U` over proper subsets `U` of `[k]`, truncated at per-variable degree
/// caps.
///
/// This is an independent route to the same counts as [`cardinality_m`]
/// (polynomial multiplication versus a closed-form alternating sum).
pub struct ProperCountPolynomial {
    k: u32,
    dims: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<i128>,
}

impl ProperCountPolynomial {
    /// Expands the polynomial for ground-set size `k`, power `r`, keeping
    /// exponents up to `degree_caps[j]` in variable `j+1`.
    pub fn expand(k: u32, r: u32, degree_caps: &[u32]) -> Self {
        assert!((1..=20).contains(&k), "k out of range");
        assert_eq!(degree_caps.len(), k as usize);
        assert!(r >= 1, "power must be at least 1");
        let dims: Vec<usize> = degree_caps.iter().map(|&c| c as usize + 1).collect();
        let cells: u128 = dims.iter().map(|&d| d as u128).product();
        assert!(
            cells <= 1 << 26,
            "coefficient table would need {cells} cells; desk scale only"
        );
        let mut strides = vec![0usize; k as usize];
        let mut acc = 1usize;
        for j in (0..k as usize).rev() {
            strides[j] = acc;
            acc *= dims[j];
        }
        let total = acc;
        let full = (1u32 << k) - 1;
        // Offset of each proper subset's exponent shift in the dense table.
        let offsets: Vec<usize> = (0..full)
            .map(|u| {
                (0..k as usize)
                    .filter(|&j| u >> j & 1 == 1)
                    .map(|j| strides[j])
                    .sum()
            })
            .collect();

        let mut coeffs = vec![0i128; total];
        coeffs[0] = 1;
        let mut scratch = vec![0i128; total];
        for _ in 0..r {
            scratch.iter_mut().for_each(|c| *c = 0);
            let mut exps = vec![0usize; k as usize];
            for idx in 0..total {
                // Bitmask of variables with a nonzero exponent at this cell.
                let mut nz = 0u32;
                for (j, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        nz |= 1 << j;
                    }
                }
                let mut sum = 0i128;
                for (u, &off) in offsets.iter().enumerate() {
                    if u as u32 & !nz == 0 {
                        sum += coeffs[idx - off];
                    }
                }
                scratch[idx] = sum;
                // Odometer step, last variable fastest.
                for j in (0..k as usize).rev() {
                    exps[j] += 1;
                    if exps[j] < dims[j] {
                        break;
                    }
                    exps[j] = 0;
                }
            }
            std::mem::swap(&mut coeffs, &mut scratch);
        }
        Self {
            k,
            dims,
            strides,
            coeffs,
        }
    }

    /// Coefficient at the monomial with exponents `p`; zero beyond the caps.
    pub fn coefficient(&self, p: &OccupancyVector) -> BigCount {
        assert_eq!(p.k(), self.k, "occupancy length does not match k");
        let mut idx = 0usize;
        for (j, &pj) in p.counts().iter().enumerate() {
            if pj as usize >= self.dims[j] {
                return BigCount::zero();
            }
            idx += pj as usize * self.strides[j];
        }
        let c = self.coeffs[idx];
        assert!(c >= 0, "count must be non-negative");
        BigCount::from(c as u128)
    }
}

/// `|M(p, r)|` by coefficient extraction from [`ProperCountPolynomial`].
pub fn cardinality_m_by_coefficient(p: &OccupancyVector, r: u32) -> BigCount {
    ProperCountPolynomial::expand(p.k(), r, p.counts()).coefficient(p)
}

/// Streaming enumeration of `S(p, r)` (or `M(p, r)` with `proper_only`) in a
/// fixed order: for each element, the choice of which subsets contain it
/// runs lexicographically, element 1 varying slowest.
pub struct TupleIter {
    k: u32,
    r: u32,
    choices: Vec<Vec<u32>>,
    idx: Vec<usize>,
    proper_only: bool,
    exhausted: bool,
}

impl TupleIter {
    fn advance(&mut self) {
        for d in (0..self.idx.len()).rev() {
            self.idx[d] += 1;
            if self.idx[d] < self.choices[d].len() {
                return;
            }
            self.idx[d] = 0;
        }
        self.exhausted = true;
    }

    fn current(&self) -> SubsetTuple {
        let mut bits = vec![0u32; self.r as usize];
        for (j, (&ix, masks)) in self.idx.iter().zip(&self.choices).enumerate() {
            let membership = masks[ix];
            for (t, b) in bits.iter_mut().enumerate() {
                *b |= (membership >> t & 1) << j;
            }
        }
        SubsetTuple::new(bits.into_iter().map(|b| SubsetMask::new(b, self.k)).collect())
    }
}

impl Iterator for TupleIter {
    type Item = SubsetTuple;

    fn next(&mut self) -> Option<SubsetTuple> {
        while !self.exhausted {
            let t = self.current();
            self.advance();
            if !self.proper_only || t.is_proper() {
                return Some(t);
            }
        }
        None
    }
}

/// All membership masks of `c` out of `r` subsets, in lexicographic order of
/// the ascending index lists.
fn combination_masks(r: u32, c: u32) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(start: u32, r: u32, remaining: u32, acc: u32, out: &mut Vec<u32>) {
        if remaining == 0 {
            out.push(acc);
            return;
        }
        for t in start..r {
            if r - t < remaining {
                break;
            }
            rec(t + 1, r, remaining - 1, acc | 1 << t, out);
        }
    }
    rec(0, r, c, 0, &mut out);
    out
}

/// Yields each tuple of `S(p, r)` exactly once (`M(p, r)` when
/// `proper_only`). Infeasible `p` gives an empty stream.
pub fn tuples(p: &OccupancyVector, r: u32, proper_only: bool) -> TupleIter {
    assert!(r >= 1, "tuple length r must be at least 1");
    let k = p.k();
    let infeasible = p.counts().iter().any(|&pj| pj > r);
    let choices: Vec<Vec<u32>> = if infeasible {
        Vec::new()
    } else {
        p.counts().iter().map(|&pj| combination_masks(r, pj)).collect()
    };
    TupleIter {
        k,
        r,
        idx: vec![0; choices.len()],
        choices,
        proper_only,
        exhausted: infeasible,
    }
}

/// Streaming enumeration of assignment maps `[k-1] -> [r]` of the requested
/// mode, value vectors ascending lexicographically with `f(1)` slowest.
pub struct AssignmentIter {
    r: u32,
    mode: AssignmentMode,
    values: Vec<u32>,
    exhausted: bool,
}

impl AssignmentIter {
    fn advance(&mut self) {
        if self.mode == AssignmentMode::Identity {
            self.exhausted = true;
            return;
        }
        for d in (0..self.values.len()).rev() {
            self.values[d] += 1;
            if self.values[d] <= self.r {
                return;
            }
            self.values[d] = 1;
        }
        self.exhausted = true;
    }

    fn onto(&self) -> bool {
        let mut hit = 0u32;
        for &v in &self.values {
            hit |= 1 << (v - 1);
        }
        hit == (1 << self.r) - 1
    }
}

impl Iterator for AssignmentIter {
    type Item = AssignmentMap;

    fn next(&mut self) -> Option<AssignmentMap> {
        while !self.exhausted {
            if self.mode == AssignmentMode::Surjection && !self.onto() {
                self.advance();
                continue;
            }
            let map = AssignmentMap::new(self.values.clone(), self.r, self.mode);
            self.advance();
            return Some(map);
        }
        None
    }
}

/// Yields each assignment map of the requested mode exactly once.
pub fn assignments(k: u32, r: u32, mode: AssignmentMode) -> Result<AssignmentIter> {
    assert!(k >= 2, "assignments need k >= 2");
    assert!(r >= 1, "assignments need r >= 1");
    match mode {
        AssignmentMode::Surjection if r > k - 1 => {
            return Err(Error::SurjectionInfeasible { k, r })
        }
        AssignmentMode::Identity if r != k - 1 => {
            return Err(Error::IdentityInfeasible { k, r })
        }
        _ => {}
    }
    let values = match mode {
        AssignmentMode::Identity => (1..k).collect(),
        _ => vec![1; (k - 1) as usize],
    };
    Ok(AssignmentIter {
        r,
        mode,
        values,
        exhausted: false,
    })
}

/// Number of assignment maps of the requested mode. Surjections come from
/// inclusion-exclusion over missed targets.
pub fn count_assignments(k: u32, r: u32, mode: AssignmentMode) -> Result<BigCount> {
    assert!(k >= 2, "assignments need k >= 2");
    assert!(r >= 1, "assignments need r >= 1");
    match mode {
        AssignmentMode::Surjection => {
            if r > k - 1 {
                return Err(Error::SurjectionInfeasible { k, r });
            }
            let mut acc = BigInt::zero();
            for t in 0..=r {
                let term = BigInt::from(binomial(r, t as i64))
                    * BigInt::from(r - t).pow(k - 1);
                if t % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            Ok(acc.to_biguint().expect("non-negative"))
        }
        AssignmentMode::Function => Ok(BigCount::from(r).pow(k - 1)),
        AssignmentMode::Identity => {
            if r != k - 1 {
                return Err(Error::IdentityInfeasible { k, r });
            }
            Ok(BigCount::one())
        }
    }
}

/// Exhaustive statistics of one `(p, r, mode)` cell: proper-tuple count,
/// assignment count, per-rule acceptance counts over all pairs, and the
/// tuple-level statistics of `S_1` used by the closed-form restatements.
#[derive(Clone, Debug)]
pub(crate) struct PairCounts {
    pub m_count: u64,
    pub n_assignments: u64,
    pub hits: [u64; 4],
    pub k_not_in_s1: u64,
    pub s1_equals_two_to_k: u64,
    pub s1_size_k_minus_1: u64,
    pub s1_empty: u64,
}

impl PairCounts {
    /// Acceptance probability for one rule, conditioned on proper tuples.
    pub fn probability(&self, rule: ArcRule) -> Rational {
        ratio_u64(self.hits[rule.idx()], self.m_count * self.n_assignments)
    }

    /// Fraction of proper tuples whose `S_1` satisfies the given counter.
    pub fn s1_fraction(&self, count: u64) -> Rational {
        ratio_u64(count, self.m_count)
    }
}

/// Most assignment maps one exact cell may enumerate; factorial growth in
/// k makes anything beyond this unusable anyway.
const MAX_ASSIGNMENT_MAPS: u64 = 1 << 20;

/// Runs the brute-force sweep over `M(p, r) x assignments(mode)`, scoring
/// each pair's digraph under all four rules with `accept`.
pub(crate) fn pair_counts(
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
    accept: fn(u32, &[u32], &mut [u8]) -> bool,
) -> Result<PairCounts> {
    let k = p.k();
    assert!(k >= 2, "tree probabilities need k >= 2");
    let n_maps = count_assignments(k, r, mode)?;
    if n_maps > BigCount::from(MAX_ASSIGNMENT_MAPS) {
        return Err(Error::EnumerationBudgetExceeded {
            what: "assignment maps",
            needed: n_maps.to_string(),
            limit: MAX_ASSIGNMENT_MAPS,
        });
    }
    let maps: Vec<AssignmentMap> = assignments(k, r, mode)?.collect();
    let n_assignments = maps.len() as u64;

    let two_to_k = SubsetMask::from_elements(k, 2..=k);
    let mut counts = PairCounts {
        m_count: 0,
        n_assignments,
        hits: [0; 4],
        k_not_in_s1: 0,
        s1_equals_two_to_k: 0,
        s1_size_k_minus_1: 0,
        s1_empty: 0,
    };

    // Endpoint tables: per rule, endpoint of arc i if f(i) = t, laid out as
    // (i-1)*r + (t-1).
    let mut table = vec![[0u32; 4]; ((k - 1) * r) as usize];
    let mut endpoints = vec![0u32; (k - 1) as usize];
    let mut scratch = vec![0u8; (k + 1) as usize];

    for tuple in tuples(p, r, true) {
        counts.m_count += 1;
        let s1 = tuple.subset(1);
        counts.k_not_in_s1 += u64::from(!s1.contains(k));
        counts.s1_equals_two_to_k += u64::from(*s1 == two_to_k);
        counts.s1_size_k_minus_1 += u64::from(s1.cardinality() == k - 1);
        counts.s1_empty += u64::from(s1.is_empty());

        for i in 1..k {
            for t in 1..=r {
                let slot = &mut table[((i - 1) * r + (t - 1)) as usize];
                for rule in ArcRule::ALL {
                    slot[rule.idx()] = rule.endpoint(i, tuple.subset(t));
                }
            }
        }
        for f in &maps {
            for rule in ArcRule::ALL {
                for i in 1..k {
                    endpoints[(i - 1) as usize] =
                        table[((i - 1) * r + (f.target(i) - 1)) as usize][rule.idx()];
                }
                if accept(k, &endpoints, &mut scratch) {
                    counts.hits[rule.idx()] += 1;
                }
            }
        }
    }

    if counts.m_count == 0 {
        return Err(Error::EmptyProperFamily {
            p: p.to_string(),
            r,
        });
    }
    Ok(counts)
}

/// Probability that the digraph of a uniform proper tuple and an independent
/// uniform assignment map is a tree, by full enumeration.
pub fn exact_tree_probability(
    rule: ArcRule,
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
) -> Result<Rational> {
    Ok(pair_counts(p, r, mode, endpoints_form_tree)?.probability(rule))
}

/// Probability that the digraph is a pseudo-forest (every cycle a loop), by
/// full enumeration.
pub fn exact_pseudoforest_probability(
    rule: ArcRule,
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
) -> Result<Rational> {
    Ok(pair_counts(p, r, mode, endpoints_form_pseudo_forest)?.probability(rule))
}

/// `|M(q, r)|` where `q` shifts every entry of `p` down by one except the
/// kept index. Used by the closed forms and the determinant identities.
pub(crate) fn proper_count_shifted(p: &OccupancyVector, keep: u32, r: u32) -> BigCount {
    proper_family_count(&shifted_occupancy(p, keep), r)
}

/// Signed occupancy with every entry shifted down except a kept index
/// (1-based).
fn shifted_occupancy(p: &OccupancyVector, keep: u32) -> Vec<i64> {
    p.counts()
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            if j as u32 + 1 == keep {
                pj as i64
            } else {
                pj as i64 - 1
            }
        })
        .collect()
}

/// Closed-form tree probability for the `alpha`, `beta`, and `gamma` rules
/// under the surjection model:
///
/// * `alpha`: `1 - p_k / r`,
/// * `beta`: `|M(q, r-1)| / |M(p, r)|` with `q = (p_1, p_2-1, …, p_k-1)`,
/// * `gamma`: sum over `j` of `|M(q^(j), r-1)| / |M(p, r)|` where `q^(j)`
///   shifts every entry down except the `j`-th.
///
/// `|M(·, 0)|` counts the empty tuple: one when the shifted occupancy is the
/// zero vector, zero otherwise (negative entries give zero).
pub fn theorem_prediction(rule: ArcRule, p: &OccupancyVector, r: u32) -> Result<Rational> {
    assert!(r >= 1, "predictions need r >= 1");
    let k = p.k();
    let m = cardinality_m(p, r);
    if m.is_zero() {
        return Err(Error::EmptyProperFamily {
            p: p.to_string(),
            r,
        });
    }
    let m_int = BigInt::from(m);
    let value = match rule {
        ArcRule::Alpha => {
            Rational::one() - Rational::new(BigInt::from(p.get(k)), BigInt::from(r))
        }
        ArcRule::Beta => {
            let q = shifted_occupancy(p, 1);
            Rational::new(BigInt::from(proper_family_count(&q, r - 1)), m_int)
        }
        ArcRule::Gamma => {
            let mut num = BigUint::zero();
            for j in 1..=k {
                num += proper_family_count(&shifted_occupancy(p, j), r - 1);
            }
            Rational::new(BigInt::from(num), m_int)
        }
        ArcRule::Delta => {
            panic!("no closed-form theorem prediction for delta; use conjecture1_prediction")
        }
    };
    Ok(value)
}

/// Conjectured tree probability for the `delta` rule:
/// `|M(p, r-1)| / |M(p, r)|`.
pub fn conjecture1_prediction(p: &OccupancyVector, r: u32) -> Result<Rational> {
    assert!(r >= 1, "predictions need r >= 1");
    let m = cardinality_m(p, r);
    if m.is_zero() {
        return Err(Error::EmptyProperFamily {
            p: p.to_string(),
            r,
        });
    }
    let q: Vec<i64> = p.counts().iter().map(|&x| x as i64).collect();
    Ok(Rational::new(
        BigInt::from(proper_family_count(&q, r - 1)),
        BigInt::from(m),
    ))
}

/// Side-by-side comparison of the brute-force probability and the
/// closed-form value (`delta` uses the conjectured formula).
#[derive(Clone, Debug)]
pub struct ProbabilityModeReport {
    /// Arc rule compared.
    pub rule: ArcRule,
    /// Occupancy vector of the cell.
    pub p: OccupancyVector,
    /// Tuple length of the cell.
    pub r: u32,
    /// Assignment mode used for the brute-force side.
    pub mode: AssignmentMode,
    /// Enumerated probability.
    pub exact: Rational,
    /// Closed-form probability.
    pub predicted: Rational,
    /// Whether the two sides agree exactly.
    pub matches: bool,
}

/// Computes both sides of a cell and records whether they agree.
pub fn probability_report(
    rule: ArcRule,
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
) -> Result<ProbabilityModeReport> {
    let exact = exact_tree_probability(rule, p, r, mode)?;
    let predicted = match rule {
        ArcRule::Delta => conjecture1_prediction(p, r)?,
        _ => theorem_prediction(rule, p, r)?,
    };
    let matches = exact == predicted;
    Ok(ProbabilityModeReport {
        rule,
        p: p.clone(),
        r,
        mode,
        exact,
        predicted,
        matches,
    })
}

/// Iterates all occupancy vectors over `[k]` with entries in `[0, max]`,
/// lexicographically.
pub fn occupancy_grid(k: u32, max: u32) -> impl Iterator<Item = OccupancyVector> {
    let k = k as usize;
    let mut current = vec![0u32; k];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = OccupancyVector::new(current.clone());
        let mut d = k;
        loop {
            if d == 0 {
                done = true;
                break;
            }
            d -= 1;
            current[d] += 1;
            if current[d] <= max {
                break;
            }
            current[d] = 0;
        }
        Some(out)
    })
}

/// Desk-scale u64 view of an exact count; panics if it does not fit.
pub fn count_to_u64(c: &BigCount) -> u64 {
    c.to_u64().expect("count exceeds u64; reduce the grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{format_ratio, zero};

    fn occ(counts: &[u32]) -> OccupancyVector {
        OccupancyVector::new(counts.to_vec())
    }

    #[test]
    fn tuple_stream_counts() {
        assert_eq!(tuples(&occ(&[1, 1, 1]), 2, false).count(), 8);
        assert_eq!(tuples(&occ(&[1, 1, 1]), 2, true).count(), 6);
        assert_eq!(tuples(&occ(&[2, 0]), 1, false).count(), 0);
    }

    #[test]
    fn tuple_stream_is_deterministic() {
        let a: Vec<_> = tuples(&occ(&[1, 1, 1]), 2, true).collect();
        let b: Vec<_> = tuples(&occ(&[1, 1, 1]), 2, true).collect();
        assert_eq!(a, b);
        // Element choices run lexicographically, element 1 slowest. The
        // all-first choice puts every element in S_1, which is improper, so
        // the first proper tuple moves element 3 into S_2.
        assert_eq!(a[0].to_string(), "({1,2},{3})");
        assert_eq!(a.last().unwrap().to_string(), "({3},{1,2})");
    }

    #[test]
    fn tuple_occupancy_round_trip() {
        for t in tuples(&occ(&[2, 1, 0, 2]), 3, false) {
            assert_eq!(t.occupancy(), occ(&[2, 1, 0, 2]));
        }
    }

    #[test]
    fn cardinality_s_examples() {
        assert_eq!(cardinality_s(&occ(&[1, 1, 1]), 2), BigCount::from(8u32));
        assert_eq!(cardinality_s(&occ(&[0, 0, 0, 0]), 3), BigCount::one());
        assert_eq!(cardinality_s(&occ(&[3, 1]), 2), BigCount::zero());
    }

    #[test]
    fn cardinality_m_examples() {
        assert_eq!(cardinality_m(&occ(&[1, 1, 1]), 2), BigCount::from(6u32));
        assert_eq!(cardinality_m(&occ(&[1, 1, 1]), 1), BigCount::zero());
        assert_eq!(cardinality_m(&occ(&[0, 0]), 3), BigCount::one());
    }

    #[test]
    fn cardinalities_match_enumeration_on_small_grids() {
        for k in 1..=4 {
            for r in 1..=4 {
                for p in occupancy_grid(k, r) {
                    let s = tuples(&p, r, false).count();
                    let m = tuples(&p, r, true).count();
                    assert_eq!(cardinality_s(&p, r), BigCount::from(s), "S k={k} r={r} p={p}");
                    assert_eq!(cardinality_m(&p, r), BigCount::from(m), "M k={k} r={r} p={p}");
                }
            }
        }
    }

    #[test]
    fn coefficient_route_matches_closed_form() {
        for k in 1..=4 {
            for r in 1..=3 {
                let poly = ProperCountPolynomial::expand(k, r, &vec![r; k as usize]);
                for p in occupancy_grid(k, r) {
                    assert_eq!(
                        poly.coefficient(&p),
                        cardinality_m(&p, r),
                        "k={k} r={r} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn assignment_streams() {
        let surj: Vec<_> = assignments(3, 2, AssignmentMode::Surjection).unwrap().collect();
        assert_eq!(surj.len(), 2);
        assert_eq!(surj[0].values(), &[1, 2]);
        assert_eq!(surj[1].values(), &[2, 1]);

        let id: Vec<_> = assignments(3, 2, AssignmentMode::Identity).unwrap().collect();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].values(), &[1, 2]);

        assert_eq!(assignments(4, 2, AssignmentMode::Function).unwrap().count(), 8);
    }

    #[test]
    fn assignment_counts_match_streams() {
        for k in 2..=5u32 {
            for r in 1..=4u32 {
                for mode in [
                    AssignmentMode::Surjection,
                    AssignmentMode::Function,
                    AssignmentMode::Identity,
                ] {
                    match (assignments(k, r, mode), count_assignments(k, r, mode)) {
                        (Ok(iter), Ok(count)) => {
                            assert_eq!(BigCount::from(iter.count()), count, "k={k} r={r} {mode}")
                        }
                        (Err(a), Err(b)) => assert_eq!(a, b),
                        (a, b) => panic!(
                            "stream/count disagree on feasibility: {:?} vs {:?}",
                            a.map(|_| ()),
                            b
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn surjection_count_examples() {
        assert_eq!(
            count_assignments(3, 2, AssignmentMode::Surjection).unwrap(),
            BigCount::from(2u32)
        );
        assert_eq!(
            count_assignments(5, 1, AssignmentMode::Surjection).unwrap(),
            BigCount::one()
        );
        assert_eq!(
            count_assignments(4, 3, AssignmentMode::Function).unwrap(),
            BigCount::from(27u32)
        );
        assert_eq!(
            count_assignments(3, 3, AssignmentMode::Surjection),
            Err(Error::SurjectionInfeasible { k: 3, r: 3 })
        );
    }

    #[test]
    fn exact_probability_examples() {
        let half = exact_tree_probability(
            ArcRule::Alpha,
            &occ(&[1, 1, 1]),
            2,
            AssignmentMode::Surjection,
        )
        .unwrap();
        assert_eq!(format_ratio(&half), "1/2");

        let one = exact_tree_probability(
            ArcRule::Alpha,
            &occ(&[0, 0, 0]),
            1,
            AssignmentMode::Surjection,
        )
        .unwrap();
        assert_eq!(format_ratio(&one), "1/1");

        let none = exact_tree_probability(
            ArcRule::Delta,
            &occ(&[1, 1, 1]),
            2,
            AssignmentMode::Surjection,
        )
        .unwrap();
        assert_eq!(none, zero());
    }

    #[test]
    fn oversized_cells_error_instead_of_exhausting_memory() {
        let p = occ(&[0; 20]);
        let err = exact_tree_probability(ArcRule::Alpha, &p, 19, AssignmentMode::Surjection)
            .unwrap_err();
        assert!(matches!(err, Error::EnumerationBudgetExceeded { .. }));
    }

    #[test]
    fn conditioning_on_empty_family_errors() {
        let err = exact_tree_probability(
            ArcRule::Alpha,
            &occ(&[1, 1]),
            1,
            AssignmentMode::Surjection,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyProperFamily { .. }));
        assert!(matches!(
            theorem_prediction(ArcRule::Alpha, &occ(&[1, 1]), 1),
            Err(Error::EmptyProperFamily { .. })
        ));
    }

    #[test]
    fn prediction_examples() {
        let p = occ(&[1, 1, 1]);
        assert_eq!(
            format_ratio(&theorem_prediction(ArcRule::Alpha, &p, 2).unwrap()),
            "1/2"
        );
        assert_eq!(
            format_ratio(&theorem_prediction(ArcRule::Beta, &p, 2).unwrap()),
            "1/6"
        );
        assert_eq!(
            format_ratio(&theorem_prediction(ArcRule::Gamma, &p, 2).unwrap()),
            "1/2"
        );
    }

    #[test]
    fn conjecture1_prediction_examples() {
        assert_eq!(conjecture1_prediction(&occ(&[1, 1, 1]), 2).unwrap(), zero());
        assert_eq!(
            format_ratio(&conjecture1_prediction(&occ(&[0, 0, 0]), 1).unwrap()),
            "1/1"
        );
    }

    /// The conjectured count ratio agrees with the probability that the
    /// first subset is empty, by enumeration.
    #[test]
    fn conjecture1_forms_agree_by_enumeration() {
        let p = occ(&[1, 1, 0, 0]);
        let r = 2;
        let proper: Vec<_> = tuples(&p, r, true).collect();
        let s1_empty = proper.iter().filter(|t| t.subset(1).is_empty()).count();
        let by_enum = ratio_u64(s1_empty as u64, proper.len() as u64);
        assert_eq!(conjecture1_prediction(&p, r).unwrap(), by_enum);
    }

    /// Identity assignments give the same probabilities as surjections when
    /// r = k-1.
    #[test]
    fn identity_mode_matches_surjection_mode() {
        for k in 2..=4u32 {
            let r = k - 1;
            for p in occupancy_grid(k, r) {
                if cardinality_m(&p, r).is_zero() {
                    continue;
                }
                for rule in ArcRule::ALL {
                    let s =
                        exact_tree_probability(rule, &p, r, AssignmentMode::Surjection).unwrap();
                    let i = exact_tree_probability(rule, &p, r, AssignmentMode::Identity).unwrap();
                    assert_eq!(s, i, "k={k} p={p} rule={rule}");
                }
            }
        }
    }

    /// Plain uniform functions give the same probabilities as surjections,
    /// including r beyond k-1 where the closed form still applies.
    #[test]
    fn function_mode_matches_closed_forms() {
        for k in 2..=4u32 {
            for r in 1..=k {
                for p in occupancy_grid(k, r.min(3)) {
                    if cardinality_m(&p, r).is_zero() {
                        continue;
                    }
                    for rule in [ArcRule::Alpha, ArcRule::Beta, ArcRule::Gamma] {
                        let f =
                            exact_tree_probability(rule, &p, r, AssignmentMode::Function).unwrap();
                        let predicted = theorem_prediction(rule, &p, r).unwrap();
                        assert_eq!(f, predicted, "k={k} r={r} p={p} rule={rule}");
                    }
                }
            }
        }
    }

    /// Without conditioning on properness the tree probability picks up the
    /// factor |M| / |S|: improper tuples never produce trees.
    #[test]
    fn unconditioned_probability_scales_by_properness() {
        for k in 2..=4u32 {
            for r in 1..k {
                for p in occupancy_grid(k, r.min(2)) {
                    if cardinality_m(&p, r).is_zero() {
                        continue;
                    }
                    let maps: Vec<_> = assignments(k, r, AssignmentMode::Surjection)
                        .unwrap()
                        .collect();
                    for rule in ArcRule::ALL {
                        let mut hits = 0u64;
                        let mut total = 0u64;
                        for t in tuples(&p, r, false) {
                            for f in &maps {
                                total += 1;
                                hits += u64::from(
                                    crate::digraph::build_digraph(&t, f, rule).is_rooted_tree(),
                                );
                            }
                        }
                        let unconditioned = ratio_u64(hits, total);
                        let conditioned =
                            exact_tree_probability(rule, &p, r, AssignmentMode::Surjection)
                                .unwrap();
                        let m = cardinality_m(&p, r);
                        let s = cardinality_s(&p, r);
                        let scale = crate::ratio::ratio_counts(&m, &s);
                        assert_eq!(
                            unconditioned,
                            scale * conditioned,
                            "k={k} r={r} p={p} rule={rule}"
                        );
                    }
                }
            }
        }
    }

    /// The alpha probability restates as the chance that k misses S_1.
    #[test]
    fn alpha_restatement_holds_on_small_grid() {
        for k in 2..=4u32 {
            for r in 1..=(k - 1) {
                for p in occupancy_grid(k, r) {
                    let counts = match pair_counts(
                        &p,
                        r,
                        AssignmentMode::Surjection,
                        endpoints_form_tree,
                    ) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    assert_eq!(
                        counts.probability(ArcRule::Alpha),
                        counts.s1_fraction(counts.k_not_in_s1),
                        "k={k} r={r} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn probability_report_flags_matches() {
        let report = probability_report(
            ArcRule::Beta,
            &occ(&[1, 1, 1]),
            2,
            AssignmentMode::Surjection,
        )
        .unwrap();
        assert!(report.matches);
        assert_eq!(report.exact, report.predicted);
    }

    #[test]
    fn pseudoforest_probability_dominates_tree_probability() {
        let p = occ(&[1, 1, 1]);
        for rule in ArcRule::ALL {
            let tree =
                exact_tree_probability(rule, &p, 2, AssignmentMode::Surjection).unwrap();
            let pf =
                exact_pseudoforest_probability(rule, &p, 2, AssignmentMode::Surjection).unwrap();
            assert!(pf >= tree, "rule {rule}");
        }
    }
}
