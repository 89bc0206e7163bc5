//! Grid-sweep suites that check every closed form, determinant identity,
//! and conjecture cell by cell, and report machine-readable results.
//!
//! Every suite walks the default parameter grid (`k` from 2 to `k_max`,
//! `r` from 1 to `k-1`, all occupancy vectors with entries in `[0, r]`),
//! skipping cells whose proper family is empty (recorded as skipped, never
//! passed). A comparison cell passes only on exact rational equality. A
//! failing cell is a reportable outcome, not an error: the conjecture
//! suites are designed so that falsification renders the counterexample.
//!
//! Suites are deterministic for fixed parameters and seed; cells are
//! independent and evaluated in parallel, then reassembled in grid order,
//! so reports are byte-identical across runs and thread counts.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::AssignmentMode;
use crate::counting::{
    cardinality_m, cardinality_s, conjecture1_prediction, count_to_u64, pair_counts,
    proper_count_shifted, theorem_prediction, tuples,
};
use crate::digraph::{endpoints_form_tree, ArcRule};
use crate::events::{sum_tree_probabilities, EventMatrix, GeneralizedEvent, SampleSpace};
use crate::matrices::CellSpace;
use crate::mask::SubsetMask;
use crate::ratio::{ratio_counts, ratio_serde, ratio_u64, Rational};
use crate::tuple::OccupancyVector;

/// Outcome of one comparison cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CellStatus {
    /// Exact rational equality.
    #[serde(rename = "pass")]
    Pass,
    /// The two sides differ; the cell is a counterexample.
    #[serde(rename = "fail")]
    Fail,
    /// The cell's proper family is empty; nothing to compare.
    #[serde(rename = "skipped-infeasible")]
    SkippedInfeasible,
}

/// One comparison: a named check at a grid cell, with both exact values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridCell {
    /// Arc rule the check concerns, or empty for rule-independent checks.
    pub zeta: String,
    /// Ground-set size (matrix dimension for the randomized suite).
    pub k: u32,
    /// Tuple length (case index for the randomized suite).
    pub r: u32,
    /// Occupancy vector; empty for the randomized suite.
    pub p: Vec<u32>,
    /// Which identity the cell checks.
    pub check: String,
    /// Left side.
    #[serde(with = "ratio_serde")]
    pub lhs: Rational,
    /// Right side.
    #[serde(with = "ratio_serde")]
    pub rhs: Rational,
    /// Pass, fail, or skipped.
    pub status: CellStatus,
}

/// Cell totals; consistent with the cell list by construction.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSummary {
    /// Cells with exact equality.
    pub pass: usize,
    /// Counterexample cells.
    pub fail: usize,
    /// Infeasible cells.
    pub skipped: usize,
}

/// Parameters the suite ran with.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct GridParams {
    /// Largest ground-set size swept.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    /// Randomized case count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    /// RNG seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A full suite run: named cells in grid order plus totals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridReport {
    /// Suite name (`theorem`, `conjecture1`, `conjecture2`, `lemmas`,
    /// `prop1`).
    pub suite: String,
    /// `identity` for proved statements, `evidence` for conjecture sweeps;
    /// a passing evidence suite supports, but never proves, its claim.
    pub kind: String,
    /// Suite parameters.
    pub grid: GridParams,
    /// Comparison cells in grid order.
    pub cells: Vec<GridCell>,
    /// Totals.
    pub summary: GridSummary,
}

impl GridReport {
    fn new(suite: &str, kind: &str, grid: GridParams, cells: Vec<GridCell>) -> Self {
        let summary = GridSummary {
            pass: cells.iter().filter(|c| c.status == CellStatus::Pass).count(),
            fail: cells.iter().filter(|c| c.status == CellStatus::Fail).count(),
            skipped: cells
                .iter()
                .filter(|c| c.status == CellStatus::SkippedInfeasible)
                .count(),
        };
        Self {
            suite: suite.to_string(),
            kind: kind.to_string(),
            grid,
            cells,
            summary,
        }
    }

    /// Whether no cell failed.
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    /// The failing cells, if any.
    pub fn failures(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Fail)
    }

    /// JSON rendering: `{suite, kind, grid, cells: [...], summary}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rendering: one header row, then one row per cell with the same
    /// field order as the JSON cells.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["zeta", "k", "r", "p", "check", "lhs", "rhs", "status"])
            .expect("csv header");
        for c in &self.cells {
            let p = c
                .p
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let status = match c.status {
                CellStatus::Pass => "pass",
                CellStatus::Fail => "fail",
                CellStatus::SkippedInfeasible => "skipped-infeasible",
            };
            w.write_record([
                c.zeta.as_str(),
                &c.k.to_string(),
                &c.r.to_string(),
                &p,
                c.check.as_str(),
                &crate::ratio::format_ratio(&c.lhs),
                &crate::ratio::format_ratio(&c.rhs),
                status,
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    /// Human-oriented rendering: one line per cell plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let status = match c.status {
                CellStatus::Pass => "pass",
                CellStatus::Fail => "FAIL",
                CellStatus::SkippedInfeasible => "skip",
            };
            let p = c
                .p
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let zeta = if c.zeta.is_empty() { "-" } else { &c.zeta };
            out.push_str(&format!(
                "[{status}] {zeta} k={} r={} p=({p}) {}: lhs={} rhs={}\n",
                c.k,
                c.r,
                c.check,
                crate::ratio::format_ratio(&c.lhs),
                crate::ratio::format_ratio(&c.rhs),
            ));
        }
        let label = if self.kind == "evidence" {
            " (evidence, not proof)"
        } else {
            ""
        };
        out.push_str(&format!(
            "suite {}{label}: {} pass, {} fail, {} skipped\n",
            self.suite, self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        out
    }
}

fn compare(
    zeta: &str,
    k: u32,
    r: u32,
    p: &[u32],
    check: impl Into<String>,
    lhs: Rational,
    rhs: Rational,
) -> GridCell {
    let status = if lhs == rhs {
        CellStatus::Pass
    } else {
        CellStatus::Fail
    };
    GridCell {
        zeta: zeta.to_string(),
        k,
        r,
        p: p.to_vec(),
        check: check.into(),
        lhs,
        rhs,
        status,
    }
}

fn skipped(k: u32, r: u32, p: &[u32], check: &str) -> GridCell {
    GridCell {
        zeta: String::new(),
        k,
        r,
        p: p.to_vec(),
        check: check.to_string(),
        lhs: Rational::zero(),
        rhs: Rational::zero(),
        status: CellStatus::SkippedInfeasible,
    }
}

/// The default sweep: every `(k, r, p)` with `2 <= k <= k_max`,
/// `1 <= r <= k-1`, and `0 <= p_j <= r`, in lexicographic order.
fn grid(k_max: u32) -> Vec<(u32, u32, OccupancyVector)> {
    let mut cells = Vec::new();
    for k in 2..=k_max {
        for r in 1..k {
            for p in crate::counting::occupancy_grid(k, r) {
                cells.push((k, r, p));
            }
        }
    }
    cells
}

fn sweep(
    k_max: u32,
    cell_fn: impl Fn(u32, u32, &OccupancyVector) -> Vec<GridCell> + Sync,
) -> Vec<GridCell> {
    grid(k_max)
        .into_par_iter()
        .map(|(k, r, p)| cell_fn(k, r, &p))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Closed-form sweep: for `alpha`, `beta`, `gamma`, the enumerated tree
/// probability must equal the closed form, and the probability must equal
/// its restatement as a property of `S_1` (`k ∉ S_1`; for `r >= 2`,
/// `S_1 = {2,…,k}` and `|S_1| = k-1` respectively).
pub fn verify_theorem(k_max: u32) -> GridReport {
    let cells = sweep(k_max, |k, r, p| {
        if cardinality_m(p, r).is_zero() {
            return vec![skipped(k, r, p.counts(), "formula")];
        }
        let counts = pair_counts(p, r, AssignmentMode::Surjection, endpoints_form_tree)
            .expect("nonempty cell");
        let mut out = Vec::new();
        for rule in [ArcRule::Alpha, ArcRule::Beta, ArcRule::Gamma] {
            let exact = counts.probability(rule);
            let predicted = theorem_prediction(rule, p, r).expect("nonempty cell");
            out.push(compare(rule.name(), k, r, p.counts(), "formula", exact, predicted));
        }
        let alpha = counts.probability(ArcRule::Alpha);
        out.push(compare(
            "alpha",
            k,
            r,
            p.counts(),
            "restates k not in S1",
            alpha,
            counts.s1_fraction(counts.k_not_in_s1),
        ));
        if r >= 2 {
            out.push(compare(
                "beta",
                k,
                r,
                p.counts(),
                "restates S1 = {2..k}",
                counts.probability(ArcRule::Beta),
                counts.s1_fraction(counts.s1_equals_two_to_k),
            ));
            out.push(compare(
                "gamma",
                k,
                r,
                p.counts(),
                "restates |S1| = k-1",
                counts.probability(ArcRule::Gamma),
                counts.s1_fraction(counts.s1_size_k_minus_1),
            ));
        }
        out
    });
    GridReport::new(
        "theorem",
        "identity",
        GridParams {
            k_max: Some(k_max),
            ..Default::default()
        },
        cells,
    )
}

/// Evidence sweep for the `delta` rule: the enumerated probability against
/// the conjectured count ratio `|M(p, r-1)| / |M(p, r)|` and against the
/// probability that `S_1` is empty.
pub fn verify_conjecture1(k_max: u32) -> GridReport {
    let cells = sweep(k_max, |k, r, p| {
        if cardinality_m(p, r).is_zero() {
            return vec![skipped(k, r, p.counts(), "count-ratio")];
        }
        let counts = pair_counts(p, r, AssignmentMode::Surjection, endpoints_form_tree)
            .expect("nonempty cell");
        let exact = counts.probability(ArcRule::Delta);
        vec![
            compare(
                "delta",
                k,
                r,
                p.counts(),
                "count-ratio",
                exact.clone(),
                conjecture1_prediction(p, r).expect("nonempty cell"),
            ),
            compare(
                "delta",
                k,
                r,
                p.counts(),
                "restates S1 empty",
                exact,
                counts.s1_fraction(counts.s1_empty),
            ),
        ]
    });
    GridReport::new(
        "conjecture1",
        "evidence",
        GridParams {
            k_max: Some(k_max),
            ..Default::default()
        },
        cells,
    )
}

/// Evidence sweep for the marker-set determinants: for every `D ⊆ [k-1]`,
/// the `Pr`-determinant of the `delta` expansion matrix against the
/// conditional probability `Pr(k ∉ S_1, D ⊆ S_1 | proper)` scaled by
/// `|M| / |S|`. The endpoints `D = ∅` and `D = [k-1]` are proved, so they
/// anchor the sweep. A final cell per `(p, r)` chains the marker formulas
/// through inclusion-exclusion back to the `delta` count ratio.
pub fn verify_conjecture2(k_max: u32) -> GridReport {
    let cells = sweep(k_max, |k, r, p| {
        if cardinality_m(p, r).is_zero() {
            return vec![skipped(k, r, p.counts(), "markers")];
        }
        let space = CellSpace::build(p, r).expect("feasible cell");
        let s_count = count_to_u64(&cardinality_s(p, r));
        let m_count = count_to_u64(&cardinality_m(p, r));

        // Tuple-level statistics per marker set, one enumeration pass.
        let n_marker_sets = 1usize << (k - 1);
        let mut marker_hits = vec![0u64; n_marker_sets];
        let mut s1_empty = 0u64;
        for tuple in tuples(p, r, true) {
            let s1 = tuple.subset(1);
            s1_empty += u64::from(s1.is_empty());
            if s1.contains(k) {
                continue;
            }
            // Every D contained in S_1 ∩ [k-1] gains a hit.
            let inside = s1.bits() & ((1u32 << (k - 1)) - 1);
            let mut d = inside;
            loop {
                marker_hits[d as usize] += 1;
                if d == 0 {
                    break;
                }
                d = (d - 1) & inside;
            }
        }

        let mut out = Vec::new();
        let mut alternating = Rational::zero();
        for d_bits in 0..n_marker_sets as u32 {
            let d = SubsetMask::new(d_bits, k - 1);
            let pdet = space.matrix_m_d(&d).pdet();
            if d.cardinality() % 2 == 0 {
                alternating += pdet.clone();
            } else {
                alternating -= pdet.clone();
            }
            let rhs = ratio_u64(marker_hits[d_bits as usize], s_count);
            out.push(compare(
                "delta",
                k,
                r,
                p.counts(),
                format!("markers D={d}"),
                pdet,
                rhs,
            ));
        }
        // Inclusion-exclusion over the marker values collapses to the
        // empty-S1 probability; chained with the expansion identity it
        // recovers the count-ratio claim.
        let scale = ratio_u64(s_count, m_count);
        out.push(compare(
            "delta",
            k,
            r,
            p.counts(),
            "inclusion-exclusion recovers S1 empty",
            scale * alternating,
            ratio_u64(s1_empty, m_count),
        ));
        out
    });
    GridReport::new(
        "conjecture2",
        "evidence",
        GridParams {
            k_max: Some(k_max),
            ..Default::default()
        },
        cells,
    )
}

/// Determinant-pipeline sweep: every identity that links the enumerated
/// probabilities to `Pr`-determinants, evaluated by direct expansion.
pub fn verify_pdet_lemmas(k_max: u32) -> GridReport {
    let cells = sweep(k_max, |k, r, p| {
        if cardinality_m(p, r).is_zero() {
            return vec![skipped(k, r, p.counts(), "pipeline")];
        }
        let space = CellSpace::build(p, r).expect("feasible cell");
        let counts = pair_counts(p, r, AssignmentMode::Surjection, endpoints_form_tree)
            .expect("nonempty cell");
        let s = cardinality_s(p, r);
        let m = cardinality_m(p, r);
        let s_over_m = ratio_counts(&s, &m);
        let m_over_s = ratio_counts(&m, &s);
        let sign = if (k - 1) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };

        let mut out = Vec::new();
        for rule in [ArcRule::Alpha, ArcRule::Beta, ArcRule::Gamma] {
            let l_prime = space.matrix_l_prime(rule).pdet();
            let full = space.matrix_m(rule).pdet();
            out.push(compare(
                rule.name(),
                k,
                r,
                p.counts(),
                "probability from reduced determinant",
                counts.probability(rule),
                s_over_m.clone() * l_prime.clone(),
            ));
            out.push(compare(
                rule.name(),
                k,
                r,
                p.counts(),
                "reduced equals bordered determinant",
                l_prime,
                full,
            ));
        }

        // Alpha pipeline: the final stage carries the whole value, the
        // degenerate stages vanish, and the stages sum back to the start.
        let final_stage = space.matrix_m_a(ArcRule::Alpha, k).pdet();
        out.push(compare(
            "alpha",
            k,
            r,
            p.counts(),
            "final stage value",
            final_stage.clone(),
            m_over_s.clone()
                * (Rational::one() - ratio_u64(p.get(k) as u64, r as u64)),
        ));
        let mut alpha_sum = final_stage;
        for a in 2..k {
            let n_a = space.matrix_n_a(ArcRule::Alpha, a).pdet();
            alpha_sum += n_a.clone();
            out.push(compare(
                "alpha",
                k,
                r,
                p.counts(),
                format!("degenerate stage a={a} vanishes"),
                n_a,
                Rational::zero(),
            ));
        }
        out.push(compare(
            "alpha",
            k,
            r,
            p.counts(),
            "row decomposition",
            space.matrix_m(ArcRule::Alpha).pdet(),
            alpha_sum,
        ));

        // Beta pipeline, on the column-rotated matrix.
        let first_stage = space.matrix_m_a(ArcRule::Beta, 1).pdet();
        out.push(compare(
            "beta",
            k,
            r,
            p.counts(),
            "first stage value",
            first_stage.clone(),
            sign.clone()
                * ratio_counts(&proper_count_shifted(p, 1, r - 1), &s),
        ));
        let mut beta_sum = first_stage;
        for a in 2..k {
            let n_a = space.matrix_n_a(ArcRule::Beta, a).pdet();
            beta_sum += n_a.clone();
            out.push(compare(
                "beta",
                k,
                r,
                p.counts(),
                format!("degenerate stage a={a} vanishes"),
                n_a,
                Rational::zero(),
            ));
        }
        let rotated = space.matrix_m_a(ArcRule::Beta, k - 1).pdet();
        out.push(compare(
            "beta",
            k,
            r,
            p.counts(),
            "row decomposition",
            rotated.clone(),
            beta_sum,
        ));
        out.push(compare(
            "beta",
            k,
            r,
            p.counts(),
            "column rotation sign",
            space.matrix_m(ArcRule::Beta).pdet(),
            sign * rotated,
        ));

        // Gamma splits into pivot matrices, which evaluate to shifted
        // counts.
        let gamma = space.matrix_m(ArcRule::Gamma).pdet();
        let mut pivot_sum = Rational::zero();
        let mut count_sum = Rational::zero();
        for a in 1..=k {
            pivot_sum += space.matrix_q_a(a).pdet();
            count_sum += ratio_counts(&proper_count_shifted(p, a, r - 1), &s);
        }
        out.push(compare(
            "gamma",
            k,
            r,
            p.counts(),
            "pivot sum",
            gamma.clone(),
            pivot_sum,
        ));
        out.push(compare("gamma", k, r, p.counts(), "shifted count sum", gamma, count_sum));

        // Delta's bordered determinant carries its probability too.
        out.push(compare(
            "delta",
            k,
            r,
            p.counts(),
            "probability from bordered determinant",
            counts.probability(ArcRule::Delta),
            s_over_m * space.matrix_m(ArcRule::Delta).pdet(),
        ));
        out
    });
    GridReport::new(
        "lemmas",
        "identity",
        GridParams {
            k_max: Some(k_max),
            ..Default::default()
        },
        cells,
    )
}

/// Exact determinant of a small rational matrix by permutation expansion;
/// the numeric side of the independence reduction.
fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(n >= 1 && m.iter().all(|row| row.len() == n));
    let mut total = Rational::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, 1, &mut |perm, sign| {
        let mut prod = Rational::one();
        for (i, &j) in perm.iter().enumerate() {
            prod *= &m[i][j];
        }
        if sign > 0 {
            total += prod;
        } else {
            total -= prod;
        }
    });
    total
}

fn permute(perm: &mut Vec<usize>, depth: usize, sign: i32, visit: &mut impl FnMut(&[usize], i32)) {
    let n = perm.len();
    if depth == n {
        visit(perm, sign);
        return;
    }
    for i in depth..n {
        perm.swap(depth, i);
        let s = if i == depth { sign } else { -sign };
        permute(perm, depth + 1, s, visit);
        perm.swap(depth, i);
    }
}

/// Randomized matrix-tree sweep: seeded random plain-event matrices must
/// satisfy "sum of tree probabilities equals the reduced-Laplacian
/// `Pr`-determinant" exactly, and independent product-space events must
/// reduce to the numeric determinant of the probability matrix.
pub fn verify_prop1(cases: u64, seed: u64) -> GridReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = Vec::new();

    for case in 0..cases {
        let n = 2 + (case % 3) as usize;
        let omega = rng.gen_range(2..=16usize);
        let e = EventMatrix::from_fn(n - 1, n, |_, _| {
            let bits: u32 = rng.gen_range(0..(1u32 << omega));
            GeneralizedEvent::from_weights(
                (0..omega)
                    .map(|w| {
                        if bits >> w & 1 == 1 {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            )
        });
        cells.push(compare(
            "",
            n as u32,
            case as u32,
            &[],
            format!("random case {case} (omega={omega})"),
            sum_tree_probabilities(&e),
            e.reduced_laplacian().pdet(),
        ));
    }

    // Independent events: one private coordinate per matrix position, so
    // the Pr-determinant must collapse to the numeric determinant of the
    // per-arc probabilities.
    for n in [2usize, 3, 4] {
        let positions = (n - 1) * n;
        let max_size = match n {
            2 => 4u32,
            3 => 3,
            _ => 2,
        };
        let sizes: Vec<u32> = (0..positions).map(|_| rng.gen_range(2..=max_size)).collect();
        let thresholds: Vec<u32> = sizes.iter().map(|&s| rng.gen_range(0..=s)).collect();
        let omega: usize = sizes.iter().map(|&s| s as usize).product();
        let space = SampleSpace::new((0..omega as u32).collect::<Vec<u32>>());
        let coord = |point: u32, pos: usize| -> u32 {
            let mut v = point;
            for &s in &sizes[pos + 1..] {
                v /= s;
            }
            v % sizes[pos]
        };
        let e = EventMatrix::from_fn(n - 1, n, |i, j| {
            let pos = (i - 1) * n + (j - 1);
            space.indicator(|&w| coord(w, pos) < thresholds[pos])
        });
        let numeric: Vec<Vec<Rational>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| {
                        if i == j {
                            let mut acc = Rational::zero();
                            for jj in (1..=n).filter(|&jj| jj != i) {
                                let pos = (i - 1) * n + (jj - 1);
                                acc += ratio_u64(thresholds[pos] as u64, sizes[pos] as u64);
                            }
                            acc
                        } else {
                            let pos = (i - 1) * n + (j - 1);
                            -ratio_u64(thresholds[pos] as u64, sizes[pos] as u64)
                        }
                    })
                    .collect()
            })
            .collect();
        cells.push(compare(
            "",
            n as u32,
            0,
            &[],
            format!("independent reduction n={n}"),
            e.reduced_laplacian().pdet(),
            det_rational(&numeric),
        ));
    }

    GridReport::new(
        "prop1",
        "identity",
        GridParams {
            cases: Some(cases),
            seed: Some(seed),
            ..Default::default()
        },
        cells,
    )
}

/// Exact pseudo-forest probability for a cell, exposed for the CLI. No
/// closed form is asserted; the value is enumeration only.
pub fn pseudoforest_probability(
    rule: ArcRule,
    p: &OccupancyVector,
    r: u32,
    mode: AssignmentMode,
) -> crate::error::Result<Rational> {
    crate::counting::exact_pseudoforest_probability(rule, p, r, mode)
}
