//! The sample space of (tuple, surjection) pairs and the event matrices
//! whose `Pr`-determinants encode tree probabilities.
//!
//! The space for a cell `(p, r)` holds every pair of a tuple in `S(p, r)`
//! (properness is *not* imposed here) and a surjection `f : [k-1] -> [r]`,
//! under the uniform measure. Two indicator families generate everything:
//!
//! * `I[i, j | t]`: the cyclic interval `]i, j]` lies inside `S_t`; empty
//!   interval means the full space.
//! * `J[i, j | t]`: equal to `I` off the diagonal, but `J[i, i | t]` is the
//!   event `S_t = [k]`.
//!
//! Matrix entries resolve the superscript `f(i)` pointwise: the weight of
//! `I[i, j | f(m)]` at a point `(S, f)` reads that point's own `f(m)`. All
//! subscripts wrap cyclically modulo `k`.

use crate::assignment::{AssignmentMap, AssignmentMode};
use crate::counting::{assignments, tuples};
use crate::digraph::ArcRule;
use crate::error::{Error, Result};
use crate::events::{EventMatrix, GeneralizedEvent, SampleSpace};
use crate::mask::{cyclic, cyclic_interval, SubsetMask};
use crate::tuple::{OccupancyVector, SubsetTuple};

/// One outcome: a subset tuple together with a surjection.
pub type CellPoint = (SubsetTuple, AssignmentMap);

/// The uniform space of (tuple, surjection) pairs for one `(p, r)` cell.
#[derive(Clone, Debug)]
pub struct CellSpace {
    k: u32,
    r: u32,
    p: OccupancyVector,
    space: SampleSpace<CellPoint>,
}

/// Most points one space may hold; each point stores a tuple and a map.
const MAX_POINTS: u64 = 1 << 22;

impl CellSpace {
    /// Enumerates the full space. Errors when there are no tuples (some
    /// `p_j > r`), no surjections (`r > k-1`), or the point count is
    /// beyond desk scale.
    pub fn build(p: &OccupancyVector, r: u32) -> Result<Self> {
        let k = p.k();
        let empty = || Error::EmptySampleSpace {
            p: p.to_string(),
            r,
        };
        if k < 2 {
            return Err(empty());
        }
        let n_points = crate::counting::cardinality_s(p, r)
            * crate::counting::count_assignments(k, r, AssignmentMode::Surjection)
                .map_err(|_| empty())?;
        if n_points > MAX_POINTS.into() {
            return Err(Error::EnumerationBudgetExceeded {
                what: "sample points",
                needed: n_points.to_string(),
                limit: MAX_POINTS,
            });
        }
        let maps: Vec<AssignmentMap> = assignments(k, r, AssignmentMode::Surjection)
            .map_err(|_| empty())?
            .collect();
        let mut points = Vec::new();
        for tuple in tuples(p, r, false) {
            for f in &maps {
                points.push((tuple.clone(), f.clone()));
            }
        }
        if points.is_empty() {
            return Err(empty());
        }
        Ok(Self {
            k,
            r,
            p: p.clone(),
            space: SampleSpace::new(points),
        })
    }

    /// Ground-set size.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Tuple length.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Occupancy vector of the cell.
    pub fn occupancy(&self) -> &OccupancyVector {
        &self.p
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.space.len()
    }

    /// Never true.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The underlying generic space.
    pub fn space(&self) -> &SampleSpace<CellPoint> {
        &self.space
    }

    /// Indicator of the whole space.
    pub fn full_event(&self) -> GeneralizedEvent {
        self.space.full_event()
    }

    /// Indicator of `]i, j] ⊆ S_t` for a fixed subset index `t`. The empty
    /// interval (`i = j`) gives the full space.
    pub fn event_i(&self, i: u32, j: u32, t: u32) -> GeneralizedEvent {
        let interval = self.interval(i, j);
        assert!(
            (1..=self.r).contains(&t),
            "subset index {t} out of [1,{}]",
            self.r
        );
        self.space
            .indicator(|(tuple, _)| interval.is_subset_of(tuple.subset(t)))
    }

    /// As [`CellSpace::event_i`], except that on the diagonal (`i = j`) it
    /// is the improperness event `S_t = [k]`.
    pub fn event_j(&self, i: u32, j: u32, t: u32) -> GeneralizedEvent {
        assert!(
            (1..=self.r).contains(&t),
            "subset index {t} out of [1,{}]",
            self.r
        );
        if i == j {
            self.space
                .indicator(|(tuple, _)| tuple.subset(t).is_full())
        } else {
            self.event_i(i, j, t)
        }
    }

    /// `I[i, j | f(m)]`: the subset index is the value the point's own
    /// surjection takes at `m`.
    pub(crate) fn event_i_f(&self, m: u32, i: u32, j: u32) -> GeneralizedEvent {
        let interval = self.interval(i, j);
        assert!(
            (1..=self.k - 1).contains(&m),
            "origin {m} out of [1,{}]",
            self.k - 1
        );
        self.space
            .indicator(|(tuple, f)| interval.is_subset_of(tuple.subset(f.target(m))))
    }

    /// `J[i, j | f(m)]`.
    pub(crate) fn event_j_f(&self, m: u32, i: u32, j: u32) -> GeneralizedEvent {
        assert!(
            (1..=self.k - 1).contains(&m),
            "origin {m} out of [1,{}]",
            self.k - 1
        );
        if i == j {
            self.space
                .indicator(|(tuple, f)| tuple.subset(f.target(m)).is_full())
        } else {
            self.event_i_f(m, i, j)
        }
    }

    fn interval(&self, i: u32, j: u32) -> SubsetMask {
        cyclic_interval(i, j, self.k)
    }

    /// The `(k-1) x (k-1)` matrix whose `Pr`-determinant, scaled by
    /// `|S| / |M|`, is the tree probability:
    ///
    /// * `alpha`: `I[i, j] - I[i, j-1]`,
    /// * `beta`: `J[i, j+1] - J[i, j]`,
    /// * `gamma`: `J[i, j+1] - J[i, j] - J[i-1, j+1] + J[i-1, j]`,
    ///
    /// all with superscript `f(i)`.
    pub fn matrix_l_prime(&self, rule: ArcRule) -> EventMatrix {
        let k = self.k;
        let n = (k - 1) as usize;
        EventMatrix::from_fn(n, n, |i, j| {
            let (i, j) = (i as u32, j as u32);
            match rule {
                ArcRule::Alpha => {
                    let a = self.event_i_f(i, i, j);
                    let b = self.event_i_f(i, i, self.cyc(j as i64 - 1));
                    a.sub(&b)
                }
                ArcRule::Beta => {
                    let a = self.event_j_f(i, i, self.cyc(j as i64 + 1));
                    let b = self.event_j_f(i, i, j);
                    a.sub(&b)
                }
                ArcRule::Gamma => {
                    let up = self.cyc(i as i64 - 1);
                    let a = self.event_j_f(i, i, self.cyc(j as i64 + 1));
                    let b = self.event_j_f(i, i, j);
                    let c = self.event_j_f(i, up, self.cyc(j as i64 + 1));
                    let d = self.event_j_f(i, up, j);
                    a.sub(&b).sub(&c).add(&d)
                }
                ArcRule::Delta => panic!("no reduced form for delta; use matrix_m"),
            }
        })
    }

    /// The `k x k` matrix with a full-space last row:
    ///
    /// * `alpha`: `I[i, j]`,
    /// * `beta`: `J[i, j+1]`,
    /// * `gamma`: `J[i, j+1] - J[i-1, j+1]`,
    /// * `delta`: `I[i, j] - J[i-1, j]`,
    ///
    /// all with superscript `f(i)` on rows `i < k`.
    pub fn matrix_m(&self, rule: ArcRule) -> EventMatrix {
        let k = self.k;
        EventMatrix::from_fn(k as usize, k as usize, |i, j| {
            let (i, j) = (i as u32, j as u32);
            if i == k {
                return self.full_event();
            }
            match rule {
                ArcRule::Alpha => self.event_i_f(i, i, j),
                ArcRule::Beta => self.event_j_f(i, i, self.cyc(j as i64 + 1)),
                ArcRule::Gamma => {
                    let a = self.event_j_f(i, i, self.cyc(j as i64 + 1));
                    let b = self.event_j_f(i, self.cyc(i as i64 - 1), self.cyc(j as i64 + 1));
                    a.sub(&b)
                }
                ArcRule::Delta => {
                    let a = self.event_i_f(i, i, j);
                    let b = self.event_j_f(i, self.cyc(i as i64 - 1), j);
                    a.sub(&b)
                }
            }
        })
    }

    /// Row-elimination stage `a` of the `alpha` or `beta` pipeline.
    ///
    /// For `alpha` (stages `1..=k`; stages 1 and 2 are the plain matrix):
    /// rows before `a-1` collapse to the diagonal properness difference
    /// `I[i, i] - J[i, i]`, rows from `a-1` on keep `I[i, j]`, last row full.
    ///
    /// For `beta` (stages `1..=k-1`; stage `k-1` is the column-rotated plain
    /// matrix): rows up to `a` keep `J[i, j]`, rows after `a` collapse to
    /// the diagonal `J[i, i] - I[i, i]`, last row full.
    pub fn matrix_m_a(&self, rule: ArcRule, a: u32) -> EventMatrix {
        let k = self.k;
        match rule {
            ArcRule::Alpha => {
                assert!((1..=k).contains(&a), "stage {a} out of [1,{k}] for alpha");
                EventMatrix::from_fn(k as usize, k as usize, |i, j| {
                    let (i, j) = (i as u32, j as u32);
                    if i == k {
                        self.full_event()
                    } else if i + 1 < a {
                        if i == j {
                            self.event_i_f(i, i, i).sub(&self.event_j_f(i, i, i))
                        } else {
                            self.zero_event()
                        }
                    } else {
                        self.event_i_f(i, i, j)
                    }
                })
            }
            ArcRule::Beta => {
                assert!(
                    (1..=k - 1).contains(&a),
                    "stage {a} out of [1,{}] for beta",
                    k - 1
                );
                EventMatrix::from_fn(k as usize, k as usize, |i, j| {
                    let (i, j) = (i as u32, j as u32);
                    if i == k {
                        self.full_event()
                    } else if i <= a {
                        self.event_j_f(i, i, j)
                    } else if i == j {
                        self.event_j_f(i, i, i).sub(&self.event_i_f(i, i, i))
                    } else {
                        self.zero_event()
                    }
                })
            }
            _ => panic!("row-elimination stages exist only for alpha and beta"),
        }
    }

    /// As [`CellSpace::matrix_m_a`] with the pivot entry swapped: position
    /// `(a-1, a-1)` becomes `J` for `alpha`, position `(a, a)` becomes `I`
    /// (the full space) for `beta`. These matrices have `Pr`-determinant
    /// zero. Stages `2..=k-1`.
    pub fn matrix_n_a(&self, rule: ArcRule, a: u32) -> EventMatrix {
        let k = self.k;
        assert!(
            (2..=k - 1).contains(&a),
            "stage {a} out of [2,{}] for the degenerate matrix",
            k - 1
        );
        let base = self.matrix_m_a(rule, a);
        let pivot = match rule {
            ArcRule::Alpha => (a - 1) as usize,
            ArcRule::Beta => a as usize,
            _ => unreachable!(),
        };
        EventMatrix::from_fn(k as usize, k as usize, |i, j| {
            if (i, j) == (pivot, pivot) {
                match rule {
                    ArcRule::Alpha => self.event_j_f(pivot as u32, pivot as u32, pivot as u32),
                    ArcRule::Beta => self.event_i_f(pivot as u32, pivot as u32, pivot as u32),
                    _ => unreachable!(),
                }
            } else {
                base.at(i, j).clone()
            }
        })
    }

    /// The `gamma` split at pivot row `a` in `[1, k]`: rows before `a` keep
    /// `J[i, j+1 | f(i)]`, row `a` is the full space, rows after `a` keep
    /// `J[i, j+1 | f(i-1)]`. Stage `k` is the plain `beta` matrix.
    pub fn matrix_q_a(&self, a: u32) -> EventMatrix {
        let k = self.k;
        assert!((1..=k).contains(&a), "pivot row {a} out of [1,{k}]");
        EventMatrix::from_fn(k as usize, k as usize, |i, j| {
            let (i, j) = (i as u32, j as u32);
            if i == a {
                self.full_event()
            } else if i < a {
                self.event_j_f(i, i, self.cyc(j as i64 + 1))
            } else {
                self.event_j_f(i - 1, i, self.cyc(j as i64 + 1))
            }
        })
    }

    /// The `delta` expansion matrix for a marker set `D ⊆ [k-1]`: row `i`
    /// keeps `J[i-1, j | f(i)]` when `i ∈ D` and `I[i, j | f(i)]`
    /// otherwise; last row full. `D = ∅` is the plain `alpha` matrix.
    pub fn matrix_m_d(&self, d: &SubsetMask) -> EventMatrix {
        let k = self.k;
        assert_eq!(d.k(), k - 1, "marker set must live over [k-1]");
        EventMatrix::from_fn(k as usize, k as usize, |i, j| {
            let (i, j) = (i as u32, j as u32);
            if i == k {
                self.full_event()
            } else if d.contains(i) {
                self.event_j_f(i, self.cyc(i as i64 - 1), j)
            } else {
                self.event_i_f(i, i, j)
            }
        })
    }

    fn zero_event(&self) -> GeneralizedEvent {
        self.space.zero_event()
    }

    fn cyc(&self, v: i64) -> u32 {
        cyclic(v, self.k)
    }
}
