//! Generalized events over a finite uniform sample space, and determinants
//! of matrices of such events.
//!
//! A generalized event is a rational-valued weight vector indexed by the
//! points of a sample space; a plain event is the 0/1 indicator of a subset
//! of points. Sums, scalar multiples, and intersections act pointwise (the
//! intersection of indicators is their product, extended bilinearly), and
//! two formal combinations of events are interchangeable exactly when their
//! weight vectors are equal, so the weight vector is the canonical form.
//!
//! The probability of a generalized event under the uniform measure is the
//! sum of its weights divided by the number of points. The `Pr`-determinant
//! of a square event matrix replaces the products in the Leibniz expansion
//! with intersections and applies the probability linearly:
//!
//! ```text
//! pdet(M) = sum over permutations π of sign(π) · Pr(M[1,π(1)] ∩ … ∩ M[n,π(n)])
//! ```
//!
//! For an `(n-1) x n` matrix of events, summing the probabilities of the
//! arc-wise intersections over all spanning trees of the complete digraph
//! rooted at `n` equals the `Pr`-determinant of the reduced Laplacian:
//! a probabilistic analogue of the matrix-tree theorem, which collapses to
//! the classical weighted version when the events are independent.

use num::{One, Zero};

use crate::digraph::Digraph;
use crate::ratio::Rational;

/// A finite sample space with uniform measure over opaque points.
#[derive(Clone, Debug)]
pub struct SampleSpace<T> {
    points: Vec<T>,
}

impl<T> SampleSpace<T> {
    /// Wraps a nonempty point list.
    pub fn new(points: Vec<T>) -> Self {
        assert!(!points.is_empty(), "sample space must be nonempty");
        Self { points }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; spaces are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The points in index order.
    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Indicator of the set of points satisfying `pred`.
    pub fn indicator(&self, pred: impl Fn(&T) -> bool) -> GeneralizedEvent {
        GeneralizedEvent::from_weights(
            self.points
                .iter()
                .map(|p| if pred(p) { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    /// Indicator of the whole space.
    pub fn full_event(&self) -> GeneralizedEvent {
        GeneralizedEvent::full(self.len())
    }

    /// The zero vector (canonical form of the empty event).
    pub fn zero_event(&self) -> GeneralizedEvent {
        GeneralizedEvent::zero(self.len())
    }
}

/// A rational weight vector over a sample space; the canonical form of a
/// formal linear combination of events.
///
/// Operations panic when the operands live over spaces of different sizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedEvent {
    weights: Vec<Rational>,
}

impl GeneralizedEvent {
    /// Event with the given weights.
    pub fn from_weights(weights: Vec<Rational>) -> Self {
        assert!(!weights.is_empty(), "event over empty space");
        Self { weights }
    }

    /// The zero vector over a space of `n` points.
    pub fn zero(n: usize) -> Self {
        Self::from_weights(vec![Rational::zero(); n])
    }

    /// The all-ones vector over a space of `n` points.
    pub fn full(n: usize) -> Self {
        Self::from_weights(vec![Rational::one(); n])
    }

    /// Number of points of the underlying space.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Never true; events keep one weight per point.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weight vector, point order.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Weight at one point.
    pub fn weight(&self, idx: usize) -> &Rational {
        &self.weights[idx]
    }

    /// Whether every weight is zero.
    pub fn is_zero_event(&self) -> bool {
        self.weights.iter().all(Rational::is_zero)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_weights(self.weights.iter().map(|w| w * c).collect())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "events over different spaces");
        Self::from_weights(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "events over different spaces");
        Self::from_weights(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Intersection: pointwise product. On indicators this is set
    /// intersection; on general weights it is the bilinear extension.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "events over different spaces");
        Self::from_weights(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    /// Probability under the uniform measure: mean of the weights.
    pub fn probability(&self) -> Rational {
        let sum: Rational = self.weights.iter().sum();
        sum / Rational::from_integer(self.len().into())
    }
}

impl std::ops::Add for &GeneralizedEvent {
    type Output = GeneralizedEvent;
    fn add(self, rhs: &GeneralizedEvent) -> GeneralizedEvent {
        GeneralizedEvent::add(self, rhs)
    }
}

impl std::ops::Sub for &GeneralizedEvent {
    type Output = GeneralizedEvent;
    fn sub(self, rhs: &GeneralizedEvent) -> GeneralizedEvent {
        GeneralizedEvent::sub(self, rhs)
    }
}

/// A rectangular matrix of generalized events over one sample space, with
/// 1-based indexing to match the arc and vertex conventions.
#[derive(Clone, Debug)]
pub struct EventMatrix {
    rows: usize,
    cols: usize,
    omega: usize,
    entries: Vec<GeneralizedEvent>,
}

impl EventMatrix {
    /// Builds a matrix from a 1-based entry constructor.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> GeneralizedEvent,
    ) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must be nonempty");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                entries.push(entry(i, j));
            }
        }
        let omega = entries[0].len();
        assert!(
            entries.iter().all(|e| e.len() == omega),
            "entries over different spaces"
        );
        Self {
            rows,
            cols,
            omega,
            entries,
        }
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Size of the underlying sample space.
    pub fn omega(&self) -> usize {
        self.omega
    }

    /// Entry at 1-based `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &GeneralizedEvent {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    /// Whether two matrices have identical weight vectors entrywise (the
    /// canonical-form notion of interchangeability).
    pub fn entrywise_equal(&self, other: &EventMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }

    /// The `Pr`-determinant: the signed sum over all permutations of the
    /// probability of the entrywise intersection.
    ///
    /// Expansion is explicit over `n!` permutations; a running intersection
    /// that hits the zero vector prunes the rest of its permutation. Desk
    /// scale only (`n <= 8`).
    pub fn pdet(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "pdet needs a square matrix");
        let n = self.rows;
        assert!(n <= 8, "permutation expansion is desk-scale only");
        let mut total = Rational::zero();
        let mut perm: Vec<usize> = (1..=n).collect();
        let mut sign = 1i32;
        loop {
            // One permutation term: sum over points of the product of the
            // selected entries' weights, short-circuiting on zero factors.
            let mut term = Rational::zero();
            for w in 0..self.omega {
                let mut prod = Rational::one();
                let mut dead = false;
                for (i, &j) in perm.iter().enumerate() {
                    let weight = self.at(i + 1, j).weight(w);
                    if weight.is_zero() {
                        dead = true;
                        break;
                    }
                    prod *= weight;
                }
                if !dead {
                    term += prod;
                }
            }
            if sign > 0 {
                total += term;
            } else {
                total -= term;
            }
            if !next_permutation(&mut perm, &mut sign) {
                break;
            }
        }
        total / Rational::from_integer(self.omega.into())
    }

    /// Reduced Laplacian of an `(n-1) x n` matrix: off-diagonal entries are
    /// negated, each diagonal entry is the sum of the other entries in its
    /// row (column `n` included).
    pub fn reduced_laplacian(&self) -> EventMatrix {
        assert_eq!(
            self.rows + 1,
            self.cols,
            "reduced Laplacian needs an (n-1) x n matrix"
        );
        let n = self.cols;
        EventMatrix::from_fn(n - 1, n - 1, |i, j| {
            if i == j {
                let mut acc = GeneralizedEvent::zero(self.omega);
                for jj in (1..=n).filter(|&jj| jj != i) {
                    acc = acc.add(self.at(i, jj));
                }
                acc
            } else {
                GeneralizedEvent::zero(self.omega).sub(self.at(i, j))
            }
        })
    }
}

/// Advances `perm` to the next permutation in lexicographic order, flipping
/// `sign` by the parity of the rearrangement. Returns false after the last.
fn next_permutation(perm: &mut [usize], sign: &mut i32) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    *sign = -*sign;
    let suffix = &mut perm[i..];
    let m = suffix.len();
    suffix.reverse();
    if (m / 2) % 2 == 1 {
        *sign = -*sign;
    }
    true
}

/// All spanning trees of the complete digraph on `[n]` rooted at `n`: every
/// vertex below `n` takes one out-arc and no cycle forms. There are
/// `n^(n-2)` of them. Desk scale (`2 <= n <= 7`).
pub fn cayley_trees(n: u32) -> Vec<Digraph> {
    assert!((2..=7).contains(&n), "n={n} out of supported range 2..=7");
    let mut out = Vec::new();
    let mut endpoints = vec![1u32; (n - 1) as usize];
    loop {
        let g = Digraph::new(n, endpoints.clone());
        if g.is_rooted_tree() {
            out.push(g);
        }
        let mut d = endpoints.len();
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            endpoints[d] += 1;
            if endpoints[d] <= n {
                break;
            }
            endpoints[d] = 1;
        }
    }
}

/// Left side of the matrix-tree identity: the sum over rooted spanning
/// trees of the probability of the arc-wise intersection.
pub fn sum_tree_probabilities(arc_events: &EventMatrix) -> Rational {
    assert_eq!(
        arc_events.rows() + 1,
        arc_events.cols(),
        "arc-event matrix must be (n-1) x n"
    );
    let n = arc_events.cols() as u32;
    let omega = arc_events.omega();
    let mut total = Rational::zero();
    for tree in cayley_trees(n) {
        for w in 0..omega {
            let mut prod = Rational::one();
            let mut dead = false;
            for (i, j) in tree.arcs() {
                let weight = arc_events.at(i as usize, j as usize).weight(w);
                if weight.is_zero() {
                    dead = true;
                    break;
                }
                prod *= weight;
            }
            if !dead {
                total += prod;
            }
        }
    }
    total / Rational::from_integer(omega.into())
}
