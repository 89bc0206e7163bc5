//! Arc-creation rules and the digraphs they build.
//!
//! Each rule maps a vertex `i` and a subset `S` of `[k]` to an arc endpoint,
//! walking cyclically from `i`:
//!
//! * `alpha(i, S)`: `i` if `S = [k]`, else the first `j ∉ S` with
//!   `]i, j-1] ⊆ S` (step forward from `i+1` while inside `S`).
//! * `beta(i, S)`: `i` if `S = [k]`, else the last `j` of the run inside `S`
//!   starting at `i+1`, i.e. `]i, j] ⊆ S` and `j+1 ∉ S`.
//! * `gamma(i, S)`: `i` if `S = [k]`; `i-1` (cyclically) if `i ∈ S`; else
//!   `beta(i, S)`.
//! * `delta(i, S)`: `i` if `i ∈ S` (a loop), else `alpha(i, S)`.
//!
//! A subset tuple plus an assignment map gives a digraph on `[k]` with one
//! out-arc per vertex in `[k-1]`: arc `a_i = (i, rule(i, S_{f(i)}))`. Loops
//! are representable and simply fail the tree test.

use std::fmt;

use crate::assignment::AssignmentMap;
use crate::mask::{cyclic, SubsetMask};
use crate::tuple::SubsetTuple;

/// The four arc-creation rules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ArcRule {
    /// First element outside `S` after `i`.
    Alpha,
    /// Last element of the run inside `S` after `i`.
    Beta,
    /// Cyclic predecessor when `i ∈ S`, otherwise as `Beta`.
    Gamma,
    /// Loop when `i ∈ S`, otherwise as `Alpha`.
    Delta,
}

impl ArcRule {
    /// All rules, in canonical order.
    pub const ALL: [ArcRule; 4] = [ArcRule::Alpha, ArcRule::Beta, ArcRule::Gamma, ArcRule::Delta];

    /// Stable lowercase name used in CLI flags and reports.
    pub fn name(self) -> &'static str {
        match self {
            ArcRule::Alpha => "alpha",
            ArcRule::Beta => "beta",
            ArcRule::Gamma => "gamma",
            ArcRule::Delta => "delta",
        }
    }

    /// Index into per-rule tables.
    pub(crate) fn idx(self) -> usize {
        match self {
            ArcRule::Alpha => 0,
            ArcRule::Beta => 1,
            ArcRule::Gamma => 2,
            ArcRule::Delta => 3,
        }
    }

    /// Endpoint of the arc with origin `i` built from subset `s`.
    ///
    /// Total for every subset: the forward walks terminate because a proper
    /// subset misses at least one element.
    pub fn endpoint(self, i: u32, s: &SubsetMask) -> u32 {
        let k = s.k();
        assert!((1..=k).contains(&i), "vertex {i} out of [1,{k}]");
        match self {
            ArcRule::Alpha => {
                if s.is_full() {
                    return i;
                }
                let mut j = cyclic(i as i64 + 1, k);
                while s.contains(j) {
                    j = cyclic(j as i64 + 1, k);
                }
                j
            }
            ArcRule::Beta => {
                if s.is_full() {
                    return i;
                }
                let mut j = i;
                while s.contains(cyclic(j as i64 + 1, k)) {
                    j = cyclic(j as i64 + 1, k);
                }
                j
            }
            ArcRule::Gamma => {
                if s.is_full() {
                    i
                } else if s.contains(i) {
                    cyclic(i as i64 - 1, k)
                } else {
                    ArcRule::Beta.endpoint(i, s)
                }
            }
            ArcRule::Delta => {
                if s.contains(i) {
                    i
                } else {
                    ArcRule::Alpha.endpoint(i, s)
                }
            }
        }
    }
}

impl fmt::Display for ArcRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A digraph on `[k]` with exactly one out-arc per vertex in `[k-1]` and no
/// out-arc at `k`. The arc with origin `i` is `(i, endpoints[i-1])`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Digraph {
    k: u32,
    endpoints: Vec<u32>,
}

impl Digraph {
    /// Wraps an endpoint vector of length `k-1` with entries in `[1, k]`.
    pub fn new(k: u32, endpoints: Vec<u32>) -> Self {
        assert!(k >= 2, "digraph needs k >= 2");
        assert_eq!(
            endpoints.len(),
            (k - 1) as usize,
            "digraph on [{k}] needs exactly {} arcs",
            k - 1
        );
        assert!(
            endpoints.iter().all(|&j| (1..=k).contains(&j)),
            "arc endpoint out of [1,{k}]"
        );
        Self { k, endpoints }
    }

    /// Vertex count.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Endpoint of the arc with 1-based origin `i < k`.
    pub fn endpoint(&self, i: u32) -> u32 {
        self.endpoints[(i - 1) as usize]
    }

    /// Arcs as `(origin, endpoint)` pairs, origin ascending.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.endpoints
            .iter()
            .enumerate()
            .map(|(n, &j)| (n as u32 + 1, j))
    }

    /// True when the digraph is a tree oriented toward vertex `k`:
    /// equivalently, it has no cycle (loops count as cycles), so following
    /// arcs from any vertex reaches `k`.
    pub fn is_rooted_tree(&self) -> bool {
        let mut state = vec![WHITE; (self.k + 1) as usize];
        endpoints_form_tree(self.k, &self.endpoints, &mut state)
    }

    /// True when every cycle is a loop, so each component is a tree hanging
    /// off either the root `k` or a looped vertex.
    pub fn is_pseudo_forest(&self) -> bool {
        let mut state = vec![WHITE; (self.k + 1) as usize];
        endpoints_form_pseudo_forest(self.k, &self.endpoints, &mut state)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, j)) in self.arcs().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

/// Builds the digraph with arcs `a_i = (i, rule(i, S_{f(i)}))` for
/// `i ∈ [k-1]`.
///
/// Panics when the assignment domain does not match `k-1` or its targets do
/// not match the tuple length.
pub fn build_digraph(tuple: &SubsetTuple, f: &AssignmentMap, rule: ArcRule) -> Digraph {
    let k = tuple.k();
    assert_eq!(
        f.k(),
        k,
        "assignment domain [{}] does not match k-1={}",
        f.k() - 1,
        k - 1
    );
    assert_eq!(
        f.r(),
        tuple.r(),
        "assignment targets [{}] do not match tuple length {}",
        f.r(),
        tuple.r()
    );
    let endpoints = (1..k)
        .map(|i| rule.endpoint(i, tuple.subset(f.target(i))))
        .collect();
    Digraph::new(k, endpoints)
}

const WHITE: u8 = 0;
const GRAY: u8 = 1;
const BLACK: u8 = 2;

/// Tree test on a raw endpoint slice with caller-provided scratch (`state`
/// must hold `k + 1` bytes; it is reset here). Shared by [`Digraph`] and the
/// enumeration/sampling hot loops.
pub(crate) fn endpoints_form_tree(k: u32, endpoints: &[u32], state: &mut [u8]) -> bool {
    state[..=k as usize].fill(WHITE);
    state[k as usize] = BLACK;
    for start in 1..k {
        if state[start as usize] != WHITE {
            continue;
        }
        let mut v = start;
        loop {
            match state[v as usize] {
                BLACK => break,
                GRAY => return false,
                _ => {}
            }
            state[v as usize] = GRAY;
            v = endpoints[(v - 1) as usize];
        }
        let mut u = start;
        while state[u as usize] == GRAY {
            state[u as usize] = BLACK;
            u = endpoints[(u - 1) as usize];
        }
    }
    true
}

/// Pseudo-forest test: cycles of length one (loops) are allowed, anything
/// longer is not.
pub(crate) fn endpoints_form_pseudo_forest(k: u32, endpoints: &[u32], state: &mut [u8]) -> bool {
    state[..=k as usize].fill(WHITE);
    state[k as usize] = BLACK;
    for start in 1..k {
        if state[start as usize] != WHITE {
            continue;
        }
        let mut v = start;
        loop {
            match state[v as usize] {
                BLACK => break,
                GRAY => return false,
                _ => {}
            }
            state[v as usize] = GRAY;
            let e = endpoints[(v - 1) as usize];
            if e == v {
                // Looped vertex roots its own component.
                state[v as usize] = BLACK;
                break;
            }
            v = e;
        }
        let mut u = start;
        while state[u as usize] == GRAY {
            state[u as usize] = BLACK;
            u = endpoints[(u - 1) as usize];
        }
    }
    true
}
