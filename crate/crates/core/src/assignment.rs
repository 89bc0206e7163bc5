//! Assignment maps `f : [k-1] -> [r]` attaching a subset index to each arc
//! origin.

use std::fmt;

/// Which class of assignment maps a computation draws from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AssignmentMode {
    /// Every target in `[r]` is hit at least once (requires `r <= k-1`).
    Surjection,
    /// Arbitrary functions `[k-1] -> [r]`.
    Function,
    /// The identity on `[k-1]` (requires `r = k-1`).
    Identity,
}

impl AssignmentMode {
    /// Stable lowercase name used in CLI flags and reports.
    pub fn name(self) -> &'static str {
        match self {
            AssignmentMode::Surjection => "surjection",
            AssignmentMode::Function => "function",
            AssignmentMode::Identity => "identity",
        }
    }
}

impl fmt::Display for AssignmentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete map `f : [k-1] -> [r]`, stored as the value vector
/// `(f(1), …, f(k-1))` with 1-based targets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AssignmentMap {
    values: Vec<u32>,
    r: u32,
    mode: AssignmentMode,
}

impl AssignmentMap {
    /// Wraps a value vector, checking the invariants of `mode`.
    pub fn new(values: Vec<u32>, r: u32, mode: AssignmentMode) -> Self {
        assert!(!values.is_empty(), "domain [k-1] must be nonempty");
        assert!(r >= 1, "target set [r] must be nonempty");
        assert!(
            values.iter().all(|&v| (1..=r).contains(&v)),
            "assignment targets must lie in [1,{r}]"
        );
        match mode {
            AssignmentMode::Surjection => {
                let mut hit = vec![false; r as usize];
                for &v in &values {
                    hit[(v - 1) as usize] = true;
                }
                assert!(hit.iter().all(|&h| h), "map is not onto [1,{r}]");
            }
            AssignmentMode::Identity => {
                assert!(
                    r == values.len() as u32,
                    "identity map needs r = k-1, got r={r}, k-1={}",
                    values.len()
                );
                assert!(
                    values.iter().enumerate().all(|(i, &v)| v == i as u32 + 1),
                    "identity map must send i to i"
                );
            }
            AssignmentMode::Function => {}
        }
        Self { values, r, mode }
    }

    /// The identity map on `[k-1]`.
    pub fn identity(k: u32) -> Self {
        assert!(k >= 2, "identity map needs k >= 2");
        Self::new((1..k).collect(), k - 1, AssignmentMode::Identity)
    }

    /// Ground-set size `k` (one more than the domain size).
    pub fn k(&self) -> u32 {
        self.values.len() as u32 + 1
    }

    /// Target-set size `r`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Mode the map was built under.
    pub fn mode(&self) -> AssignmentMode {
        self.mode
    }

    /// `f(i)` for 1-based `i` in `[k-1]`.
    pub fn target(&self, i: u32) -> u32 {
        self.values[(i - 1) as usize]
    }

    /// The full value vector `(f(1), …, f(k-1))`.
    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

impl fmt::Display for AssignmentMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, v) in self.values.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
