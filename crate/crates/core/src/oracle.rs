//! Exhaustive ground truth at desk scale.
//!
//! Interval progressions (`{a, a+d, .., a+(k-1)d}` inside `[N]`, `d >= 1`,
//! no wraparound) and group progressions are deliberately separate code
//! paths; nothing here reuses the group verifier for intervals.
//!
//! Both searches break color symmetry by only allowing a color once every
//! smaller color has already appeared.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::time::Duration;

use crate::group::Group;
use crate::progressions::Coloring;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `w(k; r)` over intervals.
    Vdw { k: usize, r: u32 },
    /// `kappa(Z/n; r)`.
    Kappa { n: u64, r: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchValue {
    Exact(u64),
    /// Search space truncated; the true value is at least this.
    AtLeast(u64),
    /// A witness exists but some smaller case was left undecided.
    AtMost(u64),
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<T> {
    Found(T),
    Exhausted,
    /// Node budget ran out first.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub target: Target,
    pub value: SearchValue,
    /// For `w(k;r)`: colors of `1..=value-1`. For kappa: colors of `Z/n` by residue.
    pub witness: Option<Vec<u32>>,
    pub nodes: u64,
    /// Filled in by callers that can read a clock.
    pub runtime: Option<Duration>,
}

/// First monochromatic k-AP in an interval coloring of `[colors.len()]`, as
/// a 1-based `(start, d)`.
pub fn interval_mono_ap(colors: &[u32], k: usize) -> Option<(usize, usize)> {
    if k < 2 {
        return None;
    }
    let n = colors.len();
    for d in 1..n {
        for a in 0..n {
            let last = a + (k - 1) * d;
            if last >= n {
                break;
            }
            if (1..k).all(|i| colors[a + i * d] == colors[a]) {
                return Some((a + 1, d));
            }
        }
    }
    None
}

struct IntervalSearch {
    k: usize,
    r: u32,
    limit: usize,
    budget: u64,
    nodes: u64,
    colors: Vec<u32>,
    best: Vec<u32>,
    out_of_budget: bool,
}

impl IntervalSearch {
    /// Would `color` at the next position close a monochromatic k-AP?
    fn closes_ap(&self, color: u32) -> bool {
        let pos = self.colors.len();
        let span = self.k - 1;
        let mut d = 1;
        while d * span <= pos {
            if (1..=span).all(|i| self.colors[pos - i * d] == color) {
                return true;
            }
            d += 1;
        }
        false
    }

    fn dfs(&mut self, used: u32) {
        if self.colors.len() > self.best.len() {
            self.best = self.colors.clone();
        }
        if self.colors.len() >= self.limit || self.out_of_budget {
            return;
        }
        for color in 1..=self.r.min(used + 1) {
            if self.nodes >= self.budget {
                self.out_of_budget = true;
                return;
            }
            self.nodes += 1;
            if self.closes_ap(color) {
                continue;
            }
            self.colors.push(color);
            self.dfs(used.max(color));
            self.colors.pop();
            if self.best.len() >= self.limit || self.out_of_budget {
                return;
            }
        }
    }
}

/// `w(k; r)` by exhaustive backtracking over colorings of `1, 2, ..`.
///
/// Returns `Exact(L + 1)` where `L` is the longest interval admitting a
/// good coloring, together with such a coloring. If a good coloring of
/// `[n_limit]` exists the result is `AtLeast(n_limit + 1)`; running out of
/// nodes gives `AtLeast` of the best length seen plus one.
pub fn vdw(k: usize, r: u32, n_limit: usize, node_budget: u64) -> SearchResult {
    let mut s = IntervalSearch {
        k: k.max(2),
        r: r.max(1),
        limit: n_limit,
        budget: node_budget,
        nodes: 0,
        colors: Vec::new(),
        best: Vec::new(),
        out_of_budget: false,
    };
    s.dfs(0);
    let len = s.best.len() as u64;
    let value = if s.best.len() >= n_limit || s.out_of_budget {
        SearchValue::AtLeast(len + 1)
    } else {
        SearchValue::Exact(len + 1)
    };
    SearchResult {
        target: Target::Vdw { k, r },
        value,
        witness: Some(s.best),
        nodes: s.nodes,
        runtime: None,
    }
}

/// Distinct non-trivial k-APs of an enumerable group as sorted index sets,
/// bucketed by their largest index.
fn progressions_by_max(group: &Group, k: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = group.enumerable_order()?;
    let ix = group.indexer();
    let mut seen = BTreeSet::new();
    let mut by_max = alloc::vec![Vec::new(); n];
    for d in 1..n {
        for x in 0..n {
            let mut set = Vec::with_capacity(k);
            let mut cur = x;
            for _ in 0..k {
                set.push(cur);
                cur = ix.add(cur, d);
            }
            set.sort_unstable();
            set.dedup();
            if seen.insert(set.clone()) {
                by_max[*set.last().expect("non-empty")].push(set);
            }
        }
    }
    Ok(by_max)
}

struct GroupSearch<'a> {
    r: u32,
    by_max: &'a [Vec<Vec<usize>>],
    colors: Vec<u32>,
    budget: u64,
    nodes: u64,
}

impl GroupSearch<'_> {
    fn dfs(&mut self, used: u32) -> Option<bool> {
        let e = self.colors.len();
        if e == self.by_max.len() {
            return Some(true);
        }
        for color in 1..=self.r.min(used + 1) {
            if self.nodes >= self.budget {
                return None;
            }
            self.nodes += 1;
            let closes = self.by_max[e]
                .iter()
                .any(|ap| ap[..ap.len() - 1].iter().all(|&i| self.colors[i] == color));
            if closes {
                continue;
            }
            self.colors.push(color);
            match self.dfs(used.max(color)) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.colors.pop();
        }
        Some(false)
    }
}

/// Decides whether `group` has an `r`-coloring with every class k-AP-free.
pub fn exists_coloring(group: &Group, r: u32, k: usize, node_budget: u64) -> Result<Decision<Coloring>> {
    exists_coloring_counted(group, r, k, node_budget).map(|(d, _)| d)
}

fn exists_coloring_counted(group: &Group, r: u32, k: usize, node_budget: u64) -> Result<(Decision<Coloring>, u64)> {
    if r == 0 {
        return Ok((Decision::Exhausted, 0));
    }
    let by_max = progressions_by_max(group, k.max(1))?;
    let by_max = if k < 2 { alloc::vec![Vec::new(); by_max.len()] } else { by_max };
    let mut s = GroupSearch { r, by_max: &by_max, colors: Vec::new(), budget: node_budget, nodes: 0 };
    let decision = match s.dfs(0) {
        Some(true) => Decision::Found(Coloring::new(group.clone(), r, s.colors)?),
        Some(false) => Decision::Exhausted,
        None => Decision::Indeterminate,
    };
    Ok((decision, s.nodes))
}

/// Least `k <= k_limit` such that some `r`-coloring of `Z/n` has no
/// monochromatic non-trivial k-AP.
pub fn kappa_cyclic(n: u64, r: u32, k_limit: usize, node_budget: u64) -> Result<SearchResult> {
    let group = Group::cyclic(n)?;
    let mut nodes = 0u64;
    let mut undecided = false;
    for k in 2..=k_limit {
        let (decision, used) = exists_coloring_counted(&group, r, k, node_budget)?;
        nodes += used;
        match decision {
            Decision::Found(c) => {
                let value = if undecided { SearchValue::AtMost(k as u64) } else { SearchValue::Exact(k as u64) };
                return Ok(SearchResult {
                    target: Target::Kappa { n, r },
                    value,
                    witness: Some(c.colors().to_vec()),
                    nodes,
                    runtime: None,
                });
            }
            Decision::Exhausted => {}
            Decision::Indeterminate => undecided = true,
        }
    }
    let value = if undecided { SearchValue::Indeterminate } else { SearchValue::AtLeast(k_limit as u64 + 1) };
    Ok(SearchResult { target: Target::Kappa { n, r }, value, witness: None, nodes, runtime: None })
}
