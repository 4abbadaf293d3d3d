//! Shared machinery for the class-specific backtracking searches.
//!
//! Every search produces one representative per translation class (a
//! [`RepView`]); conventions and boundary modes are derived from it by the
//! layer profile along `x_1`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lattice::{Point, Polymer, PolymerClass};
use crate::topology::CombSignature;

/// Signature stack of a comb as it is being grown.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SigView<'a> {
    pub ns: &'a [u16],
    pub ss: &'a [u16],
    pub last: u16,
}

impl SigView<'_> {
    pub fn to_signature(&self) -> CombSignature {
        let mut n: Vec<usize> = self.ns.iter().map(|&x| x as usize).collect();
        n.push(self.last as usize);
        CombSignature::new_unchecked(self.ss.len(), n, self.ss.iter().map(|&x| x as usize).collect())
    }

    /// Packs the signature into 128 bits (5 bits per entry), for hashing in hot loops.
    pub fn packed(&self) -> u128 {
        let mut k: u128 = self.ss.len() as u128;
        for (&n, &s) in self.ns.iter().zip(self.ss) {
            k = (k << 5 | n as u128) << 5 | s as u128;
        }
        k << 5 | self.last as u128
    }
}

/// One translation-class representative, borrowed from the search stack.
pub(crate) struct RepView<'a> {
    pub grid: &'a Grid,
    pub class: PolymerClass,
    /// Grid indices; in walk order for walks, growth order otherwise.
    pub sites: &'a [u32],
    pub edges: &'a [(u32, u32)],
    pub labels: Option<(u32, u32)>,
    pub comb: Option<SigView<'a>>,
}

/// Per-layer site counts along `x_1`.
pub(crate) struct Layers {
    pub lo: i32,
    pub counts: Vec<u32>,
}

impl Layers {
    pub fn min_count(&self) -> u32 {
        self.counts[0]
    }

    pub fn count_at(&self, layer: i32) -> u32 {
        let i = layer - self.lo;
        if i < 0 || i as usize >= self.counts.len() {
            0
        } else {
            self.counts[i as usize]
        }
    }
}

impl RepView<'_> {
    pub fn layers(&self) -> Layers {
        let g = self.grid;
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for &s in self.sites {
            let l = g.layer(s as usize);
            lo = lo.min(l);
            hi = hi.max(l);
        }
        let mut counts = vec![0u32; (hi - lo + 1) as usize];
        for &s in self.sites {
            counts[(g.layer(s as usize) - lo) as usize] += 1;
        }
        Layers { lo, counts }
    }

    pub fn lex_min(&self) -> u32 {
        *self.sites.iter().min().unwrap()
    }

    /// Materializes the representative translated so `anchor` sits at the origin.
    pub fn polymer(&self, anchor: u32) -> Polymer {
        let g = self.grid;
        let pt = |i: u32| g.rel_point(i as usize, anchor as usize);
        let sites: Vec<Point> = self.sites.iter().map(|&s| pt(s)).collect();
        let edges = self.edges.iter().map(|&(a, b)| (pt(a), pt(b))).collect();
        let labels = self.labels.map(|(a, b)| (pt(a), pt(b)));
        Polymer::new(self.class, g.d, sites, edges, labels).expect("representative is well formed")
    }

    /// Degree of each site in `sites` order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.sites.len()];
        let pos = |x: u32| self.sites.iter().position(|&s| s == x).unwrap();
        for &(a, b) in self.edges {
            deg[pos(a)] += 1;
            deg[pos(b)] += 1;
        }
        deg
    }

    /// Local adjacency lists (indices into `sites`).
    pub fn local_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.sites.len()];
        let pos = |x: u32| self.sites.iter().position(|&s| s == x).unwrap();
        for &(a, b) in self.edges {
            let (i, j) = (pos(a), pos(b));
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}

/// Receives one representative per translation class.
pub(crate) trait RepSink: Send + Sync + Sized {
    fn fresh(&self) -> Self;
    fn rep(&mut self, r: &RepView<'_>);
    fn merge(&mut self, other: Self);
}

/// Shared node counter enforcing the optional node cap.
pub(crate) struct NodeBudget {
    used: AtomicU64,
    cap: Option<u64>,
    tripped: AtomicBool,
}

impl NodeBudget {
    pub fn new(cap: Option<u64>) -> Self {
        NodeBudget { used: AtomicU64::new(0), cap, tripped: AtomicBool::new(false) }
    }
}

const FLUSH: u64 = 1 << 14;

/// Per-task control: decides which subtrees at the split depth belong to
/// this task, and meters search nodes.
pub(crate) struct Ctl<'a> {
    split_depth: usize,
    task: usize,
    ntasks: usize,
    counter: usize,
    local: u64,
    budget: &'a NodeBudget,
}

impl Ctl<'_> {
    /// Called on entering a node at `depth`; false means skip this subtree.
    #[inline]
    pub fn take(&mut self, depth: usize) -> bool {
        if depth != self.split_depth {
            return true;
        }
        let c = self.counter;
        self.counter += 1;
        c % self.ntasks == self.task
    }

    /// Whether a leaf found at `depth` is this task's to report.
    #[inline]
    pub fn owns_leaf(&self, depth: usize) -> bool {
        depth >= self.split_depth || self.task == 0
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == FLUSH {
            self.flush()?;
        }
        Ok(())
    }

    #[cold]
    fn flush(&mut self) -> Result<()> {
        let total = self.budget.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if self.budget.tripped.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded { reason: "node cap".into(), estimate: total as f64 });
        }
        if let Some(cap) = self.budget.cap {
            if total > cap {
                self.budget.tripped.store(true, Ordering::Relaxed);
                return Err(Error::BudgetExceeded {
                    reason: format!("node cap {cap} reached"),
                    estimate: total as f64,
                });
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.flush()
    }
}

/// Fixed number of subtree buckets, independent of the thread count so
/// results merge in the same order however many threads run.
pub(crate) const NTASKS: usize = 64;

pub(crate) fn run_tasks<S, F>(
    proto: &S,
    split_depth: usize,
    threads: usize,
    budget: &NodeBudget,
    search: F,
) -> Result<S>
where
    S: RepSink,
    F: Fn(&mut Ctl<'_>, &mut S) -> Result<()> + Sync,
{
    use rayon::prelude::*;
    let one = |task: usize| -> Result<S> {
        let mut sink = proto.fresh();
        let mut ctl = Ctl { split_depth, task, ntasks: NTASKS, counter: 0, local: 0, budget };
        search(&mut ctl, &mut sink)?;
        ctl.finish()?;
        Ok(sink)
    };
    let parts: Vec<Result<S>> = if threads <= 1 {
        (0..NTASKS).map(one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| (0..NTASKS).into_par_iter().map(one).collect())
    };
    let mut out = proto.fresh();
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}
