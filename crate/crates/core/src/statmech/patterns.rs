//! Occurrence histograms of local patterns.

use std::fmt;
use std::str::FromStr;

use crate::enumerate::{for_each_rep, Budget, EnsembleSpec, Histogram};
use crate::error::{Error, Result};
use crate::lattice::{Polymer, PolymerClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Sites of degree `2d` (trees, animals).
    StarH,
    /// A straight 4-step `+e_1` run centred on `ω(j)`, with no other walk
    /// site in `ω(j) + [−2,2]^d` (walks).
    SawPq,
    /// Number of side chains (combs).
    SideChainCount,
}

impl Pattern {
    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::StarH => "star-H",
            Pattern::SawPq => "saw-PQ",
            Pattern::SideChainCount => "side-chain-count",
        }
    }

    fn fits(self, class: PolymerClass) -> bool {
        matches!(
            (self, class),
            (Pattern::StarH, PolymerClass::Tree | PolymerClass::Animal)
                | (Pattern::SawPq, PolymerClass::Walk)
                | (Pattern::SideChainCount, PolymerClass::Comb)
        )
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Pattern::StarH, Pattern::SawPq, Pattern::SideChainCount]
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown pattern `{s}`")))
    }
}

/// Counts occurrences in a walk given as its ordered site coordinates.
fn pq_count(pts: &[Vec<i32>]) -> usize {
    let n = pts.len().saturating_sub(1);
    let mut hits = 0;
    for j in 2..=n.saturating_sub(2) {
        if j + 2 > n {
            break;
        }
        let straight = (j - 2..j + 2).all(|i| {
            let (a, b) = (&pts[i], &pts[i + 1]);
            b[0] - a[0] == 1 && a[1..] == b[1..]
        });
        if !straight {
            continue;
        }
        let c = &pts[j];
        let crowded = pts
            .iter()
            .enumerate()
            .any(|(i, p)| (i + 2 < j || i > j + 2) && p.iter().zip(c).all(|(x, y)| (x - y).abs() <= 2));
        if !crowded {
            hits += 1;
        }
    }
    hits
}

/// Number of `j` at which the pattern occurs in walk `p`.
pub fn pq_occurrences(p: &Polymer) -> Result<usize> {
    if p.class() != PolymerClass::Walk {
        return Err(Error::WrongClass { expected: "walk".into(), got: p.class().to_string() });
    }
    let order = p.walk_order()?;
    let pts: Vec<Vec<i32>> = order.iter().map(|&i| p.sites()[i].0.clone()).collect();
    Ok(pq_count(&pts))
}

/// Histogram of per-configuration occurrence counts over `spec`.
pub fn pattern_stats(spec: &EnsembleSpec, pattern: Pattern, budget: &Budget) -> Result<Histogram> {
    if !pattern.fits(spec.class) {
        return Err(Error::InvalidArgument(format!("pattern {pattern} does not apply to {}", spec.class)));
    }
    match pattern {
        Pattern::StarH => {
            let full = 2 * spec.d;
            for_each_rep(spec, budget, move |r| r.degrees().into_iter().filter(|&x| x == full).count())
        }
        Pattern::SawPq => for_each_rep(spec, budget, |r| {
            let pts: Vec<Vec<i32>> = r.sites.iter().map(|&s| r.grid.coords(s as usize)).collect();
            pq_count(&pts)
        }),
        Pattern::SideChainCount => {
            for_each_rep(spec, budget, |r| r.comb.map_or(0, |s| s.ss.len()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;

    #[test]
    fn straight_walk() {
        for n in 5..10 {
            let pts: Vec<Point> = (0..=n).map(|i| Point(vec![i, 0])).collect();
            let w = Polymer::path(PolymerClass::Walk, &pts).unwrap();
            assert_eq!(pq_occurrences(&w).unwrap(), n as usize - 3);
        }
    }

    #[test]
    fn bent_walk_blocks_window() {
        // A U-turn brings the tail back within the box.
        let pts: Vec<Point> = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (4, 1), (3, 1)]
            .iter()
            .map(|&(x, y)| Point(vec![x, y]))
            .collect();
        let w = Polymer::path(PolymerClass::Walk, &pts).unwrap();
        assert_eq!(pq_occurrences(&w).unwrap(), 0);
    }
}
