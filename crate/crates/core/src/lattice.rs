//! Lattice points, polymer graphs, and the surface `x_1 = 0`.
//!
//! The adsorbing coordinate is always the first one. Lexicographic order on
//! points compares `x_1` first, which is the derived `Ord` on [`Point`].

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(pub Vec<i32>);

impl Point {
    pub fn origin(d: usize) -> Self {
        Point(vec![0; d])
    }

    /// `sign * e^{(axis+1)}`.
    pub fn unit(d: usize, axis: usize, sign: i32) -> Self {
        let mut c = vec![0; d];
        c[axis] = sign;
        Point(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i32) -> Point {
        Point(self.0.iter().map(|a| a * k).collect())
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|&a| (a as i64).abs()).sum()
    }

    pub fn is_neighbour(&self, o: &Point) -> bool {
        self.sub(o).l1() == 1
    }

    pub fn on_surface(&self) -> bool {
        self.0[0] == 0
    }
}

impl From<&[i32]> for Point {
    fn from(c: &[i32]) -> Self {
        Point(c.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolymerClass {
    Animal,
    Tree,
    Walk,
    Polygon,
    Comb,
}

impl PolymerClass {
    pub const ALL: [PolymerClass; 5] = [
        PolymerClass::Animal,
        PolymerClass::Tree,
        PolymerClass::Walk,
        PolymerClass::Polygon,
        PolymerClass::Comb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolymerClass::Animal => "animal",
            PolymerClass::Tree => "tree",
            PolymerClass::Walk => "walk",
            PolymerClass::Polygon => "polygon",
            PolymerClass::Comb => "comb",
        }
    }

    /// Walks and combs carry an ordered pair of labelled ends.
    pub fn labelled(self) -> bool {
        matches!(self, PolymerClass::Walk | PolymerClass::Comb)
    }

    /// Animals and trees are sized by sites, the rest by edges.
    pub fn sized_by_sites(self) -> bool {
        matches!(self, PolymerClass::Animal | PolymerClass::Tree)
    }
}

impl fmt::Display for PolymerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolymerClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolymerClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown polymer class `{s}`")))
    }
}

/// Reason a polymer fails validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    NonUnitEdge,
    Disconnected,
    NotATree,
    UnexpectedLabels,
    MissingLabels,
    LabelDegree,
    WalkShape,
    PolygonDegree,
    PolygonSize,
    CombDegree,
    CombBranchOffBackbone,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::Empty => "empty",
            Violation::NonUnitEdge => "non-unit-edge",
            Violation::Disconnected => "disconnected",
            Violation::NotATree => "not-a-tree",
            Violation::UnexpectedLabels => "unexpected-labels",
            Violation::MissingLabels => "missing-labels",
            Violation::LabelDegree => "label-degree",
            Violation::WalkShape => "walk-shape",
            Violation::PolygonDegree => "polygon-degree",
            Violation::PolygonSize => "polygon-size",
            Violation::CombDegree => "comb-degree",
            Violation::CombBranchOffBackbone => "comb-branch-off-backbone",
        };
        f.write_str(s)
    }
}

/// A finite subgraph of `Z^d` with a class tag.
///
/// Sites are kept sorted lexicographically and edges refer to site indices,
/// so two polymers with the same geometry compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polymer {
    class: PolymerClass,
    d: usize,
    sites: Vec<Point>,
    edges: Vec<(usize, usize)>,
    labels: Option<(usize, usize)>,
}

impl Polymer {
    pub fn new(
        class: PolymerClass,
        d: usize,
        sites: Vec<Point>,
        edges: Vec<(Point, Point)>,
        labels: Option<(Point, Point)>,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::Malformed(format!("dimension {d} < 2")));
        }
        let mut sites = sites;
        if let Some(p) = sites.iter().find(|p| p.dim() != d) {
            return Err(Error::Malformed(format!("point {p} not of dimension {d}")));
        }
        sites.sort();
        sites.dedup();
        let idx = |p: &Point| {
            sites
                .binary_search(p)
                .map_err(|_| Error::Malformed(format!("{p} is not a site")))
        };
        let mut e = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let (i, j) = (idx(a)?, idx(b)?);
            e.push((i.min(j), i.max(j)));
        }
        e.sort_unstable();
        e.dedup();
        let labels = match labels {
            Some((a, b)) => Some((idx(&a)?, idx(&b)?)),
            None => None,
        };
        Ok(Polymer { class, d, sites, edges: e, labels })
    }

    /// A walk (or a comb without side chains) through `pts` in order.
    pub fn path(class: PolymerClass, pts: &[Point]) -> Result<Self> {
        let d = pts.first().map(Point::dim).unwrap_or(0);
        let edges = pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        let labels = match (pts.first(), pts.last()) {
            (Some(a), Some(b)) if class.labelled() => Some((a.clone(), b.clone())),
            _ => None,
        };
        Polymer::new(class, d, pts.to_vec(), edges, labels)
    }

    /// A closed cycle through `pts` in order.
    pub fn cycle(pts: &[Point]) -> Result<Self> {
        let d = pts.first().map(Point::dim).unwrap_or(0);
        let n = pts.len();
        let edges = (0..n).map(|i| (pts[i].clone(), pts[(i + 1) % n].clone())).collect();
        Polymer::new(PolymerClass::Polygon, d, pts.to_vec(), edges, None)
    }

    pub fn class(&self) -> PolymerClass {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<(usize, usize)> {
        self.labels
    }

    pub fn label_points(&self) -> Option<(&Point, &Point)> {
        self.labels.map(|(a, b)| (&self.sites[a], &self.sites[b]))
    }

    pub fn site_index(&self, p: &Point) -> Option<usize> {
        self.sites.binary_search(p).ok()
    }

    pub fn edge_points(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.edges.iter().map(move |&(a, b)| (&self.sites[a], &self.sites[b]))
    }

    pub fn with_class(&self, class: PolymerClass) -> Polymer {
        Polymer { class, ..self.clone() }
    }

    /// Same geometry with the label pair replaced (or dropped).
    pub fn with_labels(&self, labels: Option<(Point, Point)>) -> Result<Polymer> {
        let labels = match labels {
            Some((a, b)) => {
                let ia = self
                    .site_index(&a)
                    .ok_or_else(|| Error::Malformed(format!("{a} is not a site")))?;
                let ib = self
                    .site_index(&b)
                    .ok_or_else(|| Error::Malformed(format!("{b} is not a site")))?;
                Some((ia, ib))
            }
            None => None,
        };
        Ok(Polymer { labels, ..self.clone() })
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.sites.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.sites.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Checks every invariant of the polymer's class.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.sites.len();
        if n == 0 {
            return Err(Violation::Empty);
        }
        for (a, b) in self.edge_points() {
            if !a.is_neighbour(b) {
                return Err(Violation::NonUnitEdge);
            }
        }
        let adj = self.adjacency();
        if bfs_dist(&adj, 0).iter().any(|d| d.is_none()) {
            return Err(Violation::Disconnected);
        }
        let deg = self.degrees();
        let is_tree = self.edges.len() + 1 == n;
        match self.class {
            PolymerClass::Animal => self.no_labels(),
            PolymerClass::Tree => {
                self.no_labels()?;
                if !is_tree {
                    return Err(Violation::NotATree);
                }
                Ok(())
            }
            PolymerClass::Polygon => {
                self.no_labels()?;
                if deg.iter().any(|&k| k != 2) {
                    return Err(Violation::PolygonDegree);
                }
                if n < 4 || n % 2 != 0 {
                    return Err(Violation::PolygonSize);
                }
                Ok(())
            }
            PolymerClass::Walk | PolymerClass::Comb => {
                if !is_tree {
                    return Err(Violation::NotATree);
                }
                let (a, b) = self.labels.ok_or(Violation::MissingLabels)?;
                if n == 1 {
                    return Ok(());
                }
                if a == b || deg[a] != 1 || deg[b] != 1 {
                    return Err(Violation::LabelDegree);
                }
                if self.class == PolymerClass::Walk {
                    if deg.iter().any(|&k| k > 2) {
                        return Err(Violation::WalkShape);
                    }
                    return Ok(());
                }
                if deg.iter().any(|&k| k > 3) {
                    return Err(Violation::CombDegree);
                }
                let on_backbone = path_mask(&adj, a, b);
                if (0..n).any(|i| deg[i] == 3 && !on_backbone[i]) {
                    return Err(Violation::CombBranchOffBackbone);
                }
                Ok(())
            }
        }
    }

    fn no_labels(&self) -> std::result::Result<(), Violation> {
        match self.labels {
            Some(_) => Err(Violation::UnexpectedLabels),
            None => Ok(()),
        }
    }

    /// σ(ρ): number of sites on the hyperplane `x_1 = 0`.
    pub fn visits(&self) -> usize {
        self.sites.iter().filter(|p| p.on_surface()).count()
    }

    pub fn in_halfspace(&self) -> bool {
        self.sites.iter().all(|p| p.0[0] >= 0)
    }

    pub fn contains_origin(&self) -> bool {
        self.site_index(&Point::origin(self.d)).is_some()
    }

    pub fn lex_min_site(&self) -> &Point {
        &self.sites[0]
    }

    pub fn translate(&self, v: &Point) -> Polymer {
        // Translation preserves lexicographic order, so indices stay valid.
        Polymer {
            sites: self.sites.iter().map(|p| p.add(v)).collect(),
            ..self.clone()
        }
    }

    pub fn lex_normalize(&self) -> Polymer {
        let m = self.sites[0].scale(-1);
        self.translate(&m)
    }

    /// `1 + max_j − min_j` for each coordinate.
    pub fn spans(&self) -> Vec<usize> {
        (0..self.d)
            .map(|j| {
                let lo = self.sites.iter().map(|p| p.0[j]).min().unwrap_or(0);
                let hi = self.sites.iter().map(|p| p.0[j]).max().unwrap_or(0);
                (hi - lo + 1) as usize
            })
            .collect()
    }

    /// Edge count of the longest simple path, by a double BFS sweep.
    pub fn longest_path(&self) -> Result<usize> {
        let acyclic = self.edges.len() + 1 == self.sites.len();
        if self.class == PolymerClass::Polygon || !acyclic {
            return Err(Error::WrongClass {
                expected: "tree, walk or comb".into(),
                got: self.class.to_string(),
            });
        }
        let adj = self.adjacency();
        let far = |s: usize| {
            let dist = bfs_dist(&adj, s);
            dist.iter()
                .enumerate()
                .max_by_key(|&(i, d)| (d.unwrap_or(0), std::cmp::Reverse(i)))
                .map(|(i, d)| (i, d.unwrap_or(0)))
                .unwrap_or((s, 0))
        };
        let (u, _) = far(0);
        Ok(far(u).1)
    }

    /// Image under the point symmetry `x'_i = signs[i] * x_{perm[i]}`.
    pub fn transform(&self, perm: &[usize], signs: &[i32]) -> Polymer {
        let map = |p: &Point| Point((0..self.d).map(|i| signs[i] * p.0[perm[i]]).collect());
        let sites: Vec<Point> = self.sites.iter().map(map).collect();
        let edges = self.edges.iter().map(|&(a, b)| (sites[a].clone(), sites[b].clone())).collect();
        let labels = self.labels.map(|(a, b)| (sites[a].clone(), sites[b].clone()));
        Polymer::new(self.class, self.d, sites, edges, labels).expect("symmetry image is well formed")
    }

    /// Walk/comb with the two labels swapped.
    pub fn reversed(&self) -> Polymer {
        Polymer { labels: self.labels.map(|(a, b)| (b, a)), ..self.clone() }
    }

    /// Ordered site list of a walk from `ρ_A` to `ρ_B`.
    pub fn walk_order(&self) -> Result<Vec<usize>> {
        if self.class != PolymerClass::Walk {
            return Err(Error::WrongClass { expected: "walk".into(), got: self.class.to_string() });
        }
        let (a, b) = self.labels.ok_or_else(|| Error::Malformed("walk without labels".into()))?;
        Ok(path_between(&self.adjacency(), a, b))
    }

    /// One-line text form: `class d; sites; edges; labels`.
    pub fn to_line(&self) -> String {
        let sites: Vec<String> = self.sites.iter().map(|p| p.to_string()).collect();
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        let labels = match self.labels {
            Some((a, b)) => format!("{a}>{b}"),
            None => "-".to_string(),
        };
        format!("{} {}; {}; {}; {}", self.class, self.d, sites.join(" "), edges.join(" "), labels)
    }

    pub fn parse_line(line: &str) -> Result<Polymer> {
        let parts: Vec<&str> = line.trim().split(';').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse("expected four `;`-separated fields".into()));
        }
        let mut head = parts[0].split_whitespace();
        let class: PolymerClass = head.next().unwrap_or("").parse()?;
        let d: usize = head
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("missing dimension".into()))?;
        let sites = parts[1]
            .split_whitespace()
            .map(|t| {
                t.split(',')
                    .map(|c| c.parse::<i32>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                    .collect::<Result<Vec<i32>>>()
                    .map(Point)
            })
            .collect::<Result<Vec<Point>>>()?;
        let pair = |t: &str, sep: char| -> Result<(usize, usize)> {
            let (a, b) = t.split_once(sep).ok_or_else(|| Error::Parse(format!("bad pair `{t}`")))?;
            let p = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&i| i < sites.len())
                    .ok_or_else(|| Error::Parse(format!("bad site index `{s}`")))
            };
            Ok((p(a)?, p(b)?))
        };
        let edges = parts[2]
            .split_whitespace()
            .map(|t| pair(t, '-').map(|(a, b)| (sites[a].clone(), sites[b].clone())))
            .collect::<Result<Vec<_>>>()?;
        let labels = match parts[3] {
            "-" | "" => None,
            t => {
                let (a, b) = pair(t, '>')?;
                Some((sites[a].clone(), sites[b].clone()))
            }
        };
        let p = Polymer::new(class, d, sites.clone(), edges, labels)?;
        if p.sites.len() != sites.len() {
            return Err(Error::Parse("duplicate sites".into()));
        }
        Ok(p)
    }
}

impl fmt::Display for Polymer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

pub(crate) fn bfs_dist(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut q = VecDeque::from([s]);
    dist[s] = Some(0);
    while let Some(u) = q.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// Vertices of the unique `a`–`b` path in a tree, in order from `a`.
pub(crate) fn path_between(adj: &[Vec<usize>], a: usize, b: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    let mut q = VecDeque::from([a]);
    parent[a] = a;
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                q.push_back(v);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn path_mask(adj: &[Vec<usize>], a: usize, b: usize) -> Vec<bool> {
    let mut mask = vec![false; adj.len()];
    for v in path_between(adj, a, b) {
        mask[v] = true;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i32]) -> Point {
        Point(c.to_vec())
    }

    #[test]
    fn round_trip_line() {
        let w = Polymer::path(PolymerClass::Walk, &[p(&[0, 0]), p(&[1, 0]), p(&[1, 1])]).unwrap();
        let line = w.to_line();
        assert_eq!(line, "walk 2; 0,0 1,0 1,1; 0-1 1-2; 0>2");
        assert_eq!(Polymer::parse_line(&line).unwrap(), w);
    }

    #[test]
    fn comb_branch_must_sit_on_backbone() {
        // T-shape whose degree-3 site is off the labelled path.
        let sites = vec![p(&[0, 0]), p(&[1, 0]), p(&[2, 0]), p(&[2, 1]), p(&[3, 0]), p(&[2, -1])];
        let edges = vec![
            (p(&[0, 0]), p(&[1, 0])),
            (p(&[1, 0]), p(&[2, 0])),
            (p(&[2, 0]), p(&[2, 1])),
            (p(&[2, 0]), p(&[3, 0])),
            (p(&[2, 0]), p(&[2, -1])),
        ];
        let c = Polymer::new(PolymerClass::Comb, 2, sites, edges, Some((p(&[0, 0]), p(&[3, 0])))).unwrap();
        assert_eq!(c.validate(), Err(Violation::CombDegree));
    }
}
