//! Slow reference counts for cross-checking the enumerator.
//!
//! Everything here is deliberately naive: shapes are grown one site at a
//! time and deduplicated by translation, spanning trees are counted with
//! the matrix-tree theorem or listed by brute force over edge subsets.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Site = Vec<i32>;

fn neighbours(p: &Site) -> impl Iterator<Item = Site> + '_ {
    (0..p.len()).flat_map(move |k| {
        [1, -1].into_iter().map(move |s| {
            let mut q = p.clone();
            q[k] += s;
            q
        })
    })
}

fn normalize(mut set: Vec<Site>) -> Vec<Site> {
    let d = set[0].len();
    for k in 0..d {
        let lo = set.iter().map(|p| p[k]).min().unwrap();
        for p in set.iter_mut() {
            p[k] -= lo;
        }
    }
    set.sort();
    set
}

/// Connected site sets of size `n` in `Z^d`, one per translation class.
pub fn site_sets(d: usize, n: usize) -> Vec<Vec<Site>> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<Vec<Site>> = BTreeSet::new();
    level.insert(vec![vec![0; d]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for set in &level {
            let have: HashSet<&Site> = set.iter().collect();
            for p in set {
                for q in neighbours(p) {
                    if !have.contains(&q) {
                        let mut grown = set.clone();
                        grown.push(q);
                        next.insert(normalize(grown));
                    }
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Lattice edges between sites of `set`, as index pairs.
pub fn induced_edges(set: &[Site]) -> Vec<(usize, usize)> {
    let index: HashMap<&Site, usize> = set.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out = Vec::new();
    for (i, p) in set.iter().enumerate() {
        for q in neighbours(p) {
            if let Some(&j) = index.get(&q) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn spanning_tree_count(n: usize, edges: &[(usize, usize)]) -> BigUint {
    if n == 1 {
        return BigUint::one();
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for &(a, b) in edges {
        lap[a][a] += 1;
        lap[b][b] += 1;
        lap[a][b] -= 1;
        lap[b][a] -= 1;
    }
    let minor: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    determinant(&minor).to_biguint().expect("Laplacian minors are nonnegative")
}

/// Lattice trees with `n` sites, up to translation (matrix-tree theorem on
/// every connected site set).
pub fn tree_count(d: usize, n: usize) -> BigUint {
    site_sets(d, n).iter().map(|s| spanning_tree_count(s.len(), &induced_edges(s))).sum()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for &(a, b) in edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x != y {
            parent[x] = y;
            parts -= 1;
        }
    }
    parts == 1
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect()
    })
}

/// Spanning connected subgraphs of each site set, listed edge set by edge set.
fn spanning_subgraphs(set: &[Site]) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let n = set.len();
    let all = induced_edges(set);
    let chosen: Vec<Vec<(usize, usize)>> = subsets(&all).filter(|s| connected(n, s)).collect();
    chosen.into_iter()
}

/// Lattice animals (connected subgraphs) with `n` sites, up to translation.
pub fn animal_count(d: usize, n: usize) -> BigUint {
    site_sets(d, n).iter().map(|s| BigUint::from(spanning_subgraphs(s).count())).sum()
}

/// Animals with `n` sites as (sites, edges), up to translation.
pub fn animals(d: usize, n: usize) -> Vec<(Vec<Site>, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for s in site_sets(d, n) {
        for e in spanning_subgraphs(&s) {
            out.push((s.clone(), e));
        }
    }
    out
}

/// Lattice trees with `n` sites as (sites, edges), up to translation.
pub fn trees(d: usize, n: usize) -> Vec<(Vec<Site>, Vec<(usize, usize)>)> {
    animals(d, n).into_iter().filter(|(s, e)| e.len() + 1 == s.len()).collect()
}

/// `n`-step self-avoiding walks starting at the origin.
pub fn walk_count(d: usize, n: usize) -> u64 {
    fn go(p: &Site, left: usize, seen: &mut HashSet<Site>) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut c = 0;
        for q in neighbours(p).collect::<Vec<_>>() {
            if seen.insert(q.clone()) {
                c += go(&q, left - 1, seen);
                seen.remove(&q);
            }
        }
        c
    }
    let o = vec![0; d];
    let mut seen = HashSet::from([o.clone()]);
    go(&o, n, &mut seen)
}

/// `n`-step walks from the origin, as site sequences.
pub fn walks(d: usize, n: usize) -> Vec<Vec<Site>> {
    fn go(path: &mut Vec<Site>, left: usize, out: &mut Vec<Vec<Site>>) {
        if left == 0 {
            out.push(path.clone());
            return;
        }
        let last = path.last().unwrap().clone();
        for q in neighbours(&last).collect::<Vec<_>>() {
            if !path.contains(&q) {
                path.push(q);
                go(path, left - 1, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![vec![0; d]], n, &mut out);
    out
}

/// Self-avoiding polygons with `n` edges, up to translation.
pub fn polygon_count(d: usize, n: usize) -> u64 {
    if n < 4 || n % 2 == 1 {
        return 0;
    }
    // Rooted, oriented closed walks through the origin, each polygon counted 2n times.
    let closing = walks(d, n - 1).into_iter().filter(|w| {
        let e = w.last().unwrap();
        e.iter().map(|x| x.abs()).sum::<i32>() == 1
    });
    closing.count() as u64 / (2 * n as u64)
}

/// Combs with `n` edges, up to translation: every lattice tree with `n+1`
/// sites and every ordered pair of leaves that makes it a comb. Each comb
/// is returned as its site set.
pub fn combs(d: usize, n: usize) -> Vec<Vec<Site>> {
    if n == 0 {
        return vec![vec![vec![0; d]]];
    }
    let mut out = Vec::new();
    for (s, e) in trees(d, n + 1) {
        let m = s.len();
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &e {
            adj[a].push(b);
            adj[b].push(a);
        }
        if adj.iter().any(|v| v.len() > 3) {
            continue;
        }
        let leaves: Vec<usize> = (0..m).filter(|&i| adj[i].len() == 1).collect();
        for &a in &leaves {
            for &b in &leaves {
                if a == b {
                    continue;
                }
                let path = tree_path(&adj, a, b);
                if (0..m).all(|v| adj[v].len() < 3 || path.contains(&v)) {
                    out.push(s.clone());
                }
            }
        }
    }
    out
}

pub fn comb_count(d: usize, n: usize) -> u64 {
    combs(d, n).len() as u64
}

/// Self-avoiding polygons with `n` edges, up to translation, as site cycles.
pub fn polygons(d: usize, n: usize) -> Vec<Vec<Site>> {
    if n < 4 || n % 2 == 1 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in walks(d, n - 1) {
        let e = w.last().unwrap();
        if e.iter().map(|x| x.abs()).sum::<i32>() != 1 {
            continue;
        }
        let mut edges: Vec<(Site, Site)> = (0..n)
            .map(|i| {
                let (a, b) = (w[i].clone(), w[(i + 1) % n].clone());
                if a < b { (a, b) } else { (b, a) }
            })
            .collect();
        let d = w[0].len();
        let lo: Vec<i32> = (0..d).map(|k| w.iter().map(|p| p[k]).min().unwrap()).collect();
        for (a, b) in edges.iter_mut() {
            for k in 0..d {
                a[k] -= lo[k];
                b[k] -= lo[k];
            }
        }
        edges.sort();
        if seen.insert(edges) {
            out.push(w);
        }
    }
    out
}

fn tree_path(adj: &[Vec<usize>], a: usize, b: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut stack = vec![a];
    prev[a] = a;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                stack.push(w);
            }
        }
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(prev[*path.last().unwrap()]);
    }
    path
}

/// Largest graph distance between two vertices, by BFS from every vertex.
pub fn diameter(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(dist.into_iter().filter(|&x| x != usize::MAX).max().unwrap());
    }
    best
}

fn canon(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| canon(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn centres(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&i| deg[i] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical string of an unlabelled free tree on `0..n`.
pub fn free_tree_canon(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    centres(&adj).iter().map(|&c| canon(&adj, c, usize::MAX)).min().unwrap()
}

/// Unlabelled free trees on `n` vertices with every degree at most `max_deg`,
/// found by decoding every Prüfer sequence.
pub fn free_trees_bounded(n: usize, max_deg: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let mut seen = HashSet::new();
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        let mut deg = vec![1usize; n];
        for &x in &seq {
            deg[x] += 1;
        }
        if deg.iter().all(|&k| k <= max_deg) {
            let mut d = deg.clone();
            let mut edges = Vec::with_capacity(n - 1);
            for &x in &seq {
                let leaf = (0..n).find(|&i| d[i] == 1).unwrap();
                edges.push((leaf, x));
                d[leaf] -= 1;
                d[x] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&i| d[i] == 1).collect();
            edges.push((rest[0], rest[1]));
            seen.insert(free_tree_canon(n, &edges));
        }
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
    }
    seen.len()
}

/// Crossing data of a closed 3-d polygon projected along a fixed generic
/// direction.
pub struct Diagram {
    /// Arc index of the over strand, incoming and outgoing under arcs, sign.
    pub crossings: Vec<(usize, usize, usize, i32)>,
    pub arcs: usize,
}

const SKEW: [f64; 2] = [0.318_309_886, 0.207_879_576];

fn project(p: &[i32; 3]) -> ([f64; 2], f64) {
    let z = p[2] as f64;
    ([p[0] as f64 + SKEW[0] * z, p[1] as f64 + SKEW[1] * z], z - SKEW[0] * p[0] as f64 - SKEW[1] * p[1] as f64)
}

/// Builds the diagram of the closed polygon through `pts` in order.
pub fn diagram(pts: &[[i32; 3]]) -> Diagram {
    let n = pts.len();
    let seg = |i: usize| (project(&pts[i]), project(&pts[(i + 1) % n]));
    // (edge, parameter along it) of every undercrossing, plus its over edge data.
    let mut unders: Vec<(usize, f64, usize, f64, i32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let ((p0, h0), (p1, h1)) = seg(i);
            let ((q0, g0), (q1, g1)) = seg(j);
            let r = [p1[0] - p0[0], p1[1] - p0[1]];
            let s = [q1[0] - q0[0], q1[1] - q0[1]];
            let den = r[0] * s[1] - r[1] * s[0];
            if den.abs() < 1e-12 {
                continue;
            }
            let w = [q0[0] - p0[0], q0[1] - p0[1]];
            let t = (w[0] * s[1] - w[1] * s[0]) / den;
            let u = (w[0] * r[1] - w[1] * r[0]) / den;
            if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
                continue;
            }
            assert!(t > 1e-9 && t < 1.0 - 1e-9 && u > 1e-9 && u < 1.0 - 1e-9, "projection not generic");
            let hi = h0 + t * (h1 - h0);
            let hj = g0 + u * (g1 - g0);
            assert!((hi - hj).abs() > 1e-9, "strands meet");
            let (over_dir, under_dir) = if hi > hj { (r, s) } else { (s, r) };
            let sign = if over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0] > 0.0 { 1 } else { -1 };
            if hi > hj {
                unders.push((j, u, i, t, sign));
            } else {
                unders.push((i, t, j, u, sign));
            }
        }
    }
    let m = unders.len();
    if m == 0 {
        return Diagram { crossings: Vec::new(), arcs: 1 };
    }
    // Order undercrossings along the polygon; arc k runs from under-point k to k+1.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| (unders[a].0, unders[a].1).partial_cmp(&(unders[b].0, unders[b].1)).unwrap());
    let pos_of: Vec<(usize, f64)> = order.iter().map(|&k| (unders[k].0, unders[k].1)).collect();
    // Arc containing a point (edge, param): the last under-point at or before it, cyclically.
    let arc_at = |e: usize, t: f64| -> usize {
        match pos_of.iter().rposition(|&(pe, pt)| (pe, pt) <= (e, t)) {
            Some(k) => k,
            None => m - 1,
        }
    };
    let mut crossings = Vec::with_capacity(m);
    for (k, &c) in order.iter().enumerate() {
        let (_, _, oe, ot, sign) = unders[c];
        let incoming = (k + m - 1) % m;
        crossings.push((arc_at(oe, ot), incoming, k, sign));
    }
    Diagram { crossings, arcs: m }
}

/// Alexander matrix of the diagram evaluated at `t`, with the sign
/// convention `x_out = x_over^ε x_in x_over^{−ε}`.
fn alexander_matrix(dg: &Diagram, t: i64) -> Vec<Vec<BigInt>> {
    let m = dg.arcs;
    let mut rows = Vec::with_capacity(m);
    for &(over, inc, out, sign) in &dg.crossings {
        let mut row = vec![BigInt::zero(); m];
        let (a, b, c) = if sign > 0 { (1 - t, t, -1) } else { (t - 1, 1, -t) };
        row[over] += a;
        row[inc] += b;
        row[out] += c;
        rows.push(row);
    }
    rows
}

/// `|Δ(t)|` up to the unit `t^k` ambiguity removed by the caller: the
/// determinant of the Alexander matrix with its first row and column dropped.
pub fn alexander_at(pts: &[[i32; 3]], t: i64) -> BigInt {
    let dg = diagram(pts);
    if dg.crossings.is_empty() {
        return BigInt::one();
    }
    let a = alexander_matrix(&dg, t);
    let minor: Vec<Vec<BigInt>> = a[1..].iter().map(|r| r[1..].to_vec()).collect();
    determinant(&minor).abs()
}

/// Number of Fox 3-colourings of the polygon's diagram (3 for the unknot).
pub fn fox_colorings(pts: &[[i32; 3]]) -> u64 {
    let dg = diagram(pts);
    let m = dg.arcs;
    if dg.crossings.is_empty() {
        return 3;
    }
    let mut a: Vec<Vec<i64>> = alexander_matrix(&dg, -1)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().unwrap().rem_euclid(3)).collect())
        .collect();
    // Rank over GF(3).
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        let inv = if a[rank][col] == 1 { 1 } else { 2 };
        for x in a[rank].iter_mut() {
            *x = *x * inv % 3;
        }
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..m {
                    a[r][c] = (a[r][c] - f * a[rank][c]).rem_euclid(3);
                }
            }
        }
        rank += 1;
    }
    3u64.pow((m - rank) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trees() {
        // One site; a domino; the three-site trees of the square lattice.
        assert_eq!(tree_count(2, 1), BigUint::from(1u32));
        assert_eq!(tree_count(2, 2), BigUint::from(2u32));
        assert_eq!(tree_count(2, 3), BigUint::from(6u32));
        // A unit square has four spanning trees and one extra animal.
        assert_eq!(animal_count(2, 4) - tree_count(2, 4), BigUint::from(1u32));
    }

    #[test]
    fn walks_and_polygons() {
        assert_eq!(walk_count(2, 2), 12);
        assert_eq!(polygon_count(2, 4), 1);
        assert_eq!(polygon_count(2, 6), 2);
        assert_eq!(polygon_count(3, 4), 3);
        for n in [4, 6, 8] {
            assert_eq!(polygons(2, n).len() as u64, polygon_count(2, n));
        }
    }

    #[test]
    fn free_trees() {
        let got: Vec<usize> = (1..=7).map(|n| free_trees_bounded(n, 4)).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 3, 5, 9]);
        // Without a degree cap: 1, 1, 1, 2, 3, 6, 11.
        assert_eq!(free_trees_bounded(7, 6), 11);
    }

    #[test]
    fn bareiss() {
        let m: Vec<Vec<BigInt>> =
            vec![vec![2.into(), 1.into()], vec![1.into(), 3.into()]];
        assert_eq!(determinant(&m), BigInt::from(5));
    }

    #[test]
    fn square_is_unknotted() {
        let sq = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]];
        assert_eq!(fox_colorings(&sq), 3);
        assert_eq!(alexander_at(&sq, 2), BigInt::one());
    }
}
