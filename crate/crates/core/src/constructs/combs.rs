//! The comb "plus two" map and the three-case comb split, on a compact
//! comb representation shared by the polymer-level API and the exhaustive
//! checks.

use std::fmt;

use crate::enumerate::{enumerate, Budget, Configuration, Consumer, EnsembleSpec};
use crate::enumerate::{Boundary, Convention};
use crate::error::{Error, Result};
use crate::lattice::{path_between, Point, Polymer, PolymerClass};

/// Bits per packed coordinate; coordinates are stored offset by 64.
const BITS: u32 = 7;
const OFF: i64 = 64;

pub(crate) fn pack(p: &Point) -> u64 {
    p.0.iter().fold(0u64, |acc, &c| acc << BITS | (c as i64 + OFF) as u64)
}

fn unpack(d: usize, mut v: u64) -> Point {
    let mut c = vec![0; d];
    for k in (0..d).rev() {
        c[k] = (v & ((1 << BITS) - 1)) as i32 - OFF as i32;
        v >>= BITS;
    }
    Point(c)
}

fn unit(d: usize, axis: usize) -> u64 {
    1 << (BITS * (d - 1 - axis) as u32)
}

fn layer(d: usize, v: u64) -> i64 {
    (v >> (BITS * (d - 1) as u32)) as i64 - OFF
}

/// A comb as packed site positions (lexicographic order is numeric order)
/// with local adjacency lists.
#[derive(Clone, Debug)]
pub(crate) struct SmallComb {
    pub d: usize,
    pub pos: Vec<u64>,
    pub adj: Vec<Vec<usize>>,
    pub a: usize,
    pub b: usize,
}

/// A subtree of a comb: local edge list and its two labelled sites.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub edges: Vec<(usize, usize)>,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecomposeCase {
    I,
    II,
    III,
}

impl fmt::Display for DecomposeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecomposeCase::I => "I",
            DecomposeCase::II => "II",
            DecomposeCase::III => "III",
        })
    }
}

pub(crate) struct Split {
    pub case: DecomposeCase,
    pub k1: Piece,
    pub k2: Piece,
    pub theta: Piece,
    pub split: usize,
    pub u: Option<usize>,
    pub y: Option<usize>,
}

fn path_edges(path: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    path.windows(2).map(|w| (w[0], w[1]))
}

impl SmallComb {
    pub fn from_polymer(p: &Polymer) -> Self {
        let (a, b) = p.labels().expect("comb has labels");
        SmallComb { d: p.dim(), pos: p.sites().iter().map(pack).collect(), adj: p.adjacency(), a, b }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::with_capacity(self.pos.len());
        for (i, ns) in self.adj.iter().enumerate() {
            e.extend(ns.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        e
    }

    pub fn whole(&self) -> Piece {
        Piece { edges: self.edges(), a: self.a, b: self.b }
    }

    pub fn to_polymer(&self, class: PolymerClass, piece: &Piece) -> Polymer {
        let pt = |i: usize| unpack(self.d, self.pos[i]);
        let mut sites: Vec<Point> = piece.edges.iter().flat_map(|&(x, y)| [pt(x), pt(y)]).collect();
        sites.push(pt(piece.a));
        let edges = piece.edges.iter().map(|&(x, y)| (pt(x), pt(y))).collect();
        Polymer::new(class, self.d, sites, edges, Some((pt(piece.a), pt(piece.b)))).expect("piece of a comb")
    }

    pub fn point(&self, i: usize) -> Point {
        unpack(self.d, self.pos[i])
    }

    /// Sites in the lowest `x_1` layer.
    pub fn min_layer_count(&self) -> usize {
        let lo = self.pos.iter().map(|&v| layer(self.d, v)).min().unwrap_or(0);
        self.pos.iter().filter(|&&v| layer(self.d, v) == lo).count()
    }

    fn add_site(&mut self, v: u64) -> usize {
        self.pos.push(v);
        self.adj.push(Vec::new());
        self.pos.len() - 1
    }

    fn link(&mut self, x: usize, y: usize) {
        self.adj[x].push(y);
        self.adj[y].push(x);
    }

    fn unlink(&mut self, x: usize, y: usize) {
        self.adj[x].retain(|&w| w != y);
        self.adj[y].retain(|&w| w != x);
    }

    /// The map to `C_{N+2}^+`, before translation. `origin` is the local
    /// index of the site at the origin; the caller checks membership in `C_N^+`.
    pub fn plus_two(&self, origin: usize) -> Result<SmallComb> {
        let d = self.d;
        let e1 = unit(d, 0);
        let o = self.pos[origin];
        let mut out = self.clone();
        if self.adj[origin].len() == 1 {
            let m1 = out.add_site(o - e1);
            let m2 = out.add_site(o - 2 * e1);
            out.link(origin, m1);
            out.link(m1, m2);
            if out.a == origin {
                out.a = m2;
            }
            if out.b == origin {
                out.b = m2;
            }
        } else {
            let v = self.adj[origin]
                .iter()
                .copied()
                .filter(|&w| layer(d, self.pos[w]) == layer(d, o))
                .min_by_key(|&w| self.pos[w])
                .ok_or_else(|| Error::Precondition("origin has no neighbour in the surface".into()))?;
            out.unlink(origin, v);
            let vm = out.add_site(self.pos[v] - e1);
            let m1 = out.add_site(o - e1);
            out.link(v, vm);
            out.link(vm, m1);
            out.link(m1, origin);
        }
        Ok(out)
    }

    /// Backbone and side chains: `(backbone index, chain from the attach site)`.
    fn parts(&self) -> (Vec<usize>, Vec<(usize, Vec<usize>)>) {
        let backbone = path_between(&self.adj, self.a, self.b);
        let mut on = vec![false; self.pos.len()];
        for &v in &backbone {
            on[v] = true;
        }
        let mut chains = Vec::new();
        for (i, &v) in backbone.iter().enumerate() {
            if self.adj[v].len() == 3 {
                let mut chain = vec![v];
                let mut prev = v;
                let mut cur = *self.adj[v].iter().find(|&&w| !on[w]).unwrap();
                loop {
                    chain.push(cur);
                    match self.adj[cur].iter().find(|&&w| w != prev) {
                        Some(&next) => {
                            prev = cur;
                            cur = next;
                        }
                        None => break,
                    }
                }
                chains.push((i, chain));
            }
        }
        (backbone, chains)
    }

    /// Split after `n` edges; `1 ≤ n < edges`.
    pub fn split(&self, n: usize) -> Split {
        let (bb, chains) = self.parts();
        let t = bb.len() - 1;
        let m = self.edge_count() - n;
        let (mut s_before, mut prev_i) = (0, 0);
        let mut found = None;
        for (j, (i, chain)) in chains.iter().enumerate() {
            let s = chain.len() - 1;
            if prev_i + s_before < n && n <= i + s_before {
                found = Some((DecomposeCase::III, j, s_before));
                break;
            }
            if i + s_before < n && n <= i + s_before + s {
                found = Some((DecomposeCase::II, j, s_before));
                break;
            }
            s_before += s;
            prev_i = *i;
        }
        let chain_edges = |range: std::ops::Range<usize>| -> Vec<(usize, usize)> {
            chains[range].iter().flat_map(|(_, c)| path_edges(c).collect::<Vec<_>>()).collect()
        };
        let walk = |sites: &[usize]| Piece { edges: path_edges(sites).collect(), a: sites[0], b: *sites.last().unwrap() };
        let (a, b) = (bb[0], bb[t]);
        match found {
            None => {
                let k = t - m;
                let split = bb[k];
                let mut e1: Vec<_> = path_edges(&bb[..=k]).collect();
                e1.extend(chain_edges(0..chains.len()));
                Split {
                    case: DecomposeCase::I,
                    k1: Piece { edges: e1, a, b: split },
                    k2: Piece { edges: path_edges(&bb[k..]).collect(), a: split, b },
                    theta: walk(&[split]),
                    split,
                    u: None,
                    y: None,
                }
            }
            Some((DecomposeCase::II, j, s_before)) => {
                let (ij, chain) = (chains[j].0, &chains[j].1);
                let l = n - ij - s_before - 1;
                let y = bb[ij + 1];
                let mut e1: Vec<_> = path_edges(&bb[..=ij + 1]).collect();
                e1.extend(chain_edges(0..j));
                e1.extend(path_edges(&chain[..=l]));
                let mut e2: Vec<_> = path_edges(&bb[ij + 1..]).collect();
                e2.extend(chain_edges(j + 1..chains.len()));
                // y of degree 3 hands its label to the free end of its own side chain.
                let k2_a = match chains.get(j + 1) {
                    Some((i2, c2)) if *i2 == ij + 1 => *c2.last().unwrap(),
                    _ => y,
                };
                Split {
                    case: DecomposeCase::II,
                    k1: Piece { edges: e1, a, b: y },
                    k2: Piece { edges: e2, a: k2_a, b },
                    theta: walk(&chain[l..]),
                    split: y,
                    u: Some(chain[l]),
                    y: Some(y),
                }
            }
            Some((_, j, s_before)) => {
                let k = n - s_before;
                let split = bb[k];
                let mut e1: Vec<_> = path_edges(&bb[..=k]).collect();
                e1.extend(chain_edges(0..j));
                let mut e2: Vec<_> = path_edges(&bb[k..]).collect();
                let theta = if chains[j].0 == k {
                    e2.extend(chain_edges(j + 1..chains.len()));
                    walk(&chains[j].1)
                } else {
                    e2.extend(chain_edges(j..chains.len()));
                    walk(&[split])
                };
                Split {
                    case: DecomposeCase::III,
                    k1: Piece { edges: e1, a, b: split },
                    k2: Piece { edges: e2, a: split, b },
                    theta,
                    split,
                    u: None,
                    y: None,
                }
            }
        }
    }

    fn direction(&self, from: usize, to: usize) -> u8 {
        let (x, y) = (self.pos[from], self.pos[to]);
        for k in 0..self.d {
            let u = unit(self.d, k);
            if y == x.wrapping_add(u) {
                return 2 * k as u8 + 1;
            }
            if y == x.wrapping_sub(u) {
                return 2 * k as u8 + 2;
            }
        }
        unreachable!("edge between non-neighbours")
    }

    /// Appends a translation-invariant code of `piece`: a depth-first
    /// traversal from `a` (children in direction order), then the preorder
    /// index of `b`.
    pub fn code(&self, piece: &Piece, out: &mut Code) -> Option<()> {
        let mut order = 0usize;
        let mut b_index = if piece.a == piece.b { Some(0) } else { None };
        self.code_from(piece, piece.a, usize::MAX, out, &mut order, &mut b_index)?;
        out.push_wide(b_index.expect("labelled site lies in the piece") as u8)
    }

    fn code_from(
        &self,
        piece: &Piece,
        v: usize,
        parent: usize,
        out: &mut Code,
        order: &mut usize,
        b_index: &mut Option<usize>,
    ) -> Option<()> {
        let mut ns: Vec<(u8, usize)> = piece
            .edges
            .iter()
            .filter_map(|&(x, y)| match (x == v, y == v) {
                (true, _) if y != parent => Some(y),
                (_, true) if x != parent => Some(x),
                _ => None,
            })
            .map(|w| (self.direction(v, w), w))
            .collect();
        ns.sort_unstable();
        for (dir, w) in ns {
            out.push(dir)?;
            *order += 1;
            if w == piece.b {
                *b_index = Some(*order);
            }
            self.code_from(piece, w, v, out, order, b_index)?;
            out.push(2 * self.d as u8 + 1)?;
        }
        Some(())
    }
}

/// Exact 128-bit code built from 4-bit tokens.
#[derive(Default)]
pub(crate) struct Code {
    pub key: u128,
    bits: u32,
}

impl Code {
    fn push(&mut self, tok: u8) -> Option<()> {
        if self.bits + 4 > 128 {
            return None;
        }
        self.key = self.key << 4 | tok as u128;
        self.bits += 4;
        Some(())
    }

    fn push_wide(&mut self, v: u8) -> Option<()> {
        self.push(v >> 4)?;
        self.push(v & 15)
    }

    pub fn sep(&mut self) -> Option<()> {
        self.push(15)
    }
}

/// Outcome of applying the plus-two map to every comb of `C_N^+`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlusMapReport {
    pub d: usize,
    pub n: usize,
    pub inputs: u64,
    pub distinct_outputs: u64,
    /// Largest number of inputs sharing one output.
    pub max_fiber: u64,
    pub max_output_visits: usize,
    pub output_edges_ok: bool,
}

impl PlusMapReport {
    pub fn injective(&self) -> bool {
        self.inputs == self.distinct_outputs
    }
}

struct KeyCollector<F> {
    f: F,
    keys: Vec<u128>,
    max_visits: usize,
    bad: bool,
}

impl<F> Consumer for KeyCollector<F>
where
    F: Fn(&Configuration<'_>) -> Option<(u128, usize)> + Clone + Send + Sync,
{
    fn fresh(&self) -> Self {
        KeyCollector { f: self.f.clone(), keys: Vec::new(), max_visits: 0, bad: false }
    }
    fn accept(&mut self, cfg: &Configuration<'_>) {
        match (self.f)(cfg) {
            Some((k, v)) => {
                self.keys.push(k);
                self.max_visits = self.max_visits.max(v);
            }
            None => self.bad = true,
        }
    }
    fn merge(&mut self, o: Self) {
        self.keys.extend(o.keys);
        self.max_visits = self.max_visits.max(o.max_visits);
        self.bad |= o.bad;
    }
}

fn count_distinct(keys: &mut [u128]) -> (u64, u64) {
    keys.sort_unstable();
    let mut distinct = 0u64;
    let mut max_run = 0u64;
    let mut run = 0u64;
    for i in 0..keys.len() {
        if i == 0 || keys[i] != keys[i - 1] {
            distinct += 1;
            run = 0;
        }
        run += 1;
        max_run = max_run.max(run);
    }
    (distinct, max_run)
}

/// Applies the plus-two map to all of `C_N^+` in dimension `d` and checks
/// injectivity by comparing exact codes of the translated outputs.
pub fn plus_map_census(d: usize, n: usize, budget: &Budget) -> Result<PlusMapReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("the map needs N ≥ 1".into()));
    }
    let spec = EnsembleSpec::new(PolymerClass::Comb, d, n, Boundary::Impenetrable, Convention::ContainsOrigin)?;
    let f = move |cfg: &Configuration<'_>| {
        let c = cfg.small_comb();
        let origin = c.pos.iter().position(|&v| v == pack(&Point::origin(d)))?;
        let out = c.plus_two(origin).ok()?;
        if out.edge_count() != n + 2 {
            return None;
        }
        let mut code = Code::default();
        out.code(&out.whole(), &mut code)?;
        Some((code.key, out.min_layer_count()))
    };
    let (summary, mut col) = enumerate(&spec, budget, KeyCollector { f, keys: Vec::new(), max_visits: 0, bad: false })?;
    let (distinct, max_fiber) = count_distinct(&mut col.keys);
    Ok(PlusMapReport {
        d,
        n,
        inputs: summary.total.try_into().unwrap_or(u64::MAX),
        distinct_outputs: distinct,
        max_fiber,
        max_output_visits: col.max_visits,
        output_edges_ok: !col.bad,
    })
}

/// Fibres of the three-case split over every comb with `total` edges.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberReport {
    pub d: usize,
    pub total: usize,
    pub split: usize,
    pub inputs: u64,
    pub triples: u64,
    pub max_fiber: u64,
    /// Inputs per case I, II, III.
    pub cases: [u64; 3],
    /// Inputs whose second comb has no edges.
    pub empty_second: u64,
}

impl FiberReport {
    /// The bound `2M + 2` with `M = total − split`.
    pub fn bound(&self) -> u64 {
        2 * (self.total - self.split) as u64 + 2
    }
}

/// Splits every translation class of combs with `total` edges after
/// `split` edges and measures the largest fibre of the induced map to
/// triples of translation classes.
pub fn decompose_fibers(d: usize, total: usize, split: usize, budget: &Budget) -> Result<FiberReport> {
    if split == 0 || split >= total {
        return Err(Error::InvalidArgument(format!("split {split} must lie in [1, {}]", total.saturating_sub(1))));
    }
    let spec = EnsembleSpec::new(PolymerClass::Comb, d, total, Boundary::Penetrable, Convention::TranslationClasses)?;
    struct Col {
        split: usize,
        keys: Vec<u128>,
        cases: [u64; 3],
        empty: u64,
        bad: bool,
    }
    impl Consumer for Col {
        fn fresh(&self) -> Self {
            Col { split: self.split, keys: Vec::new(), cases: [0; 3], empty: 0, bad: false }
        }
        fn accept(&mut self, cfg: &Configuration<'_>) {
            let c = cfg.small_comb();
            let s = c.split(self.split);
            self.cases[s.case as usize] += 1;
            if s.k2.edges.is_empty() {
                self.empty += 1;
            }
            let mut code = Code::default();
            let ok = c.code(&s.k1, &mut code).is_some()
                && code.sep().is_some()
                && c.code(&s.k2, &mut code).is_some()
                && code.sep().is_some()
                && c.code(&s.theta, &mut code).is_some();
            if ok {
                self.keys.push(code.key);
            } else {
                self.bad = true;
            }
        }
        fn merge(&mut self, o: Self) {
            self.keys.extend(o.keys);
            for i in 0..3 {
                self.cases[i] += o.cases[i];
            }
            self.empty += o.empty;
            self.bad |= o.bad;
        }
    }
    let proto = Col { split, keys: Vec::new(), cases: [0; 3], empty: 0, bad: false };
    let (summary, mut col) = enumerate(&spec, budget, proto)?;
    if col.bad {
        return Err(Error::SizeCap { size: total, cap: 13 });
    }
    let (triples, max_fiber) = count_distinct(&mut col.keys);
    Ok(FiberReport {
        d,
        total,
        split,
        inputs: summary.total.try_into().unwrap_or(u64::MAX),
        triples,
        max_fiber,
        cases: col.cases,
        empty_second: col.empty,
    })
}
