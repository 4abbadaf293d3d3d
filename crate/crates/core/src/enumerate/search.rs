//! Backtracking searches, one representative per translation class.
//!
//! * walks and combs are grown from `ρ_A` at the origin;
//! * polygons, trees and animals are grown from their lexicographically
//!   smallest site at the origin (Redelmeier's method for the site set,
//!   then every admissible edge subset of the induced graph).

use super::engine::{Ctl, RepSink, RepView, SigView};
use crate::error::Result;
use crate::grid::Grid;
use crate::lattice::PolymerClass;

pub(crate) struct Walks<'g> {
    g: &'g Grid,
    n: usize,
    occ: Vec<bool>,
    path: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl<'g> Walks<'g> {
    pub fn new(g: &'g Grid, n: usize) -> Self {
        Walks { g, n, occ: vec![false; g.len], path: Vec::new(), edges: Vec::new() }
    }

    pub fn run<S: RepSink>(&mut self, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let o = self.g.origin;
        self.occ[o] = true;
        self.path.push(o as u32);
        self.rec(0, ctl, sink)?;
        self.path.pop();
        self.occ[o] = false;
        Ok(())
    }

    fn rec<S: RepSink>(&mut self, depth: usize, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let cur = *self.path.last().unwrap() as usize;
        if depth == self.n {
            if ctl.owns_leaf(depth) {
                sink.rep(&RepView {
                    grid: self.g,
                    class: PolymerClass::Walk,
                    sites: &self.path,
                    edges: &self.edges,
                    labels: Some((self.path[0], cur as u32)),
                    comb: None,
                });
            }
            return Ok(());
        }
        for k in 0..2 * self.g.d {
            let nb = self.g.step(cur, k);
            if self.occ[nb] || !ctl.take(depth + 1) {
                continue;
            }
            ctl.tick()?;
            self.occ[nb] = true;
            self.path.push(nb as u32);
            self.edges.push((cur as u32, nb as u32));
            self.rec(depth + 1, ctl, sink)?;
            self.edges.pop();
            self.path.pop();
            self.occ[nb] = false;
        }
        Ok(())
    }
}

/// Polygons through the origin as lexicographically smallest site. The
/// origin's two polygon neighbours are `+e_a` (first step) and `+e_b`
/// (last site) with `a < b`, fixing one orientation per polygon.
pub(crate) struct Polygons<'g> {
    g: &'g Grid,
    n: usize,
    occ: Vec<bool>,
    path: Vec<u32>,
    edges: Vec<(u32, u32)>,
    coords: Vec<i32>,
    l1: i32,
    first_axis: usize,
}

impl<'g> Polygons<'g> {
    pub fn new(g: &'g Grid, n: usize) -> Self {
        Polygons {
            g,
            n,
            occ: vec![false; g.len],
            path: Vec::new(),
            edges: Vec::new(),
            coords: vec![0; g.d],
            l1: 0,
            first_axis: 0,
        }
    }

    pub fn run<S: RepSink>(&mut self, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        if self.n < 4 || self.n % 2 == 1 {
            return Ok(());
        }
        let o = self.g.origin;
        self.occ[o] = true;
        self.path.push(o as u32);
        for a in 0..self.g.d {
            self.first_axis = a;
            self.advance(2 * a, 0, ctl, sink)?;
        }
        Ok(())
    }

    fn advance<S: RepSink>(&mut self, k: usize, depth: usize, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let cur = *self.path.last().unwrap() as usize;
        let nb = self.g.step(cur, k);
        let o = self.g.origin;
        if self.occ[nb] || nb <= o {
            return Ok(());
        }
        let axis = k / 2;
        let delta = if k % 2 == 0 { 1 } else { -1 };
        let old = self.coords[axis];
        let l1 = self.l1 - old.abs() + (old + delta).abs();
        // Must still be able to reach a neighbour of the origin.
        let remaining = (self.n - 2 - depth) as i32;
        if l1 - 1 > remaining {
            return Ok(());
        }
        if !ctl.take(depth + 1) {
            return Ok(());
        }
        ctl.tick()?;
        self.coords[axis] += delta;
        let saved_l1 = self.l1;
        self.l1 = l1;
        self.occ[nb] = true;
        self.path.push(nb as u32);
        self.edges.push((cur as u32, nb as u32));
        if depth + 1 == self.n - 1 {
            let closes = (self.first_axis + 1..self.g.d).any(|b| nb == self.g.step(o, 2 * b));
            if closes && ctl.owns_leaf(depth + 1) {
                self.edges.push((nb as u32, o as u32));
                sink.rep(&RepView {
                    grid: self.g,
                    class: PolymerClass::Polygon,
                    sites: &self.path,
                    edges: &self.edges,
                    labels: None,
                    comb: None,
                });
                self.edges.pop();
            }
        } else {
            for k2 in 0..2 * self.g.d {
                self.advance(k2, depth + 1, ctl, sink)?;
            }
        }
        self.edges.pop();
        self.path.pop();
        self.occ[nb] = false;
        self.l1 = saved_l1;
        self.coords[axis] -= delta;
        Ok(())
    }
}

/// Combs grown from `ρ_A` at the origin: backbone steps, and at each
/// interior backbone site an optional side chain completed before the
/// backbone continues.
pub(crate) struct Combs<'g> {
    g: &'g Grid,
    n: usize,
    occ: Vec<bool>,
    sites: Vec<u32>,
    edges: Vec<(u32, u32)>,
    ns: Vec<u16>,
    ss: Vec<u16>,
    seg: u16,
}

impl<'g> Combs<'g> {
    pub fn new(g: &'g Grid, n: usize) -> Self {
        Combs {
            g,
            n,
            occ: vec![false; g.len],
            sites: Vec::new(),
            edges: Vec::new(),
            ns: Vec::new(),
            ss: Vec::new(),
            seg: 0,
        }
    }

    pub fn run<S: RepSink>(&mut self, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let o = self.g.origin;
        self.occ[o] = true;
        self.sites.push(o as u32);
        self.at_backbone(o, ctl, sink)?;
        self.sites.pop();
        self.occ[o] = false;
        Ok(())
    }

    fn emit<S: RepSink>(&self, end: usize, sink: &mut S) {
        sink.rep(&RepView {
            grid: self.g,
            class: PolymerClass::Comb,
            sites: &self.sites,
            edges: &self.edges,
            labels: Some((self.sites[0], end as u32)),
            comb: Some(SigView { ns: &self.ns, ss: &self.ss, last: self.seg }),
        });
    }

    fn at_backbone<S: RepSink>(&mut self, cur: usize, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let e = self.edges.len();
        if e == self.n {
            if ctl.owns_leaf(e) {
                self.emit(cur, sink);
            }
            return Ok(());
        }
        self.step_backbone(cur, ctl, sink)?;
        if e >= 1 && e + 2 <= self.n {
            self.side(cur, cur, 0, ctl, sink)?;
        }
        Ok(())
    }

    fn place(&mut self, from: usize, to: usize) {
        self.occ[to] = true;
        self.sites.push(to as u32);
        self.edges.push((from as u32, to as u32));
    }

    fn unplace(&mut self, to: usize) {
        self.edges.pop();
        self.sites.pop();
        self.occ[to] = false;
    }

    fn step_backbone<S: RepSink>(&mut self, cur: usize, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let depth = self.edges.len() + 1;
        for k in 0..2 * self.g.d {
            let nb = self.g.step(cur, k);
            if self.occ[nb] || !ctl.take(depth) {
                continue;
            }
            ctl.tick()?;
            self.place(cur, nb);
            self.seg += 1;
            self.at_backbone(nb, ctl, sink)?;
            self.seg -= 1;
            self.unplace(nb);
        }
        Ok(())
    }

    /// Extends a side chain hanging off `attach` whose free end is `tip`.
    fn side<S: RepSink>(&mut self, attach: usize, tip: usize, s: u16, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let depth = self.edges.len() + 1;
        for k in 0..2 * self.g.d {
            let nb = self.g.step(tip, k);
            if self.occ[nb] || !ctl.take(depth) {
                continue;
            }
            ctl.tick()?;
            self.place(tip, nb);
            // Close the chain here and continue the backbone ...
            self.ns.push(self.seg);
            self.ss.push(s + 1);
            let seg = std::mem::replace(&mut self.seg, 0);
            self.step_backbone(attach, ctl, sink)?;
            self.seg = seg;
            self.ss.pop();
            self.ns.pop();
            // ... or make it longer.
            if self.edges.len() + 2 <= self.n {
                self.side(attach, nb, s + 1, ctl, sink)?;
            }
            self.unplace(nb);
        }
        Ok(())
    }
}

/// Which edge subsets of each site animal to report.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Subgraphs {
    SpanningTrees,
    Connected,
}

pub(crate) struct Animals<'g> {
    g: &'g Grid,
    n: usize,
    mode: Subgraphs,
    seen: Vec<bool>,
    cells: Vec<u32>,
    added: Vec<u32>,
    local: Vec<u8>,
    edges: Vec<(u32, u32)>,
}

impl<'g> Animals<'g> {
    pub fn new(g: &'g Grid, n: usize, mode: Subgraphs) -> Self {
        Animals {
            g,
            n,
            mode,
            seen: vec![false; g.len],
            cells: Vec::new(),
            added: Vec::new(),
            local: vec![u8::MAX; g.len],
            edges: Vec::new(),
        }
    }

    pub fn run<S: RepSink>(&mut self, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        if self.n == 0 {
            return Ok(());
        }
        let o = self.g.origin;
        self.seen[o] = true;
        let mut untried = vec![o as u32];
        self.redelmeier(&mut untried, 0, ctl, sink)
    }

    fn redelmeier<S: RepSink>(&mut self, untried: &mut Vec<u32>, depth: usize, ctl: &mut Ctl<'_>, sink: &mut S) -> Result<()> {
        let o = self.g.origin;
        while let Some(c) = untried.pop() {
            if !ctl.take(depth + 1) {
                continue;
            }
            ctl.tick()?;
            self.cells.push(c);
            if self.cells.len() == self.n {
                if ctl.owns_leaf(depth + 1) {
                    self.subgraphs(sink);
                }
            } else {
                let mut next = untried.clone();
                let mark = self.added.len();
                for k in 0..2 * self.g.d {
                    let nb = self.g.step(c as usize, k);
                    if nb > o && !self.seen[nb] {
                        self.seen[nb] = true;
                        next.push(nb as u32);
                        self.added.push(nb as u32);
                    }
                }
                self.redelmeier(&mut next, depth + 1, ctl, sink)?;
                for nb in self.added.drain(mark..) {
                    self.seen[nb as usize] = false;
                }
            }
            self.cells.pop();
        }
        Ok(())
    }

    fn subgraphs<S: RepSink>(&mut self, sink: &mut S) {
        let n = self.cells.len();
        for (i, &c) in self.cells.iter().enumerate() {
            self.local[c as usize] = i as u8;
        }
        let mut all = Vec::new();
        for (i, &c) in self.cells.iter().enumerate() {
            for k in (0..2 * self.g.d).step_by(2) {
                let nb = self.g.step(c as usize, k);
                let j = self.local[nb];
                if j != u8::MAX {
                    all.push((i as u8, j));
                }
            }
        }
        for &c in &self.cells {
            self.local[c as usize] = u8::MAX;
        }
        let mut st = SubgraphState { n, all: &all, chosen: Vec::with_capacity(all.len()) };
        let cells = std::mem::take(&mut self.cells);
        let mut edges = std::mem::take(&mut self.edges);
        let class = match self.mode {
            Subgraphs::SpanningTrees => PolymerClass::Tree,
            Subgraphs::Connected => PolymerClass::Animal,
        };
        let mut report = |chosen: &[usize]| {
            edges.clear();
            edges.extend(chosen.iter().map(|&e| (cells[all[e].0 as usize], cells[all[e].1 as usize])));
            sink.rep(&RepView { grid: self.g, class, sites: &cells, edges: &edges, labels: None, comb: None });
        };
        match self.mode {
            Subgraphs::SpanningTrees => {
                let comp: Vec<u8> = (0..n as u8).collect();
                st.trees(0, &comp, &mut report);
            }
            Subgraphs::Connected => st.connected(0, &mut report),
        }
        self.cells = cells;
        self.edges = edges;
    }
}

struct SubgraphState<'a> {
    n: usize,
    all: &'a [(u8, u8)],
    chosen: Vec<usize>,
}

impl SubgraphState<'_> {
    /// Whether chosen edges plus edges `from..` connect every vertex.
    fn spans(&self, from: usize) -> bool {
        let mut adj = [0u32; 32];
        for &e in self.chosen.iter() {
            let (a, b) = self.all[e];
            adj[a as usize] |= 1 << b;
            adj[b as usize] |= 1 << a;
        }
        for &(a, b) in &self.all[from..] {
            adj[a as usize] |= 1 << b;
            adj[b as usize] |= 1 << a;
        }
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let mut reach = 1u32;
        loop {
            let mut next = reach;
            let mut bits = reach;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= adj[v];
            }
            if next == reach {
                return reach == full;
            }
            reach = next;
        }
    }

    fn trees(&mut self, i: usize, comp: &[u8], report: &mut impl FnMut(&[usize])) {
        if self.chosen.len() + 1 == self.n {
            report(&self.chosen);
            return;
        }
        if i == self.all.len() || self.n - 1 - self.chosen.len() > self.all.len() - i {
            return;
        }
        let (a, b) = self.all[i];
        let (ca, cb) = (comp[a as usize], comp[b as usize]);
        if ca != cb {
            let merged: Vec<u8> = comp.iter().map(|&c| if c == cb { ca } else { c }).collect();
            self.chosen.push(i);
            self.trees(i + 1, &merged, report);
            self.chosen.pop();
        }
        if self.spans(i + 1) {
            self.trees(i + 1, comp, report);
        }
    }

    fn connected(&mut self, i: usize, report: &mut impl FnMut(&[usize])) {
        if i == self.all.len() {
            report(&self.chosen);
            return;
        }
        self.chosen.push(i);
        self.connected(i + 1, report);
        self.chosen.pop();
        if self.spans(i + 1) {
            self.connected(i + 1, report);
        }
    }
}
