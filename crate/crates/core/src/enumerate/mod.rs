//! Exhaustive enumeration of `P_N^X` under a counting convention.
//!
//! One search yields one representative per translation class; the
//! contains-origin, half-space and from-origin sets are expanded from it by
//! counting sites per layer along `x_1`:
//!
//! * translation classes: the lexicographically normalized representative;
//! * contains-origin, penetrable: every one of its translates through a site;
//! * contains-origin, impenetrable: translates through a site of the lowest
//!   layer (origin included, polymer inside `x_1 >= 0`);
//! * from-origin (walks): the translate placing `ω(0)` at the origin.

mod engine;
mod search;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub(crate) use engine::RepView;
use engine::{run_tasks, NodeBudget, RepSink};
use search::{Animals, Combs, Polygons, Subgraphs, Walks};

use crate::constructs::SmallComb;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lattice::{Polymer, PolymerClass};
use crate::topology::{canonical_code, tree_code, unknot_key, CombSignature, KeyKind, TopologyKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Penetrable,
    Impenetrable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    TranslationClasses,
    ContainsOrigin,
    FromOrigin,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Penetrable => "penetrable",
            Boundary::Impenetrable => "impenetrable",
        }
    }
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::TranslationClasses => "translation-classes",
            Convention::ContainsOrigin => "contains-origin",
            Convention::FromOrigin => "from-origin",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "penetrable" => Ok(Boundary::Penetrable),
            "impenetrable" => Ok(Boundary::Impenetrable),
            _ => Err(Error::Parse(format!("unknown boundary `{s}`"))),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "translation-classes" => Ok(Convention::TranslationClasses),
            "contains-origin" => Ok(Convention::ContainsOrigin),
            "from-origin" => Ok(Convention::FromOrigin),
            _ => Err(Error::Parse(format!("unknown convention `{s}`"))),
        }
    }
}

/// Names a finite set `P_N^X`. `size` counts sites for animals and trees,
/// edges otherwise. For translation classes the boundary does not change
/// the set: every normalized representative already lies in `x_1 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub class: PolymerClass,
    pub d: usize,
    pub size: usize,
    pub boundary: Boundary,
    pub convention: Convention,
}

impl EnsembleSpec {
    pub fn new(class: PolymerClass, d: usize, size: usize, boundary: Boundary, convention: Convention) -> Result<Self> {
        let s = EnsembleSpec { class, d, size, boundary, convention };
        s.validate()?;
        Ok(s)
    }

    /// Contains-origin ensemble, the most common case.
    pub fn contains_origin(class: PolymerClass, d: usize, size: usize, boundary: Boundary) -> Self {
        EnsembleSpec { class, d, size, boundary, convention: Convention::ContainsOrigin }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidSpec(format!("dimension {} < 2", self.d)));
        }
        if self.convention == Convention::FromOrigin && self.class != PolymerClass::Walk {
            return Err(Error::InvalidSpec("from-origin applies to walks only".into()));
        }
        Ok(())
    }

    /// Number of sites in each configuration.
    pub fn sites(&self) -> usize {
        match self.class {
            PolymerClass::Animal | PolymerClass::Tree | PolymerClass::Polygon => self.size,
            PolymerClass::Walk | PolymerClass::Comb => self.size + 1,
        }
    }

    pub fn with_size(&self, size: usize) -> Self {
        EnsembleSpec { size, ..*self }
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        EnsembleSpec { boundary, ..*self }
    }

    pub fn with_convention(&self, convention: Convention) -> Self {
        EnsembleSpec { convention, ..*self }
    }

    /// Ensembles known to be empty without searching.
    pub fn trivially_empty(&self) -> bool {
        match self.class {
            PolymerClass::Polygon => self.size < 4 || self.size % 2 == 1,
            PolymerClass::Animal | PolymerClass::Tree => self.size == 0,
            _ => false,
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} d={} N={} {} {}", self.class, self.d, self.size, self.boundary, self.convention)
    }
}

/// Resource limits for a search.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Overrides the default per-class size limit.
    pub max_size: Option<usize>,
    /// Cap on search-tree nodes.
    pub max_nodes: Option<u64>,
    pub threads: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_size: None, max_nodes: None, threads: 1 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_size: Some(usize::MAX), ..Budget::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Default size limit for a class in dimension `d`.
    pub fn default_max_size(class: PolymerClass, d: usize) -> usize {
        match (class, d) {
            (PolymerClass::Animal | PolymerClass::Tree, 2) => 11,
            (PolymerClass::Animal | PolymerClass::Tree, 3) => 9,
            (PolymerClass::Animal | PolymerClass::Tree, _) => 7,
            (PolymerClass::Walk, 2) => 18,
            (PolymerClass::Walk, 3) => 13,
            (PolymerClass::Walk, _) => 10,
            (PolymerClass::Polygon, 2) => 24,
            (PolymerClass::Polygon, 3) => 16,
            (PolymerClass::Polygon, _) => 12,
            (PolymerClass::Comb, 2 | 3) => 13,
            (PolymerClass::Comb, _) => 10,
        }
    }

    fn check(&self, spec: &EnsembleSpec) -> Result<()> {
        let limit = self.max_size.unwrap_or_else(|| Budget::default_max_size(spec.class, spec.d));
        let hard = match spec.class {
            PolymerClass::Animal | PolymerClass::Tree => 32,
            PolymerClass::Comb => 24,
            _ => 200,
        };
        if spec.size > limit.min(hard) {
            return Err(Error::BudgetExceeded {
                reason: format!("{spec} is above the size limit {}", limit.min(hard)),
                estimate: estimate_count(spec),
            });
        }
        let cells = (2.0 * (spec.size as f64 + 1.0) + 1.0).powi(spec.d as i32);
        if cells > 5e8 {
            return Err(Error::BudgetExceeded {
                reason: format!("{spec} needs a {cells:.2e}-cell occupancy grid"),
                estimate: estimate_count(spec),
            });
        }
        Ok(())
    }
}

/// Rough translation-class count, for budget messages only.
pub fn estimate_count(spec: &EnsembleSpec) -> f64 {
    let z = 2.0 * spec.d as f64;
    let growth = match spec.class {
        PolymerClass::Walk | PolymerClass::Polygon => z - 1.3,
        PolymerClass::Comb => z - 0.9,
        PolymerClass::Tree => z * 1.03,
        PolymerClass::Animal => z * 1.3,
    };
    growth.powi(spec.size as i32)
}

/// Exact visit histogram: `k ↦ #{ρ : σ(ρ) = k}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram(BTreeMap<usize, BigUint>);

impl Histogram {
    pub fn new() -> Self {
        Histogram(BTreeMap::new())
    }

    pub fn add(&mut self, k: usize, n: impl Into<BigUint>) {
        let n = n.into();
        if !n.is_zero() {
            *self.0.entry(k).or_default() += n;
        }
    }

    pub fn get(&self, k: usize) -> BigUint {
        self.0.get(&k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.0.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_visits(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn min_visits(&self) -> Option<usize> {
        self.0.keys().next().copied()
    }

    pub fn merge(&mut self, o: &Histogram) {
        for (k, v) in o.iter() {
            self.add(k, v.clone());
        }
    }

    fn from_dense(v: &[u128]) -> Histogram {
        let mut h = Histogram::new();
        for (k, &c) in v.iter().enumerate() {
            h.add(k, BigUint::from(c));
        }
        h
    }
}

impl FromIterator<(usize, BigUint)> for Histogram {
    fn from_iter<I: IntoIterator<Item = (usize, BigUint)>>(it: I) -> Self {
        let mut h = Histogram::new();
        for (k, v) in it {
            h.add(k, v);
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationSummary {
    pub spec: EnsembleSpec,
    pub total: BigUint,
    pub visit_histogram: Histogram,
    pub wall_time: f64,
}

/// Per-topology visit histograms.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologyTable {
    pub spec: EnsembleSpec,
    pub classes: BTreeMap<TopologyKey, Histogram>,
}

impl TopologyTable {
    pub fn total(&self) -> BigUint {
        self.classes.values().map(Histogram::total).sum()
    }

    /// Histogram over all topologies together.
    pub fn marginal(&self) -> Histogram {
        let mut h = Histogram::new();
        for c in self.classes.values() {
            h.merge(c);
        }
        h
    }

    pub fn class_size(&self, key: &TopologyKey) -> BigUint {
        self.classes.get(key).map(Histogram::total).unwrap_or_default()
    }
}

/// One configuration of the requested set, as seen by a [`Consumer`].
pub struct Configuration<'a> {
    rep: &'a RepView<'a>,
    anchor: u32,
    visits: u32,
}

impl Configuration<'_> {
    pub fn visits(&self) -> usize {
        self.visits as usize
    }

    pub fn class(&self) -> PolymerClass {
        self.rep.class
    }

    pub fn polymer(&self) -> Polymer {
        self.rep.polymer(self.anchor)
    }

    pub fn comb_signature(&self) -> Option<CombSignature> {
        self.rep.comb.map(|s| s.to_signature())
    }

    /// Compact form of a comb, placed relative to the anchor.
    pub(crate) fn small_comb(&self) -> SmallComb {
        let r = self.rep;
        let pos = r.sites.iter().map(|&s| r.grid.packed_rel(s as usize, self.anchor as usize)).collect();
        let (la, lb) = r.labels.expect("comb has labels");
        let at = |x: u32| r.sites.iter().position(|&s| s == x).unwrap();
        SmallComb { d: r.grid.d, pos, adj: r.local_adjacency(), a: at(la), b: at(lb) }
    }
}

/// Receives every configuration once. Parallel subtrees each get a
/// [`Consumer::fresh`] copy; copies are merged in a fixed order.
pub trait Consumer: Send + Sync + Sized {
    fn fresh(&self) -> Self;
    fn accept(&mut self, cfg: &Configuration<'_>);
    fn merge(&mut self, other: Self);
}

impl Consumer for () {
    fn fresh(&self) -> Self {}
    fn accept(&mut self, _: &Configuration<'_>) {}
    fn merge(&mut self, _: Self) {}
}

/// Visits the configurations a representative stands for under `spec`,
/// passing `(anchor site, σ)` for each.
pub(crate) fn expand(rep: &RepView<'_>, spec: &EnsembleSpec, mut f: impl FnMut(u32, u32)) {
    let layers = rep.layers();
    let g = rep.grid;
    match (spec.convention, spec.boundary) {
        (Convention::TranslationClasses, _) => f(rep.lex_min(), layers.min_count()),
        (Convention::ContainsOrigin, Boundary::Penetrable) => {
            for &s in rep.sites {
                f(s, layers.count_at(g.layer(s as usize)));
            }
        }
        (Convention::ContainsOrigin, Boundary::Impenetrable) => {
            for &s in rep.sites {
                if g.layer(s as usize) == layers.lo {
                    f(s, layers.min_count());
                }
            }
        }
        (Convention::FromOrigin, b) => {
            let a = rep.labels.expect("walk has labels").0;
            let la = g.layer(a as usize);
            if b == Boundary::Penetrable || la == layers.lo {
                f(a, layers.count_at(la));
            }
        }
    }
}

/// Runs the class search for `spec`, feeding representatives into a copy of `proto`.
pub(crate) fn search_reps<S: RepSink>(spec: &EnsembleSpec, budget: &Budget, proto: &S) -> Result<S> {
    spec.validate()?;
    budget.check(spec)?;
    if spec.trivially_empty() {
        return Ok(proto.fresh());
    }
    let grid = Grid::new(spec.d, spec.size as i32 + 1);
    let nodes = NodeBudget::new(budget.max_nodes);
    let n = spec.size;
    let split = 4;
    match spec.class {
        PolymerClass::Walk => run_tasks(proto, split, budget.threads, &nodes, |c, s| Walks::new(&grid, n).run(c, s)),
        PolymerClass::Polygon => {
            run_tasks(proto, split, budget.threads, &nodes, |c, s| Polygons::new(&grid, n).run(c, s))
        }
        PolymerClass::Comb => run_tasks(proto, split, budget.threads, &nodes, |c, s| Combs::new(&grid, n).run(c, s)),
        PolymerClass::Tree => run_tasks(proto, split, budget.threads, &nodes, |c, s| {
            Animals::new(&grid, n, Subgraphs::SpanningTrees).run(c, s)
        }),
        PolymerClass::Animal => run_tasks(proto, split, budget.threads, &nodes, |c, s| {
            Animals::new(&grid, n, Subgraphs::Connected).run(c, s)
        }),
    }
}

struct StreamSink<C> {
    spec: EnsembleSpec,
    consumer: C,
    hist: Vec<u128>,
}

impl<C: Consumer> RepSink for StreamSink<C> {
    fn fresh(&self) -> Self {
        StreamSink { spec: self.spec, consumer: self.consumer.fresh(), hist: Vec::new() }
    }

    fn rep(&mut self, r: &RepView<'_>) {
        let spec = self.spec;
        let (consumer, hist) = (&mut self.consumer, &mut self.hist);
        expand(r, &spec, |anchor, visits| {
            let k = visits as usize;
            if hist.len() <= k {
                hist.resize(k + 1, 0);
            }
            hist[k] += 1;
            consumer.accept(&Configuration { rep: r, anchor, visits });
        });
    }

    fn merge(&mut self, o: Self) {
        if self.hist.len() < o.hist.len() {
            self.hist.resize(o.hist.len(), 0);
        }
        for (a, b) in self.hist.iter_mut().zip(&o.hist) {
            *a += b;
        }
        self.consumer.merge(o.consumer);
    }
}

/// Streams every configuration of `spec` into `consumer` and summarizes.
pub fn enumerate<C: Consumer>(spec: &EnsembleSpec, budget: &Budget, consumer: C) -> Result<(EnumerationSummary, C)> {
    let start = Instant::now();
    let proto = StreamSink { spec: *spec, consumer, hist: Vec::new() };
    let out = search_reps(spec, budget, &proto)?;
    let visit_histogram = Histogram::from_dense(&out.hist);
    let summary = EnumerationSummary {
        spec: *spec,
        total: visit_histogram.total(),
        visit_histogram,
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok((summary, out.consumer))
}

/// Enumerates without a consumer.
pub fn summarize(spec: &EnsembleSpec, budget: &Budget) -> Result<EnumerationSummary> {
    enumerate(spec, budget, ()).map(|(s, ())| s)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum RawKey {
    Bytes(Vec<u8>),
    Packed(u128),
    Unit,
}

struct TopoSink {
    spec: EnsembleSpec,
    classes: HashMap<RawKey, (Vec<u128>, Option<TopologyKey>)>,
}

impl TopoSink {
    fn raw_key(&self, r: &RepView<'_>) -> (RawKey, Option<TopologyKey>) {
        match self.spec.class {
            PolymerClass::Tree => (RawKey::Bytes(tree_code(&r.local_adjacency())), None),
            PolymerClass::Animal => (RawKey::Bytes(canonical_code(&r.local_adjacency())), None),
            PolymerClass::Comb => {
                let sig = r.comb.expect("comb search records signatures");
                (RawKey::Packed(sig.packed()), Some(sig.to_signature().key()))
            }
            PolymerClass::Walk => (RawKey::Unit, None),
            PolymerClass::Polygon => {
                // Every lattice polygon with fewer than 24 edges is unknotted,
                // and every polygon in the plane is.
                if self.spec.d != 3 || self.spec.size < 24 {
                    (RawKey::Unit, Some(unknot_key()))
                } else {
                    let inv = crate::topology::knot_invariant(&r.polymer(r.lex_min()))
                        .expect("enumerated polygon has a generic projection");
                    let key = inv.key();
                    (RawKey::Bytes(key.payload.clone()), Some(key))
                }
            }
        }
    }

    fn finish(self) -> TopologyTable {
        let spec = self.spec;
        let classes = self
            .classes
            .into_iter()
            .map(|(raw, (hist, key))| {
                let key = key.unwrap_or_else(|| match raw {
                    RawKey::Bytes(b) => TopologyKey::new(
                        if spec.class == PolymerClass::Tree { KeyKind::TreeCode } else { KeyKind::GraphCode },
                        b,
                    ),
                    RawKey::Unit => TopologyKey::new(KeyKind::TreeCode, path_code(spec.sites())),
                    RawKey::Packed(_) => unreachable!("packed keys carry their signature"),
                });
                (key, Histogram::from_dense(&hist))
            })
            .filter(|(_, h)| !h.is_empty())
            .collect();
        TopologyTable { spec, classes }
    }
}

fn path_code(sites: usize) -> Vec<u8> {
    let adj: Vec<Vec<usize>> = (0..sites)
        .map(|i| {
            let mut v = Vec::new();
            if i > 0 {
                v.push(i - 1);
            }
            if i + 1 < sites {
                v.push(i + 1);
            }
            v
        })
        .collect();
    tree_code(&adj)
}

impl RepSink for TopoSink {
    fn fresh(&self) -> Self {
        TopoSink { spec: self.spec, classes: HashMap::new() }
    }

    fn rep(&mut self, r: &RepView<'_>) {
        let (raw, key) = self.raw_key(r);
        let entry = self.classes.entry(raw).or_insert_with(|| (Vec::new(), key));
        let hist = &mut entry.0;
        expand(r, &self.spec, |_, visits| {
            let k = visits as usize;
            if hist.len() <= k {
                hist.resize(k + 1, 0);
            }
            hist[k] += 1;
        });
    }

    fn merge(&mut self, o: Self) {
        for (raw, (hist, key)) in o.classes {
            let e = self.classes.entry(raw).or_insert_with(|| (Vec::new(), key));
            if e.0.len() < hist.len() {
                e.0.resize(hist.len(), 0);
            }
            for (a, b) in e.0.iter_mut().zip(&hist) {
                *a += b;
            }
        }
    }
}

/// Per-topology visit histograms for `spec`.
pub fn count_by_topology(spec: &EnsembleSpec) -> Result<TopologyTable> {
    count_by_topology_with(spec, &Budget::default())
}

pub fn count_by_topology_with(spec: &EnsembleSpec, budget: &Budget) -> Result<TopologyTable> {
    if spec.class == PolymerClass::Animal && spec.size > crate::topology::GRAPH_KEY_CAP {
        return Err(Error::SizeCap { size: spec.size, cap: crate::topology::GRAPH_KEY_CAP });
    }
    let proto = TopoSink { spec: *spec, classes: HashMap::new() };
    Ok(search_reps(spec, budget, &proto)?.finish())
}

/// The commonest topology of `P_N^{o|o}` and its size; ties go to the
/// smallest key.
pub fn max_topology_class(spec: &EnsembleSpec) -> Result<(TopologyKey, BigUint)> {
    if spec.convention != Convention::ContainsOrigin || spec.boundary != Boundary::Penetrable {
        return Err(Error::InvalidSpec("max_topology_class needs contains-origin, penetrable".into()));
    }
    max_class(&count_by_topology(spec)?)
}

pub fn max_class(table: &TopologyTable) -> Result<(TopologyKey, BigUint)> {
    let mut best: Option<(TopologyKey, BigUint)> = None;
    for (k, h) in &table.classes {
        let t = h.total();
        if best.as_ref().map_or(true, |(_, b)| t > *b) {
            best = Some((k.clone(), t));
        }
    }
    best.ok_or(Error::EmptyEnsemble)
}

/// Counts of nonempty comb classes per signature, translation classes only.
/// Skips the per-configuration layer profile, so it is the fast path for
/// census work.
pub fn comb_class_sizes(d: usize, n: usize, budget: &Budget) -> Result<BTreeMap<CombSignature, BigUint>> {
    struct Census(HashMap<u128, (u64, CombSignature)>);
    impl RepSink for Census {
        fn fresh(&self) -> Self {
            Census(HashMap::new())
        }
        fn rep(&mut self, r: &RepView<'_>) {
            let sig = r.comb.expect("comb search records signatures");
            self.0.entry(sig.packed()).or_insert_with(|| (0, sig.to_signature())).0 += 1;
        }
        fn merge(&mut self, o: Self) {
            for (k, (c, s)) in o.0 {
                self.0.entry(k).or_insert((0, s)).0 += c;
            }
        }
    }
    let spec = EnsembleSpec::new(PolymerClass::Comb, d, n, Boundary::Penetrable, Convention::TranslationClasses)?;
    let out = search_reps(&spec, budget, &Census(HashMap::new()))?;
    Ok(out.0.into_values().map(|(c, s)| (s, BigUint::from(c))).collect())
}

/// Feeds every representative of `spec` to `f` together with the
/// `(σ, multiplicity)` pairs it contributes. Used by pattern statistics.
pub(crate) fn for_each_rep<F>(spec: &EnsembleSpec, budget: &Budget, f: F) -> Result<Histogram>
where
    F: Fn(&RepView<'_>) -> usize + Sync + Send + Clone,
{
    struct PatternSink<F> {
        spec: EnsembleSpec,
        f: F,
        hist: Vec<u128>,
    }
    impl<F: Fn(&RepView<'_>) -> usize + Send + Sync + Clone> RepSink for PatternSink<F> {
        fn fresh(&self) -> Self {
            PatternSink { spec: self.spec, f: self.f.clone(), hist: Vec::new() }
        }
        fn rep(&mut self, r: &RepView<'_>) {
            let k = (self.f)(r);
            let mut m = 0u128;
            expand(r, &self.spec, |_, _| m += 1);
            if m > 0 {
                if self.hist.len() <= k {
                    self.hist.resize(k + 1, 0);
                }
                self.hist[k] += m;
            }
        }
        fn merge(&mut self, o: Self) {
            if self.hist.len() < o.hist.len() {
                self.hist.resize(o.hist.len(), 0);
            }
            for (a, b) in self.hist.iter_mut().zip(&o.hist) {
                *a += b;
            }
        }
    }
    let out = search_reps(spec, budget, &PatternSink { spec: *spec, f, hist: Vec::new() })?;
    Ok(Histogram::from_dense(&out.hist))
}
