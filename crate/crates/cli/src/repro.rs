//! The acceptance table: twelve exact checks, each reported as one line.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use polylat::constructs::{
    build_phi30, build_phi_chain, decompose_fibers, plus_map_census, straight_comb_witness,
};
use polylat::enumerate::{comb_class_sizes, count_by_topology_with, max_class, summarize, Budget};
use polylat::statmech::{
    comb_surface_check, growth_lower_bound_madras, max_class_bound, relative_quenched, thermo, BetaGrid,
    EXPECTATION_TOL,
};
use polylat::topology::{comb_signature, knot_invariant};
use polylat::{Boundary, CombSignature, Convention, EnsembleSpec, PolymerClass};
use serde_json::{json, Value};

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Run the multi-hour tree counts of criterion 5 as well.
    pub extended: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// Set when the failure is a known, documented gap rather than a bug.
    pub known_gap: Option<String>,
    pub seconds: f64,
}

impl Report {
    pub fn line(&self) -> String {
        let mut s = format!(
            "criterion {:>2} {} {}: {} ({:.1}s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        );
        if let Some(g) = &self.known_gap {
            s.push_str(&format!(" [known gap: {g}]"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
            "known_gap": self.known_gap,
            "seconds": self.seconds,
        })
    }
}

pub const NAMES: [&str; 12] = [
    "tree census d=3 N=5",
    "walk count d=3 N=4",
    "comb topology census",
    "polygon parity and surface maximum",
    "tree counts against oracle",
    "growth lower bounds",
    "thermodynamic identities",
    "negative-beta quenched animal bound",
    "constructions",
    "comb maps",
    "commonest tree topology bound",
    "quenched comb surface bounds",
];

/// Result of one check: pass flag, detail, optional known gap.
type Check = (bool, String, Option<String>);

pub fn run_criterion(id: u8, opts: &Options) -> Report {
    let start = Instant::now();
    let res: polylat::Result<Check> = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(opts),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        _ => Ok((false, format!("no criterion {id}"), None)),
    };
    let (pass, detail, known_gap) = res.unwrap_or_else(|e| (false, format!("error: {e}"), None));
    Report {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("?"),
        pass,
        detail,
        known_gap,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(opts: &Options) -> Vec<Report> {
    (1..=12).map(|i| run_criterion(i, opts)).collect()
}

fn budget() -> Budget {
    Budget::default()
}

fn ok(pass: bool, detail: String) -> polylat::Result<Check> {
    Ok((pass, detail, None))
}

fn c1() -> polylat::Result<Check> {
    let spec = EnsembleSpec::contains_origin(PolymerClass::Tree, 3, 5, Boundary::Penetrable);
    let t = count_by_topology_with(&spec, &budget())?;
    let mut sizes: Vec<BigUint> = t.classes.values().map(|h| h.total()).collect();
    sizes.sort();
    let want: Vec<BigUint> = [75u32, 1500, 1815].map(BigUint::from).to_vec();
    let sizes_s: Vec<String> = sizes.iter().map(|x| x.to_string()).collect();
    ok(sizes == want && t.total() == BigUint::from(3390u32), format!("classes {{{}}}, total {}", sizes_s.join(", "), t.total()))
}

fn c2() -> polylat::Result<Check> {
    let spec = EnsembleSpec::new(PolymerClass::Walk, 3, 4, Boundary::Penetrable, Convention::FromOrigin)?;
    let total = summarize(&spec, &budget())?.total;
    ok(total == BigUint::from(726u32), format!("{total} walks"))
}

/// Largest `N` counted by full enumeration in `d = 3`; above it every
/// signature is shown nonempty by an explicit witness.
const COMB_FULL_D3: usize = 10;

fn c3() -> polylat::Result<Check> {
    let mut bad = Vec::new();
    let mut witnessed = Vec::new();
    for d in [2, 3] {
        for n in 2..=12usize {
            let want = 1usize << (n - 2);
            let sigs = CombSignature::all_with_edges(n);
            let distinct: BTreeSet<_> = sigs.iter().collect();
            if sigs.len() != want || distinct.len() != want {
                bad.push(format!("d={d} N={n}: {} signatures listed", distinct.len()));
                continue;
            }
            if d == 2 || n <= COMB_FULL_D3 {
                let sizes = comb_class_sizes(d, n, &budget())?;
                let found: BTreeSet<_> = sizes.iter().filter(|(_, c)| **c > BigUint::default()).map(|(s, _)| s).collect();
                if found != distinct {
                    bad.push(format!("d={d} N={n}: {} nonempty classes, want {want}", found.len()));
                }
            } else {
                for s in &sigs {
                    let w = straight_comb_witness(s, d)?;
                    if !w.is_valid() || w.edges().len() != n || comb_signature(&w)? != *s {
                        bad.push(format!("d={d} N={n}: witness for {s} fails"));
                    }
                }
                witnessed.push(n);
            }
        }
    }
    let how = if witnessed.is_empty() {
        String::new()
    } else {
        format!("; d=3 N={witnessed:?} by witnesses")
    };
    ok(bad.is_empty(), if bad.is_empty() { format!("2^(N-2) classes for N=2..12, d=2,3{how}") } else { bad.join("; ") })
}

fn c4() -> polylat::Result<Check> {
    let mut bad = Vec::new();
    for d in [2, 3] {
        for n in [2usize, 3, 5, 7, 9, 11, 13] {
            let spec = EnsembleSpec::contains_origin(PolymerClass::Polygon, d, n, Boundary::Penetrable);
            if summarize(&spec, &budget())?.total != BigUint::default() {
                bad.push(format!("d={d} N={n} nonzero"));
            }
        }
        for n in [3usize, 5, 7] {
            if polylat_oracle::polygon_count(d, n) != 0 {
                bad.push(format!("oracle d={d} N={n} nonzero"));
            }
        }
    }
    for n in (4..=14).step_by(2) {
        let spec = EnsembleSpec::contains_origin(PolymerClass::Polygon, 2, n, Boundary::Penetrable);
        let h = summarize(&spec, &budget())?.visit_histogram;
        if h.max_visits() != Some(n / 2) {
            bad.push(format!("d=2 N={n}: max σ {:?}", h.max_visits()));
        }
    }
    ok(bad.is_empty(), if bad.is_empty() { "odd N and N=2 empty; max σ = N/2 for even N=4..14".into() } else { bad.join("; ") })
}

fn c5(opts: &Options) -> polylat::Result<Check> {
    let mut bad = Vec::new();
    for (d, top) in [(2, 8), (3, 6)] {
        for n in 1..=top {
            let spec = EnsembleSpec::new(PolymerClass::Tree, d, n, Boundary::Penetrable, Convention::TranslationClasses)?;
            let got = summarize(&spec, &budget())?.total;
            let want = polylat_oracle::tree_count(d, n);
            if got != want {
                bad.push(format!("d={d} N={n}: {got} vs oracle {want}"));
            }
        }
    }
    let mut detail = "d=2 N≤8 and d=3 N≤6 match the oracle".to_string();
    if opts.extended {
        for (d, n, want) in [(2usize, 15usize, 338_158_676u64), (3, 11, 248_160_162)] {
            let spec = EnsembleSpec::new(PolymerClass::Tree, d, n, Boundary::Penetrable, Convention::TranslationClasses)?;
            let b = Budget { max_size: Some(n), ..budget() };
            let got = summarize(&spec, &b)?.total;
            if got != BigUint::from(want) {
                bad.push(format!("extended d={d} N={n}: {got}"));
            }
        }
        detail.push_str("; extended t_15(d=2), t_11(d=3) match");
    } else {
        detail.push_str("; extended counts not run");
    }
    ok(bad.is_empty(), if bad.is_empty() { detail } else { bad.join("; ") })
}

fn floor4(x: f64) -> f64 {
    (x * 1e4).floor() / 1e4
}

fn c6() -> polylat::Result<Check> {
    let a = growth_lower_bound_madras(2, 15, &BigUint::from(338_158_676u64))?.value;
    let b = growth_lower_bound_madras(3, 11, &BigUint::from(248_160_162u64))?.value;
    ok(floor4(a) == 4.3442 && floor4(b) == 7.7248, format!("{a:.6}, {b:.6}"))
}

/// The ensembles swept by criterion 7.
pub fn default_thermo_specs() -> Vec<EnsembleSpec> {
    use PolymerClass::*;
    let mut out = Vec::new();
    let sizes = |class: PolymerClass, d: usize| -> Vec<usize> {
        match (class, d) {
            (Tree | Animal, 2) => (2..=8).collect(),
            (Tree | Animal, _) => (2..=6).collect(),
            (Walk, 2) => (1..=12).collect(),
            (Walk, _) => (1..=8).collect(),
            (Polygon, 2) => (4..=14).step_by(2).collect(),
            (Polygon, _) => (4..=10).step_by(2).collect(),
            (Comb, 2) => (1..=9).collect(),
            (Comb, _) => (1..=7).collect(),
        }
    };
    for class in [Tree, Animal, Walk, Polygon, Comb] {
        for d in [2, 3] {
            for n in sizes(class, d) {
                for b in [Boundary::Penetrable, Boundary::Impenetrable] {
                    out.push(EnsembleSpec::contains_origin(class, d, n, b));
                    if class == Walk {
                        out.push(EnsembleSpec { convention: Convention::FromOrigin, ..EnsembleSpec::contains_origin(class, d, n, b) });
                    }
                }
                out.push(EnsembleSpec { convention: Convention::TranslationClasses, ..EnsembleSpec::contains_origin(class, d, n, Boundary::Penetrable) });
            }
        }
    }
    out
}

fn c7() -> polylat::Result<Check> {
    let grid = BetaGrid::default();
    let specs = default_thermo_specs();
    let mut bad = Vec::new();
    let mut worst = (f64::INFINITY, 0.0f64, f64::INFINITY);
    for spec in &specs {
        let t = count_by_topology_with(spec, &budget())?;
        if t.classes.is_empty() {
            continue;
        }
        let r = thermo(&t, &grid)?;
        let c = &r.checks;
        let mut f = Vec::new();
        if c.z0_exact != Some(true) {
            f.push("Z(0)".to_string());
        }
        if c.min_second_difference < -polylat::statmech::CONVEXITY_TOL {
            f.push(format!("convexity {:e}", c.min_second_difference));
        }
        if c.max_fd_error > polylat::statmech::FD_TOL {
            f.push(format!("finite difference {:e}", c.max_fd_error));
        }
        if c.min_jensen_margin < -EXPECTATION_TOL {
            f.push(format!("Jensen {:e}", c.min_jensen_margin));
        }
        if !f.is_empty() {
            bad.push(format!("{spec}: {}", f.join(", ")));
        }
        worst = (worst.0.min(c.min_second_difference), worst.1.max(c.max_fd_error), worst.2.min(c.min_jensen_margin));
    }
    ok(
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "{} ensembles; min second difference {:.2e}, max FD error {:.2e}, min Jensen margin {:.2e}",
                specs.len(),
                worst.0,
                worst.1,
                worst.2
            )
        } else {
            bad.join("; ")
        },
    )
}

fn c8() -> polylat::Result<Check> {
    let grid = BetaGrid::range(-2.0, 0.0, 0.125)?;
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for (d, top) in [(2, 8), (3, 6)] {
        for n in 1..=top {
            let spec = EnsembleSpec::contains_origin(PolymerClass::Animal, d, n, Boundary::Penetrable);
            let t = count_by_topology_with(&spec, &budget())?;
            for &beta in grid.values() {
                let m = relative_quenched(&t, beta)?
                    .animal_margin
                    .ok_or_else(|| polylat::Error::Precondition("animal bound does not apply".into()))?;
                worst = worst.min(m);
                count += 1;
                if m < -EXPECTATION_TOL {
                    bad.push(format!("d={d} N={n} β={beta}: margin {m:e}"));
                }
            }
        }
    }
    ok(bad.is_empty(), if bad.is_empty() { format!("{count} points, min margin {worst:.3e}") } else { bad.join("; ") })
}

fn c9() -> polylat::Result<Check> {
    let mut bad = Vec::new();
    let phi = build_phi30();
    let det = knot_invariant(&phi)?.determinant;
    if !phi.is_valid() || phi.edges().len() != 30 || phi.spans() != vec![4, 4, 5] || det != BigUint::from(3u32) {
        bad.push(format!("phi30: {} edges, spans {:?}, det {det}", phi.edges().len(), phi.spans()));
    }
    for t in 1..=50 {
        let c = build_phi_chain(t)?;
        if !c.is_valid() || c.edges().len() != 28 * t || c.visits() != 4 * t {
            bad.push(format!("chain t={t}: {} edges, σ {}", c.edges().len(), c.visits()));
        }
        if t <= 5 {
            let det = knot_invariant(&c)?.determinant;
            if det != BigUint::from(3u32).pow(t as u32) {
                bad.push(format!("chain t={t}: det {det}"));
            }
        }
    }
    ok(bad.is_empty(), if bad.is_empty() { "phi30 30 edges, box 4x4x5, det 3; chains t≤50 exact, det 3^t for t≤5".into() } else { bad.join("; ") })
}

/// Sizes for the plus-map census.
pub const PLUS_MAP_MAX_N: usize = 10;
/// Largest `N + M` for the fibre census.
pub const FIBER_MAX_TOTAL: usize = 11;

fn c10() -> polylat::Result<Check> {
    let mut plus_bad = Vec::new();
    let mut non_injective = Vec::new();
    let mut max_fiber = 0;
    for n in 1..=PLUS_MAP_MAX_N {
        let r = plus_map_census(2, n, &budget())?;
        if !r.output_edges_ok || r.max_output_visits > 2 {
            plus_bad.push(format!("N={n}: output σ up to {}, edges ok {}", r.max_output_visits, r.output_edges_ok));
        }
        if !r.injective() {
            non_injective.push(format!("N={n}: {} -> {}", r.inputs, r.distinct_outputs));
        }
        max_fiber = max_fiber.max(r.max_fiber);
    }
    let mut fiber_bad = Vec::new();
    let mut checked = 0;
    for total in 2..=FIBER_MAX_TOTAL {
        for split in 1..total {
            let r = decompose_fibers(2, total, split, &budget())?;
            checked += 1;
            if r.max_fiber > r.bound() {
                fiber_bad.push(format!("N+M={total} N={split}: fibre {} > {}", r.max_fiber, r.bound()));
            }
        }
    }
    let mut parts = Vec::new();
    if non_injective.is_empty() {
        parts.push(format!("plus map injective for N≤{PLUS_MAP_MAX_N}"));
    } else {
        parts.push(format!("plus map not injective ({}), largest fibre {max_fiber}", non_injective.join(", ")));
    }
    parts.push(if plus_bad.is_empty() { "output σ ≤ 2".to_string() } else { plus_bad.join(", ") });
    parts.push(if fiber_bad.is_empty() {
        format!("decompose fibres ≤ 2M+2 over {checked} (N+M, N) pairs")
    } else {
        fiber_bad.join(", ")
    });
    let pass = non_injective.is_empty() && plus_bad.is_empty() && fiber_bad.is_empty();
    // Two placements whose only surface edge is shared map to one image, so
    // the map is at most 2-to-1 rather than injective.
    let gap = (!non_injective.is_empty() && max_fiber <= 2 && plus_bad.is_empty() && fiber_bad.is_empty())
        .then(|| "the plus map is 2-to-1 on shapes whose surface edge joins two admissible origins".to_string());
    Ok((pass, parts.join("; "), gap))
}

fn c11() -> polylat::Result<Check> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (d, top) in [(2, 10), (3, 7)] {
        for n in 2..=top {
            let spec = EnsembleSpec::contains_origin(PolymerClass::Tree, d, n, Boundary::Penetrable);
            let t = count_by_topology_with(&spec, &budget())?;
            let (_, m) = max_class(&t)?;
            checked += 1;
            if m > max_class_bound(d, n) {
                bad.push(format!("d={d} N={n}: {m} > {}", max_class_bound(d, n)));
            }
        }
    }
    ok(bad.is_empty(), if bad.is_empty() { format!("{checked} ensembles, d=2 N≤10, d=3 N≤7") } else { bad.join("; ") })
}

fn c12() -> polylat::Result<Check> {
    let mut bad = Vec::new();
    let mut classes = 0;
    for (d, top, betas) in [(3usize, 9usize, vec![0.0, 1.0, 2.0]), (2, 10, vec![])] {
        for n in 1..=top {
            let spec = EnsembleSpec::contains_origin(PolymerClass::Comb, d, n, Boundary::Impenetrable);
            let t = count_by_topology_with(&spec, &budget())?;
            let r = comb_surface_check(&t, &betas)?;
            classes += r.classes;
            bad.extend(r.violations.into_iter().map(|v| format!("d={d} N={n} {v}")));
        }
    }
    ok(bad.is_empty(), if bad.is_empty() { format!("{classes} classes; d=3 N≤9 β∈{{0,1,2}}, d=2 N≤10") } else { bad.join("; ") })
}
