//! Canonical labelling of small graphs by colour refinement plus
//! individualization, taking the least adjacency code over all leaves.

use super::{KeyKind, TopologyKey};
use crate::error::{Error, Result};
use crate::lattice::{Polymer, PolymerClass};

pub const GRAPH_KEY_CAP: usize = 12;
const HARD_CAP: usize = 16;

pub fn graph_key(p: &Polymer) -> Result<TopologyKey> {
    graph_key_with_cap(p, GRAPH_KEY_CAP)
}

pub fn graph_key_with_cap(p: &Polymer, cap: usize) -> Result<TopologyKey> {
    if p.class() != PolymerClass::Animal {
        return Err(Error::WrongClass { expected: "animal".into(), got: p.class().to_string() });
    }
    let n = p.sites().len();
    if n > cap.min(HARD_CAP) {
        return Err(Error::SizeCap { size: n, cap: cap.min(HARD_CAP) });
    }
    Ok(TopologyKey::new(KeyKind::GraphCode, canonical_code(&p.adjacency())))
}

/// Canonical code: vertex count, edge count, then the upper triangle of
/// the adjacency matrix under the canonical ordering. `adj.len() <= 16`.
pub(crate) fn canonical_code(adj: &[Vec<usize>]) -> Vec<u8> {
    let n = adj.len();
    assert!(n <= HARD_CAP);
    let masks: Vec<u32> = adj.iter().map(|ns| ns.iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let mut best: Option<u128> = None;
    search(&masks, vec![(0..n).collect()], &mut best);
    let mut out = vec![n as u8, m as u8];
    out.extend(best.unwrap_or(0).to_be_bytes());
    out
}

fn search(masks: &[u32], mut cells: Vec<Vec<usize>>, best: &mut Option<u128>) {
    refine(masks, &mut cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = adjacency_code(masks, &order);
            if best.map_or(true, |b| code < b) {
                *best = Some(code);
            }
        }
        Some(ci) => {
            for &v in &cells[ci] {
                let mut next = cells.clone();
                let rest: Vec<usize> = next[ci].iter().copied().filter(|&w| w != v).collect();
                next[ci] = vec![v];
                next.insert(ci + 1, rest);
                search(masks, next, best);
            }
        }
    }
}

/// Splits cells by neighbour counts into every cell until stable. Splitting
/// depends only on counts, never on vertex names.
fn refine(masks: &[u32], cells: &mut Vec<Vec<usize>>) {
    loop {
        let cell_masks: Vec<u32> = cells.iter().map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
        let mut out = Vec::with_capacity(cells.len());
        for c in cells.iter() {
            if c.len() == 1 {
                out.push(c.clone());
                continue;
            }
            let mut sig: Vec<(Vec<u32>, usize)> = c
                .iter()
                .map(|&v| (cell_masks.iter().map(|&cm| (masks[v] & cm).count_ones()).collect(), v))
                .collect();
            sig.sort();
            let mut start = 0;
            for i in 1..=sig.len() {
                if i == sig.len() || sig[i].0 != sig[start].0 {
                    out.push(sig[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        let changed = out.len() != cells.len();
        *cells = out;
        if !changed {
            return;
        }
    }
}

fn adjacency_code(masks: &[u32], order: &[usize]) -> u128 {
    let mut code: u128 = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            code = code << 1 | ((masks[order[i]] >> order[j]) & 1) as u128;
        }
    }
    code
}
