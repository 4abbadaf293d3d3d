//! AHU canonical codes for free trees, rooted at the center.

use super::{pack_bits, KeyKind, TopologyKey};
use crate::error::{Error, Result};
use crate::lattice::{Polymer, PolymerClass};

pub fn tree_key(p: &Polymer) -> Result<TopologyKey> {
    if p.class() != PolymerClass::Tree {
        return Err(Error::WrongClass { expected: "tree".into(), got: p.class().to_string() });
    }
    if p.edges().len() + 1 != p.sites().len() {
        return Err(Error::Precondition("not a tree".into()));
    }
    Ok(TopologyKey::new(KeyKind::TreeCode, tree_code(&p.adjacency())))
}

/// Canonical byte code of the free tree with adjacency `adj`.
pub(crate) fn tree_code(adj: &[Vec<usize>]) -> Vec<u8> {
    let n = adj.len();
    let code = centers(adj)
        .into_iter()
        .map(|c| rooted(adj, c, usize::MAX))
        .min()
        .unwrap_or_default();
    let mut out = (n as u32).to_be_bytes().to_vec();
    out.extend(pack_bits(code.iter().map(|&c| c == b'(')));
    out
}

fn rooted(adj: &[Vec<usize>], v: usize, parent: usize) -> Vec<u8> {
    let mut kids: Vec<Vec<u8>> = adj[v].iter().filter(|&&w| w != parent).map(|&w| rooted(adj, w, v)).collect();
    kids.sort();
    let mut s = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
    s.push(b'(');
    for k in kids {
        s.extend(k);
    }
    s.push(b')');
    s
}

/// One or two centers, found by peeling leaves.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
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
    layer.sort_unstable();
    layer
}
