//! Comb signatures `⟨b; n_0..n_b; s_1..s_b⟩`.

use std::fmt;
use std::str::FromStr;

use super::{KeyKind, TopologyKey};
use crate::error::{Error, Result};
use crate::lattice::{path_between, Polymer, PolymerClass};

/// `b` side chains; backbone segments `n_0..n_b`; side-chain lengths `s_1..s_b`.
/// Side chain `k` hangs off backbone position `n_0 + … + n_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombSignature {
    b: usize,
    n: Vec<usize>,
    s: Vec<usize>,
}

impl CombSignature {
    pub fn new(b: usize, n: Vec<usize>, s: Vec<usize>) -> Result<Self> {
        let sig = CombSignature { b, n, s };
        sig.check()?;
        Ok(sig)
    }

    pub(crate) fn new_unchecked(b: usize, n: Vec<usize>, s: Vec<usize>) -> Self {
        CombSignature { b, n, s }
    }

    /// The 0-edge comb (a single labelled site) is written `⟨0; 0; ⟩`.
    pub fn single_site() -> Self {
        CombSignature { b: 0, n: vec![0], s: vec![] }
    }

    fn check(&self) -> Result<()> {
        if self.n.len() != self.b + 1 || self.s.len() != self.b {
            return Err(Error::InvalidArgument(format!("signature {self} has wrong lengths")));
        }
        if *self == CombSignature::single_site() {
            return Ok(());
        }
        if self.n.iter().chain(&self.s).any(|&x| x == 0) {
            return Err(Error::InvalidArgument(format!("signature {self} has a zero entry")));
        }
        Ok(())
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    /// Total edge count `n_0 + Σ (n_i + s_i)`.
    pub fn edges(&self) -> usize {
        self.n.iter().sum::<usize>() + self.s.iter().sum::<usize>()
    }

    pub fn backbone_len(&self) -> usize {
        self.n.iter().sum()
    }

    /// Backbone positions `N_k` of the degree-3 sites.
    pub fn attach_positions(&self) -> Vec<usize> {
        self.n[..self.b]
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// Signature read from the other labelled end.
    pub fn reversed(&self) -> Self {
        CombSignature {
            b: self.b,
            n: self.n.iter().rev().copied().collect(),
            s: self.s.iter().rev().copied().collect(),
        }
    }

    pub fn key(&self) -> TopologyKey {
        let mut payload = Vec::with_capacity(2 * (2 * self.b + 2));
        for x in std::iter::once(&self.b).chain(&self.n).chain(&self.s) {
            payload.extend((*x as u16).to_be_bytes());
        }
        TopologyKey::new(KeyKind::CombSignature, payload)
    }

    pub(crate) fn from_payload(p: &[u8]) -> Option<Self> {
        if p.len() % 2 != 0 || p.is_empty() {
            return None;
        }
        let v: Vec<usize> = p.chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as usize).collect();
        let b = v[0];
        if v.len() != 2 * b + 2 {
            return None;
        }
        Some(CombSignature { b, n: v[1..b + 2].to_vec(), s: v[b + 2..].to_vec() })
    }

    /// Every signature with `n` edges, in lexicographic order.
    pub fn all_with_edges(n: usize) -> Vec<CombSignature> {
        if n == 0 {
            return vec![CombSignature::single_site()];
        }
        let mut out = Vec::new();
        // A comb is a composition: n_0, then pairs (s_k, n_k).
        fn rec(left: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                if parts.len() % 2 == 1 {
                    out.push(parts.clone());
                }
                return;
            }
            for x in 1..=left {
                parts.push(x);
                rec(left - x, parts, out);
                parts.pop();
            }
        }
        let mut comps = Vec::new();
        rec(n, &mut Vec::new(), &mut comps);
        for c in comps {
            let b = c.len() / 2;
            let n_: Vec<usize> = std::iter::once(c[0]).chain((0..b).map(|k| c[2 + 2 * k])).collect();
            let s: Vec<usize> = (0..b).map(|k| c[1 + 2 * k]).collect();
            out.push(CombSignature { b, n: n_, s });
        }
        out.sort();
        out
    }
}

impl fmt::Display for CombSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{};{};{}", self.b, join(&self.n), join(&self.s))
    }
}

impl FromStr for CombSignature {
    type Err = Error;
    fn from_str(t: &str) -> Result<Self> {
        let parts: Vec<&str> = t.trim().split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("signature `{t}` needs the form b;n_0,...;s_1,...")));
        }
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
                .collect()
        };
        let b = parts[0].trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
        CombSignature::new(b, list(parts[1])?, list(parts[2])?)
    }
}

/// Reads the signature along the `ρ_A → ρ_B` backbone.
pub fn comb_signature(p: &Polymer) -> Result<CombSignature> {
    if p.class() != PolymerClass::Comb {
        return Err(Error::WrongClass { expected: "comb".into(), got: p.class().to_string() });
    }
    if let Err(v) = p.validate() {
        return Err(Error::Precondition(format!("invalid comb: {v}")));
    }
    let (a, b) = p.labels().expect("validated comb has labels");
    if p.sites().len() == 1 {
        return Ok(CombSignature::single_site());
    }
    let adj = p.adjacency();
    let backbone = path_between(&adj, a, b);
    let mut on = vec![false; adj.len()];
    for &v in &backbone {
        on[v] = true;
    }
    let (mut n, mut s) = (Vec::new(), Vec::new());
    let mut seg = 0;
    for (i, &v) in backbone.iter().enumerate() {
        if i > 0 {
            seg += 1;
        }
        if adj[v].len() == 3 {
            n.push(seg);
            seg = 0;
            let mut prev = v;
            let mut cur = *adj[v].iter().find(|&&w| !on[w]).unwrap();
            let mut len = 1;
            while adj[cur].len() == 2 {
                let next = *adj[cur].iter().find(|&&w| w != prev).unwrap();
                prev = cur;
                cur = next;
                len += 1;
            }
            s.push(len);
        }
    }
    n.push(seg);
    CombSignature::new(s.len(), n, s)
}
