//! Quenched topology keys τ: abstract-graph codes for trees and animals,
//! comb signatures, and knot determinants for polygons.

mod comb;
mod graph;
mod knot;
mod tree;

use std::fmt;
use std::str::FromStr;

pub use comb::{comb_signature, CombSignature};
pub use graph::{graph_key, graph_key_with_cap, GRAPH_KEY_CAP};
pub use knot::{knot_invariant, knot_invariant_along, KnotInvariant, ALEXANDER_CROSSING_CAP, SCHEDULE_LEN};
pub use tree::tree_key;

pub(crate) use graph::canonical_code;
pub(crate) use knot::unknot_key;
pub(crate) use tree::tree_code;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyKind {
    TreeCode,
    GraphCode,
    CombSignature,
    KnotInvariant,
}

impl KeyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            KeyKind::TreeCode => "tree-code",
            KeyKind::GraphCode => "graph-code",
            KeyKind::CombSignature => "comb-signature",
            KeyKind::KnotInvariant => "knot-invariant",
        }
    }
}

/// Canonical identifier of a topology class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopologyKey {
    pub kind: KeyKind,
    pub payload: Vec<u8>,
}

impl TopologyKey {
    pub fn new(kind: KeyKind, payload: Vec<u8>) -> Self {
        TopologyKey { kind, payload }
    }

    /// The comb signature this key encodes, if it is a comb key.
    pub fn comb_signature(&self) -> Option<CombSignature> {
        if self.kind != KeyKind::CombSignature {
            return None;
        }
        CombSignature::from_payload(&self.payload)
    }
}

impl fmt::Display for TopologyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), hex::encode(&self.payload))
    }
}

impl FromStr for TopologyKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (k, h) = s.split_once(':').ok_or_else(|| Error::Parse(format!("bad key `{s}`")))?;
        let kind = [KeyKind::TreeCode, KeyKind::GraphCode, KeyKind::CombSignature, KeyKind::KnotInvariant]
            .into_iter()
            .find(|x| x.as_str() == k)
            .ok_or_else(|| Error::Parse(format!("bad key kind `{k}`")))?;
        let payload = hex::decode(h).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(TopologyKey { kind, payload })
    }
}

/// Packs a sequence of bits (`true` = 1) into bytes, most significant first.
pub(crate) fn pack_bits(bits: impl IntoIterator<Item = bool>) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, b) in bits.into_iter().enumerate() {
        if i % 8 == 0 {
            out.push(0);
        }
        if b {
            *out.last_mut().unwrap() |= 0x80 >> (i % 8);
        }
    }
    out
}
