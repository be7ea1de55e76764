use std::fmt;

use serde::{Deserialize, Serialize};

use super::{GraphError, MechanismGraph, FIXED_A, FIXED_B, INPUT, MAX_CANON_NODES, SEED_NODES};

/// Byte string identifying a graph's isomorphism class.
///
/// Layout: seed-kind byte, node count, then the relabeled link list sorted
/// ascending, two bytes per link. Labels 0 and 1 are the two grounds, 2 the
/// input, 3.. the added nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() % 2 == 1 {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<_>>>()
            .map(CanonicalCode)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).ok_or_else(|| serde::de::Error::custom("invalid hex code"))
    }
}

/// Minimum serialization over all role-respecting relabelings: the two
/// grounds may swap, the input keeps its label, added nodes permute freely.
pub fn canonical_form(graph: &MechanismGraph) -> Result<CanonicalCode, GraphError> {
    let n = graph.node_count();
    if n > MAX_CANON_NODES {
        return Err(GraphError::TooLargeForCanon { nodes: n });
    }
    let links: Vec<[usize; 2]> = graph.links.iter().copied().collect();
    let mut added: Vec<usize> = (SEED_NODES..n).collect();
    let mut label = vec![0u8; n];
    let mut best: Option<Vec<u8>> = None;
    let mut buf = Vec::with_capacity(2 + 2 * links.len());
    let mut relabeled = Vec::with_capacity(links.len());

    for (ga, gb) in [(FIXED_A, FIXED_B), (FIXED_B, FIXED_A)] {
        label[ga] = 0;
        label[gb] = 1;
        label[INPUT] = 2;
        heap_permutations(&mut added, &mut |perm| {
            for (i, &node) in perm.iter().enumerate() {
                label[node] = (SEED_NODES + i) as u8;
            }
            relabeled.clear();
            relabeled.extend(links.iter().map(|&[a, b]| {
                let (x, y) = (label[a], label[b]);
                if x < y {
                    [x, y]
                } else {
                    [y, x]
                }
            }));
            relabeled.sort_unstable();
            buf.clear();
            buf.push(graph.seed_kind.code_byte());
            buf.push(n as u8);
            buf.extend(relabeled.iter().flatten());
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        });
    }
    Ok(CanonicalCode(best.expect("at least one labeling")))
}

/// Heap's algorithm; calls `visit` once per permutation of `items`.
fn heap_permutations(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ConstructionSequence, SeedKind};

    fn graph(layers: &[[usize; 2]]) -> MechanismGraph {
        let seq = ConstructionSequence::new(SeedKind::Revolute, layers.to_vec()).unwrap();
        MechanismGraph::from_sequence(&seq).unwrap()
    }

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut items = vec![0, 1, 2, 3];
        let mut seen = std::collections::BTreeSet::new();
        heap_permutations(&mut items, &mut |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn construction_order_does_not_matter() {
        let a = graph(&[[0, 2], [1, 2], [3, 4]]);
        let b = graph(&[[1, 2], [0, 2], [3, 4]]);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn ground_swap_is_absorbed() {
        let g = graph(&[[1, 2], [2, 3]]);
        let mut swapped = g.clone();
        swapped.links = g
            .links
            .iter()
            .map(|&[a, b]| {
                let f = |n: usize| match n {
                    FIXED_A => FIXED_B,
                    FIXED_B => FIXED_A,
                    n => n,
                };
                let (x, y) = (f(a), f(b));
                [x.min(y), x.max(y)]
            })
            .collect();
        assert_ne!(g.links, swapped.links);
        assert_eq!(canonical_form(&g).unwrap(), canonical_form(&swapped).unwrap());
    }

    #[test]
    fn different_sizes_differ() {
        let t2 = graph(&[[1, 2], [2, 3]]);
        let t3 = graph(&[[1, 2], [0, 3], [2, 4]]);
        assert_ne!(canonical_form(&t2).unwrap(), canonical_form(&t3).unwrap());
    }

    #[test]
    fn seed_kind_is_part_of_the_code() {
        let g = graph(&[[1, 2], [2, 3]]);
        let mut s = g.clone();
        s.seed_kind = SeedKind::Slider;
        assert_ne!(canonical_form(&g).unwrap(), canonical_form(&s).unwrap());
    }

    #[test]
    fn hex_round_trip() {
        let code = canonical_form(&graph(&[[1, 2], [2, 3]])).unwrap();
        assert_eq!(CanonicalCode::from_hex(&code.to_hex()), Some(code));
        assert_eq!(CanonicalCode::from_hex("abc"), None);
    }
}
