use super::{ConstructionSequence, GraphError, ParentPair, SeedKind, SEED_NODES};

/// Upper bound for [`count_combinations`].
pub const MAX_COUNT_LAYERS: usize = 8;
/// Upper bound for [`enumerate_sequences`]; T6 already has 10.6M sequences.
pub const MAX_ENUM_LAYERS: usize = 6;

/// Number of construction sequences with `k` triangle layers: the product of
/// C(i, 2) for i = 3..=k+2.
pub fn count_combinations(k: usize) -> Result<u64, GraphError> {
    if k > MAX_COUNT_LAYERS {
        return Err(GraphError::TooManyLayers { layers: k, max: MAX_COUNT_LAYERS });
    }
    Ok((SEED_NODES..SEED_NODES + k).map(|n| (n * (n - 1) / 2) as u64).product())
}

/// All unordered pairs over `n` nodes, lexicographic.
fn pairs(n: usize) -> impl Iterator<Item = ParentPair> {
    (0..n).flat_map(move |p| (p + 1..n).map(move |q| [p, q]))
}

/// Every construction sequence with `k` layers, in lexicographic order of
/// the layer list.
pub fn enumerate_sequences(k: usize, seed_kind: SeedKind) -> Result<Vec<ConstructionSequence>, GraphError> {
    if k > MAX_ENUM_LAYERS {
        return Err(GraphError::TooManyLayers { layers: k, max: MAX_ENUM_LAYERS });
    }
    let mut out = Vec::with_capacity(count_combinations(k)? as usize);
    let mut layers = Vec::with_capacity(k);
    extend(k, seed_kind, &mut layers, &mut out);
    Ok(out)
}

fn extend(k: usize, seed_kind: SeedKind, layers: &mut Vec<ParentPair>, out: &mut Vec<ConstructionSequence>) {
    if layers.len() == k {
        out.push(ConstructionSequence { seed_kind, layers: layers.clone() });
        return;
    }
    for pair in pairs(SEED_NODES + layers.len()) {
        layers.push(pair);
        extend(k, seed_kind, layers, out);
        layers.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        let counts: Vec<u64> = (0..=5).map(|k| count_combinations(k).unwrap()).collect();
        assert_eq!(counts, [1, 3, 18, 180, 2700, 56700]);
        assert_eq!(count_combinations(8).unwrap(), 2_571_912_000);
        assert!(count_combinations(9).is_err());
    }

    #[test]
    fn enumeration_matches_count() {
        for k in 0..=5 {
            let seqs = enumerate_sequences(k, SeedKind::Revolute).unwrap();
            assert_eq!(seqs.len() as u64, count_combinations(k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn small_enumerations() {
        let t0 = enumerate_sequences(0, SeedKind::Revolute).unwrap();
        assert_eq!(t0.len(), 1);
        assert!(t0[0].layers.is_empty());

        let t1: Vec<_> = enumerate_sequences(1, SeedKind::Slider).unwrap().into_iter().map(|s| s.layers).collect();
        assert_eq!(t1, vec![vec![[0, 1]], vec![[0, 2]], vec![[1, 2]]]);
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let seqs = enumerate_sequences(3, SeedKind::Revolute).unwrap();
        assert!(seqs.windows(2).all(|w| w[0] < w[1]));
        for s in &seqs {
            ConstructionSequence::new(s.seed_kind, s.layers.clone()).unwrap();
        }
    }
}
