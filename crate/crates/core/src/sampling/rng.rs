use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

fn digest(domain: &str, seed: u64, key: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(domain.as_bytes());
    h.update([0]);
    h.update(seed.to_le_bytes());
    h.update((key.len() as u64).to_le_bytes());
    h.update(key.as_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// Independent stream for draw `index` of graph `graph_id`. Depends only on
/// the key, never on how many other draws ran before.
pub fn sample_rng(seed: u64, graph_id: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(digest("linkforge/sample", seed, graph_id, index))
}

/// Stable value in [0, 1) used to assign a sample to a split.
pub fn split_unit(seed: u64, sample_id: &str) -> f64 {
    let d = digest("linkforge/split", seed, sample_id, 0);
    let v = u64::from_le_bytes(d[..8].try_into().expect("8 bytes"));
    (v >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_keyed() {
        let a: u64 = sample_rng(1, "T2-1", 5).random();
        let b: u64 = sample_rng(1, "T2-1", 5).random();
        let c: u64 = sample_rng(1, "T2-1", 6).random();
        let d: u64 = sample_rng(2, "T2-1", 5).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn split_unit_range() {
        for i in 0..1000 {
            let u = split_unit(3, &format!("s{i}"));
            assert!((0.0..1.0).contains(&u));
        }
    }
}
