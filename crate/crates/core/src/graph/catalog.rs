use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    canonical_form, enumerate_sequences, CanonicalCode, ConstructionSequence, Filter, GraphError, MechanismGraph,
    ParentPair, SeedKind, MAX_CATALOG_LAYERS,
};

/// One catalog record. Field order is the on-disk order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub k: usize,
    pub seed_kind: SeedKind,
    pub parent_pairs: Vec<ParentPair>,
    pub links: Vec<[usize; 2]>,
    pub drawing_node: usize,
    pub canonical_code: CanonicalCode,
}

impl CatalogEntry {
    pub fn graph(&self) -> Result<MechanismGraph, GraphError> {
        let seq = ConstructionSequence::new(self.seed_kind, self.parent_pairs.clone())?;
        MechanismGraph::from_sequence(&seq)
    }
}

/// Graphs surviving each cumulative stage for one layer count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub all: u64,
    pub single_drawing_node: u64,
    pub two_fixed_nodes: u64,
    pub no_redundant_triangles: u64,
    pub isomorphic: u64,
}

impl StageCounts {
    fn rows(&self) -> [u64; 5] {
        [self.all, self.single_drawing_node, self.two_fixed_nodes, self.no_redundant_triangles, self.isomorphic]
    }
}

/// Per-layer stage counts, indexed by k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub seed_kind: SeedKind,
    pub per_layer: Vec<StageCounts>,
}

impl FilterReport {
    pub fn total(&self) -> StageCounts {
        self.per_layer.iter().fold(StageCounts::default(), |acc, c| StageCounts {
            all: acc.all + c.all,
            single_drawing_node: acc.single_drawing_node + c.single_drawing_node,
            two_fixed_nodes: acc.two_fixed_nodes + c.two_fixed_nodes,
            no_redundant_triangles: acc.no_redundant_triangles + c.no_redundant_triangles,
            isomorphic: acc.isomorphic + c.isomorphic,
        })
    }

    /// Plain-text table, one row per stage, one column per layer count.
    pub fn table(&self) -> String {
        const LABELS: [&str; 5] = [
            "Initial: All combinations",
            "Filter 1: One drawing node",
            "Filter 2: Two fixed nodes",
            "Filter 3: No redundant links",
            "Filter 4: Isomorphic graphs",
        ];
        let prefix = self.seed_kind.id_prefix();
        let mut out = String::new();
        let _ = write!(out, "{:<30}", "Filters | Triangle layers");
        for k in 0..self.per_layer.len() {
            let _ = write!(out, "{:>8}", format!("{prefix}{k}"));
        }
        let _ = writeln!(out, "{:>9}", "Total");
        let total = self.total().rows();
        for (row, label) in LABELS.iter().enumerate() {
            let _ = write!(out, "{label:<30}");
            for counts in &self.per_layer {
                let _ = write!(out, "{:>8}", counts.rows()[row]);
            }
            let _ = writeln!(out, "{:>9}", total[row]);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub seed_kind: SeedKind,
    pub entries: Vec<CatalogEntry>,
    pub report: FilterReport,
}

impl Catalog {
    /// Distinct graphs per layer count.
    pub fn counts(&self) -> Vec<u64> {
        self.report.per_layer.iter().map(|c| c.isomorphic).collect()
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for entry in &self.entries {
            serde_json::to_writer(&mut w, entry)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> io::Result<Vec<CatalogEntry>> {
        r.lines()
            .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|line| Ok(serde_json::from_str(&line?)?))
            .collect()
    }
}

/// Enumerate, filter and deduplicate all graphs with up to `k_max` layers.
///
/// Within each isomorphism class the lexicographically first construction
/// sequence is kept. Ids are `{T|ST}{k}-{n}` with `n` counting from 1.
pub fn build_catalog(k_max: usize, seed_kind: SeedKind) -> Result<Catalog, GraphError> {
    if k_max > MAX_CATALOG_LAYERS {
        return Err(GraphError::TooManyLayers { layers: k_max, max: MAX_CATALOG_LAYERS });
    }
    let mut entries = Vec::new();
    let mut per_layer = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut stage = enumerate_sequences(k, seed_kind)?;
        let mut counts = [stage.len() as u64, 0, 0, 0];
        for (i, filter) in Filter::ALL.into_iter().enumerate() {
            stage = stage.into_par_iter().filter(|s| filter.accepts(s)).collect();
            counts[i + 1] = stage.len() as u64;
        }
        let coded: Vec<(MechanismGraph, CanonicalCode)> = stage
            .par_iter()
            .map(|s| {
                let g = MechanismGraph::from_sequence(s)?;
                let code = canonical_form(&g)?;
                Ok((g, code))
            })
            .collect::<Result<_, GraphError>>()?;

        let mut seen = HashSet::new();
        let mut distinct = 0u64;
        for (graph, code) in coded {
            if !seen.insert(code.clone()) {
                continue;
            }
            distinct += 1;
            entries.push(CatalogEntry {
                id: format!("{}{k}-{distinct}", seed_kind.id_prefix()),
                k,
                seed_kind,
                parent_pairs: graph.parents.clone(),
                links: graph.links.iter().copied().collect(),
                drawing_node: graph.drawing_node,
                canonical_code: code,
            });
        }
        per_layer.push(StageCounts {
            all: counts[0],
            single_drawing_node: counts[1],
            two_fixed_nodes: counts[2],
            no_redundant_triangles: counts[3],
            isomorphic: distinct,
        });
    }
    Ok(Catalog { seed_kind, entries, report: FilterReport { seed_kind, per_layer } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3_catalog() {
        let cat = build_catalog(3, SeedKind::Revolute).unwrap();
        assert_eq!(cat.counts(), [0, 0, 1, 7]);
        assert_eq!(cat.entries[0].id, "T2-1");
        assert_eq!(cat.entries.last().unwrap().id, "T3-7");
        let t3 = cat.report.per_layer[3];
        assert_eq!((t3.all, t3.single_drawing_node, t3.two_fixed_nodes), (180, 31, 11));
        assert_eq!(t3.no_redundant_triangles, 8);
    }

    #[test]
    fn rejects_too_many_layers() {
        assert!(build_catalog(6, SeedKind::Revolute).is_err());
    }

    #[test]
    fn jsonl_round_trip() {
        let cat = build_catalog(3, SeedKind::Slider).unwrap();
        let mut buf = Vec::new();
        cat.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"id\":\"ST2-1\",\"k\":2,\"seed_kind\":\"slider\",\"parent_pairs\""));
        let back = Catalog::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, cat.entries);
        for e in &back {
            let g = e.graph().unwrap();
            assert_eq!(g.drawing_node, e.drawing_node);
        }
    }

    #[test]
    fn table_has_total_column() {
        let cat = build_catalog(2, SeedKind::Revolute).unwrap();
        let table = cat.report.table();
        let last = table.lines().last().unwrap();
        assert!(last.starts_with("Filter 4: Isomorphic graphs"));
        assert!(last.trim_end().ends_with('1'));
    }
}
