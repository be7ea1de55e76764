use std::path::Path;

use linkforge_core::sampling::SampleConfig;
use linkforge_core::synthesis::SynthesisOptions;
use serde::{Deserialize, Serialize};

use crate::error::{validation, CliResult};

pub const SEED_ENV: &str = "LINKFORGE_SEED";

/// Optional TOML file. Command-line flags override anything set here.
///
/// ```toml
/// seed = 7
/// workers = 4
/// steps = 360
///
/// [sample]
/// per_graph = 1000
/// length_range = [0.1, 0.9]
///
/// [synthesis]
/// top_k = 5
/// refine = { max_evals = 500 }
/// ```
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub steps: Option<usize>,
    pub sample: SampleConfig,
    pub synthesis: SynthesisOptions,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
    }
}

/// Seed precedence: flag, then config file, then `LINKFORGE_SEED`, then 0.
pub fn effective_seed(flag: Option<u64>, file: &FileConfig) -> CliResult<u64> {
    if let Some(s) = flag.or(file.seed) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| validation(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_sections() {
        let c: FileConfig =
            toml::from_str("seed = 3\n[sample]\nper_graph = 12\n[synthesis]\ntop_k = 2\nrefine = { max_evals = 40 }\n")
                .unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.sample.per_graph, 12);
        assert_eq!(c.sample.steps, 360);
        assert_eq!(c.synthesis.top_k, 2);
        assert_eq!(c.synthesis.refine.max_evals, 40);
        assert_eq!(c.synthesis.refine.steps, 360);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("colour = 1\n").is_err());
        assert!(toml::from_str::<FileConfig>("[sample]\nper_grpah = 1\n").is_err());
    }

    #[test]
    fn flag_beats_file() {
        let file = FileConfig { seed: Some(5), ..Default::default() };
        assert_eq!(effective_seed(Some(9), &file).unwrap(), 9);
        assert_eq!(effective_seed(None, &file).unwrap(), 5);
    }
}
