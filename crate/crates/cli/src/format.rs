//! JSON file formats: monoid specs (schema 1) and bifurcus builds.
//!
//! Rationals are always strings, `"a"` or `"a/b"`; infinite bounds are
//! `"inf"`.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "families": [
//!     { "generators": ["1/2"] },
//!     { "numerator": "p + 1", "prime_filter": "all", "index_start": 2 }
//!   ],
//!   "metadata": { "zero_limit_point": false, "atom_inf": "1/2", "inf_attained": true,
//!                 "atom_sup": "4/3", "sup_attained": true }
//! }
//! ```

use std::path::Path;

use puiseux_core::{
    AddedPair, ExtRational, GeneratorFamily, Metadata, MonoidSpec, PosRational, PrimeFilter, StagedMonoid,
    SymbolicFamily,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SPEC_SCHEMA: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    schema: u32,
    families: Vec<FamilyFile>,
    #[serde(default, skip_serializing_if = "MetadataFile::is_empty")]
    metadata: MetadataFile,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    numerator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime_filter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index_start: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index_end: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stable: Option<bool>,
}

#[derive(Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetadataFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_limit_point: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atom_inf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inf_attained: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atom_sup: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sup_attained: Option<bool>,
}

impl MetadataFile {
    fn is_empty(&self) -> bool {
        *self == MetadataFile::default()
    }
}

fn rational(field: &str, s: &str) -> CliResult<PosRational> {
    s.parse().map_err(|e| CliError::Format(format!("{field}: {e}")))
}

fn family_from_file(i: usize, f: FamilyFile) -> CliResult<GeneratorFamily> {
    let err = |msg: &str| CliError::Format(format!("families[{i}]: {msg}"));
    match (f.generators, f.numerator) {
        (Some(gens), None) => {
            if f.prime_filter.is_some() || f.index_start.is_some() || f.index_end.is_some() || f.stable.is_some() {
                return Err(err("explicit families only take `generators`"));
            }
            let gens = gens
                .iter()
                .enumerate()
                .map(|(j, g)| rational(&format!("families[{i}].generators[{j}]"), g))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(GeneratorFamily::Explicit(gens))
        }
        (None, Some(numerator)) => {
            let filter: PrimeFilter = f
                .prime_filter
                .as_deref()
                .unwrap_or("all")
                .parse()
                .map_err(|e| CliError::Format(format!("families[{i}].prime_filter: {e}")))?;
            let mut fam = SymbolicFamily::new(&numerator, filter, f.index_start.unwrap_or(1))
                .map_err(|e| CliError::Format(format!("families[{i}].numerator: {e}")))?;
            fam.index_end = f.index_end;
            fam.declared_stable = f.stable.unwrap_or(false);
            Ok(GeneratorFamily::Symbolic(fam))
        }
        (Some(_), Some(_)) => Err(err("a family has either `generators` or `numerator`, not both")),
        (None, None) => Err(err("a family needs `generators` or `numerator`")),
    }
}

fn family_to_file(f: &GeneratorFamily) -> FamilyFile {
    match f {
        GeneratorFamily::Explicit(gens) => {
            FamilyFile { generators: Some(gens.iter().map(ToString::to_string).collect()), ..FamilyFile::default() }
        }
        GeneratorFamily::Symbolic(s) => FamilyFile {
            numerator: Some(s.numerator.as_str().to_string()),
            prime_filter: Some(s.prime_filter.to_string()),
            index_start: Some(s.index_start),
            index_end: s.index_end,
            stable: s.declared_stable.then_some(true),
            ..FamilyFile::default()
        },
    }
}

pub fn parse_spec(text: &str) -> CliResult<MonoidSpec> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|source| CliError::Json { context: "spec".into(), source })?;
    if file.schema != SPEC_SCHEMA {
        return Err(CliError::Format(format!("unsupported spec schema {}; expected {SPEC_SCHEMA}", file.schema)));
    }
    let families =
        file.families.into_iter().enumerate().map(|(i, f)| family_from_file(i, f)).collect::<CliResult<Vec<_>>>()?;
    let m = file.metadata;
    let metadata = Metadata {
        zero_limit_point: m.zero_limit_point,
        atom_inf: m.atom_inf.as_deref().map(|s| rational("metadata.atom_inf", s)).transpose()?,
        inf_attained: m.inf_attained,
        atom_sup: m
            .atom_sup
            .as_deref()
            .map(|s| s.parse::<ExtRational>().map_err(|e| CliError::Format(format!("metadata.atom_sup: {e}"))))
            .transpose()?,
        sup_attained: m.sup_attained,
    };
    Ok(MonoidSpec::new(families, metadata)?)
}

pub fn spec_to_json(spec: &MonoidSpec) -> String {
    let m = &spec.metadata;
    let file = SpecFile {
        schema: SPEC_SCHEMA,
        families: spec.families.iter().map(family_to_file).collect(),
        metadata: MetadataFile {
            zero_limit_point: m.zero_limit_point,
            atom_inf: m.atom_inf.as_ref().map(ToString::to_string),
            inf_attained: m.inf_attained,
            atom_sup: m.atom_sup.as_ref().map(ToString::to_string),
            sup_attained: m.sup_attained,
        },
    };
    serde_json::to_string_pretty(&file).expect("spec serializes")
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_spec(path: &Path) -> CliResult<MonoidSpec> {
    parse_spec(&read_text(path)?).map_err(|e| match e {
        CliError::Io { .. } => e,
        other => CliError::Format(format!("{}: {other}", path.display())),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StagedFile {
    schema: u32,
    value_bound: String,
    stages: Vec<StageFile>,
    #[serde(default)]
    warnings: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageFile {
    stage: usize,
    atom_count: usize,
    added: Vec<PairFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    reducible: String,
    prime: u64,
    atoms: [String; 2],
}

pub fn staged_to_json(sm: &StagedMonoid) -> String {
    let file = StagedFile {
        schema: SPEC_SCHEMA,
        value_bound: sm.value_bound.to_string(),
        stages: sm
            .added
            .iter()
            .enumerate()
            .map(|(i, pairs)| StageFile {
                stage: i + 1,
                atom_count: sm.stages[i + 1].atoms().len(),
                added: pairs
                    .iter()
                    .map(|p| PairFile {
                        reducible: p.reducible.to_string(),
                        prime: p.prime,
                        atoms: [p.minus.to_string(), p.plus.to_string()],
                    })
                    .collect(),
            })
            .collect(),
        warnings: sm.warnings.clone(),
    };
    serde_json::to_string_pretty(&file).expect("build serializes")
}

/// Rebuilds a staged monoid from its JSON record, re-validating every
/// recorded atom and prime.
pub fn parse_staged(text: &str) -> CliResult<StagedMonoid> {
    let file: StagedFile =
        serde_json::from_str(text).map_err(|source| CliError::Json { context: "bifurcus build".into(), source })?;
    if file.schema != SPEC_SCHEMA {
        return Err(CliError::Format(format!("unsupported schema {}; expected {SPEC_SCHEMA}", file.schema)));
    }
    let mut added = Vec::new();
    for (i, stage) in file.stages.into_iter().enumerate() {
        if stage.stage != i + 1 {
            return Err(CliError::Format(format!("stage {} listed at position {}", stage.stage, i + 1)));
        }
        let pairs = stage
            .added
            .into_iter()
            .map(|p| {
                Ok(AddedPair {
                    reducible: rational("reducible", &p.reducible)?,
                    prime: p.prime,
                    minus: rational("atoms[0]", &p.atoms[0])?,
                    plus: rational("atoms[1]", &p.atoms[1])?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        added.push(pairs);
    }
    let mut sm = StagedMonoid::from_records(rational("value_bound", &file.value_bound)?, added)?;
    sm.warnings = file.warnings;
    Ok(sm)
}
