//! The descriptor file format: a TOML document presenting the lattice data of
//! a pair `(X, D)`.
//!
//! ```toml
//! k = 2
//! divisor_classes = [[1, 1]]   # rows over the generators of h2X
//!
//! [h1X]
//! rank = 0
//! torsion = []
//!
//! [h2X]
//! rank = 1
//! torsion = []                 # elementary divisors d1 | d2 | ...
//! ```
//!
//! Built-in descriptors are addressed as `@name`.

use num_bigint::BigInt;
use serde::Deserialize;
use twistor::lattice::{builtin, FgAbGroup, GeometryDescriptor, IntMat};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    k: usize,
    #[serde(rename = "h1X")]
    h1x: GroupSpec,
    #[serde(rename = "h2X")]
    h2x: GroupSpec,
    divisor_classes: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

/// How loading a descriptor failed, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum LoadError {
    /// Unreadable or unparseable input (exit 2); the message is
    /// line-anchored for TOML syntax errors.
    Parse(String),
    /// Well-formed input describing inconsistent data (exit 1).
    Inconsistent(String),
}

fn group_from_spec(name: &str, spec: &GroupSpec) -> Result<FgAbGroup, LoadError> {
    FgAbGroup::new(spec.rank, spec.torsion.iter().map(|&d| BigInt::from(d)).collect())
        .map_err(|e| LoadError::Inconsistent(format!("{name}: {e}")))
}

/// Parses a descriptor document into lattice data.
pub fn parse_descriptor(text: &str) -> Result<GeometryDescriptor, LoadError> {
    let file: DescriptorFile =
        toml::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    let h1x = group_from_spec("h1X", &file.h1x)?;
    let h2x = group_from_spec("h2X", &file.h2x)?;
    let rows = file.divisor_classes.len();
    if rows != h2x.generators() {
        return Err(LoadError::Inconsistent(format!(
            "divisor_classes has {rows} rows but h2X has {} generators",
            h2x.generators()
        )));
    }
    for (i, row) in file.divisor_classes.iter().enumerate() {
        if row.len() != file.k {
            return Err(LoadError::Inconsistent(format!(
                "divisor_classes row {i} has {} entries but k = {}",
                row.len(),
                file.k
            )));
        }
    }
    let classes = IntMat::from_fn(rows, file.k, |i, j| BigInt::from(file.divisor_classes[i][j]));
    GeometryDescriptor::new(file.k, h1x, h2x, classes)
        .map_err(|e| LoadError::Inconsistent(e.to_string()))
}

/// Loads `@name` builtins or a descriptor file from disk.
pub fn load(source: &str) -> Result<(String, GeometryDescriptor), LoadError> {
    if let Some(name) = source.strip_prefix('@') {
        let d = builtin::by_name(name).ok_or_else(|| {
            LoadError::Parse(format!(
                "unknown built-in descriptor `@{name}` (available: {})",
                builtin::NAMES
                    .iter()
                    .map(|n| format!("@{n}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?;
        return Ok((format!("@{name}"), d));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| LoadError::Parse(format!("cannot read {source}: {e}")))?;
    Ok((source.to_string(), parse_descriptor(&text)?))
}
