//! Problem-spec files: a JSON description of a generator table and its
//! differential.
//!
//! ```json
//! {
//!   "format": "ktres-spec/1",
//!   "metadata": { "model": "oscillator" },
//!   "generators": [
//!     { "name": "phi(1)",  "antifield_number": 0, "parity": "boson",   "weight": 1 },
//!     { "name": "phi*(1)", "antifield_number": 1, "parity": "fermion", "weight": 1 }
//!   ],
//!   "differential": {
//!     "phi*(1)": [ ["-3/2", { "phi(1)": 1 }] ]
//!   }
//! }
//! ```
//!
//! Coefficients are exact rationals written as `"p/q"` or `"p"`. A
//! monomial is a map from generator name to exponent and is read in
//! canonical (declaration) order whatever order its keys are listed in.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use ktres_core::algebra::{GeneratorTable, Monomial, Parity, Polynomial};
use ktres_core::complex::{Complex, DifferentialRule};
use ktres_core::Rational;
use serde::{Deserialize, Serialize};

pub const SPEC_FORMAT: &str = "ktres-spec/1";

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Invalid {
        context: String,
        #[source]
        source: ktres_core::Error,
    },
    #[error("{context}: invalid rational `{value}`")]
    Rational { context: String, value: String },
    #[error("unsupported format `{0}` (expected `{SPEC_FORMAT}`)")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityName {
    Boson,
    Fermion,
}

impl From<Parity> for ParityName {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Bosonic => ParityName::Boson,
            Parity::Fermionic => ParityName::Fermion,
        }
    }
}

impl From<ParityName> for Parity {
    fn from(p: ParityName) -> Self {
        match p {
            ParityName::Boson => Parity::Bosonic,
            ParityName::Fermion => Parity::Fermionic,
        }
    }
}

fn default_weight() -> u32 {
    1
}

fn default_format() -> String {
    SPEC_FORMAT.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub antifield_number: i32,
    pub parity: ParityName,
    #[serde(default = "default_weight")]
    pub weight: u32,
}

/// `[coefficient, {name: exponent, ...}]`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry(pub String, pub IndexMap<String, u32>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpecFile {
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default)]
    pub metadata: IndexMap<String, String>,
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: IndexMap<String, Vec<TermEntry>>,
}

impl ProblemSpecFile {
    pub fn from_complex(c: &Complex, metadata: IndexMap<String, String>) -> Self {
        let table = c.table();
        let generators = table
            .iter()
            .map(|g| GeneratorEntry {
                name: g.name.clone(),
                antifield_number: g.antifield_number,
                parity: g.parity.into(),
                weight: g.weight,
            })
            .collect();
        let differential = c
            .delta()
            .iter()
            .map(|(id, image)| {
                let terms = image
                    .terms()
                    .map(|(m, coeff)| {
                        let mono = m
                            .factors()
                            .iter()
                            .map(|&(g, e)| (table.generator(g).name.clone(), e))
                            .collect();
                        TermEntry(coeff.to_string(), mono)
                    })
                    .collect();
                (table.generator(id).name.clone(), terms)
            })
            .collect();
        ProblemSpecFile {
            format: SPEC_FORMAT.to_string(),
            metadata,
            generators,
            differential,
        }
    }

    pub fn to_complex(&self) -> Result<Complex, SpecError> {
        if self.format != SPEC_FORMAT {
            return Err(SpecError::Format(self.format.clone()));
        }
        let mut table = GeneratorTable::new();
        for (i, g) in self.generators.iter().enumerate() {
            table
                .add(
                    g.name.clone(),
                    g.antifield_number,
                    g.parity.into(),
                    g.weight,
                )
                .map_err(|source| SpecError::Invalid {
                    context: format!("generators[{i}]"),
                    source,
                })?;
        }
        let mut rule = DifferentialRule::new();
        for (name, terms) in &self.differential {
            let context = format!("differential.{name}");
            let id = table.id_of(name).map_err(|source| SpecError::Invalid {
                context: context.clone(),
                source,
            })?;
            let mut image = Polynomial::zero();
            for (t, TermEntry(coeff, mono)) in terms.iter().enumerate() {
                let context = format!("{context}[{t}]");
                let c = parse_rational(coeff).ok_or_else(|| SpecError::Rational {
                    context: context.clone(),
                    value: coeff.clone(),
                })?;
                let mut factors = Vec::with_capacity(mono.len());
                for (g, &e) in mono {
                    let gid = table.id_of(g).map_err(|source| SpecError::Invalid {
                        context: context.clone(),
                        source,
                    })?;
                    factors.push((gid, e));
                }
                factors.sort_unstable();
                let m = Monomial::from_sorted(&table, factors)
                    .map_err(|source| SpecError::Invalid { context, source })?;
                image.add_term(c, m);
            }
            rule.set(id, image);
        }
        Complex::new(table, rule).map_err(|source| SpecError::Invalid {
            context: "differential".to_string(),
            source,
        })
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
            let field = e.path().to_string();
            parse_error(field, e.into_inner())
        })?;
        de.end().map_err(|e| parse_error(".".to_string(), e))?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }
}

fn parse_error(field: String, e: serde_json::Error) -> SpecError {
    SpecError::Parse {
        field,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}

/// Reads a spec file into a complex.
pub fn load_spec(path: &Path) -> Result<(Complex, IndexMap<String, String>), SpecError> {
    let text = fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let spec = ProblemSpecFile::parse(&text)?;
    let c = spec.to_complex()?;
    Ok((c, spec.metadata))
}

/// Writes a complex as a spec file; the file only appears once fully
/// written.
pub fn save_spec(
    c: &Complex,
    metadata: IndexMap<String, String>,
    path: &Path,
) -> Result<(), SpecError> {
    let text = ProblemSpecFile::from_complex(c, metadata).to_json();
    write_atomically(path, text.as_bytes())
}

pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), SpecError> {
    let io = |source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
