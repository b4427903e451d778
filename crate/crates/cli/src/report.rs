//! Reports: a JSON document for machines and fixed-width text for people.
//! Both are fully determined by the inputs: rows come in `(n, d)` order and
//! generators in id order.

use std::fmt::Write as _;

use ktres_core::algebra::{GeneratorTable, Parity};
use ktres_core::augment::{AcyclicityReport, AugmentationReport};
use ktres_core::complex::{CohomologyTable, Complex, Nilpotency};
use serde::Serialize;

pub const REPORT_FORMAT: &str = "ktres-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub command: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotency: Option<NilpotencySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<RowSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<AugmentationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grassmann_number: Option<i64>,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report {
            format: REPORT_FORMAT,
            command: command.to_string(),
            input: input.to_string(),
            nilpotency: None,
            cohomology: None,
            augmentation: None,
            verification: None,
            grassmann_number: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotencySection {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl NilpotencySection {
    pub fn new(c: &Complex, n: &Nilpotency) -> Self {
        match n {
            Nilpotency::Ok => NilpotencySection {
                ok: true,
                generator: None,
                residual: None,
            },
            Nilpotency::Counterexample {
                generator,
                residual,
            } => NilpotencySection {
                ok: false,
                generator: Some(c.table().generator(*generator).name.clone()),
                residual: Some(residual.display(c.table()).to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSection {
    pub antifield_number: i32,
    pub weight: u32,
    pub dim_chain: usize,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub dim_h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<String>>,
}

pub fn rows_section(c: &Complex, table: &CohomologyTable, with_reps: bool) -> Vec<RowSection> {
    table
        .rows
        .iter()
        .map(|r| RowSection {
            antifield_number: r.antifield_number,
            weight: r.weight,
            dim_chain: r.dim_chain,
            dim_kernel: r.dim_kernel,
            dim_image: r.dim_image,
            dim_h: r.dim_h,
            representatives: with_reps.then(|| {
                table
                    .representatives
                    .get(&(r.antifield_number, r.weight))
                    .map(|ps| {
                        ps.iter()
                            .map(|p| p.display(c.table()).to_string())
                            .collect()
                    })
                    .unwrap_or_default()
            }),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSection {
    pub name: String,
    pub antifield_number: i32,
    pub parity: &'static str,
    pub weight: u32,
    pub differential: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundSection {
    pub level: i32,
    pub identities: Vec<String>,
    pub added: Vec<GeneratorSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugmentationSection {
    pub terminated: bool,
    pub rounds: Vec<RoundSection>,
    pub notes: Vec<String>,
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Bosonic => "boson",
        Parity::Fermionic => "fermion",
    }
}

impl AugmentationSection {
    /// `before` indexes the identities, `after` the added generators.
    pub fn new(before: &GeneratorTable, after: &Complex, report: &AugmentationReport) -> Self {
        let mut notes = Vec::new();
        let rounds = report
            .rounds
            .iter()
            .map(|round| {
                if round.level < 0 {
                    notes.push(format!(
                        "level {} (ghost sector): {} closed ghost combination(s) were not exact and were killed by new generators at level {}",
                        round.level,
                        round.added.len(),
                        round.level + 1
                    ));
                }
                RoundSection {
                    level: round.level,
                    identities: (0..round.identities.len())
                        .map(|r| round.identities.combination(r).display(before).to_string())
                        .collect(),
                    added: round
                        .added
                        .iter()
                        .map(|g| GeneratorSection {
                            name: g.name.clone(),
                            antifield_number: g.antifield_number,
                            parity: parity_name(g.parity),
                            weight: g.weight,
                            differential: after.delta_of(g.id).display(after.table()).to_string(),
                        })
                        .collect(),
                }
            })
            .collect();
        if !report.terminated {
            notes.push("maximum level reached with identities remaining".to_string());
        }
        AugmentationSection {
            terminated: report.terminated,
            rounds,
            notes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffendingBlock {
    pub antifield_number: i32,
    pub weight: u32,
    pub dim_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationSection {
    pub acyclic: bool,
    pub max_antifield: i32,
    pub max_weight: u32,
    pub offending: Vec<OffendingBlock>,
    pub constants: usize,
}

impl VerificationSection {
    pub fn new(r: &AcyclicityReport, max_antifield: i32, max_weight: u32) -> Self {
        VerificationSection {
            acyclic: r.acyclic,
            max_antifield,
            max_weight,
            offending: r
                .offending
                .iter()
                .map(|o| OffendingBlock {
                    antifield_number: o.antifield_number,
                    weight: o.weight,
                    dim_h: o.dim_h,
                })
                .collect(),
            constants: r.constants,
        }
    }
}

/// Fixed-width cohomology table.
pub fn cohomology_text(rows: &[RowSection]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5} {:>5} {:>8} {:>8} {:>8} {:>8}",
        "n", "d", "chain", "kernel", "image", "H"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>8} {:>8} {:>8} {:>8}",
            r.antifield_number, r.weight, r.dim_chain, r.dim_kernel, r.dim_image, r.dim_h
        );
    }
    for r in rows {
        if let Some(reps) = &r.representatives {
            if !reps.is_empty() {
                let _ = writeln!(
                    out,
                    "H({},{}): {}",
                    r.antifield_number,
                    r.weight,
                    reps.join(", ")
                );
            }
        }
    }
    out
}

pub fn augmentation_text(s: &AugmentationSection) -> String {
    let mut out = String::new();
    for round in &s.rounds {
        let _ = writeln!(
            out,
            "level {}: {} identit{}",
            round.level,
            round.identities.len(),
            if round.identities.len() == 1 {
                "y"
            } else {
                "ies"
            }
        );
        for g in &round.added {
            let _ = writeln!(
                out,
                "  + {} ({}, n={}, w={})  delta = {}",
                g.name, g.parity, g.antifield_number, g.weight, g.differential
            );
        }
    }
    let _ = writeln!(out, "terminated: {}", s.terminated);
    for note in &s.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn verification_text(v: &VerificationSection) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "acyclic: {} (n <= {}, d <= {})",
        v.acyclic, v.max_antifield, v.max_weight
    );
    for o in &v.offending {
        let _ = writeln!(
            out,
            "  offending block ({}, {}): dim H = {}",
            o.antifield_number, o.weight, o.dim_h
        );
    }
    let _ = writeln!(out, "constants: dim H(0,0) = {}", v.constants);
    out
}
