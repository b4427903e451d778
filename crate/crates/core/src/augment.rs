//! Identity detection and higher-order antifields.
//!
//! An identity at level `L` is a linear combination of level-`L`
//! generators that the differential sends to zero and that is not already
//! the differential of something at level `L + 1`. Each one is killed by a
//! new generator one level up, of opposite parity, whose differential is
//! that combination. Repeating this level by level builds the syzygy tower.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{GenId, Generator, Parity, Polynomial};
use crate::complex::{
    apply_delta, check_nilpotent, cohomology_table, grading_window, linear_part, CohomologyRow,
    Complex, Nilpotency,
};
use crate::error::{Error, Result};
use crate::linalg::{left_kernel_basis, quotient_basis, Rational};

/// Independent identities among the images of the level-`level`
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySet {
    pub level: i32,
    /// Generator ids indexing the entries of each row (all generators at
    /// `level`, in id order).
    pub generators: Vec<GenId>,
    pub rows: Vec<Vec<Rational>>,
}

impl IdentitySet {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// The combination `Σ R_i g_i` for row `row`.
    pub fn combination(&self, row: usize) -> Polynomial {
        Polynomial::linear(
            self.rows[row]
                .iter()
                .zip(&self.generators)
                .filter(|(r, _)| !r.is_zero())
                .map(|(r, &g)| (r.clone(), g)),
        )
    }
}

/// Identities at `level`: the left kernel of the linear part of `δ` from
/// `level` to `level − 1`, modulo the linear image of `δ` from
/// `level + 1`. Rows come back in reduced echelon form.
pub fn find_identities(c: &Complex, level: i32) -> Result<IdentitySet> {
    let (sources, _, equations) = linear_part(c, level);
    let closed = left_kernel_basis(&equations);
    let (_, _, from_above) = linear_part(c, level + 1);
    let killed: Vec<Vec<Rational>> = (0..from_above.rows())
        .map(|r| from_above.row(r).to_vec())
        .collect();
    let rows = quotient_basis(sources.len(), &closed, &killed)?;
    Ok(IdentitySet {
        level,
        generators: sources,
        rows,
    })
}

/// Adds one generator per identity at `ids.level + 1`, named
/// `{prefix}{level}_{ordinal}`.
pub fn augment_once(c: &Complex, ids: &IdentitySet, name_prefix: &str) -> Result<Complex> {
    let (added, complex) = augment_inner(c, ids, name_prefix)?;
    debug_assert_eq!(added.len(), ids.len());
    Ok(complex)
}

fn augment_inner(
    c: &Complex,
    ids: &IdentitySet,
    name_prefix: &str,
) -> Result<(Vec<GenId>, Complex)> {
    if ids.is_empty() {
        return Err(Error::EmptyIdentitySet);
    }
    let (sources, _, _) = linear_part(c, ids.level);
    if sources != ids.generators {
        return Err(Error::StaleIdentity {
            level: ids.level,
            row: 0,
        });
    }

    let (mut table, mut rule) = c.clone().into_parts();
    let mut added = Vec::with_capacity(ids.len());
    for (row, entries) in ids.rows.iter().enumerate() {
        if entries.len() != ids.generators.len() {
            return Err(Error::DimensionMismatch {
                expected: ids.generators.len(),
                found: entries.len(),
            });
        }
        let combination = ids.combination(row);
        if combination.is_zero() || !apply_delta(c, &combination).is_zero() {
            return Err(Error::StaleIdentity {
                level: ids.level,
                row,
            });
        }
        let mut support = ids
            .generators
            .iter()
            .zip(entries)
            .filter(|(_, r)| !r.is_zero())
            .map(|(&g, _)| (c.table().generator(g).weight, c.table().generator(g).parity));
        let (weight, parity) = support.next().expect("nonzero combination");
        if support.any(|s| s != (weight, parity)) {
            return Err(Error::InhomogeneousIdentity { row });
        }

        let mut name = format!("{name_prefix}{}_{row}", ids.level + 1);
        while table.contains_name(&name) {
            name.push('\'');
        }
        let id = table.add(name, ids.level + 1, parity.flip(), weight)?;
        rule.set(id, combination);
        added.push(id);
    }
    let augmented = Complex::new(table, rule)?;
    if let Nilpotency::Counterexample { generator, .. } = check_nilpotent(&augmented) {
        return Err(Error::NotNilpotent {
            generator: augmented.table().generator(generator).name.clone(),
        });
    }
    Ok((added, augmented))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentationRound {
    /// Level of the identities; the new generators sit one level higher.
    pub level: i32,
    pub added: Vec<Generator>,
    pub identities: IdentitySet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugmentationReport {
    pub rounds: Vec<AugmentationRound>,
    /// `true` iff the search ran out of identities before `max_level`.
    pub terminated: bool,
}

impl AugmentationReport {
    pub fn added_count(&self) -> usize {
        self.rounds.iter().map(|r| r.added.len()).sum()
    }
}

pub const DEFAULT_PREFIX: &str = "theta";

/// [`resolve_with_prefix`] with the default name prefix.
pub fn resolve(c: &Complex, max_level: i32) -> Result<(Complex, AugmentationReport)> {
    resolve_with_prefix(c, max_level, DEFAULT_PREFIX)
}

/// Augments `c` until no identities remain.
///
/// Ghost levels (negative antifield number) are swept first, bottom-up;
/// level 0 is never touched since its cohomology is the function algebra
/// of the solution space. Positive levels are then processed from 1
/// upwards. No generator is created above `max_level`; if one would be
/// needed the report says `terminated == false`.
pub fn resolve_with_prefix(
    c: &Complex,
    max_level: i32,
    name_prefix: &str,
) -> Result<(Complex, AugmentationReport)> {
    if let Nilpotency::Counterexample { generator, .. } = check_nilpotent(c) {
        return Err(Error::NotNilpotent {
            generator: c.table().generator(generator).name.clone(),
        });
    }
    let mut current = c.clone();
    let mut report = AugmentationReport::default();

    let bottom = current.table().antifield_range().0;
    for level in bottom..0 {
        let ids = find_identities(&current, level)?;
        if !ids.is_empty() {
            current = record_round(&current, ids, name_prefix, &mut report)?;
        }
    }

    let mut level = 1;
    loop {
        let ids = find_identities(&current, level)?;
        if ids.is_empty() {
            if level >= current.table().antifield_range().1 {
                report.terminated = true;
                break;
            }
        } else if level + 1 > max_level {
            break;
        } else {
            current = record_round(&current, ids, name_prefix, &mut report)?;
        }
        level += 1;
    }
    Ok((current, report))
}

fn record_round(
    c: &Complex,
    ids: IdentitySet,
    prefix: &str,
    report: &mut AugmentationReport,
) -> Result<Complex> {
    let (added, next) = augment_inner(c, &ids, prefix)?;
    report.rounds.push(AugmentationRound {
        level: ids.level,
        added: added
            .iter()
            .map(|&g| next.table().generator(g).clone())
            .collect(),
        identities: ids,
    });
    Ok(next)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    /// Blocks with `n ≠ 0` and nonzero cohomology.
    pub offending: Vec<CohomologyRow>,
    /// `dim H(0, 0)`: the constants, reported on their own.
    pub constants: usize,
}

/// Checks `H(n, d) = 0` for `1 ≤ n ≤ max_n` and for every negative `n` the
/// generators can reach, over `0 ≤ d ≤ max_d`.
pub fn verify_acyclic(c: &Complex, max_n: i32, max_d: u32) -> Result<AcyclicityReport> {
    let (lowest, _) = grading_window(c, max_d);
    let table = cohomology_table_from(c, lowest, max_n, max_d)?;
    let offending: Vec<CohomologyRow> = table
        .iter()
        .filter(|r| r.antifield_number != 0 && r.dim_h > 0)
        .copied()
        .collect();
    let constants = table
        .iter()
        .find(|r| r.antifield_number == 0 && r.weight == 0)
        .map_or(0, |r| r.dim_h);
    Ok(AcyclicityReport {
        acyclic: offending.is_empty(),
        offending,
        constants,
    })
}

fn cohomology_table_from(
    c: &Complex,
    lo: i32,
    max_n: i32,
    max_d: u32,
) -> Result<Vec<CohomologyRow>> {
    let mut rows = cohomology_table(c, max_n, max_d, false)?.rows;
    let start = c.table().antifield_range().0.min(0);
    for n in lo..start {
        for d in 0..=max_d {
            let block = crate::complex::cohomology(c, n, d, false)?;
            if block.row.dim_chain > 0 {
                rows.push(block.row);
            }
        }
    }
    rows.sort();
    Ok(rows)
}

/// Short human-readable description of a generator, e.g. `theta2_0 (boson, n=2, w=1)`.
pub fn describe(g: &Generator) -> String {
    let p = match g.parity {
        Parity::Bosonic => "boson",
        Parity::Fermionic => "fermion",
    };
    format!("{} ({p}, n={}, w={})", g.name, g.antifield_number, g.weight)
}
