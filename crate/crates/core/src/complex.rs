//! Koszul–Tate / BV complexes: the differential as an odd derivation,
//! per-block matrices and exact cohomology.
//!
//! The differential lowers antifield number by one and preserves weight,
//! so the algebra splits into finite blocks indexed by
//! `(antifield number, weight)`. Cohomology is computed block by block.
//! Inside a block, monomials are further grouped by how much weight they
//! carry in each connected component of the generator graph (edges join a
//! generator to every generator occurring in its differential); the
//! differential preserves this finer grading, so the block matrix is
//! block-diagonal and each piece is reduced on its own.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{enumerate_basis, GenId, Generator, GeneratorTable, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, quotient_basis, rank, Matrix, Rational};

/// Images of generators under the differential. Absent generators map to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialRule {
    image: BTreeMap<GenId, Polynomial>,
}

impl DifferentialRule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `δ(generator) = image`; a zero image removes the entry.
    pub fn set(&mut self, generator: GenId, image: Polynomial) {
        if image.is_zero() {
            self.image.remove(&generator);
        } else {
            self.image.insert(generator, image);
        }
    }

    pub fn get(&self, generator: GenId) -> Option<&Polynomial> {
        self.image.get(&generator)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenId, &Polynomial)> {
        self.image.iter().map(|(&g, p)| (g, p))
    }
}

/// A generator table together with a grading-compatible differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    table: GeneratorTable,
    delta: DifferentialRule,
}

impl Complex {
    /// Checks the grading constraints of every differential entry.
    pub fn new(table: GeneratorTable, delta: DifferentialRule) -> Result<Self> {
        for (id, image) in delta.iter() {
            let g = table.get(id)?;
            check_grading(&table, g, image)?;
        }
        Ok(Complex { table, delta })
    }

    pub fn empty() -> Self {
        Complex {
            table: GeneratorTable::new(),
            delta: DifferentialRule::new(),
        }
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn delta(&self) -> &DifferentialRule {
        &self.delta
    }

    pub fn into_parts(self) -> (GeneratorTable, DifferentialRule) {
        (self.table, self.delta)
    }

    /// `δ` of a single generator.
    pub fn delta_of(&self, id: GenId) -> Polynomial {
        self.delta.get(id).cloned().unwrap_or_default()
    }
}

fn check_grading(table: &GeneratorTable, g: &Generator, image: &Polynomial) -> Result<()> {
    let violation = |reason: alloc::string::String| Error::GradingViolation {
        generator: g.name.clone(),
        reason,
    };
    for (m, _) in image.terms() {
        for &(id, _) in m.factors() {
            table.get(id)?;
        }
        let n = m.antifield_number(table);
        if n != g.antifield_number - 1 {
            return Err(violation(alloc::format!(
                "term `{}` has antifield number {n}, expected {}",
                m.display(table),
                g.antifield_number - 1
            )));
        }
        let w = m.weight(table);
        if w != g.weight {
            return Err(violation(alloc::format!(
                "term `{}` has weight {w}, expected {}",
                m.display(table),
                g.weight
            )));
        }
        if m.parity(table) == g.parity {
            return Err(violation(alloc::format!(
                "term `{}` has the same parity as the generator",
                m.display(table)
            )));
        }
    }
    Ok(())
}

/// Applies the differential as an odd derivation:
/// `δ(ab) = δ(a)b + (−1)^{|a|} a δ(b)`.
pub fn apply_delta(c: &Complex, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, coeff) in p.terms() {
        let d = delta_monomial(c, m);
        out.add_scaled(coeff, &d);
    }
    out
}

fn delta_monomial(c: &Complex, m: &Monomial) -> Polynomial {
    let table = &c.table;
    let factors = m.factors();
    let mut out = Polynomial::zero();
    let mut prefix_odd = false;
    for (pos, &(id, exp)) in factors.iter().enumerate() {
        if let Some(dg) = c.delta.get(id) {
            let prefix = Monomial::from_sorted(table, factors[..pos].to_vec())
                .expect("sub-monomial of a canonical monomial");
            let mut rest_factors = Vec::with_capacity(factors.len() - pos);
            if exp > 1 {
                rest_factors.push((id, exp - 1));
            }
            rest_factors.extend_from_slice(&factors[pos + 1..]);
            let rest = Monomial::from_sorted(table, rest_factors)
                .expect("sub-monomial of a canonical monomial");
            let left = Polynomial::term(Rational::from_integer(exp.into()), prefix);
            let right = Polynomial::term(Rational::from_integer(1.into()), rest);
            let mut term = left.mul(&dg.mul(&right, table), table);
            if prefix_odd {
                term = term.scale(&-Rational::from_integer(1.into()));
            }
            out.add_scaled(&Rational::from_integer(1.into()), &term);
        }
        if table.is_fermionic(id) && exp % 2 == 1 {
            prefix_odd = !prefix_odd;
        }
    }
    out
}

/// Outcome of [`check_nilpotent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Ok,
    Counterexample {
        generator: GenId,
        residual: Polynomial,
    },
}

impl Nilpotency {
    pub fn is_ok(&self) -> bool {
        matches!(self, Nilpotency::Ok)
    }
}

/// Verifies `δ(δ(g)) = 0` on every generator, which by the derivation
/// property gives `δ² = 0` on the whole algebra.
pub fn check_nilpotent(c: &Complex) -> Nilpotency {
    for (id, image) in c.delta.iter() {
        let residual = apply_delta(c, image);
        if !residual.is_zero() {
            return Nilpotency::Counterexample {
                generator: id,
                residual,
            };
        }
    }
    Nilpotency::Ok
}

fn require_nilpotent(c: &Complex) -> Result<()> {
    match check_nilpotent(c) {
        Nilpotency::Ok => Ok(()),
        Nilpotency::Counterexample { generator, .. } => Err(Error::NotNilpotent {
            generator: c.table.generator(generator).name.clone(),
        }),
    }
}

fn index_of(basis: &[Monomial]) -> BTreeMap<&Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Matrix of `δ` from the `(n, d)` block to the `(n−1, d)` block. Columns
/// follow `enumerate_basis(n, d)`, rows follow `enumerate_basis(n−1, d)`.
pub fn block_matrix(c: &Complex, antifield_number: i32, weight: u32) -> Matrix {
    let source = enumerate_basis(&c.table, antifield_number, weight);
    let target = enumerate_basis(&c.table, antifield_number - 1, weight);
    matrix_between(c, &source, &target)
}

fn matrix_between(c: &Complex, source: &[Monomial], target: &[Monomial]) -> Matrix {
    let rows = index_of(target);
    let mut m = Matrix::zeros(target.len(), source.len());
    for (col, mono) in source.iter().enumerate() {
        for (t, coeff) in delta_monomial(c, mono).terms() {
            let row = rows[t];
            m[(row, col)] = coeff.clone();
        }
    }
    m
}

/// One line of a cohomology table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CohomologyRow {
    pub antifield_number: i32,
    pub weight: u32,
    pub dim_chain: usize,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub dim_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBlock {
    pub row: CohomologyRow,
    /// Cocycles spanning a canonical complement of the image inside the
    /// kernel, ordered by leading monomial.
    pub representatives: Option<Vec<Polynomial>>,
}

/// Connected components of the generator graph.
struct Components {
    of: Vec<usize>,
}

/// Basis positions grouped by per-component weight signature.
type Groups<'a> = BTreeMap<Vec<(usize, u32)>, Vec<(usize, &'a Monomial)>>;

impl Components {
    fn new(c: &Complex) -> Self {
        let n = c.table.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (g, image) in c.delta.iter() {
            for (m, _) in image.terms() {
                for &(h, _) in m.factors() {
                    let (a, b) = (find(&mut parent, g), find(&mut parent, h));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let of = (0..n).map(|x| find(&mut parent, x)).collect();
        Components { of }
    }

    fn signature(&self, table: &GeneratorTable, m: &Monomial) -> Vec<(usize, u32)> {
        let mut sig: BTreeMap<usize, u32> = BTreeMap::new();
        for &(id, e) in m.factors() {
            *sig.entry(self.of[id]).or_insert(0) += table.generator(id).weight * e;
        }
        sig.into_iter().collect()
    }

    fn group<'a>(&self, table: &GeneratorTable, basis: &'a [Monomial]) -> Groups<'a> {
        let mut groups: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for (i, m) in basis.iter().enumerate() {
            groups
                .entry(self.signature(table, m))
                .or_default()
                .push((i, m));
        }
        groups
    }
}

/// Cohomology of the `(n, d)` block.
pub fn cohomology(
    c: &Complex,
    antifield_number: i32,
    weight: u32,
    want_representatives: bool,
) -> Result<CohomologyBlock> {
    require_nilpotent(c)?;
    let comps = Components::new(c);
    block_cohomology(c, &comps, antifield_number, weight, want_representatives)
}

fn block_cohomology(
    c: &Complex,
    comps: &Components,
    n: i32,
    d: u32,
    want_representatives: bool,
) -> Result<CohomologyBlock> {
    let table = &c.table;
    let here = enumerate_basis(table, n, d);
    let below = enumerate_basis(table, n - 1, d);
    let above = enumerate_basis(table, n + 1, d);
    let here_groups = comps.group(table, &here);
    let mut below_groups = comps.group(table, &below);
    let mut above_groups = comps.group(table, &above);

    let mut dim_kernel = 0;
    let mut dim_image = 0;
    let mut reps: Vec<(usize, Polynomial)> = Vec::new();

    for (sig, members) in &here_groups {
        let local: Vec<Monomial> = members.iter().map(|(_, m)| (*m).clone()).collect();
        let below_local: Vec<Monomial> = below_groups
            .remove(sig)
            .unwrap_or_default()
            .into_iter()
            .map(|(_, m)| m.clone())
            .collect();
        let above_local: Vec<Monomial> = above_groups
            .remove(sig)
            .unwrap_or_default()
            .into_iter()
            .map(|(_, m)| m.clone())
            .collect();

        let outgoing = matrix_between(c, &local, &below_local);
        let incoming = matrix_between(c, &above_local, &local);
        if !outgoing.mul(&incoming)?.is_zero() {
            return Err(Error::ImageNotInKernel {
                antifield_number: n,
                weight: d,
            });
        }
        let kernel = kernel_basis(&outgoing);
        let image_rank = rank(&incoming);
        dim_kernel += kernel.len();
        dim_image += image_rank;

        if want_representatives && kernel.len() > image_rank {
            let image: Vec<Vec<Rational>> =
                (0..incoming.cols()).map(|j| incoming.column(j)).collect();
            for v in quotient_basis(local.len(), &kernel, &image)? {
                let lead = v.iter().position(|x| !x.is_zero()).expect("nonzero row");
                let mut p = Polynomial::zero();
                for (x, m) in v.into_iter().zip(&local) {
                    p.add_term(x, m.clone());
                }
                reps.push((members[lead].0, p));
            }
        }
    }

    let dim_h = dim_kernel - dim_image;
    reps.sort_by_key(|(lead, _)| *lead);
    Ok(CohomologyBlock {
        row: CohomologyRow {
            antifield_number: n,
            weight: d,
            dim_chain: here.len(),
            dim_kernel,
            dim_image,
            dim_h,
        },
        representatives: want_representatives.then(|| reps.into_iter().map(|(_, p)| p).collect()),
    })
}

/// Cohomology rows for every nonempty block with `lo ≤ n ≤ max_n` and
/// `0 ≤ d ≤ max_d`, where `lo` is the smallest generator antifield number
/// (0 without ghosts). Rows are ordered by `(n, d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    pub rows: Vec<CohomologyRow>,
    pub representatives: BTreeMap<(i32, u32), Vec<Polynomial>>,
}

impl CohomologyTable {
    pub fn get(&self, antifield_number: i32, weight: u32) -> Option<&CohomologyRow> {
        self.rows
            .iter()
            .find(|r| r.antifield_number == antifield_number && r.weight == weight)
    }

    /// `dim H(n, d)`, zero for blocks absent from the table.
    pub fn dim_h(&self, antifield_number: i32, weight: u32) -> usize {
        self.get(antifield_number, weight).map_or(0, |r| r.dim_h)
    }
}

pub fn cohomology_table(
    c: &Complex,
    max_n: i32,
    max_d: u32,
    want_representatives: bool,
) -> Result<CohomologyTable> {
    require_nilpotent(c)?;
    let comps = Components::new(c);
    let lo = c.table.antifield_range().0.min(0);
    let mut table = CohomologyTable::default();
    for n in lo..=max_n {
        for d in 0..=max_d {
            let block = block_cohomology(c, &comps, n, d, want_representatives)?;
            if block.row.dim_chain == 0 {
                continue;
            }
            if let Some(reps) = block.representatives {
                if !reps.is_empty() {
                    table.representatives.insert((n, d), reps);
                }
            }
            table.rows.push(block.row);
        }
    }
    Ok(table)
}

/// Range of antifield numbers that can carry weight `d`.
pub fn grading_window(c: &Complex, weight: u32) -> (i32, i32) {
    let (lo, hi) = c.table.antifield_range();
    let w = weight as i32;
    (lo.min(0) * w, hi.max(0) * w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    pub chain_euler: i64,
    pub cohomology_euler: i64,
    pub equal: bool,
}

/// Compares `Σ (−1)^n dim C(n, d)` with `Σ (−1)^n dim H(n, d)` over the
/// antifield range `window` (the automatic [`grading_window`] when `None`).
pub fn euler_check(c: &Complex, weight: u32, window: Option<(i32, i32)>) -> Result<EulerCheck> {
    require_nilpotent(c)?;
    let auto = grading_window(c, weight);
    let (lo, hi) = window.unwrap_or(auto);
    for n in auto.0..=auto.1 {
        if (n < lo || n > hi) && !enumerate_basis(&c.table, n, weight).is_empty() {
            return Err(Error::WindowTooSmall {
                weight,
                antifield_number: n,
            });
        }
    }
    let comps = Components::new(c);
    let (mut chain_euler, mut cohomology_euler) = (0i64, 0i64);
    for n in lo..=hi {
        let block = block_cohomology(c, &comps, n, weight, false)?;
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        chain_euler += sign * block.row.dim_chain as i64;
        cohomology_euler += sign * block.row.dim_h as i64;
    }
    Ok(EulerCheck {
        chain_euler,
        cohomology_euler,
        equal: chain_euler == cohomology_euler,
    })
}

/// Bosonic minus fermionic generator count.
pub fn grassmann_number(c: &Complex) -> i64 {
    c.table
        .iter()
        .map(|g| if g.parity.is_odd() { -1 } else { 1 })
        .sum()
}

/// Coefficient vectors of `δ` restricted to single generators: for each
/// generator at `level`, the coefficients of the linear terms of its image
/// over the generators at `level − 1`.
pub(crate) fn linear_part(c: &Complex, level: i32) -> (Vec<GenId>, Vec<GenId>, Matrix) {
    let sources: Vec<GenId> = ids_at(&c.table, level);
    let targets: Vec<GenId> = ids_at(&c.table, level - 1);
    let col: BTreeMap<GenId, usize> = targets.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut m = Matrix::zeros(sources.len(), targets.len());
    for (r, &g) in sources.iter().enumerate() {
        if let Some(image) = c.delta.get(g) {
            for (mono, coeff) in image.terms() {
                if let [(h, 1)] = mono.factors() {
                    if let Some(&j) = col.get(h) {
                        m[(r, j)] = coeff.clone();
                    }
                }
            }
        }
    }
    (sources, targets, m)
}

pub(crate) fn ids_at(table: &GeneratorTable, level: i32) -> Vec<GenId> {
    table
        .iter()
        .filter(|g| g.antifield_number == level)
        .map(|g| g.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Parity;
    use crate::linalg::rat;
    use alloc::string::ToString;

    /// Oscillator on modes `lo..=hi` built by hand (independent of the
    /// model builders).
    fn oscillator(lo: i64, hi: i64, omega: i64) -> Complex {
        let mut t = GeneratorTable::new();
        let fields: Vec<_> = (lo..=hi)
            .map(|k| {
                t.add(alloc::format!("phi({k})"), 0, Parity::Bosonic, 1)
                    .unwrap()
            })
            .collect();
        let mut rule = DifferentialRule::new();
        for (i, k) in (lo..=hi).enumerate() {
            let a = t
                .add(alloc::format!("phi*({k})"), 1, Parity::Fermionic, 1)
                .unwrap();
            rule.set(
                a,
                Polynomial::linear([(rat(k * k - omega * omega), fields[i])]),
            );
        }
        Complex::new(t, rule).unwrap()
    }

    #[test]
    fn delta_on_off_shell_antifield() {
        let c = oscillator(-2, 2, 1);
        let id = c.table().id_of("phi*(2)").unwrap();
        let out = apply_delta(&c, &Polynomial::generator(id));
        assert_eq!(out.display(c.table()).to_string(), "3·phi(2)");
    }

    #[test]
    fn delta_kills_on_shell_pair() {
        let c = oscillator(-2, 2, 1);
        let t = c.table();
        let p = Polynomial::generator(t.id_of("phi*(1)").unwrap())
            .mul(&Polynomial::generator(t.id_of("phi*(-1)").unwrap()), t);
        assert!(apply_delta(&c, &p).is_zero());
    }

    #[test]
    fn leibniz_sign_on_antifield_pair() {
        // δ(φ*(2)φ*(−2)) = 3φ(2)φ*(−2) − 3φ*(2)φ(−2)
        let c = oscillator(-2, 2, 1);
        let t = c.table();
        let g = |s: &str| Polynomial::generator(t.id_of(s).unwrap());
        let p = g("phi*(2)").mul(&g("phi*(-2)"), t);
        let expected = g("phi(2)")
            .mul(&g("phi*(-2)"), t)
            .scale(&rat(3))
            .sub(&g("phi*(2)").mul(&g("phi(-2)"), t).scale(&rat(3)));
        assert_eq!(apply_delta(&c, &p), expected);
    }

    #[test]
    fn oscillator_is_nilpotent() {
        assert!(check_nilpotent(&oscillator(-2, 2, 1)).is_ok());
    }

    #[test]
    fn corrupted_rule_is_reported() {
        let mut t = GeneratorTable::new();
        let x = t.add("x", 1, Parity::Fermionic, 1).unwrap();
        let y = t.add("y", 2, Parity::Bosonic, 1).unwrap();
        let mut rule = DifferentialRule::new();
        rule.set(y, Polynomial::generator(x));
        // x -> bogus: a fermion at level 0 so the grading is fine but δ² ≠ 0
        let z = t.add("z", 0, Parity::Bosonic, 1).unwrap();
        rule.set(x, Polynomial::generator(z));
        let c = Complex::new(t, rule).unwrap();
        match check_nilpotent(&c) {
            Nilpotency::Counterexample {
                generator,
                residual,
            } => {
                assert_eq!(generator, y);
                assert_eq!(residual, Polynomial::generator(z));
            }
            Nilpotency::Ok => panic!("expected a counterexample"),
        }
        assert!(matches!(
            cohomology(&c, 0, 1, false),
            Err(Error::NotNilpotent { .. })
        ));
    }

    #[test]
    fn grading_violations_are_rejected() {
        let mut t = GeneratorTable::new();
        let f = t.add("f", 0, Parity::Bosonic, 1).unwrap();
        let a = t.add("a", 1, Parity::Fermionic, 1).unwrap();
        let mut rule = DifferentialRule::new();
        rule.set(
            a,
            Polynomial::generator(f).mul(&Polynomial::generator(f), &t),
        );
        let err = Complex::new(t.clone(), rule).unwrap_err();
        assert!(matches!(err, Error::GradingViolation { ref generator, .. } if generator == "a"));

        let mut rule = DifferentialRule::new();
        rule.set(f, Polynomial::generator(a));
        assert!(Complex::new(t, rule).is_err());
    }

    #[test]
    fn block_matrices() {
        let c = oscillator(-2, 2, 1);
        let diag: Vec<_> = [3, 0, -1, 0, 3].iter().map(|&x| rat(x)).collect();
        assert_eq!(block_matrix(&c, 1, 1), Matrix::diagonal(&diag));
        let fields = block_matrix(&c, 0, 1);
        assert_eq!((fields.rows(), fields.cols()), (0, 5));
    }

    #[test]
    fn oscillator_cohomology_pattern() {
        let c = oscillator(-2, 2, 1);
        let t = c.table();
        let h11 = cohomology(&c, 1, 1, true).unwrap();
        assert_eq!(h11.row.dim_h, 2);
        let reps: Vec<_> = h11
            .representatives
            .unwrap()
            .iter()
            .map(|p| p.display(t).to_string())
            .collect();
        assert_eq!(reps, ["phi*(-1)", "phi*(1)"]);

        let h22 = cohomology(&c, 2, 2, true).unwrap();
        assert_eq!(h22.row.dim_h, 1);
        assert_eq!(
            h22.representatives.unwrap()[0].display(t).to_string(),
            "phi*(-1)·phi*(1)"
        );
        // degree-2 monomials in the two on-shell modes
        assert_eq!(cohomology(&c, 0, 2, false).unwrap().row.dim_h, 3);
    }

    #[test]
    fn empty_complex_has_only_constants() {
        let table = cohomology_table(&Complex::empty(), 3, 3, false).unwrap();
        assert_eq!(
            table.rows,
            [CohomologyRow {
                antifield_number: 0,
                weight: 0,
                dim_chain: 1,
                dim_kernel: 1,
                dim_image: 0,
                dim_h: 1
            }]
        );
    }

    #[test]
    fn euler_on_oscillator() {
        let c = oscillator(-2, 2, 1);
        let e = euler_check(&c, 1, None).unwrap();
        assert_eq!((e.chain_euler, e.cohomology_euler), (0, 0));
        assert_eq!(euler_check(&c, 0, None).unwrap().chain_euler, 1);
        assert!(matches!(
            euler_check(&c, 2, Some((0, 1))),
            Err(Error::WindowTooSmall {
                weight: 2,
                antifield_number: 2
            })
        ));
    }

    #[test]
    fn grassmann_counts_generators() {
        assert_eq!(grassmann_number(&oscillator(-2, 2, 1)), 0);
    }

    #[test]
    fn linear_part_of_oscillator() {
        let c = oscillator(-1, 1, 1);
        let (src, tgt, m) = linear_part(&c, 1);
        assert_eq!(src, [3, 4, 5]);
        assert_eq!(tgt, [0, 1, 2]);
        assert_eq!(m, Matrix::diagonal(&[rat(0), rat(-1), rat(0)]));
    }
}
