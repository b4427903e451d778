//! Free graded-supercommutative algebra over the rationals.
//!
//! Generators carry an antifield number, a Grassmann parity and a weight.
//! Monomials are stored in canonical order (increasing generator id), and
//! every sign is taken relative to that order.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub type GenId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Bosonic,
    Fermionic,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Bosonic => Parity::Fermionic,
            Parity::Fermionic => Parity::Bosonic,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Fermionic
    }

    fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Fermionic
        } else {
            Parity::Bosonic
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
    pub antifield_number: i32,
    pub parity: Parity,
    pub weight: u32,
}

/// Generators in creation order, with name lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorTable {
    generators: Vec<Generator>,
    by_name: BTreeMap<String, GenId>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a generator and returns its id.
    pub fn add(
        &mut self,
        name: impl Into<String>,
        antifield_number: i32,
        parity: Parity,
        weight: u32,
    ) -> Result<GenId> {
        let name = name.into();
        if weight == 0 {
            return Err(Error::InvalidWeight(name));
        }
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let id = self.generators.len();
        self.by_name.insert(name.clone(), id);
        self.generators.push(Generator {
            id,
            name,
            antifield_number,
            parity,
            weight,
        });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, id: GenId) -> Result<&Generator> {
        self.generators.get(id).ok_or(Error::UnknownGenerator(id))
    }

    /// Panicking accessor for ids already validated.
    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id]
    }

    pub fn id_of(&self, name: &str) -> Result<GenId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Generator> {
        self.generators.iter()
    }

    pub fn is_fermionic(&self, id: GenId) -> bool {
        self.generators[id].parity.is_odd()
    }

    /// Smallest and largest antifield number over all generators, `(0, 0)`
    /// when empty.
    pub fn antifield_range(&self) -> (i32, i32) {
        self.iter().fold((0, 0), |(lo, hi), g| {
            (lo.min(g.antifield_number), hi.max(g.antifield_number))
        })
    }
}

/// A product of generators in canonical order.
///
/// Monomials are ordered lexicographically by their expanded id sequence,
/// so `x² < xy < y²` when `x` precedes `y`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(GenId, u32)>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.factors, &other.factors);
        for i in 0.. {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(ia, ea)), Some(&(ib, eb))) => {
                    if ia != ib {
                        return ia.cmp(&ib);
                    }
                    if ea != eb {
                        // the side with fewer copies continues with a larger id or ends
                        let (shorter, flip) = if ea < eb { (a, false) } else { (b, true) };
                        let ord = if shorter.get(i + 1).is_some() {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                        return if flip { ord.reverse() } else { ord };
                    }
                }
            }
        }
        unreachable!()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(id: GenId) -> Self {
        Monomial {
            factors: alloc::vec![(id, 1)],
        }
    }

    /// Builds a monomial from `(id, exponent)` pairs that are already in
    /// canonical order. Zero exponents are dropped.
    pub fn from_sorted(table: &GeneratorTable, factors: Vec<(GenId, u32)>) -> Result<Self> {
        let mut out: Vec<(GenId, u32)> = Vec::with_capacity(factors.len());
        for (id, e) in factors {
            let g = table.get(id)?;
            if e == 0 {
                continue;
            }
            if let Some(&(prev, _)) = out.last() {
                if prev >= id {
                    return Err(Error::GradingViolation {
                        generator: g.name.clone(),
                        reason: "monomial factors are not in canonical order".to_string(),
                    });
                }
            }
            if g.parity.is_odd() && e > 1 {
                return Err(Error::GradingViolation {
                    generator: g.name.clone(),
                    reason: "fermionic generator with exponent > 1".to_string(),
                });
            }
            out.push((id, e));
        }
        Ok(Monomial { factors: out })
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total polynomial degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn antifield_number(&self, table: &GeneratorTable) -> i32 {
        self.factors
            .iter()
            .map(|&(id, e)| table.generator(id).antifield_number * e as i32)
            .sum()
    }

    pub fn weight(&self, table: &GeneratorTable) -> u32 {
        self.factors
            .iter()
            .map(|&(id, e)| table.generator(id).weight * e)
            .sum()
    }

    pub fn parity(&self, table: &GeneratorTable) -> Parity {
        let odd = self
            .factors
            .iter()
            .filter(|&&(id, _)| table.is_fermionic(id))
            .count();
        Parity::from_odd(odd % 2 == 1)
    }

    /// Multiplies two monomials; `None` when a fermion would repeat.
    pub fn mul(&self, other: &Monomial, table: &GeneratorTable) -> Option<(bool, Monomial)> {
        // Moving each fermion of `other` left past the larger-id fermions
        // of `self` costs one sign per crossing.
        let mut negative = false;
        let mut merged = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let mut odd_remaining_in_self = self
            .factors
            .iter()
            .filter(|&&(id, _)| table.is_fermionic(id))
            .count();
        while i < self.factors.len() || j < other.factors.len() {
            let take_self = match (self.factors.get(i), other.factors.get(j)) {
                (Some(a), Some(b)) => a.0 <= b.0,
                (Some(_), None) => true,
                _ => false,
            };
            if take_self {
                let (id, e) = self.factors[i];
                if let Some(&(bid, be)) = other.factors.get(j) {
                    if bid == id {
                        if table.is_fermionic(id) {
                            return None;
                        }
                        merged.push((id, e + be));
                        i += 1;
                        j += 1;
                        continue;
                    }
                }
                if table.is_fermionic(id) {
                    odd_remaining_in_self -= 1;
                }
                merged.push((id, e));
                i += 1;
            } else {
                let (id, e) = other.factors[j];
                if table.is_fermionic(id) && odd_remaining_in_self % 2 == 1 {
                    negative = !negative;
                }
                merged.push((id, e));
                j += 1;
            }
        }
        Some((negative, Monomial { factors: merged }))
    }

    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, table }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    table: &'a GeneratorTable,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        for (i, &(id, e)) in self.mono.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            f.write_str(&self.table.generator(id).name)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sorts a product of generators into canonical order.
///
/// Returns `Ok(None)` when the product vanishes because a fermionic
/// generator repeats; otherwise the sign (`true` for −1) picked up by
/// transposing fermions, and the canonical monomial.
pub fn normalize(table: &GeneratorTable, ids: &[GenId]) -> Result<Option<(bool, Monomial)>> {
    for &id in ids {
        table.get(id)?;
    }
    let fermions: Vec<GenId> = ids
        .iter()
        .copied()
        .filter(|&id| table.is_fermionic(id))
        .collect();
    let mut negative = false;
    for (i, a) in fermions.iter().enumerate() {
        for b in &fermions[i + 1..] {
            if a == b {
                return Ok(None);
            }
            if a > b {
                negative = !negative;
            }
        }
    }
    let mut counts: BTreeMap<GenId, u32> = BTreeMap::new();
    for &id in ids {
        *counts.entry(id).or_insert(0) += 1;
    }
    Ok(Some((
        negative,
        Monomial {
            factors: counts.into_iter().collect(),
        },
    )))
}

/// Finite rational combination of monomials. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn generator(id: GenId) -> Self {
        Self::term(Rational::one(), Monomial::generator(id))
    }

    pub fn term(coeff: Rational, mono: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, mono);
        p
    }

    /// Sum of `coefficient · generator` for linear combinations.
    pub fn linear(terms: impl IntoIterator<Item = (Rational, GenId)>) -> Self {
        let mut p = Self::zero();
        for (c, id) in terms {
            p.add_term(c, Monomial::generator(id));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, coeff: Rational, mono: Monomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, factor: &Rational, other: &Polynomial) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(factor * c, m.clone());
        }
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_scaled(factor, self);
        p
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_scaled(&Rational::one(), other);
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_scaled(&-Rational::one(), other);
        p
    }

    /// Graded product; signs follow the canonical generator order.
    pub fn mul(&self, other: &Polynomial, table: &GeneratorTable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((negative, m)) = a.mul(b, table) {
                    let c = ca * cb;
                    out.add_term(if negative { -c } else { c }, m);
                }
            }
        }
        out
    }

    /// `(antifield number, weight, parity)` when every term agrees.
    pub fn homogeneous_degree(&self, table: &GeneratorTable) -> Option<(i32, u32, Parity)> {
        let mut iter = self.terms.keys();
        let first = iter.next()?;
        let deg = (
            first.antifield_number(table),
            first.weight(table),
            first.parity(table),
        );
        iter.all(|m| (m.antifield_number(table), m.weight(table), m.parity(table)) == deg)
            .then_some(deg)
    }

    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> PolynomialDisplay<'a> {
        PolynomialDisplay { poly: self, table }
    }
}

/// Bilinear graded product, see [`Polynomial::mul`].
pub fn multiply(table: &GeneratorTable, p: &Polynomial, q: &Polynomial) -> Polynomial {
    p.mul(q, table)
}

pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    table: &'a GeneratorTable,
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", m.display(self.table))?;
            } else {
                write!(f, "{mag}·{}", m.display(self.table))?;
            }
        }
        Ok(())
    }
}

/// All monomials of total antifield number `antifield_number` and total
/// weight `weight`, in canonical (sorted) order.
pub fn enumerate_basis(
    table: &GeneratorTable,
    antifield_number: i32,
    weight: u32,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    enumerate_from(table, 0, antifield_number, weight, &mut stack, &mut out);
    out.sort();
    out
}

fn enumerate_from(
    table: &GeneratorTable,
    start: GenId,
    antifield_left: i32,
    weight_left: u32,
    stack: &mut Vec<(GenId, u32)>,
    out: &mut Vec<Monomial>,
) {
    if weight_left == 0 {
        if antifield_left == 0 {
            out.push(Monomial {
                factors: stack.clone(),
            });
        }
        return;
    }
    for id in start..table.len() {
        let g = table.generator(id);
        if g.weight > weight_left {
            continue;
        }
        let max_exp = if g.parity.is_odd() {
            1
        } else {
            weight_left / g.weight
        };
        for e in 1..=max_exp {
            stack.push((id, e));
            enumerate_from(
                table,
                id + 1,
                antifield_left - g.antifield_number * e as i32,
                weight_left - g.weight * e,
                stack,
                out,
            );
            stack.pop();
        }
    }
}
