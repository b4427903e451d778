use std::collections::BTreeSet;

use ktres_core::algebra::{
    enumerate_basis, normalize, GenId, GeneratorTable, Monomial, Parity, Polynomial,
};
use ktres_core::complex::apply_delta;
use ktres_core::linalg::rat;
use ktres_core::models::{build_oscillator, build_scalar2d, ScalarTower};
use proptest::prelude::*;

fn table() -> impl Strategy<Value = GeneratorTable> {
    prop::collection::vec((-1i32..=3, any::<bool>(), 1u32..=2), 1..=5).prop_map(|gens| {
        let mut t = GeneratorTable::new();
        for (i, (n, odd, w)) in gens.into_iter().enumerate() {
            let parity = if odd {
                Parity::Fermionic
            } else {
                Parity::Bosonic
            };
            t.add(format!("g{i}"), n, parity, w).unwrap();
        }
        t
    })
}

/// Every exponent vector with total weight `d`, filtered by antifield
/// number; fermions capped at exponent 1.
fn brute_basis(t: &GeneratorTable, n: i32, d: u32) -> BTreeSet<Vec<(GenId, u32)>> {
    let mut out = BTreeSet::new();
    let k = t.len();
    let mut exps = vec![0u32; k];
    loop {
        let weight: u32 = (0..k).map(|i| exps[i] * t.generator(i).weight).sum();
        let level: i32 = (0..k)
            .map(|i| exps[i] as i32 * t.generator(i).antifield_number)
            .sum();
        let ok_fermions = (0..k).all(|i| !t.is_fermionic(i) || exps[i] <= 1);
        if weight == d && level == n && ok_fermions {
            out.insert(
                (0..k)
                    .filter(|&i| exps[i] > 0)
                    .map(|i| (i, exps[i]))
                    .collect(),
            );
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            exps[i] += 1;
            if exps[i] <= d {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Sign of sorting a word by adjacent transpositions, counting a minus
/// for every swap of two fermions; `None` if a fermion repeats.
fn bubble_sign(t: &GeneratorTable, ids: &[GenId]) -> Option<bool> {
    let mut w = ids.to_vec();
    let mut negative = false;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if t.is_fermionic(w[j]) && t.is_fermionic(w[j + 1]) {
                    negative = !negative;
                }
                w.swap(j, j + 1);
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && t.is_fermionic(p[0])) {
        return None;
    }
    Some(negative)
}

fn word(t: &GeneratorTable, raw: &[usize]) -> Vec<GenId> {
    raw.iter().map(|&x| x % t.len()).collect()
}

/// Random combination of basis monomials of one parity.
fn random_poly(t: &GeneratorTable, n: i32, d: u32, picks: &[(usize, i64)]) -> Polynomial {
    let mut basis = enumerate_basis(t, n, d);
    if let Some(first) = basis.first() {
        let parity = first.parity(t);
        basis.retain(|m| m.parity(t) == parity);
    }
    let mut p = Polynomial::zero();
    if basis.is_empty() {
        return p;
    }
    for &(i, c) in picks {
        p.add_term(rat(c), basis[i % basis.len()].clone());
    }
    p
}

fn is_odd(t: &GeneratorTable, p: &Polynomial) -> bool {
    p.homogeneous_degree(t)
        .is_some_and(|(_, _, parity)| parity == Parity::Fermionic)
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..64, -3i64..=3), 0..4)
}

proptest! {
    #[test]
    fn basis_matches_brute_force(t in table(), n in -2i32..=4, d in 0u32..=3) {
        let got: BTreeSet<Vec<(GenId, u32)>> = enumerate_basis(&t, n, d)
            .into_iter()
            .map(|m| m.factors().to_vec())
            .collect();
        prop_assert_eq!(got, brute_basis(&t, n, d));
    }

    #[test]
    fn basis_is_closed_under_grading(t in table(), n in -2i32..=4, d in 0u32..=3) {
        let basis = enumerate_basis(&t, n, d);
        for w in basis.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for m in &basis {
            prop_assert_eq!(m.antifield_number(&t), n);
            prop_assert_eq!(m.weight(&t), d);
        }
    }

    #[test]
    fn normalize_agrees_with_bubble_sort(t in table(), raw in prop::collection::vec(0usize..8, 0..7)) {
        let ids = word(&t, &raw);
        let got = normalize(&t, &ids).unwrap().map(|(s, _)| s);
        prop_assert_eq!(got, bubble_sign(&t, &ids));
    }

    #[test]
    fn normalize_is_stable(t in table(), raw in prop::collection::vec(0usize..8, 0..7)) {
        let ids = word(&t, &raw);
        if let Some((_, m)) = normalize(&t, &ids).unwrap() {
            let expanded: Vec<GenId> = m
                .factors()
                .iter()
                .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
                .collect();
            prop_assert_eq!(normalize(&t, &expanded).unwrap(), Some((false, m)));
        }
    }

    #[test]
    fn monomial_product_matches_normalize(t in table(), a in prop::collection::vec(0usize..8, 0..4), b in prop::collection::vec(0usize..8, 0..4)) {
        let (a, b) = (word(&t, &a), word(&t, &b));
        let Some((sa, ma)) = normalize(&t, &a).unwrap() else { return Ok(()) };
        let Some((sb, mb)) = normalize(&t, &b).unwrap() else { return Ok(()) };
        let joined: Vec<GenId> = a.iter().chain(&b).copied().collect();
        let expected = normalize(&t, &joined).unwrap().map(|(s, m)| (s ^ sa ^ sb, m));
        prop_assert_eq!(ma.mul(&mb, &t), expected);
    }

    #[test]
    fn product_is_associative_and_supercommutative(
        t in table(),
        degs in prop::collection::vec((-1i32..=3, 1u32..=2), 3),
        pa in picks(), pb in picks(), pc in picks(),
    ) {
        let a = random_poly(&t, degs[0].0, degs[0].1, &pa);
        let b = random_poly(&t, degs[1].0, degs[1].1, &pb);
        let c = random_poly(&t, degs[2].0, degs[2].1, &pc);
        prop_assert_eq!(a.mul(&b, &t).mul(&c, &t), a.mul(&b.mul(&c, &t), &t));
        let sign = if is_odd(&t, &a) && is_odd(&t, &b) { -1 } else { 1 };
        prop_assert_eq!(a.mul(&b, &t), b.mul(&a, &t).scale(&rat(sign)));
        prop_assert_eq!(a.mul(&Polynomial::one(), &t), a.clone());
    }

    #[test]
    fn delta_is_a_graded_derivation(
        which in 0usize..2,
        degs in prop::collection::vec((-1i32..=3, 1u32..=2), 2),
        pa in picks(), pb in picks(),
    ) {
        let c = if which == 0 {
            build_oscillator((-2, 2), 1, true).unwrap()
        } else {
            build_scalar2d(2, ScalarTower::Full).unwrap()
        };
        let t = c.table();
        let a = random_poly(t, degs[0].0, degs[0].1, &pa);
        let b = random_poly(t, degs[1].0, degs[1].1, &pb);
        let lhs = apply_delta(&c, &a.mul(&b, t));
        let sa = if is_odd(t, &a) { -1 } else { 1 };
        let rhs = apply_delta(&c, &a)
            .mul(&b, t)
            .add(&a.mul(&apply_delta(&c, &b), t).scale(&rat(sa)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(apply_delta(&c, &apply_delta(&c, &a)).is_zero());
    }
}

#[test]
fn monomial_identity() {
    let mut t = GeneratorTable::new();
    let x = t.add("x", 0, Parity::Bosonic, 1).unwrap();
    let one = Monomial::one();
    let mx = Monomial::generator(x);
    assert_eq!(one.mul(&mx, &t), Some((false, mx.clone())));
    assert!(one.is_one());
    assert_eq!(mx.degree(), 1);
}
