//! Builders for the concrete systems: the harmonic oscillator on a
//! frequency lattice (with an optional ghost sector), free Maxwell theory
//! on an integer momentum box, the 2D massless scalar in Taylor modes, and
//! random linear systems `A u = 0` of prescribed corank.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{GenId, GeneratorTable, Parity, Polynomial};
use crate::complex::{Complex, DifferentialRule};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, rat, Matrix};

/// Which tower of higher antifields to include in the 2D scalar model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarTower {
    /// Fields and first-order antifields only.
    Naive,
    /// Adds `θ_m`, `θ̄_n` but not `χ`.
    Thetas,
    /// Adds `θ_m`, `θ̄_n` and `χ`.
    Full,
}

/// Parameters of a built-in model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModelSpec {
    Oscillator {
        modes: (i64, i64),
        omega: i64,
        ghosts: bool,
    },
    /// Every momentum in `[-radius, radius]^4`.
    Maxwell {
        radius: i64,
    },
    /// A single momentum block.
    MaxwellBlock {
        k: [i64; 4],
        thetas: bool,
    },
    Scalar2d {
        order: u32,
        tower: ScalarTower,
    },
    RandomLinear {
        n: usize,
        p: usize,
        seed: u64,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Complex> {
        match *self {
            ModelSpec::Oscillator {
                modes,
                omega,
                ghosts,
            } => build_oscillator(modes, omega, ghosts),
            ModelSpec::Maxwell { radius } => build_maxwell(radius),
            ModelSpec::MaxwellBlock { k, thetas } => build_maxwell_block(k, thetas),
            ModelSpec::Scalar2d { order, tower } => build_scalar2d(order, tower),
            ModelSpec::RandomLinear { n, p, seed } => {
                build_random_linear(n, p, seed).map(|(c, _)| c)
            }
        }
    }
}

/// Harmonic oscillator with `δφ̂*(k) = (k² − ω²) φ̂(k)` for integer modes
/// `lo..=hi`.
///
/// With `ghosts`, fermionic ghosts `c(±ω)` at antifield number −1 are
/// added together with `δφ̂(±ω) = c(±ω)`, and the second-order antifields
/// `θ(±ω)` with `δθ(±ω) = φ̂*(±ω)` are included as well.
pub fn build_oscillator(modes: (i64, i64), omega: i64, ghosts: bool) -> Result<Complex> {
    let (lo, hi) = modes;
    if omega == 0 {
        return Err(Error::InvalidModel("omega must be nonzero".to_string()));
    }
    if lo > hi || -omega.abs() < lo || omega.abs() > hi {
        return Err(Error::InvalidModel(format!(
            "both ±{} must lie in the mode range {lo}..{hi}",
            omega.abs()
        )));
    }
    let w = omega.abs();
    let mut t = GeneratorTable::new();
    let mut rule = DifferentialRule::new();
    let fields: Vec<GenId> = (lo..=hi)
        .map(|k| t.add(format!("phi({k})"), 0, Parity::Bosonic, 1))
        .collect::<Result<_>>()?;
    let mut antifields = Vec::with_capacity(fields.len());
    for (k, &f) in (lo..=hi).zip(&fields) {
        let a = t.add(format!("phi*({k})"), 1, Parity::Fermionic, 1)?;
        rule.set(a, Polynomial::linear([(rat(k * k - w * w), f)]));
        antifields.push(a);
    }
    if ghosts {
        let index = |k: i64| (k - lo) as usize;
        for k in [-w, w] {
            let c = t.add(format!("c({k})"), -1, Parity::Fermionic, 1)?;
            rule.set(fields[index(k)], Polynomial::generator(c));
        }
        for k in [-w, w] {
            let th = t.add(format!("theta({k})"), 2, Parity::Bosonic, 1)?;
            rule.set(th, Polynomial::generator(antifields[index(k)]));
        }
    }
    Complex::new(t, rule)
}

/// Minkowski metric (+,−,−,−): lowers the index of a contravariant vector.
pub fn lower(k: [i64; 4]) -> [i64; 4] {
    [k[0], -k[1], -k[2], -k[3]]
}

/// Minkowski square `k²`.
pub fn minkowski_square(k: [i64; 4]) -> i64 {
    k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3]
}

pub fn is_lightlike(k: [i64; 4]) -> bool {
    minkowski_square(k) == 0
}

/// Two integer polarisation vectors transverse to a nonzero lightlike `k`:
/// zero time component, spatial parts an integer basis of the plane
/// orthogonal to the spatial part of `k`.
pub fn lightlike_transverse(k: [i64; 4]) -> Result<[[i64; 4]; 2]> {
    if k == [0; 4] || !is_lightlike(k) {
        return Err(Error::NotLightlike(k));
    }
    let basis = spatial_transverse(k).ok_or(Error::NotLightlike(k))?;
    Ok(basis)
}

/// Integer basis of the plane orthogonal to the spatial part of `k`,
/// embedded with zero time component. `None` when the spatial part is 0.
pub fn spatial_transverse(k: [i64; 4]) -> Option<[[i64; 4]; 2]> {
    let s = [k[1], k[2], k[3]];
    if s == [0; 3] {
        return None;
    }
    let kernel = kernel_basis(&Matrix::from_i64(&[s]));
    debug_assert_eq!(kernel.len(), 2);
    let mut out = [[0i64; 4]; 2];
    for (slot, v) in out.iter_mut().zip(kernel) {
        let spatial = primitive_integer_vector(&v);
        slot[1..].copy_from_slice(&spatial);
    }
    Some(out)
}

/// Clears denominators and divides by the content; leading nonzero entry
/// kept positive.
fn primitive_integer_vector(v: &[crate::linalg::Rational]) -> Vec<i64> {
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive};
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let lead_negative = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| {
            let y = x / &gcd;
            let y = if lead_negative { -y } else { y };
            y.to_i64().expect("small integer vector")
        })
        .collect()
}

fn momentum_label(k: [i64; 4]) -> String {
    format!("[{},{},{},{}]", k[0], k[1], k[2], k[3])
}

fn add_maxwell_block(
    t: &mut GeneratorTable,
    rule: &mut DifferentialRule,
    k: [i64; 4],
    thetas: bool,
) -> Result<()> {
    let label = momentum_label(k);
    let k_lower = lower(k);
    let k2 = minkowski_square(k);

    let ghost = t.add(format!("c{label}"), -1, Parity::Fermionic, 1)?;
    let potential: Vec<GenId> = (0..4)
        .map(|mu| t.add(format!("A_{mu}{label}"), 0, Parity::Bosonic, 1))
        .collect::<Result<_>>()?;
    for mu in 0..4 {
        // δA_μ = k_μ c
        rule.set(
            potential[mu],
            Polynomial::linear([(rat(k_lower[mu]), ghost)]),
        );
    }
    let antifield: Vec<GenId> = (0..4)
        .map(|mu| t.add(format!("A*_{mu}{label}"), 1, Parity::Fermionic, 1))
        .collect::<Result<_>>()?;
    for mu in 0..4 {
        // δA*_μ = k² A_μ − k_μ k^ν A_ν
        let terms = (0..4).map(|nu| {
            let diag = if mu == nu { k2 } else { 0 };
            (rat(diag - k_lower[mu] * k[nu]), potential[nu])
        });
        rule.set(antifield[mu], Polynomial::linear(terms));
    }
    // δζ = k^μ A*_μ
    let zeta = t.add(format!("zeta{label}"), 2, Parity::Bosonic, 1)?;
    rule.set(
        zeta,
        Polynomial::linear((0..4).map(|mu| (rat(k[mu]), antifield[mu]))),
    );
    if thetas && k != [0; 4] && is_lightlike(k) {
        for (i, eps) in lightlike_transverse(k)?.iter().enumerate() {
            // δθ_(i) = ε^μ_(i) A*_μ
            let th = t.add(format!("theta_{}{label}", i + 1), 2, Parity::Bosonic, 1)?;
            rule.set(
                th,
                Polynomial::linear((0..4).map(|mu| (rat(eps[mu]), antifield[mu]))),
            );
        }
    }
    Ok(())
}

/// Free Maxwell theory on every momentum of the integer box
/// `[-radius, radius]^4`, blocks in lexicographic momentum order.
pub fn build_maxwell(radius: i64) -> Result<Complex> {
    if radius < 1 {
        return Err(Error::InvalidModel(
            "maxwell radius must be >= 1".to_string(),
        ));
    }
    let mut t = GeneratorTable::new();
    let mut rule = DifferentialRule::new();
    for k in momentum_box(radius) {
        add_maxwell_block(&mut t, &mut rule, k, true)?;
    }
    Complex::new(t, rule)
}

/// The Maxwell complex restricted to a single momentum `k`. `thetas`
/// controls whether the solution antifields `θ_(i)(k)` are included at
/// lightlike `k ≠ 0`.
pub fn build_maxwell_block(k: [i64; 4], thetas: bool) -> Result<Complex> {
    let mut t = GeneratorTable::new();
    let mut rule = DifferentialRule::new();
    add_maxwell_block(&mut t, &mut rule, k, thetas)?;
    Complex::new(t, rule)
}

/// All integer 4-vectors with entries in `-radius..=radius`, lexicographic.
pub fn momentum_box(radius: i64) -> Vec<[i64; 4]> {
    let r = -radius..=radius;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Massless 2D scalar in Taylor modes `φ_{mn}`, `0 ≤ m, n ≤ order`, with
/// `δφ*_{mn} = mn φ_{mn}` and the requested tower
/// `δθ_m = φ*_{m0}`, `δθ̄_n = φ*_{0n}`, `δχ = θ_0 − θ̄_0`.
pub fn build_scalar2d(order: u32, tower: ScalarTower) -> Result<Complex> {
    if order < 1 {
        return Err(Error::InvalidModel(
            "scalar2d order must be >= 1".to_string(),
        ));
    }
    let size = order as usize + 1;
    let mut t = GeneratorTable::new();
    let mut rule = DifferentialRule::new();
    let fields: Vec<Vec<GenId>> = (0..size)
        .map(|m| {
            (0..size)
                .map(|n| t.add(format!("phi({m},{n})"), 0, Parity::Bosonic, 1))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut antifields = vec![vec![0; size]; size];
    for (m, row) in fields.iter().enumerate() {
        for (n, &field) in row.iter().enumerate() {
            let a = t.add(format!("phi*({m},{n})"), 1, Parity::Fermionic, 1)?;
            rule.set(a, Polynomial::linear([(rat((m * n) as i64), field)]));
            antifields[m][n] = a;
        }
    }
    if tower == ScalarTower::Naive {
        return Complex::new(t, rule);
    }
    let mut theta = Vec::with_capacity(size);
    for (m, row) in antifields.iter().enumerate() {
        let th = t.add(format!("theta({m})"), 2, Parity::Bosonic, 1)?;
        rule.set(th, Polynomial::generator(row[0]));
        theta.push(th);
    }
    let mut theta_bar = Vec::with_capacity(size);
    for (n, &a) in antifields[0].iter().enumerate() {
        let th = t.add(format!("thetabar({n})"), 2, Parity::Bosonic, 1)?;
        rule.set(th, Polynomial::generator(a));
        theta_bar.push(th);
    }
    if tower == ScalarTower::Full {
        let chi = t.add("chi", 3, Parity::Fermionic, 1)?;
        rule.set(
            chi,
            Polynomial::linear([(rat(1), theta[0]), (rat(-1), theta_bar[0])]),
        );
    }
    Complex::new(t, rule)
}

/// Deterministic 64-bit linear congruential stream:
/// `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// output `state >> 33`.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (self.state >> 33) as u32
    }

    /// Uniform-ish integer in `-3..=3`.
    pub fn small_int(&mut self) -> i64 {
        (self.next_u32() % 7) as i64 - 3
    }
}

/// Seeded random `n × n` integer matrix of rank exactly `n − p`, built as
/// the product of an `n × (n−p)` and an `(n−p) × n` matrix with entries in
/// `-3..=3`. Seeds are tried in order `seed, seed+1, …` until the rank is
/// right; the seed actually used is returned.
pub fn random_corank_matrix(n: usize, p: usize, seed: u64) -> Result<(Matrix, u64)> {
    if p > n {
        return Err(Error::InvalidModel(format!("corank {p} exceeds size {n}")));
    }
    let r = n - p;
    let mut attempt = seed;
    loop {
        let mut rng = Lcg::new(attempt);
        let left: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..r).map(|_| rng.small_int()).collect())
            .collect();
        let right: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.small_int()).collect())
            .collect();
        let a = if r == 0 {
            Matrix::zeros(n, n)
        } else {
            Matrix::from_i64(&left).mul(&Matrix::from_i64(&right))?
        };
        if rank(&a) == r {
            return Ok((a, attempt));
        }
        attempt = attempt.wrapping_add(1);
    }
}

/// Linear system `A u = 0` of size `n` and corank `p`: `δu = 0`,
/// `δu*_i = Σ_j A_ij u_j`. Returns the complex and the matrix `A`.
pub fn build_random_linear(n: usize, p: usize, seed: u64) -> Result<(Complex, Matrix)> {
    let (a, _) = random_corank_matrix(n, p, seed)?;
    Ok((build_linear(&a)?, a))
}

/// Koszul–Tate complex of an arbitrary square or rectangular operator:
/// one field per column, one antifield per row.
pub fn build_linear(a: &Matrix) -> Result<Complex> {
    let mut t = GeneratorTable::new();
    let mut rule = DifferentialRule::new();
    let fields: Vec<GenId> = (0..a.cols())
        .map(|j| t.add(format!("u({j})"), 0, Parity::Bosonic, 1))
        .collect::<Result<_>>()?;
    for i in 0..a.rows() {
        let star = t.add(format!("u*({i})"), 1, Parity::Fermionic, 1)?;
        rule.set(
            star,
            Polynomial::linear(a.row(i).iter().cloned().zip(fields.iter().copied())),
        );
    }
    Complex::new(t, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::block_matrix;

    #[test]
    fn oscillator_shape() {
        let c = build_oscillator((-2, 2), 1, false).unwrap();
        assert_eq!(c.table().len(), 10);
        let diag: Vec<_> = [3, 0, -1, 0, 3].iter().map(|&x| rat(x)).collect();
        assert_eq!(block_matrix(&c, 1, 1), Matrix::diagonal(&diag));
    }

    #[test]
    fn oscillator_with_ghosts() {
        let c = build_oscillator((-2, 2), 1, true).unwrap();
        let t = c.table();
        assert_eq!(t.len(), 14);
        assert_eq!(
            c.delta_of(t.id_of("phi(1)").unwrap()),
            Polynomial::generator(t.id_of("c(1)").unwrap())
        );
        assert!(c.delta_of(t.id_of("phi(2)").unwrap()).is_zero());
    }

    #[test]
    fn oscillator_rejects_bad_omega() {
        assert!(build_oscillator((-2, 2), 3, false).is_err());
        assert!(build_oscillator((-2, 2), 0, false).is_err());
        assert!(build_oscillator((0, 2), 1, false).is_err());
    }

    #[test]
    fn photon_polarisations() {
        assert_eq!(
            lightlike_transverse([1, 0, 0, 1]).unwrap(),
            [[0, 1, 0, 0], [0, 0, 1, 0]]
        );
        assert_eq!(
            lightlike_transverse([1, 1, 0, 0]).unwrap(),
            [[0, 0, 1, 0], [0, 0, 0, 1]]
        );
        assert_eq!(
            lightlike_transverse([0, 0, 0, 0]),
            Err(Error::NotLightlike([0, 0, 0, 0]))
        );
        assert!(lightlike_transverse([1, 0, 0, 0]).is_err());
    }

    #[test]
    fn transverse_vectors_are_orthogonal_integers() {
        for k in [[3, 2, 2, 1], [5, 3, 4, 0], [-3, 1, -2, 2]] {
            assert!(is_lightlike(k));
            let eps = lightlike_transverse(k).unwrap();
            for e in eps {
                let kl = lower(k);
                assert_eq!((0..4).map(|m| kl[m] * e[m]).sum::<i64>(), 0);
                assert_eq!(e[0], 0);
            }
        }
    }

    #[test]
    fn maxwell_box_size() {
        assert_eq!(momentum_box(1).len(), 81);
        let c = build_maxwell(1).unwrap();
        // 81 × (c, 4 A, 4 A*, ζ) + 12 lightlike × 2 θ
        assert_eq!(c.table().len(), 81 * 10 + 24);
        assert!(build_maxwell(0).is_err());
    }

    #[test]
    fn scalar_generator_counts() {
        assert_eq!(
            build_scalar2d(4, ScalarTower::Full).unwrap().table().len(),
            61
        );
        assert_eq!(
            build_scalar2d(4, ScalarTower::Thetas)
                .unwrap()
                .table()
                .len(),
            60
        );
        assert_eq!(
            build_scalar2d(4, ScalarTower::Naive).unwrap().table().len(),
            50
        );
        assert!(build_scalar2d(0, ScalarTower::Naive).is_err());
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(7);
        let mut b = Lcg::new(7);
        let xs: Vec<_> = (0..8).map(|_| a.small_int()).collect();
        let ys: Vec<_> = (0..8).map(|_| b.small_int()).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|x| (-3..=3).contains(x)));
    }

    #[test]
    fn random_matrix_has_requested_rank() {
        for (n, p) in [(4, 0), (5, 2), (3, 3), (6, 1)] {
            let (a, _) = random_corank_matrix(n, p, 11).unwrap();
            assert_eq!(rank(&a), n - p);
        }
        assert!(random_corank_matrix(2, 3, 0).is_err());
    }
}
