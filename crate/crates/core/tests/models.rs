use ktres_core::algebra::Parity;
use ktres_core::augment::{find_identities, resolve, verify_acyclic};
use ktres_core::complex::{
    block_matrix, cohomology, cohomology_table, euler_check, grassmann_number, Complex,
};
use ktres_core::linalg::{rank, Matrix};
use ktres_core::models::{
    build_linear, build_maxwell_block, build_oscillator, build_random_linear, build_scalar2d,
    is_lightlike, momentum_box, random_corank_matrix, Lcg, ScalarTower,
};

fn dim_h(c: &Complex, n: i32, d: u32) -> usize {
    cohomology(c, n, d, false).unwrap().row.dim_h
}

/// Dimensions straight from the full, unsplit block matrices.
fn dims_from_full_blocks(c: &Complex, n: i32, d: u32) -> (usize, usize, usize) {
    let out = block_matrix(c, n, d);
    let inc = block_matrix(c, n + 1, d);
    let chain = out.cols();
    let kernel = chain - rank(&out);
    let image = rank(&inc);
    (chain, kernel, image)
}

#[test]
fn split_blocks_agree_with_full_blocks() {
    let models = [
        build_oscillator((-4, 4), 2, false).unwrap(),
        build_oscillator((-2, 2), 1, true).unwrap(),
        build_scalar2d(2, ScalarTower::Full).unwrap(),
        build_maxwell_block([1, 0, 0, 1], true).unwrap(),
        build_maxwell_block([0, 0, 0, 0], true).unwrap(),
    ];
    for c in &models {
        for d in 0..=2 {
            for n in -2..=4 {
                let row = cohomology(c, n, d, false).unwrap().row;
                let (chain, kernel, image) = dims_from_full_blocks(c, n, d);
                assert_eq!(
                    (row.dim_chain, row.dim_kernel, row.dim_image),
                    (chain, kernel, image),
                    "block ({n},{d})"
                );
                assert_eq!(row.dim_h, kernel - image);
            }
        }
    }
}

#[test]
fn oscillator_representatives_stay_on_shell() {
    let c = build_oscillator((-4, 4), 2, false).unwrap();
    let table = cohomology_table(&c, 3, 4, true).unwrap();
    for reps in table.representatives.values() {
        for p in reps {
            let text = p.display(c.table()).to_string();
            for off in [-4, -3, -1, 0, 1, 3, 4] {
                assert!(!text.contains(&format!("({off})")), "{text}");
            }
        }
    }
    assert_eq!(table.dim_h(0, 2), 3);
}

#[test]
fn resolved_oscillator_keeps_euler_balance() {
    let c = build_oscillator((-4, 4), 2, false).unwrap();
    let (r, report) = resolve(&c, 4).unwrap();
    assert_eq!(report.added_count(), 2);
    assert_eq!(grassmann_number(&r), 2);
    assert_eq!(grassmann_number(&c), 0);
    for d in 0..=3 {
        let e = euler_check(&r, d, None).unwrap();
        assert!(e.equal, "{e:?}");
    }
    assert!(euler_check(&r, 3, Some((0, 1))).is_err());
}

#[test]
fn maxwell_block_cohomology() {
    for k in momentum_box(1) {
        let c = build_maxwell_block(k, false).unwrap();
        let expected = if k == [0; 4] {
            4
        } else if is_lightlike(k) {
            2
        } else {
            0
        };
        assert_eq!(dim_h(&c, 0, 1), expected, "H(0,1) at {k:?}");
        let ghosts = if k == [0; 4] { 1 } else { 0 };
        assert_eq!(dim_h(&c, -1, 1), ghosts, "H(-1,1) at {k:?}");
        // Noether identity δζ = k^μ A*_μ is the only one above level 1
        // away from k = 0
        if k != [0; 4] {
            let ids = find_identities(&c, 1).unwrap();
            let expected = if is_lightlike(k) { 2 } else { 0 };
            assert_eq!(ids.len(), expected, "identities at {k:?}");
        }
    }
}

#[test]
fn maxwell_zero_momentum_resolution() {
    let c = build_maxwell_block([0; 4], true).unwrap();
    let (r, report) = resolve(&c, 4).unwrap();
    assert!(report.terminated);
    let levels: Vec<(i32, Parity)> = report
        .rounds
        .iter()
        .flat_map(|round| &round.added)
        .map(|g| (g.antifield_number, g.parity))
        .collect();
    let count = |n, p| levels.iter().filter(|&&l| l == (n, p)).count();
    assert_eq!(count(0, Parity::Bosonic), 1);
    assert_eq!(count(2, Parity::Bosonic), 4);
    assert_eq!(count(3, Parity::Fermionic), 1);
    assert!(verify_acyclic(&r, 3, 2).unwrap().acyclic);
}

#[test]
fn scalar_tower_counts() {
    let full = build_scalar2d(4, ScalarTower::Full).unwrap();
    assert_eq!(grassmann_number(&full), 9);
    assert_eq!(dim_h(&full, 0, 1), 9);
    let naive = build_scalar2d(4, ScalarTower::Naive).unwrap();
    assert_eq!(dim_h(&naive, 1, 1), 9);
    let thetas = build_scalar2d(4, ScalarTower::Thetas).unwrap();
    assert_eq!(dim_h(&thetas, 1, 1), 0);
    assert_eq!(dim_h(&thetas, 2, 1), 1);
}

#[test]
fn random_systems_have_p_solutions() {
    let mut rng = Lcg::new(7);
    for seed in 0..20 {
        let n = 1 + (rng.next_u32() % 6) as usize;
        let p = rng.next_u32() as usize % (n + 1);
        let (c, a) = build_random_linear(n, p, seed).unwrap();
        assert_eq!(rank(&a), n - p);
        assert_eq!(dim_h(&c, 0, 1), p, "n={n} p={p} seed={seed}");
        assert_eq!(dim_h(&c, 1, 1), p, "n={n} p={p} seed={seed}");
    }
}

#[test]
fn random_matrices_are_reproducible() {
    let (a, s) = random_corank_matrix(5, 2, 11).unwrap();
    let (b, t) = random_corank_matrix(5, 2, 11).unwrap();
    assert_eq!((a, s), (b, t));
}

fn permuted_columns(a: &Matrix, order: &[usize]) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..a.rows())
        .map(|r| {
            order
                .iter()
                .map(|&c| i64::try_from(a[(r, c)].to_integer()).unwrap())
                .collect()
        })
        .collect();
    Matrix::from_i64(&rows)
}

#[test]
fn identities_survive_basis_change_and_relabeling() {
    let a = Matrix::from_i64(&[[1, 2, 0], [2, 4, 0], [0, 0, 1]]);
    let change = Matrix::from_i64(&[[1, 1, 0], [0, 1, 0], [3, 0, 1]]);
    let c = build_linear(&a).unwrap();
    let mixed = build_linear(&change.mul(&a).unwrap()).unwrap();
    let relabeled = build_linear(&permuted_columns(&a, &[2, 0, 1])).unwrap();
    let count = |c: &Complex| find_identities(c, 1).unwrap().len();
    assert_eq!(count(&c), 1);
    assert_eq!(count(&mixed), 1);
    assert_eq!(count(&relabeled), 1);
    for d in 0..=3 {
        for n in 0..=3 {
            let h = dim_h(&c, n, d);
            assert_eq!(dim_h(&mixed, n, d), h, "({n},{d})");
            assert_eq!(dim_h(&relabeled, n, d), h, "({n},{d})");
        }
    }
    for m in [&c, &mixed, &relabeled] {
        let (r, report) = resolve(m, 4).unwrap();
        assert_eq!(report.added_count(), 1);
        assert!(verify_acyclic(&r, 3, 3).unwrap().acyclic);
    }
}

#[test]
fn ghost_oscillator_constants_only() {
    let c = build_oscillator((-4, 4), 2, true).unwrap();
    let v = verify_acyclic(&c, 3, 3).unwrap();
    assert!(v.acyclic, "{:?}", v.offending);
    assert_eq!(v.constants, 1);
}
