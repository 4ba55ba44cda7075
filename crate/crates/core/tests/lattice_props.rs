mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twform_core::lattice::{Lattice, LatticeVector};
use twform_core::linalg::random_unimodular;

fn small_definite() -> Vec<Lattice> {
    vec![
        Lattice::minus_identity(1),
        Lattice::minus_identity(3),
        Lattice::from_i64(&[&[-2, 1], &[1, -2]]),
        Lattice::from_i64(&[&[-2, 0], &[0, -3]]),
        Lattice::from_i64(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -3]]),
        Lattice::from_i64(&[&[-2, 1, 0, 0], &[1, -2, 1, 1], &[0, 1, -2, 0], &[0, 1, 0, -2]]),
    ]
}

fn coords(v: &LatticeVector) -> Vec<i64> {
    v.coords().iter().map(|x| x.to_i64().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn short_vectors_match_box_scan(idx in 0usize..6, seed in any::<u64>(), bound in 0i64..=5) {
        let base = &small_definite()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = base.change_basis(&random_unimodular(base.rank(), 2, 6, &mut rng));
        let lib: BTreeSet<Vec<i64>> =
            l.short_vectors(&BigInt::from(bound)).unwrap().iter().map(coords).collect();
        let oracle: BTreeSet<Vec<i64>> = box_short_vectors(&to_i64_rows(l.gram()), bound).into_iter().collect();
        prop_assert_eq!(lib, oracle);
    }

    #[test]
    fn vectors_of_norm_are_exact(idx in 0usize..6, seed in any::<u64>(), m in 1i64..=4) {
        let base = &small_definite()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = base.change_basis(&random_unimodular(base.rank(), 2, 6, &mut rng));
        let g = to_i64_rows(l.gram());
        let all = l.vectors_of_norm(&BigInt::from(-m), false).unwrap();
        let expect = box_short_vectors(&g, m).into_iter().filter(|v| quad(&g, v) == -m).count();
        prop_assert_eq!(all.len(), expect);
        let halves = l.vectors_of_norm(&BigInt::from(-m), true).unwrap();
        prop_assert_eq!(2 * halves.len(), all.len());
    }

    #[test]
    fn standardness_is_a_congruence_invariant(n in 1usize..=5, with_e8 in any::<bool>(), seed in any::<u64>()) {
        let base = if with_e8 {
            Lattice::minus_e8().orthogonal_sum(&Lattice::minus_identity(n))
        } else {
            Lattice::minus_identity(n)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(base.rank(), 3, 30, &mut rng);
        prop_assert_eq!(base.change_basis(&u).is_standard().unwrap(), !with_e8);
    }

    #[test]
    fn root_decomposition_splits_the_form(a in 0usize..=3, with_e8 in any::<bool>(), seed in any::<u64>()) {
        prop_assume!(a > 0 || with_e8);
        let base = if with_e8 {
            Lattice::minus_identity(a).orthogonal_sum(&Lattice::minus_e8())
        } else {
            Lattice::minus_identity(a)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = base.change_basis(&random_unimodular(base.rank(), 3, 40, &mut rng));
        let rd = l.root_decomposition().unwrap();
        prop_assert_eq!(rd.rank_d(), a);
        prop_assert_eq!(rd.fhat.rank(), if with_e8 { 8 } else { 0 });
        prop_assert_eq!(cofactor_det(&to_i128_rows(&rd.change_of_basis())).abs(), 1);
        for d in &rd.d_basis {
            prop_assert_eq!(l.norm(d), BigInt::from(-1));
            for f in &rd.fhat_basis {
                prop_assert_eq!(l.inner(d, f), BigInt::from(0));
            }
        }
        for (i, x) in rd.fhat_basis.iter().enumerate() {
            for (j, y) in rd.fhat_basis.iter().enumerate() {
                prop_assert_eq!(&l.inner(x, y), &rd.fhat.gram()[(i, j)]);
            }
        }
        prop_assert!(rd.fhat.rank() == 0 || rd.fhat.vectors_of_norm(&BigInt::from(-1), false).unwrap().is_empty());
    }
}

#[test]
fn e8_shell_sizes_match_orthonormal_model() {
    let e8 = Lattice::minus_e8();
    assert!(e8.is_even() && e8.is_unimodular() && e8.is_negative_definite());
    for (m, size) in [(1, 0), (2, 240), (4, 2160)] {
        assert_eq!(e8_doubled_vectors(m).len(), size);
        assert_eq!(e8.vectors_of_norm(&BigInt::from(-m), false).unwrap().len(), size);
    }
}

#[test]
fn indefinite_forms_are_rejected() {
    let h = Lattice::from_i64(&[&[0, 1], &[1, 0]]);
    assert!(!h.is_negative_definite());
    assert!(h.short_vectors(&BigInt::from(2)).is_err());
    assert!(h.root_decomposition().is_err());
}
