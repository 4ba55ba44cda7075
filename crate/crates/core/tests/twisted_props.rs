mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twform_core::finab::FinAbGroup;
use twform_core::linalg::IntegerMatrix;
use twform_core::twisted::*;
use twform_core::Error;

const SMALL_MODELS: [&str; 9] = [
    "point",
    "circle_nontrivial",
    "circle_trivial",
    "lens(2,1)",
    "lens(3,1)",
    "surface(1,nontrivial)",
    "surface(2,0110)",
    "circle_nontrivial*lens(2,1)",
    "surface(1,nontrivial)*sphere2",
];

const NONTRIVIAL_CONNECTED: [&str; 5] = [
    "circle_nontrivial",
    "surface(1,nontrivial)",
    "surface(3,nontrivial)",
    "surface(2,0110)",
    "surface(2,nontrivial)*sphere2",
];

fn model(name: &str) -> EquivariantComplex {
    builtin_model(name).unwrap().into_equivariant()
}

fn shuffled(idx: usize, seed: u64) -> EquivariantComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_equivariant_basis_change(&model(SMALL_MODELS[idx]), 8, &mut rng)
}

fn group_of(free: usize, torsion: &[i128]) -> FinAbGroup {
    FinAbGroup::from_cyclic_orders(free, &torsion.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>())
}

/// Künneth: `H_n(P ⊗ Q) = ⊕ H_i ⊗ H_j ⊕ ⊕ Tor(H_i, H_j')` with `i + j' = n - 1`.
fn kunneth(a: &[FinAbGroup], b: &[FinAbGroup], n: usize) -> FinAbGroup {
    let mut free = 0;
    let mut tors: Vec<BigInt> = Vec::new();
    let tensor = |x: &FinAbGroup, y: &FinAbGroup, free: &mut usize, tors: &mut Vec<BigInt>| {
        *free += x.free_rank() * y.free_rank();
        for d in x.invariant_factors() {
            tors.extend(std::iter::repeat_n(d.clone(), y.free_rank()));
            tors.extend(y.invariant_factors().iter().map(|e| d.gcd(e)));
        }
        for e in y.invariant_factors() {
            tors.extend(std::iter::repeat_n(e.clone(), x.free_rank()));
        }
    };
    for i in 0..=n {
        if let (Some(x), Some(y)) = (a.get(i), b.get(n - i)) {
            tensor(x, y, &mut free, &mut tors);
        }
    }
    for i in 0..n {
        if let (Some(x), Some(y)) = (a.get(i), b.get(n - 1 - i)) {
            for d in x.invariant_factors() {
                tors.extend(y.invariant_factors().iter().map(|e| d.gcd(e)));
            }
        }
    }
    tors.retain(|d| !d.is_one());
    FinAbGroup::from_cyclic_orders(free, &tors)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homology_matches_determinantal_oracle(idx in 0usize..SMALL_MODELS.len(), seed in any::<u64>()) {
        let c = shuffled(idx, seed);
        for coeff in [CoefficientSystem::TrivialZ, CoefficientSystem::SignZ, CoefficientSystem::DoubleCover] {
            let chain = c.specialize(coeff);
            let lib = homology(&chain).unwrap();
            for (k, (free, torsion)) in oracle_homology(chain.ranks(), |k| chain.boundary(k as isize)).iter().enumerate() {
                prop_assert_eq!(lib.group(k as isize), group_of(*free, torsion));
            }
        }
    }

    #[test]
    fn mod_two_homology_matches_rank_count(idx in 0usize..SMALL_MODELS.len(), seed in any::<u64>()) {
        let c = shuffled(idx, seed);
        let chain = c.specialize(CoefficientSystem::ModTwo);
        let integral = homology(&c.specialize(CoefficientSystem::SignZ)).unwrap();
        let lib = homology(&chain).unwrap();
        for k in 0..chain.ranks().len() {
            let d_in = to_i128_rows(&chain.boundary(k as isize));
            let d_out = to_i128_rows(&chain.boundary(k as isize + 1));
            let dim = chain.ranks()[k]
                - rank_mod2(&d_in, chain.boundary(k as isize).cols())
                - rank_mod2(&d_out, chain.boundary(k as isize + 1).cols());
            let g = lib.group(k as isize);
            prop_assert_eq!(g.free_rank(), 0);
            prop_assert!(g.invariant_factors().iter().all(|d| *d == BigInt::from(2)));
            prop_assert_eq!(g.invariant_factors().len(), dim);
            // universal coefficients for homology with Z/2 coefficients
            let expect = integral.group(k as isize).mod2_dimension() + integral.group(k as isize - 1).torsion_subgroup().mod2_dimension();
            prop_assert_eq!(dim, expect);
        }
    }

    #[test]
    fn cover_splits_rationally(idx in 0usize..SMALL_MODELS.len(), seed in any::<u64>()) {
        let c = shuffled(idx, seed);
        let cover = homology(&c.specialize(CoefficientSystem::DoubleCover)).unwrap().betti();
        let z = homology(&c.specialize(CoefficientSystem::TrivialZ)).unwrap().betti();
        let l = homology(&c.specialize(CoefficientSystem::SignZ)).unwrap().betti();
        for k in 0..cover.len() {
            prop_assert_eq!(cover[k], z[k] + l[k]);
        }
        let chi = |b: &[usize]| b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
        prop_assert_eq!(chi(&cover), chi(&z) + chi(&l));
        prop_assert_eq!(
            c.specialize(CoefficientSystem::DoubleCover).euler_characteristic(),
            2 * c.specialize(CoefficientSystem::TrivialZ).euler_characteristic()
        );
        prop_assert_eq!(chi(&z), c.specialize(CoefficientSystem::TrivialZ).euler_characteristic());
    }

    #[test]
    fn basis_change_preserves_homology_and_exactness(idx in 0usize..SMALL_MODELS.len(), seed in any::<u64>()) {
        let original = model(SMALL_MODELS[idx]);
        let c = shuffled(idx, seed);
        for coeff in [CoefficientSystem::TrivialZ, CoefficientSystem::SignZ, CoefficientSystem::ModTwo, CoefficientSystem::DoubleCover] {
            prop_assert_eq!(homology(&c.specialize(coeff)).unwrap(), homology(&original.specialize(coeff)).unwrap());
        }
        prop_assert!(les_double_cover_report(&c).unwrap().exact);
        prop_assert!(bockstein_report(&c).unwrap().exact);
        for q in 0..c.ranks().len() as isize {
            prop_assert!(universal_coefficients_report(&c, q).unwrap().consistent);
        }
    }

    #[test]
    fn generators_have_unit_classes(idx in 0usize..SMALL_MODELS.len(), seed in any::<u64>()) {
        let chain = shuffled(idx, seed).specialize(CoefficientSystem::SignZ);
        for k in 0..chain.ranks().len() as isize {
            let h = degree_homology(&chain, k);
            let n = h.group.num_components();
            for (i, g) in h.generators().iter().enumerate() {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                prop_assert_eq!(h.class_of(g), Some(h.group.normalize(&e)));
                let twice: Vec<BigInt> = g.iter().map(|x| x * 2).collect();
                let mut e2 = e.clone();
                e2[i] = BigInt::from(2);
                prop_assert_eq!(h.class_of(&twice), Some(h.group.normalize(&e2)));
            }
            let id = induced_map(&h, &h, &IntegerMatrix::identity(chain.rank(k))).unwrap();
            for i in 0..n {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                prop_assert_eq!(id.apply(&e), h.group.normalize(&e));
            }
        }
    }
}

#[test]
fn plain_tensor_products_obey_kunneth() {
    let names = ["circle_trivial", "sphere2", "lens(2,1)", "lens(3,1)", "torus3"];
    for a in names {
        for b in names {
            let p = model(a).specialize(CoefficientSystem::TrivialZ);
            let q = model(b).specialize(CoefficientSystem::TrivialZ);
            let hp = homology(&p).unwrap().groups;
            let hq = homology(&q).unwrap().groups;
            let ht = homology(&p.tensor(&q)).unwrap();
            for n in 0..hp.len() + hq.len() - 1 {
                assert_eq!(ht.group(n as isize), kunneth(&hp, &hq, n), "{a} x {b} in degree {n}");
            }
        }
    }
}

#[test]
fn sign_coefficients_detect_the_cover_in_degree_zero() {
    for name in NONTRIVIAL_CONNECTED {
        let c = model(name);
        assert_eq!(
            homology(&c.specialize(CoefficientSystem::SignZ)).unwrap().group(0),
            FinAbGroup::cyclic(2),
            "{name}"
        );
        assert_eq!(
            homology(&c.specialize(CoefficientSystem::TrivialZ)).unwrap().group(0),
            FinAbGroup::free(1),
            "{name}"
        );
        assert_eq!(
            homology(&c.specialize(CoefficientSystem::DoubleCover)).unwrap().group(0),
            FinAbGroup::free(1),
            "{name}"
        );
    }
    let trivial = model("circle_trivial");
    assert_eq!(homology(&trivial.specialize(CoefficientSystem::DoubleCover)).unwrap().group(0), FinAbGroup::free(2));
}

#[test]
fn cohomology_of_closed_surfaces_is_dual() {
    for g in 1..=3 {
        let c = model(&format!("surface({g},trivial)")).specialize(CoefficientSystem::TrivialZ);
        let h = homology(&c).unwrap();
        let mut coh = cohomology(&c).unwrap().groups;
        coh.reverse();
        assert_eq!(coh, h.groups, "orientable surfaces satisfy Poincare duality");
        assert_eq!(h.betti(), vec![1, 2 * g, 1]);
    }
}

#[test]
fn non_complexes_are_rejected() {
    let one = IntegerMatrix::from_i64(&[&[1]]);
    let err = ChainComplex::new(vec![1, 1, 1], vec![one.clone(), one.clone()], 0).unwrap_err();
    assert!(matches!(err, Error::NotAComplex { .. }));
    let two = IntegerMatrix::from_i64(&[&[2]]);
    assert!(ChainComplex::new(vec![1, 1, 1], vec![two.clone(), two], 4).is_ok());
    assert!(matches!(ChainComplex::new(vec![1, 2], vec![one], 0), Err(Error::Shape(_))));
}

#[test]
fn equivariant_complexes_round_trip_through_json() {
    for name in SMALL_MODELS {
        let c = model(name);
        let text = serde_json::to_string(&c).unwrap();
        let back: EquivariantComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
    let bad =
        r#"{"dimension":2,"ranks":[1,1,1],"boundaries":[{"const":[[1]],"twist":[[0]]},{"const":[[1]],"twist":[[0]]}]}"#;
    assert!(serde_json::from_str::<EquivariantComplex>(bad).is_err());
}

#[test]
fn circle_with_sign_coefficients() {
    let c = model("circle_nontrivial").specialize(CoefficientSystem::SignZ);
    assert_eq!(c.boundary(1).entries()[0].to_i64(), Some(2));
    assert_eq!(homology(&c).unwrap().groups, vec![FinAbGroup::cyclic(2), FinAbGroup::trivial()]);
}
