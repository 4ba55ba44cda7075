//! A self-check suite exercising the algebraic identities end to end.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finab::FinAbGroup;
use crate::forms::{
    boundary_parity, enumerate_pc, enumerate_pl_tilde, minimal_k, verify_cardinality_identity, CohomologyModel,
    TwistedClass,
};
use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::random_unimodular;
use crate::obstruction::{
    corollary_check, delta, reduce_to_delta_zero, samples, surgery_transform, tau_plus_bplus, CircleDescriptor,
    LocalSystemRecord, ManifoldRecord, Verdict,
};
use crate::twisted::{
    bockstein_report, builtin_model, homology, les_double_cover_report, random_equivariant_basis_change,
    universal_coefficients_report, CoefficientSystem,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

/// Torsion groups paired with `-E8` in the counting checks.
pub const TORSION_CASES: [&[u64]; 6] = [&[], &[2], &[3], &[4], &[9], &[2, 4]];

pub fn torsion_group(orders: &[u64]) -> FinAbGroup {
    FinAbGroup::from_cyclic_orders(0, &orders.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>())
}

/// A root of `-E8` (norm -2) in the Bourbaki basis.
pub fn e8_root() -> LatticeVector {
    LatticeVector::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0])
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    match f() {
        Ok((passed, detail)) => CheckOutcome { name: name.into(), passed, detail },
        Err(e) => CheckOutcome { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

fn conjugate(l: &Lattice, rng: &mut ChaCha8Rng) -> Lattice {
    let u = random_unimodular(l.rank(), 3, 40, rng);
    l.change_basis(&u)
}

fn standardness(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    for _ in 0..20 {
        let n = rng.gen_range(1..=6);
        ok &= conjugate(&Lattice::minus_identity(n), rng).is_standard()?;
    }
    for m in 0..=4 {
        ok &= !Lattice::minus_e8().orthogonal_sum(&Lattice::minus_identity(m)).is_standard()?;
    }
    Ok((ok, "20 conjugated diagonal forms standard; -E8 + <-1>^m non-standard".into()))
}

fn root_decomposition(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let base = Lattice::minus_identity(1).orthogonal_sum(&Lattice::minus_e8());
    let mut ok = true;
    for _ in 0..5 {
        let rd = conjugate(&base, rng).root_decomposition()?;
        ok &= rd.rank_d() == 1 && rd.fhat.rank() == 8 && rd.fhat.is_even() && rd.fhat.determinant() == BigInt::from(1);
    }
    Ok((ok, "rank D = 1 and F-hat even unimodular of rank 8".into()))
}

fn minimal_k_e8() -> Result<(bool, String)> {
    let e8 = Lattice::minus_e8();
    let m = minimal_k(&e8)?;
    let model = CohomologyModel::torsion_free(e8.clone());
    let c = model.class(m.witness.clone());
    let pc = enumerate_pc(&e8, &m.witness)?.len();
    let tilde = enumerate_pl_tilde(&model, &c, m.k)?.len();
    let ok = m.k == 2 && e8.norm(&m.witness) == BigInt::from(-2) && pc == 1 && tilde == 2;
    Ok((ok, format!("k = {}, |P_c| = {pc}, |P~_l| = {tilde}", m.k)))
}

/// `(model, class, k)` instances for the counting identity.
pub fn cardinality_instances() -> Vec<(String, CohomologyModel, TwistedClass, u64)> {
    let mut out = Vec::new();
    for orders in TORSION_CASES {
        let t = torsion_group(orders);
        let model = CohomologyModel::new(Lattice::minus_e8(), t.clone()).expect("torsion");
        let mut tors = vec![BigInt::from(0); t.num_components()];
        out.push((format!("-E8 + T({t})"), model.clone(), TwistedClass { free: e8_root(), torsion: tors.clone() }, 2));
        if let Some(x) = tors.last_mut() {
            *x = BigInt::from(1);
            out.push((
                format!("-E8 + T({t}), c_t = g"),
                model.clone(),
                TwistedClass { free: e8_root(), torsion: tors },
                2,
            ));
        }
    }
    for n in 2..=4 {
        let model = CohomologyModel::torsion_free(Lattice::minus_identity(n));
        let mut c = vec![0i64; n];
        c[0] = 1;
        c[1] = 1;
        out.push((
            format!("<-1>^{n}"),
            model,
            TwistedClass { free: LatticeVector::from_i64(&c), torsion: Vec::new() },
            2,
        ));
    }
    out
}

fn cardinality() -> Result<(bool, String)> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, model, c, k) in cardinality_instances() {
        let r = verify_cardinality_identity(&model, &c, k)?;
        ok &= r.holds;
        lines.push(format!("{name}: {} = {}*{}", r.p_ell, r.doubled_torsion_order, r.p_c));
    }
    Ok((ok, lines.join("; ")))
}

fn parity() -> Result<(bool, String)> {
    let mut ok = true;
    let mut lines = Vec::new();
    for orders in TORSION_CASES {
        let t = torsion_group(orders);
        let model = CohomologyModel::new(Lattice::minus_e8(), t.clone())?;
        let c = model.class(e8_root());
        let r = boundary_parity(&model, &c, 2)?;
        let order_four = orders.iter().any(|d| d % 4 == 0);
        ok &= r.order_four_torsion == order_four && (r.parity == 1) != order_four;
        lines.push(format!("T({t}): |P_l| = {}", r.p_ell));
    }
    Ok((ok, lines.join("; ")))
}

pub const BUILTIN_MODELS: [&str; 10] = [
    "point",
    "circle_nontrivial",
    "circle_trivial",
    "sphere2",
    "torus3",
    "lens(2,1)",
    "surface(1,nontrivial)",
    "surface(2,0110)",
    "surface(1,nontrivial)*sphere2",
    "circle_nontrivial*lens(2,1)",
];

fn twisted_values() -> Result<(bool, String)> {
    let sign = |name: &str| -> Result<Vec<FinAbGroup>> {
        let c = builtin_model(name)?.into_equivariant();
        Ok(homology(&c.specialize(CoefficientSystem::SignZ))?.groups)
    };
    let circle = sign("circle_nontrivial")?;
    let w = sign("surface(1,nontrivial)*sphere2")?;
    let l2 = sign("circle_nontrivial*lens(2,1)")?;
    let l3 = sign("circle_nontrivial*lens(3,1)")?;
    let z2 = FinAbGroup::cyclic(2);
    let ok = circle == vec![z2.clone(), FinAbGroup::trivial()]
        && w[1].torsion_subgroup() == z2
        && w[2].torsion_subgroup() == z2
        && l2[1] == z2
        && l3[1].is_trivial();
    Ok((ok, format!("circle {circle:?}; T2xS2 H1 = {}, H2 = {}; lens H1 = {}, {}", w[1], w[2], l2[1], l3[1])))
}

fn exactness(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut complexes = Vec::new();
    for name in BUILTIN_MODELS {
        complexes.push(builtin_model(name)?.into_equivariant());
    }
    let base = complexes.clone();
    for i in 0..10 {
        let c = &base[i % base.len()];
        complexes.push(random_equivariant_basis_change(c, 8, rng));
    }
    for c in &complexes {
        les_double_cover_report(c)?;
        bockstein_report(c)?;
        for q in 0..c.ranks().len() as isize {
            if !universal_coefficients_report(c, q)?.consistent {
                return Ok((false, format!("universal coefficients fail in degree {q}")));
            }
        }
    }
    Ok((true, format!("{} complexes", complexes.len())))
}

/// A record with `H₁ = Z^b1 ⊕ torsion`, for surgery experiments.
pub fn random_record(rng: &mut ChaCha8Rng) -> ManifoldRecord {
    let b1 = rng.gen_range(0..=4);
    let orders: Vec<BigInt> = (0..rng.gen_range(0..=2)).map(|_| BigInt::from(rng.gen_range(2..=8))).collect();
    ManifoldRecord {
        name: "N".into(),
        boundary: None,
        b1,
        h1: FinAbGroup::from_cyclic_orders(b1, &orders),
        b_plus: rng.gen_range(0..=3),
        intersection_form: None,
        local_systems: Vec::new(),
    }
}

/// A random class in `H₁`, or `None` if `H₁ ⊗ Z/2 = 0`.
pub fn random_odd_class(h1: &FinAbGroup, rng: &mut ChaCha8Rng) -> Option<Vec<BigInt>> {
    if h1.mod2_dimension() == 0 {
        return None;
    }
    loop {
        let class: Vec<BigInt> = (0..h1.num_components()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        if crate::obstruction::nonzero_mod_two(h1, &class) {
            return Some(class);
        }
    }
}

fn surgery(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    let mut done = 0;
    for _ in 0..200 {
        let r = random_record(rng);
        let Some(class) = random_odd_class(&r.h1, rng) else { continue };
        let out = surgery_transform(&r, &CircleDescriptor::new(class, None))?;
        ok &= tau_plus_bplus(&out) == tau_plus_bplus(&r)
            && delta(&out) == delta(&r) + 1
            && out.h1.mod2_dimension() + 1 == r.h1.mod2_dimension();
        done += 1;
    }
    let ls = samples::torus_times_sphere().local_systems[0].clone();
    for b1 in 1..=5 {
        for b_plus in 0..b1 {
            let mut r = ManifoldRecord {
                name: "N".into(),
                boundary: None,
                b1,
                h1: FinAbGroup::free(b1),
                b_plus,
                intersection_form: None,
                local_systems: Vec::new(),
            };
            let d = delta(&r);
            if d > 0 {
                continue;
            }
            r.local_systems.push(LocalSystemRecord { b1_twisted: (-d) as usize, ..ls.clone() });
            let red = reduce_to_delta_zero(&r, "l")?;
            ok &= delta(&red.record) == 0 && (tau_plus_bplus(&r) > 2 || red.bound_holds);
        }
    }
    Ok((ok, format!("{done} random surgeries")))
}

fn end_to_end() -> Result<(bool, String)> {
    let w = samples::torus_times_sphere();
    let run = |v: ManifoldRecord| -> Result<Verdict> {
        let sum = samples::sum_with_twisted(&v, &w);
        Ok(corollary_check(&sum, sum.system("l")?)?.verdict)
    };
    let a = run(samples::definite("V", true, 4))?;
    let b = run(samples::definite("V", false, 12))?;
    let big = samples::sum_with_twisted(&samples::definite("V", true, 4), &samples::four_torus());
    let c = corollary_check(&big, big.system("l")?)?.verdict;
    let ok = a == Verdict::NonSmoothable
        && b == Verdict::NoObstruction
        && c == Verdict::HypothesisFailure(vec!["H1".into()]);
    Ok((ok, format!("{a:?}, {b:?}, {c:?}")))
}

/// Runs every check with the given seed.
pub fn run_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check("standardness", || standardness(&mut rng)),
        check("root decomposition", || root_decomposition(&mut rng)),
        check("minimal k of -E8", minimal_k_e8),
        check("cardinality identity", cardinality),
        check("parity", parity),
        check("twisted homology values", twisted_values),
        check("exact sequences", || exactness(&mut rng)),
        check("surgery calculus", || surgery(&mut rng)),
        check("end-to-end verdicts", end_to_end),
    ];
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport { seed, checks, passed }
}
