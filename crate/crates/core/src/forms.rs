//! Counting twisted reducibles algebraically.
//!
//! A [`CohomologyModel`] stands for `H²(W;ℓ) ≅ F ⊕ T` with `F` the free part
//! carrying the intersection form and `T` the torsion subgroup. The sets
//! counted here are
//!
//! * `P_c`: unordered pairs `{r, s}` in `F` with `r + s = c̄` and `r·s = 0`;
//! * `P̃_ℓ`: classes `v` with `v² = -k` and `v ≡ c` modulo `2·H²`;
//! * `P_ℓ = P̃_ℓ / ±1`,
//!
//! and they satisfy `|P_ℓ| = |2T| · |P_c|`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finab::FinAbGroup;
use crate::json::compact_vec;
use crate::lattice::{Lattice, LatticeVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct CohomologyModel {
    pub free_part: Lattice,
    pub torsion: FinAbGroup,
}

#[derive(Deserialize)]
struct RawModel {
    free_part: Lattice,
    torsion: FinAbGroup,
}

impl TryFrom<RawModel> for CohomologyModel {
    type Error = Error;
    fn try_from(raw: RawModel) -> Result<Self> {
        CohomologyModel::new(raw.free_part, raw.torsion)
    }
}

impl CohomologyModel {
    pub fn new(free_part: Lattice, torsion: FinAbGroup) -> Result<Self> {
        if torsion.free_rank() > 0 {
            return Err(Error::NotTorsion);
        }
        Ok(CohomologyModel { free_part, torsion })
    }

    pub fn torsion_free(free_part: Lattice) -> Self {
        CohomologyModel { free_part, torsion: FinAbGroup::trivial() }
    }

    /// The class with the given free part and zero torsion component.
    pub fn class(&self, free: LatticeVector) -> TwistedClass {
        TwistedClass { free, torsion: vec![BigInt::zero(); self.torsion.invariant_factors().len()] }
    }

    fn check_class(&self, c: &TwistedClass) -> Result<()> {
        if c.free.len() != self.free_part.rank() {
            return Err(Error::Precondition(format!(
                "class has {} free coordinates, model has rank {}",
                c.free.len(),
                self.free_part.rank()
            )));
        }
        if c.torsion.len() != self.torsion.invariant_factors().len() {
            return Err(Error::Precondition("torsion coordinates do not match the model".into()));
        }
        Ok(())
    }
}

/// An element of `H²(W;ℓ)`: a free part and a residue tuple against the torsion factors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwistedClass {
    pub free: LatticeVector,
    #[serde(with = "compact_vec")]
    pub torsion: Vec<BigInt>,
}

impl TwistedClass {
    /// The pairing only sees the free part.
    pub fn square(&self, model: &CohomologyModel) -> BigInt {
        model.free_part.norm(&self.free)
    }

    pub fn neg(&self, model: &CohomologyModel) -> TwistedClass {
        let t: Vec<BigInt> = self.torsion.iter().map(|x| -x).collect();
        TwistedClass { free: self.free.neg(), torsion: model.torsion.normalize(&t) }
    }
}

/// An unordered pair `{r, s}`, stored with `r <= s` lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PcPair {
    pub r: LatticeVector,
    pub s: LatticeVector,
}

impl PcPair {
    pub fn new(a: LatticeVector, b: LatticeVector) -> Self {
        if a <= b {
            PcPair { r: a, s: b }
        } else {
            PcPair { r: b, s: a }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalK {
    pub k: u64,
    pub witness: LatticeVector,
    /// Effective upper bound used for the sweep (from a pair `a·b = 1`).
    pub search_bound: u64,
}

fn positive_u64(x: &BigInt) -> u64 {
    x.abs().to_u64().expect("norm fits in u64")
}

/// Upper bound for the minimal `k`: for each basis vector `a` and its dual
/// `b` (so `a·b = 1`), one of `a²`, `b²`, `(a+b)²` is `≢ 0 mod 4`.
fn minimal_k_bound(fhat: &Lattice) -> u64 {
    let n = fhat.rank();
    let inv = crate::linalg::unimodular_inverse(fhat.gram()).expect("unimodular");
    let four = BigInt::from(4);
    (0..n)
        .map(|i| {
            let a = LatticeVector::basis(n, i);
            let b = LatticeVector(inv.column(i));
            debug_assert!(fhat.inner(&a, &b).is_one());
            let (a2, b2) = (fhat.norm(&a), fhat.norm(&b));
            if !a2.is_multiple_of(&four) {
                positive_u64(&a2)
            } else if !b2.is_multiple_of(&four) {
                positive_u64(&b2)
            } else {
                positive_u64(&fhat.norm(&a.add(&b)))
            }
        })
        .min()
        .expect("rank >= 1")
}

/// Smallest positive `k ≢ 0 (mod 4)` with a vector of norm `-k`, plus the
/// lexicographically first canonical-sign witness.
pub fn minimal_k(fhat: &Lattice) -> Result<MinimalK> {
    if fhat.rank() == 0 {
        return Err(Error::EmptyLattice);
    }
    if !fhat.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    if !fhat.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let bound = minimal_k_bound(fhat);
    for k in (1..=bound).filter(|k| k % 4 != 0) {
        let found = fhat.vectors_of_norm(&-BigInt::from(k), true)?;
        if let Some(witness) = found.into_iter().next() {
            return Ok(MinimalK { k, witness, search_bound: bound });
        }
    }
    unreachable!("a vector of norm -{bound} exists by construction")
}

fn require_negative_square(f: &Lattice, c: &LatticeVector) -> Result<BigInt> {
    let k = -f.norm(c);
    if !k.is_positive() {
        return Err(Error::NonNegativeSquare((-&k).to_string()));
    }
    Ok(k)
}

/// All unordered `{r, s}` with `r + s = c`, `r·s = 0`, sorted.
pub fn enumerate_pc(f: &Lattice, c: &LatticeVector) -> Result<Vec<PcPair>> {
    if !f.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    let k = require_negative_square(f, c)?;
    // r·(c - r) = 0  <=>  r·c = r², and both r², s² lie in [-k, 0]
    let pairs: BTreeSet<PcPair> = f
        .short_vectors(&k)?
        .into_iter()
        .filter(|r| f.inner(r, c) == f.norm(r))
        .map(|r| {
            let s = c.sub(&r);
            PcPair::new(r, s)
        })
        .collect();
    Ok(pairs.into_iter().collect())
}

fn check_k(model: &CohomologyModel, c: &TwistedClass, k: u64) -> Result<()> {
    model.check_class(c)?;
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if -c.square(model) != BigInt::from(k) {
        return Err(Error::Precondition(format!("-c² = {} does not match k = {k}", -c.square(model))));
    }
    if !model.free_part.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    Ok(())
}

/// Torsion residues `t` with `t - c_t ∈ 2T`.
fn torsion_coset(model: &CohomologyModel, c_t: &[BigInt]) -> Vec<Vec<BigInt>> {
    let two = BigInt::from(2);
    let mut out = vec![Vec::new()];
    for (d, ci) in model.torsion.invariant_factors().iter().zip(c_t) {
        let step = d.gcd(&two);
        let start = ci.mod_floor(&step);
        let mut choices = Vec::new();
        let mut r = start;
        while &r < d {
            choices.push(r.clone());
            r += &step;
        }
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Every `v` with `v² = -k` and `v ≡ c (mod 2·H²)`, sorted.
pub fn enumerate_pl_tilde(model: &CohomologyModel, c: &TwistedClass, k: u64) -> Result<Vec<TwistedClass>> {
    check_k(model, c, k)?;
    let two = BigInt::from(2);
    let frees: Vec<LatticeVector> = model
        .free_part
        .vectors_of_norm(&-BigInt::from(k), false)?
        .into_iter()
        .filter(|v| v.congruent_mod(&c.free, &two))
        .collect();
    let c_t = model.torsion.normalize(&c.torsion);
    let torsions = torsion_coset(model, &c_t);
    let mut out: Vec<TwistedClass> = frees
        .iter()
        .flat_map(|f| torsions.iter().map(move |t| TwistedClass { free: f.clone(), torsion: t.clone() }))
        .collect();
    out.sort();
    Ok(out)
}

/// `|P_ℓ| = |P̃_ℓ| / 2`.
pub fn count_pl(model: &CohomologyModel, c: &TwistedClass, k: u64) -> Result<usize> {
    let tilde = enumerate_pl_tilde(model, c, k)?.len();
    if tilde % 2 != 0 {
        return Err(Error::OddTildeCount(tilde));
    }
    Ok(tilde / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub k: u64,
    pub p_ell: usize,
    pub p_ell_tilde: usize,
    #[serde(with = "crate::json::bigint")]
    pub doubled_torsion_order: BigInt,
    pub p_c: usize,
    /// `v ↦ ((c̄+v̄)/2, (c̄−v̄)/2)` lands in `P̃_c`, is onto, and every fibre has size `|2T|`.
    pub bijection_ok: bool,
    pub holds: bool,
}

/// Checks `|P_ℓ| = |2T|·|P_c|` with both sides counted independently, and
/// checks the map `P̃_ℓ / 2T → P̃_c` behind it.
pub fn verify_cardinality_identity(model: &CohomologyModel, c: &TwistedClass, k: u64) -> Result<CardinalityReport> {
    let tilde = enumerate_pl_tilde(model, c, k)?;
    let p_ell = count_pl(model, c, k)?;
    let doubled = model.torsion.doubled_torsion()?.order().expect("finite");
    let pc = enumerate_pc(&model.free_part, &c.free)?;

    let f = &model.free_part;
    let two = BigInt::from(2);
    let mut fibres: BTreeMap<(LatticeVector, LatticeVector), BigInt> = BTreeMap::new();
    let mut well_defined = true;
    for v in &tilde {
        let r = c.free.add(&v.free).div_exact(&two);
        let s = c.free.sub(&v.free).div_exact(&two);
        match (r, s) {
            (Some(r), Some(s)) if f.inner(&r, &s).is_zero() && r.add(&s) == c.free => {
                *fibres.entry((r, s)).or_default() += 1;
            }
            _ => well_defined = false,
        }
    }
    let ordered_pc: BTreeSet<(LatticeVector, LatticeVector)> =
        pc.iter().flat_map(|p| [(p.r.clone(), p.s.clone()), (p.s.clone(), p.r.clone())]).collect();
    let bijection_ok = well_defined
        && fibres.keys().cloned().collect::<BTreeSet<_>>() == ordered_pc
        && fibres.values().all(|n| *n == doubled);

    let holds = BigInt::from(p_ell) == &doubled * BigInt::from(pc.len()) && bijection_ok;
    let report = CardinalityReport {
        k,
        p_ell,
        p_ell_tilde: tilde.len(),
        doubled_torsion_order: doubled,
        p_c: pc.len(),
        bijection_ok,
        holds,
    };
    if !holds {
        return Err(Error::IdentityViolation(serde_json::to_string(&report).expect("report serializes")));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub k: u64,
    pub parity: u8,
    pub p_ell: usize,
    pub p_c: usize,
    #[serde(with = "crate::json::bigint")]
    pub doubled_torsion_order: BigInt,
    pub order_four_torsion: bool,
    /// Whether `|P_ℓ|` is odd.
    pub asserted_value_holds: bool,
    pub findings: Vec<String>,
}

/// `|P_ℓ| mod 2` for `c̄ ∈ F̂` at the minimal `k`.
///
/// The expected value is 1 when the torsion has no element of order 4.
/// Deviations are listed in `findings` rather than returned as errors.
pub fn boundary_parity(model: &CohomologyModel, c: &TwistedClass, k: u64) -> Result<ParityReport> {
    check_k(model, c, k)?;
    let f = &model.free_part;
    let roots = f.root_decomposition()?;
    if roots.d_basis.iter().any(|d| !f.inner(d, &c.free).is_zero()) {
        return Err(Error::Precondition("c̄ is not orthogonal to the norm -1 vectors".into()));
    }
    let min = minimal_k(&roots.fhat)?;
    if min.k != k {
        return Err(Error::Precondition(format!("k = {k} is not the minimal k = {}", min.k)));
    }
    let p_ell = count_pl(model, c, k)?;
    let p_c = enumerate_pc(f, &c.free)?.len();
    let doubled = model.torsion.doubled_torsion()?.order().expect("finite");
    let order_four = model.torsion.has_element_of_order(4);
    let parity = (p_ell % 2) as u8;

    let mut findings = Vec::new();
    if order_four {
        findings.push(format!("torsion {} has an element of order 4; |2T| = {doubled} is even", model.torsion));
    }
    if p_c != 1 {
        findings.push(format!("|P_c| = {p_c} at the minimal k = {k}; expected 1"));
    }
    if parity != 1 && !order_four {
        findings.push(format!("|P_l| = {p_ell} is even without order-4 torsion"));
    }
    Ok(ParityReport {
        k,
        parity,
        p_ell,
        p_c,
        doubled_torsion_order: doubled,
        order_four_torsion: order_four,
        asserted_value_holds: parity == 1,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8_root() -> LatticeVector {
        Lattice::minus_e8().vectors_of_norm(&BigInt::from(-2), true).unwrap()[0].clone()
    }

    fn e8_with(torsion: &[u64]) -> CohomologyModel {
        let orders: Vec<BigInt> = torsion.iter().map(|&d| d.into()).collect();
        CohomologyModel::new(Lattice::minus_e8(), FinAbGroup::from_cyclic_orders(0, &orders)).unwrap()
    }

    #[test]
    fn minimal_k_examples() {
        let m = minimal_k(&Lattice::minus_e8()).unwrap();
        assert_eq!(m.k, 2);
        assert_eq!(Lattice::minus_e8().norm(&m.witness), BigInt::from(-2));
        assert_eq!(m.witness, e8_root());
        let e8e8 = Lattice::minus_e8().orthogonal_sum(&Lattice::minus_e8());
        assert_eq!(minimal_k(&e8e8).unwrap().k, 2);
        assert!(matches!(minimal_k(&Lattice::empty()), Err(Error::EmptyLattice)));
        assert!(matches!(minimal_k(&Lattice::from_i64(&[&[-2]])), Err(Error::NotUnimodular)));
    }

    #[test]
    fn minimal_k_of_unit_lattice_is_one() {
        let m = minimal_k(&Lattice::minus_identity(3)).unwrap();
        assert_eq!(m.k, 1);
        assert_eq!(m.witness, LatticeVector::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn pc_examples() {
        let e8 = Lattice::minus_e8();
        let c = e8_root();
        let pc = enumerate_pc(&e8, &c).unwrap();
        assert_eq!(pc, vec![PcPair::new(LatticeVector::zero(8), c.clone())]);

        let d2 = Lattice::minus_identity(2);
        let pc = enumerate_pc(&d2, &LatticeVector::from_i64(&[1, 1])).unwrap();
        assert_eq!(pc.len(), 2);
        assert!(pc.contains(&PcPair::new(LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1]))));

        let d1 = Lattice::minus_identity(1);
        assert_eq!(enumerate_pc(&d1, &LatticeVector::from_i64(&[1])).unwrap().len(), 1);
        assert!(matches!(enumerate_pc(&d1, &LatticeVector::from_i64(&[0])), Err(Error::NonNegativeSquare(_))));
    }

    #[test]
    fn pl_tilde_examples() {
        let h = e8_with(&[]);
        let c = h.class(e8_root());
        let tilde = enumerate_pl_tilde(&h, &c, 2).unwrap();
        assert_eq!(tilde.len(), 2);
        assert!(tilde.contains(&c) && tilde.contains(&c.neg(&h)));

        let h = e8_with(&[3]);
        let c = h.class(e8_root());
        assert_eq!(enumerate_pl_tilde(&h, &c, 2).unwrap().len(), 6);
        assert!(matches!(enumerate_pl_tilde(&h, &c, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn count_pl_examples() {
        for (t, expected) in [(&[][..], 1), (&[4][..], 2), (&[9][..], 9)] {
            let h = e8_with(t);
            let c = h.class(e8_root());
            assert_eq!(count_pl(&h, &c, 2).unwrap(), expected, "torsion {t:?}");
        }
    }

    #[test]
    fn identity_examples() {
        for (t, lhs) in [(&[][..], 1), (&[4][..], 2), (&[2][..], 1)] {
            let h = e8_with(t);
            let c = h.class(e8_root());
            let r = verify_cardinality_identity(&h, &c, 2).unwrap();
            assert!(r.holds && r.bijection_ok);
            assert_eq!(r.p_ell, lhs);
            assert_eq!(r.p_c, 1);
        }
    }

    #[test]
    fn parity_examples() {
        let h = e8_with(&[]);
        let r = boundary_parity(&h, &h.class(e8_root()), 2).unwrap();
        assert_eq!(r.parity, 1);
        assert!(r.findings.is_empty());

        let h = e8_with(&[9]);
        assert_eq!(boundary_parity(&h, &h.class(e8_root()), 2).unwrap().parity, 1);

        let h = e8_with(&[4]);
        let r = boundary_parity(&h, &h.class(e8_root()), 2).unwrap();
        assert_eq!(r.parity, 0);
        assert!(r.order_four_torsion);
        assert_eq!(r.findings.len(), 1);
    }

    #[test]
    fn parity_rejects_class_outside_fhat() {
        let h = CohomologyModel::torsion_free(Lattice::minus_identity(2));
        let c = h.class(LatticeVector::from_i64(&[1, 1]));
        assert!(matches!(boundary_parity(&h, &c, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn torsion_component_in_class() {
        // c with torsion part 1 in Z/4: the coset c_t + 2T is {1, 3}
        let h = e8_with(&[4]);
        let mut c = h.class(e8_root());
        c.torsion = vec![BigInt::one()];
        let tilde = enumerate_pl_tilde(&h, &c, 2).unwrap();
        assert_eq!(tilde.len(), 4);
        assert!(tilde.iter().all(|v| v.torsion[0].is_odd()));
        assert!(verify_cardinality_identity(&h, &c, 2).unwrap().holds);
    }
}
