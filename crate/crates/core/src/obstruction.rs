//! Invariant records for 4-manifolds, the surgery and connected-sum calculus
//! on them, and a hypothesis checker that turns a non-standard twisted form
//! into a non-smoothability certificate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::finab::FinAbGroup;
use crate::forms::{minimal_k, CohomologyModel, MinimalK};
use crate::json::compact_vec;
use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::IntegerMatrix;

/// Twisted data for one bundle of infinite cyclic groups `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSystemRecord {
    pub name: String,
    pub nontrivial: bool,
    /// `H²(X;ℓ)`: the twisted form on the free part plus the torsion subgroup.
    #[serde(rename = "H2_model")]
    pub h2_model: CohomologyModel,
    pub b1_twisted: usize,
    pub b_plus_twisted: usize,
}

/// Homological invariants of a compact oriented 4-manifold.
///
/// `boundary` is `None` for closed manifolds and otherwise names the
/// homology sphere bounding it. `intersection_form` is `None` once it is no
/// longer tracked (after surgery).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct ManifoldRecord {
    pub name: String,
    pub boundary: Option<String>,
    pub b1: usize,
    #[serde(rename = "H1")]
    pub h1: FinAbGroup,
    pub b_plus: usize,
    pub intersection_form: Option<Lattice>,
    pub local_systems: Vec<LocalSystemRecord>,
}

#[derive(Deserialize)]
struct RawRecord {
    name: String,
    #[serde(default)]
    boundary: Option<String>,
    b1: usize,
    #[serde(rename = "H1")]
    h1: FinAbGroup,
    b_plus: usize,
    #[serde(default)]
    intersection_form: Option<Lattice>,
    #[serde(default)]
    local_systems: Vec<LocalSystemRecord>,
}

impl TryFrom<RawRecord> for ManifoldRecord {
    type Error = Error;
    fn try_from(r: RawRecord) -> Result<Self> {
        let record = ManifoldRecord {
            name: r.name,
            boundary: r.boundary,
            b1: r.b1,
            h1: r.h1,
            b_plus: r.b_plus,
            intersection_form: r.intersection_form,
            local_systems: r.local_systems,
        };
        record.validate()?;
        Ok(record)
    }
}

impl ManifoldRecord {
    pub fn validate(&self) -> Result<()> {
        if self.b1 != self.h1.free_rank() {
            return Err(Error::InvalidRecord(format!(
                "{}: b1 = {} but H1 has free rank {}",
                self.name,
                self.b1,
                self.h1.free_rank()
            )));
        }
        if let Some(q) = &self.intersection_form {
            if !q.is_unimodular() {
                return Err(Error::InvalidRecord(format!("{}: intersection form is not unimodular", self.name)));
            }
        }
        let mut seen = BTreeSet::new();
        for ls in &self.local_systems {
            if !seen.insert(ls.name.as_str()) {
                return Err(Error::InvalidRecord(format!("{}: local system {:?} listed twice", self.name, ls.name)));
            }
            if !ls.h2_model.free_part.is_unimodular() {
                return Err(Error::InvalidRecord(format!(
                    "{}: twisted form of {:?} is not unimodular",
                    self.name, ls.name
                )));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_none()
    }

    pub fn system(&self, name: &str) -> Result<&LocalSystemRecord> {
        self.local_systems.iter().find(|ls| ls.name == name).ok_or_else(|| Error::UnknownSystem(name.into()))
    }

    /// The four-sphere: the identity for connected sum.
    pub fn four_sphere() -> Self {
        ManifoldRecord {
            name: "S4".into(),
            boundary: None,
            b1: 0,
            h1: FinAbGroup::trivial(),
            b_plus: 0,
            intersection_form: Some(Lattice::empty()),
            local_systems: Vec::new(),
        }
    }
}

/// `δ = 1 - b₁ + b⁺`.
pub fn delta(record: &ManifoldRecord) -> i64 {
    1 - record.b1 as i64 + record.b_plus as i64
}

/// `τ + b⁺`, with `τ` the number of even invariant factors of `H₁`.
pub fn tau_plus_bplus(record: &ManifoldRecord) -> usize {
    record.h1.tau() + record.b_plus
}

/// Whether `-b₁(X;ℓ) + b⁺(X;ℓ) = 1 - b₁(X) + b⁺(X)`.
pub fn check_del_indep(record: &ManifoldRecord, ls: &LocalSystemRecord) -> Result<bool> {
    if !ls.nontrivial {
        return Err(Error::TrivialSystem(ls.name.clone()));
    }
    Ok(ls.b_plus_twisted as i64 - ls.b1_twisted as i64 == delta(record))
}

/// `2k - 3δ`.
pub fn expected_instanton_dim(k: u64, record: &ManifoldRecord) -> i64 {
    2 * k as i64 - 3 * delta(record)
}

/// An embedded circle to surger, described by its class in `H₁`.
///
/// `class` is in the component coordinates of `H₁` (torsion factors first).
/// If `local_system` names a system, the circle is taken to carry that
/// system trivially and to represent a free generator of its twisted `H₁`;
/// the system survives the surgery with one fewer twisted generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleDescriptor {
    #[serde(with = "compact_vec")]
    pub class: Vec<BigInt>,
    #[serde(default)]
    pub local_system: Option<String>,
}

impl CircleDescriptor {
    pub fn new(class: Vec<BigInt>, local_system: Option<&str>) -> Self {
        CircleDescriptor { class, local_system: local_system.map(str::to_owned) }
    }
}

/// Whether the class survives reduction to `H₁ ⊗ Z/2`.
pub fn nonzero_mod_two(h1: &FinAbGroup, class: &[BigInt]) -> bool {
    class.len() == h1.num_components()
        && h1.moduli().iter().zip(class).any(|(m, x)| (m.is_zero() || m.is_even()) && x.is_odd())
}

/// Surgery on a circle whose class is non-zero mod 2.
///
/// `H₁` becomes `H₁/⟨γ⟩`, so `b₁(Z/2)` drops by one. `b⁺` is then fixed by
/// requiring `δ` to rise by one, which keeps `τ + b⁺` unchanged. The
/// untwisted form is no longer tracked, and local systems other than the one
/// named by the descriptor are dropped.
pub fn surgery_transform(record: &ManifoldRecord, circle: &CircleDescriptor) -> Result<ManifoldRecord> {
    let n = record.h1.num_components();
    if circle.class.len() != n {
        return Err(Error::Shape(format!("circle class has {} coordinates, H1 has {n}", circle.class.len())));
    }
    if !nonzero_mod_two(&record.h1, &circle.class) {
        return Err(Error::ZeroMod2Class);
    }
    let relations = IntegerMatrix::hstack(
        &record.h1.relation_lattice(),
        &IntegerMatrix::from_columns(n, std::slice::from_ref(&circle.class)),
    );
    let h1 = FinAbGroup::from_presentation(&relations);
    let b1 = h1.free_rank();
    let b_plus = record.b_plus + 1 - (record.b1 - b1);

    let mut local_systems = Vec::new();
    if let Some(name) = &circle.local_system {
        let ls = record.system(name)?;
        if ls.b1_twisted == 0 {
            return Err(Error::Precondition(format!("{name} has no free twisted H1 class to kill")));
        }
        local_systems.push(LocalSystemRecord { b1_twisted: ls.b1_twisted - 1, ..ls.clone() });
    }
    Ok(ManifoldRecord {
        name: record.name.clone(),
        boundary: record.boundary.clone(),
        b1,
        h1,
        b_plus,
        intersection_form: None,
        local_systems,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub record: ManifoldRecord,
    pub surgeries: usize,
    /// `b₁(X';Z/2) = τ + b⁺ + 1` of the reduced record.
    pub b_mod2: usize,
    pub bound_holds: bool,
    pub twisted_b1_cleared: bool,
}

/// Surgers `-δ` free generators of `H₁` that carry `ℓ` trivially, landing on `δ = 0`.
pub fn reduce_to_delta_zero(record: &ManifoldRecord, system: &str) -> Result<Reduction> {
    let d = delta(record);
    if d > 0 {
        return Err(Error::PositiveDelta(d));
    }
    let ls = record.system(system)?;
    if !check_del_indep(record, ls)? {
        return Err(Error::Precondition(format!("{system}: twisted Betti numbers disagree with delta")));
    }
    let surgeries = (-d) as usize;
    let mut current = record.clone();
    for _ in 0..surgeries {
        let mut class = vec![BigInt::zero(); current.h1.num_components()];
        class[current.h1.invariant_factors().len()] = BigInt::from(1);
        current = surgery_transform(&current, &CircleDescriptor::new(class, Some(system)))?;
    }
    debug_assert_eq!(delta(&current), 0);
    let b_mod2 = current.h1.mod2_dimension();
    let twisted_b1_cleared = current.system(system)?.b1_twisted == 0;
    Ok(Reduction { record: current, surgeries, b_mod2, bound_holds: b_mod2 <= 3, twisted_b1_cleared })
}

/// How a local system on a connected sum restricts to the two summands.
/// `None` on a side means the system is trivial there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemPairing {
    pub name: String,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl SystemPairing {
    pub fn new(name: &str, left: Option<&str>, right: Option<&str>) -> Self {
        SystemPairing { name: name.into(), left: left.map(Into::into), right: right.map(Into::into) }
    }
}

/// `(twisted form, torsion, b₁, b⁺, nontrivial)` contributed by one summand.
fn summand_data(record: &ManifoldRecord, side: &Option<String>) -> Result<(Lattice, FinAbGroup, usize, usize, bool)> {
    match side {
        Some(name) => {
            let ls = record.system(name)?;
            Ok((
                ls.h2_model.free_part.clone(),
                ls.h2_model.torsion.clone(),
                ls.b1_twisted,
                ls.b_plus_twisted,
                ls.nontrivial,
            ))
        }
        None => {
            let form = record
                .intersection_form
                .clone()
                .ok_or_else(|| Error::Precondition(format!("{}: intersection form is not tracked", record.name)))?;
            Ok((form, record.h1.torsion_subgroup(), record.b1, record.b_plus, false))
        }
    }
}

/// Connected sum of closed records. Untwisted data adds; each pairing
/// produces a local system on the sum whose twisted form is the orthogonal
/// sum of the two restrictions.
pub fn connected_sum(a: &ManifoldRecord, b: &ManifoldRecord, pairings: &[SystemPairing]) -> Result<ManifoldRecord> {
    for r in [a, b] {
        if let Some(y) = &r.boundary {
            return Err(Error::BoundaryRecord(format!("{} (bounded by {y})", r.name)));
        }
    }
    let mut local_systems = Vec::new();
    for p in pairings {
        if p.left.is_none() && p.right.is_none() {
            return Err(Error::Precondition(format!("{}: pairing is trivial on both summands", p.name)));
        }
        let (fa, ta, b1a, bpa, na) = summand_data(a, &p.left)?;
        let (fb, tb, b1b, bpb, nb) = summand_data(b, &p.right)?;
        let both_twisted = p.left.is_some() && p.right.is_some();
        local_systems.push(LocalSystemRecord {
            name: p.name.clone(),
            nontrivial: na || nb,
            h2_model: CohomologyModel::new(fa.orthogonal_sum(&fb), ta.direct_sum(&tb))?,
            b1_twisted: b1a + b1b + usize::from(both_twisted),
            b_plus_twisted: bpa + bpb,
        });
    }
    let intersection_form = match (&a.intersection_form, &b.intersection_form) {
        (Some(p), Some(q)) => Some(p.orthogonal_sum(q)),
        _ => None,
    };
    Ok(ManifoldRecord {
        name: format!("{}#{}", a.name, b.name),
        boundary: None,
        b1: a.b1 + b.b1,
        h1: a.h1.direct_sum(&b.h1),
        b_plus: a.b_plus + b.b_plus,
        intersection_form,
        local_systems,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub witness: serde_json::Value,
}

/// Data proving (or refuting) standardness of the twisted form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardnessWitness {
    pub standard: bool,
    pub rank_d: usize,
    pub d_basis: Vec<LatticeVector>,
    pub fhat_basis: Vec<LatticeVector>,
    pub fhat: Lattice,
    pub minimal_k: Option<MinimalK>,
    pub expected_instanton_dim: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "failed")]
pub enum Verdict {
    NonSmoothable,
    NoObstruction,
    HypothesisFailure(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub record: String,
    pub local_system: String,
    pub delta: i64,
    pub tau_plus_bplus: usize,
    pub hypotheses: Vec<HypothesisCheck>,
    pub standardness: Option<StandardnessWitness>,
    pub advisories: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl ObstructionVerdict {
    /// `NonSmoothable` only with every hypothesis passed and a non-standard form.
    pub fn is_consistent(&self) -> bool {
        let all_pass = self.certificate.hypotheses.iter().all(|h| h.passed);
        let standard = self.certificate.standardness.as_ref().map(|s| s.standard);
        match &self.verdict {
            Verdict::NonSmoothable => all_pass && standard == Some(false),
            Verdict::NoObstruction => all_pass && standard == Some(true),
            Verdict::HypothesisFailure(ids) => {
                !ids.is_empty()
                    && ids.iter().all(|id| self.certificate.hypotheses.iter().any(|h| &h.id == id && !h.passed))
            }
        }
    }
}

fn order_four_element(torsion: &FinAbGroup) -> Option<Vec<BigInt>> {
    let four = BigInt::from(4);
    let i = torsion.invariant_factors().iter().position(|d| d.is_multiple_of(&four))?;
    let mut x = vec![BigInt::zero(); torsion.num_components()];
    x[i] = &torsion.invariant_factors()[i] / &four;
    Some(x)
}

fn evaluate(
    record: &ManifoldRecord,
    ls: &LocalSystemRecord,
) -> Result<(Vec<HypothesisCheck>, Option<StandardnessWitness>)> {
    let form = &ls.h2_model.free_part;
    let tau = record.h1.tau();
    let definite = form.is_negative_definite();
    let unimodular = form.is_unimodular();
    let order_four = order_four_element(&ls.h2_model.torsion);
    let checks = vec![
        HypothesisCheck {
            id: "H1".into(),
            description: "tau + b+ <= 2".into(),
            passed: tau + record.b_plus <= 2,
            witness: json!({ "tau": tau, "b_plus": record.b_plus, "sum": tau + record.b_plus }),
        },
        HypothesisCheck {
            id: "H2".into(),
            description: "local system is non-trivial".into(),
            passed: ls.nontrivial,
            witness: json!({ "nontrivial": ls.nontrivial }),
        },
        HypothesisCheck {
            id: "H3".into(),
            description: "twisted form is negative definite".into(),
            passed: definite && unimodular,
            witness: json!({
                "rank": form.rank(),
                "negative_definite": definite,
                "unimodular": unimodular,
                "determinant": form.determinant().to_string(),
            }),
        },
        HypothesisCheck {
            id: "H4".into(),
            description: "twisted H2 has no element of order 4".into(),
            passed: order_four.is_none(),
            witness: json!({
                "torsion": ls.h2_model.torsion,
                "order_four_element": order_four.map(|x| x.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
            }),
        },
    ];
    let standardness = if definite && unimodular {
        let rd = form.root_decomposition()?;
        let standard = rd.fhat.rank() == 0;
        let mk = if standard { None } else { Some(minimal_k(&rd.fhat)?) };
        let dim = mk.as_ref().map(|m| expected_instanton_dim(m.k, record));
        Some(StandardnessWitness {
            standard,
            rank_d: rd.rank_d(),
            d_basis: rd.d_basis,
            fhat_basis: rd.fhat_basis,
            fhat: rd.fhat,
            minimal_k: mk,
            expected_instanton_dim: dim,
        })
    } else {
        None
    };
    Ok((checks, standardness))
}

/// Checks the closed-manifold criterion: if `τ + b⁺ ≤ 2`, `ℓ` is
/// non-trivial, the twisted form is negative definite and twisted `H²` has
/// no element of order 4, a smooth structure forces the twisted form to be
/// standard. A non-standard form therefore certifies non-smoothability.
pub fn corollary_check(record: &ManifoldRecord, ls: &LocalSystemRecord) -> Result<ObstructionVerdict> {
    let (hypotheses, standardness) = evaluate(record, ls)?;
    let failed: Vec<String> = hypotheses.iter().filter(|h| !h.passed).map(|h| h.id.clone()).collect();
    let verdict = if !failed.is_empty() {
        Verdict::HypothesisFailure(failed)
    } else if standardness.as_ref().is_some_and(|s| s.standard) {
        Verdict::NoObstruction
    } else {
        Verdict::NonSmoothable
    };
    let mut advisories = Vec::new();
    if !record.is_closed() {
        advisories.push("record has boundary; the closed-manifold criterion assumes a closed manifold".into());
    }
    if let (false, Some(q)) = (matches!(verdict, Verdict::HypothesisFailure(_)), &record.intersection_form) {
        if q.rank() > 0 && q.is_even() {
            advisories.push(
                "the untwisted form is even; a smooth manifold satisfying these hypotheses cannot be spin".into(),
            );
        }
    }
    let out = ObstructionVerdict {
        verdict,
        certificate: Certificate {
            record: record.name.clone(),
            local_system: ls.name.clone(),
            delta: delta(record),
            tau_plus_bplus: tau_plus_bplus(record),
            hypotheses,
            standardness,
            advisories,
        },
    };
    assert!(out.is_consistent(), "inconsistent certificate for {}", record.name);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub record: String,
    pub boundary: Option<String>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub standardness: Option<StandardnessWitness>,
    pub conclusion: Option<String>,
    pub notes: Vec<String>,
}

/// For a manifold bounded by a homology sphere `Y`: when every hypothesis
/// holds and the twisted form is non-standard, reports that the Floer
/// map `δ₀ : HF⁴(Y;Z/2) → Z/2` is non-zero. Nothing Floer-theoretic is computed.
pub fn theorem_report(record: &ManifoldRecord, ls: &LocalSystemRecord) -> Result<TheoremReport> {
    let (mut hypotheses, standardness) = evaluate(record, ls)?;
    hypotheses.insert(
        0,
        HypothesisCheck {
            id: "H0".into(),
            description: "boundary is an integral homology sphere".into(),
            passed: record.boundary.is_some(),
            witness: json!({ "boundary": record.boundary }),
        },
    );
    let mut notes = Vec::new();
    let all_pass = hypotheses.iter().all(|h| h.passed);
    let conclusion = match (&record.boundary, standardness.as_ref().map(|s| s.standard)) {
        (Some(y), Some(false)) if all_pass => Some(format!("delta_0 : HF^4({y}; Z/2) -> Z/2 is non-zero")),
        _ => {
            for h in hypotheses.iter().filter(|h| !h.passed) {
                notes.push(format!("hypothesis {} fails: {}", h.id, h.description));
            }
            if standardness.as_ref().is_some_and(|s| s.standard) {
                notes.push("twisted form is standard; no conclusion drawn".into());
            }
            None
        }
    };
    Ok(TheoremReport {
        record: record.name.clone(),
        boundary: record.boundary.clone(),
        hypotheses,
        standardness,
        conclusion,
        notes,
    })
}

/// Sample records used by the command-line tool and the test suites.
pub mod samples {
    use super::*;

    /// A closed manifold with form `(-E8) ⊕ ⟨-1⟩^m`, or `⟨-1⟩^n` when `e8` is false.
    pub fn definite(name: &str, e8: bool, diagonal: usize) -> ManifoldRecord {
        let form = if e8 {
            Lattice::minus_e8().orthogonal_sum(&Lattice::minus_identity(diagonal))
        } else {
            Lattice::minus_identity(diagonal)
        };
        ManifoldRecord {
            name: name.into(),
            boundary: None,
            b1: 0,
            h1: FinAbGroup::trivial(),
            b_plus: 0,
            intersection_form: Some(form),
            local_systems: Vec::new(),
        }
    }

    fn hyperbolic(copies: usize) -> Lattice {
        let h = Lattice::from_i64(&[&[0, 1], &[1, 0]]);
        (0..copies).fold(Lattice::empty(), |acc, _| acc.orthogonal_sum(&h))
    }

    /// `Σ₁ × S²` with `ℓ` pulled back from a non-trivial class on the torus.
    pub fn torus_times_sphere() -> ManifoldRecord {
        ManifoldRecord {
            name: "T2xS2".into(),
            boundary: None,
            b1: 2,
            h1: FinAbGroup::free(2),
            b_plus: 1,
            intersection_form: Some(hyperbolic(1)),
            local_systems: vec![LocalSystemRecord {
                name: "l".into(),
                nontrivial: true,
                h2_model: CohomologyModel::new(Lattice::empty(), FinAbGroup::cyclic(2)).expect("torsion"),
                b1_twisted: 0,
                b_plus_twisted: 0,
            }],
        }
    }

    /// `T³ × S¹` with `ℓ` non-trivial on one circle factor.
    pub fn four_torus() -> ManifoldRecord {
        let z2 = FinAbGroup::cyclic(2);
        ManifoldRecord {
            name: "T3xS1".into(),
            boundary: None,
            b1: 4,
            h1: FinAbGroup::free(4),
            b_plus: 3,
            intersection_form: Some(hyperbolic(3)),
            local_systems: vec![LocalSystemRecord {
                name: "l".into(),
                nontrivial: true,
                h2_model: CohomologyModel::new(Lattice::empty(), z2.direct_sum(&z2).direct_sum(&z2)).expect("torsion"),
                b1_twisted: 0,
                b_plus_twisted: 0,
            }],
        }
    }

    /// `V # W` with the local system `l` trivial on `V` and taken from `W`.
    pub fn sum_with_twisted(v: &ManifoldRecord, w: &ManifoldRecord) -> ManifoldRecord {
        connected_sum(v, w, &[SystemPairing::new("l", None, Some("l"))]).expect("closed summands")
    }
}
