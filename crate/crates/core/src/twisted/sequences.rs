//! Long exact sequences in homology, built from explicit short exact
//! sequences of chain complexes and checked position by position.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::homology::{cohomology, degree_homology, homology, induced_map, solve_mod, DegreeHomology};
use super::{ChainComplex, CoefficientSystem, EquivariantComplex};
use crate::error::{Error, Result};
use crate::finab::{is_exact_at, AbHom, FinAbGroup};
use crate::linalg::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionReport {
    pub label: String,
    pub group: FinAbGroup,
    pub image_of_incoming: FinAbGroup,
    pub kernel_of_outgoing: FinAbGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub sequence: String,
    pub positions: Vec<PositionReport>,
    pub exact: bool,
}

impl ExactnessReport {
    fn into_result(self) -> Result<Self> {
        if self.exact {
            return Ok(self);
        }
        let bad: Vec<&str> = self.positions.iter().filter(|p| !p.exact).map(|p| p.label.as_str()).collect();
        Err(Error::ExactnessViolation(format!("{} fails at {}", self.sequence, bad.join(", "))))
    }
}

/// `0 -> sub --f--> mid --g--> quot -> 0`, with `f` and `g` given per degree.
struct ShortExactSequence<'a> {
    sub: &'a ChainComplex,
    mid: &'a ChainComplex,
    quot: &'a ChainComplex,
    f: &'a dyn Fn(usize) -> IntegerMatrix,
    g: &'a dyn Fn(usize) -> IntegerMatrix,
    labels: [&'a str; 3],
}

impl ShortExactSequence<'_> {
    /// Connecting map `H_k(quot) -> H_{k-1}(sub)` by lifting, applying `∂`, and pulling back.
    fn connecting(&self, k: usize, quot_h: &DegreeHomology, sub_h: &DegreeHomology) -> Result<AbHom> {
        let g = (self.g)(k);
        let f = (self.f)(k - 1);
        let d = self.mid.boundary(k as isize);
        let broken = || Error::ExactnessViolation(format!("zig-zag lift fails in degree {k}"));
        let cols = quot_h
            .generators()
            .iter()
            .map(|z| {
                let y = solve_mod(&g, z, self.quot.modulus()).ok_or_else(broken)?;
                let w = d.mul_vec(&y);
                let x = solve_mod(&f, &w, self.mid.modulus()).ok_or_else(broken)?;
                sub_h.class_of(&x).ok_or_else(broken)
            })
            .collect::<Result<Vec<Vec<BigInt>>>>()?;
        Ok(AbHom::new(
            quot_h.group.clone(),
            sub_h.group.clone(),
            IntegerMatrix::from_columns(sub_h.group.num_components(), &cols),
        ))
    }

    fn report(&self, name: &str) -> Result<ExactnessReport> {
        let top = [self.sub, self.mid, self.quot].iter().map(|c| c.ranks().len()).max().unwrap_or(0);
        let mut groups: Vec<(String, FinAbGroup)> = Vec::new();
        let mut maps: Vec<AbHom> = Vec::new();
        let sub_h: Vec<DegreeHomology> = (0..top).map(|k| degree_homology(self.sub, k as isize)).collect();
        for k in (0..top).rev() {
            let a = &sub_h[k];
            let b = degree_homology(self.mid, k as isize);
            let c = degree_homology(self.quot, k as isize);
            groups.push((format!("{}[{k}]", self.labels[0]), a.group.clone()));
            groups.push((format!("{}[{k}]", self.labels[1]), b.group.clone()));
            groups.push((format!("{}[{k}]", self.labels[2]), c.group.clone()));
            maps.push(induced_map(a, &b, &(self.f)(k))?);
            maps.push(induced_map(&b, &c, &(self.g)(k))?);
            if k > 0 {
                maps.push(self.connecting(k, &c, &sub_h[k - 1])?);
            }
        }
        let positions = groups
            .iter()
            .enumerate()
            .map(|(i, (label, group))| {
                let incoming =
                    if i == 0 { AbHom::zero(FinAbGroup::trivial(), group.clone()) } else { maps[i - 1].clone() };
                let outgoing =
                    maps.get(i).cloned().unwrap_or_else(|| AbHom::zero(group.clone(), FinAbGroup::trivial()));
                PositionReport {
                    label: label.clone(),
                    group: group.clone(),
                    image_of_incoming: incoming.image(),
                    kernel_of_outgoing: outgoing.kernel(),
                    exact: is_exact_at(&incoming, &outgoing),
                }
            })
            .collect::<Vec<_>>();
        let exact = positions.iter().all(|p| p.exact);
        ExactnessReport { sequence: name.into(), positions, exact }.into_result()
    }
}

/// Exactness of `H_k(X;ℓ) -> H_k(X̃;Z) -> H_k(X;Z) -> H_{k-1}(X;ℓ)`.
///
/// The chain-level sequence embeds `ℓ` into the cover's chains by
/// `x ↦ (1 - t)x` and projects by the augmentation `t ↦ 1`.
pub fn les_double_cover_report(c: &EquivariantComplex) -> Result<ExactnessReport> {
    let sub = c.specialize(CoefficientSystem::SignZ);
    let mid = c.specialize(CoefficientSystem::DoubleCover);
    let quot = c.specialize(CoefficientSystem::TrivialZ);
    let rank = |k: usize| c.ranks().get(k).copied().unwrap_or(0);
    let f = |k: usize| {
        let id = IntegerMatrix::identity(rank(k));
        let mut m = IntegerMatrix::zeros(2 * rank(k), rank(k));
        m.set_block(0, 0, &id);
        m.set_block(rank(k), 0, &id.neg());
        m
    };
    let g = |k: usize| {
        let id = IntegerMatrix::identity(rank(k));
        IntegerMatrix::hstack(&id, &id)
    };
    ShortExactSequence { sub: &sub, mid: &mid, quot: &quot, f: &f, g: &g, labels: ["H(X;l)", "H(X~;Z)", "H(X;Z)"] }
        .report("double cover sequence")
}

/// Exactness of `H_q(X;ℓ) --·2--> H_q(X;ℓ) -> H_q(X;Z/2) -> H_{q-1}(X;ℓ)`.
pub fn bockstein_report(c: &EquivariantComplex) -> Result<ExactnessReport> {
    let sign = c.specialize(CoefficientSystem::SignZ);
    let mod2 = c.specialize(CoefficientSystem::ModTwo);
    let rank = |k: usize| c.ranks().get(k).copied().unwrap_or(0);
    let f = |k: usize| IntegerMatrix::identity(rank(k)).scale(&BigInt::from(2));
    let g = |k: usize| IntegerMatrix::identity(rank(k));
    ShortExactSequence { sub: &sign, mid: &sign, quot: &mod2, f: &f, g: &g, labels: ["H(X;l)", "H(X;l)", "H(X;Z/2)"] }
        .report("Bockstein sequence")
}

/// Compares `H^q(X;ℓ)` with `Ext(H_{q-1}(X;ℓ), Z) ⊕ Hom(H_q(X;ℓ), Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalCoefficientsReport {
    pub degree: isize,
    pub cohomology: FinAbGroup,
    pub ext_term: FinAbGroup,
    pub hom_rank: usize,
    pub consistent: bool,
}

pub fn universal_coefficients_report(c: &EquivariantComplex, q: isize) -> Result<UniversalCoefficientsReport> {
    let sign = c.specialize(CoefficientSystem::SignZ);
    let h = homology(&sign)?;
    let coh = cohomology(&sign)?;
    let cohomology = coh.group(q);
    let ext_term = h.group(q - 1).torsion_subgroup();
    let hom_rank = h.group(q).free_rank();
    let consistent = cohomology.torsion_subgroup() == ext_term && cohomology.free_rank() == hom_rank;
    Ok(UniversalCoefficientsReport { degree: q, cohomology, ext_term, hom_rank, consistent })
}
