//! Chain complexes over `Z[Z/2]` and their coefficient specializations.
//!
//! An equivariant complex models the cellular chains of a double cover
//! `X̃ → X`: each degree is a free `Z[t]/(t² - 1)` module and each boundary is
//! `A + B·t` with integer matrices `A`, `B`. Substituting `t = 1`, `t = -1`,
//! reducing mod 2, or expanding over `Z` gives the chains of `X` with
//! coefficients in `Z`, `ℓ`, `Z/2` and of `X̃` respectively.

mod homology;
mod models;
mod sequences;

pub use homology::{cohomology, degree_homology, homology, induced_map, DegreeHomology, HomologyProfile};
pub use models::{builtin_model, random_equivariant_basis_change, Model};
pub use sequences::{
    bockstein_report, les_double_cover_report, universal_coefficients_report, ExactnessReport, PositionReport,
    UniversalCoefficientsReport,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// A chain complex of free modules `Z^{r_i}` or `(Z/m)^{r_i}`.
///
/// `boundaries[i]` is `∂_{i+1} : C_{i+1} -> C_i`, a `r_i × r_{i+1}` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
    modulus: u32,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntegerMatrix>, modulus: u32) -> Result<Self> {
        if !ranks.is_empty() && boundaries.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} degrees need {} boundary maps, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[i] || b.cols() != ranks[i + 1] {
                return Err(Error::Shape(format!(
                    "boundary in degree {} is {}x{}, expected {}x{}",
                    i + 1,
                    b.rows(),
                    b.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        let c = ChainComplex { ranks, boundaries, modulus };
        c.validate()?;
        Ok(c)
    }

    pub fn empty() -> Self {
        ChainComplex { ranks: Vec::new(), boundaries: Vec::new(), modulus: 0 }
    }

    pub fn point() -> Self {
        ChainComplex { ranks: vec![1], boundaries: Vec::new(), modulus: 0 }
    }

    /// Highest degree with a (possibly zero-rank) chain group, `None` if empty.
    pub fn dimension(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: isize) -> usize {
        if degree < 0 {
            0
        } else {
            self.ranks.get(degree as usize).copied().unwrap_or(0)
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `∂_degree : C_degree -> C_{degree-1}`; zero outside the stored range.
    pub fn boundary(&self, degree: isize) -> IntegerMatrix {
        if degree >= 1 && (degree as usize) <= self.boundaries.len() {
            self.boundaries[degree as usize - 1].clone()
        } else {
            IntegerMatrix::zeros(self.rank(degree - 1), self.rank(degree))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    fn validate(&self) -> Result<()> {
        for (i, pair) in self.boundaries.windows(2).enumerate() {
            let comp = pair[0].mul(&pair[1]);
            let zero =
                if self.modulus == 0 { comp.is_zero() } else { comp.reduce_mod(&BigInt::from(self.modulus)).is_zero() };
            if !zero {
                return Err(Error::NotAComplex { degree: i + 2 });
            }
        }
        Ok(())
    }

    /// Dual complex: degree `j` holds `C_{d-j}` with boundary `∂ᵀ`.
    /// Its homology in degree `d - q` is the cohomology `H^q`.
    pub fn dual(&self) -> ChainComplex {
        let mut ranks = self.ranks.clone();
        ranks.reverse();
        let boundaries = self.boundaries.iter().rev().map(IntegerMatrix::transpose).collect();
        ChainComplex { ranks, boundaries, modulus: self.modulus }
    }

    /// Tensor product over the integers with the Koszul sign `(-1)^i`.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let (ranks, offsets) = tensor_layout(&self.ranks, &other.ranks);
        let boundaries = (1..ranks.len())
            .map(|n| {
                tensor_boundary(
                    n,
                    &ranks,
                    &offsets,
                    &self.ranks,
                    &other.ranks,
                    |i| self.boundary(i),
                    |j| other.boundary(j),
                    true,
                )
            })
            .collect();
        ChainComplex { ranks, boundaries, modulus: self.modulus.max(other.modulus) }
    }
}

/// `(i, j, offset)` of each `C_i ⊗ P_j` block inside one total degree.
type BlockOffsets = Vec<(usize, usize, usize)>;

/// Ranks of `C ⊗ P` and, per total degree, the offset of each `C_i ⊗ P_j` block.
fn tensor_layout(c: &[usize], p: &[usize]) -> (Vec<usize>, Vec<BlockOffsets>) {
    if c.is_empty() || p.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let top = c.len() + p.len() - 1;
    let mut ranks = vec![0; top];
    let mut offsets = vec![Vec::new(); top];
    for (n, slot) in offsets.iter_mut().enumerate() {
        for (i, &ci) in c.iter().enumerate() {
            if n < i || n - i >= p.len() {
                continue;
            }
            let j = n - i;
            slot.push((i, j, ranks[n]));
            ranks[n] += ci * p[j];
        }
    }
    (ranks, offsets)
}

/// Boundary `∂_n` of a tensor product. `left_d(i)` is the left factor's
/// boundary in degree `i`; with `include_right` false the `(-1)^i ⊗ ∂_P`
/// term is omitted (used for the twist part, on which the deck action acts).
#[allow(clippy::too_many_arguments)]
fn tensor_boundary(
    n: usize,
    ranks: &[usize],
    offsets: &[Vec<(usize, usize, usize)>],
    c: &[usize],
    p: &[usize],
    left_d: impl Fn(isize) -> IntegerMatrix,
    right_d: impl Fn(isize) -> IntegerMatrix,
    include_right: bool,
) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(ranks[n - 1], ranks[n]);
    let find =
        |deg: usize, i: usize, j: usize| offsets[deg].iter().find(|(a, b, _)| *a == i && *b == j).map(|(_, _, o)| *o);
    for &(i, j, col0) in &offsets[n] {
        if i >= 1 {
            if let Some(row0) = find(n - 1, i - 1, j) {
                let block = IntegerMatrix::kronecker(&left_d(i as isize), &IntegerMatrix::identity(p[j]));
                m.set_block(row0, col0, &block);
            }
        }
        if include_right && j >= 1 {
            if let Some(row0) = find(n - 1, i, j - 1) {
                let mut block = IntegerMatrix::kronecker(&IntegerMatrix::identity(c[i]), &right_d(j as isize));
                if i % 2 == 1 {
                    block = block.neg();
                }
                m.set_block(row0, col0, &block);
            }
        }
    }
    m
}

/// Coefficients for specializing an equivariant complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientSystem {
    /// `t = 1`: chains of `X` with integer coefficients.
    TrivialZ,
    /// `t = -1`: chains of `X` with coefficients in `ℓ`.
    SignZ,
    /// `t = 1` reduced mod 2.
    ModTwo,
    /// Expansion over `Z`: chains of the double cover.
    DoubleCover,
}

impl FromStr for CoefficientSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "trivial" => Ok(CoefficientSystem::TrivialZ),
            "sign" | "l" | "twisted" => Ok(CoefficientSystem::SignZ),
            "mod2" | "z2" => Ok(CoefficientSystem::ModTwo),
            "cover" | "double-cover" => Ok(CoefficientSystem::DoubleCover),
            other => Err(Error::Parse(format!("unknown coefficient system {other:?}"))),
        }
    }
}

impl fmt::Display for CoefficientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoefficientSystem::TrivialZ => "Z",
            CoefficientSystem::SignZ => "sign",
            CoefficientSystem::ModTwo => "mod2",
            CoefficientSystem::DoubleCover => "cover",
        };
        f.write_str(s)
    }
}

/// Boundary `A + B·t` of an equivariant complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingMatrix {
    #[serde(rename = "const")]
    pub constant: IntegerMatrix,
    pub twist: IntegerMatrix,
}

impl GroupRingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GroupRingMatrix { constant: IntegerMatrix::zeros(rows, cols), twist: IntegerMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        GroupRingMatrix { constant: IntegerMatrix::identity(n), twist: IntegerMatrix::zeros(n, n) }
    }

    pub fn rows(&self) -> usize {
        self.constant.rows()
    }

    pub fn cols(&self) -> usize {
        self.constant.cols()
    }

    /// Product in the group ring, using `t² = 1`.
    pub fn mul(&self, other: &GroupRingMatrix) -> GroupRingMatrix {
        GroupRingMatrix {
            constant: self.constant.mul(&other.constant).add(&self.twist.mul(&other.twist)),
            twist: self.constant.mul(&other.twist).add(&self.twist.mul(&other.constant)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.twist.is_zero()
    }

    /// Integer matrix over the basis `(e_1..e_r, t·e_1..t·e_r)`.
    pub fn expand(&self) -> IntegerMatrix {
        IntegerMatrix::block2x2(&self.constant, &self.twist, &self.twist, &self.constant)
    }
}

/// A finite chain complex of free `Z[Z/2]` modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComplex {
    ranks: Vec<usize>,
    boundaries: Vec<GroupRingMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    dimension: isize,
    ranks: Vec<usize>,
    boundaries: Vec<GroupRingMatrix>,
}

impl Serialize for EquivariantComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            dimension: self.ranks.len() as isize - 1,
            ranks: self.ranks.clone(),
            boundaries: self.boundaries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquivariantComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(d)?;
        if raw.dimension + 1 != raw.ranks.len() as isize {
            return Err(serde::de::Error::custom(format!(
                "dimension {} does not match {} ranks",
                raw.dimension,
                raw.ranks.len()
            )));
        }
        EquivariantComplex::new(raw.ranks, raw.boundaries).map_err(serde::de::Error::custom)
    }
}

impl EquivariantComplex {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<GroupRingMatrix>) -> Result<Self> {
        if !ranks.is_empty() && boundaries.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} degrees need {} boundary maps, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.constant.rows() != ranks[i]
                || b.constant.cols() != ranks[i + 1]
                || b.twist.rows() != ranks[i]
                || b.twist.cols() != ranks[i + 1]
            {
                return Err(Error::Shape(format!("boundary in degree {} has the wrong shape", i + 1)));
            }
        }
        for (i, pair) in boundaries.windows(2).enumerate() {
            if !pair[0].mul(&pair[1]).is_zero() {
                return Err(Error::NotAComplex { degree: i + 2 });
            }
        }
        Ok(EquivariantComplex { ranks, boundaries })
    }

    pub fn empty() -> Self {
        EquivariantComplex { ranks: Vec::new(), boundaries: Vec::new() }
    }

    /// The trivial double cover `X ⊔ X`: the deck action never mixes cells.
    pub fn trivial_cover(plain: &ChainComplex) -> Self {
        assert_eq!(plain.modulus(), 0, "plain complexes are integral");
        let boundaries = plain
            .boundaries
            .iter()
            .map(|b| GroupRingMatrix { constant: b.clone(), twist: IntegerMatrix::zeros(b.rows(), b.cols()) })
            .collect();
        EquivariantComplex { ranks: plain.ranks.clone(), boundaries }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn dimension(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn boundaries(&self) -> &[GroupRingMatrix] {
        &self.boundaries
    }

    pub fn specialize(&self, coeff: CoefficientSystem) -> ChainComplex {
        let map = |f: &dyn Fn(&GroupRingMatrix) -> IntegerMatrix| -> Vec<IntegerMatrix> {
            self.boundaries.iter().map(f).collect()
        };
        match coeff {
            CoefficientSystem::TrivialZ => {
                ChainComplex { ranks: self.ranks.clone(), boundaries: map(&|b| b.constant.add(&b.twist)), modulus: 0 }
            }
            CoefficientSystem::SignZ => {
                ChainComplex { ranks: self.ranks.clone(), boundaries: map(&|b| b.constant.sub(&b.twist)), modulus: 0 }
            }
            CoefficientSystem::ModTwo => ChainComplex {
                ranks: self.ranks.clone(),
                boundaries: map(&|b| b.constant.add(&b.twist).reduce_mod(&BigInt::from(2))),
                modulus: 2,
            },
            CoefficientSystem::DoubleCover => ChainComplex {
                ranks: self.ranks.iter().map(|r| 2 * r).collect(),
                boundaries: map(&|b| b.expand()),
                modulus: 0,
            },
        }
    }

    /// `C ⊗ P` with the deck transformation acting on the `C` factor only.
    pub fn tensor_with_plain(&self, plain: &ChainComplex) -> EquivariantComplex {
        assert_eq!(plain.modulus(), 0, "plain complexes are integral");
        let (ranks, offsets) = tensor_layout(&self.ranks, &plain.ranks);
        let c_const = |i: isize| self.boundary(i).constant;
        let c_twist = |i: isize| self.boundary(i).twist;
        let p_d = |j: isize| plain.boundary(j);
        let boundaries = (1..ranks.len())
            .map(|n| GroupRingMatrix {
                constant: tensor_boundary(n, &ranks, &offsets, &self.ranks, &plain.ranks, c_const, p_d, true),
                twist: tensor_boundary(n, &ranks, &offsets, &self.ranks, &plain.ranks, c_twist, p_d, false),
            })
            .collect();
        EquivariantComplex { ranks, boundaries }
    }

    fn rank(&self, degree: isize) -> usize {
        if degree < 0 {
            0
        } else {
            self.ranks.get(degree as usize).copied().unwrap_or(0)
        }
    }

    /// `∂_degree`, zero outside the stored range.
    pub fn boundary(&self, degree: isize) -> GroupRingMatrix {
        if degree >= 1 && (degree as usize) <= self.boundaries.len() {
            self.boundaries[degree as usize - 1].clone()
        } else {
            GroupRingMatrix::zeros(self.rank(degree - 1), self.rank(degree))
        }
    }

    /// Conjugates every boundary by the given invertible group-ring matrices:
    /// `∂'_i = P_{i-1}^{-1} · ∂_i · P_i`. `changes[i]` is `(P_i, P_i^{-1})`.
    pub fn change_basis(&self, changes: &[(GroupRingMatrix, GroupRingMatrix)]) -> Result<Self> {
        assert_eq!(changes.len(), self.ranks.len());
        let boundaries =
            self.boundaries.iter().enumerate().map(|(i, b)| changes[i].1.mul(b).mul(&changes[i + 1].0)).collect();
        EquivariantComplex::new(self.ranks.clone(), boundaries)
    }
}

pub(crate) fn zero_vec(n: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); n]
}
