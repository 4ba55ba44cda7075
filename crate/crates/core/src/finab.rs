//! Finitely generated abelian groups in invariant-factor form, and
//! homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::compact_vec;
use crate::linalg::{canonical_span, integer_kernel, smith_normal_form, IntegerMatrix};

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FinAbGroup {
    free_rank: usize,
    #[serde(with = "compact_vec")]
    invariant_factors: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawGroup {
    free_rank: usize,
    #[serde(with = "compact_vec")]
    invariant_factors: Vec<BigInt>,
}

impl TryFrom<RawGroup> for FinAbGroup {
    type Error = String;
    fn try_from(raw: RawGroup) -> std::result::Result<Self, String> {
        FinAbGroup::new(raw.free_rank, raw.invariant_factors).map_err(|e| e.to_string())
    }
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_cyclic_orders(0, &[BigInt::from(order)])
    }

    /// Checked constructor for data already in invariant-factor form.
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        if invariant_factors.iter().any(|d| *d < two) {
            return Err(Error::InvalidRecord("invariant factors must all be at least 2".into()));
        }
        if invariant_factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidRecord("invariant factors must form a divisibility chain".into()));
        }
        Ok(FinAbGroup { free_rank, invariant_factors })
    }

    /// Normalizes an arbitrary list of cyclic orders (`0` meaning `Z`, `1` trivial).
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|d| d.abs()).collect();
        let mut g = Self::from_presentation(&IntegerMatrix::diagonal(&diag));
        g.free_rank += free_rank;
        g
    }

    /// The cokernel of `relations : Z^cols -> Z^rows`.
    pub fn from_presentation(relations: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let invariant_factors = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
        FinAbGroup { free_rank: relations.rows() - rank, invariant_factors }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn torsion_subgroup(&self) -> FinAbGroup {
        FinAbGroup { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    /// `2T ≅ ⊕ Z/(d_i / gcd(d_i, 2))`.
    pub fn doubled_torsion(&self) -> Result<FinAbGroup> {
        if self.free_rank > 0 {
            return Err(Error::NotTorsion);
        }
        let two = BigInt::from(2);
        let halved: Vec<BigInt> = self.invariant_factors.iter().map(|d| d / d.gcd(&two)).collect();
        Ok(Self::from_cyclic_orders(0, &halved))
    }

    /// Whether some element has order exactly `n`.
    pub fn has_element_of_order(&self, n: u64) -> bool {
        assert!(n >= 1, "element orders are positive");
        if n == 1 {
            return true;
        }
        let n = BigInt::from(n);
        self.invariant_factors.iter().any(|d| d.is_multiple_of(&n))
    }

    /// Number of even invariant factors, i.e. `dim_{Z/2} tors(G) ⊗ Z/2`.
    pub fn tau(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_even()).count()
    }

    /// `dim_{Z/2} (G ⊗ Z/2)`.
    pub fn mod2_dimension(&self) -> usize {
        self.free_rank + self.tau()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let orders: Vec<BigInt> = self.invariant_factors.iter().chain(&other.invariant_factors).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    /// Per-component moduli: invariant factors first, then `0` for each free summand.
    pub fn moduli(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), self.free_rank)).collect()
    }

    pub fn num_components(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// Reduces a coordinate vector into canonical form (torsion entries into `[0, d_i)`).
    pub fn normalize(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.num_components());
        x.iter().zip(self.moduli()).map(|(v, m)| if m.is_zero() { v.clone() } else { v.mod_floor(&m) }).collect()
    }

    /// Relation lattice `⊕ d_i Z` inside `Z^{num_components}`, as columns.
    pub fn relation_lattice(&self) -> IntegerMatrix {
        let moduli = self.moduli();
        let cols: Vec<Vec<BigInt>> = moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| {
                let mut c = vec![BigInt::zero(); moduli.len()];
                c[i] = m.clone();
                c
            })
            .collect();
        IntegerMatrix::from_columns(moduli.len(), &cols)
    }

    /// All elements of a finite group as residue tuples, in lexicographic order.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        if self.free_rank > 0 {
            return Err(Error::NotTorsion);
        }
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let d = d.to_u64().ok_or_else(|| Error::Precondition("group too large".into()))?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |r| {
                        let mut p = prefix.clone();
                        p.push(BigInt::from(r));
                        p
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Order of the element with the given coordinates (`None` if infinite).
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let x = self.normalize(x);
        let k = self.invariant_factors.len();
        if x[k..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(
            x[..k]
                .iter()
                .zip(&self.invariant_factors)
                .map(|(v, d)| d / v.gcd(d))
                .fold(BigInt::one(), |acc, o| acc.lcm(&o)),
        )
    }

    /// The subgroup `L / R` of this group, where `lattice` (columns in
    /// component coordinates) contains the relation lattice `R`.
    pub fn subgroup_structure(&self, lattice: &IntegerMatrix) -> FinAbGroup {
        let basis = canonical_span(&IntegerMatrix::hstack(lattice, &self.relation_lattice()));
        let rel = self.relation_lattice();
        let coords: Vec<Vec<BigInt>> = rel
            .columns()
            .iter()
            .map(|c| crate::linalg::solve(&basis, c).expect("relation lattice lies inside the subgroup"))
            .collect();
        let presentation = IntegerMatrix::from_columns(basis.cols(), &coords);
        FinAbGroup::from_presentation(&presentation)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism between groups in invariant-factor form, given by an
/// integer matrix on component coordinates (see [`FinAbGroup::moduli`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub matrix: IntegerMatrix,
}

impl AbHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntegerMatrix) -> Self {
        assert_eq!(matrix.rows(), target.num_components());
        assert_eq!(matrix.cols(), source.num_components());
        AbHom { source, target, matrix }
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let m = IntegerMatrix::zeros(target.num_components(), source.num_components());
        AbHom { source, target, matrix: m }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.normalize(&self.matrix.mul_vec(x))
    }

    pub fn compose(&self, first: &AbHom) -> AbHom {
        AbHom::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    /// Whether the map is zero as a homomorphism (every column lands in the relations).
    pub fn is_zero(&self) -> bool {
        self.matrix.columns().iter().all(|c| self.target.normalize(c).iter().all(Zero::is_zero))
    }

    /// Canonical basis of `{x : φ(x) = 0} + R_source` in source coordinates.
    pub fn kernel_lattice(&self) -> IntegerMatrix {
        let n = self.source.num_components();
        let stacked = IntegerMatrix::hstack(&self.matrix, &self.target.relation_lattice());
        let k = integer_kernel(&stacked);
        let proj = k.submatrix(0..n, 0..k.cols());
        canonical_span(&IntegerMatrix::hstack(&proj, &self.source.relation_lattice()))
    }

    /// Canonical basis of `im φ + R_target` in target coordinates.
    pub fn image_lattice(&self) -> IntegerMatrix {
        canonical_span(&IntegerMatrix::hstack(&self.matrix, &self.target.relation_lattice()))
    }

    pub fn kernel(&self) -> FinAbGroup {
        self.source.subgroup_structure(&self.kernel_lattice())
    }

    pub fn image(&self) -> FinAbGroup {
        self.target.subgroup_structure(&self.image_lattice())
    }
}

/// Whether `incoming` followed by `outgoing` is exact at their common group.
pub fn is_exact_at(incoming: &AbHom, outgoing: &AbHom) -> bool {
    assert_eq!(incoming.target, outgoing.source);
    incoming.image_lattice() == outgoing.kernel_lattice()
}
