//! Integral lattices with symmetric Gram matrices.
//!
//! Definite lattices are handled with the negative sign convention: norms of
//! nonzero vectors are negative, and a "norm -k" search is a search for
//! vectors of length `k` in the positive definite form `-G`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{compact_rows, compact_vec};
use crate::linalg::{determinant, integer_kernel, IntegerMatrix};

/// A vector in lattice coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(#[serde(with = "compact_vec")] pub Vec<BigInt>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Exact division of every coordinate, `None` if some coordinate is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        self.0
            .iter()
            .map(|a| {
                let (q, r) = a.div_rem(k);
                r.is_zero().then_some(q)
            })
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }

    /// Congruence modulo `m` in every coordinate.
    pub fn congruent_mod(&self, other: &Self, m: &BigInt) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| (a - b).is_multiple_of(m))
    }

    /// Whether the first nonzero coordinate is positive (zero counts as canonical).
    pub fn has_canonical_sign(&self) -> bool {
        self.0.iter().find(|c| !c.is_zero()).is_none_or(|c| c.is_positive())
    }

    /// `x` or `-x`, whichever has canonical sign.
    pub fn canonical_sign(&self) -> Self {
        if self.has_canonical_sign() {
            self.clone()
        } else {
            self.neg()
        }
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Free module of finite rank with an integral symmetric bilinear form.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice {
    gram: IntegerMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    #[serde(with = "compact_rows")]
    gram: Vec<Vec<BigInt>>,
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = String;
    fn try_from(raw: LatticeJson) -> std::result::Result<Self, String> {
        if raw.gram.len() != raw.rank || raw.gram.iter().any(|r| r.len() != raw.rank) {
            return Err(format!("gram matrix does not have declared rank {}", raw.rank));
        }
        let m = if raw.rank == 0 {
            IntegerMatrix::zeros(0, 0)
        } else {
            IntegerMatrix::from_rows(&raw.gram).map_err(|e| e.to_string())?
        };
        Lattice::new(m).map_err(|e| e.to_string())
    }
}

impl From<Lattice> for LatticeJson {
    fn from(l: Lattice) -> Self {
        LatticeJson { rank: l.rank(), gram: l.gram.to_rows() }
    }
}

impl Lattice {
    pub fn new(gram: IntegerMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NonSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(IntegerMatrix::from_i64(rows)).expect("invalid literal Gram matrix")
    }

    pub fn empty() -> Self {
        Lattice { gram: IntegerMatrix::zeros(0, 0) }
    }

    /// `⟨-1⟩^n`.
    pub fn minus_identity(n: usize) -> Self {
        Lattice { gram: IntegerMatrix::identity(n).neg() }
    }

    /// The E8 root lattice on its simple roots, negated.
    pub fn minus_e8() -> Self {
        // Bourbaki labelling: chain 1-3-4-5-6-7-8 with node 2 attached to 4
        const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = IntegerMatrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = BigInt::from(-2);
        }
        for (a, b) in EDGES {
            g[(a, b)] = BigInt::one();
            g[(b, a)] = BigInt::one();
        }
        Lattice { gram: g }
    }

    /// Looks up `minus_identity(n)` or `minus_E8`.
    pub fn named(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("minus_e8") {
            return Ok(Self::minus_e8());
        }
        if let Some(arg) = name.strip_prefix("minus_identity(").and_then(|s| s.strip_suffix(')')) {
            let n: usize = arg.trim().parse().map_err(|_| Error::Parse(format!("bad rank in {name:?}")))?;
            return Ok(Self::minus_identity(n));
        }
        Err(Error::UnknownModel(name.to_string()))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntegerMatrix {
        &self.gram
    }

    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> BigInt {
        assert_eq!(x.len(), self.rank());
        assert_eq!(y.len(), self.rank());
        let gy = self.gram.mul_vec(&y.0);
        x.0.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &LatticeVector) -> BigInt {
        self.inner(x, x)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram).expect("Gram matrix is square")
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Sylvester's criterion on `-G`: `(-1)^i · det(G_i) > 0` for every leading minor.
    pub fn is_negative_definite(&self) -> bool {
        (1..=self.rank()).all(|i| {
            let minor = determinant(&self.gram.submatrix(0..i, 0..i)).expect("square");
            let signed = if i % 2 == 1 { -minor } else { minor };
            signed.is_positive()
        })
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn orthogonal_sum(&self, other: &Lattice) -> Lattice {
        Lattice { gram: IntegerMatrix::block_diagonal(&self.gram, &other.gram) }
    }

    /// The lattice with Gram matrix `Bᵀ·G·B`, where `B` holds basis vectors as columns.
    pub fn sublattice(&self, basis: &IntegerMatrix) -> Lattice {
        Lattice { gram: basis.transpose().mul(&self.gram).mul(basis) }
    }

    /// Same form in a new basis: Gram `Uᵀ·G·U`.
    pub fn change_basis(&self, u: &IntegerMatrix) -> Lattice {
        self.sublattice(u)
    }

    fn require_negative_definite(&self) -> Result<()> {
        if self.is_negative_definite() {
            Ok(())
        } else {
            Err(Error::NotDefinite)
        }
    }

    /// Every `x` with `-bound <= x² <= 0`, lexicographically sorted.
    pub fn short_vectors(&self, bound: &BigInt) -> Result<Vec<LatticeVector>> {
        self.require_negative_definite()?;
        if bound.is_negative() {
            return Ok(Vec::new());
        }
        let mut out = FinckePohst::new(self).enumerate(bound);
        out.sort();
        Ok(out)
    }

    /// Exactly the vectors of norm `m` (`m <= 0`), sorted; with `up_to_sign`
    /// only the representative with canonical sign is kept.
    pub fn vectors_of_norm(&self, m: &BigInt, up_to_sign: bool) -> Result<Vec<LatticeVector>> {
        self.require_negative_definite()?;
        if m.is_positive() {
            return Ok(Vec::new());
        }
        let bound = -m;
        let mut out: Vec<LatticeVector> = FinckePohst::new(self)
            .enumerate(&bound)
            .into_iter()
            .filter(|x| self.norm(x) == *m)
            .filter(|x| !up_to_sign || x.has_canonical_sign())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn root_decomposition(&self) -> Result<RootDecomposition> {
        self.require_negative_definite()?;
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let n = self.rank();
        let units = self.vectors_of_norm(&BigInt::from(-1), true)?;
        for (i, a) in units.iter().enumerate() {
            for b in &units[i + 1..] {
                assert!(self.inner(a, b).is_zero(), "distinct norm -1 vectors {a:?}, {b:?} are not orthogonal");
            }
        }
        let d = IntegerMatrix::from_columns(n, &units.iter().map(|v| v.0.clone()).collect::<Vec<_>>());
        let complement = integer_kernel(&d.transpose().mul(&self.gram));
        let change = IntegerMatrix::hstack(&d, &complement);
        assert!(
            determinant(&change).expect("square").abs().is_one(),
            "D and its orthogonal complement do not span the lattice"
        );
        let fhat = self.sublattice(&complement);
        Ok(RootDecomposition {
            d_basis: units,
            fhat_basis: complement.columns().into_iter().map(LatticeVector).collect(),
            fhat,
        })
    }

    pub fn is_standard(&self) -> Result<bool> {
        Ok(self.root_decomposition()?.fhat.rank() == 0)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(rank {}, gram {:?})", self.rank(), self.gram)
    }
}

/// `L = D ⊕ F̂` where `D` is spanned by the norm −1 vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDecomposition {
    /// Pairwise orthogonal vectors of norm −1 (ambient coordinates).
    pub d_basis: Vec<LatticeVector>,
    /// Basis of the orthogonal complement of `D` (ambient coordinates).
    pub fhat_basis: Vec<LatticeVector>,
    /// `F̂` with its induced form, in the coordinates of `fhat_basis`.
    pub fhat: Lattice,
}

impl RootDecomposition {
    pub fn rank_d(&self) -> usize {
        self.d_basis.len()
    }

    /// Columns: the `D` basis followed by the `F̂` basis.
    pub fn change_of_basis(&self) -> IntegerMatrix {
        let rank = self.d_basis.len() + self.fhat_basis.len();
        let cols: Vec<Vec<BigInt>> = self.d_basis.iter().chain(&self.fhat_basis).map(|v| v.0.clone()).collect();
        IntegerMatrix::from_columns(rank, &cols)
    }

    /// Maps `F̂` coordinates to ambient coordinates.
    pub fn embed_fhat(&self, x: &LatticeVector) -> LatticeVector {
        let rank = self.d_basis.len() + self.fhat_basis.len();
        let mut out = LatticeVector::zero(rank);
        for (c, b) in x.0.iter().zip(&self.fhat_basis) {
            out = out.add(&b.scale(c));
        }
        out
    }
}

/// Exact Fincke–Pohst enumeration for the positive definite form `Q = -G`.
///
/// `Q(x) = Σ_i d_i (x_i + Σ_{j>i} μ_ij x_j)²`, with `d_i` and `μ_ij` exact
/// rationals; every pruning decision is an exact comparison.
struct FinckePohst {
    n: usize,
    d: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl FinckePohst {
    fn new(lattice: &Lattice) -> Self {
        let n = lattice.rank();
        let mut q: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(-&lattice.gram[(i, j)])).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = &q[i][j] / &q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = &q[k][i] * &q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        let d = (0..n).map(|i| q[i][i].clone()).collect();
        let mu = (0..n)
            .map(|i| (0..n).map(|j| if j > i { q[i][j].clone() } else { BigRational::zero() }).collect())
            .collect();
        FinckePohst { n, d, mu }
    }

    fn enumerate(&self, bound: &BigInt) -> Vec<LatticeVector> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(LatticeVector(Vec::new()));
            return out;
        }
        let mut x = vec![BigInt::zero(); self.n];
        self.descend(self.n - 1, BigRational::from_integer(bound.clone()), &mut x, &mut out);
        out
    }

    fn descend(&self, i: usize, budget: BigRational, x: &mut Vec<BigInt>, out: &mut Vec<LatticeVector>) {
        let center: BigRational = (i + 1..self.n)
            .filter(|&j| !x[j].is_zero())
            .map(|j| &self.mu[i][j] * BigRational::from_integer(x[j].clone()))
            .sum();
        // feasible x_i form an interval around -center; walk out from the middle
        let start: BigInt = (-&center).floor().to_integer();
        let visit = |xi: BigInt, x: &mut Vec<BigInt>, out: &mut Vec<LatticeVector>| -> bool {
            let t = BigRational::from_integer(xi.clone()) + &center;
            let used = &self.d[i] * &t * &t;
            if used > budget {
                return false;
            }
            x[i] = xi;
            if i == 0 {
                out.push(LatticeVector(x.clone()));
            } else {
                self.descend(i - 1, &budget - used, x, out);
            }
            true
        };
        let mut xi = start.clone();
        while visit(xi.clone(), x, out) {
            xi -= 1;
        }
        let mut xi: BigInt = start + 1;
        while visit(xi.clone(), x, out) {
            xi += 1;
        }
        x[i] = BigInt::zero();
    }
}
