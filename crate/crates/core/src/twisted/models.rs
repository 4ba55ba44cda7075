//! Small cell complexes with their double covers.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::{ChainComplex, EquivariantComplex, GroupRingMatrix};
use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// A built-in complex: either with a double cover, or plain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Equivariant(EquivariantComplex),
    Plain(ChainComplex),
}

impl Model {
    /// Plain complexes get the trivial double cover.
    pub fn into_equivariant(self) -> EquivariantComplex {
        match self {
            Model::Equivariant(c) => c,
            Model::Plain(p) => EquivariantComplex::trivial_cover(&p),
        }
    }
}

/// Looks up a model by name.
///
/// Known names: `point`, `circle`, `circle_nontrivial`, `circle_trivial`,
/// `sphere2`, `torus3`, `lens(p,q)` and `surface(g,w)`, where `w` is
/// `trivial`, `nontrivial` (odd on the first generator) or a bit string giving
/// the class on `a_1, b_1, ..., a_g, b_g`. Products are written `X*Y`; at
/// most one factor may carry a double cover.
pub fn builtin_model(name: &str) -> Result<Model> {
    let name = name.trim();
    if let Some((left, right)) = name.split_once('*') {
        return product(builtin_model(left)?, builtin_model(right)?, name);
    }
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| Error::UnknownModel(name.into()))?;
            (h.trim(), inner.split(',').map(str::trim).collect::<Vec<_>>())
        }
        None => (name, Vec::new()),
    };
    let unknown = || Error::UnknownModel(name.into());
    let int_arg = |i: usize| -> Result<u64> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(unknown) };
    match (head, args.len()) {
        ("point", 0) => Ok(Model::Plain(ChainComplex::point())),
        ("circle", 0) => Ok(Model::Plain(plain_circle())),
        ("circle_nontrivial", 0) => Ok(Model::Equivariant(surface_like(&[1], 0))),
        ("circle_trivial", 0) => Ok(Model::Equivariant(EquivariantComplex::trivial_cover(&plain_circle()))),
        ("sphere2", 0) => Ok(Model::Plain(sphere(2))),
        ("torus3", 0) => {
            let c = plain_circle();
            Ok(Model::Plain(c.tensor(&c).tensor(&c)))
        }
        ("lens", 2) => {
            let (p, q) = (int_arg(0)?, int_arg(1)?);
            if p == 0 || p.gcd(&q) != 1 {
                return Err(Error::UnknownModel(format!("{name}: lens(p,q) needs p >= 1 coprime to q")));
            }
            Ok(Model::Plain(lens(p)))
        }
        ("surface", 2) => {
            let g = int_arg(0)? as usize;
            if g == 0 {
                return Err(Error::UnknownModel(format!("{name}: genus must be positive")));
            }
            let w: Vec<u8> = match args[1] {
                "trivial" => vec![0; 2 * g],
                "nontrivial" => (0..2 * g).map(|i| u8::from(i == 0)).collect(),
                bits if bits.len() == 2 * g && bits.chars().all(|c| c == '0' || c == '1') => {
                    bits.bytes().map(|b| b - b'0').collect()
                }
                _ => return Err(unknown()),
            };
            Ok(Model::Equivariant(surface_like(&w, g)))
        }
        _ => Err(unknown()),
    }
}

fn product(left: Model, right: Model, name: &str) -> Result<Model> {
    match (left, right) {
        (Model::Plain(a), Model::Plain(b)) => Ok(Model::Plain(a.tensor(&b))),
        (Model::Equivariant(a), Model::Plain(b)) | (Model::Plain(b), Model::Equivariant(a)) => {
            Ok(Model::Equivariant(a.tensor_with_plain(&b)))
        }
        (Model::Equivariant(_), Model::Equivariant(_)) => {
            Err(Error::UnknownModel(format!("{name}: only one factor may carry a double cover")))
        }
    }
}

fn plain_circle() -> ChainComplex {
    ChainComplex::new(vec![1, 1], vec![IntegerMatrix::zeros(1, 1)], 0).expect("valid")
}

fn sphere(n: usize) -> ChainComplex {
    let mut ranks = vec![0; n + 1];
    ranks[0] = 1;
    ranks[n] = 1;
    let boundaries = (1..=n).map(|i| IntegerMatrix::zeros(ranks[i - 1], ranks[i])).collect();
    ChainComplex::new(ranks, boundaries, 0).expect("valid")
}

/// `Z <-0- Z <-p- Z <-0- Z`.
fn lens(p: u64) -> ChainComplex {
    let z = IntegerMatrix::zeros(1, 1);
    let p = IntegerMatrix::from_i64(&[&[p as i64]]);
    ChainComplex::new(vec![1, 1, 1, 1], vec![z.clone(), p, z], 0).expect("valid")
}

/// `t^w` as a 1×1 group-ring matrix.
fn power_of_t(w: u8) -> (i64, i64) {
    if w == 0 {
        (1, 0)
    } else {
        (0, 1)
    }
}

/// One vertex, edges `a_1, b_1, ..., a_g, b_g` and (for `g > 0`) one face
/// attached along `∏ [a_i, b_i]`. With `g = 0` the weights describe a wedge
/// of circles; a single weight gives the circle.
///
/// Boundaries come from Fox calculus: `∂a = (1 - t^{w(a)})·v` and
/// `∂f = Σ (1 - t^{w(b_i)})·a_i + (t^{w(a_i)} - 1)·b_i`.
fn surface_like(w: &[u8], genus: usize) -> EquivariantComplex {
    let n = w.len();
    let mut d1 = GroupRingMatrix::zeros(1, n);
    for (j, &wj) in w.iter().enumerate() {
        let (a, b) = power_of_t(wj);
        d1.constant[(0, j)] = BigInt::from(1 - a);
        d1.twist[(0, j)] = BigInt::from(-b);
    }
    if genus == 0 {
        return EquivariantComplex::new(vec![1, n], vec![d1]).expect("valid");
    }
    let mut d2 = GroupRingMatrix::zeros(n, 1);
    for i in 0..genus {
        let (wa, wb) = (w[2 * i], w[2 * i + 1]);
        let (a, b) = power_of_t(wb);
        d2.constant[(2 * i, 0)] = BigInt::from(1 - a);
        d2.twist[(2 * i, 0)] = BigInt::from(-b);
        let (a, b) = power_of_t(wa);
        d2.constant[(2 * i + 1, 0)] = BigInt::from(a - 1);
        d2.twist[(2 * i + 1, 0)] = BigInt::from(b);
    }
    EquivariantComplex::new(vec![1, n, 1], vec![d1, d2]).expect("Fox boundaries compose to zero")
}

/// Random invertible group-ring matrix of size `n` with its inverse,
/// as a product of `steps` elementary moves.
fn random_group_ring_unit<R: Rng>(n: usize, steps: usize, rng: &mut R) -> (GroupRingMatrix, GroupRingMatrix) {
    let mut p = GroupRingMatrix::identity(n);
    let mut p_inv = GroupRingMatrix::identity(n);
    if n == 0 {
        return (p, p_inv);
    }
    for _ in 0..steps {
        let mut e = GroupRingMatrix::identity(n);
        let mut e_inv = GroupRingMatrix::identity(n);
        if n >= 2 && rng.gen_bool(0.7) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let (a, b) = (rng.gen_range(-2i64..=2), rng.gen_range(-2i64..=2));
            e.constant[(i, j)] = BigInt::from(a);
            e.twist[(i, j)] = BigInt::from(b);
            e_inv.constant[(i, j)] = BigInt::from(-a);
            e_inv.twist[(i, j)] = BigInt::from(-b);
        } else {
            let i = rng.gen_range(0..n);
            let (a, b) = [(-1, 0), (0, 1), (0, -1)][rng.gen_range(0..3)];
            for m in [&mut e, &mut e_inv] {
                m.constant[(i, i)] = BigInt::from(a);
                m.twist[(i, i)] = BigInt::from(b);
            }
        }
        p = p.mul(&e);
        p_inv = e_inv.mul(&p_inv);
    }
    (p, p_inv)
}

/// An isomorphic complex obtained by a random equivariant change of cell basis.
pub fn random_equivariant_basis_change<R: Rng>(
    c: &EquivariantComplex,
    steps: usize,
    rng: &mut R,
) -> EquivariantComplex {
    let changes: Vec<_> = c.ranks().iter().map(|&r| random_group_ring_unit(r, steps, rng)).collect();
    c.change_basis(&changes).expect("conjugation preserves ∂∘∂ = 0")
}
