use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{zero_vec, ChainComplex};
use crate::error::{Error, Result};
use crate::finab::{AbHom, FinAbGroup};
use crate::linalg::{column_span_basis, integer_kernel, smith_normal_form, solve, IntegerMatrix};

/// Homology groups of a complex, indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub groups: Vec<FinAbGroup>,
}

impl HomologyProfile {
    /// `H_degree`, trivial outside the stored range.
    pub fn group(&self, degree: isize) -> FinAbGroup {
        if degree < 0 {
            return FinAbGroup::trivial();
        }
        self.groups.get(degree as usize).cloned().unwrap_or_else(FinAbGroup::trivial)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(FinAbGroup::free_rank).collect()
    }
}

/// One homology group together with enough chain-level data to name classes.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub group: FinAbGroup,
    cycle_basis: IntegerMatrix,
    coords: IntegerMatrix,
    components: Vec<usize>,
    generators: Vec<Vec<BigInt>>,
}

impl DegreeHomology {
    /// Cycle representatives of the group's components, in component order.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Component coordinates of the class of `cycle`, or `None` if it is not a cycle.
    pub fn class_of(&self, cycle: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.cycle_basis.cols() == 0 {
            return cycle.iter().all(Zero::is_zero).then(Vec::new);
        }
        let c = solve(&self.cycle_basis, cycle)?;
        let y = self.coords.mul_vec(&c);
        let picked: Vec<BigInt> = self.components.iter().map(|&i| y[i].clone()).collect();
        Some(self.group.normalize(&picked))
    }
}

/// Solves `A·x ≡ b (mod m)`, with `m = 0` meaning an exact integer solution.
pub(crate) fn solve_mod(a: &IntegerMatrix, b: &[BigInt], m: u32) -> Option<Vec<BigInt>> {
    if m == 0 {
        return solve(a, b);
    }
    let n = a.cols();
    let mi = IntegerMatrix::identity(a.rows()).scale(&BigInt::from(m));
    let x = solve(&IntegerMatrix::hstack(a, &mi), b)?;
    Some(x[..n].to_vec())
}

pub fn degree_homology(c: &ChainComplex, k: isize) -> DegreeHomology {
    let r = c.rank(k);
    let out = c.boundary(k);
    let inc = c.boundary(k + 1);
    let m = c.modulus();

    let cycle_basis = if m == 0 {
        integer_kernel(&out)
    } else {
        let mi = IntegerMatrix::identity(out.rows()).scale(&BigInt::from(m));
        let ker = integer_kernel(&IntegerMatrix::hstack(&out, &mi));
        column_span_basis(&ker.submatrix(0..r, 0..ker.cols()))
    };
    let z = cycle_basis.cols();

    let mut boundary_gens = inc.columns();
    if m != 0 {
        for i in 0..r {
            let mut e = zero_vec(r);
            e[i] = BigInt::from(m);
            boundary_gens.push(e);
        }
    }
    let rel_cols: Vec<Vec<BigInt>> = boundary_gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .map(|g| solve(&cycle_basis, g).expect("boundaries are cycles"))
        .collect();
    let relations = IntegerMatrix::from_columns(z, &rel_cols);

    let snf = smith_normal_form(&relations);
    let diag = snf.diagonal();
    let mut torsion = Vec::new();
    let mut factors = Vec::new();
    let mut free = Vec::new();
    for i in 0..z {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                if !d.abs().is_one() {
                    torsion.push(i);
                    factors.push(d.abs());
                }
            }
            _ => free.push(i),
        }
    }
    let group = FinAbGroup::new(free.len(), factors).expect("Smith diagonal is a divisibility chain");
    let components: Vec<usize> = torsion.into_iter().chain(free).collect();
    let basis_in_chains = cycle_basis.mul(&snf.u);
    let generators = components.iter().map(|&i| basis_in_chains.column(i)).collect();
    DegreeHomology { group, cycle_basis, coords: snf.u_inv, components, generators }
}

/// `H_k = ker ∂_k / im ∂_{k+1}` in every degree.
pub fn homology(c: &ChainComplex) -> Result<HomologyProfile> {
    c.validate()?;
    let groups = (0..c.ranks().len()).map(|k| degree_homology(c, k as isize).group).collect();
    Ok(HomologyProfile { groups })
}

/// `H^q`, computed as homology of the transposed complex.
pub fn cohomology(c: &ChainComplex) -> Result<HomologyProfile> {
    let mut dual = homology(&c.dual())?;
    dual.groups.reverse();
    Ok(dual)
}

/// Map on homology induced by a chain-level map `f : C_k -> D_k`.
pub fn induced_map(source: &DegreeHomology, target: &DegreeHomology, f: &IntegerMatrix) -> Result<AbHom> {
    let cols: Vec<Vec<BigInt>> = source
        .generators()
        .iter()
        .map(|g| {
            target
                .class_of(&f.mul_vec(g))
                .ok_or_else(|| Error::Precondition("chain map does not send cycles to cycles".into()))
        })
        .collect::<Result<_>>()?;
    let rows = target.group.num_components();
    Ok(AbHom::new(source.group.clone(), target.group.clone(), IntegerMatrix::from_columns(rows, &cols)))
}
