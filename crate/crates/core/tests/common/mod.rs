//! Brute-force oracles that share no code with the library algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use twform_core::linalg::IntegerMatrix;

pub fn to_i64_rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_i64().expect("small entry")).collect()).collect()
}

pub fn to_i128_rows(m: &IntegerMatrix) -> Vec<Vec<i128>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_i128().expect("small entry")).collect()).collect()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * cofactor_det(&minor);
    }
    total
}

/// Inverse of a small matrix in floating point (Gauss–Jordan, partial pivoting).
pub fn float_inverse(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<f64> = row.iter().map(|&x| x as f64).collect();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, p);
        let pivot = a[col][col];
        a[col].iter_mut().for_each(|x| *x /= pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                a[r].iter_mut().zip(pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn quad(g: &[Vec<i64>], x: &[i64]) -> i64 {
    let n = x.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * g[i][j] * x[j];
        }
    }
    s
}

/// Every `x` with `-bound <= xᵀGx <= 0` for negative definite `G`, by scanning
/// the box `|x_i| <= sqrt(bound · (-G⁻¹)_ii)`.
pub fn box_short_vectors(g: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = g.len();
    let inv = float_inverse(g);
    let limits: Vec<i64> = (0..n).map(|i| ((bound as f64) * -inv[i][i]).sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(i: usize, x: &mut Vec<i64>, limits: &[i64], g: &[Vec<i64>], bound: i64, out: &mut Vec<Vec<i64>>) {
        if i == x.len() {
            let q = quad(g, x);
            if q <= 0 && q >= -bound {
                out.push(x.clone());
            }
            return;
        }
        for v in -limits[i]..=limits[i] {
            x[i] = v;
            rec(i + 1, x, limits, g, bound, out);
        }
        x[i] = 0;
    }
    rec(0, &mut x, &limits, g, bound, &mut out);
    out.sort();
    out
}

/// E8 in orthonormal coordinates, scaled by 2: `y ∈ Z^8` with all
/// coordinates of one parity and `Σ y ≡ 0 (mod 4)`. The square of the
/// lattice vector is `|y|² / 4`.
pub fn in_e8_doubled(y: &[i64]) -> bool {
    let parity = y[0].rem_euclid(2);
    y.iter().all(|v| v.rem_euclid(2) == parity) && y.iter().sum::<i64>().rem_euclid(4) == 0
}

/// All doubled E8 vectors of square `norm`.
pub fn e8_doubled_vectors(norm: i64) -> Vec<Vec<i64>> {
    let budget = 4 * norm;
    let mut out = Vec::new();
    let mut y = vec![0i64; 8];
    fn rec(i: usize, left: i64, y: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == 8 {
            if left == 0 && in_e8_doubled(y) {
                out.push(y.clone());
            }
            return;
        }
        let mut v = 0;
        while v * v <= left {
            for s in if v == 0 { vec![0] } else { vec![v, -v] } {
                y[i] = s;
                rec(i + 1, left - v * v, y, out);
            }
            v += 1;
        }
        y[i] = 0;
    }
    rec(0, budget, &mut y, &mut out);
    out
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|P_c|` for a root `c` of E8, in the doubled orthonormal model
/// (positive definite, so the conditions read `r·c = r·r`).
pub fn e8_pc_count(c: &[i64]) -> usize {
    let mut candidates = vec![vec![0i64; 8]];
    candidates.extend(e8_doubled_vectors(1));
    candidates.extend(e8_doubled_vectors(2));
    let mut pairs = std::collections::BTreeSet::new();
    for r in &candidates {
        if dot(r, c) == dot(r, r) {
            let s: Vec<i64> = c.iter().zip(r).map(|(a, b)| a - b).collect();
            let mut pair = [r.clone(), s];
            pair.sort();
            pairs.insert(pair);
        }
    }
    pairs.len()
}

/// Free parts `v` of square `norm` with `v ≡ c (mod 2·E8)`.
pub fn e8_congruent_count(c: &[i64], norm: i64) -> usize {
    e8_doubled_vectors(norm)
        .into_iter()
        .filter(|v| {
            let d: Vec<i64> = v.iter().zip(c).map(|(a, b)| a - b).collect();
            d.iter().all(|x| x % 2 == 0) && in_e8_doubled(&d.iter().map(|x| x / 2).collect::<Vec<_>>())
        })
        .count()
}

/// All elements of `Z/d_1 ⊕ ... ⊕ Z/d_k`.
pub fn torsion_elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `|2T|` by doubling every element.
pub fn doubled_order(orders: &[u64]) -> usize {
    torsion_elements(orders)
        .into_iter()
        .map(|t| t.iter().zip(orders).map(|(x, d)| (2 * x) % d).collect::<Vec<_>>())
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

/// Number of `t` with `t - c ∈ 2T`.
pub fn torsion_coset_size(orders: &[u64], c: &[u64]) -> usize {
    let doubles: std::collections::BTreeSet<Vec<u64>> = torsion_elements(orders)
        .into_iter()
        .map(|t| t.iter().zip(orders).map(|(x, d)| (2 * x) % d).collect())
        .collect();
    torsion_elements(orders)
        .into_iter()
        .filter(|t| {
            let diff: Vec<u64> = t.iter().zip(c).zip(orders).map(|((a, b), d)| (a + d - b % d) % d).collect();
            doubles.contains(&diff)
        })
        .count()
}

/// Whether some element has order exactly 4.
pub fn has_order_four(orders: &[u64]) -> bool {
    torsion_elements(orders).into_iter().any(|t| {
        let times = |k: u64| t.iter().zip(orders).all(|(x, d)| (k * x).is_multiple_of(*d));
        times(4) && !times(2)
    })
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `(rank, invariant factors > 1)` from determinantal divisors.
pub fn determinantal_invariants(m: &[Vec<i128>], rows: usize, cols: usize) -> (usize, Vec<i128>) {
    let mut prev = 1i128;
    let mut factors = Vec::new();
    let mut rank = 0;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, cofactor_det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        rank = k;
        let s = g / prev;
        if s > 1 {
            factors.push(s);
        }
        prev = g;
    }
    (rank, factors)
}

/// Rank over GF(2).
pub fn rank_mod2(m: &[Vec<i128>], cols: usize) -> usize {
    let mut a: Vec<Vec<u8>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..a.len()).find(|&r| a[r][c] == 1) {
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && a[r][c] == 1 {
                    let pr = a[rank].clone();
                    a[r].iter_mut().zip(pr).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Integral homology `(free rank, torsion factors)` per degree from boundary
/// matrices `d[k] : C_{k+1} -> C_k` and ranks.
pub fn oracle_homology(ranks: &[usize], boundary: impl Fn(usize) -> IntegerMatrix) -> Vec<(usize, Vec<i128>)> {
    let info: Vec<(usize, Vec<i128>)> = (1..ranks.len())
        .map(|k| {
            let b = boundary(k);
            determinantal_invariants(&to_i128_rows(&b), b.rows(), b.cols())
        })
        .collect();
    (0..ranks.len())
        .map(|k| {
            let out_rank = if k >= 1 { info[k - 1].0 } else { 0 };
            let (in_rank, torsion) = info.get(k).cloned().unwrap_or((0, Vec::new()));
            (ranks[k] - out_rank - in_rank, torsion)
        })
        .collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
