//! Independent oracles and seeded generators shared by the integration
//! suites. Nothing here calls the library's elimination, Jordan or
//! centralizer code; only its field arithmetic is reused.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidcalc::field::{euler_phi, lcm};
use rigidcalc::{CycNumber, ExactMatrix, JordanType, MultiplicityFunction, RootOfUnity};

pub mod suites;

pub type Q = BigRational;

/// Base seed for all randomized suites; override with `RIGIDCALC_TEST_SEED`.
pub fn base_seed() -> u64 {
    std::env::var("RIGIDCALC_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_2024)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `Phi_n` with integer coefficients, constant term first, by dividing
/// `X^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn phi(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let q = phi(d);
        // exact division by a monic polynomial
        let mut quot = vec![BigInt::zero(); p.len() - q.len() + 1];
        for i in (0..quot.len()).rev() {
            let c = p[i + q.len() - 1].clone();
            for (j, qj) in q.iter().enumerate() {
                p[i + j] -= &c * qj;
            }
            quot[i] = c;
        }
        assert!(p.iter().all(Zero::is_zero));
        p = quot;
    }
    p
}

/// Power-basis coordinates of `x` in `Q(zeta_n)`, length `phi(n)`.
fn coords(x: &CycNumber, n: u32) -> Vec<Q> {
    let mut v = x.lift(n).coeffs().to_vec();
    v.resize(euler_phi(n) as usize, Q::zero());
    v
}

/// Multiply a coordinate vector by `zeta_n`, reducing with `Phi_n`.
fn times_zeta(v: &[Q], ph: &[BigInt]) -> Vec<Q> {
    let d = v.len();
    let mut out = vec![Q::zero(); d];
    out[1..d].clone_from_slice(&v[..(d - 1)]);
    let top = v[d - 1].clone();
    for (i, c) in ph.iter().take(d).enumerate() {
        out[i] -= &top * Q::from_integer(c.clone());
    }
    out
}

/// Matrix over `Q` of multiplication by `x` on `Q(zeta_n)`.
pub fn regular_rep(x: &CycNumber, n: u32) -> Vec<Vec<Q>> {
    let ph = phi(n);
    let d = euler_phi(n) as usize;
    let mut cols = Vec::with_capacity(d);
    let mut v = coords(x, n);
    for _ in 0..d {
        cols.push(v.clone());
        v = times_zeta(&v, &ph);
    }
    (0..d)
        .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
        .collect()
}

/// Replace each entry by its regular representation.
pub fn expand(m: &ExactMatrix) -> Vec<Vec<Q>> {
    let n = m.order();
    let d = euler_phi(n) as usize;
    let mut out = vec![vec![Q::zero(); m.cols() * d]; m.rows() * d];
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let block = regular_rep(m.get(i, j), n);
            for (a, row) in block.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    out[i * d + a][j * d + b] = v.clone();
                }
            }
        }
    }
    out
}

/// Textbook Gaussian elimination over `Q`.
pub fn q_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Q::one() / &m[rank][c];
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q(zeta_N)` from the rank of the expanded matrix over `Q`.
pub fn rank_oracle(m: &ExactMatrix) -> usize {
    let d = euler_phi(m.order()) as usize;
    let r = q_rank(expand(m));
    assert_eq!(r % d, 0);
    r / d
}

/// `dim {X : AX = XA}` from the Kronecker system `I (x) A - A^T (x) I`.
pub fn centralizer_oracle(a: &ExactMatrix) -> usize {
    let n = a.rows();
    let order = a.order();
    let sys = ExactMatrix::from_fn(n * n, n * n, order, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        // (AX - XA)_{ij} = sum_k A_ik X_kj - sum_l X_il A_lj
        let mut v = CycNumber::zero(order);
        if l == j {
            v = &v + a.get(i, k);
        }
        if k == i {
            v = &v - a.get(l, j);
        }
        v
    });
    n * n - rank_oracle(&sys)
}

/// `sum_zeta sum_{blocks b, c at zeta} min(b, c)`.
pub fn centralizer_from_jordan(j: &JordanType) -> usize {
    let mut total = 0;
    for x in j.blocks() {
        for y in j.blocks().iter().filter(|y| y.eigenvalue == x.eigenvalue) {
            total += x.mult * y.mult * x.size.min(y.size);
        }
    }
    total
}

/// Characteristic polynomial `det(X - A)` by Faddeev-LeVerrier, constant
/// term first.
pub fn charpoly(a: &ExactMatrix) -> Vec<CycNumber> {
    let n = a.rows();
    let order = a.order();
    let mut c = vec![CycNumber::zero(order); n + 1];
    c[n] = CycNumber::one(order);
    let mut m = ExactMatrix::zeros(n, n, order);
    for k in 1..=n {
        let shifted = &(a * &m) + &ExactMatrix::identity(n, order).scale(&c[n + 1 - k]);
        m = shifted;
        let tr = (a * &m).trace();
        c[n - k] = -&tr.scale(&Q::new(BigInt::one(), BigInt::from(k)));
    }
    c
}

/// Multiplicity of `z` as a root of `p`.
pub fn root_multiplicity(p: &[CycNumber], z: &CycNumber) -> usize {
    let mut p = p.to_vec();
    let mut mult = 0;
    while p.len() > 1 {
        let mut q = vec![CycNumber::zero(z.order()); p.len() - 1];
        let mut acc = CycNumber::zero(z.order());
        for k in (0..p.len()).rev() {
            acc = &(&acc * z) + &p[k];
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        if !acc.is_zero() {
            break;
        }
        mult += 1;
        p = q;
    }
    mult
}

fn commutator(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    &(a * b) - &(b * a)
}

/// Shemesh: `A` and `B` share an eigenvector over `C` iff
/// `cap_{k,l} ker [A^k, B^l]` is nonzero.
pub fn common_eigenvector(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let n = a.rows();
    if n == 1 {
        return true;
    }
    let mut blocks = Vec::new();
    for k in 1..n {
        for l in 1..n {
            blocks.push(vec![commutator(&a.pow(k as u64), &b.pow(l as u64))]);
        }
    }
    rank_oracle(&ExactMatrix::from_blocks(&blocks)) < n
}

/// For `n <= 3`, an invariant subspace of a pair exists iff it has a common
/// eigenvector (dimension 1) or its transposes do (codimension 1).
pub fn irreducible_oracle(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let n = a.rows();
    assert!(n <= 3);
    n == 1 || !(common_eigenvector(a, b) || common_eigenvector(&a.transpose(), &b.transpose()))
}

/// `a_p = p + 1 - #E(F_p)` for `E: y^2 = x^3 + x`.
pub fn ec_trace(p: i64) -> i64 {
    let mut count = 1;
    for x in 0..p {
        for y in 0..p {
            if (y * y - x * x * x - x).rem_euclid(p) == 0 {
                count += 1;
            }
        }
    }
    p + 1 - count
}

pub fn random_cyc(rng: &mut ChaCha8Rng, order: u32, range: i64) -> CycNumber {
    let d = euler_phi(order) as usize;
    let mut acc = CycNumber::zero(order);
    for k in 0..d {
        let c = rng.gen_range(-range..=range);
        acc = &acc + &CycNumber::zeta_pow(order, k as i64).scale(&Q::from_integer(c.into()));
    }
    acc
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, order: u32) -> ExactMatrix {
    loop {
        let m = ExactMatrix::from_fn(n, n, order, |_, _| random_cyc(rng, order, 2));
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn random_root(rng: &mut ChaCha8Rng, order: u32) -> RootOfUnity {
    RootOfUnity::new(rng.gen_range(0..order as i64), order)
}

pub fn common_order(ms: &[ExactMatrix]) -> u32 {
    ms.iter().map(ExactMatrix::order).fold(1, lcm)
}

/// Random multiplicity function of total at most `max_rank`, with `N <= 12`.
pub fn random_multiplicity(r: &mut ChaCha8Rng, max_rank: usize) -> (MultiplicityFunction, u32) {
    let order = [2u32, 3, 4, 5, 6, 8, 10, 12][r.gen_range(0..8)];
    let target = r.gen_range(1..=max_rank);
    let mut entries = Vec::new();
    let mut total = 0;
    while total < target {
        let k = r.gen_range(1..order as i64);
        let m = r.gen_range(1..=target - total);
        entries.push((RootOfUnity::new(k, order), m));
        total += m;
    }
    (MultiplicityFunction::new(entries).unwrap(), order)
}

/// Random `(a, b, N)` with disjoint parameters, `N <= 12`, `rank <= max_rank`.
pub fn random_disjoint(
    r: &mut ChaCha8Rng,
    max_rank: usize,
) -> (Vec<CycNumber>, Vec<CycNumber>, u32) {
    loop {
        let order = [2u32, 3, 4, 5, 6, 8, 12][r.gen_range(0..7)];
        let n = r.gen_range(1..=max_rank);
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(0..order as i64)).collect();
        let pool: Vec<i64> = (0..order as i64).filter(|k| !a.contains(k)).collect();
        if pool.is_empty() {
            continue;
        }
        let b: Vec<i64> = (0..n).map(|_| pool[r.gen_range(0..pool.len())]).collect();
        let cyc = |v: &[i64]| v.iter().map(|&k| CycNumber::zeta_pow(order, k)).collect();
        return (cyc(&a), cyc(&b), order);
    }
}
