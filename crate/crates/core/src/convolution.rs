//! Rank-one twists, middle convolution, the recursive family `F_i` and
//! Katz's rank-reduction algorithm.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::{int, lcm, CycNumber, ExactMatrix, Rational, SpanBuilder};
use crate::monodromy::{
    is_absolutely_irreducible, jordan_type, rigidity_index, JordanType, MonodromyTuple,
};

/// Scalars of a rank-one local system, one per finite puncture. The scalar
/// at infinity is the inverse of their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneData {
    scalars: Vec<CycNumber>,
}

impl RankOneData {
    pub fn new(scalars: Vec<CycNumber>) -> Result<Self> {
        if scalars.iter().any(CycNumber::is_zero) {
            return Err(Error::ZeroScalar);
        }
        Ok(RankOneData { scalars })
    }

    /// Convenience constructor from integers (typically `1` and `-1`).
    pub fn from_ints(scalars: &[i64]) -> Result<Self> {
        Self::new(scalars.iter().map(|&s| CycNumber::from_int(s, 1)).collect())
    }

    pub fn scalars(&self) -> &[CycNumber] {
        &self.scalars
    }

    pub fn infinity_scalar(&self) -> CycNumber {
        let order = self.scalars.iter().map(CycNumber::order).fold(1, lcm);
        let prod = self
            .scalars
            .iter()
            .fold(CycNumber::one(order), |acc, s| &acc * s);
        prod.inv().expect("scalars are nonzero")
    }
}

/// Rank-one tuple with `A_k = [scalar_k]`.
pub fn rank_one_system(
    punctures: Vec<Rational>,
    scalars: &[CycNumber],
    order: u32,
) -> Result<MonodromyTuple> {
    for s in scalars {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if !s.pow(order as i64).is_one() {
            return Err(Error::NotRootOfUnity(s.to_string()));
        }
    }
    let order = scalars.iter().map(CycNumber::order).fold(order, lcm);
    let matrices = scalars.iter().map(|s| ExactMatrix::scalar(1, s)).collect();
    MonodromyTuple::new(order, punctures, matrices)
}

/// `L(chi1, chi2)` on `P^1 - {0, 1, inf}`: local monodromy `chi1` at 0 and
/// `chi2` at 1.
pub fn two_point_rank_one(
    chi1: &CycNumber,
    chi2: &CycNumber,
    order: u32,
) -> Result<MonodromyTuple> {
    rank_one_system(vec![int(0), int(1)], &[chi1.clone(), chi2.clone()], order)
}

/// `A_k -> s_k A_k` at every finite puncture.
pub fn tensor_rank_one(t: &MonodromyTuple, s: &RankOneData) -> Result<MonodromyTuple> {
    if s.scalars.len() != t.matrices().len() {
        return Err(Error::PunctureMismatch {
            expected: t.matrices().len(),
            found: s.scalars.len(),
        });
    }
    let order = s.scalars.iter().map(CycNumber::order).fold(t.order(), lcm);
    let matrices = t
        .matrices()
        .iter()
        .zip(&s.scalars)
        .map(|(a, c)| a.scale(c))
        .collect();
    MonodromyTuple::new(order, t.finite_punctures().to_vec(), matrices)
}

/// Middle convolution `MC_lambda` in the Dettweiler-Reiter block form.
///
/// On `K^{rn}`, `B_k` is the identity outside block row `k`, whose blocks are
/// `A_j - 1` (j < k), `lambda A_k` (j = k) and `lambda (A_j - 1)` (j > k).
/// The output is the action induced on the quotient by `K + L`, where
/// `K = (+)_j ker(A_j - 1)` and `L = cap_k ker(B_k - 1)`.
pub fn middle_convolution(t: &MonodromyTuple, lambda: &CycNumber) -> Result<MonodromyTuple> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let order = lcm(t.order(), lambda.order());
    let lambda = lambda.lift(order);
    let n = t.rank();
    let r = t.matrices().len();
    let dim = r * n;
    let a: Vec<ExactMatrix> = t.matrices().iter().map(|m| m.lift(order)).collect();
    let one = CycNumber::one(order);
    let a_minus_one: Vec<ExactMatrix> = a.iter().map(|m| m.sub_scalar(&one)).collect();

    // Block row k of B_k.
    let block_row = |k: usize| -> Vec<ExactMatrix> {
        (0..r)
            .map(|j| match j.cmp(&k) {
                std::cmp::Ordering::Less => a_minus_one[j].clone(),
                std::cmp::Ordering::Equal => a[k].scale(&lambda),
                std::cmp::Ordering::Greater => a_minus_one[j].scale(&lambda),
            })
            .collect()
    };
    let identity = ExactMatrix::identity(n, order);
    let zero = ExactMatrix::zeros(n, n, order);
    let rows_of_b: Vec<Vec<ExactMatrix>> = (0..r).map(block_row).collect();
    let b: Vec<ExactMatrix> = (0..r)
        .map(|k| {
            let blocks: Vec<Vec<ExactMatrix>> = (0..r)
                .map(|i| {
                    if i == k {
                        rows_of_b[k].clone()
                    } else {
                        (0..r)
                            .map(|j| {
                                if i == j {
                                    identity.clone()
                                } else {
                                    zero.clone()
                                }
                            })
                            .collect()
                    }
                })
                .collect();
            ExactMatrix::from_blocks(&blocks)
        })
        .collect();

    let mut sub = SpanBuilder::new(dim, order);
    for (j, m) in a_minus_one.iter().enumerate() {
        for v in m.kernel() {
            let mut w = vec![CycNumber::zero(order); dim];
            w[j * n..(j + 1) * n].clone_from_slice(&v);
            sub.insert(&w);
        }
    }
    // B_k - 1 vanishes outside block row k, so L is the kernel of the
    // stacked block rows.
    let stacked: Vec<Vec<ExactMatrix>> = (0..r)
        .map(|k| {
            let mut row = rows_of_b[k].clone();
            row[k] = row[k].sub_scalar(&one);
            row
        })
        .collect();
    for v in ExactMatrix::from_blocks(&stacked).kernel() {
        sub.insert(&v);
    }

    let w = sub.dim();
    if w == dim {
        return Err(Error::ZeroRank);
    }
    let mut columns: Vec<Vec<CycNumber>> = sub.basis().to_vec();
    let mut full = sub;
    for e in 0..dim {
        let mut v = vec![CycNumber::zero(order); dim];
        v[e] = one.clone();
        if full.insert(&v) {
            columns.push(v);
        }
    }
    let basis = ExactMatrix::from_fn(dim, dim, order, |i, j| columns[j][i].clone());
    let basis_inv = basis.inverse()?;
    let out = dim - w;
    let matrices = b
        .iter()
        .map(|bk| {
            let conj = &(&basis_inv * bk) * &basis;
            ExactMatrix::from_fn(out, out, order, |i, j| conj.get(w + i, w + j).clone())
        })
        .collect();
    MonodromyTuple::new(order, t.finite_punctures().to_vec(), matrices)
}

fn family_cache() -> &'static Mutex<Vec<MonodromyTuple>> {
    static CACHE: OnceLock<Mutex<Vec<MonodromyTuple>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// The family `F_0 = L(-1, -1)`,
/// `F_{2i-1} = L(1, -1) (x) MC_{-1}(F_{2i-2})`,
/// `F_{2i} = L(-1, 1) (x) MC_{-1}(F_{2i-1})`, over `Q(zeta_2)`.
///
/// Members are cached; each one is computed once.
pub fn build_f(i: i64) -> Result<MonodromyTuple> {
    if i < 0 {
        return Err(Error::NegativeIndex(i));
    }
    let i = i as usize;
    let mut cache = family_cache().lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        let m1 = CycNumber::from_int(-1, 2);
        cache.push(two_point_rank_one(&m1, &m1, 2)?);
    }
    let minus_one = CycNumber::from_int(-1, 2);
    while cache.len() <= i {
        let j = cache.len();
        let prev = &cache[j - 1];
        let twist = if j % 2 == 1 {
            RankOneData::from_ints(&[1, -1])?
        } else {
            RankOneData::from_ints(&[-1, 1])?
        };
        let next = tensor_rank_one(&middle_convolution(prev, &minus_one)?, &twist)?;
        cache.push(next);
    }
    Ok(cache[i].clone())
}

/// One step of Katz's algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub twist: RankOneData,
    pub lambda: CycNumber,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Eigenvalue with the largest eigenspace; ties go to the smallest angle.
fn dominant_eigenvalue(jt: &JordanType) -> crate::field::RootOfUnity {
    let mut best = None;
    for z in jt.eigenvalues() {
        let d = jt.eigenspace_dim(z);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((z, d));
        }
    }
    best.expect("nonempty Jordan type").0
}

/// Twists every finite local monodromy so that its dominant eigenvalue
/// becomes 1, then applies `MC_lambda` with `lambda` the dominant eigenvalue
/// of the twisted monodromy at infinity. The rank strictly drops for
/// irreducible rigid tuples of rank at least two.
pub fn katz_reduce_step(t: &MonodromyTuple) -> Result<(RankOneData, CycNumber, MonodromyTuple)> {
    if t.rank() == 1 {
        return Err(Error::AlreadyRankOne);
    }
    let index = rigidity_index(t);
    if index != 2 {
        return Err(Error::NotRigid(index));
    }
    if !is_absolutely_irreducible(t) {
        return Err(Error::NotIrreducible);
    }
    let order = t.order();
    let mut scalars = Vec::with_capacity(t.matrices().len());
    for m in t.matrices() {
        let z = dominant_eigenvalue(&jordan_type(m, order)?);
        scalars.push(z.inv().to_cyc(order));
    }
    let twist = RankOneData::new(scalars)?;
    let twisted = tensor_rank_one(t, &twist)?;
    let lambda = dominant_eigenvalue(&jordan_type(twisted.at_infinity(), order)?).to_cyc(order);
    let result = middle_convolution(&twisted, &lambda)?;
    if result.rank() >= t.rank() {
        return Err(Error::NoProgress(t.rank()));
    }
    Ok((twist, lambda, result))
}

/// Iterates [`katz_reduce_step`] down to rank one.
pub fn katz_reduce(t: &MonodromyTuple) -> Result<ReductionTrace> {
    let mut trace = ReductionTrace::default();
    let mut current = t.clone();
    while current.rank() > 1 {
        let (twist, lambda, next) = katz_reduce_step(&current)?;
        trace.steps.push(ReductionStep {
            twist,
            lambda,
            rank: next.rank(),
        });
        current = next;
    }
    Ok(trace)
}
