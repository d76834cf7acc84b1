//! Monodromy tuples on `P^1` minus finitely many points, local Jordan
//! types, rigidity and irreducibility tests.
//!
//! A tuple stores one invertible matrix `A_k` per finite puncture. The
//! monodromy at infinity is derived as `(A_1 ... A_r)^-1`, product in listed
//! order, so that the product over all punctures is the identity.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{
    format_rational, lcm, parse_rational, CycNumber, ExactMatrix, Rational, RootOfUnity,
    SpanBuilder,
};

/// A point of `P^1(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Puncture {
    Finite(Rational),
    Infinity,
}

impl Puncture {
    pub fn finite(n: i64) -> Self {
        Puncture::Finite(crate::field::int(n))
    }
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Puncture::Finite(r) => f.write_str(&format_rational(r)),
            Puncture::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Puncture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "\u{221e}" => Ok(Puncture::Infinity),
            other => parse_rational(other).map(Puncture::Finite),
        }
    }
}

/// Local monodromy data of a local system on `P^1` minus the listed points
/// and infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTuple {
    order: u32,
    rank: usize,
    punctures: Vec<Rational>,
    matrices: Vec<ExactMatrix>,
    at_infinity: ExactMatrix,
}

impl MonodromyTuple {
    /// Validates and builds a tuple over `Q(zeta_order)`.
    pub fn new(order: u32, punctures: Vec<Rational>, matrices: Vec<ExactMatrix>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if punctures.len() != matrices.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} punctures but {} matrices",
                punctures.len(),
                matrices.len()
            )));
        }
        let Some(first) = matrices.first() else {
            return Err(Error::DimensionMismatch(
                "a tuple needs at least one finite puncture".into(),
            ));
        };
        let rank = first.rows();
        for m in &matrices {
            if !m.is_square() || m.rows() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "expected {rank}x{rank} matrices, found {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !order.is_multiple_of(m.order()) {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: m.order(),
                });
            }
        }
        for (i, p) in punctures.iter().enumerate() {
            if punctures[..i].contains(p) {
                return Err(Error::DuplicatePuncture(format_rational(p)));
            }
        }
        let matrices: Vec<ExactMatrix> = matrices.iter().map(|m| m.lift(order)).collect();
        let product = matrices[1..]
            .iter()
            .fold(matrices[0].clone(), |acc, m| &acc * m);
        // singular iff some factor is singular
        let at_infinity = product.inverse()?;
        Ok(MonodromyTuple {
            order,
            rank,
            punctures,
            matrices,
            at_infinity,
        })
    }

    /// Tuple on integer punctures, convenient for tests and fixtures.
    pub fn on_points(order: u32, points: &[i64], matrices: Vec<ExactMatrix>) -> Result<Self> {
        Self::new(
            order,
            points.iter().map(|&p| crate::field::int(p)).collect(),
            matrices,
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn finite_punctures(&self) -> &[Rational] {
        &self.punctures
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    pub fn at_infinity(&self) -> &ExactMatrix {
        &self.at_infinity
    }

    /// Finite punctures in listed order, then infinity.
    pub fn punctures(&self) -> Vec<Puncture> {
        self.punctures
            .iter()
            .cloned()
            .map(Puncture::Finite)
            .chain([Puncture::Infinity])
            .collect()
    }

    /// `(puncture, local monodromy)` pairs including infinity.
    pub fn local_monodromies(&self) -> impl Iterator<Item = (Puncture, &ExactMatrix)> {
        self.punctures
            .iter()
            .cloned()
            .map(Puncture::Finite)
            .zip(self.matrices.iter())
            .chain([(Puncture::Infinity, &self.at_infinity)])
    }

    pub fn monodromy_at(&self, p: &Puncture) -> Result<&ExactMatrix> {
        match p {
            Puncture::Infinity => Ok(&self.at_infinity),
            Puncture::Finite(x) => self
                .punctures
                .iter()
                .position(|q| q == x)
                .map(|i| &self.matrices[i])
                .ok_or_else(|| Error::UnknownPuncture(format_rational(x))),
        }
    }

    /// Simultaneous conjugation `A_k -> P A_k P^-1`.
    pub fn conjugate(&self, p: &ExactMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        let order = lcm(self.order, p.order());
        let matrices = self.matrices.iter().map(|a| &(p * a) * &p_inv).collect();
        Self::new(order, self.punctures.clone(), matrices)
    }

    /// Appends a finite puncture with the given local monodromy.
    pub fn with_puncture(&self, label: Rational, m: ExactMatrix) -> Result<Self> {
        let mut punctures = self.punctures.clone();
        let mut matrices = self.matrices.clone();
        punctures.push(label);
        matrices.push(m);
        Self::new(self.order, punctures, matrices)
    }

    /// Same data viewed over the larger field `Q(zeta_order)`.
    pub fn lift(&self, order: u32) -> Result<Self> {
        let m = lcm(order, self.order);
        Self::new(m, self.punctures.clone(), self.matrices.clone())
    }
}

/// `(m^N - I)^n = 0`, i.e. every eigenvalue is an `N`-th root of unity.
pub fn is_quasi_unipotent(m: &ExactMatrix, order: u32) -> bool {
    assert!(m.is_square());
    let n = m.rows() as u64;
    let shifted = m.pow(order as u64).sub_scalar(&CycNumber::one(m.order()));
    shifted.pow(n).is_zero()
}

/// One Jordan block shape with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JordanBlock {
    pub eigenvalue: RootOfUnity,
    pub size: usize,
    pub mult: usize,
}

/// Multiset of Jordan blocks of a quasi-unipotent matrix.
///
/// Blocks are merged by `(eigenvalue, size)` and sorted by eigenvalue angle,
/// then by decreasing size, so equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct JordanType {
    blocks: Vec<JordanBlock>,
}

impl JordanType {
    pub fn from_blocks(blocks: impl IntoIterator<Item = (RootOfUnity, usize, usize)>) -> Self {
        let mut merged: Vec<JordanBlock> = Vec::new();
        for (eigenvalue, size, mult) in blocks {
            if mult == 0 || size == 0 {
                continue;
            }
            match merged
                .iter_mut()
                .find(|b| b.eigenvalue == eigenvalue && b.size == size)
            {
                Some(b) => b.mult += mult,
                None => merged.push(JordanBlock {
                    eigenvalue,
                    size,
                    mult,
                }),
            }
        }
        merged.sort_by(|a, b| a.eigenvalue.cmp(&b.eigenvalue).then(b.size.cmp(&a.size)));
        JordanType { blocks: merged }
    }

    /// A single unipotent block `U(k)`.
    pub fn unipotent(k: usize) -> Self {
        Self::from_blocks([(RootOfUnity::one(), k, 1)])
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// Sum of block sizes.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.mult).sum()
    }

    /// Number of blocks counted with multiplicity.
    pub fn block_count(&self) -> usize {
        self.blocks.iter().map(|b| b.mult).sum()
    }

    pub fn is_single_block(&self) -> bool {
        self.block_count() == 1
    }

    /// Algebraic multiplicity of `z`.
    pub fn multiplicity(&self, z: RootOfUnity) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.eigenvalue == z)
            .map(|b| b.size * b.mult)
            .sum()
    }

    /// Geometric multiplicity of `z`.
    pub fn eigenspace_dim(&self, z: RootOfUnity) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.eigenvalue == z)
            .map(|b| b.mult)
            .sum()
    }

    pub fn eigenvalues(&self) -> Vec<RootOfUnity> {
        let mut out: Vec<RootOfUnity> = self.blocks.iter().map(|b| b.eigenvalue).collect();
        out.dedup();
        out
    }

    /// Jordan type after multiplying the matrix by the scalar `s`.
    pub fn twist(&self, s: RootOfUnity) -> Self {
        Self::from_blocks(
            self.blocks
                .iter()
                .map(|b| (b.eigenvalue.mul(&s), b.size, b.mult)),
        )
    }
}

impl fmt::Display for JordanType {
    /// Direct-sum notation: `1^{+3} (+) (-1)^{+4}`, `U(3) (+) U(2)^{+2}`,
    /// `(-1)(x)U(2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let base = match (b.eigenvalue.is_one(), b.size) {
                    (true, 1) => "1".to_string(),
                    (true, k) => format!("U({k})"),
                    (false, 1) => format!("({})", b.eigenvalue),
                    (false, k) => format!("({})(x)U({k})", b.eigenvalue),
                };
                match (b.mult, b.eigenvalue.is_one() || b.size == 1) {
                    (1, _) => base,
                    (m, true) => format!("{base}^{{+{m}}}"),
                    (m, false) => format!("({base})^{{+{m}}}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" (+) "))
    }
}

/// Jordan type of a matrix whose eigenvalues are `N`-th roots of unity.
///
/// For each `z` in `mu_N` the ranks `r_j = rank((m - z)^j)` determine the
/// number of blocks of size exactly `j` as `r_{j-1} - 2 r_j + r_{j+1}`.
pub fn jordan_type(m: &ExactMatrix, order: u32) -> Result<JordanType> {
    if !is_quasi_unipotent(m, order) {
        return Err(Error::NotQuasiUnipotent { order });
    }
    let n = m.rows();
    let mut blocks = Vec::new();
    let mut found = 0;
    for k in 0..order {
        if found == n {
            break;
        }
        let z = CycNumber::zeta_pow(order, k as i64);
        let shifted = m.sub_scalar(&z);
        let mut ranks = vec![n, shifted.rank()];
        if ranks[1] == n {
            continue;
        }
        let mut power = shifted.clone();
        while ranks[ranks.len() - 1] != ranks[ranks.len() - 2] {
            power = &power * &shifted;
            ranks.push(power.rank());
        }
        found += n - ranks[ranks.len() - 1];
        let ev = RootOfUnity::new(k as i64, order);
        for j in 1..ranks.len() - 1 {
            let count = ranks[j - 1] + ranks[j + 1] - 2 * ranks[j];
            blocks.push((ev, j, count));
        }
    }
    Ok(JordanType::from_blocks(blocks))
}

/// Dimension of the centralizer `{X : mX = Xm}`, as the nullity of the
/// `n^2 x n^2` linear system `X -> mX - Xm`.
pub fn centralizer_dim(m: &ExactMatrix) -> usize {
    assert!(m.is_square());
    let n = m.rows();
    let order = m.order();
    let mut sys = ExactMatrix::zeros(n * n, n * n, order);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (mX)_{ij} = sum_k m_ik X_kj
                let a = m.get(i, k);
                if !a.is_zero() {
                    let cur = sys.get(row, k * n + j).clone();
                    sys.set(row, k * n + j, &cur + a);
                }
                // (Xm)_{ij} = sum_k X_ik m_kj
                let b = m.get(k, j);
                if !b.is_zero() {
                    let cur = sys.get(row, i * n + k).clone();
                    sys.set(row, i * n + k, &cur - b);
                }
            }
        }
    }
    n * n - sys.rank()
}

/// `(2 - r') n^2 + sum_k dim Z(A_k)` over all `r'` punctures including
/// infinity. An irreducible tuple with index 2 is cohomologically rigid.
pub fn rigidity_index(t: &MonodromyTuple) -> i64 {
    let n = t.rank() as i64;
    let r_all = t.matrices().len() as i64 + 1;
    let centralizers: i64 = t
        .local_monodromies()
        .map(|(_, m)| centralizer_dim(m) as i64)
        .sum();
    (2 - r_all) * n * n + centralizers
}

/// Burnside's criterion: the tuple is absolutely irreducible iff the
/// algebra generated by its matrices is all of `M_n`.
pub fn is_absolutely_irreducible(t: &MonodromyTuple) -> bool {
    let n = t.rank();
    if n == 1 {
        return true;
    }
    generated_algebra_dim(t.matrices(), n, t.order()) == n * n
}

/// Dimension of the span of all words in `gens`, including the empty word.
pub fn generated_algebra_dim(gens: &[ExactMatrix], n: usize, order: u32) -> usize {
    let mut span = SpanBuilder::new(n * n, order);
    let identity = ExactMatrix::identity(n, order);
    span.insert(identity.entries());
    let mut queue = VecDeque::from([identity]);
    while let Some(w) = queue.pop_front() {
        if span.dim() == n * n {
            break;
        }
        for g in gens {
            let p = g * &w;
            if span.insert(p.entries()) {
                queue.push_back(p);
            }
        }
    }
    span.dim()
}

/// Jordan type at every puncture, infinity last.
pub fn local_jordan_types(t: &MonodromyTuple) -> Result<Vec<(Puncture, JordanType)>> {
    t.local_monodromies()
        .map(|(p, m)| Ok((p, jordan_type(m, t.order())?)))
        .collect()
}

/// A puncture whose local monodromy is a single Jordan block. Infinity is
/// preferred, then finite punctures in listed order; rank-one tuples, maximal
/// everywhere, report their first finite puncture.
pub fn is_somewhere_maximal(t: &MonodromyTuple) -> Result<Option<Puncture>> {
    let mut types = local_jordan_types(t)?;
    if t.rank() > 1 {
        types.rotate_right(1);
    }
    Ok(types
        .into_iter()
        .find(|(_, j)| j.is_single_block())
        .map(|(p, _)| p))
}

/// Sufficient certificate for Hodge regularity: somewhere maximally
/// quasi-unipotent local monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityCertificate {
    RegularViaLemma(Puncture),
    Unknown,
}

impl fmt::Display for RegularityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityCertificate::RegularViaLemma(p) => write!(f, "RegularViaLemma({p})"),
            RegularityCertificate::Unknown => f.write_str("Unknown"),
        }
    }
}

pub fn certify_regular(t: &MonodromyTuple) -> Result<RegularityCertificate> {
    Ok(match is_somewhere_maximal(t)? {
        Some(p) => RegularityCertificate::RegularViaLemma(p),
        None => RegularityCertificate::Unknown,
    })
}
