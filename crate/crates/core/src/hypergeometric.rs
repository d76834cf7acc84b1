//! Hypergeometric monodromy tuples on `P^1 - {0, 1, inf}` built from
//! companion matrices.
//!
//! With `A` and `B` the companion matrices of `prod (T - a_j)` and
//! `prod (T - b_j)`, the tuple is `A_0 = B^-1`, `A_1 = A^-1 B`, so the
//! monodromy at infinity `B^-1 A B` is conjugate to `A` and `A_1 - 1` has
//! rank at most one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{int, lcm, CycNumber, ExactMatrix, RootOfUnity};
use crate::monodromy::MonodromyTuple;

/// Monic polynomial `prod (T - r)`, constant term first.
pub fn poly_from_roots(roots: &[CycNumber], order: u32) -> Vec<CycNumber> {
    let mut poly = vec![CycNumber::one(order)];
    for r in roots {
        let mut next = vec![CycNumber::zero(order); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * r);
        }
        poly = next;
    }
    poly
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and the
/// negated coefficients in the last column.
pub fn companion(poly: &[CycNumber]) -> ExactMatrix {
    let n = poly.len() - 1;
    let order = poly.iter().map(CycNumber::order).fold(1, lcm);
    ExactMatrix::from_fn(n, n, order, |i, j| {
        if j == n - 1 {
            -&poly[i]
        } else if i == j + 1 {
            CycNumber::one(order)
        } else {
            CycNumber::zero(order)
        }
    })
}

fn check_root_of_unity(x: &CycNumber, order: u32) -> Result<()> {
    if x.is_zero() || !x.pow(order as i64).is_one() {
        return Err(Error::NotRootOfUnity(x.to_string()));
    }
    Ok(())
}

/// Hypergeometric tuple with parameters `a` (eigenvalues at infinity) and
/// `b` (inverse eigenvalues at 0), all in `mu_N`.
pub fn hypergeometric_tuple(
    a: &[CycNumber],
    b: &[CycNumber],
    order: u32,
) -> Result<MonodromyTuple> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::EmptyParameters);
    }
    for x in a.iter().chain(b) {
        check_root_of_unity(x, order)?;
    }
    let order = a.iter().chain(b).map(CycNumber::order).fold(order, lcm);
    let ca = companion(&poly_from_roots(a, order));
    let cb = companion(&poly_from_roots(b, order));
    let cb_inv = cb.inverse()?;
    let ca_inv = ca.inverse()?;
    MonodromyTuple::new(order, vec![int(0), int(1)], vec![cb_inv, &ca_inv * &cb])
}

/// Finitely supported `m: mu_N - {1} -> Z_{>0}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiplicityFunction {
    entries: BTreeMap<RootOfUnity, usize>,
}

impl MultiplicityFunction {
    /// Entries with multiplicity zero are dropped; repeated keys add up.
    pub fn new(entries: impl IntoIterator<Item = (RootOfUnity, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (z, m) in entries {
            if z.is_one() {
                return Err(Error::InvalidMultiplicity(
                    "1 cannot carry a multiplicity".into(),
                ));
            }
            if m > 0 {
                *map.entry(z).or_insert(0) += m;
            }
        }
        Ok(MultiplicityFunction { entries: map })
    }

    pub fn entries(&self) -> impl Iterator<Item = (RootOfUnity, usize)> + '_ {
        self.entries.iter().map(|(&z, &m)| (z, m))
    }

    /// `sum m(zeta)`, the rank of the associated local system.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Hypergeometric tuple with `a = (1, ..., 1)` and each `zeta` repeated
/// `m(zeta)` times in `b`: a single unipotent block at infinity, one block of
/// size `m(zeta)` with eigenvalue `zeta^-1` at 0, a pseudo-reflection at 1.
pub fn from_multiplicity_function(m: &MultiplicityFunction, order: u32) -> Result<MonodromyTuple> {
    if m.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut b = Vec::with_capacity(m.total());
    for (z, k) in m.entries() {
        if !order.is_multiple_of(z.order()) {
            return Err(Error::NotRootOfUnity(z.to_string()));
        }
        b.extend(std::iter::repeat_n(z.to_cyc(order), k));
    }
    let a = vec![CycNumber::one(order); b.len()];
    hypergeometric_tuple(&a, &b, order)
}
