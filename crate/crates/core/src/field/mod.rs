//! Exact arithmetic in `Q` and in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements of `Q(zeta_N)` are stored in the reduced power basis
//! `1, zeta, ..., zeta^(phi(N)-1)`, i.e. as the unique remainder modulo the
//! `N`-th cyclotomic polynomial. Equality is therefore coefficient
//! comparison. Operands over different orders are lifted to the lcm of the
//! two orders before combining.

mod complex;
mod cyclotomic;
mod matrix;
mod qpoly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use complex::{big_lt, big_to_f64, BigComplex, Precision};
pub use cyclotomic::{cyclotomic_poly, euler_phi, lcm};
pub use matrix::{ExactMatrix, SpanBuilder};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the cyclotomic field `Q(zeta_N)`.
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycNumber {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(Rational::one(), order)
    }

    pub fn from_rational(r: Rational, order: u32) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = r;
        x
    }

    pub fn from_int(n: i64, order: u32) -> Self {
        Self::from_rational(int(n), order)
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let mut raw = vec![Rational::zero(); order as usize];
        raw[k.rem_euclid(order as i64) as usize] = Rational::one();
        Self::reduce_raw(raw, order)
    }

    /// Reduces a coefficient vector in `1, zeta, ..., zeta^(N-1)` to the
    /// canonical representative modulo `Phi_N`.
    pub fn normalize(raw: Vec<Rational>, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if raw.len() != order as usize {
            return Err(Error::DimensionMismatch(format!(
                "expected {order} raw coefficients, got {}",
                raw.len()
            )));
        }
        Ok(Self::reduce_raw(raw, order))
    }

    /// Builds an element from coefficients already in the reduced basis.
    pub fn from_reduced(coeffs: Vec<Rational>, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if coeffs.len() != euler_phi(order) as usize {
            return Err(Error::DimensionMismatch(format!(
                "expected {} reduced coefficients for order {order}, got {}",
                euler_phi(order),
                coeffs.len()
            )));
        }
        Ok(CycNumber { order, coeffs })
    }

    /// Reduces a polynomial in `zeta` of any length modulo `Phi_N`.
    fn reduce_raw(mut raw: Vec<Rational>, order: u32) -> Self {
        let phi = cyclotomic_poly(order);
        let d = phi.len() - 1;
        for i in (d..raw.len()).rev() {
            if raw[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut raw[i]);
            for (j, &p) in phi[..d].iter().enumerate() {
                if p != 0 {
                    raw[i - d + j] -= &c * BigInt::from(p);
                }
            }
        }
        raw.resize(d, Rational::zero());
        CycNumber { order, coeffs: raw }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses this element in `Q(zeta_M)`; `M` must be a multiple of
    /// the current order.
    pub fn lift(&self, order: u32) -> Self {
        assert!(
            order.is_multiple_of(self.order),
            "cannot lift order {} to {order}",
            self.order
        );
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut raw = vec![Rational::zero(); order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i * step) % order as usize] += c;
            }
        }
        Self::reduce_raw(raw, order)
    }

    fn binary(&self, other: &Self, f: impl Fn(&Self, &Self) -> Self) -> Self {
        if self.order == other.order {
            return f(self, other);
        }
        let m = lcm(self.order, other.order);
        f(&self.lift(m), &other.lift(m))
    }

    fn add_same(a: &Self, b: &Self) -> Self {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycNumber {
            order: a.order,
            coeffs,
        }
    }

    fn sub_same(a: &Self, b: &Self) -> Self {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CycNumber {
            order: a.order,
            coeffs,
        }
    }

    fn mul_same(a: &Self, b: &Self) -> Self {
        let d = a.coeffs.len();
        if d == 1 {
            return CycNumber {
                order: a.order,
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            };
        }
        let mut raw = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Self::reduce_raw(raw, a.order)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coeffs.len() == 1 {
            return Some(CycNumber {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let modulus: Vec<Rational> = cyclotomic_poly(self.order)
            .iter()
            .map(|&c| int(c))
            .collect();
        let inv = qpoly::inverse_mod(&self.coeffs, &modulus)?;
        Some(Self::reduce_raw(inv, self.order))
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inv().expect("zero to a negative power")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Complex conjugation: the automorphism `zeta -> zeta^(N-1)`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        if self.coeffs.len() == 1 {
            return self.clone();
        }
        let mut raw = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(n - i) % n] += c;
            }
        }
        Self::reduce_raw(raw, self.order)
    }

    /// Image under the embedding `zeta -> exp(2 pi i a / N)` at 256 bits.
    pub fn embed(&self, a: i64) -> Result<BigComplex> {
        self.embed_with(a, &mut Precision::new(256))
    }

    /// Image under `zeta -> exp(2 pi i a / N)` at the given precision.
    pub fn embed_with(&self, a: i64, prec: &mut Precision) -> Result<BigComplex> {
        if (a.rem_euclid(self.order as i64)).gcd(&(self.order as i64)) != 1 && self.order != 1 {
            return Err(Error::NotAnEmbedding {
                exponent: a,
                order: self.order,
            });
        }
        let z = prec.root_of_unity(a, self.order);
        let mut acc = prec.zero();
        for c in self.coeffs.iter().rev() {
            acc = prec.mul(&acc, &z);
            let cr = prec.rational(c);
            acc.re = prec.add_real(&acc.re, &cr);
        }
        Ok(acc)
    }

    /// If this element is a root of unity, the exponent `k/M` with
    /// `self = exp(2 pi i k / M)` in lowest terms.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        // Roots of unity in Q(zeta_N) are exactly the 2N-th roots (N odd)
        // or the N-th roots (N even).
        let m = if self.order % 2 == 1 {
            2 * self.order
        } else {
            self.order
        };
        (0..m)
            .find(|&k| *self == Self::zeta_pow(m, k as i64))
            .map(|k| RootOfUnity::new(k as i64, m))
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = lcm(self.order, other.order);
        self.lift(m).coeffs == other.lift(m).coeffs
    }
}

impl Eq for CycNumber {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $same:path) => {
        impl $tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                self.binary(rhs, $same)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, CycNumber::add_same);
forward_binop!(Sub, sub, CycNumber::sub_same);
forward_binop!(Mul, mul, CycNumber::mul_same);

impl Div<&CycNumber> for &CycNumber {
    type Output = CycNumber;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CycNumber) -> CycNumber {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let term = match i {
                0 => String::new(),
                1 => format!("zeta{}", self.order),
                _ => format!("zeta{}^{}", self.order, i),
            };
            if i == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&term)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), term)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A root of unity `exp(2 pi i num / den)` with `0 <= num < den` and
/// `gcd(num, den) = 1`. Independent of the field it is realized in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u32,
    den: u32,
}

impl RootOfUnity {
    pub fn new(k: i64, n: u32) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u32;
        let g = k.gcd(&n);
        if k == 0 {
            return RootOfUnity { num: 0, den: 1 };
        }
        RootOfUnity {
            num: k / g,
            den: n / g,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { num: 1, den: 2 }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u32 {
        self.den
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inv(&self) -> Self {
        RootOfUnity::new(-(self.num as i64), self.den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.den, other.den);
        RootOfUnity::new(
            (self.num * (m / self.den)) as i64 + (other.num * (m / other.den)) as i64,
            m,
        )
    }

    /// The element of `Q(zeta_order)` this root represents; `order` must be
    /// a multiple of `self.order()`, or twice an odd one.
    pub fn to_cyc(&self, order: u32) -> CycNumber {
        if order.is_multiple_of(self.den) {
            CycNumber::zeta_pow(order, (self.num * (order / self.den)) as i64)
        } else {
            CycNumber::zeta_pow(self.den, self.num as i64).lift(lcm(order, self.den))
        }
    }

    /// Parses `1`, `-1`, `zeta<N>` or `zeta<N>^k` (k may be negative).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid root of unity {s:?}"));
        match s {
            "1" => return Ok(Self::one()),
            "-1" => return Ok(Self::minus_one()),
            _ => {}
        }
        let rest = s.strip_prefix("zeta").ok_or_else(bad)?;
        let (n, k) = match rest.split_once('^') {
            Some((n, k)) => (n, k.trim().parse::<i64>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(RootOfUnity::new(k, n))
    }
}

/// Ordered by angle in `[0, 2 pi)`.
impl Ord for RootOfUnity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u64 * other.den as u64).cmp(&(other.num as u64 * self.den as u64))
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => f.write_str("1"),
            (1, 2) => f.write_str("-1"),
            (1, d) => write!(f, "zeta{d}"),
            (k, d) => write!(f, "zeta{d}^{k}"),
        }
    }
}
