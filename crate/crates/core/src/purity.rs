//! Weil-number checks for characteristic polynomials of Frobenius, and
//! Hodge multiset bookkeeping.
//!
//! A [`WeilPolynomial`] passes when it satisfies the exact functional
//! equation `conj(Q)(X) = X^n Q(q^w / X) / Q(0)` and, under every embedding
//! of `Q(zeta_N)`, all its complex roots have `|alpha|^2 = q^w` up to the
//! requested relative tolerance. Roots are isolated by Weierstrass
//! (Durand-Kerner) iteration and certified with Weierstrass inclusion disks.

use std::collections::BTreeMap;
use std::fmt;

use astro_float::BigFloat;
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::field::{big_lt, int, lcm, BigComplex, CycNumber, Precision, Rational};

pub const DEFAULT_TOLERANCE: f64 = 1e-20;
pub const DEFAULT_PRECISION_BITS: usize = 256;
pub const MAX_PRECISION_BITS: usize = 4096;

/// Monic `Q` over `Q(zeta_N)` together with the `q` and weight `w` it is
/// tested against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    order: u32,
    coeffs: Vec<CycNumber>,
    q: u64,
    w: i64,
}

impl WeilPolynomial {
    /// `coeffs` runs from the constant term to the leading one.
    pub fn new(coeffs: Vec<CycNumber>, q: u64, w: i64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if !coeffs.last().is_some_and(CycNumber::is_one) {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        if q < 2 {
            return Err(Error::InvalidPolynomial(format!(
                "q must be at least 2, got {q}"
            )));
        }
        if coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = coeffs.iter().map(CycNumber::order).fold(1, lcm);
        let coeffs = coeffs.iter().map(|c| c.lift(order)).collect();
        Ok(WeilPolynomial {
            order,
            coeffs,
            q,
            w,
        })
    }

    pub fn from_ints(coeffs: &[i64], q: u64, w: i64) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| CycNumber::from_int(c, 1)).collect(),
            q,
            w,
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn w(&self) -> i64 {
        self.w
    }

    /// `q^w` as an exact rational (the weight may be negative).
    pub fn target(&self) -> Rational {
        weil_target(self.q, self.w)
    }

    /// `X^n conj(Q)(q^w / X) / conj(Q)(0)`, the conjugate-reciprocal
    /// transform. Fixed exactly by polynomials passing the functional
    /// equation.
    pub fn conj_reciprocal(&self) -> WeilPolynomial {
        let n = self.degree();
        let c0_inv = self.coeffs[0].conj().inv().expect("nonzero constant term");
        let coeffs = (0..=n)
            .map(|k| {
                let c = self.coeffs[n - k].conj();
                &c.scale(&weil_target(self.q, self.w * (n - k) as i64)) * &c0_inv
            })
            .collect();
        WeilPolynomial {
            order: self.order,
            coeffs,
            q: self.q,
            w: self.w,
        }
    }
}

impl fmt::Display for WeilPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            match (c.is_one(), k) {
                (true, 0) => f.write_str("1")?,
                (true, _) => f.write_str(&mono)?,
                (false, 0) => write!(f, "({c})")?,
                (false, _) => write!(f, "({c})*{mono}")?,
            }
        }
        Ok(())
    }
}

/// `conj(c_k) = c_{n-k} q^{w(n-k)} / c_0` for every `k`.
pub fn functional_equation_check(p: &WeilPolynomial) -> bool {
    let n = p.degree();
    let c0_inv = p.coeffs[0].inv().expect("nonzero constant term");
    (0..=n).all(|k| {
        let rhs = &p.coeffs[n - k].scale(&weil_target(p.q, p.w * (n - k) as i64)) * &c0_inv;
        p.coeffs[k].conj() == rhs
    })
}

fn trim(mut p: Vec<CycNumber>) -> Vec<CycNumber> {
    while p.last().is_some_and(CycNumber::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[CycNumber], b: &[CycNumber]) -> (Vec<CycNumber>, Vec<CycNumber>) {
    let order = a.iter().chain(b).map(CycNumber::order).fold(1, lcm);
    let lead_inv = b.last().and_then(CycNumber::inv).expect("nonzero divisor");
    let mut rem: Vec<CycNumber> = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![CycNumber::zero(order); a.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] = &rem[i + j] - &(&c * bj);
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    (trim(quot), trim(rem))
}

fn monic(p: Vec<CycNumber>) -> Vec<CycNumber> {
    let inv = p
        .last()
        .and_then(CycNumber::inv)
        .expect("nonzero polynomial");
    p.iter().map(|c| c * &inv).collect()
}

/// Monic gcd over `Q(zeta_N)`.
pub fn poly_gcd(a: &[CycNumber], b: &[CycNumber]) -> Vec<CycNumber> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

pub fn derivative(p: &[CycNumber]) -> Vec<CycNumber> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&int(k as i64)))
        .collect()
}

/// `Q / gcd(Q, Q')`: same roots, all simple.
pub fn squarefree_part(p: &[CycNumber]) -> Vec<CycNumber> {
    let g = poly_gcd(p, &derivative(p));
    if g.len() == 1 {
        return monic(trim(p.to_vec()));
    }
    let (q, r) = poly_divrem(p, &g);
    debug_assert!(r.is_empty());
    monic(q)
}

fn horner(prec: &Precision, coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let mut acc = prec.zero();
    for c in coeffs.iter().rev() {
        acc = prec.add(&prec.mul(&acc, z), c);
    }
    acc
}

/// Certified outcome of the root moduli at one precision.
enum Moduli {
    AllInside,
    SomeOutside,
    Undecided,
}

struct RootIsolation<'a> {
    prec: &'a mut Precision,
    coeffs: Vec<BigComplex>,
    roots: Vec<BigComplex>,
}

impl RootIsolation<'_> {
    /// `prod_{j != i} (z_i - z_j)`.
    fn separation(&self, i: usize) -> BigComplex {
        let prec = &*self.prec;
        let zi = &self.roots[i];
        let mut den = prec.from_real(prec.real(1));
        for (j, zj) in self.roots.iter().enumerate() {
            if i != j {
                den = prec.mul(&den, &prec.sub(zi, zj));
            }
        }
        den
    }

    fn iterate(&mut self) -> bool {
        let n = self.roots.len();
        let stop = self.prec.pow2(-(self.prec.bits() as i64 - 32));
        for _ in 0..(100 + 20 * n) {
            let mut converged = true;
            for i in 0..n {
                let den = self.separation(i);
                let prec = &*self.prec;
                let zi = &self.roots[i];
                let Some(w) = prec.div(&horner(prec, &self.coeffs, zi), &den) else {
                    return false;
                };
                let scale = prec.add_real(&prec.abs(zi), &prec.real(1));
                if !big_lt(&prec.abs(&w), &prec.mul_real(&stop, &scale)) {
                    converged = false;
                }
                self.roots[i] = prec.sub(zi, &w);
            }
            if converged {
                return true;
            }
        }
        false
    }

    /// Inclusion radii `n (|Q(z_i)| + err_i) / |prod (z_i - z_j)|`, where
    /// `err_i` bounds the rounding error of the embedded evaluation.
    fn radii(&self) -> Option<Vec<BigFloat>> {
        let prec = &*self.prec;
        let n = self.roots.len();
        let eps = prec.pow2(-(prec.bits() as i64 - 16));
        let mut out = Vec::with_capacity(n);
        for (i, zi) in self.roots.iter().enumerate() {
            let den = prec.abs(&self.separation(i));
            if den.is_zero() {
                return None;
            }
            let az = prec.abs(zi);
            let mut size = prec.real(0);
            let mut pw = prec.real(1);
            for c in &self.coeffs {
                size = prec.add_real(&size, &prec.mul_real(&prec.abs(c), &pw));
                pw = prec.mul_real(&pw, &az);
            }
            let err = prec.mul_real(&prec.mul_real(&eps, &prec.real(n as i64 + 2)), &size);
            let num = prec.add_real(&prec.abs(&horner(prec, &self.coeffs, zi)), &err);
            out.push(prec.mul_real(&prec.real(n as i64), &prec.div_real(&num, &den)));
        }
        Some(out)
    }

    fn classify(&self, target: &Rational, tol: f64) -> Moduli {
        let prec = &*self.prec;
        let radii = match self.radii() {
            Some(r) => r,
            None => return Moduli::Undecided,
        };
        let n = self.roots.len();
        for i in 0..n {
            for j in i + 1..n {
                let gap = prec.abs(&prec.sub(&self.roots[i], &self.roots[j]));
                if !big_lt(&prec.add_real(&radii[i], &radii[j]), &gap) {
                    return Moduli::Undecided;
                }
            }
        }
        let t = prec_rational(prec, target);
        let tol = prec.from_f64(tol);
        let lo_ok = prec.mul_real(&t, &prec.sub_real(&prec.real(1), &tol));
        let hi_ok = prec.mul_real(&t, &prec.add_real(&prec.real(1), &tol));
        let mut decided = true;
        for (z, r) in self.roots.iter().zip(&radii) {
            let a = prec.abs(z);
            let lo = prec.sub_real(&a, r);
            let lo = if big_lt(&lo, &prec.real(0)) {
                prec.real(0)
            } else {
                lo
            };
            let lo = prec.mul_real(&lo, &lo);
            let hi = prec.add_real(&a, r);
            let hi = prec.mul_real(&hi, &hi);
            if big_lt(&hi, &lo_ok) || big_lt(&hi_ok, &lo) {
                return Moduli::SomeOutside;
            }
            if big_lt(&lo, &lo_ok) || big_lt(&hi_ok, &hi) {
                decided = false;
            }
        }
        if decided {
            Moduli::AllInside
        } else {
            Moduli::Undecided
        }
    }
}

fn prec_rational(prec: &Precision, r: &Rational) -> BigFloat {
    let num = big_int(prec, r.numer());
    let den = big_int(prec, r.denom());
    prec.div_real(&num, &den)
}

fn big_int(prec: &Precision, n: &num_bigint::BigInt) -> BigFloat {
    let mut acc = prec.real(0);
    let base = prec.pow2(32);
    let (sign, digits) = n.to_u32_digits();
    for d in digits.iter().rev() {
        acc = prec.add_real(&prec.mul_real(&acc, &base), &prec.real(*d as i64));
    }
    if sign == num_bigint::Sign::Minus {
        prec.sub_real(&prec.real(0), &acc)
    } else {
        acc
    }
}

fn initial_guesses(prec: &Precision, coeffs: &[BigComplex]) -> Vec<BigComplex> {
    let n = coeffs.len() - 1;
    // Cauchy bound on the root moduli of a monic polynomial.
    let bound = coeffs[..n]
        .iter()
        .map(|c| c.to_f64())
        .map(|(re, im)| re.hypot(im))
        .fold(0.0, f64::max)
        + 1.0;
    let r = bound.min(1e300) * 0.5 + 0.1;
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            BigComplex {
                re: prec.from_f64(r * angle.cos()),
                im: prec.from_f64(r * angle.sin()),
            }
        })
        .collect()
}

/// Magnitude check at the default starting precision.
pub fn magnitude_check(p: &WeilPolynomial, tolerance: f64) -> Result<bool> {
    magnitude_check_with_precision(p, tolerance, DEFAULT_PRECISION_BITS)
}

/// True iff for every embedding `zeta -> exp(2 pi i a / N)`, `gcd(a, N) = 1`,
/// every complex root `alpha` satisfies `||alpha|^2 - q^w| <= tol q^w`.
/// Precision doubles from `bits` up to [`MAX_PRECISION_BITS`] until every
/// root is certified inside or some root certified outside.
pub fn magnitude_check_with_precision(
    p: &WeilPolynomial,
    tolerance: f64,
    bits: usize,
) -> Result<bool> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidTolerance(tolerance.to_string()));
    }
    let sqf = squarefree_part(&p.coeffs);
    let target = p.target();
    let order = p.order as i64;
    for a in (1..=order).filter(|a| a.gcd(&order) == 1) {
        let mut bits = bits.clamp(64, MAX_PRECISION_BITS);
        let mut warm: Option<Vec<BigComplex>> = None;
        loop {
            let mut prec = Precision::new(bits);
            let coeffs = sqf
                .iter()
                .map(|c| c.embed_with(a, &mut prec))
                .collect::<Result<Vec<_>>>()?;
            let roots = warm
                .take()
                .unwrap_or_else(|| initial_guesses(&prec, &coeffs));
            let mut iso = RootIsolation {
                prec: &mut prec,
                coeffs,
                roots,
            };
            let converged = iso.iterate();
            let verdict = if converged {
                iso.classify(&target, tolerance)
            } else {
                Moduli::Undecided
            };
            match verdict {
                Moduli::AllInside => break,
                Moduli::SomeOutside => return Ok(false),
                Moduli::Undecided if bits < MAX_PRECISION_BITS => {
                    bits = (bits * 2).min(MAX_PRECISION_BITS);
                    warm = converged.then_some(iso.roots);
                }
                Moduli::Undecided => return Err(Error::RootFindingFailure(bits)),
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeilVerdict {
    Pass,
    FailFunctionalEquation,
    FailMagnitude,
}

impl WeilVerdict {
    pub fn is_pass(self) -> bool {
        self == WeilVerdict::Pass
    }
}

impl fmt::Display for WeilVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeilVerdict::Pass => "Pass",
            WeilVerdict::FailFunctionalEquation => "FailFunctionalEquation",
            WeilVerdict::FailMagnitude => "FailMagnitude",
        })
    }
}

pub fn weil_check(p: &WeilPolynomial, tolerance: f64) -> Result<WeilVerdict> {
    weil_check_with_precision(p, tolerance, DEFAULT_PRECISION_BITS)
}

/// Functional equation first, then magnitudes; reports the first failure.
pub fn weil_check_with_precision(
    p: &WeilPolynomial,
    tolerance: f64,
    bits: usize,
) -> Result<WeilVerdict> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidTolerance(tolerance.to_string()));
    }
    if !functional_equation_check(p) {
        return Ok(WeilVerdict::FailFunctionalEquation);
    }
    Ok(if magnitude_check_with_precision(p, tolerance, bits)? {
        WeilVerdict::Pass
    } else {
        WeilVerdict::FailMagnitude
    })
}

/// Multiset of Hodge numbers with the weight they are paired against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeMultiset {
    values: Vec<i64>,
    weight: i64,
}

impl HodgeMultiset {
    pub fn new(mut values: Vec<i64>, weight: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyHodge);
        }
        values.sort_unstable();
        Ok(HodgeMultiset { values, weight })
    }

    /// Sorted ascending.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &v in &self.values {
            *out.entry(v).or_insert(0) += 1;
        }
        out
    }
}

/// `{w - h : h in H}`.
pub fn hodge_conjugate_dual(h: &HodgeMultiset) -> HodgeMultiset {
    let values = h.values.iter().map(|v| h.weight - v).collect();
    HodgeMultiset::new(values, h.weight).expect("nonempty")
}

pub fn hodge_is_regular(h: &HodgeMultiset) -> bool {
    h.values.windows(2).all(|w| w[0] != w[1])
}

/// Parses `X^2 - 3X + 2`, `x^3+x`, `2*X - 1` style integer polynomials,
/// returning coefficients from the constant term up.
pub fn parse_integer_poly(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::Parse(format!("cannot parse polynomial {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut coeffs: Vec<i64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, deg) = match body.find(['X', 'x']) {
            None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>().map_err(|_| bad())?
                };
                let rest = &body[pos + 1..];
                let d = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<usize>()
                        .map_err(|_| bad())?
                };
                (c, d)
            }
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] += sign * coef;
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// `q^w` as an exact rational; `w` may be negative.
pub fn weil_target(q: u64, w: i64) -> Rational {
    if w >= 0 {
        Pow::pow(int(q as i64), w as u64)
    } else {
        Rational::one() / Pow::pow(int(q as i64), w.unsigned_abs())
    }
}
