//! Multi-precision complex numbers, used for embeddings of cyclotomic
//! elements into `C` and for numerical root isolation.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: binary precision plus a constants cache.
pub struct Precision {
    bits: usize,
    consts: Consts,
}

impl Precision {
    pub fn new(bits: usize) -> Self {
        Precision {
            bits: bits.max(64),
            consts: Consts::new().expect("constants cache"),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn real(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.bits)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let num = BigFloat::parse(
            &r.numer().to_string(),
            Radix::Dec,
            self.bits,
            RM,
            &mut self.consts,
        );
        if r.denom() == &num_bigint::BigInt::from(1) {
            return num;
        }
        let den = BigFloat::parse(
            &r.denom().to_string(),
            Radix::Dec,
            self.bits,
            RM,
            &mut self.consts,
        );
        num.div(&den, self.bits, RM)
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    /// `exp(2 pi i a / n)`.
    pub fn root_of_unity(&mut self, a: i64, n: u32) -> BigComplex {
        let a = a.rem_euclid(n as i64);
        let guard = self.bits + 64;
        let two_pi = self
            .consts
            .pi(guard, RM)
            .mul(&BigFloat::from_i64(2, guard), guard, RM);
        let angle = two_pi.mul(&BigFloat::from_i64(a, guard), guard, RM).div(
            &BigFloat::from_i64(n as i64, guard),
            guard,
            RM,
        );
        let re = angle.cos(guard, RM, &mut self.consts);
        let im = angle.sin(guard, RM, &mut self.consts);
        BigComplex {
            re: self.round(&re),
            im: self.round(&im),
        }
    }

    fn round(&self, x: &BigFloat) -> BigFloat {
        let mut y = x.clone();
        let _ = y.set_precision(self.bits, RM);
        y
    }

    pub fn zero(&self) -> BigComplex {
        BigComplex {
            re: self.real(0),
            im: self.real(0),
        }
    }

    pub fn from_real(&self, re: BigFloat) -> BigComplex {
        BigComplex {
            re,
            im: self.real(0),
        }
    }

    pub fn add(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: a.re.add(&b.re, self.bits, RM),
            im: a.im.add(&b.im, self.bits, RM),
        }
    }

    pub fn sub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex {
            re: a.re.sub(&b.re, self.bits, RM),
            im: a.im.sub(&b.im, self.bits, RM),
        }
    }

    pub fn mul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let p = self.bits;
        let re = a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM);
        BigComplex { re, im }
    }

    pub fn scale(&self, a: &BigComplex, s: &BigFloat) -> BigComplex {
        BigComplex {
            re: a.re.mul(s, self.bits, RM),
            im: a.im.mul(s, self.bits, RM),
        }
    }

    /// Returns `None` when `b` is exactly zero.
    pub fn div(&self, a: &BigComplex, b: &BigComplex) -> Option<BigComplex> {
        let p = self.bits;
        let den = self.norm_sqr(b);
        if den.is_zero() {
            return None;
        }
        let re = a.re.mul(&b.re, p, RM).add(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.im.mul(&b.re, p, RM).sub(&a.re.mul(&b.im, p, RM), p, RM);
        Some(BigComplex {
            re: re.div(&den, p, RM),
            im: im.div(&den, p, RM),
        })
    }

    pub fn norm_sqr(&self, a: &BigComplex) -> BigFloat {
        let p = self.bits;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM)
    }

    pub fn abs(&self, a: &BigComplex) -> BigFloat {
        self.norm_sqr(a).sqrt(self.bits, RM)
    }

    pub fn add_real(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub_real(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul_real(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div_real(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    /// `2^e`, exact.
    pub fn pow2(&self, e: i64) -> BigFloat {
        let base = if e < 0 {
            BigFloat::from_f64(0.5, self.bits)
        } else {
            self.real(2)
        };
        base.powi(e.unsigned_abs() as usize, self.bits, RM)
    }
}

/// A complex number with multi-precision real and imaginary parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn to_f64(&self) -> (f64, f64) {
        (big_to_f64(&self.re), big_to_f64(&self.im))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re} - {}i", -im)
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

/// Nearest `f64` (to within one ulp) of a multi-precision float.
pub fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exponent, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // Mantissa words are little-endian with the top bit of the last word set;
    // the value is 0.mantissa * 2^exponent.
    let mut value = 0.0f64;
    for (k, w) in words.iter().rev().take(3).enumerate() {
        let shift = -64.0 * (k as f64 + 1.0);
        value += (*w as f64) * shift.exp2();
    }
    let value = value * (exponent as f64).exp2();
    if sign == astro_float::Sign::Neg {
        -value
    } else {
        value
    }
}

/// `a < b`; false when either side is NaN.
pub fn big_lt(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c < 0)
}

/// `|x| <= bound`, evaluated at full precision.
#[cfg(test)]
pub(crate) fn abs_le(prec: &Precision, x: &BigFloat, bound: f64) -> bool {
    let b = prec.from_f64(bound);
    x.abs().cmp(&b).map(|c| c <= 0).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_have_modulus_one() {
        let mut prec = Precision::new(256);
        for n in 1..13 {
            for a in 0..n as i64 {
                let z = prec.root_of_unity(a, n);
                let err = prec.sub_real(&prec.norm_sqr(&z), &prec.real(1));
                assert!(abs_le(&prec, &err, 1e-70), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn quarter_turn_is_i() {
        let mut prec = Precision::new(256);
        let z = prec.root_of_unity(1, 4);
        assert!(abs_le(&prec, &z.re, 1e-70));
        assert!(abs_le(&prec, &prec.sub_real(&z.im, &prec.real(1)), 1e-70));
    }

    #[test]
    fn powers_of_two() {
        let prec = Precision::new(4096);
        assert_eq!(big_to_f64(&prec.pow2(10)), 1024.0);
        assert_eq!(big_to_f64(&prec.pow2(-3)), 0.125);
        let tiny = prec.pow2(-4000);
        assert!(big_lt(&prec.real(0), &tiny));
        assert!(big_lt(&tiny, &prec.pow2(-3999)));
    }

    #[test]
    fn to_f64_matches() {
        let prec = Precision::new(128);
        for x in [1.0, -2.5, 0.125, 3.0e10, -7.0e-12] {
            let b = prec.from_f64(x);
            assert!((big_to_f64(&b) - x).abs() <= x.abs() * 1e-15);
        }
    }
}
