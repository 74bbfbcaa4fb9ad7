//! Complex numbers over MPFR floats at a fixed mantissa length.

use std::fmt;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

/// `2^e` at precision `prec`.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::from_f64(prec, 1.0, 0.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_rational(prec: u32, re: &Rational, im: &Rational) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        BigComplex::new(Float::with_val(prec, n), Float::new(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex::new(
            Float::with_val(self.prec(), -&self.re),
            Float::with_val(self.prec(), -&self.im),
        )
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex::new(re, im)
    }

    pub fn scale(&self, k: &Float) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_int(&self, k: &Integer) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn recip(&self) -> BigComplex {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -&self.im) / &n,
        )
    }

    pub fn div(&self, o: &BigComplex) -> BigComplex {
        self.mul(&o.recip())
    }

    /// `e^z`.
    pub fn exp(&self) -> BigComplex {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex::new(Float::with_val(p, &m * &c), m * s)
    }

    /// `e^{2 pi i z}`.
    pub fn exp_2pi_i(&self) -> BigComplex {
        let two_pi = pi(self.prec()) * 2u32;
        let re = -Float::with_val(self.prec(), &self.im * &two_pi);
        BigComplex::new(re, self.re.clone() * two_pi).exp()
    }

    /// `e^{pi i x}` for rational `x`, reduced mod 2 first.
    pub fn exp_pi_i_rational(prec: u32, x: &Rational) -> BigComplex {
        let two = Rational::from(2);
        let fl = Rational::from(x / &two).floor();
        let r = x - fl * two;
        let theta = Float::with_val(prec, &r) * pi(prec);
        let (s, c) = theta.sin_cos(Float::new(prec));
        BigComplex::new(c, s)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> BigComplex {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return BigComplex::zero(p);
        }
        let r = self.abs();
        let abs_re = Float::with_val(p, self.re.abs_ref());
        let t = (Float::with_val(p, &r + &abs_re) / 2u32).sqrt();
        let other = Float::with_val(p, self.im.abs_ref()) / (Float::with_val(p, &t * 2u32));
        if self.re >= 0 {
            let im = if self.im < 0 { -other } else { other };
            BigComplex::new(t, im)
        } else {
            let im = if self.im < 0 { -t } else { t };
            BigComplex::new(other, im)
        }
    }

    /// `z^k` for integer `k`, by repeated squaring.
    pub fn powi(&self, k: i64) -> BigComplex {
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = BigComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `|self - o| / |o|`, or the absolute difference when `o = 0`.
    pub fn rel_diff(&self, o: &BigComplex) -> Float {
        let d = self.sub(o).abs();
        let m = o.abs();
        if m.is_zero() {
            d
        } else {
            d / m
        }
    }

    /// `log2 |self|` as an `f64`; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        a.log2().to_f64()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Rounds to the nearest integer; also returns `|re - n|` and `|im|`.
    pub fn round_to_integer(&self) -> (Integer, Float, Float) {
        let p = self.prec();
        let n = self.re.clone().round().to_integer().expect("finite value");
        let dist = Float::with_val(p, &self.re - &n).abs();
        let im = Float::with_val(p, self.im.abs_ref());
        (n, dist, im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let re = self.re.to_string_radix(10, Some(digits));
        let im = self.im.to_string_radix(10, Some(digits));
        if self.im < 0 {
            write!(f, "{re} - {}i", im.trim_start_matches('-'))
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_branches() {
        let p = 128;
        for (x, y) in [
            (4.0, 0.0),
            (-4.0, 0.0),
            (0.0, 2.0),
            (-3.0, -4.0),
            (3.0, 4.0),
        ] {
            let z = BigComplex::from_f64(p, x, y);
            let r = z.sqrt();
            assert!(r.mul(&r).rel_diff(&z) < pow2(p, -120));
            assert!(r.re >= 0);
        }
    }

    #[test]
    fn exp_and_powers() {
        let p = 200;
        let z = BigComplex::exp_pi_i_rational(p, &Rational::from((1, 2)));
        assert!(z.sub(&BigComplex::from_f64(p, 0.0, 1.0)).abs() < pow2(p, -190));
        let w = BigComplex::exp_pi_i_rational(p, &Rational::from((-7, 3)));
        let v = BigComplex::exp_pi_i_rational(p, &Rational::from((5, 3)));
        assert!(w.sub(&v).abs() < pow2(p, -190));
        let a = BigComplex::from_f64(p, 0.3, -1.7);
        assert!(a.powi(5).mul(&a.powi(-5)).rel_diff(&BigComplex::one(p)) < pow2(p, -180));
        let t = BigComplex::from_f64(p, 0.25, 0.0).exp_2pi_i();
        assert!(t.sub(&BigComplex::from_f64(p, 0.0, 1.0)).abs() < pow2(p, -190));
    }

    #[test]
    fn rounding() {
        let p = 128;
        let (n, d, i) = BigComplex::from_f64(p, -2.75, 0.5).round_to_integer();
        assert_eq!(n, -3);
        assert_eq!(d.to_f64(), 0.25);
        assert_eq!(i.to_f64(), 0.5);
    }
}
