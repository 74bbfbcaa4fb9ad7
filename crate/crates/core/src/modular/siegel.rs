//! Siegel functions `g_[r1 r2]` and CM evaluation points.

use rug::{Float, Integer, Rational};

use super::complex::{pow2, BigComplex};
use super::eta::{delta_tilde_surd, surd_to_complex, GUARD_BITS};
use crate::error::{Error, Result};
use crate::forms::{QuadForm, Surd};

/// The evaluation argument `scale * surd`, with `surd` in the upper half plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMPoint {
    pub surd: Surd,
    pub scale: Integer,
}

impl CMPoint {
    pub fn new(surd: Surd, scale: impl Into<Integer>) -> Result<Self> {
        let scale = scale.into();
        if !surd.is_upper() || scale <= 0 {
            return Err(Error::Parse(format!(
                "{surd} scaled by {scale} is not in the upper half plane"
            )));
        }
        Ok(CMPoint { surd, scale })
    }

    /// `scale * (b + sqrt(D)) / 2a`, the point `-conj(omega_Q)` scaled.
    pub fn from_form(q: &QuadForm, scale: impl Into<Integer>) -> Result<Self> {
        CMPoint::new(q.conj_neg_omega(), scale)
    }

    pub fn argument(&self) -> Surd {
        self.surd.scale_int(&self.scale)
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        surd_to_complex(&self.argument(), prec)
    }
}

/// `g_[1/2 0](s tau0)^12 = Delta~(s tau0 / 2) / Delta~(s tau0)` for the point `s tau0`.
pub fn siegel_g12(pt: &CMPoint, prec: u32) -> BigComplex {
    let arg = pt.argument();
    let half = arg.scale(&Rational::from((1, 2)));
    delta_tilde_surd(&half, prec).div(&delta_tilde_surd(&arg, prec))
}

/// The Siegel product
/// `-e^{pi i r2 (r1 - 1)} q^{B2(r1)/2} (1 - q^r1 e^{2 pi i r2}) prod_n (1 - q^{n+r1} e^{2 pi i r2}) (1 - q^{n-r1} e^{-2 pi i r2})`
/// evaluated directly at `tau`, with `B2(x) = x^2 - x + 1/6`.
pub fn siegel_product(r1: &Rational, r2: &Rational, tau: &BigComplex, prec: u32) -> BigComplex {
    assert!(
        !(*r1.denom() == 1 && *r2.denom() == 1),
        "(r1, r2) must not be integral"
    );
    let tau = BigComplex::new(
        Float::with_val(prec, &tau.re),
        Float::with_val(prec, &tau.im),
    );
    let q_pow = |e: &Rational| tau.scale(&Float::with_val(prec, e)).exp_2pi_i();
    let zeta = BigComplex::exp_pi_i_rational(prec, &Rational::from(r2 * 2u32));
    let zeta_bar = zeta.conj();

    let b2 = Rational::from(r1 * r1) - r1 + Rational::from((1, 6));
    let lead = BigComplex::exp_pi_i_rational(prec, &(Rational::from(r2 * r1) - r2))
        .mul(&q_pow(&(b2 / 2u32)))
        .neg();
    let one = BigComplex::one(prec);
    let mut acc = lead.mul(&one.sub(&q_pow(r1).mul(&zeta)));

    let q = tau.exp_2pi_i();
    let q_abs = q.abs();
    let eps = pow2(prec, -((prec + GUARD_BITS) as i32));
    let mut a = q_pow(&Rational::from(r1 + 1u32)).mul(&zeta);
    let mut b = q_pow(&(1u32 - r1.clone())).mul(&zeta_bar);
    let mut n = Integer::from(1);
    loop {
        acc = acc.mul(&one.sub(&a)).mul(&one.sub(&b));
        let small = a.abs() < eps && b.abs() < eps;
        if small && n > r1.clone().abs().ceil().numer().clone() {
            return acc;
        }
        a = a.mul(&q);
        b = b.mul(&q);
        n += 1;
        debug_assert!(q_abs < 1);
    }
}
