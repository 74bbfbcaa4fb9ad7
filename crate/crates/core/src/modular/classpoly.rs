//! Class invariants at the CM points of an extended class group and the
//! integral class polynomial they generate.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::complex::{pow2, BigComplex};
use super::eta::{eta_surd, GUARD_BITS};
use super::siegel::{siegel_g12, CMPoint};
use crate::error::{Error, Result};
use crate::extended::ExtClassGroup;
use crate::forms::{QuadForm, Surd};
use crate::serde_int;

pub const DEFAULT_PRECISION: u32 = 512;
pub const RESIDUAL_THRESHOLD_LOG2: i32 = -40;
pub const MAX_DOUBLINGS: u32 = 4;

/// `sign * prod_d eta(d tau)^{r_d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub sign: i32,
    pub factors: Vec<(u32, i32)>,
}

impl EtaQuotient {
    /// `-(f(6 tau) / f(2 tau))^12` for Weber's `f(tau) = q^{-1/48} prod (1 + q^{n - 1/2})`,
    /// i.e. `-eta(tau)^12 eta(4 tau)^12 eta(6 tau)^24 / (eta(2 tau)^24 eta(3 tau)^12 eta(12 tau)^12)`.
    pub fn weber_level12() -> Self {
        EtaQuotient {
            sign: -1,
            factors: vec![(1, 12), (2, -24), (3, -12), (4, 12), (6, 24), (12, -12)],
        }
    }

    pub fn eval(&self, tau: &Surd, prec: u32) -> BigComplex {
        let mut acc = BigComplex::one(prec);
        for &(d, r) in &self.factors {
            let e = eta_surd(&tau.scale_int(&Integer::from(d)), prec);
            acc = acc.mul(&e.powi(i64::from(r)));
        }
        if self.sign < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Order of the `q`-expansion at infinity, `sum d r_d / 24`.
    pub fn q_order(&self) -> Rational {
        let s: i64 = self
            .factors
            .iter()
            .map(|&(d, r)| i64::from(d) * i64::from(r))
            .sum();
        Rational::from((s, 24))
    }
}

/// The function evaluated at `-conj(omega_Q)` for each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// `g_[1/2 0](12 tau)^12 = (eta(6 tau) / eta(12 tau))^24`.
    Siegel,
    Eta(EtaQuotient),
}

impl Invariant {
    pub fn weber() -> Self {
        Invariant::Eta(EtaQuotient::weber_level12())
    }

    pub fn eval(&self, tau: &Surd, prec: u32) -> Result<BigComplex> {
        Ok(match self {
            Invariant::Siegel => siegel_g12(&CMPoint::new(tau.clone(), 12)?, prec),
            Invariant::Eta(e) => e.eval(tau, prec),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Invariant::Siegel => "siegel",
            Invariant::Eta(_) => "weber",
        }
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "siegel" => Ok(Invariant::Siegel),
            "weber" => Ok(Invariant::weber()),
            other => Err(Error::Parse(format!(
                "unknown invariant {other:?}; expected weber or siegel"
            ))),
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The invariant at `-conj(omega_Q)` for each representative, in order.
/// Values are computed independently and carry `prec + GUARD_BITS` bits.
pub fn conjugate_values(g: &ExtClassGroup, inv: &Invariant, prec: u32) -> Result<Vec<BigComplex>> {
    form_values(&g.reps, inv, prec)
}

pub fn form_values(reps: &[QuadForm], inv: &Invariant, prec: u32) -> Result<Vec<BigComplex>> {
    let work = prec + GUARD_BITS;
    reps.par_iter()
        .map(|q| inv.eval(&q.conj_neg_omega(), work))
        .collect()
}

/// A monic polynomial with integer coefficients, highest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassPolynomial {
    pub coefficients: Vec<Integer>,
    pub max_rounding_residual: f64,
    pub max_imag_residual: f64,
    pub precision_bits: u32,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn max_residual(&self) -> f64 {
        self.max_rounding_residual.max(self.max_imag_residual)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            degree: self.degree(),
            coefficients: self.coefficients.clone(),
            precision_bits: self.precision_bits,
            max_residual: self.max_residual(),
        }
    }

    /// `x^16 + 1251968 x^15 - ...` in the usual layout.
    pub fn pretty(&self) -> String {
        let deg = self.degree();
        let mut out = String::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let e = deg - i;
            let mag = c.clone().abs();
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
            }
            let var = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            if mag != 1 || e == 0 {
                out.push_str(&mag.to_string());
            }
            out.push_str(&var);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Wire form: `{"degree", "coefficients", "precision_bits", "max_residual"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub degree: usize,
    #[serde(with = "serde_int::vec")]
    pub coefficients: Vec<Integer>,
    pub precision_bits: u32,
    pub max_residual: f64,
}

/// Expands `prod (x - v)` and recognizes integer coefficients, rejecting the
/// result if any imaginary part or rounding distance exceeds `2^-40`.
pub fn class_polynomial(values: &[BigComplex], prec: u32) -> Result<ClassPolynomial> {
    assert!(!values.is_empty(), "at least one value is required");
    let work = values[0].prec();
    let mut c = vec![BigComplex::one(work)];
    for v in values {
        let mut next = c.clone();
        next.push(BigComplex::zero(work));
        for i in 1..next.len() {
            next[i] = next[i].sub(&v.mul(&c[i - 1]));
        }
        c = next;
    }
    let threshold = pow2(work, RESIDUAL_THRESHOLD_LOG2);
    let mut coefficients = Vec::with_capacity(c.len());
    let mut max_round = Float::new(work);
    let mut max_imag = Float::new(work);
    for z in &c {
        let (n, dist, im) = z.round_to_integer();
        if dist > max_round {
            max_round = dist;
        }
        if im > max_imag {
            max_imag = im;
        }
        coefficients.push(n);
    }
    let worst = if max_round > max_imag {
        max_round.clone()
    } else {
        max_imag.clone()
    };
    if worst > threshold {
        return Err(Error::PrecisionExhausted {
            bits: prec,
            residual: worst.to_f64(),
        });
    }
    Ok(ClassPolynomial {
        coefficients,
        max_rounding_residual: max_round.to_f64(),
        max_imag_residual: max_imag.to_f64(),
        precision_bits: prec,
    })
}

/// The class polynomial of `g`, doubling the precision up to four times.
pub fn class_polynomial_for_group(
    g: &ExtClassGroup,
    inv: &Invariant,
    prec: u32,
) -> Result<(ClassPolynomial, Vec<BigComplex>)> {
    let mut p = prec;
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        let values = conjugate_values(g, inv, p)?;
        match class_polynomial(&values, p) {
            Ok(poly) => return Ok((poly, values)),
            Err(e @ Error::PrecisionExhausted { .. }) => {
                last = Some(e);
                p *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Minimum pairwise distance exceeds `2^{-P/4}`.
pub fn polynomial_discriminant_nonzero(values: &[BigComplex], prec: u32) -> bool {
    let bound = pow2(
        values.first().map_or(prec, |v| v.prec()),
        -((prec / 4) as i32),
    );
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i].sub(&values[j]).abs() <= bound {
                return false;
            }
        }
    }
    true
}
