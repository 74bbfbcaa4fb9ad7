//! Primitive positive definite binary quadratic forms, the right action of
//! SL2(Z), Gauss reduction and exact quadratic surds.

use std::fmt;
use std::str::FromStr;

use rug::ops::DivRounding;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd};
use crate::error::{Error, Result};
use crate::serde_int;

/// The form `a x^2 + b xy + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    #[serde(with = "serde_int")]
    pub a: Integer,
    #[serde(with = "serde_int")]
    pub b: Integer,
    #[serde(with = "serde_int")]
    pub c: Integer,
}

/// A 2x2 integer matrix `[[p, q], [r, s]]` of determinant one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unimodular {
    pub p: Integer,
    pub q: Integer,
    pub r: Integer,
    pub s: Integer,
}

/// An element `x + y * sqrt(radicand)` of an imaginary quadratic field, with
/// `x, y` rational in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub x: Rational,
    pub y: Rational,
    pub radicand: Integer,
}

pub fn check_discriminant(d: &Integer) -> Result<()> {
    let r = Integer::from(d.mod_u(4));
    if *d >= 0 || !(r == 0 || r == 1) {
        return Err(Error::InvalidDiscriminant(d.to_string()));
    }
    Ok(())
}

impl QuadForm {
    /// Builds a form, rejecting anything that is not primitive positive definite.
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
    ) -> Result<Self> {
        let f = QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let primitive = gcd(&gcd(&self.a, &self.b), &self.c) == 1;
        if self.a <= 0 || self.discriminant() >= 0 || !primitive {
            return Err(Error::InvalidForm {
                a: self.a.to_string(),
                b: self.b.to_string(),
                c: self.c.to_string(),
            });
        }
        Ok(())
    }

    pub fn discriminant(&self) -> Integer {
        Integer::from(&self.b * &self.b) - Integer::from(4) * &self.a * &self.c
    }

    /// `Q(x, y)`.
    pub fn eval(&self, x: &Integer, y: &Integer) -> Integer {
        Integer::from(&self.a * x) * x
            + Integer::from(&self.b * x) * y
            + Integer::from(&self.c * y) * y
    }

    /// `Q^gamma(x, y) = Q(p x + q y, r x + s y)`.
    pub fn act(&self, g: &Unimodular) -> QuadForm {
        let two = Integer::from(2);
        let a = self.eval(&g.p, &g.r);
        let c = self.eval(&g.q, &g.s);
        let b = Integer::from(&two * &self.a) * &g.p * &g.q
            + Integer::from(&self.b) * (Integer::from(&g.p * &g.s) + Integer::from(&g.q * &g.r))
            + Integer::from(&two * &self.c) * &g.r * &g.s;
        QuadForm { a, b, c }
    }

    /// The root `(-b + sqrt(D)) / 2a` of `Q(x, 1)` in the upper half-plane.
    pub fn omega(&self) -> Surd {
        let two_a = Integer::from(&self.a * 2);
        Surd::new(
            Rational::from((Integer::from(-&self.b), two_a.clone())),
            Rational::from((Integer::from(1), two_a)),
            self.discriminant(),
        )
    }

    /// `-conj(omega_Q) = (b + sqrt(D)) / 2a`, the root of `Q(x, -1)` in the upper half-plane.
    pub fn conj_neg_omega(&self) -> Surd {
        let two_a = Integer::from(&self.a * 2);
        Surd::new(
            Rational::from((self.b.clone(), two_a.clone())),
            Rational::from((Integer::from(1), two_a)),
            self.discriminant(),
        )
    }

    pub fn is_reduced(&self) -> bool {
        let abs_b = Integer::from(self.b.abs_ref());
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b < 0 {
            return false;
        }
        true
    }

    /// Gauss reduction. Returns `(R, gamma)` with `R = self^gamma` reduced.
    pub fn reduce(&self) -> (QuadForm, Unimodular) {
        let mut f = self.clone();
        let mut g = Unimodular::identity();
        loop {
            let t = f.normalizing_shift();
            if t != 0 {
                let m = Unimodular::translation(t);
                f = f.act(&m);
                g = g.mul(&m);
            }
            if f.a > f.c {
                let s = Unimodular::s();
                f = f.act(&s);
                g = g.mul(&s);
            } else {
                break;
            }
        }
        if f.a == f.c && f.b < 0 {
            let s = Unimodular::s();
            f = f.act(&s);
            g = g.mul(&s);
        }
        (f, g)
    }

    /// The `k` for which `Q^{T^k}` has middle coefficient in `(-a, a]`.
    pub(crate) fn normalizing_shift(&self) -> Integer {
        let two_a = Integer::from(&self.a * 2);
        let m = Integer::from(&self.a - &self.b);
        m.div_floor(two_a)
    }

    /// Translate by `T^k` so that `-a < b <= a`; keeps the class under any
    /// congruence subgroup that contains the translations.
    pub fn normalize_translation(&self) -> (QuadForm, Unimodular) {
        let m = Unimodular::translation(self.normalizing_shift());
        (self.act(&m), m)
    }

    /// Generators of the stabilizer of `omega_Q` in SL2(Z), signs included.
    pub fn isotropy(&self) -> Vec<Unimodular> {
        let (r, g) = self.reduce();
        let d = self.discriminant();
        let base: Vec<Unimodular> = if d == -4 && r == QuadForm::principal_unchecked(&d) {
            let s = Unimodular::s();
            vec![Unimodular::identity(), s.clone()]
        } else if d == -3 && r == QuadForm::principal_unchecked(&d) {
            let st = Unimodular::s().mul(&Unimodular::translation(Integer::from(1)));
            vec![Unimodular::identity(), st.clone(), st.mul(&st)]
        } else {
            vec![Unimodular::identity()]
        };
        // omega_Q = g(omega_R), so Stab(omega_Q) = g Stab(omega_R) g^-1.
        let g_inv = g.inverse();
        base.into_iter()
            .flat_map(|m| {
                let c = g.mul(&m).mul(&g_inv);
                [c.neg(), c]
            })
            .collect()
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: &Integer) -> Result<QuadForm> {
        check_discriminant(d)?;
        Ok(Self::principal_unchecked(d))
    }

    fn principal_unchecked(d: &Integer) -> QuadForm {
        if d.is_divisible_u(4) {
            QuadForm {
                a: Integer::from(1),
                b: Integer::new(),
                c: Integer::from(-d) / 4,
            }
        } else {
            QuadForm {
                a: Integer::from(1),
                b: Integer::from(1),
                c: (Integer::from(1) - d) / 4,
            }
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for QuadForm {
    type Err = Error;

    /// Parses `"a,b,c"` (whitespace and surrounding parentheses tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected a,b,c but got {s:?}")));
        }
        let p = |x: &str| {
            x.parse::<Integer>()
                .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
        };
        QuadForm::new(p(parts[0])?, p(parts[1])?, p(parts[2])?)
    }
}

/// All reduced primitive forms of discriminant `d`, sorted by `(a, b, c)`.
pub fn enumerate_reduced(d: &Integer) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    let abs_d = Integer::from(-d);
    let bound = Integer::from(&abs_d / 3).sqrt();
    let parity = d.is_odd();
    let mut out = Vec::new();
    let mut a = Integer::from(1);
    while a <= bound {
        let mut b = Integer::from(-&a);
        while b <= a {
            if b.is_odd() == parity {
                let num = Integer::from(&b * &b) - d;
                let four_a = Integer::from(&a * 4);
                if num.is_divisible(&four_a) {
                    let c = num / four_a;
                    let f = QuadForm {
                        a: a.clone(),
                        b: b.clone(),
                        c,
                    };
                    if f.is_reduced() && gcd(&gcd(&f.a, &f.b), &f.c) == 1 {
                        out.push(f);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(out)
}

impl Unimodular {
    pub fn new(
        p: impl Into<Integer>,
        q: impl Into<Integer>,
        r: impl Into<Integer>,
        s: impl Into<Integer>,
    ) -> Result<Self> {
        let m = Unimodular {
            p: p.into(),
            q: q.into(),
            r: r.into(),
            s: s.into(),
        };
        let det = m.det();
        if det != 1 {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(m)
    }

    pub(crate) fn det(&self) -> Integer {
        Integer::from(&self.p * &self.s) - Integer::from(&self.q * &self.r)
    }

    pub fn identity() -> Self {
        Unimodular {
            p: Integer::from(1),
            q: Integer::new(),
            r: Integer::new(),
            s: Integer::from(1),
        }
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub fn s() -> Self {
        Unimodular {
            p: Integer::new(),
            q: Integer::from(-1),
            r: Integer::from(1),
            s: Integer::new(),
        }
    }

    /// `T^k = [[1, k], [0, 1]]`.
    pub fn translation(k: Integer) -> Self {
        Unimodular {
            p: Integer::from(1),
            q: k,
            r: Integer::new(),
            s: Integer::from(1),
        }
    }

    pub fn mul(&self, o: &Unimodular) -> Unimodular {
        Unimodular {
            p: Integer::from(&self.p * &o.p) + Integer::from(&self.q * &o.r),
            q: Integer::from(&self.p * &o.q) + Integer::from(&self.q * &o.s),
            r: Integer::from(&self.r * &o.p) + Integer::from(&self.s * &o.r),
            s: Integer::from(&self.r * &o.q) + Integer::from(&self.s * &o.s),
        }
    }

    pub fn inverse(&self) -> Unimodular {
        Unimodular {
            p: self.s.clone(),
            q: Integer::from(-&self.q),
            r: Integer::from(-&self.r),
            s: self.p.clone(),
        }
    }

    pub fn neg(&self) -> Unimodular {
        Unimodular {
            p: Integer::from(-&self.p),
            q: Integer::from(-&self.q),
            r: Integer::from(-&self.r),
            s: Integer::from(-&self.s),
        }
    }

    /// Completes a coprime bottom row `(r, s)` to a matrix of determinant one.
    pub fn with_bottom_row(r: &Integer, s: &Integer) -> Option<Unimodular> {
        let (g, x, y) = ext_gcd(r, s);
        if g != 1 {
            return None;
        }
        // p s - q r = 1 with r x + s y = 1.
        Some(Unimodular {
            p: y,
            q: (-x),
            r: r.clone(),
            s: s.clone(),
        })
    }

    /// Fractional linear action `(p z + q) / (r z + s)`.
    pub fn apply(&self, z: &Surd) -> Surd {
        let num = z.scale_int(&self.p).add_rational(&Rational::from(&self.q));
        num.div(&self.automorphy(z))
    }

    /// The automorphy factor `j(gamma, z) = r z + s`.
    pub fn automorphy(&self, z: &Surd) -> Surd {
        z.scale_int(&self.r).add_rational(&Rational::from(&self.s))
    }

    pub fn fixes(&self, z: &Surd) -> bool {
        self.apply(z) == *z
    }

    pub fn entries(&self) -> [[Integer; 2]; 2] {
        [
            [self.p.clone(), self.q.clone()],
            [self.r.clone(), self.s.clone()],
        ]
    }
}

impl fmt::Display for Unimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}

impl Surd {
    pub fn new(x: Rational, y: Rational, radicand: Integer) -> Self {
        Surd { x, y, radicand }
    }

    pub fn from_rational(x: Rational, radicand: Integer) -> Self {
        Surd {
            x,
            y: Rational::new(),
            radicand,
        }
    }

    pub fn is_upper(&self) -> bool {
        self.radicand < 0 && self.y > 0
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(&self, o: &Surd) -> Surd {
        debug_assert_eq!(self.radicand, o.radicand);
        Surd {
            x: Rational::from(&self.x + &o.x),
            y: Rational::from(&self.y + &o.y),
            radicand: self.radicand.clone(),
        }
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Surd {
        Surd {
            x: Rational::from(-&self.x),
            y: Rational::from(-&self.y),
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        debug_assert_eq!(self.radicand, o.radicand);
        let x = Rational::from(&self.x * &o.x) + Rational::from(&self.y * &o.y) * &self.radicand;
        let y = Rational::from(&self.x * &o.y) + Rational::from(&self.y * &o.x);
        Surd {
            x,
            y,
            radicand: self.radicand.clone(),
        }
    }

    pub fn conj(&self) -> Surd {
        Surd {
            x: self.x.clone(),
            y: Rational::from(-&self.y),
            radicand: self.radicand.clone(),
        }
    }

    /// `x^2 - radicand * y^2`.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.x * &self.x) - Rational::from(&self.y * &self.y) * &self.radicand
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Surd) -> Surd {
        let n = o.norm();
        assert!(n != 0, "division by zero surd");
        let t = self.mul(&o.conj());
        Surd {
            x: t.x / &n,
            y: t.y / &n,
            radicand: self.radicand.clone(),
        }
    }

    pub fn scale_int(&self, k: &Integer) -> Surd {
        Surd {
            x: Rational::from(&self.x * k),
            y: Rational::from(&self.y * k),
            radicand: self.radicand.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        Surd {
            x: Rational::from(&self.x * k),
            y: Rational::from(&self.y * k),
            radicand: self.radicand.clone(),
        }
    }

    pub fn add_rational(&self, k: &Rational) -> Surd {
        Surd {
            x: Rational::from(&self.x + k),
            y: self.y.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Real and imaginary parts as `f64`, for diagnostics.
    pub fn to_f64(&self) -> (f64, f64) {
        let im = self.y.to_f64() * (-self.radicand.to_f64()).sqrt();
        (self.x.to_f64(), im)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.x, self.y, self.radicand)
    }
}
