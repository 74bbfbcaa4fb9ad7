//! Arithmetic in the maximal order `O_K = [tau_K, 1]` of an imaginary
//! quadratic field and on its fractional ideals.
//!
//! Elements are written `x + y*tau_K` with rational `x, y`. Ideals are
//! lattices `(1/den) * [m11*tau_K + m12, m22]` kept in Hermite normal form,
//! so equality of ideals is equality of the normalized fields.

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{common_denominator, ext_gcd, gcd, is_squarefree, modulo};
use crate::error::{Error, Result};
use crate::extended::SubgroupT;
use crate::forms::{check_discriminant, QuadForm, Surd};
use crate::serde_int;

/// `K = Q(sqrt(d_K))` with `min(tau_K, Q) = x^2 + b_k x + c_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImagQuadField {
    pub d: Integer,
    pub b_k: Integer,
    pub c_k: Integer,
}

/// `x + y * tau_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNum {
    pub x: Rational,
    pub y: Rational,
}

/// `(1/den) * (Z (m11 tau_K + m12) + Z m22)`, in normalized Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    pub m11: Integer,
    pub m12: Integer,
    pub m22: Integer,
    pub den: Integer,
}

impl AlgebraicNum {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        AlgebraicNum {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn from_int(n: impl Into<Integer>) -> Self {
        AlgebraicNum::new(Rational::from(n.into()), Rational::new())
    }

    pub fn zero() -> Self {
        AlgebraicNum::new(Rational::new(), Rational::new())
    }

    pub fn one() -> Self {
        AlgebraicNum::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(&self, o: &AlgebraicNum) -> AlgebraicNum {
        AlgebraicNum::new(
            Rational::from(&self.x + &o.x),
            Rational::from(&self.y + &o.y),
        )
    }

    pub fn sub(&self, o: &AlgebraicNum) -> AlgebraicNum {
        AlgebraicNum::new(
            Rational::from(&self.x - &o.x),
            Rational::from(&self.y - &o.y),
        )
    }

    pub fn scale(&self, k: &Rational) -> AlgebraicNum {
        AlgebraicNum::new(Rational::from(&self.x * k), Rational::from(&self.y * k))
    }

    /// Integer coordinates `(tau-coefficient, constant)` after multiplying by `m`.
    fn int_coords(&self, m: &Integer) -> (Integer, Integer) {
        let y = Rational::from(&self.y * m);
        let x = Rational::from(&self.x * m);
        debug_assert!(*y.denom() == 1 && *x.denom() == 1);
        (y.numer().clone(), x.numer().clone())
    }
}

impl fmt::Display for AlgebraicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*tau", self.x, self.y)
    }
}

impl ImagQuadField {
    /// Field data for a fundamental discriminant `d < 0`.
    pub fn new(d: impl Into<Integer>) -> Result<Self> {
        let d = d.into();
        check_discriminant(&d)?;
        let fundamental = if d.is_odd() {
            is_squarefree(&d)
        } else {
            let m = Integer::from(&d / 4);
            let r = m.mod_u(4);
            (r == 2 || r == 3) && is_squarefree(&m)
        };
        if !fundamental {
            return Err(Error::NotFundamental(d.to_string()));
        }
        let (b_k, c_k) = if d.is_odd() {
            (Integer::from(1), (Integer::from(1) - &d) / 4)
        } else {
            (Integer::new(), Integer::from(-&d) / 4)
        };
        Ok(ImagQuadField { d, b_k, c_k })
    }

    /// `tau_K` as a surd over `sqrt(d_K)`.
    pub fn tau_surd(&self) -> Surd {
        Surd::new(
            Rational::from((Integer::from(-&self.b_k), 2)),
            Rational::from((1, 2)),
            self.d.clone(),
        )
    }

    pub fn tau(&self) -> AlgebraicNum {
        AlgebraicNum::new(Rational::new(), Rational::from(1))
    }

    /// Converts a surd over `sqrt(d_K)`; `sqrt(d_K) = 2 tau_K + b_K`.
    pub fn from_surd(&self, z: &Surd) -> AlgebraicNum {
        assert_eq!(z.radicand, self.d, "surd radicand differs from d_K");
        let y = Rational::from(&z.y * 2);
        let x = &z.x + Rational::from(&z.y * &self.b_k);
        AlgebraicNum::new(x, y)
    }

    pub fn to_surd(&self, a: &AlgebraicNum) -> Surd {
        Surd::from_rational(a.x.clone(), self.d.clone()).add(&self.tau_surd().scale(&a.y))
    }

    pub fn mul(&self, s: &AlgebraicNum, o: &AlgebraicNum) -> AlgebraicNum {
        // tau^2 = -b tau - c
        let yy = Rational::from(&s.y * &o.y);
        let x = Rational::from(&s.x * &o.x) - Rational::from(&yy * &self.c_k);
        let y = Rational::from(&s.x * &o.y) + Rational::from(&s.y * &o.x)
            - Rational::from(&yy * &self.b_k);
        AlgebraicNum::new(x, y)
    }

    /// `x + y*conj(tau) = (x - b y) - y tau`.
    pub fn conj(&self, a: &AlgebraicNum) -> AlgebraicNum {
        AlgebraicNum::new(
            &a.x - Rational::from(&a.y * &self.b_k),
            Rational::from(-&a.y),
        )
    }

    /// `x^2 - b x y + c y^2`.
    pub fn norm(&self, a: &AlgebraicNum) -> Rational {
        Rational::from(&a.x * &a.x) - Rational::from(&a.x * &a.y) * &self.b_k
            + Rational::from(&a.y * &a.y) * &self.c_k
    }

    pub fn inv(&self, a: &AlgebraicNum) -> Option<AlgebraicNum> {
        if a.is_zero() {
            return None;
        }
        let n = self.norm(a);
        Some(self.conj(a).scale(&Rational::from(n.recip_ref())))
    }

    pub fn div(&self, a: &AlgebraicNum, b: &AlgebraicNum) -> Option<AlgebraicNum> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn is_integral(&self, a: &AlgebraicNum) -> bool {
        *a.x.denom() == 1 && *a.y.denom() == 1
    }

    /// The full unit group of `O_K`.
    pub fn units(&self) -> Vec<AlgebraicNum> {
        let one = AlgebraicNum::one();
        let tau = self.tau();
        let mut base = vec![one];
        if self.d == -4 {
            base.push(tau);
        } else if self.d == -3 {
            base.push(tau.clone());
            base.push(self.mul(&tau, &tau));
        }
        base.iter()
            .flat_map(|u| [u.clone(), u.scale(&Rational::from(-1))])
            .collect()
    }

    pub fn unit_ideal(&self) -> FracIdeal {
        FracIdeal {
            m11: Integer::from(1),
            m12: Integer::new(),
            m22: Integer::from(1),
            den: Integer::from(1),
        }
    }

    /// The O_K-ideal generated by the given elements.
    pub fn ideal_from_generators(&self, gens: &[AlgebraicNum]) -> Result<FracIdeal> {
        let tau = self.tau();
        let mut all = Vec::with_capacity(2 * gens.len());
        for g in gens {
            all.push(g.clone());
            all.push(self.mul(g, &tau));
        }
        self.lattice_from(&all)
    }

    /// Z-span of the given elements; must be a full-rank lattice.
    fn lattice_from(&self, elems: &[AlgebraicNum]) -> Result<FracIdeal> {
        let den = common_denominator(elems.iter().flat_map(|e| [&e.x, &e.y]));
        let vecs: Vec<(Integer, Integer)> = elems.iter().map(|e| e.int_coords(&den)).collect();
        let (m11, m12, m22) = hnf(&vecs).ok_or(Error::ZeroIdeal)?;
        Ok(FracIdeal { m11, m12, m22, den }.normalized())
    }

    pub fn principal_ideal(&self, a: &AlgebraicNum) -> Result<FracIdeal> {
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        self.ideal_from_generators(std::slice::from_ref(a))
    }

    /// `[omega_Q, 1]` for a form of discriminant `d_K`.
    pub fn ideal_from_form(&self, q: &QuadForm) -> Result<FracIdeal> {
        let disc = q.discriminant();
        if disc != self.d {
            return Err(Error::DiscriminantMismatch {
                form: disc.to_string(),
                field: self.d.to_string(),
            });
        }
        // omega_Q = (tau + k) / a with k = (b_K - b) / 2.
        let k = Integer::from(&self.b_k - &q.b) / 2;
        Ok(FracIdeal {
            m11: Integer::from(1),
            m12: modulo(&k, &q.a),
            m22: q.a.clone(),
            den: q.a.clone(),
        }
        .normalized())
    }

    /// The element `omega_Q` in `tau`-coordinates.
    pub fn omega(&self, q: &QuadForm) -> AlgebraicNum {
        let k = Integer::from(&self.b_k - &q.b) / 2;
        AlgebraicNum::new(
            Rational::from((k, q.a.clone())),
            Rational::from((1, q.a.clone())),
        )
    }

    pub fn basis(&self, a: &FracIdeal) -> [AlgebraicNum; 2] {
        [
            AlgebraicNum::new(
                Rational::from((a.m12.clone(), a.den.clone())),
                Rational::from((a.m11.clone(), a.den.clone())),
            ),
            AlgebraicNum::new(
                Rational::from((a.m22.clone(), a.den.clone())),
                Rational::new(),
            ),
        ]
    }

    pub fn ideal_mul(&self, a: &FracIdeal, b: &FracIdeal) -> FracIdeal {
        let ba = self.basis(a);
        let bb = self.basis(b);
        let prods: Vec<AlgebraicNum> = ba
            .iter()
            .flat_map(|x| bb.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect();
        self.lattice_from(&prods)
            .expect("product of nonzero ideals is nonzero")
    }

    pub fn ideal_sum(&self, a: &FracIdeal, b: &FracIdeal) -> FracIdeal {
        let mut gens = self.basis(a).to_vec();
        gens.extend(self.basis(b));
        self.lattice_from(&gens)
            .expect("sum of nonzero ideals is nonzero")
    }

    pub fn ideal_conj(&self, a: &FracIdeal) -> FracIdeal {
        let gens: Vec<AlgebraicNum> = self.basis(a).iter().map(|g| self.conj(g)).collect();
        self.lattice_from(&gens)
            .expect("conjugate of a nonzero ideal is nonzero")
    }

    /// `A^-1 = conj(A) / N(A)`.
    pub fn ideal_inv(&self, a: &FracIdeal) -> FracIdeal {
        let n = a.norm();
        let c = self.ideal_conj(a);
        c.scale(&Rational::from(n.recip_ref()))
    }

    pub fn contains(&self, a: &FracIdeal, x: &AlgebraicNum) -> bool {
        // den*x = k (m11 tau + m12) + l m22
        let ty = Rational::from(&x.y * &a.den);
        let tx = Rational::from(&x.x * &a.den);
        if *ty.denom() != 1 || *tx.denom() != 1 {
            return false;
        }
        let (ty, tx) = (ty.numer(), tx.numer());
        if !ty.is_divisible(&a.m11) {
            return false;
        }
        let k = Integer::from(ty / &a.m11);
        (tx - k * &a.m12).is_divisible(&a.m22)
    }

    pub fn is_integral_ideal(&self, a: &FracIdeal) -> bool {
        self.basis(a).iter().all(|b| self.is_integral(b))
    }

    /// True iff every prime above `n` has valuation zero in `a`.
    pub fn is_prime_to(&self, a: &FracIdeal, n: &Integer) -> bool {
        let ok = self.unit_ideal();
        // A + O_K carries the negative part of A, A^-1 + O_K the positive part.
        let neg_part = self.ideal_sum(a, &ok).norm();
        let pos_part = self.ideal_sum(&self.ideal_inv(a), &ok).norm();
        gcd(neg_part.denom(), n) == 1 && gcd(pos_part.denom(), n) == 1
    }

    /// `gcd(N, Q(v, -u)) = 1`, the coprimality of `(u omega_Q + v) O_K` to `N O_K`.
    pub fn element_ideal_prime_to(q: &QuadForm, u: &Integer, v: &Integer, n: &Integer) -> bool {
        let val = q.eval(v, &Integer::from(-u));
        gcd(&val, n) == 1
    }

    /// The binary quadratic norm form `N(x a1 + y a2) / N(I)` of an integral
    /// ideal basis; primitive of discriminant `d_K`.
    fn norm_form(&self, m11: &Integer, m12: &Integer, m22: &Integer) -> QuadForm {
        let n = Integer::from(m11 * m22);
        let a1 = AlgebraicNum::new(Rational::from(m12), Rational::from(m11));
        let na1 = self.norm(&a1);
        let tr = m22 * (Integer::from(m12 * 2) - Integer::from(&self.b_k * m11));
        let nm = Integer::from(m22 * m22);
        let a = Integer::from(na1.numer() / &n);
        let b = Integer::from(&tr / &n);
        let c = Integer::from(&nm / &n);
        QuadForm { a, b, c }
    }

    /// A generator of `a` when it is principal. Reduces the norm form of the
    /// numerator lattice: `a` is principal iff that form reduces to the
    /// principal form, and the reducing matrix then exhibits a vector of
    /// minimal norm `N(I)`.
    pub fn principal_generator(&self, a: &FracIdeal) -> Option<AlgebraicNum> {
        let f = self.norm_form(&a.m11, &a.m12, &a.m22);
        debug_assert_eq!(f.discriminant(), self.d);
        let (r, g) = f.reduce();
        if r.a != 1 {
            return None;
        }
        let x = Integer::from(&g.p * &a.m11);
        let y = Integer::from(&g.p * &a.m12) + Integer::from(&g.r * &a.m22);
        Some(AlgebraicNum::new(
            Rational::from((y, a.den.clone())),
            Rational::from((x, a.den.clone())),
        ))
    }

    /// Multiplicative congruence `lam ≡* t (mod N O_K)`.
    pub fn mult_congruent(&self, lam: &AlgebraicNum, t: &Integer, n: &Integer) -> bool {
        if lam.is_zero() {
            return false;
        }
        if *n == 1 {
            return true;
        }
        let m = common_denominator([&lam.x, &lam.y]);
        if gcd(&m, n) == 1 {
            // lam = alpha / m with m prime to N: compare alpha with t m in O_K / N O_K.
            let (ty, tx) = lam.int_coords(&m);
            let tm = Integer::from(t * &m);
            return ty.is_divisible(n) && (tx - tm).is_divisible(n);
        }
        self.congruent_by_valuation(lam, t, n)
    }

    /// `v_p(lam - t) >= v_p(N)` for every prime `p | N`, read off the
    /// denominator of `((lam - t)/N) O_K + O_K`.
    pub(crate) fn congruent_by_valuation(
        &self,
        lam: &AlgebraicNum,
        t: &Integer,
        n: &Integer,
    ) -> bool {
        let mu = lam
            .sub(&AlgebraicNum::from_int(t.clone()))
            .scale(&Rational::from((1, n.clone())));
        if mu.is_zero() {
            return true;
        }
        let ideal = self.principal_ideal(&mu).expect("nonzero");
        let denom_part = self.ideal_sum(&ideal, &self.unit_ideal()).norm();
        gcd(denom_part.denom(), n) == 1
    }

    /// Is `A B^-1 = lam O_K` with `zeta lam ≡* t (mod N)` for a unit `zeta` and `t ∈ T`?
    pub fn class_equal_mod_p(&self, a: &FracIdeal, b: &FracIdeal, t: &SubgroupT) -> bool {
        if a == b {
            return true;
        }
        let c = self.ideal_mul(a, &self.ideal_inv(b));
        self.in_p(&c, t)
    }

    /// Membership of `c` in the subgroup `P` attached to `T`.
    pub fn in_p(&self, c: &FracIdeal, t: &SubgroupT) -> bool {
        let Some(gen) = self.principal_generator(c) else {
            return false;
        };
        let n = t.modulus();
        self.units().iter().any(|z| {
            let zl = self.mul(z, &gen);
            t.elements().iter().any(|r| self.mult_congruent(&zl, r, n))
        })
    }
}

impl FracIdeal {
    fn normalized(mut self) -> FracIdeal {
        debug_assert!(self.m11 != 0 && self.m22 != 0 && self.den != 0);
        if self.den < 0 {
            self.den = -self.den;
        }
        self.m11.abs_mut();
        self.m22.abs_mut();
        self.m12 = modulo(&self.m12, &self.m22);
        let g = gcd(&gcd(&gcd(&self.m11, &self.m12), &self.m22), &self.den);
        if g != 1 {
            self.m11 /= &g;
            self.m12 /= &g;
            self.m22 /= &g;
            self.den /= &g;
        }
        self
    }

    /// `|det(basis)| / den^2`.
    pub fn norm(&self) -> Rational {
        Rational::from((
            Integer::from(&self.m11 * &self.m22),
            Integer::from(&self.den * &self.den),
        ))
    }

    pub fn scale(&self, k: &Rational) -> FracIdeal {
        FracIdeal {
            m11: Integer::from(&self.m11 * k.numer()),
            m12: Integer::from(&self.m12 * k.numer()),
            m22: Integer::from(&self.m22 * k.numer()),
            den: Integer::from(&self.den * k.denom()),
        }
        .normalized()
    }

    pub fn to_json(&self, field: &ImagQuadField) -> IdealJson {
        IdealJson {
            basis: [
                [self.m11.clone(), self.m12.clone()],
                [Integer::new(), self.m22.clone()],
            ],
            den: self.den.clone(),
            d_k: field.d.clone(),
        }
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(1/{})[{}*tau + {}, {}]",
            self.den, self.m11, self.m12, self.m22
        )
    }
}

/// Wire form of an ideal: `{"basis": [[m11, m12], [0, m22]], "den": ..., "d_K": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealJson {
    #[serde(with = "serde_int::matrix")]
    pub basis: [[Integer; 2]; 2],
    #[serde(with = "serde_int")]
    pub den: Integer,
    #[serde(rename = "d_K", with = "serde_int")]
    pub d_k: Integer,
}

impl IdealJson {
    pub fn into_ideal(self) -> Result<(ImagQuadField, FracIdeal)> {
        let field = ImagQuadField::new(self.d_k)?;
        let [[m11, m12], [m21, m22]] = self.basis;
        if m21 != 0 || m11 == 0 || m22 == 0 || self.den == 0 {
            return Err(Error::Parse(
                "ideal basis is not upper triangular and nonsingular".into(),
            ));
        }
        let ideal = FracIdeal {
            m11,
            m12,
            m22,
            den: self.den,
        }
        .normalized();
        let tau = field.tau();
        for b in field.basis(&ideal) {
            if !field.contains(&ideal, &field.mul(&b, &tau)) {
                return Err(Error::Parse("lattice is not an O_K-module".into()));
            }
        }
        Ok((field, ideal))
    }
}

/// Hermite form `(m11, m12, m22)` of the integer lattice spanned by
/// `(tau-coordinate, constant)` vectors; `None` unless the span has rank two.
pub(crate) fn hnf(vecs: &[(Integer, Integer)]) -> Option<(Integer, Integer, Integer)> {
    let mut a = Integer::new();
    let mut b = Integer::new();
    let mut c = Integer::new();
    for (x, y) in vecs {
        if *x == 0 {
            c = gcd(&c, y);
            continue;
        }
        if a == 0 {
            a = x.clone();
            b = y.clone();
            continue;
        }
        let (g, u, v) = ext_gcd(&a, x);
        // [[u, v], [x/g, -a/g]] is unimodular.
        let cross = (Integer::from(x * &b) - Integer::from(&a * y)) / &g;
        c = gcd(&c, &cross);
        b = Integer::from(&u * &b) + Integer::from(&v * y);
        a = g;
    }
    if a == 0 || c == 0 {
        return None;
    }
    if a < 0 {
        a = -a;
        b = -b;
    }
    let b = modulo(&b, &c);
    Some((a, b, c))
}
