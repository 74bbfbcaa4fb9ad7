//! The discriminant-type form `Delta~ = q prod (1 - q^n)^24` and the Dedekind
//! eta function, evaluated after reduction to the standard fundamental domain.

use rug::{Float, Integer, Rational};

use super::complex::{pow2, BigComplex};
use crate::forms::{Surd, Unimodular};

/// Extra bits carried through every evaluation.
pub const GUARD_BITS: u32 = 32;

/// Reduces `tau` into `-1/2 <= Re < 1/2`, `|tau| >= 1`. Returns
/// `(gamma(tau), gamma)`.
pub fn reduce_to_fundamental(tau: &BigComplex) -> (BigComplex, Unimodular) {
    assert!(tau.im > 0, "point must lie in the upper half plane");
    let p = tau.prec();
    let mut z = tau.clone();
    let mut g = Unimodular::identity();
    let half = Float::with_val(p, 0.5);
    loop {
        let n = Float::with_val(p, &z.re + &half)
            .floor()
            .to_integer()
            .expect("finite real part");
        if n != 0 {
            z.re -= &n;
            g = Unimodular::translation(Integer::from(-&n)).mul(&g);
        }
        if z.norm_sqr() < 1 {
            z = z.recip().neg();
            g = Unimodular::s().mul(&g);
        } else {
            return (z, g);
        }
    }
}

/// Exact version of [`reduce_to_fundamental`] for a quadratic surd.
pub fn reduce_surd(tau: &Surd) -> (Surd, Unimodular) {
    assert!(tau.is_upper(), "point must lie in the upper half plane");
    let mut z = tau.clone();
    let mut g = Unimodular::identity();
    let half = Rational::from((1, 2));
    loop {
        let n = Rational::from(&z.x + &half).floor().numer().clone();
        if n != 0 {
            z = z.add_rational(&Rational::from(-&n));
            g = Unimodular::translation(Integer::from(-&n)).mul(&g);
        }
        if z.norm() < 1 {
            z = Surd::from_rational(Rational::from(-1), z.radicand.clone()).div(&z);
            g = Unimodular::s().mul(&g);
        } else {
            return (z, g);
        }
    }
}

/// `x + y sqrt(r)` with `r < 0` as a complex float.
pub fn surd_to_complex(z: &Surd, prec: u32) -> BigComplex {
    let root = Float::with_val(prec, Integer::from(-&z.radicand)).sqrt();
    BigComplex::new(
        Float::with_val(prec, &z.x),
        Float::with_val(prec, &z.y) * root,
    )
}

/// `(r tau + s)` for `gamma = [[p, q], [r, s]]`.
pub fn automorphy(g: &Unimodular, tau: &BigComplex) -> BigComplex {
    let p = tau.prec();
    tau.scale_int(&g.r).add(&BigComplex::from_integer(p, &g.s))
}

/// `gamma(tau)`.
pub fn mobius(g: &Unimodular, tau: &BigComplex) -> BigComplex {
    let p = tau.prec();
    let num = tau.scale_int(&g.p).add(&BigComplex::from_integer(p, &g.q));
    num.div(&automorphy(g, tau))
}

/// `prod_{n >= 1} (1 - q^n)`, stopped once `24 n |q|^n < 2^-(prec + guard)`.
pub fn euler_product(q: &BigComplex) -> BigComplex {
    let p = q.prec();
    let eps = pow2(p, -((p + GUARD_BITS) as i32));
    let q_abs = q.abs();
    assert!(q_abs < 1, "|q| must be below one");
    let one = BigComplex::one(p);
    let mut acc = one.clone();
    let mut qn = q.clone();
    let mut qn_abs = q_abs.clone();
    let mut n = 1u32;
    loop {
        acc = acc.mul(&one.sub(&qn));
        n += 1;
        qn = qn.mul(q);
        qn_abs *= &q_abs;
        if Float::with_val(p, &qn_abs * (24 * n)) < eps {
            return acc;
        }
    }
}

/// `Delta~(tau) = q prod (1 - q^n)^24` with no reduction; slow near the real axis.
pub fn delta_direct(tau: &BigComplex) -> BigComplex {
    let q = tau.exp_2pi_i();
    q.mul(&euler_product(&q).powi(24))
}

/// `eta(tau) = q^(1/24) prod (1 - q^n)` with no reduction.
pub fn eta_direct(tau: &BigComplex) -> BigComplex {
    let q = tau.exp_2pi_i();
    let tau24 = tau.scale(&(Float::with_val(tau.prec(), 1u32) / 24u32));
    tau24.exp_2pi_i().mul(&euler_product(&q))
}

/// `eta(tau)` from Euler's pentagonal series, an independent route.
pub fn eta_pentagonal(tau: &BigComplex) -> BigComplex {
    let p = tau.prec();
    let eps = pow2(p, -((p + GUARD_BITS) as i32));
    let q = tau.exp_2pi_i();
    let mut sum = BigComplex::one(p);
    let mut k: i64 = 1;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        let t = q.powi(e1).add(&q.powi(e2));
        let t = if k % 2 == 1 { t.neg() } else { t };
        let small = t.abs() < eps;
        sum = sum.add(&t);
        if small {
            break;
        }
        k += 1;
    }
    let tau24 = tau.scale(&(Float::with_val(p, 1u32) / 24u32));
    tau24.exp_2pi_i().mul(&sum)
}

/// `Delta~(tau)` at precision `prec`, via the fundamental domain and weight 12.
pub fn delta_tilde(tau: &BigComplex, prec: u32) -> BigComplex {
    let tau = BigComplex::new(
        Float::with_val(prec, &tau.re),
        Float::with_val(prec, &tau.im),
    );
    let (z, g) = reduce_to_fundamental(&tau);
    // Delta~(g tau) = (r tau + s)^12 Delta~(tau)
    delta_direct(&z).div(&automorphy(&g, &tau).powi(12))
}

/// `Delta~` at an exact surd, reduced exactly.
pub fn delta_tilde_surd(tau: &Surd, prec: u32) -> BigComplex {
    let (z, g) = reduce_surd(tau);
    let j = surd_to_complex(&g.automorphy(tau), prec);
    delta_direct(&surd_to_complex(&z, prec)).div(&j.powi(12))
}

/// The Dedekind sum `s(h, k)` for `k > 0`, `gcd(h, k) = 1`, by reciprocity.
pub fn dedekind_sum(h: &Integer, k: &Integer) -> Rational {
    assert!(*k > 0, "k must be positive");
    let mut h = Integer::from(h.modulo_ref(k));
    let mut k = k.clone();
    let mut sign = 1i32;
    let mut acc = Rational::new();
    // s(h, k) + s(k, h) = (h/k + k/h + 1/(h k)) / 12 - 1/4
    while h != 0 {
        let hk = Integer::from(&h * &k);
        let term = (Rational::from((h.clone(), k.clone()))
            + Rational::from((k.clone(), h.clone()))
            + Rational::from((Integer::from(1), hk)))
            / 12
            - Rational::from((1, 4));
        if sign > 0 {
            acc += term;
        } else {
            acc -= term;
        }
        sign = -sign;
        let next = Integer::from(k.modulo_ref(&h));
        k = h;
        h = next;
    }
    acc
}

/// Returns `e` with `eta(gamma tau) = e^{pi i e} sqrt(-i (r tau + s)) eta(tau)`,
/// for `gamma` normalized to `r > 0` (or `r = 0`, `s = 1`, where the square
/// root is one).
pub fn eta_multiplier_exponent(g: &Unimodular) -> (Unimodular, Rational) {
    let g = if g.r < 0 || (g.r == 0 && g.s < 0) {
        g.neg()
    } else {
        g.clone()
    };
    if g.r == 0 {
        let e = Rational::from((g.q.clone(), 12));
        return (g, e);
    }
    let e = Rational::from((Integer::from(&g.p + &g.s), Integer::from(&g.r * 12)))
        - dedekind_sum(&g.s, &g.r);
    (g, e)
}

/// `eta(tau)` from `eta(g tau)`, with `g` normalized and `j = r tau + s`.
fn eta_from_reduced(z_val: &BigComplex, g: &Unimodular, j: &BigComplex) -> BigComplex {
    let p = z_val.prec();
    let (g, e) = eta_multiplier_exponent(g);
    let eps = BigComplex::exp_pi_i_rational(p, &e);
    let eta_z = eta_direct(z_val);
    if g.r == 0 {
        return eta_z.div(&eps);
    }
    // -i (r tau + s)
    let w = BigComplex::new(j.im.clone(), Float::with_val(p, -&j.re));
    eta_z.div(&eps.mul(&w.sqrt()))
}

/// `eta(tau)` at precision `prec`, via the fundamental domain and the
/// Dedekind-sum multiplier.
pub fn eta(tau: &BigComplex, prec: u32) -> BigComplex {
    let tau = BigComplex::new(
        Float::with_val(prec, &tau.re),
        Float::with_val(prec, &tau.im),
    );
    let (z, g) = reduce_to_fundamental(&tau);
    let (gn, _) = eta_multiplier_exponent(&g);
    let j = automorphy(&gn, &tau);
    eta_from_reduced(&z, &gn, &j)
}

/// `eta` at an exact surd.
pub fn eta_surd(tau: &Surd, prec: u32) -> BigComplex {
    let (z, g) = reduce_surd(tau);
    let (gn, _) = eta_multiplier_exponent(&g);
    let j = surd_to_complex(&gn.automorphy(tau), prec);
    eta_from_reduced(&surd_to_complex(&z, prec), &gn, &j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    fn direct_dedekind(h: i64, k: i64) -> Rational {
        let saw = |x: Rational| -> Rational {
            if *x.denom() == 1 {
                return Rational::new();
            }
            let f = x.clone().floor();
            x - f - Rational::from((1, 2))
        };
        (1..k)
            .map(|r| saw(Rational::from((r, k))) * saw(Rational::from((h * r, k))))
            .fold(Rational::new(), |a, b| a + b)
    }

    #[test]
    fn dedekind_sum_matches_direct_sum() {
        for k in 1..40i64 {
            for h in -45..45i64 {
                if num_gcd(h, k) != 1 {
                    continue;
                }
                assert_eq!(
                    dedekind_sum(&Integer::from(h), &Integer::from(k)),
                    direct_dedekind(h, k),
                    "s({h},{k})"
                );
            }
        }
    }

    fn num_gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            num_gcd(b, a % b)
        }
    }

    #[test]
    fn reduction_examples() {
        let (z, g) = reduce_to_fundamental(&c(0.0, 2.0));
        assert_eq!(g, Unimodular::identity());
        assert_eq!(z, c(0.0, 2.0));
        let (z, g) = reduce_to_fundamental(&c(0.5, 2.0));
        assert_eq!(g, Unimodular::translation(Integer::from(-1)));
        assert_eq!(z, c(-0.5, 2.0));
        let s = Surd::new(
            Rational::from((792, 623)),
            Rational::from((12, 623)),
            Integer::from(-5),
        );
        let (zs, gs) = reduce_surd(&s);
        assert_eq!(gs.apply(&s), zs);
        let (re, im) = zs.to_f64();
        assert!((-0.5..0.5).contains(&re) && im >= 3f64.sqrt() / 2.0 - 1e-12);
        let (zf, gf) = reduce_to_fundamental(&surd_to_complex(&s, P));
        assert_eq!(gf, gs);
        assert!(zf.sub(&surd_to_complex(&zs, P)).abs() < pow2(P, -200));
    }

    #[test]
    fn delta_transformations() {
        let tau = c(0.0, 2.0);
        let a = delta_tilde(&tau, P);
        let b = delta_tilde(&tau.recip().neg(), P);
        assert!(b.rel_diff(&a.mul(&tau.powi(12))) < pow2(P, -(P as i32) / 2));
        let direct = delta_direct(&tau);
        assert!(direct.rel_diff(&a) < pow2(P, -(P as i32) / 2));
        let base = c(0.3, 0.7);
        let shifted = base.add(&BigComplex::one(P));
        assert!(
            delta_tilde(&shifted, P).rel_diff(&delta_tilde(&base, P)) < pow2(P, -(P as i32) / 2)
        );
        for t in [0.3, 1.0, 2.5] {
            let v = delta_tilde(&c(0.0, t), P);
            assert!(v.re > 0 && v.im.clone().abs() < pow2(P, -(P as i32) / 2) * v.re.clone());
        }
    }

    #[test]
    fn eta_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let tau = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..1.5));
            let a = eta(&tau, P);
            let b = eta_pentagonal(&tau);
            assert!(a.rel_diff(&b) < pow2(P, -200), "tau = {tau}");
            assert!(eta_direct(&tau).rel_diff(&b) < pow2(P, -200));
        }
    }

    #[test]
    fn eta_modularity_with_multiplier() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.5));
            let g = random_sl2(&mut rng, 8);
            let lhs = eta(&mobius(&g, &tau), P);
            let (gn, e) = eta_multiplier_exponent(&g);
            let j = automorphy(&gn, &tau);
            let w = BigComplex::new(j.im.clone(), Float::with_val(P, -&j.re));
            let factor = if gn.r == 0 {
                BigComplex::one(P)
            } else {
                w.sqrt()
            };
            let rhs = BigComplex::exp_pi_i_rational(P, &e)
                .mul(&factor)
                .mul(&eta_pentagonal(&tau));
            assert!(lhs.rel_diff(&rhs) < pow2(P, -180), "gamma = {g}");
        }
    }

    fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> Unimodular {
        loop {
            let r = rng.gen_range(-bound..=bound);
            let s = rng.gen_range(-bound..=bound);
            if let Some(g) = Unimodular::with_bottom_row(&Integer::from(r), &Integer::from(s)) {
                return g;
            }
        }
    }
}
