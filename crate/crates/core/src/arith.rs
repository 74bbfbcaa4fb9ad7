//! Small integer helpers shared by the exact layers.

use rug::{Integer, Rational};

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn ext_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    let (g, x, y) = <(Integer, Integer, Integer)>::from(a.extended_gcd_ref(b));
    (g, x, y)
}

pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    Integer::from(a.gcd_ref(b))
}

/// Least non-negative residue of `a` modulo `n > 0`.
pub fn modulo(a: &Integer, n: &Integer) -> Integer {
    let mut r = Integer::from(a % n);
    if r < 0 {
        r += n;
    }
    r
}

/// Inverse of `a` modulo `n`, as a least non-negative residue. `None` when not a unit.
pub fn mod_inv(a: &Integer, n: &Integer) -> Option<Integer> {
    if *n == 1 {
        return Some(Integer::new());
    }
    let (g, x, _) = ext_gcd(&modulo(a, n), n);
    (g == 1).then(|| modulo(&x, n))
}

pub fn is_squarefree(n: &Integer) -> bool {
    let n = n.clone().abs();
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= m {
        if m.is_divisible(&p) {
            m /= &p;
            if m.is_divisible(&p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Euler's totient by trial division; only used at desk scale.
pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// `lcm` of the denominators of the given rationals.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    qs.into_iter()
        .fold(Integer::from(1), |acc, q| acc.lcm(q.denom()))
}
