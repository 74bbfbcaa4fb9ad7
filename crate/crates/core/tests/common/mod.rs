//! Brute-force reference implementations used as test oracles. Everything
//! here works with machine integers and shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// `O_K = Z[tau]` with `tau^2 + b tau + c = 0`.
#[derive(Clone, Copy, Debug)]
pub struct Order {
    pub d: i64,
    pub b: i64,
    pub c: i64,
}

impl Order {
    pub fn new(d: i64) -> Order {
        if d % 2 == 0 {
            Order { d, b: 0, c: -d / 4 }
        } else {
            Order {
                d,
                b: 1,
                c: (1 - d) / 4,
            }
        }
    }

    /// Norm of `x + y tau`.
    pub fn norm(&self, (x, y): (i64, i64)) -> i64 {
        x * x - self.b * x * y + self.c * y * y
    }

    pub fn mul(&self, (x1, y1): (i64, i64), (x2, y2): (i64, i64)) -> (i64, i64) {
        let yy = y1 * y2;
        (x1 * x2 - self.c * yy, x1 * y2 + x2 * y1 - self.b * yy)
    }

    pub fn conj(&self, (x, y): (i64, i64)) -> (i64, i64) {
        (x - self.b * y, -y)
    }

    pub fn units(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for y in -1..=1 {
            for x in -2..=2 {
                if self.norm((x, y)) == 1 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Integral ideals `Z (a tau + b) + Z c` of norm `a c = n`, all of them.
    pub fn ideals_of_norm(&self, n: i64) -> Vec<Ideal> {
        let mut out = Vec::new();
        for a in 1..=n {
            if n % a != 0 {
                continue;
            }
            let c = n / a;
            for b in 0..c {
                let i = Ideal { a, b, c };
                let gens = [(b, a), (c, 0)];
                if gens.iter().all(|&g| i.contains(self.mul(g, (0, 1)))) {
                    out.push(i);
                }
            }
        }
        out
    }

    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let mut v = Vec::new();
        for g in i.basis() {
            for h in j.basis() {
                v.push(self.mul(g, h));
            }
        }
        Ideal::from_vectors(&v)
    }

    pub fn ideal_conj(&self, i: &Ideal) -> Ideal {
        let v: Vec<_> = i.basis().iter().map(|&g| self.conj(g)).collect();
        Ideal::from_vectors(&v)
    }

    /// All elements of `i` whose norm equals `N(i)`; empty iff `i` is not principal.
    pub fn generators(&self, i: &Ideal) -> Vec<(i64, i64)> {
        let n = i.norm();
        let mut out = Vec::new();
        // 4 n = (2x - b y)^2 + |d| y^2
        let ymax = ((4 * n) as f64 / (-self.d) as f64).sqrt() as i64 + 1;
        for y in -ymax..=ymax {
            let rest = 4 * n + self.d * y * y;
            if rest < 0 {
                continue;
            }
            let s = (rest as f64).sqrt() as i64;
            for t in [s - 1, s, s + 1] {
                if t < 0 || t * t != rest {
                    continue;
                }
                for u in [t, -t] {
                    if (u + self.b * y) % 2 != 0 {
                        continue;
                    }
                    let x = (u + self.b * y) / 2;
                    if self.norm((x, y)) == n && i.contains((x, y)) && !out.contains(&(x, y)) {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    /// `A ~ B` in `I(n)/P_T`: `A conj(B) = mu O_K` with `mu ≡ t N(B) (mod N)` for
    /// some generator `mu` and `t ∈ T`.
    pub fn ray_equal(&self, a: &Ideal, b: &Ideal, n: i64, t: &[i64]) -> bool {
        let c = self.ideal_mul(a, &self.ideal_conj(b));
        let nb = b.norm();
        self.generators(&c).iter().any(|&(x, y)| {
            y.rem_euclid(n) == 0 && t.iter().any(|&s| (x - s * nb).rem_euclid(n) == 0)
        })
    }

    /// Number of classes met by integral ideals prime to `n` of norm at most `bound`.
    pub fn ray_class_count(&self, n: i64, t: &[i64], bound: i64) -> usize {
        let mut reps: Vec<Ideal> = Vec::new();
        for m in 1..=bound {
            if gcd(m, n) != 1 {
                continue;
            }
            for i in self.ideals_of_norm(m) {
                if !reps.iter().any(|r| self.ray_equal(&i, r, n, t)) {
                    reps.push(i);
                }
            }
        }
        reps.len()
    }

    /// `h * |(O_K/n)^*| / |image of O_K^* T|`.
    pub fn ray_class_count_by_residues(&self, n: i64, t: &[i64]) -> usize {
        let h = self.class_number();
        let mut units_mod = 0usize;
        for x in 0..n {
            for y in 0..n {
                if gcd(self.norm((x, y)).rem_euclid(n), n) == 1 || n == 1 {
                    units_mod += 1;
                }
            }
        }
        let mut image = BTreeSet::new();
        for z in self.units() {
            for &s in t {
                image.insert(((z.0 * s).rem_euclid(n), (z.1 * s).rem_euclid(n)));
            }
        }
        h * units_mod / image.len()
    }

    /// Reduced forms counted directly.
    pub fn class_number(&self) -> usize {
        let d = self.d;
        let mut h = 0;
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || gcd(gcd(a, b.abs()), c) != 1 {
                    continue;
                }
                if b < 0 && (a == c) {
                    continue;
                }
                h += 1;
            }
            a += 1;
        }
        h
    }
}

/// `Z (a tau + b) + Z c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Ideal {
    pub fn norm(&self) -> i64 {
        self.a * self.c
    }

    pub fn basis(&self) -> [(i64, i64); 2] {
        [(self.b, self.a), (self.c, 0)]
    }

    pub fn contains(&self, (x, y): (i64, i64)) -> bool {
        if y % self.a != 0 {
            return false;
        }
        (x - (y / self.a) * self.b) % self.c == 0
    }

    /// Hermite form of the lattice spanned by `(x, y)` = `x + y tau`.
    pub fn from_vectors(v: &[(i64, i64)]) -> Ideal {
        // Work on (y, x) rows; eliminate y by repeated Euclid.
        let mut rows: Vec<(i64, i64)> = v.iter().map(|&(x, y)| (y, x)).collect();
        let mut c = 0i64;
        loop {
            rows.retain(|&(y, x)| {
                if y == 0 {
                    c = gcd(c, x);
                    false
                } else {
                    true
                }
            });
            if rows.len() <= 1 {
                break;
            }
            rows.sort_by_key(|r| r.0.abs());
            let (y0, x0) = rows[0];
            for r in rows.iter_mut().skip(1) {
                let q = r.0 / y0;
                r.0 -= q * y0;
                r.1 -= q * x0;
            }
        }
        let (mut a, mut b) = rows[0];
        if a < 0 {
            a = -a;
            b = -b;
        }
        assert!(c != 0, "lattice has rank one");
        Ideal {
            a,
            b: b.rem_euclid(c),
            c,
        }
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Least residues of `(Z/nZ)^*`.
pub fn full_t(n: i64) -> Vec<i64> {
    (0..n).filter(|&x| gcd(x, n) == 1).collect()
}
