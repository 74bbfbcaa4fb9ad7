use formclass::{enumerate_reduced, QuadForm, Unimodular};
use proptest::prelude::*;
use rug::Integer;

const DISCS: [i64; 9] = [-3, -4, -7, -8, -11, -15, -20, -23, -24];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A unimodular matrix with bottom row `(r, s)` and top row shifted by `k` bottom rows.
fn matrix() -> impl Strategy<Value = Unimodular> {
    (-9i64..=9, -9i64..=9, -4i64..=4)
        .prop_filter("primitive bottom row", |(r, s, _)| gcd(*r, *s) == 1)
        .prop_map(|(r, s, k)| {
            let g = Unimodular::with_bottom_row(&Integer::from(r), &Integer::from(s)).unwrap();
            Unimodular::translation(Integer::from(k)).mul(&g)
        })
}

/// A random form in the class of a random reduced form.
fn form() -> impl Strategy<Value = QuadForm> {
    (0..DISCS.len(), any::<prop::sample::Index>(), matrix()).prop_map(|(i, pick, g)| {
        let reduced = enumerate_reduced(&Integer::from(DISCS[i])).unwrap();
        reduced[pick.index(reduced.len())].act(&g)
    })
}

proptest! {
    #[test]
    fn action_preserves_discriminant_and_definiteness(q in form(), g in matrix()) {
        let r = q.act(&g);
        prop_assert_eq!(r.discriminant(), q.discriminant());
        prop_assert!(r.validate().is_ok());
    }

    #[test]
    fn action_composes(q in form(), g in matrix(), h in matrix()) {
        prop_assert_eq!(q.act(&g).act(&h), q.act(&g.mul(&h)));
    }

    #[test]
    fn root_moves_by_inverse(q in form(), g in matrix()) {
        prop_assert_eq!(q.act(&g).omega(), g.inverse().apply(&q.omega()));
    }

    #[test]
    fn reduction_is_a_class_invariant(q in form(), g in matrix()) {
        let (r, m) = q.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(q.act(&m), r.clone());
        prop_assert_eq!(r.reduce().0, r.clone());
        prop_assert_eq!(q.act(&g).reduce().0, r);
    }

    #[test]
    fn automorphy_cocycle(q in form(), a in matrix(), b in matrix()) {
        let tau = q.omega();
        let lhs = a.mul(&b).automorphy(&tau);
        let rhs = a.automorphy(&b.apply(&tau)).mul(&b.automorphy(&tau));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn isotropy_fixes_root(q in form()) {
        let w = q.omega();
        for g in q.isotropy() {
            prop_assert!(g.fixes(&w));
            prop_assert_eq!(q.act(&g), q.clone());
        }
    }
}

#[test]
fn reduced_counts_match_triple_loop() {
    for d in DISCS {
        let mut brute = 0;
        for a in 1..=((-d) as f64 / 3.0).sqrt() as i64 + 1 {
            for b in -a..=a {
                for c in a..=(b * b - d) {
                    if b * b - 4 * a * c != d || gcd(gcd(a, b), c) != 1 {
                        continue;
                    }
                    // |b| <= a <= c, and b >= 0 when |b| = a or a = c.
                    if (b.abs() == a || a == c) && b < 0 {
                        continue;
                    }
                    brute += 1;
                }
            }
        }
        let got = enumerate_reduced(&Integer::from(d)).unwrap();
        assert_eq!(got.len(), brute, "d = {d}");
        assert!(got.iter().all(QuadForm::is_reduced));
    }
}

#[test]
fn listed_forms_reduce_onto_the_two_classes() {
    let listed = [
        (1, 0, 5),
        (5, 0, 1),
        (41, 12, 1),
        (29, -26, 6),
        (49, 34, 6),
        (61, -38, 6),
        (89, 46, 6),
        (181, -60, 5),
        (7, 22, 18),
        (83, 48, 7),
        (623, 132, 7),
        (35, 20, 3),
        (103, -86, 18),
        (43, -18, 2),
        (23, -16, 3),
        (523, -194, 18),
    ];
    let mut counts = std::collections::BTreeMap::new();
    for (a, b, c) in listed {
        let q = QuadForm::new(a, b, c).unwrap();
        *counts.entry(q.reduce().0).or_insert(0) += 1;
    }
    let principal = QuadForm::new(1, 0, 5).unwrap();
    let other = QuadForm::new(2, 2, 3).unwrap();
    assert_eq!(counts.get(&principal), Some(&8));
    assert_eq!(counts.get(&other), Some(&8));
}
