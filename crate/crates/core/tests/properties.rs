use std::collections::BTreeSet;
use std::sync::OnceLock;

use humbert_core::automorphs::{automorphism_group, predicted_proper_order};
use humbert_core::intersections::{humbert_pair_intersection, intersect_with_humbert, HumbertBase};
use humbert_core::reduction::{is_eisenstein_reduced, reduce_ternary, reduced_forms_up_to_c};
use humbert_core::subcovers::{class_number, d6_locus_count, ClassNumberTable};
use humbert_core::{q_ic, FormFamily, TernaryForm, UnimodularMap};
use num_integer::Integer;
use proptest::prelude::*;

fn small_forms() -> &'static [TernaryForm] {
    static FORMS: OnceLock<Vec<TernaryForm>> = OnceLock::new();
    FORMS.get_or_init(|| reduced_forms_up_to_c(8))
}

fn elementary(op: u8, i: usize, shift: usize, m: i64) -> UnimodularMap<3> {
    let j = (i + 1 + shift) % 3;
    let mut rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    match op {
        0 => rows[i][i] = -1,
        1 => {
            rows[i][i] = 0;
            rows[j][j] = 0;
            rows[i][j] = 1;
            rows[j][i] = 1;
        }
        _ => rows[i][j] = m,
    }
    UnimodularMap::<3>::new(rows).unwrap()
}

fn unimodular() -> impl Strategy<Value = UnimodularMap<3>> {
    prop::collection::vec((0u8..4, 0usize..3, 0usize..2, -2i64..=2), 0..8).prop_map(|ops| {
        ops.into_iter()
            .fold(UnimodularMap::<3>::identity(), |u, (op, i, s, m)| u.mul(&elementary(op, i, s, m)).unwrap())
    })
}

fn form() -> impl Strategy<Value = TernaryForm> {
    (0..small_forms().len()).prop_map(|i| small_forms()[i])
}

/// Greedy SL2 reduction, written independently of the library.
fn reduce_sl2(mut f: [i64; 3]) -> [i64; 3] {
    loop {
        let [a, b, c] = f;
        if b > a || b <= -a {
            // b -> b - 2ka into (-a, a]
            let k = Integer::div_floor(&(b + a - 1), &(2 * a));
            f = [a, b - 2 * k * a, c - k * b + k * k * a];
        } else if a > c {
            f = [c, -b, a];
        } else if a == c && b < 0 {
            f = [a, -b, c];
        } else {
            return f;
        }
    }
}

/// Distinct reductions of every primitive form with `a` and `|b|` bounded.
fn orbit_count(d: i64) -> i64 {
    let k = 2 * (-d);
    let mut seen = BTreeSet::new();
    for a in 1..=k {
        for b in -k..=k {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if a.gcd(&b).gcd(&c) == 1 {
                seen.insert(reduce_sl2([a, b, c]));
            }
        }
    }
    seen.len() as i64
}

proptest! {
    #[test]
    fn transforms_preserve_values_and_invariants(q in form(), u in unimodular(), v in prop::array::uniform3(-5i64..=5)) {
        let p = q.apply(&u).unwrap();
        prop_assert_eq!(p.evaluate(&v).unwrap(), q.evaluate(&u.apply_vector(&v)).unwrap());
        prop_assert_eq!(p.discriminant().unwrap(), q.discriminant().unwrap());
        prop_assert_eq!(p.content(), q.content());
        prop_assert_eq!(automorphism_group(&p).unwrap().proper_count, automorphism_group(&q).unwrap().proper_count);
    }

    #[test]
    fn reduction_is_canonical(q in form(), u in unimodular(), w in unimodular()) {
        let (p1, p2) = (q.apply(&u).unwrap(), q.apply(&w).unwrap());
        let (r1, r2) = (reduce_ternary(&p1).unwrap(), reduce_ternary(&p2).unwrap());
        prop_assert_eq!(r1.reduced_form, q);
        prop_assert_eq!(r2.reduced_form, q);
        prop_assert_eq!(p1.apply(&r1.transform).unwrap(), q);
        prop_assert!(is_eisenstein_reduced(&r1.reduced_form));
    }

    #[test]
    fn pair_intersection_is_symmetric(n in 2i64..12, m in 2i64..12) {
        match (humbert_pair_intersection(n, m, None), humbert_pair_intersection(m, n, None)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.forms(), y.forms()),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "asymmetric outcome: {:?} vs {:?}", x.is_ok(), y.is_ok()),
        }
    }

    #[test]
    fn class_number_matches_orbit_count(k in 1i64..=50, shift in 0i64..2) {
        let d = -(4 * k - 1 + shift);
        prop_assume!(d.rem_euclid(4) <= 1);
        prop_assert_eq!(class_number(d).unwrap(), orbit_count(d));
    }
}

#[test]
fn class_numbers_up_to_200() {
    for d in (-200..=-3).filter(|d: &i64| d.rem_euclid(4) <= 1) {
        assert_eq!(class_number(d).unwrap(), orbit_count(d), "h({d})");
    }
}

#[test]
fn d6_terms_are_the_odd_intersection_members() {
    let mut table = ClassNumberTable::new();
    for m in [3i64, 5, 7] {
        let count = d6_locus_count(m, &mut table).unwrap();
        let from_terms: Vec<(u8, i64)> = count.terms.iter().map(|t| (t.family, t.c)).collect();
        let mut from_members: Vec<(u8, i64)> = intersect_with_humbert(HumbertBase::F444, m * m)
            .unwrap()
            .members
            .iter()
            .filter_map(|x| match x.family {
                FormFamily::Q { i, c } if c % 4 == 1 => Some((i, c)),
                _ => None,
            })
            .collect();
        from_members.sort();
        assert_eq!(from_terms, from_members, "m = {m}");
    }
}

#[test]
fn family_forms_are_reduced_with_predicted_orders() {
    for c in 4..=50 {
        for i in 1..=6u8 {
            let Ok(q) = (FormFamily::Q { i, c }).instantiate() else { continue };
            assert!(is_eisenstein_reduced(&q), "{q}");
            let brute = automorphism_group(&q).unwrap().proper_count;
            if let Some(p) = predicted_proper_order(&q).unwrap() {
                assert_eq!(p, brute, "{q}");
            }
        }
        if c > 4 {
            assert_eq!(automorphism_group(&TernaryForm::diagonal(4, 4, c)).unwrap().proper_count, 8, "c = {c}");
        }
    }
    assert_eq!(automorphism_group(&q_ic(1, 4)).unwrap().proper_count, 24);
}
