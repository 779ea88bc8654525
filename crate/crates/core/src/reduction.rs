//! Eisenstein reduction of positive ternary forms with even cross
//! coefficients, GL2(Z) reduction of binary forms, and equivalence testing.
//!
//! Reduction enumerates the vectors realising the successive minima, tries every
//! unimodular basis built from them and keeps the bases whose Gram data satisfy
//! the Eisenstein conditions. Exactly one reduced form must come out.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, TernaryForm, UnimodularMap, Vector3};
use crate::representations::vectors_in_range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub reduced_form: TernaryForm,
    /// `U` with `input o U = reduced_form`.
    pub transform: UnimodularMap<3>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryReductionResult {
    pub reduced_form: BinaryForm,
    pub transform: UnimodularMap<2>,
}

/// The Eisenstein conditions on `[a,b,c,2r,2s,2t]`, tested on the halved
/// cross coefficients.
pub fn is_eisenstein_reduced(q: &TernaryForm) -> bool {
    if !q.is_dickson() {
        return false;
    }
    let (a, b, c) = (q.a, q.b, q.c);
    let (r, s, t) = (q.r / 2, q.s / 2, q.t / 2);
    let positive = r > 0 && s > 0 && t > 0;
    let nonpositive = r <= 0 && s <= 0 && t <= 0;
    if !(positive || nonpositive) {
        return false;
    }
    let eps = a + b + 2 * r + 2 * s + 2 * t;
    if !(0 < a && a <= b && b <= c && eps >= 0) {
        return false;
    }
    if a < (2 * s).abs() || a < (2 * t).abs() || b < (2 * r).abs() {
        return false;
    }
    if (a == b && r.abs() > s.abs()) || (b == c && s.abs() > t.abs()) || (eps == 0 && a + 2 * s + t > 0) {
        return false;
    }
    if nonpositive && ((a == -2 * t && s != 0) || (a == -2 * s && t != 0) || (b == -2 * r && t != 0)) {
        return false;
    }
    if positive && ((a == 2 * t && s > 2 * r) || (a == 2 * s && t > 2 * r) || (b == 2 * r && t > 2 * s)) {
        return false;
    }
    true
}

fn cross(u: &Vector3, v: &Vector3) -> Vector3 {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot(u: &Vector3, v: &Vector3) -> i64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Pairwise size reduction of the basis. Cheap and good enough to bring the
/// diagonal within a small factor of the successive minima.
fn prereduce(q: &TernaryForm) -> Result<(TernaryForm, UnimodularMap<3>)> {
    let mut cur = *q;
    let mut total = UnimodularMap::<3>::identity();
    loop {
        // sort basis by norm
        let diag = [cur.a, cur.b, cur.c];
        let mut order = [0usize, 1, 2];
        order.sort_by_key(|&i| (diag[i], i));
        if order != [0, 1, 2] {
            let mut rows = [[0i64; 3]; 3];
            for (j, &i) in order.iter().enumerate() {
                rows[i][j] = 1;
            }
            let p = UnimodularMap::<3>::new(rows)?;
            cur = cur.apply(&p)?;
            total = total.mul(&p)?;
        }
        let m = cur.coefficient_matrix();
        let mut step = None;
        'search: for i in 0..3 {
            for j in 0..3 {
                if i != j && 2 * m[i][j].abs() > m[i][i] && m[i][i] <= m[j][j] {
                    // round(m_ij / m_ii), half toward zero
                    let mu = (2 * m[i][j] + m[i][i] * m[i][j].signum()) / (2 * m[i][i]);
                    step = Some((i, j, mu));
                    break 'search;
                }
            }
        }
        let Some((i, j, mu)) = step else { return Ok((cur, total)) };
        let mut e = UnimodularMap::<3>::identity();
        e.rows[i][j] = i64::try_from(-mu).map_err(|_| Error::Overflow("prereduce"))?;
        cur = cur.apply(&e)?;
        total = total.mul(&e)?;
    }
}

fn successive_minima(vs: &[(Vector3, i64)]) -> Option<[i64; 3]> {
    let mut by_norm: Vec<&(Vector3, i64)> = vs.iter().collect();
    by_norm.sort_by_key(|p| (p.1, p.0));
    let mut minima = [0i64; 3];
    let mut basis: Vec<Vector3> = vec![];
    for (v, n) in by_norm {
        let independent = match basis.len() {
            0 => true,
            1 => cross(&basis[0], v) != [0, 0, 0],
            _ => dot(&cross(&basis[0], &basis[1]), v) != 0,
        };
        if independent {
            minima[basis.len()] = *n;
            basis.push(*v);
            if basis.len() == 3 {
                return Some(minima);
            }
        }
    }
    None
}

/// Reduced forms reachable from bases whose vectors have the given norms.
fn reduced_candidates(
    q: &TernaryForm,
    v1s: &[Vector3],
    v2s: &[Vector3],
    v3s: &[Vector3],
) -> Result<(BTreeSet<TernaryForm>, Option<(TernaryForm, [Vector3; 3])>)> {
    let mut found = BTreeSet::new();
    let mut first = None;
    for v1 in v1s {
        let n1 = q.value(v1);
        for v2 in v2s {
            let t = q.polar(v1, v2);
            if 2 * t.abs() > 2 * n1 {
                continue;
            }
            let c12 = cross(v1, v2);
            if c12 == [0, 0, 0] {
                continue;
            }
            let n2 = q.value(v2);
            for v3 in v3s {
                let det = dot(&c12, v3);
                if det.abs() != 1 {
                    continue;
                }
                let s = q.polar(v1, v3);
                let r = q.polar(v2, v3);
                if s.abs() > n1 || r.abs() > n2 {
                    continue;
                }
                let cand = TernaryForm::new(n1 as i64, n2 as i64, q.value(v3) as i64, r as i64, s as i64, t as i64);
                if is_eisenstein_reduced(&cand) {
                    if first.is_none() {
                        first = Some((cand, [*v1, *v2, *v3]));
                    }
                    found.insert(cand);
                }
            }
        }
    }
    Ok((found, first))
}

pub fn reduce_ternary(q: &TernaryForm) -> Result<ReductionResult> {
    q.ensure_positive_definite()?;
    q.ensure_dickson()?;
    if is_eisenstein_reduced(q) {
        return Ok(ReductionResult { reduced_form: *q, transform: UnimodularMap::identity() });
    }
    let (p, u0) = prereduce(q)?;
    let bound = p.a.max(p.b).max(p.c);
    let vs = vectors_in_range(&p, 1, bound)?;
    let minima = successive_minima(&vs)
        .ok_or_else(|| Error::Internal(format!("short vectors of {q} do not span")))?;
    let with_norm = |n: i64| -> Vec<Vector3> { vs.iter().filter(|x| x.1 == n).map(|x| x.0).collect() };
    let (found, first) = reduced_candidates(&p, &with_norm(minima[0]), &with_norm(minima[1]), &with_norm(minima[2]))?;
    if found.len() != 1 {
        return Err(Error::Internal(format!(
            "reduction of {q} produced {} reduced forms instead of one",
            found.len()
        )));
    }
    let (reduced_form, cols) = first.expect("nonempty candidate set");
    let transform = u0.mul(&UnimodularMap::<3>::from_columns(cols)?)?;
    debug_assert_eq!(q.apply(&transform)?, reduced_form);
    Ok(ReductionResult { reduced_form, transform })
}

/// Reduction up to GL2(Z): the result satisfies `0 <= t <= a <= b`.
pub fn reduce_binary(q: &BinaryForm) -> Result<BinaryReductionResult> {
    q.ensure_positive_definite()?;
    let mut cur = *q;
    let mut u = UnimodularMap::<2>::identity();
    loop {
        if cur.a > cur.b {
            let s = UnimodularMap::<2>::new([[0, 1], [1, 0]])?;
            cur = cur.apply(&s)?;
            u = u.mul(&s)?;
            continue;
        }
        if cur.t.abs() > cur.a {
            // x -> x - k y with k the nearest integer to t / 2a
            let two_a = 2 * cur.a as i128;
            let t = cur.t as i128;
            let k = (2 * t + two_a * t.signum()) / (2 * two_a);
            let k = i64::try_from(k).map_err(|_| Error::Overflow("reduce_binary"))?;
            let e = UnimodularMap::<2>::new([[1, -k], [0, 1]])?;
            cur = cur.apply(&e)?;
            u = u.mul(&e)?;
            continue;
        }
        break;
    }
    if cur.t < 0 {
        let f = UnimodularMap::<2>::new([[1, 0], [0, -1]])?;
        cur = cur.apply(&f)?;
        u = u.mul(&f)?;
    }
    Ok(BinaryReductionResult { reduced_form: cur, transform: u })
}

/// `Some(U)` with `q1 o U = q2` when the forms are GL3(Z)-equivalent.
pub fn equivalent(q1: &TernaryForm, q2: &TernaryForm) -> Result<Option<UnimodularMap<3>>> {
    let r1 = reduce_ternary(q1)?;
    let r2 = reduce_ternary(q2)?;
    if r1.reduced_form != r2.reduced_form {
        return Ok(None);
    }
    Ok(Some(r1.transform.mul(&r2.transform.inverse()?)?))
}

pub fn binary_equivalent(q1: &BinaryForm, q2: &BinaryForm) -> Result<bool> {
    Ok(reduce_binary(q1)?.reduced_form == reduce_binary(q2)?.reduced_form)
}

/// Every Eisenstein-reduced form with `a <= b <= c <= max_c`, in lexicographic
/// order of the written coefficients.
pub fn reduced_forms_up_to_c(max_c: i64) -> Vec<TernaryForm> {
    let mut out = vec![];
    for a in 1..=max_c {
        for b in a..=max_c {
            for c in b..=max_c {
                push_reduced(a, b, c, &mut out, |_| true);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every Eisenstein-reduced form with `|disc| <= max_disc`. Uses
/// `abc <= |disc| / 2`, valid for reduced forms.
pub fn reduced_forms_up_to_disc(max_disc: i64) -> Vec<TernaryForm> {
    let half = max_disc / 2;
    let mut out = vec![];
    let mut a = 1;
    while a * a * a <= half {
        let mut b = a;
        while a * b * b <= half {
            let mut c = b;
            while a * b * c <= half {
                push_reduced(a, b, c, &mut out, |q| q.discriminant().is_ok_and(|d| d.abs() <= max_disc));
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out.sort_unstable();
    out
}

fn push_reduced(a: i64, b: i64, c: i64, out: &mut Vec<TernaryForm>, keep: impl Fn(&TernaryForm) -> bool) {
    for r in -(b / 2)..=(b / 2) {
        for s in -(a / 2)..=(a / 2) {
            for t in -(a / 2)..=(a / 2) {
                let q = TernaryForm::new(a, b, c, 2 * r, 2 * s, 2 * t);
                if is_eisenstein_reduced(&q) && keep(&q) {
                    out.push(q);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::q_ic;

    #[test]
    fn families_are_reduced() {
        for c in 4..60 {
            assert!(is_eisenstein_reduced(&q_ic(1, c)), "q_1,{c}");
            assert!(is_eisenstein_reduced(&q_ic(2, c)), "q_2,{c}");
            if c > 4 {
                for i in (3..=6).filter(|&i| i != 5 || c % 2 == 0) {
                    assert!(is_eisenstein_reduced(&q_ic(i, c)), "q_{i},{c}");
                }
            }
        }
        assert!(is_eisenstein_reduced(&TernaryForm::new(4, 8, 12, -4, -4, 0)));
        assert!(!is_eisenstein_reduced(&TernaryForm::new(4, 4, 5, 0, 4, 0)));
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_ternary(&TernaryForm::new(4, 4, 5, 0, 4, 0)).unwrap();
        assert_eq!(r.reduced_form, TernaryForm::new(4, 4, 5, 0, -4, 0));
        assert_eq!(TernaryForm::new(4, 4, 5, 0, 4, 0).apply(&r.transform).unwrap(), r.reduced_form);
        assert!(reduce_ternary(&TernaryForm::new(1, 1, 1, 1, 0, 0)).is_err());
        assert!(reduce_ternary(&TernaryForm::new(1, 1, -1, 0, 0, 0)).is_err());
    }

    #[test]
    fn reduce_binary_examples() {
        assert_eq!(reduce_binary(&BinaryForm::new(4, 12, 13)).unwrap().reduced_form, BinaryForm::new(4, 4, 5));
        assert_eq!(reduce_binary(&BinaryForm::new(5, -4, 8)).unwrap().reduced_form, BinaryForm::new(5, 4, 8));
        for q in [BinaryForm::new(4, 12, 13), BinaryForm::new(13, 33, 25), BinaryForm::new(7, -20, 19)] {
            let r = reduce_binary(&q).unwrap();
            assert_eq!(q.apply(&r.transform).unwrap(), r.reduced_form);
        }
    }

    #[test]
    fn equivalence() {
        let q1 = TernaryForm::new(4, 4, 5, 0, 4, 0);
        let q2 = q_ic(6, 5);
        let u = equivalent(&q1, &q2).unwrap().unwrap();
        assert_eq!(q1.apply(&u).unwrap(), q2);
        assert!(equivalent(&q_ic(6, 5), &TernaryForm::diagonal(4, 4, 5)).unwrap().is_none());
    }

    #[test]
    fn reduced_list_is_idempotent() {
        for q in reduced_forms_up_to_c(8) {
            let r = reduce_ternary(&q).unwrap();
            assert_eq!(r.reduced_form, q);
            assert_eq!(r.transform, UnimodularMap::identity());
        }
    }

    #[test]
    fn disc_enumeration_bound() {
        // the abc <= |disc|/2 cut loses nothing against a box twice as large
        let tight: BTreeSet<_> = reduced_forms_up_to_disc(300).into_iter().collect();
        let mut loose = vec![];
        for a in 1..=300i64 {
            for b in a..=300 {
                for c in b..=300 {
                    if a * b * c <= 600 {
                        push_reduced(a, b, c, &mut loose, |q| q.discriminant().unwrap().abs() <= 300);
                    }
                }
            }
        }
        assert_eq!(tight, loose.into_iter().collect());
    }
}
