//! Elliptic subcovers of a genus 2 curve read off its refined Humbert
//! invariant, binary class numbers, and the count of curves with `D6`
//! automorphisms having a subcover of a given odd degree.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{q_ic, TernaryForm, Vector3};
use crate::representations::{representations, represents};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcoverReport {
    pub degree: i64,
    pub exists: bool,
    /// Primitive `v` with `q(v) = n^2`; `v` and `-v` are counted separately.
    pub count: usize,
    pub vectors: Vec<Vector3>,
}

fn ensure_jacobian(q: &TernaryForm) -> Result<()> {
    q.ensure_positive_definite()?;
    if represents(q, 1)? {
        return Err(Error::NotJacobian(q.to_string()));
    }
    Ok(())
}

/// Elliptic subcovers of degree `n`, one per primitive vector of value `n^2`.
pub fn subcovers(q: &TernaryForm, n: i64) -> Result<SubcoverReport> {
    ensure_jacobian(q)?;
    if n < 1 {
        return Err(Error::Precondition(format!("degree must be positive, got {n}")));
    }
    let n2 = n.checked_mul(n).ok_or(Error::Overflow("subcovers"))?;
    let vectors = representations(q, n2, true)?.vectors;
    Ok(SubcoverReport { degree: n, exists: !vectors.is_empty(), count: vectors.len(), vectors })
}

/// `disc(q) / 16`, the discriminant of the degree form when the curve has
/// two complementary elliptic subcovers.
pub fn degree_form_disc(q: &TernaryForm) -> Result<i64> {
    ensure_jacobian(q)?;
    let d = q.discriminant()?;
    if d % 16 != 0 {
        return Err(Error::Precondition(format!("16 does not divide disc({q}) = {d}")));
    }
    Ok(d / 16)
}

fn ensure_discriminant(d: i64) -> Result<()> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// Reduced primitive positive forms `[a,b,c]` of discriminant `d`:
/// `|b| <= a <= c`, and `b >= 0` when `|b| = a` or `a = c`.
pub fn reduced_binary_forms(d: i64) -> Result<Vec<[i64; 3]>> {
    ensure_discriminant(d)?;
    let mut out = vec![];
    let amax = (-d / 3).sqrt();
    for a in 1..=amax {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (b == -a || a == c)) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                out.push([a, b, c]);
            }
        }
    }
    Ok(out)
}

/// `h(d)`, the number of proper classes of primitive positive binary forms.
pub fn class_number(d: i64) -> Result<i64> {
    Ok(reduced_binary_forms(d)?.len() as i64)
}

/// Memoised class numbers, optionally persisted as `d h` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassNumberTable {
    pub entries: BTreeMap<i64, i64>,
}

impl ClassNumberTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Precompute every valid discriminant in `[lo, -3]`.
    pub fn build(lo: i64) -> Self {
        let entries = (lo..=-3).filter_map(|d| class_number(d).ok().map(|h| (d, h))).collect();
        ClassNumberTable { entries }
    }

    pub fn get(&self, d: i64) -> Option<i64> {
        self.entries.get(&d).copied()
    }

    pub fn get_or_compute(&mut self, d: i64) -> Result<i64> {
        if let Some(h) = self.get(d) {
            return Ok(h);
        }
        let h = class_number(d)?;
        self.entries.insert(d, h);
        Ok(h)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (d, h) in &self.entries {
            let _ = writeln!(s, "{d} {h}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("class number cache line {}: {line:?}", i + 1));
            let mut it = line.split_whitespace();
            let d: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let h: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            entries.insert(d, h);
        }
        Ok(ClassNumberTable { entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D6Term {
    /// 1 or 2, the family `q_{i,c'}`.
    pub family: u8,
    pub c: i64,
    pub class_disc: i64,
    pub h: i64,
    /// `h / 2` for `q_{2,c'}` with `3` not dividing `c'`, else `h`.
    pub contribution: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D6Count {
    pub m: i64,
    pub total: i64,
    /// Ordered by family, then `c'`.
    pub terms: Vec<D6Term>,
}

/// Number of curves with automorphism group `D6` having an elliptic subcover
/// of odd degree `m`, summed over the forms `q_{i,c'}` primitively
/// representing `m^2`.
pub fn d6_locus_count(m: i64, table: &mut ClassNumberTable) -> Result<D6Count> {
    if m < 1 || m % 2 == 0 {
        return Err(Error::Precondition(format!("degree must be odd and positive, got {m}")));
    }
    let m2 = m.checked_mul(m).ok_or(Error::Overflow("d6_locus_count"))?;
    let mut terms = vec![];
    for family in [1u8, 2] {
        for c in (5..=m2 + 1).filter(|c| c % 4 == 1) {
            if representations(&q_ic(family, c), m2, true)?.vectors.is_empty() {
                continue;
            }
            let class_disc = if family == 1 { 4 - 3 * c } else { -3 * c };
            let h = table.get_or_compute(class_disc)?;
            let contribution = if family == 2 && c % 3 != 0 {
                if h % 2 != 0 {
                    return Err(Error::Internal(format!("h({class_disc}) = {h} is odd; the halved term is not integral")));
                }
                h / 2
            } else {
                h
            };
            terms.push(D6Term { family, c, class_disc, h, contribution });
        }
    }
    Ok(D6Count { m, total: terms.iter().map(|t| t.contribution).sum(), terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-11, 1), (-15, 2), (-20, 2), (-23, 3), (-27, 1), (-47, 5), (-84, 4)] {
            assert_eq!(class_number(d).unwrap(), h, "h({d})");
        }
        assert_eq!(reduced_binary_forms(-23).unwrap(), vec![[1, 1, 6], [2, -1, 3], [2, 1, 3]]);
        assert!(class_number(-5).is_err());
        assert!(class_number(4).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let t = ClassNumberTable::build(-40);
        assert_eq!(t.get(-15), Some(2));
        assert_eq!(ClassNumberTable::from_text(&t.to_text()).unwrap(), t);
        assert!(ClassNumberTable::from_text("-15 x").is_err());
    }

    #[test]
    fn subcover_counts() {
        let r = subcovers(&q_ic(2, 5), 3).unwrap();
        assert_eq!((r.exists, r.count), (true, 12));
        assert!(!subcovers(&q_ic(1, 4), 1).unwrap().exists);
        assert!(subcovers(&q_ic(1, 5), 3).unwrap().exists);
        assert!(subcovers(&TernaryForm::diagonal(1, 4, 4), 3).is_err());
    }

    #[test]
    fn degree_discs() {
        assert_eq!(degree_form_disc(&q_ic(1, 5)).unwrap(), -11);
        assert_eq!(degree_form_disc(&q_ic(2, 5)).unwrap(), -15);
        assert_eq!(degree_form_disc(&TernaryForm::diagonal(4, 4, 13)).unwrap(), -52);
    }

    #[test]
    fn d6_counts() {
        let mut t = ClassNumberTable::new();
        let r = d6_locus_count(3, &mut t).unwrap();
        assert_eq!(r.total, 6);
        assert_eq!(r.terms.iter().map(|x| x.contribution).collect::<Vec<_>>(), vec![1, 3, 1, 1]);
        assert_eq!(d6_locus_count(1, &mut t).unwrap().total, 0);
        assert!(d6_locus_count(4, &mut t).is_err());
    }
}
