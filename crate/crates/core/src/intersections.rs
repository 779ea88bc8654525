//! Humbert scheme intersections at the level of quadratic forms. A scheme
//! `H(q)` is represented by its defining form; an intersection is the list of
//! forms whose schemes make it up, each with the representations justifying
//! membership.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{q_set, BinaryForm, FormFamily, TernaryForm, Vector2, Vector3};
use crate::genus::{lift_binary, reciprocal_obstruction};
use crate::representations::{
    binary_representations, binary_vectors_in_range, is_primitive_vector, representations, represents_binary,
};

/// The two binary forms whose Humbert schemes carry the `D6` and `D4` loci.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HumbertBase {
    /// `[4,4,4]`
    F444,
    /// `[4,0,4]`
    F404,
}

impl HumbertBase {
    pub fn form(&self) -> BinaryForm {
        match self {
            HumbertBase::F444 => BinaryForm::new(4, 4, 4),
            HumbertBase::F404 => BinaryForm::new(4, 0, 4),
        }
    }
}

impl fmt::Display for HumbertBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form())
    }
}

impl FromStr for HumbertBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "444" | "F444" | "[4,4,4]" => Ok(HumbertBase::F444),
            "404" | "F404" | "[4,0,4]" => Ok(HumbertBase::F404),
            other => Err(Error::Parse(format!("unknown base form {other:?}; expected 444 or 404"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryMember {
    pub family: FormFamily,
    pub label: String,
    pub form: TernaryForm,
    /// Basis `(u, v)` of a primitive sublattice on which the form restricts to the base.
    pub base_witness: (Vector3, Vector3),
    /// Primitive vector taking the value `c`.
    pub target_witness: Vector3,
    pub disc: i64,
    /// `|disc(member)| <= c |disc(base)|`; `None` when the base represents `c`
    /// imprimitively, where the bound has no hypothesis to stand on.
    pub disc_bound_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionResult {
    pub base: BinaryForm,
    pub target: i64,
    pub members: Vec<TernaryMember>,
}

impl IntersectionResult {
    pub fn forms(&self) -> Vec<TernaryForm> {
        self.members.iter().map(|m| m.form).collect()
    }
}

fn candidates(base: HumbertBase, c: i64) -> Result<Vec<FormFamily>> {
    let mut out = vec![];
    for cp in 4..=c + 1 {
        if cp.rem_euclid(4) > 1 {
            continue;
        }
        match base {
            HumbertBase::F444 => out.extend([1, 2].map(|i| FormFamily::Q { i, c: cp })),
            HumbertBase::F404 => out.extend(q_set(cp)?),
        }
    }
    Ok(out)
}

/// The forms `q'` of the `D6` (for `[4,4,4]`) or `D4` (for `[4,0,4]`) families
/// with `c' <= c + 1` that primitively represent `c`. Membership is decided
/// form by form.
pub fn intersect_with_humbert(base: HumbertBase, c: i64) -> Result<IntersectionResult> {
    let bf = base.form();
    if c <= 1 || c.rem_euclid(4) > 1 {
        return Err(Error::Precondition(format!("need c > 1 with c = 0,1 mod 4, got {c}")));
    }
    let base_reps = binary_representations(&bf, c, false)?;
    if base_reps.primitive_count() > 0 {
        return Err(Error::Precondition(format!("{bf} primitively represents {c}")));
    }
    let base_disc = bf.discriminant()?.abs();
    let mut members = vec![];
    for family in candidates(base, c)? {
        let form = family.instantiate()?;
        let Some(&target_witness) = representations(&form, c, true)?.vectors.first() else {
            continue;
        };
        let base_witness = represents_binary(&form, &bf)?
            .ok_or_else(|| Error::Internal(format!("{} does not represent {bf}", family.label())))?;
        let disc = form.discriminant()?;
        let disc_bound_holds = (base_reps.count() == 0).then(|| disc.abs() <= c * base_disc);
        members.push(TernaryMember {
            label: family.label(),
            family,
            form,
            base_witness,
            target_witness,
            disc,
            disc_bound_holds,
        });
    }
    Ok(IntersectionResult { base: bf, target: c, members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiscBound {
    pub disc_abs: i64,
    pub bound: i64,
    pub holds: bool,
}

/// `|disc(f)| <= n |disc(q)|` for `f` primitively representing `q` and
/// representing `n`, where `q` does not represent `n`.
pub fn disc_bound_check(f: &TernaryForm, q: &BinaryForm, n: i64) -> Result<DiscBound> {
    if binary_representations(q, n, false)?.count() > 0 {
        return Err(Error::Precondition(format!("{q} represents {n}")));
    }
    if represents_binary(f, q)?.is_none() {
        return Err(Error::Precondition(format!("{f} does not primitively represent {q}")));
    }
    if representations(f, n, false)?.count() == 0 {
        return Err(Error::Precondition(format!("{f} does not represent {n}")));
    }
    let disc_abs = f.discriminant()?.abs();
    let bound = n * q.discriminant()?.abs();
    Ok(DiscBound { disc_abs, bound, holds: disc_abs <= bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryMember {
    pub form: BinaryForm,
    pub n_witness: Vector2,
    pub m_witness: Vector2,
    /// Smallest primitively represented square and its vector.
    pub square: (i64, Vector2),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairIntersection {
    pub n: i64,
    pub m: i64,
    pub square_bound: i64,
    pub members: Vec<BinaryMember>,
    /// Forms passing every filter except that no primitive square was found
    /// below `square_bound`.
    pub filtered_unknown: Vec<BinaryForm>,
}

impl PairIntersection {
    pub fn forms(&self) -> Vec<BinaryForm> {
        self.members.iter().map(|m| m.form).collect()
    }
}

pub fn binary_primitive_square(q: &BinaryForm, limit: i64) -> Result<Option<(i64, Vector2)>> {
    let best = binary_vectors_in_range(q, 1, limit)?
        .into_iter()
        .filter(|(v, val)| {
            let k = num_integer::Roots::sqrt(val);
            k * k == *val && is_primitive_vector(v)
        })
        .min_by_key(|(v, val)| (*val, *v));
    Ok(best.map(|(v, val)| (val, v)))
}

fn first_primitive(q: &BinaryForm, n: i64) -> Result<Option<Vector2>> {
    Ok(binary_representations(q, n, true)?.vectors.first().copied())
}

/// Reduced binary forms (up to GL2(Z)) primitively representing both `n` and
/// `m`, all of whose values are 0 or 1 mod 4, and which primitively represent
/// a square below `square_bound` (default `4nm`).
pub fn humbert_pair_intersection(n: i64, m: i64, square_bound: Option<i64>) -> Result<PairIntersection> {
    if n == m || n < 1 || m < 1 {
        return Err(Error::Precondition(format!("need distinct positive n, m, got {n}, {m}")));
    }
    let (lo, hi) = (n.min(m), n.max(m));
    let square_bound = square_bound.unwrap_or(4 * n * m);
    let mut members = vec![];
    let mut filtered_unknown = vec![];
    for a in 1..=lo {
        for b in a..=hi {
            for t in 0..=a {
                let f = BinaryForm::new(a, t, b);
                if f.mod4_residues().iter().any(|&x| x > 1) {
                    continue;
                }
                let (Some(n_witness), Some(m_witness)) = (first_primitive(&f, n)?, first_primitive(&f, m)?) else {
                    continue;
                };
                match binary_primitive_square(&f, square_bound)? {
                    Some(square) => members.push(BinaryMember { form: f, n_witness, m_witness, square }),
                    None => filtered_unknown.push(f),
                }
            }
        }
    }
    Ok(PairIntersection { n, m, square_bound, members, filtered_unknown })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub case: String,
    pub form: TernaryForm,
    pub reciprocal: Option<TernaryForm>,
    pub target: Option<i64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmptyIntersectionCertificate {
    pub q1: BinaryForm,
    pub q2: BinaryForm,
    pub checks: Vec<CertificateCheck>,
}

fn require(ok: bool, case: &str, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::CertificateFailed(format!("{case}: {}", what())))
    }
}

/// Replays the finite checks showing no ternary form primitively represents
/// both `[4,0,4]` and `[9,6,13]`. Any failing step aborts with its case named.
pub fn empty_intersection_certificate() -> Result<EmptyIntersectionCertificate> {
    let q1 = BinaryForm::new(4, 0, 4);
    let q2 = BinaryForm::new(9, 6, 13);
    let mut checks = vec![];

    // Forms not representing 1 lie in Q_5, since q2 represents 5.
    let case = "no 1: Q_5 members";
    let q5 = intersect_with_humbert(HumbertBase::F404, 5)?.forms();
    let expected = [TernaryForm::diagonal(4, 4, 5), TernaryForm::new(4, 4, 5, 0, -4, 0)];
    require(q5 == expected, case, || format!("intersection with H_5 is {q5:?}"))?;
    for f in expected {
        let case = format!("no 1: {f} against {q2}");
        let ob = reciprocal_obstruction(&f, &q2)?;
        require(!ob.reciprocal.residues_mod(4).contains(&3), &case, || format!("{} takes 3 mod 4", ob.reciprocal))?;
        require(ob.target == 27 && !ob.represented, &case, || format!("{ob:?}"))?;
        require(represents_binary(&f, &q2)?.is_none(), &case, || "direct search found a representation".into())?;
        checks.push(CertificateCheck {
            case,
            form: f,
            reciprocal: Some(ob.reciprocal),
            target: Some(ob.target),
            detail: "reciprocal never takes 3 mod 4, so misses 27".into(),
        });
    }

    // Forms representing 1 are x^2 + 4q with q reduced, q -> 1 and q -> 2.
    let case = "represents 1: reduced forms through 1 and 2";
    let mut through_one = vec![];
    for b in 1..=2 {
        for t in 0..=1 {
            through_one.push(BinaryForm::new(1, t, b));
        }
    }
    let mut kept = vec![];
    for q in &through_one {
        if binary_representations(q, 2, false)?.count() > 0 {
            kept.push(*q);
        }
    }
    let expected_kept = [BinaryForm::new(1, 0, 1), BinaryForm::new(1, 0, 2), BinaryForm::new(1, 1, 2)];
    require(kept == expected_kept, case, || format!("kept {kept:?}"))?;

    for q in expected_kept {
        let f = lift_binary(&q)?;
        let case = format!("lift of {q}");
        let (against, target_note) = if q == BinaryForm::new(1, 0, 2) { (q1, "4") } else { (q2, "27") };
        let ob = reciprocal_obstruction(&f, &against)?;
        require(!ob.represented, &case, || format!("reciprocal represents {}", ob.target))?;
        require(represents_binary(&f, &against)?.is_none(), &case, || "direct search found a representation".into())?;
        let detail = match (q.t, q.b) {
            (0, 1) => {
                require(!ob.reciprocal.residues_mod(4).contains(&3), &case, || "reciprocal takes 3 mod 4".into())?;
                "reciprocal never takes 3 mod 4".to_string()
            }
            (0, _) => format!("reciprocal does not primitively represent {target_note}"),
            _ => {
                let squares: std::collections::BTreeSet<i64> = (0..7).map(|x| x * x % 7).collect();
                require(ob.reciprocal.residues_mod(7).is_subset(&squares), &case, || "reciprocal hits a non-square mod 7".into())?;
                require(!squares.contains(&(ob.target % 7)), &case, || "target is a square mod 7".into())?;
                "reciprocal takes only squares mod 7; 27 = 6 mod 7 is not one".to_string()
            }
        };
        checks.push(CertificateCheck { case, form: f, reciprocal: Some(ob.reciprocal), target: Some(ob.target), detail });
    }
    Ok(EmptyIntersectionCertificate { q1, q2, checks })
}
