//! Deciding whether a ternary form is a refined Humbert invariant, and reading
//! off the automorphism group of the corresponding genus 2 curve.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::automorphs::{leading_four_pattern, proper_order};
use crate::error::{Error, Result};
use crate::forms::{q_ic, BinaryForm, Form, TernaryForm, Vector3};
use crate::genus::{genus_conditions, Verdict};
use crate::reduction::{binary_equivalent, reduce_ternary};
use crate::representations::{a_invariant, primitive_square, r4, represents, represents_binary};

pub const DEFAULT_SEARCH_LIMIT: i64 = 4096;

/// How the verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatusPath {
    /// Some value is 2 or 3 mod 4.
    ValuesNotZeroOneMod4 { residues: Vec<i64> },
    ContentNotOneOrFour { content: i64 },
    /// Half the form is improperly primitive and the reduced form starts with 4.
    ImproperlyPrimitiveHalf { reduced: TernaryForm },
    HalfNotImproperlyPrimitive,
    LeadingCoefficientNotFour { reduced: TernaryForm },
    /// Reduces to `[4,c,c,-c,0,0]` with `c = 4 mod 8`. The half form is
    /// improperly primitive, yet the published classification excludes this
    /// family, so no verdict is given.
    ContestedImproperFamily { reduced: TernaryForm },
    PrimitiveSquare { square: i64, vector: Vector3 },
    GenusConditions { i2_witness: i64 },
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HumbertStatus {
    pub verdict: Verdict,
    pub path: StatusPath,
    pub represents_one: bool,
    /// A refined Humbert invariant that does not represent 1.
    pub jacobian: bool,
}

/// Every diagonal coefficient is 0 mod 4 and some cross coefficient is 4 mod 8:
/// for a form of content 4 this says `q/2` is improperly primitive.
pub fn half_is_improperly_primitive(q: &TernaryForm) -> bool {
    q.content() == 4
        && [q.a, q.b, q.c].iter().all(|x| x % 4 == 0)
        && [q.r, q.s, q.t].iter().any(|x| x.rem_euclid(8) == 4)
}

pub fn refined_humbert_status(q: &TernaryForm, search_limit: Option<i64>) -> Result<HumbertStatus> {
    q.ensure_positive_definite()?;
    let limit = search_limit.unwrap_or(DEFAULT_SEARCH_LIMIT);
    let represents_one = represents(q, 1)?;
    let done = |verdict: Verdict, path: StatusPath| {
        Ok(HumbertStatus { verdict, path, represents_one, jacobian: verdict == Verdict::Yes && !represents_one })
    };
    let residues = q.mod4_residues();
    if residues.iter().any(|&x| x > 1) {
        return done(Verdict::No, StatusPath::ValuesNotZeroOneMod4 { residues: residues.into_iter().collect() });
    }
    let content = q.content();
    if content != 1 && content != 4 {
        return done(Verdict::No, StatusPath::ContentNotOneOrFour { content });
    }
    if content == 4 {
        if !half_is_improperly_primitive(q) {
            return done(Verdict::No, StatusPath::HalfNotImproperlyPrimitive);
        }
        let reduced = reduce_ternary(q)?.reduced_form;
        if reduced.a != 4 {
            return done(Verdict::No, StatusPath::LeadingCoefficientNotFour { reduced });
        }
        if reduced.b == reduced.c && reduced.r == -reduced.c && reduced.s == 0 && reduced.t == 0 {
            return done(Verdict::Unknown, StatusPath::ContestedImproperFamily { reduced });
        }
        return done(Verdict::Yes, StatusPath::ImproperlyPrimitiveHalf { reduced });
    }
    let disc = q.discriminant()?;
    if let Some((square, vector)) = primitive_square(q, 2 * disc, limit)? {
        return done(Verdict::Yes, StatusPath::PrimitiveSquare { square, vector });
    }
    match genus_conditions(q, Some(limit)) {
        Ok(g) if g.chi_condition == Verdict::Yes && g.i2_condition == Verdict::Yes => done(
            Verdict::Yes,
            StatusPath::GenusConditions { i2_witness: g.i2_witness.expect("witness accompanies YES") },
        ),
        Ok(g) => done(
            Verdict::Unknown,
            StatusPath::Undecided {
                reason: format!("character condition {}, I2 condition {}", g.chi_condition, g.i2_condition),
            },
        ),
        Err(e @ (Error::UnsupportedCharacterPattern(_) | Error::OddCrossCoefficient(_))) => {
            done(Verdict::Unknown, StatusPath::Undecided { reason: e.to_string() })
        }
        Err(e) => Err(e),
    }
}

/// Automorphism group of a genus 2 curve, as determined by `r_4` of its form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CurveGroup {
    C2,
    C10,
    C2xC2,
    D4,
    D6,
    #[serde(rename = "C3semiD4")]
    C3SemiD4,
    #[serde(rename = "GL2_3")]
    Gl23,
}

impl CurveGroup {
    pub const ALL: [CurveGroup; 7] = [
        CurveGroup::C2,
        CurveGroup::C10,
        CurveGroup::C2xC2,
        CurveGroup::D4,
        CurveGroup::D6,
        CurveGroup::C3SemiD4,
        CurveGroup::Gl23,
    ];

    /// `(a, r_4)` for the group.
    pub fn invariants(&self) -> (i64, usize) {
        match self {
            CurveGroup::C2 | CurveGroup::C10 => (1, 0),
            CurveGroup::C2xC2 => (2, 2),
            CurveGroup::D4 => (4, 4),
            CurveGroup::D6 => (6, 6),
            CurveGroup::C3SemiD4 => (12, 8),
            CurveGroup::Gl23 => (24, 12),
        }
    }

    /// The group for a ternary form with the given `r_4`; `C10` never occurs.
    pub fn from_r4(r4: usize) -> Option<CurveGroup> {
        match r4 {
            0 => Some(CurveGroup::C2),
            2 => Some(CurveGroup::C2xC2),
            4 => Some(CurveGroup::D4),
            6 => Some(CurveGroup::D6),
            8 => Some(CurveGroup::C3SemiD4),
            12 => Some(CurveGroup::Gl23),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveGroup::C2 => "C2",
            CurveGroup::C10 => "C10",
            CurveGroup::C2xC2 => "C2xC2",
            CurveGroup::D4 => "D4",
            CurveGroup::D6 => "D6",
            CurveGroup::C3SemiD4 => "C3semiD4",
            CurveGroup::Gl23 => "GL2_3",
        }
    }
}

impl fmt::Display for CurveGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The explicit family lists a reduced form belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ListTag {
    /// `q_{1,4}`.
    Gl23Form,
    /// `q_{2,4}`.
    C3SemiD4Form,
    /// `q_{1,c}` or `q_{2,c}`, `c > 4`, `c = 0,1 mod 4`.
    D6Family,
    /// A member of `Q_c`, `c > 4`.
    D4Family,
    /// Content 4 forms with `r_4 = 2`: `q_{4,c}` or one of `q1..q7` with `b != 4`.
    C2xC2Imprimitive,
    /// Primitive candidates with `r_4 = 2`; a necessary condition only.
    C2xC2PrimitiveCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListMembership {
    pub reduced: Option<TernaryForm>,
    pub tag: Option<ListTag>,
    /// Equivalent to `q_{1,c}` or `q_{2,c}` with `c = 0,1 mod 4`, `c > 1`:
    /// exactly the forms primitively representing `[4,4,4]`.
    pub d6_list: bool,
    /// Equivalent to a member of some `Q_c`: exactly the forms primitively
    /// representing `[4,0,4]`.
    pub d4_list: bool,
}

fn is_q(q: &TernaryForm, i: u8) -> Option<i64> {
    let c = q.c;
    let min_c = if i <= 2 { 4 } else { 5 };
    (c >= min_c && (i != 5 || c % 2 == 0) && q_ic(i, c) == *q).then_some(c)
}

fn in_q_set(q: &TernaryForm) -> Option<i64> {
    let c = q.c;
    let ok = match c {
        4 => is_q(q, 1).is_some() || is_q(q, 2).is_some(),
        _ if c > 4 => crate::forms::q_set(c)
            .map(|set| set.iter().any(|f| f.instantiate().is_ok_and(|x| x == *q)))
            .unwrap_or(false),
        _ => false,
    };
    ok.then_some(c)
}

/// Index `j` of the shape `q_j` the reduced form has, if any.
fn qj_index(q: &TernaryForm) -> Option<u8> {
    let [a, b, c, rr, ss, tt] = q.coeffs();
    let r = rr / 2;
    if a != 4 || b > c || rr.abs() > b {
        return None;
    }
    match (ss, tt) {
        (0, -4) if rr == 0 && b > 4 => Some(1),
        (4, 4) if b == c && b > 4 && r > 1 => Some(2),
        (-4, 0) if rr == 0 && b != c => Some(3),
        (-4, 0) if rr == -b && b > 4 && b != c => Some(4),
        (4, 4) if b != c && r > 1 => Some(5),
        (0, -4) if b > 4 && b != -rr && r < 0 => Some(6),
        (-4, 0) if b != c && b != -rr && r < 0 => Some(7),
        _ => None,
    }
}

pub fn theorem_list_membership(q: &TernaryForm) -> Result<ListMembership> {
    q.ensure_positive_definite()?;
    if !q.is_dickson() {
        return Ok(ListMembership { reduced: None, tag: None, d6_list: false, d4_list: false });
    }
    let red = reduce_ternary(q)?.reduced_form;
    let content = red.content();
    let d6_c = is_q(&red, 1).or_else(|| is_q(&red, 2));
    let d6_list = d6_c.is_some_and(|c| c % 4 <= 1);
    let d4_c = in_q_set(&red);
    let tag = if red == q_ic(1, 4) {
        Some(ListTag::Gl23Form)
    } else if red == q_ic(2, 4) {
        Some(ListTag::C3SemiD4Form)
    } else if d6_list {
        Some(ListTag::D6Family)
    } else if d4_c.is_some() {
        Some(ListTag::D4Family)
    } else if content == 4
        && (is_q(&red, 4).is_some_and(|c| c % 4 == 0) || qj_index(&red).is_some_and(|j| red.b != 4 || j == 1 || j == 2 || j == 4))
    {
        Some(ListTag::C2xC2Imprimitive)
    } else if content == 1
        && ((red.coeffs()[3..] == [2, 4, 4] && red.a == 4 && red.b == red.c && red.b % 4 == 1)
            || leading_four_pattern(&red).is_some_and(|p| p.order <= 4 && red.b != 4))
    {
        Some(ListTag::C2xC2PrimitiveCandidate)
    } else {
        None
    };
    Ok(ListMembership { reduced: Some(red), tag, d6_list, d4_list: d4_c.is_some() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClassification {
    pub form: TernaryForm,
    pub reduced: TernaryForm,
    pub group: CurveGroup,
    pub r4: usize,
    pub a: i64,
    pub proper_aut_order: usize,
    #[serde(serialize_with = "ratio_as_json")]
    pub k: Ratio<i64>,
    pub lists: ListMembership,
}

fn ratio_as_json<S: Serializer>(k: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    if k.is_integer() {
        s.serialize_i64(k.to_integer())
    } else {
        s.serialize_str(&k.to_string())
    }
}

/// Group, `a`, `|Aut+|` and `k = |Aut+| / a` for a form already known to be
/// the refined Humbert invariant of a Jacobian.
pub fn classify_jacobian_form(q: &TernaryForm) -> Result<CurveClassification> {
    let reduced = reduce_ternary(q)?.reduced_form;
    let r4 = r4(&reduced)?;
    let group = CurveGroup::from_r4(r4)
        .ok_or_else(|| Error::Precondition(format!("r_4({q}) = {r4} matches no automorphism group")))?;
    let a = a_invariant(&reduced)?;
    let proper = proper_order(&reduced)?;
    Ok(CurveClassification {
        form: *q,
        reduced,
        group,
        r4,
        a,
        proper_aut_order: proper,
        k: Ratio::new(proper as i64, a),
        lists: theorem_list_membership(&reduced)?,
    })
}

/// Classification of a form after confirming it is the refined Humbert
/// invariant of a Jacobian.
pub fn curve_classification(q: &TernaryForm, search_limit: Option<i64>) -> Result<CurveClassification> {
    let status = refined_humbert_status(q, search_limit)?;
    if status.verdict != Verdict::Yes {
        return Err(Error::Precondition(format!("{q}: refined Humbert status is {}", status.verdict)));
    }
    if !status.jacobian {
        return Err(Error::NotJacobian(q.to_string()));
    }
    classify_jacobian_form(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupCriteria {
    /// Primitively represents `[4,4,4]`.
    pub contains_d6: bool,
    /// Primitively represents `[4,0,4]`.
    pub contains_d4: bool,
    pub d6_witness: Option<(Vector3, Vector3)>,
    pub d4_witness: Option<(Vector3, Vector3)>,
}

pub fn subgroup_criteria(q: &Form) -> Result<SubgroupCriteria> {
    let f444 = BinaryForm::new(4, 4, 4);
    let f404 = BinaryForm::new(4, 0, 4);
    match q {
        Form::Ternary(t) => {
            t.ensure_positive_definite()?;
            if represents(t, 1)? {
                return Err(Error::NotJacobian(t.to_string()));
            }
            let d6 = represents_binary(t, &f444)?;
            let d4 = represents_binary(t, &f404)?;
            Ok(SubgroupCriteria { contains_d6: d6.is_some(), contains_d4: d4.is_some(), d6_witness: d6, d4_witness: d4 })
        }
        Form::Binary(b) => {
            b.ensure_positive_definite()?;
            if crate::representations::binary_represents_primitively(b, 1)? {
                return Err(Error::NotJacobian(b.to_string()));
            }
            Ok(SubgroupCriteria {
                contains_d6: binary_equivalent(b, &f444)?,
                contains_d4: binary_equivalent(b, &f404)?,
                d6_witness: None,
                d4_witness: None,
            })
        }
    }
}
