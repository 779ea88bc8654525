//! Automorphism groups of positive ternary forms and the closed-form
//! predictions of their proper order for reduced forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{TernaryForm, UnimodularMap};
use crate::reduction::is_eisenstein_reduced;
use crate::representations::representations;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphGroup {
    /// Sorted by rows.
    pub elements: Vec<UnimodularMap<3>>,
    pub proper_count: usize,
}

impl AutomorphGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn proper(&self) -> impl Iterator<Item = &UnimodularMap<3>> {
        self.elements.iter().filter(|u| u.determinant() == 1)
    }
}

/// All `U` in GL3(Z) with `q o U = q`. The columns of `U` are drawn from the
/// vectors representing the diagonal coefficients, matched on polar values.
pub fn automorphism_group(q: &TernaryForm) -> Result<AutomorphGroup> {
    q.ensure_positive_definite()?;
    let ra = representations(q, q.a, false)?.vectors;
    let rb = if q.b == q.a { ra.clone() } else { representations(q, q.b, false)?.vectors };
    let rc = if q.c == q.b { rb.clone() } else { representations(q, q.c, false)?.vectors };
    let (r, s, t) = (q.r as i128, q.s as i128, q.t as i128);
    let mut elements = vec![];
    for u in &ra {
        for v in &rb {
            if q.polar(u, v) != t {
                continue;
            }
            for w in &rc {
                if q.polar(u, w) != s || q.polar(v, w) != r {
                    continue;
                }
                if let Ok(m) = UnimodularMap::<3>::from_columns([*u, *v, *w]) {
                    elements.push(m);
                }
            }
        }
    }
    elements.sort_unstable();
    let proper_count = elements.iter().filter(|m| m.determinant() == 1).count();
    Ok(AutomorphGroup { elements, proper_count })
}

/// `|Aut+(q)|`.
pub fn proper_order(q: &TernaryForm) -> Result<usize> {
    Ok(automorphism_group(q)?.proper_count)
}

/// A closed-form shape of a reduced form together with the proper order it forces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternMatch {
    pub order: usize,
    pub pattern: &'static str,
}

fn hit(order: usize, pattern: &'static str) -> Option<PatternMatch> {
    Some(PatternMatch { order, pattern })
}

/// Shapes forcing `3 | |Aut+|`. Cross coefficients are halved here.
fn threefold_pattern(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Option<PatternMatch> {
    let equal_diag = a == b && b == c;
    let equal_cross = r == s && s == t;
    if equal_diag && equal_cross && (a == 2 * r || a == -3 * r) {
        return hit(24, "a=b=c=kr=ks=kt, k in {2,-3}");
    }
    if equal_diag && r == 0 && s == 0 && t == 0 {
        return hit(24, "a=b=c, r=s=t=0");
    }
    if a == b && a == -2 * t && r == 0 && s == 0 {
        return hit(12, "a=b=-2t, r=s=0");
    }
    if a != b && b == c && b == -2 * r && s == 0 && t == 0 {
        return hit(12, "a!=b, b=c=-2r, s=t=0");
    }
    if equal_diag && equal_cross && r != 0 && (r < 0 || a != 2 * r) && (r > 0 || (a != -3 * s && a != -2 * r)) {
        return hit(6, "a=b=c, r=s=t!=0");
    }
    if a == b && b == 2 * r && r == s && s == t && b != c {
        return hit(6, "a=b=2r=2s=2t, b!=c");
    }
    if b == c && s == t && 2 * r + s == -b && a == -3 * s && a != b {
        return hit(6, "b=c, s=t, 2r+s=-b, a=-3s, a!=b");
    }
    None
}

/// Shapes with leading coefficient 4 and proper order prime to 3. The
/// arguments are the written coefficients.
pub(crate) fn leading_four_pattern(q: &TernaryForm) -> Option<PatternMatch> {
    let [a, b, c, rr, ss, tt] = q.coeffs();
    if a != 4 {
        return None;
    }
    let r = rr / 2;
    match (ss, tt) {
        (-4, 0) if b == 4 && rr == -4 && c > 4 => hit(8, "[4,4,c,-4,-4,0], c>4"),
        (0, 0) if rr == 0 && b == 4 && c > 4 => hit(8, "[4,4,c,0,0,0], c>4"),
        (0, 0) if rr == 0 && b == c && b > 4 => hit(8, "[4,b,b,0,0,0], b>4"),
        (4, 4) if rr == 2 && b == c => hit(8, "[4,b,b,2,4,4]"),
        (0, -4) if rr == 0 && b > 4 => hit(4, "[4,b,c,0,0,-4], b>4"),
        (4, 4) if b == c && b > 4 && r > 1 => hit(4, "[4,b,b,2r,4,4], b>4, r>1"),
        (-4, 0) if rr == 0 && b != c => hit(4, "[4,b,c,0,-4,0], b!=c"),
        (-4, 0) if rr == -b && b > 4 && b != c => hit(4, "[4,b,c,-b,-4,0], b>4, b!=c"),
        (0, 0) if rr == 0 && b > 4 && b != c => hit(4, "[4,b,c,0,0,0], 4<b!=c"),
        (0, 0) if rr == -b && b != c => hit(4, "[4,b,c,-b,0,0], b!=c"),
        (0, 0) if b == c && b > 4 && rr != 0 && b != -rr => hit(4, "[4,b,b,2r,0,0], 4<b!=-2r!=0"),
        (4, 4) if rr == 2 && b > 4 && b != c => hit(4, "[4,b,c,2,4,4], 4<b!=c"),
        (4, 4) if b != c && r > 1 => hit(2, "[4,b,c,2r,4,4], b!=c, r>1"),
        (0, -4) if b > 4 && b != -rr && r < 0 => hit(2, "[4,b,c,2r,0,-4], 4<b!=-2r, r<0"),
        (-4, 0) if b != c && b != -rr && r < 0 => hit(2, "[4,b,c,2r,-4,0], b!=c, b!=-2r, r<0"),
        _ => None,
    }
}

/// The closed-form shape of a reduced form, if any. Threefold shapes apply to
/// every reduced form and take precedence: the leading-4 shapes describe forms
/// whose proper order is prime to 3, and `[4,4,c,4,4,4]` fits both lists.
pub fn matching_pattern(q: &TernaryForm) -> Result<Option<PatternMatch>> {
    if !is_eisenstein_reduced(q) {
        return Err(Error::NotReduced(q.to_string()));
    }
    Ok(threefold_pattern(q.a, q.b, q.c, q.r / 2, q.s / 2, q.t / 2).or_else(|| leading_four_pattern(q)))
}

/// `|Aut+(q)|` read off from the shape of the reduced form `q`, when a shape applies.
pub fn predicted_proper_order(q: &TernaryForm) -> Result<Option<usize>> {
    Ok(matching_pattern(q)?.map(|m| m.order))
}
