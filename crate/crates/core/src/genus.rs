//! Adjoint and reciprocal forms, the invariants `I1`, `I2`, assigned genus
//! characters, and the reciprocal-form test for binary sub-representations.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, TernaryForm, Vector3};
use crate::representations::{representations, vectors_in_range};

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// A genus character, evaluated on integers prime to its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Character {
    /// `x -> (-1)^((x-1)/2)`.
    Minus4,
    /// `x -> (-1)^((x^2-1)/8)`.
    Eight,
    /// Legendre symbol `(x/l)` for an odd prime `l`.
    Odd(i64),
}

impl Character {
    /// The prime whose multiples are excluded from the domain.
    pub fn prime(&self) -> i64 {
        match self {
            Character::Minus4 | Character::Eight => 2,
            Character::Odd(l) => *l,
        }
    }

    pub fn eval(&self, x: i64) -> Result<i32> {
        if x % self.prime() == 0 {
            return Err(Error::NotCoprime { value: x, modulus: self.prime() });
        }
        Ok(match self {
            Character::Minus4 => {
                if x.rem_euclid(4) == 1 {
                    1
                } else {
                    -1
                }
            }
            Character::Eight => {
                if matches!(x.rem_euclid(8), 1 | 7) {
                    1
                } else {
                    -1
                }
            }
            Character::Odd(l) => kronecker(x, *l),
        })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Minus4 => write!(f, "chi_-4"),
            Character::Eight => write!(f, "chi_8"),
            Character::Odd(l) => write!(f, "chi_{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusData {
    /// Twice the Gram matrix.
    pub coefficient_matrix: [[i64; 3]; 3],
    /// The form whose coefficient matrix is `-2 adj(A(f))`.
    pub adjoint: TernaryForm,
    pub abs_i1: i64,
    pub i2: i64,
    /// `-adjoint / |I1|`, positive definite.
    pub reciprocal: TernaryForm,
    pub characters: Vec<Character>,
}

/// Cofactor matrix of the coefficient matrix, turned into the adjoint form.
pub fn adjoint_form(q: &TernaryForm) -> Result<TernaryForm> {
    let m = q.coefficient_matrix();
    let cof = |i0: usize, i1: usize, j0: usize, j1: usize| m[i0][j0] * m[i1][j1] - m[i0][j1] * m[i1][j0];
    let c00 = cof(1, 2, 1, 2);
    let c11 = cof(0, 2, 0, 2);
    let c22 = cof(0, 1, 0, 1);
    let c01 = -cof(1, 2, 0, 2);
    let c02 = cof(1, 2, 0, 1);
    let c12 = -cof(0, 2, 0, 1);
    let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("adjoint"));
    Ok(TernaryForm::new(
        conv(-c00)?,
        conv(-c11)?,
        conv(-c22)?,
        conv(-2 * c12)?,
        conv(-2 * c02)?,
        conv(-2 * c01)?,
    ))
}

/// `|I1|`, `I2` and the reciprocal form, for any positive Dickson-sense form.
pub fn adjoint_invariants(q: &TernaryForm) -> Result<(TernaryForm, i64, i64, TernaryForm)> {
    q.ensure_positive_definite()?;
    q.ensure_dickson()?;
    let adjoint = adjoint_form(q)?;
    let abs_i1 = adjoint.content();
    let sixteen_disc = (q.discriminant()? as i128) * 16;
    let i1_sq = (abs_i1 as i128) * (abs_i1 as i128);
    if sixteen_disc % i1_sq != 0 {
        return Err(Error::Internal(format!("I1^2 does not divide 16 disc for {q}")));
    }
    let i2 = i64::try_from(sixteen_disc / i1_sq).map_err(|_| Error::Overflow("I2"))?;
    let reciprocal = adjoint.divide(-abs_i1)?;
    Ok((adjoint, abs_i1, i2, reciprocal))
}

fn characters_for(abs_i1: i64) -> Result<Vec<Character>> {
    let two_part = 1i64 << abs_i1.trailing_zeros();
    let mut chars = match two_part {
        16 => vec![Character::Minus4],
        32 => vec![Character::Minus4, Character::Eight],
        _ => return Err(Error::UnsupportedCharacterPattern(two_part)),
    };
    let mut rest = abs_i1 / two_part;
    let mut p = 3;
    while p * p <= rest {
        if rest % p == 0 {
            chars.push(Character::Odd(p));
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 2;
    }
    if rest > 1 {
        chars.push(Character::Odd(rest));
    }
    Ok(chars)
}

pub fn genus_data(q: &TernaryForm) -> Result<GenusData> {
    let (adjoint, abs_i1, i2, reciprocal) = adjoint_invariants(q)?;
    if q.content() != 1 {
        return Err(Error::Imprimitive(q.to_string()));
    }
    let characters = characters_for(abs_i1)?;
    let coefficient_matrix = q.coefficient_matrix().map(|r| r.map(|x| x as i64));
    Ok(GenusData { coefficient_matrix, adjoint, abs_i1, i2, reciprocal, characters })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterValue {
    pub character: Character,
    /// Smallest value of the form prime to the character's modulus, if found.
    pub argument: Option<i64>,
    pub value: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusConditions {
    pub chi_condition: Verdict,
    pub character_values: Vec<CharacterValue>,
    pub i2_condition: Verdict,
    /// A value `m` of the reciprocal form with `gcd(m, 2 I2) = 1` and `(I2/m) = 1`.
    pub i2_witness: Option<i64>,
    pub search_limit: i64,
}

/// Values of `q` up to `limit`, in increasing bounds, until `pick` accepts one.
fn first_value(q: &TernaryForm, limit: i64, pick: impl Fn(i64) -> bool) -> Result<Option<i64>> {
    let mut lo = 1;
    let mut hi = 32.min(limit);
    loop {
        let mut vals: Vec<i64> = vectors_in_range(q, lo, hi)?.into_iter().map(|p| p.1).collect();
        vals.sort_unstable();
        if let Some(v) = vals.into_iter().find(|&v| pick(v)) {
            return Ok(Some(v));
        }
        if hi >= limit {
            return Ok(None);
        }
        lo = hi + 1;
        hi = (hi * 4).min(limit);
    }
}

pub fn default_search_limit(i2: i64) -> i64 {
    10i64.saturating_mul(i2.saturating_mul(i2)).max(100)
}

/// The character condition (every assigned character is 1 on the form) and
/// the `I2` condition (`(I2/m) = 1` for a value `m` of the reciprocal form
/// prime to `2 I2`).
pub fn genus_conditions(q: &TernaryForm, search_limit: Option<i64>) -> Result<GenusConditions> {
    let g = genus_data(q)?;
    let limit = search_limit.unwrap_or_else(|| default_search_limit(g.i2));
    let mut character_values = vec![];
    for ch in &g.characters {
        let p = ch.prime();
        let argument = first_value(q, limit, |v| v % p != 0)?;
        let value = argument.map(|x| ch.eval(x)).transpose()?;
        character_values.push(CharacterValue { character: *ch, argument, value });
    }
    let chi_condition = if character_values.iter().any(|c| c.value == Some(-1)) {
        Verdict::No
    } else if character_values.iter().all(|c| c.value == Some(1)) {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    let i2 = g.i2;
    let i2_witness = first_value(&g.reciprocal, limit, |m| m.gcd(&(2 * i2)) == 1 && kronecker(i2, m) == 1)?;
    let i2_condition = if i2_witness.is_some() { Verdict::Yes } else { Verdict::Unknown };
    Ok(GenusConditions { chi_condition, character_values, i2_condition, i2_witness, search_limit: limit })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocalObstruction {
    pub reciprocal: TernaryForm,
    pub abs_i1: i64,
    pub target: i64,
    /// Whether the reciprocal form primitively represents the target.
    pub represented: bool,
    pub witness: Option<Vector3>,
}

/// Tests whether `f` can primitively represent the binary form `q` by asking
/// whether the reciprocal of `f` primitively represents `-disc(q) / |I1(f)|`.
/// A negative answer certifies that `f` does not primitively represent `q`.
pub fn reciprocal_obstruction(f: &TernaryForm, q: &BinaryForm) -> Result<ReciprocalObstruction> {
    q.ensure_positive_definite()?;
    if f.content() != 1 {
        return Err(Error::Imprimitive(f.to_string()));
    }
    let (_, abs_i1, _, reciprocal) = adjoint_invariants(f)?;
    let neg_disc = -q.discriminant()?;
    if neg_disc % abs_i1 != 0 {
        return Err(Error::Precondition(format!("|I1({f})| = {abs_i1} does not divide disc({q})")));
    }
    let target = neg_disc / abs_i1;
    let witness = representations(&reciprocal, target, true)?.vectors.first().copied();
    Ok(ReciprocalObstruction { reciprocal, abs_i1, target, represented: witness.is_some(), witness })
}

/// `x^2 + 4 q(y, z)`.
pub fn lift_binary(q: &BinaryForm) -> Result<TernaryForm> {
    let m = |x: i64| x.checked_mul(4).ok_or(Error::Overflow("lift_binary"));
    Ok(TernaryForm::new(1, m(q.a)?, m(q.b)?, m(q.t)?, 0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::q_ic;

    fn legendre_brute(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            0
        } else if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_agrees_with_squares() {
        for p in [3i64, 5, 7, 11, 13, 23, 29] {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), legendre_brute(a, p), "({a}/{p})");
            }
        }
        // multiplicativity in the bottom argument
        for a in [-15i64, -11, -23, 5, 8] {
            for m in [15i64, 21, 35, 33] {
                let f: i32 = [3i64, 5, 7, 11].iter().filter(|p| m % *p == 0).map(|p| kronecker(a, *p)).product();
                assert_eq!(kronecker(a, m), f);
            }
        }
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
    }

    #[test]
    fn characters_match_definitions() {
        for x in (1..200).step_by(2) {
            assert_eq!(Character::Minus4.eval(x).unwrap(), kronecker(-4, x));
            assert_eq!(Character::Eight.eval(x).unwrap(), kronecker(8, x));
        }
        assert_eq!(Character::Odd(3).eval(4).unwrap(), 1);
        assert!(Character::Odd(3).eval(9).is_err());
    }

    #[test]
    fn reciprocal_families() {
        for c in [5i64, 9, 13, 17, 21] {
            let g = genus_data(&q_ic(1, c)).unwrap();
            assert_eq!(g.abs_i1, 16);
            assert_eq!(g.i2, 4 - 3 * c);
            assert_eq!(g.reciprocal, TernaryForm::new(c - 1, c - 1, 3, -2, -2, 2 - c));
            let g = genus_data(&q_ic(6, c)).unwrap();
            assert_eq!(g.reciprocal, TernaryForm::new(c, c - 1, 4, 0, 4, 0));
            assert_eq!(g.i2, 4 * (1 - c));
            let g = genus_data(&TernaryForm::diagonal(4, 4, c)).unwrap();
            assert_eq!(g.reciprocal, TernaryForm::new(c, c, 4, 0, 0, 0));
        }
        assert_eq!(genus_data(&q_ic(6, 9)).unwrap().reciprocal, TernaryForm::new(9, 8, 4, 0, 4, 0));
        let g = genus_data(&q_ic(2, 9)).unwrap();
        assert_eq!(g.abs_i1, 48);
        assert_eq!(g.characters, vec![Character::Minus4, Character::Odd(3)]);
        let g = genus_data(&q_ic(3, 17)).unwrap();
        assert_eq!(g.abs_i1, 32);
        assert_eq!(g.characters, vec![Character::Minus4, Character::Eight]);
        assert_eq!(g.reciprocal.discriminant().unwrap().abs() * 16, g.abs_i1 * g.i2 * g.i2);
    }

    #[test]
    fn conditions() {
        let c = genus_conditions(&q_ic(2, 5), None).unwrap();
        assert_eq!(c.chi_condition, Verdict::Yes);
        assert_eq!(c.i2_condition, Verdict::Yes);
        let c = genus_conditions(&q_ic(3, 17), None).unwrap();
        assert_eq!((c.chi_condition, c.i2_condition), (Verdict::Yes, Verdict::Yes));
        assert!(matches!(
            genus_data(&TernaryForm::new(9, 16, 16, -16, 0, 0)),
            Err(Error::UnsupportedCharacterPattern(64))
        ));
        assert!(matches!(genus_data(&q_ic(1, 8)), Err(Error::Imprimitive(_))));
    }

    #[test]
    fn lifts() {
        let f = lift_binary(&BinaryForm::new(1, 1, 2)).unwrap();
        assert_eq!(f, TernaryForm::new(1, 4, 8, 4, 0, 0));
        let o = reciprocal_obstruction(&f, &BinaryForm::new(9, 6, 13)).unwrap();
        assert_eq!(o.reciprocal, TernaryForm::new(7, 2, 1, -1, 0, 0));
        assert_eq!(o.target, 27);
        assert!(!o.represented);
    }
}
