//! Integral binary and ternary quadratic forms, unimodular maps and the named
//! parametric families.
//!
//! A ternary form `[a,b,c,r,s,t]` stands for `ax^2 + by^2 + cz^2 + ryz + sxz + txy`
//! with the cross coefficients stored exactly as written. A binary form
//! `[a,t,b]` stands for `ax^2 + txy + by^2`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector3 = [i64; 3];
pub type Vector2 = [i64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 6]", into = "[i64; 6]")]
pub struct TernaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct BinaryForm {
    pub a: i64,
    pub t: i64,
    pub b: i64,
}

impl From<[i64; 6]> for TernaryForm {
    fn from(c: [i64; 6]) -> Self {
        TernaryForm::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(q: TernaryForm) -> Self {
        q.coeffs()
    }
}

impl From<[i64; 3]> for BinaryForm {
    fn from(c: [i64; 3]) -> Self {
        BinaryForm::new(c[0], c[1], c[2])
    }
}

impl From<BinaryForm> for [i64; 3] {
    fn from(q: BinaryForm) -> Self {
        q.coeffs()
    }
}

fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v))
}

fn to_i64(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

impl TernaryForm {
    pub const fn new(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Self {
        TernaryForm { a, b, c, r, s, t }
    }

    pub fn coeffs(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.r, self.s, self.t]
    }

    pub fn diagonal(a: i64, b: i64, c: i64) -> Self {
        TernaryForm::new(a, b, c, 0, 0, 0)
    }

    /// Twice the Gram matrix: diagonal `2a,2b,2c`, off-diagonal the written
    /// cross coefficients.
    pub fn coefficient_matrix(&self) -> [[i128; 3]; 3] {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        [[2 * a, t, s], [t, 2 * b, r], [s, r, 2 * c]]
    }

    /// Bilinear form `q(u+v) - q(u) - q(v)`.
    pub fn polar(&self, u: &Vector3, v: &Vector3) -> i128 {
        let m = self.coefficient_matrix();
        let mut acc = 0i128;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] as i128 * m[i][j] * v[j] as i128;
            }
        }
        acc
    }

    /// Value at `v` without overflow checks. Callers keep `v` small.
    pub(crate) fn value(&self, v: &Vector3) -> i128 {
        let (x, y, z) = (v[0] as i128, v[1] as i128, v[2] as i128);
        self.a as i128 * x * x
            + self.b as i128 * y * y
            + self.c as i128 * z * z
            + self.r as i128 * y * z
            + self.s as i128 * x * z
            + self.t as i128 * x * y
    }

    pub fn evaluate(&self, v: &Vector3) -> Result<i64> {
        let c = self.coeffs();
        let (x, y, z) = (v[0] as i128, v[1] as i128, v[2] as i128);
        let monomials = [x * x, y * y, z * z, y * z, x * z, x * y];
        let mut acc: i128 = 0;
        for (coef, mono) in c.iter().zip(monomials) {
            let term = (*coef as i128)
                .checked_mul(mono)
                .ok_or(Error::Overflow("evaluate"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("evaluate"))?;
        }
        to_i64(acc, "evaluate")
    }

    /// `-det(M)/2` where `M` is the coefficient matrix.
    pub fn discriminant(&self) -> Result<i64> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        let d = || -> Option<i128> {
            let ar2 = a.checked_mul(r.checked_mul(r)?)?;
            let bs2 = b.checked_mul(s.checked_mul(s)?)?;
            let ct2 = c.checked_mul(t.checked_mul(t)?)?;
            let rst = r.checked_mul(s)?.checked_mul(t)?;
            let abc4 = a.checked_mul(b)?.checked_mul(c)?.checked_mul(4)?;
            ar2.checked_add(bs2)?
                .checked_add(ct2)?
                .checked_sub(rst)?
                .checked_sub(abc4)
        };
        to_i64(d().ok_or(Error::Overflow("discriminant"))?, "discriminant")
    }

    pub fn content(&self) -> i64 {
        gcd_all(&self.coeffs())
    }

    pub fn is_positive_definite(&self) -> bool {
        let m = self.coefficient_matrix();
        let minor2 = m[0][0].checked_mul(m[1][1]).zip(m[0][1].checked_mul(m[0][1]));
        let Some((p, q)) = minor2 else { return false };
        m[0][0] > 0 && p - q > 0 && det3(&m).is_some_and(|d| d > 0)
    }

    pub fn ensure_positive_definite(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite(self.to_string()))
        }
    }

    /// All written cross coefficients even.
    pub fn is_dickson(&self) -> bool {
        self.r % 2 == 0 && self.s % 2 == 0 && self.t % 2 == 0
    }

    pub fn ensure_dickson(&self) -> Result<()> {
        if self.is_dickson() {
            Ok(())
        } else {
            Err(Error::OddCrossCoefficient(self.to_string()))
        }
    }

    /// Residues `q(v) mod m` over all nonzero `v` in `(Z/m)^3`.
    pub fn residues_mod(&self, m: i64) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x == 0 && y == 0 && z == 0 {
                        continue;
                    }
                    out.insert(self.value(&[x, y, z]).rem_euclid(m as i128) as i64);
                }
            }
        }
        out
    }

    /// Residues mod 4 of the values at nonzero integer vectors. Every such
    /// residue occurs at some vector with entries in `0..4`.
    pub fn mod4_residues(&self) -> BTreeSet<i64> {
        self.residues_mod(4)
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let mut out = [0i64; 6];
        for (o, c) in out.iter_mut().zip(self.coeffs()) {
            *o = c.checked_mul(k).ok_or(Error::Overflow("scale"))?;
        }
        Ok(out.into())
    }

    /// Exact division of every coefficient by `k`.
    pub fn divide(&self, k: i64) -> Result<Self> {
        let c = self.coeffs();
        if k == 0 || c.iter().any(|x| x % k != 0) {
            return Err(Error::Precondition(format!("{self} is not divisible by {k}")));
        }
        Ok(c.map(|x| x / k).into())
    }

    /// `q o U`, i.e. `v -> q(Uv)`.
    pub fn apply(&self, u: &UnimodularMap<3>) -> Result<Self> {
        let m = self.coefficient_matrix();
        let u128 = u.rows.map(|row| row.map(|x| x as i128));
        let mut mu = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0i128;
                for k in 0..3 {
                    acc = m[i][k]
                        .checked_mul(u128[k][j])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow("apply_transform"))?;
                }
                mu[i][j] = acc;
            }
        }
        let mut g = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0i128;
                for k in 0..3 {
                    acc = u128[k][i]
                        .checked_mul(mu[k][j])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow("apply_transform"))?;
                }
                g[i][j] = acc;
            }
        }
        Ok(TernaryForm::new(
            to_i64(g[0][0] / 2, "apply_transform")?,
            to_i64(g[1][1] / 2, "apply_transform")?,
            to_i64(g[2][2] / 2, "apply_transform")?,
            to_i64(g[1][2], "apply_transform")?,
            to_i64(g[0][2], "apply_transform")?,
            to_i64(g[0][1], "apply_transform")?,
        ))
    }

    pub fn invariants(&self) -> Result<InvariantBundle> {
        let pd = self.is_positive_definite();
        let minimum = if pd { Some(crate::representations::minimum(self)?) } else { None };
        Ok(InvariantBundle {
            content: self.content(),
            discriminant: self.discriminant()?,
            positive_definite: pd,
            minimum,
        })
    }
}

impl BinaryForm {
    pub const fn new(a: i64, t: i64, b: i64) -> Self {
        BinaryForm { a, t, b }
    }

    pub fn coeffs(&self) -> [i64; 3] {
        [self.a, self.t, self.b]
    }

    pub(crate) fn value(&self, v: &Vector2) -> i128 {
        let (x, y) = (v[0] as i128, v[1] as i128);
        self.a as i128 * x * x + self.t as i128 * x * y + self.b as i128 * y * y
    }

    pub fn evaluate(&self, v: &Vector2) -> Result<i64> {
        let (x, y) = (v[0] as i128, v[1] as i128);
        let terms = [(self.a, x * x), (self.t, x * y), (self.b, y * y)];
        let mut acc: i128 = 0;
        for (coef, mono) in terms {
            let term = (coef as i128).checked_mul(mono).ok_or(Error::Overflow("evaluate"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("evaluate"))?;
        }
        to_i64(acc, "evaluate")
    }

    /// `t^2 - 4ab`.
    pub fn discriminant(&self) -> Result<i64> {
        let (a, t, b) = (self.a as i128, self.t as i128, self.b as i128);
        to_i64(t * t - 4 * a * b, "discriminant")
    }

    pub fn content(&self) -> i64 {
        gcd_all(&self.coeffs())
    }

    pub fn is_positive_definite(&self) -> bool {
        let (a, t, b) = (self.a as i128, self.t as i128, self.b as i128);
        a > 0 && 4 * a * b - t * t > 0
    }

    pub fn ensure_positive_definite(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite(self.to_string()))
        }
    }

    pub fn residues_mod(&self, m: i64) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for x in 0..m {
            for y in 0..m {
                if x != 0 || y != 0 {
                    out.insert(self.value(&[x, y]).rem_euclid(m as i128) as i64);
                }
            }
        }
        out
    }

    pub fn mod4_residues(&self) -> BTreeSet<i64> {
        self.residues_mod(4)
    }

    pub fn apply(&self, u: &UnimodularMap<2>) -> Result<Self> {
        let [[p, q], [r, s]] = u.rows.map(|row| row.map(|x| x as i128));
        let (a, t, b) = (self.a as i128, self.t as i128, self.b as i128);
        let f = |x: i128, y: i128| a * x * x + t * x * y + b * y * y;
        let na = f(p, r);
        let nb = f(q, s);
        let nt = 2 * a * p * q + t * (p * s + q * r) + 2 * b * r * s;
        Ok(BinaryForm::new(
            to_i64(na, "apply_transform")?,
            to_i64(nt, "apply_transform")?,
            to_i64(nb, "apply_transform")?,
        ))
    }

    pub fn invariants(&self) -> Result<InvariantBundle> {
        let pd = self.is_positive_definite();
        let minimum = if pd { Some(crate::representations::binary_minimum(self)?) } else { None };
        Ok(InvariantBundle {
            content: self.content(),
            discriminant: self.discriminant()?,
            positive_definite: pd,
            minimum,
        })
    }
}

fn write_coeffs(f: &mut fmt::Formatter<'_>, c: &[i64]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in c.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coeffs(f, &self.coeffs())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coeffs(f, &self.coeffs())
    }
}

/// Parses `[1,2,3]`, `1,2,3` or `1 2 3` style integer lists.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<i64>().map_err(|e| Error::Parse(format!("{p:?}: {e}"))))
        .collect()
}

impl FromStr for TernaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s)?;
        let arr: [i64; 6] = v
            .try_into()
            .map_err(|v: Vec<i64>| Error::Parse(format!("ternary form needs 6 coefficients, got {}", v.len())))?;
        Ok(arr.into())
    }
}

impl FromStr for BinaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s)?;
        let arr: [i64; 3] = v
            .try_into()
            .map_err(|v: Vec<i64>| Error::Parse(format!("binary form needs 3 coefficients, got {}", v.len())))?;
        Ok(arr.into())
    }
}

/// A form of either dimension, as read from user input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Form {
    Binary(BinaryForm),
    Ternary(TernaryForm),
}

impl Form {
    pub fn dimension(&self) -> usize {
        match self {
            Form::Binary(_) => 2,
            Form::Ternary(_) => 3,
        }
    }

    pub fn evaluate(&self, v: &[i64]) -> Result<i64> {
        match (self, v.len()) {
            (Form::Binary(q), 2) => q.evaluate(&[v[0], v[1]]),
            (Form::Ternary(q), 3) => q.evaluate(&[v[0], v[1], v[2]]),
            (f, n) => Err(Error::DimensionMismatch { form: f.dimension(), vector: n }),
        }
    }

    pub fn discriminant(&self) -> Result<i64> {
        match self {
            Form::Binary(q) => q.discriminant(),
            Form::Ternary(q) => q.discriminant(),
        }
    }

    pub fn invariants(&self) -> Result<InvariantBundle> {
        match self {
            Form::Binary(q) => q.invariants(),
            Form::Ternary(q) => q.invariants(),
        }
    }
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s)?;
        match v.len() {
            3 => Ok(Form::Binary(BinaryForm::new(v[0], v[1], v[2]))),
            6 => Ok(Form::Ternary(TernaryForm::new(v[0], v[1], v[2], v[3], v[4], v[5]))),
            n => Err(Error::Parse(format!("expected 3 or 6 coefficients, got {n}"))),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Binary(q) => q.fmt(f),
            Form::Ternary(q) => q.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBundle {
    pub content: i64,
    pub discriminant: i64,
    pub positive_definite: bool,
    /// `None` when the form is not positive definite.
    pub minimum: Option<i64>,
}

pub(crate) fn det3(m: &[[i128; 3]; 3]) -> Option<i128> {
    let minor = |a: i128, b: i128, c: i128, d: i128| a.checked_mul(d)?.checked_sub(b.checked_mul(c)?);
    let c0 = minor(m[1][1], m[1][2], m[2][1], m[2][2])?;
    let c1 = minor(m[1][0], m[1][2], m[2][0], m[2][2])?;
    let c2 = minor(m[1][0], m[1][1], m[2][0], m[2][1])?;
    m[0][0]
        .checked_mul(c0)?
        .checked_sub(m[0][1].checked_mul(c1)?)?
        .checked_add(m[0][2].checked_mul(c2)?)
}

/// Square integer matrix with determinant `+1` or `-1`, stored by rows.
/// Columns are the images of the standard basis vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnimodularMap<const N: usize> {
    pub rows: [[i64; N]; N],
}

impl<const N: usize> Serialize for UnimodularMap<N> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows.iter().map(|r| r.as_slice()))
    }
}

impl<const N: usize> UnimodularMap<N> {
    pub fn identity() -> Self {
        let mut rows = [[0i64; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        UnimodularMap { rows }
    }

    pub fn column(&self, j: usize) -> [i64; N] {
        let mut out = [0i64; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.rows[i][j];
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut rows = [[0i64; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0i128;
                for k in 0..N {
                    acc += self.rows[i][k] as i128 * other.rows[k][j] as i128;
                }
                *cell = to_i64(acc, "matrix product")?;
            }
        }
        Ok(UnimodularMap { rows })
    }

    pub fn apply_vector(&self, v: &[i64; N]) -> [i64; N] {
        let mut out = [0i64; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|k| self.rows[i][k] * v[k]).sum();
        }
        out
    }
}

impl UnimodularMap<3> {
    pub fn new(rows: [[i64; 3]; 3]) -> Result<Self> {
        let d = det3(&rows.map(|r| r.map(|x| x as i128))).ok_or(Error::Overflow("determinant"))?;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(UnimodularMap { rows })
    }

    pub fn from_columns(c: [Vector3; 3]) -> Result<Self> {
        Self::new([
            [c[0][0], c[1][0], c[2][0]],
            [c[0][1], c[1][1], c[2][1]],
            [c[0][2], c[1][2], c[2][2]],
        ])
    }

    pub fn determinant(&self) -> i64 {
        det3(&self.rows.map(|r| r.map(|x| x as i128))).unwrap_or(0) as i64
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = self.rows.map(|r| r.map(|x| x as i128));
        let d = self.determinant() as i128;
        let mut inv = [[0i64; 3]; 3];
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                // cofactor of (j, i)
                let (r0, r1) = others(j);
                let (c0, c1) = others(i);
                let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                *cell = to_i64(sign * minor * d, "inverse")?;
            }
        }
        Ok(UnimodularMap { rows: inv })
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl UnimodularMap<2> {
    pub fn new(rows: [[i64; 2]; 2]) -> Result<Self> {
        let d = rows[0][0] as i128 * rows[1][1] as i128 - rows[0][1] as i128 * rows[1][0] as i128;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(UnimodularMap { rows })
    }

    pub fn determinant(&self) -> i64 {
        self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
    }
}

/// The named parametric families of ternary forms.
///
/// For the `QJ*` families the parameter `r` is half the written `yz`
/// coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormFamily {
    /// `q_{i,c}` for `i` in `1..=6`.
    Q { i: u8, c: i64 },
    /// `q_{a,b,c}`.
    Diagonal { a: i64, b: i64, c: i64 },
    /// `[4,b,c,0,0,-4]`, `b > 4`.
    QJ1 { b: i64, c: i64 },
    /// `[4,b,b,2r,4,4]`, `b > 4`, `r > 1`.
    QJ2 { b: i64, r: i64 },
    /// `[4,b,c,0,-4,0]`, `b != c`.
    QJ3 { b: i64, c: i64 },
    /// `[4,b,c,-b,-4,0]`, `b > 4`, `b != c`.
    QJ4 { b: i64, c: i64 },
    /// `[4,b,c,2r,4,4]`, `b != c`, `r > 1`.
    QJ5 { b: i64, c: i64, r: i64 },
    /// `[4,b,c,2r,0,-4]`, `4 < b != -2r`, `r < 0`.
    QJ6 { b: i64, c: i64, r: i64 },
    /// `[4,b,c,2r,-4,0]`, `b != c`, `b != -2r`, `r < 0`.
    QJ7 { b: i64, c: i64, r: i64 },
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidFamilyParameter(what()))
    }
}

impl FormFamily {
    pub fn instantiate(&self) -> Result<TernaryForm> {
        use FormFamily::*;
        // shared constraints of the q_j families: 4 <= b <= c and |2r| <= b
        let qj = |b: i64, c: i64, r: i64| {
            check(4 <= b && b <= c && (2 * r).abs() <= b, || format!("{self:?}: need 4 <= b <= c and |2r| <= b"))
        };
        let q = match *self {
            Q { i, c } => {
                let min_c = if i <= 2 { 4 } else { 5 };
                check((1..=6).contains(&i), || format!("q_{{i,c}} needs 1 <= i <= 6, got {i}"))?;
                check(c >= min_c, || format!("q_{{{i},c}} needs c >= {min_c}, got {c}"))?;
                check(i != 5 || c % 2 == 0, || format!("q_{{5,c}} needs even c, got {c}"))?;
                match i {
                    1 => TernaryForm::new(4, 4, c, 4, 4, 4),
                    2 => TernaryForm::new(4, 4, c, 0, 0, -4),
                    3 => TernaryForm::new(4, 4, c, -4, -4, 0),
                    4 => TernaryForm::new(4, c, c, -4, 0, 0),
                    5 => TernaryForm::new(4, c, c, -c, 0, 0),
                    _ => TernaryForm::new(4, 4, c, 0, -4, 0),
                }
            }
            Diagonal { a, b, c } => {
                check(a > 0 && b > 0 && c > 0, || format!("q_{{a,b,c}} needs positive entries, got {a},{b},{c}"))?;
                TernaryForm::diagonal(a, b, c)
            }
            QJ1 { b, c } => {
                qj(b, c, 0)?;
                check(b > 4, || "q1 needs b > 4".into())?;
                TernaryForm::new(4, b, c, 0, 0, -4)
            }
            QJ2 { b, r } => {
                qj(b, b, r)?;
                check(b > 4 && r > 1, || "q2 needs b > 4 and r > 1".into())?;
                TernaryForm::new(4, b, b, 2 * r, 4, 4)
            }
            QJ3 { b, c } => {
                qj(b, c, 0)?;
                check(b != c, || "q3 needs b != c".into())?;
                TernaryForm::new(4, b, c, 0, -4, 0)
            }
            QJ4 { b, c } => {
                qj(b, c, 0)?;
                check(b > 4 && b != c, || "q4 needs b > 4 and b != c".into())?;
                TernaryForm::new(4, b, c, -b, -4, 0)
            }
            QJ5 { b, c, r } => {
                qj(b, c, r)?;
                check(b != c && r > 1, || "q5 needs b != c and r > 1".into())?;
                TernaryForm::new(4, b, c, 2 * r, 4, 4)
            }
            QJ6 { b, c, r } => {
                qj(b, c, r)?;
                check(b > 4 && b != -2 * r && r < 0, || "q6 needs 4 < b != -2r and r < 0".into())?;
                TernaryForm::new(4, b, c, 2 * r, 0, -4)
            }
            QJ7 { b, c, r } => {
                qj(b, c, r)?;
                check(b != c && b != -2 * r && r < 0, || "q7 needs b != c, b != -2r and r < 0".into())?;
                TernaryForm::new(4, b, c, 2 * r, -4, 0)
            }
        };
        Ok(q)
    }

    pub fn label(&self) -> String {
        use FormFamily::*;
        match *self {
            Q { i, c } => format!("q_{{{i},{c}}}"),
            Diagonal { a, b, c } => format!("q_{{{a},{b},{c}}}"),
            QJ1 { .. } => "q1".into(),
            QJ2 { .. } => "q2".into(),
            QJ3 { .. } => "q3".into(),
            QJ4 { .. } => "q4".into(),
            QJ5 { .. } => "q5".into(),
            QJ6 { .. } => "q6".into(),
            QJ7 { .. } => "q7".into(),
        }
    }
}

/// `q_{i,c}`, panicking on an invalid parameter. For tests and tables.
pub fn q_ic(i: u8, c: i64) -> TernaryForm {
    FormFamily::Q { i, c }.instantiate().expect("valid q_{i,c} parameters")
}

/// The set `Q_c`: the forms whose class contains `[4,0,4]` with a degree `c`
/// complement.
pub fn q_set(c: i64) -> Result<Vec<FormFamily>> {
    use FormFamily::*;
    let diag = Diagonal { a: 4, b: 4, c };
    let set = if c == 4 {
        vec![Q { i: 1, c: 4 }, Q { i: 2, c: 4 }]
    } else if c > 4 && c.rem_euclid(8) == 1 {
        vec![diag, Q { i: 6, c }, Q { i: 3, c }]
    } else if c > 4 && c.rem_euclid(8) == 5 {
        vec![diag, Q { i: 6, c }]
    } else if c > 4 && c % 4 == 0 {
        vec![Q { i: 3, c }, Q { i: 6, c }]
    } else {
        return Err(Error::InvalidFamilyParameter(format!("Q_c needs c = 4 or c > 4 with c = 0,1 mod 4, got {c}")));
    };
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_conventions() {
        assert_eq!(q_ic(2, 5).discriminant().unwrap(), -240);
        assert_eq!(q_ic(3, 9).discriminant().unwrap(), -448);
        assert_eq!(TernaryForm::diagonal(4, 4, 4).discriminant().unwrap(), -256);
        for c in 4..40 {
            assert_eq!(q_ic(1, c).discriminant().unwrap(), 16 * (4 - 3 * c));
            assert_eq!(TernaryForm::diagonal(4, 4, c).discriminant().unwrap(), -64 * c);
            if c > 4 {
                assert_eq!(q_ic(6, c).discriminant().unwrap(), 64 * (1 - c));
            }
        }
        assert_eq!(BinaryForm::new(4, 4, 4).discriminant().unwrap(), -48);
        assert_eq!(BinaryForm::new(9, 6, 13).discriminant().unwrap(), -432);
    }

    #[test]
    fn evaluation_and_dimension() {
        assert_eq!(q_ic(1, 5).evaluate(&[-1, -1, 1]).unwrap(), 9);
        let f: Form = "[4,0,4]".parse().unwrap();
        assert_eq!(
            f.evaluate(&[1, 2, 3]),
            Err(Error::DimensionMismatch { form: 2, vector: 3 })
        );
        let big = TernaryForm::diagonal(i64::MAX, 1, 1);
        assert_eq!(big.evaluate(&[2, 0, 0]), Err(Error::Overflow("evaluate")));
    }

    #[test]
    fn transform_matches_evaluation() {
        let q = TernaryForm::new(3, 5, 7, 1, -2, 2);
        let u = UnimodularMap::<3>::new([[1, 2, 0], [0, 1, -1], [1, 1, 0]]).unwrap();
        let p = q.apply(&u).unwrap();
        for v in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -2, 3], [2, 2, -1]] {
            assert_eq!(p.evaluate(&v).unwrap(), q.evaluate(&u.apply_vector(&v)).unwrap());
        }
        assert_eq!(p.discriminant().unwrap(), q.discriminant().unwrap());
        let back = p.apply(&u.inverse().unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn binary_transform_matches_evaluation() {
        let q = BinaryForm::new(4, 12, 13);
        let u = UnimodularMap::<2>::new([[2, 1], [1, 1]]).unwrap();
        let p = q.apply(&u).unwrap();
        for v in [[1, 0], [0, 1], [3, -2]] {
            assert_eq!(p.evaluate(&v).unwrap(), q.evaluate(&u.apply_vector(&v)).unwrap());
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(
            UnimodularMap::<3>::new([[2, 0, 0], [0, 1, 0], [0, 0, 1]]),
            Err(Error::NotUnimodular(2))
        ));
    }

    #[test]
    fn residues() {
        assert_eq!(q_ic(1, 4).mod4_residues(), BTreeSet::from([0]));
        assert_eq!(q_ic(2, 5).mod4_residues(), BTreeSet::from([0, 1]));
        // odd cross terms need vectors beyond 0/1 entries
        assert!(TernaryForm::new(1, 1, 1, 0, 0, 1).mod4_residues().contains(&3));
    }

    #[test]
    fn families() {
        assert_eq!(q_ic(5, 12), TernaryForm::new(4, 12, 12, -12, 0, 0));
        assert!(FormFamily::Q { i: 3, c: 4 }.instantiate().is_err());
        assert!(FormFamily::QJ2 { b: 8, r: 1 }.instantiate().is_err());
        assert_eq!(
            q_set(5).unwrap(),
            vec![FormFamily::Diagonal { a: 4, b: 4, c: 5 }, FormFamily::Q { i: 6, c: 5 }]
        );
        assert_eq!(q_set(9).unwrap().len(), 3);
        assert_eq!(q_set(12).unwrap(), vec![FormFamily::Q { i: 3, c: 12 }, FormFamily::Q { i: 6, c: 12 }]);
        assert!(q_set(6).is_err());
        assert!(q_set(1).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let q: TernaryForm = "[4,4,5,0,-4,0]".parse().unwrap();
        assert_eq!(q.to_string(), "[4,4,5,0,-4,0]");
        assert!("[1,2]".parse::<TernaryForm>().is_err());
    }
}
