//! Exact enumeration of short vectors, representation sets and primitive
//! representation of a binary form by a ternary form.
//!
//! The enumeration completes squares in integer arithmetic:
//! `4a q = (2ax + ty + sz)^2 + g(y,z)` and `4A g = (2Ay + Cz)^2 + E z^2`, so every
//! coordinate range is cut out by an integer square root, with no floating point.

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, TernaryForm, Vector2, Vector3};

fn ceil_div(n: i128, d: i128) -> i128 {
    -Integer::div_floor(&-n, &d)
}

/// Integer range `x` with `(d x + off)^2 <= w2`, for `d > 0`.
fn square_window(w2: i128, off: i128, d: i128) -> Option<(i128, i128)> {
    if w2 < 0 {
        return None;
    }
    let w = w2.sqrt();
    let lo = ceil_div(-w - off, d);
    let hi = Integer::div_floor(&(w - off), &d);
    (lo <= hi).then_some((lo, hi))
}

fn small(v: i128) -> Result<i64> {
    // enumeration coordinates feed back into i128 products of three factors
    if v.unsigned_abs() > (1u128 << 40) {
        Err(Error::Overflow("short vector enumeration"))
    } else {
        Ok(v as i64)
    }
}

/// All nonzero `v` with `lo <= q(v) <= hi`, sorted lexicographically, with
/// their values.
pub fn vectors_in_range(q: &TernaryForm, lo: i64, hi: i64) -> Result<Vec<(Vector3, i64)>> {
    q.ensure_positive_definite()?;
    let mut out = Vec::new();
    if hi < 1 || hi < lo {
        return Ok(out);
    }
    let (a, b, c) = (q.a as i128, q.b as i128, q.c as i128);
    let (r, s, t) = (q.r as i128, q.s as i128, q.t as i128);
    let bound = hi as i128;
    let big_a = 4 * a * b - t * t;
    let big_c = 4 * a * r - 2 * s * t;
    let big_d = 4 * a * c - s * s;
    let big_e = 4 * big_a * big_d - big_c * big_c;
    let ab4 = 4 * a * bound;
    let zmax = small((16 * a * big_a * bound / big_e).sqrt())?;
    for z in -zmax..=zmax {
        let zi = z as i128;
        let Some((ylo, yhi)) = square_window(4 * big_a * ab4 - big_e * zi * zi, big_c * zi, 2 * big_a)
        else {
            continue;
        };
        for y in small(ylo)?..=small(yhi)? {
            let yi = y as i128;
            let g = big_a * yi * yi + big_c * yi * zi + big_d * zi * zi;
            let Some((xlo, xhi)) = square_window(ab4 - g, t * yi + s * zi, 2 * a) else {
                continue;
            };
            for x in small(xlo)?..=small(xhi)? {
                let v = [x, y, z];
                let val = q.value(&v);
                if val >= lo as i128 && val <= bound && v != [0, 0, 0] {
                    out.push((v, val as i64));
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All nonzero `v` with `lo <= q(v) <= hi` for a binary form.
pub fn binary_vectors_in_range(q: &BinaryForm, lo: i64, hi: i64) -> Result<Vec<(Vector2, i64)>> {
    q.ensure_positive_definite()?;
    let mut out = Vec::new();
    if hi < 1 || hi < lo {
        return Ok(out);
    }
    let (a, t, b) = (q.a as i128, q.t as i128, q.b as i128);
    let bound = hi as i128;
    let disc = 4 * a * b - t * t;
    let ymax = small((4 * a * bound / disc).sqrt())?;
    for y in -ymax..=ymax {
        let yi = y as i128;
        let Some((xlo, xhi)) = square_window(4 * a * bound - disc * yi * yi, t * yi, 2 * a) else {
            continue;
        };
        for x in small(xlo)?..=small(xhi)? {
            let v = [x, y];
            let val = q.value(&v);
            if val >= lo as i128 && val <= bound && v != [0, 0] {
                out.push((v, val as i64));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_primitive_vector(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, x| g.gcd(x)) == 1
}

/// `R_n(q)`: the vectors representing `n`, and those among them that are primitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationSet<V> {
    pub target: i64,
    pub vectors: Vec<V>,
    pub primitive_vectors: Vec<V>,
}

impl<V> RepresentationSet<V> {
    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn primitive_count(&self) -> usize {
        self.primitive_vectors.len()
    }
}

fn build<V: Copy + AsRef<[i64]>>(target: i64, all: Vec<(V, i64)>, primitive_only: bool) -> RepresentationSet<V> {
    let primitive_vectors: Vec<V> = all.iter().map(|p| p.0).filter(|v| is_primitive_vector(v.as_ref())).collect();
    let vectors = if primitive_only {
        primitive_vectors.clone()
    } else {
        all.into_iter().map(|p| p.0).collect()
    };
    RepresentationSet { target, vectors, primitive_vectors }
}

pub fn representations(q: &TernaryForm, n: i64, primitive_only: bool) -> Result<RepresentationSet<Vector3>> {
    if n < 1 {
        q.ensure_positive_definite()?;
        return Ok(RepresentationSet { target: n, vectors: vec![], primitive_vectors: vec![] });
    }
    Ok(build(n, vectors_in_range(q, n, n)?, primitive_only))
}

pub fn binary_representations(q: &BinaryForm, n: i64, primitive_only: bool) -> Result<RepresentationSet<Vector2>> {
    if n < 1 {
        q.ensure_positive_definite()?;
        return Ok(RepresentationSet { target: n, vectors: vec![], primitive_vectors: vec![] });
    }
    Ok(build(n, binary_vectors_in_range(q, n, n)?, primitive_only))
}

pub fn represents(q: &TernaryForm, n: i64) -> Result<bool> {
    Ok(!representations(q, n, false)?.vectors.is_empty())
}

pub fn represents_primitively(q: &TernaryForm, n: i64) -> Result<bool> {
    Ok(!representations(q, n, true)?.vectors.is_empty())
}

pub fn binary_represents_primitively(q: &BinaryForm, n: i64) -> Result<bool> {
    Ok(!binary_representations(q, n, true)?.vectors.is_empty())
}

pub fn minimum(q: &TernaryForm) -> Result<i64> {
    let bound = q.a.min(q.b).min(q.c);
    let vs = vectors_in_range(q, 1, bound)?;
    vs.iter().map(|p| p.1).min().ok_or_else(|| Error::Internal(format!("no vector below the diagonal of {q}")))
}

pub fn binary_minimum(q: &BinaryForm) -> Result<i64> {
    let vs = binary_vectors_in_range(q, 1, q.a.min(q.b))?;
    vs.iter().map(|p| p.1).min().ok_or_else(|| Error::Internal(format!("no vector below the diagonal of {q}")))
}

/// `r_4(q) = |R_4(q)|`.
pub fn r4(q: &TernaryForm) -> Result<usize> {
    Ok(representations(q, 4, false)?.count())
}

/// `a(q) = max(1, r_4, 3 r_4 - 12)`.
pub fn a_invariant(q: &TernaryForm) -> Result<i64> {
    let r = r4(q)? as i64;
    Ok(1.max(r).max(3 * r - 12))
}

fn minors_gcd(u: &Vector3, v: &Vector3) -> i64 {
    let m1 = u[0] * v[1] - u[1] * v[0];
    let m2 = u[0] * v[2] - u[2] * v[0];
    let m3 = u[1] * v[2] - u[2] * v[1];
    m1.gcd(&m2).gcd(&m3)
}

/// A primitive representation of the binary form `g` by `f`: vectors `(u, v)`
/// spanning a primitive sublattice with `f(xu + yv) = g(x, y)`.
pub fn represents_binary(f: &TernaryForm, g: &BinaryForm) -> Result<Option<(Vector3, Vector3)>> {
    f.ensure_positive_definite()?;
    g.ensure_positive_definite()?;
    let us = representations(f, g.a, false)?.vectors;
    let vs = if g.b == g.a { us.clone() } else { representations(f, g.b, false)?.vectors };
    for u in &us {
        for v in &vs {
            let p = f.polar(u, v);
            if p.abs() != g.t.abs() as i128 || minors_gcd(u, v) != 1 {
                continue;
            }
            let v = if p == g.t as i128 { *v } else { v.map(|x| -x) };
            return Ok(Some((*u, v)));
        }
    }
    Ok(None)
}

/// Primitive vectors with square value `k^2` coprime to `modulus`, smallest first,
/// searched up to `limit`.
pub fn primitive_square(q: &TernaryForm, modulus: i64, limit: i64) -> Result<Option<(i64, Vector3)>> {
    let mut bound = 64.min(limit);
    let mut searched = 0;
    loop {
        let vs = vectors_in_range(q, searched + 1, bound)?;
        let mut best: Option<(i64, Vector3)> = None;
        for (v, val) in vs {
            let k = val.sqrt();
            if k * k == val && k.gcd(&modulus) == 1 && is_primitive_vector(&v) && best.map_or(true, |b| val < b.0) {
                best = Some((val, v));
            }
        }
        if best.is_some() || bound >= limit {
            return Ok(best);
        }
        searched = bound;
        bound = (bound * 4).min(limit);
    }
}
