//! Deterministic text renderings of the group, genus and automorphism tables.
//! Every row is recomputed on sampled parameters; a row that fails prints a
//! `MISMATCH` line under it.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use humbert_core::classify::{curve_classification, CurveGroup};
use humbert_core::genus::adjoint_invariants;
use humbert_core::reduction::is_eisenstein_reduced;
use humbert_core::{q_ic, Error, Result, TernaryForm};
use num_rational::Ratio;

pub const CURVE_GROUPS: &str = "curve_groups.txt";
pub const GENUS_INVARIANTS: &str = "genus_invariants.txt";
pub const IMPRIMITIVE_ORDERS: &str = "proper_orders_imprimitive.txt";
pub const PRIMITIVE_ORDERS: &str = "proper_orders_primitive.txt";

fn group_order(g: CurveGroup) -> i64 {
    match g {
        CurveGroup::C2 => 2,
        CurveGroup::C10 => 10,
        CurveGroup::C2xC2 => 4,
        CurveGroup::D4 => 8,
        CurveGroup::D6 => 12,
        CurveGroup::C3SemiD4 => 24,
        CurveGroup::Gl23 => 48,
    }
}

pub fn curve_groups() -> String {
    let mut out = String::from("# Automorphism group of a genus 2 curve by r_4 of its refined Humbert invariant\n");
    out.push_str("group | a | r_4\n");
    for g in CurveGroup::ALL {
        let (a, r4) = g.invariants();
        let r4i = r4 as i64;
        let _ = writeln!(out, "{g} | {a} | {r4}");
        if a != 1.max(r4i).max(3 * r4i - 12) {
            let _ = writeln!(out, "  MISMATCH: a != max(1, r_4, 3 r_4 - 12)");
        }
        // C10 has a simple Jacobian, so it never comes from a ternary form
        let ternary = g != CurveGroup::C10;
        if ternary && (2 * a != group_order(g) || CurveGroup::from_r4(r4) != Some(g)) {
            let _ = writeln!(out, "  MISMATCH: 2a != |{g}| or r_4 does not determine {g}");
        }
    }
    out
}

struct GenusRow {
    label: &'static str,
    family: &'static str,
    adjoint: &'static str,
    abs_i1: &'static str,
    disc: &'static str,
    i2: &'static str,
    witness: &'static str,
    params: fn() -> Vec<i64>,
    form: fn(i64) -> TernaryForm,
    /// `(|I1|, reciprocal coefficients times |I1|, disc, I2, argument, value)`.
    expect: fn(i64) -> (i64, [i64; 6], i64, i64, [i64; 3], i64),
}

fn one_mod_four() -> Vec<i64> {
    (5..=45).step_by(4).collect()
}

fn genus_rows() -> Vec<GenusRow> {
    vec![
        GenusRow {
            label: "1",
            family: "q_{1,c}",
            adjoint: "16[c-1,c-1,3,-2,-2,2-c]",
            abs_i1: "16",
            disc: "16(4-3c)",
            i2: "4-3c",
            witness: "F(0,0,1) = 3",
            params: one_mod_four,
            form: |c| q_ic(1, c),
            expect: |c| (16, [16 * (c - 1), 16 * (c - 1), 48, -32, -32, 16 * (2 - c)], 16 * (4 - 3 * c), 4 - 3 * c, [0, 0, 1], 3),
        },
        GenusRow {
            label: "2'",
            family: "q_{2,c}, 3 does not divide c",
            adjoint: "16[c,c,3,0,0,c]",
            abs_i1: "16",
            disc: "-48c",
            i2: "-3c",
            witness: "F(2,0,1) = 4c+3",
            params: || one_mod_four().into_iter().filter(|c| c % 3 != 0).collect(),
            form: |c| q_ic(2, c),
            expect: |c| (16, [16 * c, 16 * c, 48, 0, 0, 16 * c], -48 * c, -3 * c, [2, 0, 1], 4 * c + 3),
        },
        GenusRow {
            label: "2''",
            family: "q_{2,c}, 3 divides c",
            adjoint: "48[c/3,c/3,1,0,0,c/3]",
            abs_i1: "48",
            disc: "-48c",
            i2: "-c/3",
            witness: "F(0,0,1) = 1",
            params: || one_mod_four().into_iter().filter(|c| c % 3 == 0).collect(),
            form: |c| q_ic(2, c),
            expect: |c| (48, [16 * c, 16 * c, 48, 0, 0, 16 * c], -48 * c, -c / 3, [0, 0, 1], 1),
        },
        GenusRow {
            label: "3",
            family: "q_{3,c'}, c' = 1 mod 8",
            adjoint: "32[(c'-1)/2,(c'-1)/2,2,2,2,1]",
            abs_i1: "32",
            disc: "64(2-c')",
            i2: "2-c'",
            witness: "F(1,1,0) = c'",
            params: || (9..=49).step_by(8).collect(),
            form: |c| q_ic(3, c),
            expect: |c| (32, [16 * (c - 1), 16 * (c - 1), 64, 64, 64, 32], 64 * (2 - c), 2 - c, [1, 1, 0], c),
        },
        GenusRow {
            label: "4",
            family: "q_{4,4,c}",
            adjoint: "16[c,c,4,0,0,0]",
            abs_i1: "16",
            disc: "-64c",
            i2: "-4c",
            witness: "F(1,0,1) = c+4",
            params: one_mod_four,
            form: |c| TernaryForm::diagonal(4, 4, c),
            expect: |c| (16, [16 * c, 16 * c, 64, 0, 0, 0], -64 * c, -4 * c, [1, 0, 1], c + 4),
        },
        GenusRow {
            label: "6",
            family: "q_{6,c}",
            adjoint: "16[c,c-1,4,0,4,0]",
            abs_i1: "16",
            disc: "64(1-c)",
            i2: "4(1-c)",
            witness: "F(1,0,0) = c",
            params: one_mod_four,
            form: |c| q_ic(6, c),
            expect: |c| (16, [16 * c, 16 * (c - 1), 64, 0, 64, 0], 64 * (1 - c), 4 * (1 - c), [1, 0, 0], c),
        },
    ]
}

fn check_genus(row: &GenusRow, c: i64) -> Result<Option<String>> {
    let f = (row.form)(c);
    let (abs_i1, scaled, disc, i2, arg, value) = (row.expect)(c);
    let (adjoint, got_i1, got_i2, reciprocal) = adjoint_invariants(&f)?;
    let got_disc = f.discriminant()?;
    let got_value = reciprocal.evaluate(&arg)?;
    // the printed |I1| F column is the reciprocal scaled by |I1|, i.e. minus the adjoint
    let got_scaled = adjoint.coeffs().map(|x| -x);
    let ok = got_i1 == abs_i1 && got_scaled == scaled && got_disc == disc && got_i2 == i2 && got_value == value;
    Ok((!ok).then(|| {
        format!(
            "  MISMATCH at c = {c}: |I1| {got_i1}, |I1| F {:?}, disc {got_disc}, I2 {got_i2}, F{arg:?} = {got_value}",
            got_scaled
        )
    }))
}

pub fn genus_invariants() -> Result<String> {
    let mut out = String::from("# Genus invariants of the primitive D4 and D6 family forms\n");
    out.push_str("row | form | |I1| F | |I1| | disc | I2 | value of F\n");
    for row in genus_rows() {
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {} | {} | {}",
            row.label, row.family, row.adjoint, row.abs_i1, row.disc, row.i2, row.witness
        );
        let params = (row.params)();
        if params.is_empty() {
            let _ = writeln!(out, "  inconsistent: no parameters sampled");
        }
        for c in params {
            if let Some(m) = check_genus(&row, c)? {
                out.push_str(&m);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

struct OrderRow {
    group: CurveGroup,
    shape: &'static str,
    name: &'static str,
    aut_plus: usize,
    a: i64,
    k: i64,
    samples: Vec<TernaryForm>,
}

/// `(b, c, 2r)` with `4 | b, c, 2r`, `4 < b <= c <= 24`, `|2r| <= b`, and
/// `b != -2r` when `r < 0`.
fn imprimitive_params() -> Vec<(i64, i64, i64)> {
    let mut out = vec![];
    for b in (8..=24).step_by(4) {
        for c in (b..=24).step_by(4) {
            for rr in (-b..=b).step_by(4) {
                if rr >= 0 || b != -rr {
                    out.push((b, c, rr));
                }
            }
        }
    }
    out
}

fn imprimitive_sample(pred: impl Fn(i64, i64, i64) -> bool, make: impl Fn(i64, i64, i64) -> TernaryForm) -> Vec<TernaryForm> {
    let mut out: Vec<TernaryForm> =
        imprimitive_params().into_iter().filter(|&(b, c, rr)| pred(b, c, rr)).map(|(b, c, rr)| make(b, c, rr)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn imprimitive_rows() -> Vec<OrderRow> {
    use CurveGroup::*;
    let cs: Vec<i64> = (8..=40).step_by(4).collect();
    let row = |group, shape, name, aut_plus, a, k, samples| OrderRow { group, shape, name, aut_plus, a, k, samples };
    vec![
        row(C2xC2, "[4,b,c,4,4,4] with b != c", "q5", 2, 2, 1,
            imprimitive_sample(|b, c, _| b != c, |b, c, _| TernaryForm::new(4, b, c, 4, 4, 4))),
        row(C2xC2, "[4,b,c,2r,0,-4] with r < 0", "q6", 2, 2, 1,
            imprimitive_sample(|_, _, rr| rr < 0, |b, c, rr| TernaryForm::new(4, b, c, rr, 0, -4))),
        row(C2xC2, "[4,b,c,2r,-4,0] with r < 0", "q7", 2, 2, 1,
            imprimitive_sample(|b, c, rr| rr < 0 && b != c, |b, c, rr| TernaryForm::new(4, b, c, rr, -4, 0))),
        row(C2xC2, "[4,b,c,0,0,-4]", "q1", 4, 2, 2,
            imprimitive_sample(|_, _, _| true, |b, c, _| TernaryForm::new(4, b, c, 0, 0, -4))),
        row(C2xC2, "[4,b,b,2r,4,4] with r > 0", "q2", 4, 2, 2,
            imprimitive_sample(|_, _, rr| rr > 0, |b, _, rr| TernaryForm::new(4, b, b, rr, 4, 4))),
        row(C2xC2, "[4,b,c,0,-4,0] with b != c", "q3", 4, 2, 2,
            imprimitive_sample(|b, c, _| b != c, |b, c, _| TernaryForm::new(4, b, c, 0, -4, 0))),
        row(C2xC2, "[4,b,c,-b,-4,0] with b != c", "q4", 4, 2, 2,
            imprimitive_sample(|b, c, _| b != c, |b, c, _| TernaryForm::new(4, b, c, -b, -4, 0))),
        row(C2xC2, "[4,c,c,-4,0,0]", "q_{4,c}", 4, 2, 2, cs.iter().map(|&c| q_ic(4, c)).collect()),
        row(D4, "[4,4,c,0,-4,0]", "q_{6,c}", 4, 4, 1, cs.iter().map(|&c| q_ic(6, c)).collect()),
        row(D4, "[4,4,c,-4,-4,0]", "q_{3,c}", 8, 4, 2, cs.iter().map(|&c| q_ic(3, c)).collect()),
        row(D6, "[4,4,c,4,4,4]", "q_{1,c}", 6, 6, 1, cs.iter().map(|&c| q_ic(1, c)).collect()),
        row(D6, "[4,4,c,0,0,-4]", "q_{2,c}", 12, 6, 2, cs.iter().map(|&c| q_ic(2, c)).collect()),
        row(C3SemiD4, "[4,4,4,0,0,-4]", "q_{2,4}", 12, 12, 1, vec![q_ic(2, 4)]),
        row(Gl23, "[4,4,4,4,4,4]", "q_{1,4}", 24, 24, 1, vec![q_ic(1, 4)]),
    ]
}

fn primitive_rows() -> Vec<OrderRow> {
    use CurveGroup::*;
    let cs: Vec<i64> = (5..=61).step_by(4).collect();
    let cps: Vec<i64> = (9..=65).step_by(8).collect();
    let row = |group, shape, name, aut_plus, a, k, samples| OrderRow { group, shape, name, aut_plus, a, k, samples };
    vec![
        row(D4, "[4,4,c,0,-4,0]", "q_{6,c}", 4, 4, 1, cs.iter().map(|&c| q_ic(6, c)).collect()),
        row(D4, "[4,4,c,0,0,0]", "q_{4,4,c}", 8, 4, 2, cs.iter().map(|&c| TernaryForm::diagonal(4, 4, c)).collect()),
        row(D4, "[4,4,c',-4,-4,0]", "q_{3,c'}", 8, 4, 2, cps.iter().map(|&c| q_ic(3, c)).collect()),
        row(D6, "[4,4,c,4,4,4]", "q_{1,c}", 6, 6, 1, cs.iter().map(|&c| q_ic(1, c)).collect()),
        row(D6, "[4,4,c,0,0,-4]", "q_{2,c}", 12, 6, 2, cs.iter().map(|&c| q_ic(2, c)).collect()),
    ]
}

fn check_order(row: &OrderRow, q: &TernaryForm) -> Result<Option<String>> {
    if !is_eisenstein_reduced(q) {
        return Ok(Some(format!("  MISMATCH at {q}: not reduced")));
    }
    let c = match curve_classification(q, None) {
        Ok(c) => c,
        Err(e) => return Ok(Some(format!("  MISMATCH at {q}: {e}"))),
    };
    let ok = c.group == row.group
        && c.proper_aut_order == row.aut_plus
        && c.a == row.a
        && c.k == Ratio::from_integer(row.k);
    Ok((!ok).then(|| {
        format!("  MISMATCH at {q}: group {}, |Aut+| {}, a {}, k {}", c.group, c.proper_aut_order, c.a, c.k)
    }))
}

fn render_orders(title: &str, rows: &[OrderRow]) -> Result<String> {
    let mut out = format!("# {title}\n");
    out.push_str("group | form | name | |Aut+| | a | k\n");
    for row in rows {
        let _ = writeln!(out, "{} | {} | {} | {} | {} | {}", row.group, row.shape, row.name, row.aut_plus, row.a, row.k);
        if row.samples.is_empty() {
            let _ = writeln!(out, "  inconsistent: no parameters sampled");
        }
        for q in &row.samples {
            if let Some(m) = check_order(row, q)? {
                out.push_str(&m);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn imprimitive_orders() -> Result<String> {
    render_orders("Imprimitive refined Humbert invariants with a != 1", &imprimitive_rows())
}

pub fn primitive_orders() -> Result<String> {
    render_orders("Primitive refined Humbert invariants with a > 2", &primitive_rows())
}

/// `(file name, contents)` for every table.
pub fn render_all() -> Result<Vec<(&'static str, String)>> {
    Ok(vec![
        (CURVE_GROUPS, curve_groups()),
        (GENUS_INVARIANTS, genus_invariants()?),
        (IMPRIMITIVE_ORDERS, imprimitive_orders()?),
        (PRIMITIVE_ORDERS, primitive_orders()?),
    ])
}

pub fn regenerate_tables(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Precondition(format!("{}: {e}", dir.display())))?;
    let mut written = vec![];
    for (name, text) in render_all()? {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
