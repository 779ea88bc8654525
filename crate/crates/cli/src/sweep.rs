//! Classification sweeps over reduced forms, with a resumable JSON-lines cache.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use humbert_core::automorphs::{automorphism_group, predicted_proper_order};
use humbert_core::classify::{classify_jacobian_form, refined_humbert_status, StatusPath};
use humbert_core::genus::adjoint_invariants;
use humbert_core::reduction::reduced_forms_up_to_disc;
use humbert_core::{Error, Result, TernaryForm};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One cache line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub form: TernaryForm,
    pub disc: i64,
    pub status: String,
    pub path: String,
    pub jacobian: bool,
    pub aut_plus: usize,
    pub predicted_aut_plus: Option<usize>,
    pub group: Option<String>,
    pub r4: Option<usize>,
    pub a: Option<i64>,
    /// `|Aut+| / a` as an integer or `"p/q"`.
    pub k: Option<String>,
    pub list_tag: Option<String>,
    /// Does the form primitively represent `[4,4,4]` / `[4,0,4]`.
    pub contains_d6: Option<bool>,
    pub contains_d4: Option<bool>,
    pub d6_list: Option<bool>,
    pub d4_list: Option<bool>,
    /// `|I1|^2 I2 = 16 disc`, checked on classified forms.
    pub genus_identity: Option<bool>,
}

fn path_kind(p: &StatusPath) -> String {
    serde_json::to_value(p)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_owned))
        .unwrap_or_default()
}

/// Status, automorphism count and, for Jacobian forms, the curve classification.
pub fn classify_record(q: &TernaryForm, search_limit: Option<i64>) -> Result<SweepRecord> {
    let status = refined_humbert_status(q, search_limit)?;
    let aut_plus = automorphism_group(q)?.proper_count;
    let predicted_aut_plus = match predicted_proper_order(q) {
        Ok(p) => p,
        Err(Error::NotReduced(_)) => None,
        Err(e) => return Err(e),
    };
    let mut rec = SweepRecord {
        form: *q,
        disc: q.discriminant()?,
        status: status.verdict.to_string(),
        path: path_kind(&status.path),
        jacobian: status.jacobian,
        aut_plus,
        predicted_aut_plus,
        group: None,
        r4: None,
        a: None,
        k: None,
        list_tag: None,
        contains_d6: None,
        contains_d4: None,
        d6_list: None,
        d4_list: None,
        genus_identity: None,
    };
    if status.jacobian {
        let c = classify_jacobian_form(q)?;
        let crit = humbert_core::classify::subgroup_criteria(&humbert_core::Form::Ternary(*q))?;
        let (_, abs_i1, i2, _) = adjoint_invariants(q)?;
        rec.group = Some(c.group.to_string());
        rec.r4 = Some(c.r4);
        rec.a = Some(c.a);
        rec.k = Some(c.k.to_string());
        rec.list_tag = c.lists.tag.map(|t| serde_json::to_value(t).unwrap().as_str().unwrap_or_default().to_owned());
        rec.contains_d6 = Some(crit.contains_d6);
        rec.contains_d4 = Some(crit.contains_d4);
        rec.d6_list = Some(c.lists.d6_list);
        rec.d4_list = Some(c.lists.d4_list);
        rec.genus_identity = Some(abs_i1 as i128 * abs_i1 as i128 * i2 as i128 == 16 * rec.disc as i128);
    }
    Ok(rec)
}

/// Records in input order, computed on `jobs` threads (all cores when `None`).
pub fn classify_all(forms: &[TernaryForm], jobs: Option<usize>, search_limit: Option<i64>) -> Result<Vec<SweepRecord>> {
    let work = || forms.par_iter().map(|q| classify_record(q, search_limit)).collect::<Result<Vec<_>>>();
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(work),
        None => work(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    /// Closed-form proper order disagrees with brute force.
    pub pattern: Vec<TernaryForm>,
    /// `a` does not divide `|Aut+|`.
    pub a_divides: Vec<TernaryForm>,
    pub genus_identity: Vec<TernaryForm>,
    /// `k > 2` with `a != 1` outside the `[4,b,b,2,4,4]`, `b = 1 mod 4` family,
    /// or that family with `k != 4`.
    pub k_bound: Vec<TernaryForm>,
    /// Representing `[4,4,4]` disagrees with the `D6` family list.
    pub d6_list: Vec<TernaryForm>,
    pub d4_list: Vec<TernaryForm>,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.pattern.len()
            + self.a_divides.len()
            + self.genus_identity.len()
            + self.k_bound.len()
            + self.d6_list.len()
            + self.d4_list.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_disc: i64,
    pub forms: usize,
    pub newly_classified: usize,
    pub by_status: BTreeMap<String, usize>,
    pub jacobian: usize,
    pub by_group: BTreeMap<String, usize>,
    /// Jacobian forms with group `GL2_3` or `C3semiD4`.
    pub exceptional_forms: Vec<TernaryForm>,
    pub predicted: usize,
    pub violations: Violations,
}

fn k_exception(q: &TernaryForm) -> bool {
    q.a == 4 && q.b == q.c && q.b % 4 == 1 && [q.r, q.s, q.t] == [2, 4, 4]
}

/// Aggregate counts and the consistency checks over a set of records.
pub fn summarize(max_disc: i64, records: &[SweepRecord]) -> SweepReport {
    let mut rep = SweepReport { max_disc, forms: records.len(), ..Default::default() };
    for r in records {
        *rep.by_status.entry(r.status.clone()).or_default() += 1;
        if let Some(p) = r.predicted_aut_plus {
            rep.predicted += 1;
            if p != r.aut_plus {
                rep.violations.pattern.push(r.form);
            }
        }
        if !r.jacobian {
            continue;
        }
        rep.jacobian += 1;
        let group = r.group.clone().unwrap_or_default();
        if group == "GL2_3" || group == "C3semiD4" {
            rep.exceptional_forms.push(r.form);
        }
        *rep.by_group.entry(group).or_default() += 1;
        let a = r.a.unwrap_or(1);
        if r.aut_plus as i64 % a != 0 {
            rep.violations.a_divides.push(r.form);
        }
        if r.genus_identity == Some(false) {
            rep.violations.genus_identity.push(r.form);
        }
        let u = r.aut_plus as i64;
        if a != 1 && ((k_exception(&r.form) && u != 4 * a) || (!k_exception(&r.form) && u > 2 * a)) {
            rep.violations.k_bound.push(r.form);
        }
        if r.contains_d6 != r.d6_list {
            rep.violations.d6_list.push(r.form);
        }
        if r.contains_d4 != r.d4_list {
            rep.violations.d4_list.push(r.form);
        }
    }
    rep
}

fn read_cache(path: &Path) -> Result<Vec<SweepRecord>> {
    if !path.exists() {
        return Ok(vec![]);
    }
    let file = File::open(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    let mut out = vec![];
    let mut valid_len = 0u64;
    for line in BufReader::new(file).split(b'\n') {
        let line = line.map_err(|e| Error::Precondition(e.to_string()))?;
        // a record cut off by an interruption has no newline and fails to parse; drop it
        match serde_json::from_slice::<SweepRecord>(&line) {
            Ok(r) => {
                out.push(r);
                valid_len += line.len() as u64 + 1;
            }
            Err(_) => break,
        }
    }
    let f = OpenOptions::new().write(true).open(path).map_err(|e| Error::Precondition(e.to_string()))?;
    f.set_len(valid_len).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(out)
}

pub const CHUNK: usize = 512;

/// Classify every Eisenstein-reduced form with `|disc| <= max_disc`, skipping
/// forms already in the cache and appending new records chunk by chunk in
/// enumeration order.
pub fn sweep(max_disc: i64, cache: Option<&Path>, jobs: Option<usize>, search_limit: Option<i64>) -> Result<SweepReport> {
    if max_disc <= 0 {
        return Err(Error::Precondition(format!("max_disc must be positive, got {max_disc}")));
    }
    let forms = reduced_forms_up_to_disc(max_disc);
    let mut known: BTreeMap<TernaryForm, SweepRecord> = BTreeMap::new();
    if let Some(p) = cache {
        for r in read_cache(p)? {
            known.insert(r.form, r);
        }
    }
    let todo: Vec<TernaryForm> = forms.iter().filter(|q| !known.contains_key(q)).copied().collect();
    let mut writer = match cache {
        Some(p) => Some(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    for chunk in todo.chunks(CHUNK) {
        let recs = classify_all(chunk, jobs, search_limit)?;
        if let Some(w) = writer.as_mut() {
            let mut buf = String::new();
            for r in &recs {
                buf.push_str(&serde_json::to_string(r).map_err(|e| Error::Internal(e.to_string()))?);
                buf.push('\n');
            }
            w.write_all(buf.as_bytes()).map_err(|e| Error::Precondition(e.to_string()))?;
            w.flush().map_err(|e| Error::Precondition(e.to_string()))?;
        }
        for r in recs {
            known.insert(r.form, r);
        }
    }
    let wanted: BTreeSet<TernaryForm> = forms.into_iter().collect();
    let records: Vec<SweepRecord> = known.into_values().filter(|r| wanted.contains(&r.form)).collect();
    let mut rep = summarize(max_disc, &records);
    rep.newly_classified = todo.len();
    Ok(rep)
}
