//! Argument parsing and dispatch. Each subcommand is a thin wrapper over one
//! library operation, printing either text or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use humbert_core::automorphs::{automorphism_group, matching_pattern};
use humbert_core::classify::{curve_classification, refined_humbert_status};
use humbert_core::genus::{genus_conditions, genus_data};
use humbert_core::intersections::{
    empty_intersection_certificate, humbert_pair_intersection, intersect_with_humbert, HumbertBase,
};
use humbert_core::reduction::{binary_equivalent, equivalent, reduce_binary, reduce_ternary};
use humbert_core::representations::{binary_representations, representations};
use humbert_core::subcovers::{class_number, d6_locus_count, degree_form_disc, subcovers, ClassNumberTable};
use humbert_core::{Error, Form, Result, TernaryForm};
use serde::Serialize;
use serde_json::json;

use crate::{sweep, tables};

#[derive(Debug, Parser)]
#[command(name = "humbert", version, about = "Positive ternary forms and refined Humbert invariants of genus 2 curves")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Search bound for square and genus-witness searches.
    #[arg(long, global = true)]
    pub limit: Option<i64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Cache file (sweep records or class numbers).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Output directory for generated tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eisenstein-reduce a ternary form, or GL2-reduce a binary form.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Test two forms for integral equivalence.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Automorphism group of a ternary form.
    Aut {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// List the group elements.
        #[arg(long)]
        elements: bool,
    },
    /// Vectors representing n.
    Rep {
        #[arg(allow_hyphen_values = true)]
        form: String,
        n: i64,
        #[arg(long)]
        primitive: bool,
    },
    /// Automorphism group of the curve whose refined Humbert invariant is the form.
    Classify {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Genus invariants, characters and the genus conditions.
    Genus {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Decide whether a form is a refined Humbert invariant.
    HumbertStatus {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Forms of the D6 (base 444) or D4 (base 404) families primitively representing c.
    Intersect { base: String, c: i64 },
    /// Binary forms whose Humbert schemes make up H_n and H_m's intersection.
    PairIntersect { n: i64, m: i64 },
    /// Elliptic subcovers of degree n.
    Subcovers {
        #[arg(allow_hyphen_values = true)]
        form: String,
        n: i64,
    },
    /// disc(q) / 16.
    DegreeDisc {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Class number of a negative discriminant.
    ClassNumber {
        #[arg(allow_negative_numbers = true)]
        d: i64,
    },
    /// Number of D6 curves with an elliptic subcover of odd degree m.
    D6Count { m: i64 },
    /// Replay the checks showing H([4,0,4]) and H([9,6,13]) do not meet.
    Certificate,
    /// Write the group, genus and automorphism tables to --out (default: tables).
    Tables,
    /// Classify every reduced form with |disc| <= max_disc.
    Sweep { max_disc: i64 },
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Internal(_) | Error::CertificateFailed(_) => 1,
        _ => 3,
    }
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn ternary(s: &str) -> Result<TernaryForm> {
    s.parse()
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<String> {
    if cli.json {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(text())
    }
}

fn load_class_numbers(path: Option<&Path>) -> Result<ClassNumberTable> {
    match path {
        Some(p) if p.exists() => {
            let text = fs::read_to_string(p).map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))?;
            ClassNumberTable::from_text(&text)
        }
        _ => Ok(ClassNumberTable::new()),
    }
}

fn save_class_numbers(path: Option<&Path>, table: &ClassNumberTable) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, table.to_text()).map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Reduce { form } => match form.parse::<Form>()? {
            Form::Ternary(q) => {
                let r = reduce_ternary(&q)?;
                emit(cli, &r, || format!("reduced: {}\ntransform: {:?}\n", r.reduced_form, r.transform.rows))
            }
            Form::Binary(q) => {
                let r = reduce_binary(&q)?;
                emit(cli, &r, || format!("reduced: {}\ntransform: {:?}\n", r.reduced_form, r.transform.rows))
            }
        },
        Command::Equiv { first, second } => match (first.parse::<Form>()?, second.parse::<Form>()?) {
            (Form::Ternary(a), Form::Ternary(b)) => {
                let u = equivalent(&a, &b)?;
                let v = json!({ "equivalent": u.is_some(), "transform": u });
                emit(cli, &v, || match u {
                    Some(u) => format!("equivalent: yes\ntransform: {:?}\n", u.rows),
                    None => "equivalent: no\n".into(),
                })
            }
            (Form::Binary(a), Form::Binary(b)) => {
                let eq = binary_equivalent(&a, &b)?;
                emit(cli, &json!({ "equivalent": eq }), || format!("equivalent: {}\n", if eq { "yes" } else { "no" }))
            }
            _ => Err(Error::Parse("both forms must have the same dimension".into())),
        },
        Command::Aut { form, elements } => {
            let q = ternary(form)?;
            let g = automorphism_group(&q)?;
            let pattern = matching_pattern(&q).ok().flatten();
            let v = json!({
                "order": g.order(),
                "proper_order": g.proper_count,
                "predicted_proper_order": pattern.map(|p| p.order),
                "pattern": pattern.map(|p| p.pattern),
                "elements": if *elements { Some(&g.elements) } else { None },
            });
            emit(cli, &v, || {
                let mut s = format!("|Aut| = {}\n|Aut+| = {}\n", g.order(), g.proper_count);
                match pattern {
                    Some(p) => {
                        let _ = writeln!(s, "predicted |Aut+| = {} from {}", p.order, p.pattern);
                    }
                    None => s.push_str("predicted |Aut+|: no closed form applies\n"),
                }
                if *elements {
                    for e in &g.elements {
                        let _ = writeln!(s, "{:?}", e.rows);
                    }
                }
                s
            })
        }
        Command::Rep { form, n, primitive } => match form.parse::<Form>()? {
            Form::Ternary(q) => {
                let r = representations(&q, *n, *primitive)?;
                emit(cli, &r, || format!("{} vectors, {} primitive\n{:?}\n", r.count(), r.primitive_count(), r.vectors))
            }
            Form::Binary(q) => {
                let r = binary_representations(&q, *n, *primitive)?;
                emit(cli, &r, || format!("{} vectors, {} primitive\n{:?}\n", r.count(), r.primitive_count(), r.vectors))
            }
        },
        Command::Classify { form } => {
            let q = ternary(form)?;
            let c = curve_classification(&q, cli.limit)?;
            emit(cli, &c, || {
                let tag = c.lists.tag.map(|t| format!("{t:?}")).unwrap_or_else(|| "none".into());
                format!(
                    "group: {}\nr_4: {}\na: {}\n|Aut+|: {}\nk: {}\nreduced: {}\nlist: {tag}\n",
                    c.group, c.r4, c.a, c.proper_aut_order, c.k, c.reduced
                )
            })
        }
        Command::Genus { form } => {
            let q = ternary(form)?;
            let g = genus_data(&q)?;
            let cond = genus_conditions(&q, cli.limit)?;
            let v = json!({ "genus": g, "conditions": cond });
            emit(cli, &v, || {
                let chars: Vec<String> = g.characters.iter().map(|c| c.to_string()).collect();
                format!(
                    "adjoint: {}\n|I1|: {}\nI2: {}\nreciprocal: {}\ncharacters: {}\ncharacter condition: {}\nI2 condition: {} (witness {:?}, searched to {})\n",
                    g.adjoint,
                    g.abs_i1,
                    g.i2,
                    g.reciprocal,
                    chars.join(", "),
                    cond.chi_condition,
                    cond.i2_condition,
                    cond.i2_witness,
                    cond.search_limit
                )
            })
        }
        Command::HumbertStatus { form } => {
            let q = ternary(form)?;
            let s = refined_humbert_status(&q, cli.limit)?;
            emit(cli, &s, || {
                format!("verdict: {}\npath: {:?}\njacobian: {}\n", s.verdict, s.path, s.jacobian)
            })
        }
        Command::Intersect { base, c } => {
            let base: HumbertBase = base.parse()?;
            let r = intersect_with_humbert(base, *c)?;
            emit(cli, &r, || {
                let mut s = String::new();
                for m in &r.members {
                    let _ = writeln!(s, "{} = {}  (disc {}, c at {:?})", m.label, m.form, m.disc, m.target_witness);
                }
                if r.members.is_empty() {
                    s.push_str("empty\n");
                }
                s
            })
        }
        Command::PairIntersect { n, m } => {
            let r = humbert_pair_intersection(*n, *m, cli.limit)?;
            emit(cli, &r, || {
                let mut s = String::new();
                for f in &r.members {
                    let _ = writeln!(s, "{}  (square {} at {:?})", f.form, f.square.0, f.square.1);
                }
                for f in &r.filtered_unknown {
                    let _ = writeln!(s, "{}  (no square found below {}: unknown)", f, r.square_bound);
                }
                if r.members.is_empty() && r.filtered_unknown.is_empty() {
                    s.push_str("empty\n");
                }
                s
            })
        }
        Command::Subcovers { form, n } => {
            let q = ternary(form)?;
            let r = subcovers(&q, *n)?;
            emit(cli, &r, || format!("degree {}: exists {}, count {}\n", r.degree, r.exists, r.count))
        }
        Command::DegreeDisc { form } => {
            let d = degree_form_disc(&ternary(form)?)?;
            emit(cli, &json!({ "degree_form_disc": d }), || format!("{d}\n"))
        }
        Command::ClassNumber { d } => {
            let mut table = load_class_numbers(cli.cache.as_deref())?;
            let h = table.get_or_compute(*d)?;
            debug_assert_eq!(h, class_number(*d)?);
            save_class_numbers(cli.cache.as_deref(), &table)?;
            emit(cli, &json!({ "d": d, "h": h }), || format!("h({d}) = {h}\n"))
        }
        Command::D6Count { m } => {
            let mut table = load_class_numbers(cli.cache.as_deref())?;
            let r = d6_locus_count(*m, &mut table)?;
            save_class_numbers(cli.cache.as_deref(), &table)?;
            let note = "class number formula; checked against an independent count only at m = 3";
            let v = json!({ "count": r, "note": note });
            emit(cli, &v, || {
                let mut s = format!("total: {}\n", r.total);
                for t in &r.terms {
                    let _ = writeln!(s, "q_{{{},{}}}: h({}) = {} -> {}", t.family, t.c, t.class_disc, t.h, t.contribution);
                }
                let _ = writeln!(s, "({note})");
                s
            })
        }
        Command::Certificate => {
            let c = empty_intersection_certificate()?;
            emit(cli, &c, || {
                let mut s = format!("H({}) and H({}) do not meet\n", c.q1, c.q2);
                for ch in &c.checks {
                    let _ = writeln!(s, "pass  {}: {}", ch.case, ch.detail);
                }
                s
            })
        }
        Command::Tables => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("tables"));
            let written = tables::regenerate_tables(&dir)?;
            let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            let mismatched: Vec<&String> = names
                .iter()
                .filter(|p| fs::read_to_string(p).is_ok_and(|t| t.contains("MISMATCH") || t.contains("inconsistent")))
                .collect();
            let v = json!({ "written": names, "mismatched": mismatched });
            emit(cli, &v, || {
                let mut s = String::new();
                for n in &names {
                    let flag = if mismatched.contains(&n) { "  MISMATCH" } else { "" };
                    let _ = writeln!(s, "wrote {n}{flag}");
                }
                s
            })
        }
        Command::Sweep { max_disc } => {
            let rep = sweep::sweep(*max_disc, cli.cache.as_deref(), cli.jobs, cli.limit)?;
            emit(cli, &rep, || {
                let mut s = format!("forms with |disc| <= {}: {} ({} newly classified)\n", rep.max_disc, rep.forms, rep.newly_classified);
                for (k, v) in &rep.by_status {
                    let _ = writeln!(s, "{k}: {v}");
                }
                let _ = writeln!(s, "jacobian: {}", rep.jacobian);
                for (k, v) in &rep.by_group {
                    let _ = writeln!(s, "  {k}: {v}");
                }
                let ex: Vec<String> = rep.exceptional_forms.iter().map(|f| f.to_string()).collect();
                let _ = writeln!(s, "GL2_3 / C3semiD4 forms: {}", ex.join(", "));
                let _ = writeln!(s, "closed-form orders checked: {}", rep.predicted);
                let _ = writeln!(s, "violations: {}", rep.violations.total());
                s
            })
        }
    }
}

