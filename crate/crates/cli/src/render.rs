//! Report serialization. JSON is the stable contract; CSV and the human
//! layout are conveniences.

use std::fmt::Write;

use frey_core::denes::DenesReport;
use frey_core::frey::Analysis;
use frey_core::model::WeierstrassModel;
use frey_core::search::{ApReport, SearchReport, VerifyReport};
use frey_core::tate::ConductorReport;
use frey_core::traces::{self, CongruenceReport, TraceRecord};
use serde::Serialize;

use crate::FormatArg;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Human => Format::Human,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema_version: u32,
    toolkit_version: &'static str,
    command: &'static str,
    report: &'a T,
}

#[derive(Serialize)]
struct TraceTable<'a> {
    model: &'a WeierstrassModel,
    records: &'a [TraceRecord],
}

fn json<T: Serialize>(command: &'static str, report: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION"),
        command,
        report,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

/// The serde tag of a unit enum variant.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v).expect("enum serializes") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn kv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        writeln!(out, "{k},{v}").unwrap();
    }
    out
}

fn aligned(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

pub fn analysis(r: &Analysis, fmt: Format) -> String {
    if fmt == Format::Json {
        return json("analyze", r);
    }
    let inv = &r.invariants;
    let rows = [
        ("p", r.params.p.to_string()),
        ("alpha", r.params.alpha.to_string()),
        ("a", r.params.a.to_string()),
        ("b", r.params.b.to_string()),
        ("c", r.params.c.to_string()),
        ("model", r.model.to_string()),
        ("t", inv.t.to_string()),
        ("u", inv.u.to_string()),
        ("odd_radical", inv.odd_radical.to_string()),
        ("conductor", inv.conductor.to_string()),
        ("oracle_conductor", r.oracle.conductor.to_string()),
        ("oracle_agrees", r.oracle.agrees.to_string()),
        ("semistable", inv.semistable.to_string()),
        ("cartan_type", tag(&r.cartan_type)),
        ("is_trivial_level", r.is_trivial_level.to_string()),
        ("is_trivial_solution", r.is_trivial_solution.to_string()),
        ("odd_valuations_divisible_by_p", r.odd_valuations_divisible_by_p.to_string()),
    ];
    match fmt {
        Format::Csv => kv(&rows),
        _ => aligned(&rows),
    }
}

/// One JSON object per line carrying exactly the report fields.
pub fn denes(reports: &[DenesReport], fmt: Format) -> String {
    let mut out = String::new();
    match fmt {
        Format::Json => {
            for r in reports {
                out.push_str(&serde_json::to_string(r).expect("reports serialize"));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("p,is_regular,irregular_indices,ord2,order_condition,wieferich_violation,criterion_holds\n");
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.p,
                    r.is_regular,
                    join(&r.irregular_indices, ";"),
                    r.ord2,
                    r.order_condition,
                    r.wieferich_violation,
                    r.criterion_holds
                )
                .unwrap();
            }
        }
        Format::Human => {
            writeln!(out, "{:>6} {:>8} {:>6} {:>10} {:>8}  failing", "p", "regular", "ord2", "wieferich", "holds").unwrap();
            for r in reports {
                let failing: Vec<String> = r.failing_conditions().iter().map(tag).collect();
                writeln!(
                    out,
                    "{:>6} {:>8} {:>6} {:>10} {:>8}  {}",
                    r.p,
                    r.is_regular,
                    r.ord2,
                    r.wieferich_violation,
                    r.criterion_holds,
                    failing.join(",")
                )
                .unwrap();
            }
        }
    }
    out
}

pub fn search(r: &SearchReport, fmt: Format) -> String {
    match fmt {
        Format::Json => json("search", r),
        Format::Csv => {
            let mut out = String::from("a,b,c,content,trivial\n");
            for s in &r.solutions {
                writeln!(out, "{},{},{},{},{}", s.a, s.b, s.c, s.content, s.trivial).unwrap();
            }
            out
        }
        Format::Human => {
            let s = &r.spec;
            let mut out = format!(
                "a^{p} + {l}^{al}·b^{p} + c^{p} = 0, H = {h}\nclaim: {} ({}, {})\n",
                tag(&r.claim.expectation),
                r.claim.basis,
                tag(&r.claim.status),
                p = s.p,
                l = s.base,
                al = s.alpha,
                h = s.height,
            );
            for s in &r.solutions {
                writeln!(out, "  ({}, {}, {})  content {}{}", s.a, s.b, s.c, s.content, if s.trivial { "  trivial" } else { "" }).unwrap();
            }
            writeln!(out, "{} solution(s); conforms: {}", r.solutions.len(), r.conforms).unwrap();
            out
        }
    }
}

pub fn ap(r: &ApReport, fmt: Format) -> String {
    match fmt {
        Format::Json => json("ap-search", r),
        Format::Csv => {
            let header: Vec<String> = (1..=r.k).map(|i| format!("x{i}")).collect();
            let mut out = header.join(",") + "\n";
            for prog in &r.progressions {
                writeln!(out, "{}", join(prog, ",")).unwrap();
            }
            out
        }
        Format::Human => {
            let mut out = format!(
                "{}-term progressions of {}-th powers, bases ≤ {}\nclaim: {} ({}, {})\n",
                r.k,
                r.n,
                r.height,
                tag(&r.claim.expectation),
                r.claim.basis,
                tag(&r.claim.status)
            );
            for prog in &r.progressions {
                writeln!(out, "  {}", join(prog, " ")).unwrap();
            }
            writeln!(out, "{} progression(s); conforms: {}", r.progressions.len(), r.conforms).unwrap();
            out
        }
    }
}

pub fn verify(r: &VerifyReport, fmt: Format) -> String {
    match fmt {
        Format::Json => json("verify", r),
        Format::Csv => {
            let mut out = String::from("p,alpha,expectation,basis,status,solutions,conforms\n");
            for e in &r.entries {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    e.p,
                    e.alpha,
                    tag(&e.claim.expectation),
                    e.claim.basis,
                    tag(&e.claim.status),
                    e.solutions,
                    e.conforms
                )
                .unwrap();
            }
            out
        }
        Format::Human => {
            let mut out = format!("H = {}\n", r.height);
            for e in &r.entries {
                writeln!(
                    out,
                    "  p = {:<4} α = {:<3} {:<13} {:<17} {:<11} {} solution(s)  {}",
                    e.p,
                    e.alpha,
                    tag(&e.claim.expectation),
                    e.claim.basis,
                    tag(&e.claim.status),
                    e.solutions,
                    if e.conforms { "ok" } else { "COUNTEREXAMPLE" }
                )
                .unwrap();
            }
            for (p, a) in &r.skipped {
                writeln!(out, "  p = {p:<4} α = {a:<3} skipped (α ≥ p)").unwrap();
            }
            writeln!(out, "all conform: {}", r.all_conform).unwrap();
            out
        }
    }
}

pub fn traces(model: &WeierstrassModel, records: &[TraceRecord], fmt: Format) -> String {
    match fmt {
        Format::Json => json("traces", &TraceTable { model, records }),
        Format::Csv => traces::to_csv(records),
        Format::Human => {
            let mut out = format!("[{model}]\n");
            for r in records {
                let a = r.a_l.map_or_else(|| "bad".to_string(), |a| a.to_string());
                writeln!(out, "{:>8} {:>6}", r.l, a).unwrap();
            }
            out
        }
    }
}

pub fn congruence(r: &CongruenceReport, fmt: Format) -> String {
    if fmt == Format::Json {
        return json("congruence", r);
    }
    let v = r.first_violation.as_ref();
    let rows = [
        ("p", r.p.to_string()),
        ("l_max", r.l_max.to_string()),
        ("compared", r.compared_primes.len().to_string()),
        ("congruent", r.congruent.to_string()),
        ("violation_l", v.map_or(String::new(), |v| v.l.to_string())),
        ("violation_a_l_1", v.map_or(String::new(), |v| v.a_l_1.to_string())),
        ("violation_a_l_2", v.map_or(String::new(), |v| v.a_l_2.to_string())),
    ];
    match fmt {
        Format::Csv => kv(&rows),
        _ => aligned(&rows) + &r.disclaimer + "\n",
    }
}

pub fn conductor(r: &ConductorReport, fmt: Format) -> String {
    match fmt {
        Format::Json => json("conductor", r),
        Format::Csv => {
            let mut out = String::from("prime,conductor_exponent,min_disc_valuation,kodaira_type,reduction\n");
            for d in &r.local {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    d.prime,
                    d.conductor_exponent,
                    d.min_disc_valuation,
                    d.kodaira_type,
                    tag(&d.reduction)
                )
                .unwrap();
            }
            out
        }
        Format::Human => {
            let mut out = format!("[{}]  conductor {}\n", r.model, r.conductor);
            for d in &r.local {
                writeln!(
                    out,
                    "{:>8}  f = {}  v(Δmin) = {:<3} {:<5} {}",
                    d.prime,
                    d.conductor_exponent,
                    d.min_disc_valuation,
                    d.kodaira_type.to_string(),
                    tag(&d.reduction)
                )
                .unwrap();
            }
            out
        }
    }
}
