use serde_json::{json, Value as Json};

use super::parse::{Pos, Session, Value};
use super::run::RunOptions;
use crate::error::Error;

/// The JSON document of a run plus the errors met along the way.
#[derive(Clone, Debug)]
pub struct Report {
    pub document: Json,
    pub errors: Vec<Error>,
}

impl Report {
    pub(crate) fn new(
        session: &Session,
        opts: &RunOptions,
        blocks: Vec<Json>,
        errors: Vec<Error>,
    ) -> Report {
        let failed = blocks.iter().filter(|b| b["status"] == "error").count();
        let mut provenance = json!({
            "tool": "bsw",
            "version": env!("CARGO_PKG_VERSION"),
            "seed": opts.seed,
            "budget": opts.budget,
        });
        if let Some(t) = opts.timestamp {
            provenance["timestamp"] = json!(t);
        }
        let ring = session.ring.as_ref().map(|r| {
            json!({
                "variables": r.names(),
                "weights": r.weights(),
                "order": r.order().name(),
            })
        });
        let semigroup = session.semigroup.as_ref().map(|s| {
            json!({
                "generators": s.generators(),
                "conductor": s.conductor(),
                "gaps": s.gaps(),
            })
        });
        let bindings: Vec<Json> = session
            .bindings
            .iter()
            .map(|b| {
                let (kind, value) = match &b.value {
                    Value::Ideal(i) => (
                        "ideal",
                        json!(i
                            .generators()
                            .iter()
                            .map(|g| g.to_string())
                            .collect::<Vec<_>>()),
                    ),
                    Value::Poly(p) => ("poly", json!(p.to_string())),
                    Value::GermIdeal(a) => ("germ ideal", json!(a.shifts())),
                };
                json!({ "name": b.name, "kind": kind, "value": value, "position": b.pos })
            })
            .collect();
        let document = json!({
            "provenance": provenance,
            "ring": ring,
            "semigroup": semigroup,
            "bindings": bindings,
            "commands": blocks,
            "totals": { "commands": blocks.len(), "failed": failed },
        });
        Report { document, errors }
    }

    /// Report for a session that did not parse.
    pub fn parse_failure(err: &Error, pos: Pos, opts: &RunOptions) -> Report {
        let mut provenance = json!({
            "tool": "bsw",
            "version": env!("CARGO_PKG_VERSION"),
            "seed": opts.seed,
            "budget": opts.budget,
        });
        if let Some(t) = opts.timestamp {
            provenance["timestamp"] = json!(t);
        }
        Report {
            document: json!({
                "provenance": provenance,
                "parse_error": error_block(err, Some(pos)),
                "commands": [],
                "totals": { "commands": 0, "failed": 0 },
            }),
            errors: vec![err.clone()],
        }
    }

    /// `0` when every command succeeded, `3` if any ran out of a resource,
    /// otherwise `2`.
    pub fn exit_code(&self) -> i32 {
        if self.errors.is_empty() {
            0
        } else if self.errors.iter().any(Error::is_resource) {
            3
        } else {
            2
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Removes the timestamp, the one field allowed to differ between runs.
pub fn strip_timestamp(doc: &mut Json) {
    if let Some(p) = doc.get_mut("provenance").and_then(Json::as_object_mut) {
        p.remove("timestamp");
    }
}

pub(crate) fn error_block(e: &Error, pos: Option<Pos>) -> Json {
    let mut b = json!({
        "kind": e.kind(),
        "message": e.to_string(),
        "position": pos,
    });
    if let Error::Budget {
        limit,
        basis_len,
        pending_pairs,
        partial_basis,
    } = e
    {
        b["budget"] = json!({
            "limit": limit,
            "basis_len": basis_len,
            "pending_pairs": pending_pairs,
            "partial_basis": partial_basis,
        });
    }
    b
}

fn show(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        Json::Null => "none".into(),
        other => other.to_string(),
    }
}

/// One line describing a command block, read off its JSON.
pub(crate) fn summarize_block(b: &Json) -> String {
    let src = show(&b["source"]);
    if b["status"] == "error" {
        return format!(
            "{src}: {} error: {}",
            show(&b["error"]["kind"]),
            show(&b["error"]["message"])
        );
    }
    let r = &b["result"];
    let detail = match b["command"].as_str().unwrap_or("") {
        "resolve" | "koszul" => format!(
            "ranks {}, acyclic {}",
            show(&r["complex"]["ranks"]),
            show(&r["acyclic"])
        ),
        "strata" => {
            let parts: Vec<String> = r["strata"]["strata"]
                .as_array()
                .map(|a| {
                    a.iter()
                        .map(|s| {
                            format!(
                                "Z^{} dim {} codim {}",
                                show(&s["r"]),
                                show(&s["dim"]),
                                show(&s["codim_in_z"])
                            )
                        })
                        .collect()
                })
                .unwrap_or_default();
            format!("d = {}, {}", show(&r["strata"]["d"]), parts.join("; "))
        }
        "check-cm" => format!(
            "Cohen-Macaulay {}, depth {}",
            show(&r["is_cm"]),
            show(&r["depth_lower"])
        ),
        "check-normal" | "check-bs" => match &r["witness"] {
            Json::Null => format!("holds {}", show(&r["holds"])),
            w => format!(
                "holds {}, fails at r = {} with codim {} < {}",
                show(&r["holds"]),
                show(&w["r"]),
                show(&w["codim"]),
                show(&w["required"])
            ),
        },
        "member" | "germ member" | "germ closure-member" => {
            format!("member {}", show(&r["member"]))
        }
        "dim" => format!("dim {}", show(&r["dim"])),
        "closure" => format!("closure {}", show(&r["closure"])),
        "bs-verify-monomial" => format!(
            "exponent {}, holds {}, counterexample {}",
            show(&r["exponent"]),
            show(&r["holds"]),
            show(&r["counterexample"])
        ),
        "germ exponent" => format!("exponent {}", show(&r["exponent"])),
        "germ mu" => format!(
            "mu {} (witness {}, ell {})",
            show(&r["mu"]),
            show(&r["witness"]["ideal"]),
            show(&r["witness"]["ell"])
        ),
        "loja" => format!(
            "slope {:.4}, residual {:.2e}, {} points",
            r["slope"].as_f64().unwrap_or(f64::NAN),
            r["residual"].as_f64().unwrap_or(f64::NAN),
            show(&r["n_points"])
        ),
        _ => String::new(),
    };
    format!("{src}: {detail}")
}

/// Plain-text rendering of a report document.
pub fn human_summary(doc: &Json) -> String {
    let mut out = String::new();
    if let Some(e) = doc.get("parse_error") {
        let p = &e["position"];
        out.push_str(&format!(
            "parse error at line {}, column {}: {}\n",
            show(&p["line"]),
            show(&p["col"]),
            show(&e["message"])
        ));
        return out;
    }
    for b in doc["commands"].as_array().into_iter().flatten() {
        let p = &b["position"];
        out.push_str(&format!(
            "[{}:{}] {}\n",
            show(&p["line"]),
            show(&p["col"]),
            show(&b["summary"])
        ));
    }
    out.push_str(&format!(
        "{} commands, {} failed\n",
        show(&doc["totals"]["commands"]),
        show(&doc["totals"]["failed"])
    ));
    out
}
