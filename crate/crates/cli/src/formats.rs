//! Serialization of the core types: diagrams and reports as JSON, height
//! tables as JSON lines, matrices as CSV of polynomial strings, branching
//! graphs as DOT.

use std::fmt::Write as _;
use std::str::FromStr;

use hbrauer_core::bratteli::{DimensionAudit, RolletGraph};
use hbrauer_core::diagram::{PairPartition, ScaledDiagram, SetPartition};
use hbrauer_core::exact::{Factorization, PolyMatrix, RootSite};
use hbrauer_core::height::{ClosureReport, Exactness, HeightResult, HeightTable, LeftSimpleReport};
use hbrauer_core::reptheory::{GlobalizationReport, RestrictionReport, SemisimplicityReport};
use hbrauer_core::SliceWord;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn err(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

pub fn scaled_diagram_to_json(d: &ScaledDiagram) -> Value {
    json!({
        "n": d.diagram.n(),
        "m": d.diagram.m(),
        "delta_exp": d.delta_exp,
        "blocks": d.diagram.blocks(),
    })
}

pub fn scaled_diagram_from_json(v: &Value) -> Result<ScaledDiagram, FormatError> {
    let n = v["n"].as_u64().ok_or_else(|| err("missing n"))? as usize;
    let m = v["m"].as_u64().ok_or_else(|| err("missing m"))? as usize;
    let delta_exp = v
        .get("delta_exp")
        .and_then(Value::as_u64)
        .unwrap_or(0) as usize;
    let blocks_v = v["blocks"].as_array().ok_or_else(|| err("missing blocks"))?;
    let mut blocks = Vec::new();
    for b in blocks_v {
        let arr = b.as_array().ok_or_else(|| err("block must be an array"))?;
        let mut block = Vec::new();
        for x in arr {
            block.push(x.as_i64().ok_or_else(|| err("labels are integers"))? as i32);
        }
        blocks.push(block);
    }
    let diagram = SetPartition::new(n, m, blocks).map_err(|e| err(e.to_string()))?;
    Ok(ScaledDiagram::with_exp(diagram, delta_exp))
}

pub fn parse_diagram_arg(s: &str) -> Result<ScaledDiagram, FormatError> {
    let v: Value = serde_json::from_str(s).map_err(|e| err(format!("bad diagram JSON: {e}")))?;
    scaled_diagram_from_json(&v)
}

fn pairs_json(p: &PairPartition) -> Value {
    Value::from(p.blocks().to_vec())
}

pub fn height_record(p: &PairPartition, r: &HeightResult) -> Value {
    json!({
        "pairs": pairs_json(p),
        "height": r.value,
        "cert": r.certificate.to_string(),
        "exact": matches!(r.exactness, Exactness::Exact),
    })
}

/// One JSON object per line, diagrams in canonical order.
pub fn table_to_jsonl(table: &HeightTable) -> String {
    let mut out = String::new();
    for (p, r) in &table.entries {
        let _ = writeln!(out, "{}", height_record(p, r));
    }
    out
}

pub fn table_from_jsonl(n: usize, m: usize, text: &str) -> Result<HeightTable, FormatError> {
    let mut entries = std::collections::BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| err(format!("bad record: {e}")))?;
        let pairs = v["pairs"].as_array().ok_or_else(|| err("missing pairs"))?;
        let mut blocks = Vec::new();
        for b in pairs {
            let arr = b.as_array().ok_or_else(|| err("pair must be an array"))?;
            blocks.push(
                arr.iter()
                    .map(|x| x.as_i64().unwrap_or(0) as i32)
                    .collect::<Vec<_>>(),
            );
        }
        let diagram = SetPartition::new(n, m, blocks).map_err(|e| err(e.to_string()))?;
        let p = PairPartition::new(diagram).map_err(|e| err(e.to_string()))?;
        let cert = SliceWord::from_str(v["cert"].as_str().ok_or_else(|| err("missing cert"))?)
            .map_err(|e| err(e.to_string()))?;
        let value = v["height"].as_i64().ok_or_else(|| err("missing height"))?;
        let exact = v["exact"].as_bool().unwrap_or(false);
        entries.insert(
            p,
            HeightResult {
                value,
                certificate: cert,
                exactness: if exact {
                    Exactness::Exact
                } else {
                    Exactness::UpperBound
                },
            },
        );
    }
    Ok(HeightTable { n, m, entries })
}

pub fn histogram_json(table: &HeightTable) -> Value {
    let mut map = Map::new();
    for (h, count) in table.histogram() {
        map.insert(h.to_string(), Value::from(count));
    }
    Value::Object(map)
}

pub fn matrix_to_csv(m: &PolyMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<num_bigint::BigInt>()
            .map_err(|_| err(format!("bad rational: {s}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((a, b)) => Ok(BigRational::new(parse_int(a)?, parse_int(b)?)),
    }
}

pub fn roots_json(f: &Factorization) -> Value {
    let roots: Vec<Value> = f
        .roots()
        .into_iter()
        .map(|(site, mult)| match site {
            RootSite::Rational(r) => json!({
                "kind": "rational",
                "value": rational_to_string(&r),
                "mult": mult,
            }),
            RootSite::QuadraticPair { a, b, c } => json!({
                "kind": "quadratic",
                "poly": format!("{}*d^2 + {}*d + {}", a, b, c),
                "mult": mult,
            }),
        })
        .collect();
    json!({
        "content": f.content.to_string(),
        "roots": roots,
        "residual": f.residual.as_ref().map(|p| p.to_string()),
    })
}

pub fn semisimplicity_json(r: &SemisimplicityReport) -> Value {
    let labels: Vec<Value> = r
        .labels
        .iter()
        .map(|lr| {
            json!({
                "p": lr.label.p,
                "lambda": lr.label.lambda.parts(),
                "dim": lr.dim,
                "gram_det": lr.gram_det.to_string(),
                "factorization": roots_json(&lr.factorization),
                "rank_generic": lr.rank_generic,
                "ranks_at": lr.ranks_at.iter().map(|(x, rank)| {
                    json!({"delta": rational_to_string(x), "rank": rank})
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "l": r.l,
        "n": r.n,
        "algebra_dim": r.algebra_dim,
        "dim_square_sum": r.dim_square_sum,
        "dims_consistent": r.dims_consistent(),
        "generically_full_rank": r.generically_full_rank(),
        "vanishing": r.vanishing.iter().map(rational_to_string).collect::<Vec<_>>(),
        "labels": labels,
    })
}

pub fn closure_json(r: &ClosureReport, l: i64, n: usize, seed: Option<u64>) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "p": pairs_json(&v.p),
                "q": pairs_json(&v.q),
                "hp": v.hp,
                "hq": v.hq,
                "hpq": v.hpq,
            })
        })
        .collect();
    json!({
        "suite": "closure",
        "l": l,
        "n": n,
        "checked": r.checked,
        "seed": seed,
        "violations": violations,
        "pass": r.violations.is_empty(),
    })
}

pub fn audit_json(a: &DimensionAudit) -> Value {
    let lines: Vec<Value> = a
        .lines
        .iter()
        .map(|line| {
            json!({
                "p": line.label.p,
                "lambda": line.label.lambda.parts(),
                "walks": line.walk_count.to_string(),
                "dim": line.module_dim,
            })
        })
        .collect();
    json!({
        "suite": "dims",
        "l": a.l,
        "n": a.n,
        "closed_walks": a.closed_walks.to_string(),
        "algebra_dim": a.algebra_dim,
        "lines": lines,
        "pass": a.passes(),
    })
}

pub fn blob_json(r: &LeftSimpleReport, n: usize, expected: usize) -> Value {
    json!({
        "suite": "blob",
        "n": n,
        "count": r.count,
        "expected": expected,
        "truncated": r.truncated,
        "rejected": r.rejected.iter().map(|(p, w)| json!({
            "pairs": pairs_json(p),
            "witness": w.to_string(),
        })).collect::<Vec<_>>(),
        "pass": r.count == expected,
    })
}

/// The ordered basis of a standard module: each element pairs a half
/// diagram with a Specht vector index.
pub fn module_basis_json(module: &hbrauer_core::reptheory::StandardModule) -> Value {
    let mut out = Vec::new();
    for half in &module.halves {
        for s in 0..module.specht.dim() {
            out.push(json!({
                "half": half.blocks(),
                "specht": s,
            }));
        }
    }
    Value::from(out)
}

pub fn restriction_json(r: &RestrictionReport) -> Value {
    json!({
        "l": r.l,
        "n": r.n_small,
        "p": r.label.p,
        "lambda": r.label.lambda.parts(),
        "module_dim": r.module_dim,
        "terms": r.terms.iter().map(|(lab, d)| json!({
            "p": lab.p, "lambda": lab.lambda.parts(), "dim": d
        })).collect::<Vec<_>>(),
        "dims_match": r.dims_match,
        "submodule_stable": r.submodule_stable,
    })
}

pub fn globalization_json(g: &GlobalizationReport) -> Value {
    json!({
        "l": g.l,
        "n": g.n,
        "p": g.label.p,
        "lambda": g.label.lambda.parts(),
        "corner_rank": g.corner_rank,
        "expected": g.expected,
        "pass": g.matches(),
    })
}

fn vertex_name(p: usize, lambda: &hbrauer_core::symgrp::IntPartition) -> String {
    let parts: Vec<String> = lambda.parts().iter().map(|x| x.to_string()).collect();
    format!("{}:[{}]", p, parts.join(","))
}

pub fn rollet_to_dot(g: &RolletGraph) -> String {
    let mut out = String::from("graph rollet {\n");
    for v in &g.vertices {
        let _ = writeln!(out, "  \"{}\";", vertex_name(v.p, &v.lambda));
    }
    for (i, v) in g.vertices.iter().enumerate() {
        for &j in &g.adjacency[i] {
            if j > i {
                let w = &g.vertices[j];
                let _ = writeln!(
                    out,
                    "  \"{}\" -- \"{}\";",
                    vertex_name(v.p, &v.lambda),
                    vertex_name(w.p, &w.lambda)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn rollet_to_json(g: &RolletGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| json!({"p": v.p, "lambda": v.lambda.parts()}))
        .collect();
    let edges: Vec<Value> = g
        .vertices
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            g.adjacency[i]
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| json!([i, j]))
        })
        .collect();
    json!({"l": g.l, "radius": g.radius, "vertices": vertices, "edges": edges})
}
