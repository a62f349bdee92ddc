//! Batch entry points behind the command-line interface: run configurations,
//! machine-readable reports with stable JSON schemas, text rendering, and
//! exit codes.
//!
//! Every report embeds its full configuration echo; re-running a json-mode
//! echo reproduces the report byte for byte. All randomness flows from the
//! configured seed.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::excess::{quadrics_to_m, random_admissible_input, run_excess, ExcessInput, ExcessReport};
use crate::field::{Elem, Field, FieldKind};
use crate::gw::GwClass;
use crate::ideals::GradedIdeal;
use crate::linalg::DenseMatrix;
use crate::oracle::{verify_theorem, OracleStatus, OracleVerdict};
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::residual::{conormal_freeness_check, kos_prime_homology, mult_form, scalarize, split_ideal};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit codes of the batch runner.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INADMISSIBLE: i32 = 2;
    pub const INCOMPLETE: i32 = 3;
    pub const FAILED: i32 = 4;
    pub const BUDGET_EXHAUSTED: i32 = 5;
}

/// Serializable field descriptor.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn from_field(field: &Field) -> FieldSpec {
        match field.kind() {
            FieldKind::Rationals => FieldSpec { kind: "rationals".into(), p: None, m: None, modulus: None },
            FieldKind::PrimeFinite => FieldSpec {
                kind: "prime".into(),
                p: Some(field.characteristic()),
                m: None,
                modulus: None,
            },
            FieldKind::ExtensionFinite => FieldSpec {
                kind: "extension".into(),
                p: Some(field.characteristic()),
                m: Some(field.extension_degree()),
                modulus: Some(field.modulus().to_vec()),
            },
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        match self.kind.as_str() {
            "rationals" => Ok(Field::rationals()),
            "prime" => Field::prime(self.p.ok_or_else(|| Error::InvalidInput("prime field needs p".into()))?),
            "extension" => {
                let p = self.p.ok_or_else(|| Error::InvalidInput("extension field needs p".into()))?;
                match &self.modulus {
                    Some(m) => Field::extension(p, m.clone()),
                    None => Field::build_extension(
                        p,
                        self.m.ok_or_else(|| Error::InvalidInput("extension field needs m".into()))?,
                        0,
                    ),
                }
            }
            other => Err(Error::InvalidInput(format!("unknown field kind {other:?}"))),
        }
    }

    /// Parse "rationals" | "q" | "<p>" | "<p>^<m>".
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rationals") || s == "q" || s == "Q" {
            return Ok(FieldSpec { kind: "rationals".into(), p: None, m: None, modulus: None });
        }
        if let Some((p, m)) = s.split_once('^') {
            let p: u64 = p.parse().map_err(|_| Error::InvalidInput(format!("bad field spec {s:?}")))?;
            let m: usize = m.parse().map_err(|_| Error::InvalidInput(format!("bad field spec {s:?}")))?;
            let field = Field::build_extension(p, m, 0)?;
            return Ok(FieldSpec::from_field(&field));
        }
        let p: u64 = s.parse().map_err(|_| Error::InvalidInput(format!("bad field spec {s:?}")))?;
        Ok(FieldSpec { kind: "prime".into(), p: Some(p), m: None, modulus: None })
    }
}

/// Full configuration of one batch run; echoed into every report.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunConfig {
    pub schema_version: u32,
    pub subcommand: String,
    pub field: FieldSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Resolved input payload (matrix, quadrics, generators, or gram).
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    pub format: String,
}

/// Result of a batch run: one or more JSON documents, a text rendering, and
/// the process exit code.
#[derive(Debug)]
pub struct RunOutcome {
    pub documents: Vec<Value>,
    pub text: String,
    pub exit_code: i32,
}

// ---- element / polynomial / matrix (de)serialization ----

pub fn elem_to_json(e: &Elem) -> Value {
    if let Some(r) = e.residue() {
        return json!(r);
    }
    if let Some(c) = e.coeffs() {
        return json!(c);
    }
    json!(e.rational_value().expect("rational").to_string())
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => {
            let x = n
                .as_i64()
                .ok_or_else(|| Error::InvalidInput(format!("bad element {n}")))?;
            Ok(field.from_i64(x))
        }
        Value::Array(arr) => {
            let coeffs: Vec<i64> = arr
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::InvalidInput("bad coefficient".into())))
                .collect::<Result<_>>()?;
            field.from_coeffs(&coeffs)
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a, b),
                None => (s.as_str(), "1"),
            };
            let num: i64 = num.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
            let den: i64 = den.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
            field.rational(num, den)
        }
        _ => Err(Error::InvalidInput("bad element encoding".into())),
    }
}

pub fn poly_to_json(p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!([m.exps(), elem_to_json(c)]))
        .collect();
    json!(terms)
}

pub fn poly_from_json(field: &Field, nvars: usize, v: &Value) -> Result<Poly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("polynomial must be a list of [exponents, coeff]".into()))?;
    let mut terms = Vec::new();
    for t in arr {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::InvalidInput("polynomial term must be [exponents, coeff]".into()))?;
        let exps: Vec<u32> = pair[0]
            .as_array()
            .ok_or_else(|| Error::InvalidInput("bad exponent vector".into()))?
            .iter()
            .map(|x| x.as_u64().map(|v| v as u32).ok_or_else(|| Error::InvalidInput("bad exponent".into())))
            .collect::<Result<_>>()?;
        if exps.len() != nvars {
            return Err(Error::InvalidInput(format!("exponent vector needs {nvars} entries")));
        }
        terms.push((Monomial::new(exps), elem_from_json(field, &pair[1])?));
    }
    Poly::from_terms(field.clone(), nvars, terms)
}

pub fn matrix_to_json(m: &DenseMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| elem_to_json(m.at(i, j))).collect()))
        .collect();
    json!(rows)
}

pub fn gw_to_json(c: &GwClass) -> Result<Value> {
    let inv = c.invariants()?;
    Ok(json!({
        "field": FieldSpec::from_field(c.field()),
        "positive": c.positive_entries().iter().map(elem_to_json).collect::<Vec<_>>(),
        "negative": c.negative_entries().iter().map(elem_to_json).collect::<Vec<_>>(),
        "rank": inv.rank,
        "disc_rep": elem_to_json(&inv.disc),
        "disc_is_square": inv.disc_is_square,
        "hyperbolic_copies": inv.hyperbolic_copies,
    }))
}

// ---- excess input parsing ----

/// Inline input for excess/verify: a matrix of 3-coefficient linear forms or
/// a list of quadrics as term lists.
pub fn parse_excess_input(field: &Field, input: &Value) -> Result<(ExcessInput, Option<Vec<Poly>>)> {
    let n = input
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("input needs \"n\"".into()))? as usize;
    if let Some(mat) = input.get("matrix") {
        let rows = mat
            .as_array()
            .ok_or_else(|| Error::InvalidInput("\"matrix\" must be an array of rows".into()))?;
        if rows.len() != n {
            return Err(Error::InvalidInput(format!("matrix needs {n} rows")));
        }
        let mut entries = Vec::with_capacity(n * (n - 2));
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == n - 2)
                .ok_or_else(|| Error::InvalidInput(format!("each matrix row needs {} forms", n - 2)))?;
            for form in row {
                let coeffs = form
                    .as_array()
                    .filter(|c| c.len() == 3)
                    .ok_or_else(|| Error::InvalidInput("linear forms are coefficient triples".into()))?;
                let elems: Vec<Elem> = coeffs
                    .iter()
                    .map(|c| elem_from_json(field, c))
                    .collect::<Result<_>>()?;
                entries.push(Poly::linear_form(field, &elems)?);
            }
        }
        let m = PolyMatrix::new(field.clone(), 3, n, n - 2, entries)?;
        return Ok((ExcessInput::new(field.clone(), n, m)?, None));
    }
    if let Some(qs) = input.get("quadrics") {
        let arr = qs
            .as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| Error::InvalidInput(format!("\"quadrics\" must list {n} quadrics")))?;
        let quadrics: Vec<Poly> = arr
            .iter()
            .map(|q| poly_from_json(field, n + 1, q))
            .collect::<Result<_>>()?;
        let m = quadrics_to_m(field, n, &quadrics)?;
        return Ok((ExcessInput::new(field.clone(), n, m)?, Some(quadrics)));
    }
    Err(Error::InvalidInput("input needs \"matrix\" or \"quadrics\"".into()))
}

pub fn excess_input_to_json(input: &ExcessInput) -> Value {
    let m = input.matrix();
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| {
                        let form = m.at(i, j);
                        let coeffs: Vec<Value> = (0..3)
                            .map(|v| elem_to_json(&form.coeff(&Monomial::var(3, v))))
                            .collect();
                        Value::Array(coeffs)
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "n": input.n(), "matrix": rows })
}

// ---- excess ----

pub fn excess_report_json(config: &RunConfig, report: &ExcessReport) -> Result<Value> {
    Ok(json!({
        "config": config,
        "cover_ok": report.cover_ok,
        "f": report.f.iter().map(poly_to_json).collect::<Vec<_>>(),
        "quotient_dims": report.quotient_dims,
        "total_quotient_dim": report.total_quotient_dim,
        "socle": poly_to_json(&report.socle),
        "trace_functional": report.trace_functional.iter().map(elem_to_json).collect::<Vec<_>>(),
        "bprime_gram": matrix_to_json(&report.bprime_gram),
        "radical_dim": report.radical_dim,
        "b_gram": matrix_to_json(&report.b_gram),
        "quotient_coords": report.quotient_coords,
        "gw_b": gw_to_json(&report.gw_b)?,
        "gw_euler": gw_to_json(&report.gw_euler)?,
        "expected_rank": report.expected_rank,
        "theorem_rhs": gw_to_json(&report.theorem_rhs)?,
    }))
}

fn excess_report_text(report: &ExcessReport) -> Result<String> {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "excess bundle Euler number over {}", report.input.field()).unwrap();
    writeln!(out, "  f_0 = {}", report.f[0]).unwrap();
    writeln!(out, "  f_1 = {}", report.f[1]).unwrap();
    writeln!(out, "  f_2 = {}", report.f[2]).unwrap();
    writeln!(out, "  quotient dims: {:?} (total {})", report.quotient_dims, report.total_quotient_dim).unwrap();
    writeln!(out, "  socle E = {}", report.socle).unwrap();
    writeln!(out, "  B' ({0}x{0}, radical {1}):", report.bprime_gram.rows(), report.radical_dim).unwrap();
    write!(out, "{}", report.bprime_gram).unwrap();
    writeln!(out, "  B on the quotient ({0}x{0}):", report.b_gram.rows()).unwrap();
    write!(out, "{}", report.b_gram).unwrap();
    let inv = report.gw_b.invariants()?;
    writeln!(
        out,
        "  class of B: {} (rank {}, disc {}{})",
        report.gw_b,
        inv.rank,
        inv.disc,
        match inv.disc_is_square {
            Some(true) => ", square",
            Some(false) => ", nonsquare",
            None => "",
        }
    )
    .unwrap();
    writeln!(out, "  Euler number (rank {}): {}", report.gw_euler.rank(), report.gw_euler).unwrap();
    writeln!(out, "  predicted point count: {}", report.theorem_rhs).unwrap();
    Ok(out)
}

pub fn run_excess_config(config: &RunConfig) -> Result<RunOutcome> {
    let field = config.field.to_field()?;
    let (input, _) = parse_excess_input(&field, &config.input)?;
    let mut config = config.clone();
    config.input = excess_input_to_json(&input);
    let report = run_excess(&input)?;
    Ok(RunOutcome {
        documents: vec![excess_report_json(&config, &report)?],
        text: excess_report_text(&report)?,
        exit_code: exit_code::SUCCESS,
    })
}

// ---- verify ----

fn verdict_json(config: &RunConfig, v: &OracleVerdict) -> Result<Value> {
    let points: Vec<Value> = v
        .contributions
        .iter()
        .map(|c| {
            Ok(json!({
                "degree": c.point.degree,
                "field": FieldSpec::from_field(&c.point.field),
                "coords": c.point.coords.iter().map(elem_to_json).collect::<Vec<_>>(),
                "jacobian": elem_to_json(&c.jacobian),
                "index": gw_to_json(&c.index_over_base)?,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "config": config,
        "status": match v.status {
            OracleStatus::Verified => "verified",
            OracleStatus::Incomplete => "incomplete",
            OracleStatus::Failed => "failed",
        },
        "points": points,
        "found_rank": v.found_rank,
        "expected_rank": v.expected_rank,
        "lhs": gw_to_json(&v.lhs)?,
        "rhs": gw_to_json(&v.rhs)?,
        "points_scanned": v.points_scanned,
        "budget_exceeded": v.budget_exceeded,
        "complete_through_degree": v.complete_through_degree,
        "failure": v.failure,
    }))
}

fn verdict_text(v: &OracleVerdict) -> Result<String> {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(
        out,
        "oracle verdict: {:?} (found rank {} of {}, scanned {} points{})",
        v.status,
        v.found_rank,
        v.expected_rank,
        v.points_scanned,
        if v.budget_exceeded { ", budget exceeded" } else { "" }
    )
    .unwrap();
    for c in &v.contributions {
        writeln!(out, "  {} Jac = {}  index {}", c.point, c.jacobian, c.index_over_base).unwrap();
    }
    writeln!(out, "  sum of indices: {}", v.lhs).unwrap();
    writeln!(out, "  predicted:      {}", v.rhs).unwrap();
    if let Some(f) = &v.failure {
        writeln!(out, "  failure: {f}").unwrap();
    }
    Ok(out)
}

fn verdict_exit(v: &OracleVerdict) -> i32 {
    match v.status {
        OracleStatus::Verified => exit_code::SUCCESS,
        OracleStatus::Failed => exit_code::FAILED,
        OracleStatus::Incomplete => {
            if v.budget_exceeded {
                exit_code::BUDGET_EXHAUSTED
            } else {
                exit_code::INCOMPLETE
            }
        }
    }
}

pub fn run_verify_config(config: &RunConfig) -> Result<RunOutcome> {
    let field = config.field.to_field()?;
    let (input, quadrics) = parse_excess_input(&field, &config.input)?;
    let seed = config.seed.unwrap_or(0);
    let quadrics = match quadrics {
        Some(q) => q,
        None => input.lift_quadrics_seeded(seed)?,
    };
    let mut config = config.clone();
    // echo the resolved quadrics so the run is replayable bit for bit
    config.input = json!({
        "n": input.n(),
        "quadrics": quadrics.iter().map(poly_to_json).collect::<Vec<_>>(),
    });
    let max_degree = config.max_degree.unwrap_or(2);
    let budget = config.budget.unwrap_or(100_000_000);
    let report = run_excess(&input)?;
    let verdict = verify_theorem(&field, &quadrics, &report, max_degree, budget)?;
    Ok(RunOutcome {
        documents: vec![verdict_json(&config, &verdict)?],
        text: verdict_text(&verdict)?,
        exit_code: verdict_exit(&verdict),
    })
}

// ---- random search ----

pub fn run_random_search_config(config: &RunConfig) -> Result<RunOutcome> {
    let field = config.field.to_field()?;
    let n = config.n.unwrap_or(5);
    let start = config.seed.unwrap_or(1);
    let count = config.count.unwrap_or(100);
    let max_degree = config.max_degree.unwrap_or(2);
    let budget = config.budget.unwrap_or(100_000_000);
    let mut documents = Vec::new();
    let mut text = String::new();
    use std::fmt::Write;
    for seed in start..start.saturating_add(count) {
        let (input, attempts) = random_admissible_input(&field, n, seed, 1_000_000)?;
        let quadrics = input.lift_quadrics_seeded(seed)?;
        // cheap completeness pre-pass with pruned degree scans
        let expected = (1i64 << n) - (crate::poly::binomial(n, 2) + n + 1) as i64;
        let pruned = crate::oracle::enumerate_gamma(&field, &quadrics, max_degree, budget, Some(expected))?;
        let found: i64 = pruned.points.iter().map(|p| p.degree as i64).sum();
        let complete = !pruned.pruned && !pruned.budget_exceeded && found == expected;
        let mut line = json!({
            "seed": seed,
            "attempts": attempts,
            "found_rank": found,
            "complete": complete,
            "pruned": pruned.pruned,
            "points_scanned": pruned.scanned,
        });
        if complete {
            let report = run_excess(&input)?;
            let verdict = verify_theorem(&field, &quadrics, &report, max_degree, budget)?;
            let mut echo = config.clone();
            echo.seed = Some(seed);
            echo.input = json!({
                "n": n,
                "quadrics": quadrics.iter().map(poly_to_json).collect::<Vec<_>>(),
            });
            line["verdict"] = verdict_json(&echo, &verdict)?;
            writeln!(
                text,
                "seed {seed}: complete enumeration, verdict {:?}; lhs {} rhs {}",
                verdict.status, verdict.lhs, verdict.rhs
            )
            .unwrap();
            documents.push(line);
            if verdict.status == OracleStatus::Verified {
                writeln!(text, "verified instance at seed {seed}").unwrap();
                return Ok(RunOutcome { documents, text, exit_code: exit_code::SUCCESS });
            }
        } else {
            writeln!(
                text,
                "seed {seed}: found rank {found}{}",
                if pruned.pruned { " (pruned)" } else { "" }
            )
            .unwrap();
            documents.push(line);
        }
    }
    writeln!(text, "seed budget exhausted without a verified instance").unwrap();
    documents.push(json!({ "result": "budget exhausted", "config": config }));
    Ok(RunOutcome { documents, text, exit_code: exit_code::BUDGET_EXHAUSTED })
}

// ---- residual ----

pub fn run_residual_config(config: &RunConfig) -> Result<RunOutcome> {
    let field = config.field.to_field()?;
    let nvars = config
        .input
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("residual input needs \"nvars\"".into()))? as usize;
    let gens_json = config
        .input
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("residual input needs \"generators\"".into()))?;
    let gens: Vec<Poly> = gens_json
        .iter()
        .map(|g| poly_from_json(&field, nvars, g))
        .collect::<Result<_>>()?;
    let j = GradedIdeal::new(field.clone(), nvars, gens)?;
    let dmax = config.max_degree.unwrap_or(10) as u32;

    let split = split_ideal(&j, dmax)?;
    let conormal = conormal_freeness_check(&j, &split.k_pieces, j.gens(), dmax)?;
    let kos = kos_prime_homology(j.gens(), &split.i_gens, 1, dmax)?;
    let form = mult_form(&j, &split, dmax)?;
    let scalarized = match config.input.get("lambda") {
        Some(l) => {
            let arr = l
                .as_array()
                .ok_or_else(|| Error::InvalidInput("\"lambda\" must be a list of coefficients".into()))?;
            let lambda: Vec<Elem> = arr
                .iter()
                .map(|v| elem_from_json(&field, v))
                .collect::<Result<_>>()?;
            let (gram, class, radical) = scalarize(&form, &lambda)?;
            Some((lambda, gram, class, radical))
        }
        None => None,
    };

    let i_dims: Vec<usize> = split.i_pieces.iter().map(|p| p.dim()).collect();
    let k_dims: Vec<usize> = split.k_pieces.iter().map(|p| p.dim()).collect();
    let homology: Vec<Value> = kos
        .homology
        .iter()
        .filter(|(_, &dim)| dim > 0)
        .map(|(&(n, d), &dim)| json!({ "n": n, "degree": d, "dim": dim }))
        .collect();
    let gram_tensor: Vec<Value> = form
        .gram
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|coords| Value::Array(coords.iter().map(elem_to_json).collect()))
                    .collect(),
            )
        })
        .collect();

    let mut doc = json!({
        "config": config,
        "i_generators": split.i_gens.iter().map(poly_to_json).collect::<Vec<_>>(),
        "k_generators": split.k_gens.iter().map(poly_to_json).collect::<Vec<_>>(),
        "i_dims": i_dims,
        "k_dims": k_dims,
        "conormal_free": conormal,
        "kos_prime": { "t": kos.t, "nonzero_homology": homology },
        "ij_basis": form.ij_basis.iter().map(poly_to_json).collect::<Vec<_>>(),
        "i2ji_basis": form.i2ji_basis.iter().map(poly_to_json).collect::<Vec<_>>(),
        "gram_tensor": gram_tensor,
    });

    use std::fmt::Write;
    let mut text = String::new();
    writeln!(text, "residual data for J over {field} up to degree {dmax}").unwrap();
    writeln!(text, "  I generators: {}", join_polys(&split.i_gens)).unwrap();
    writeln!(text, "  K generators: {}", join_polys(&split.k_gens)).unwrap();
    writeln!(text, "  dim I_d: {i_dims:?}").unwrap();
    writeln!(text, "  dim K_d: {k_dims:?}").unwrap();
    writeln!(text, "  J/KJ free on the generators: {conormal}").unwrap();
    writeln!(text, "  Kos'(t=1) nonzero homology: {} entries (positive-index all zero: {})",
        form_homology_count(&kos.homology),
        kos.homology.iter().all(|(&(n, _), &dim)| n == 0 || dim == 0)
    )
    .unwrap();
    writeln!(text, "  I/J basis: {}", join_polys(&form.ij_basis)).unwrap();
    writeln!(text, "  I^2/JI basis: {}", join_polys(&form.i2ji_basis)).unwrap();
    if let Some((lambda, gram, class, radical)) = scalarized {
        doc["scalarized"] = json!({
            "lambda": lambda.iter().map(elem_to_json).collect::<Vec<_>>(),
            "gram": matrix_to_json(&gram),
            "class": gw_to_json(&class)?,
            "radical_dim": radical,
        });
        writeln!(text, "  scalarized class: {class} (radical {radical})").unwrap();
    }
    Ok(RunOutcome { documents: vec![doc], text, exit_code: exit_code::SUCCESS })
}

fn join_polys(ps: &[Poly]) -> String {
    if ps.is_empty() {
        return "(none)".into();
    }
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn form_homology_count(h: &std::collections::BTreeMap<(usize, u32), usize>) -> usize {
    h.values().filter(|&&d| d > 0).count()
}

// ---- gw ----

pub fn run_gw_config(config: &RunConfig) -> Result<RunOutcome> {
    let field = config.field.to_field()?;
    let gram_json = config
        .input
        .get("gram")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("gw input needs \"gram\"".into()))?;
    let n = gram_json.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in gram_json {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| Error::InvalidInput("gram matrix must be square".into()))?;
        for v in row {
            entries.push(elem_from_json(&field, v)?);
        }
    }
    let gram = DenseMatrix::new(field.clone(), n, n, entries)?;
    let (p, d) = gram.congruence_diagonalize()?;
    let (class, radical) = GwClass::from_gram(&gram)?;
    let inv = class.invariants()?;
    let doc = json!({
        "config": config,
        "diagonal": (0..n).map(|i| elem_to_json(d.at(i, i))).collect::<Vec<_>>(),
        "transform": matrix_to_json(&p),
        "class": gw_to_json(&class)?,
        "radical_dim": radical,
    });
    use std::fmt::Write;
    let mut text = String::new();
    writeln!(text, "diagonalization over {field}").unwrap();
    writeln!(text, "  diagonal: {}", (0..n).map(|i| d.at(i, i).to_string()).collect::<Vec<_>>().join(", ")).unwrap();
    writeln!(text, "  class: {class} (rank {}, radical {radical})", inv.rank).unwrap();
    Ok(RunOutcome { documents: vec![doc], text, exit_code: exit_code::SUCCESS })
}

/// Dispatch on the configured subcommand.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    match config.subcommand.as_str() {
        "excess" => run_excess_config(config),
        "verify" => run_verify_config(config),
        "residual" => run_residual_config(config),
        "gw" => run_gw_config(config),
        "random-search" => run_random_search_config(config),
        other => Err(Error::InvalidInput(format!("unknown subcommand {other:?}"))),
    }
}

/// Exit code for an error outcome.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Inadmissible(_) => exit_code::INADMISSIBLE,
        Error::InvalidInput(_) | Error::Json(_) | Error::Io(_) => exit_code::INADMISSIBLE,
        _ => exit_code::USAGE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excess::samples;

    fn excess_config(input: Value) -> RunConfig {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            subcommand: "excess".into(),
            field: FieldSpec::parse("31").unwrap(),
            n: Some(5),
            input,
            seed: None,
            max_degree: None,
            budget: None,
            count: None,
            format: "json".into(),
        }
    }

    #[test]
    fn excess_run_is_replayable_byte_for_byte() {
        let input = excess_input_to_json(&samples::f31_square_disc());
        let config = excess_config(input);
        let out1 = run(&config).unwrap();
        // re-run from the echoed config
        let echo: RunConfig =
            serde_json::from_value(out1.documents[0]["config"].clone()).unwrap();
        let out2 = run(&echo).unwrap();
        let s1 = serde_json::to_string(&out1.documents[0]).unwrap();
        let s2 = serde_json::to_string(&out2.documents[0]).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(out1.exit_code, 0);
    }

    #[test]
    fn inadmissible_input_exit_code() {
        let row = json!([[1,0,0],[0,1,0],[0,0,1]]);
        let input = json!({"n": 5, "matrix": [row, row, row, row, row]});
        let config = excess_config(input);
        let err = match run(&config) {
            Err(e) => e,
            Ok(_) => panic!("expected an inadmissible-input error"),
        };
        assert_eq!(error_exit_code(&err), exit_code::INADMISSIBLE);
    }

    #[test]
    fn field_spec_roundtrip() {
        for s in ["31", "3^2", "rationals"] {
            let spec = FieldSpec::parse(s).unwrap();
            let field = spec.to_field().unwrap();
            let spec2 = FieldSpec::from_field(&field);
            assert_eq!(spec2.to_field().unwrap(), field);
        }
        assert!(FieldSpec::parse("4").unwrap().to_field().is_err());
    }

    #[test]
    fn element_json_roundtrip() {
        let f9 = Field::build_extension(3, 2, 0).unwrap();
        let e = f9.generator().unwrap();
        let v = elem_to_json(&e);
        assert_eq!(elem_from_json(&f9, &v).unwrap(), e);

        let q = Field::rationals();
        let half = q.rational(-3, 7).unwrap();
        let v = elem_to_json(&half);
        assert_eq!(elem_from_json(&q, &v).unwrap(), half);
    }

    #[test]
    fn gw_subcommand_diagonalizes() {
        let config = RunConfig {
            schema_version: SCHEMA_VERSION,
            subcommand: "gw".into(),
            field: FieldSpec::parse("5").unwrap(),
            n: None,
            input: json!({"gram": [[0,1],[1,0]]}),
            seed: None,
            max_degree: None,
            budget: None,
            count: None,
            format: "json".into(),
        };
        let out = run(&config).unwrap();
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.documents[0]["class"]["rank"], json!(2));
        assert_eq!(out.documents[0]["radical_dim"], json!(0));
    }

    #[test]
    fn residual_subcommand_fixture() {
        let config = RunConfig {
            schema_version: SCHEMA_VERSION,
            subcommand: "residual".into(),
            field: FieldSpec::parse("31").unwrap(),
            n: None,
            input: json!({
                "nvars": 2,
                "generators": [
                    [[[1,1], 1]],
                    [[[3,0], 1]]
                ],
                "lambda": [0, 1]
            }),
            seed: None,
            max_degree: Some(10),
            budget: None,
            count: None,
            format: "json".into(),
        };
        let out = run(&config).unwrap();
        assert_eq!(out.exit_code, 0);
        let doc = &out.documents[0];
        assert_eq!(doc["conormal_free"], json!(true));
        assert_eq!(doc["scalarized"]["class"]["rank"], json!(2));
        assert_eq!(doc["scalarized"]["radical_dim"], json!(0));
    }
}
