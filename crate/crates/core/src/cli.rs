//! Command-line front end: parse structures and systems from JSON, dispatch
//! the computations, and emit reports with deterministic machine output.
//!
//! Exit codes: 0 for ok, 1 for a violation or counterexample, 2 for parse
//! errors and unsupported inputs. JSON object keys are emitted sorted, so
//! the same argv and seed produce byte-identical output.

use crate::algebra::{parse_matrix, parse_rational_function, rat_to_string, MatrixRF, Rat};
use crate::galois::{
    difference_ideal_stability, emit_group_equations, ga_group, invariant_search, pv_sigma,
    verify_invariant, GaloisError, Invariant, LinearDifferenceSystem, PvElement, SearchBounds,
    TorsorFamily2x2,
};
use crate::internality::{
    brute_delta_subgroup, brute_force_group, delta_star, group_delta, group_intdef2,
    groupoid_torsor_check, orbit_action, orbits_and_groupoid, pair_set_of, random_delta,
    random_structure, torsor_check, type_equality_classes, BindingGroup, DeltaRelation,
    FiniteInternality, RandomBounds, Sort,
};
use crate::sigma::{order1_group, DifferenceFieldSpec, Order1Group, SigmaOperator};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Unsupported,
}

/// Result of one invocation: machine payload plus a human rendering.
#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub payload: Value,
    pub human: String,
}

impl Report {
    fn ok(payload: Value, human: impl Into<String>) -> Self {
        Report { status: Status::Ok, payload, human: human.into() }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub status: Status,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { exit: 2, status: Status::Unsupported, message: message.into() }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure { exit: 1, status: Status::Violation, message: message.into() }
    }
}

type CliResult = Result<Report, Failure>;

#[derive(Parser, Debug)]
#[command(name = "diffgal", version, about = "definable Galois groups of linear difference equations and finite internality models", disable_help_subcommand = true)]
struct Cli {
    /// Emit the machine-readable JSON payload instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed controlling every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a finite internality structure.
    #[command(name = "internality-check")]
    InternalityCheck {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
    },
    /// Compute the automorphism group four ways and compare.
    #[command(name = "internality-group")]
    InternalityGroup {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
    },
    /// Compute the Δ-restricted subgroup and compare with brute force.
    #[command(name = "internality-delta")]
    InternalityDelta {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        /// JSON file with a list of relations.
        #[arg(long)]
        delta: PathBuf,
    },
    /// Orbits, the opposite groupoid, and all torsor checks.
    #[command(name = "internality-groupoid")]
    InternalityGroupoid {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        #[arg(long)]
        delta: Option<PathBuf>,
    },
    /// Oracle-equivalence fuzzing over random structures.
    #[command(name = "internality-fuzz")]
    InternalityFuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        nq_max: usize,
        #[arg(long, default_value_t = 2)]
        nd_max: usize,
        #[arg(long, default_value_t = 5)]
        nx_max: usize,
        /// Also fuzz Δ-subgroups with this many random relations each.
        #[arg(long, default_value_t = 0)]
        delta_count: usize,
    },
    /// Classify the order-1 equation σ(y) = a·y.
    #[command(name = "galois-order1")]
    GaloisOrder1 {
        /// Operator: identity, shift:<c>, or dilation:<q>.
        #[arg(long)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Comma-separated parameter symbols fixed by σ.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_order: u32,
    },
    /// G_A for a constant diagonalizable matrix: eigenbasis and character
    /// lattice.
    #[command(name = "galois-ga")]
    GaloisGa {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
    },
    /// Search for invariant functions within bounds.
    #[command(name = "galois-invariants")]
    GaloisInvariants {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        /// Bounds as d=4,k=2,m=4[,p=2].
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Full presentation: σ-conjugation plus invariant-cut equations, with
    /// the G_A branch when applicable.
    #[command(name = "galois-group")]
    GaloisGroup {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Membership in the torsor-family group H̃_e of the 2×2 quadratic
    /// family, with a sampling cross-check.
    #[command(name = "galois-torsor")]
    GaloisTorsor {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        /// Target fiber value as three comma-separated expressions.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Candidate group element as a matrix expression.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Apply σ in the Picard–Vessiot ring, or certify σ-stability of an
    /// invariant-generated ideal.
    #[command(name = "pv-check")]
    PvCheck {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        /// Polynomial in the X entries to push through σ.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Determinant exponent of the element p / det(X)^k.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// JSON file with invariants [{"p": "...", "k": 2}, ...].
        #[arg(long)]
        invariants: Option<PathBuf>,
        /// Comma-separated constant expressions, one per invariant.
        #[arg(long, allow_hyphen_values = true)]
        constants: Option<String>,
    },
}

/// Run the CLI on argv; returns the report and the process exit code.
pub fn run(argv: Vec<String>) -> (Report, i32) {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.to_string();
            let status = if code == 0 { Status::Ok } else { Status::Unsupported };
            return (
                Report { status, payload: json!({ "message": text }), human: text },
                code,
            );
        }
    };
    let seed = cli.seed;
    let result = dispatch(cli.command, seed);
    match result {
        Ok(report) => (report, 0),
        Err(f) => {
            let payload = json!({ "error": f.message, "seed": seed });
            let report = Report { status: f.status, payload, human: f.message.clone() };
            (report, f.exit)
        }
    }
}

fn dispatch(cmd: Command, seed: u64) -> CliResult {
    match cmd {
        Command::InternalityCheck { file, inline } => {
            let s = load_structure(&file, &inline)?;
            run_check(&s, seed)
        }
        Command::InternalityGroup { file, inline } => {
            let s = load_structure(&file, &inline)?;
            run_group(&s, seed)
        }
        Command::InternalityDelta { file, inline, delta } => {
            let s = load_structure(&file, &inline)?;
            let d = load_delta(&delta, &s)?;
            run_delta(&s, &d, seed)
        }
        Command::InternalityGroupoid { file, inline, delta } => {
            let s = load_structure(&file, &inline)?;
            let d = match delta {
                Some(p) => load_delta(&p, &s)?,
                None => Vec::new(),
            };
            run_groupoid(&s, &d, seed)
        }
        Command::InternalityFuzz { count, nq_max, nd_max, nx_max, delta_count } => {
            run_fuzz(seed, count, nq_max, nd_max, nx_max, delta_count)
        }
        Command::GaloisOrder1 { sigma, a, params, max_order } => {
            run_order1(&sigma, &a, params.as_deref(), max_order, seed)
        }
        Command::GaloisGa { file, inline } => {
            let sys = load_system(&file, &inline)?;
            run_ga(&sys, seed)
        }
        Command::GaloisInvariants { file, inline, bounds } => {
            let sys = load_system(&file, &inline)?;
            let bounds = parse_bounds(bounds.as_deref())?;
            run_invariants(&sys, &bounds, seed)
        }
        Command::GaloisGroup { file, inline, bounds } => {
            let sys = load_system(&file, &inline)?;
            let bounds = parse_bounds(bounds.as_deref())?;
            run_galois_group(&sys, &bounds, seed)
        }
        Command::GaloisTorsor { file, inline, e, g, samples } => {
            let sys = load_system(&file, &inline)?;
            run_torsor(&sys, &e, &g, samples, seed)
        }
        Command::PvCheck { file, inline, p, k, invariants, constants } => {
            let sys = load_system(&file, &inline)?;
            run_pv(&sys, p.as_deref(), k, invariants.as_ref(), constants.as_deref(), seed)
        }
    }
}

// ---------------------------------------------------------------------------
// Input loading and schema validation (errors carry JSON-pointer paths).
// ---------------------------------------------------------------------------

fn load_text(file: &Option<PathBuf>, inline: &Option<String>) -> Result<String, Failure> {
    match (file, inline) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display()))),
        (None, Some(text)) => Ok(text.clone()),
        _ => Err(Failure::parse("provide exactly one of --file or --inline")),
    }
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::parse(format!("invalid JSON: {e}")))
}

fn get<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| Failure::parse(format!("{path}/{key}: missing field")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, Failure> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Failure::parse(format!("{path}: expected a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Failure> {
    v.as_array().ok_or_else(|| Failure::parse(format!("{path}: expected an array")))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, Failure> {
    v.as_str().ok_or_else(|| Failure::parse(format!("{path}: expected a string")))
}

/// Parse and validate a structure from the block-layout JSON format.
pub fn parse_structure(v: &Value) -> Result<FiniteInternality, Failure> {
    let n_q = as_usize(get(v, "", "nQ")?, "/nQ")?;
    let n_d = as_usize(get(v, "", "nD")?, "/nD")?;
    let pi_x_val = as_array(get(v, "", "piX")?, "/piX")?;
    let pi_x = pi_x_val
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("/piX/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let f_val = as_array(get(v, "", "f")?, "/f")?;
    let mut f = Vec::with_capacity(f_val.len());
    for (q, row) in f_val.iter().enumerate() {
        let row = as_array(row, &format!("/f/{q}"))?;
        let row = row
            .iter()
            .enumerate()
            .map(|(x, c)| as_usize(c, &format!("/f/{q}/{x}")))
            .collect::<Result<Vec<_>, _>>()?;
        f.push(row);
    }
    let s = FiniteInternality::from_blocks(n_q, n_d, pi_x, f);
    s.validate().map_err(|viol| Failure::violation(viol.to_string()))?;
    Ok(s)
}

/// Serialize back to the canonical block-layout JSON.
pub fn structure_to_json(s: &FiniteInternality) -> Value {
    json!({
        "nQ": s.n_q,
        "nD": s.n_d,
        "piX": s.pi_x,
        "f": s.f,
    })
}

fn parse_field(v: &Value) -> Result<DifferenceFieldSpec, Failure> {
    let sig = get(v, "", "sigma")?;
    let kind = as_str(get(sig, "/sigma", "kind")?, "/sigma/kind")?;
    let rat_field = |key: &str| -> Result<Rat, Failure> {
        let raw = get(sig, "/sigma", key)?;
        let text = match raw {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(Failure::parse(format!("/sigma/{key}: expected a rational string"))),
        };
        parse_rat(&text).ok_or_else(|| Failure::parse(format!("/sigma/{key}: bad rational '{text}'")))
    };
    let sigma = match kind {
        "identity" => SigmaOperator::Identity,
        "shift" => SigmaOperator::shift(rat_field("c")?)
            .map_err(|e| Failure::parse(format!("/sigma: {e}")))?,
        "dilation" => SigmaOperator::dilation(rat_field("q")?)
            .map_err(|e| Failure::parse(format!("/sigma: {e}")))?,
        other => return Err(Failure::parse(format!("/sigma/kind: unknown operator '{other}'"))),
    };
    let parameters = match v.get("parameters") {
        None => Vec::new(),
        Some(arr) => as_array(arr, "/parameters")?
            .iter()
            .enumerate()
            .map(|(i, p)| as_str(p, &format!("/parameters/{i}")).map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?,
    };
    DifferenceFieldSpec::new(sigma, parameters).map_err(|e| Failure::parse(e.to_string()))
}

fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse().ok().map(Rat::from_integer),
        Some((n, d)) => {
            let n: num::BigInt = n.trim().parse().ok()?;
            let d: num::BigInt = d.trim().parse().ok()?;
            if d == 0.into() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// Parse and validate a linear difference system.
pub fn parse_system(v: &Value) -> Result<LinearDifferenceSystem, Failure> {
    let field = parse_field(get(v, "", "field")?)?;
    let symbols = field.symbols();
    let rows = as_array(get(v, "", "A")?, "/A")?;
    let mut entries = Vec::new();
    let nrows = rows.len();
    let mut ncols = 0;
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, &format!("/A/{i}"))?;
        if i == 0 {
            ncols = row.len();
        } else if row.len() != ncols {
            return Err(Failure::parse(format!("/A/{i}: ragged row")));
        }
        for (j, cell) in row.iter().enumerate() {
            let text = match cell {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(Failure::parse(format!("/A/{i}/{j}: expected an expression"))),
            };
            let rf = parse_rational_function(&text, &symbols)
                .map_err(|e| Failure::parse(format!("/A/{i}/{j}: {e}")))?;
            entries.push(rf);
        }
    }
    let a = MatrixRF::new(nrows, ncols, entries);
    LinearDifferenceSystem::new(field, a).map_err(|e| match e {
        GaloisError::SingularSystem => Failure::violation(e.to_string()),
        other => Failure::parse(other.to_string()),
    })
}

fn load_structure(file: &Option<PathBuf>, inline: &Option<String>) -> Result<FiniteInternality, Failure> {
    let v = parse_json(&load_text(file, inline)?)?;
    parse_structure(&v)
}

fn load_system(file: &Option<PathBuf>, inline: &Option<String>) -> Result<LinearDifferenceSystem, Failure> {
    let v = parse_json(&load_text(file, inline)?)?;
    parse_system(&v)
}

fn load_delta(path: &PathBuf, s: &FiniteInternality) -> Result<Vec<DeltaRelation>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    let v = parse_json(&text)?;
    parse_delta_list(&v, s)
}

pub fn parse_delta_list(v: &Value, s: &FiniteInternality) -> Result<Vec<DeltaRelation>, Failure> {
    let arr = as_array(v, "")?;
    let mut out = Vec::new();
    for (i, rel) in arr.iter().enumerate() {
        let sorts = as_array(get(rel, &format!("/{i}"), "sorts")?, &format!("/{i}/sorts"))?
            .iter()
            .enumerate()
            .map(|(j, x)| {
                match as_str(x, &format!("/{i}/sorts/{j}"))? {
                    "Q" => Ok(Sort::Q),
                    "X" => Ok(Sort::X),
                    "C" => Ok(Sort::C),
                    other => Err(Failure::parse(format!("/{i}/sorts/{j}: unknown sort '{other}'"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tuples = as_array(get(rel, &format!("/{i}"), "tuples")?, &format!("/{i}/tuples"))?
            .iter()
            .enumerate()
            .map(|(j, t)| {
                as_array(t, &format!("/{i}/tuples/{j}"))?
                    .iter()
                    .enumerate()
                    .map(|(k, x)| as_usize(x, &format!("/{i}/tuples/{j}/{k}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        let rel = DeltaRelation { sorts, tuples };
        rel.validate(s).map_err(|e| Failure::parse(format!("/{i}: {e}")))?;
        out.push(rel);
    }
    Ok(out)
}

fn parse_bounds(text: Option<&str>) -> Result<SearchBounds, Failure> {
    let mut b = SearchBounds::default();
    let Some(text) = text else { return Ok(b) };
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((key, value)) = item.split_once('=') else {
            return Err(Failure::parse(format!("bad bounds item '{item}', expected key=value")));
        };
        let value: u32 = value
            .trim()
            .parse()
            .map_err(|_| Failure::parse(format!("bad bounds value in '{item}'")))?;
        match key.trim() {
            "d" => b.entry_degree = value,
            "k" => b.det_exponent_max = value,
            "m" => b.t_degree = value,
            "p" => b.param_degree = value,
            other => return Err(Failure::parse(format!("unknown bounds key '{other}'"))),
        }
    }
    Ok(b)
}

fn parse_sigma_flag(text: &str, params: Option<&str>) -> Result<DifferenceFieldSpec, Failure> {
    let params: Vec<String> = params
        .map(|p| p.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();
    let sigma = if text == "identity" {
        SigmaOperator::Identity
    } else if let Some(c) = text.strip_prefix("shift:") {
        let c = parse_rat(c).ok_or_else(|| Failure::parse(format!("bad shift step '{c}'")))?;
        SigmaOperator::shift(c).map_err(|e| Failure::parse(e.to_string()))?
    } else if let Some(q) = text.strip_prefix("dilation:") {
        let q = parse_rat(q).ok_or_else(|| Failure::parse(format!("bad dilation ratio '{q}'")))?;
        SigmaOperator::dilation(q).map_err(|e| Failure::parse(e.to_string()))?
    } else {
        return Err(Failure::parse(format!(
            "bad --sigma '{text}': expected identity, shift:<c> or dilation:<q>"
        )));
    };
    DifferenceFieldSpec::new(sigma, params).map_err(|e| Failure::parse(e.to_string()))
}

// ---------------------------------------------------------------------------
// Subcommand runners.
// ---------------------------------------------------------------------------

fn group_elements_json(g: &BindingGroup) -> Value {
    Value::Array(
        g.elements
            .iter()
            .map(|e| json!({ "q": e.tau_q, "x": e.tau_x }))
            .collect(),
    )
}

fn run_check(s: &FiniteInternality, seed: u64) -> CliResult {
    // validation already ran during parsing
    let payload = json!({
        "status": "ok",
        "nQ": s.n_q, "nX": s.n_x, "nC": s.n_c, "nD": s.n_d,
        "seed": seed,
    });
    Ok(Report::ok(payload, format!("ok: valid structure with nQ={} nX={} nC={} nD={}", s.n_q, s.n_x, s.n_c, s.n_d)))
}

fn run_group(s: &FiniteInternality, seed: u64) -> CliResult {
    // Formula groups are allowed up to nQ, nX = 12; the factorial oracle
    // only runs within its own guard.
    if s.n_q > 12 || s.n_x > 12 {
        return Err(Failure::parse(format!(
            "structure too large for the formula groups (nQ={}, nX={}, guard 12)",
            s.n_q, s.n_x
        )));
    }
    let within_oracle = s.n_q <= 6 && s.n_x <= 6;
    let d = crate::internality::derive(s);
    let g1 = crate::internality::group_intdef1(s, &d);
    let g = group_intdef2(s, &d);
    let gh = crate::internality::group_horrible(s, &d);
    let mut agree = g1.pair_set() == g.pair_set() && gh.group.pair_set() == g.pair_set();
    if within_oracle {
        let brute = brute_force_group(s, 6).map_err(|e| Failure::parse(e.to_string()))?;
        agree = agree && g.pair_set() == pair_set_of(&brute);
    }
    if !agree {
        return Err(Failure::violation(
            "the group computations disagree on this structure".to_string(),
        ));
    }
    let payload = json!({
        "agreements": true,
        "oracle": if within_oracle { "checked" } else { "skipped (size guard)" },
        "group_order": g.order(),
        "elements": group_elements_json(&g),
        "seed": seed,
    });
    Ok(Report::ok(
        payload,
        format!(
            "group of order {}, computations agree{}",
            g.order(),
            if within_oracle { " (brute-force oracle included)" } else { " (oracle skipped by size guard)" }
        ),
    ))
}

fn run_delta(s: &FiniteInternality, delta: &[DeltaRelation], seed: u64) -> CliResult {
    let d = crate::internality::derive(s);
    let base = group_intdef2(s, &d);
    let g = group_delta(s, &d, &base, delta);
    let brute = brute_force_group(s, 6).map_err(|e| Failure::parse(e.to_string()))?;
    let brute_sub = brute_delta_subgroup(delta, &brute);
    let matches = g.pair_set() == pair_set_of(&brute_sub);
    let star = delta_star(s, &d, delta);
    let classes = type_equality_classes(s, &star);
    let orbits = crate::internality::orbits_of(s, &g).0;
    let orbits_match = classes == orbits;
    if !matches || !orbits_match {
        return Err(Failure::violation(format!(
            "delta group mismatch: brute_match={matches}, orbits_match_types={orbits_match}"
        )));
    }
    let payload = json!({
        "group_order": base.order(),
        "delta_group_order": g.order(),
        "elements": group_elements_json(&g),
        "brute_match": matches,
        "orbits": orbits,
        "orbits_match_types": orbits_match,
        "seed": seed,
    });
    Ok(Report::ok(
        payload,
        format!("G_delta has order {} inside G of order {}", g.order(), base.order()),
    ))
}

fn run_groupoid(s: &FiniteInternality, delta: &[DeltaRelation], seed: u64) -> CliResult {
    let d = crate::internality::derive(s);
    let base = group_intdef2(s, &d);
    let g = if delta.is_empty() { base } else { group_delta(s, &d, &base, delta) };
    let data = orbits_and_groupoid(s, &d, &g)
        .map_err(|e| Failure::violation(e.to_string()))?;
    for orbit in &data.orbits {
        torsor_check(&orbit_action(&g, orbit)).map_err(|e| Failure::violation(e.to_string()))?;
    }
    groupoid_torsor_check(&d, &g, &data).map_err(|e| Failure::violation(e.to_string()))?;
    let mut hef = Map::new();
    for ((e, f), hs) in &data.hef {
        hef.insert(format!("{e},{f}"), json!(hs.len()));
    }
    let payload = json!({
        "group_order": g.order(),
        "orbits": data.orbits,
        "hef_sizes": Value::Object(hef),
        "torsors_ok": true,
        "groupoid_ok": true,
        "seed": seed,
    });
    Ok(Report::ok(
        payload,
        format!("{} orbit(s); every orbit is a torsor and the groupoid axioms hold", data.orbits.len()),
    ))
}

fn run_fuzz(
    seed: u64,
    count: usize,
    nq_max: usize,
    nd_max: usize,
    nx_max: usize,
    delta_count: usize,
) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreements = 0usize;
    for i in 0..count {
        let s = loop {
            let n_q = rng.gen_range(1..=nq_max);
            let n_d = rng.gen_range(1..=nd_max);
            let n_x = rng.gen_range(1..=nx_max);
            if let Ok(s) = random_structure(seed.wrapping_add(i as u64), RandomBounds { n_q, n_d, n_x }) {
                break s;
            }
        };
        let report = crate::internality::oracle_agreement(&s, 6)
            .map_err(|e| Failure::parse(e.to_string()))?;
        let mut ok = report.agree;
        if delta_count > 0 {
            let delta = random_delta(&s, seed.wrapping_add(i as u64), delta_count);
            let d = crate::internality::derive(&s);
            let base = group_intdef2(&s, &d);
            let g = group_delta(&s, &d, &base, &delta);
            let brute = brute_force_group(&s, 6).map_err(|e| Failure::parse(e.to_string()))?;
            let brute_sub = brute_delta_subgroup(&delta, &brute);
            ok = ok && g.pair_set() == pair_set_of(&brute_sub);
            let star = delta_star(&s, &d, &delta);
            ok = ok && type_equality_classes(&s, &star) == crate::internality::orbits_of(&s, &g).0;
        }
        if ok {
            agreements += 1;
        }
    }
    let status_text = if agreements == count { "ok" } else { "violation" };
    let payload = json!({
        "status": status_text,
        "structures": count,
        "agreements": agreements,
        "seed": seed,
    });
    if agreements != count {
        return Err(Failure::violation(format!(
            "oracle disagreement: {agreements}/{count} structures agree (seed {seed})"
        )));
    }
    Ok(Report::ok(payload, format!("{agreements}/{count} structures agree")))
}

fn run_order1(sigma: &str, a_text: &str, params: Option<&str>, max_order: u32, seed: u64) -> CliResult {
    let spec = parse_sigma_flag(sigma, params)?;
    let a = parse_rational_function(a_text, &spec.symbols())
        .map_err(|e| Failure::parse(format!("--a: {e}")))?;
    if a.is_zero() {
        return Err(Failure::parse("--a: a must be nonzero"));
    }
    let classification = order1_group(&spec, &a, max_order)
        .map_err(|e| Failure::parse(e.to_string()))?;
    let (payload, human) = match classification {
        Order1Group::Trivial(cert) => (
            json!({
                "group": "trivial",
                "certificate": { "r": cert.r.to_string(), "m": cert.order },
            }),
            format!("trivial group: a = sigma(r)/r with r = {}", cert.r),
        ),
        Order1Group::Mu(m, cert) => (
            json!({
                "group": "mu",
                "order": m,
                "certificate": { "r": cert.r.to_string(), "m": cert.order },
            }),
            format!("group mu_{m}: a^{m} = sigma(r)/r with r = {}", cert.r),
        ),
        Order1Group::FullUpToBound(bound) => (
            json!({
                "group": "full-multiplicative-up-to-bound",
                "max_order": bound,
            }),
            format!("no relation up to order {bound}: full multiplicative group up to the bound"),
        ),
    };
    let _ = seed;
    Ok(Report::ok(payload, human))
}

fn run_ga(sys: &LinearDifferenceSystem, seed: u64) -> CliResult {
    let ga = ga_group(sys).map_err(|e| Failure::parse(e.to_string()))?;
    let payload = ga_to_json(&ga);
    let human = format!(
        "G_A: eigenvalues [{}], character lattice of rank {}; \
         U has constant points {{g : gA = Ag}}; equality with the binding group: {}",
        ga.eigenvalues.iter().map(rat_to_string).collect::<Vec<_>>().join(", "),
        ga.lattice.rank(),
        if ga.equality_holds { "holds (B = C(B))" } else { "containment only (B != C(B))" },
    );
    let _ = seed;
    Ok(Report::ok(payload, human))
}

fn ga_to_json(ga: &crate::galois::GaGroup) -> Value {
    json!({
        "eigenvalues": ga.eigenvalues.iter().map(rat_to_string).collect::<Vec<_>>(),
        "eigenbasis_columns": ga
            .eigenbasis
            .iter()
            .map(|col| col.iter().map(rat_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "lattice_basis": ga
            .lattice
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "centralizer_constant_points": "g*A = A*g",
        "equality_holds": ga.equality_holds,
    })
}

fn invariants_json(invs: &[Invariant]) -> Value {
    Value::Array(
        invs.iter()
            .map(|i| json!({ "p": i.p.to_string(), "k": i.det_exponent }))
            .collect(),
    )
}

fn bounds_json(b: &SearchBounds) -> Value {
    json!({
        "d": b.entry_degree,
        "k": b.det_exponent_max,
        "m": b.t_degree,
        "p": b.param_degree,
    })
}

fn run_invariants(sys: &LinearDifferenceSystem, bounds: &SearchBounds, seed: u64) -> CliResult {
    let found = invariant_search(sys, bounds).map_err(|e| Failure::parse(e.to_string()))?;
    let payload = json!({
        "bounds": bounds_json(bounds),
        "invariants": invariants_json(&found),
        "count": found.len(),
        "seed": seed,
    });
    let mut human = format!(
        "{} invariant(s) within bounds d={}, k={}, m={}, p={} (completeness within bounds only):\n",
        found.len(),
        bounds.entry_degree,
        bounds.det_exponent_max,
        bounds.t_degree,
        bounds.param_degree
    );
    for inv in &found {
        human.push_str(&format!("  h = ({}) / det(X)^{}\n", inv.p, inv.det_exponent));
    }
    Ok(Report::ok(payload, human))
}

fn run_galois_group(sys: &LinearDifferenceSystem, bounds: &SearchBounds, seed: u64) -> CliResult {
    let found = invariant_search(sys, bounds).map_err(|e| Failure::parse(e.to_string()))?;
    let pres = emit_group_equations(sys, &found).map_err(|e| Failure::parse(e.to_string()))?;
    // When G_A applies, cross-check the two presentations: powers of A lie
    // in G_A ∩ U and must satisfy every invariant-cut equation. A false
    // value flags a disagreement between the branches.
    let mut powers_ok: Option<bool> = None;
    let mut pres = pres;
    let ga = match ga_group(sys) {
        Ok(g) => {
            let mut p = crate::algebra::MatrixRF::identity(sys.n);
            let mut ok = true;
            for _ in 0..4 {
                p = p.mul(&sys.a);
                ok = ok && crate::galois::satisfies_presentation(sys, &pres, &p);
            }
            powers_ok = Some(ok);
            let rendered = ga_to_json(&g);
            pres = pres.with_lattice(g.lattice);
            rendered
        }
        Err(e) => json!({ "unsupported": e.to_string() }),
    };
    let payload = json!({
        "sigma_equations": pres.sigma_equations,
        "equations": pres.equation_strings(),
        "invariants": invariants_json(&found),
        "bounds": bounds_json(bounds),
        "ga": ga,
        "powers_of_a_satisfy_equations": powers_ok,
        "seed": seed,
    });
    let mut human = String::from("group presentation:\n");
    for eq in &pres.sigma_equations {
        human.push_str(&format!("  {eq}\n"));
    }
    for eq in pres.equation_strings() {
        human.push_str(&format!("  {eq}\n"));
    }
    Ok(Report::ok(payload, human))
}

fn run_torsor(
    sys: &LinearDifferenceSystem,
    e_text: &str,
    g_text: &str,
    samples: usize,
    seed: u64,
) -> CliResult {
    let fam = TorsorFamily2x2::new(sys).map_err(|e| Failure::parse(e.to_string()))?;
    let symbols = sys.field.symbols();
    let parts: Vec<&str> = e_text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::parse("--e: expected three comma-separated expressions"));
    }
    let mut e_vals = Vec::with_capacity(3);
    for (i, part) in parts.iter().enumerate() {
        e_vals.push(
            parse_rational_function(part, &symbols)
                .map_err(|err| Failure::parse(format!("--e[{i}]: {err}")))?,
        );
    }
    let e: [crate::algebra::RationalFunction; 3] =
        [e_vals[0].clone(), e_vals[1].clone(), e_vals[2].clone()];
    let g = parse_matrix(g_text, &symbols).map_err(|err| Failure::parse(format!("--g: {err}")))?;
    let member = match fam.membership(&e, &g) {
        Ok(m) => m,
        Err(err) => return Err(Failure::parse(err.to_string())),
    };
    // Sampling channel when a rational fiber point exists.
    let sampled = match fam.fiber_point(&e) {
        Ok(x0) => {
            let pts = fam.sample_fiber(&x0, seed, samples);
            let verdict = fam
                .membership_sampled(&e, &g, &pts)
                .map_err(|err| Failure::parse(err.to_string()))?;
            Some(verdict)
        }
        Err(_) => None,
    };
    if let Some(sv) = sampled {
        if sv != member {
            return Err(Failure::violation(format!(
                "membership channels disagree: equations say {member}, sampling says {sv}"
            )));
        }
    }
    let payload = json!({
        "e": parts,
        "member": member,
        "sampled_member": sampled,
        "samples": if sampled.is_some() { samples } else { 0 },
        "seed": seed,
    });
    let human = format!(
        "g is {}a member of H_e{}",
        if member { "" } else { "not " },
        match sampled {
            Some(_) => format!(" (sampling channel agrees on {samples} fiber points)"),
            None => " (no rational fiber point; symbolic check only)".to_string(),
        }
    );
    Ok(Report::ok(payload, human))
}

fn load_invariants(
    path: &PathBuf,
    sys: &LinearDifferenceSystem,
) -> Result<Vec<Invariant>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    let v = parse_json(&text)?;
    let arr = as_array(&v, "")?;
    let mut symbols = sys.field.symbols();
    symbols.extend(crate::galois::entry_names(sys.n));
    let mut out = Vec::new();
    for (i, item) in arr.iter().enumerate() {
        let p_text = as_str(get(item, &format!("/{i}"), "p")?, &format!("/{i}/p"))?;
        let k = as_usize(get(item, &format!("/{i}"), "k")?, &format!("/{i}/k"))? as u32;
        let rf = parse_rational_function(p_text, &symbols)
            .map_err(|e| Failure::parse(format!("/{i}/p: {e}")))?;
        if !rf.den().is_constant() {
            return Err(Failure::parse(format!("/{i}/p: must be polynomial")));
        }
        let p = rf.num().scale(&rf.den().as_constant().unwrap().recip());
        let inv = Invariant { p, det_exponent: k };
        if !verify_invariant(sys, &inv) {
            return Err(Failure::violation(format!(
                "/{i}: ({})/det^{} is not invariant for this system",
                inv.p, inv.det_exponent
            )));
        }
        out.push(inv);
    }
    Ok(out)
}

fn run_pv(
    sys: &LinearDifferenceSystem,
    p: Option<&str>,
    k: u32,
    invariants: Option<&PathBuf>,
    constants: Option<&str>,
    seed: u64,
) -> CliResult {
    if let Some(p_text) = p {
        let mut symbols = sys.field.symbols();
        symbols.extend(crate::galois::entry_names(sys.n));
        let rf = parse_rational_function(p_text, &symbols)
            .map_err(|e| Failure::parse(format!("--p: {e}")))?;
        if !rf.den().is_constant() {
            return Err(Failure::parse("--p: must be a polynomial in the X entries"));
        }
        let poly = rf.num().scale(&rf.den().as_constant().unwrap().recip());
        let el = PvElement::from_poly(poly, k);
        let image = pv_sigma(sys, &el);
        let image_str = image.to_string();
        let payload = json!({
            "input": el.to_string(),
            "sigma_image": image_str,
            "seed": seed,
        });
        return Ok(Report::ok(payload, format!("sigma({el}) = {image_str}")));
    }
    let (Some(inv_path), Some(consts)) = (invariants, constants) else {
        return Err(Failure::parse(
            "pv-check needs either --p or both --invariants and --constants",
        ));
    };
    let invs = load_invariants(inv_path, sys)?;
    let symbols = sys.field.symbols();
    let cs: Vec<crate::algebra::RationalFunction> = consts
        .split(',')
        .enumerate()
        .map(|(i, c)| {
            parse_rational_function(c, &symbols)
                .map_err(|e| Failure::parse(format!("--constants[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if cs.len() != invs.len() {
        return Err(Failure::parse(format!(
            "{} constants for {} invariants",
            cs.len(),
            invs.len()
        )));
    }
    match difference_ideal_stability(sys, &invs, &cs).map_err(|e| Failure::parse(e.to_string()))? {
        Ok(()) => {
            let payload = json!({ "stable": true, "generators": invs.len(), "seed": seed });
            Ok(Report::ok(payload, "sigma-stable: every generator maps to a unit multiple"))
        }
        Err(witness) => Err(Failure::violation(witness.to_string())),
    }
}
