//! Command-line frontend: parse JSON code definitions, run reductions,
//! subset analyses, sweeps, and dense verifications.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use graphinfo::graphcode::{CodingGroup, EncodedCode, Graph};
use graphinfo::infoloc::{
    all_reps, build_context, generating_set, is_member, subset_info_group, subset_sweep,
    CosetRep, Presence, SubsetReport,
};
use graphinfo::oracle::{
    equal_up_to_phase, partial_trace_dyads, rank_hermitian, Oracle, DEFAULT_DENSE_BUDGET,
};
use graphinfo::pauli::GateSpec;
use graphinfo::zdlinalg::{ZdMatrix, MAX_MODULUS};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "graphinfo", version, about = "Information location in additive graph codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce the coding group to trivial form and print the encoding circuit.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Analyze one carrier subset (1-based comma list, e.g. --subset 3,5,7).
    Analyze {
        file: PathBuf,
        #[arg(long)]
        subset: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Analyze every subset, or every subset of a given size.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        size: Option<usize>,
        /// Refuse sweeps with more carriers than this.
        #[arg(long, default_value_t = 16)]
        sweep_bound: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the dense oracle against the symbolic pipeline.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DENSE_BUDGET)]
        dense_budget: u128,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(clap::Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

// ---------------------------------------------------------------------------
// serialized schema

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CodeFile {
    #[serde(rename = "D")]
    d: i64,
    n: usize,
    /// [a, b, multiplicity] with 1-based endpoints.
    edges: Vec<[i64; 3]>,
    coding_generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ReportFile {
    schema_version: u32,
    code: CodeFile,
    trivial: TrivialJson,
    /// Gate list with 1-based qudit indices, applied left to right.
    encoding_gates: Vec<GateJson>,
    subsets: Vec<SubsetJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerifyJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TrivialJson {
    k: usize,
    m: Vec<i64>,
    d: Vec<i64>,
    order: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
enum GateJson {
    Fourier { q: usize },
    Smult { q: usize, scale: i64 },
    Cnot { control: usize, target: usize, power: i64 },
    Swap { a: usize, b: usize },
    Cp { a: usize, b: usize, power: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RepJson {
    xi: Vec<i64>,
    zeta: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PresenceJson {
    PerfectlyPresent,
    Absent,
    PartiallyPresent { power: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SubsetJson {
    /// 1-based carrier indices, ascending.
    subset: Vec<usize>,
    subset_zero_based: Vec<usize>,
    members: Vec<RepJson>,
    generating_set: Vec<RepJson>,
    all_present: bool,
    all_absent: bool,
    is_abelian: bool,
    classification: Vec<(RepJson, PresenceJson)>,
    n_num: u64,
    n_den: u64,
    rank_pb: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VerifyJson {
    dense_dim: u64,
    checks: Vec<CheckJson>,
    passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CheckJson {
    name: String,
    passed: bool,
    detail: String,
}

// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Input(String),
    VerifyFailed,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerifyFailed) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Reduce { file, output } => {
            let (cf, code) = load_code(&file)?;
            if code.trivial.k == 0 {
                eprintln!("warning: coding group is trivial (K = 1), no logical content");
            }
            let report = base_report(&cf, &code);
            emit(&report, &output, |r, s| render_reduce(r, s))
        }
        Cmd::Analyze { file, subset, output } => {
            let (cf, code) = load_code(&file)?;
            let b = parse_subset(&subset, cf.n)?;
            let mut report = base_report(&cf, &code);
            report.subsets.push(subset_json(&code, subset_info_group(&code, &b)));
            emit(&report, &output, |r, s| {
                render_reduce(r, s);
                render_subsets(r, s, true);
            })
        }
        Cmd::Sweep { file, size, sweep_bound, output } => {
            let (cf, code) = load_code(&file)?;
            if cf.n > sweep_bound {
                return Err(CliError::input(format!(
                    "sweep over {} carriers exceeds the bound {sweep_bound}; raise --sweep-bound",
                    cf.n
                )));
            }
            if let Some(s) = size {
                if s > cf.n {
                    return Err(CliError::input(format!(
                        "--size {s} exceeds the number of carriers {}",
                        cf.n
                    )));
                }
            }
            let mut report = base_report(&cf, &code);
            for sub in subset_sweep(&code, size) {
                report.subsets.push(subset_json(&code, sub));
            }
            check_duality(&report).map_err(CliError::input)?;
            emit(&report, &output, |r, s| {
                render_reduce(r, s);
                render_subsets(r, s, false);
            })
        }
        Cmd::Verify { file, dense_budget, output } => {
            let (cf, code) = load_code(&file)?;
            let verification = run_verification(&code, dense_budget)?;
            let passed = verification.passed;
            let mut report = base_report(&cf, &code);
            // Attach the symbolic per-subset reports so the verified
            // classifications (including partial-presence powers) are
            // visible alongside the check results.
            for sub in subset_sweep(&code, None) {
                report.subsets.push(subset_json(&code, sub));
            }
            report.verification = Some(verification);
            emit(&report, &output, |r, s| {
                render_reduce(r, s);
                render_verify(r, s);
            })?;
            if passed {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// input

fn load_code(path: &PathBuf) -> Result<(CodeFile, EncodedCode), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let cf: CodeFile = serde_json::from_str(&text).map_err(|e| {
        CliError::input(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let code = build_code(&cf)?;
    Ok((cf, code))
}

fn build_code(cf: &CodeFile) -> Result<EncodedCode, CliError> {
    if !(2..=MAX_MODULUS).contains(&cf.d) {
        return Err(CliError::input(format!(
            "field D: {} is not in [2, {MAX_MODULUS}]",
            cf.d
        )));
    }
    if cf.n == 0 {
        return Err(CliError::input("field n: must be at least 1"));
    }
    let mut edges = Vec::new();
    for (i, &[a, b, mult]) in cf.edges.iter().enumerate() {
        let range = 1..=cf.n as i64;
        if !range.contains(&a) || !range.contains(&b) || a == b {
            return Err(CliError::input(format!(
                "edges[{i}]: endpoints ({a}, {b}) must be distinct 1-based carriers"
            )));
        }
        if !(1..cf.d).contains(&mult) {
            return Err(CliError::input(format!(
                "edges[{i}]: multiplicity {mult} is not in [1, {}]",
                cf.d - 1
            )));
        }
        edges.push((a as usize - 1, b as usize - 1, mult));
    }
    for (i, row) in cf.coding_generators.iter().enumerate() {
        if row.len() != cf.n {
            return Err(CliError::input(format!(
                "coding_generators[{i}]: row length {} != n = {}",
                row.len(),
                cf.n
            )));
        }
        if let Some(e) = row.iter().find(|&&e| !(0..cf.d).contains(&e)) {
            return Err(CliError::input(format!(
                "coding_generators[{i}]: exponent {e} is not in [0, {})",
                cf.d
            )));
        }
    }
    let graph = Graph::from_edges(cf.n, cf.d, &edges)
        .map_err(|e| CliError::input(e.to_string()))?;
    let rows = if cf.coding_generators.is_empty() {
        vec![vec![0; cf.n]]
    } else {
        cf.coding_generators.clone()
    };
    let f = ZdMatrix::from_rows(&rows, cf.d).map_err(|e| CliError::input(e.to_string()))?;
    EncodedCode::new(graph, CodingGroup::new(f)).map_err(|e| CliError::input(e.to_string()))
}

fn parse_subset(spec: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("--subset: '{part}' is not an integer")))?;
        if !(1..=n).contains(&v) {
            return Err(CliError::input(format!(
                "--subset: carrier {v} is not in 1..={n}"
            )));
        }
        out.push(v - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

// ---------------------------------------------------------------------------
// report assembly

fn base_report(cf: &CodeFile, code: &EncodedCode) -> ReportFile {
    ReportFile {
        schema_version: SCHEMA_VERSION,
        code: cf.clone(),
        trivial: TrivialJson {
            k: code.trivial.k,
            m: code.trivial.m.clone(),
            d: code.trivial.d.clone(),
            order: code.trivial.order as u64,
        },
        encoding_gates: code.encoding_gates().iter().map(gate_json).collect(),
        subsets: Vec::new(),
        verification: None,
    }
}

fn gate_json(g: &GateSpec) -> GateJson {
    match *g {
        GateSpec::Fourier { q } => GateJson::Fourier { q: q + 1 },
        GateSpec::Smult { q, scale } => GateJson::Smult { q: q + 1, scale },
        GateSpec::Cnot { control, target, power } => GateJson::Cnot {
            control: control + 1,
            target: target + 1,
            power,
        },
        GateSpec::Swap { a, b } => GateJson::Swap { a: a + 1, b: b + 1 },
        GateSpec::Cp { a, b, power } => GateJson::Cp { a: a + 1, b: b + 1, power },
    }
}

fn rep_json(r: &CosetRep) -> RepJson {
    RepJson {
        xi: r.xi.clone(),
        zeta: r.zeta.clone(),
    }
}

fn subset_json(code: &EncodedCode, sub: SubsetReport) -> SubsetJson {
    let gens = generating_set(&sub.members, &code.trivial);
    SubsetJson {
        subset: sub.b.iter().map(|&q| q + 1).collect(),
        subset_zero_based: sub.b.clone(),
        members: sub.members.iter().map(rep_json).collect(),
        generating_set: gens.iter().map(rep_json).collect(),
        all_present: sub.all_present,
        all_absent: sub.all_absent,
        is_abelian: sub.is_abelian,
        classification: sub
            .per_element
            .iter()
            .map(|(r, p)| {
                let pj = match *p {
                    Presence::PerfectlyPresent => PresenceJson::PerfectlyPresent,
                    Presence::Absent => PresenceJson::Absent,
                    Presence::PartiallyPresent { power } => {
                        PresenceJson::PartiallyPresent { power }
                    }
                };
                (rep_json(r), pj)
            })
            .collect(),
        n_num: sub.n_const.num as u64,
        n_den: sub.n_const.den as u64,
        rank_pb: sub.rank_pb as u64,
    }
}

/// All-present on B iff all-absent on the complement, checked whenever a
/// sweep covers both.
fn check_duality(report: &ReportFile) -> Result<(), String> {
    let n = report.code.n;
    for s in &report.subsets {
        let comp: Vec<usize> = (0..n).filter(|q| !s.subset_zero_based.contains(q)).collect();
        if let Some(c) = report.subsets.iter().find(|o| o.subset_zero_based == comp) {
            if s.all_present != c.all_absent {
                return Err(format!(
                    "duality violation between subsets {:?} and {:?}",
                    s.subset, c.subset
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// dense verification

fn run_verification(code: &EncodedCode, budget: u128) -> Result<VerifyJson, CliError> {
    let oracle = Oracle::new(code, budget).map_err(|e| CliError::input(e.to_string()))?;
    let n = code.n();
    let k = oracle.k_dim;
    let mut checks = Vec::new();

    // Encoding: UW carries each trivial codeword onto exactly one codeword.
    {
        let mut ok = true;
        let mut detail = String::new();
        for (i, w) in oracle.encoded_words.iter().enumerate() {
            let hits = oracle
                .codewords
                .iter()
                .filter(|c| equal_up_to_phase(c, w, 1e-9))
                .count();
            if hits != 1 {
                ok = false;
                let _ = write!(detail, "trivial codeword {i} maps to {hits} codewords; ");
            }
        }
        if ok {
            detail = format!("{k} trivial codewords map onto the codeword set");
        }
        checks.push(CheckJson { name: "encoding".into(), passed: ok, detail });
    }

    let reps = all_reps(&code.trivial);
    let rep_cap = 64.min(reps.len());
    let mut membership_ok = true;
    let mut iso_ok = true;
    let mut correctable_ok = true;
    let mut membership_detail = String::new();
    let mut iso_detail = String::new();
    let mut correctable_detail = String::new();

    for mask in 0u64..(1 << n) {
        let b: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let ctx = build_context(code, &b);
        let mut members = Vec::new();
        for rep in &reps {
            if is_member(rep, &ctx, code) {
                members.push(rep.clone());
            }
        }
        for rep in reps.iter().take(rep_cap) {
            let symbolic = members.contains(rep);
            // The full carrier set traces out nothing; g_hat itself is
            // nonzero, so skip the expensive no-op trace.
            let dense = b.len() == n || oracle.member_dense(rep, &b);
            if symbolic != dense {
                membership_ok = false;
                let _ = write!(
                    membership_detail,
                    "B={b:?} rep=({:?}|{:?}): symbolic={symbolic} dense={dense}; ",
                    rep.xi, rep.zeta
                );
            }
        }
        // Rank of the traced projector, and trace multiplicativity on
        // member pairs.
        let n_f = ctx.n_const.num as f64 / ctx.n_const.den as f64;
        if (code.modulus() as u128).pow(b.len() as u32) <= 128 {
            let traced_p =
                partial_trace_dyads(&oracle.codewords, &oracle.codewords, &b, n, code.modulus());
            let rank = rank_hermitian(traced_p, 1e-7) as u128;
            if rank != ctx.rank_pb {
                iso_ok = false;
                let _ = write!(
                    iso_detail,
                    "B={b:?}: dense rank {rank} != K/N = {}; ",
                    ctx.rank_pb
                );
            }
        }
        let pair_cap = if oracle.dim > 256 { 3 } else { 8 };
        for (i, g) in members.iter().enumerate().take(pair_cap) {
            for h in members.iter().skip(i).take(pair_cap) {
                let lhs = oracle.traced_info(g, &b).mul(&oracle.traced_info(h, &b));
                let rhs = oracle.traced_product(g, h, &b).scale_re(n_f);
                if lhs.sub(&rhs).frob_norm() / k as f64 > 1e-9 {
                    iso_ok = false;
                    let _ = write!(
                        iso_detail,
                        "B={b:?}: trace multiplicativity fails for a member pair; "
                    );
                }
            }
        }
        // Commutant dimension equals the member count.
        let dim = oracle.correctable_algebra_dim(&b);
        if dim != members.len() {
            correctable_ok = false;
            let _ = write!(
                correctable_detail,
                "B={b:?}: commutant dim {dim} != |members| {}; ",
                members.len()
            );
        }
    }
    if membership_ok {
        membership_detail = format!(
            "all subsets, {rep_cap} of {} representatives each",
            reps.len()
        );
    }
    if iso_ok {
        iso_detail = "traced ranks and trace multiplicativity verified".into();
    }
    if correctable_ok {
        correctable_detail = "commutant dimension matches |members| on every subset".into();
    }
    checks.push(CheckJson {
        name: "membership".into(),
        passed: membership_ok,
        detail: membership_detail,
    });
    checks.push(CheckJson {
        name: "isomorphism".into(),
        passed: iso_ok,
        detail: iso_detail,
    });
    checks.push(CheckJson {
        name: "correctable_algebra".into(),
        passed: correctable_ok,
        detail: correctable_detail,
    });

    // Type presence: spectral projector patterns for every rep on every
    // subset, for small coding spaces.
    if k <= 16 {
        let mut ok = true;
        let mut detail = String::new();
        'outer: for mask in 0u64..(1 << n) {
            let b: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            let report = subset_info_group(code, &b);
            let table = oracle.traced_dyad_table(&b);
            for (rep, presence) in &report.per_element {
                if rep.is_identity() {
                    continue;
                }
                let a = oracle.restricted_info(rep);
                let projectors = oracle.spectral_projectors(&a);
                let traced: Vec<_> = projectors
                    .iter()
                    .map(|j| oracle.trace_embedded(j, &table))
                    .collect();
                let r = traced.len();
                let agree = |s: usize, t: usize| {
                    traced[s].sub(&traced[t]).frob_norm() <= 1e-7
                };
                // For perfectly present information the traced projectors
                // multiply like orthogonal projections; for absent they all
                // coincide; for partial presence they coincide within
                // classes modulo r / k'.
                let pattern_ok = match presence {
                    Presence::PerfectlyPresent => {
                        (0..r).all(|s| traced[s].frob_norm() > 1e-7)
                            && (0..r).all(|s| {
                                (s + 1..r).all(|t| {
                                    traced[s].mul(&traced[t]).frob_norm() / k as f64 <= 1e-7
                                })
                            })
                    }
                    Presence::Absent => (1..r).all(|s| agree(0, s)),
                    Presence::PartiallyPresent { power } => {
                        let kp = (*power as usize).max(1);
                        if r % kp != 0 {
                            true // no class prediction in this case
                        } else {
                            let modulus = r / kp;
                            (0..r).all(|s| {
                                (0..r).all(|t| agree(s, t) == (s % modulus == t % modulus))
                            })
                        }
                    }
                };
                if !pattern_ok {
                    ok = false;
                    let _ = write!(
                        detail,
                        "B={b:?} rep=({:?}|{:?}): spectral pattern mismatch; ",
                        rep.xi, rep.zeta
                    );
                    break 'outer;
                }
            }
        }
        if ok {
            detail = "traced spectral projectors match the presence classification".into();
        }
        checks.push(CheckJson { name: "type_presence".into(), passed: ok, detail });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyJson {
        dense_dim: oracle.dim as u64,
        checks,
        passed,
    })
}

// ---------------------------------------------------------------------------
// output

fn emit(
    report: &ReportFile,
    output: &OutputOpts,
    render: impl Fn(&ReportFile, &mut String),
) -> Result<(), CliError> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::input(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = String::new();
            render(report, &mut s);
            s
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rep_str(r: &RepJson) -> String {
    let fmt = |v: &[i64]| {
        v.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("({}|{})", fmt(&r.xi), fmt(&r.zeta))
}

fn render_reduce(report: &ReportFile, s: &mut String) {
    let t = &report.trivial;
    let _ = writeln!(
        s,
        "trivial form: k = {}, m = {:?}, d = {:?}, K = {}",
        t.k, t.m, t.d, t.order
    );
    let gates: Vec<String> = report
        .encoding_gates
        .iter()
        .map(|g| match g {
            GateJson::Fourier { q } => format!("F_{q}"),
            GateJson::Smult { q, scale } => format!("S_{q}({scale})"),
            GateJson::Cnot { control, target, power } => {
                format!("CNOT_{control}{target}^{power}")
            }
            GateJson::Swap { a, b } => format!("SWAP_{a}{b}"),
            GateJson::Cp { a, b, power } => format!("CP_{a}{b}^{power}"),
        })
        .collect();
    let _ = writeln!(
        s,
        "encoding circuit: {}",
        if gates.is_empty() {
            "identity".into()
        } else {
            gates.join(" ; ")
        }
    );
}

fn render_subsets(report: &ReportFile, s: &mut String, expand: bool) {
    let _ = writeln!(
        s,
        "{:<16} {:>8} {:>9} {:>8} {:>8} {:>7} {:>8}",
        "subset", "members", "class", "abelian", "N", "rankPB", "gens"
    );
    for sub in &report.subsets {
        let class = if sub.all_present {
            "present"
        } else if sub.all_absent {
            "absent"
        } else {
            "mixed"
        };
        let nstr = if sub.n_den == 1 {
            sub.n_num.to_string()
        } else {
            format!("{}/{}", sub.n_num, sub.n_den)
        };
        let subset_str = format!("{{{}}}", sub.subset.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>9} {:>8} {:>8} {:>7} {:>8}",
            subset_str,
            sub.members.len(),
            class,
            sub.is_abelian,
            nstr,
            sub.rank_pb,
            sub.generating_set.len()
        );
        if expand {
            let gens: Vec<String> = sub.generating_set.iter().map(rep_str).collect();
            let _ = writeln!(s, "  generating set: {}", gens.join(" "));
            if sub.members.len() <= 64 {
                let ms: Vec<String> = sub.members.iter().map(rep_str).collect();
                let _ = writeln!(s, "  members: {}", ms.join(" "));
            } else {
                let _ = writeln!(
                    s,
                    "  members: {} elements (truncated; see JSON output)",
                    sub.members.len()
                );
            }
            for (rep, p) in &sub.classification {
                if let PresenceJson::PartiallyPresent { power } = p {
                    let _ = writeln!(
                        s,
                        "  partially present: {} via power {power}",
                        rep_str(rep)
                    );
                }
            }
        }
    }
}

fn render_verify(report: &ReportFile, s: &mut String) {
    if let Some(v) = &report.verification {
        let _ = writeln!(s, "dense dimension: {}", v.dense_dim);
        for c in &v.checks {
            let _ = writeln!(
                s,
                "{:<20} {}  {}",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                c.detail
            );
        }
        let _ = writeln!(s, "verification: {}", if v.passed { "passed" } else { "FAILED" });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(name: &str) -> (CodeFile, EncodedCode) {
        let path = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
            .join("codes")
            .join(name);
        load_code(&path).map_err(|_| ()).expect("bundled code loads")
    }

    #[test]
    fn bundled_codes_load() {
        for name in [
            "five-qudit-d2.json",
            "five-qudit-d3.json",
            "steane.json",
            "complete-n4-d3.json",
            "bar-p2-d2.json",
            "square-422-d4.json",
            "refinement-d4.json",
        ] {
            let (cf, code) = load(name);
            assert_eq!(code.n(), cf.n);
            assert_eq!(code.modulus(), cf.d);
        }
    }

    #[test]
    fn report_round_trips() {
        let (cf, code) = load("five-qudit-d2.json");
        let mut report = base_report(&cf, &code);
        for sub in subset_sweep(&code, Some(2)) {
            report.subsets.push(subset_json(&code, sub));
        }
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: ReportFile = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
        // Determinism: serializing again is byte-identical.
        assert_eq!(text, serde_json::to_string_pretty(&back).unwrap());
    }

    #[test]
    fn subset_parsing() {
        assert_eq!(parse_subset("3,5,7", 7).unwrap(), vec![2, 4, 6]);
        assert_eq!(parse_subset(" 2 ,1", 4).unwrap(), vec![0, 1]);
        assert!(parse_subset("0", 4).is_err());
        assert!(parse_subset("5", 4).is_err());
        assert!(parse_subset("x", 4).is_err());
    }

    #[test]
    fn invalid_code_files_rejected() {
        let base = CodeFile {
            d: 4,
            n: 2,
            edges: vec![[1, 2, 1]],
            coding_generators: vec![vec![1, 2]],
        };
        assert!(build_code(&base).is_ok());
        let mut bad = base.clone();
        bad.edges = vec![[1, 1, 1]];
        assert!(build_code(&bad).is_err());
        bad = base.clone();
        bad.edges = vec![[1, 2, 4]];
        assert!(build_code(&bad).is_err());
        bad = base.clone();
        bad.coding_generators = vec![vec![1, 4]];
        assert!(build_code(&bad).is_err());
        bad = base.clone();
        bad.d = 1;
        assert!(build_code(&bad).is_err());
    }

    #[test]
    fn verification_passes_on_bundled_code() {
        let (_, code) = load("refinement-d4.json");
        let v = run_verification(&code, 1024).map_err(|_| ()).unwrap();
        assert!(v.passed, "checks: {:?}", v.checks);
    }

    /// Negative control: corrupting the symplectic matrix Q must be caught
    /// by the dense membership comparison.
    #[test]
    fn corrupted_q_detected() {
        let (_, mut code) = load("five-qudit-d2.json");
        let v = code.clifford.q.get(0, 1);
        code.clifford.q.set(0, 1, (v + 1).rem_euclid(2));
        // A corrupted symplectic matrix is caught either by a failing check
        // or by an internal invariant tripping during analysis.
        match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            run_verification(&code, 1024).map_err(|_| ()).unwrap()
        })) {
            Ok(v) => {
                assert!(!v.passed);
                assert!(v.checks.iter().any(|c| c.name == "membership" && !c.passed));
            }
            Err(_) => {} // invariant panic also counts as detection
        }
    }
}
