//! Command-line front end: every subcommand reads the text formats of the
//! library, runs one computation and emits a self-contained RunReport.
//!
//! Results live inside the report; the exit code only reflects whether the
//! run completed (I/O, parse, size-cap and budget failures are nonzero).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use pcsp::conditions::{
    from_label_cover, generate_condition, is_trivial, max_projection_fraction, parse_condition,
    parse_label_cover, serialize_condition, serialize_label_cover, to_label_cover, ConditionKind,
    MinorCondition,
};
use pcsp::core::{
    clique, cycle, horn, nae, one_in_three, parse_structure, serialize_structure, PromiseTemplate,
    Structure,
};
use pcsp::experiments::{run_experiment, EXPERIMENT_NAMES};
use pcsp::freestruct::{
    free_structure, minion_hom_exists, power_structure, width1_check, MinionSource,
};
use pcsp::homsearch::{find_hom_counted, gac, kl_consistency, verify_hom, SearchOpts};
use pcsp::indicator::{
    certificate_json, check_condition_in_pol, clique_certificate, condition_to_instance,
    instance_to_condition, is_clique,
};
use pcsp::minionlab::{
    enumerate_polymorphisms, is_polymorphism, parse_function, serialize_function, PolyCheck,
};
use pcsp::relax::{solve_promise, Method};
use pcsp::SizeCap;

#[derive(Parser)]
#[command(name = "pcsp-cli", version, about = "Promise CSP workbench")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GlobalOpts {
    /// Abort searches after this many branching nodes.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Size cap as `elements[,tuples]`.
    #[arg(long, global = true)]
    size_cap: Option<String>,
    /// Force the reproducible single-worker search path.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker count for parallel search; 1 disables splitting.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Print the full RunReport as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Directory that receives report.json and certificate.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gac,
    Blp,
    Aip,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a homomorphism instance -> template.
    Hom { inst: String, tmpl: String },
    /// Arc-consistency fixpoint of instance w.r.t. template.
    Gac { inst: String, tmpl: String },
    /// (k,l)-consistency family of instance w.r.t. template.
    Klcons {
        inst: String,
        tmpl: String,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
    },
    /// Decide an instance of PCSP(A,B) by a relaxation.
    PcspSolve {
        a: String,
        b: String,
        inst: String,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Enumerate n-ary polymorphisms of (A,B).
    PolyEnum {
        a: String,
        b: String,
        #[arg(short)]
        n: usize,
        /// Stop after this many tables.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Verify a function table as a polymorphism of (A,B).
    PolyCheck { func: String, a: String, b: String },
    /// Generate a named minor condition (olsak, siggers, gloop <G>,
    /// cyclic <p>, symmetric <n>, totally-symmetric <n>, alternating <m>,
    /// majority-robust <n>, example-2-16, example-2-18).
    CondGen { kind: String, param: Option<String> },
    /// Test whether a condition is satisfied by projections.
    CondTrivial { cond: String },
    /// Maximum fraction of identities satisfiable by projections.
    CondRobust { cond: String },
    /// Decide whether Pol(A,B) satisfies a condition.
    CondCheck { cond: String, a: String, b: String },
    /// Translate between instances and minor conditions.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Free structure of Pol(A,B) generated by a structure.
    Free { a: String, b: String, gen: String },
    /// Power structure (nonempty subsets) of a structure.
    PowerStructure { a: String },
    /// Width-1 test for the template (A,B).
    Width1 { a: String, b: String },
    /// Minion homomorphism test Pol(A1,B1) -> Pol(A2,B2).
    MinionHom {
        a1: String,
        b1: String,
        a2: String,
        b2: String,
    },
    /// Search a clique of the given size in a graph.
    Clique { graph: String, k: usize },
    /// Label cover instance -> bipartite minor condition.
    Lc2mc { lc: String },
    /// Bipartite minor condition -> label cover instance.
    Mc2lc { cond: String },
    /// Run a named reproducibility experiment.
    Experiment { name: String },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Instance I over the signature of A -> condition Sigma(A,I).
    Inst2cond { a: String, inst: String },
    /// Condition -> indicator instance over A, with vertex labels.
    Cond2inst { cond: String, a: String },
}

enum CliError {
    Pcsp(pcsp::Error),
    Io(String, std::io::Error),
    Usage(String),
}

impl From<pcsp::Error> for CliError {
    fn from(e: pcsp::Error) -> CliError {
        CliError::Pcsp(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Pcsp(pcsp::Error::Parse { .. }) => 2,
            CliError::Pcsp(pcsp::Error::Invalid(_)) => 3,
            CliError::Pcsp(pcsp::Error::SizeCap { .. }) => 4,
            CliError::Pcsp(pcsp::Error::Budget { .. }) => 5,
            CliError::Io(..) => 6,
            CliError::Usage(_) => 7,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Pcsp(e) => e.to_string(),
            CliError::Io(path, e) => format!("{}: {}", path, e),
            CliError::Usage(m) => m.clone(),
        }
    }
}

/// Shared run state: resolved options plus digests of everything read.
struct Session {
    opts: SearchOpts,
    cap: SizeCap,
    inputs: BTreeMap<String, String>,
}

fn sha256_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

/// Built-in structures by name: k<N>, c<N>, nae<N>, t/1in3, horn.
fn builtin_structure(name: &str) -> Option<Structure> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix('k').and_then(|s| s.parse().ok()) {
        return Some(clique(n));
    }
    if let Some(n) = lower.strip_prefix('c').and_then(|s| s.parse().ok()) {
        return Some(cycle(n));
    }
    if let Some(n) = lower.strip_prefix("nae").and_then(|s| s.parse().ok()) {
        return Some(nae(n));
    }
    match lower.as_str() {
        "t" | "1in3" => Some(one_in_three()),
        "horn" => Some(horn()),
        _ => None,
    }
}

impl Session {
    fn new(g: &GlobalOpts) -> Result<Session, CliError> {
        let mut cap = SizeCap::default();
        if let Some(spec) = &g.size_cap {
            let mut parts = spec.split(',');
            let elems = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| CliError::Usage(format!("bad --size-cap value: {}", spec)))?;
            cap.max_elements = elems;
            match parts.next() {
                Some(p) => {
                    cap.max_tuples = p
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad --size-cap value: {}", spec)))?;
                }
                None => cap.max_tuples = elems.saturating_mul(5),
            }
            if parts.next().is_some() {
                return Err(CliError::Usage(format!("bad --size-cap value: {}", spec)));
            }
        }
        let opts = SearchOpts {
            node_budget: g.node_budget,
            deterministic: g.deterministic || g.jobs <= 1,
            jobs: g.jobs.max(1),
            pins: Vec::new(),
        };
        Ok(Session { opts, cap, inputs: BTreeMap::new() })
    }

    fn read(&mut self, path: &str) -> Result<String, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Io(path.to_string(), e))?;
        self.inputs.insert(path.to_string(), sha256_hex(&text));
        Ok(text)
    }

    /// A file path, or the name of a built-in structure when no such file
    /// exists.
    fn structure(&mut self, arg: &str) -> Result<Structure, CliError> {
        if !Path::new(arg).is_file() {
            if let Some(s) = builtin_structure(arg) {
                self.inputs
                    .insert(format!("builtin:{}", arg), sha256_hex(&serialize_structure(&s)));
                return Ok(s);
            }
        }
        let text = self.read(arg)?;
        Ok(parse_structure(&text)?)
    }

    fn condition(&mut self, arg: &str) -> Result<MinorCondition, CliError> {
        let text = self.read(arg)?;
        Ok(parse_condition(&text)?)
    }

    fn template(&mut self, a: &str, b: &str) -> Result<PromiseTemplate, CliError> {
        let a = self.structure(a)?;
        let b = self.structure(b)?;
        Ok(PromiseTemplate::new(a, b)?)
    }
}

/// (result, certificate) for the report; certificates are verified before
/// they are emitted.
fn dispatch(cmd: &Cmd, s: &mut Session) -> Result<(Value, Value), CliError> {
    match cmd {
        Cmd::Hom { inst, tmpl } => {
            let i = s.structure(inst)?;
            let t = s.structure(tmpl)?;
            let (h, nodes) = find_hom_counted(&i, &t, &s.opts)?;
            let cert = match &h {
                Some(h) => {
                    if !verify_hom(&i, &t, h) {
                        return Err(CliError::Pcsp(pcsp::Error::Invalid(
                            "search returned an invalid homomorphism".into(),
                        )));
                    }
                    json!({"kind": "hom", "map": h, "verified": true})
                }
                None => json!({"kind": "unsat", "nodes": nodes}),
            };
            Ok((json!({"sat": h.is_some(), "nodes": nodes}), cert))
        }
        Cmd::Gac { inst, tmpl } => {
            let i = s.structure(inst)?;
            let t = s.structure(tmpl)?;
            match gac(&i, &t)? {
                Some(d) => Ok((
                    json!({"consistent": true}),
                    json!({"kind": "gac-domains", "domains": d.candidates}),
                )),
                None => Ok((json!({"consistent": false}), json!({"kind": "gac-wipeout"}))),
            }
        }
        Cmd::Klcons { inst, tmpl, k, l } => {
            let i = s.structure(inst)?;
            let t = s.structure(tmpl)?;
            let fam = kl_consistency(&i, &t, *k, *l, &s.cap)?;
            let sizes: BTreeMap<usize, usize> =
                fam.maps.iter().fold(BTreeMap::new(), |mut acc, (dom, set)| {
                    *acc.entry(dom.len()).or_insert(0) += set.len();
                    acc
                });
            Ok((
                json!({"consistent": !fam.is_empty(), "k": k, "l": l}),
                json!({"kind": "kl-family", "maps_by_domain_size": sizes}),
            ))
        }
        Cmd::PcspSolve { a, b, inst, method } => {
            let t = s.template(a, b)?;
            let i = s.structure(inst)?;
            let m = match method {
                MethodArg::Gac => Method::Gac,
                MethodArg::Blp => Method::Blp,
                MethodArg::Aip => Method::Aip,
            };
            let v = solve_promise(&t, &i, m, &s.opts, &s.cap)?;
            Ok((json!({"yes": v.yes, "soundness": v.soundness}), v.certificate))
        }
        Cmd::PolyEnum { a, b, n, limit } => {
            let t = s.template(a, b)?;
            let (tables, truncated) = enumerate_polymorphisms(&t, *n, *limit, &s.cap)?;
            let cert = if tables.len() <= 64 {
                json!({
                    "kind": "tables",
                    "tables": tables.iter().map(|f| serialize_function(f)).collect::<Vec<_>>(),
                })
            } else {
                json!({"kind": "tables", "count": tables.len()})
            };
            Ok((json!({"count": tables.len(), "truncated": truncated}), cert))
        }
        Cmd::PolyCheck { func, a, b } => {
            let text = s.read(func)?;
            let f = parse_function(&text)?;
            let t = s.template(a, b)?;
            match is_polymorphism(&f, &t)? {
                PolyCheck::Ok => Ok((json!({"polymorphism": true}), Value::Null)),
                PolyCheck::Violation { relation, columns } => Ok((
                    json!({"polymorphism": false}),
                    json!({"kind": "violation", "relation": relation, "columns": columns}),
                )),
            }
        }
        Cmd::CondGen { kind, param } => {
            let mut held = None;
            let c = generate_condition(parse_kind(kind, param.as_deref(), s, &mut held)?)?;
            Ok((
                json!({
                    "name": c.name,
                    "symbols": c.symbols.len(),
                    "identities": c.identities.len(),
                    "condition": serialize_condition(&c),
                }),
                Value::Null,
            ))
        }
        Cmd::CondTrivial { cond } => {
            let c = s.condition(cond)?;
            match is_trivial(&c) {
                Some(coords) => Ok((
                    json!({"trivial": true}),
                    json!({"kind": "projection-assignment", "coordinates": coords}),
                )),
                None => Ok((json!({"trivial": false}), Value::Null)),
            }
        }
        Cmd::CondRobust { cond } => {
            let c = s.condition(cond)?;
            let (frac, witness) = max_projection_fraction(&c);
            Ok((
                json!({"fraction": frac.to_string()}),
                json!({"kind": "projection-assignment", "coordinates": witness}),
            ))
        }
        Cmd::CondCheck { cond, a, b } => {
            let c = s.condition(cond)?;
            let t = s.template(a, b)?;
            let outcome = check_condition_in_pol(&c, &t, &s.opts, &s.cap)?;
            let status = if outcome.is_sat() { "sat" } else { "unsat-or-unknown" };
            Ok((json!({"status": status}), certificate_json(&c, &t, &outcome)))
        }
        Cmd::Reduce(ReduceCmd::Inst2cond { a, inst }) => {
            let a = s.structure(a)?;
            let i = s.structure(inst)?;
            let c = instance_to_condition(&a, &i)?;
            Ok((
                json!({
                    "symbols": c.symbols.len(),
                    "identities": c.identities.len(),
                    "condition": serialize_condition(&c),
                }),
                Value::Null,
            ))
        }
        Cmd::Reduce(ReduceCmd::Cond2inst { cond, a }) => {
            let c = s.condition(cond)?;
            let a = s.structure(a)?;
            let (inst, map) = condition_to_instance(&c, &a, &s.cap)?;
            Ok((
                json!({
                    "elements": inst.domain_size,
                    "structure": serialize_structure(&inst),
                }),
                json!({
                    "kind": "vertex-labels",
                    "labels": map
                        .labels
                        .iter()
                        .map(|l| json!({"symbol": l.symbol, "args": l.args}))
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        Cmd::Free { a, b, gen } => {
            let t = s.template(a, b)?;
            let g = s.structure(gen)?;
            let f = free_structure(MinionSource::Template(&t), &g, &s.cap)?;
            Ok((
                json!({
                    "elements": f.structure.domain_size,
                    "structure": serialize_structure(&f.structure),
                }),
                Value::Null,
            ))
        }
        Cmd::PowerStructure { a } => {
            let a = s.structure(a)?;
            let p = power_structure(&a, &s.cap)?;
            Ok((
                json!({"elements": p.domain_size, "structure": serialize_structure(&p)}),
                Value::Null,
            ))
        }
        Cmd::Width1 { a, b } => {
            let t = s.template(a, b)?;
            let (yes, h) = width1_check(&t, &s.cap, &s.opts)?;
            let cert = match h {
                Some(h) => json!({"kind": "hom", "map": h, "verified": true}),
                None => json!({"kind": "unsat"}),
            };
            Ok((json!({"width1": yes}), cert))
        }
        Cmd::MinionHom { a1, b1, a2, b2 } => {
            let src = s.template(a1, b1)?;
            let tgt = s.template(a2, b2)?;
            let (yes, h) = minion_hom_exists(&src, &tgt, &s.cap, &s.opts)?;
            let cert = match h {
                Some(h) => json!({"kind": "hom", "map": h, "verified": true}),
                None => json!({"kind": "unsat"}),
            };
            Ok((json!({"exists": yes}), cert))
        }
        Cmd::Clique { graph, k } => {
            let g = s.structure(graph)?;
            match clique_certificate(&g, *k, s.opts.node_budget)? {
                Some(v) => {
                    if !is_clique(&g, &v)? {
                        return Err(CliError::Pcsp(pcsp::Error::Invalid(
                            "clique search returned a non-clique".into(),
                        )));
                    }
                    Ok((
                        json!({"found": true, "size": k}),
                        json!({"kind": "clique", "clique_vertices": v, "verified": true}),
                    ))
                }
                None => Ok((json!({"found": false, "size": k}), Value::Null)),
            }
        }
        Cmd::Lc2mc { lc } => {
            let text = s.read(lc)?;
            let c = from_label_cover(&parse_label_cover(&text)?)?;
            Ok((json!({"condition": serialize_condition(&c)}), Value::Null))
        }
        Cmd::Mc2lc { cond } => {
            let c = s.condition(cond)?;
            let lc = to_label_cover(&c)?;
            Ok((json!({"labelcover": serialize_label_cover(&lc)}), Value::Null))
        }
        Cmd::Experiment { name } => {
            let r = run_experiment(name, &s.opts, &s.cap).map_err(|e| match e {
                pcsp::Error::Invalid(m) if m.contains("unknown experiment") => CliError::Usage(
                    format!("{}; known: {}", m, EXPERIMENT_NAMES.join(", ")),
                ),
                e => CliError::Pcsp(e),
            })?;
            Ok((
                json!({"name": r.name, "passed": r.passed, "details": r.details}),
                Value::Null,
            ))
        }
    }
}

fn parse_kind<'a>(
    kind: &str,
    param: Option<&str>,
    s: &mut Session,
    held: &'a mut Option<Structure>,
) -> Result<ConditionKind<'a>, CliError> {
    let need_num = |p: Option<&str>| -> Result<usize, CliError> {
        p.and_then(|v| v.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("kind {} needs a numeric parameter", kind)))
    };
    Ok(match kind {
        "olsak" => ConditionKind::Olsak,
        "siggers" => ConditionKind::Siggers,
        "gloop" => {
            let name = param
                .ok_or_else(|| CliError::Usage("gloop needs a structure parameter".into()))?;
            *held = Some(s.structure(name)?);
            ConditionKind::GLoop(held.as_ref().unwrap())
        }
        "cyclic" => ConditionKind::Cyclic(need_num(param)?),
        "symmetric" => ConditionKind::Symmetric(need_num(param)?),
        "totally-symmetric" => ConditionKind::TotallySymmetric(need_num(param)?),
        "alternating" => ConditionKind::Alternating(need_num(param)?),
        "majority-robust" => ConditionKind::MajorityRobust(need_num(param)?),
        "example-2-16" => ConditionKind::Example216,
        "example-2-18" => ConditionKind::Example218,
        other => {
            return Err(CliError::Usage(format!("unknown condition kind: {}", other)));
        }
    })
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let mut session = Session::new(&cli.global)?;
    let start = Instant::now();
    let (result, certificate) = dispatch(&cli.cmd, &mut session)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = json!({
        "command": std::env::args().collect::<Vec<_>>(),
        "inputs": session.inputs,
        "result": result,
        "certificate": certificate,
        "wall_ms": wall_ms,
        "budget": {
            "node_budget": session.opts.node_budget,
            "size_cap_elements": session.cap.max_elements,
            "size_cap_tuples": session.cap.max_tuples,
            "jobs": session.opts.jobs,
            "deterministic": session.opts.deterministic,
        },
    });
    if let Some(dir) = &cli.global.out {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
        let path = dir.join("report.json");
        fs::write(&path, serde_json::to_string_pretty(&report).unwrap())
            .map_err(|e| CliError::Io(path.display().to_string(), e))?;
        if !report["certificate"].is_null() {
            let path = dir.join("certificate.json");
            fs::write(&path, serde_json::to_string_pretty(&report["certificate"]).unwrap())
                .map_err(|e| CliError::Io(path.display().to_string(), e))?;
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{}", serde_json::to_string_pretty(&report["result"]).unwrap());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
