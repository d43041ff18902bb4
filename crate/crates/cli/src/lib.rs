//! Command-line front end: argument definitions, the three subcommands and
//! their text/JSON reports.

pub mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use polyterm::chain_bound::{chain_bound, BoundKind, ChainError, DegreeBoundFn, DEFAULT_MACHINE_CAP};
use polyterm::nti::{
    input_set_check_with, nti_groebner, nti_variety, point_terminates, AnalysisLimits, InputSetStatus, NtiError,
    NtiResult, TerminationVerdict,
};
use polyterm::poly::{PolySet, Rational};
use polyterm::program::{parse_point, parse_polynomial, parse_program, Program, ProgramKind, Semantics};
use polyterm::sim::{
    find_lasso_with, simulate_tree_with, Lasso, SimError, SimLimits, DEFAULT_BIT_CAP, DEFAULT_NODE_CAP,
};

use report::*;

#[derive(Parser, Debug)]
#[command(
    name = "polyterm",
    version,
    about = "Non-terminating inputs of polynomial loops with equality guards"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the non-terminating input set of one or more programs.
    Analyze(AnalyzeArgs),
    /// Evaluate the ascending-chain length bound L(d, f).
    Bound(BoundArgs),
    /// Explore the execution tree from a concrete input.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmChoice {
    Gb,
    Variety,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsChoice {
    Real,
    Complex,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Program files (.mpp).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "gb")]
    pub algorithm: AlgorithmChoice,
    #[arg(long, value_enum, default_value = "complex")]
    pub semantics: SemanticsChoice,
    /// Largest fixpoint index tried (default: the iteration bound, at most 64).
    #[arg(long)]
    pub max_iter: Option<u64>,
    /// Largest total degree allowed in intermediate polynomials.
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Wall-clock budget per analysis in seconds (0 disables it).
    #[arg(long, default_value_t = 1200.0)]
    pub timeout: f64,
    /// Input point, comma-separated exact rationals; may repeat.
    #[arg(long = "point", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Polynomial constraint; all constraints together define the input set to check.
    #[arg(long = "constraint", allow_hyphen_values = true)]
    pub constraints: Vec<String>,
    /// Worker threads when several files are given.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Print a JSON report instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Number of variables (defaults to the program's when --file is used).
    #[arg(long)]
    pub d: Option<u64>,
    #[command(flatten)]
    pub source: BoundSource,
    /// Largest value computed exactly.
    #[arg(long, default_value_t = DEFAULT_MACHINE_CAP)]
    pub cap: u64,
    /// Print a JSON report instead of text
    #[arg(long)]
    pub json: bool,
}

/// Exactly one way of giving the degree bound `f`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BoundSource {
    /// f(i) = a*i + b
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    pub affine: Option<(u64, u64)>,
    /// f(i) = a * b^(i-1)
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    pub geometric: Option<(u64, u64)>,
    /// Use the degree bound of a program.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Program file (.mpp)
    pub file: PathBuf,
    /// Start state, comma-separated exact rationals
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Number of steps to explore
    #[arg(long)]
    pub depth: usize,
    /// Also look for a lasso (a path revisiting a state) within `depth` steps.
    #[arg(long)]
    pub lasso: bool,
    /// Give up after visiting this many tree nodes
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    pub max_nodes: usize,
    /// Stop expanding states whose coordinates exceed this many bits
    #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
    pub bit_cap: u64,
    /// Print a JSON report instead of text
    #[arg(long)]
    pub json: bool,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got `{s}`"))?;
    let a = a.trim().parse::<u64>().map_err(|e| format!("`{a}`: {e}"))?;
    let b = b.trim().parse::<u64>().map_err(|e| format!("`{b}`: {e}"))?;
    Ok((a, b))
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let res = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Bound(b) => cmd_bound(&b),
        Command::Simulate(s) => cmd_simulate(&s),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Caps the address space at `POLYTERM_MAX_MEM` bytes when the variable is set.
pub fn apply_memory_cap() -> Result<()> {
    let Ok(raw) = std::env::var("POLYTERM_MAX_MEM") else {
        return Ok(());
    };
    let bytes: u64 = raw
        .trim()
        .parse()
        .with_context(|| format!("POLYTERM_MAX_MEM must be a byte count, got `{raw}`"))?;
    let lim = libc::rlimit {
        rlim_cur: bytes as libc::rlim_t,
        rlim_max: bytes as libc::rlim_t,
    };
    // SAFETY: setrlimit only reads the struct we pass.
    let rc = unsafe { libc::setrlimit(libc::RLIMIT_AS, &lim) };
    if rc != 0 {
        bail!("setrlimit failed: {}", std::io::Error::last_os_error());
    }
    Ok(())
}

struct Loaded {
    program: Program,
    info: ProgramInfo,
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let program = parse_program(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let info = ProgramInfo {
        file: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        kind: match program.kind() {
            ProgramKind::Mpp(_) => "mpp".into(),
            ProgramKind::Pgc(_) => "pgc".into(),
        },
        variables: program.names().to_vec(),
        branches: program.num_branches(),
    };
    Ok(Loaded { program, info })
}

fn point_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn lasso_report(l: &Lasso) -> LassoReport {
    LassoReport {
        stem: l.stem.to_string(),
        cycle: l.cycle.to_string(),
    }
}

fn nti_status(e: &NtiError) -> Option<Status> {
    match e {
        NtiError::IterationLimitExceeded { .. } => Some(Status::IterationLimitExceeded),
        NtiError::ResourceLimitExceeded(_) => Some(Status::ResourceLimitExceeded),
        NtiError::UnsupportedSemantics(_) => Some(Status::UnsupportedSemantics),
        _ => None,
    }
}

fn analysis_report(names: &[String], r: &NtiResult, status: Status, message: Option<String>) -> AnalysisReport {
    AnalysisReport {
        algorithm: r.algorithm.to_string(),
        status,
        index: Some(r.index),
        basis: r.basis.fmt_with(names),
        iteration_bound: r.bound.to_string(),
        history: r
            .history
            .iter()
            .map(|s| StepReport {
                generators: s.generators,
                max_degree: s.max_degree,
                family: s.family,
            })
            .collect(),
        stats: Some(StatsReport {
            elapsed_us: r.stats.elapsed.as_micros() as u64,
            reductions: r.stats.reductions,
            membership_tests: r.stats.membership_tests,
        }),
        message,
    }
}

struct Query {
    points: Vec<(String, Vec<Rational>)>,
    constraints: Vec<String>,
}

type Analysis = fn(&Program, &AnalysisLimits) -> Result<NtiResult, NtiError>;

fn analyze_one(path: &PathBuf, args: &AnalyzeArgs, query: &Query) -> Result<Report> {
    let Loaded { program, info } = load(path)?;
    let semantics = match args.semantics {
        SemanticsChoice::Real => Semantics::Real,
        SemanticsChoice::Complex => Semantics::Complex,
    };
    let program = program.with_semantics(semantics);
    let names = program.names().to_vec();
    for (text, v) in &query.points {
        if v.len() != program.nvars() {
            bail!(
                "point `{text}` has {} coordinates but {} has {} variables",
                v.len(),
                info.file,
                program.nvars()
            );
        }
    }
    let constraint_polys = query
        .constraints
        .iter()
        .map(|c| parse_polynomial(c, &names).map_err(|e| anyhow!("constraint `{c}`: {e}")))
        .collect::<Result<Vec<_>>>()?;

    let mut limits = AnalysisLimits {
        max_iterations: args.max_iter,
        ..AnalysisLimits::default()
    };
    if let Some(d) = args.max_degree {
        limits.poly.max_degree = d;
    }
    if args.timeout > 0.0 {
        limits.timeout = Some(Duration::from_secs_f64(args.timeout));
    }

    let mut runs: Vec<Analysis> = Vec::new();
    let mut labels = Vec::new();
    if matches!(args.algorithm, AlgorithmChoice::Gb | AlgorithmChoice::Both) {
        runs.push(nti_groebner);
        labels.push("groebner");
    }
    if matches!(args.algorithm, AlgorithmChoice::Variety | AlgorithmChoice::Both) {
        runs.push(nti_variety);
        labels.push("variety");
    }

    let mut analyses = Vec::new();
    let mut exact: Option<NtiResult> = None;
    let mut status = Status::Ok;
    for (run, label) in runs.into_iter().zip(labels) {
        match run(&program, &limits) {
            Ok(r) => {
                analyses.push(analysis_report(&names, &r, Status::Ok, None));
                if exact.is_none() {
                    exact = Some(r);
                }
            }
            Err(e) => {
                let st = nti_status(&e).ok_or_else(|| anyhow!("{}: {e}", info.file))?;
                status = status.worst(st);
                let rep = match &e {
                    NtiError::IterationLimitExceeded { partial, .. } => {
                        analysis_report(&names, partial, st, Some(e.to_string()))
                    }
                    _ => AnalysisReport {
                        algorithm: label.into(),
                        status: st,
                        index: None,
                        basis: Vec::new(),
                        iteration_bound: polyterm::nti::iteration_bound(&program, limits.bound_cap).to_string(),
                        history: Vec::new(),
                        stats: None,
                        message: Some(e.to_string()),
                    },
                };
                analyses.push(rep);
            }
        }
    }

    let mut points = Vec::new();
    let mut constraints = None;
    if let Some(r) = &exact {
        for (_, v) in &query.points {
            let verdict = point_terminates(&program, r, v).map_err(|e| anyhow!("{e}"))?;
            points.push(match verdict {
                TerminationVerdict::Terminating => PointReport {
                    point: point_strings(v),
                    verdict: "Terminating".into(),
                    lasso: None,
                },
                TerminationVerdict::NonTerminating { witness } => PointReport {
                    point: point_strings(v),
                    verdict: "NonTerminating".into(),
                    lasso: witness.as_ref().map(lasso_report),
                },
            });
        }
        if !constraint_polys.is_empty() {
            let set = PolySet::new(program.nvars(), constraint_polys.iter().cloned())?;
            let st = match input_set_check_with(r, &set, &limits.poly) {
                Ok(s) => Some(s),
                Err(e) => {
                    status = status.worst(nti_status(&e).ok_or_else(|| anyhow!("{e}"))?);
                    None
                }
            };
            if let Some(st) = st {
                constraints = Some(ConstraintReport {
                    polynomials: constraint_polys.iter().map(|p| p.fmt_with(&names)).collect(),
                    status: match st {
                        InputSetStatus::Empty => "Empty".into(),
                        InputSetStatus::NonEmpty => "NonEmpty".into(),
                    },
                });
            }
        }
    }

    Ok(Report {
        report_version: REPORT_VERSION,
        program: info,
        semantics: match semantics {
            Semantics::Real => "real".into(),
            Semantics::Complex => "complex".into(),
        },
        analyses,
        points,
        constraints,
        status,
    })
}

fn count(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

pub fn render_report(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "program: {} (sha256 {})", r.program.file, &r.program.sha256[..16]);
    let _ = writeln!(
        s,
        "  {} ({}), {}, {} semantics",
        count(r.program.variables.len(), "variable", "variables"),
        r.program.variables.join(", "),
        count(r.program.branches, "branch", "branches"),
        r.semantics
    );
    for a in &r.analyses {
        let label = if a.algorithm == "groebner" { "N̂" } else { "N" };
        let _ = writeln!(s, "algorithm: {}  status: {:?}", a.algorithm, a.status);
        if let Some(i) = a.index {
            let _ = writeln!(s, "  {label} = {i}");
        }
        let _ = writeln!(s, "  iteration bound: {}", a.iteration_bound);
        if let Some(m) = &a.message {
            let _ = writeln!(s, "  note: {m}");
        }
        if !a.basis.is_empty() || a.status == Status::Ok {
            let _ = writeln!(s, "  basis ({}):", count(a.basis.len(), "generator", "generators"));
            for g in &a.basis {
                let _ = writeln!(s, "    {g}");
            }
        }
        if let Some(st) = &a.stats {
            let _ = writeln!(
                s,
                "  time: {:.3} s, reductions: {}, membership tests: {}",
                st.elapsed_us as f64 / 1e6,
                st.reductions,
                st.membership_tests
            );
        }
    }
    for p in &r.points {
        let _ = write!(s, "point ({}): {}", p.point.join(", "), p.verdict);
        if let Some(l) = &p.lasso {
            let _ = write!(s, ", lasso {} ({})^ω", l.stem, l.cycle);
        }
        s.push('\n');
    }
    if let Some(c) = &r.constraints {
        let _ = writeln!(s, "constraints {{{}}}: {}", c.polynomials.join(", "), c.status);
    }
    let _ = writeln!(s, "status: {:?}", r.status);
    s
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32> {
    let points = args
        .points
        .iter()
        .map(|t| Ok((t.clone(), parse_point(t).map_err(|e| anyhow!("point `{t}`: {e}"))?)))
        .collect::<Result<Vec<_>>>()?;
    let query = Query {
        points,
        constraints: args.constraints.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .context("cannot start worker threads")?;
    let results: Vec<Result<Report>> =
        pool.install(|| args.files.par_iter().map(|f| analyze_one(f, args, &query)).collect());

    let mut reports = Vec::new();
    let mut failed = false;
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                eprintln!("error: {e:#}");
                failed = true;
            }
        }
    }
    if args.json {
        let out = if reports.len() == 1 && args.files.len() == 1 {
            serde_json::to_string_pretty(&reports[0])?
        } else {
            serde_json::to_string_pretty(&reports)?
        };
        println!("{out}");
    } else {
        for (k, r) in reports.iter().enumerate() {
            if k > 0 {
                println!();
            }
            print!("{}", render_report(r));
        }
    }
    if failed {
        return Ok(1);
    }
    Ok(reports
        .iter()
        .fold(Status::Ok, |acc, r| acc.worst(r.status))
        .exit_code())
}

fn describe(f: &DegreeBoundFn) -> String {
    match f.kind() {
        BoundKind::Affine { a, b } => format!("affine({a},{b})"),
        BoundKind::Geometric { a, b } => format!("geometric({a},{b})"),
        BoundKind::Table(t) => format!("table{t:?}"),
    }
}

pub fn cmd_bound(args: &BoundArgs) -> Result<i32> {
    let (d, f, desc) = if let Some((a, b)) = args.source.affine {
        let d = args.d.ok_or_else(|| anyhow!("--d is required with --affine"))?;
        (d, DegreeBoundFn::affine(a, b)?, format!("affine({a},{b})"))
    } else if let Some((a, b)) = args.source.geometric {
        let d = args.d.ok_or_else(|| anyhow!("--d is required with --geometric"))?;
        (d, DegreeBoundFn::geometric(a, b)?, format!("geometric({a},{b})"))
    } else if let Some(path) = &args.source.file {
        let Loaded { program, info } = load(path)?;
        let f = program.degree_bound_fn()?;
        let d = args.d.unwrap_or(program.nvars() as u64);
        let desc = format!("{} from {}", describe(&f), info.file);
        (d, f, desc)
    } else {
        bail!("one of --affine, --geometric, --file is required");
    };
    if d == 0 {
        bail!("--d must be at least 1");
    }
    let mut rep = BoundReport {
        report_version: REPORT_VERSION,
        d,
        f: desc,
        cap: args.cap,
        value: None,
        lower_bound: None,
        status: Status::Ok,
        message: None,
    };
    match chain_bound(d, &f, args.cap) {
        Ok(v) => rep.value = Some(v.to_string()),
        Err(ChainError::CapExceeded { lower_bound, .. }) => {
            rep.status = Status::ResourceLimitExceeded;
            rep.lower_bound = Some(lower_bound.to_string());
            rep.message = Some(format!("exceeds cap {}", args.cap));
        }
        Err(ChainError::InvalidArgument(m)) => bail!("{m}"),
        Err(e) => {
            rep.status = Status::ResourceLimitExceeded;
            rep.message = Some(e.to_string());
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else if let Some(v) = &rep.value {
        println!("{v}");
    } else {
        println!("{}", rep.message.as_deref().unwrap_or("unknown"));
    }
    Ok(rep.status.exit_code())
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let Loaded { program, info } = load(&args.file)?;
    let v = parse_point(&args.point).map_err(|e| anyhow!("point `{}`: {e}", args.point))?;
    if v.len() != program.nvars() {
        bail!(
            "point `{}` has {} coordinates but {} has {} variables",
            args.point,
            v.len(),
            info.file,
            program.nvars()
        );
    }
    let limits = SimLimits {
        node_cap: args.max_nodes,
        bit_cap: args.bit_cap,
    };
    let mut rep = SimulationReport {
        report_version: REPORT_VERSION,
        program: info,
        point: point_strings(&v),
        depth: args.depth,
        nodes: 0,
        alive: Vec::new(),
        longest_alive: None,
        truncated: false,
        bit_capped: false,
        lasso: None,
        status: Status::Ok,
        message: None,
    };
    let limit_hit = |rep: &mut SimulationReport, e: SimError| -> Result<()> {
        match e {
            SimError::ResourceLimitExceeded(m) => {
                rep.status = Status::ResourceLimitExceeded;
                rep.message = Some(m);
                Ok(())
            }
            other => Err(anyhow!("{other}")),
        }
    };
    match simulate_tree_with(&program, &v, args.depth, &limits) {
        Ok(t) => {
            rep.nodes = t.nodes;
            rep.longest_alive = t.longest_alive();
            rep.alive = t.alive;
            rep.truncated = t.truncated;
            rep.bit_capped = t.bit_capped;
        }
        Err(e) => limit_hit(&mut rep, e)?,
    }
    if args.lasso && rep.status == Status::Ok {
        match find_lasso_with(&program, &v, args.depth, &limits) {
            Ok(l) => rep.lasso = l.as_ref().map(lasso_report),
            Err(e) => limit_hit(&mut rep, e)?,
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        println!("program: {}", rep.program.file);
        println!("point: ({})", rep.point.join(", "));
        println!("depth: {}, nodes: {}", rep.depth, rep.nodes);
        let alive: Vec<String> = rep.alive.iter().map(ToString::to_string).collect();
        println!("alive paths by length: [{}]", alive.join(", "));
        match rep.longest_alive {
            Some(k) => println!("longest alive path: {k}"),
            None => println!("longest alive path: none (0 alive paths)"),
        }
        if rep.truncated {
            println!("truncated: paths still alive at depth {}", rep.depth);
        }
        if rep.bit_capped {
            println!("bit cap hit: some states were not expanded");
        }
        if args.lasso {
            match &rep.lasso {
                Some(l) => println!("lasso: {} ({})^ω", l.stem, l.cycle),
                None => println!("lasso: none found within {} steps", rep.depth),
            }
        }
        if let Some(m) = &rep.message {
            println!("note: {m}");
        }
        println!("status: {:?}", rep.status);
    }
    Ok(rep.status.exit_code())
}
