//! Command line front end: solve, approximate, verify, generate, and
//! benchmark districting instances stored as JSON files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gerrygraph::dp::{solve_exact, solve_exact_default, DpOptions};
use gerrygraph::io::{parse_edgelist, DecompositionFile, InstanceFile, SolutionFile};
use gerrygraph::planar::{
    gen_grid, gen_outerplanar_ring, gen_random_planar, gen_triangulated_grid, GenOptions,
};
use gerrygraph::reductions::{
    connected_vertex_cover_to_gerry, independent_set_to_gerry, reduction_request, SourceGraph,
};
use gerrygraph::treewidth::{make_nice, validate_decomposition};
use gerrygraph::{
    approx_solve, oracle_max_winning, ptas_solve, verify_districting, BoundKind, Bounds,
    Districting, ElectionGraph, Error, KMode, Objective, Result, RotationSystem, SolveRequest,
};

#[derive(Parser)]
#[command(
    name = "gerrygraph",
    version,
    about = "Districting solvers, generators, and benchmarks",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dynamic program over a tree decomposition
    Solve(SolveArgs),
    /// Constant-factor approximation for planar two-party instances
    Approx(CommonArgs),
    /// Approximation scheme for planar two-party instances; always
    /// reports singleton seats over exactly k districts
    Ptas(PtasArgs),
    /// Exhaustive enumeration, exact on small instances
    Oracle(CommonArgs),
    /// Independent check of a solution file against its instance
    Verify(VerifyArgs),
    /// Write a generated instance
    Gen(GenArgs),
    /// Run a suite of instances x algorithms and write a CSV
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    All,
    Singleton,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::All => Objective::AllWinning,
            ObjectiveArg::Singleton => Objective::SingletonWinning,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKindArg {
    VertexCount,
    TotalWeight,
}

impl From<BoundKindArg> for BoundKind {
    fn from(b: BoundKindArg) -> Self {
        match b {
            BoundKindArg::VertexCount => BoundKind::VertexCount,
            BoundKindArg::TotalWeight => BoundKind::TotalWeight,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Instance file
    instance: PathBuf,
    /// Instance file format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Override the instance's district count
    #[arg(long)]
    k: Option<usize>,
    /// Require exactly k districts
    #[arg(long, conflicts_with = "at_most_k")]
    exactly_k: bool,
    /// Allow at most k districts
    #[arg(long)]
    at_most_k: bool,
    /// Override the instance's objective
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Override or add a lower per-district size bound
    #[arg(long)]
    lower: Option<u64>,
    /// Override or add an upper per-district size bound
    #[arg(long)]
    upper: Option<u64>,
    /// How district size is measured for the bounds
    #[arg(long, value_enum)]
    bound_kind: Option<BoundKindArg>,
    /// Write the solution here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Tree decomposition file to use instead of the built-in heuristic
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

#[derive(Args)]
struct PtasArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Accuracy parameter; the seat count is within 1/(1+epsilon) of optimal
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file
    instance: PathBuf,
    /// Solution file to check
    solution: PathBuf,
    /// Instance file format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Grid,
    TriangulatedGrid,
    OuterplanarRing,
    RandomPlanar,
    IsReduction,
    CvcReduction,
}

#[derive(Args)]
struct GenArgs {
    /// What to generate
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Grid rows
    #[arg(long)]
    rows: Option<usize>,
    /// Grid columns
    #[arg(long)]
    cols: Option<usize>,
    /// Vertex count, for ring and random-planar kinds
    #[arg(long)]
    n: Option<usize>,
    /// Edge deletion probability for random-planar [default: 0.3]
    #[arg(long)]
    delete_prob: Option<f64>,
    /// Candidate count for the planar kinds [default: 2]
    #[arg(long)]
    candidates: Option<usize>,
    /// Weights are drawn from 1..=max-weight [default: 1]
    #[arg(long)]
    max_weight: Option<u64>,
    /// Seed for all randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source graph edge list, for the reduction kinds
    #[arg(long)]
    source: Option<PathBuf>,
    /// Cover budget for cvc-reduction [default: 2]
    #[arg(long)]
    l: Option<usize>,
    /// District count stored in the instance [default: 2, reductions
    /// use their required count]
    #[arg(long)]
    k: Option<usize>,
    /// Store an at-most-k request instead of exactly-k
    #[arg(long)]
    at_most_k: bool,
    /// Objective stored in the instance [default: all]
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Write the instance here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file: {"instances": [...], "algorithms": [...], "epsilon"?}
    #[arg(long)]
    suite: PathBuf,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
    /// Report zero runtimes so the CSV is byte-stable across runs
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Ptas(args) => cmd_ptas(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

type InstanceParts = (ElectionGraph, SolveRequest, Option<RotationSystem>);

fn load_instance(path: &Path, format: Format) -> Result<InstanceParts> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let file = match format {
        Format::Json => InstanceFile::from_json(&text)?,
        Format::Edgelist => parse_edgelist(&text)?,
    };
    let (graph, request, embedding, _meta) = file.to_parts()?;
    Ok((graph, request, embedding))
}

fn apply_overrides(graph: &ElectionGraph, mut request: SolveRequest, args: &CommonArgs) -> SolveRequest {
    if let Some(k) = args.k {
        request.k = k;
    }
    if args.exactly_k {
        request.k_mode = KMode::Exactly;
    }
    if args.at_most_k {
        request.k_mode = KMode::AtMost;
    }
    if let Some(o) = args.objective {
        request.objective = o.into();
    }
    if args.lower.is_some() || args.upper.is_some() || args.bound_kind.is_some() {
        let kind = args
            .bound_kind
            .map(BoundKind::from)
            .or(request.bounds.map(|b| b.kind))
            .unwrap_or(BoundKind::VertexCount);
        let natural_upper = match kind {
            BoundKind::VertexCount => graph.vertex_count() as u64,
            BoundKind::TotalWeight => graph.total_weight(),
        };
        request.bounds = Some(Bounds {
            lower: args.lower.or(request.bounds.map(|b| b.lower)).unwrap_or(0),
            upper: args.upper.or(request.bounds.map(|b| b.upper)).unwrap_or(natural_upper),
            kind,
        });
    }
    request
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Re-checks the districting with the independent verifier and refuses
/// to write anything that does not pass.
fn emit_solution(
    graph: &ElectionGraph,
    request: &SolveRequest,
    districting: &Districting,
    algorithm: &str,
    parameters: serde_json::Value,
    runtime_ms: u64,
    out: Option<&Path>,
) -> Result<()> {
    let file = SolutionFile::build(graph, request, districting, algorithm, parameters, runtime_ms);
    if !file.verified {
        return Err(Error::Internal(format!(
            "{algorithm} produced a districting that fails verification"
        )));
    }
    write_output(out, &file.to_json())
}

fn elapsed_ms(started: Instant) -> u64 {
    started.elapsed().as_millis() as u64
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let (graph, request, _) = load_instance(&args.common.instance, args.common.format)?;
    let request = apply_overrides(&graph, request, &args.common);
    let started = Instant::now();
    let solution = match &args.decomposition {
        None => solve_exact_default(&graph, &request)?,
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let td = DecompositionFile::from_json(&text)?.to_decomposition();
            let report = validate_decomposition(&graph, &td);
            if !report.violations.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "decomposition rejected: {}",
                    report.violations.join("; ")
                )));
            }
            let options = DpOptions {
                width_cap: td.width().max(DpOptions::default().width_cap),
                ..Default::default()
            };
            let nice = make_nice(&graph, &td)?;
            solve_exact(&graph, &request, Some(&nice), &options)?
        }
    };
    let runtime = elapsed_ms(started);
    let mut parameters = serde_json::to_value(&request).expect("request serializes");
    parameters["width"] = json!(solution.width);
    emit_solution(
        &graph,
        &request,
        &solution.districting,
        "exact-dp",
        parameters,
        runtime,
        args.common.out.as_deref(),
    )
}

fn cmd_approx(args: CommonArgs) -> Result<()> {
    let (graph, request, _) = load_instance(&args.instance, args.format)?;
    let request = apply_overrides(&graph, request, &args);
    let started = Instant::now();
    let solution = approx_solve(&graph, &request)?;
    let runtime = elapsed_ms(started);
    let mut parameters = serde_json::to_value(&request).expect("request serializes");
    parameters["w_guess"] = json!(solution.w_guess);
    emit_solution(
        &graph,
        &request,
        &solution.districting,
        "approx",
        parameters,
        runtime,
        args.out.as_deref(),
    )
}

/// The request the scheme actually answers: exactly k districts, blue
/// singleton seats, no bounds.
fn ptas_request(k: usize) -> SolveRequest {
    SolveRequest {
        k,
        k_mode: KMode::Exactly,
        objective: Objective::SingletonWinning,
        bounds: None,
        candidate: 1,
    }
}

fn cmd_ptas(args: PtasArgs) -> Result<()> {
    let (graph, request, embedding) = load_instance(&args.common.instance, args.common.format)?;
    let request = apply_overrides(&graph, request, &args.common);
    if request.bounds.is_some() {
        return Err(Error::Unsupported(
            "size bounds are not supported by this algorithm".into(),
        ));
    }
    let embedding = embedding.ok_or_else(|| {
        Error::InvalidInput("instance has no embedding; ptas needs one".into())
    })?;
    let started = Instant::now();
    let solution = ptas_solve(&graph, &embedding, request.k, args.epsilon)?;
    let runtime = elapsed_ms(started);
    let request = ptas_request(request.k);
    let parameters = json!({
        "epsilon": args.epsilon,
        "k": request.k,
        "lambda": solution.lambda,
        "residue": solution.residue,
    });
    emit_solution(
        &graph,
        &request,
        &solution.districting,
        "ptas",
        parameters,
        runtime,
        args.common.out.as_deref(),
    )
}

fn cmd_oracle(args: CommonArgs) -> Result<()> {
    let (graph, request, _) = load_instance(&args.instance, args.format)?;
    let request = apply_overrides(&graph, request, &args);
    let started = Instant::now();
    let answer = oracle_max_winning(&graph, &request)?;
    let runtime = elapsed_ms(started);
    let witness = answer
        .witness
        .ok_or_else(|| Error::Infeasible("no districting satisfies the request".into()))?;
    let parameters = serde_json::to_value(&request).expect("request serializes");
    emit_solution(&graph, &request, &witness, "oracle", parameters, runtime, args.out.as_deref())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let (graph, request, _) = load_instance(&args.instance, args.format)?;
    let text = fs::read_to_string(&args.solution)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", args.solution.display())))?;
    let solution = SolutionFile::from_json(&text)?;
    let report = verify_districting(&graph, &solution.districting(), &request);
    let output = json!({
        "verified": report.is_valid(),
        "violations": report.violations,
        "w": report.winning,
    });
    println!("{}", serde_json::to_string_pretty(&output).expect("report serializes"));
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for this kind")))
    };
    let gen_options = GenOptions {
        candidates: args.candidates.unwrap_or(2),
        max_weight: args.max_weight.unwrap_or(1),
    };
    let k_mode = if args.at_most_k { KMode::AtMost } else { KMode::Exactly };
    let objective = args.objective.map(Objective::from).unwrap_or(Objective::AllWinning);

    let file = match args.kind {
        GenKind::Grid | GenKind::TriangulatedGrid | GenKind::OuterplanarRing
        | GenKind::RandomPlanar => {
            let generated = match args.kind {
                GenKind::Grid => gen_grid(
                    need(args.rows, "rows")?,
                    need(args.cols, "cols")?,
                    &gen_options,
                    args.seed,
                )?,
                GenKind::TriangulatedGrid => gen_triangulated_grid(
                    need(args.rows, "rows")?,
                    need(args.cols, "cols")?,
                    &gen_options,
                    args.seed,
                )?,
                GenKind::OuterplanarRing => {
                    gen_outerplanar_ring(need(args.n, "n")?, &gen_options, args.seed)?
                }
                GenKind::RandomPlanar => gen_random_planar(
                    need(args.n, "n")?,
                    args.delete_prob.unwrap_or(0.3),
                    &gen_options,
                    args.seed,
                )?,
                _ => unreachable!(),
            };
            let n = generated.graph.vertex_count();
            let request = SolveRequest {
                k: args.k.unwrap_or_else(|| 2.min(n)),
                k_mode,
                objective,
                bounds: None,
                candidate: 1,
            };
            InstanceFile::from_parts(&generated.graph, &request, Some(&generated.embedding), None)
        }
        GenKind::IsReduction | GenKind::CvcReduction => {
            let path = args
                .source
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("--source is required for this kind".into()))?;
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let (g, ..) = parse_edgelist(&text)?.to_parts()?;
            let source = SourceGraph::new(g.vertex_count(), &g.edges())?;
            let (h, meta) = match args.kind {
                GenKind::IsReduction => independent_set_to_gerry(&source)?,
                GenKind::CvcReduction => {
                    connected_vertex_cover_to_gerry(&source, args.l.unwrap_or(2))?
                }
                _ => unreachable!(),
            };
            let mut request = reduction_request(&meta);
            if let Some(k) = args.k {
                request.k = k;
            }
            request.k_mode = k_mode;
            if let Some(o) = args.objective {
                request.objective = o.into();
            }
            InstanceFile::from_parts(&h, &request, None, Some(meta))
        }
    };
    write_output(args.out.as_deref(), &file.to_json())
}

struct SuiteSpec {
    instances: Vec<String>,
    algorithms: Vec<String>,
    epsilon: f64,
}

fn parse_suite(text: &str) -> Result<SuiteSpec> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("suite must be a JSON object".into()))?;
    let strings = |key: &str| -> Result<Vec<String>> {
        obj.get(key)
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::InvalidInput(format!("suite needs an array field {key:?}")))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(String::from)
                    .ok_or_else(|| Error::InvalidInput(format!("{key:?} entries must be strings")))
            })
            .collect()
    };
    let epsilon = match obj.get("epsilon") {
        None => 1.0,
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::InvalidInput("epsilon must be a number".into()))?,
    };
    Ok(SuiteSpec { instances: strings("instances")?, algorithms: strings("algorithms")?, epsilon })
}

/// One algorithm run for the bench table. `None` means the algorithm
/// reported the request infeasible or the instance out of its reach.
type BenchOutcome = Option<(usize, Districting, SolveRequest)>;

fn bench_cell(
    algorithm: &str,
    graph: &ElectionGraph,
    request: &SolveRequest,
    embedding: Option<&RotationSystem>,
    epsilon: f64,
) -> Result<BenchOutcome> {
    let soften = |e: Error| match e {
        Error::Infeasible(_) | Error::Unsupported(_) => Ok(None),
        other => Err(other),
    };
    match algorithm {
        "exact" => match solve_exact_default(graph, request) {
            Ok(s) => Ok(Some((s.w, s.districting, request.clone()))),
            Err(e) => soften(e),
        },
        "approx" => match approx_solve(graph, request) {
            Ok(s) => Ok(Some((s.w, s.districting, request.clone()))),
            Err(e) => soften(e),
        },
        "ptas" => {
            let rs = embedding.ok_or_else(|| {
                Error::InvalidInput("instance has no embedding; ptas needs one".into())
            })?;
            match ptas_solve(graph, rs, request.k, epsilon) {
                Ok(s) => Ok(Some((s.w, s.districting, ptas_request(request.k)))),
                Err(e) => soften(e),
            }
        }
        "oracle" => match oracle_max_winning(graph, request) {
            Ok(answer) => Ok(answer
                .witness
                .map(|witness| (answer.w, witness, request.clone()))),
            Err(e) => soften(e),
        },
        other => Err(Error::InvalidInput(format!("unknown algorithm {other:?}"))),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let text = fs::read_to_string(&args.suite)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", args.suite.display())))?;
    let suite = parse_suite(&text)?;
    let base = args.suite.parent().map(Path::to_path_buf).unwrap_or_default();

    let mut csv = String::from("instance,n,m,algorithm,k,w,w_oracle,ratio,runtime_ms,verified\n");
    for name in &suite.instances {
        let (graph, request, embedding) = load_instance(&base.join(name), Format::Json)?;
        for algorithm in &suite.algorithms {
            let started = Instant::now();
            let outcome = bench_cell(
                algorithm,
                &graph,
                &request,
                embedding.as_ref(),
                suite.epsilon,
            )?;
            let runtime = if args.no_timing { 0 } else { elapsed_ms(started) };

            let mut w_cell = String::new();
            let mut w_oracle_cell = String::new();
            let mut ratio_cell = String::new();
            let mut verified_cell = String::new();
            if let Some((w, districting, effective)) = &outcome {
                w_cell = w.to_string();
                verified_cell = verify_districting(&graph, districting, effective)
                    .is_valid()
                    .to_string();
                let w_oracle = match oracle_max_winning(&graph, effective) {
                    Ok(answer) if answer.feasible => Some(answer.w),
                    Ok(_) => None,
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e),
                };
                if let Some(opt) = w_oracle {
                    w_oracle_cell = opt.to_string();
                    if opt > 0 {
                        ratio_cell = format!("{:.3}", *w as f64 / opt as f64);
                    }
                }
            }
            csv.push_str(&format!(
                "{name},{},{},{algorithm},{},{w_cell},{w_oracle_cell},{ratio_cell},{runtime},{verified_cell}\n",
                graph.vertex_count(),
                graph.edge_count(),
                request.k,
            ));
        }
    }
    fs::write(&args.out, csv)?;
    Ok(())
}
