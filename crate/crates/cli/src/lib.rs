//! `netkrig` command-line front end.

pub mod args;
pub mod record;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use netkrig_core::bounds::{certify_against, pca_spectrum};
use netkrig_core::heuristics::{
    ensemble, run, AlgorithmKind, AlgorithmSpec, EnsembleSpec, SelectionResult,
};
use netkrig_core::topology::{
    generate_inet_like, generate_preferential_attachment, load_flows, load_routing_matrix,
    load_topology, render_edge_list, render_flow_list, render_routing_matrix, routing_matrix_for,
    sample_flows, Topology,
};
use netkrig_core::{BoundCurve, Criterion, DenseMatrix, Error, MonitoringProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use args::{
    BenchArgs, BoundArgs, Cli, Command, EnsembleArgs, Format, GenerateArgs, Model, SolveArgs,
    SourceArgs,
};
use record::{bench_csv, bench_json, BenchRow, BoundRecord, PhaseTimes, ResultRecord, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::UnsupportedCriterion { .. } | Error::TooManySubsets { .. } => {
            EXIT_USAGE
        }
        Error::Parse { .. } | Error::Io { .. } | Error::Route { .. } => EXIT_DATA,
        Error::DegenerateDirection { .. }
        | Error::RedundantSelection { .. }
        | Error::NotPsd { .. }
        | Error::Numerical(_)
        | Error::BoundViolation { .. } => EXIT_NUMERICAL,
    }
}

/// Parses `std::env::args`, runs the command and returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Ensemble(a) => cmd_ensemble(&a),
        Command::Bound(a) => cmd_bound(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::data(format!("{}: {e}", path.display()))
}

/// All output goes through here.
fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_topology(
    model: Model,
    nodes: usize,
    attach: usize,
    links: Option<usize>,
    seed: u64,
) -> Result<Topology, CliError> {
    Ok(match model {
        Model::Ba => generate_preferential_attachment(nodes, attach, seed)?,
        Model::Inet => {
            let links = links.ok_or_else(|| CliError::usage("--model inet needs --links"))?;
            generate_inet_like(nodes, links, seed)?
        }
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<(), CliError> {
    let topo = sample_flows(
        build_topology(a.model, a.nodes, a.attach, a.links, a.seed)?,
        a.flows,
        a.seed,
    )?;
    if a.flows == 0 {
        eprintln!("warning: no flows requested; the routing matrix has zero columns");
    }
    let routing = routing_matrix_for(&topo)?;
    let prefix = a.out.display().to_string();
    for (ext, text) in [
        ("edges", render_edge_list(&topo)),
        ("flows", render_flow_list(&topo)),
        ("csv", render_routing_matrix(&routing)),
    ] {
        let path = PathBuf::from(format!("{prefix}.{ext}"));
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    println!("L={} J={}", routing.link_count(), routing.flow_count());
    Ok(())
}

struct Loaded {
    problem: MonitoringProblem,
    source: String,
    load_ms: f64,
}

fn read_weights(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::data(format!("{}: invalid weight `{t}`", path.display())))
        })
        .collect()
}

/// Builds the problem; any failure while reading or constructing the matrix is a data error.
fn load(src: &SourceArgs, k: usize, criterion: Criterion) -> Result<Loaded, CliError> {
    let started = Instant::now();
    let as_data = |e: Error| CliError {
        code: EXIT_DATA,
        message: e.to_string(),
    };
    let (routing, source) = if let Some(path) = &src.matrix {
        (
            load_routing_matrix(path).map_err(as_data)?,
            path.display().to_string(),
        )
    } else if let (Some(edges), Some(flows)) = (&src.edges, &src.flow_list) {
        let topo = load_topology(edges)
            .map_err(as_data)?
            .with_flows(load_flows(flows).map_err(as_data)?)
            .map_err(as_data)?;
        (
            routing_matrix_for(&topo).map_err(as_data)?,
            format!("{}+{}", edges.display(), flows.display()),
        )
    } else if let Some(model) = src.generator.model {
        let g = &src.generator;
        let topo = sample_flows(
            build_topology(model, g.nodes, g.attach, g.links, g.gen_seed)?,
            g.flows,
            g.gen_seed,
        )?;
        let label = match model {
            Model::Ba => format!(
                "ba:nodes={},attach={},flows={},seed={}",
                g.nodes, g.attach, g.flows, g.gen_seed
            ),
            Model::Inet => format!(
                "inet:nodes={},links={:?},flows={},seed={}",
                g.nodes, g.links, g.flows, g.gen_seed
            ),
        };
        (routing_matrix_for(&topo)?, label)
    } else {
        return Err(CliError::usage("no matrix source given"));
    };
    let mut problem = MonitoringProblem::new(routing, k, criterion)?;
    if let Some(path) = &src.weights {
        problem = problem.with_link_weights(read_weights(path)?)?;
    }
    Ok(Loaded {
        problem,
        source,
        load_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Re-validates invariants and the PCA certificate; returns the bound-phase time in ms.
fn check(result: &SelectionResult, problem: &MonitoringProblem) -> Result<f64, CliError> {
    let started = Instant::now();
    result.validate(problem.link_count())?;
    let curve = BoundCurve::new(problem.effective(), problem.criterion(), problem.budget())?;
    certify_against(result, &curve)?;
    Ok(started.elapsed().as_secs_f64() * 1e3)
}

fn render(record: &ResultRecord, format: Format) -> String {
    match format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<(), CliError> {
    a.algo.supports(a.criterion).then_some(()).ok_or_else(|| {
        CliError::usage(format!(
            "{} does not support the {} criterion",
            a.algo, a.criterion
        ))
    })?;
    let loaded = load(&a.source, a.k, a.criterion)?;
    let spec = AlgorithmSpec::new(a.algo)
        .with_m(a.m)
        .with_seed(a.seed)
        .with_early_stop(a.early_stop);
    let result = run(&loaded.problem, &spec)?;
    let bounds_ms = check(&result, &loaded.problem)?;
    let p = &loaded.problem;
    let mut record = ResultRecord::from_selection(
        "solve",
        &loaded.source,
        (p.link_count(), p.flow_count()),
        a.k,
        &result,
    );
    record.wall_time_ms.load = loaded.load_ms;
    record.wall_time_ms.bounds = bounds_ms;
    emit(a.output.out.as_ref(), &render(&record, a.output.format))
}

fn cmd_ensemble(a: &EnsembleArgs) -> Result<(), CliError> {
    if !a.algo.is_randomized() {
        return Err(CliError::usage(format!(
            "{} is deterministic; ensembles need pcaph, fgp or fgr",
            a.algo
        )));
    }
    a.algo.supports(a.criterion).then_some(()).ok_or_else(|| {
        CliError::usage(format!(
            "{} does not support the {} criterion",
            a.algo, a.criterion
        ))
    })?;
    let loaded = load(&a.source, a.k, a.criterion)?;
    let base = AlgorithmSpec::new(a.algo)
        .with_m(a.m)
        .with_early_stop(a.early_stop);
    let spec = EnsembleSpec::from_master_seed(base, a.runs, a.seed)?;
    let out = ensemble(&loaded.problem, &spec)?;
    let bounds_ms = check(&out.best, &loaded.problem)?;
    let p = &loaded.problem;
    let mut record = ResultRecord::from_selection(
        "ensemble",
        &loaded.source,
        (p.link_count(), p.flow_count()),
        a.k,
        &out.best,
    );
    record.seeds = Some(out.seeds.clone());
    record.member_errors = Some(out.member_errors.clone());
    record.best_index = Some(out.best_index);
    record.wall_time_ms = PhaseTimes {
        load: loaded.load_ms,
        bounds: bounds_ms,
        select: out.wall_time.as_secs_f64() * 1e3,
    };
    emit(a.output.out.as_ref(), &render(&record, a.output.format))
}

fn cmd_bound(a: &BoundArgs) -> Result<(), CliError> {
    let loaded = load(&a.source, 1, a.criterion)?;
    let eff = loaded.problem.effective();
    let rank_cap = eff.rows().min(eff.cols());
    let k = a.k.unwrap_or(rank_cap);
    if k > rank_cap {
        return Err(CliError::usage(format!(
            "--k {k} exceeds min(L, J) = {rank_cap}"
        )));
    }
    let started = Instant::now();
    let spectrum = pca_spectrum(eff)?;
    let curve = BoundCurve::from_spectrum(spectrum.clone(), a.criterion, k);
    let bounds_ms = started.elapsed().as_secs_f64() * 1e3;
    let record = BoundRecord {
        version: VERSION.to_string(),
        source: loaded.source,
        links: eff.rows(),
        flows: eff.cols(),
        criterion: a.criterion.name().to_string(),
        k,
        bound_trajectory: curve.values.clone(),
        spectrum,
        wall_time_ms: PhaseTimes {
            load: loaded.load_ms,
            bounds: bounds_ms,
            select: 0.0,
        },
    };
    let text = match a.output.format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    };
    emit(a.output.out.as_ref(), &text)
}

fn gaussian(l: usize, j: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(l, j, |_, _| StandardNormal.sample(&mut rng))
}

fn numbers(spec: &str, sep: char, n: usize) -> Option<Vec<usize>> {
    let v: Option<Vec<usize>> = spec.split(sep).map(|t| t.trim().parse().ok()).collect();
    v.filter(|v| v.len() == n)
}

/// Builds one bench instance from its specification string.
fn bench_instance(spec: &str, seed: u64) -> Result<DenseMatrix, CliError> {
    let bad = || CliError::usage(format!("malformed instance `{spec}`"));
    if let Some(dims) = spec.strip_prefix("gaussian:") {
        let v = numbers(dims, 'x', 2).ok_or_else(bad)?;
        return Ok(gaussian(v[0], v[1], seed));
    }
    if let Some(rest) = spec.strip_prefix("ba:") {
        let v = numbers(rest, ':', 3).ok_or_else(bad)?;
        let topo = sample_flows(
            generate_preferential_attachment(v[0], v[1], seed)?,
            v[2],
            seed,
        )?;
        return Ok(routing_matrix_for(&topo)?.into_matrix());
    }
    if let Some(rest) = spec.strip_prefix("inet:") {
        let v = numbers(rest, ':', 3).ok_or_else(bad)?;
        let topo = sample_flows(generate_inet_like(v[0], v[1], seed)?, v[2], seed)?;
        return Ok(routing_matrix_for(&topo)?.into_matrix());
    }
    load_routing_matrix(spec)
        .map(|r| r.into_matrix())
        .map_err(|e| CliError::data(e.to_string()))
}

fn default_criterion(kind: AlgorithmKind) -> Criterion {
    match kind {
        AlgorithmKind::Fge | AlgorithmKind::NaiveGreedy | AlgorithmKind::Exhaustive => {
            Criterion::Trace
        }
        AlgorithmKind::Pcaph | AlgorithmKind::Fgp | AlgorithmKind::Fgr => Criterion::Spectral,
    }
}

fn bench_row(
    a: &DenseMatrix,
    spec: &AlgorithmSpec,
    criterion: Criterion,
    k: usize,
    trials: usize,
) -> Result<(f64, f64), Error> {
    let p = MonitoringProblem::from_matrix(a.clone(), k, criterion)?;
    let mut times = Vec::with_capacity(trials);
    let mut error = 0.0;
    for _ in 0..trials {
        let r = run(&p, spec)?;
        r.validate(a.rows())?;
        error = r.final_error();
        times.push(r.wall_time.as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok((error, times[trials / 2]))
}

fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let kinds: Vec<AlgorithmKind> = a
        .algos
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<AlgorithmKind>())
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (i, inst) in a.instances.iter().enumerate() {
        let matrix = bench_instance(inst, a.seed.wrapping_add(i as u64));
        for &kind in &kinds {
            let criterion = a.criterion.unwrap_or(default_criterion(kind));
            let spec = AlgorithmSpec::new(kind).with_m(a.m).with_seed(a.seed);
            let mut row = BenchRow {
                instance: inst.clone(),
                algorithm: kind.name().to_string(),
                criterion: criterion.name().to_string(),
                links: None,
                flows: None,
                k: a.k,
                m: a.m,
                error: None,
                wall_time: None,
                status: "ok".to_string(),
            };
            match &matrix {
                Err(e) => row.status = format!("error: {}", e.message),
                Ok(m) => {
                    row.links = Some(m.rows());
                    row.flows = Some(m.cols());
                    row.k = a.k.min(m.rows());
                    match bench_row(m, &spec, criterion, row.k, a.trials) {
                        Ok((error, secs)) => {
                            row.error = Some(error);
                            row.wall_time = Some(secs);
                        }
                        Err(e) => row.status = format!("error: {e}"),
                    }
                }
            }
            rows.push(row);
        }
    }
    let text = match a.format {
        Format::Csv => bench_csv(&rows),
        Format::Json => bench_json(&rows),
    };
    emit(a.out.as_ref(), &text)
}
