mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use kanon_core::generator::barabasi_albert;
use kanon_core::io::{load_graph_with, load_insertion_pairs, save_graph, write_edge_list, write_insertion_set, write_metis};
use kanon_core::io::{EdgeListOptions, GraphFormat};
use kanon_core::oracle::{brute_force_kdsa, brute_force_min_insertion, brute_force_realizable};
use kanon_core::realize::verify_pairs;
use kanon_core::solver::{sweep, BoundsReport, SolverConfig, DEFAULT_K_LIST};
use kanon_core::{BlockSequence, DegreeSequence, Graph};
use log::info;

use args::{AnonymizeArgs, Cli, Command, GenerateArgs, GraphArgs, OracleCommand, OutFormat, VerifyArgs};

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

fn load(input: &GraphArgs) -> kanon_core::Result<Graph> {
    let opts = EdgeListOptions { index_base: input.index_base as usize, ..EdgeListOptions::default() };
    load_graph_with(&input.graph, input.format.into(), opts)
}

fn create(path: &Path) -> BoxResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn writer(path: Option<&Path>) -> BoxResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `out.txt` becomes `out.k5.txt` when several k share one path.
fn per_k_path(path: &Path, k: usize, several: bool) -> PathBuf {
    if !several {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.k{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.k{k}"),
    };
    path.with_file_name(name)
}

fn anonymize(a: AnonymizeArgs) -> BoxResult<ExitCode> {
    let g = load(&a.input)?;
    let id = a.graph_id.clone().unwrap_or_else(|| {
        a.input.graph.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });
    let k_list = match (a.k, a.k_list) {
        (Some(k), _) => vec![k],
        (None, Some(list)) => list,
        (None, None) => DEFAULT_K_LIST.to_vec(),
    };
    let cfg = SolverConfig {
        k_list,
        time_limit_s: a.time_limit,
        seed: a.seed,
        mappings: a.mappings,
        trials: a.trials,
        max_jump_blocks: a.max_jump_blocks,
        reduction: !a.no_reduction,
        advanced_eg: !a.no_advanced_eg,
        waste_budget: a.waste_budget,
        enumeration_limit: a.enumeration_limit,
        keep_solutions: a.dump_solutions.is_some(),
        ..SolverConfig::default()
    };
    cfg.validate()?;
    info!("{id}: n={} m={} Δ={}, k in {:?}", g.n(), g.m(), g.max_degree(), cfg.k_list);
    let outcomes = sweep(&g, &cfg, &id);
    let several = outcomes.len() > 1;

    if let Some(path) = &a.emit_edges {
        for o in &outcomes {
            if let Some(s) = &o.insertion {
                let mut w = create(&per_k_path(path, o.report.k, several))?;
                write_insertion_set(s, &mut w, a.input.index_base as usize)?;
                w.flush()?;
            }
        }
    }
    if let Some(path) = &a.dump_solutions {
        for o in &outcomes {
            let mut w = create(&per_k_path(path, o.report.k, several))?;
            serde_json::to_writer_pretty(&mut w, &o.solutions)?;
            w.flush()?;
        }
    }

    let reports: Vec<&BoundsReport> = outcomes.iter().map(|o| &o.report).collect();
    let mut w = writer(a.output.as_deref())?;
    match a.out {
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &reports)?;
            writeln!(w)?;
        }
        OutFormat::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(BoundsReport::CSV_HEADER)?;
            for r in &reports {
                c.write_record(r.csv_record())?;
            }
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn generate(a: GenerateArgs) -> BoxResult<ExitCode> {
    if a.steps == 0 {
        return Err("steps must be at least 1".into());
    }
    let g = barabasi_albert(a.steps, a.m0, a.seed)?;
    let format: GraphFormat = a.format.into();
    match &a.output {
        Some(path) => save_graph(&g, path, format, a.index_base as usize)?,
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            match format {
                GraphFormat::Metis => write_metis(&g, &mut w)?,
                GraphFormat::EdgeList => write_edge_list(&g, &mut w, a.index_base as usize)?,
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> BoxResult<ExitCode> {
    let g = load(&a.input)?;
    let pairs = load_insertion_pairs(&a.edges, a.input.index_base as usize)?;
    let report = verify_pairs(&g, &pairs, a.k);
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle(cmd: OracleCommand) -> BoxResult<ExitCode> {
    let value = match cmd {
        OracleCommand::MinInsertion { input, k, edge_cap } => {
            let g = load(&input)?;
            let s = brute_force_min_insertion(&g, k, edge_cap)?;
            serde_json::json!({ "k": k, "edges": s.as_ref().map(|s| s.len()), "insertion": s })
        }
        OracleCommand::Kdsa { blocks, k } => {
            let b = BlockSequence::from_counts(blocks);
            serde_json::json!({ "k": k, "min_cost": brute_force_kdsa(&b, k)? })
        }
        OracleCommand::Realizable { degrees } => {
            let d = DegreeSequence::new(degrees);
            serde_json::json!({ "realizable": brute_force_realizable(&d)? })
        }
    };
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Anonymize(a) => anonymize(a),
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(c) => oracle(c),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
