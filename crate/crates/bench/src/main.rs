use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hemivar_bench::{
    assign_categories, case_seed, generate_starts, run_case, run_sweep, write_csv, BenchConfig,
    PreparedCase, Result, SolverKind,
};
use hemivar_contact::{export_mesh, LawSpec, ProblemConfig};

/// Beam-on-layered-foundation benchmark: aggregate subgradient method,
/// its simulated-annealing hybrid and a plain subgradient baseline.
#[derive(Parser)]
#[command(name = "hemivar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full benchmark: every law × load × solver × start.
    Sweep(Common),
    /// A single (law, load) case with every selected solver and start.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Law name from the config (e.g. j7); defaults to the first law.
        #[arg(long)]
        law: Option<String>,
        /// Load level L (MPa); defaults to the middle of the load grid.
        #[arg(long)]
        load: Option<f64>,
    },
    /// Export the mesh and a displacement field as CSV.
    Mesh {
        /// Problem definition JSON (geometry, material, law, load).
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Solver used for the displacement; `none` exports the obstacle-free
        /// linear solution.
        #[arg(long, default_value = "asm")]
        solver: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for nodes.csv and elements.csv.
        #[arg(long, default_value = "results/mesh")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Benchmark config JSON; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; the CSV keeps the file name from the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated subset of plain_subgradient, asm, hybrid.
    #[arg(long, value_delimiter = ',')]
    solvers: Option<Vec<SolverKind>>,
    /// Number of starting points per case.
    #[arg(long)]
    n_starts: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<BenchConfig> {
        let mut cfg = match &self.config {
            Some(p) => BenchConfig::from_json(&std::fs::read_to_string(p)?)?,
            None => BenchConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(dir) = &self.out_dir {
            let file = cfg
                .output_path
                .file_name()
                .map_or_else(|| PathBuf::from("sweep.csv"), PathBuf::from);
            cfg.output_path = dir.join(file);
        }
        if let Some(s) = &self.solvers {
            cfg.solvers = s.clone();
        }
        if let Some(n) = self.n_starts {
            cfg.n_starts = n;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sweep(common: &Common) -> Result<()> {
    let cfg = common.load()?;
    let out = run_sweep(&cfg)?;
    let best = |s: SolverKind| {
        out.rows
            .iter()
            .filter(|r| r.solver == s && r.category == Some(hemivar_bench::Category::Best))
            .map(|r| (r.law.clone(), r.load.to_bits()))
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    };
    println!(
        "{} rows in {:.1} s -> {}",
        out.rows.len(),
        out.metadata.total_wall_time_s,
        out.csv_path.display()
    );
    for &s in &cfg.solvers {
        println!("  {:<18} best in {} cases", s.name(), best(s));
    }
    if !out.metadata.cap_hits.is_empty() {
        println!("  {} runs stopped on a cap or error", out.metadata.cap_hits.len());
    }
    println!("metadata -> {}", out.metadata_path.display());
    Ok(())
}

fn solve(common: &Common, law: Option<&str>, load: Option<f64>) -> Result<()> {
    let cfg = common.load()?;
    let (law_index, spec): (usize, &LawSpec) = match law {
        Some(name) => cfg
            .laws
            .iter()
            .enumerate()
            .find(|(_, l)| l.name() == name)
            .ok_or_else(|| {
                hemivar_bench::BenchError::Config(format!(
                    "law {name:?} not in config ({:?})",
                    cfg.law_names()
                ))
            })?,
        None => (0, &cfg.laws[0]),
    };
    let load = load.unwrap_or(cfg.loads[cfg.loads.len() / 2]);
    let load_index = cfg.loads.iter().position(|&l| l == load).unwrap_or(cfg.loads.len());
    let seed = case_seed(cfg.seed, law_index, load_index);
    let case = PreparedCase::build(&cfg, spec, load)?;
    let starts = generate_starts(case.problem(), cfg.n_starts, seed)?;
    let mut rows: Vec<_> = cfg
        .solvers
        .iter()
        .flat_map(|&s| run_case(&case, &spec.name(), load, s, &starts, seed, &cfg))
        .collect();
    let best = assign_categories(&mut rows)?;
    println!("{} at L = {load}: best energy {best}", spec.name());
    for r in &rows {
        println!(
            "  {:<18} start {}  energy {:<24} {:>8.3} s  {:>8} evals  {:<9} {}",
            r.solver.name(),
            r.start,
            r.energy,
            r.wall_time_s,
            r.fevals,
            r.category.map_or("", |c| c.name()),
            r.termination
        );
    }
    let path = cfg.output_path.with_file_name(format!("{}_L{load}.csv", spec.name()));
    write_csv(&path, &rows)?;
    println!("-> {}", path.display());
    Ok(())
}

fn mesh(problem: Option<&Path>, solver: &str, seed: u64, out_dir: &Path) -> Result<()> {
    let pcfg = match problem {
        Some(p) => ProblemConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => ProblemConfig {
            geometry: Default::default(),
            material: Default::default(),
            law: hemivar_bench::config::default_laws().remove(2),
            load: 5.5,
        },
    };
    let bench = BenchConfig {
        geometry: pcfg.geometry.clone(),
        material: pcfg.material.clone(),
        ..Default::default()
    };
    let case = PreparedCase::build(&bench, &pcfg.law, pcfg.load)?;
    let prob = case.problem();
    let linear = prob.linear_solution()?;
    let u = if solver == "none" {
        linear
    } else {
        let kind: SolverKind = solver.parse()?;
        hemivar_bench::run_solver(&case, kind, &linear, seed, &bench)?.u
    };
    export_mesh(out_dir, &prob.mesh, &prob.displacement_field(&u))?;
    println!(
        "{} nodes, {} triangles, mid-span deflection {:.6} mm, energy {} -> {}",
        prob.mesh.n_nodes(),
        prob.mesh.triangles.len(),
        prob.midspan_deflection(&u),
        hemivar_core::Objective::value(prob, &u)?,
        out_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Solve { common, law, load } => solve(common, law.as_deref(), *load),
        Command::Mesh {
            problem,
            solver,
            seed,
            out_dir,
        } => mesh(problem.as_deref(), solver, *seed, out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
