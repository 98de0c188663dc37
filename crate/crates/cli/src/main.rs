mod args;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use orc_core::bounds::{bound_csv_row, BOUND_CSV_HEADER};
use orc_core::constructions::{
    complete_community, dumbbell, prism, random_two_community, zero_curvature_config,
    TwoCommunitySpec,
};
use orc_core::curvature::{all_curvatures, edge_curvature_cached, Alpha};
use orc_core::experiments::{
    distribution_csv, distribution_svg, run_distribution, run_sweep, sweep_svg, ExperimentConfig,
};
use orc_core::graph::{
    classify_edges, load_graph, save_graph, CommunityPartition, DistanceCache, Graph,
};
use orc_core::scalar::{Scalar, Tolerance};
use orc_core::selftest::run_fast_checks;
use orc_core::witness::{witness_upper_bound_cached, Region};
use orc_core::{BigRational, Error};

use args::{
    Cli, Command, CurvatureArgs, Experiment, ExperimentArgs, Generate, InputArgs, ModeArg,
    WitnessArgs,
};

/// Failures that end the process with exit code 1.
enum Failure {
    Domain(Error),
    Io(String),
    /// Output was written, but some items failed.
    Partial(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Partial(lines)) => {
            for line in lines {
                eprintln!("error: {line}");
            }
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Curvature(args) => curvature(args),
        Command::Generate(gen) => generate(gen),
        Command::Bound(args) => {
            let row = bound_csv_row(args.m, args.n, args.k)?;
            emit(
                args.out.out.as_deref(),
                &format!("{BOUND_CSV_HEADER}\n{row}\n"),
            )
        }
        Command::Witness(args) => match args.mode {
            ModeArg::Exact => witness::<BigRational>(args),
            ModeArg::Float => witness::<f64>(args),
        },
        Command::Experiment(exp) => experiment(exp),
        Command::Selftest => {
            let outcomes = run_fast_checks();
            let mut text = String::new();
            for o in &outcomes {
                writeln!(text, "{}", o.line()).unwrap();
            }
            emit(None, &text)?;
            let failed: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.passed())
                .map(|o| o.line())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Partial(failed))
            }
        }
    }
}

fn read_input(input: &InputArgs) -> Result<(Graph, CommunityPartition), Failure> {
    let text = match &input.graph {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            text
        }
    };
    Ok(load_graph(&text)?)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn curvature(args: CurvatureArgs) -> Outcome {
    let (g, p) = read_input(&args.input)?;
    let tol = Tolerance::default();
    let (csv, errors) = match args.mode {
        ModeArg::Exact => curvature_csv::<BigRational>(&g, &p, args.alpha, tol)?,
        ModeArg::Float => curvature_csv::<f64>(&g, &p, args.alpha, tol)?,
    };
    emit(args.out.out.as_deref(), &csv)?;
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Failure::Partial(errors))
    }
}

fn curvature_csv<S: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<(String, Vec<String>), Error> {
    let report = all_curvatures::<S>(g, p, alpha, tol)?;
    let errors = report
        .errors()
        .map(|((u, v), e)| format!("edge ({u}, {v}): {}: {e}", e.code()))
        .collect();
    Ok((report.to_csv(), errors))
}

fn generate(gen: Generate) -> Outcome {
    let (text, out) = match gen {
        Generate::Dumbbell { m, n, out } => {
            let (g, p) = dumbbell(m, n)?;
            (save_graph(&g, &p), out)
        }
        Generate::ZeroConfig { n, out } => {
            let (g, p) = zero_curvature_config(n)?;
            (save_graph(&g, &p), out)
        }
        Generate::Prism { n, out } => {
            let (g, p) = prism(n)?;
            (save_graph(&g, &p), out)
        }
        Generate::Random { m, n, k, seed, out } => {
            let (g, p) = random_two_community(TwoCommunitySpec { m, n, k, seed })?;
            (save_graph(&g, &p), out)
        }
        Generate::Complete { n, out } => {
            let g = complete_community(n)?;
            (save_graph(&g, &CommunityPartition::single(n)), out)
        }
    };
    emit(out.out.as_deref(), &text)
}

const WITNESS_REGIONS: [Region; 13] = [
    Region::J,
    Region::A,
    Region::B,
    Region::C,
    Region::D,
    Region::E,
    Region::F,
    Region::K,
    Region::G,
    Region::H,
    Region::M,
    Region::I,
    Region::L,
];

fn witness<S: Scalar>(args: WitnessArgs) -> Outcome {
    let (g, p) = read_input(&args.input)?;
    let tol = Tolerance::default();
    let edges = match args.edge {
        Some(e) => vec![e],
        None => classify_edges(&g, &p)?.inter,
    };
    if edges.is_empty() {
        return Err(Error::NoInterEdges.into());
    }
    let cache = DistanceCache::new(&g);

    let mut text = String::from("# region potential:");
    for r in Region::ALL {
        write!(text, " {r}={}", r.potential()).unwrap();
    }
    text.push('\n');
    text.push_str("x,y,n,m,dx,dy");
    for r in WITNESS_REGIONS {
        write!(text, ",{r}").unwrap();
    }
    text.push_str(",w_lower,kappa_upper,kappa,sandwich,lipschitz,l_agree\n");

    for (x, y) in edges {
        let bound = witness_upper_bound_cached::<S>(&cache, &p, (x, y), args.alpha, tol)?;
        let kappa = edge_curvature_cached::<S>(&cache, (x, y), args.alpha, tol)?.kappa;
        let part = &bound.partition;
        write!(
            text,
            "{x},{y},{},{},{},{}",
            part.n, part.m, part.dx, part.dy
        )
        .unwrap();
        for r in WITNESS_REGIONS {
            write!(text, ",{}", part.count(r)).unwrap();
        }
        let lipschitz = match &bound.lipschitz {
            Ok(()) => "ok".to_string(),
            Err(v) => format!("violated@{}-{}", v.u, v.v),
        };
        writeln!(
            text,
            ",{},{},{kappa},{},{lipschitz},{}",
            bound.w_lower,
            bound.kappa_upper,
            tol.le(&kappa, &bound.kappa_upper),
            part.l_characterizations_agree()
        )
        .unwrap();
    }
    emit(args.out.out.as_deref(), &text)
}

fn experiment_config(common: &ExperimentArgs) -> ExperimentConfig {
    ExperimentConfig {
        alpha: common.alpha,
        master_seed: common.seed,
        tol: Tolerance::default(),
        timing: common.timing,
    }
}

fn experiment(exp: Experiment) -> Outcome {
    match exp {
        Experiment::Distribution { n, k, common } => match common.mode {
            ModeArg::Exact => distribution::<BigRational>(n, &k, &common),
            ModeArg::Float => distribution::<f64>(n, &k, &common),
        },
        Experiment::Sweep { n, mult, common } => {
            let config = experiment_config(&common);
            let summary = match common.mode {
                ModeArg::Exact => run_sweep::<BigRational>(&n, &mult, common.trials, &config)?,
                ModeArg::Float => run_sweep::<f64>(&n, &mult, common.trials, &config)?,
            };
            if let Some(path) = &common.svg {
                emit(Some(path), &sweep_svg(&summary))?;
            }
            emit(common.out.out.as_deref(), &summary.to_csv())
        }
    }
}

fn distribution<S: Scalar>(n: usize, k: &[usize], common: &ExperimentArgs) -> Outcome {
    let records = run_distribution::<S>(n, k, common.trials, &experiment_config(common))?;
    if let Some(path) = &common.svg {
        emit(Some(path), &distribution_svg(&records))?;
    }
    emit(common.out.out.as_deref(), &distribution_csv(&records))
}
