use std::path::PathBuf;
use std::process::ExitCode;

use snls_cli::config::parse_config;
use snls_cli::error::{CliError, Result};
use snls_cli::runner::{
    classify_cmd, mt_sweep_cmd, probe_cmd, rearrange_cmd, simulate_cmd, ProbeKind, RunOptions,
};

const USAGE: &str = "\
snls - singular-weight NLS simulator and analysis toolkit

USAGE:
    snls <SUBCOMMAND> [FLAGS]

SUBCOMMANDS:
    simulate   evolve the configured state and write observables + snapshots
    classify   print the criticality class and Hamiltonian of the state
    mt-sweep   Moser-Trudinger threshold scan (requires --b)
    rearrange  Schwarz-symmetrize the configured state
    probe      run a functional-inequality probe:
               strichartz | log-estimate | strauss | hardy

FLAGS:
    --config PATH   run configuration file (simulate/classify/rearrange)
    --out DIR       output directory (default '.')
    --seed N        seed for randomized probes (default 0)
    --b V           weight exponent for mt-sweep
    --grid-n N      grid resolution for mt-sweep (default 1024)
    --quiet         suppress stdout reporting
";

struct Args {
    subcommand: String,
    probe: Option<String>,
    config: Option<PathBuf>,
    out: PathBuf,
    seed: u64,
    quiet: bool,
    b: Option<f64>,
    grid_n: usize,
}

fn parse_args(argv: &[String]) -> Result<Option<Args>> {
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" {
        return Ok(None);
    }
    let subcommand = argv[0].clone();
    let mut args = Args {
        subcommand: subcommand.clone(),
        probe: None,
        config: None,
        out: PathBuf::from("."),
        seed: 0,
        quiet: false,
        b: None,
        grid_n: 1024,
    };
    let mut rest = &argv[1..];
    if subcommand == "probe" {
        let which = rest
            .first()
            .ok_or_else(|| CliError::Usage("probe requires a kind".into()))?;
        args.probe = Some(which.clone());
        rest = &rest[1..];
    }
    let mut it = rest.iter();
    while let Some(flag) = it.next() {
        let mut value = |name: &str| -> Result<String> {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("{name} requires a value")))
        };
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(value("--config")?)),
            "--out" => args.out = PathBuf::from(value("--out")?),
            "--seed" => {
                let raw = value("--seed")?;
                args.seed = raw
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid --seed value '{raw}'")))?;
            }
            "--b" => {
                let raw = value("--b")?;
                args.b = Some(
                    raw.parse()
                        .map_err(|_| CliError::Usage(format!("invalid --b value '{raw}'")))?,
                );
            }
            "--grid-n" => {
                let raw = value("--grid-n")?;
                args.grid_n = raw
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid --grid-n value '{raw}'")))?;
            }
            "--quiet" => args.quiet = true,
            other => return Err(CliError::Usage(format!("unknown flag '{other}'"))),
        }
    }
    Ok(Some(args))
}

fn load_config(args: &Args) -> Result<(snls_cli::RunConfig, Option<PathBuf>)> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = parse_config(&text)?;
    Ok((cfg, path.parent().map(|p| p.to_path_buf())))
}

fn run() -> Result<()> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv)? {
        Some(args) => args,
        None => {
            println!("{USAGE}");
            return Ok(());
        }
    };
    let opts = RunOptions {
        out_dir: args.out.clone(),
        seed: args.seed,
        quiet: args.quiet,
    };
    match args.subcommand.as_str() {
        "simulate" => {
            let (cfg, dir) = load_config(&args)?;
            simulate_cmd(&cfg, &opts, dir.as_deref())
        }
        "classify" => {
            let (cfg, dir) = load_config(&args)?;
            // classify prints even under --quiet: the line is its output
            let line = classify_cmd(
                &cfg,
                &RunOptions {
                    quiet: true,
                    ..opts
                },
                dir.as_deref(),
            )?;
            println!("{line}");
            Ok(())
        }
        "mt-sweep" => {
            let b = args
                .b
                .ok_or_else(|| CliError::Usage("mt-sweep requires --b".into()))?;
            mt_sweep_cmd(b, args.grid_n, &opts)
        }
        "rearrange" => {
            let (cfg, dir) = load_config(&args)?;
            rearrange_cmd(&cfg, &opts, dir.as_deref())
        }
        "probe" => {
            let kind = ProbeKind::parse(args.probe.as_deref().unwrap_or(""))?;
            probe_cmd(kind, &opts)
        }
        other => Err(CliError::Usage(format!(
            "unknown subcommand '{other}'\n\n{USAGE}"
        ))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
