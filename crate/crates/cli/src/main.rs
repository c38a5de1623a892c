use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use caustic_cli::{run, Command, Format, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Exit status: 0 when every check passes, 1 when a check fails, 2 on parse or
validation errors.

Input files:
  domain      {\"support\": {\"K\": 3, \"real\": true, \"rho\": 0, \"coeffs\": [[k, re, im], ...]}}
  perturbation  a bare series object, or {\"p1\": <series>, \"u1\": <series>}

CSV columns:
  verify         m,residual,pass
  expand         case,m,order,discrepancy,tolerance,pass
  solve-caustic  k,re,im                      (modes of the periodic part of u)
  obstruct       n,re,im,abs,bare_re,bare_im  (single input)
                 sample,max_abs,witness_n,obstructed  (seeded sweep)
  orbit          j,t_j,x_j,y_j,residual_j
  width-check    k,amplitude                  (offending even modes)

Tolerance names (--tol name=value):
  verify residual | expand e10, e11 | solve-caustic residual, reflection
  obstruct verdict, gap, modes | orbit residual | width-check width";

#[derive(Parser)]
#[command(name = "caustic", version, about = "Rational caustics of billiards near the circle", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Input JSON file (domain or perturbation, depending on the command).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,

    /// Truncation order for generated inputs; truncates file inputs.
    #[arg(long = "K", global = true)]
    order: Option<usize>,

    /// Period of the caustic (modulus m ≥ 2).
    #[arg(long, global = true)]
    m: Option<u32>,

    /// Odd modulus index: the modulus is 2l+1.
    #[arg(long, global = true)]
    l: Option<u32>,

    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,

    #[arg(long = "n-max", global = true)]
    n_max: Option<i64>,

    /// Sample count for sweeps, bounce count for orbits.
    #[arg(long = "iters", global = true)]
    iters: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Initial chord for `orbit`, as `t0,t1`.
    #[arg(long, global = true, value_parser = parse_chord)]
    chord: Option<(f64, f64)>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// E^m(p, id) residuals for m = 2..7 (or --m).
    Verify,
    /// Analytic versus numerical ε-expansion coefficients.
    Expand,
    /// Newton solve for a 1/m caustic, checked by the billiard map.
    SolveCaustic,
    /// Quadratic obstruction system for modulus 2l+1.
    Obstruct,
    /// Iterate the billiard map.
    Orbit,
    /// Constant-width test via even Fourier modes.
    WidthCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value
        .parse()
        .map_err(|e| format!("tolerance '{name}': {e}"))?;
    Ok((name.to_string(), value))
}

fn parse_chord(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected t0,t1, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("t0: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("t1: {e}"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match cli.command {
        Cmd::Verify => Command::Verify,
        Cmd::Expand => Command::Expand,
        Cmd::SolveCaustic => Command::SolveCaustic,
        Cmd::Obstruct => Command::Obstruct,
        Cmd::Orbit => Command::Orbit,
        Cmd::WidthCheck => Command::WidthCheck,
    };
    let format = match cli.format {
        Fmt::Json => Format::Json,
        Fmt::Csv => Format::Csv,
    };
    let config = RunConfig {
        command,
        input: cli.input,
        output: cli.out.clone(),
        format,
        tolerances: cli.tol.into_iter().collect::<BTreeMap<_, _>>(),
        order: cli.order,
        m: cli.m,
        l: cli.l,
        n_max: cli.n_max,
        iterations: cli.iters,
        seed: cli.seed,
        chord: cli.chord,
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("caustic: {e}");
            return ExitCode::from(2);
        }
    };
    let text = outcome.render(format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("caustic: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.exit_code() as u8)
}
