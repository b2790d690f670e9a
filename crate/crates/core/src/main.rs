use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use kinstab::config::{resolve, Cli, CliConfig, SubcommandKind, THREADS_ENV};
use kinstab::diagnostics::{diagnostics_csv, drift_diagnostics, noise_diagnostics};
use kinstab::harness::{collect_path_errors, summarize, write_csv, write_summary_csv};
use kinstab::kinetic::build_master_path;
use kinstab::scheme::{run_euler, run_reference, SchemeConfig, Trajectory};
use kinstab::{RngStream, StableParams};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

fn fail(code: u8, kind: &str, msg: impl std::fmt::Display) -> ExitCode {
    let msg = msg.to_string().replace('\n', " ");
    eprintln!("error[{kind}]: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(EXIT_CONFIG, "config", e.to_string().trim()),
    };
    let file = match config_file(&cli) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_CONFIG, "config", e),
    };
    let env = std::env::var(THREADS_ENV).ok();
    let cfg = match resolve(&cli.command, file.as_deref(), env.as_deref()) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, "config", e),
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_RUNTIME, "runtime", e),
    }
}

fn config_file(cli: &Cli) -> Result<Option<String>, String> {
    use kinstab::config::Command;
    let flags = match &cli.command {
        Command::Rates(f)
        | Command::Simulate(f)
        | Command::DiagnoseNoise(f)
        | Command::DiagnoseDrift(f) => f,
    };
    flags
        .config
        .as_ref()
        .map(|p| {
            fs::read_to_string(p).map_err(|e| format!("cannot read config {}: {e}", p.display()))
        })
        .transpose()
}

fn run(cfg: &CliConfig) -> kinstab::Result<()> {
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("manifest.txt"), cfg.manifest())?;
    match cfg.subcommand {
        SubcommandKind::Rates => rates(cfg),
        SubcommandKind::Simulate => simulate(cfg),
        SubcommandKind::DiagnoseNoise => {
            let rows = noise_diagnostics(cfg.alpha, cfg.samples, cfg.seed)?;
            report_diagnostics(&cfg.out.join("diagnostics_noise.csv"), &rows)
        }
        SubcommandKind::DiagnoseDrift => {
            let rows = drift_diagnostics(cfg.drift(), cfg.samples, cfg.seed);
            report_diagnostics(&cfg.out.join("diagnostics_drift.csv"), &rows)
        }
    }
}

fn report_diagnostics(
    path: &Path,
    rows: &[kinstab::diagnostics::DiagnosticRow],
) -> kinstab::Result<()> {
    fs::write(path, diagnostics_csv(rows))?;
    for r in rows {
        println!(
            "{:<28} {:<36} value={:.6} {}",
            r.test,
            r.param,
            r.value,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    println!(
        "{passed}/{} checks passed; wrote {}",
        rows.len(),
        path.display()
    );
    Ok(())
}

fn rates(cfg: &CliConfig) -> kinstab::Result<()> {
    let exp = cfg.experiment();
    let pe = collect_path_errors(&exp)?;
    let report = summarize(&exp, &pe, exp.moment)?;
    for r in &report.rows {
        println!(
            "n={} error={:.6e} stderr={:.3e} median={:.6e}",
            r.n, r.error, r.stderr, r.median
        );
    }
    println!("theoretical_rate={:.4}", report.theoretical);
    match report.slope() {
        Some(s) => println!("fitted_slope={s:.4}"),
        None => println!("fitted_slope=NaN"),
    }
    println!("{}", report.status_line());
    write_csv(&report, &cfg.out.join("rates.csv"))?;
    write_summary_csv(&report, &cfg.out.join("summary.csv"))?;
    Ok(())
}

fn push_rows(s: &mut String, grid: usize, t: &Trajectory) {
    for i in 0..t.len() {
        let _ = write!(s, "{grid},{i},{:.10}", t.time(i));
        for c in t.x(i).iter().chain(t.v(i)) {
            let _ = write!(s, ",{c:.12e}");
        }
        s.push('\n');
    }
}

fn simulate(cfg: &CliConfig) -> kinstab::Result<()> {
    let exp = cfg.experiment();
    let params = StableParams::new(cfg.alpha, cfg.dim)?;
    let master = build_master_path(cfg.n_fine, &params, &mut RngStream::new(cfg.seed, 0))?;
    let mut s = String::from("n,i,t");
    for p in ["x", "v"] {
        for j in 0..cfg.dim {
            let _ = write!(s, ",{p}_{j}");
        }
    }
    s.push('\n');
    for &n in &exp.n_list {
        let sc = SchemeConfig::with_quadrature(n, exp.quad, exp.n_fine);
        push_rows(&mut s, n, &run_euler(&sc, &master, &exp.drift, &exp.z0)?);
    }
    let reference = run_reference(&master, &exp.drift, &exp.z0, exp.quad)?;
    push_rows(&mut s, cfg.n_fine, &reference);
    let path = cfg.out.join("trajectory.csv");
    fs::write(&path, s)?;
    println!("wrote {}", path.display());
    Ok(())
}
