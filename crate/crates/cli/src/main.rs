use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use hsgen::Error;
use hsgen_cli::experiments::{self, Common};
use hsgen_cli::report::RunReport;

/// Reconstructive hitting-set generators: experiments and artifacts.
#[derive(Parser)]
#[command(name = "hsgen", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Randomized axiom checks on every built-in field.
    FieldSelftest(experiments::SelfTestOpts),
    /// Planted list-decoding instances, checked against brute force.
    SudanBench(experiments::SudanOpts),
    /// Stream the generator for a random low-degree polynomial.
    SuGen(experiments::SuGenOpts),
    /// Reconstruct random polynomials from an avoider.
    SuRecon(experiments::SuReconOpts),
    /// Stream the targeted generator of a layered circuit.
    CtGen(experiments::CtGenOpts),
    /// Recover a circuit's output from an avoider.
    CtRecon(experiments::CtReconOpts),
    /// The win-win algorithm on the desk registry.
    BootstrapDemo(experiments::BootstrapOpts),
    /// The smallest prime of a given bit length, by brute force.
    PrimeDemo(experiments::PrimeOpts),
}

impl Cmd {
    fn common(&self) -> &Common {
        match self {
            Cmd::FieldSelftest(o) => &o.common,
            Cmd::SudanBench(o) => &o.common,
            Cmd::SuGen(o) => &o.su.common,
            Cmd::SuRecon(o) => &o.su.common,
            Cmd::CtGen(o) => &o.ct.common,
            Cmd::CtRecon(o) => &o.ct.common,
            Cmd::BootstrapDemo(o) => &o.common,
            Cmd::PrimeDemo(o) => &o.common,
        }
    }

    fn streams(&self) -> bool {
        matches!(self, Cmd::SuGen(_) | Cmd::CtGen(_))
    }
}

fn open(dest: &str) -> io::Result<Box<dyn Write>> {
    Ok(if dest == "-" { Box::new(BufWriter::new(io::stdout().lock())) } else { Box::new(BufWriter::new(File::create(dest)?)) })
}

fn run(cmd: &Cmd) -> Result<RunReport, Error> {
    let common = cmd.common();
    let dest = common.stream.clone().unwrap_or_else(|| "-".into());
    let mut sink: Box<dyn Write> = if cmd.streams() {
        open(&dest).map_err(|e| Error::Usage(format!("{dest}: {e}")))?
    } else {
        Box::new(io::sink())
    };
    let report = match cmd {
        Cmd::FieldSelftest(o) => experiments::field_selftest_run(o),
        Cmd::SudanBench(o) => experiments::sudan_bench(o),
        Cmd::SuGen(o) => experiments::su_gen(o, &mut *sink),
        Cmd::SuRecon(o) => experiments::su_recon(o),
        Cmd::CtGen(o) => experiments::ct_gen(o, &mut *sink),
        Cmd::CtRecon(o) => experiments::ct_recon(o),
        Cmd::BootstrapDemo(o) => experiments::bootstrap_demo(o),
        Cmd::PrimeDemo(o) => experiments::prime_demo(o),
    }?;
    sink.flush().map_err(|e| Error::Resource(e.to_string()))?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut report = match run(&cli.cmd) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hsgen: {e}");
            return ExitCode::from(1);
        }
    };
    report.args = std::env::args().skip(1).collect();
    report.wall_clock_ms = start.elapsed().as_secs_f64() * 1e3;
    let text = report.to_json();
    let common = cli.cmd.common();
    let written = match &common.out {
        Some(path) => std::fs::write(path, &text),
        // hex lines own standard output when they stream there
        None if cli.cmd.streams() && common.stream.as_deref().unwrap_or("-") == "-" => io::stderr().write_all(text.as_bytes()),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("hsgen: cannot write the report: {e}");
        return ExitCode::from(1);
    }
    let failed = report.aggregate.get("passed").is_some_and(|v| v == false);
    if report.aggregate.get("bottom_dominated").is_some_and(|v| v == true) || failed {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
