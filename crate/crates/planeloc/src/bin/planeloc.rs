use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use planeloc::bench::{run, to_csv};
use planeloc::blocks::cascade::Strategy;
use planeloc::gen::generate;
use planeloc::locator::LocatorConfig;
use planeloc::replay::{expected_answers, minimize, verify};
use planeloc::workload::{Op, Style, Workload};

#[derive(Parser)]
#[command(name = "planeloc", about = "Point location in incremental planar subdivisions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded workload.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "nested")]
        style: Style,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a workload and compare every query with the brute-force oracle.
    Verify {
        #[arg(long)]
        workload: PathBuf,
        /// One expected answer per query line, as written by --emit.
        #[arg(long)]
        expected: Option<PathBuf>,
        /// Write the oracle's answers and exit.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        cascading: bool,
        /// Where to write the minimized reproducer on failure.
        #[arg(long)]
        repro: Option<PathBuf>,
    },
    /// Time generated workloads of each size and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4096,8192,16384,32768,65536,131072")]
        sizes: Vec<usize>,
        #[arg(long, default_value = "grid-with-islands")]
        style: Style,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cascading: bool,
    },
}

fn config(cascading: bool) -> LocatorConfig {
    let strategy = if cascading { Strategy::Cascading } else { Strategy::PlainBinary };
    LocatorConfig { strategy, ..LocatorConfig::default() }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(p: &PathBuf) -> Result<String, String> {
    fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn cmd_verify(
    path: &PathBuf,
    expected: &Option<PathBuf>,
    emit: &Option<PathBuf>,
    cascading: bool,
    repro: &Option<PathBuf>,
) -> Result<bool, String> {
    let w: Workload = read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(out) = emit {
        let ans = expected_answers(&w).map_err(|e| e.to_string())?;
        fs::write(out, ans.join("\n") + "\n").map_err(|e| format!("{}: {e}", out.display()))?;
        println!("wrote {} answers to {}", ans.len(), out.display());
        return Ok(true);
    }
    let exp: Option<Vec<String>> = match expected {
        Some(p) => Some(read(p)?.lines().map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect()),
        None => None,
    };
    let cfg = config(cascading);
    let rep = verify(&w, cfg, exp.as_deref()).map_err(|e| format!("rejected: {e}"))?;
    let Some(m) = rep.mismatch else {
        println!("PASS: {} insertions, {} queries", rep.insertions, rep.queries);
        return Ok(true);
    };
    println!("FAIL: {m}");
    let fails = |p: &Workload| {
        let k = p.ops.iter().filter(|o| matches!(o, Op::Query(_))).count();
        let e = exp.as_ref().map(|e| e[..k.min(e.len())].to_vec());
        verify(p, cfg, e.as_deref()).map(|r| !r.passed()).unwrap_or(false)
    };
    let small = if exp.is_some() { w.prefix(m.index + 1) } else { minimize(&w, fails) };
    println!("reproducer: {} ops", small.ops.len());
    match repro {
        Some(p) => {
            fs::write(p, small.to_string()).map_err(|e| format!("{}: {e}", p.display()))?;
            println!("reproducer written to {}", p.display());
        }
        None => print!("{small}"),
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Gen { seed, n, style, out } => {
            generate(*seed, *n, *style).map_err(|e| e.to_string()).and_then(|w| write_out(out, &w.to_string())).map(|_| true)
        }
        Cmd::Verify { workload, expected, emit, cascading, repro } => cmd_verify(workload, expected, emit, *cascading, repro),
        Cmd::Bench { sizes, style, seed, out, cascading } => {
            let mut rows = Vec::new();
            let mut err = None;
            for &n in sizes {
                match run(n, *style, *seed, config(*cascading)) {
                    Ok((r, _)) => {
                        eprintln!("n={n}: update {:.0} ns, query {:.0} ns", r.update_ns_amortized, r.query_ns_mean);
                        rows.push(r);
                    }
                    Err(e) => {
                        err = Some(e.to_string());
                        break;
                    }
                }
            }
            match err {
                Some(e) => Err(e),
                None => write_out(out, &to_csv(&rows)).map(|_| true),
            }
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
