use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use latclif_driver::commands::{self, MonogenicArgs, Outcome, EXIT_USAGE};
use latclif_core::dirac::HermitianConvention;
use latclif_core::suites::SuiteConfig;

#[derive(Parser)]
#[command(name = "latclif", version, about = "Exact discrete Clifford analysis on symmetric lattices")]
struct Cli {
    /// Worker threads (LATCLIF_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites and print one CHECK line per identity.
    Verify {
        /// Suite name, comma separated list, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "1")]
        h: String,
        /// Torus modulus for the universal and bridge checks.
        #[arg(long = "N")]
        modulus: Option<usize>,
        #[arg(long, default_value_t = HermitianConvention::DEFAULT)]
        convention: HermitianConvention,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Apply an operator expression to a form file.
    Apply {
        expr: String,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = HermitianConvention::DEFAULT)]
        convention: HermitianConvention,
    },
    /// Exact basis of the hermitian monogenic polynomials of bidegree (p, q).
    Monogenic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = HermitianConvention::DEFAULT)]
        convention: HermitianConvention,
        /// Restrict values to the plus-only blades.
        #[arg(long)]
        spinor: bool,
        /// Search all polynomials of total degree p+q.
        #[arg(long)]
        ambient: bool,
    },
    /// Universal and symmetric-lattice calculus checks on the torus Z_N^n.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        modulus: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Check that a form file is canonical (parse then print is byte-identical).
    Roundtrip { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: EXIT_USAGE,
        stderr: format!("error: {}: {e}\n", path.display()),
        ..Default::default()
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Verify { suite, n, h, modulus, convention, seed } => {
            let suites = match commands::parse_suites(&suite) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let mesh = match commands::parse_mesh(&h) {
                Ok(m) => m,
                Err(e) => return usage(e),
            };
            let cfg = SuiteConfig { n, mesh, modulus, convention, seed };
            commands::verify(&suites, &cfg)
        }
        Cmd::Apply { expr, file, out, convention } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(o) => return o,
            };
            let mut o = commands::apply_expr(&expr, &text, convention);
            if let (Some(path), 0) = (out, o.code) {
                if let Err(e) = std::fs::write(&path, &o.stdout) {
                    return usage(format!("{}: {e}", path.display()));
                }
                o.stdout.clear();
            }
            o
        }
        Cmd::Monogenic { n, h, p, q, convention, spinor, ambient } => match commands::parse_mesh(&h) {
            Ok(mesh) => commands::monogenic(&MonogenicArgs { n, mesh, p, q, convention, spinor, ambient }),
            Err(e) => usage(e),
        },
        Cmd::Oracle { n, modulus, seed } => commands::oracle(n, modulus, seed),
        Cmd::Roundtrip { file } => match read(&file) {
            Ok(t) => commands::roundtrip(&t),
            Err(o) => o,
        },
    }
}

fn usage(msg: impl std::fmt::Display) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stderr: format!("error: {msg}\n"),
        ..Default::default()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("LATCLIF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.threads);
    if let Some(t) = threads {
        // a second initialisation is the only failure mode; ignore it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
