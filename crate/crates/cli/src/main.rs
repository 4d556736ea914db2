use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use jetcert_cli::{run_suite, Options, SUITES};

/// Exact verification suites for jets, groupoids and Painlevé VI.
///
/// Exit status: 0 if every check passes, 1 if a check fails, 2 on invalid input.
#[derive(Parser, Debug)]
#[command(name = "jetcert", version)]
struct Cli {
    /// Suite to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// Space order k of the jets.
    #[arg(long = "order", value_name = "K")]
    order: Option<u32>,
    /// Time order N of the flow jets.
    #[arg(long = "torder", value_name = "N")]
    torder: Option<u32>,
    /// Base point, e.g. "x=2,p=3,q=1,a=1,b=1,c=1,e=1".
    #[arg(long)]
    base: Option<String>,
    /// Dimension m.
    #[arg(long)]
    m: Option<usize>,
    /// Number q of parameters s.
    #[arg(long)]
    q: Option<usize>,
    /// Largest degree k.
    #[arg(long)]
    kmax: Option<i64>,
    /// Directory of *.fixture files.
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Omit the timestamp header.
    #[arg(long)]
    no_timestamp: bool,
    /// Emit key=value records instead of aligned text.
    #[arg(long)]
    machine: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        order: cli.order,
        torder: cli.torder,
        base: cli.base,
        m: cli.m,
        q: cli.q,
        kmax: cli.kmax,
        fixtures: cli.fixtures,
    };
    let report = match run_suite(&cli.suite, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("jetcert {}: {e}", cli.suite);
            return ExitCode::from(2);
        }
    };
    let stamp = (!cli.no_timestamp).then(|| chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string());
    let text = if cli.machine {
        report.render_machine(stamp.as_deref())
    } else {
        report.render_human(stamp.as_deref())
    };
    print!("{text}");
    ExitCode::from(report.exit_status() as u8)
}
