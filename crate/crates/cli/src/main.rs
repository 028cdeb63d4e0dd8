use std::process::ExitCode;

use hcs_cli::commands::{parse, run};
use hcs_cli::config::expand_args;
use hcs_cli::error::EXIT_PARAM;

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HCS_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HCS_LAB_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let argv = match expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("hcs-lab: {e}");
            return ExitCode::from(EXIT_PARAM);
        }
    };
    let cli = match parse(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARAM } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = init_threads() {
        eprintln!("hcs-lab: {e}");
        return ExitCode::from(EXIT_PARAM);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hcs-lab: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
