use std::process::ExitCode;

use clap::Parser;
use qtmt_tools::cli::{run, Cli};

fn main() -> ExitCode {
  let cli = match Cli::try_parse() {
    Ok(cli) => cli,
    Err(e) => {
      let _ = e.print();
      return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
    }
  };
  match run(&cli) {
    Ok(()) => ExitCode::SUCCESS,
    Err(e) => {
      eprintln!("error: {e}");
      ExitCode::from(e.exit_code() as u8)
    }
  }
}
