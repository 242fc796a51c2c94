use std::process::ExitCode;

use clap::Parser;

use su11_cli::{configure_threads, format::to_json_line, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.json {
                let record = serde_json::json!({"error": e.kind(), "message": e.to_string()});
                eprint!("{}", to_json_line(&record));
            } else {
                eprintln!("su11: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
