use std::process::ExitCode;

use hweno_bench::config::ConfigError;

fn main() -> ExitCode {
    let config = match hweno_bench::parse_config(std::env::args()) {
        Ok(c) => c,
        Err(ConfigError::Cli(e)) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match hweno_bench::execute(&config) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            match report.failure {
                None => ExitCode::SUCCESS,
                Some(message) => {
                    eprintln!("error: {message}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
