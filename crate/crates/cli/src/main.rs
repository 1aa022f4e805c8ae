use std::process::ExitCode;

use hochcurve_cli::{parse_args, run};

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os()).and_then(run);
    match result {
        Ok(report) => {
            print!("{}", report.render());
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                print!("{e}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
