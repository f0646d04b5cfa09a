use std::process::ExitCode;

fn main() -> ExitCode {
    let result = penalty_planner::cli::run(std::env::args_os());
    if result.to_stderr() {
        eprint!("{}", result.output);
    } else {
        print!("{}", result.output);
    }
    ExitCode::from(result.exit_code as u8)
}
