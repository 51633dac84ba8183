use std::process::ExitCode;

fn main() -> ExitCode {
    match eigenlab_cli::run(std::env::args()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprint!("{}", err.render());
            ExitCode::from(err.code as u8)
        }
    }
}
