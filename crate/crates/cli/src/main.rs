use std::process::ExitCode;

fn main() -> ExitCode {
    let mut io = espd_cli::Io {
        out: &mut std::io::stdout(),
        err: &mut std::io::stderr(),
    };
    ExitCode::from(espd_cli::run(std::env::args_os(), &mut io))
}
