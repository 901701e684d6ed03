use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut stderr = std::io::stderr();
    let status = jacobi_scattering::cli::main_with_args(std::env::args_os(), &mut stderr);
    ExitCode::from(status.code() as u8)
}
