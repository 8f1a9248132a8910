use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter("BUCHDAHL_LOG")).init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = buchdahl::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
