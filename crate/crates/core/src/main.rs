use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QDISSECT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let code = qdissect::cli::run(std::env::args_os());
    ExitCode::from(code as u8)
}
