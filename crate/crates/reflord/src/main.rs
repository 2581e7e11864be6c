use std::io::Write;

fn main() {
    let mut out = std::io::stdout();
    let code = reflord::cli::run(std::env::args_os(), &mut out);
    let _ = out.flush();
    std::process::exit(code);
}
