use std::io::Write;

fn main() {
    let out = gfg_cli::run(std::env::args_os());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    std::process::exit(out.exit_code);
}
