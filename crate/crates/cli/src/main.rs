use std::io::Write;

fn main() {
    let out = irrhodge::run(std::env::args_os(), std::env::var(irrhodge::MAX_SAT_ENV).ok());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
