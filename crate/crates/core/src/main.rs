use std::io::Write;

fn main() {
    let out = hulthen_kg::cli::run(std::env::args_os());
    eprint!("{}", out.stderr);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(&out.stdout).and_then(|_| stdout.flush()).is_err() {
        std::process::exit(hulthen_kg::cli::EXIT_FAILURE);
    }
    std::process::exit(out.status);
}
