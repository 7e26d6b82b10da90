use std::io::Write;

fn main() {
    let out = dynsamp::cli::run_from(std::env::args_os());
    print!("{}", out.stdout);
    if !out.stdout.is_empty() && !out.stdout.ends_with('\n') {
        println!();
    }
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
