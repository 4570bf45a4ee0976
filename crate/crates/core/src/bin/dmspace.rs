use std::io::Write;

fn main() {
    let out = dmspace::cli::run(std::env::args_os());
    let mut err = std::io::stderr().lock();
    for line in &out.stderr {
        let _ = writeln!(err, "{line}");
    }
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
