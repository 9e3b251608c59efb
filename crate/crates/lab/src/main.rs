use clap::Parser;

use exactlab::cli::{run, Cli};

/// The command line as typed, quoted where needed, for reports.
fn invocation() -> String {
    let mut words = vec!["exactlab".to_string()];
    for a in std::env::args().skip(1) {
        if a.is_empty() || a.contains(|c: char| c.is_whitespace() || "'\"$;&|<>!*()".contains(c)) {
            words.push(format!("'{}'", a.replace('\'', r"'\''")));
        } else {
            words.push(a);
        }
    }
    words.join(" ")
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = run(cli, &invocation(), &mut out) {
        if let exactlab::LabError::Io { source, .. } = &e {
            if source.kind() == std::io::ErrorKind::BrokenPipe {
                return;
            }
        }
        eprintln!("exactlab: {e}");
        std::process::exit(e.exit_code());
    }
}
