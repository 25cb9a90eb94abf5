use clap::Parser;
use mbs_cli::run::{emit, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { mbs_cli::EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let report = run(&cli);
    std::process::exit(emit(&cli, report));
}
