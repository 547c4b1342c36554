use clap::Parser;

use snakegraph_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(&cli, &mut out) {
        Ok(ok) => {
            print!("{out}");
            std::process::exit(if ok { 0 } else { 1 });
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
