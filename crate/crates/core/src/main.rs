use clap::Parser;

use rhocalc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, code)) => {
            if !output.is_empty() {
                println!("{output}");
            }
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
