use clap::Parser;
use nonlocal_koch::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            for f in &o.files {
                println!("{}", f.display());
            }
            if o.failures > 0 {
                eprintln!("{} failure(s)", o.failures);
            }
            std::process::exit(o.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
