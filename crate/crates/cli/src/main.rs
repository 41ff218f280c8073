use std::process::ExitCode;

use clap::Parser;
use susychain::{run, thread_cap, Cli, THREADS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match thread_cap(std::env::var(THREADS_ENV).ok().as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("susychain: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cap {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("susychain: could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("susychain: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
