use clap::error::ErrorKind;
use clap::Parser;

use polyterm_cli::{apply_memory_cap, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Usage errors exit with 1; 2 is reserved for limit statuses.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            std::process::exit(code);
        }
    };
    if let Err(e) = apply_memory_cap() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
    std::process::exit(run(cli));
}
