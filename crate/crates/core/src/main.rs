use clap::Parser;

use graph_gstft::cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&msg);
            eprintln!("gstft-error[usage]: {}", first.trim_start_matches("error: "));
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("gstft-error[{}]: {e}", e.code());
        std::process::exit(1);
    }
}
