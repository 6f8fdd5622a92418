use clap::Parser;

use udscene_cli::{run, Cli, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = run(cli.command, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
