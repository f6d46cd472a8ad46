use clap::Parser;
use foodchain::cli::{run, Cli};
use foodchain::Error;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err}");
        // invalid options and malformed parameter files are usage
        // errors (2, like clap's own); numerical/I-O failures are 1
        let code = match err {
            Error::InvalidOptions(_) | Error::ParamFile { .. } => 2,
            _ => 1,
        };
        std::process::exit(code);
    }
}
