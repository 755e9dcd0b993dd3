use clap::Parser;

fn main() {
    let cli = matchbound::cli::Cli::parse();
    match matchbound::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
