use clap::Parser;

fn main() {
    let cli = constamax::cli::Cli::parse();
    let mut out = std::io::stdout();
    let code = constamax::cli::run(cli, &mut out);
    std::process::exit(code);
}
