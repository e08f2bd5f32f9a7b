use clap::Parser;

fn main() {
    let cli = evenq_cli::args::Cli::parse();
    let code = evenq_cli::run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
