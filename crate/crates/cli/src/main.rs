use clap::Parser;

fn main() {
    let cli = fieldlab_cli::cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    let code = match fieldlab_cli::cli::execute(cli, &mut out) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    };
    std::process::exit(code);
}
