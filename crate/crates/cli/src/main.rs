mod args;
mod commands;
mod error;
mod output;

use clap::Parser;

use args::Cli;

fn main() {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    log::info!("wproj {}", env!("CARGO_PKG_VERSION"));
    log::info!("config: {cli:?}");
    let result = commands::execute(&cli.command, cli.jobs)
        .and_then(|out| Ok(out.emit(cli.format, cli.out.as_deref())?));
    if let Err(e) = result {
        eprintln!("error[{}]: {e}", e.code());
        std::process::exit(e.exit_code());
    }
}
