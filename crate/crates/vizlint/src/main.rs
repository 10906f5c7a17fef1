use clap::Parser;
use vizlint::cli::{run, Cli, Command};
use vizlint::server::{bind_addr, serve, AppState};

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Command::Serve { addr } = &cli.command {
        let addr = addr.clone().unwrap_or_else(bind_addr);
        let rt = tokio::runtime::Runtime::new()?;
        rt.block_on(serve(&addr, AppState::default()))?;
        return Ok(());
    }
    let code = run(&cli.command, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
