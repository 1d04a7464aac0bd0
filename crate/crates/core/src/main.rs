use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use tracing_subscriber::EnvFilter;

use workbench_core::codegen::{has_errors, lint_code, sanitize_code, CodeRules};
use workbench_core::gateway::{GatewayLimits, ProviderMode};
use workbench_core::prompts::endpoints::SelfInvokeMode;
use workbench_core::server::{self, Secrets, ServerConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProviderArg {
    Live,
    Record,
    Replay,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelfInvokeArg {
    Proxy,
    InjectKey,
}

/// Prototype workbench server.
#[derive(Debug, Parser)]
#[command(name = "workbench", version)]
struct Cli {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value = "workbench-data")]
    data_dir: PathBuf,
    #[arg(long, value_enum, default_value = "live")]
    provider: ProviderArg,
    /// Transcript file or directory of transcripts (replay mode).
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long, default_value = "gpt-4o")]
    ideation_model: String,
    #[arg(long, default_value = "claude-3-5-sonnet-20240620")]
    codegen_model: String,
    #[arg(long, default_value = "https://api.openai.com/v1")]
    ideation_base_url: String,
    #[arg(long, default_value = "https://api.anthropic.com/v1")]
    codegen_base_url: String,
    /// Seconds to wait for one provider response.
    #[arg(long, default_value_t = 300)]
    provider_timeout: u64,
    #[arg(long, value_enum, default_value = "proxy")]
    self_invoke: SelfInvokeArg,
    /// Upstream for /proxy/completions.
    #[arg(long)]
    self_invoke_chat_url: Option<String>,
    /// Upstream for /proxy/images.
    #[arg(long)]
    self_invoke_images_url: Option<String>,
    /// Origin written into previews instead of the request's Host.
    #[arg(long)]
    public_origin: Option<String>,
    #[arg(long)]
    ideation_token_cap: Option<u32>,
    #[arg(long)]
    codegen_token_cap: Option<u32>,
    #[arg(long)]
    call_budget: Option<u32>,
    /// JSON file overriding the code rules.
    #[arg(long)]
    code_rules: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lint an html file (or stdin) against the code rules; prints JSON issues.
    Lint { file: Option<PathBuf> },
    /// Extract the html document from a raw completion (file or stdin).
    Sanitize { file: Option<PathBuf> },
}

fn read_input(file: &Option<PathBuf>) -> Result<String, String> {
    match file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s)
        }
    }
}

fn load_rules(path: &Option<PathBuf>) -> Result<CodeRules, String> {
    let Some(path) = path else { return Ok(CodeRules::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rules: CodeRules = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    rules.validate()?;
    Ok(rules)
}

fn config(cli: &Cli) -> Result<ServerConfig, String> {
    let defaults = ServerConfig::default();
    let limits = GatewayLimits {
        ideation_token_cap: cli.ideation_token_cap.unwrap_or(defaults.limits.ideation_token_cap),
        codegen_token_cap: cli.codegen_token_cap.unwrap_or(defaults.limits.codegen_token_cap),
        call_budget: cli.call_budget.unwrap_or(defaults.limits.call_budget),
    };
    Ok(ServerConfig {
        port: cli.port,
        data_dir: cli.data_dir.clone(),
        provider_mode: match cli.provider {
            ProviderArg::Live => ProviderMode::Live,
            ProviderArg::Record => ProviderMode::Record,
            ProviderArg::Replay => ProviderMode::Replay,
        },
        fixtures: cli.fixtures.clone(),
        ideation_model: cli.ideation_model.clone(),
        codegen_model: cli.codegen_model.clone(),
        ideation_base_url: cli.ideation_base_url.clone(),
        codegen_base_url: cli.codegen_base_url.clone(),
        provider_timeout: Duration::from_secs(cli.provider_timeout),
        self_invoke: match cli.self_invoke {
            SelfInvokeArg::Proxy => SelfInvokeMode::Proxy,
            SelfInvokeArg::InjectKey => SelfInvokeMode::InjectKey,
        },
        self_invoke_chat_url: cli.self_invoke_chat_url.clone().unwrap_or(defaults.self_invoke_chat_url),
        self_invoke_images_url: cli.self_invoke_images_url.clone().unwrap_or(defaults.self_invoke_images_url),
        public_origin: cli.public_origin.clone(),
        limits,
        code_rules: load_rules(&cli.code_rules)?,
        secrets: Secrets::from_env(),
    })
}

fn run(cli: Cli) -> Result<(), String> {
    match &cli.command {
        Some(Command::Lint { file }) => {
            let issues = lint_code(&read_input(file)?, &load_rules(&cli.code_rules)?);
            println!("{}", serde_json::to_string_pretty(&issues).map_err(|e| e.to_string())?);
            return if has_errors(&issues) { Err("lint errors".into()) } else { Ok(()) };
        }
        Some(Command::Sanitize { file }) => {
            let html = sanitize_code(&read_input(file)?).map_err(|e| e.to_string())?;
            print!("{html}");
            return Ok(());
        }
        None => {}
    }

    let config = config(&cli)?;
    // Blocking provider clients must exist before the runtime starts.
    let state = config.build_state()?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((cli.host.as_str(), config.port))
            .await
            .map_err(|e| format!("bind {}:{}: {e}", cli.host, config.port))?;
        let addr = listener.local_addr().map_err(|e| e.to_string())?;
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
        tracing::info!(%addr, mode = ?config.provider_mode, "serving");
        server::serve(listener, state).await.map_err(|e| e.to_string())
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("workbench: {e}");
            ExitCode::FAILURE
        }
    }
}
