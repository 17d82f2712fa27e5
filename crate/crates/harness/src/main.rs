use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use touchchart_harness::config::{read_file, LoadedSession};
use touchchart_harness::describe::describe_tree;
use touchchart_harness::replay::replay_trace;
use touchchart_harness::server::serve;
use touchchart_harness::svg::render_trace_svg;
use touchchart_harness::TraceFile;

#[derive(Parser)]
#[command(name = "touchchart", version, about = "Replay, serve and inspect touch chart sessions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Feed a trace through a fresh session and write the transcript.
    Replay {
        config: PathBuf,
        trace: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Replay even if the trace was recorded against another config.
        #[arg(long)]
        force: bool,
    },
    /// Run the session endpoint.
    Serve {
        config: PathBuf,
        #[arg(long, default_value_t = 7878)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Print the semantic tree as indented text.
    Describe { config: PathBuf },
    /// Print the config hash that trace headers must carry.
    Hash { config: PathBuf },
    /// Draw the trace's finger paths over the chart as SVG.
    TraceSvg {
        config: PathBuf,
        trace: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load_trace(path: &Path) -> anyhow::Result<TraceFile> {
    let text = read_file(path)?;
    TraceFile::parse(&text).with_context(|| format!("{}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("{}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Replay {
            config,
            trace,
            output,
            force,
        } => {
            let session = LoadedSession::load(&config)?;
            let trace = load_trace(&trace)?;
            let transcript = replay_trace(&session, &trace, force)?;
            write_out(output.as_deref(), &transcript.to_text())
        }
        Command::Serve { config, port, host } => {
            let session = LoadedSession::load(&config)?;
            let listener = TcpListener::bind((host.as_str(), port)).with_context(|| format!("binding {host}:{port}"))?;
            eprintln!("listening on {}", listener.local_addr()?);
            serve(listener, session.engine)?;
            Ok(())
        }
        Command::Describe { config } => {
            let session = LoadedSession::load(&config)?;
            print!("{}", describe_tree(&session.engine));
            Ok(())
        }
        Command::Hash { config } => {
            println!("{}", LoadedSession::load(&config)?.hash);
            Ok(())
        }
        Command::TraceSvg { config, trace, output } => {
            let session = LoadedSession::load(&config)?;
            let trace = load_trace(&trace)?;
            write_out(Some(&output), &render_trace_svg(&session.engine, &trace.events))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHARTA11Y_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
