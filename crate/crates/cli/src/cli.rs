use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Output};
use crate::error::{CliError, Result};
use crate::format::{read_json, CodewordFile, MessageFile};
use crate::spec::CodeSpec;

#[derive(Debug, Parser)]
#[command(name = "locregen", version, about = "Erasure codes with MBR/MSR locality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// CodeSpec JSON file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec and print its derived parameters.
    Validate(Common),
    /// Encode a message file, or a seeded random message.
    Encode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        message: Option<PathBuf>,
    },
    /// Rebuild erased (null) nodes, or the nodes given with --node.
    Repair {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        codeword: PathBuf,
        #[arg(long = "node")]
        nodes: Vec<usize>,
    },
    /// Recover the message from the non-null nodes.
    Decode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        codeword: PathBuf,
    },
    /// Measure the minimum distance.
    Dmin(Common),
    /// Compare the measured distance with every applicable bound.
    Report(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate(c) | Command::Dmin(c) | Command::Report(c) => c,
            Command::Encode { common, .. } | Command::Repair { common, .. } | Command::Decode { common, .. } => common,
        }
    }
}

fn execute(cmd: &Command) -> Result<Output> {
    let common = cmd.common();
    let spec = CodeSpec::load(&common.spec)?;
    let seed = common.seed.or(spec.seed).unwrap_or(0);
    match cmd {
        Command::Validate(_) => commands::validate(&spec),
        Command::Encode { message, .. } => {
            let msg: Option<MessageFile> = message.as_deref().map(read_json).transpose()?;
            commands::encode(&spec, msg.as_ref(), seed)
        }
        Command::Repair { codeword, nodes, .. } => {
            commands::repair(&spec, &read_json::<CodewordFile>(codeword)?, nodes, seed)
        }
        Command::Decode { codeword, .. } => commands::decode(&spec, &read_json(codeword)?),
        Command::Dmin(_) => commands::dmin(&spec),
        Command::Report(_) => commands::report(&spec),
    }
}

/// What a command prints, and its exit status.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Run {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs a parsed command line without touching the process's own streams.
pub fn run(cli: &Cli) -> Run {
    let cmd = &cli.command;
    let out = match execute(cmd) {
        Ok(out) => out,
        Err(e) => return Run { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut run = Run { code: out.exit, stdout: out.text, stderr: String::new() };
    if let Some(artifact) = out.artifact {
        match &cmd.common().out {
            Some(path) => {
                if let Err(source) = fs::write(path, artifact) {
                    let e = CliError::Io { path: path.clone(), source };
                    run.code = e.exit_code();
                    run.stderr = format!("error: {e}\n");
                }
            }
            None => run.stdout.push_str(&artifact),
        }
    }
    run
}
