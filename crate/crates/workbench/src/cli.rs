//! The `luxforge` command line.

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use luxforge_core::control::{compare_policies, simulate, ControlPolicy, NamedPolicy, Schedule};
use luxforge_core::export::{field_to_csv, field_to_pgm};
use luxforge_core::generator::{generate_ranked, LightingDesign};
use luxforge_core::geometry::{validate_room, RoomModel, ValidatedRoom, DEFAULT_SPACING, DEFAULT_WORKPLANE_HEIGHT};
use luxforge_core::patterns::PatternLibrary;
use luxforge_core::photometry::illuminance_field;
use serde::de::DeserializeOwned;
use thiserror::Error;

use crate::api::{self, AppState};
use crate::documents::Ranking;

pub const WORKSPACE_ENV: &str = "LUXFORGE_WORKSPACE";

/// Name of the room copy written next to generated designs.
pub const ROOM_FILE: &str = "room.json";
pub const RANKING_FILE: &str = "ranking.json";

#[derive(Debug, Parser)]
#[command(name = "luxforge", version, about = "Lighting design prototyping and smart-control simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one design per applicable pattern, plus a ranking.
    Generate {
        #[arg(long)]
        room: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Grid pitch used for scoring, metres.
        #[arg(long, default_value_t = DEFAULT_SPACING)]
        spacing: f64,
    },
    /// Evaluate a design's workplane illuminance.
    Illuminance {
        #[arg(long)]
        design: PathBuf,
        /// Room file; defaults to the design's room reference.
        #[arg(long)]
        room: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SPACING)]
        grid: f64,
        #[arg(long, default_value_t = DEFAULT_WORKPLANE_HEIGHT)]
        workplane: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a control policy and write the trace as CSV.
    Simulate {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        room: Option<PathBuf>,
        #[arg(long)]
        policy: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare policies against a baseline and print the savings table.
    Compare {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        room: Option<PathBuf>,
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long = "policy", required = true)]
        policies: Vec<PathBuf>,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, env = WORKSPACE_ENV)]
        workspace: Option<PathBuf>,
    },
    /// Pattern library utilities.
    Patterns {
        #[command(subcommand)]
        command: PatternsCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum PatternsCommand {
    /// Write the built-in pattern library.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pgm,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        #[source]
        source: luxforge_core::Error,
    },
    #[error(transparent)]
    Engine(#[from] luxforge_core::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Io { .. } => "IoFailure",
            Self::Document { source, .. } | Self::Engine(source) => source.name(),
        }
    }
}

fn engine<E: Into<luxforge_core::Error>>(e: E) -> CliError {
    CliError::Engine(e.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

fn load_room(path: &Path) -> Result<ValidatedRoom, CliError> {
    let model: RoomModel = load(path)?;
    validate_room(&model).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

/// Loads a design and its room. Without an explicit room file the design's
/// room reference is read relative to the design file.
fn load_design(design: &Path, room: Option<&Path>) -> Result<(LightingDesign, ValidatedRoom), CliError> {
    let parsed: LightingDesign = load(design)?;
    let room_path = match room {
        Some(p) => p.to_path_buf(),
        None => design
            .parent()
            .unwrap_or_else(|| Path::new(""))
            .join(&parsed.room),
    };
    let room = load_room(&room_path)?;
    luxforge_core::generator::validate_design(&parsed, &room).map_err(|e| CliError::Document {
        path: design.to_path_buf(),
        source: e.into(),
    })?;
    Ok((parsed, room))
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize") + "\n"
}

/// Executes a parsed command. Output for the user goes to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    match cli.command {
        Command::Generate {
            room,
            seed,
            out,
            spacing,
        } => {
            let text = read(&room)?;
            let validated = load_room(&room)?;
            let ranked = generate_ranked(&validated, ROOM_FILE, &PatternLibrary::default_library(), seed, spacing)
                .map_err(engine)?;
            write(&out.join(ROOM_FILE), &text)?;
            for entry in &ranked {
                write(&out.join(format!("{}.json", entry.design.pattern_id)), &pretty(&entry.design))?;
            }
            write(
                &out.join(RANKING_FILE),
                &pretty(&Ranking {
                    room: ROOM_FILE.into(),
                    seed,
                    designs: ranked.clone(),
                }),
            )?;
            for (rank, entry) in ranked.iter().enumerate() {
                let _ = writeln!(
                    stdout,
                    "{:>2}. {:<20} score {:.3}",
                    rank + 1,
                    entry.design.pattern_id,
                    entry.score.scalar_score
                );
            }
        }
        Command::Illuminance {
            design,
            room,
            grid,
            workplane,
            format,
            out,
        } => {
            let (design, room) = load_design(&design, room.as_deref())?;
            let field =
                illuminance_field(&design.fixtures, &design.levels(), &room, grid, workplane).map_err(engine)?;
            let text = match format {
                Format::Csv => field_to_csv(&field),
                Format::Pgm => field_to_pgm(&field),
            };
            write(&out, &text)?;
            let s = field.stats;
            let _ = writeln!(
                stdout,
                "{} samples: average {:.1} lux, min {:.1}, max {:.1}, uniformity {:.3}",
                field.lux.len(),
                s.average,
                s.min,
                s.max,
                s.uniformity
            );
        }
        Command::Simulate {
            design,
            room,
            policy,
            schedule,
            out,
        } => {
            let (design, room) = load_design(&design, room.as_deref())?;
            let policy: ControlPolicy = load(&policy)?;
            let schedule: Schedule = load(&schedule)?;
            let trace = simulate(&design, &room, &policy, &schedule).map_err(engine)?;
            write(&out, &trace.to_csv())?;
            let _ = writeln!(stdout, "{} ticks, {:.3} Wh", trace.len(), trace.energy_wh);
        }
        Command::Compare {
            design,
            room,
            baseline,
            policies,
            schedule,
        } => {
            let (design, room) = load_design(&design, room.as_deref())?;
            let schedule: Schedule = load(&schedule)?;
            let named = std::iter::once(&baseline)
                .chain(&policies)
                .map(|path| {
                    Ok(NamedPolicy {
                        name: path
                            .file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_default(),
                        policy: load(path)?,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let report = compare_policies(&design, &room, &named, &schedule).map_err(engine)?;
            let _ = write!(stdout, "{}", report.to_table());
        }
        Command::Serve {
            port,
            host,
            workspace,
        } => {
            let state = match workspace {
                Some(dir) => AppState::open(dir).map_err(engine)?,
                None => AppState::ephemeral(),
            };
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
                path: PathBuf::from("<runtime>"),
                source,
            })?;
            let _ = writeln!(stdout, "listening on http://{addr}");
            runtime
                .block_on(api::serve(state, addr))
                .map_err(|source| CliError::Io {
                    path: PathBuf::from(addr.to_string()),
                    source,
                })?;
        }
        Command::Patterns {
            command: PatternsCommand::Export { out },
        } => {
            write(&out, &(PatternLibrary::default_library().to_json() + "\n"))?;
        }
    }
    Ok(())
}

/// Parses the process arguments and runs. Returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, &mut std::io::stdout()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}
