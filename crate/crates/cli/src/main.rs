//! Command line for the two-handed tile assembly engine.
//!
//! Exit codes: 0 success / verifier pass, 1 usage or input error,
//! 2 verifier fail (violations found), 3 verifier inconclusive.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tatam_core::constructions::{gen_comb, gen_counter, gen_demo, gen_fuzzy_square, DEMO_IDS};
use tatam_core::explore::{self, ExploreConfig};
use tatam_core::fuzzy::{self, Verdict};
use tatam_core::model::{Point, Temperature, TileSet};
use tatam_core::render::{render_svg, RenderOptions};
use tatam_core::tdsl;

#[derive(Parser)]
#[command(
    name = "tatam",
    about = "Two-handed tile assembly: explore producible supertiles and verify fuzzy-temperature fault tolerance",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest supertile (in tiles) kept during exploration.
    #[arg(long, default_value_t = 64)]
    max_tiles: usize,
    /// Largest number of distinct supertiles kept.
    #[arg(long, default_value_t = 1_000_000)]
    max_supertiles: usize,
    /// Worker threads (default: machine parallelism). Results do not depend
    /// on this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse-check a tile set file.
    Validate { tileset: PathBuf },
    /// Explore the producible supertiles of a tile set.
    Explore {
        tileset: PathBuf,
        /// Temperature (defaults to the file's `temperature` line, else 2).
        #[arg(long)]
        temp: Option<u32>,
        #[command(flatten)]
        caps: Caps,
        /// Write one .asm per supertile plus a manifest into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict the .asm files to terminal supertiles.
        #[arg(long)]
        terminals_only: bool,
    },
    /// Check fuzzy-temperature fault tolerance (PS ⇒ DT).
    Fuzzy {
        tileset: PathBuf,
        #[command(flatten)]
        caps: Caps,
        /// Target shape as an .asm file; tile names are ignored, only the
        /// domain matters.
        #[arg(long)]
        shape: Option<PathBuf>,
        /// Write the textual report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a tile set.
    Gen {
        /// comb | counter | square | demo
        kind: String,
        /// Side length (comb, square) or bit width (counter).
        #[arg(long)]
        n: Option<u32>,
        /// Demo id: all_strength2 | strength1_pair | error_prone.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an assembly as SVG.
    Render {
        assembly: PathBuf,
        #[arg(long)]
        tileset: PathBuf,
        /// Output file (default: standard output).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Draw tile names and glue labels.
        #[arg(long)]
        labels: bool,
        /// Draw strength ticks on bound sides (on by default).
        #[arg(long, default_value_t = true)]
        ticks: bool,
        /// Cell size in pixels.
        #[arg(long, default_value_t = 24)]
        cell: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap reserves exit code 2 for usage errors; this tool uses 2
            // for verification failures, so remap. Help/version stay success.
            if e.use_stderr() {
                let _ = write!(std::io::stderr(), "{e}");
                return ExitCode::from(1);
            }
            let _ = write!(std::io::stdout(), "{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_tileset(path: &Path) -> Result<(TileSet, Temperature), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    tdsl::parse_tileset(&text).map_err(|e| tdsl::format_parse_error(&path.display(), &e))
}

fn set_threads(threads: Option<usize>) -> Result<(), String> {
    if let Some(n) = threads {
        if n == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { tileset } => {
            let (set, tau) = load_tileset(&tileset)?;
            println!("ok: {} tile types, default temperature {}", set.len(), tau);
            Ok(ExitCode::SUCCESS)
        }
        Command::Explore {
            tileset,
            temp,
            caps,
            out,
            terminals_only,
        } => {
            set_threads(caps.threads)?;
            let (set, file_tau) = load_tileset(&tileset)?;
            let tau = match temp {
                Some(t) => Temperature::new(t).map_err(|e| e.to_string())?,
                None => file_tau,
            };
            let cfg = ExploreConfig::new(tau, caps.max_tiles, caps.max_supertiles, None)
                .map_err(|e| e.to_string())?;
            let (p, report) = explore::explore(&set, &cfg);
            let terminal_count = explore::terminals(&p, &set, tau).len();
            println!(
                "supertiles: {}  terminals: {}  saturated: {}  queries: {}  cap-hits: {}",
                p.len(),
                terminal_count,
                report.saturated,
                report.combination_queries,
                report.cap_hits
            );
            if let Some(dir) = out {
                let manifest = explore::export(&p, &report, &set, tau, &dir, terminals_only)
                    .map_err(|e| e.to_string())?;
                println!("manifest: {}", manifest.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzzy {
            tileset,
            caps,
            shape,
            report,
        } => {
            set_threads(caps.threads)?;
            let (set, _) = load_tileset(&tileset)?;
            let cfg = ExploreConfig::new(
                Temperature::default(),
                caps.max_tiles,
                caps.max_supertiles,
                None,
            )
            .map_err(|e| e.to_string())?;
            let shape_points: Option<Vec<Point>> = match shape {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    let asm = tdsl::parse_assembly(&text, &set)
                        .map_err(|e| tdsl::format_parse_error(&path.display(), &e))?;
                    Some(asm.cells().iter().map(|&(p, _)| p).collect())
                }
                None => None,
            };
            let r = fuzzy::fuzzy_check(&set, &cfg, shape_points.as_deref());
            let text = fuzzy::render_report(&r, &set);
            match report {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    println!("verdict: {}", r.verdict);
                    println!("report: {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(match r.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(2),
                Verdict::Inconclusive => ExitCode::from(3),
            })
        }
        Command::Gen { kind, n, id, out } => {
            let need_n = || n.ok_or_else(|| format!("gen {kind} needs --n"));
            let set = match kind.as_str() {
                "comb" => gen_comb(need_n()?).map_err(|e| e.to_string())?,
                "counter" => gen_counter(need_n()?).map_err(|e| e.to_string())?,
                "square" => gen_fuzzy_square(need_n()?).map_err(|e| e.to_string())?,
                "demo" => {
                    let id = id.ok_or_else(|| {
                        format!("gen demo needs --id (one of: {})", DEMO_IDS.join(", "))
                    })?;
                    gen_demo(&id).map_err(|e| e.to_string())?
                }
                other => return Err(format!("unknown generator {other:?}")),
            };
            // The comb is a temperature-1 system; everything else runs at 2.
            let tau = if kind == "comb" {
                Temperature::new(1).unwrap()
            } else {
                Temperature::default()
            };
            let text = tdsl::serialize_tileset(&set, tau).map_err(|e| e.to_string())?;
            match out {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            assembly,
            tileset,
            svg,
            labels,
            ticks,
            cell,
        } => {
            let (set, _) = load_tileset(&tileset)?;
            let text = std::fs::read_to_string(&assembly)
                .map_err(|e| format!("cannot read {}: {e}", assembly.display()))?;
            let asm = tdsl::parse_assembly(&text, &set)
                .map_err(|e| tdsl::format_parse_error(&assembly.display(), &e))?;
            let opts = RenderOptions { cell, labels, ticks };
            let doc = render_svg(&asm, &set, &opts);
            match svg {
                Some(path) => std::fs::write(&path, &doc)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{doc}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
