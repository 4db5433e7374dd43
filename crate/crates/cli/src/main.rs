//! Batch front door. One command per invocation; deterministic reports
//! (identical manifests produce byte-identical files); wall-clock timing
//! goes to a `timing.json` side channel, never into reports.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 certificate or
//! property failure, 3 resource-guard exhaustion.

mod cmd;
mod io;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ripslab",
    version,
    about = "Workbench for word metrics, hyperbolicity, Rips complexes, and certified equivariant contractions of finitely generated groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Output directory (default: $RIPSLAB_OUT or ./out).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct GroupArg {
    /// Group-spec file (JSON: {kind, parameters, generating_set?}).
    #[arg(long)]
    group: std::path::PathBuf,
}

#[derive(Args, Clone)]
struct DeltaArgs {
    /// Ball radius at which δ is measured before derived commands run.
    #[arg(long, default_value_t = 4)]
    delta_radius: u32,
    /// Safety margin added to the measured δ (integer or `n/2`).
    #[arg(long, default_value = "0")]
    delta_margin: String,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group-spec file and report its generating set.
    Validate {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build a Cayley ball and export its metric table.
    Ball {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        /// Additional export: `dot` for the labeled graph.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exhaustive four-point δ of a ball, with witness.
    Delta {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        /// Soft cap on examined quadruples (report flagged when hit).
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rips flag complex of a ball at proximity parameter d.
    Rips {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        /// Additional export: `dot` (proximity graph) or `faces`.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reduced integral homology of a face-list file.
    Homology {
        /// Face-list file: one simplex per line, labels separated by
        /// spaces.
        #[arg(long)]
        faces: std::path::PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate finite subgroups inside the 8δ+4 window.
    Subgroups {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        delta: DeltaArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Conjugacy classes of the enumerated finite subgroups.
    Classes {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        delta: DeltaArgs,
        /// Conjugators are searched in the ball of this radius.
        #[arg(long, default_value_t = 6)]
        conjugator_radius: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fixed-point model of a finite subgroup: invariant-simplex poset,
    /// dismantled core, homology, and collapsibility.
    FixedPoints {
        #[command(flatten)]
        group: GroupArg,
        /// Subgroup generators, comma-separated words (e.g. "a" or
        /// "a,bab").
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        /// Additional export: `faces` for the model complex.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the certified contraction engine and verify its trace.
    Contract {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        d: u32,
        /// Subgroup generators, comma-separated words; default trivial.
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random F-vertex seeds for the initial set.
        #[arg(long, default_value_t = 3)]
        seed_count: usize,
        /// Working radius guard for all metric queries.
        #[arg(long, default_value_t = 30)]
        radius: u32,
        #[arg(long)]
        guard_steps: Option<usize>,
        #[command(flatten)]
        delta: DeltaArgs,
        /// Run even when d < 32δ+20; the report is watermarked and the
        /// trace will fail verification.
        #[arg(long)]
        unsafe_d: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-check a trace file independently.
    Verify {
        /// Trace file produced by `contract`.
        #[arg(long)]
        trace: std::path::PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stabilizer, star-disjointness, orbit-representative, and torsion
    /// checks on the Rips complex at d ≥ 4δ+2.
    CheckRipsTheorem {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        #[command(flatten)]
        delta: DeltaArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export a single artifact (ball, rips, fixed-points) in the given
    /// format without the surrounding report.
    Export {
        #[command(flatten)]
        group: GroupArg,
        /// What to export: ball | rips | fixed-points.
        #[arg(long)]
        what: String,
        /// dot | faces | json (as supported by the artifact).
        #[arg(long)]
        format: String,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 200_000)]
        guard_vertices: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(0);
                }
                _ => {
                    let _ = e.print();
                    std::process::exit(1);
                }
            }
        }
    };
    let code = cmd::run(cli.command);
    std::process::exit(code);
}
