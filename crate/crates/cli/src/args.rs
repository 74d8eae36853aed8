use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "typreal", version, about = "Typically real harmonic maps: render, certify and search")]
pub struct Cli {
    /// Worker threads for sample-parallel sections (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image of a region boundary and a grid point cloud, as SVG and CSV.
    Render(RenderArgs),
    /// Boundary univalence, typical reality and local univalence of one map.
    Certify(CertifyArgs),
    /// Bracket the radius of univalence over sampled maps.
    Radius(RadiusArgs),
    /// Scan sampled maps against one of the open conjectures.
    Conjecture(ConjectureArgs),
    /// Construct and re-verify a single witness.
    Witness(WitnessArgs),
    /// Picard multivalence and Goodman collision demonstrations.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MapArgs {
    /// Named map, e.g. koebe, ft:t=0.5, ftr:t=0.5,r=0.9, goodman, theorem5.
    #[arg(long = "f", value_name = "SPEC", conflicts_with = "measures", required_unless_present = "measures")]
    pub f: Option<String>,
    /// JSON file with measures {"nu": [{"t": .., "w": ..}, ...], "mu": [{"theta": .., "w": ..}, ...]}.
    #[arg(long, value_name = "PATH")]
    pub measures: Option<PathBuf>,
    /// Region: disk:r=..[,cx=..,cy=..], lens, halflens, psisub:c=.., each with optional eps=.
    #[arg(long, default_value = "lens")]
    pub region: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenderArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Boundary resolution.
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    /// Grid points per side for the point cloud.
    #[arg(long, default_value_t = 40)]
    pub grid: usize,
    /// Output prefix; writes PREFIX.svg and PREFIX.csv.
    #[arg(long, default_value = "render")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Treat a collision as the expected outcome (exit 0 with witness).
    #[arg(long)]
    pub expect_collision: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Ru,
    LensFamily,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RadiusArgs {
    #[arg(long, value_enum, default_value = "ru")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConjectureArgs {
    /// 1, 2 or open3.
    #[arg(long)]
    pub id: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKindArg {
    /// f_t with a critical point at --z on a lens arc.
    Critical,
    /// f_(t,R) with a critical point at --z outside the lens.
    Scaled,
    /// Two-atom measure with a slit-plane critical point at e^{i alpha}.
    Proposition,
    /// Root of (1-λ) q_s' + λ q_t' = 0.
    Nonconvexity,
    /// Collision of the sheared f_1/2 at angle --alpha.
    Theorem5,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub kind: WitnessKindArg,
    /// Point as re,im.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DemoArgs {
    /// Preimages of --w under the Picard example map near z = -1.
    #[arg(long)]
    pub picard: bool,
    /// Goodman's function: certification inside 1/sqrt3 and a collision outside.
    #[arg(long)]
    pub goodman: bool,
    /// Target value as re[,im].
    #[arg(long, default_value = "0.1", allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
