//! Command-line flags and the key-value config file.
//!
//! The config file is TOML restricted to flat keys in dotted sections:
//!
//! ```toml
//! experiment = "tilt-sweep"
//! beam.kw0 = 200.0
//! beam.sigma = [-1.0, 1.0]
//! frame.theta = [0.1, 0.3, 0.6]
//! frame.phi = [0.0]
//! frame.z = [0.0]
//! quadrature.nodes = 201
//! quadrature.half_width_factor = 8.0
//! grid.size = 101
//! grid.extent = 3.0
//! verify.seed = 1
//! verify.cases = 20
//! output.path = "sweep.csv"
//! ```
//!
//! Experiments on arbitrary superpositions take `beam.modes = ["0,0,1,0", "1,0,0,0.5"]`
//! with entries `n,m,re,im`; the tilt sweep always uses the fundamental mode.
//!
//! Any flag given on the command line replaces the file value.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use super::AppError;
use crate::geometry::BeamGeometry;
use crate::modes::ModeSuperposition;
use crate::polarization::PolarizationState;
use crate::quadrature::QuadratureSpec;
use crate::tilt::TiltFrame;
use crate::verify::{polarization_with_helicity, VerifyConfig, DEFAULT_CASES, DEFAULT_SEED};

pub const DEFAULT_KW0: f64 = 200.0;
pub const DEFAULT_GRID_SIZE: usize = 101;
pub const DEFAULT_GRID_EXTENT: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(name = "spinhall", version, about = "Momenta, centroids and tilted-frame shifts of paraxial beams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-unit-length P and J by quadrature and by mode-space operators.
    Moments(CommonArgs),
    /// Intensity centroid versus z, with the straight-line prediction.
    Centroid(CommonArgs),
    /// Barycenter shift of a tilted circularly polarized Gaussian.
    TiltSweep(CommonArgs),
    /// Intensity map as a text grid and a binary graymap.
    DensityGrid(CommonArgs),
    /// Run the invariant suite.
    Verify(CommonArgs),
    /// Run the experiment named in the config file.
    Run(CommonArgs),
}

impl Command {
    pub fn parts(&self) -> (Option<Experiment>, &CommonArgs) {
        match self {
            Command::Moments(a) => (Some(Experiment::Moments), a),
            Command::Centroid(a) => (Some(Experiment::Centroid), a),
            Command::TiltSweep(a) => (Some(Experiment::TiltSweep), a),
            Command::DensityGrid(a) => (Some(Experiment::DensityGrid), a),
            Command::Verify(a) => (Some(Experiment::Verify), a),
            Command::Run(a) => (None, a),
        }
    }
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// Key-value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Waist as the dimensionless product k*w0.
    #[arg(long)]
    pub kw0: Option<f64>,
    /// Helicity values (comma separated or repeated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
    /// Mode coefficient `n,m,re,im`; repeat for each mode.
    #[arg(long = "mode", allow_hyphen_values = true)]
    pub modes: Vec<String>,
    /// Tilt angles in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Azimuths in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Vec<f64>,
    /// Observation planes, in units of 1/k.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<f64>,
    /// Gauss-Legendre nodes per axis (odd, >= 21).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Integration half-width in spot sizes (>= 5).
    #[arg(long)]
    pub half_width_factor: Option<f64>,
    /// Grid points per axis for density-grid.
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// Grid half-width in spot sizes for density-grid.
    #[arg(long)]
    pub extent: Option<f64>,
    /// RNG seed for verify.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random beams for verify.
    #[arg(long)]
    pub cases: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Moments,
    Centroid,
    TiltSweep,
    DensityGrid,
    Verify,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    experiment: Option<Experiment>,
    #[serde(default)]
    beam: BeamSection,
    #[serde(default)]
    frame: FrameSection,
    #[serde(default)]
    quadrature: QuadratureSection,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    verify: VerifySection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    #[default]
    None,
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::None => Vec::new(),
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamSection {
    kw0: Option<f64>,
    #[serde(default)]
    sigma: OneOrMany,
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
    beta_re: Option<f64>,
    beta_im: Option<f64>,
    #[serde(default)]
    modes: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameSection {
    #[serde(default)]
    theta: OneOrMany,
    #[serde(default)]
    phi: OneOrMany,
    #[serde(default)]
    z: OneOrMany,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureSection {
    nodes: Option<usize>,
    half_width_factor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    size: Option<usize>,
    extent: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifySection {
    seed: Option<u64>,
    cases: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<PathBuf>,
}

/// Fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub geometry: BeamGeometry,
    /// One polarization per requested helicity, or the explicit Jones pair.
    pub polarizations: Vec<PolarizationState>,
    pub modes: ModeSuperposition,
    pub modes_given: bool,
    pub frames: Vec<TiltFrame>,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    pub zs: Vec<f64>,
    pub quadrature: QuadratureSpec,
    pub grid_size: usize,
    pub grid_extent: f64,
    pub verify: VerifyConfig,
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> AppError {
    AppError::Validation(msg.into())
}

fn parse_mode(spec: &str) -> Result<(u32, u32, Complex64), AppError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(invalid(format!("mode `{spec}` must be `n,m,re,im`")));
    }
    let idx = |s: &str| s.parse::<u32>().map_err(|_| invalid(format!("mode index `{s}` in `{spec}` is not a non-negative integer")));
    let num = |s: &str| s.parse::<f64>().map_err(|_| invalid(format!("mode coefficient `{s}` in `{spec}` is not a number")));
    Ok((idx(parts[0])?, idx(parts[1])?, Complex64::new(num(parts[2])?, num(parts[3])?)))
}

fn pick_list(flag: &[f64], file: OneOrMany, default: &[f64]) -> Vec<f64> {
    if !flag.is_empty() {
        return flag.to_vec();
    }
    let v = file.into_vec();
    if v.is_empty() {
        default.to_vec()
    } else {
        v
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig, AppError> {
    let text = std::fs::read_to_string(path).map_err(|source| AppError::ConfigRead { path: path.to_owned(), source })?;
    toml::from_str(&text).map_err(|e| invalid(format!("{}: {}", path.display(), e.message())))
}

impl RunConfig {
    /// Merges the config file (if any) with the flags and validates every physical parameter.
    pub fn resolve(experiment: Option<Experiment>, args: &CommonArgs) -> Result<Self, AppError> {
        let file = match &args.config {
            Some(p) => read_file_config(p)?,
            None => FileConfig::default(),
        };
        let experiment = experiment
            .or(file.experiment)
            .ok_or_else(|| invalid("no experiment given: use a subcommand or set `experiment` in the config file"))?;

        let kw0 = args.kw0.or(file.beam.kw0).unwrap_or(DEFAULT_KW0);
        let geometry = BeamGeometry::new(kw0).map_err(|e| invalid(format!("--kw0: {e}")))?;

        let jones = [
            args.alpha_re.or(file.beam.alpha_re),
            args.alpha_im.or(file.beam.alpha_im),
            args.beta_re.or(file.beam.beta_re),
            args.beta_im.or(file.beam.beta_im),
        ];
        let sigma_default: &[f64] = if experiment == Experiment::TiltSweep { &[-1.0, 0.0, 1.0] } else { &[1.0] };
        let sigmas = pick_list(&args.sigma, file.beam.sigma, sigma_default);
        let polarizations = if jones.iter().any(Option::is_some) {
            if !args.sigma.is_empty() {
                return Err(invalid("--sigma and --alpha-*/--beta-* are mutually exclusive"));
            }
            let [ar, ai, br, bi] = jones.map(|v| v.unwrap_or(0.0));
            vec![PolarizationState::new(Complex64::new(ar, ai), Complex64::new(br, bi))
                .map_err(|e| invalid(format!("Jones vector: {e}")))?]
        } else {
            sigmas
                .iter()
                .map(|&s| {
                    if !(s.is_finite() && (-1.0..=1.0).contains(&s)) {
                        return Err(invalid(format!("--sigma {s}: helicity must lie in [-1, 1]")));
                    }
                    polarization_with_helicity(s).map_err(AppError::from)
                })
                .collect::<Result<_, _>>()?
        };

        let mode_specs = if args.modes.is_empty() { file.beam.modes } else { args.modes.clone() };
        let modes_given = !mode_specs.is_empty();
        let modes = if modes_given {
            let mut m = ModeSuperposition::default();
            for s in &mode_specs {
                let (n, mm, c) = parse_mode(s)?;
                m.insert(n, mm, c).map_err(|e| invalid(format!("--mode {s}: {e}")))?;
            }
            m.validate().map_err(|e| invalid(format!("--mode: {e}")))?;
            m
        } else {
            ModeSuperposition::fundamental()
        };

        let thetas = pick_list(&args.theta, file.frame.theta, &[0.1, 0.3, 0.6]);
        let phis = pick_list(&args.phi, file.frame.phi, &[0.0]);
        let zs = pick_list(&args.z, file.frame.z, &[0.0]);
        if let Some(z) = zs.iter().find(|z| !z.is_finite()) {
            return Err(invalid(format!("--z {z}: observation plane must be finite")));
        }
        let mut frames = Vec::with_capacity(thetas.len() * phis.len());
        for &t in &thetas {
            for &p in &phis {
                frames.push(TiltFrame::new(t, p).map_err(|e| invalid(format!("--theta/--phi: {e}")))?);
            }
        }

        let mut quadrature = QuadratureSpec::default();
        if let Some(n) = args.nodes.or(file.quadrature.nodes) {
            quadrature.nodes_per_axis = n;
        }
        if let Some(c) = args.half_width_factor.or(file.quadrature.half_width_factor) {
            quadrature.half_width_factor = c;
        }
        quadrature.validate().map_err(|e| invalid(format!("--nodes/--half-width-factor: {e}")))?;

        let grid_size = args.grid_size.or(file.grid.size).unwrap_or(DEFAULT_GRID_SIZE);
        if grid_size < 2 {
            return Err(invalid(format!("--grid-size {grid_size}: need at least 2 points per axis")));
        }
        let grid_extent = args.extent.or(file.grid.extent).unwrap_or(DEFAULT_GRID_EXTENT);
        if !(grid_extent.is_finite() && grid_extent > 0.0) {
            return Err(invalid(format!("--extent {grid_extent}: must be positive")));
        }

        let verify = VerifyConfig {
            seed: args.seed.or(file.verify.seed).unwrap_or(DEFAULT_SEED),
            cases: args.cases.or(file.verify.cases).unwrap_or(DEFAULT_CASES),
            spec: quadrature,
        };
        if verify.cases == 0 {
            return Err(invalid("--cases must be at least 1"));
        }

        let out = args.out.clone().or(file.output.path);
        if experiment == Experiment::DensityGrid && out.is_none() {
            return Err(invalid("density-grid writes two files and needs --out"));
        }
        if experiment == Experiment::TiltSweep && modes_given {
            return Err(invalid("tilt-sweep models the fundamental Gaussian; --mode is not accepted"));
        }

        Ok(Self {
            experiment,
            geometry,
            polarizations,
            modes,
            modes_given,
            frames,
            thetas,
            phis,
            zs,
            quadrature,
            grid_size,
            grid_extent,
            verify,
            out,
        })
    }
}
