//! Run configuration: a TOML file overlaid by command-line flags, then
//! resolved into concrete models, grids and contour settings.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};
use combcas::numerics::QuadratureSpec;
use combcas::{CombModel, ContourSpec, NodePotential};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bands,
    Casimir,
    FreeEnergy,
    Entropy,
    Pressure,
    Sweep,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// δδ′ nodes with couplings w0, w1.
    Ddp,
    /// Truncated Pöschl–Teller nodes of support eps.
    Pt,
    /// No node potential.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Band spectra, Casimir energy and Casimir thermodynamics of comb
/// backgrounds.
#[derive(Debug, Parser)]
#[command(name = "combcas", version)]
pub struct Cli {
    /// Command to run; may instead be given in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Lattice spacing.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w1: Option<f64>,
    /// Pöschl–Teller support.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Contour half-angle in radians, inside (0, pi/4) [default: pi/8].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-8].
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance [default: 1e-13].
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Gauss-Legendre nodes per theta piece [default: 64].
    #[arg(long)]
    pub theta_nodes: Option<usize>,
    /// Number of bands for `bands` [default: 3].
    #[arg(long)]
    pub n_bands: Option<usize>,
    /// Temperature.
    #[arg(long)]
    pub t: Option<f64>,
    /// Temperature range start:stop:count.
    #[arg(long)]
    pub t_sweep: Option<String>,
    /// Spacing range start:stop:count.
    #[arg(long)]
    pub a_sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w0_sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w1_sweep: Option<String>,
    #[arg(long)]
    pub eps_sweep: Option<String>,
    /// Add the zero-temperature pressure to `pressure` and `sweep`.
    #[arg(long)]
    pub include_vacuum: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: Option<ModelKind>,
    pub a: Option<f64>,
    pub w0: Option<f64>,
    pub w1: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSection {
    pub gamma: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub theta_nodes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub t: Option<String>,
    pub a: Option<String>,
    pub w0: Option<String>,
    pub w1: Option<String>,
    pub eps: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// The file layout; every field is optional so flags can fill gaps.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub t: Option<f64>,
    pub n_bands: Option<usize>,
    pub include_vacuum: Option<bool>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub contour: ContourSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// File values overridden by any flag that was given.
    pub fn overlay(mut self, command: Option<Command>, f: Flags) -> Self {
        fn set<T>(slot: &mut Option<T>, value: Option<T>) {
            if value.is_some() {
                *slot = value;
            }
        }
        set(&mut self.command, command);
        set(&mut self.t, f.t);
        set(&mut self.n_bands, f.n_bands);
        if f.include_vacuum {
            self.include_vacuum = Some(true);
        }
        set(&mut self.model.kind, f.model);
        set(&mut self.model.a, f.a);
        set(&mut self.model.w0, f.w0);
        set(&mut self.model.w1, f.w1);
        set(&mut self.model.eps, f.eps);
        set(&mut self.contour.gamma, f.gamma);
        set(&mut self.contour.rel_tol, f.rel_tol);
        set(&mut self.contour.abs_tol, f.abs_tol);
        set(&mut self.contour.theta_nodes, f.theta_nodes);
        set(&mut self.sweep.t, f.t_sweep);
        set(&mut self.sweep.a, f.a_sweep);
        set(&mut self.sweep.w0, f.w0_sweep);
        set(&mut self.sweep.w1, f.w1_sweep);
        set(&mut self.sweep.eps, f.eps_sweep);
        set(&mut self.output.path, f.output);
        set(&mut self.output.format, f.format);
        self
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let command = self
            .command
            .ok_or_else(|| CliError::Config("missing command (give it as an argument or `command = ...`)".into()))?;
        let kind = self
            .model
            .kind
            .ok_or_else(|| CliError::Config("missing model kind (`--model` or `[model] kind`)".into()))?;
        let a = self.model.a.unwrap_or(1.0);
        let w0 = self.model.w0.unwrap_or(0.0);
        let w1 = self.model.w1.unwrap_or(0.0);
        let eps = match (kind, self.model.eps) {
            (ModelKind::Pt, None) => return Err(CliError::Config("model.eps: required for the pt model".into())),
            (_, eps) => eps.unwrap_or(0.0),
        };
        let base = ModelPoint { kind, a, w0, w1, eps };

        let gamma = self.contour.gamma.unwrap_or(FRAC_PI_8);
        if !(gamma > 0.0 && gamma < FRAC_PI_4) {
            return Err(CliError::Config(format!("contour.gamma: must lie in (0, pi/4), got {gamma}")));
        }
        let quad = QuadratureSpec::new(
            self.contour.rel_tol.unwrap_or(1e-8),
            self.contour.abs_tol.unwrap_or(1e-13),
            4000,
        )
        .map_err(|e| CliError::Config(format!("contour: {e}")))?;
        let theta_nodes = self.contour.theta_nodes.unwrap_or(64);
        if theta_nodes < 2 {
            return Err(CliError::Config("contour.theta_nodes: must be at least 2".into()));
        }

        let axis = |name: &str, spec: &Option<String>, default: f64| -> Result<Vec<f64>, CliError> {
            match spec {
                Some(s) => parse_range(s).map_err(|e| CliError::Config(format!("sweep.{name}: {e}"))),
                None => Ok(vec![default]),
            }
        };
        let temperatures = match (&self.sweep.t, self.t) {
            (Some(s), _) => parse_range(s).map_err(|e| CliError::Config(format!("sweep.t: {e}")))?,
            (None, Some(t)) => vec![t],
            (None, None) => Vec::new(),
        };
        if temperatures.iter().any(|&t| !(t > 0.0)) {
            return Err(CliError::Config("t: temperatures must be positive".into()));
        }
        let needs_t = matches!(
            command,
            Command::FreeEnergy | Command::Entropy | Command::Pressure | Command::Sweep
        );
        if needs_t && temperatures.is_empty() {
            return Err(CliError::Config("t: give --t or --t-sweep".into()));
        }
        let points = cross(
            base,
            &axis("a", &self.sweep.a, a)?,
            &axis("w0", &self.sweep.w0, w0)?,
            &axis("w1", &self.sweep.w1, w1)?,
            &axis("eps", &self.sweep.eps, eps)?,
        );
        for p in &points {
            p.model()?;
            if matches!(command, Command::Bands | Command::Verify) && p.kind == ModelKind::Ddp && (p.w1.abs() - 1.0).abs() < 1e-14 {
                return Err(CliError::Config(format!(
                    "model.w1: |w1| = 1 makes the transmission amplitude vanish, so neighbouring cells \
                     decouple and the Bloch discriminant is undefined (got w1 = {})",
                    p.w1
                )));
            }
        }
        Ok(Resolved {
            command,
            points,
            temperatures,
            n_bands: self.n_bands.unwrap_or(3),
            include_vacuum: self.include_vacuum.unwrap_or(false),
            gamma,
            quad,
            theta_nodes,
            output: self.output.path.clone(),
            format: self.output.format.unwrap_or_default(),
        })
    }
}

/// One model parameter point of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelPoint {
    pub kind: ModelKind,
    pub a: f64,
    pub w0: f64,
    pub w1: f64,
    pub eps: f64,
}

impl ModelPoint {
    pub fn model(&self) -> Result<CombModel, CliError> {
        let potential = match self.kind {
            ModelKind::Ddp => NodePotential::DeltaDeltaPrime { w0: self.w0, w1: self.w1 },
            ModelKind::Free => NodePotential::DeltaDeltaPrime { w0: 0.0, w1: 0.0 },
            ModelKind::Pt => NodePotential::TruncatedPoschlTeller { eps: self.eps },
        };
        CombModel::new(self.a, potential).map_err(|e| CliError::Config(format!("model: {e}")))
    }
}

fn cross(base: ModelPoint, a: &[f64], w0: &[f64], w1: &[f64], eps: &[f64]) -> Vec<ModelPoint> {
    let mut out = Vec::new();
    for &a in a {
        for &w0 in w0 {
            for &w1 in w1 {
                for &eps in eps {
                    out.push(ModelPoint { a, w0, w1, eps, ..base });
                }
            }
        }
    }
    out
}

/// Fully specified run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub command: Command,
    pub points: Vec<ModelPoint>,
    pub temperatures: Vec<f64>,
    pub n_bands: usize,
    pub include_vacuum: bool,
    pub gamma: f64,
    pub quad: QuadratureSpec,
    pub theta_nodes: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Resolved {
    pub fn contour(&self, model: &CombModel) -> combcas::Result<ContourSpec> {
        Ok(ContourSpec {
            gamma_angle: self.gamma,
            quad: self.quad,
            theta_nodes: self.theta_nodes,
            ..ContourSpec::for_model(model)?
        })
    }
}

/// `start:stop:count`, inclusive and evenly spaced.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:count, got {s:?}"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let count: usize = parts[2].trim().parse().map_err(|e| format!("{:?}: {e}", parts[2]))?;
    if count == 0 {
        return Err("count must be at least 1".into());
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err("range ends must be finite".into());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|j| (start * (n - j as f64) + stop * j as f64) / n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("2:5:1").unwrap(), vec![2.0]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a:1:2").is_err());
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = RunConfig::from_toml("command = \"casimir\"\n[model]\nkind = \"ddp\"\nw0 = 10.0\n").unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.gamma, FRAC_PI_8);
        assert_eq!(r.quad.rel_tol, 1e-8);
        assert_eq!(r.theta_nodes, 64);
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.points[0].a, 1.0);
    }

    #[test]
    fn flags_override_file() {
        let cfg = RunConfig::from_toml("command = \"casimir\"\n[model]\nkind = \"ddp\"\na = 2.0\n").unwrap();
        let flags = Flags {
            a: Some(3.0),
            ..Flags::default()
        };
        let r = cfg.overlay(Some(Command::Bands), flags).resolve().unwrap();
        assert_eq!(r.command, Command::Bands);
        assert_eq!(r.points[0].a, 3.0);
    }

    #[test]
    fn unknown_field_is_located() {
        let err = RunConfig::from_toml("command = \"casimir\"\n[model]\nkind = \"ddp\"\nwo = 1.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("wo") && msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn opaque_nodes_rejected_for_bands() {
        let cfg = RunConfig::from_toml("command = \"bands\"\n[model]\nkind = \"ddp\"\nw1 = 1.0\n").unwrap();
        let msg = cfg.resolve().unwrap_err().to_string();
        assert!(msg.contains("transmission"), "{msg}");
    }

    #[test]
    fn support_wider_than_cell_rejected() {
        let cfg = RunConfig::from_toml("command = \"bands\"\n[model]\nkind = \"pt\"\na = 0.5\neps = 0.6\n").unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn gamma_outside_wedge_rejected() {
        let cfg = RunConfig::from_toml("command = \"casimir\"\n[model]\nkind = \"free\"\n[contour]\ngamma = 0.9\n").unwrap();
        assert!(cfg.resolve().unwrap_err().to_string().contains("gamma"));
    }
}
