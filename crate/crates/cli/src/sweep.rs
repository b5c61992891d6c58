//! Figure sweeps: each sweep id maps to a fixed set of series evaluated on a
//! grid, emitted as long-format CSV rows (sweep_id, x_name, x_value, series,
//! value, seed).

use std::io::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use qem_core::basis::BasisSet;
use qem_core::bounds::{
    bound_pair, depolarizing_sof, depolarizing_sof_printed,
};
use qem_core::channel::{
    amplitude_damping, calibrate_to_ggep, depolarizing, over_rotation, tensor, CalibratedModel,
    PTMChannel,
};
use qem_core::coded::{
    best_scheme, qedc_gate_analysis, ConcatModel, QedcConfig, QedcGateSpec,
};
use qem_core::qp::{quasi_probability, reduced_pauli_qp, sof};
use qem_core::random::random_pauli_eta;
use qem_core::twirl::{imperfect_twirl, pauli_twirl, TwirlConfig, TwirlKind};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::{config_hash, fmt, open_out, read_json, CliError, VERSION};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepId {
    Fig9a,
    Fig9b,
    Fig10,
    Fig12,
    Fig13,
    Fig14,
    PauliScatter,
}

impl SweepId {
    fn name(self) -> &'static str {
        match self {
            SweepId::Fig9a => "fig9a",
            SweepId::Fig9b => "fig9b",
            SweepId::Fig10 => "fig10",
            SweepId::Fig12 => "fig12",
            SweepId::Fig13 => "fig13",
            SweepId::Fig14 => "fig14",
            SweepId::PauliScatter => "pauli-scatter",
        }
    }

    fn x_name(self) -> &'static str {
        match self {
            SweepId::Fig12 => "n_gates",
            SweepId::Fig13 | SweepId::Fig14 => "eps2",
            _ => "ggep",
        }
    }

    fn default_grid(self) -> GridSpec {
        match self {
            SweepId::Fig12 => GridSpec {
                scale: GridScale::Log,
                min: 1e1,
                max: 1e12,
                points: 45,
            },
            SweepId::Fig13 | SweepId::Fig14 => GridSpec {
                scale: GridScale::Log,
                min: 1e-3,
                max: 3e-2,
                points: 20,
            },
            _ => GridSpec {
                scale: GridScale::Log,
                min: 1e-4,
                max: 0.1,
                points: 20,
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Log,
    Linear,
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub scale: GridScale,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.points < 2 {
            return Err(CliError::Config("grid needs at least 2 points".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(CliError::Config("grid needs finite min < max".into()));
        }
        let step = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| match self.scale {
                GridScale::Log => step(self.min.ln(), self.max.ln(), i).exp(),
                GridScale::Linear => step(self.min, self.max, i),
            })
            .collect())
    }
}

/// Sweep settings as read from a config file; absent fields fall back to the
/// per-sweep defaults, command-line flags override both.
#[derive(Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sweep_id: SweepId,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Random channels per grid point (scatter sweep only).
    #[serde(default)]
    pub samples_per_point: Option<usize>,
    /// Also emit the uncorrected depolarizing closed form as its own series.
    #[serde(default)]
    pub printed_form: Option<bool>,
}

#[derive(clap::Args)]
pub struct SweepArgs {
    /// Which figure sweep to run; defaults to the one named in --config.
    #[arg(value_enum)]
    id: Option<SweepId>,
    /// Sweep config JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    /// Random channels per grid point (scatter sweep only).
    #[arg(long)]
    samples: Option<usize>,
    /// Also emit the uncorrected depolarizing closed form as its own series.
    #[arg(long)]
    printed_form: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Resolved {
    id: SweepId,
    grid: GridSpec,
    seed: u64,
    samples_per_point: usize,
    printed_form: bool,
}

impl Resolved {
    fn canonical(&self) -> String {
        let cfg = SweepConfig {
            sweep_id: self.id,
            grid: Some(self.grid),
            seed: Some(self.seed),
            samples_per_point: Some(self.samples_per_point),
            printed_form: Some(self.printed_form),
        };
        serde_json::to_string(&cfg).expect("sweep config serializes")
    }
}

fn resolve(args: &SweepArgs) -> Result<Resolved, CliError> {
    let file: Option<SweepConfig> = match &args.config {
        Some(path) => Some(read_json(path)?),
        None => None,
    };
    let id = match (args.id, file.as_ref().map(|c| c.sweep_id)) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(
                "sweep id on the command line disagrees with the config file".into(),
            ))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(CliError::Config("need a sweep id or --config".into())),
    };
    let mut grid = file
        .as_ref()
        .and_then(|c| c.grid)
        .unwrap_or_else(|| id.default_grid());
    if let Some(points) = args.points {
        grid.points = points;
    }
    Ok(Resolved {
        id,
        grid,
        seed: args
            .seed
            .or(file.as_ref().and_then(|c| c.seed))
            .unwrap_or(0),
        samples_per_point: args
            .samples
            .or(file.as_ref().and_then(|c| c.samples_per_point))
            .unwrap_or(50),
        printed_form: args.printed_form
            || file.as_ref().and_then(|c| c.printed_form).unwrap_or(false),
    })
}

struct Emitter<'a> {
    w: Box<dyn std::io::Write>,
    id: &'a str,
    x_name: &'a str,
    seed: u64,
}

impl Emitter<'_> {
    fn row(&mut self, x: f64, series: &str, value: f64) -> Result<(), CliError> {
        writeln!(
            self.w,
            "{},{},{},{},{},{}",
            self.id,
            self.x_name,
            fmt(x),
            series,
            fmt(value),
            self.seed
        )?;
        Ok(())
    }
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let r = resolve(&args)?;
    let grid = r.grid.values()?;
    let mut w = open_out(&args.out)?;
    writeln!(
        w,
        "# qem {VERSION} cmd=sweep sweep={} config_hash={}",
        r.id.name(),
        config_hash(&r.canonical())
    )?;
    writeln!(w, "sweep_id,x_name,x_value,series,value,seed")?;
    let mut e = Emitter {
        w,
        id: r.id.name(),
        x_name: r.id.x_name(),
        seed: r.seed,
    };
    match r.id {
        SweepId::Fig9a => sweep_fig9a(&mut e, &grid, r.printed_form),
        SweepId::Fig9b => sweep_fig9b(&mut e, &grid, r.printed_form),
        SweepId::Fig10 => sweep_fig10(&mut e, &grid),
        SweepId::Fig12 => sweep_fig12(&mut e, &grid),
        SweepId::Fig13 => sweep_qedc(&mut e, &grid, QedcGateSpec::transversal_cnot()),
        SweepId::Fig14 => sweep_qedc(&mut e, &grid, QedcGateSpec::swap_hadamards()),
        SweepId::PauliScatter => sweep_scatter(&mut e, &grid, r.seed, r.samples_per_point),
    }
}

fn full_basis_gamma(c: &PTMChannel, basis: &BasisSet) -> Result<f64, CliError> {
    Ok(sof(&quasi_probability(c, basis)?).gamma)
}

fn reduced_gamma(c: &PTMChannel) -> Result<f64, CliError> {
    Ok(sof(&reduced_pauli_qp(&c.to_eta()?)?).gamma)
}

/// Single-qubit overhead against error probability: analytic bounds, the
/// depolarizing closed form, and two coherent-noise channels on the full
/// operation basis.
fn sweep_fig9a(e: &mut Emitter<'_>, grid: &[f64], printed: bool) -> Result<(), CliError> {
    let basis = BasisSet::standard(1)?;
    for &eps in grid {
        let b = bound_pair(eps)?;
        e.row(eps, "lower_bound", b.lower)?;
        e.row(eps, "upper_bound", b.upper)?;
        e.row(eps, "depolarizing", depolarizing_sof(1, eps))?;
        if printed {
            e.row(eps, "depolarizing_printed", depolarizing_sof_printed(1, eps))?;
        }
        let delta = calibrate_to_ggep(CalibratedModel::AmplitudeDamping, eps)?;
        e.row(
            eps,
            "amplitude_damping",
            full_basis_gamma(&amplitude_damping(delta)?, &basis)?,
        )?;
        let phi = calibrate_to_ggep(CalibratedModel::OverRotation, eps)?;
        e.row(
            eps,
            "over_rotation",
            full_basis_gamma(&over_rotation(phi)?, &basis)?,
        )?;
    }
    Ok(())
}

/// Two-qubit overhead against error probability. Product channels split the
/// target error evenly per qubit: eps1 = 1 - sqrt(1 - eps).
fn sweep_fig9b(e: &mut Emitter<'_>, grid: &[f64], printed: bool) -> Result<(), CliError> {
    let basis = BasisSet::standard(2)?;
    for &eps in grid {
        let b = bound_pair(eps)?;
        e.row(eps, "lower_bound", b.lower)?;
        e.row(eps, "upper_bound", b.upper)?;
        e.row(eps, "depolarizing", depolarizing_sof(2, eps))?;
        if printed {
            e.row(eps, "depolarizing_printed", depolarizing_sof_printed(2, eps))?;
        }
        let eps1 = 1.0 - (1.0 - eps).sqrt();
        let dep1 = depolarizing(1, eps1)?;
        e.row(
            eps,
            "product_depolarizing",
            reduced_gamma(&tensor(&[dep1.clone(), dep1])?)?,
        )?;
        let delta = calibrate_to_ggep(CalibratedModel::AmplitudeDamping, eps1)?;
        let ad = amplitude_damping(delta)?;
        e.row(
            eps,
            "product_amplitude_damping",
            full_basis_gamma(&tensor(&[ad.clone(), ad])?, &basis)?,
        )?;
    }
    Ok(())
}

/// Twirling comparison: raw coherent channels against their ideal and
/// imperfect Pauli twirls, with the depolarizing overhead as the floor.
fn sweep_fig10(e: &mut Emitter<'_>, grid: &[f64]) -> Result<(), CliError> {
    let basis = BasisSet::standard(1)?;
    for &eps in grid {
        let cfg = TwirlConfig {
            kind: TwirlKind::Pauli,
            gate_noise_ggep: eps / 10.0,
        };
        let delta = calibrate_to_ggep(CalibratedModel::AmplitudeDamping, eps)?;
        let ad = amplitude_damping(delta)?;
        e.row(eps, "amplitude_damping", full_basis_gamma(&ad, &basis)?)?;
        e.row(
            eps,
            "pauli_twirl_amplitude_damping",
            reduced_gamma(&pauli_twirl(&ad)?)?,
        )?;
        e.row(
            eps,
            "imperfect_twirl_amplitude_damping",
            reduced_gamma(&imperfect_twirl(&ad, &cfg)?)?,
        )?;
        let phi = calibrate_to_ggep(CalibratedModel::OverRotation, eps)?;
        let rot = over_rotation(phi)?;
        e.row(eps, "over_rotation", full_basis_gamma(&rot, &basis)?)?;
        e.row(
            eps,
            "pauli_twirl_over_rotation",
            reduced_gamma(&pauli_twirl(&rot)?)?,
        )?;
        e.row(
            eps,
            "imperfect_twirl_over_rotation",
            reduced_gamma(&imperfect_twirl(&rot, &cfg)?)?,
        )?;
        e.row(eps, "depolarizing", depolarizing_sof(1, eps))?;
    }
    Ok(())
}

/// Best concatenation depth as a function of circuit size, one series per
/// physical error rate.
fn sweep_fig12(e: &mut Emitter<'_>, grid: &[f64]) -> Result<(), CliError> {
    let model = ConcatModel::steane();
    let eps_list = [("eps=1e-4", 1e-4), ("eps=3e-4", 3e-4), ("eps=1e-3", 1e-3)];
    for &n_gates in grid {
        for (series, eps) in eps_list {
            let best = best_scheme(&model, eps, n_gates, 4);
            e.row(n_gates, series, best.stage as f64)?;
        }
    }
    Ok(())
}

/// Detection-code gate analysis against the two-qubit gate error, with
/// single-qubit errors at a tenth of that.
fn sweep_qedc(e: &mut Emitter<'_>, grid: &[f64], spec: QedcGateSpec) -> Result<(), CliError> {
    let cfg = QedcConfig::default();
    for &eps2 in grid {
        let a = qedc_gate_analysis(&spec, eps2 / 10.0, eps2, &cfg)?;
        e.row(eps2, "gamma_qedc", a.gamma_qedc)?;
        e.row(eps2, "gamma_qem_post", a.gamma_qem_post)?;
        e.row(eps2, "gamma_total", a.gamma_total)?;
        e.row(eps2, "gamma_pure_qem", a.gamma_pure_qem)?;
    }
    Ok(())
}

/// Random single-qubit channels at each error level, bracketed by
/// the analytic bounds.
fn sweep_scatter(
    e: &mut Emitter<'_>,
    grid: &[f64],
    seed: u64,
    samples: usize,
) -> Result<(), CliError> {
    for (i, &eps) in grid.iter().enumerate() {
        let b = bound_pair(eps)?;
        e.row(eps, "lower_bound", b.lower)?;
        e.row(eps, "upper_bound", b.upper)?;
        let mut rng =
            StdRng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        for _ in 0..samples {
            let eta = random_pauli_eta(1, eps, &mut rng);
            e.row(eps, "sample", sof(&reduced_pauli_qp(&eta)?).gamma)?;
        }
    }
    Ok(())
}
