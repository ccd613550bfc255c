//! Run configuration: a flat TOML file whose keys double as command-line
//! flags. Flags win over the file, the file wins over the preset.

use std::path::{Path, PathBuf};

use clap::Args;
use entlat_core::ensemble::{DEFAULT_J_GRID, DEFAULT_SEED};
use entlat_core::propagator::DEFAULT_DENSE_CAP;
use entlat_core::{
    EnsembleConfig, Evolution, FitWindows, GridSpec, InitialKind, KrylovOptions, ModelParams, PropagatorKind,
    TcMode,
};
use serde::{Deserialize, Serialize};

/// A configuration problem, optionally pinned to a line of the file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: Option<PathBuf>,
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.file, self.line) {
            (Some(p), Some(l)) => write!(f, "{}:{}: {}", p.display(), l, self.message),
            (Some(p), None) => write!(f, "{}: {}", p.display(), self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Every configuration key. Field names are the TOML keys and the long flag
/// names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// fig1 | fig2 | fig3 | fig4 | custom
    #[arg(long = "preset")]
    pub preset: Option<String>,
    /// Number of qubits (single value).
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Qubit counts to scan.
    #[arg(long = "n_values", value_delimiter = ',')]
    pub n_values: Option<Vec<usize>>,
    /// Realizations per entry of n_values.
    #[arg(long = "n_realizations_per_n", value_delimiter = ',')]
    pub n_realizations_per_n: Option<Vec<usize>>,
    #[arg(long = "gamma")]
    pub gamma: Option<f64>,
    #[arg(long = "gammas", value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
    /// Disorder width of the on-site offsets.
    #[arg(long = "delta")]
    pub delta: Option<f64>,
    /// Mean level spacing.
    #[arg(long = "delta0")]
    pub delta0: Option<f64>,
    /// Coupling strength (single value).
    #[arg(long = "j")]
    pub j: Option<f64>,
    #[arg(long = "j_values", value_delimiter = ',')]
    pub j_values: Option<Vec<f64>>,
    /// Lattice rows; columns follow from n.
    #[arg(long = "rows")]
    pub rows: Option<usize>,
    /// bell | separable
    #[arg(long = "initial")]
    pub initial: Option<String>,
    #[arg(long = "n_realizations")]
    pub n_realizations: Option<usize>,
    /// Master seed.
    #[arg(long = "seed")]
    pub seed: Option<u64>,
    /// Fixed horizon; omitted means the automatic grid.
    #[arg(long = "t_max")]
    pub t_max: Option<f64>,
    #[arg(long = "samples")]
    pub samples: Option<usize>,
    /// sector | full
    #[arg(long = "evolution")]
    pub evolution: Option<String>,
    /// auto | exact | krylov
    #[arg(long = "propagator")]
    pub propagator: Option<String>,
    #[arg(long = "krylov_order")]
    pub krylov_order: Option<usize>,
    #[arg(long = "dense_cap")]
    pub dense_cap: Option<usize>,
    #[arg(long = "stability_check")]
    pub stability_check: Option<bool>,
    /// averaged_curve | per_realization
    #[arg(long = "tc_mode")]
    pub tc_mode: Option<String>,
    #[arg(long = "fgr_window", value_delimiter = ',')]
    pub fgr_window: Option<Vec<f64>>,
    #[arg(long = "ergodic_window", value_delimiter = ',')]
    pub ergodic_window: Option<Vec<f64>>,
    #[arg(long = "crossover_window", value_delimiter = ',')]
    pub crossover_window: Option<Vec<f64>>,
    #[arg(long = "perturbative_window", value_delimiter = ',')]
    pub perturbative_window: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: ENTLAT_WORKERS, then all cores).
    #[arg(long = "workers")]
    pub workers: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Settings {
    /// `top` wins wherever it sets a key.
    pub fn overlay(self, top: Settings) -> Settings {
        overlay!(
            self, top, preset, n, n_values, n_realizations_per_n, gamma, gammas, delta, delta0, j, j_values, rows,
            initial, n_realizations, seed, t_max, samples, evolution, propagator, krylov_order, dense_cap,
            stability_check, tc_mode, fgr_window, ergodic_window, crossover_window, perturbative_window, out, workers
        )
    }

    fn is_empty(&self) -> bool {
        *self == Settings::default()
    }
}

/// Settings read from a file, with the text kept for line lookups.
pub struct Source {
    pub path: PathBuf,
    text: String,
}

impl Source {
    fn line_of(&self, key: &str) -> Option<usize> {
        self.text.lines().position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|k| k + 1)
    }

    fn line_at(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }
}

pub fn load(path: &Path) -> Result<(Settings, Source), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        file: Some(path.to_path_buf()),
        line: None,
        message: format!("cannot read: {e}"),
    })?;
    let source = Source { path: path.to_path_buf(), text };
    let settings: Settings = toml::from_str(&source.text).map_err(|e| ConfigError {
        file: Some(path.to_path_buf()),
        line: Some(e.span().map_or(1, |s| source.line_at(s.start))),
        message: e.message().trim().to_string(),
    })?;
    Ok((settings, source))
}

/// Everything `run` needs, validated.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub preset: String,
    pub base: EnsembleConfig,
    pub n_values: Vec<usize>,
    pub n_realizations: Vec<usize>,
    pub gammas: Vec<f64>,
    pub j_values: Vec<f64>,
    pub tc_mode: TcMode,
    pub windows: FitWindows,
    pub out: PathBuf,
}

impl RunPlan {
    /// The resolved plan as a self-contained configuration. Feeding it back
    /// to `run` reproduces the same outputs.
    pub fn echo(&self) -> Settings {
        let b = &self.base;
        let (t_max, samples) = match &b.grid {
            GridSpec::Uniform { t_max, samples } => (Some(*t_max), Some(*samples)),
            _ => (None, None),
        };
        let pair = |w: Option<(f64, f64)>| w.map(|(a, b)| vec![a, b]);
        Settings {
            preset: Some("custom".into()),
            n_values: Some(self.n_values.clone()),
            n_realizations_per_n: Some(self.n_realizations.clone()),
            gammas: Some(self.gammas.clone()),
            delta: Some(b.params.delta),
            delta0: Some(b.params.delta0),
            j_values: Some(self.j_values.clone()),
            rows: Some(b.params.rows),
            initial: Some(match b.initial {
                InitialKind::Bell => "bell",
                InitialKind::Separable => "separable",
            }
            .into()),
            seed: Some(b.master_seed),
            t_max,
            samples,
            evolution: Some(match b.evolution {
                Evolution::Sector => "sector",
                Evolution::Full => "full",
            }
            .into()),
            propagator: Some(match b.propagator {
                PropagatorKind::Auto => "auto",
                PropagatorKind::Exact => "exact",
                PropagatorKind::Krylov => "krylov",
            }
            .into()),
            krylov_order: Some(b.krylov.order),
            dense_cap: Some(b.dense_cap),
            stability_check: Some(b.stability_check),
            tc_mode: Some(match self.tc_mode {
                TcMode::AveragedCurve => "averaged_curve",
                TcMode::PerRealization => "per_realization",
            }
            .into()),
            fgr_window: pair(self.windows.fgr),
            ergodic_window: pair(self.windows.ergodic),
            crossover_window: pair(self.windows.crossover),
            perturbative_window: pair(self.windows.perturbative),
            ..Settings::default()
        }
    }
}

/// Preset defaults.
fn preset_defaults(name: &str) -> Option<Settings> {
    let fig1 = Settings {
        n_values: Some(vec![4, 6, 8, 10, 12, 14]),
        n_realizations_per_n: Some(vec![50, 50, 50, 50, 30, 20]),
        gammas: Some(vec![1.0]),
        delta: Some(0.2),
        initial: Some("bell".into()),
        j_values: Some(DEFAULT_J_GRID.to_vec()),
        ..Settings::default()
    };
    match name {
        "custom" => Some(Settings::default()),
        "fig1" | "fig2" => Some(fig1),
        "fig3" => Some(Settings {
            n_values: Some(vec![10]),
            n_realizations: Some(50),
            gammas: Some(vec![1.0, 0.0]),
            delta: Some(0.2),
            initial: Some("separable".into()),
            j_values: Some(vec![1e-4, 2e-4, 1e-3, 2e-3, 1e-2, 2e-2, 1e-1, 2e-1]),
            ..Settings::default()
        }),
        "fig4" => Some(Settings {
            gammas: Some(vec![0.0, 1.0]),
            initial: Some("separable".into()),
            ..fig1
        }),
        _ => None,
    }
}

struct Ctx<'a> {
    file: Option<&'a Source>,
    cli: &'a Settings,
}

impl Ctx<'_> {
    /// Error anchored at `key`: the flag if it came from the command line,
    /// otherwise the line of the file that sets it.
    fn err(&self, key: &str, message: String) -> ConfigError {
        let from_flag = flag_set(self.cli, key);
        match self.file {
            Some(src) if !from_flag => ConfigError { file: Some(src.path.clone()), line: src.line_of(key), message },
            _ if from_flag => ConfigError { file: None, line: None, message: format!("--{key}: {message}") },
            _ => ConfigError { file: None, line: None, message },
        }
    }
}

fn flag_set(s: &Settings, key: &str) -> bool {
    match key {
        "preset" => s.preset.is_some(),
        "n" => s.n.is_some(),
        "n_values" => s.n_values.is_some(),
        "n_realizations_per_n" => s.n_realizations_per_n.is_some(),
        "gamma" => s.gamma.is_some(),
        "gammas" => s.gammas.is_some(),
        "delta" => s.delta.is_some(),
        "delta0" => s.delta0.is_some(),
        "j" => s.j.is_some(),
        "j_values" => s.j_values.is_some(),
        "rows" => s.rows.is_some(),
        "initial" => s.initial.is_some(),
        "n_realizations" => s.n_realizations.is_some(),
        "t_max" => s.t_max.is_some(),
        "samples" => s.samples.is_some(),
        "evolution" => s.evolution.is_some(),
        "propagator" => s.propagator.is_some(),
        "krylov_order" => s.krylov_order.is_some(),
        "tc_mode" => s.tc_mode.is_some(),
        "fgr_window" => s.fgr_window.is_some(),
        "ergodic_window" => s.ergodic_window.is_some(),
        "crossover_window" => s.crossover_window.is_some(),
        "perturbative_window" => s.perturbative_window.is_some(),
        "seed" => s.seed.is_some(),
        "dense_cap" => s.dense_cap.is_some(),
        "stability_check" => s.stability_check.is_some(),
        "out" => s.out.is_some(),
        "workers" => s.workers.is_some(),
        _ => false,
    }
}

fn window(ctx: &Ctx, key: &str, w: &Option<Vec<f64>>) -> Result<Option<(f64, f64)>, ConfigError> {
    match w.as_deref() {
        None => Ok(None),
        Some(&[lo, hi]) if lo > 0.0 && hi >= lo => Ok(Some((lo, hi))),
        Some(_) => Err(ctx.err(key, "expected two positive values [lo, hi] with lo <= hi".into())),
    }
}

/// Combines file, flags, preset and environment into a plan.
pub fn resolve(
    file: Option<(Settings, Source)>,
    cli: Settings,
    env_workers: Option<String>,
) -> Result<RunPlan, ConfigError> {
    let (file_settings, source) = match file {
        Some((s, src)) => (s, Some(src)),
        None => (Settings::default(), None),
    };
    if file_settings.is_empty() && cli.is_empty() {
        return Err(ConfigError {
            file: source.as_ref().map(|s| s.path.clone()),
            line: source.as_ref().map(|_| 1),
            message: "configuration is empty; set `preset` or the model keys".into(),
        });
    }
    let ctx = Ctx { file: source.as_ref(), cli: &cli };
    let merged = file_settings.overlay(cli.clone());
    let preset = merged.preset.clone().unwrap_or_else(|| "custom".into());
    let defaults = preset_defaults(&preset)
        .ok_or_else(|| ctx.err("preset", format!("unknown preset `{preset}` (fig1, fig2, fig3, fig4, custom)")))?;
    let user = merged.clone();
    let s = defaults.clone().overlay(merged);

    let n_values = axis(&user.n_values, user.n, &defaults.n_values, defaults.n)
        .ok_or_else(|| ctx.err("n", "missing `n` (or `n_values`)".into()))?;
    let gammas = axis(&user.gammas, user.gamma, &defaults.gammas, defaults.gamma).unwrap_or_else(|| vec![1.0]);
    let j_values = axis(&user.j_values, user.j, &defaults.j_values, defaults.j)
        .ok_or_else(|| ctx.err("j", "missing `j` (or `j_values`)".into()))?;
    if j_values.iter().any(|&j| !(j > 0.0)) || j_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ctx.err("j_values", "coupling values must be positive and strictly ascending".into()));
    }
    let n_realizations = match axis(&user.n_realizations_per_n, user.n_realizations, &None, None) {
        // preset counts are tied to qubit counts
        None => n_values
            .iter()
            .map(|n| {
                let paired = defaults.n_values.as_ref().zip(defaults.n_realizations_per_n.as_ref());
                paired
                    .and_then(|(ns, nrs)| ns.iter().position(|m| m == n).and_then(|k| nrs.get(k).copied()))
                    .unwrap_or(defaults.n_realizations.unwrap_or(50))
            })
            .collect(),
        Some(list) if list.len() == 1 => vec![list[0]; n_values.len()],
        Some(list) if list.len() != n_values.len() => {
            return Err(ctx.err(
                "n_realizations_per_n",
                format!("{} entries for {} qubit counts", list.len(), n_values.len()),
            ));
        }
        Some(list) => list,
    };
    if n_realizations.contains(&0) {
        return Err(ctx.err("n_realizations", "must be at least 1".into()));
    }
    let initial: InitialKind = s
        .initial
        .as_deref()
        .unwrap_or("bell")
        .parse()
        .map_err(|e: entlat_core::Error| ctx.err("initial", strip_prefix(e)))?;
    let evolution = match s.evolution.as_deref().unwrap_or("sector") {
        "sector" => Evolution::Sector,
        "full" => Evolution::Full,
        other => return Err(ctx.err("evolution", format!("unknown evolution `{other}` (sector, full)"))),
    };
    let propagator = match s.propagator.as_deref().unwrap_or("auto") {
        "auto" => PropagatorKind::Auto,
        "exact" => PropagatorKind::Exact,
        "krylov" => PropagatorKind::Krylov,
        other => return Err(ctx.err("propagator", format!("unknown propagator `{other}` (auto, exact, krylov)"))),
    };
    let tc_mode = match s.tc_mode.as_deref().unwrap_or("averaged_curve") {
        "averaged_curve" => TcMode::AveragedCurve,
        "per_realization" => TcMode::PerRealization,
        other => {
            return Err(ctx.err("tc_mode", format!("unknown tc_mode `{other}` (averaged_curve, per_realization)")))
        }
    };
    let grid = match (s.t_max, s.samples) {
        (None, None) => GridSpec::Auto,
        (Some(t), samples) if t > 0.0 => GridSpec::Uniform { t_max: t, samples: samples.unwrap_or(2000) },
        (Some(_), _) => return Err(ctx.err("t_max", "must be positive".into())),
        (None, Some(_)) => return Err(ctx.err("samples", "`samples` needs `t_max`".into())),
    };
    if let GridSpec::Uniform { samples, .. } = grid {
        if samples < 20 {
            return Err(ctx.err("samples", "need at least 20 samples".into()));
        }
    }
    let workers = match s.workers {
        Some(0) => return Err(ctx.err("workers", "must be at least 1".into())),
        Some(k) => Some(k),
        None => match env_workers.as_deref().map(str::trim).filter(|v| !v.is_empty()) {
            None => None,
            Some(v) => match v.parse::<usize>() {
                Ok(k) if k > 0 => Some(k),
                _ => {
                    return Err(ConfigError {
                        file: None,
                        line: None,
                        message: format!("ENTLAT_WORKERS: expected a positive integer, got `{v}`"),
                    })
                }
            },
        },
    };

    let rows = s.rows.unwrap_or(2);
    let delta = s.delta.unwrap_or(0.2);
    let mut params = ModelParams::new(n_values[0], gammas[0], delta, j_values[0]).with_shape(rows, n_values[0] / rows.max(1));
    params.delta0 = s.delta0.unwrap_or(1.0);
    let mut base = EnsembleConfig::new(params, initial, n_realizations[0], s.seed.unwrap_or(DEFAULT_SEED));
    base.grid = grid;
    base.evolution = evolution;
    base.propagator = propagator;
    base.krylov = KrylovOptions { order: s.krylov_order.unwrap_or(30), max_step: None };
    base.dense_cap = s.dense_cap.unwrap_or(DEFAULT_DENSE_CAP);
    base.stability_check = s.stability_check.unwrap_or(true);
    base.workers = workers;

    // validate every (n, γ) combination up front
    for &n in &n_values {
        if rows == 0 || n % rows != 0 {
            let key = if user.rows.is_some() {
                "rows"
            } else if user.n_values.is_some() {
                "n_values"
            } else {
                "n"
            };
            return Err(ctx.err(key, format!("{n} qubits do not fill {rows} rows")));
        }
        for &g in &gammas {
            let mut p = base.params.clone();
            p.n = n;
            p.cols = n / rows;
            p.gamma = g;
            p.validate().map_err(|e| {
                let msg = strip_prefix(e);
                let key = if msg.contains("gamma") {
                    if s.gammas.is_some() { "gammas" } else { "gamma" }
                } else if msg.contains("delta") {
                    "delta"
                } else if s.n_values.is_some() {
                    "n_values"
                } else {
                    "n"
                };
                ctx.err(key, msg)
            })?;
        }
    }
    if base.krylov.order < 4 {
        return Err(ctx.err("krylov_order", "must be at least 4".into()));
    }

    let windows = FitWindows {
        fgr: window(&ctx, "fgr_window", &s.fgr_window)?,
        ergodic: window(&ctx, "ergodic_window", &s.ergodic_window)?,
        crossover: window(&ctx, "crossover_window", &s.crossover_window)?,
        perturbative: window(&ctx, "perturbative_window", &s.perturbative_window)?,
    };
    Ok(RunPlan {
        preset,
        base,
        n_values,
        n_realizations,
        gammas,
        j_values,
        tc_mode,
        windows,
        out: s.out.clone().unwrap_or_else(|| PathBuf::from("entlat-out")),
    })
}

/// A scan axis: the user's list, else the user's scalar, else the preset's
/// list, else the preset's scalar.
fn axis<T: Clone>(user_list: &Option<Vec<T>>, user: Option<T>, preset_list: &Option<Vec<T>>, preset: Option<T>) -> Option<Vec<T>> {
    let nonempty = |l: &Option<Vec<T>>| l.clone().filter(|v| !v.is_empty());
    nonempty(user_list)
        .or_else(|| user.clone().map(|x| vec![x]))
        .or_else(|| nonempty(preset_list))
        .or_else(|| preset.map(|x| vec![x]))
}

fn strip_prefix(e: entlat_core::Error) -> String {
    match e {
        entlat_core::Error::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunPlan, ConfigError> {
        let source = Source { path: PathBuf::from("run.toml"), text: text.to_string() };
        let settings: Settings = toml::from_str(text).map_err(|e| ConfigError {
            file: Some(source.path.clone()),
            line: Some(e.span().map_or(1, |s| source.line_at(s.start))),
            message: e.message().to_string(),
        })?;
        resolve(Some((settings, source)), Settings::default(), None)
    }

    #[test]
    fn preset_fills_defaults() {
        let plan = parse("preset = \"fig2\"\n").unwrap();
        assert_eq!(plan.n_values, vec![4, 6, 8, 10, 12, 14]);
        assert_eq!(plan.n_realizations, vec![50, 50, 50, 50, 30, 20]);
        assert_eq!(plan.base.initial, InitialKind::Bell);
        let plan = parse("preset = \"fig3\"\n").unwrap();
        assert_eq!(plan.base.initial, InitialKind::Separable);
        assert_eq!(plan.j_values.len(), 8);
    }

    #[test]
    fn user_scalars_override_preset_lists() {
        let plan = parse("preset = \"fig1\"\nn_values = [4, 6]\nn_realizations = 3\n").unwrap();
        assert_eq!(plan.n_realizations, vec![3, 3]);
        let plan = parse("preset = \"fig2\"\nn = 8\nj = 0.01\n").unwrap();
        assert_eq!(plan.n_values, vec![8]);
        assert_eq!(plan.j_values, vec![0.01]);
        assert_eq!(plan.n_realizations, vec![50]);
    }

    #[test]
    fn errors_point_at_lines() {
        let e = parse("preset = \"custom\"\nj = 0.1\nn = 7\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse("n = 4\nj = 0.1\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
        let e = parse("n = 4\nj = 0.1\ninitial = \"ghz\"\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse("").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn flags_override_file() {
        let text = "n = 4\nj = 0.1\nseed = 5\n";
        let source = Source { path: PathBuf::from("run.toml"), text: text.into() };
        let settings: Settings = toml::from_str(text).unwrap();
        let cli = Settings { seed: Some(9), n: Some(6), ..Settings::default() };
        let plan = resolve(Some((settings, source)), cli, Some("2".into())).unwrap();
        assert_eq!(plan.base.master_seed, 9);
        assert_eq!(plan.n_values, vec![6]);
        assert_eq!(plan.base.workers, Some(2));
    }

    #[test]
    fn bad_env_workers() {
        let cli = Settings { n: Some(4), j: Some(0.1), ..Settings::default() };
        assert!(resolve(None, cli.clone(), Some("zero".into())).is_err());
        assert_eq!(resolve(None, cli, None).unwrap().base.workers, None);
    }
}
