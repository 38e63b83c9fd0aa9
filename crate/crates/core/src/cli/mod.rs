//! The `hawkes` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 fit did not converge under `--strict`.

pub mod io;
pub mod trace;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::estimate::{fit_mle, FitConfig};
use crate::gof::{brownian_path, goodness_of_fit, GofOptions};
use crate::intensity::{EventSequence, HawkesModel, MultivariateHawkesModel};
use crate::rng;
use crate::simulate::{multivariate_by_thinning_with, simulate, Algorithm, ClusterDepth, SimulationConfig};
use crate::spectral::{
    covariance_density, empirical_covariance_density, power_spectral_density, stationary_burn_in,
    EmpiricalCovarianceOptions,
};
use io::{format_number, read_event_sequence, read_multivariate, write_multivariate, write_times};
pub use trace::{intensity_trace, RowKind, TraceRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hawkes", version, about = "Simulate, fit and diagnose Hawkes processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a realisation and write its arrival times.
    Simulate(SimulateArgs),
    /// Maximum likelihood fit of the exponential-kernel model.
    Fit(FitArgs),
    /// Residual analysis and Poissonity tests under a given model.
    Gof(GofArgs),
    /// Covariance density and power spectral density tables.
    Spectrum(SpectrumArgs),
    /// Intensity and compensator along a grid and at every arrival.
    Intensity(IntensityArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Thinning,
    Cluster,
    Inversion,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Thinning => Algorithm::Thinning,
            AlgoArg::Cluster => Algorithm::Cluster,
            AlgoArg::Inversion => Algorithm::Inversion,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "thinning")]
    algo: AlgoArg,
    /// Model as inline JSON or a path to a JSON file.
    #[arg(long)]
    params: String,
    #[arg(long)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent seeded runs; prints count statistics instead of times.
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    /// Thinning bound offset.
    #[arg(long, default_value_t = 1e-10)]
    epsilon: f64,
    /// Cluster method: expand only the first generation of offspring.
    #[arg(long)]
    first_generation: bool,
    /// Write here instead of stdout, plus a `<path>.json` sidecar with the horizon.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    events: PathBuf,
    /// Observation end; defaults to the sidecar, then to the last event.
    #[arg(long)]
    horizon: Option<f64>,
    /// Extra start point as inline JSON or a path.
    #[arg(long)]
    init: Option<String>,
    /// Exit with code 3 when the optimiser did not converge.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct GofArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    params: String,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Apply Durbin's modification in the Lewis test.
    #[arg(long)]
    durbin: bool,
    #[arg(long)]
    emit_qq: Option<PathBuf>,
    #[arg(long)]
    emit_autocorr: Option<PathBuf>,
    #[arg(long)]
    emit_bm_path: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 50.0)]
    max_lag: f64,
    #[arg(long, default_value_t = 0.5)]
    lag_step: f64,
    #[arg(long, default_value_t = 10.0)]
    max_omega: f64,
    #[arg(long, default_value_t = 0.1)]
    omega_step: f64,
    /// Add binned estimates with standard errors to the covariance table.
    #[arg(long)]
    empirical: bool,
    /// Path to estimate from; simulated by thinning when absent.
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    bin_width: f64,
    /// Defaults to ten relaxation times.
    #[arg(long)]
    burn_in: Option<f64>,
    #[arg(long, default_value_t = 1e5)]
    sim_horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write covariance.csv and psd.csv here instead of stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct IntensityArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    params: String,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

type CmdResult = Result<i32, Failure>;

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

/// Parses `argv` (program name first) and executes the subcommand.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout, stderr),
        Command::Gof(a) => cmd_gof(a, stdout),
        Command::Spectrum(a) => cmd_spectrum(a, stdout),
        Command::Intensity(a) => cmd_intensity(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn load_json(arg: &str) -> Result<serde_json::Value, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Data(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Data(format!("invalid JSON parameters: {e}")))
}

enum ModelSpec {
    Univariate(HawkesModel),
    Multivariate(MultivariateHawkesModel),
}

fn load_model_spec(arg: &str) -> Result<ModelSpec, Failure> {
    let value = load_json(arg)?;
    if value.get("baselines").is_some() {
        serde_json::from_value(value).map(ModelSpec::Multivariate).map_err(data)
    } else {
        serde_json::from_value(value).map(ModelSpec::Univariate).map_err(data)
    }
}

fn load_model(arg: &str) -> Result<HawkesModel, Failure> {
    match load_model_spec(arg)? {
        ModelSpec::Univariate(m) => Ok(m),
        ModelSpec::Multivariate(_) => {
            Err(Failure::Data("this subcommand needs a univariate model".into()))
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn sidecar_horizon(path: &Path) -> Result<Option<f64>, Failure> {
    let side = sidecar_path(path);
    if !side.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&side).map_err(data)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(data)?;
    Ok(value.get("horizon").and_then(|h| h.as_f64()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_events(path: &Path, horizon: Option<f64>) -> Result<EventSequence, Failure> {
    let horizon = match horizon {
        Some(h) => Some(h),
        None => sidecar_horizon(path)?,
    };
    let text = read_text(path)?;
    read_event_sequence(&text, horizon).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(data),
        None => stdout.write_all(text.as_bytes()).map_err(data),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn pairs_csv(header: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for &(a, b) in points {
        out.push_str(&format!("{},{}\n", format_number(a), format_number(b)));
    }
    out
}

fn cmd_simulate(a: SimulateArgs, stdout: &mut dyn Write) -> CmdResult {
    if !(a.horizon.is_finite() && a.horizon >= 0.0) {
        return Err(Failure::Usage(format!("--horizon must be finite and >= 0, got {}", a.horizon)));
    }
    if a.replicates == 0 {
        return Err(Failure::Usage("--replicates must be at least 1".into()));
    }
    let spec = load_model_spec(&a.params)?;
    let config = SimulationConfig {
        epsilon: a.epsilon,
        cluster_depth: if a.first_generation { ClusterDepth::FirstGeneration } else { ClusterDepth::Recursive },
        ..SimulationConfig::default()
    };
    let algorithm = Algorithm::from(a.algo);

    if let ModelSpec::Multivariate(model) = &spec {
        if algorithm != Algorithm::Thinning {
            return Err(Failure::Usage("multivariate models are simulated by thinning only".into()));
        }
        if a.replicates > 1 {
            let counts: Vec<Vec<usize>> = (0..a.replicates)
                .map(|i| {
                    multivariate_by_thinning_with(a.horizon, model, &mut rng::replicate(a.seed, i), &config)
                        .map(|s| s.iter().map(EventSequence::len).collect())
                })
                .collect::<crate::Result<_>>()
                .map_err(data)?;
            let text = match a.format {
                Format::Json => to_json(&json!({ "replicates": a.replicates, "counts": counts })),
                Format::Csv => {
                    let mut out = String::from("replicate,component,count\n");
                    for (i, row) in counts.iter().enumerate() {
                        for (c, n) in row.iter().enumerate() {
                            out.push_str(&format!("{i},{c},{n}\n"));
                        }
                    }
                    out
                }
            };
            emit(&a.output, &text, stdout)?;
            return Ok(EXIT_OK);
        }
        let streams =
            multivariate_by_thinning_with(a.horizon, model, &mut rng::seeded(a.seed), &config).map_err(data)?;
        let text = match a.format {
            Format::Csv => write_multivariate(&streams),
            Format::Json => to_json(&json!({
                "horizon": a.horizon,
                "components": streams.iter().map(|s| s.times()).collect::<Vec<_>>(),
            })),
        };
        emit(&a.output, &text, stdout)?;
        write_sidecar(&a, algorithm, &json!(model))?;
        return Ok(EXIT_OK);
    }

    let ModelSpec::Univariate(model) = spec else { unreachable!() };
    if a.replicates > 1 {
        let counts: Vec<usize> = (0..a.replicates)
            .map(|i| simulate(algorithm, a.horizon, &model, &mut rng::replicate(a.seed, i), &config).map(|e| e.len()))
            .collect::<crate::Result<_>>()
            .map_err(data)?;
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<usize>() as f64 / n;
        let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let text = match a.format {
            Format::Json => to_json(&json!({
                "algo": algorithm.as_str(),
                "replicates": a.replicates,
                "mean_count": mean,
                "var_count": var,
                "counts": counts,
            })),
            Format::Csv => {
                let mut out = format!(
                    "# replicates={} mean_count={} var_count={}\nreplicate,count\n",
                    a.replicates,
                    format_number(mean),
                    format_number(var)
                );
                for (i, c) in counts.iter().enumerate() {
                    out.push_str(&format!("{i},{c}\n"));
                }
                out
            }
        };
        emit(&a.output, &text, stdout)?;
        return Ok(EXIT_OK);
    }

    let events = simulate(algorithm, a.horizon, &model, &mut rng::seeded(a.seed), &config).map_err(data)?;
    let text = match a.format {
        Format::Csv => write_times(events.times()),
        Format::Json => to_json(&events),
    };
    emit(&a.output, &text, stdout)?;
    write_sidecar(&a, algorithm, &json!(model))?;
    Ok(EXIT_OK)
}

fn write_sidecar(a: &SimulateArgs, algorithm: Algorithm, params: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = &a.output {
        let meta = json!({
            "horizon": a.horizon,
            "algo": algorithm.as_str(),
            "seed": a.seed,
            "params": params,
        });
        fs::write(sidecar_path(path), to_json(&meta)).map_err(data)?;
    }
    Ok(())
}

fn cmd_fit(a: FitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let events = load_events(&a.events, a.horizon)?;
    let init = a.init.as_deref().map(load_model).transpose()?;
    let fit = fit_mle(&events, init.as_ref(), &FitConfig::default()).map_err(data)?;
    let summary = fit.summary();
    let text = match a.format {
        Format::Json => to_json(&summary),
        Format::Csv => format!(
            "lambda,alpha,beta,loglik,branching_ratio,converged\n{},{},{},{},{},{}\n",
            format_number(summary.lambda),
            format_number(summary.alpha),
            format_number(summary.beta),
            format_number(summary.loglik),
            format_number(summary.branching_ratio),
            summary.converged
        ),
    };
    emit(&a.output, &text, stdout)?;
    if a.strict && !fit.converged {
        let _ = writeln!(stderr, "error: optimiser did not converge");
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(EXIT_OK)
}

fn cmd_gof(a: GofArgs, stdout: &mut dyn Write) -> CmdResult {
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(Failure::Usage(format!("--level must be in (0, 1), got {}", a.level)));
    }
    let events = load_events(&a.events, a.horizon)?;
    let model = load_model(&a.params)?;
    let options = GofOptions { level: a.level, durbin: a.durbin };
    let report = goodness_of_fit(&model, &events, &options).map_err(data)?;

    if let Some(path) = &a.emit_qq {
        fs::write(path, pairs_csv("empirical,theoretical", &report.qq_points)).map_err(data)?;
    }
    if let Some(path) = &a.emit_autocorr {
        fs::write(path, pairs_csv("u_k,u_k1", &report.autocorr_points)).map_err(data)?;
    }
    if let Some(path) = &a.emit_bm_path {
        let transformed = crate::gof::residual_transform(&model, &events).map_err(data)?;
        fs::write(path, pairs_csv("s,m", &brownian_path(&transformed))).map_err(data)?;
    }

    let text = match a.format {
        Format::Json => {
            // Point sets go to the --emit-* files; keep the report compact.
            let mut value = serde_json::to_value(&report).map_err(data)?;
            if let Some(obj) = value.as_object_mut() {
                obj.remove("qq_points");
                obj.remove("autocorr_points");
            }
            to_json(&value)
        }
        Format::Csv => {
            let mut out = String::from("test,statistic,p_value,accepted\n");
            out.push_str(&format!(
                "ks_exp,{},{},{}\n",
                format_number(report.ks_exp.statistic),
                format_number(report.ks_exp.p_value),
                report.ks_exp.accepted
            ));
            out.push_str(&format!(
                "lewis,{},{},{}\n",
                format_number(report.lewis.statistic),
                format_number(report.lewis.p_value),
                report.lewis.accepted
            ));
            out.push_str(&format!("arcsine,{},,{}\n", format_number(report.arcsine.m_star), report.arcsine.accepted));
            out.push_str(&format!(
                "endpoint_normal,{},,{}\n",
                format_number(report.endpoint_normal.m1),
                report.endpoint_normal.accepted
            ));
            out.push_str(&format!(
                "lag1_serial_corr,{},,\n",
                report.lag1_serial_corr.map(format_number).unwrap_or_default()
            ));
            out
        }
    };
    emit(&a.output, &text, stdout)?;
    Ok(EXIT_OK)
}

fn grid(step: f64, max: f64, start: f64) -> Result<Vec<f64>, Failure> {
    if !(step > 0.0 && max >= start) {
        return Err(Failure::Usage(format!("invalid grid: step {step}, range [{start}, {max}]")));
    }
    let n = ((max - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn cmd_spectrum(a: SpectrumArgs, stdout: &mut dyn Write) -> CmdResult {
    let model = load_model(&a.params)?;
    let omegas = grid(a.omega_step, a.max_omega, 0.0)?;
    let psd: Vec<f64> = omegas.iter().map(|&w| power_spectral_density(&model, w)).collect::<crate::Result<_>>().map_err(data)?;

    let (lags, empirical) = if a.empirical {
        let events = match &a.events {
            Some(path) => load_events(path, a.horizon)?,
            None => simulate(Algorithm::Thinning, a.sim_horizon, &model, &mut rng::seeded(a.seed), &SimulationConfig::default())
                .map_err(data)?,
        };
        let burn_in = match a.burn_in {
            Some(b) => b,
            None => stationary_burn_in(&model).map_err(data)?,
        };
        let est = empirical_covariance_density(
            &events,
            a.bin_width,
            a.max_lag,
            &EmpiricalCovarianceOptions { burn_in, ..Default::default() },
        )
        .map_err(data)?;
        (est.lags.clone(), Some(est))
    } else {
        (grid(a.lag_step, a.max_lag, a.lag_step)?, None)
    };
    let cov: Vec<f64> = lags.iter().map(|&t| covariance_density(&model, t)).collect::<crate::Result<_>>().map_err(data)?;

    let (cov_text, psd_text) = match a.format {
        Format::Csv => {
            let mut c = String::from(if empirical.is_some() { "tau,R,R_empirical,R_se\n" } else { "tau,R\n" });
            for (i, (&t, &r)) in lags.iter().zip(&cov).enumerate() {
                c.push_str(&format!("{},{}", format_number(t), format_number(r)));
                if let Some(est) = &empirical {
                    c.push_str(&format!(
                        ",{},{}",
                        format_number(est.estimates[i]),
                        format_number(est.standard_errors[i])
                    ));
                }
                c.push('\n');
            }
            let mut s = String::from("omega,S\n");
            for (&w, &v) in omegas.iter().zip(&psd) {
                s.push_str(&format!("{},{}\n", format_number(w), format_number(v)));
            }
            (c, s)
        }
        Format::Json => {
            let mut c = json!({ "tau": lags, "R": cov });
            if let Some(est) = &empirical {
                c["R_empirical"] = json!(est.estimates);
                c["R_se"] = json!(est.standard_errors);
            }
            (to_json(&c), to_json(&json!({ "omega": omegas, "S": psd })))
        }
    };
    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(data)?;
            let ext = if a.format == Format::Csv { "csv" } else { "json" };
            fs::write(dir.join(format!("covariance.{ext}")), cov_text).map_err(data)?;
            fs::write(dir.join(format!("psd.{ext}")), psd_text).map_err(data)?;
        }
        None => {
            let text = match a.format {
                Format::Csv => format!("# covariance\n{cov_text}\n# psd\n{psd_text}"),
                Format::Json => {
                    let cov: serde_json::Value = serde_json::from_str(&cov_text).map_err(data)?;
                    let psd: serde_json::Value = serde_json::from_str(&psd_text).map_err(data)?;
                    to_json(&json!({ "covariance": cov, "psd": psd }))
                }
            };
            stdout.write_all(text.as_bytes()).map_err(data)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_intensity(a: IntensityArgs, stdout: &mut dyn Write) -> CmdResult {
    if !(a.step > 0.0) {
        return Err(Failure::Usage(format!("--step must be > 0, got {}", a.step)));
    }
    let text = match load_model_spec(&a.params)? {
        ModelSpec::Univariate(model) => {
            let events = load_events(&a.events, a.horizon)?;
            let rows = intensity_trace(&model, &events, a.step);
            match a.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut out = String::from("t,kind,intensity,compensator\n");
                    for r in rows {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            format_number(r.t),
                            r.kind.as_str(),
                            format_number(r.intensity),
                            format_number(r.compensator)
                        ));
                    }
                    out
                }
            }
        }
        ModelSpec::Multivariate(model) => {
            let horizon = match a.horizon {
                Some(h) => h,
                None => sidecar_horizon(&a.events)?
                    .ok_or_else(|| Failure::Data("multivariate events need --horizon".into()))?,
            };
            let text = read_text(&a.events)?;
            let streams = read_multivariate(&text, model.dim(), horizon)
                .map_err(|e| Failure::Data(format!("{}: {e}", a.events.display())))?;
            let ts = grid(a.step, horizon, 0.0)?;
            let mut rows = Vec::with_capacity(ts.len());
            for &t in &ts {
                let values: Vec<f64> = (0..model.dim())
                    .map(|i| model.intensity(&streams, i, t))
                    .collect::<crate::Result<_>>()
                    .map_err(data)?;
                rows.push((t, values));
            }
            match a.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let header: Vec<String> = (0..model.dim()).map(|i| format!("intensity_{i}")).collect();
                    let mut out = format!("t,{}\n", header.join(","));
                    for (t, values) in rows {
                        let cols: Vec<String> = values.into_iter().map(format_number).collect();
                        out.push_str(&format!("{},{}\n", format_number(t), cols.join(",")));
                    }
                    out
                }
            }
        }
    };
    emit(&a.output, &text, stdout)?;
    Ok(EXIT_OK)
}
