//! Subcommand implementations. Each returns a [`Report`] and leaves rendering
//! to the caller.

use crate::output::{Cell, Record, Report, Table};
use schmidt_core::discretize::{build_grid, sample_state, shannon_mi_numeric};
use schmidt_core::epr_sim::{run_coincidence_experiment, SPECTRUM_TAIL};
use schmidt_core::gaussian_model::{analytic_mode, shannon_mi_gaussian, GaussianParams, GeometricSpectrum};
use schmidt_core::information::InfoReport;
use schmidt_core::schmidt::{decompose, SchmidtSpectrum};
use schmidt_core::state_file::read_state;
use schmidt_core::thermo::ThermoPoint;
use schmidt_core::{Error, LogBase, Result};
use std::path::{Path, PathBuf};

/// Gaussian state parameters shared by several subcommands.
#[derive(Clone, Copy, Debug, clap::Args)]
pub struct GaussianArgs {
    /// Correlation coefficient in (-1, 1).
    #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m1: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub m2: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
}

impl GaussianArgs {
    pub fn params(&self) -> Result<GaussianParams> {
        GaussianParams::new(self.m1, self.m2, self.sigma1, self.sigma2, self.rho)
    }
}

fn sampled_spectrum(params: &GaussianParams, n: usize, span: f64) -> Result<SchmidtSpectrum> {
    let grid = build_grid(params, n, span)?;
    decompose(&sample_state(|a, b| params.wavefunction(a, b), &grid)?)
}

/// Closed-form weights and `K` next to numeric values on several grids.
pub fn table1(g: &GaussianArgs, grids: &[usize], span: f64, count: usize) -> Result<Report> {
    if count == 0 {
        return Err(Error::Domain("row count must be positive".into()));
    }
    let params = g.params()?;
    let theory = params.spectrum();
    let numeric = grids.iter().map(|&n| sampled_spectrum(&params, n, span)).collect::<Result<Vec<_>>>()?;

    let mut columns = vec!["row".to_string(), "theory".to_string()];
    columns.extend(grids.iter().map(|n| format!("n{n}")));
    let mut table = Table::new(columns);
    // An uncorrelated state has a single nonzero weight.
    let rows = if theory.ratio() == 0.0 { 1 } else { count };
    for k in 0..rows {
        let mut row = vec![Cell::Text(format!("lambda{}", k + 1)), theory.weight(k).into()];
        row.extend(numeric.iter().map(|s| Cell::from(s.weights().get(k).copied())));
        table.push(row);
    }
    let mut row = vec![Cell::from("K"), theory.schmidt_number().into()];
    row.extend(numeric.iter().map(|s| Cell::from(s.schmidt_number())));
    table.push(row);
    Ok(Report::Table(table))
}

/// Sign of the inner product, used to align a numeric mode with its analytic
/// counterpart.
fn alignment(numeric: &[f64], analytic: &[f64]) -> f64 {
    let dot: f64 = numeric.iter().zip(analytic).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Analytic and numeric Schmidt modes on the grid midpoints of both axes.
pub fn modes(g: &GaussianArgs, n: usize, span: f64, count: usize) -> Result<Report> {
    let params = g.params()?;
    let spectrum = sampled_spectrum(&params, n, span)?;
    if count == 0 || count > spectrum.len() {
        return Err(Error::RankOutOfRange { requested: count, available: spectrum.len() });
    }
    let k_schmidt = params.schmidt_number();
    let mut columns = vec!["axis".to_string(), "j".to_string(), "x".to_string()];
    for k in 0..count {
        columns.push(format!("analytic{k}"));
        columns.push(format!("numeric{k}"));
    }
    let mut table = Table::new(columns);
    let grid = *spectrum.grid();
    let axes = [
        (1usize, grid.midpoints1(), params.m1(), params.sigma1()),
        (2usize, grid.midpoints2(), params.m2(), params.sigma2()),
    ];
    for (axis, xs, m, sigma) in axes {
        let mut cols: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(count);
        for k in 0..count {
            let analytic: Vec<f64> = xs.iter().map(|&x| analytic_mode(k, m, sigma, k_schmidt, x)).collect();
            let numeric = if axis == 1 { spectrum.mode1_values(k) } else { spectrum.mode2_values(k) };
            let s = alignment(&numeric, &analytic);
            cols.push((analytic, numeric.into_iter().map(|v| s * v).collect()));
        }
        for (j, &x) in xs.iter().enumerate() {
            let mut row = vec![Cell::from(axis), j.into(), x.into()];
            for (a, b) in &cols {
                row.push(a[j].into());
                row.push(b[j].into());
            }
            table.push(row);
        }
    }
    Ok(Report::Table(table))
}

/// Per-mode values of a decomposed state in function units.
fn mode_table(spectrum: &SchmidtSpectrum, count: usize) -> Table {
    let mut columns = vec!["axis".to_string(), "j".to_string(), "x".to_string()];
    columns.extend((0..count).map(|k| format!("mode{k}")));
    let mut table = Table::new(columns);
    let grid = spectrum.grid();
    for axis in [1usize, 2] {
        let (xs, values): (Vec<f64>, Vec<Vec<f64>>) = if axis == 1 {
            (grid.midpoints1(), (0..count).map(|k| spectrum.mode1_values(k)).collect())
        } else {
            (grid.midpoints2(), (0..count).map(|k| spectrum.mode2_values(k)).collect())
        };
        for (j, &x) in xs.iter().enumerate() {
            let mut row = vec![Cell::from(axis), j.into(), x.into()];
            row.extend(values.iter().map(|v| Cell::from(v[j])));
            table.push(row);
        }
    }
    table
}

pub struct Decomposition {
    pub report: Report,
    pub modes: Option<Table>,
}

/// Schmidt spectrum and summary of a state read from a file.
pub fn decompose_file(path: &Path, symbols: u64, mode_count: Option<usize>, base: LogBase) -> Result<Decomposition> {
    let state = read_state(path)?;
    let spectrum = decompose(&state)?;
    let mut table = Table::new(["k", "lambda_k"]);
    for (k, &w) in spectrum.weights().iter().enumerate() {
        table.push(vec![k.into(), w.into()]);
    }
    let k = spectrum.schmidt_number();
    let info = InfoReport::new(k, symbols)?;
    let grid = spectrum.grid();
    let summary = Record::new()
        .with("n1", grid.n1)
        .with("n2", grid.n2)
        .with("raw_norm", state.raw_norm())
        .with("weight_sum", spectrum.weights().iter().sum::<f64>())
        .with("schmidt_number", k)
        .with("entropy", spectrum.entropy(base))
        .with("base", base.to_string())
        .with("n_symbols", symbols)
        .with("information", base.from_nats(info.i_nats))
        .with("p_coincidence", info.p_coincidence);
    let modes = match mode_count {
        Some(c) if c == 0 || c > spectrum.len() => {
            return Err(Error::RankOutOfRange { requested: c, available: spectrum.len() })
        }
        Some(c) => Some(mode_table(&spectrum, c)),
        None => None,
    };
    Ok(Decomposition { report: Report::Spectrum { table, summary }, modes })
}

/// Grid estimate of the Shannon mutual information against the closed form.
pub fn mutual_info(g: &GaussianArgs, n: usize, span: f64, base: LogBase) -> Result<Report> {
    let params = g.params()?;
    let grid = build_grid(&params, n, span)?;
    let joint = sample_state(|a, b| params.wavefunction(a, b), &grid)?.probabilities();
    let numeric = shannon_mi_numeric(&joint, base)?;
    let closed = shannon_mi_gaussian(params.rho(), base)?;
    Ok(Report::Record(
        Record::new()
            .with("n", n)
            .with("span", span)
            .with("base", base.to_string())
            .with("numeric", numeric)
            .with("closed_form", closed)
            .with("abs_error", (numeric - closed).abs()),
    ))
}

/// Log-spaced sweep of the oscillator mapping.
pub fn thermo(beta_min: f64, beta_max: f64, points: usize, base: LogBase) -> Result<Report> {
    if !(beta_min > 0.0 && beta_max >= beta_min && beta_max.is_finite()) {
        return Err(Error::Domain(format!("need 0 < beta-min <= beta-max, got {beta_min} and {beta_max}")));
    }
    if points == 0 {
        return Err(Error::Domain("point count must be positive".into()));
    }
    let (lo, hi) = (beta_min.ln(), beta_max.ln());
    let mut table = Table::new(["beta", "K", "rho_squared", "entropy"]);
    for i in 0..points {
        let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
        let p = ThermoPoint::new((lo + (hi - lo) * t).exp())?;
        table.push(vec![p.beta().into(), p.schmidt_number().into(), p.rho_squared().into(), p.entropy(base).into()]);
    }
    Ok(Report::Table(table))
}

/// Weights listed in a text file, separated by commas or whitespace.
pub fn read_weights(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut weights = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        for field in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()) {
            let value = field.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no + 1,
                column: field.as_ptr() as usize - line.as_ptr() as usize + 1,
                message: format!("{field:?}: {e}"),
            })?;
            weights.push(value);
        }
    }
    Ok(weights)
}

pub enum WeightSource {
    Rho(f64),
    File(PathBuf),
}

pub fn simulate(source: &WeightSource, n: usize, trials: u64, seed: u64) -> Result<Report> {
    let weights = match source {
        WeightSource::Rho(rho) => GeometricSpectrum::from_rho(*rho)?.truncated(SPECTRUM_TAIL),
        WeightSource::File(path) => read_weights(path)?,
    };
    let r = run_coincidence_experiment(&weights, n, trials, seed)?;
    let mut record = Record::new()
        .with("n_symbols", r.n_symbols)
        .with("trials", r.trials)
        .with("seed", r.seed)
        .with("hits", r.hits)
        .with("p_hat", r.p_hat)
        .with("p_theory", r.p_theory)
        .with("std_err", r.std_err)
        .with("position_hits", r.position_hits)
        .with("position_rate", r.position_rate())
        .with("position_std_err", r.position_std_err());
    for (j, c) in r.match_histogram.iter().enumerate() {
        record = record.with(&format!("matches{j}"), *c);
    }
    Ok(Report::Record(record))
}

pub fn info(k: f64, symbols: u64, base: LogBase) -> Result<Report> {
    let r = InfoReport::new(k, symbols)?;
    Ok(Report::Record(
        Record::new()
            .with("schmidt_number", r.schmidt_number)
            .with("n_symbols", r.n_symbols)
            .with("base", base.to_string())
            .with("information", base.from_nats(r.i_nats))
            .with("i_bits", r.i_bits)
            .with("i_nats", r.i_nats)
            .with("ln_w", r.microstates.ln_w)
            .with("w", r.microstates.value())
            .with("w_log_space", r.microstates.log_space)
            .with("p_coincidence", r.p_coincidence),
    ))
}
