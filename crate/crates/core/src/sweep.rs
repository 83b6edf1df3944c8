//! Average fidelity over a grid of normalized coupling strengths.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cavity::CavityParams;
use crate::components::ClonerModel;
use crate::error::{Error, Result};
use crate::fidelity::{AveragingMethod, AveragingSpec, FidelityConvention, GateModel};
use crate::sampling::mix64;

pub const CSV_MAGIC: &str = "# cnot-cavity-sim sweep v1";
pub const CSV_COLUMNS: [&str; 3] = ["kappa_s_ratio", "g_ratio", "avg_fidelity"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

impl FromStr for AxisScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lin" | "linear" => Ok(AxisScale::Linear),
            "log" => Ok(AxisScale::Log),
            other => Err(Error::Sweep(format!("unknown axis scale `{other}` (expected lin or log)"))),
        }
    }
}

/// `count` points from `min` to `max` inclusive; a single point is `min`.
pub fn axis(min: f64, max: f64, count: usize, scale: AxisScale) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Sweep("axis needs at least one point".into()));
    }
    if !(min.is_finite() && max.is_finite() && min > 0.0) {
        return Err(Error::Sweep(format!("axis bounds must be finite and positive (got {min}, {max})")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    if max <= min {
        return Err(Error::Sweep(format!("axis max {max} must exceed min {min}")));
    }
    let last = (count - 1) as f64;
    let mut values: Vec<f64> = (0..count)
        .map(|k| {
            let s = k as f64 / last;
            match scale {
                AxisScale::Linear => min + (max - min) * s,
                AxisScale::Log => (min.ln() + (max.ln() - min.ln()) * s).exp(),
            }
        })
        .collect();
    values[0] = min;
    values[count - 1] = max;
    Ok(values)
}

/// 60 log-spaced ratios over `[0.01, 3.0]`.
pub fn default_axis() -> Vec<f64> {
    axis(0.01, 3.0, 60, AxisScale::Log).expect("static axis")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ks_ratio_axis: Vec<f64>,
    pub g_ratio_axis: Vec<f64>,
    pub rho_ratio: f64,
    pub f_uc: f64,
    pub convention: FidelityConvention,
    pub averaging: AveragingSpec,
}

impl SweepConfig {
    pub fn new(convention: FidelityConvention) -> Self {
        Self {
            ks_ratio_axis: default_axis(),
            g_ratio_axis: default_axis(),
            rho_ratio: 0.1,
            f_uc: ClonerModel::OPTIMAL_FIDELITY,
            convention,
            averaging: AveragingSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, ax) in [("kappa_s", &self.ks_ratio_axis), ("g", &self.g_ratio_axis)] {
            if ax.is_empty() {
                return Err(Error::Sweep(format!("{name} axis is empty")));
            }
            if ax.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Sweep(format!("{name} axis values must be finite and positive")));
            }
            if ax.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Sweep(format!("{name} axis must be strictly increasing")));
            }
        }
        if !(self.rho_ratio.is_finite() && self.rho_ratio > 0.0) {
            return Err(Error::Sweep(format!("rho ratio must be positive (got {})", self.rho_ratio)));
        }
        ClonerModel::new(self.f_uc)?;
        self.averaging.validate()
    }

    fn cell_params(&self, i: usize, j: usize) -> CavityParams {
        CavityParams::from_ratios(self.ks_ratio_axis[i], self.g_ratio_axis[j], self.rho_ratio)
    }

    fn cell_averaging(&self, i: usize, j: usize) -> AveragingSpec {
        let mut avg = self.averaging;
        if avg.method == AveragingMethod::MonteCarlo {
            avg.seed ^= mix64(((i as u64) << 32) | j as u64);
        }
        avg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Strong,
    Boundary,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Weak => "weak",
            Regime::Strong => "strong",
            Regime::Boundary => "boundary",
        })
    }
}

/// Strong coupling is `g > (κ_s + κ)/4`, weak is `g < (κ_s + κ)/4`.
pub fn regime_classify(params: &CavityParams) -> Regime {
    let threshold = (params.kappa_s + params.kappa) / 4.0;
    if (params.g - threshold).abs() <= 1e-12 * threshold {
        Regime::Boundary
    } else if params.g > threshold {
        Regime::Strong
    } else {
        Regime::Weak
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub ks_ratio: f64,
    pub g_ratio: f64,
    pub value: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub config: SweepConfig,
    /// `values[ks_index][g_index]`
    pub values: Vec<Vec<f64>>,
    pub argmax: GridMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Worker pool of the given size, or rayon's default when `None`.
    Parallel { threads: Option<usize> },
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepGrid> {
    run_sweep_with(config, Execution::Parallel { threads: None })
}

pub fn run_sweep_with(config: &SweepConfig, execution: Execution) -> Result<SweepGrid> {
    config.validate()?;
    let cloner = ClonerModel::new(config.f_uc)?;
    let (rows, cols) = (config.ks_ratio_axis.len(), config.g_ratio_axis.len());
    let cell = |index: usize| -> Result<f64> {
        let (i, j) = (index / cols, index % cols);
        let model = GateModel::new(&config.cell_params(i, j), cloner)?;
        Ok(model.average(&config.convention, &config.cell_averaging(i, j))?.value)
    };
    let flat: Vec<f64> = match execution {
        Execution::Serial => (0..rows * cols).map(cell).collect::<Result<_>>()?,
        Execution::Parallel { threads } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::Sweep(format!("cannot start worker pool: {e}")))?;
            pool.install(|| (0..rows * cols).into_par_iter().map(cell).collect::<Result<_>>())?
        }
    };
    let values: Vec<Vec<f64>> = flat.chunks(cols).map(<[f64]>::to_vec).collect();
    Ok(grid_from_values(config.clone(), values))
}

/// Wraps a precomputed value matrix, locating its maximum.
pub fn grid_from_values(config: SweepConfig, values: Vec<Vec<f64>>) -> SweepGrid {
    let mut grid = SweepGrid {
        config,
        values,
        argmax: GridMax {
            ks_ratio: f64::NAN,
            g_ratio: f64::NAN,
            value: f64::NAN,
            regime: Regime::Weak,
        },
    };
    grid.argmax = locate_max(&grid);
    grid
}

/// First maximal cell in row-major order, i.e. ties go to smaller (κ_s, g).
pub fn locate_max(grid: &SweepGrid) -> GridMax {
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, row) in grid.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if best.is_none_or(|(_, _, b)| v > b) {
                best = Some((i, j, v));
            }
        }
    }
    let (i, j, value) = best.expect("grid has at least one cell");
    let cfg = &grid.config;
    GridMax {
        ks_ratio: cfg.ks_ratio_axis[i],
        g_ratio: cfg.g_ratio_axis[j],
        value,
        regime: regime_classify(&cfg.cell_params(i, j)),
    }
}

/// Scientific notation with 17 digits after the point and a signed,
/// two-digit exponent, e.g. `1.00000000000000002e-02`.
pub fn format_sci(v: f64) -> String {
    let s = format!("{v:.17e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn metadata_lines(config: &SweepConfig) -> [String; 3] {
    let avg = &config.averaging;
    let averaging = match avg.method {
        AveragingMethod::Quadrature => format!(
            "# averaging=quadrature points={} seed={}",
            avg.quadrature_points, avg.seed
        ),
        AveragingMethod::MonteCarlo => format!(
            "# averaging=monte_carlo samples={} seed={}",
            avg.mc_samples, avg.seed
        ),
    };
    [
        CSV_MAGIC.to_string(),
        format!(
            "# rho_ratio={} f_uc={} convention={}",
            config.rho_ratio, config.f_uc, config.convention
        ),
        averaging,
    ]
}

pub fn write_csv_to<W: Write>(grid: &SweepGrid, out: W) -> std::io::Result<()> {
    let mut out = out;
    for line in metadata_lines(&grid.config) {
        writeln!(out, "{line}")?;
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for (i, row) in grid.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            writer.write_record([
                format_sci(grid.config.ks_ratio_axis[i]),
                format_sci(grid.config.g_ratio_axis[j]),
                format_sci(*v),
            ])?;
        }
    }
    writer.flush()
}

/// Writes the sweep CSV: three `#` metadata lines, a header row, then one row
/// per cell with κ_s outer and g inner.
pub fn write_csv(grid: &SweepGrid, destination: &Path) -> Result<()> {
    let file = File::create(destination).map_err(|e| Error::io(destination, e))?;
    let mut out = BufWriter::new(file);
    write_csv_to(grid, &mut out).map_err(|e| Error::io(destination, e))?;
    out.flush().map_err(|e| Error::io(destination, e))
}

/// Parsed sweep CSV: comment lines and the value matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsv {
    pub metadata: Vec<String>,
    pub ks_ratio_axis: Vec<f64>,
    pub g_ratio_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn read_csv_from<R: Read>(input: R) -> Result<SweepCsv> {
    let mut text = String::new();
    let mut input = input;
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::Csv(format!("cannot read: {e}")))?;
    let metadata: Vec<String> = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(str::to_string)
        .collect();
    if metadata.first().map(String::as_str) != Some(CSV_MAGIC) {
        return Err(Error::Csv("missing format header line".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Csv(e.to_string()))?;
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::Csv(format!("unexpected columns {headers:?}")));
    }
    let mut rows: Vec<[f64; 3]> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        let mut parsed = [0.0; 3];
        for (k, slot) in parsed.iter_mut().enumerate() {
            let field = record.get(k).ok_or_else(|| Error::Csv("short row".into()))?;
            *slot = field
                .parse()
                .map_err(|_| Error::Csv(format!("bad number `{field}`")))?;
        }
        rows.push(parsed);
    }
    let mut ks_axis: Vec<f64> = Vec::new();
    let mut g_axis: Vec<f64> = Vec::new();
    for r in &rows {
        if ks_axis.last() != Some(&r[0]) {
            ks_axis.push(r[0]);
        }
        if !g_axis.contains(&r[1]) {
            g_axis.push(r[1]);
        }
    }
    if ks_axis.len() * g_axis.len() != rows.len() {
        return Err(Error::Csv("rows do not form a complete grid".into()));
    }
    let values = rows
        .chunks(g_axis.len())
        .map(|chunk| chunk.iter().map(|r| r[2]).collect())
        .collect();
    Ok(SweepCsv {
        metadata,
        ks_ratio_axis: ks_axis,
        g_ratio_axis: g_axis,
        values,
    })
}

pub fn read_csv(path: &Path) -> Result<SweepCsv> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file)
}

pub fn write_heatmap_to<W: Write>(grid: &SweepGrid, out: W) -> std::io::Result<()> {
    let mut out = out;
    let rows = grid.values.len();
    let cols = grid.values.first().map_or(0, Vec::len);
    writeln!(out, "P2")?;
    writeln!(out, "{cols} {rows}")?;
    writeln!(out, "255")?;
    for row in &grid.values {
        let line: Vec<String> = row.iter().map(|v| gray_level(*v).to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Plain PGM: κ_s ascending top to bottom, g ascending left to right,
/// gray level `round(255·F̄)`.
pub fn write_heatmap(grid: &SweepGrid, destination: &Path) -> Result<()> {
    let file = File::create(destination).map_err(|e| Error::io(destination, e))?;
    let mut out = BufWriter::new(file);
    write_heatmap_to(grid, &mut out).map_err(|e| Error::io(destination, e))?;
    out.flush().map_err(|e| Error::io(destination, e))
}

fn gray_level(v: f64) -> u8 {
    (255.0 * v.clamp(0.0, 1.0)).round() as u8
}
