//! Parameter sweeps over `(a, kappa)` and plain-text rendering.
//!
//! Rows come straight from [`transition_scale`] and [`solar_budget`]; no
//! formula is duplicated here. Cells are evaluated in parallel but rows are
//! always emitted slopes-outer, kappas-inner.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::constants::CosmologyContext;
use crate::dissipation::{n0_provenance, solar_budget, N0Mode, Scenario};
use crate::error::{Error, Result};
use crate::transition::transition_scale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameter(format!(
                "format must be `table` or `csv`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Output {
    Lambda0,
    Sigma,
    K0,
    Epsilon,
    N,
    Ns,
}

impl Output {
    pub const DEFAULT: [Output; 3] = [Output::Lambda0, Output::Sigma, Output::K0];

    fn csv_header(self) -> &'static str {
        match self {
            Output::Lambda0 => "lambda0_m",
            Output::Sigma => "sigma_m",
            Output::K0 => "k0_per_m",
            Output::Epsilon => "epsilon_w_per_m3",
            Output::N => "n_solar",
            Output::Ns => "ns_solar",
        }
    }

    fn table_header(self) -> &'static str {
        match self {
            Output::Lambda0 => "lambda0 [m]",
            Output::Sigma => "sigma [m]",
            Output::K0 => "k0 [1/m]",
            Output::Epsilon => "epsilon [W/m^3]",
            Output::N => "N",
            Output::Ns => "Ns",
        }
    }

    fn needs_budget(self) -> bool {
        matches!(self, Output::Epsilon | Output::N | Output::Ns)
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lambda0" => Output::Lambda0,
            "sigma" => Output::Sigma,
            "k0" => Output::K0,
            "epsilon" => Output::Epsilon,
            "N" | "n" => Output::N,
            "Ns" | "ns" => Output::Ns,
            other => return Err(Error::InvalidParameter(format!("unknown output `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub slopes: Vec<f64>,
    pub kappas: Vec<f64>,
    /// Columns after `a, kappa`, in this order.
    pub outputs: Vec<Output>,
    pub format: Format,
    pub sigfigs: usize,
    /// Window, radius and `N0` convention for the dissipation columns.
    pub scenario: Option<Scenario>,
}

impl SweepSpec {
    pub fn new(slopes: Vec<f64>, kappas: Vec<f64>) -> Self {
        SweepSpec {
            slopes,
            kappas,
            outputs: Output::DEFAULT.to_vec(),
            format: Format::Table,
            sigfigs: 3,
            scenario: None,
        }
    }

    pub fn needs_budget(&self) -> bool {
        self.outputs.iter().any(|o| o.needs_budget())
    }

    fn budget_scenario(&self, ctx: &CosmologyContext) -> Scenario {
        self.scenario
            .unwrap_or_else(|| Scenario::new(ctx, N0Mode::default()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    pub lambda0: f64,
    pub sigma: f64,
    pub k0: f64,
    pub epsilon: Option<f64>,
    pub n: Option<f64>,
    pub ns: Option<f64>,
}

impl RowValues {
    fn get(&self, out: Output) -> Option<f64> {
        match out {
            Output::Lambda0 => Some(self.lambda0),
            Output::Sigma => Some(self.sigma),
            Output::K0 => Some(self.k0),
            Output::Epsilon => self.epsilon,
            Output::N => self.n,
            Output::Ns => self.ns,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub slope: f64,
    pub kappa: f64,
    pub values: std::result::Result<RowValues, Error>,
}

fn evaluate_cell(
    a: f64,
    kappa: f64,
    spec: &SweepSpec,
    ctx: &CosmologyContext,
) -> Result<RowValues> {
    let t = transition_scale(a, kappa, ctx)?;
    let mut row = RowValues {
        lambda0: t.lambda0,
        sigma: t.sigma(),
        k0: t.k0,
        epsilon: None,
        n: None,
        ns: None,
    };
    if spec.needs_budget() {
        let b = solar_budget(kappa, a, ctx, &spec.budget_scenario(ctx))?;
        row.epsilon = Some(b.epsilon.value());
        row.n = Some(b.n);
        row.ns = Some(b.ns);
    }
    Ok(row)
}

/// One row per `(a, kappa)` pair, slopes outer. A cell outside the valid
/// domain yields a row carrying its error rather than aborting the sweep.
pub fn run_sweep(spec: &SweepSpec, ctx: &CosmologyContext) -> Result<Vec<ReportRow>> {
    if spec.slopes.is_empty() || spec.kappas.is_empty() {
        return Err(Error::EmptySweep);
    }
    let cells: Vec<(f64, f64)> = spec
        .slopes
        .iter()
        .flat_map(|&a| spec.kappas.iter().map(move |&k| (a, k)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(slope, kappa)| ReportRow {
            slope,
            kappa,
            values: evaluate_cell(slope, kappa, spec, ctx),
        })
        .collect())
}

/// Scientific notation with `sigfigs` significant figures, e.g. `5.17e3`.
pub fn format_sig(x: f64, sigfigs: usize) -> String {
    format!("{:.*e}", sigfigs.max(1) - 1, x)
}

/// Shortest scientific notation that parses back to the same `f64`.
pub fn format_exact(x: f64) -> String {
    format!("{x:e}")
}

/// A header plus string cells, rendered either as CSV or as an aligned table.
/// Notes follow the rows: `# ` comment lines in CSV, `note: ` lines otherwise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_aligned(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    pub fn to_aligned(&self) -> String {
        let ncol = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(ncol) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.push('\n');
            s
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&rule));
        for row in &self.rows {
            let mut padded = row.clone();
            padded.resize(ncol, String::new());
            out.push_str(&line(&padded));
        }
        for note in &self.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_aligned())
    }
}

pub fn sweep_table(
    rows: &[ReportRow],
    outputs: &[Output],
    format: Format,
    sigfigs: usize,
) -> Table {
    let mut headers = vec!["a".to_string(), "kappa".to_string()];
    headers.extend(outputs.iter().map(|o| match format {
        Format::Csv => o.csv_header().to_string(),
        Format::Table => o.table_header().to_string(),
    }));
    let mut table = Table::new(headers);
    for row in rows {
        let mut cells = vec![format_exact(row.slope), format_exact(row.kappa)];
        match &row.values {
            Ok(v) => cells.extend(outputs.iter().map(|&o| match v.get(o) {
                Some(x) => format_sig(x, sigfigs),
                None => String::new(),
            })),
            Err(e) => {
                cells.push(format!("error:{}", e.code()));
                cells.extend(std::iter::repeat_n(
                    String::new(),
                    outputs.len().saturating_sub(1),
                ));
            }
        }
        table.push(cells);
    }
    table
}

/// Renders sweep rows. CSV columns are
/// `a,kappa,lambda0_m,sigma_m,k0_per_m` for the default outputs.
pub fn render(rows: &[ReportRow], outputs: &[Output], format: Format, sigfigs: usize) -> String {
    sweep_table(rows, outputs, format, sigfigs).render(format)
}

/// Renders a sweep using the spec's outputs, format and precision. When
/// dissipation columns are present the `N0` provenance note is appended.
pub fn render_sweep(
    spec: &SweepSpec,
    rows: &[ReportRow],
    ctx: &CosmologyContext,
) -> Result<String> {
    let mut table = sweep_table(rows, &spec.outputs, spec.format, spec.sigfigs);
    if spec.needs_budget() {
        table.note(n0_provenance(ctx, &spec.budget_scenario(ctx))?);
    }
    Ok(table.render(spec.format))
}
