//! Command implementations. Each returns the rendered report.

use salpeter_core::bounds::{count_bound, hellmann_lower_bound};
use salpeter_core::diagnostics::virial_check_with;
use salpeter_core::spectra::{binding_table_with, optimize_parameters_with, solve_with};
use salpeter_core::{BoundMode, KineticQuadrature, MassConfig, ParamRange, PotentialSpec, Sector, TrialBasis};

use crate::config::{Command, Format, RunConfig};
use crate::report::{num, opt_num, Table};
use crate::CliError;

/// Couplings `(kappa, upsilon)` of the three reference Hellmann potentials,
/// each with slope `b = m`.
pub const TABLE1_COLUMNS: [(f64, f64); 3] = [(0.5, 0.5), (1.0, -1.0), (1.0, -2.0)];

/// The six lowest-lying `(n_r, ell)` states reported per column.
pub const TABLE1_SECTORS: [Sector; 6] = [
    Sector::new(0, 0),
    Sector::new(0, 1),
    Sector::new(0, 2),
    Sector::new(1, 0),
    Sector::new(1, 1),
    Sector::new(2, 0),
];

pub fn run(config: &RunConfig) -> Result<String, CliError> {
    let settings = KineticQuadrature::from_env()?;
    match config.command {
        Command::Classify => classify(config),
        Command::Bounds => bounds(config),
        Command::Solve => solve(config, &settings),
        Command::Table1 => table1(config, &settings),
        Command::Count => count(config),
        Command::Optimize => optimize(config, &settings),
        Command::Profile => profile(config),
    }
}

/// A single record: `key: value` lines as text, or header plus one row as CSV.
fn record(format: Format, fields: &[(&str, String)]) -> String {
    match format {
        Format::Text => fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        Format::Csv => {
            let mut t = Table::new(&fields.iter().map(|(k, _)| *k).collect::<Vec<_>>());
            t.push(fields.iter().map(|(_, v)| v.clone()).collect());
            t.to_csv()
        }
    }
}

fn classify(c: &RunConfig) -> Result<String, CliError> {
    let profile = c.potential()?.classify()?;
    let bounded = if profile.bounded_below { "bounded below" } else { "unbounded below" };
    let min = profile.minimum;
    match c.format {
        Format::Text => {
            let mut out = format!("category: {}; {bounded}; {}\n", profile.category, profile.origin_behavior);
            if let Some(m) = min {
                let how = if m.attained { "attained" } else { "approached" };
                out += &format!("minimum: V = {} at r = {} ({how})\n", num(m.value), num(m.radius));
            }
            Ok(out)
        }
        Format::Csv => Ok(record(
            Format::Csv,
            &[
                ("category", profile.category.to_string()),
                ("bounded_below", profile.bounded_below.to_string()),
                ("origin", profile.origin_behavior.to_string()),
                ("r_min", opt_num(min.map(|m| m.radius))),
                ("v_min", opt_num(min.map(|m| m.value))),
            ],
        )),
    }
}

fn bounds(c: &RunConfig) -> Result<String, CliError> {
    let spec = c.potential()?;
    let report = hellmann_lower_bound(&spec, c.m1, c.mode)?;
    let method = if report.bounded_below { report.method.to_string() } else { "none".to_string() };
    let mut fields = vec![
        ("mode", report.mode.to_string()),
        ("bounded_below", report.bounded_below.to_string()),
        ("method", method),
        ("alpha_eff", num(report.alpha_eff)),
        ("lower_bound", opt_num(report.lower_bound)),
        ("binding_bound", opt_num(report.binding_bound(c.m1))),
    ];
    if c.format == Format::Text && report.candidates.len() > 1 {
        for (m, v) in &report.candidates {
            fields.push(("candidate", format!("{m} {}", num(*v))));
        }
    }
    Ok(record(c.format, &fields))
}

fn solve(c: &RunConfig, settings: &KineticQuadrature) -> Result<String, CliError> {
    let spec = c.potential()?;
    let masses = c.masses()?;
    let basis = TrialBasis::new(c.ell, c.beta, c.mu, c.dim)?;
    let result = solve_with(&basis, &masses, &spec, c.states, settings)?;
    let mut table = Table::new(&["n_r", "ell", "energy", "binding", "virial_residual"]);
    for (k, (energy, binding)) in result.eigenvalues.iter().zip(result.binding()).enumerate() {
        let virial = virial_check_with(&result.states[k], &masses, &spec, settings)?;
        table.push(vec![k.to_string(), c.ell.to_string(), num(*energy), num(binding), num(virial.residual)]);
    }
    Ok(table.render(c.format))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Rayleigh–Ritz upper bound on a binding energy.
    Upper,
    /// Analytic lower bound on the spectrum (mode paper), as a binding energy.
    Lower,
}

impl RowKind {
    pub fn label(self) -> &'static str {
        match self {
            RowKind::Upper => "upper",
            RowKind::Lower => "lower",
        }
    }
}

/// One entry of the reference table; bindings are in units of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub kind: RowKind,
    /// `None` for lower-bound rows.
    pub sector: Option<Sector>,
    /// 1-based column index into [`TABLE1_COLUMNS`].
    pub column: usize,
    pub binding: f64,
    pub virial_residual: Option<f64>,
}

/// The 18 upper bounds (column-major) followed by the 3 lower bounds, at
/// `b = mu = m`, `beta = 1` and trial dimension `dim`.
pub fn table1_rows(m: f64, dim: usize, settings: &KineticQuadrature) -> Result<Vec<Table1Row>, CliError> {
    let masses = MassConfig::equal(m)?;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, &(kappa, upsilon)) in TABLE1_COLUMNS.iter().enumerate() {
        let spec = PotentialSpec::hellmann(kappa, upsilon, m)?;
        for entry in binding_table_with(&masses, &spec, 1.0, m, dim, &TABLE1_SECTORS, settings)? {
            let virial = virial_check_with(&entry.state, &masses, &spec, settings)?;
            upper.push(Table1Row {
                kind: RowKind::Upper,
                sector: Some(entry.sector),
                column: i + 1,
                binding: entry.binding / m,
                virial_residual: Some(virial.residual),
            });
        }
        let report = hellmann_lower_bound(&spec, m, BoundMode::Paper)?;
        let binding = report
            .binding_bound(m)
            .ok_or_else(|| CliError::Numeric(salpeter_core::Error::Unbounded(format!("column {}", i + 1))))?;
        lower.push(Table1Row { kind: RowKind::Lower, sector: None, column: i + 1, binding: binding / m, virial_residual: None });
    }
    upper.extend(lower);
    Ok(upper)
}

fn table1(c: &RunConfig, settings: &KineticQuadrature) -> Result<String, CliError> {
    let rows = table1_rows(c.m1, c.dim, settings)?;
    match c.format {
        Format::Csv => {
            let mut t = Table::new(&["kind", "n_r", "ell", "column", "binding", "virial_residual"]);
            for r in &rows {
                t.push(vec![
                    r.kind.label().to_string(),
                    r.sector.map(|s| s.n_r.to_string()).unwrap_or_default(),
                    r.sector.map(|s| s.ell.to_string()).unwrap_or_default(),
                    r.column.to_string(),
                    num(r.binding),
                    opt_num(r.virial_residual),
                ]);
            }
            Ok(t.to_csv())
        }
        Format::Text => {
            let mut out = format!("Binding energies (E - 2m)/m at b = mu = m, beta = 1, d = {}\n", c.dim);
            for (i, (kappa, upsilon)) in TABLE1_COLUMNS.iter().enumerate() {
                out += &format!("  column {}: kappa = {kappa}, upsilon = {upsilon}\n", i + 1);
            }
            out += "\n";
            let mut t = Table::new(&["n_r ell", "column 1", "column 2", "column 3", "virial 1", "virial 2", "virial 3"]);
            for s in TABLE1_SECTORS {
                let cell = |col: usize| rows.iter().find(|r| r.sector == Some(s) && r.column == col).expect("row");
                let mut row = vec![format!("{}   {}", s.n_r, s.ell)];
                row.extend((1..=3).map(|col| num(cell(col).binding)));
                row.extend((1..=3).map(|col| format!("{:.1e}", cell(col).virial_residual.unwrap_or(f64::NAN))));
                t.push(row);
            }
            let mut lower = vec!["lower bound".to_string()];
            lower.extend(rows.iter().filter(|r| r.kind == RowKind::Lower).map(|r| num(r.binding)));
            lower.extend(std::iter::repeat_n(String::new(), 3));
            t.push(lower);
            out += &t.to_text();
            Ok(out)
        }
    }
}

fn count(c: &RunConfig) -> Result<String, CliError> {
    if c.m1 != c.m2 {
        return Err(CliError::Usage(format!(
            "precondition violated: m1 = m2 for the counting bound (got m1 = {}, m2 = {})",
            c.m1, c.m2
        )));
    }
    let report = count_bound(&c.potential()?, c.m1)?;
    let condition = if report.condition_ok { "satisfied" } else { "violated" };
    Ok(record(
        c.format,
        &[
            ("condition_l", condition.to_string()),
            ("reason", report.failure_reason.clone().unwrap_or_default()),
            ("n_bound", opt_num(report.n_bound)),
            ("constant", num(report.c_used)),
        ],
    ))
}

fn optimize(c: &RunConfig, settings: &KineticQuadrature) -> Result<String, CliError> {
    let spec = c.potential()?;
    let masses = c.masses()?;
    let outcome = optimize_parameters_with(
        &masses,
        &spec,
        c.ell,
        c.dim,
        c.target,
        ParamRange::new(c.mu_range.0, c.mu_range.1),
        ParamRange::new(c.beta_range.0, c.beta_range.1),
        settings,
    )?;
    let basis = TrialBasis::new(c.ell, outcome.best_beta, outcome.best_mu, c.dim)?;
    let best = solve_with(&basis, &masses, &spec, c.target + 1, settings)?;
    let virial = virial_check_with(&best.states[c.target], &masses, &spec, settings)?;
    Ok(record(
        c.format,
        &[
            ("n_r", c.target.to_string()),
            ("ell", c.ell.to_string()),
            ("dim", c.dim.to_string()),
            ("mu", num(outcome.best_mu)),
            ("beta", num(outcome.best_beta)),
            ("energy", num(outcome.best_value)),
            ("binding", num(outcome.best_value - masses.threshold())),
            ("virial_residual", num(virial.residual)),
            ("evaluations", outcome.evaluations.to_string()),
        ],
    ))
}

/// Always `r,V` CSV, ready for plotting.
fn profile(c: &RunConfig) -> Result<String, CliError> {
    let samples = c.potential()?.profile_samples(c.r_range.0, c.r_range.1, c.points)?;
    let mut t = Table::new(&["r", "V"]);
    for (r, v) in samples {
        t.push(vec![num(r), num(v)]);
    }
    Ok(t.to_csv())
}
