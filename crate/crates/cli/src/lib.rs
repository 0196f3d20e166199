//! Configuration, dispatch and output encoding for the `sinwell` binary.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::{Map, Number, Value};
use sinwell::spectrum::{
    convergence_report, general_level_cap, solve_general, solve_sinusoidal_well, sweep_coupling,
    DEFAULT_BASIS_SIZE, DEFAULT_COUPLING, DEFAULT_LEVELS,
};
use sinwell::validation;
use sinwell::wavefunction::sample_wavefunction_with;
use sinwell::{CoefficientMethod, Error};

pub mod format;

use format::format_float;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

/// Largest number of couplings a single sweep may request.
pub const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Sweep,
    Wavefunction,
    Converge,
    Validate,
    Table1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `start,stop,step` with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl CouplingRange {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step * (1.0 + 1e-12)).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for CouplingRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start,stop,step, got {s:?}"));
        };
        let parse = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("not a finite number: {v:?}"))
        };
        let range = CouplingRange {
            start: parse(start)?,
            stop: parse(stop)?,
            step: parse(step)?,
        };
        if range.step <= 0.0 {
            return Err("step must be positive".into());
        }
        if range.stop < range.start {
            return Err("stop must not be below start".into());
        }
        if (range.stop - range.start) / range.step >= MAX_SWEEP_POINTS as f64 {
            return Err(format!("more than {MAX_SWEEP_POINTS} couplings requested"));
        }
        Ok(range)
    }
}

impl fmt::Display for CouplingRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            format_float(self.start),
            format_float(self.stop),
            format_float(self.step)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub k: u32,
    pub width: f64,
    pub size: usize,
    /// `None` picks 11, capped by the basis size.
    pub levels: Option<usize>,
    pub grid: usize,
    pub level: usize,
    pub method: CoefficientMethod,
    pub c_range: CouplingRange,
    pub sizes: Vec<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Spectrum,
            c: DEFAULT_COUPLING,
            a: 0.0,
            b: 0.0,
            k: 1,
            width: std::f64::consts::PI,
            size: DEFAULT_BASIS_SIZE,
            levels: None,
            grid: 201,
            level: 0,
            method: CoefficientMethod::Eigenvector,
            c_range: CouplingRange {
                start: 0.0,
                stop: 20.0,
                step: 0.5,
            },
            sizes: vec![10, 15, 20, 25, 30, 40],
            format: Format::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    /// `C = 5`, `N = 20`, 11 levels: the zero-flag run.
    pub fn table1() -> Self {
        RunConfig {
            command: Command::Table1,
            ..RunConfig::default()
        }
    }

    fn is_general(&self) -> bool {
        self.a != 0.0 || self.b != 0.0
    }

    fn level_count(&self, size: usize) -> usize {
        let cap = if self.is_general() {
            general_level_cap(size)
        } else {
            size
        };
        self.levels.unwrap_or(DEFAULT_LEVELS.min(cap))
    }

    /// Flag constraints that do not need any computation.
    pub fn check(&self) -> Result<(), String> {
        if self.k == 0 {
            return Err("--k must be at least 1".into());
        }
        if self.size == 0 {
            return Err("--N must be at least 1".into());
        }
        if self.levels == Some(0) {
            return Err("--levels must be at least 1".into());
        }
        match self.command {
            Command::Spectrum | Command::Sweep => {
                let levels = self.level_count(self.size);
                if levels > self.size {
                    return Err(format!("--levels {levels} exceeds --N {}", self.size));
                }
            }
            Command::Wavefunction => {
                if self.grid < 2 {
                    return Err("--grid must be at least 2".into());
                }
                if self.level >= self.size {
                    return Err(format!("--level {} needs --N above it", self.level));
                }
            }
            Command::Converge => {
                if self.sizes.is_empty() {
                    return Err("--N-list is empty".into());
                }
                let smallest = *self.sizes.iter().min().unwrap();
                let levels = self.levels.unwrap_or(DEFAULT_LEVELS.min(smallest));
                if smallest == 0 || levels > smallest {
                    return Err(format!(
                        "every --N-list entry must be at least --levels ({levels})"
                    ));
                }
            }
            Command::Validate | Command::Table1 => {}
        }
        Ok(())
    }
}

/// Exit code plus the document destined for stdout or `--out`. Notes go to
/// stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub document: String,
    pub notes: Vec<String>,
}

impl Outcome {
    fn failure(code: u8, message: String) -> Self {
        Outcome {
            code,
            document: String::new(),
            notes: vec![message],
        }
    }
}

pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Domain(_) | Error::Singularity { .. } => EXIT_DOMAIN,
        Error::NonConvergence { .. } | Error::Growth { .. } | Error::DegenerateCluster { .. } => {
            EXIT_NUMERICAL
        }
    }
}

/// Column-oriented table that renders to CSV or a JSON array of objects.
struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut object = Map::new();
                        for (key, cell) in self.header.iter().zip(row) {
                            object.insert((*key).to_string(), json_number(cell));
                        }
                        Value::Object(object)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&rows).expect("in-memory JSON");
                out.push('\n');
                out
            }
        }
    }
}

fn json_number(cell: &str) -> Value {
    Number::from_str(cell).map_or(Value::Null, Value::Number)
}

fn int(n: usize) -> String {
    n.to_string()
}

pub fn run(config: &RunConfig) -> Outcome {
    if let Err(message) = config.check() {
        return Outcome::failure(EXIT_USAGE, message);
    }
    let result = match config.command {
        Command::Spectrum | Command::Table1 => spectrum(config),
        Command::Sweep => sweep(config),
        Command::Wavefunction => wavefunction(config),
        Command::Converge => converge(config),
        Command::Validate => return validate(config.format),
    };
    match result {
        Ok((table, notes)) => Outcome {
            code: EXIT_OK,
            document: table.render(config.format),
            notes,
        },
        Err(e) => Outcome::failure(exit_code(&e), e.to_string()),
    }
}

type Rendered = sinwell::Result<(Table, Vec<String>)>;

fn spectrum(config: &RunConfig) -> Rendered {
    let levels = config.level_count(config.size);
    let s = if config.is_general() {
        solve_general(
            config.a,
            config.b,
            config.c,
            config.k,
            config.width,
            config.size,
            levels,
        )?
    } else {
        solve_sinusoidal_well(config.c, config.k, config.width, config.size, levels)?
    };
    let mut table = Table::new(&["n", "epsilon", "E"]);
    for l in &s.levels {
        table.push(vec![
            int(l.n),
            format_float(l.epsilon),
            format_float(l.energy),
        ]);
    }
    Ok((table, Vec::new()))
}

fn sweep(config: &RunConfig) -> Rendered {
    let levels = config.level_count(config.size);
    let rows = sweep_coupling(
        &config.c_range.values(),
        config.k,
        config.width,
        config.size,
        levels,
    )?;
    let mut table = Table::new(&["C", "n", "epsilon", "E"]);
    for r in rows {
        table.push(vec![
            format_float(r.c),
            int(r.n),
            format_float(r.epsilon),
            format_float(r.energy),
        ]);
    }
    Ok((table, Vec::new()))
}

fn wavefunction(config: &RunConfig) -> Rendered {
    let s = sample_wavefunction_with(
        config.c,
        config.k,
        config.width,
        config.size,
        config.level,
        config.grid,
        config.method,
    )?;
    let mut table = Table::new(&["x", "psi"]);
    for (x, psi) in s.grid.iter().zip(&s.values) {
        table.push(vec![format_float(*x), format_float(*psi)]);
    }
    Ok((table, s.warnings))
}

fn converge(config: &RunConfig) -> Rendered {
    let smallest = *config.sizes.iter().min().expect("checked non-empty");
    let levels = config.levels.unwrap_or(DEFAULT_LEVELS.min(smallest));
    let rows = convergence_report(config.c, config.k, config.width, &config.sizes, levels)?;
    let mut table = Table::new(&["N", "n", "epsilon"]);
    for r in rows {
        table.push(vec![int(r.basis_size), int(r.n), format_float(r.epsilon)]);
    }
    Ok((table, Vec::new()))
}

fn validate(format: Format) -> Outcome {
    let outcomes = validation::run_all();
    let all_passed = outcomes.iter().all(|o| o.passed);
    let document = match format {
        Format::Csv => {
            let mut out = String::new();
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {:>2} {}: {}\n", o.id, o.name, o.detail));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    let mut object = Map::new();
                    object.insert("criterion".into(), Value::from(o.id));
                    object.insert("name".into(), Value::from(o.name));
                    object.insert("passed".into(), Value::from(o.passed));
                    object.insert("detail".into(), Value::from(o.detail.clone()));
                    Value::Object(object)
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&rows).expect("in-memory JSON");
            out.push('\n');
            out
        }
    };
    Outcome {
        code: if all_passed { EXIT_OK } else { EXIT_NUMERICAL },
        document,
        notes: Vec::new(),
    }
}
