//! Scenario, swap-ladder and parameter-sweep runs rendered as CSV.

use std::fmt::Write as _;

use gwdeco::kinematics;
use gwdeco::quantum::{self, ChannelU};
use gwdeco::swapping::{self, LadderLevel};
use gwdeco::wavepacket::{self, quadrature};
use gwdeco::DecoherenceFactor;
use rayon::prelude::*;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Count(u64),
    Num(f64),
    Empty,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Count(n) => Some(n as f64),
            Cell::Num(v) => Some(v),
            Cell::Empty => None,
        }
    }

    fn render(self) -> String {
        match self {
            Cell::Count(n) => n.to_string(),
            Cell::Num(v) => format_number(v),
            Cell::Empty => String::new(),
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits; negative zero is written as zero.
pub fn format_number(v: f64) -> String {
    format!("{:.16e}", if v == 0.0 { 0.0 } else { v })
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].value()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

const COMMON: [&str; 9] = ["tau", "u", "f", "omega_center", "deficit", "abs_sq_deficit", "phase", "c_bar", "s_bar"];
const DEFICIT_TRACK: [&str; 5] = ["abs_u", "entropy_single", "entropy_two", "negativity", "negativity_deficit"];
const MATRIX_TRACK: [&str; 5] = [
    "abs_u_matrix",
    "entropy_single_matrix",
    "entropy_two_matrix",
    "negativity_matrix",
    "negativity_deficit_matrix",
];

fn ghz_sides(n: usize) -> Vec<Vec<usize>> {
    (0..(1usize << (n - 1)))
        .map(|bits| {
            std::iter::once(0)
                .chain((1..n).filter(|i| bits >> (i - 1) & 1 == 1))
                .collect::<Vec<_>>()
        })
        .filter(|side| side.len() < n)
        .collect()
}

fn scenario_header(s: &Scenario) -> Vec<String> {
    let track = s.config.track;
    let mut h: Vec<String> = COMMON.iter().map(|c| c.to_string()).collect();
    if track.deficit() {
        h.extend(DEFICIT_TRACK.iter().map(|c| c.to_string()));
    }
    if track.matrix() {
        h.extend(MATRIX_TRACK.iter().map(|c| c.to_string()));
        if let Some(n) = s.config.particles {
            for side in ghz_sides(n) {
                let name: Vec<String> = side.iter().map(|q| q.to_string()).collect();
                h.push(format!("ghz_negativity_{}", name.join("_")));
            }
        }
    }
    h
}

fn scenario_row(s: &Scenario, rule: &quadrature::Rule, tau: f64) -> gwdeco::Result<Vec<Cell>> {
    let cfg = &s.config;
    let (w, fp) = (&s.waveform, &s.frame);
    let u_i = fp.phase_at(cfg.time.tau_i);
    let u = fp.phase_at(tau);
    let f = w.eval(u)?;
    let center = kinematics::omega(w, fp, cfg.time.tau_i, tau, &s.packet.center(), cfg.omega_method)?.omega;
    let dl = kinematics::log_factor_change(w, u_i, u, cfg.omega_method)?;
    let d = wavepacket::ubar_with_rule(&s.packet, fp, dl, rule);

    let mut row = vec![tau, u, f, center, d.deficit(), d.abs_sq_deficit(), d.phase(), d.c_bar(), d.s_bar()];
    if cfg.track.deficit() {
        let two = quantum::analytic_two_particle(&d);
        row.extend([
            d.abs(),
            quantum::analytic_single_particle_entropy(&d),
            two.entropy,
            two.negativity,
            two.negativity_deficit,
        ]);
    }
    if cfg.track.matrix() {
        row.extend(matrix_columns(&d, cfg)?);
    }
    if let Some(i) = row.iter().position(|v| !v.is_finite()) {
        return Err(gwdeco::Error::Numerical(format!(
            "column `{}` is {}",
            scenario_header(s)[i],
            row[i]
        )));
    }
    Ok(row.into_iter().map(Cell::Num).collect())
}

fn matrix_columns(d: &DecoherenceFactor, cfg: &ScenarioConfig) -> gwdeco::Result<Vec<f64>> {
    let ch = ChannelU::new(*d);
    let single = quantum::evolve_single(&ch)?;
    let pair = quantum::evolve_ghz(2, &ch)?;
    let negativity = quantum::negativity(&pair, &[0])?;
    let mut out = vec![
        d.c_bar().hypot(d.s_bar()),
        quantum::von_neumann_entropy(&single)?,
        quantum::von_neumann_entropy(&pair)?,
        negativity,
        1.0 - negativity,
    ];
    if let Some(n) = cfg.particles {
        let ghz = quantum::evolve_ghz(n, &ch)?;
        for side in ghz_sides(n) {
            out.push(quantum::negativity(&ghz, &side)?);
        }
    }
    Ok(out)
}

/// One row per point of the proper-time grid. Rows are computed in
/// parallel and emitted in grid order.
pub fn run_scenario(s: &Scenario) -> Result<Table, CliError> {
    let rule = quadrature::gauss_hermite(s.config.packet.quadrature_order)?;
    let grid = s.grid();
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(row, &tau)| scenario_row(s, &rule, tau).map_err(|source| CliError::Row { row, tau, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table {
        header: scenario_header(s),
        rows,
    })
}

/// `ū` accumulated over the whole configured interval.
pub fn final_factor(s: &Scenario) -> Result<DecoherenceFactor, CliError> {
    let t = &s.config.time;
    Ok(wavepacket::ubar(
        &s.packet,
        &s.waveform,
        &s.frame,
        t.tau_i,
        t.tau_f,
        s.config.packet.quadrature_order,
        s.config.omega_method,
    )?)
}

/// Ladder report for a given `ū`.
pub fn ladder_table(u: &ChannelU, depth: usize, track: gwdeco::Track, outcome: usize) -> Result<Table, CliError> {
    let levels = swapping::swap_ladder(u, depth, track, outcome)?;
    let mut header: Vec<String> = ["level", "n"].iter().map(|c| c.to_string()).collect();
    if track.deficit() {
        header.extend(["negativity", "deficit"].map(String::from));
    }
    if track.matrix() {
        header.extend(
            ["negativity_matrix", "deficit_matrix", "probability", "probability_error", "outcome_spread"]
                .map(String::from),
        );
    }
    let rows = levels
        .iter()
        .map(|l: &LadderLevel| {
            let n = if l.level < 63 {
                Cell::Count(1u64 << (l.level + 1))
            } else {
                Cell::Num(l.particles())
            };
            let mut r = vec![Cell::Count(l.level as u64), n];
            if track.deficit() {
                r.extend([Cell::Num(1.0 - l.deficit), Cell::Num(l.deficit)]);
            }
            if track.matrix() {
                r.extend(
                    [
                        l.matrix_negativity,
                        l.matrix_deficit(),
                        l.probability,
                        l.probability_error,
                        l.outcome_spread,
                    ]
                    .map(Cell::from),
                );
            }
            r
        })
        .collect();
    Ok(Table { header, rows })
}

/// Swap ladder driven by the scenario's `ū` at `tau_f`.
pub fn run_swap_ladder(s: &Scenario, depth: Option<usize>) -> Result<Table, CliError> {
    let mut cfg = s.config.clone();
    if let Some(d) = depth {
        cfg.swap_depth = d;
    }
    let s = cfg.validate()?;
    let u = ChannelU::new(final_factor(&s)?);
    ladder_table(&u, s.config.swap_depth, s.config.track, s.config.swap_outcome)
}

/// Runs the scenario once per value of the parameter at `path`; the value
/// text leads every row.
pub fn sweep(cfg: &ScenarioConfig, path: &str, values: &[String]) -> Result<String, CliError> {
    let mut out = String::new();
    let mut header: Option<Vec<String>> = None;
    for text in values {
        let value = serde_json::from_str(text).unwrap_or_else(|_| serde_json::Value::String(text.clone()));
        let s = cfg.with_param(path, value)?.validate()?;
        let table = run_scenario(&s)?;
        match &header {
            None => {
                let _ = writeln!(out, "value,{}", table.header.join(","));
                header = Some(table.header.clone());
            }
            Some(h) if *h != table.header => {
                return Err(CliError::Config(format!(
                    "{path}: value `{text}` changes the output columns"
                )));
            }
            _ => {}
        }
        for line in table.to_csv().lines().skip(1) {
            let _ = writeln!(out, "{text},{line}");
        }
    }
    Ok(out)
}
