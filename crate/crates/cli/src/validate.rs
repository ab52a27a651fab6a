//! Invariant suite behind `gwdeco validate`. Each check reports its worst
//! measured error against a tolerance; failures are report content.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use gwdeco::geometry::{self, Event, MINKOWSKI};
use gwdeco::kinematics::{self, LocalMomentum};
use gwdeco::oracles;
use gwdeco::quantum::{self, BasisOp, ChannelTableFn, ChannelU};
use gwdeco::swapping;
use gwdeco::wavepacket::{self, deficit_pow};
use gwdeco::{FrameParams, OmegaMethod, WavePacket, Waveform};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Scenario, ScenarioConfig};
use crate::runner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown level `{other}` (expected quick or full)")),
        }
    }
}

impl Level {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = write!(
                out,
                "{} {:width$}  worst {:.3e}  tol {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
            );
            if !c.note.is_empty() {
                let _ = write!(out, "  ({})", c.note);
            }
            out.push('\n');
        }
        let failed = self.failures().len();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

/// Shipped scenario files, compiled in so `validate` runs anywhere.
pub const SHIPPED: [(&str, &str); 6] = [
    ("gaussian_a1e-1", include_str!("../../../configs/gaussian_a1e-1.json")),
    ("gaussian_a1e-6", include_str!("../../../configs/gaussian_a1e-6.json")),
    ("gaussian_a1e-21", include_str!("../../../configs/gaussian_a1e-21.json")),
    ("sine_a1e-1", include_str!("../../../configs/sine_a1e-1.json")),
    ("sine_a1e-6", include_str!("../../../configs/sine_a1e-6.json")),
    ("sine_a1e-21", include_str!("../../../configs/sine_a1e-21.json")),
];

pub fn shipped(name: &str) -> Scenario {
    let text = SHIPPED.iter().find(|(n, _)| *n == name).expect("known scenario").1;
    ScenarioConfig::from_json(text)
        .and_then(|c| c.validate())
        .expect("shipped scenario is valid")
}

type Outcome = gwdeco::Result<(f64, String)>;

struct Suite {
    level: Level,
    table_fn: ChannelTableFn,
    checks: Vec<Check>,
}

impl Suite {
    fn run(&mut self, name: &'static str, tolerance: f64, f: impl FnOnce(&Suite) -> Outcome) {
        let check = match f(self) {
            Ok((worst, note)) => Check {
                name,
                worst,
                tolerance,
                passed: worst <= tolerance,
                note,
            },
            Err(e) => Check {
                name,
                worst: f64::INFINITY,
                tolerance,
                passed: false,
                note: e.to_string(),
            },
        };
        self.checks.push(check);
    }
}

pub fn validate(level: Level) -> Report {
    validate_with(level, quantum::channel_table)
}

/// As [`validate`] with a substitute channel table, used to prove the
/// suite notices a corrupted one.
pub fn validate_with(level: Level, table_fn: ChannelTableFn) -> Report {
    let mut s = Suite {
        level,
        table_fn,
        checks: Vec::new(),
    };
    s.run("flat_space_null", 1e-15, |_| flat_space_null());
    s.run("boundary_no_decoherence", 1e-15, |_| boundary_no_decoherence());
    s.run("right_angle_h_value", 1e-15, |_| right_angle_h());
    s.run("christoffel_vs_metric_differences", 1e-6, |s| christoffel_oracle(s.level.pick(20, 50)));
    s.run("spin_connection_vs_definition", 1e-6, |s| spin_connection_oracle(s.level.pick(20, 50)));
    s.run("kinematic_contracts", 1e-10, |s| kinematic_contracts(s.level.pick(30, 100)));
    s.run("omega_vs_simpson", 1e-6, |_| omega_oracle());
    s.run("channel_table_vs_rotation_average", 1e-10, |s| channel_table_oracle(s.table_fn));
    s.run("channel_application_vs_rotation_average", 1e-10, |s| channel_apply_oracle(s.table_fn));
    s.run("bell_pair_identities", 1e-10, |_| bell_pair_identities());
    s.run("single_particle_entropy", 1e-10, |_| single_particle_identity());
    s.run("swap_outcome_probabilities", 1e-12, |_| swap_probabilities());
    s.run("swap_negativity_powers", 1e-8, |_| swap_powers());
    s.run("swap_outcome_independence", 1e-10, |_| swap_independence());
    s.run("deficit_pow_vs_series", 1e-12, |_| deficit_series());
    s.run("matrix_vs_deficit_track", 1e-6, |_| track_agreement());
    s.run("quadrature_order_convergence", 1e-12, |_| quadrature_convergence());
    s.run("ubar_vs_monte_carlo_sigma", 3.0, |s| monte_carlo(s.level));
    s.run("amplitude_scaling_ratio", 1e-3, |_| amplitude_scaling());
    s.run("ghz_equivalence", 1e-12, |s| ghz_equivalence(s.level.pick(5, 7), s.table_fn));
    s.run("eigenvalues_vs_bisection", 1e-10, |s| eigen_oracle(s.level.pick(3, 10)));
    s.run("config_round_trip", 0.0, |_| config_round_trip());
    Report {
        level,
        checks: s.checks,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn random_events(n: usize, seed: u64) -> Vec<Event> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Event::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            )
        })
        .collect()
}

fn families() -> [Waveform; 2] {
    [
        Waveform::gaussian(0.1, 1.0).expect("valid"),
        Waveform::sine(0.1, 1.3).expect("valid"),
    ]
}

fn flat_space_null() -> Outcome {
    let mut cfg = shipped("gaussian_a1e-1").config;
    cfg.waveform = crate::config::WaveformConfig::Zero;
    cfg.time.steps = 20;
    let table = runner::run_scenario(&cfg.validate().expect("valid"))
        .map_err(|e| gwdeco::Error::Numerical(e.to_string()))?;
    let mut worst = 0.0_f64;
    for (name, want) in [
        ("deficit", 0.0),
        ("abs_sq_deficit", 0.0),
        ("entropy_single", 0.0),
        ("entropy_two", 0.0),
        ("negativity", 1.0),
        ("entropy_single_matrix", 0.0),
        ("entropy_two_matrix", 0.0),
        ("negativity_matrix", 1.0),
    ] {
        for v in table.column(name).expect("column present").into_iter().flatten() {
            worst = worst.max((v - want).abs());
        }
    }
    Ok((worst, format!("{} rows", table.rows.len())))
}

fn boundary_no_decoherence() -> Outcome {
    let w = Waveform::gaussian(0.1, 1.0)?;
    let ev = Event::new(-4.0, 0.0, 0.0, 0.0);
    let mut worst = 0.0_f64;
    for (xi, theta) in [(0.0, FRAC_PI_4), (0.0, 0.0), (1.0, 0.0)] {
        let fp = FrameParams::with_boundary(1.0, xi, theta, ev)?;
        let p = WavePacket::new(&fp, 0.5)?;
        for (t1, t3) in [(0.0, 0.0), (0.7, -1.2), (-2.0, 0.4)] {
            worst = worst.max(kinematics::big_h(&fp, &p.momentum_at(t1, t3)).abs());
        }
        let u = wavepacket::ubar(&p, &w, &fp, 0.0, 5.0, 40, OmegaMethod::ExactLog)?;
        worst = worst.max(u.deficit()).max(u.phase().abs());
        let two = quantum::analytic_two_particle(&u);
        worst = worst.max(two.entropy).max((two.negativity - 1.0).abs());
    }
    Ok((worst, String::new()))
}

/// At `ϑ = π/2` nothing vanishes: `H` at `k = 0` is `cosh ξ sinh ξ`.
fn right_angle_h() -> Outcome {
    let fp = FrameParams::with_boundary(1.0, 1.0, FRAC_PI_2, Event::default())?;
    let h = kinematics::big_h(&fp, &LocalMomentum::on_shell([0.0; 3], 1.0));
    let want = 1f64.cosh() * 1f64.sinh();
    Ok((rel(h, want), format!("H = {h:.6}")))
}

fn max_rel_components(a: &[[[f64; 4]; 4]; 4], b: &[[[f64; 4]; 4]; 4]) -> f64 {
    let scale = a.iter().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

fn christoffel_oracle(n: usize) -> Outcome {
    let mut worst = 0.0_f64;
    for w in &families() {
        for ev in random_events(n, 7) {
            let an = geometry::christoffel_at(w, &ev)?;
            let fd = oracles::christoffel_fd(w, &ev, 1e-5 * w.scale())?;
            worst = worst.max(max_rel_components(&an.0, &fd.0));
        }
    }
    Ok((worst, format!("{n} events × 2 families")))
}

fn spin_connection_oracle(n: usize) -> Outcome {
    let mut worst = 0.0_f64;
    for w in &families() {
        for ev in random_events(n, 11) {
            let an = geometry::spin_connection_at(w, &ev)?;
            let def = oracles::spin_connection_definitional(w, &ev, 1e-5 * w.scale())?;
            worst = worst.max(max_rel_components(&an.0, &def.0));
        }
    }
    Ok((worst, format!("{n} events × 2 families")))
}

fn kinematic_contracts(n: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for i in 0..n {
        let w = if i % 2 == 0 {
            Waveform::gaussian(rng.random_range(0.01..0.4), rng.random_range(0.5..2.0))?
        } else {
            Waveform::sine(rng.random_range(0.01..0.4), rng.random_range(0.5..2.0))?
        };
        let fp = FrameParams::new(
            rng.random_range(0.5..2.0),
            rng.random_range(0.1..2.0),
            rng.random_range(0.05..1.5),
            Event::default(),
        )?;
        let ev = Event::new(rng.random_range(-3.0..3.0), 0.0, 0.0, rng.random_range(-3.0..3.0));
        let g = geometry::metric_at(&w, &ev)?;
        let u = kinematics::four_velocity(&w, &fp, &ev)?;
        let (a, _) = kinematics::acceleration(&w, &fp, &ev)?;
        worst = worst.max((g.dot(&u, &u) + 1.0).abs());
        worst = worst.max(g.dot(&u, &a).abs());
        let lam = kinematics::lorentz_generator(&w, &fp, &ev)?;
        for (x, row) in lam.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                worst = worst.max((MINKOWSKI[x][x] * v + MINKOWSKI[y][y] * lam[y][x]).abs());
            }
        }
        let p = WavePacket::new(&fp, 0.5)?;
        let k = p.momentum_at(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let phi = kinematics::wigner_generator(&w, &fp, &ev, &k)?;
        let want = -kinematics::big_g(&w, &fp, &ev)? * kinematics::big_h(&fp, &k);
        worst = worst.max((phi[1][3] - want).abs());
    }
    Ok((worst, format!("{n} samples")))
}

fn omega_oracle() -> Outcome {
    let w = Waveform::gaussian(0.01, 1.0)?;
    let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-4.0, 0.0, 0.0, 0.0))?;
    let p = WavePacket::new(&fp, 0.5)?;
    let mut worst = 0.0_f64;
    for tau_f in [2.0, 5.6, 9.0] {
        for (t1, t3) in [(0.0, 0.0), (1.0, -0.5)] {
            let k = p.momentum_at(t1, t3);
            let closed = kinematics::omega(&w, &fp, 0.0, tau_f, &k, OmegaMethod::ExactLog)?.omega;
            let quad = oracles::omega_simpson(&w, &fp, 0.0, tau_f, &k, 200)?;
            worst = worst.max(rel(closed, quad));
        }
    }
    Ok((worst, "A = 0.01, 200 Simpson panels".into()))
}

fn test_factors() -> gwdeco::Result<Vec<ChannelU>> {
    let s = shipped("gaussian_a1e-1");
    let t = &s.config.time;
    let peak = 0.5 * (t.tau_i + t.tau_f);
    let scenario = wavepacket::ubar(&s.packet, &s.waveform, &s.frame, t.tau_i, peak, 40, OmegaMethod::ExactLog)?;
    Ok(vec![
        ChannelU::from_complex(0.8, 0.3)?,
        ChannelU::from_complex(0.2, -0.9)?,
        ChannelU::new(scenario),
    ])
}

fn table_diff(table_fn: ChannelTableFn, u: &ChannelU, ens: &oracles::Ensemble) -> f64 {
    let mut worst = 0.0_f64;
    for b in BasisOp::ALL {
        let got = table_fn(u, b);
        let want = oracles::rotation_average_table(ens, b);
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((got[i][j] - want[i][j]).abs());
            }
        }
    }
    worst
}

fn channel_table_oracle(table_fn: ChannelTableFn) -> Outcome {
    let mut worst = 0.0_f64;
    for u in test_factors()? {
        let ens = oracles::two_point_ensemble(u.0.c_bar(), u.0.s_bar());
        worst = worst.max(table_diff(table_fn, &u, &ens));
    }
    // the packet's own angle distribution
    let s = shipped("sine_a1e-1");
    let t = &s.config.time;
    let u = ChannelU::new(wavepacket::ubar(&s.packet, &s.waveform, &s.frame, t.tau_i, 1.3, 40, OmegaMethod::ExactLog)?);
    let ens = oracles::scenario_ensemble(&s.packet, &s.waveform, &s.frame, t.tau_i, 1.3, 40, OmegaMethod::ExactLog)?;
    worst = worst.max(table_diff(table_fn, &u, &ens));
    Ok((worst, String::new()))
}

fn channel_apply_oracle(table_fn: ChannelTableFn) -> Outcome {
    let mut worst = 0.0_f64;
    let rho = quantum::ghz(3)?;
    for u in test_factors()? {
        let ens = oracles::two_point_ensemble(u.0.c_bar(), u.0.s_bar());
        for q in 0..3 {
            let got = quantum::apply_channel_with(&u, &rho, q, table_fn);
            let want = oracles::rotation_average_apply(&ens, &rho, q);
            match got {
                Ok(g) => {
                    for (x, y) in g.matrix().iter().zip(want.iter()) {
                        worst = worst.max((x - y).norm());
                    }
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    Ok((worst, String::new()))
}

fn factor_at_amplitude(a: f64) -> gwdeco::Result<gwdeco::DecoherenceFactor> {
    let w = Waveform::gaussian(a, 1.0)?;
    let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-4.0, 0.0, 0.0, 0.0))?;
    let p = WavePacket::new(&fp, 0.5)?;
    wavepacket::ubar(&p, &w, &fp, 0.0, 4.0 / fp.phase_rate(), 40, OmegaMethod::ExactLog)
}

fn bell_pair_identities() -> Outcome {
    let mut worst = 0.0_f64;
    for a in [1e-3, 1e-2, 1e-1] {
        let d = factor_at_amplitude(a)?;
        let abs_sq = d.c_bar().powi(2) + d.s_bar().powi(2);
        let rho = quantum::evolve_ghz(2, &ChannelU::new(d))?;
        let ev = rho.eigenvalues()?;
        let want = [0.0, 0.0, 0.5 * (1.0 - abs_sq), 0.5 * (1.0 + abs_sq)];
        let mut want = want.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in ev.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
        let s = quantum::von_neumann_entropy(&rho)?;
        worst = worst.max((s - quantum::binary_entropy(0.5 * (1.0 - abs_sq))).abs());
        worst = worst.max((quantum::negativity(&rho, &[0])? - abs_sq).abs());
    }
    Ok((worst, "A ∈ {1e-3, 1e-2, 1e-1}".into()))
}

fn single_particle_identity() -> Outcome {
    let mut worst = 0.0_f64;
    for a in [1e-3, 1e-2, 1e-1] {
        let d = factor_at_amplitude(a)?;
        let rho = quantum::evolve_single(&ChannelU::new(d))?;
        let s = quantum::von_neumann_entropy(&rho)?;
        let abs = d.c_bar().hypot(d.s_bar());
        worst = worst.max((s - quantum::binary_entropy(0.5 * (1.0 - abs))).abs());
        worst = worst.max((s - quantum::analytic_single_particle_entropy(&d)).abs());
    }
    Ok((worst, String::new()))
}

fn swap_inputs() -> gwdeco::Result<Vec<ChannelU>> {
    Ok(vec![
        ChannelU::from_complex(0.9, 0.2)?,
        ChannelU::from_complex(0.75, -0.1)?,
        ChannelU::new(factor_at_amplitude(0.1)?),
    ])
}

fn swap_probabilities() -> Outcome {
    let mut worst = 0.0_f64;
    for u in swap_inputs()? {
        let rho = quantum::evolve_ghz(2, &u)?;
        let report = swapping::outcome_equivalence_check(&rho, &rho)?;
        for p in report.probabilities {
            worst = worst.max((p - 0.25).abs());
        }
    }
    Ok((worst, String::new()))
}

fn swap_powers() -> Outcome {
    let mut worst = 0.0_f64;
    for u in swap_inputs()? {
        let abs_sq = u.0.c_bar().powi(2) + u.0.s_bar().powi(2);
        let ladder = swapping::swap_ladder(&u, 2, gwdeco::Track::Matrix, 0)?;
        for (level, power) in [(1, 2), (2, 4)] {
            let n = ladder[level].matrix_negativity.expect("matrix track");
            worst = worst.max(rel(n, abs_sq.powi(power)));
        }
    }
    Ok((worst, "|ū|² ≥ 0.5".into()))
}

fn swap_independence() -> Outcome {
    let mut worst = 0.0_f64;
    for u in swap_inputs()? {
        let rho = quantum::evolve_ghz(2, &u)?;
        worst = worst.max(swapping::outcome_equivalence_check(&rho, &rho)?.max_difference);
    }
    Ok((worst, String::new()))
}

fn deficit_series() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [1u64, 2, 3, 8, 1000, 1 << 20, 1 << 40] {
        worst = worst.max(rel(deficit_pow(1e-42, n), oracles::deficit_pow_series(1e-42, n)));
    }
    Ok((worst, "δ = 1e-42".into()))
}

fn track_agreement() -> Outcome {
    let d = factor_at_amplitude(1e-2)?;
    let rho = quantum::evolve_ghz(2, &ChannelU::new(d))?;
    let matrix = 1.0 - quantum::negativity(&rho, &[0])?;
    let deficit = quantum::analytic_two_particle(&d).negativity_deficit;
    Ok((rel(matrix, deficit), format!("negativity deficit {deficit:.3e}")))
}

fn quadrature_convergence() -> Outcome {
    let mut worst = 0.0_f64;
    for name in ["gaussian_a1e-1", "sine_a1e-6", "gaussian_a1e-21"] {
        let s = shipped(name);
        let t = &s.config.time;
        let tau = 0.4 * (t.tau_f - t.tau_i) + t.tau_i;
        let lo = wavepacket::ubar(&s.packet, &s.waveform, &s.frame, t.tau_i, tau, 40, s.config.omega_method)?;
        let hi = wavepacket::ubar(&s.packet, &s.waveform, &s.frame, t.tau_i, tau, 80, s.config.omega_method)?;
        worst = worst
            .max(rel(lo.deficit(), hi.deficit()))
            .max(rel(lo.re_deficit(), hi.re_deficit()))
            .max(rel(lo.s_bar(), hi.s_bar()));
    }
    Ok((worst, "orders 40 vs 80".into()))
}

fn monte_carlo(level: Level) -> Outcome {
    let samples = level.pick(100_000, 1_000_000);
    let names: &[&str] = level.pick(&["gaussian_a1e-1"][..], &["gaussian_a1e-1", "sine_a1e-1", "gaussian_a1e-6"][..]);
    let mut worst = 0.0_f64;
    for name in names {
        let s = shipped(name);
        let t = &s.config.time;
        let tau = 0.4 * (t.tau_f - t.tau_i) + t.tau_i;
        let gh = wavepacket::ubar(&s.packet, &s.waveform, &s.frame, t.tau_i, tau, 40, s.config.omega_method)?;
        let mc = wavepacket::ubar_mc(
            &s.packet,
            &s.waveform,
            &s.frame,
            t.tau_i,
            tau,
            samples,
            wavepacket::DEFAULT_SEED,
            s.config.omega_method,
        )?;
        for (a, b, se) in [
            (gh.re_deficit(), mc.factor.re_deficit(), mc.re_deficit_se),
            (gh.s_bar(), mc.factor.s_bar(), mc.im_se),
            (gh.abs_sq_deficit(), mc.factor.abs_sq_deficit(), mc.abs_sq_deficit_se),
        ] {
            worst = worst.max((a - b).abs() / se);
        }
    }
    Ok((worst, format!("{samples} samples per scenario, {} scenarios", names.len())))
}

fn amplitude_scaling() -> Outcome {
    let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-4.0, 0.0, 0.0, 0.0))?;
    let p = WavePacket::new(&fp, 0.5)?;
    let tau = 4.0 / fp.phase_rate();
    let d = |a: f64| -> gwdeco::Result<f64> {
        let w = Waveform::gaussian(a, 1.0)?;
        Ok(wavepacket::ubar(&p, &w, &fp, 0.0, tau, 40, OmegaMethod::FirstOrder)?.deficit())
    };
    let ratio = d(2e-6)? / d(1e-6)?;
    Ok(((ratio - 4.0).abs(), format!("δ(2A)/δ(A) = {ratio:.12}")))
}

fn ghz_equivalence(max_n: usize, table_fn: ChannelTableFn) -> Outcome {
    let mut worst = 0.0_f64;
    for u in test_factors()? {
        for n in 2..=max_n {
            let direct = quantum::evolve_ghz(n, &u)?;
            let mut seq = quantum::ghz(n)?;
            for q in 0..n {
                seq = quantum::apply_channel_with(&u, &seq, q, table_fn)?;
            }
            for (x, y) in direct.matrix().iter().zip(seq.matrix().iter()) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    Ok((worst, format!("N ≤ {max_n}")))
}

fn eigen_oracle(count: u64) -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 8;
        let mut m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let got = gwdeco::quantum::eigen::herm_eigenvalues(&m)?;
        let want = oracles::eigenvalues_bisection(&m);
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    Ok((worst, format!("{count} random 8×8")))
}

fn config_round_trip() -> Outcome {
    let mut mismatches = 0.0;
    for (_, text) in SHIPPED {
        let a = ScenarioConfig::from_json(text).map_err(|e| gwdeco::Error::Domain(e.to_string()))?;
        let b = ScenarioConfig::from_json(&a.to_json()).map_err(|e| gwdeco::Error::Domain(e.to_string()))?;
        if a != b {
            mismatches += 1.0;
        }
    }
    Ok((mismatches, "shipped configs".into()))
}
