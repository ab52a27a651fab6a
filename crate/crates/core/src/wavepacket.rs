//! Gaussian momentum wave packet and the decoherence factor
//! `ū = ∫ w(k) e^{iΩ(k)} d²k`.
//!
//! The invariant measure `m d³k / k⁰` cancels the `1/√N(k)` carried by the
//! packet amplitude, and the `√δ(k²)` factor pins `k² = 0`, so the weight is
//! a plain normalized bivariate Gaussian over `(k¹, k³)`:
//! `w(k) = exp(-|k - q|²/w²) / (π w²)`.
//!
//! All outputs are carried in deficit form. At realistic amplitudes
//! `1 - |ū|` is around `1e-42`: representable as an `f64` on its own but
//! invisible once added to one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{self, FrameParams, LocalMomentum, OmegaMethod};
use crate::waveform::Waveform;

pub mod quadrature;

pub const MIN_ORDER: usize = 8;
pub const MAX_ORDER: usize = 256;
pub const DEFAULT_ORDER: usize = 40;
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Monte Carlo samples per independent ChaCha stream.
pub const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    width: f64,
    center: LocalMomentum,
    mass: f64,
}

impl WavePacket {
    /// Packet of momentum width `width` centred on the frame's local
    /// momentum.
    pub fn new(fp: &FrameParams, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::param("width", format!("packet width must be positive, got {width}")));
        }
        Ok(WavePacket {
            width,
            center: fp.center_momentum(),
            mass: fp.mass(),
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> LocalMomentum {
        self.center
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Probability density of the in-plane momentum `k` (its `k²` entry is
    /// ignored).
    pub fn weight(&self, k: &LocalMomentum) -> f64 {
        let d1 = k.k[0] - self.center.k[0];
        let d3 = k.k[2] - self.center.k[2];
        let w2 = self.width * self.width;
        (-(d1 * d1 + d3 * d3) / w2).exp() / (std::f64::consts::PI * w2)
    }

    /// On-shell momentum at standardized offsets `(t1, t3)`, i.e.
    /// `k = q + w·t`.
    pub fn momentum_at(&self, t1: f64, t3: f64) -> LocalMomentum {
        LocalMomentum::on_shell(
            [
                self.center.k[0] + self.width * t1,
                0.0,
                self.center.k[2] + self.width * t3,
            ],
            self.mass,
        )
    }
}

/// `ū` stored as `δ = 1 - |ū|` and `arg ū`, plus the raw accumulators
/// `1 - c̄` and `s̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceFactor {
    deficit: f64,
    abs_sq_deficit: f64,
    phase: f64,
    re_deficit: f64,
    im: f64,
}

impl DecoherenceFactor {
    /// `ū = 1`.
    pub fn identity() -> Self {
        DecoherenceFactor {
            deficit: 0.0,
            abs_sq_deficit: 0.0,
            phase: 0.0,
            re_deficit: 0.0,
            im: 0.0,
        }
    }

    /// From `c̄ = Re ū` and `s̄ = Im ū` directly. Loses the deficit below
    /// about `1e-16`; use only for matrix-track amplitudes.
    pub fn from_complex(c_bar: f64, s_bar: f64) -> Result<Self> {
        let abs = c_bar.hypot(s_bar);
        if !abs.is_finite() || abs > 1.0 + 1e-12 {
            return Err(Error::param("ubar", format!("|ū| = {abs} must lie in [0, 1]")));
        }
        let abs = abs.min(1.0);
        Ok(DecoherenceFactor {
            deficit: 1.0 - abs,
            abs_sq_deficit: (1.0 - abs) * (1.0 + abs),
            phase: s_bar.atan2(c_bar),
            re_deficit: 1.0 - c_bar,
            im: s_bar,
        })
    }

    /// From `δ = 1 - |ū|` and `arg ū`.
    pub fn from_deficit(deficit: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&deficit) || !phase.is_finite() {
            return Err(Error::param(
                "deficit",
                format!("need 0 <= δ <= 1 and finite phase, got δ = {deficit}, phase = {phase}"),
            ));
        }
        let half = (0.5 * phase).sin();
        Ok(DecoherenceFactor {
            deficit,
            abs_sq_deficit: deficit_sq(deficit),
            phase,
            re_deficit: deficit * phase.cos() + 2.0 * half * half,
            im: (1.0 - deficit) * phase.sin(),
        })
    }

    /// Assembles the factor from accumulators taken relative to a
    /// reference angle: `centered_re = ⟨2 sin²((Ω-Ω₀)/2)⟩`,
    /// `centered_im = ⟨sin(Ω-Ω₀)⟩`. `|ū|` is independent of `Ω₀`, and a
    /// reference near the mean angle removes the cancellation in
    /// `1 - |ū|²`.
    pub fn from_centered(
        reference: f64,
        centered_re: f64,
        centered_im: f64,
        re_deficit: f64,
        im: f64,
    ) -> Self {
        let d2 = (2.0 * centered_re - centered_re * centered_re - centered_im * centered_im)
            .clamp(0.0, 1.0);
        let deficit = d2 / (1.0 + (1.0 - d2).sqrt());
        DecoherenceFactor {
            deficit,
            abs_sq_deficit: d2,
            phase: reference + centered_im.atan2(1.0 - centered_re),
            re_deficit,
            im,
        }
    }

    /// `δ = 1 - |ū|`.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    /// `1 - |ū|²`, accurate at any amplitude.
    pub fn abs_sq_deficit(&self) -> f64 {
        self.abs_sq_deficit
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn abs(&self) -> f64 {
        1.0 - self.deficit
    }

    /// `c̄ = Re ū`.
    pub fn c_bar(&self) -> f64 {
        1.0 - self.re_deficit
    }

    /// `1 - c̄`.
    pub fn re_deficit(&self) -> f64 {
        self.re_deficit
    }

    /// `s̄ = Im ū`.
    pub fn s_bar(&self) -> f64 {
        self.im
    }

    /// Deficit of `|ū|ⁿ`.
    pub fn deficit_pow(&self, n: u64) -> f64 {
        deficit_pow(self.deficit, n)
    }
}

/// `1 - (1-δ)ⁿ` as `-expm1(n·ln1p(-δ))`, relative accuracy intact for
/// `δ` down to the subnormal range.
pub fn deficit_pow(delta: f64, n: u64) -> f64 {
    assert!(n >= 1, "deficit_pow needs n >= 1");
    -(n as f64 * (-delta).ln_1p()).exp_m1()
}

/// `1 - (1-δ)² = δ(2 - δ)`.
pub fn deficit_sq(delta: f64) -> f64 {
    delta * (2.0 - delta)
}

/// Deficit of `|ū|^(a+b)` from the deficits of `|ū|^a` and `|ū|^b`.
pub fn combine_deficits(da: f64, db: f64) -> f64 {
    da + db - da * db
}

fn check_order(order: usize) -> Result<()> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::param(
            "quadrature_order",
            format!("must lie in [{MIN_ORDER}, {MAX_ORDER}], got {order}"),
        ));
    }
    Ok(())
}

/// `ū` by tensor-product Gauss–Hermite quadrature in `(k¹, k³)`.
pub fn ubar(
    p: &WavePacket,
    w: &Waveform,
    fp: &FrameParams,
    tau_i: f64,
    tau_f: f64,
    order: usize,
    method: OmegaMethod,
) -> Result<DecoherenceFactor> {
    check_order(order)?;
    if !(tau_i.is_finite() && tau_f.is_finite() && tau_f >= tau_i) {
        return Err(Error::param("tau", format!("need tau_f >= tau_i, got [{tau_i}, {tau_f}]")));
    }
    let dl = kinematics::log_factor_change(w, fp.phase_at(tau_i), fp.phase_at(tau_f), method)?;
    let rule = quadrature::gauss_hermite(order)?;
    Ok(ubar_with_rule(p, fp, dl, &rule))
}

/// Quadrature core for a known `Δ ln√(1+f)`; shares one rule across many
/// time points.
pub fn ubar_with_rule(
    p: &WavePacket,
    fp: &FrameParams,
    log_change: f64,
    rule: &quadrature::Rule,
) -> DecoherenceFactor {
    if log_change == 0.0 {
        return DecoherenceFactor::identity();
    }
    let n = rule.nodes.len();
    let mut h = Vec::with_capacity(n * n);
    let mut wt = Vec::with_capacity(n * n);
    for (t1, w1) in rule.nodes.iter().zip(&rule.weights) {
        for (t3, w3) in rule.nodes.iter().zip(&rule.weights) {
            h.push(kinematics::big_h(fp, &p.momentum_at(*t1, *t3)));
            wt.push(w1 * w3);
        }
    }
    let total: f64 = wt.iter().sum();
    let h_mean = h.iter().zip(&wt).map(|(h, w)| h * w).sum::<f64>() / total;

    let (mut re, mut im, mut cre, mut cim) = (0.0, 0.0, 0.0, 0.0);
    for (hk, wk) in h.iter().zip(&wt) {
        let om = hk * log_change;
        let d = (hk - h_mean) * log_change;
        let (s, sh) = (om.sin(), (0.5 * om).sin());
        let (cs, csh) = (d.sin(), (0.5 * d).sin());
        re += wk * 2.0 * sh * sh;
        im += wk * s;
        cre += wk * 2.0 * csh * csh;
        cim += wk * cs;
    }
    DecoherenceFactor::from_centered(
        h_mean * log_change,
        cre / total,
        cim / total,
        re / total,
        im / total,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub factor: DecoherenceFactor,
    pub re_deficit_se: f64,
    pub im_se: f64,
    pub abs_sq_deficit_se: f64,
    pub mean_omega: f64,
    pub mean_omega_se: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    n: f64,
    x: f64,
    xx: f64,
    y: f64,
    yy: f64,
    cx: f64,
    cxx: f64,
    cy: f64,
    cyy: f64,
    cxy: f64,
    o: f64,
    oo: f64,
}

impl Sums {
    fn add(&mut self, other: &Sums) {
        self.n += other.n;
        self.x += other.x;
        self.xx += other.xx;
        self.y += other.y;
        self.yy += other.yy;
        self.cx += other.cx;
        self.cxx += other.cxx;
        self.cy += other.cy;
        self.cyy += other.cyy;
        self.cxy += other.cxy;
        self.o += other.o;
        self.oo += other.oo;
    }
}

fn mean_se(sum: f64, sq: f64, n: f64) -> (f64, f64) {
    let mean = sum / n;
    let var = ((sq - sum * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo estimate of `ū`, drawing `k` from the packet density.
///
/// Samples are split into chunks of [`MC_CHUNK`]; chunk `c` draws from
/// ChaCha8 seeded with `seed` on stream `c`, and chunk sums are combined in
/// chunk order, so the result is bit-identical for any thread count.
#[allow(clippy::too_many_arguments)]
pub fn ubar_mc(
    p: &WavePacket,
    w: &Waveform,
    fp: &FrameParams,
    tau_i: f64,
    tau_f: f64,
    n_samples: usize,
    seed: u64,
    method: OmegaMethod,
) -> Result<McEstimate> {
    if n_samples < 1000 {
        return Err(Error::param("n_samples", format!("need at least 1000, got {n_samples}")));
    }
    if !(tau_i.is_finite() && tau_f.is_finite() && tau_f >= tau_i) {
        return Err(Error::param("tau", format!("need tau_f >= tau_i, got [{tau_i}, {tau_f}]")));
    }
    let dl = kinematics::log_factor_change(w, fp.phase_at(tau_i), fp.phase_at(tau_f), method)?;
    let reference = kinematics::big_h(fp, &p.center()) * dl;
    let chunks = n_samples.div_ceil(MC_CHUNK);
    let partial: Vec<Sums> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(n_samples - c * MC_CHUNK);
            let mut s = Sums::default();
            for _ in 0..count {
                let z1: f64 = rng.sample(StandardNormal);
                let z3: f64 = rng.sample(StandardNormal);
                let k = p.momentum_at(z1 * std::f64::consts::FRAC_1_SQRT_2, z3 * std::f64::consts::FRAC_1_SQRT_2);
                let om = kinematics::big_h(fp, &k) * dl;
                let d = om - reference;
                let x = 2.0 * (0.5 * om).sin().powi(2);
                let y = om.sin();
                let cx = 2.0 * (0.5 * d).sin().powi(2);
                let cy = d.sin();
                s.n += 1.0;
                s.x += x;
                s.xx += x * x;
                s.y += y;
                s.yy += y * y;
                s.cx += cx;
                s.cxx += cx * cx;
                s.cy += cy;
                s.cyy += cy * cy;
                s.cxy += cx * cy;
                s.o += om;
                s.oo += om * om;
            }
            s
        })
        .collect();
    let mut s = Sums::default();
    for part in &partial {
        s.add(part);
    }
    let n = s.n;
    let (re, re_se) = mean_se(s.x, s.xx, n);
    let (im, im_se) = mean_se(s.y, s.yy, n);
    let (cre, cre_se) = mean_se(s.cx, s.cxx, n);
    let (cim, cim_se) = mean_se(s.cy, s.cyy, n);
    let (mean_omega, mean_omega_se) = mean_se(s.o, s.oo, n);
    // delta method for d2 = 2X - X² - Y² on the centred accumulators
    let cov = (s.cxy - s.cx * s.cy / n) / (n - 1.0) / n;
    let (gx, gy) = (2.0 - 2.0 * cre, -2.0 * cim);
    let var_d2 = gx * gx * cre_se * cre_se + gy * gy * cim_se * cim_se + 2.0 * gx * gy * cov;
    Ok(McEstimate {
        factor: DecoherenceFactor::from_centered(reference, cre, cim, re, im),
        re_deficit_se: re_se,
        im_se,
        abs_sq_deficit_se: var_d2.max(0.0).sqrt(),
        mean_omega,
        mean_omega_se,
        samples: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Event;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn frame() -> FrameParams {
        FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-4.0, 0.0, 0.0, 0.0)).unwrap()
    }

    #[test]
    fn weight_shape() {
        let fp = frame();
        let p = WavePacket::new(&fp, 0.7).unwrap();
        let peak = p.weight(&p.center());
        assert!((peak - 1.0 / (PI * 0.49)).abs() < 1e-15);
        let off = p.momentum_at(1.0, 0.0);
        assert!((p.weight(&off) - peak / std::f64::consts::E).abs() < 1e-14);
        assert!(WavePacket::new(&fp, 0.0).is_err());
    }

    #[test]
    fn weight_normalized() {
        // trapezoid on a wide uniform grid is spectrally accurate here
        let fp = frame();
        let p = WavePacket::new(&fp, 0.5).unwrap();
        let (n, half) = (401, 8.0 * 0.5);
        let h = 2.0 * half / (n - 1) as f64;
        let q = p.center();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let k = LocalMomentum::on_shell(
                    [q.k[0] - half + i as f64 * h, 0.0, q.k[2] - half + j as f64 * h],
                    1.0,
                );
                total += p.weight(&k) * h * h;
            }
        }
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn zero_wave_is_identity() {
        let fp = frame();
        let p = WavePacket::new(&fp, 1.0).unwrap();
        let u = ubar(&p, &Waveform::zero(), &fp, 0.0, 9.0, 40, OmegaMethod::ExactLog).unwrap();
        assert_eq!(u, DecoherenceFactor::identity());
        let mc = ubar_mc(&p, &Waveform::zero(), &fp, 0.0, 9.0, 5000, 1, OmegaMethod::ExactLog).unwrap();
        assert_eq!(mc.factor.deficit(), 0.0);
        assert_eq!(mc.re_deficit_se, 0.0);
        assert_eq!(mc.im_se, 0.0);
    }

    #[test]
    fn order_guard() {
        let fp = frame();
        let p = WavePacket::new(&fp, 1.0).unwrap();
        let w = Waveform::gaussian(0.1, 1.0).unwrap();
        assert!(ubar(&p, &w, &fp, 0.0, 1.0, 4, OmegaMethod::ExactLog).is_err());
        assert!(ubar(&p, &w, &fp, 0.0, 1.0, 1000, OmegaMethod::ExactLog).is_err());
    }

    #[test]
    fn narrow_packet_limit() {
        let fp = frame();
        let w = Waveform::gaussian(0.1, 1.0).unwrap();
        let p = WavePacket::new(&fp, 1e-6).unwrap();
        let u = ubar(&p, &w, &fp, 0.0, 5.0, 40, OmegaMethod::ExactLog).unwrap();
        let om = kinematics::omega(&w, &fp, 0.0, 5.0, &fp.center_momentum(), OmegaMethod::ExactLog)
            .unwrap()
            .omega;
        assert!(u.deficit() < 1e-12);
        assert!((u.phase() - om).abs() < 1e-10);
    }

    #[test]
    fn consistency_of_stored_parts() {
        let fp = frame();
        let w = Waveform::gaussian(0.1, 1.0).unwrap();
        let p = WavePacket::new(&fp, 1.0).unwrap();
        let u = ubar(&p, &w, &fp, 0.0, 5.6, 40, OmegaMethod::ExactLog).unwrap();
        let lhs = u.abs().powi(2);
        let rhs = u.c_bar().powi(2) + u.s_bar().powi(2);
        assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        assert!((u.phase() - u.s_bar().atan2(u.c_bar())).abs() < 1e-12);
        assert!((deficit_sq(u.deficit()) - u.abs_sq_deficit()).abs() < 1e-15);
    }

    #[test]
    fn matches_monte_carlo() {
        let fp = frame();
        let w = Waveform::gaussian(0.1, 1.0).unwrap();
        let p = WavePacket::new(&fp, 1.0).unwrap();
        let tau = 4.0 / fp.phase_rate();
        let u = ubar(&p, &w, &fp, 0.0, tau, 40, OmegaMethod::ExactLog).unwrap();
        let mc = ubar_mc(&p, &w, &fp, 0.0, tau, 200_000, DEFAULT_SEED, OmegaMethod::ExactLog).unwrap();
        assert!((u.re_deficit() - mc.factor.re_deficit()).abs() < 3.0 * mc.re_deficit_se);
        assert!((u.s_bar() - mc.factor.s_bar()).abs() < 3.0 * mc.im_se);
        let again = ubar_mc(&p, &w, &fp, 0.0, tau, 200_000, DEFAULT_SEED, OmegaMethod::ExactLog).unwrap();
        assert_eq!(mc, again);
    }

    #[test]
    fn deficit_pow_values() {
        assert_eq!(deficit_pow(0.0, 8), 0.0);
        assert!((deficit_pow(0.5, 2) - 0.75).abs() < 1e-16);
        assert!((deficit_pow(1e-42, 8) / 8e-42 - 1.0).abs() < 1e-12);
        assert_eq!(deficit_pow(1.0, 3), 1.0);
        assert_eq!(deficit_sq(0.0), 0.0);
        assert!((deficit_sq(0.1) - 0.19).abs() < 1e-16);
        assert!((deficit_sq(1e-21) / 2e-21 - 1.0).abs() < 1e-12);
        assert!((combine_deficits(deficit_pow(0.01, 2), deficit_pow(0.01, 4)) - deficit_pow(0.01, 6)).abs() < 1e-16);
    }

    #[test]
    fn from_deficit_round_trip() {
        let d = DecoherenceFactor::from_deficit(0.02, 0.3).unwrap();
        let c = DecoherenceFactor::from_complex(d.c_bar(), d.s_bar()).unwrap();
        assert!((c.deficit() - 0.02).abs() < 1e-15);
        assert!((c.phase() - 0.3).abs() < 1e-15);
        assert!(DecoherenceFactor::from_deficit(1.5, 0.0).is_err());
        assert!(DecoherenceFactor::from_complex(1.0, 0.5).is_err());
    }
}
