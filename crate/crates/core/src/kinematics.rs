//! Forced worldline, local Lorentz and Wigner generators, and the
//! accumulated spin-rotation angle `Ω`.
//!
//! The particle moves with four-velocity
//! `u^μ = (cosh ξ, sinh ξ sin ϑ / √(1+f), 0, sinh ξ cos ϑ)`, so its local
//! four-momentum `q^a = m (cosh ξ, sinh ξ sin ϑ, 0, sinh ξ cos ϑ)` is constant
//! in the static frames. Along the worldline the Wigner generator has a
//! single independent entry, `φ^1_3 = -G·H(k)`, and because
//! `G = -F = -d/dτ ln√(1+f)` the angle integrates in closed form:
//! `Ω = H(k) [ln√(1+f_f) - ln√(1+f_i)]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{self, Event, LocalGeometry, Mat4, Vec4, WaveSample, MINKOWSKI};
use crate::waveform::Waveform;

/// Particle and frame configuration. `ξ` is the local rapidity
/// (`tanh ξ = v`), `ϑ` the angle between the motion and the `z` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameParams {
    mass: f64,
    rapidity: f64,
    theta: f64,
    initial: Event,
    allow_boundary: bool,
}

impl FrameParams {
    /// Requires `m > 0`, `ξ > 0`, and `0 < ϑ < π/2`.
    pub fn new(mass: f64, rapidity: f64, theta: f64, initial: Event) -> Result<Self> {
        Self::build(mass, rapidity, theta, initial, false)
    }

    /// Also admits `ξ = 0` and `ϑ ∈ {0, π/2}`, where the effect is forced to
    /// vanish. Meant for null tests.
    pub fn with_boundary(mass: f64, rapidity: f64, theta: f64, initial: Event) -> Result<Self> {
        Self::build(mass, rapidity, theta, initial, true)
    }

    fn build(mass: f64, rapidity: f64, theta: f64, initial: Event, allow_boundary: bool) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::param("mass", format!("must be positive, got {mass}")));
        }
        if !(rapidity.is_finite() && rapidity >= 0.0) {
            return Err(Error::param("rapidity", format!("must be non-negative, got {rapidity}")));
        }
        if rapidity == 0.0 && !allow_boundary {
            return Err(Error::param(
                "rapidity",
                "rapidity 0 is a boundary case; enable allow_boundary",
            ));
        }
        if !theta.is_finite() || !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::param("theta", format!("must lie in [0, π/2], got {theta}")));
        }
        if (theta == 0.0 || theta == FRAC_PI_2) && !allow_boundary {
            return Err(Error::param(
                "theta",
                "theta on the boundary of (0, π/2); enable allow_boundary",
            ));
        }
        let c = initial.coords();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("initial", "event coordinates must be finite"));
        }
        Ok(FrameParams {
            mass,
            rapidity,
            theta,
            initial,
            allow_boundary,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn rapidity(&self) -> f64 {
        self.rapidity
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn initial(&self) -> Event {
        self.initial
    }

    pub fn allows_boundary(&self) -> bool {
        self.allow_boundary
    }

    /// `du/dτ = cosh ξ - sinh ξ cos ϑ`, constant along the worldline.
    pub fn phase_rate(&self) -> f64 {
        self.rapidity.cosh() - self.rapidity.sinh() * self.theta.cos()
    }

    /// Phase `u(τ) = t(τ) - z(τ)`, with `τ = 0` at the initial event.
    pub fn phase_at(&self, tau: f64) -> f64 {
        self.initial.phase() + tau * self.phase_rate()
    }

    /// Local-frame four-momentum `q^a` of the packet centre.
    pub fn local_momentum(&self) -> Vec4 {
        let (sh, ch) = (self.rapidity.sinh(), self.rapidity.cosh());
        let (s, c) = self.theta.sin_cos();
        let m = self.mass;
        [m * ch, m * sh * s, 0.0, m * sh * c]
    }

    /// Spatial part of [`FrameParams::local_momentum`].
    pub fn center_momentum(&self) -> LocalMomentum {
        let q = self.local_momentum();
        LocalMomentum {
            k: [q[1], q[2], q[3]],
            energy: q[0],
        }
    }
}

/// Spatial local-frame momentum with its energy `k⁰`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMomentum {
    pub k: [f64; 3],
    pub energy: f64,
}

impl LocalMomentum {
    pub fn on_shell(k: [f64; 3], mass: f64) -> Self {
        let energy = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt();
        LocalMomentum { k, energy }
    }

    /// Momentum with an explicit energy, unchecked. Off-shell values are
    /// rejected by the operations that consume them.
    pub fn with_energy(energy: f64, k: [f64; 3]) -> Self {
        LocalMomentum { k, energy }
    }

    pub fn is_on_shell(&self, mass: f64) -> bool {
        let e2 = self.k.iter().map(|v| v * v).sum::<f64>() + mass * mass;
        self.energy > 0.0 && (self.energy * self.energy - e2).abs() <= 1e-12 * e2
    }

    fn require_on_shell(&self, mass: f64) -> Result<()> {
        if self.is_on_shell(mass) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "momentum {:?} with energy {} is off shell for mass {mass}",
                self.k, self.energy
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMethod {
    /// `H·[ln√(1+f_f) - ln√(1+f_i)]`.
    #[default]
    ExactLog,
    /// `½[f_f - f_i]·H`.
    FirstOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerAngle {
    pub omega: f64,
    pub method: OmegaMethod,
}

pub fn four_velocity(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<Vec4> {
    let s = WaveSample::at(w, ev)?;
    Ok(velocity_from(fp, &s))
}

fn velocity_from(fp: &FrameParams, s: &WaveSample) -> Vec4 {
    let (sh, ch) = (fp.rapidity.sinh(), fp.rapidity.cosh());
    let (st, ct) = fp.theta.sin_cos();
    [ch, sh * st / (1.0 + s.f).sqrt(), 0.0, sh * ct]
}

/// Position on the forced worldline after proper time `tau`.
pub fn trajectory(w: &Waveform, fp: &FrameParams, tau: f64) -> Result<Event> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::param("tau", format!("must be non-negative, got {tau}")));
    }
    let (sh, ch) = (fp.rapidity.sinh(), fp.rapidity.cosh());
    let (st, ct) = fp.theta.sin_cos();
    let ev0 = fp.initial;
    let vx = sh * st;
    let dx = if tau == 0.0 || vx == 0.0 {
        0.0
    } else {
        let integrand = |s: f64| -> Result<f64> {
            let f = w.eval(fp.phase_at(s))?;
            Ok(vx / (1.0 + f).sqrt())
        };
        adaptive_simpson(integrand, 0.0, tau, 1e-13 * vx * tau)?
    };
    Ok(Event::new(ev0.t + tau * ch, ev0.x + dx, ev0.y, ev0.z + tau * sh * ct))
}

fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    const MAX_DEPTH: u32 = 40;
    const MAX_EVALS: usize = 2_000_000;

    struct State<F> {
        f: F,
        evals: usize,
        worst: f64,
    }

    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> Result<f64>>(
        st: &mut State<F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = (st.f)(lm)?;
        let frm = (st.f)(rm)?;
        st.evals += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if diff.abs() <= 15.0 * tol || depth == 0 || st.evals > MAX_EVALS {
            if diff.abs() > 15.0 * tol {
                st.worst = st.worst.max(diff.abs());
            }
            return Ok(left + right + diff / 15.0);
        }
        Ok(step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }

    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut st = State { f, evals: 3, worst: 0.0 };
    let out = step(&mut st, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)?;
    if st.worst > 0.0 && st.worst > 1e3 * tol {
        return Err(Error::Numerical(format!(
            "adaptive Simpson on [{a}, {b}] did not converge: residual {:e} vs tolerance {:e} after {} evaluations",
            st.worst, tol, st.evals
        )));
    }
    Ok(out)
}

/// `F = d/dτ ln√(1+f)` along the worldline.
pub fn big_f(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<f64> {
    let s = WaveSample::at(w, ev)?;
    Ok(f_from(fp, &s))
}

fn f_from(fp: &FrameParams, s: &WaveSample) -> f64 {
    // (cosh ξ ∂_t + sinh ξ cos ϑ ∂_z) with ∂_z = -∂_t on functions of t - z
    fp.phase_rate() * s.dlog_plus()
}

/// `G = (sinh ξ cos ϑ ∂_t + cosh ξ ∂_z) ln√(1+f)`, identically `-F`.
pub fn big_g(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<f64> {
    let s = WaveSample::at(w, ev)?;
    Ok(g_from(fp, &s))
}

fn g_from(fp: &FrameParams, s: &WaveSample) -> f64 {
    let (sh, ch) = (fp.rapidity.sinh(), fp.rapidity.cosh());
    (sh * fp.theta.cos() - ch) * s.dlog_plus()
}

/// Coordinate acceleration `a^μ` and its local image `a^a`.
pub fn acceleration(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<(Vec4, Vec4)> {
    let s = WaveSample::at(w, ev)?;
    Ok(acceleration_from(fp, &s))
}

fn acceleration_from(fp: &FrameParams, s: &WaveSample) -> (Vec4, Vec4) {
    let sh = fp.rapidity.sinh();
    let st = fp.theta.sin();
    let lt = s.dlog_plus();
    let side = sh * st;
    let f = f_from(fp, s);
    let local = [side * side * lt, f * side, 0.0, side * side * lt];
    let coord = [local[0], local[1] / (1.0 + s.f).sqrt(), 0.0, local[3]];
    (coord, local)
}

/// Closed-form `λ^a_b` indexed `[a][b]`.
pub fn lorentz_generator(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<Mat4> {
    let s = WaveSample::at(w, ev)?;
    Ok(lorentz_from(fp, &s))
}

fn lorentz_from(fp: &FrameParams, s: &WaveSample) -> Mat4 {
    let (sh, ch) = (fp.rapidity.sinh(), fp.rapidity.cosh());
    let (st, ct) = fp.theta.sin_cos();
    let g = g_from(fp, s);
    let mut l = [[0.0; 4]; 4];
    l[0][1] = sh * sh * ct * st * g;
    l[1][0] = l[0][1];
    l[0][3] = -sh * sh * st * st * g;
    l[3][0] = l[0][3];
    l[1][3] = -ch * sh * st * g;
    l[3][1] = -l[1][3];
    l
}

/// `λ^a_b = -[a^a q_b - q^a a_b]/m + χ^a_b` with `χ^a_b = -u^μ ω^a_{μb}`,
/// assembled from the geometry rather than the closed form.
pub fn lorentz_generator_definitional(w: &Waveform, fp: &FrameParams, ev: &Event) -> Result<Mat4> {
    let geo = LocalGeometry::at(w, ev)?;
    let u = velocity_from(fp, &geo.sample);
    let (_, a_up) = acceleration_from(fp, &geo.sample);
    let q_up = geometry::to_local(&geo.vierbein, &u).map(|v| v * fp.mass);
    let lower = |v: &Vec4| -> Vec4 { std::array::from_fn(|i| MINKOWSKI[i][i] * v[i]) };
    let (q_dn, a_dn) = (lower(&q_up), lower(&a_up));
    let mut l = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let chi: f64 = -(0..4)
                .map(|mu| u[mu] * geo.spin_connection.get(a, mu, b))
                .sum::<f64>();
            l[a][b] = -(a_up[a] * q_dn[b] - q_up[a] * a_dn[b]) / fp.mass + chi;
        }
    }
    Ok(l)
}

/// `φ^a_b` for a packet component of momentum `k`, from the general
/// boost-correction formula applied to the closed-form `λ`.
pub fn wigner_generator(
    w: &Waveform,
    fp: &FrameParams,
    ev: &Event,
    k: &LocalMomentum,
) -> Result<Mat4> {
    k.require_on_shell(fp.mass)?;
    let lam = lorentz_generator(w, fp, ev)?;
    let denom = k.energy + fp.mass;
    let mut phi = [[0.0; 4]; 4];
    for i in 1..4 {
        for j in 1..4 {
            // k_j = k^j and λ_{j0} = λ^j_0 for spatial indices
            phi[i][j] = lam[i][j] + (lam[i][0] * k.k[j - 1] - k.k[i - 1] * lam[j][0]) / denom;
        }
    }
    Ok(phi)
}

/// `H(k) = (1 - (k¹ sin ϑ + k³ cos ϑ) tanh ξ / (k⁰ + m)) cosh ξ sinh ξ sin ϑ`.
pub fn big_h(fp: &FrameParams, k: &LocalMomentum) -> f64 {
    let (st, ct) = fp.theta.sin_cos();
    let xi = fp.rapidity;
    let proj = (k.k[0] * st + k.k[2] * ct) / (k.energy + fp.mass);
    (1.0 - proj * xi.tanh()) * xi.cosh() * xi.sinh() * st
}

/// Change of `ln√(1+f)` (or its first-order form `½Δf`) between phases
/// `u_i` and `u_f`. Multiplying by `H(k)` gives `Ω`.
pub fn log_factor_change(w: &Waveform, u_i: f64, u_f: f64, method: OmegaMethod) -> Result<f64> {
    let fi = w.eval(u_i)?;
    let ff = w.eval(u_f)?;
    Ok(match method {
        OmegaMethod::FirstOrder => 0.5 * (ff - fi),
        OmegaMethod::ExactLog => half_log_ratio(fi, ff),
    })
}

/// `½[ln(1+ff) - ln(1+fi)]`; for tiny profiles the ratio form keeps the
/// relative accuracy of `ff - fi`.
pub fn half_log_ratio(fi: f64, ff: f64) -> f64 {
    if fi.abs().max(ff.abs()) < 1e-8 {
        0.5 * ((ff - fi) / (1.0 + fi)).ln_1p()
    } else {
        0.5 * (ff.ln_1p() - fi.ln_1p())
    }
}

/// Rotation angle accumulated between proper times `tau_i` and `tau_f`.
pub fn omega(
    w: &Waveform,
    fp: &FrameParams,
    tau_i: f64,
    tau_f: f64,
    k: &LocalMomentum,
    method: OmegaMethod,
) -> Result<WignerAngle> {
    if !(tau_i.is_finite() && tau_f.is_finite() && tau_f >= tau_i) {
        return Err(Error::param(
            "tau",
            format!("need finite tau_f >= tau_i, got [{tau_i}, {tau_f}]"),
        ));
    }
    k.require_on_shell(fp.mass)?;
    let dl = log_factor_change(w, fp.phase_at(tau_i), fp.phase_at(tau_f), method)?;
    Ok(WignerAngle {
        omega: big_h(fp, k) * dl,
        method,
    })
}

/// Spin-½ representation `exp(-iσ²Ω/2)`, a real rotation about the spin
/// `y` axis, rows `[[cos, -sin], [sin, cos]]` of `Ω/2`.
pub fn wigner_matrix(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = (0.5 * angle).sin_cos();
    [[c, -s], [s, c]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn frame(xi: f64, theta: f64) -> FrameParams {
        FrameParams::new(1.0, xi, theta, Event::default()).unwrap()
    }

    #[test]
    fn frame_validation() {
        assert!(FrameParams::new(0.0, 1.0, 0.5, Event::default()).is_err());
        assert!(FrameParams::new(1.0, 0.0, 0.5, Event::default()).is_err());
        assert!(FrameParams::new(1.0, 1.0, 0.0, Event::default()).is_err());
        assert!(FrameParams::new(1.0, 1.0, FRAC_PI_2, Event::default()).is_err());
        assert!(FrameParams::new(1.0, -1.0, 0.5, Event::default()).is_err());
        assert!(FrameParams::with_boundary(1.0, 0.0, 0.0, Event::default()).is_ok());
        assert!(FrameParams::with_boundary(1.0, 1.0, 1.7, Event::default()).is_err());
    }

    #[test]
    fn rest_frame_and_flat_velocity() {
        let fp = FrameParams::with_boundary(1.0, 0.0, 0.3, Event::default()).unwrap();
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        assert_eq!(four_velocity(&g, &fp, &Event::default()).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        let u = four_velocity(&Waveform::zero(), &frame(1.0, FRAC_PI_4), &Event::default()).unwrap();
        let e = [1f64.cosh(), 1f64.sinh() / 2f64.sqrt(), 0.0, 1f64.sinh() / 2f64.sqrt()];
        for i in 0..4 {
            assert!((u[i] - e[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn trajectory_basics() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let fp = FrameParams::new(1.0, 0.7, 0.4, Event::new(-2.0, 0.5, 0.25, 1.0)).unwrap();
        assert_eq!(trajectory(&g, &fp, 0.0).unwrap(), fp.initial());
        let flat = frame(1.0, FRAC_PI_3);
        let ev = trajectory(&Waveform::zero(), &flat, 2.0).unwrap();
        assert!((ev.x - 2.0 * 1f64.sinh() * FRAC_PI_3.sin()).abs() < 1e-13);
        for i in 0..20 {
            let tau = 0.37 * i as f64;
            let ev = trajectory(&g, &fp, tau).unwrap();
            assert!((ev.phase() - fp.phase_at(tau)).abs() < 1e-13);
            assert_eq!(ev.y, 0.25);
        }
        assert!(trajectory(&g, &fp, -1.0).is_err());
    }

    #[test]
    fn trajectory_x_follows_velocity() {
        // dx/dτ must equal u^x at the reached event
        let g = Waveform::gaussian(0.2, 0.8).unwrap();
        let fp = FrameParams::new(1.0, 0.9, 1.1, Event::new(-1.0, 0.0, 0.0, 0.0)).unwrap();
        let h = 1e-4;
        for tau in [0.3, 1.0, 1.7] {
            let a = trajectory(&g, &fp, tau - h).unwrap();
            let b = trajectory(&g, &fp, tau + h).unwrap();
            let ux = four_velocity(&g, &fp, &trajectory(&g, &fp, tau).unwrap()).unwrap()[1];
            assert!(((b.x - a.x) / (2.0 * h) - ux).abs() < 1e-8);
        }
    }

    #[test]
    fn velocity_norm_and_orthogonality() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let fp = frame(1.0, FRAC_PI_4);
        let ev = Event::new(0.5, 0.0, 0.0, 0.0);
        let m = geometry::metric_at(&g, &ev).unwrap();
        let u = four_velocity(&g, &fp, &ev).unwrap();
        let (a, a_loc) = acceleration(&g, &fp, &ev).unwrap();
        assert!((m.dot(&u, &u) + 1.0).abs() < 1e-12);
        assert!(m.dot(&u, &a).abs() < 1e-12);
        let v = geometry::vierbein_at(&g, &ev).unwrap();
        let img = geometry::to_local(&v, &a);
        for i in 0..4 {
            assert!((img[i] - a_loc[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn acceleration_vanishes_when_flat_or_aligned() {
        let fp = frame(1.0, 0.5);
        let (a, b) = acceleration(&Waveform::zero(), &fp, &Event::new(0.3, 0.0, 0.0, 0.1)).unwrap();
        assert!(a.iter().chain(b.iter()).all(|v| *v == 0.0));
        let aligned = FrameParams::with_boundary(1.0, 1.0, 0.0, Event::default()).unwrap();
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let (a, _) = acceleration(&g, &aligned, &Event::new(0.5, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(a[1], 0.0);
    }

    #[test]
    fn f_and_g() {
        let s = Waveform::sine(0.01, 1.0).unwrap();
        let fp = frame(1.0, FRAC_PI_4);
        let ev = Event::default();
        let f = big_f(&s, &fp, &ev).unwrap();
        let expect = (1f64.cosh() - 1f64.sinh() * FRAC_PI_4.cos()) * (0.01 / 2.0);
        assert!((f - expect).abs() < 1e-17);
        // finite difference of ln√(1+f) along the worldline
        let h = 1e-5;
        let l = |tau: f64| 0.5 * s.eval(fp.phase_at(tau)).unwrap().ln_1p();
        let fd = (l(h) - l(-h)) / (2.0 * h);
        assert!((fd - f).abs() < 1e-10 * f.abs());
        for i in 0..30 {
            let ev = Event::new(0.21 * i as f64, 0.0, 0.0, -0.13 * i as f64);
            let sum = big_f(&s, &fp, &ev).unwrap() + big_g(&s, &fp, &ev).unwrap();
            assert!(sum.abs() < 1e-17);
        }
        assert_eq!(big_f(&Waveform::zero(), &fp, &ev).unwrap(), 0.0);
    }

    #[test]
    fn lorentz_generator_cases() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let ev = Event::new(0.3, 0.0, 0.0, 0.0);
        let zero = lorentz_generator(&Waveform::zero(), &frame(1.0, 0.5), &ev).unwrap();
        assert!(zero.iter().flatten().all(|v| *v == 0.0));
        let rest = FrameParams::with_boundary(1.0, 0.0, 0.5, Event::default()).unwrap();
        assert!(lorentz_generator(&g, &rest, &ev).unwrap().iter().flatten().all(|v| *v == 0.0));
        let fp = frame(1.0, FRAC_PI_4);
        let closed = lorentz_generator(&g, &fp, &ev).unwrap();
        let def = lorentz_generator_definitional(&g, &fp, &ev).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!((closed[a][b] - def[a][b]).abs() < 1e-10, "[{a}][{b}]");
                let la = MINKOWSKI[a][a] * closed[a][b];
                let lb = MINKOWSKI[b][b] * closed[b][a];
                assert!((la + lb).abs() < 1e-12);
            }
        }
        assert!(closed[0][1] != 0.0 && closed[1][3] != 0.0);
    }

    #[test]
    fn wigner_generator_reduces_to_h() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let fp = FrameParams::new(1.3, 0.8, 0.6, Event::default()).unwrap();
        let ev = Event::new(0.4, 0.0, 0.0, 0.1);
        let gg = big_g(&g, &fp, &ev).unwrap();
        let q = fp.center_momentum();
        let phi = wigner_generator(&g, &fp, &ev, &q).unwrap();
        assert!((phi[1][3] + gg * big_h(&fp, &q)).abs() < 1e-15);
        for i in 0..4 {
            assert_eq!(phi[0][i], 0.0);
            assert_eq!(phi[i][0], 0.0);
        }
        let phi0 = wigner_generator(&Waveform::zero(), &fp, &ev, &q).unwrap();
        assert!(phi0.iter().flatten().all(|v| *v == 0.0));
        let off = LocalMomentum::with_energy(1.0, [1.0, 0.0, 0.0]);
        assert!(matches!(wigner_generator(&g, &fp, &ev, &off), Err(Error::Domain(_))));
    }

    #[test]
    fn big_h_values() {
        let rest = FrameParams::with_boundary(1.0, 0.0, 0.7, Event::default()).unwrap();
        assert_eq!(big_h(&rest, &LocalMomentum::on_shell([0.3, 0.0, 0.2], 1.0)), 0.0);
        let aligned = FrameParams::with_boundary(1.0, 1.0, 0.0, Event::default()).unwrap();
        assert_eq!(big_h(&aligned, &LocalMomentum::on_shell([0.3, 0.0, 0.2], 1.0)), 0.0);
        let side = FrameParams::with_boundary(1.0, 1.0, FRAC_PI_2, Event::default()).unwrap();
        let h = big_h(&side, &LocalMomentum::on_shell([0.0; 3], 1.0));
        // cosh 1 · sinh 1 = sinh(2)/2
        assert!((h - 2f64.sinh() / 2.0).abs() < 1e-15);
        assert!((h - 1.813430).abs() < 1e-6);
    }

    #[test]
    fn omega_properties() {
        let fp = frame(1.0, FRAC_PI_4);
        let q = fp.center_momentum();
        for m in [OmegaMethod::ExactLog, OmegaMethod::FirstOrder] {
            assert_eq!(omega(&Waveform::zero(), &fp, 0.0, 5.0, &q, m).unwrap().omega, 0.0);
        }
        // one full period of the phase
        let s = Waveform::sine(0.05, 1.0).unwrap();
        let period = 2.0 * PI / fp.phase_rate();
        let o = omega(&s, &fp, 0.0, period, &q, OmegaMethod::ExactLog).unwrap();
        assert!(o.omega.abs() < 1e-15);
        assert!(omega(&s, &fp, 2.0, 1.0, &q, OmegaMethod::ExactLog).is_err());
    }

    #[test]
    fn omega_first_order_within_taylor_bound() {
        let a = 0.1;
        let g = Waveform::gaussian(a, 1.0).unwrap();
        let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-3.0, 0.0, 0.0, 0.0)).unwrap();
        let q = fp.center_momentum();
        let h = big_h(&fp, &q);
        for i in 1..=60 {
            let tau = 0.15 * i as f64;
            let ex = omega(&g, &fp, 0.0, tau, &q, OmegaMethod::ExactLog).unwrap().omega;
            let fo = omega(&g, &fp, 0.0, tau, &q, OmegaMethod::FirstOrder).unwrap().omega;
            assert!((ex - fo).abs() <= 0.5 * a * a * h.abs());
        }
    }

    #[test]
    fn omega_additive() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let fp = FrameParams::new(1.0, 1.0, 0.9, Event::new(-2.0, 0.0, 0.0, 0.0)).unwrap();
        let k = LocalMomentum::on_shell([0.3, 0.0, -0.4], 1.0);
        for (ti, tm, tf) in [(0.0, 1.0, 3.0), (0.5, 2.5, 2.7), (1.0, 2.0, 6.0)] {
            let a = omega(&g, &fp, ti, tm, &k, OmegaMethod::ExactLog).unwrap().omega;
            let b = omega(&g, &fp, tm, tf, &k, OmegaMethod::ExactLog).unwrap().omega;
            let c = omega(&g, &fp, ti, tf, &k, OmegaMethod::ExactLog).unwrap().omega;
            let scale = a.abs().max(b.abs()).max(c.abs());
            assert!((a + b - c).abs() <= 1e-15 * scale, "{a} + {b} vs {c}");
        }
    }

    #[test]
    fn omega_matches_simpson_integral() {
        let g = Waveform::gaussian(0.01, 1.0).unwrap();
        let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-1.5, 0.0, 0.0, 0.0)).unwrap();
        let k = LocalMomentum::on_shell([0.5, 0.0, 0.2], 1.0);
        let closed = omega(&g, &fp, 0.0, 3.0, &k, OmegaMethod::ExactLog).unwrap().omega;
        let quad = oracles::omega_simpson(&g, &fp, 0.0, 3.0, &k, 200).unwrap();
        assert!(((closed - quad) / closed).abs() < 1e-6, "{closed} vs {quad}");
    }

    #[test]
    fn tiny_amplitude_keeps_relative_accuracy() {
        let a = 1e-21;
        let g = Waveform::gaussian(a, 1.0).unwrap();
        let fp = FrameParams::new(1.0, 1.0, FRAC_PI_4, Event::new(-1.0, 0.0, 0.0, 0.0)).unwrap();
        let q = fp.center_momentum();
        let ex = omega(&g, &fp, 0.0, 1.0, &q, OmegaMethod::ExactLog).unwrap().omega;
        let fo = omega(&g, &fp, 0.0, 1.0, &q, OmegaMethod::FirstOrder).unwrap().omega;
        assert!(ex != 0.0);
        assert!(((ex - fo) / fo).abs() < 1e-14);
    }

    #[test]
    fn wigner_matrix_rotation() {
        assert_eq!(wigner_matrix(0.0), [[1.0, 0.0], [0.0, 1.0]]);
        let r = wigner_matrix(PI);
        assert!(r[0][0].abs() < 1e-16 && r[1][1].abs() < 1e-16);
        assert!((r[0][1] + 1.0).abs() < 1e-16 && (r[1][0] - 1.0).abs() < 1e-16);
        let r = wigner_matrix(0.3);
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        assert!((det - 1.0).abs() < 1e-15);
        let dot = r[0][0] * r[0][1] + r[1][0] * r[1][1];
        assert!(dot.abs() < 1e-15);
        assert!((r[0][0].powi(2) + r[1][0].powi(2) - 1.0).abs() < 1e-15);
    }
}
