//! Plane-wave spacetime `ds² = -dt² + (1+f)dx² + (1-f)dy² + dz²`.
//!
//! Index conventions, used everywhere in this crate:
//!
//! * coordinate (Greek) indices `0..4` are `t, x, y, z`;
//! * local-frame (Latin) indices `0..4` are the static observer's
//!   orthonormal axes;
//! * [`Christoffel`] stores `Γ^μ_{νρ}` as `[μ][ν][ρ]`;
//! * [`Vierbein::to_local`] stores `e^a_μ` as `[a][μ]` and
//!   [`Vierbein::to_coord`] stores `e^μ_a` as `[μ][a]`;
//! * [`SpinConnection`] stores `ω^a_{μb}` as `[a][μ][b]`.
//!
//! First index up, the rest down, exactly as the symbols are written.

use crate::error::Result;
use crate::waveform::Waveform;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

pub const T: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;
pub const Z: usize = 3;

/// Minkowski metric `η = diag(-1, 1, 1, 1)`.
pub const MINKOWSKI: Mat4 = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Event {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Event {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Event { t, x, y, z }
    }

    /// Null phase `u = t - z`.
    pub fn phase(&self) -> f64 {
        self.t - self.z
    }

    pub fn coords(&self) -> Vec4 {
        [self.t, self.x, self.y, self.z]
    }

    pub fn from_coords(c: Vec4) -> Self {
        Event::new(c[0], c[1], c[2], c[3])
    }
}

/// `f` and `df/du` at one event, the only wave data the geometry needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub f: f64,
    pub df: f64,
}

impl WaveSample {
    pub fn at(w: &Waveform, ev: &Event) -> Result<Self> {
        let u = ev.phase();
        Ok(WaveSample {
            f: w.eval(u)?,
            df: w.deriv(u)?,
        })
    }

    /// `∂_t ln√(1+f)`; the `z` derivative is its negative.
    pub fn dlog_plus(&self) -> f64 {
        0.5 * self.df / (1.0 + self.f)
    }

    /// `∂_t ln√(1-f)`; the `z` derivative is its negative.
    pub fn dlog_minus(&self) -> f64 {
        -0.5 * self.df / (1.0 - self.f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAt {
    pub g: Mat4,
}

impl MetricAt {
    pub fn inverse(&self) -> Mat4 {
        let mut inv = [[0.0; 4]; 4];
        for (i, row) in inv.iter_mut().enumerate() {
            row[i] = 1.0 / self.g[i][i];
        }
        inv
    }

    /// `g_{μν} a^μ b^ν`.
    pub fn dot(&self, a: &Vec4, b: &Vec4) -> f64 {
        (0..4)
            .map(|i| (0..4).map(|j| self.g[i][j] * a[i] * b[j]).sum::<f64>())
            .sum()
    }
}

pub fn metric_from(s: &WaveSample) -> MetricAt {
    let mut g = MINKOWSKI;
    g[X][X] = 1.0 + s.f;
    g[Y][Y] = 1.0 - s.f;
    MetricAt { g }
}

pub fn metric_at(w: &Waveform, ev: &Event) -> Result<MetricAt> {
    Ok(metric_from(&WaveSample::at(w, ev)?))
}

/// `g_{μν} - η_{μν}` without the rounding of adding one first.
pub fn metric_perturbation_at(w: &Waveform, ev: &Event) -> Result<Mat4> {
    let f = w.eval(ev.phase())?;
    let mut h = [[0.0; 4]; 4];
    h[X][X] = f;
    h[Y][Y] = -f;
    Ok(h)
}

/// `Γ^μ_{νρ}`, symmetric in the lower pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel(pub [[[f64; 4]; 4]; 4]);

impl Christoffel {
    pub fn get(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.0[mu][nu][rho]
    }
}

pub fn christoffel_from(s: &WaveSample) -> Christoffel {
    let mut c = [[[0.0; 4]; 4]; 4];
    let half = 0.5 * s.df;
    c[T][X][X] = half;
    c[T][Y][Y] = -half;
    c[Z][X][X] = half;
    c[Z][Y][Y] = -half;
    let lp = s.dlog_plus();
    let lm = s.dlog_minus();
    for (up, a, b, v) in [(X, T, X, lp), (X, X, Z, -lp), (Y, T, Y, lm), (Y, Y, Z, -lm)] {
        c[up][a][b] = v;
        c[up][b][a] = v;
    }
    Christoffel(c)
}

pub fn christoffel_at(w: &Waveform, ev: &Event) -> Result<Christoffel> {
    Ok(christoffel_from(&WaveSample::at(w, ev)?))
}

/// Static-observer tetrad: diagonal, `e^x_1 = 1/√(1+f)`, `e^y_2 = 1/√(1-f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vierbein {
    /// `e^a_μ`, indexed `[a][μ]`.
    pub to_local: Mat4,
    /// `e^μ_a`, indexed `[μ][a]`.
    pub to_coord: Mat4,
}

pub fn vierbein_from(s: &WaveSample) -> Vierbein {
    let sp = (1.0 + s.f).sqrt();
    let sm = (1.0 - s.f).sqrt();
    let mut to_local = [[0.0; 4]; 4];
    let mut to_coord = [[0.0; 4]; 4];
    for (i, (d, inv)) in [(1.0, 1.0), (sp, 1.0 / sp), (sm, 1.0 / sm), (1.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        to_local[i][i] = d;
        to_coord[i][i] = inv;
    }
    Vierbein { to_local, to_coord }
}

pub fn vierbein_at(w: &Waveform, ev: &Event) -> Result<Vierbein> {
    Ok(vierbein_from(&WaveSample::at(w, ev)?))
}

/// `e^μ_a - δ^μ_a`, evaluated without cancellation for small `f`.
pub fn tetrad_perturbation_at(w: &Waveform, ev: &Event) -> Result<Mat4> {
    let f = w.eval(ev.phase())?;
    let sp = (1.0 + f).sqrt();
    let sm = (1.0 - f).sqrt();
    let mut d = [[0.0; 4]; 4];
    d[X][X] = -f / (sp * (1.0 + sp));
    d[Y][Y] = f / (sm * (1.0 + sm));
    Ok(d)
}

/// `e^a_μ v^μ`.
pub fn to_local(v: &Vierbein, vec: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (a, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|mu| v.to_local[a][mu] * vec[mu]).sum();
    }
    out
}

/// `e^μ_a v^a`.
pub fn to_coord(v: &Vierbein, vec: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (mu, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|a| v.to_coord[mu][a] * vec[a]).sum();
    }
    out
}

/// `ω^a_{μb}` indexed `[a][μ][b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConnection(pub [[[f64; 4]; 4]; 4]);

impl SpinConnection {
    pub fn get(&self, a: usize, mu: usize, b: usize) -> f64 {
        self.0[a][mu][b]
    }

    /// `ω_{a μ b} = η_{ac} ω^c_{μb}`.
    pub fn lowered(&self, a: usize, mu: usize, b: usize) -> f64 {
        MINKOWSKI[a][a] * self.0[a][mu][b]
    }
}

pub fn spin_connection_from(s: &WaveSample) -> SpinConnection {
    let mut w = [[[0.0; 4]; 4]; 4];
    let sp = (1.0 + s.f).sqrt();
    let sm = (1.0 - s.f).sqrt();
    let lp = s.dlog_plus();
    let lm = s.dlog_minus();
    // ∂_z ln√(1±f) = -∂_t ln√(1±f)
    w[0][X][1] = sp * lp;
    w[1][X][0] = sp * lp;
    w[1][X][3] = -sp * lp;
    w[3][X][1] = sp * lp;
    w[0][Y][2] = sm * lm;
    w[2][Y][0] = sm * lm;
    w[2][Y][3] = -sm * lm;
    w[3][Y][2] = sm * lm;
    SpinConnection(w)
}

pub fn spin_connection_at(w: &Waveform, ev: &Event) -> Result<SpinConnection> {
    Ok(spin_connection_from(&WaveSample::at(w, ev)?))
}

/// Everything the kinematics needs at one event, sharing one wave sample.
#[derive(Debug, Clone, Copy)]
pub struct LocalGeometry {
    pub sample: WaveSample,
    pub metric: MetricAt,
    pub vierbein: Vierbein,
    pub spin_connection: SpinConnection,
}

impl LocalGeometry {
    pub fn at(w: &Waveform, ev: &Event) -> Result<Self> {
        let sample = WaveSample::at(w, ev)?;
        Ok(LocalGeometry {
            sample,
            metric: metric_from(&sample),
            vierbein: vierbein_from(&sample),
            spin_connection: spin_connection_from(&sample),
        })
    }
}
