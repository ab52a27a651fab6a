//! Gravitational-wave profiles `f(u)` of the null phase `u = t - z`.
//!
//! The metric depends on `t` and `z` only through `u`, so every profile is a
//! function of one scalar and `∂f/∂t = f'(u)`, `∂f/∂z = -f'(u)`.

use std::path::Path;

use crate::error::{Error, Result};

/// Profiles with `|A| >= AMPLITUDE_LIMIT` are rejected so that `1 ± f` stays
/// well away from zero.
pub const AMPLITUDE_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformKind {
    Zero,
    Gaussian,
    Sine,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Zero,
    Gaussian { amplitude: f64, width: f64 },
    Sine { amplitude: f64, frequency: f64 },
    Tabulated(Table),
}

/// Immutable wave profile. Construct through the validating constructors.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    shape: Shape,
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if !amplitude.is_finite() {
        return Err(Error::param("amplitude", "must be finite"));
    }
    if amplitude.abs() >= AMPLITUDE_LIMIT {
        return Err(Error::param(
            "amplitude",
            format!("|A| = {} must be below {AMPLITUDE_LIMIT}", amplitude.abs()),
        ));
    }
    Ok(())
}

impl Waveform {
    pub fn zero() -> Self {
        Waveform { shape: Shape::Zero }
    }

    /// `f(u) = A exp(-u²/ω²)`.
    pub fn gaussian(amplitude: f64, width: f64) -> Result<Self> {
        check_amplitude(amplitude)?;
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::param("width", format!("must be positive, got {width}")));
        }
        Ok(Waveform {
            shape: Shape::Gaussian { amplitude, width },
        })
    }

    /// `f(u) = A sin(ϖu)`.
    pub fn sine(amplitude: f64, frequency: f64) -> Result<Self> {
        check_amplitude(amplitude)?;
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::param(
                "frequency",
                format!("must be positive, got {frequency}"),
            ));
        }
        Ok(Waveform {
            shape: Shape::Sine {
                amplitude,
                frequency,
            },
        })
    }

    pub fn tabulated(table: Table) -> Result<Self> {
        let peak = table.f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        check_amplitude(peak)?;
        Ok(Waveform {
            shape: Shape::Tabulated(table),
        })
    }

    /// Loads a two-column `u,f` CSV and wraps it as a tabulated profile.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Waveform::tabulated(Table::from_csv_path(path)?)
    }

    pub fn kind(&self) -> WaveformKind {
        match self.shape {
            Shape::Zero => WaveformKind::Zero,
            Shape::Gaussian { .. } => WaveformKind::Gaussian,
            Shape::Sine { .. } => WaveformKind::Sine,
            Shape::Tabulated(_) => WaveformKind::Tabulated,
        }
    }

    /// Largest `|f|` the profile can produce.
    pub fn peak(&self) -> f64 {
        match &self.shape {
            Shape::Zero => 0.0,
            Shape::Gaussian { amplitude, .. } | Shape::Sine { amplitude, .. } => amplitude.abs(),
            Shape::Tabulated(t) => t.f.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        }
    }

    /// Natural length scale of the profile: `ω`, `1/ϖ`, the mean sample
    /// spacing times ten for tables, and 1 for the null wave.
    pub fn scale(&self) -> f64 {
        match &self.shape {
            Shape::Zero => 1.0,
            Shape::Gaussian { width, .. } => *width,
            Shape::Sine { frequency, .. } => 1.0 / frequency,
            Shape::Tabulated(t) => {
                let (lo, hi) = t.range();
                10.0 * (hi - lo) / (t.len() - 1) as f64
            }
        }
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        Ok(match &self.shape {
            Shape::Zero => 0.0,
            Shape::Gaussian { amplitude, width } => {
                let s = u / width;
                amplitude * (-s * s).exp()
            }
            Shape::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * u).sin(),
            Shape::Tabulated(t) => t.eval(u)?,
        })
    }

    /// `df/du`, analytic except for tables, which use a centered difference
    /// of the interpolant.
    pub fn deriv(&self, u: f64) -> Result<f64> {
        Ok(match &self.shape {
            Shape::Zero => 0.0,
            Shape::Gaussian { amplitude, width } => {
                let s = u / width;
                -2.0 * amplitude * s / width * (-s * s).exp()
            }
            Shape::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * u).cos(),
            Shape::Tabulated(t) => t.deriv(u)?,
        })
    }
}

/// Strictly increasing samples `(u_i, f_i)` with monotone (PCHIP) cubic
/// Hermite interpolation between them.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    u: Vec<f64>,
    f: Vec<f64>,
    slope: Vec<f64>,
}

impl Table {
    pub fn new(u: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if u.len() != f.len() {
            return Err(Error::Table(format!(
                "column lengths differ ({} vs {})",
                u.len(),
                f.len()
            )));
        }
        if u.len() < 2 {
            return Err(Error::Table("need at least two samples".into()));
        }
        if u.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Table("non-finite sample".into()));
        }
        if let Some(i) = u.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Table(format!(
                "u must be strictly increasing (row {} has u = {} after {})",
                i + 2,
                u[i + 1],
                u[i]
            )));
        }
        let slope = pchip_slopes(&u, &f);
        Ok(Table { u, f, slope })
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Table::from_reader(file)
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "u" || &headers[1] != "f" {
            return Err(Error::Table(format!(
                "expected header `u,f`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut u = Vec::new();
        let mut f = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table(e.to_string()))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Table(format!("row {}: `{s}`: {e}", row + 2)))
            };
            u.push(parse(&rec[0])?);
            f.push(parse(&rec[1])?);
        }
        Table::new(u, f)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    fn check(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&u) {
            return Err(Error::OutOfRange { u, lo, hi });
        }
        Ok(())
    }

    fn segment(&self, u: f64) -> usize {
        match self.u.partition_point(|&x| x <= u) {
            0 => 0,
            i => (i - 1).min(self.u.len() - 2),
        }
    }

    fn interp(&self, u: f64) -> f64 {
        let i = self.segment(u);
        let h = self.u[i + 1] - self.u[i];
        let s = (u - self.u[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.f[i] + h * h10 * self.slope[i] + h01 * self.f[i + 1] + h * h11 * self.slope[i + 1]
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok(self.interp(u))
    }

    pub fn deriv(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        let (lo, hi) = self.range();
        let i = self.segment(u);
        let step = 1e-3 * (self.u[i + 1] - self.u[i]);
        Ok(if u - step < lo {
            let (a, b, c) = (self.interp(u), self.interp(u + step), self.interp(u + 2.0 * step));
            (-3.0 * a + 4.0 * b - c) / (2.0 * step)
        } else if u + step > hi {
            let (a, b, c) = (self.interp(u), self.interp(u - step), self.interp(u - 2.0 * step));
            (3.0 * a - 4.0 * b + c) / (2.0 * step)
        } else {
            (self.interp(u + step) - self.interp(u - step)) / (2.0 * step)
        })
    }
}

// Fritsch–Carlson slopes with the weighted harmonic mean at interior knots
// and the shape-preserving three-point formula at the ends.
fn pchip_slopes(u: &[f64], f: &[f64]) -> Vec<f64> {
    let n = u.len();
    let h: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_peak_is_amplitude() {
        let w = Waveform::gaussian(0.1, 1.0).unwrap();
        assert_eq!(w.eval(0.0).unwrap(), 0.1);
        assert_eq!(w.deriv(0.0).unwrap(), 0.0);
        assert_eq!(w.eval(0.7).unwrap(), w.eval(-0.7).unwrap());
    }

    #[test]
    fn sine_values() {
        let w = Waveform::sine(0.01, 2.0).unwrap();
        assert!((w.eval(PI / 4.0).unwrap() - 0.01).abs() < 1e-18);
        assert!((w.deriv(0.0).unwrap() - 0.02).abs() < 1e-18);
        let period = PI;
        for i in 0..50 {
            let u = -3.0 + 0.17 * i as f64;
            let a = w.eval(u).unwrap();
            assert!((a - w.eval(u + period).unwrap()).abs() < 1e-15);
            assert!(a.abs() <= 0.01);
        }
    }

    #[test]
    fn zero_wave_vanishes() {
        let w = Waveform::zero();
        for u in [-1e6, -1.0, 0.0, 3.5, 1e9] {
            assert_eq!(w.eval(u).unwrap(), 0.0);
            assert_eq!(w.deriv(u).unwrap(), 0.0);
        }
    }

    #[test]
    fn amplitude_guard() {
        assert!(Waveform::gaussian(0.5, 1.0).is_err());
        assert!(Waveform::sine(-0.6, 1.0).is_err());
        assert!(Waveform::gaussian(0.49, 1.0).is_ok());
        assert!(Waveform::gaussian(0.1, 0.0).is_err());
        assert!(Waveform::sine(0.1, -1.0).is_err());
        let t = Table::new(vec![0.0, 1.0], vec![0.0, 0.7]).unwrap();
        assert!(Waveform::tabulated(t).is_err());
    }

    #[test]
    fn analytic_derivative_matches_difference() {
        let waves = [
            Waveform::gaussian(0.1, 1.3).unwrap(),
            Waveform::sine(0.05, 2.5).unwrap(),
        ];
        for w in &waves {
            let h = 1e-6 * w.scale().max(1.0);
            let mut worst = 0.0_f64;
            for i in 0..200 {
                let u = -4.0 + 8.0 * i as f64 / 199.0;
                let fd = (w.eval(u + h).unwrap() - w.eval(u - h).unwrap()) / (2.0 * h);
                let an = w.deriv(u).unwrap();
                // relative to the derivative's natural magnitude A/scale
                let scale = w.peak() / w.scale();
                worst = worst.max((fd - an).abs() / scale);
            }
            assert!(worst <= 1e-6, "{:?}: {worst:e}", w.kind());
        }
    }

    #[test]
    fn table_rejects_bad_input() {
        assert!(Table::new(vec![0.0, 0.0], vec![0.0, 0.1]).is_err());
        assert!(Table::new(vec![0.0], vec![0.0]).is_err());
        assert!(Table::new(vec![0.0, 1.0, 0.5], vec![0.0, 0.1, 0.0]).is_err());
        let bad = "x,f\n0,0\n1,0\n";
        assert!(Table::from_reader(bad.as_bytes()).is_err());
    }

    #[test]
    fn table_out_of_range() {
        let t = Table::from_reader("u,f\n0,0\n1,0.1\n2,0.05\n".as_bytes()).unwrap();
        let w = Waveform::tabulated(t).unwrap();
        assert!(matches!(w.eval(2.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(w.deriv(-0.1), Err(Error::OutOfRange { .. })));
        assert!((w.eval(1.0).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn table_is_monotone_between_monotone_samples() {
        let u = vec![0.0, 1.0, 1.1, 3.0, 4.0];
        let f = vec![0.0, 0.0, 0.2, 0.2, 0.3];
        let t = Table::new(u, f).unwrap();
        let mut prev = t.eval(0.0).unwrap();
        for i in 1..=400 {
            let v = t.eval(4.0 * i as f64 / 400.0).unwrap();
            assert!(v >= prev - 1e-15);
            assert!(v <= 0.3 + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn dense_gaussian_table_derivative() {
        let g = Waveform::gaussian(0.1, 1.0).unwrap();
        let n = 20_001;
        let u: Vec<f64> = (0..n).map(|i| -5.0 + 10.0 * i as f64 / (n - 1) as f64).collect();
        let f: Vec<f64> = u.iter().map(|&x| g.eval(x).unwrap()).collect();
        let w = Waveform::tabulated(Table::new(u, f).unwrap()).unwrap();
        let exact = g.deriv(0.5).unwrap();
        let got = w.deriv(0.5).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-6, "{got} vs {exact}");
        assert!(((w.eval(0.5).unwrap() - g.eval(0.5).unwrap()) / g.eval(0.5).unwrap()).abs() < 1e-9);
    }
}
