//! Scenario configuration: JSON, exact field names, unknown fields rejected.

use std::path::{Path, PathBuf};

use gwdeco::wavepacket::{DEFAULT_ORDER, MAX_ORDER, MIN_ORDER};
use gwdeco::swapping::{MAX_DEFICIT_DEPTH, MAX_MATRIX_DEPTH};
use gwdeco::{Event, FrameParams, OmegaMethod, Track, WavePacket, Waveform};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest GHZ register the scenario runner will simulate.
pub const MAX_GHZ_PARTICLES: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub label: String,
    pub waveform: WaveformConfig,
    pub frame: FrameConfig,
    #[serde(default)]
    pub packet: PacketConfig,
    pub time: TimeConfig,
    /// GHZ register size for the optional bipartition columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    #[serde(default = "default_track")]
    pub track: Track,
    #[serde(default = "default_swap_depth")]
    pub swap_depth: usize,
    #[serde(default)]
    pub swap_outcome: usize,
    #[serde(default)]
    pub omega_method: OmegaMethod,
}

fn default_track() -> Track {
    Track::Both
}

fn default_swap_depth() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WaveformConfig {
    Zero,
    Gaussian { amplitude: f64, width: f64 },
    Sine { amplitude: f64, frequency: f64 },
    /// CSV with header `u,f`; relative paths resolve against the config
    /// file's directory.
    Tabulated { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameConfig {
    pub mass: f64,
    pub rapidity: f64,
    pub theta: f64,
    pub t_i: f64,
    #[serde(default)]
    pub x_i: f64,
    #[serde(default)]
    pub y_i: f64,
    #[serde(default)]
    pub z_i: f64,
    /// Admit `rapidity = 0` and `theta ∈ {0, π/2}`.
    #[serde(default)]
    pub allow_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    #[serde(default = "default_packet_width")]
    pub width: f64,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
}

fn default_packet_width() -> f64 {
    0.5
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig {
            width: default_packet_width(),
            quadrature_order: default_order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub tau_i: f64,
    pub tau_f: f64,
    pub steps: usize,
}

/// A configuration that passed every check, with its model objects built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub waveform: Waveform,
    pub frame: FrameParams,
    pub packet: WavePacket,
}

impl Scenario {
    /// Proper-time grid `tau_i + j (tau_f - tau_i)/steps`, `j = 0..=steps`.
    pub fn grid(&self) -> Vec<f64> {
        let t = &self.config.time;
        let h = (t.tau_f - t.tau_i) / t.steps as f64;
        (0..=t.steps)
            .map(|j| if j == t.steps { t.tau_f } else { t.tau_i + j as f64 * h })
            .collect()
    }
}

fn field(path: &str, err: gwdeco::Error) -> CliError {
    match err {
        gwdeco::Error::InvalidParameter { name, reason } => CliError::Config(format!("{path}.{name}: {reason}")),
        other => CliError::Config(format!("{path}: {other}")),
    }
}

fn invalid(path: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {reason}"))
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Reads a config file; a tabulated waveform path is made relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let WaveformConfig::Tabulated { path: table } = &mut cfg.waveform {
            if table.is_relative() {
                if let Some(dir) = path.parent() {
                    *table = dir.join(&*table);
                }
            }
        }
        Ok(cfg)
    }

    /// Checks every field and builds the model objects.
    pub fn validate(&self) -> Result<Scenario, CliError> {
        let waveform = match &self.waveform {
            WaveformConfig::Zero => Waveform::zero(),
            WaveformConfig::Gaussian { amplitude, width } => {
                Waveform::gaussian(*amplitude, *width).map_err(|e| field("waveform", e))?
            }
            WaveformConfig::Sine { amplitude, frequency } => {
                Waveform::sine(*amplitude, *frequency).map_err(|e| field("waveform", e))?
            }
            WaveformConfig::Tabulated { path } => Waveform::from_csv_path(path)
                .map_err(|e| invalid("waveform.path", format!("{}: {e}", path.display())))?,
        };

        let f = &self.frame;
        let initial = Event::new(f.t_i, f.x_i, f.y_i, f.z_i);
        let frame = if f.allow_boundary {
            FrameParams::with_boundary(f.mass, f.rapidity, f.theta, initial)
        } else {
            FrameParams::new(f.mass, f.rapidity, f.theta, initial)
        }
        .map_err(|e| field("frame", e))?;

        let p = &self.packet;
        let packet = WavePacket::new(&frame, p.width).map_err(|e| field("packet", e))?;
        if !(MIN_ORDER..=MAX_ORDER).contains(&p.quadrature_order) {
            return Err(invalid(
                "packet.quadrature_order",
                format!("must lie in [{MIN_ORDER}, {MAX_ORDER}], got {}", p.quadrature_order),
            ));
        }

        let t = &self.time;
        if !t.tau_i.is_finite() {
            return Err(invalid("time.tau_i", format!("must be finite, got {}", t.tau_i)));
        }
        if !(t.tau_f.is_finite() && t.tau_f > t.tau_i) {
            return Err(invalid("time.tau_f", format!("must exceed tau_i = {}, got {}", t.tau_i, t.tau_f)));
        }
        if t.steps == 0 {
            return Err(invalid("time.steps", "must be at least 1"));
        }
        for (name, tau) in [("time.tau_i", t.tau_i), ("time.tau_f", t.tau_f)] {
            let u = frame.phase_at(tau);
            waveform.eval(u).map_err(|e| invalid(name, e))?;
        }

        if let Some(n) = self.particles {
            if !(2..=MAX_GHZ_PARTICLES).contains(&n) {
                return Err(invalid("particles", format!("must lie in [2, {MAX_GHZ_PARTICLES}], got {n}")));
            }
            if !self.track.matrix() {
                return Err(invalid("particles", "GHZ columns need the matrix track"));
            }
        }

        let max_depth = if self.track.matrix() && !self.track.deficit() {
            MAX_MATRIX_DEPTH
        } else {
            MAX_DEFICIT_DEPTH
        };
        if !(1..=max_depth).contains(&self.swap_depth) {
            return Err(invalid(
                "swap_depth",
                format!("must lie in [1, {max_depth}] for this track, got {}", self.swap_depth),
            ));
        }
        if self.swap_outcome > 3 {
            return Err(invalid("swap_outcome", format!("must be a Bell index 0..=3, got {}", self.swap_outcome)));
        }

        Ok(Scenario {
            config: self.clone(),
            waveform,
            frame,
            packet,
        })
    }

    /// Sets the value at a dotted path such as `waveform.amplitude`.
    pub fn with_param(&self, path: &str, value: serde_json::Value) -> Result<Self, CliError> {
        let mut doc = serde_json::to_value(self).expect("config serializes");
        let mut slot = &mut doc;
        for key in path.split('.') {
            slot = slot
                .as_object_mut()
                .and_then(|o| o.get_mut(key))
                .ok_or_else(|| invalid(path, "no such field in the configuration"))?;
        }
        *slot = value;
        serde_json::from_value(doc).map_err(|e| invalid(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "waveform": {"kind": "gaussian", "amplitude": 0.1, "width": 1.0},
        "frame": {"mass": 1.0, "rapidity": 1.0, "theta": 0.7853981633974483, "t_i": -4.0},
        "time": {"tau_f": 10.0, "steps": 10}
    }"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = ScenarioConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.packet, PacketConfig::default());
        assert_eq!(cfg.track, Track::Both);
        assert_eq!(cfg.omega_method, OmegaMethod::ExactLog);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn round_trip() {
        let cfg = ScenarioConfig::from_json(MINIMAL).unwrap();
        let again = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_fields_rejected() {
        let typo = MINIMAL.replace("\"steps\"", "\"step\"");
        assert!(ScenarioConfig::from_json(&typo).is_err());
        let extra = MINIMAL.replace("\"width\": 1.0}", "\"width\": 1.0, \"phase\": 0}");
        assert!(ScenarioConfig::from_json(&extra).is_err());
    }

    #[test]
    fn errors_name_the_field() {
        let cfg = ScenarioConfig::from_json(&MINIMAL.replace("0.1", "0.9")).unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("waveform.amplitude"), "{msg}");

        let cfg = ScenarioConfig::from_json(&MINIMAL.replace("\"rapidity\": 1.0", "\"rapidity\": 0.0")).unwrap();
        assert!(cfg.validate().unwrap_err().to_string().contains("frame.rapidity"));

        let mut cfg = ScenarioConfig::from_json(MINIMAL).unwrap();
        cfg.packet.quadrature_order = 3;
        assert!(cfg.validate().unwrap_err().to_string().contains("packet.quadrature_order"));

        cfg.packet.quadrature_order = 40;
        cfg.time.steps = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("time.steps"));
    }

    #[test]
    fn param_override() {
        let cfg = ScenarioConfig::from_json(MINIMAL).unwrap();
        let next = cfg.with_param("waveform.amplitude", serde_json::json!(0.2)).unwrap();
        assert_eq!(
            next.waveform,
            WaveformConfig::Gaussian {
                amplitude: 0.2,
                width: 1.0
            }
        );
        assert!(cfg.with_param("waveform.nope", serde_json::json!(1)).is_err());
    }

    #[test]
    fn grid_ends_exactly() {
        let s = ScenarioConfig::from_json(MINIMAL).unwrap().validate().unwrap();
        let g = s.grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 10.0);
    }
}
