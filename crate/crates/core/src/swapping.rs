//! Entanglement swapping through a Bell measurement on `B₁B₂`, and the
//! ladder that squares `|ū|` at every round.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{self, ChannelU, DensityOperator};
use crate::wavepacket::{deficit_pow, deficit_sq};
use crate::Track;

/// Deepest ladder level simulated with explicit matrices.
pub const MAX_MATRIX_DEPTH: usize = 6;
/// Deepest ladder level in deficit arithmetic; `2^(ℓ+1)` stays finite.
pub const MAX_DEFICIT_DEPTH: usize = 1000;
pub const MIN_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// Post-measurement state of `A₁A₂`.
    pub state: DensityOperator,
}

/// Projects `B₁B₂` of `ρ₁(A₁B₁) ⊗ ρ₂(A₂B₂)` onto the Bell state
/// `(σⁱ ⊗ σ⁰)|Ψ⁰⟩` and keeps the normalized `A₁A₂` remainder.
pub fn swap_once(rho1: &DensityOperator, rho2: &DensityOperator, outcome: usize) -> Result<SwapOutcome> {
    if rho1.n_qubits() != 2 || rho2.n_qubits() != 2 {
        return Err(Error::InvalidSubsystem("swap_once needs two 2-qubit states".into()));
    }
    let bell = quantum::bell_vector(outcome)?;
    let proj = &bell * bell.adjoint();
    // full index: A1 B1 A2 B2, most significant first
    let idx = |a1: usize, b1: usize, a2: usize, b2: usize| (a1 << 3) | (b1 << 2) | (a2 << 1) | b2;
    let r1 = rho1.matrix();
    let r2 = rho2.matrix();
    let joint = |row: usize, col: usize| -> Complex64 {
        let (a1, b1, a2, b2) = (row >> 3 & 1, row >> 2 & 1, row >> 1 & 1, row & 1);
        let (c1, d1, c2, d2) = (col >> 3 & 1, col >> 2 & 1, col >> 1 & 1, col & 1);
        r1[((a1 << 1) | b1, (c1 << 1) | d1)] * r2[((a2 << 1) | b2, (c2 << 1) | d2)]
    };
    // Ξ_{a,a'} = Σ_{b,b''} P_{b,b''} ρ_{(a,b''),(a',b)}
    let mut xi = DMatrix::<Complex64>::zeros(4, 4);
    for a in 0..4 {
        for ap in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..4 {
                for bpp in 0..4 {
                    let p = proj[(b, bpp)];
                    if p == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = idx(a >> 1, bpp >> 1, a & 1, bpp & 1);
                    let col = idx(ap >> 1, b >> 1, ap & 1, b & 1);
                    acc += p * joint(row, col);
                }
            }
            xi[(a, ap)] = acc;
        }
    }
    let probability = xi.trace().re;
    if probability.is_nan() || probability < MIN_PROBABILITY {
        return Err(Error::DegenerateOutcome {
            outcome,
            probability,
        });
    }
    xi /= Complex64::new(probability, 0.0);
    // symmetrize away rounding before validation
    let xi = (&xi + xi.adjoint()) * Complex64::new(0.5, 0.0);
    let labels = vec![rho1.qubits()[0].clone(), rho2.qubits()[0].clone()];
    let labels = if labels[0] == labels[1] {
        vec![format!("{}#1", labels[0]), format!("{}#2", labels[1])]
    } else {
        labels
    };
    Ok(SwapOutcome {
        outcome,
        probability,
        state: DensityOperator::new(xi, labels)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderLevel {
    pub level: usize,
    /// Deficit-track `1 - |ū|^n`.
    pub deficit: f64,
    /// Matrix-track negativity, when simulated.
    pub matrix_negativity: Option<f64>,
    /// Probability of the configured outcome in the swap that produced
    /// this level.
    pub probability: Option<f64>,
    /// `max_i |p_i - 1/4|` over the four Bell outcomes of that swap.
    pub probability_error: Option<f64>,
    /// Largest negativity difference between the four outcomes.
    pub outcome_spread: Option<f64>,
}

impl LadderLevel {
    /// Effective particle count `n = 2^(level+1)`.
    pub fn particles(&self) -> f64 {
        2f64.powi(self.level as i32 + 1)
    }

    pub fn matrix_deficit(&self) -> Option<f64> {
        self.matrix_negativity.map(|n| 1.0 - n)
    }
}

/// Levels `0..=depth`. Level 0 is the evolved Bell pair (`n = 2`); each
/// further level swaps two copies of the previous level.
pub fn swap_ladder(u: &ChannelU, depth: usize, track: Track, outcome: usize) -> Result<Vec<LadderLevel>> {
    if depth < 1 {
        return Err(Error::param("swap_depth", "must be at least 1"));
    }
    if track == Track::Matrix && depth > MAX_MATRIX_DEPTH {
        return Err(Error::param(
            "swap_depth",
            format!("matrix track supports depth <= {MAX_MATRIX_DEPTH}, got {depth}"),
        ));
    }
    if depth > MAX_DEFICIT_DEPTH {
        return Err(Error::param(
            "swap_depth",
            format!("depth must not exceed {MAX_DEFICIT_DEPTH}, got {depth}"),
        ));
    }
    let mut levels = Vec::with_capacity(depth + 1);
    let mut deficit = deficit_sq(u.0.deficit());
    let mut state = if track.matrix() {
        Some(quantum::evolve_ghz(2, u)?.with_labels(vec!["A".into(), "B".into()])?)
    } else {
        None
    };
    for level in 0..=depth {
        let (mut probability, mut probability_error, mut outcome_spread) = (None, None, None);
        if level > 0 {
            deficit = deficit_sq(deficit);
            if level <= MAX_MATRIX_DEPTH {
                if let Some(prev) = state.take() {
                    let report = outcome_equivalence_check(&prev, &prev)?;
                    probability_error = Some(report.probabilities.iter().map(|p| (p - 0.25).abs()).fold(0.0, f64::max));
                    outcome_spread = Some(report.max_difference);
                    let out = swap_once(&prev, &prev, outcome)?;
                    probability = Some(out.probability);
                    state = Some(out.state.with_labels(vec!["A".into(), "B".into()])?);
                }
            } else {
                state = None;
            }
        }
        let matrix_negativity = match &state {
            Some(s) => Some(quantum::negativity(s, &[0])?),
            None => None,
        };
        levels.push(LadderLevel {
            level,
            deficit,
            matrix_negativity,
            probability,
            probability_error,
            outcome_spread,
        });
    }
    Ok(levels)
}

/// Deficit of `|ū|^n` straight from `δ`, for cross-checking the ladder's
/// repeated squaring.
pub fn ladder_deficit_direct(delta: f64, level: usize) -> Option<f64> {
    (level < 63).then(|| deficit_pow(delta, 1u64 << (level + 1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeReport {
    pub probabilities: [f64; 4],
    /// `None` for outcomes too improbable to normalize.
    pub negativities: [Option<f64>; 4],
    pub max_difference: f64,
}

/// Runs all four Bell outcomes and compares the resulting negativities.
pub fn outcome_equivalence_check(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<OutcomeReport> {
    let mut probabilities = [0.0; 4];
    let mut negativities = [None; 4];
    for i in 0..4 {
        match swap_once(rho1, rho2, i) {
            Ok(out) => {
                probabilities[i] = out.probability;
                negativities[i] = Some(quantum::negativity(&out.state, &[0])?);
            }
            Err(Error::DegenerateOutcome { probability, .. }) => probabilities[i] = probability,
            Err(e) => return Err(e),
        }
    }
    let present: Vec<f64> = negativities.iter().flatten().copied().collect();
    let max_difference = present
        .iter()
        .flat_map(|a| present.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(OutcomeReport {
        probabilities,
        negativities,
        max_difference,
    })
}
