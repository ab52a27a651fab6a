//! Independent reference computations used by the test suites and by the
//! `validate` front end. Nothing in the production path calls into here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{self, Christoffel, Event, SpinConnection};
use crate::kinematics::{self, FrameParams, LocalMomentum, OmegaMethod};
use crate::quantum::{BasisOp, DensityOperator};
use crate::wavepacket::{quadrature, WavePacket};
use crate::waveform::Waveform;

fn shifted(ev: &Event, axis: usize, h: f64) -> Event {
    let mut c = ev.coords();
    c[axis] += h;
    Event::from_coords(c)
}

/// `Γ^μ_{νρ} = ½ g^{μσ}(∂_ν g_{σρ} + ∂_ρ g_{σν} - ∂_σ g_{νρ})` with central
/// differences of the metric perturbation.
pub fn christoffel_fd(w: &Waveform, ev: &Event, h: f64) -> Result<Christoffel> {
    let ginv = geometry::metric_at(w, ev)?.inverse();
    let mut dg = [[[0.0; 4]; 4]; 4]; // dg[σ][μ][ν] = ∂_σ g_{μν}
    for (s, slot) in dg.iter_mut().enumerate() {
        let plus = geometry::metric_perturbation_at(w, &shifted(ev, s, h))?;
        let minus = geometry::metric_perturbation_at(w, &shifted(ev, s, -h))?;
        for m in 0..4 {
            for n in 0..4 {
                slot[m][n] = (plus[m][n] - minus[m][n]) / (2.0 * h);
            }
        }
    }
    let mut c = [[[0.0; 4]; 4]; 4];
    for (mu, cm) in c.iter_mut().enumerate() {
        for nu in 0..4 {
            for rho in 0..4 {
                cm[nu][rho] = 0.5
                    * (0..4)
                        .map(|s| ginv[mu][s] * (dg[nu][s][rho] + dg[rho][s][nu] - dg[s][nu][rho]))
                        .sum::<f64>();
            }
        }
    }
    Ok(Christoffel(c))
}

/// `ω^a_{μb} = e^a_λ (∂_μ e^λ_b + Γ^λ_{μν} e^ν_b)` with the tetrad
/// derivative taken by central differences of its perturbation.
pub fn spin_connection_definitional(w: &Waveform, ev: &Event, h: f64) -> Result<SpinConnection> {
    let v = geometry::vierbein_at(w, ev)?;
    let gam = geometry::christoffel_at(w, ev)?;
    let mut de = [[[0.0; 4]; 4]; 4]; // de[μ][λ][b] = ∂_μ e^λ_b
    for (mu, slot) in de.iter_mut().enumerate() {
        let p = geometry::tetrad_perturbation_at(w, &shifted(ev, mu, h))?;
        let m = geometry::tetrad_perturbation_at(w, &shifted(ev, mu, -h))?;
        for l in 0..4 {
            for b in 0..4 {
                slot[l][b] = (p[l][b] - m[l][b]) / (2.0 * h);
            }
        }
    }
    let mut out = [[[0.0; 4]; 4]; 4];
    for (a, oa) in out.iter_mut().enumerate() {
        for mu in 0..4 {
            for b in 0..4 {
                let mut acc = 0.0;
                for l in 0..4 {
                    let cov = de[mu][l][b] + (0..4).map(|n| gam.get(l, mu, n) * v.to_coord[n][b]).sum::<f64>();
                    acc += v.to_local[a][l] * cov;
                }
                oa[mu][b] = acc;
            }
        }
    }
    Ok(SpinConnection(out))
}

/// Composite Simpson integral of `φ^1_3` along the worldline.
pub fn omega_simpson(
    w: &Waveform,
    fp: &FrameParams,
    tau_i: f64,
    tau_f: f64,
    k: &LocalMomentum,
    panels: usize,
) -> Result<f64> {
    let n = 2 * panels;
    let h = (tau_f - tau_i) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let tau = tau_i + i as f64 * h;
        let ev = kinematics::trajectory(w, fp, tau)?;
        let phi = kinematics::wigner_generator(w, fp, &ev, k)?[1][3];
        let coef = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += coef * phi;
    }
    Ok(acc * h / 3.0)
}

/// Weighted rotation angles `(weight, Ω)` summing to unit weight.
pub type Ensemble = Vec<(f64, f64)>;

/// Two equally likely angles `φ ± θ` with `⟨e^{iΩ}⟩ = c̄ + i s̄`.
pub fn two_point_ensemble(c_bar: f64, s_bar: f64) -> Ensemble {
    let phi = s_bar.atan2(c_bar);
    let theta = c_bar.hypot(s_bar).min(1.0).acos();
    vec![(0.5, phi + theta), (0.5, phi - theta)]
}

/// Gauss–Hermite ensemble of `Ω(k)` over the packet, each angle taken from
/// [`kinematics::omega`].
#[allow(clippy::too_many_arguments)]
pub fn scenario_ensemble(
    p: &WavePacket,
    w: &Waveform,
    fp: &FrameParams,
    tau_i: f64,
    tau_f: f64,
    order: usize,
    method: OmegaMethod,
) -> Result<Ensemble> {
    let rule = quadrature::gauss_hermite(order)?;
    let mut out = Vec::with_capacity(order * order);
    for (t1, w1) in rule.nodes.iter().zip(&rule.weights) {
        for (t3, w3) in rule.nodes.iter().zip(&rule.weights) {
            let k = p.momentum_at(*t1, *t3);
            let om = kinematics::omega(w, fp, tau_i, tau_f, &k, method)?.omega;
            out.push((w1 * w3 / std::f64::consts::PI, om));
        }
    }
    Ok(out)
}

/// `Σ w U(Ω) R^{jk} U(Ω)†`.
pub fn rotation_average_table(ens: &Ensemble, b: BasisOp) -> [[f64; 2]; 2] {
    let r = b.matrix();
    let mut out = [[0.0; 2]; 2];
    for &(wt, om) in ens {
        let u = kinematics::wigner_matrix(om);
        for i in 0..2 {
            for j in 0..2 {
                let mut v = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        v += u[i][k] * r[k][l] * u[j][l];
                    }
                }
                out[i][j] += wt * v;
            }
        }
    }
    out
}

/// `Σ w U_q ρ U_q†` with the rotation acting on qubit `q` only.
pub fn rotation_average_apply(ens: &Ensemble, rho: &DensityOperator, q: usize) -> DMatrix<Complex64> {
    let n = rho.n_qubits();
    let dim = rho.dim();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for &(wt, om) in ens {
        let r = kinematics::wigner_matrix(om);
        let mut full = DMatrix::<Complex64>::identity(1, 1);
        for i in 0..n {
            let f = if i == q {
                DMatrix::from_fn(2, 2, |a, b| Complex64::new(r[a][b], 0.0))
            } else {
                DMatrix::identity(2, 2)
            };
            full = full.kronecker(&f);
        }
        acc += (&full * rho.matrix() * full.adjoint()) * Complex64::new(wt, 0.0);
    }
    acc
}

/// `(c̄, s̄)` of an ensemble.
pub fn ensemble_mean(ens: &Ensemble) -> (f64, f64) {
    ens.iter()
        .fold((0.0, 0.0), |(c, s), &(w, om)| (c + w * om.cos(), s + w * om.sin()))
}

/// Number of eigenvalues of Hermitian `m` below `x`, from the inertia of
/// an unpivoted `LDLᴴ` factorization of `m - x I`.
pub fn count_below(m: &DMatrix<Complex64>, x: f64) -> usize {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= Complex64::new(x, 0.0);
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut d = a[(k, k)].re;
        if d == 0.0 {
            d = -f64::EPSILON * (1.0 + x.abs());
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let l = a[(i, k)] / d;
            for j in k + 1..n {
                let t = l * a[(k, j)];
                a[(i, j)] -= t;
            }
        }
    }
    negatives
}

/// Spectrum of a Hermitian matrix by bisection on [`count_below`].
pub fn eigenvalues_bisection(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let radius = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(m, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `1 - (1-δ)ⁿ` by its alternating binomial series, summed until the
/// terms stop mattering. Intended for `nδ ≪ 1`.
pub fn deficit_pow_series(delta: f64, n: u64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=n.min(200) {
        term *= (n - k + 1) as f64 / k as f64 * delta;
        let signed = if k % 2 == 1 { term } else { -term };
        sum += signed;
        if term.abs() <= 1e-20 * sum.abs() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_ensemble_reproduces_mean() {
        let ens = two_point_ensemble(0.6, 0.3);
        let (c, s) = ensemble_mean(&ens);
        assert!((c - 0.6).abs() < 1e-15 && (s - 0.3).abs() < 1e-15);
    }

    #[test]
    fn series_matches_closed_form_for_small_n_delta() {
        for (d, n) in [(1e-3, 5u64), (1e-10, 64), (0.01, 3)] {
            let s = deficit_pow_series(d, n);
            let closed = 1.0 - (1.0 - d).powi(n as i32);
            assert!(((s - closed) / closed).abs() < 1e-6);
        }
    }

    #[test]
    fn bisection_on_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [3.0, -1.0, 0.5].map(|v| Complex64::new(v, 0.0)).to_vec(),
        ));
        let ev = eigenvalues_bisection(&m);
        for (g, w) in ev.iter().zip([-1.0, 0.5, 3.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}
