//! Gauss–Hermite rules for `∫ g(t) e^{-t²} dt`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Ascending nodes.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `n`-point rule by Newton iteration on the orthonormal Hermite
/// recurrence, seeded with the usual asymptotic root estimates.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::param("quadrature_order", "must be positive"));
    }
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^(-1/4)
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0_f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[n - 1],
            3 => 1.91 * z - 0.91 * nodes[n - 2],
            _ => 2.0 * z - nodes[n - i + 1],
        };
        let mut converged = false;
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p, dp) = hermite_pair(n, z, PIM4);
            pp = dp;
            let dz = p / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "Gauss–Hermite root {i} of order {n} did not converge"
            )));
        }
        let (_, dp) = hermite_pair(n, z, PIM4);
        pp = if dp != 0.0 { dp } else { pp };
        let w = 2.0 / (pp * pp);
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    Ok(Rule { nodes, weights })
}

// Orthonormal Hermite value p_n(z) and derivative √(2n) p_{n-1}(z).
fn hermite_pair(n: usize, z: f64, p0: f64) -> (f64, f64) {
    let mut p1 = p0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

#[cfg(test)]
mod tests {
    use super::*;

    // ∫ t^{2k} e^{-t²} dt = Γ(k + ½) = (2k-1)!! √π / 2^k
    fn even_moment(k: u32) -> f64 {
        let mut v = std::f64::consts::PI.sqrt();
        for j in 0..k {
            v *= (2 * j + 1) as f64 / 2.0;
        }
        v
    }

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [8, 20, 40, 80, 150] {
            let r = gauss_hermite(n).unwrap();
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            for k in 0..(n as u32).min(30) {
                let got: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(t, w)| w * t.powi(2 * k as i32))
                    .sum();
                let exp = even_moment(k);
                assert!(((got - exp) / exp).abs() < 1e-12, "n={n} k={k}: {got} vs {exp}");
                let odd: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(t, w)| w * t.powi(2 * k as i32 + 1))
                    .sum();
                assert!(odd.abs() < 1e-12 * exp.max(1.0));
            }
        }
    }

    #[test]
    fn gaussian_characteristic_function() {
        // ∫ cos(a t) e^{-t²} dt = √π e^{-a²/4}
        let r = gauss_hermite(40).unwrap();
        for a in [0.1, 1.0, 3.0] {
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * (a * t).cos()).sum();
            let exp = std::f64::consts::PI.sqrt() * (-a * a / 4.0).exp();
            assert!((got - exp).abs() < 1e-13);
        }
    }
}
