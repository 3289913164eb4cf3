//! Finite representations of solutions `W` of the heat hierarchy
//! `∂W/∂u_m = ∂^m W/∂u_1^m`.
//!
//! Two forms are supported, both exact solutions by construction:
//! a finite τ-series over elementary Schur polynomials,
//! `W = Σ_j τ_j P_j(u_1..u_N)`, and a finite spectral sum
//! `W = Σ_m f_m exp(Σ_l λ_m^l u_l)` (a discrete measure standing in for the
//! spectral integral).
//!
//! The workhorse is [`WSolution::shifted_eval`]: because `∂P_j/∂u_m = P_{j-m}`
//! and the exponent is a polynomial in λ, every mixed partial of either form
//! reduces to one "total shift" integer, which keeps derivative ladders exact.

use crate::schur::esp_eval;
use crate::tol;

/// One node `(λ, f)` of a discretized spectral representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNode {
    pub lambda: f64,
    pub weight: f64,
}

/// A solution of the heat hierarchy in `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub enum WSolution {
    /// `W = Σ_j taus[j] · P_j(u_1..u_N)`.
    TauSeries { nvars: usize, taus: Vec<f64> },
    /// `W = Σ_m f_m · exp(Σ_{l=1}^N λ_m^l u_l)`.
    Spectral { nvars: usize, nodes: Vec<SpectralNode> },
}

impl WSolution {
    pub fn tau_series(nvars: usize, taus: Vec<f64>) -> Self {
        assert!(nvars >= 1);
        WSolution::TauSeries { nvars, taus }
    }

    pub fn spectral(nvars: usize, nodes: Vec<SpectralNode>) -> Self {
        assert!(nvars >= 1);
        WSolution::Spectral { nvars, nodes }
    }

    pub fn nvars(&self) -> usize {
        match self {
            WSolution::TauSeries { nvars, .. } => *nvars,
            WSolution::Spectral { nvars, .. } => *nvars,
        }
    }

    /// Value of any mixed partial whose total weight is `shift`, where
    /// `∂/∂u_m` carries weight `m`. `shift = 0` is the value of `W` itself;
    /// `shift = k` equals `∂^k W / ∂u_1^k`.
    pub fn shifted_eval(&self, shift: usize, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars(), "point length must equal nvars");
        match self {
            WSolution::TauSeries { taus, .. } => {
                let mut acc = 0.0;
                for (j, &tau) in taus.iter().enumerate() {
                    if tau == 0.0 || j < shift {
                        continue;
                    }
                    acc += tau * esp_eval(j - shift, point);
                }
                acc
            }
            WSolution::Spectral { nodes, .. } => {
                let mut acc = 0.0;
                for node in nodes {
                    let mut expo = 0.0;
                    let mut pw = node.lambda;
                    for &u in point {
                        expo += pw * u;
                        pw *= node.lambda;
                    }
                    acc += node.weight * node.lambda.powi(shift as i32) * expo.exp();
                }
                acc
            }
        }
    }

    /// Deform to `nvars` target variables keeping the representation data;
    /// the restriction to `u_3 = … = u_{N'} = 0` recovers the original.
    pub fn deform(&self, nvars: usize) -> WSolution {
        assert!(nvars > self.nvars());
        match self {
            WSolution::TauSeries { taus, .. } => WSolution::TauSeries {
                nvars,
                taus: taus.clone(),
            },
            WSolution::Spectral { nodes, .. } => WSolution::Spectral {
                nvars,
                nodes: nodes.clone(),
            },
        }
    }

    /// Re-expand a τ-series around `point`: the recentered coefficients are
    /// the derivative ladder `τ̃_l = ∂^l W/∂u_1^l (point)`, so that
    /// `W(point + ū) = Σ_l τ̃_l P_l(ū)`.
    pub fn recenter(&self, point: &[f64]) -> WSolution {
        match self {
            WSolution::TauSeries { nvars, taus } => {
                let taus_new: Vec<f64> =
                    (0..taus.len()).map(|l| self.shifted_eval(l, point)).collect();
                WSolution::TauSeries {
                    nvars: *nvars,
                    taus: taus_new,
                }
            }
            WSolution::Spectral { .. } => {
                panic!("recenter is defined for τ-series only")
            }
        }
    }
}

/// Evaluate `W` at a point.
pub fn w_eval(w: &WSolution, point: &[f64]) -> f64 {
    w.shifted_eval(0, point)
}

/// `∂^k W / ∂u_1^k` at a point.
pub fn w_partial(w: &WSolution, k: usize, point: &[f64]) -> f64 {
    w.shifted_eval(k, point)
}

/// Derivative ladder `A_1..A_K` of `W` in `u_1` at a base point.
#[derive(Debug, Clone)]
pub struct DerivativeLadder {
    pub point: Vec<f64>,
    /// `values[k]` is `A_{k+1} = ∂^{k+1} W / ∂u_1^{k+1}`.
    pub values: Vec<f64>,
}

impl DerivativeLadder {
    pub fn compute(w: &WSolution, point: &[f64], max_order: usize) -> Self {
        let values = (1..=max_order).map(|k| w.shifted_eval(k, point)).collect();
        DerivativeLadder {
            point: point.to_vec(),
            values,
        }
    }

    /// `A_k` with the 1-based index of the ladder.
    pub fn a(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// Anything presenting the two derivative routes whose difference the
/// hierarchy equations constrain. `WSolution` satisfies them exactly;
/// deliberately inconsistent implementations are useful as negative controls.
pub trait HierarchyField {
    fn nvars(&self) -> usize;
    /// `∂^order W / ∂u_1^order`.
    fn deriv_u1(&self, order: usize, point: &[f64]) -> f64;
    /// `∂W / ∂u_m`.
    fn deriv_um(&self, m: usize, point: &[f64]) -> f64;
}

impl HierarchyField for WSolution {
    fn nvars(&self) -> usize {
        WSolution::nvars(self)
    }
    fn deriv_u1(&self, order: usize, point: &[f64]) -> f64 {
        self.shifted_eval(order, point)
    }
    fn deriv_um(&self, m: usize, point: &[f64]) -> f64 {
        self.shifted_eval(m, point)
    }
}

/// Maximum over the grid and over `m = 2..N` of
/// `|∂W/∂u_m - ∂^m W/∂u_1^m|`.
pub fn heat_residual<F: HierarchyField>(w: &F, grid: &[Vec<f64>]) -> f64 {
    assert!(!grid.is_empty(), "heat_residual needs a nonempty grid");
    let n = w.nvars();
    let mut worst: f64 = 0.0;
    for point in grid {
        for m in 2..=n {
            let lhs = w.deriv_um(m, point);
            let rhs = w.deriv_u1(m, point);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Residual gate shared by surface constructions: true when the point
/// satisfies the hierarchy to working tolerance.
pub fn residual_ok(r: f64) -> bool {
    r <= tol::ON_CURVE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_series_evaluates_esps() {
        let w = WSolution::tau_series(2, vec![0.0, 0.0, 0.0, 1.0]);
        let v = w_eval(&w, &[1.0, 1.0]);
        assert!((v - 7.0 / 6.0).abs() < 1e-15);

        let w1 = WSolution::tau_series(2, vec![0.0, 1.0]);
        assert_eq!(w_eval(&w1, &[3.5, -2.0]), 3.5);
    }

    #[test]
    fn spectral_constant_node() {
        let w = WSolution::spectral(2, vec![SpectralNode { lambda: 0.0, weight: 4.5 }]);
        assert_eq!(w_eval(&w, &[1.0, -3.0]), 4.5);
        let w2 = WSolution::spectral(2, vec![SpectralNode { lambda: 2.0, weight: 1.0 }]);
        assert_eq!(w_partial(&w2, 2, &[0.0, 0.0]), 4.0);
    }

    #[test]
    fn partial_shifts_tau_series() {
        // W = P_4: third u-derivative is P_1 = u.
        let w = WSolution::tau_series(2, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        for (u, v) in [(0.3, -0.7), (2.0, 1.0)] {
            assert_eq!(w_partial(&w, 3, &[u, v]), u);
        }
        // τ with only τ_{k+3} = 1: (k+3)-rd derivative at the origin is P_0 = 1.
        for k in 0..4usize {
            let mut taus = vec![0.0; k + 4];
            taus[k + 3] = 1.0;
            let w = WSolution::tau_series(2, taus);
            assert_eq!(w_partial(&w, k + 3, &[0.0, 0.0]), 1.0);
        }
    }

    #[test]
    fn ladder_at_origin_reads_taus() {
        let taus = vec![0.25, -1.0, 0.5, 0.0, 3.0, -0.125];
        let w = WSolution::tau_series(2, taus.clone());
        let ladder = DerivativeLadder::compute(&w, &[0.0, 0.0], taus.len() - 1);
        for k in 1..taus.len() {
            assert_eq!(ladder.a(k), taus[k]);
        }
    }

    #[test]
    fn deform_restricts_to_original() {
        // W = P_4 deformed to three variables.
        let w = WSolution::tau_series(2, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let w3 = w.deform(3);
        // P_4(u1,u2,u3) = u1^4/24 + u1^2 u2/2 + u2^2/2 + u1 u3.
        let (a, b, c) = (0.7, -0.4, 1.3);
        let direct = a.powi(4) / 24.0 + a * a * b / 2.0 + b * b / 2.0 + a * c;
        assert!((w_eval(&w3, &[a, b, c]) - direct).abs() < 1e-15);
        assert_eq!(w_eval(&w3, &[a, b, 0.0]), w_eval(&w, &[a, b]));

        let ws = WSolution::spectral(2, vec![SpectralNode { lambda: 1.5, weight: 2.0 }]);
        let ws4 = ws.deform(4);
        let p = [0.2, -0.1, 0.3, 0.05];
        let l: f64 = 1.5;
        let direct =
            2.0 * (l * p[0] + l * l * p[1] + l.powi(3) * p[2] + l.powi(4) * p[3]).exp();
        assert!((w_eval(&ws4, &p) - direct).abs() < 1e-12);
    }

    #[test]
    fn hierarchy_residual_zero_for_both_forms() {
        let grid: Vec<Vec<f64>> = vec![vec![0.5, -1.0, 0.25], vec![-2.0, 1.0, 2.0]];
        let w = WSolution::tau_series(3, vec![0.1, -0.3, 0.7, 0.0, 1.0, 0.2]);
        assert_eq!(heat_residual(&w, &grid), 0.0);
        let ws = WSolution::spectral(
            3,
            vec![
                SpectralNode { lambda: 0.8, weight: 1.0 },
                SpectralNode { lambda: -1.1, weight: 0.5 },
            ],
        );
        assert!(heat_residual(&ws, &grid) <= 1e-10);
    }

    #[test]
    fn corrupted_series_is_flagged() {
        // Negative control: u_m-derivatives use perturbed coefficients.
        struct Corrupted(WSolution, WSolution);
        impl HierarchyField for Corrupted {
            fn nvars(&self) -> usize {
                WSolution::nvars(&self.0)
            }
            fn deriv_u1(&self, order: usize, point: &[f64]) -> f64 {
                self.0.shifted_eval(order, point)
            }
            fn deriv_um(&self, m: usize, point: &[f64]) -> f64 {
                self.1.shifted_eval(m, point)
            }
        }
        let clean = WSolution::tau_series(2, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let mut taus = vec![0.0, 0.0, 0.0, 0.0, 1.0];
        taus[4] += 0.01;
        let bad = Corrupted(clean, WSolution::tau_series(2, taus));
        let grid = vec![vec![0.5, 0.25]];
        assert!(heat_residual(&bad, &grid) > 0.0);
    }

    #[test]
    fn recenter_matches_shifted_values() {
        let w = WSolution::tau_series(2, vec![0.3, -0.2, 1.0, 0.5, -0.7, 0.4]);
        let p = [0.6, -0.9];
        let wc = w.recenter(&p);
        for (du, dv) in [(0.0, 0.0), (0.3, 0.2), (-0.5, 0.1)] {
            let a = w_eval(&w, &[p[0] + du, p[1] + dv]);
            let b = w_eval(&wc, &[du, dv]);
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }
}
