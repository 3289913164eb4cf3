//! Truncated Taylor jets of two-variable scalar fields.
//!
//! A `Jet2` of order `r` stores the raw partial values `f^{(i,j)}` for
//! `i + j ≤ r`. Products go through the Leibniz rule and derivative shifts
//! drop the order by one, which is exactly what iterated application of a
//! Whitney vector field `∇_V = -g_v ∂_u + g_u ∂_v` consumes: each
//! application of the field to a jet of order `r` produces a jet of order
//! `r - 1`, so a depth-`m` ladder needs jets of order `m` and no global
//! symbolic algebra.

/// Partial values `f^{(i,j)}(p)`, `i + j ≤ order`, at an implicit base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    /// `coeffs[i][j]`, row `i` has `order + 1 - i` entries.
    coeffs: Vec<Vec<f64>>,
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        let coeffs = (0..=order).map(|i| vec![0.0; order + 1 - i]).collect();
        Jet2 { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.coeffs[i][j] = value;
    }

    /// The function value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .fold(0.0_f64, |m, &c| m.max(c.abs()))
    }

    /// Jet of `∂f/∂u`, one order lower.
    pub fn du(&self) -> Jet2 {
        assert!(self.order >= 1);
        let mut out = Jet2::zero(self.order - 1);
        for i in 0..self.order {
            for j in 0..=(self.order - 1 - i) {
                out.coeffs[i][j] = self.coeffs[i + 1][j];
            }
        }
        out
    }

    /// Jet of `∂f/∂v`, one order lower.
    pub fn dv(&self) -> Jet2 {
        assert!(self.order >= 1);
        let mut out = Jet2::zero(self.order - 1);
        for i in 0..self.order {
            for j in 0..=(self.order - 1 - i) {
                out.coeffs[i][j] = self.coeffs[i][j + 1];
            }
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Jet2 {
        assert!(order <= self.order);
        let mut out = Jet2::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                out.coeffs[i][j] = self.coeffs[i][j];
            }
        }
        out
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Jet2::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                out.coeffs[i][j] = self.coeffs[i][j] + other.coeffs[i][j];
            }
        }
        out
    }

    pub fn neg(&self) -> Jet2 {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c = -*c;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c *= s;
            }
        }
        out
    }

    /// Leibniz product, truncated to the smaller order.
    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let binom = binomial_table(order);
        let mut out = Jet2::zero(order);
        for a in 0..=order {
            for b in 0..=(order - a) {
                let mut acc = 0.0;
                for i in 0..=a {
                    for j in 0..=b {
                        acc += binom[a][i]
                            * binom[b][j]
                            * self.coeffs[i][j]
                            * other.coeffs[a - i][b - j];
                    }
                }
                out.coeffs[a][b] = acc;
            }
        }
        out
    }
}

fn binomial_table(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1.0;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j <= i - 1 { t[i - 1][j] } else { 0.0 };
        }
    }
    t
}

/// One application of `∇_V = -g_v ∂_u + g_u ∂_v` to `f`, as jets.
/// `g` must carry at least the order of `f`; the result is one order lower.
pub fn apply_whitney(g: &Jet2, f: &Jet2) -> Jet2 {
    let r = f.order();
    assert!(g.order() >= r, "curve-function jet too shallow");
    assert!(r >= 1);
    let g_trunc = g.truncate(r);
    let term1 = g_trunc.dv().neg().mul(&f.du());
    let term2 = g_trunc.du().mul(&f.dv());
    term1.add(&term2)
}

/// Full ladder `∇_V^m (f_1, .., f_c)(p)` for `m = 1..=depth`.
/// Component jets and `g` must be of order `depth` at least.
pub fn whitney_ladder(g: &Jet2, components: &[Jet2], depth: usize) -> Vec<Vec<f64>> {
    assert!(depth >= 1);
    let mut current: Vec<Jet2> = components
        .iter()
        .map(|c| {
            assert!(c.order() >= depth, "component jet too shallow");
            c.truncate(depth)
        })
        .collect();
    let mut ladder = Vec::with_capacity(depth);
    for _ in 0..depth {
        current = current.iter().map(|f| apply_whitney(g, f)).collect();
        ladder.push(current.iter().map(|f| f.value()).collect());
    }
    ladder
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field2;
    use crate::schur::esp_poly;

    #[test]
    fn product_jet_matches_polynomial_product() {
        let p = Field2::poly(esp_poly(3, 2));
        let q = Field2::poly(esp_poly(2, 2));
        let (u, v) = (0.7, -0.3);
        let jp = p.jet(u, v, 3);
        let jq = q.jet(u, v, 3);
        let prod = jp.mul(&jq);
        // Compare against the exact product polynomial's partials.
        let exact = esp_poly(3, 2).mul(&esp_poly(2, 2));
        for i in 0..=3usize {
            for j in 0..=(3 - i) {
                let want = exact.partial_multi(&[i as u32, j as u32]).eval(&[u, v]);
                let got = prod.get(i, j);
                assert!(
                    (want - got).abs() < 1e-12 * want.abs().max(1.0),
                    "({i},{j}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn ladder_depth_three_on_flat_potential() {
        // W = P_5: g = P_2, t = P_3, x = P_4 - u P_3. At the origin the first
        // two ladder entries vanish and the third is (2, 0).
        let g = Field2::poly(esp_poly(2, 2));
        let t = Field2::poly(esp_poly(3, 2));
        let x = Field2::poly(esp_poly(4, 2).sub(&esp_poly(3, 2).mul_var(0)));
        let depth = 3;
        let gj = g.jet(0.0, 0.0, depth);
        let tj = t.jet(0.0, 0.0, depth);
        let xj = x.jet(0.0, 0.0, depth);
        let ladder = whitney_ladder(&gj, &[tj, xj], depth);
        assert!(ladder[0][0].abs() < 1e-14 && ladder[0][1].abs() < 1e-14);
        assert!(ladder[1][0].abs() < 1e-14 && ladder[1][1].abs() < 1e-14);
        assert!((ladder[2][0] - 2.0).abs() < 1e-12, "{:?}", ladder[2]);
        assert!(ladder[2][1].abs() < 1e-12);
    }
}
