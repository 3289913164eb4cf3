//! Scalar fields of two variables with mixed-partial access.
//!
//! Three backings with decreasing fidelity: exact sparse polynomials, exact
//! caller-supplied derivative oracles (for spectral sums and manufactured
//! solutions), and plain callables differentiated by nested central
//! differences. Consumers ask for `∂^{a+b} f / ∂u^a ∂v^b` and do not care
//! which backing answers.

use std::sync::Arc;

use crate::jet::Jet2;
use crate::schur::SparsePoly;
use crate::tol;

/// A scalar field `f(u, v)` with derivative access.
#[derive(Clone)]
pub enum Field2 {
    /// Exact polynomial in two variables.
    Poly(SparsePoly),
    /// Exact derivative oracle: `(a, b, u, v) -> ∂^{a+b} f / ∂u^a ∂v^b`.
    Deriv(Arc<dyn Fn(usize, usize, f64, f64) -> f64 + Send + Sync>),
    /// Plain callable; derivatives by central finite differences with step
    /// `1e-5 · max(1, |coord|)` for total order ≤ 2 and a per-order widened
    /// step beyond that (nested differencing loses accuracy fast).
    Numeric(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for Field2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field2::Poly(p) => write!(f, "Field2::Poly({p})"),
            Field2::Deriv(_) => write!(f, "Field2::Deriv(..)"),
            Field2::Numeric(_) => write!(f, "Field2::Numeric(..)"),
        }
    }
}

impl Field2 {
    pub fn poly(p: SparsePoly) -> Self {
        assert_eq!(p.nvars(), 2, "Field2 polynomials have two variables");
        Field2::Poly(p)
    }

    pub fn from_fn(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Field2::Numeric(Arc::new(f))
    }

    pub fn from_deriv_fn(f: impl Fn(usize, usize, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Field2::Deriv(Arc::new(f))
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.partial(0, 0, u, v)
    }

    /// `∂^{a+b} f / ∂u^a ∂v^b` at `(u, v)`.
    pub fn partial(&self, a: usize, b: usize, u: f64, v: f64) -> f64 {
        match self {
            Field2::Poly(p) => {
                let orders = [a as u32, b as u32];
                p.partial_multi(&orders).eval(&[u, v])
            }
            Field2::Deriv(f) => f(a, b, u, v),
            Field2::Numeric(f) => fd_partial(f.as_ref(), a, b, u, v, fd_step(a + b, u, v)),
        }
    }

    /// Truncated Taylor data at `(u, v)` up to total order `order`.
    pub fn jet(&self, u: f64, v: f64, order: usize) -> Jet2 {
        let mut jet = Jet2::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                jet.set(i, j, self.partial(i, j, u, v));
            }
        }
        jet
    }
}

/// Step size for an order-`k` nested central difference near `(u, v)`.
fn fd_step(k: usize, u: f64, v: f64) -> f64 {
    let scale = 1.0_f64.max(u.abs()).max(v.abs());
    if k <= 2 {
        tol::FD_STEP * scale
    } else {
        scale * f64::EPSILON.powf(1.0 / (2.0 + k as f64))
    }
}

fn fd_partial(f: &dyn Fn(f64, f64) -> f64, a: usize, b: usize, u: f64, v: f64, h: f64) -> f64 {
    if a > 0 {
        (fd_partial(f, a - 1, b, u + h, v, h) - fd_partial(f, a - 1, b, u - h, v, h)) / (2.0 * h)
    } else if b > 0 {
        (fd_partial(f, a, b - 1, u, v + h, h) - fd_partial(f, a, b - 1, u, v - h, h)) / (2.0 * h)
    } else {
        f(u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::esp_poly;

    #[test]
    fn poly_partials_are_exact() {
        let p = Field2::poly(esp_poly(4, 2));
        // ∂²P_4/∂u² = P_2 = u²/2 + v
        let got = p.partial(2, 0, 1.5, -0.5);
        assert_eq!(got, 1.5 * 1.5 / 2.0 - 0.5);
        // ∂P_4/∂v = P_2 as well
        assert_eq!(p.partial(0, 1, 1.5, -0.5), got);
    }

    #[test]
    fn numeric_partials_first_and_second_order() {
        let f = Field2::from_fn(|u, v| (u * v).sin() + u * u * v);
        let exact_u = |u: f64, v: f64| v * (u * v).cos() + 2.0 * u * v;
        let exact_uv = |u: f64, v: f64| {
            (u * v).cos() - u * v * (u * v).sin() + 2.0 * u
        };
        let (u, v) = (0.4, -0.8);
        assert!((f.partial(1, 0, u, v) - exact_u(u, v)).abs() < 1e-9);
        assert!((f.partial(1, 1, u, v) - exact_uv(u, v)).abs() < 1e-5);
    }

    #[test]
    fn mixed_partials_commute_for_numeric_backing() {
        let f = Field2::from_fn(|u, v| (u + 2.0 * v).exp() * (u - v));
        let (u, v) = (0.1, 0.2);
        let uv = f.partial(1, 1, u, v);
        // Same order computed through the other nesting order via jets of a
        // transposed field.
        let g = Field2::from_fn(move |v, u| (u + 2.0 * v).exp() * (u - v));
        let vu = g.partial(1, 1, v, u);
        assert!((uv - vu).abs() < 1e-6 * uv.abs().max(1.0));
    }
}
