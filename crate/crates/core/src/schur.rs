//! Elementary Schur polynomials (ESPs) and their Hermite-root factorization.
//!
//! `P_j(u_1, ..., u_n)` is the coefficient of `z^j` in `exp(Σ_l z^l u_l)`.
//! Construction and evaluation use the recurrence obtained by differentiating
//! the generating relation in `z`,
//!
//! ```text
//! j P_j = Σ_{l=1}^{min(j,n)} l u_l P_{j-l},
//! ```
//!
//! with exact rational coefficients at the polynomial level. The key
//! structural facts exposed here: `∂P_j/∂u_l = P_{j-l}`, weighted homogeneity
//! `P_j(λu, λ²v) = λ^j P_j(u, v)`, and the two-variable factorization
//!
//! ```text
//! P_{2n}   = (1/(2n)!)   Π_i (u² + 4 α_i² v),
//! P_{2n+1} = (1/(2n+1)!) u Π_i (u² + 4 α_i² v),
//! ```
//!
//! where `α_i` runs over the positive roots of the physicists' Hermite
//! polynomial of matching degree.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchurError {
    /// The tridiagonal eigensolve behind `hermite_roots` did not converge.
    #[error("Hermite eigensolve failed to converge for degree {degree}")]
    EigenConvergence { degree: usize },
    /// The closed Hermite evaluation of `P_j(u, v)` needs `v < 0`.
    #[error("Hermite form of P_j requires v < 0, got v = {v}")]
    HermiteDomain { v: f64 },
}

/// Exact multivariate polynomial: exponent tuple -> rational coefficient.
///
/// Zero coefficients are never stored; every exponent tuple has length
/// `nvars`. `BTreeMap` keeps term order deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The monomial `u_{var}` (zero-based variable index).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a given exponent tuple (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Multiply by the monomial `u_{var}`.
    pub fn mul_var(&self, var: usize) -> SparsePoly {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[var] += 1;
            out.terms.insert(exps, c.clone());
        }
        out
    }

    /// Exact partial derivative with respect to `u_{var}`.
    pub fn partial(&self, var: usize) -> SparsePoly {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var] -= 1;
            let factor = BigRational::from_integer(BigInt::from(e[var]));
            out.add_term(exps, c * factor);
        }
        out
    }

    /// Iterated partial: `∂^{orders[i]} / ∂u_i^{orders[i]}` over all i.
    pub fn partial_multi(&self, orders: &[u32]) -> SparsePoly {
        assert_eq!(orders.len(), self.nvars);
        let mut p = self.clone();
        for (var, &k) in orders.iter().enumerate() {
            for _ in 0..k {
                p = p.partial(var);
            }
        }
        p
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "point length must equal nvars");
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = c.to_f64().expect("rational representable");
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= x.powi(k as i32);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitute `u_{var} := replacement`, expanding exactly.
    pub fn substitute(&self, var: usize, replacement: &SparsePoly) -> SparsePoly {
        assert!(var < self.nvars);
        assert_eq!(replacement.nvars, self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut base = e.clone();
            let k = base[var];
            base[var] = 0;
            let mut term = SparsePoly::from_terms(self.nvars, [(base, c.clone())]);
            for _ in 0..k {
                term = term.mul(replacement);
            }
            out = out.add(&term);
        }
        out
    }

    /// Set `u_{var} := 0`, dropping every term that contains it.
    pub fn restrict_zero(&self, var: usize) -> SparsePoly {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterpret over a larger variable set (new variables unused).
    pub fn extend_vars(&self, nvars: usize) -> SparsePoly {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps.resize(nvars, 0);
            out.terms.insert(exps, c.clone());
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*u{}", i + 1)?;
                } else if k > 1 {
                    write!(f, "*u{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

/// Sorted real roots of the physicists' Hermite polynomial `H_j`.
#[derive(Debug, Clone)]
pub struct HermiteRootSet {
    pub degree: usize,
    /// Ascending; exactly `degree` entries, symmetric about the origin.
    pub roots: Vec<f64>,
}

/// Factorization of `P_k(u, v)` into `leading * [u] * Π (u² + c_i v)`.
#[derive(Debug, Clone)]
pub struct CurveFactorization {
    pub k: usize,
    /// Exact `1/k!`.
    pub leading: BigRational,
    /// Present iff `k` is odd.
    pub linear_factor: bool,
    /// `c_i = 4 α_i²` over positive Hermite roots `α_i`, ascending;
    /// `floor(k/2)` entries.
    pub parabola_coeffs: Vec<f64>,
}

impl CurveFactorization {
    /// Evaluate the factorized form of `P_k` at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let mut acc = self.leading.to_f64().unwrap();
        if self.linear_factor {
            acc *= u;
        }
        for &c in &self.parabola_coeffs {
            acc *= u * u + c * v;
        }
        acc
    }
}

/// Exact `P_j` of `n` variables. `j = 0` gives the constant 1; the zero
/// polynomial convention for negative indices is exposed by callers passing
/// saturating-subtracted indices.
pub fn esp_poly(j: usize, n: usize) -> SparsePoly {
    assert!(n >= 1, "esp_poly needs at least one variable");
    let mut polys: Vec<SparsePoly> = Vec::with_capacity(j + 1);
    polys.push(SparsePoly::one(n));
    for m in 1..=j {
        let mut acc = SparsePoly::zero(n);
        for l in 1..=m.min(n) {
            let shifted = polys[m - l].mul_var(l - 1);
            acc = acc.add(&shifted.scale(&BigRational::from_integer(BigInt::from(l))));
        }
        let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
        polys.push(acc.scale(&inv_m));
    }
    polys.pop().unwrap()
}

/// Evaluate `P_j` at a point by the same recurrence, in floating point.
/// The number of variables is the length of `point`.
pub fn esp_eval(j: usize, point: &[f64]) -> f64 {
    let n = point.len();
    assert!(n >= 1);
    let mut vals = vec![0.0; j + 1];
    vals[0] = 1.0;
    for m in 1..=j {
        let mut acc = 0.0;
        for l in 1..=m.min(n) {
            acc += l as f64 * point[l - 1] * vals[m - l];
        }
        vals[m] = acc / m as f64;
    }
    vals[j]
}

/// Physicists' Hermite polynomial `H_j(α)` by the three-term recurrence
/// `H_{j+1} = 2α H_j - 2j H_{j-1}`.
pub fn hermite_eval(j: usize, alpha: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha;
    for m in 1..j {
        let next = 2.0 * alpha * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All `j` roots of `H_j`, by the Golub–Welsch eigensolve of the symmetric
/// tridiagonal Jacobi matrix (off-diagonal `sqrt(i/2)`), followed by two
/// Newton polish steps. Fails only if the eigensolve does not converge.
pub fn hermite_roots(j: usize) -> Result<HermiteRootSet, SchurError> {
    assert!(j >= 1);
    if j == 1 {
        return Ok(HermiteRootSet {
            degree: 1,
            roots: vec![0.0],
        });
    }
    let mut m = DMatrix::<f64>::zeros(j, j);
    for i in 1..j {
        let b = (i as f64 / 2.0).sqrt();
        m[(i, i - 1)] = b;
        m[(i - 1, i)] = b;
    }
    let eigen = nalgebra::SymmetricEigen::try_new(m, 1e-14, 10_000)
        .ok_or(SchurError::EigenConvergence { degree: j })?;
    let mut roots: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let h = hermite_eval(j, *r);
            let dh = 2.0 * j as f64 * hermite_eval(j - 1, *r);
            if dh != 0.0 {
                *r -= h / dh;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(HermiteRootSet { degree: j, roots })
}

/// Factor `P_k(u, v)` per the Hermite-root decomposition.
pub fn factor_esp(k: usize) -> Result<CurveFactorization, SchurError> {
    assert!(k >= 1);
    let roots = hermite_roots(k)?;
    let mut coeffs: Vec<f64> = roots
        .roots
        .iter()
        .copied()
        .filter(|&r| r > 1e-8)
        .map(|r| 4.0 * r * r)
        .collect();
    coeffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    debug_assert_eq!(coeffs.len(), k / 2);
    let mut fact = BigInt::one();
    for m in 2..=k {
        fact *= BigInt::from(m);
    }
    Ok(CurveFactorization {
        k,
        leading: BigRational::new(BigInt::one(), fact),
        linear_factor: k % 2 == 1,
        parabola_coeffs: coeffs,
    })
}

/// Closed two-variable evaluation `P_j(u, v) = ((-v)^{j/2} / j!) H_j(u / 2√(-v))`,
/// valid on the real branch `v < 0`.
pub fn esp_eval_hermite(j: usize, u: f64, v: f64) -> Result<f64, SchurError> {
    if v >= 0.0 {
        return Err(SchurError::HermiteDomain { v });
    }
    let s = (-v).sqrt();
    let mut fact = 1.0;
    for m in 2..=j {
        fact *= m as f64;
    }
    Ok(s.powi(j as i32) / fact * hermite_eval(j, u / (2.0 * s)))
}

/// `1/k!` as an exact rational.
pub fn inv_factorial(k: usize) -> BigRational {
    let mut fact = BigInt::one();
    for m in 2..=k {
        fact *= BigInt::from(m);
    }
    BigRational::new(BigInt::one(), fact)
}

/// Exact rational from an `f64` (every finite double is dyadic).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Convenience: absolute value of a rational as f64.
pub fn rational_abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn esp_low_orders_match_hand_expansion() {
        let p0 = esp_poly(0, 2);
        assert_eq!(p0, SparsePoly::one(2));

        // P_2 = u²/2 + v
        let p2 = esp_poly(2, 2);
        assert_eq!(p2.coeff(&[2, 0]), q(1, 2));
        assert_eq!(p2.coeff(&[0, 1]), q(1, 1));
        assert_eq!(p2.num_terms(), 2);

        // P_3 = u³/6 + u v
        let p3 = esp_poly(3, 2);
        assert_eq!(p3.coeff(&[3, 0]), q(1, 6));
        assert_eq!(p3.coeff(&[1, 1]), q(1, 1));
        assert_eq!(p3.num_terms(), 2);

        // P_4 = u⁴/24 + u²v/2 + v²/2
        let p4 = esp_poly(4, 2);
        assert_eq!(p4.coeff(&[4, 0]), q(1, 24));
        assert_eq!(p4.coeff(&[2, 1]), q(1, 2));
        assert_eq!(p4.coeff(&[0, 2]), q(1, 2));
        assert_eq!(p4.num_terms(), 3);
    }

    #[test]
    fn esp_four_variables_order_five() {
        // P_5(u1..u4) = u1^5/120 + u2 u1^3/6 + u3 u1^2/2 + u2^2 u1/2 + u4 u1 + u2 u3
        let p5 = esp_poly(5, 4);
        assert_eq!(p5.coeff(&[5, 0, 0, 0]), q(1, 120));
        assert_eq!(p5.coeff(&[3, 1, 0, 0]), q(1, 6));
        assert_eq!(p5.coeff(&[2, 0, 1, 0]), q(1, 2));
        assert_eq!(p5.coeff(&[1, 2, 0, 0]), q(1, 2));
        assert_eq!(p5.coeff(&[1, 0, 0, 1]), q(1, 1));
        assert_eq!(p5.coeff(&[0, 1, 1, 0]), q(1, 1));
        assert_eq!(p5.num_terms(), 6);
    }

    #[test]
    fn derivative_shift_is_exact() {
        for n in 1..=4usize {
            for j in 0..=15usize {
                let pj = esp_poly(j, n);
                for l in 1..=n {
                    let expected = if j >= l {
                        esp_poly(j - l, n)
                    } else {
                        SparsePoly::zero(n)
                    };
                    assert_eq!(pj.partial(l - 1), expected, "j={j} n={n} l={l}");
                }
            }
        }
    }

    #[test]
    fn esp_eval_simple_values() {
        assert_eq!(esp_eval(1, &[3.0, 7.0]), 3.0);
        let v = esp_eval(3, &[1.0, 1.0]);
        assert!((v - 7.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn hermite_eval_known_values() {
        assert_eq!(hermite_eval(1, 0.7), 1.4);
        let z = hermite_eval(2, std::f64::consts::FRAC_1_SQRT_2);
        assert!(z.abs() < 1e-14, "H_2(1/sqrt2) = {z}");
        assert_eq!(hermite_eval(3, 0.0), 0.0);
    }

    #[test]
    fn hermite_roots_low_degrees_analytic() {
        let r1 = hermite_roots(1).unwrap();
        assert_eq!(r1.roots, vec![0.0]);

        let r2 = hermite_roots(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r2.roots[0] + s).abs() < 1e-12);
        assert!((r2.roots[1] - s).abs() < 1e-12);

        let r3 = hermite_roots(3).unwrap();
        let t = (1.5f64).sqrt();
        assert!((r3.roots[0] + t).abs() < 1e-12);
        assert!(r3.roots[1].abs() < 1e-12);
        assert!((r3.roots[2] - t).abs() < 1e-12);
    }

    #[test]
    fn factorization_small_orders() {
        let f2 = factor_esp(2).unwrap();
        assert!(!f2.linear_factor);
        assert_eq!(f2.leading, q(1, 2));
        assert_eq!(f2.parabola_coeffs.len(), 1);
        assert!((f2.parabola_coeffs[0] - 2.0).abs() < 1e-12);

        let f3 = factor_esp(3).unwrap();
        assert!(f3.linear_factor);
        assert_eq!(f3.leading, q(1, 6));
        assert!((f3.parabola_coeffs[0] - 6.0).abs() < 1e-12);

        // H_4 roots: α² = (3 ± √6)/2, so c = 6 ∓ 2√6.
        let f4 = factor_esp(4).unwrap();
        let s6 = 6.0f64.sqrt();
        assert!((f4.parabola_coeffs[0] - (6.0 - 2.0 * s6)).abs() < 1e-11);
        assert!((f4.parabola_coeffs[1] - (6.0 + 2.0 * s6)).abs() < 1e-11);
    }

    #[test]
    fn hermite_form_matches_direct_eval() {
        let lhs = esp_eval_hermite(2, 1.0, -1.0).unwrap();
        assert!((lhs + 0.5).abs() < 1e-14);

        for u in [-1.5, 0.3, 2.0] {
            let h = esp_eval_hermite(1, u, -1.0).unwrap();
            assert!((h - u).abs() < 1e-14);
        }

        let a = esp_eval_hermite(5, 2.0, -0.5).unwrap();
        let b = esp_eval(5, &[2.0, -0.5]);
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");

        assert!(esp_eval_hermite(3, 1.0, 0.5).is_err());
        assert!(esp_eval_hermite(3, 1.0, 0.0).is_err());
    }

    #[test]
    fn substitution_expands_exactly() {
        // P_3 with v := -u²/2 gives -u³/3.
        let p3 = esp_poly(3, 2);
        let repl = SparsePoly::from_terms(2, [(vec![2, 0], q(-1, 2))]);
        let sub = p3.substitute(1, &repl);
        let mut expected = SparsePoly::zero(2);
        expected = expected.add(&SparsePoly::from_terms(2, [(vec![3, 0], q(-1, 3))]));
        assert_eq!(sub, expected);
    }
}
