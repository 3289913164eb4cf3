//! Hodograph plane-into-plane mappings of the parabolic (Jordan-block)
//! system and the general-λ variant.
//!
//! For `λ = u` the map is `t = W_v`, `x = W_u - u W_v` with `W` a heat
//! solution; its Jacobian is `W_uuu²`, so the singular curve γ is
//! `{W_uuu = 0}` and the Jacobian gradient vanishes *identically* on γ.
//! The Whitney field is therefore taken with respect to the curve-defining
//! function `t_u = W_uuu` (the square root of the Jacobian); even so, at
//! points of γ with `t_v = 0` the first two iterated field applications are
//! forced to vanish together — the fold/cusp dichotomy never gets started.
//! This module exposes exactly that machinery, plus singular-curve tracing
//! and deterministic grid imaging.

use thiserror::Error;

use crate::field::Field2;
use crate::heat::WSolution;
use crate::jet::whitney_ladder;
use crate::schur::{rational_from_f64, SparsePoly};
use crate::tol;

#[derive(Debug, Error)]
pub enum ParabolicError {
    /// `W_uuu` vanished: gradient catastrophe, solution derivatives blow up.
    #[error("singular point: |W_uuu| = {w_uuu:e} below threshold")]
    SingularPoint { w_uuu: f64 },
    /// `λ_u` vanished; the general-λ hodograph form is not defined.
    #[error("degenerate lambda: |λ_u| = {lambda_u:e} below threshold")]
    DegenerateLambda { lambda_u: f64 },
    /// The tangent vector of the singular curve vanished.
    #[error("degenerate tangent: the curve tangent vector vanishes at ({u}, {v})")]
    DegenerateTangent { u: f64, v: f64 },
    /// The supplied point could not be projected onto the singular curve.
    #[error("point not on singular curve: residual {residual:e} after projection")]
    OffCurve { residual: f64 },
}

/// Axis-aligned rectangle in the `(u, v)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Rect { u0, u1, v0, v1 }
    }

    pub fn is_empty(&self) -> bool {
        self.u1 <= self.u0 || self.v1 <= self.v0
    }
}

/// A plane-into-plane map with derivative access on both components.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    pub t: Field2,
    pub x: Field2,
}

impl PlaneMap {
    pub fn eval(&self, u: f64, v: f64) -> (f64, f64) {
        (self.t.eval(u, v), self.x.eval(u, v))
    }

    /// `t_u x_v - t_v x_u` from component partials.
    pub fn jacobian(&self, u: f64, v: f64) -> f64 {
        let tu = self.t.partial(1, 0, u, v);
        let tv = self.t.partial(0, 1, u, v);
        let xu = self.x.partial(1, 0, u, v);
        let xv = self.x.partial(0, 1, u, v);
        tu * xv - tv * xu
    }
}

/// `Σ_j τ_j P_{j-shift}` as an exact polynomial (τ taken as exact dyadics).
fn tau_shift_poly(taus: &[f64], shift: usize) -> SparsePoly {
    let mut acc = SparsePoly::zero(2);
    for (j, &tau) in taus.iter().enumerate() {
        if tau == 0.0 || j < shift {
            continue;
        }
        let p = crate::schur::esp_poly(j - shift, 2);
        acc = acc.add(&p.scale(&rational_from_f64(tau)));
    }
    acc
}

/// The Jordan hodograph map `t = W_v`, `x = W_u - u W_v` at a point.
pub fn jordan_map(w: &WSolution, point: (f64, f64)) -> (f64, f64) {
    assert_eq!(w.nvars(), 2);
    let p = [point.0, point.1];
    let wv = w.shifted_eval(2, &p);
    let wu = w.shifted_eval(1, &p);
    (wv, wu - point.0 * wv)
}

/// Jacobian `W_uuu²` of the Jordan map.
pub fn jordan_jacobian(w: &WSolution, point: (f64, f64)) -> f64 {
    let w3 = w.shifted_eval(3, &[point.0, point.1]);
    w3 * w3
}

/// The Jordan map as a [`PlaneMap`] with exact derivative access.
/// τ-series become exact polynomials; spectral sums become derivative
/// oracles (their mixed partials are closed-form).
pub fn jordan_plane_map(w: &WSolution) -> PlaneMap {
    assert_eq!(w.nvars(), 2);
    match w {
        WSolution::TauSeries { taus, .. } => {
            let t = tau_shift_poly(taus, 2);
            let x = tau_shift_poly(taus, 1).sub(&tau_shift_poly(taus, 2).mul_var(0));
            PlaneMap {
                t: Field2::poly(t),
                x: Field2::poly(x),
            }
        }
        WSolution::Spectral { .. } => {
            let wt = w.clone();
            let wx = w.clone();
            // ∂^a_u ∂^b_v t = W-shift (2 + a + 2b);
            // ∂^a_u ∂^b_v x = (1 - a)·shift(1 + a + 2b) - u·shift(2 + a + 2b).
            let t = Field2::from_deriv_fn(move |a, b, u, v| {
                wt.shifted_eval(2 + a + 2 * b, &[u, v])
            });
            let x = Field2::from_deriv_fn(move |a, b, u, v| {
                let lower = wx.shifted_eval(1 + a + 2 * b, &[u, v]);
                let upper = wx.shifted_eval(2 + a + 2 * b, &[u, v]);
                (1.0 - a as f64) * lower - u * upper
            });
            PlaneMap { t, x }
        }
    }
}

/// The curve-defining function `g = W_uuu` of the Jordan map, with exact
/// derivative access (`∂^a_u ∂^b_v g` is the `(3 + a + 2b)`-shift of `W`).
pub fn jordan_curve_field(w: &WSolution) -> Field2 {
    assert_eq!(w.nvars(), 2);
    match w {
        WSolution::TauSeries { taus, .. } => Field2::poly(tau_shift_poly(taus, 3)),
        WSolution::Spectral { .. } => {
            let wc = w.clone();
            Field2::from_deriv_fn(move |a, b, u, v| wc.shifted_eval(3 + a + 2 * b, &[u, v]))
        }
    }
}

/// Solution derivatives of the Jordan system recovered by inverting the
/// hodograph map: with `J = W_uuu²`,
///
/// ```text
/// u_x = -W_vv / W_uuu²,  v_x = 1 / W_uuu,
/// u_t = 1/W_uuu - u W_vv / W_uuu²,  v_t = u / W_uuu.
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionDerivatives {
    pub u_x: f64,
    pub v_x: f64,
    pub u_t: f64,
    pub v_t: f64,
}

pub fn solution_derivatives(
    w: &WSolution,
    point: (f64, f64),
) -> Result<SolutionDerivatives, ParabolicError> {
    let p = [point.0, point.1];
    let w3 = w.shifted_eval(3, &p);
    if w3.abs() <= tol::SINGULAR_W3 {
        return Err(ParabolicError::SingularPoint { w_uuu: w3 });
    }
    let wvv = w.shifted_eval(4, &p);
    let j = w3 * w3;
    Ok(SolutionDerivatives {
        u_x: -wvv / j,
        v_x: 1.0 / w3,
        u_t: 1.0 / w3 - point.0 * wvv / j,
        v_t: point.0 / w3,
    })
}

/// A general-λ parabolic system: `λ(u, v)` and a potential `ω(u, v)`.
#[derive(Debug, Clone)]
pub struct LambdaSystem {
    pub lambda: Field2,
    pub omega: Field2,
}

/// The general-λ hodograph map `t = ω_u/λ_u`, `x = ω - (λ/λ_u) ω_u`.
pub fn generic_map(sys: &LambdaSystem, point: (f64, f64)) -> Result<(f64, f64), ParabolicError> {
    let (u, v) = point;
    let lu = sys.lambda.partial(1, 0, u, v);
    if lu.abs() < tol::DEGENERATE_LAMBDA {
        return Err(ParabolicError::DegenerateLambda { lambda_u: lu });
    }
    let l = sys.lambda.eval(u, v);
    let ou = sys.omega.partial(1, 0, u, v);
    let o = sys.omega.eval(u, v);
    Ok((ou / lu, o - l / lu * ou))
}

/// First partials of the general-λ map, differentiated analytically.
/// Useful for the area law `J = t_u²`, which holds exactly when ω satisfies
/// its compatibility equation.
pub fn generic_map_partials(
    sys: &LambdaSystem,
    point: (f64, f64),
) -> Result<(f64, f64, f64, f64), ParabolicError> {
    let (u, v) = point;
    let l = sys.lambda.eval(u, v);
    let lu = sys.lambda.partial(1, 0, u, v);
    if lu.abs() < tol::DEGENERATE_LAMBDA {
        return Err(ParabolicError::DegenerateLambda { lambda_u: lu });
    }
    let lv = sys.lambda.partial(0, 1, u, v);
    let luu = sys.lambda.partial(2, 0, u, v);
    let luv = sys.lambda.partial(1, 1, u, v);
    let ou = sys.omega.partial(1, 0, u, v);
    let ov = sys.omega.partial(0, 1, u, v);
    let ouu = sys.omega.partial(2, 0, u, v);
    let ouv = sys.omega.partial(1, 1, u, v);
    let t_u = ouu / lu - ou * luu / (lu * lu);
    let t_v = ouv / lu - ou * luv / (lu * lu);
    // x = ω - λ ω_u / λ_u; the u-derivative collapses to -λ t_u identically.
    let x_u = -l * t_u;
    let x_v = ov - lv * ou / lu - l * t_v;
    Ok((t_u, t_v, x_u, x_v))
}

/// Compatibility residual maxima over a grid:
/// `r_ω = ω_uu + (λ_v - λ_uu/λ_u) ω_u - λ_u ω_v` and
/// `r_t = t_uu - λ_u t_v + λ_v t_u`. Reports, never rejects.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompatResiduals {
    pub r_omega: Option<f64>,
    pub r_t: Option<f64>,
}

pub fn compatibility_residuals(
    lambda: &Field2,
    omega: Option<&Field2>,
    t_fn: Option<&Field2>,
    grid: &[(f64, f64)],
) -> CompatResiduals {
    let mut out = CompatResiduals::default();
    for &(u, v) in grid {
        let lu = lambda.partial(1, 0, u, v);
        let lv = lambda.partial(0, 1, u, v);
        let luu = lambda.partial(2, 0, u, v);
        if let Some(om) = omega {
            let r = om.partial(2, 0, u, v) + (lv - luu / lu) * om.partial(1, 0, u, v)
                - lu * om.partial(0, 1, u, v);
            let worst = out.r_omega.get_or_insert(0.0);
            *worst = worst.max(r.abs());
        }
        if let Some(t) = t_fn {
            let r = t.partial(2, 0, u, v) - lu * t.partial(0, 1, u, v)
                + lv * t.partial(1, 0, u, v);
            let worst = out.r_t.get_or_insert(0.0);
            *worst = worst.max(r.abs());
        }
    }
    out
}

/// The Whitney field data at a singular-curve point: the tangent
/// `V = (-g_v, g_u)` and the image vector `∇_V F = -g_v F_u + g_u F_v`.
#[derive(Debug, Clone, Copy)]
pub struct WhitneyAction {
    /// The point actually used (after Newton projection onto the curve).
    pub point: (f64, f64),
    pub tangent: (f64, f64),
    pub gradient: (f64, f64),
}

/// Project a point onto `{g = 0}` by Newton steps in `u`.
fn project_to_curve(g: &Field2, point: (f64, f64)) -> Result<(f64, f64), ParabolicError> {
    let (mut u, v) = point;
    for _ in 0..8 {
        let gval = g.eval(u, v);
        if gval.abs() <= tol::ON_CURVE {
            return Ok((u, v));
        }
        let gu = g.partial(1, 0, u, v);
        if gu.abs() < 1e-14 {
            break;
        }
        u -= gval / gu;
    }
    let residual = g.eval(u, v).abs();
    if residual <= tol::ON_CURVE {
        Ok((u, v))
    } else {
        Err(ParabolicError::OffCurve { residual })
    }
}

/// Evaluate the Whitney field of the curve `{g = 0}` on a map at `p`.
/// `g` is the curve-defining function; for the Jordan map pass
/// [`jordan_curve_field`] (the Jacobian itself has identically vanishing
/// gradient on the curve).
pub fn whitney_field(
    map: &PlaneMap,
    g: &Field2,
    p: (f64, f64),
) -> Result<WhitneyAction, ParabolicError> {
    let (u, v) = project_to_curve(g, p)?;
    let gu = g.partial(1, 0, u, v);
    let gv = g.partial(0, 1, u, v);
    let tangent = (-gv, gu);
    if tangent.0.hypot(tangent.1) <= tol::DEGENERATE_TANGENT {
        return Err(ParabolicError::DegenerateTangent { u, v });
    }
    let grad_t = -gv * map.t.partial(1, 0, u, v) + gu * map.t.partial(0, 1, u, v);
    let grad_x = -gv * map.x.partial(1, 0, u, v) + gu * map.x.partial(0, 1, u, v);
    Ok(WhitneyAction {
        point: (u, v),
        tangent,
        gradient: (grad_t, grad_x),
    })
}

/// Iterated field application `∇_V^m (t, x)(p)` through jet algebra
/// (exact for polynomial / derivative-oracle backings).
pub fn whitney_iterate(
    map: &PlaneMap,
    g: &Field2,
    p: (f64, f64),
    m: usize,
) -> Result<(f64, f64), ParabolicError> {
    let ladder = whitney_ladder_of_map(map, g, p, m)?;
    let last = &ladder[m - 1];
    Ok((last.0, last.1))
}

/// The whole ladder `∇_V^k (t, x)(p)`, `k = 1..=depth`.
pub fn whitney_ladder_of_map(
    map: &PlaneMap,
    g: &Field2,
    p: (f64, f64),
    depth: usize,
) -> Result<Vec<(f64, f64)>, ParabolicError> {
    assert!(depth >= 1);
    let (u, v) = project_to_curve(g, p)?;
    let gu = g.partial(1, 0, u, v);
    let gv = g.partial(0, 1, u, v);
    if gu.hypot(gv) <= tol::DEGENERATE_TANGENT {
        return Err(ParabolicError::DegenerateTangent { u, v });
    }
    let gj = g.jet(u, v, depth);
    let tj = map.t.jet(u, v, depth);
    let xj = map.x.jet(u, v, depth);
    let ladder = whitney_ladder(&gj, &[tj, xj], depth);
    Ok(ladder.into_iter().map(|row| (row[0], row[1])).collect())
}

/// Polyline approximation of `{W_uuu = 0}` inside a rectangle.
#[derive(Debug, Clone)]
pub struct SingularCurveTrace {
    pub rect: Rect,
    pub resolution: usize,
    /// Chained crossing points; empty when the rectangle sees no sign change.
    pub polylines: Vec<Vec<(f64, f64)>>,
}

impl SingularCurveTrace {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.polylines.iter().flatten().copied()
    }
}

/// Marching squares on the sign of `W_uuu` with per-crossing bisection
/// refinement; saddle cells are disambiguated by the center sample sign.
pub fn trace_singular_curve(w: &WSolution, rect: Rect, resolution: usize) -> SingularCurveTrace {
    assert!(resolution >= 8, "resolution must be at least 8 per axis");
    let g = jordan_curve_field(w);
    trace_zero_set(&g, rect, resolution)
}

/// Marching squares for an arbitrary curve-defining field.
pub fn trace_zero_set(g: &Field2, rect: Rect, resolution: usize) -> SingularCurveTrace {
    let n = resolution;
    let du = (rect.u1 - rect.u0) / n as f64;
    let dv = (rect.v1 - rect.v0) / n as f64;
    let mut values = vec![vec![0.0; n + 1]; n + 1];
    for (i, row) in values.iter_mut().enumerate() {
        let u = rect.u0 + i as f64 * du;
        for (j, val) in row.iter_mut().enumerate() {
            let v = rect.v0 + j as f64 * dv;
            *val = g.eval(u, v);
        }
    }

    // Edge key: (i, j, horizontal?) identifies the grid edge a crossing sits on.
    use std::collections::HashMap;
    let mut crossings: HashMap<(usize, usize, bool), (f64, f64)> = HashMap::new();
    let mut segments: Vec<((usize, usize, bool), (usize, usize, bool))> = Vec::new();

    let pos = |x: f64| x >= 0.0;
    let mut edge_point = |i: usize, j: usize, horizontal: bool| -> (f64, f64) {
        let key = (i, j, horizontal);
        if let Some(&p) = crossings.get(&key) {
            return p;
        }
        let (mut a, mut b) = if horizontal {
            (
                (rect.u0 + i as f64 * du, rect.v0 + j as f64 * dv),
                (rect.u0 + (i + 1) as f64 * du, rect.v0 + j as f64 * dv),
            )
        } else {
            (
                (rect.u0 + i as f64 * du, rect.v0 + j as f64 * dv),
                (rect.u0 + i as f64 * du, rect.v0 + (j + 1) as f64 * dv),
            )
        };
        let mut fa = g.eval(a.0, a.1);
        for _ in 0..tol::BISECT_MAX {
            let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            let fm = g.eval(mid.0, mid.1);
            if fm.abs() <= tol::CURVE_REFINE {
                crossings.insert(key, mid);
                return mid;
            }
            if pos(fa) != pos(fm) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        crossings.insert(key, mid);
        mid
    };

    for i in 0..n {
        for j in 0..n {
            let c00 = pos(values[i][j]);
            let c10 = pos(values[i + 1][j]);
            let c11 = pos(values[i + 1][j + 1]);
            let c01 = pos(values[i][j + 1]);
            let case = (c00 as usize) | (c10 as usize) << 1 | (c11 as usize) << 2 | (c01 as usize) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            // Edges of this cell: bottom (i,j,H), right (i+1,j,V),
            // top (i,j+1,H), left (i,j,V).
            let bottom = (i, j, true);
            let right = (i + 1, j, false);
            let top = (i, j + 1, true);
            let left = (i, j, false);
            let mut link = |e1: (usize, usize, bool), e2: (usize, usize, bool)| {
                edge_point(e1.0, e1.1, e1.2);
                edge_point(e2.0, e2.1, e2.2);
                segments.push((e1, e2));
            };
            match case {
                1 | 14 => link(left, bottom),
                2 | 13 => link(bottom, right),
                3 | 12 => link(left, right),
                4 | 11 => link(right, top),
                6 | 9 => link(bottom, top),
                7 | 8 => link(left, top),
                5 | 10 => {
                    let center = g.eval(
                        rect.u0 + (i as f64 + 0.5) * du,
                        rect.v0 + (j as f64 + 0.5) * dv,
                    );
                    let center_matches_c00 = pos(center) == c00;
                    if (case == 5) == center_matches_c00 {
                        link(left, bottom);
                        link(right, top);
                    } else {
                        link(left, top);
                        link(bottom, right);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let polylines = chain_segments(&segments, &crossings);
    SingularCurveTrace {
        rect,
        resolution,
        polylines,
    }
}

type EdgeKey = (usize, usize, bool);

fn chain_segments(
    segments: &[(EdgeKey, EdgeKey)],
    crossings: &std::collections::HashMap<EdgeKey, (f64, f64)>,
) -> Vec<Vec<(f64, f64)>> {
    use std::collections::HashMap;
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(idx);
        adjacency.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = vec![a, b];
        // Extend forward from the tail, then backward from the head.
        loop {
            let tail = *chain.last().unwrap();
            let next = adjacency[&tail].iter().copied().find(|&i| !used[i]);
            match next {
                Some(i) => {
                    used[i] = true;
                    let (p, q) = segments[i];
                    chain.push(if p == tail { q } else { p });
                }
                None => break,
            }
        }
        loop {
            let head = chain[0];
            let next = adjacency[&head].iter().copied().find(|&i| !used[i]);
            match next {
                Some(i) => {
                    used[i] = true;
                    let (p, q) = segments[i];
                    chain.insert(0, if p == head { q } else { p });
                }
                None => break,
            }
        }
        polylines.push(chain.into_iter().map(|k| crossings[&k]).collect());
    }
    polylines
}

/// One sampled row of an image grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub x: f64,
    pub j: f64,
}

/// Sample a map over an inclusive `resolution × resolution` grid in
/// deterministic row-major order (`u` outer, `v` inner).
pub fn image_grid(map: &PlaneMap, rect: Rect, resolution: usize) -> Vec<GridRow> {
    assert!(resolution >= 2, "resolution must be at least 2");
    if rect.is_empty() {
        return Vec::new();
    }
    let steps = (resolution - 1) as f64;
    let mut rows = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let u = rect.u0 + i as f64 * (rect.u1 - rect.u0) / steps;
        for j in 0..resolution {
            let v = rect.v0 + j as f64 * (rect.v1 - rect.v0) / steps;
            let (t, x) = map.eval(u, v);
            rows.push(GridRow {
                u,
                v,
                t,
                x,
                j: map.jacobian(u, v),
            });
        }
    }
    rows
}
