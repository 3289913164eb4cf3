//! Tolerance and iteration-cap constants shared across modules.
//!
//! Values fall in three bands: machine-precision checks on exact
//! constructions (1e-12 .. 1e-10), membership thresholds for curves and
//! surfaces that gate derived quantities (1e-8), and widened bounds for
//! nested finite differencing (1e-6).

/// A point counts as lying on a singular curve or surface when the defining
/// residual is at most this.
pub const ON_CURVE: f64 = 1e-8;

/// Below this, the Whitney tangent vector is treated as vanished.
pub const DEGENERATE_TANGENT: f64 = 1e-10;

/// Below this, `W_uuu` is treated as zero and solution derivatives blow up.
pub const SINGULAR_W3: f64 = 1e-12;

/// `λ_u` magnitudes under this make the general-λ map degenerate.
pub const DEGENERATE_LAMBDA: f64 = 1e-12;

/// Characteristic polynomial values under this make symmetry maps degenerate.
pub const DEGENERATE_CHARACTERISTIC: f64 = 1e-12;

/// Surface-membership threshold for the multicomponent hierarchy.
pub const OFF_SURFACE: f64 = 1e-8;

/// Newton residual target for surface-point location.
pub const NEWTON_TOL: f64 = 1e-10;

/// Newton iteration cap.
pub const NEWTON_MAX_ITER: usize = 50;

/// Default relative tolerance for "vanishing" ladder entries in
/// order classification.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Finite-difference step factor for callable-backed fields (orders 1-2).
pub const FD_STEP: f64 = 1e-5;

/// Target residual for bisection-refined singular-curve vertices.
pub const CURVE_REFINE: f64 = 1e-8;

/// Bisection iteration cap per curve vertex.
pub const BISECT_MAX: usize = 50;

/// Strict-hyperbolicity floor: |S - R| under this is the transition line.
pub const TRANSITION: f64 = 1e-10;

/// Two-path difference above this flags an inconsistent hodograph 1-form.
pub const PATH_INCONSISTENT: f64 = 1e-6;

/// Quadrature panels per leg of an axis-parallel integration path.
pub const PATH_PANELS: usize = 512;
