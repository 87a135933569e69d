//! Numerical thresholds shared by every module.

/// Largest excursion of an arccos argument beyond `[-1, 1]` that is treated
/// as rounding noise and clamped. Anything further out is a domain error.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Gram determinants (and leading minors) at or below this value are
/// classified as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Smallest admissible sine factor in a denominator.
pub const SINE_FLOOR: f64 = 1e-12;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Largest round-trip residual for a dihedral-angle set to count as realizable.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-8;
