//! Iterative belief propagation for the code lattice `{ y : y·H ∈ ℤⁿ }`.
//!
//! Variables are the symbols `y_i`; checks are the columns `j` of `H`, each
//! enforcing `Σ_k H_kj·y_k ∈ ℤ`. Messages are densities sampled on uniform grids.

mod bp;
mod grid;

use std::fmt;

pub use bp::{bp_decode, bp_decode_with_inverse, BpDecoder, Estimate};
pub use grid::PdfGrid;

use grid::Circle;

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderConfig {
    /// Grid step; `None` picks `min(1/64, σ/8)`.
    pub delta: Option<f64>,
    /// Grid half-width `W` around each channel observation.
    pub half_width: f64,
    pub max_iterations: usize,
    /// Stop once this many consecutive integer estimates agree.
    pub stability_window: usize,
    /// Grids are also clipped to this many standard deviations of the channel,
    /// where the channel density is numerically zero.
    pub support_sigmas: f64,
    /// Run node updates on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            delta: None,
            half_width: 3.0,
            max_iterations: 20,
            stability_window: 3,
            support_sigmas: 10.0,
            parallel: false,
        }
    }
}

impl DecoderConfig {
    pub fn check(&self) -> Result<(), DecoderError> {
        let bad = |m: &str| Err(DecoderError::ConfigViolation(m.into()));
        if let Some(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                return bad("Δ must be positive");
            }
        }
        if !(self.half_width >= 1.0 && self.half_width.is_finite()) {
            return bad("W must be at least 1");
        }
        if self.max_iterations == 0 {
            return bad("at least one iteration is required");
        }
        if self.stability_window == 0 {
            return bad("stability window must be positive");
        }
        if !(self.support_sigmas > 0.0) {
            return bad("support must be positive");
        }
        Ok(())
    }

    /// Grid step for noise standard deviation `sigma`.
    pub fn delta_for(&self, sigma: f64) -> f64 {
        self.delta.unwrap_or_else(|| (1.0 / 64.0f64).min(sigma / 8.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecoderError {
    NonFinite,
    ConfigViolation(String),
}

impl fmt::Display for DecoderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderError::NonFinite => write!(f, "non-finite decoder input"),
            DecoderError::ConfigViolation(m) => write!(f, "decoder configuration: {m}"),
        }
    }
}

impl std::error::Error for DecoderError {}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub y_hat: Vec<f64>,
    pub v_hat: Vec<num_bigint::BigInt>,
    /// `v_hat·H⁻¹`, exact.
    pub x_exact: Vec<num_rational::BigRational>,
    pub converged: bool,
    pub iterations_used: usize,
}

/// Check-to-variable message on a grid of half-width `cfg.half_width` around `center`.
///
/// `incoming` holds the other variables' messages with their coefficients in
/// the check; `a_i` is the target's coefficient.
pub fn check_message(
    incoming: &[(PdfGrid, i64)],
    a_i: i64,
    center: f64,
    cfg: &DecoderConfig,
) -> Result<PdfGrid, DecoderError> {
    cfg.check()?;
    if incoming.is_empty() {
        return Err(DecoderError::ConfigViolation("check needs at least one incoming message".into()));
    }
    if a_i == 0 || incoming.iter().any(|(_, a)| *a == 0) {
        return Err(DecoderError::ConfigViolation("coefficients must be nonzero".into()));
    }
    let delta = cfg.delta.unwrap_or(1.0 / 64.0);
    let circle = Circle::for_delta(delta.min(incoming.iter().map(|(g, _)| g.delta()).fold(f64::INFINITY, f64::min)))?;
    let mut product: Option<Vec<_>> = None;
    for (g, a) in incoming {
        let mass: Vec<f64> = g.samples().iter().map(|s| s * g.delta()).collect();
        let spec = circle.fold(&mass, g.point(0), g.delta(), *a as f64);
        product = Some(match product {
            None => spec,
            Some(p) => p.iter().zip(&spec).map(|(x, y)| x * y).collect(),
        });
    }
    let s = circle.density(product.expect("nonempty"));
    let k = grid::half_steps(delta, cfg.half_width)?;
    let mut out = vec![0.0; 2 * k + 1];
    let x0 = center - k as f64 * delta;
    circle.unfold(&s, x0, delta, a_i as f64, &mut out);
    let mut g = PdfGrid::new(center, delta, cfg.half_width, out)?;
    g.normalize();
    Ok(g)
}

/// Variable-to-check message: channel times the incoming replies, renormalised.
/// Replies on a different grid are interpolated onto the channel's grid.
pub fn variable_message(channel: &PdfGrid, incoming: &[PdfGrid], cfg: &DecoderConfig) -> Result<PdfGrid, DecoderError> {
    cfg.check()?;
    let mut samples = channel.samples().to_vec();
    for g in incoming {
        if g.same_layout(channel) {
            samples.iter_mut().zip(g.samples()).for_each(|(s, r)| *s *= r);
        } else {
            for (i, s) in samples.iter_mut().enumerate() {
                *s *= g.value_at(channel.point(i));
            }
        }
    }
    if samples.iter().sum::<f64>() <= 0.0 {
        samples = channel.samples().to_vec();
    }
    let mut g = PdfGrid::new(channel.center(), channel.delta(), channel.half_width(), samples)?;
    g.normalize();
    Ok(g)
}
