use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::DecoderError;

/// Sampled density on `center + kΔ`, `k = −K..=K`, `K = round(W/Δ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PdfGrid {
    center: f64,
    delta: f64,
    half_width: f64,
    samples: Vec<f64>,
}

impl PdfGrid {
    pub fn new(center: f64, delta: f64, half_width: f64, samples: Vec<f64>) -> Result<Self, DecoderError> {
        let k = half_steps(delta, half_width)?;
        if samples.len() != 2 * k + 1 {
            return Err(DecoderError::ConfigViolation(format!(
                "grid needs {} samples, got {}",
                2 * k + 1,
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(DecoderError::NonFinite);
        }
        Ok(PdfGrid {
            center,
            delta,
            half_width,
            samples,
        })
    }

    /// Normalised `N(mean, var)` sampled on the grid.
    pub fn gaussian(center: f64, delta: f64, half_width: f64, mean: f64, var: f64) -> Result<Self, DecoderError> {
        if !(var > 0.0) || !mean.is_finite() || !center.is_finite() {
            return Err(DecoderError::NonFinite);
        }
        let k = half_steps(delta, half_width)? as i64;
        let samples = (-k..=k)
            .map(|m| {
                let x = center + m as f64 * delta - mean;
                (-x * x / (2.0 * var)).exp()
            })
            .collect();
        let mut g = PdfGrid::new(center, delta, half_width, samples)?;
        g.normalize();
        Ok(g)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn k(&self) -> usize {
        self.samples.len() / 2
    }

    pub fn point(&self, idx: usize) -> f64 {
        self.center + (idx as f64 - self.k() as f64) * self.delta
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(|i| self.point(i))
    }

    /// `Σ samples · Δ`.
    pub fn mass(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.delta
    }

    /// Scales to unit mass; a zero grid is left unchanged.
    pub fn normalize(&mut self) {
        normalize(&mut self.samples, self.delta);
    }

    /// Linear interpolation, zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let pos = (x - self.center) / self.delta + self.k() as f64;
        if !(pos >= 0.0) || pos > (self.samples.len() - 1) as f64 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        let w = pos - i as f64;
        if i + 1 >= self.samples.len() {
            return self.samples[i];
        }
        (1.0 - w) * self.samples[i] + w * self.samples[i + 1]
    }

    /// Grid point of maximal density; ties go to the point nearest the center.
    pub fn argmax(&self) -> f64 {
        self.point(argmax_nearest_center(&self.samples))
    }

    pub(crate) fn same_layout(&self, other: &PdfGrid) -> bool {
        self.center == other.center && self.delta == other.delta && self.samples.len() == other.samples.len()
    }
}

pub(crate) fn half_steps(delta: f64, half_width: f64) -> Result<usize, DecoderError> {
    if !(delta > 0.0) || !(half_width > 0.0) || !delta.is_finite() || !half_width.is_finite() {
        return Err(DecoderError::ConfigViolation("grid needs Δ > 0 and W > 0".into()));
    }
    let k = (half_width / delta).round();
    if k > 1e7 {
        return Err(DecoderError::ConfigViolation("grid too fine".into()));
    }
    Ok(k as usize)
}

pub(crate) fn normalize(samples: &mut [f64], delta: f64) {
    let mass = samples.iter().sum::<f64>() * delta;
    if mass > 0.0 && mass.is_finite() {
        samples.iter_mut().for_each(|s| *s /= mass);
    }
}

/// Index of the maximum; among equal maxima the one nearest the middle,
/// the lower index on an exact tie.
pub(crate) fn argmax_nearest_center(samples: &[f64]) -> usize {
    let mid = samples.len() / 2;
    let mut best = mid;
    for (i, &s) in samples.iter().enumerate() {
        let b = samples[best];
        if s > b || (s == b && i.abs_diff(mid) < best.abs_diff(mid)) {
            best = i;
        }
    }
    best
}

/// Circle discretisation shared by the check-node computations.
///
/// A message on the grid `x0 + mΔ`, stretched by `a`, is folded onto `[0, 1)`
/// split into `size` bins; sums of stretched variables modulo 1 become
/// circular convolutions of the folded masses.
#[derive(Clone)]
pub(crate) struct Circle {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Largest FFT circle, `2^20` bins.
const MAX_CIRCLE_BINS: usize = 1 << 20;

impl Circle {
    /// Bin count: a power of two with bin width at most `Δ/2`.
    pub fn for_delta(delta: f64) -> Result<Self, DecoderError> {
        let bins = 2.0 / delta;
        if !(bins.is_finite() && bins <= MAX_CIRCLE_BINS as f64) {
            return Err(DecoderError::ConfigViolation(format!("Δ = {delta:e} needs too many circle bins")));
        }
        let size = (bins.ceil() as usize).next_power_of_two().max(64);
        let mut planner = FftPlanner::new();
        Ok(Circle {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Spectrum of the folded, stretched message.
    pub fn fold(&self, samples: &[f64], x0: f64, delta: f64, a: f64) -> Vec<Complex<f64>> {
        let m = self.size as f64;
        let mut bins = vec![Complex::new(0.0, 0.0); self.size];
        for (idx, &s) in samples.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let t = a * (x0 + idx as f64 * delta);
            let p = (t - t.floor()) * m;
            let b = (p.floor() as usize).min(self.size - 1);
            let w = p - b as f64;
            bins[b].re += s * (1.0 - w);
            bins[(b + 1) % self.size].re += s * w;
        }
        self.forward.process(&mut bins);
        bins
    }

    /// Inverse transform of a product of spectra, clamped to nonnegative reals.
    pub fn density(&self, mut spectrum: Vec<Complex<f64>>) -> Vec<f64> {
        self.inverse.process(&mut spectrum);
        spectrum.iter().map(|c| c.re.max(0.0)).collect()
    }

    /// Reply on the grid `x0 + mΔ`: `r(y) = s((−a·y) mod 1)`.
    pub fn unfold(&self, s: &[f64], x0: f64, delta: f64, a: f64, out: &mut [f64]) {
        let m = self.size as f64;
        for (idx, o) in out.iter_mut().enumerate() {
            let t = -a * (x0 + idx as f64 * delta);
            let p = (t - t.floor()) * m;
            let b = (p.floor() as usize).min(self.size - 1);
            let w = p - b as f64;
            *o = (1.0 - w) * s[b] + w * s[(b + 1) % self.size];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_normalised() {
        let g = PdfGrid::gaussian(0.3, 1.0 / 64.0, 3.0, 0.3, 0.01).unwrap();
        assert!((g.mass() - 1.0).abs() < 1e-9);
        assert_eq!(g.argmax(), 0.3);
        assert_eq!(g.samples().len(), 2 * 192 + 1);
    }

    #[test]
    fn argmax_ties_prefer_the_middle() {
        assert_eq!(argmax_nearest_center(&[1.0, 0.0, 1.0, 0.0, 1.0]), 2);
        assert_eq!(argmax_nearest_center(&[1.0, 0.0, 0.5, 0.0, 1.0]), 0);
    }

    #[test]
    fn bad_layout_is_rejected() {
        assert!(PdfGrid::new(0.0, 0.5, 1.0, vec![1.0; 4]).is_err());
        assert!(PdfGrid::new(0.0, 0.0, 1.0, vec![1.0; 4]).is_err());
        assert!(PdfGrid::new(0.0, 0.5, 1.0, vec![1.0, f64::NAN, 1.0, 1.0, 1.0]).is_err());
    }
}
