use num_bigint::BigInt;
use num_traits::{FromPrimitive, Zero};
use rayon::prelude::*;

use super::grid::{argmax_nearest_center, half_steps, normalize, Circle};
use super::{DecodeResult, DecoderConfig, DecoderError};
use crate::ldlc::SparseParityMatrix;
use crate::matrix_core::{inverse_rational, RatMatrix};

/// Replies are floored at this fraction of their peak so products never vanish.
const REPLY_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
struct Edge {
    var: usize,
    coeff: f64,
}

/// Integer estimate after one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub y_hat: Vec<f64>,
    pub v_hat: Vec<BigInt>,
}

/// Flooding-schedule decoder state with double-buffered edge messages.
///
/// Every variable uses the grid `y_i + mΔ`, `|m| ≤ K`; edge messages are stored
/// row-major by edge, each `2K + 1` samples long.
pub struct BpDecoder<'h> {
    h: &'h SparseParityMatrix,
    y: Vec<f64>,
    delta: f64,
    k: usize,
    channel: Vec<f64>,
    edges: Vec<Edge>,
    var_start: Vec<usize>,
    check_edges: Vec<Vec<usize>>,
    q: Vec<f64>,
    r: Vec<f64>,
    circle: Circle,
    parallel: bool,
}

impl<'h> BpDecoder<'h> {
    pub fn new(h: &'h SparseParityMatrix, y: &[f64], sigma2: f64, cfg: &DecoderConfig) -> Result<Self, DecoderError> {
        cfg.check()?;
        if y.len() != h.n() {
            return Err(DecoderError::ConfigViolation(format!(
                "observation has length {}, code has n = {}",
                y.len(),
                h.n()
            )));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) || y.iter().any(|v| !v.is_finite()) {
            return Err(DecoderError::NonFinite);
        }
        let sigma = sigma2.sqrt();
        let delta = cfg.delta_for(sigma);
        let half = cfg.half_width.min(cfg.support_sigmas * sigma).max(delta);
        let k = half_steps(delta, half)?.max(1);
        let len = 2 * k + 1;
        let mut channel: Vec<f64> = (0..len)
            .map(|m| {
                let x = (m as f64 - k as f64) * delta;
                (-x * x / (2.0 * sigma2)).exp()
            })
            .collect();
        normalize(&mut channel, delta);

        let mut edges = Vec::with_capacity(h.nnz());
        let mut var_start = Vec::with_capacity(h.n() + 1);
        let mut check_edges = vec![Vec::new(); h.n()];
        for i in 0..h.n() {
            var_start.push(edges.len());
            for &(j, a) in h.row(i) {
                check_edges[j].push(edges.len());
                edges.push(Edge { var: i, coeff: a as f64 });
            }
        }
        var_start.push(edges.len());
        let q = channel.iter().copied().cycle().take(edges.len() * len).collect();
        Ok(BpDecoder {
            h,
            y: y.to_vec(),
            delta,
            k,
            channel,
            r: vec![1.0; edges.len() * len],
            edges,
            var_start,
            check_edges,
            q,
            circle: Circle::for_delta(delta)?,
            parallel: cfg.parallel,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn grid_len(&self) -> usize {
        2 * self.k + 1
    }

    pub fn circle_size(&self) -> usize {
        self.circle.size()
    }

    fn x0(&self, var: usize) -> f64 {
        self.y[var] - self.k as f64 * self.delta
    }

    fn map_nodes<T: Send>(&self, count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        if self.parallel {
            (0..count).into_par_iter().map(f).collect()
        } else {
            (0..count).map(f).collect()
        }
    }

    fn check_replies(&self, j: usize) -> Vec<Vec<f64>> {
        let len = self.grid_len();
        let es = &self.check_edges[j];
        let spectra: Vec<_> = es
            .iter()
            .map(|&e| {
                let mass: Vec<f64> = self.q[e * len..(e + 1) * len].iter().map(|s| s * self.delta).collect();
                let edge = self.edges[e];
                self.circle.fold(&mass, self.x0(edge.var), self.delta, edge.coeff)
            })
            .collect();
        es.iter()
            .enumerate()
            .map(|(t, &e)| {
                let mut prod = vec![rustfft::num_complex::Complex::new(1.0, 0.0); self.circle.size()];
                for (u, spec) in spectra.iter().enumerate() {
                    if u != t {
                        prod.iter_mut().zip(spec).for_each(|(p, s)| *p *= s);
                    }
                }
                let s = self.circle.density(prod);
                let edge = self.edges[e];
                let mut reply = vec![0.0; len];
                self.circle.unfold(&s, self.x0(edge.var), self.delta, edge.coeff, &mut reply);
                normalize(&mut reply, self.delta);
                let peak = reply.iter().copied().fold(0.0, f64::max);
                if peak > 0.0 {
                    let floor = peak * REPLY_FLOOR;
                    reply.iter_mut().for_each(|x| *x = x.max(floor));
                } else {
                    reply.iter_mut().for_each(|x| *x = 1.0);
                }
                reply
            })
            .collect()
    }

    fn variable_messages(&self, i: usize) -> Vec<Vec<f64>> {
        let len = self.grid_len();
        let range = self.var_start[i]..self.var_start[i + 1];
        range
            .clone()
            .map(|target| {
                let mut out = self.channel.clone();
                for e in range.clone().filter(|&e| e != target) {
                    out.iter_mut().zip(&self.r[e * len..(e + 1) * len]).for_each(|(o, r)| *o *= r);
                }
                if !(out.iter().sum::<f64>() > 0.0) {
                    out.copy_from_slice(&self.channel);
                }
                normalize(&mut out, self.delta);
                out
            })
            .collect()
    }

    /// One flooding iteration: all checks from the old variable messages, then
    /// all variables from the new replies.
    pub fn iterate(&mut self) {
        let len = self.grid_len();
        let replies = self.map_nodes(self.check_edges.len(), |j| self.check_replies(j));
        for (j, rs) in replies.into_iter().enumerate() {
            for (&e, reply) in self.check_edges[j].iter().zip(rs) {
                self.r[e * len..(e + 1) * len].copy_from_slice(&reply);
            }
        }
        let msgs = self.map_nodes(self.h.n(), |i| self.variable_messages(i));
        for (i, ms) in msgs.into_iter().enumerate() {
            for (e, m) in (self.var_start[i]..).zip(ms) {
                self.q[e * len..(e + 1) * len].copy_from_slice(&m);
            }
        }
    }

    /// Per-symbol belief argmax and the rounded parity coordinates.
    pub fn estimate(&self) -> Estimate {
        let len = self.grid_len();
        let y_hat = self.map_nodes(self.h.n(), |i| {
            let mut belief = self.channel.clone();
            for e in self.var_start[i]..self.var_start[i + 1] {
                belief.iter_mut().zip(&self.r[e * len..(e + 1) * len]).for_each(|(b, r)| *b *= r);
            }
            let idx = argmax_nearest_center(&belief);
            self.y[i] + (idx as f64 - self.k as f64) * self.delta
        });
        let v_hat = round_product(self.h, &y_hat);
        Estimate { y_hat, v_hat }
    }

    /// Iterates until the estimate is stable over the window or the budget runs out.
    /// Returns the final estimate, the convergence flag, and the iterations used.
    pub fn run(&mut self, cfg: &DecoderConfig) -> (Estimate, bool, usize) {
        let mut history = vec![round_product(self.h, &self.y)];
        let mut last = Estimate {
            y_hat: self.y.clone(),
            v_hat: history[0].clone(),
        };
        for t in 1..=cfg.max_iterations {
            self.iterate();
            last = self.estimate();
            history.push(last.v_hat.clone());
            if history.len() > cfg.stability_window {
                history.remove(0);
            }
            if history.len() == cfg.stability_window && history.windows(2).all(|w| w[0] == w[1]) {
                return (last, true, t);
            }
        }
        (last, false, cfg.max_iterations)
    }
}

fn round_product(h: &SparseParityMatrix, y: &[f64]) -> Vec<BigInt> {
    h.left_mul_f64(y)
        .into_iter()
        .map(|v| BigInt::from_f64(v.round()).unwrap_or_else(BigInt::zero))
        .collect()
}

/// Decodes `y` to a point of `{ x : x·H ∈ ℤⁿ }`. Inverts `H` exactly for the resnap;
/// use [`bp_decode_with_inverse`] when `H⁻¹` is at hand.
pub fn bp_decode(
    h: &SparseParityMatrix,
    y: &[f64],
    sigma2: f64,
    cfg: &DecoderConfig,
) -> Result<DecodeResult, DecoderError> {
    let inv = inverse_rational(&h.to_dense()).map_err(|e| DecoderError::ConfigViolation(e.to_string()))?;
    bp_decode_with_inverse(h, &inv, y, sigma2, cfg)
}

pub fn bp_decode_with_inverse(
    h: &SparseParityMatrix,
    h_inv: &RatMatrix,
    y: &[f64],
    sigma2: f64,
    cfg: &DecoderConfig,
) -> Result<DecodeResult, DecoderError> {
    let mut dec = BpDecoder::new(h, y, sigma2, cfg)?;
    let (est, converged, iterations_used) = dec.run(cfg);
    let x_exact = h_inv
        .left_mul_vec(&est.v_hat)
        .map_err(|e| DecoderError::ConfigViolation(e.to_string()))?;
    Ok(DecodeResult {
        y_hat: est.y_hat,
        v_hat: est.v_hat,
        x_exact,
        converged,
        iterations_used,
    })
}
