//! Monte Carlo estimation of the multilinear form on indicator boxes.
//!
//! The form pairs one codomain box per projection and integrates the product
//! of indicators over the group.  Sampling is chunked with one counter-mode
//! stream per chunk, so the hit count is bitwise reproducible for a given
//! seed no matter how many worker threads run the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::rat::rat_to_f64;

use super::{Side, VerticalProjection};

const CHUNK: u64 = 65536;

/// Axis-aligned box in a projection codomain: frame coordinates of the
/// projected side, ambient coordinates of the untouched side, and the
/// central coordinate.
#[derive(Clone, Debug)]
pub struct CodomainBox {
    pub c_lo: Vec<f64>,
    pub c_hi: Vec<f64>,
    pub free_lo: Vec<f64>,
    pub free_hi: Vec<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl CodomainBox {
    /// Volume in frame coordinates (no codomain-frame jacobian).
    pub fn coordinate_volume(&self) -> f64 {
        let c: f64 = self.c_lo.iter().zip(&self.c_hi).map(|(a, b)| b - a).product();
        let f: f64 =
            self.free_lo.iter().zip(&self.free_hi).map(|(a, b)| b - a).product();
        c * f * (self.t_hi - self.t_lo)
    }

    /// Same box with spatial coordinates scaled by `lambda` and the central
    /// coordinate by `lambda^2` (the group's parabolic dilation).
    pub fn dilated(&self, lambda: f64) -> Self {
        let scale = |v: &[f64]| v.iter().map(|x| x * lambda).collect::<Vec<_>>();
        Self {
            c_lo: scale(&self.c_lo),
            c_hi: scale(&self.c_hi),
            free_lo: scale(&self.free_lo),
            free_hi: scale(&self.free_hi),
            t_lo: self.t_lo * lambda * lambda,
            t_hi: self.t_hi * lambda * lambda,
        }
    }

    fn shape_ok(&self, cdim: usize, n: usize) -> bool {
        self.c_lo.len() == cdim
            && self.c_hi.len() == cdim
            && self.free_lo.len() == n
            && self.free_hi.len() == n
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub hits: u64,
    pub samples: u64,
    pub volume: f64,
}

impl McEstimate {
    fn empty(samples: u64) -> Self {
        Self { mean: 0.0, std_err: 0.0, hits: 0, samples, volume: 0.0 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum McError {
    #[error("need one codomain box per projection ({expected}), got {got}")]
    BoxCount { expected: usize, got: usize },
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("sampling region is unbounded: need boxes on both sides")]
    Unbounded,
    #[error("codomain box shape does not match its projection")]
    BoxShape,
    #[error("need one weight per projection ({expected}), got {got}")]
    WeightCount { expected: usize, got: usize },
}

/// Projection data lowered to floats for the sampling hot loop.
struct F64Projection {
    side: Side,
    sign: f64,
    l_hat: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
    frame: Vec<Vec<f64>>,
    frame_n2: Vec<f64>,
}

impl F64Projection {
    fn new(p: &VerticalProjection) -> Self {
        let n = p.l.rows();
        let l_hat: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| rat_to_f64(p.l_hat.get(i, j))).collect())
            .collect();
        let frame: Vec<Vec<f64>> = (0..p.codomain_frame.dim())
            .map(|i| p.codomain_frame.vector(i).iter().map(rat_to_f64).collect())
            .collect();
        Self {
            side: p.side,
            sign: match p.side {
                Side::X => 0.5,
                Side::Y => -0.5,
            },
            l_hat,
            a: p.a.iter().map(rat_to_f64).collect(),
            b: p.b.iter().map(rat_to_f64).collect(),
            frame,
            frame_n2: p.codomain_frame.norms2().iter().map(rat_to_f64).collect(),
        }
    }

    fn hits(&self, x: &[f64], y: &[f64], t: f64, bx: &CodomainBox) -> bool {
        let (own, free) = match self.side {
            Side::X => (x, y),
            Side::Y => (y, x),
        };
        for (i, f) in free.iter().enumerate() {
            if *f < bx.free_lo[i] || *f > bx.free_hi[i] {
                return false;
            }
        }
        for (k, fr) in self.frame.iter().enumerate() {
            let c: f64 = fr.iter().zip(own).map(|(a, b)| a * b).sum::<f64>()
                / self.frame_n2[k];
            if c < bx.c_lo[k] || c > bx.c_hi[k] {
                return false;
            }
        }
        let n = x.len();
        let mut acc = 0.0;
        for i in 0..n {
            let mut u = self.a[i];
            let mut v = self.b[i];
            for j in 0..n {
                u += self.l_hat[i][j] * x[j];
                v += self.l_hat[i][j] * y[j];
            }
            acc += u * v;
        }
        let tau = t + self.sign * acc;
        tau >= bx.t_lo && tau <= bx.t_hi
    }
}

struct SampleRegion {
    x_lo: Vec<f64>,
    x_hi: Vec<f64>,
    y_lo: Vec<f64>,
    y_hi: Vec<f64>,
    t_lo: f64,
    t_hi: f64,
}

impl SampleRegion {
    fn volume(&self) -> f64 {
        let v: f64 = self
            .x_lo
            .iter()
            .zip(&self.x_hi)
            .chain(self.y_lo.iter().zip(&self.y_hi))
            .map(|(a, b)| b - a)
            .product();
        v * (self.t_hi - self.t_lo)
    }
}

/// Bounding region guaranteed to contain the support of the integrand: the
/// untouched-side boxes pin down x and y directly, and the central range is
/// widened by a bound on every twist over that spatial box.
fn sample_region(
    projs: &[F64Projection],
    boxes: &[CodomainBox],
    n: usize,
) -> Result<Option<SampleRegion>, McError> {
    let mut x_lo = vec![f64::NEG_INFINITY; n];
    let mut x_hi = vec![f64::INFINITY; n];
    let mut y_lo = x_lo.clone();
    let mut y_hi = x_hi.clone();
    let mut saw_x = false;
    let mut saw_y = false;
    for (p, b) in projs.iter().zip(boxes) {
        let (lo, hi) = match p.side {
            Side::X => {
                saw_x = true;
                (&mut y_lo, &mut y_hi)
            }
            Side::Y => {
                saw_y = true;
                (&mut x_lo, &mut x_hi)
            }
        };
        for d in 0..n {
            lo[d] = lo[d].max(b.free_lo[d]);
            hi[d] = hi[d].min(b.free_hi[d]);
        }
    }
    if !saw_x || !saw_y {
        return Err(McError::Unbounded);
    }
    if x_lo.iter().zip(&x_hi).chain(y_lo.iter().zip(&y_hi)).any(|(a, b)| a > b) {
        return Ok(None);
    }
    // Coordinate-wise bound on |Lhat z + offset| over the spatial box.
    let spatial_norm_bound = |l_hat: &[Vec<f64>], off: &[f64], lo: &[f64], hi: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            let mut m = off[i].abs();
            for j in 0..n {
                m += (l_hat[i][j] * lo[j]).abs().max((l_hat[i][j] * hi[j]).abs());
            }
            s += m * m;
        }
        s.sqrt()
    };
    let mut twist_bound: f64 = 0.0;
    for p in projs {
        let mx = spatial_norm_bound(&p.l_hat, &p.a, &x_lo, &x_hi);
        let my = spatial_norm_bound(&p.l_hat, &p.b, &y_lo, &y_hi);
        twist_bound = twist_bound.max(0.5 * mx * my);
    }
    let t_floor = boxes.iter().map(|b| b.t_lo).fold(f64::NEG_INFINITY, f64::max);
    let t_ceil = boxes.iter().map(|b| b.t_hi).fold(f64::INFINITY, f64::min);
    let margin = 1e-9 * (1.0 + twist_bound + t_floor.abs() + t_ceil.abs());
    let t_lo = t_floor - twist_bound - margin;
    let t_hi = t_ceil + twist_bound + margin;
    if t_lo >= t_hi {
        return Ok(None);
    }
    Ok(Some(SampleRegion { x_lo, x_hi, y_lo, y_hi, t_lo, t_hi }))
}

/// Estimate the form by uniform sampling over the bounding region.  The
/// result is bitwise identical for a fixed seed and sample count regardless
/// of how many rayon workers participate.
pub fn mc_form_estimate(
    projs: &[VerticalProjection],
    boxes: &[CodomainBox],
    samples: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    if projs.len() != boxes.len() || projs.is_empty() {
        return Err(McError::BoxCount { expected: projs.len().max(1), got: boxes.len() });
    }
    if samples == 0 {
        return Err(McError::ZeroSamples);
    }
    let n = projs[0].l.rows();
    for (p, b) in projs.iter().zip(boxes) {
        if !b.shape_ok(p.codomain_frame.dim(), n) {
            return Err(McError::BoxShape);
        }
    }
    let fast: Vec<F64Projection> = projs.iter().map(F64Projection::new).collect();
    let region = match sample_region(&fast, boxes, n)? {
        Some(r) => r,
        None => return Ok(McEstimate::empty(samples)),
    };
    let volume = region.volume();
    if volume <= 0.0 {
        return Ok(McEstimate::empty(samples));
    }

    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut x = vec![0.0f64; n];
            let mut y = vec![0.0f64; n];
            let mut local = 0u64;
            for _ in 0..count {
                for d in 0..n {
                    x[d] = region.x_lo[d]
                        + rng.gen::<f64>() * (region.x_hi[d] - region.x_lo[d]);
                }
                for d in 0..n {
                    y[d] = region.y_lo[d]
                        + rng.gen::<f64>() * (region.y_hi[d] - region.y_lo[d]);
                }
                let t = region.t_lo + rng.gen::<f64>() * (region.t_hi - region.t_lo);
                if fast.iter().zip(boxes).all(|(p, b)| p.hits(&x, &y, t, b)) {
                    local += 1;
                }
            }
            local
        })
        .sum();

    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        mean: volume * p,
        std_err: volume * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
        volume,
    })
}

#[derive(Clone, Debug)]
pub struct RwtPoint {
    pub lambda: f64,
    pub estimate: McEstimate,
    /// Form estimate divided by the product of box volumes raised to the
    /// exponent weights; constant in `lambda` exactly when the weights
    /// satisfy the scaling balance.
    pub ratio: f64,
    pub ratio_err: f64,
}

/// Sweep the parabolic dilation and report the weighted ratio at each scale.
pub fn rwt_ratio_sweep(
    projs: &[VerticalProjection],
    base_boxes: &[CodomainBox],
    weights: &[f64],
    lambdas: &[f64],
    samples: u64,
    seed: u64,
) -> Result<Vec<RwtPoint>, McError> {
    if weights.len() != projs.len() {
        return Err(McError::WeightCount { expected: projs.len(), got: weights.len() });
    }
    let jac: Vec<f64> = projs
        .iter()
        .map(|p| rat_to_f64(&p.codomain_frame.jacobian2()).sqrt())
        .collect();
    let mut out = Vec::with_capacity(lambdas.len());
    for (li, &lambda) in lambdas.iter().enumerate() {
        let boxes: Vec<CodomainBox> =
            base_boxes.iter().map(|b| b.dilated(lambda)).collect();
        let est = mc_form_estimate(projs, &boxes, samples, seed.wrapping_add(li as u64))?;
        let weight: f64 = boxes
            .iter()
            .zip(&jac)
            .zip(weights)
            .map(|((b, j), q)| (b.coordinate_volume() * j).powf(*q))
            .product();
        out.push(RwtPoint {
            lambda,
            ratio: est.mean / weight,
            ratio_err: est.std_err / weight,
            estimate: est,
        });
    }
    Ok(out)
}
