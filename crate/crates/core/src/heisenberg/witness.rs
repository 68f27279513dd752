//! Parameterized box families whose measures realize the linear conditions.
//!
//! Each witness is a one-parameter family of centered boxes.  Its domain
//! measure and every projected image measure grow like a power of the
//! parameter; those predicted exponents are exactly the coefficients of the
//! corresponding linear condition, which is what the numerical checks verify.

use crate::conditions::{
    compressed_large_exponents, compressed_small_exponents, ConditionsError, ProjectionConfig,
};
use crate::linalg::Subspace;
use crate::rat::{rat_pow, rat_to_f64, Rat};

use super::measure::{image_measure_bracket, GridParams, MeasureError};
use super::{BoxBlock, BoxInstance, HeisenbergError, OrthFrame, VerticalProjection};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// Isotropic dilation of x and t.
    Scaling,
    /// Dilation of x along a single subspace (and of t).
    Dilation(Subspace),
    /// Compressed family, shrinking end: x squeezed along `V`, y stretched
    /// along the complement of `W`.
    CompressedSmall(Subspace, Subspace),
    /// Compressed family, growing end: x stretched along `V`, y squeezed
    /// along the complement of `W`.
    CompressedLarge(Subspace, Subspace),
}

/// One-parameter family of boxes with per-block parameter exponents and the
/// predicted growth exponents of the domain and image measures.
#[derive(Clone, Debug)]
pub struct BoxWitness {
    pub kind: WitnessKind,
    n: usize,
    x_blocks: Vec<(Subspace, i64)>,
    y_blocks: Vec<(Subspace, i64)>,
    t_exp: i64,
    pub predicted_domain_exp: i64,
    /// Per projection index, `0..2m`.
    pub predicted_image_exps: Vec<i64>,
    /// When true the image predictions are only upper bounds on the growth
    /// (the family certifies an inequality in one direction).
    pub one_sided: bool,
}

impl BoxWitness {
    pub fn scaling(cfg: &ProjectionConfig) -> Self {
        let n = cfg.n();
        let m = cfg.m();
        let mut exps = vec![0i64; 2 * m];
        for j in 0..m {
            exps[j] = cfg.n_j(j) as i64 + 1;
            exps[j + m] = n as i64 + 1;
        }
        Self {
            kind: WitnessKind::Scaling,
            n,
            x_blocks: vec![(Subspace::full(n), 1)],
            y_blocks: vec![(Subspace::full(n), 0)],
            t_exp: 1,
            predicted_domain_exp: n as i64 + 1,
            predicted_image_exps: exps,
            one_sided: false,
        }
    }

    pub fn dilation(cfg: &ProjectionConfig, v: &Subspace) -> Self {
        let n = cfg.n();
        let m = cfg.m();
        let dv = v.dim() as i64;
        let mut exps = vec![0i64; 2 * m];
        for j in 0..m {
            exps[j] = crate::linalg::dim_image(cfg.l(j), v) as i64 + 1;
            exps[j + m] = dv + 1;
        }
        Self {
            kind: WitnessKind::Dilation(v.clone()),
            n,
            x_blocks: vec![(v.clone(), 1), (v.orth_complement(), 0)],
            y_blocks: vec![(Subspace::full(n), 0)],
            t_exp: 1,
            predicted_domain_exp: dv + 1,
            predicted_image_exps: exps,
            one_sided: false,
        }
    }

    pub fn compressed_small(
        cfg: &ProjectionConfig,
        v: &Subspace,
        w: &Subspace,
    ) -> Result<Self, ConditionsError> {
        let (exps, domain) = compressed_small_exponents(cfg, v, w)?;
        Ok(Self {
            kind: WitnessKind::CompressedSmall(v.clone(), w.clone()),
            n: cfg.n(),
            x_blocks: vec![(v.clone(), -1), (v.orth_complement(), 0)],
            y_blocks: vec![(w.orth_complement(), 1), (w.clone(), 0)],
            t_exp: 0,
            predicted_domain_exp: domain,
            predicted_image_exps: exps,
            one_sided: true,
        })
    }

    pub fn compressed_large(
        cfg: &ProjectionConfig,
        v: &Subspace,
        w: &Subspace,
    ) -> Result<Self, ConditionsError> {
        let (exps, domain) = compressed_large_exponents(cfg, v, w)?;
        Ok(Self {
            kind: WitnessKind::CompressedLarge(v.clone(), w.clone()),
            n: cfg.n(),
            x_blocks: vec![(v.clone(), 1), (v.orth_complement(), 0)],
            y_blocks: vec![(w.orth_complement(), -1), (w.clone(), 0)],
            t_exp: 0,
            predicted_domain_exp: domain,
            predicted_image_exps: exps,
            one_sided: true,
        })
    }

    /// Concrete box at a positive parameter value.
    pub fn instantiate(&self, param: &Rat) -> Result<BoxInstance, HeisenbergError> {
        use num::Signed;
        if !param.is_positive() {
            return Err(HeisenbergError::NonPositiveParameter);
        }
        let blocks = |specs: &[(Subspace, i64)]| -> Vec<BoxBlock> {
            specs
                .iter()
                .map(|(s, e)| BoxBlock {
                    frame: OrthFrame::from_subspace(s),
                    half_width: rat_pow(param, *e as i32),
                })
                .collect()
        };
        BoxInstance::new(
            self.n,
            blocks(&self.x_blocks),
            blocks(&self.y_blocks),
            rat_pow(param, self.t_exp as i32),
        )
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FitError {
    #[error("need at least two distinct parameter values")]
    TooFewSamples,
    #[error("measures must be positive to fit a growth exponent")]
    NonPositiveMeasure,
}

/// Least-squares slope of `ln(measure)` against `ln(param)`.
pub fn fit_log_slope(params: &[f64], measures: &[f64]) -> Result<f64, FitError> {
    if params.len() != measures.len() || params.len() < 2 {
        return Err(FitError::TooFewSamples);
    }
    if measures.iter().any(|&v| !(v > 0.0)) || params.iter().any(|&v| !(v > 0.0)) {
        return Err(FitError::NonPositiveMeasure);
    }
    let xs: Vec<f64> = params.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = measures.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(FitError::TooFewSamples);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, thiserror::Error)]
pub enum WitnessRunError {
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Fitted growth exponent of one measure family against its prediction.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub predicted: i64,
    pub lower_slope: f64,
    pub upper_slope: f64,
}

impl SlopeFit {
    /// Worst deviation of either bracket endpoint's slope from the
    /// prediction; the two-sided pass criterion.
    pub fn max_error(&self) -> f64 {
        let p = self.predicted as f64;
        (self.lower_slope - p).abs().max((self.upper_slope - p).abs())
    }

    /// Signed excess of the upper-bracket slope over the prediction; the
    /// one-sided pass criterion for compressed witnesses.
    pub fn upper_excess(&self) -> f64 {
        self.upper_slope - self.predicted as f64
    }
}

#[derive(Clone, Debug)]
pub struct WitnessSlopes {
    pub domain: SlopeFit,
    pub images: Vec<SlopeFit>,
}

/// Instantiate the witness along the ladder, bracket every projected
/// measure, and fit log-log slopes of both bracket endpoints.
pub fn witness_slopes(
    witness: &BoxWitness,
    projs: &[VerticalProjection],
    ladder: &[Rat],
    grid: &GridParams,
) -> Result<WitnessSlopes, WitnessRunError> {
    let params: Vec<f64> = ladder.iter().map(rat_to_f64).collect();
    let mut volumes = Vec::with_capacity(ladder.len());
    let mut lowers = vec![Vec::with_capacity(ladder.len()); projs.len()];
    let mut uppers = vec![Vec::with_capacity(ladder.len()); projs.len()];
    for r in ladder {
        let b = witness.instantiate(r)?;
        volumes.push(b.volume_f64());
        for (i, p) in projs.iter().enumerate() {
            let br = image_measure_bracket(p, &b, grid)?;
            lowers[i].push(br.lower_f64());
            uppers[i].push(br.upper_f64());
        }
    }
    let vol_slope = fit_log_slope(&params, &volumes)?;
    let domain = SlopeFit {
        predicted: witness.predicted_domain_exp,
        lower_slope: vol_slope,
        upper_slope: vol_slope,
    };
    let mut images = Vec::with_capacity(projs.len());
    for (i, p) in projs.iter().enumerate() {
        images.push(SlopeFit {
            predicted: witness.predicted_image_exps[p.index],
            lower_slope: fit_log_slope(&params, &lowers[i])?,
            upper_slope: fit_log_slope(&params, &uppers[i])?,
        });
    }
    Ok(WitnessSlopes { domain, images })
}

/// Default parameter ladder: `base * ratio^i`.
pub fn parameter_ladder(base: u64, ratio: u64, count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    let mut cur = crate::rat::rat_i(base as i64);
    let r = crate::rat::rat_i(ratio as i64);
    for _ in 0..count {
        out.push(cur.clone());
        cur *= &r;
    }
    out
}
