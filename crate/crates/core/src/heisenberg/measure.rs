//! Certified brackets for the Lebesgue measure of a projected box.
//!
//! Over a fixed point of (codomain coordinates, untouched side) the image of
//! a box is a vertical interval whose length is `2T + max phi - min phi`,
//! where `phi` is an affine function of the fiber's kernel coordinates and of
//! the untouched side.  The bracket integrates cellwise bounds on that length
//! over a product grid: the upper bound relaxes fiber feasibility with
//! interval arithmetic, the lower bound counts only cells whose fibers are
//! certified nonempty and swings `phi` between explicit feasible fiber
//! points.  Both bounds are sound for every configuration; when the box
//! blocks and the projection are coordinate-aligned the cell bounds are exact
//! to the grid resolution.

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::linalg::dot;
use crate::rat::{rat, rat_to_f64, Rat};

use super::{BoxBlock, BoxInstance, Side, VerticalProjection};

#[derive(Clone, Debug)]
pub struct GridParams {
    /// Relative cell width: an axis with half-range `r` is split into
    /// `ceil(2r / (h * max(1, r)))` cells, so wide axes keep about `2/h`
    /// cells instead of blowing up the cell count.
    pub max_step: Rat,
    /// Refuse grids whose total cell count exceeds this.
    pub max_cells: u64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self { max_step: rat(1, 4), max_cells: 100_000_000 }
    }
}

/// `lower <= measure <= upper`, exactly, in block coordinates; multiply by
/// `sqrt(jacobian2)` (see the `_f64` accessors) for the Lebesgue value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureBracket {
    pub lower: Rat,
    pub upper: Rat,
    pub jacobian2: Rat,
}

impl MeasureBracket {
    pub fn lower_f64(&self) -> f64 {
        rat_to_f64(&self.lower) * rat_to_f64(&self.jacobian2).sqrt()
    }

    pub fn upper_f64(&self) -> f64 {
        rat_to_f64(&self.upper) * rat_to_f64(&self.jacobian2).sqrt()
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lower_f64() + self.upper_f64()) / 2.0
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("grid needs {needed} cells, over the budget of {max}")]
    Budget { needed: u128, max: u64 },
    #[error("grid step must be positive")]
    NonPositiveStep,
    #[error("box dimension {got} does not match projection dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("too many dimensions for corner enumeration ({0})")]
    Dimensions(usize),
}

struct FlatVec {
    v: Vec<Rat>,
    hw: Rat,
    norm2: Rat,
}

fn flatten(blocks: &[BoxBlock]) -> Vec<FlatVec> {
    let mut out = Vec::new();
    for b in blocks {
        for i in 0..b.frame.dim() {
            out.push(FlatVec {
                v: b.frame.vector(i),
                hw: b.half_width.clone(),
                norm2: b.frame.norms2()[i].clone(),
            });
        }
    }
    out
}

fn rat_u(v: u64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

#[derive(Clone)]
struct Axis {
    lo: Rat,
    width: Rat,
    steps: u64,
}

fn build_axis(range: &Rat, h: &Rat) -> Axis {
    if range.is_zero() {
        return Axis { lo: Rat::zero(), width: Rat::zero(), steps: 1 };
    }
    let unit = std::cmp::max(Rat::one(), range.clone());
    let q = (rat(2, 1) * range) / (h * unit);
    let steps = q.ceil().to_integer().to_u64().unwrap_or(u64::MAX).max(1);
    let width = (rat(2, 1) * range) / rat_u(steps);
    Axis { lo: -range.clone(), width, steps }
}

struct FreeCell {
    /// `G_l` evaluated at the cell center.
    g_center: Vec<Rat>,
    lo: Vec<Rat>,
    hi: Vec<Rat>,
}

const STORE_CAP: u128 = 4_194_304;
const DIM_CAP: usize = 24;

/// Sound two-sided bracket for the measure of `proj(box)`.
pub fn image_measure_bracket(
    proj: &VerticalProjection,
    boxi: &BoxInstance,
    grid: &GridParams,
) -> Result<MeasureBracket, MeasureError> {
    if !grid.max_step.is_positive() {
        return Err(MeasureError::NonPositiveStep);
    }
    let n = proj.l.rows();
    if boxi.n() != n {
        return Err(MeasureError::Dimension { expected: n, got: boxi.n() });
    }

    let (own_blocks, free_blocks) = match proj.side {
        Side::X => (&boxi.x_blocks, &boxi.y_blocks),
        Side::Y => (&boxi.y_blocks, &boxi.x_blocks),
    };
    // The slice length over (codomain point xi, free point f) is
    // 2T + max phi - min phi over the feasible fiber, where for fiber
    // coordinates d (kernel frame) phi(d, f) = (sum_l d_l G_l(f) + H(f)) / 2;
    // on the x side G_l = k_l . (Lhat f + b), H = a . (Lhat f + b), and the
    // y side flips the sign and swaps the offset roles.
    let (shift, lin, sign) = match proj.side {
        Side::X => (&proj.b, &proj.a, Rat::one()),
        Side::Y => (&proj.a, &proj.b, -Rat::one()),
    };
    let own = flatten(own_blocks);
    let free = flatten(free_blocks);
    let cdim = proj.codomain_frame.dim();
    let kdim = proj.kernel_frame.dim();
    let fd = free.len();
    if fd > DIM_CAP || kdim > DIM_CAP {
        return Err(MeasureError::Dimensions(fd.max(kdim)));
    }
    let kvecs: Vec<Vec<Rat>> = (0..kdim).map(|l| proj.kernel_frame.vector(l)).collect();
    let kn2 = proj.kernel_frame.norms2();
    let cvecs: Vec<Vec<Rat>> = (0..cdim).map(|i| proj.codomain_frame.vector(i)).collect();
    let cn2 = proj.codomain_frame.norms2();

    // Own-side box geometry in its block coordinates: for box frame vector
    // v_k, the coordinate of xi + kappa is sum_i c_i alpha[k][i] + sum_l
    // d_l beta[k][l], constrained to [-hw_k, hw_k].
    let alpha: Vec<Vec<Rat>> = own
        .iter()
        .map(|o| cvecs.iter().map(|c| dot(&o.v, c) / &o.norm2).collect())
        .collect();
    let beta: Vec<Vec<Rat>> = own
        .iter()
        .map(|o| kvecs.iter().map(|k| dot(&o.v, k) / &o.norm2).collect())
        .collect();
    // Global bounds: |d_l| <= sigma_l over the whole box, |c_i| <= rho_i.
    let sigma: Vec<Rat> = (0..kdim)
        .map(|l| {
            own.iter().map(|o| &o.hw * dot(&o.v, &kvecs[l]).abs()).sum::<Rat>() / &kn2[l]
        })
        .collect();
    let rho: Vec<Rat> = (0..cdim)
        .map(|i| {
            own.iter().map(|o| &o.hw * dot(&o.v, &cvecs[i]).abs()).sum::<Rat>() / &cn2[i]
        })
        .collect();
    let reach: Vec<Rat> = (0..own.len())
        .map(|k| (0..kdim).map(|l| &sigma[l] * beta[k][l].abs()).sum())
        .collect();

    // phi pieces as affine functions of the free-side block coordinates g.
    let g_coeff: Vec<Vec<Rat>> = (0..kdim)
        .map(|l| free.iter().map(|u| &sign * dot(&kvecs[l], &u.v)).collect())
        .collect();
    let g_const: Vec<Rat> = (0..kdim).map(|l| &sign * dot(&kvecs[l], shift)).collect();
    let h_coeff: Vec<Rat> = free.iter().map(|u| &sign * dot(lin, &u.v)).collect();
    let h_const = &sign * dot(lin, shift);

    let c_axes: Vec<Axis> = rho.iter().map(|r| build_axis(r, &grid.max_step)).collect();
    let f_axes: Vec<Axis> =
        free.iter().map(|u| build_axis(&u.hw, &grid.max_step)).collect();
    let mut total: u128 = 1;
    for a in c_axes.iter().chain(&f_axes) {
        total = total.saturating_mul(a.steps as u128);
    }
    if total > grid.max_cells as u128 {
        return Err(MeasureError::Budget { needed: total, max: grid.max_cells });
    }
    let f_count: u128 = f_axes.iter().map(|a| a.steps as u128).product();
    if f_count > STORE_CAP {
        return Err(MeasureError::Budget { needed: f_count, max: STORE_CAP as u64 });
    }

    let two_t = rat(2, 1) * &boxi.t_half;
    let fvol: Rat = f_axes.iter().map(|a| a.width.clone()).product();
    let cvol: Rat = c_axes.iter().map(|a| a.width.clone()).product();

    // Free-side cell table, shared by every codomain cell.
    let mut fcells: Vec<FreeCell> = Vec::with_capacity(f_count as usize);
    let mut sum_up = Rat::zero();
    {
        let mut idx = vec![0u64; fd];
        'cells: loop {
            let lo: Vec<Rat> = (0..fd)
                .map(|d| &f_axes[d].lo + &f_axes[d].width * rat_u(idx[d]))
                .collect();
            let hi: Vec<Rat> = (0..fd).map(|d| &lo[d] + &f_axes[d].width).collect();
            let mut max_sh: Option<Rat> = None;
            let mut min_hs: Option<Rat> = None;
            for mask in 0..(1u64 << fd) {
                let corner =
                    |d: usize| if mask >> d & 1 == 1 { &hi[d] } else { &lo[d] };
                let mut hv = h_const.clone();
                for d in 0..fd {
                    hv += &h_coeff[d] * corner(d);
                }
                let mut s = Rat::zero();
                for l in 0..kdim {
                    let mut gl = g_const[l].clone();
                    for d in 0..fd {
                        gl += &g_coeff[l][d] * corner(d);
                    }
                    s += &sigma[l] * gl.abs();
                }
                let sh = &s + &hv;
                let hs = hv - s;
                max_sh = Some(max_sh.map_or(sh.clone(), |m| m.max(sh)));
                min_hs = Some(min_hs.map_or(hs.clone(), |m| m.min(hs)));
            }
            // max phi <= max(S+H)/2 and min phi >= min(H-S)/2 over the cell,
            // with equality at corners because S+H is convex and H-S concave.
            sum_up += (max_sh.unwrap() - min_hs.unwrap()) / rat(2, 1);
            let center: Vec<Rat> =
                (0..fd).map(|d| (&lo[d] + &hi[d]) / rat(2, 1)).collect();
            let g_center: Vec<Rat> = (0..kdim)
                .map(|l| {
                    let mut gl = g_const[l].clone();
                    for d in 0..fd {
                        gl += &g_coeff[l][d] * &center[d];
                    }
                    gl
                })
                .collect();
            fcells.push(FreeCell { g_center, lo, hi });
            let mut d = 0;
            loop {
                if d == fd {
                    break 'cells;
                }
                idx[d] += 1;
                if idx[d] < f_axes[d].steps {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    // Candidate fiber points for the lower bound: the center and scaled-down
    // extreme corners of the global kernel box.
    let mut cands: Vec<Vec<Rat>> = vec![vec![Rat::zero(); kdim]];
    if kdim > 0 {
        for tau in [rat(1, 1), rat(1, 2), rat(1, 4)] {
            for mask in 0..(1u64 << kdim) {
                let d: Vec<Rat> = (0..kdim)
                    .map(|l| {
                        let v = &tau * &sigma[l];
                        if mask >> l & 1 == 1 {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                cands.push(d);
            }
        }
    }
    // Per candidate, its shift of each own-side box coordinate.
    let cand_shift: Vec<Vec<Rat>> = cands
        .iter()
        .map(|d| {
            (0..own.len())
                .map(|k| (0..kdim).map(|l| &beta[k][l] * &d[l]).sum())
                .collect()
        })
        .collect();

    let upper_per_cell = &cvol * (&two_t * &fvol * rat_u(f_count as u64) + &fvol * &sum_up);

    let mut upper = Rat::zero();
    let mut lower = Rat::zero();
    let mut idx = vec![0u64; cdim];
    'ccells: loop {
        let cell_lo: Vec<Rat> = (0..cdim)
            .map(|i| &c_axes[i].lo + &c_axes[i].width * rat_u(idx[i]))
            .collect();
        let cell_hi: Vec<Rat> = (0..cdim).map(|i| &cell_lo[i] + &c_axes[i].width).collect();
        let mut feasible = true;
        let mut certified = true;
        let mut lo_k = Vec::with_capacity(own.len());
        let mut hi_k = Vec::with_capacity(own.len());
        for k in 0..own.len() {
            let mut lo = Rat::zero();
            let mut hi = Rat::zero();
            for i in 0..cdim {
                let p = &alpha[k][i] * &cell_lo[i];
                let q = &alpha[k][i] * &cell_hi[i];
                if p <= q {
                    lo += &p;
                    hi += &q;
                } else {
                    lo += &q;
                    hi += &p;
                }
            }
            let hw = &own[k].hw;
            if &lo - &reach[k] > *hw || &hi + &reach[k] < -hw.clone() {
                feasible = false;
                break;
            }
            if lo < -hw.clone() || hi > *hw {
                certified = false;
            }
            lo_k.push(lo);
            hi_k.push(hi);
        }
        if feasible {
            upper += &upper_per_cell;
            if certified {
                // Candidates usable throughout this codomain cell.
                let valid: Vec<usize> = (0..cands.len())
                    .filter(|&ci| {
                        (0..own.len()).all(|k| {
                            let s = &cand_shift[ci][k];
                            *s >= -(&own[k].hw) - &lo_k[k] && *s <= &own[k].hw - &hi_k[k]
                        })
                    })
                    .collect();
                let mut sum_len = Rat::zero();
                for fc in &fcells {
                    let score = |ci: usize| -> Rat {
                        (0..kdim).map(|l| &cands[ci][l] * &fc.g_center[l]).sum()
                    };
                    let mut best = valid[0];
                    let mut worst = valid[0];
                    let mut best_s = score(best);
                    let mut worst_s = best_s.clone();
                    for &ci in &valid[1..] {
                        let s = score(ci);
                        if s > best_s {
                            best_s = s.clone();
                            best = ci;
                        }
                        if s < worst_s {
                            worst_s = s;
                            worst = ci;
                        }
                    }
                    // Guaranteed slice length: phi(best) - phi(worst),
                    // minimized over the free cell (affine, so per-axis).
                    let mut swing = (0..kdim)
                        .map(|l| (&cands[best][l] - &cands[worst][l]) * &g_const[l])
                        .sum::<Rat>();
                    for d in 0..fd {
                        let coef: Rat = (0..kdim)
                            .map(|l| (&cands[best][l] - &cands[worst][l]) * &g_coeff[l][d])
                            .sum();
                        let p = &coef * &fc.lo[d];
                        let q = &coef * &fc.hi[d];
                        swing += p.min(q);
                    }
                    swing /= rat(2, 1);
                    sum_len += &two_t + swing.max(Rat::zero());
                }
                lower += &cvol * &fvol * sum_len;
            }
        }
        let mut d = 0;
        loop {
            if d == cdim {
                break 'ccells;
            }
            idx[d] += 1;
            if idx[d] < c_axes[d].steps {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }

    let jacobian2 = proj.codomain_frame.jacobian2()
        * free_blocks.iter().map(|b| b.frame.jacobian2()).product::<Rat>();
    Ok(MeasureBracket { lower, upper, jacobian2 })
}
