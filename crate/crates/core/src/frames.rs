//! Horizontal frames tangent to projection fibers and the exponent points
//! they certify.
//!
//! Each projection admits vector fields that move along its fibers: kernel
//! directions on the projected side, compensated in the central coordinate so
//! the image stays fixed.  An x-side field and a y-side field with
//! non-commuting directions generate the center, and each such pair marks an
//! exponent vector where those two projections carry double weight.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::conditions::{ProjectionConfig, QVec};
use crate::heisenberg::{Side, VerticalProjection};
use crate::linalg::{dot, RationalMatrix, Subspace};
use crate::rat::{rat, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FramesError {
    #[error(
        "frame analysis needs hyperplane kernels on both sides: n >= 2, m = n, \
         every subspace of dimension n-1, and the kernel lines spanning R^n"
    )]
    UnsupportedConfiguration,
}

/// Affine function `constant + x_coeffs . x + y_coeffs . y` of the spatial
/// variables, used as a central compensation coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineT {
    pub constant: Rat,
    pub x_coeffs: Vec<Rat>,
    pub y_coeffs: Vec<Rat>,
}

impl AffineT {
    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Rat {
        &self.constant + dot(&self.x_coeffs, x) + dot(&self.y_coeffs, y)
    }
}

/// Constant-spatial vector field `spatial_x . dx + spatial_y . dy + t_coeff . dt`
/// tangent to the fibers of the projection at `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentField {
    pub index: usize,
    pub spatial_x: Vec<Rat>,
    pub spatial_y: Vec<Rat>,
    pub t_coeff: AffineT,
}

/// Integer vector with coprime entries and positive leading sign.
fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut l = BigInt::one();
    for e in v {
        l = l.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|e| (e * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = ints.iter().map(|i| i / &g).collect();
    if let Some(first) = out.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut out {
                *e = -e.clone();
            }
        }
    }
    out.into_iter().map(Rat::from_integer).collect()
}

fn primitive_basis(s: &Subspace) -> Vec<Vec<Rat>> {
    (0..s.dim()).map(|i| primitive(&s.basis().col(i))).collect()
}

/// One fiber-tangent field per kernel direction of the projection.
pub fn tangent_fields(proj: &VerticalProjection) -> Vec<TangentField> {
    let n = proj.l.rows();
    let half = rat(1, 2);
    primitive_basis(&proj.kernel)
        .into_iter()
        .map(|v| {
            let minus_half_v: Vec<Rat> = v.iter().map(|e| -(&half * e)).collect();
            let half_v: Vec<Rat> = v.iter().map(|e| &half * e).collect();
            match proj.side {
                // Moving x by v changes the twist by  v.(Lhat y + b)/2.
                Side::X => TangentField {
                    index: proj.index,
                    t_coeff: AffineT {
                        constant: -(&half * dot(&v, &proj.b)),
                        x_coeffs: vec![Rat::zero(); n],
                        y_coeffs: minus_half_v,
                    },
                    spatial_x: v,
                    spatial_y: vec![Rat::zero(); n],
                },
                // The y side twist enters with the opposite sign.
                Side::Y => TangentField {
                    index: proj.index,
                    t_coeff: AffineT {
                        constant: &half * dot(&v, &proj.a),
                        x_coeffs: half_v,
                        y_coeffs: vec![Rat::zero(); n],
                    },
                    spatial_x: vec![Rat::zero(); n],
                    spatial_y: v,
                },
            }
        })
        .collect()
}

/// Central component of the commutator of two fiber-tangent fields; the
/// spatial parts are constant, so the bracket is a multiple of `dt`.
pub fn lie_bracket(f: &TangentField, g: &TangentField) -> Rat {
    dot(&f.spatial_x, &g.t_coeff.x_coeffs) + dot(&f.spatial_y, &g.t_coeff.y_coeffs)
        - dot(&g.spatial_x, &f.t_coeff.x_coeffs)
        - dot(&g.spatial_y, &f.t_coeff.y_coeffs)
}

/// An x-side and a y-side field whose commutator generates the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramePair {
    pub x_index: usize,
    pub y_index: usize,
    pub bracket: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameReport {
    pub pairs: Vec<FramePair>,
    /// One exponent point per pair: weight `2/(2n+1)` on the paired
    /// projections and `1/(2n+1)` elsewhere.
    pub points: Vec<QVec>,
    /// The points are established extreme points only for `n = m = 2`;
    /// beyond that the readout is a conjecture.
    pub conjectural: bool,
}

/// Enumerate non-commuting frame pairs and their exponent points.
///
/// Requires every subspace to be a hyperplane (`dim n-1`), `m = n >= 2`, and
/// the kernel lines to span; configurations outside that scope are refused.
pub fn frame_report(cfg: &ProjectionConfig) -> Result<FrameReport, FramesError> {
    let n = cfg.n();
    let m = cfg.m();
    if n < 2 || m != n || (0..m).any(|j| cfg.n_j(j) != n - 1) {
        return Err(FramesError::UnsupportedConfiguration);
    }
    let kernels: Vec<Vec<Rat>> =
        (0..m).map(|j| primitive(&cfg.kernel(j).basis().col(0))).collect();
    if RationalMatrix::from_cols(n, &kernels).rank() != n {
        return Err(FramesError::UnsupportedConfiguration);
    }
    let projs = VerticalProjection::family(cfg, &[]).expect("offset-free family");
    let fields: Vec<TangentField> = projs.iter().flat_map(|p| tangent_fields(p)).collect();
    debug_assert_eq!(fields.len(), 2 * m);
    let denom = (2 * n + 1) as i64;
    let mut pairs = Vec::new();
    let mut points = Vec::new();
    for j in 0..m {
        for k in 0..m {
            let br = lie_bracket(&fields[j], &fields[k + m]);
            if br.is_zero() {
                continue;
            }
            pairs.push(FramePair { x_index: j, y_index: k + m, bracket: br });
            let mut q = vec![rat(1, denom); 2 * m];
            q[j] = rat(2, denom);
            q[k + m] = rat(2, denom);
            points.push(QVec(q));
        }
    }
    Ok(FrameReport { pairs, points, conjectural: !(n == 2 && m == 2) })
}
