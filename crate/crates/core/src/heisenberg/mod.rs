//! Heisenberg group geometry: points, vertical projections, boxes.
//!
//! Points live in `R^n x R^n x R` with the polarized group law; the twist in
//! the central coordinate is what makes projected box measures interesting.
//! Everything structural is exact rational; `f64` enters only in Monte Carlo
//! sampling and when reporting measures that carry irrational frame volumes.

pub mod measure;
pub mod montecarlo;
pub mod witness;

use num::traits::Num;
use num::Zero;

use crate::conditions::ProjectionConfig;
use crate::linalg::{dot, RationalMatrix, Subspace};
use crate::rat::{rat, rat_i, rat_to_f64, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HeisenbergError {
    #[error("offset vector must lie in the kernel of the projection")]
    OffsetNotInKernel,
    #[error("vector length {got} does not match dimension {expected}")]
    Length { expected: usize, got: usize },
    #[error("expected {expected} offset pairs, got {got}")]
    OffsetCount { expected: usize, got: usize },
    #[error("box blocks must form an orthogonal decomposition of R^n")]
    BlocksNotOrthogonal,
    #[error("box parameter must be positive")]
    NonPositiveParameter,
}

/// Group element `(x, y, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub t: S,
}

fn dot_s<S: Num + Clone>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
}

impl<S: Num + Clone + std::ops::Neg<Output = S>> Point<S> {
    fn half() -> S {
        S::one() / (S::one() + S::one())
    }

    pub fn identity(n: usize) -> Self {
        Self { x: vec![S::zero(); n], y: vec![S::zero(); n], t: S::zero() }
    }

    /// `(x,y,t) . (x',y',t') = (x+x', y+y', t+t' + (x.y' - y.x')/2)`.
    pub fn group_op(&self, rhs: &Self) -> Self {
        assert_eq!(self.x.len(), rhs.x.len(), "dimension mismatch");
        let x: Vec<S> =
            self.x.iter().zip(&rhs.x).map(|(a, b)| a.clone() + b.clone()).collect();
        let y: Vec<S> =
            self.y.iter().zip(&rhs.y).map(|(a, b)| a.clone() + b.clone()).collect();
        let twist = Self::half()
            * (dot_s(&self.x, &rhs.y) + (-dot_s(&self.y, &rhs.x)));
        let t = self.t.clone() + rhs.t.clone() + twist;
        Self { x, y, t }
    }

    pub fn inverse(&self) -> Self {
        Self {
            x: self.x.iter().map(|v| -v.clone()).collect(),
            y: self.y.iter().map(|v| -v.clone()).collect(),
            t: -self.t.clone(),
        }
    }
}

impl Point<Rat> {
    pub fn to_f64(&self) -> Point<f64> {
        Point {
            x: self.x.iter().map(rat_to_f64).collect(),
            y: self.y.iter().map(rat_to_f64).collect(),
            t: rat_to_f64(&self.t),
        }
    }
}

/// Pairwise-orthogonal rational basis of a subspace, kept unnormalized so all
/// coordinates stay rational; `norms2` are the squared lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthFrame {
    vectors: RationalMatrix,
    norms2: Vec<Rat>,
}

impl OrthFrame {
    pub fn from_subspace(s: &Subspace) -> Self {
        let (vectors, norms2) = s.orthogonal_basis();
        Self { vectors, norms2 }
    }

    pub fn ambient(&self) -> usize {
        self.vectors.rows()
    }

    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vector(&self, i: usize) -> Vec<Rat> {
        self.vectors.col(i)
    }

    pub fn norms2(&self) -> &[Rat] {
        &self.norms2
    }

    /// Coordinates of the orthogonal projection of `v` onto the span.
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.dim())
            .map(|i| dot(&self.vectors.col(i), v) / &self.norms2[i])
            .collect()
    }

    /// Point of the span with the given coordinates.
    pub fn point(&self, coords: &[Rat]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Rat::zero(); self.ambient()];
        for (i, c) in coords.iter().enumerate() {
            for r in 0..self.ambient() {
                out[r] += c * self.vectors.get(r, i);
            }
        }
        out
    }

    /// Squared volume scale of the coordinate chart (product of `norms2`).
    pub fn jacobian2(&self) -> Rat {
        self.norms2.iter().product()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// One vertical projection with affine offsets.
///
/// The x-side map sends `(x,y,t)` to `(L x, y, t + (Lhat x + a).(Lhat y + b)/2)`;
/// the y-side map sends it to `(x, L y, t - (Lhat x + a).(Lhat y + b)/2)`.
/// Both offsets live in the kernel of `L`.
#[derive(Clone, Debug)]
pub struct VerticalProjection {
    pub index: usize,
    pub side: Side,
    pub j: usize,
    pub subspace: Subspace,
    pub l: RationalMatrix,
    pub l_hat: RationalMatrix,
    pub kernel: Subspace,
    pub codomain_frame: OrthFrame,
    pub kernel_frame: OrthFrame,
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
}

impl VerticalProjection {
    fn build(
        cfg: &ProjectionConfig,
        side: Side,
        j: usize,
        a: Vec<Rat>,
        b: Vec<Rat>,
    ) -> Result<Self, HeisenbergError> {
        let n = cfg.n();
        for v in [&a, &b] {
            if v.len() != n {
                return Err(HeisenbergError::Length { expected: n, got: v.len() });
            }
            if !cfg.kernel(j).contains_vec(v) {
                return Err(HeisenbergError::OffsetNotInKernel);
            }
        }
        let index = match side {
            Side::X => j,
            Side::Y => j + cfg.m(),
        };
        Ok(Self {
            index,
            side,
            j,
            subspace: cfg.subspace(j).clone(),
            l: cfg.l(j).clone(),
            l_hat: cfg.l_hat(j).clone(),
            kernel: cfg.kernel(j).clone(),
            codomain_frame: OrthFrame::from_subspace(cfg.subspace(j)),
            kernel_frame: OrthFrame::from_subspace(cfg.kernel(j)),
            a,
            b,
        })
    }

    pub fn x_side(
        cfg: &ProjectionConfig,
        j: usize,
        a: Vec<Rat>,
        b: Vec<Rat>,
    ) -> Result<Self, HeisenbergError> {
        Self::build(cfg, Side::X, j, a, b)
    }

    pub fn y_side(
        cfg: &ProjectionConfig,
        j: usize,
        a: Vec<Rat>,
        b: Vec<Rat>,
    ) -> Result<Self, HeisenbergError> {
        Self::build(cfg, Side::Y, j, a, b)
    }

    /// All `2m` projections of a configuration.  `offsets` is either empty
    /// (no offsets) or one `(a, b)` pair per projection index.
    pub fn family(
        cfg: &ProjectionConfig,
        offsets: &[(Vec<Rat>, Vec<Rat>)],
    ) -> Result<Vec<Self>, HeisenbergError> {
        let m = cfg.m();
        if !offsets.is_empty() && offsets.len() != 2 * m {
            return Err(HeisenbergError::OffsetCount { expected: 2 * m, got: offsets.len() });
        }
        let zero = vec![Rat::zero(); cfg.n()];
        let mut out = Vec::with_capacity(2 * m);
        for i in 0..2 * m {
            let (a, b) = if offsets.is_empty() {
                (zero.clone(), zero.clone())
            } else {
                offsets[i].clone()
            };
            let side = if i < m { Side::X } else { Side::Y };
            out.push(Self::build(cfg, side, i % m, a, b)?);
        }
        Ok(out)
    }

    /// Signed twist this projection adds to the central coordinate:
    /// `+(Lhat x + a).(Lhat y + b)/2` on the x side, minus that on the y side.
    pub fn twist(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let lx = self.l_hat.mul_vec(x);
        let ly = self.l_hat.mul_vec(y);
        let ax: Vec<Rat> = lx.iter().zip(&self.a).map(|(p, q)| p + q).collect();
        let by: Vec<Rat> = ly.iter().zip(&self.b).map(|(p, q)| p + q).collect();
        let half = rat(1, 2);
        let v = half * dot(&ax, &by);
        match self.side {
            Side::X => v,
            Side::Y => -v,
        }
    }

    /// Image of a point, as (projected-part coordinates in the codomain
    /// frame, untouched spatial variables, central coordinate).
    pub fn apply(&self, p: &Point<Rat>) -> (Vec<Rat>, Vec<Rat>, Rat) {
        let tau = &p.t + self.twist(&p.x, &p.y);
        match self.side {
            Side::X => (self.codomain_frame.coords(&self.l.mul_vec(&p.x)), p.y.clone(), tau),
            Side::Y => (self.codomain_frame.coords(&self.l.mul_vec(&p.y)), p.x.clone(), tau),
        }
    }
}

/// Axis block of a box: a subspace frame with a common half-width for all its
/// coordinates.
#[derive(Clone, Debug)]
pub struct BoxBlock {
    pub frame: OrthFrame,
    pub half_width: Rat,
}

/// Centered box `{ |x-coords| <= hw, |y-coords| <= hw, |t| <= t_half }`,
/// where coordinates are taken in the block frames.  The x blocks (and the y
/// blocks) must form an orthogonal decomposition of `R^n`.
#[derive(Clone, Debug)]
pub struct BoxInstance {
    pub x_blocks: Vec<BoxBlock>,
    pub y_blocks: Vec<BoxBlock>,
    pub t_half: Rat,
}

fn validate_blocks(n: usize, blocks: &[BoxBlock]) -> Result<(), HeisenbergError> {
    let total: usize = blocks.iter().map(|b| b.frame.dim()).sum();
    if total != n || blocks.iter().any(|b| b.frame.ambient() != n) {
        return Err(HeisenbergError::BlocksNotOrthogonal);
    }
    for (i, p) in blocks.iter().enumerate() {
        for q in blocks.iter().skip(i + 1) {
            for c in 0..p.frame.dim() {
                for d in 0..q.frame.dim() {
                    if !dot(&p.frame.vector(c), &q.frame.vector(d)).is_zero() {
                        return Err(HeisenbergError::BlocksNotOrthogonal);
                    }
                }
            }
        }
    }
    Ok(())
}

impl BoxInstance {
    pub fn new(
        n: usize,
        x_blocks: Vec<BoxBlock>,
        y_blocks: Vec<BoxBlock>,
        t_half: Rat,
    ) -> Result<Self, HeisenbergError> {
        validate_blocks(n, &x_blocks)?;
        validate_blocks(n, &y_blocks)?;
        Ok(Self { x_blocks, y_blocks, t_half })
    }

    pub fn n(&self) -> usize {
        self.x_blocks.first().map_or(0, |b| b.frame.ambient())
    }

    /// Volume in block coordinates (no frame jacobian).
    pub fn coordinate_volume(&self) -> Rat {
        let mut v = rat_i(2) * &self.t_half;
        for b in self.x_blocks.iter().chain(&self.y_blocks) {
            for _ in 0..b.frame.dim() {
                v *= rat_i(2) * &b.half_width;
            }
        }
        v
    }

    /// Squared jacobian relating block coordinates to Lebesgue measure.
    pub fn jacobian2(&self) -> Rat {
        self.x_blocks
            .iter()
            .chain(&self.y_blocks)
            .map(|b| b.frame.jacobian2())
            .product()
    }

    /// Lebesgue volume as a float.
    pub fn volume_f64(&self) -> f64 {
        rat_to_f64(&self.coordinate_volume()) * rat_to_f64(&self.jacobian2()).sqrt()
    }

    pub fn contains(&self, p: &Point<Rat>) -> bool {
        let check = |blocks: &[BoxBlock], v: &[Rat]| {
            blocks.iter().all(|b| {
                b.frame
                    .coords(v)
                    .iter()
                    .all(|c| c.abs() <= b.half_width)
            })
        };
        use num::Signed;
        check(&self.x_blocks, &p.x)
            && check(&self.y_blocks, &p.y)
            && p.t.abs() <= self.t_half
    }
}
