//! Linear conditions on reciprocal exponent tuples.
//!
//! A configuration assigns to each index `j` in `1..=m` an orthogonal
//! projection `L_j` of `R^n` onto a subspace `V_j`.  Admissibility of a
//! Lebesgue exponent tuple is governed by linear equalities and inequalities
//! in the reciprocals `q = (q_1, ..., q_{2m})`, where `q_1..q_m` belong to the
//! x-side projections and `q_{m+1}..q_{2m}` to the matching y-side ones.
//! This module builds those constraints exactly.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, Zero};

use crate::linalg::{all_coordinate_subspaces, dim_image, RationalMatrix, Subspace};
use crate::rat::{rat_i, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConditionsError {
    #[error("need at least one projection")]
    Empty,
    #[error("subspace lives in R^{got}, expected R^{expected}")]
    Ambient { expected: usize, got: usize },
    #[error("pair is invalid: second subspace must lie in the orthogonal complement of the first")]
    PairNotOrthogonal,
    #[error("exponent tuple has length {got}, expected {expected}")]
    QLength { expected: usize, got: usize },
    #[error("exponent p must be nonzero")]
    ZeroP,
    #[error("generated subspace family exceeds {0} members")]
    FamilyTooLarge(usize),
}

/// A tuple of orthogonal projections on `R^n` with cached projection matrices
/// and kernels.  The y-side copy of projection `j` reuses the same `L_j`.
#[derive(Clone, Debug)]
pub struct ProjectionConfig {
    n: usize,
    subspaces: Vec<Subspace>,
    l: Vec<RationalMatrix>,
    l_hat: Vec<RationalMatrix>,
    kernels: Vec<Subspace>,
}

impl ProjectionConfig {
    pub fn new(n: usize, subspaces: Vec<Subspace>) -> Result<Self, ConditionsError> {
        if subspaces.is_empty() {
            return Err(ConditionsError::Empty);
        }
        if let Some(bad) = subspaces.iter().find(|v| v.ambient() != n) {
            return Err(ConditionsError::Ambient { expected: n, got: bad.ambient() });
        }
        let l: Vec<RationalMatrix> = subspaces.iter().map(|v| v.orthogonal_projection()).collect();
        let id = RationalMatrix::identity(n);
        let l_hat: Vec<RationalMatrix> = l.iter().map(|p| id.sub(p)).collect();
        let kernels: Vec<Subspace> = subspaces.iter().map(|v| v.orth_complement()).collect();
        Ok(Self { n, subspaces, l, l_hat, kernels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.subspaces.len()
    }

    /// Number of exponent variables, `2m`.
    pub fn num_exponents(&self) -> usize {
        2 * self.m()
    }

    pub fn subspace(&self, j: usize) -> &Subspace {
        &self.subspaces[j]
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// `dim V_j`.
    pub fn n_j(&self, j: usize) -> usize {
        self.subspaces[j].dim()
    }

    pub fn l(&self, j: usize) -> &RationalMatrix {
        &self.l[j]
    }

    pub fn l_hat(&self, j: usize) -> &RationalMatrix {
        &self.l_hat[j]
    }

    pub fn kernel(&self, j: usize) -> &Subspace {
        &self.kernels[j]
    }

    /// True when every `V_j` is spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        self.subspaces.iter().all(|v| v.coordinate_indices().is_some())
    }
}

/// Reciprocal exponent tuple `q`, one entry per projection side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVec(pub Vec<Rat>);

impl QVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    /// Builds `q` from Lebesgue exponents `p_i`; `None` encodes `p = infinity`
    /// (so `q = 0`).  Finite entries must be nonzero.
    pub fn from_p(p: &[Option<Rat>]) -> Result<Self, ConditionsError> {
        let mut q = Vec::with_capacity(p.len());
        for entry in p {
            match entry {
                None => q.push(Rat::zero()),
                Some(v) if v.is_zero() => return Err(ConditionsError::ZeroP),
                Some(v) => q.push(v.clone().recip()),
            }
        }
        Ok(Self(q))
    }

    /// The Lebesgue exponents `p_i = 1/q_i`; `None` where `q_i = 0`.
    pub fn to_p(&self) -> Vec<Option<Rat>> {
        self.0
            .iter()
            .map(|q| if q.is_zero() { None } else { Some(q.clone().recip()) })
            .collect()
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Provenance of a constraint, used in reports and violation messages.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Scaling equality with the x-variables dilated.
    A1,
    /// Scaling equality with the y-variables dilated.
    A2,
    /// Lower bound from dilating the x-variables along a subspace.
    B1(Subspace),
    /// Lower bound from dilating the y-variables along a subspace.
    B2(Subspace),
    /// Balance equality along a subspace (compression in x against expansion
    /// in y).
    C(Subspace),
    /// One-sided bound from a compressed-box family, small-parameter end.
    C1(Subspace, Subspace),
    /// One-sided bound from a compressed-box family, large-parameter end.
    C2(Subspace, Subspace),
    /// `q_i >= 0` (0-based index).
    QLower(usize),
    /// `q_i <= 1` (0-based index).
    QUpper(usize),
}

impl Tag {
    pub fn is_balance(&self) -> bool {
        matches!(self, Tag::C(_) | Tag::C1(_, _) | Tag::C2(_, _))
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::A1 => write!(f, "A1"),
            Tag::A2 => write!(f, "A2"),
            Tag::B1(v) => write!(f, "B1({})", v.label()),
            Tag::B2(v) => write!(f, "B2({})", v.label()),
            Tag::C(v) => write!(f, "C({})", v.label()),
            Tag::C1(v, w) => write!(f, "C1({};{})", v.label(), w.label()),
            Tag::C2(v, w) => write!(f, "C2({};{})", v.label(), w.label()),
            Tag::QLower(i) => write!(f, "q{}>=0", i + 1),
            Tag::QUpper(i) => write!(f, "q{}<=1", i + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Eq => write!(f, "="),
            Relation::Le => write!(f, "<="),
            Relation::Ge => write!(f, ">="),
        }
    }
}

/// A single linear condition `coeffs . q  <relation>  rhs`.
///
/// Invariant: after construction all coefficients and the right-hand side are
/// integers with no common factor, and equalities have a positive leading
/// coefficient, so syntactic equality of the data means equality of the
/// condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
    pub tag: Tag,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat, tag: Tag) -> Self {
        let mut c = Self { coeffs, relation, rhs, tag };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        use num::bigint::BigInt;
        use num::Integer;
        let mut lcm = BigInt::one();
        for v in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            lcm = lcm.lcm(v.denom());
        }
        let mut gcd = BigInt::zero();
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        for s in &scaled {
            gcd = gcd.gcd(s);
        }
        if gcd.is_zero() {
            // All coefficients and the rhs are zero; nothing to scale.
            return;
        }
        let mut sign = BigInt::one();
        if self.relation == Relation::Eq {
            if let Some(first) = scaled.iter().find(|v| !v.is_zero()) {
                if first.is_negative() {
                    sign = -sign;
                }
            }
        }
        let scale = gcd * sign;
        for (dst, src) in self.coeffs.iter_mut().zip(&scaled) {
            *dst = Rat::from_integer(src / &scale);
        }
        self.rhs = Rat::from_integer(scaled.last().unwrap() / &scale);
        if self.relation != Relation::Eq && scale.is_negative() {
            unreachable!("inequalities are never sign-flipped");
        }
    }

    pub fn eval(&self, q: &[Rat]) -> Rat {
        assert_eq!(q.len(), self.coeffs.len(), "constraint arity mismatch");
        self.coeffs.iter().zip(q).map(|(c, v)| c * v).sum()
    }

    /// `lhs - rhs` at `q`.
    pub fn residual(&self, q: &[Rat]) -> Rat {
        self.eval(q) - &self.rhs
    }

    pub fn satisfied_by(&self, q: &[Rat]) -> bool {
        let r = self.residual(q);
        match self.relation {
            Relation::Eq => r.is_zero(),
            Relation::Le => !r.is_positive(),
            Relation::Ge => !r.is_negative(),
        }
    }

    pub fn active_at(&self, q: &[Rat]) -> bool {
        self.residual(q).is_zero()
    }

    /// True when every coefficient vanishes (the condition is `0 <rel> rhs`).
    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "q{}", i + 1)?;
            } else {
                write!(f, "{} q{}", mag, i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " {} {}", self.relation, self.rhs)
    }
}

fn dims_as_rat(d: i64) -> Rat {
    rat_i(d)
}

/// The two scaling equalities.  Dilating the x-variables (and the central
/// variable) of a box shows the total exponent budget must match on each
/// side; dilating the y-variables gives the mirrored equality.
pub fn constraints_a(cfg: &ProjectionConfig) -> [LinearConstraint; 2] {
    let m = cfg.m();
    let n = cfg.n() as i64;
    let mut a1 = vec![Rat::zero(); 2 * m];
    let mut a2 = vec![Rat::zero(); 2 * m];
    for j in 0..m {
        let nj = cfg.n_j(j) as i64;
        a1[j] = dims_as_rat(nj + 1);
        a1[j + m] = dims_as_rat(n + 1);
        a2[j] = dims_as_rat(n + 1);
        a2[j + m] = dims_as_rat(nj + 1);
    }
    [
        LinearConstraint::new(a1, Relation::Eq, dims_as_rat(n + 1), Tag::A1),
        LinearConstraint::new(a2, Relation::Eq, dims_as_rat(n + 1), Tag::A2),
    ]
}

/// Lower bound from dilating the x-variables along `v` only.
pub fn constraint_b1(cfg: &ProjectionConfig, v: &Subspace) -> LinearConstraint {
    let m = cfg.m();
    let dv = v.dim() as i64;
    let mut coeffs = vec![Rat::zero(); 2 * m];
    for j in 0..m {
        let lv = dim_image(cfg.l(j), v) as i64;
        coeffs[j] = dims_as_rat(lv + 1);
        coeffs[j + m] = dims_as_rat(dv + 1);
    }
    LinearConstraint::new(coeffs, Relation::Ge, dims_as_rat(dv + 1), Tag::B1(v.clone()))
}

/// Mirror of `constraint_b1` with the y-variables dilated.
pub fn constraint_b2(cfg: &ProjectionConfig, v: &Subspace) -> LinearConstraint {
    let m = cfg.m();
    let dv = v.dim() as i64;
    let mut coeffs = vec![Rat::zero(); 2 * m];
    for j in 0..m {
        let lv = dim_image(cfg.l(j), v) as i64;
        coeffs[j] = dims_as_rat(dv + 1);
        coeffs[j + m] = dims_as_rat(lv + 1);
    }
    LinearConstraint::new(coeffs, Relation::Ge, dims_as_rat(dv + 1), Tag::B2(v.clone()))
}

/// Balance equality along `v`: compressing x along `v` while expanding y
/// along it must cost nothing to first order.
pub fn constraint_c(cfg: &ProjectionConfig, v: &Subspace) -> LinearConstraint {
    let m = cfg.m();
    let dv = v.dim() as i64;
    let mut coeffs = vec![Rat::zero(); 2 * m];
    for j in 0..m {
        let lv = dim_image(cfg.l(j), v) as i64;
        coeffs[j] = dims_as_rat(dv - lv);
        coeffs[j + m] = dims_as_rat(lv - dv);
    }
    LinearConstraint::new(coeffs, Relation::Eq, Rat::zero(), Tag::C(v.clone()))
}

fn check_pair(cfg: &ProjectionConfig, v: &Subspace, w: &Subspace) -> Result<(), ConditionsError> {
    if v.ambient() != cfg.n() {
        return Err(ConditionsError::Ambient { expected: cfg.n(), got: v.ambient() });
    }
    if w.ambient() != cfg.n() {
        return Err(ConditionsError::Ambient { expected: cfg.n(), got: w.ambient() });
    }
    if !w.is_subspace_of(&v.orth_complement()) {
        return Err(ConditionsError::PairNotOrthogonal);
    }
    Ok(())
}

/// Exact image-measure exponents for the *shrinking* end of the compressed
/// box family attached to a pair `(v, w)` with `w` orthogonal to `v`.
///
/// The box squeezes x along `v` while stretching y along the complement of
/// `w`, both by the parameter; returned are the growth exponents of each
/// projected measure and of the box itself.  Kernel directions that survive
/// inside the box contribute one extra unit of central spread, which the
/// indicator terms account for.
pub fn compressed_small_exponents(
    cfg: &ProjectionConfig,
    v: &Subspace,
    w: &Subspace,
) -> Result<(Vec<i64>, i64), ConditionsError> {
    check_pair(cfg, v, w)?;
    let m = cfg.m();
    let dv = v.dim() as i64;
    let vp = v.orth_complement();
    let wp = w.orth_complement();
    let dwp = wp.dim() as i64;
    let mut exps = vec![0i64; 2 * m];
    for j in 0..m {
        let nj = cfg.n_j(j) as i64;
        let lvp = dim_image(cfg.l(j), &vp) as i64;
        let s = i64::from(!cfg.kernel(j).intersect(&vp).is_subspace_of(w));
        exps[j] = dwp - (nj - lvp) + s;
        let lwp = dim_image(cfg.l(j), &wp) as i64;
        let t = i64::from(!cfg.kernel(j).intersect(&wp).is_subspace_of(v));
        exps[j + m] = lwp + t - dv;
    }
    Ok((exps, dwp - dv))
}

/// Mirror of `compressed_small_exponents` for the *growing* end of the
/// family (x stretched along `v`, y squeezed along the complement of `w`).
pub fn compressed_large_exponents(
    cfg: &ProjectionConfig,
    v: &Subspace,
    w: &Subspace,
) -> Result<(Vec<i64>, i64), ConditionsError> {
    check_pair(cfg, v, w)?;
    let m = cfg.m();
    let dv = v.dim() as i64;
    let wp = w.orth_complement();
    let dwp = wp.dim() as i64;
    let mut exps = vec![0i64; 2 * m];
    for j in 0..m {
        let nj = cfg.n_j(j) as i64;
        let lv = dim_image(cfg.l(j), v) as i64;
        let u = i64::from(!cfg.kernel(j).intersect(v).is_subspace_of(&wp));
        exps[j] = lv - dwp + u;
        let lw = dim_image(cfg.l(j), w) as i64;
        exps[j + m] = dv - (nj - lw);
    }
    Ok((exps, dv - dwp))
}

/// One-sided bound from the small-parameter end of a compressed-box family:
/// the box exponent cannot exceed the weighted image exponents.
pub fn constraint_c1(
    cfg: &ProjectionConfig,
    v: &Subspace,
    w: &Subspace,
) -> Result<LinearConstraint, ConditionsError> {
    let (exps, domain) = compressed_small_exponents(cfg, v, w)?;
    Ok(LinearConstraint::new(
        exps.into_iter().map(dims_as_rat).collect(),
        Relation::Ge,
        dims_as_rat(domain),
        Tag::C1(v.clone(), w.clone()),
    ))
}

/// One-sided bound from the large-parameter end of the same box family.
pub fn constraint_c2(
    cfg: &ProjectionConfig,
    v: &Subspace,
    w: &Subspace,
) -> Result<LinearConstraint, ConditionsError> {
    let (exps, domain) = compressed_large_exponents(cfg, v, w)?;
    Ok(LinearConstraint::new(
        exps.into_iter().map(|e| dims_as_rat(-e)).collect(),
        Relation::Le,
        dims_as_rat(-domain),
        Tag::C2(v.clone(), w.clone()),
    ))
}

/// How the subspace family entering the constraint system is chosen.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    /// All coordinate subspaces (requires a coordinate configuration to be
    /// exhaustive, but is usable for any configuration).
    Coordinate,
    /// Closure of `{0, R^n, V_j, ker L_j}` under orthogonal complement,
    /// pairwise sum and pairwise intersection, iterated `depth` times.
    Heuristic { depth: usize },
    /// Explicit list of subspaces.
    Explicit(Vec<Subspace>),
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec::Heuristic { depth: 2 }
    }
}

/// Subspaces entering the constraint system: `singles` feed the dilation and
/// balance conditions, `pairs` the compressed-box bounds.
#[derive(Clone, Debug)]
pub struct SubspaceFamily {
    pub singles: Vec<Subspace>,
    pub pairs: Vec<(Subspace, Subspace)>,
}

const FAMILY_CAP: usize = 512;

pub fn build_family(cfg: &ProjectionConfig, spec: &FamilySpec) -> Result<SubspaceFamily, ConditionsError> {
    let n = cfg.n();
    let singles: Vec<Subspace> = match spec {
        FamilySpec::Coordinate => {
            all_coordinate_subspaces(n).iter().map(|c| c.to_subspace()).collect()
        }
        FamilySpec::Heuristic { depth } => {
            let mut set: BTreeSet<Subspace> = BTreeSet::new();
            set.insert(Subspace::zero(n));
            set.insert(Subspace::full(n));
            for j in 0..cfg.m() {
                set.insert(cfg.subspace(j).clone());
                set.insert(cfg.kernel(j).clone());
            }
            for _ in 0..*depth {
                let current: Vec<Subspace> = set.iter().cloned().collect();
                for v in &current {
                    set.insert(v.orth_complement());
                }
                for a in &current {
                    for b in &current {
                        set.insert(a.sum(b));
                        set.insert(a.intersect(b));
                        if set.len() > FAMILY_CAP {
                            return Err(ConditionsError::FamilyTooLarge(FAMILY_CAP));
                        }
                    }
                }
                if set.len() > FAMILY_CAP {
                    return Err(ConditionsError::FamilyTooLarge(FAMILY_CAP));
                }
            }
            set.into_iter().collect()
        }
        FamilySpec::Explicit(list) => {
            if let Some(bad) = list.iter().find(|v| v.ambient() != n) {
                return Err(ConditionsError::Ambient { expected: n, got: bad.ambient() });
            }
            let set: BTreeSet<Subspace> = list.iter().cloned().collect();
            set.into_iter().collect()
        }
    };
    if singles.len() > FAMILY_CAP {
        return Err(ConditionsError::FamilyTooLarge(FAMILY_CAP));
    }
    let mut pairs = Vec::new();
    for v in &singles {
        let vp = v.orth_complement();
        for w in &singles {
            if w.is_subspace_of(&vp) {
                pairs.push((v.clone(), w.clone()));
            }
        }
    }
    Ok(SubspaceFamily { singles, pairs })
}

/// Which carving of the admissible region a constraint system describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemMode {
    /// Conditions every admissible tuple must satisfy: scaling equalities,
    /// dilation bounds, and both one-sided compressed-box bounds.
    Necessary,
    /// Conditions that certify admissibility: scaling equalities, dilation
    /// bounds, and the balance equalities.
    Sufficient,
}

/// Assembles the constraint system for a configuration over a family.
/// Trivial (all-zero, always satisfied) constraints are dropped; a trivial
/// *unsatisfiable* constraint is kept so infeasibility stays visible.
pub fn build_system(
    cfg: &ProjectionConfig,
    family: &SubspaceFamily,
    mode: SystemMode,
) -> Result<Vec<LinearConstraint>, ConditionsError> {
    let mut out: Vec<LinearConstraint> = Vec::new();
    out.extend(constraints_a(cfg));
    for v in &family.singles {
        if v.ambient() != cfg.n() {
            return Err(ConditionsError::Ambient { expected: cfg.n(), got: v.ambient() });
        }
        out.push(constraint_b1(cfg, v));
        out.push(constraint_b2(cfg, v));
    }
    match mode {
        SystemMode::Sufficient => {
            for v in &family.singles {
                out.push(constraint_c(cfg, v));
            }
        }
        SystemMode::Necessary => {
            for (v, w) in &family.pairs {
                out.push(constraint_c1(cfg, v, w)?);
                out.push(constraint_c2(cfg, v, w)?);
            }
        }
    }
    let zeros = vec![Rat::zero(); cfg.num_exponents()];
    out.retain(|c| !(c.is_trivial() && c.satisfied_by(&zeros)));
    Ok(out)
}

/// Subspaces from `candidates` whose dilation bounds both hold with equality
/// at `q` (the geometric degeneracy driving extremal-box behaviour).
pub fn critical_subspaces(
    cfg: &ProjectionConfig,
    candidates: &[Subspace],
    q: &QVec,
) -> Result<Vec<Subspace>, ConditionsError> {
    if q.len() != cfg.num_exponents() {
        return Err(ConditionsError::QLength { expected: cfg.num_exponents(), got: q.len() });
    }
    Ok(candidates
        .iter()
        .filter(|v| {
            constraint_b1(cfg, v).active_at(q.as_slice())
                && constraint_b2(cfg, v).active_at(q.as_slice())
        })
        .cloned()
        .collect())
}
