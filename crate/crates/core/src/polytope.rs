//! Exact vertex enumeration for rational polytopes inside the unit box.
//!
//! A polytope arrives as a tagged constraint system; the unit-box bounds are
//! always appended, so every instance is bounded.  `enumerate_vertices` runs a
//! double-description sweep over an affine parameterization of the equality
//! set, and `brute_force_vertices` independently enumerates basic feasible
//! solutions for cross-checking on small systems.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::conditions::{LinearConstraint, Relation, Tag};
use crate::linalg::{dot, RationalMatrix};
use crate::rat::Rat;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("problem too large for exact enumeration: {0}")]
    TooLarge(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
}

/// Vertex representation: sorted, deduplicated exact vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    pub ambient: usize,
    pub vertices: Vec<Vec<Rat>>,
    /// Dimension of the affine hull of the vertex set; `-1` when empty.
    pub affine_dim: i64,
}

impl VPolytope {
    pub fn empty(ambient: usize) -> Self {
        Self { ambient, vertices: Vec::new(), affine_dim: -1 }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn from_vertices(ambient: usize, vertices: Vec<Vec<Rat>>) -> Self {
        let set: BTreeSet<Vec<Rat>> = vertices.into_iter().collect();
        let vertices: Vec<Vec<Rat>> = set.into_iter().collect();
        let affine_dim = affine_dim_of(&vertices);
        Self { ambient, vertices, affine_dim }
    }
}

fn affine_dim_of(vertices: &[Vec<Rat>]) -> i64 {
    let Some((v0, rest)) = vertices.split_first() else {
        return -1;
    };
    if rest.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = rest
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    RationalMatrix::from_rows(diffs).rank() as i64
}

/// Halfspace/hyperplane system over `[0,1]^d` with tagged rows.
#[derive(Clone, Debug)]
pub struct HPolytope {
    num_vars: usize,
    constraints: Vec<LinearConstraint>,
}

/// Untagged solver form: `a.x = b` rows and `a.x <= b` rows, deduplicated.
struct SolverView {
    eqs: Vec<(Vec<Rat>, Rat)>,
    ineqs: Vec<(Vec<Rat>, Rat)>,
    trivially_infeasible: bool,
}

impl HPolytope {
    /// Wraps a constraint system, appending `0 <= q_i <= 1` for every
    /// variable.
    pub fn new(num_vars: usize, mut constraints: Vec<LinearConstraint>) -> Self {
        for c in &constraints {
            assert_eq!(c.coeffs.len(), num_vars, "constraint arity mismatch");
        }
        for i in 0..num_vars {
            let mut unit = vec![Rat::zero(); num_vars];
            unit[i] = Rat::one();
            constraints.push(LinearConstraint::new(
                unit.clone(),
                Relation::Ge,
                Rat::zero(),
                Tag::QLower(i),
            ));
            constraints.push(LinearConstraint::new(unit, Relation::Le, Rat::one(), Tag::QUpper(i)));
        }
        Self { num_vars, constraints }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn violated_at(&self, q: &[Rat]) -> Vec<&LinearConstraint> {
        self.constraints.iter().filter(|c| !c.satisfied_by(q)).collect()
    }

    pub fn contains(&self, q: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(q))
    }

    pub fn active_at(&self, q: &[Rat]) -> Vec<&LinearConstraint> {
        self.constraints.iter().filter(|c| c.active_at(q)).collect()
    }

    fn solver_view(&self) -> SolverView {
        let zeros = vec![Rat::zero(); self.num_vars];
        let mut eqs: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
        let mut ineqs: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
        let mut trivially_infeasible = false;
        for c in &self.constraints {
            if c.is_trivial() {
                if !c.satisfied_by(&zeros) {
                    trivially_infeasible = true;
                }
                continue;
            }
            match c.relation {
                Relation::Eq => {
                    eqs.insert((c.coeffs.clone(), c.rhs.clone()));
                }
                Relation::Le => {
                    ineqs.insert((c.coeffs.clone(), c.rhs.clone()));
                }
                Relation::Ge => {
                    let neg: Vec<Rat> = c.coeffs.iter().map(|v| -v.clone()).collect();
                    ineqs.insert((neg, -c.rhs.clone()));
                }
            }
        }
        SolverView {
            eqs: eqs.into_iter().collect(),
            ineqs: ineqs.into_iter().collect(),
            trivially_infeasible,
        }
    }

    /// Exact vertex set via double description.
    ///
    /// The equality rows are eliminated first: points are written as
    /// `x = x0 + N z` over the equality kernel, the inequalities are pushed to
    /// `z`-space, and halfspaces are inserted into a starter box chosen large
    /// enough to strictly contain the feasible set (so its facets never
    /// survive into the answer).
    pub fn enumerate_vertices(&self) -> Result<VPolytope, PolytopeError> {
        let d = self.num_vars;
        let view = self.solver_view();
        if view.trivially_infeasible {
            return Ok(VPolytope::empty(d));
        }

        let emat = if view.eqs.is_empty() {
            RationalMatrix::zeros(0, d)
        } else {
            RationalMatrix::from_rows(view.eqs.iter().map(|(a, _)| a.clone()).collect())
        };
        let erhs = {
            let mut m = RationalMatrix::zeros(view.eqs.len(), 1);
            for (i, (_, b)) in view.eqs.iter().enumerate() {
                m.set(i, 0, b.clone());
            }
            m
        };
        let Some(x0m) = emat.solve(&erhs) else {
            return Ok(VPolytope::empty(d));
        };
        let x0: Vec<Rat> = x0m.col(0);
        let nmat = emat.kernel();
        let k = nmat.cols();

        // Inequalities in z-coordinates, deduplicated in primitive form.
        let mut zineqs: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
        for (a, b) in &view.ineqs {
            let an: Vec<Rat> = (0..k).map(|j| dot(a, &nmat.col(j))).collect();
            let bz = b - dot(a, &x0);
            if an.iter().all(|v| v.is_zero()) {
                if bz.is_negative() {
                    return Ok(VPolytope::empty(d));
                }
                continue;
            }
            zineqs.insert(primitive_halfspace(an, bz));
        }
        let zineqs: Vec<(Vec<Rat>, Rat)> = zineqs.into_iter().collect();

        if k == 0 {
            return Ok(VPolytope::from_vertices(d, vec![x0]));
        }
        if k > 9 {
            return Err(PolytopeError::TooLarge(format!(
                "equality kernel has dimension {k}, exact sweep supports at most 9"
            )));
        }

        // Starter box radius: z is pinned by x in [0,1]^d through a left
        // inverse of N, so bound each |z_i| and add one.
        let pinv = {
            let nt = nmat.transpose();
            let gram = nt.matmul(&nmat);
            gram.solve(&nt).expect("kernel basis has independent columns")
        };
        let mut radius = Rat::zero();
        for i in 0..k {
            let mut bound = Rat::zero();
            for j in 0..d {
                let reach = (&x0[j] - Rat::one()).abs().max(x0[j].abs());
                bound += pinv.get(i, j).abs() * reach;
            }
            radius = radius.max(bound);
        }
        radius += Rat::one();

        let mut art: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(2 * k);
        for i in 0..k {
            let mut unit = vec![Rat::zero(); k];
            unit[i] = Rat::one();
            art.push((unit.clone(), radius.clone()));
            let neg: Vec<Rat> = unit.iter().map(|v| -v.clone()).collect();
            art.push((neg, radius.clone()));
        }

        let mut verts: Vec<Vec<Rat>> = Vec::with_capacity(1 << k);
        for mask in 0u32..(1u32 << k) {
            let corner: Vec<Rat> = (0..k)
                .map(|i| if mask & (1 << i) != 0 { radius.clone() } else { -radius.clone() })
                .collect();
            verts.push(corner);
        }

        let mut inserted = art;
        let mut remaining = zineqs.clone();
        while !remaining.is_empty() && !verts.is_empty() {
            // Greedy: insert the halfspace cutting the fewest vertices.
            let mut best: Option<(usize, usize)> = None;
            for (i, (a, b)) in remaining.iter().enumerate() {
                let cut = verts.iter().filter(|v| &dot(a, v) > b).count();
                if best.map_or(true, |(_, c)| cut < c) {
                    best = Some((i, cut));
                }
            }
            let (idx, cut) = best.unwrap();
            let (a, b) = remaining.remove(idx);
            if cut == 0 {
                inserted.push((a, b));
                continue;
            }
            let vals: Vec<Rat> = verts.iter().map(|v| dot(&a, v)).collect();
            let asets: Vec<BTreeSet<usize>> = verts
                .iter()
                .map(|v| {
                    inserted
                        .iter()
                        .enumerate()
                        .filter(|(_, (ca, cb))| &dot(ca, v) == cb)
                        .map(|(ci, _)| ci)
                        .collect()
                })
                .collect();
            let mut next: BTreeSet<Vec<Rat>> = BTreeSet::new();
            for (i, v) in verts.iter().enumerate() {
                if vals[i] <= b {
                    next.insert(v.clone());
                }
            }
            for i in 0..verts.len() {
                if vals[i] >= b {
                    continue;
                }
                for j in 0..verts.len() {
                    if vals[j] <= b || !combinatorially_adjacent(i, j, &asets) {
                        continue;
                    }
                    let lambda = (&b - &vals[i]) / (&vals[j] - &vals[i]);
                    let w: Vec<Rat> = verts[i]
                        .iter()
                        .zip(&verts[j])
                        .map(|(u, v)| u + &lambda * (v - u))
                        .collect();
                    next.insert(w);
                }
            }
            verts = next.into_iter().collect();
            inserted.push((a, b));
        }

        if verts.is_empty() {
            return Ok(VPolytope::empty(d));
        }

        // Certify: a true vertex is pinned by rank-k active (real) normals.
        let mut out = Vec::new();
        for v in &verts {
            let active: Vec<Vec<Rat>> = zineqs
                .iter()
                .filter(|(a, b)| &dot(a, v) == b)
                .map(|(a, _)| a.clone())
                .collect();
            if active.is_empty() || RationalMatrix::from_rows(active).rank() < k {
                continue;
            }
            let x: Vec<Rat> = (0..d)
                .map(|r| &x0[r] + dot(&nmat.row(r), v))
                .collect();
            debug_assert!(self.contains(&x), "enumerated vertex violates the system");
            out.push(x);
        }
        Ok(VPolytope::from_vertices(d, out))
    }

    /// Independent check: enumerate basic feasible solutions by solving every
    /// equality-plus-inequality subset of full rank.  Refuses large systems.
    pub fn brute_force_vertices(&self) -> Result<VPolytope, PolytopeError> {
        let d = self.num_vars;
        if d > 8 {
            return Err(PolytopeError::TooLarge(format!("{d} variables, brute force supports 8")));
        }
        let view = self.solver_view();
        if view.trivially_infeasible {
            return Ok(VPolytope::empty(d));
        }
        if view.ineqs.len() > 48 {
            return Err(PolytopeError::TooLarge(format!(
                "{} inequalities, brute force supports 48",
                view.ineqs.len()
            )));
        }
        let emat = if view.eqs.is_empty() {
            RationalMatrix::zeros(0, d)
        } else {
            RationalMatrix::from_rows(view.eqs.iter().map(|(a, _)| a.clone()).collect())
        };
        let k = d - emat.rank();
        let combos = binomial(view.ineqs.len() as u128, k as u128);
        if combos > 2_000_000 {
            return Err(PolytopeError::Budget(format!(
                "{combos} candidate bases exceed the brute-force budget"
            )));
        }
        let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for_each_combination(view.ineqs.len(), k, |subset| {
            let mut rows: Vec<Vec<Rat>> = view.eqs.iter().map(|(a, _)| a.clone()).collect();
            let mut rhs: Vec<Rat> = view.eqs.iter().map(|(_, b)| b.clone()).collect();
            for &i in subset {
                rows.push(view.ineqs[i].0.clone());
                rhs.push(view.ineqs[i].1.clone());
            }
            let a = RationalMatrix::from_rows(rows);
            if a.rank() < d {
                return;
            }
            let mut bcol = RationalMatrix::zeros(rhs.len(), 1);
            for (i, v) in rhs.iter().enumerate() {
                bcol.set(i, 0, v.clone());
            }
            let Some(x) = a.solve(&bcol) else {
                return;
            };
            let point = x.col(0);
            if self.contains(&point) {
                found.insert(point);
            }
        });
        Ok(VPolytope::from_vertices(d, found.into_iter().collect()))
    }
}

/// Adjacency on a polytope: no third vertex's active set contains the
/// intersection of the two active sets.
fn combinatorially_adjacent(i: usize, j: usize, asets: &[BTreeSet<usize>]) -> bool {
    let shared: BTreeSet<usize> = asets[i].intersection(&asets[j]).copied().collect();
    for (w, aw) in asets.iter().enumerate() {
        if w != i && w != j && shared.is_subset(aw) {
            return false;
        }
    }
    true
}

/// Scales `(a, b)` by a positive rational so entries are coprime integers.
fn primitive_halfspace(a: Vec<Rat>, b: Rat) -> (Vec<Rat>, Rat) {
    let mut lcm = BigInt::one();
    for v in a.iter().chain(std::iter::once(&b)) {
        lcm = lcm.lcm(v.denom());
    }
    let scaled: Vec<BigInt> = a
        .iter()
        .chain(std::iter::once(&b))
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for s in &scaled {
        gcd = gcd.gcd(s);
    }
    if gcd.is_zero() {
        return (a, b);
    }
    let ints: Vec<Rat> = scaled.iter().map(|s| Rat::from_integer(s / &gcd)).collect();
    let b_out = ints.last().unwrap().clone();
    (ints[..ints.len() - 1].to_vec(), b_out)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
