use num_traits::{Signed, Zero};

use super::linalg;
use super::lp::{solve_lp, LpStatus, Sense};
use super::rational::{dot, one, zero, Rational, RationalVector};
use crate::error::{check_dim, Error, Result};

/// A linear constraint `normal · x (<= | =) offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub normal: RationalVector,
    pub offset: Rational,
}

impl Constraint {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        Self { normal, offset }
    }

    /// `offset - normal · x`; nonnegative iff the inequality holds.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, x)
    }

}

/// H-representation: `{x : A x <= b, E x = f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    ambient_dim: usize,
    inequalities: Vec<Constraint>,
    equalities: Vec<Constraint>,
}

impl HRep {
    pub fn new(
        ambient_dim: usize,
        inequalities: Vec<Constraint>,
        equalities: Vec<Constraint>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Input("ambient dimension must be at least 1".into()));
        }
        for c in inequalities.iter().chain(&equalities) {
            check_dim(ambient_dim, c.normal.len())?;
        }
        for (i, c) in inequalities.iter().enumerate() {
            if c.normal.iter().all(Zero::is_zero) && c.offset.is_negative() {
                return Err(Error::TriviallyInfeasible { index: i });
            }
        }
        for (j, c) in equalities.iter().enumerate() {
            if c.normal.iter().all(Zero::is_zero) && !c.offset.is_zero() {
                return Err(Error::TriviallyInfeasible { index: inequalities.len() + j });
            }
        }
        Ok(Self { ambient_dim, inequalities, equalities })
    }

    /// The axis-aligned box `lower <= x_i <= upper`.
    pub fn cube(dim: usize, lower: Rational, upper: Rational) -> Result<Self> {
        let mut ineqs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut up = vec![zero(); dim];
            up[i] = one();
            let mut down = vec![zero(); dim];
            down[i] = -one();
            ineqs.push(Constraint::new(up, upper.clone()));
            ineqs.push(Constraint::new(down, -lower.clone()));
        }
        Self::new(dim, ineqs, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.ambient_dim
            && self.inequalities.iter().all(|c| !c.slack(x).is_negative())
            && self.equalities.iter().all(|c| c.slack(x).is_zero())
    }

    /// Indices of inequalities tight at `x`.
    pub fn active_set(&self, x: &[Rational]) -> Vec<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, c)| c.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Rank of the normals of all equalities plus the inequalities in `active`.
    pub(crate) fn active_rank(&self, active: &[usize]) -> usize {
        let rows: Vec<RationalVector> = self
            .equalities
            .iter()
            .map(|c| c.normal.clone())
            .chain(active.iter().map(|&i| self.inequalities[i].normal.clone()))
            .collect();
        linalg::rank(&rows)
    }

    /// `x` is a vertex iff it is feasible and its active constraints have full rank.
    pub fn is_vertex(&self, x: &[Rational]) -> bool {
        self.contains(x) && self.active_rank(&self.active_set(x)) == self.ambient_dim
    }

    /// Runs `2 * dim` coordinate LPs. Reports emptiness before unboundedness.
    pub fn check_bounded_nonempty(&self) -> Result<()> {
        for coordinate in 0..self.ambient_dim {
            for sense in [Sense::Max, Sense::Min] {
                let mut objective = vec![zero(); self.ambient_dim];
                objective[coordinate] = one();
                match solve_lp(&objective, sense, self)?.status() {
                    LpStatus::Optimal => {}
                    LpStatus::Infeasible => return Err(Error::Empty),
                    LpStatus::Unbounded => return Err(Error::Unbounded { coordinate }),
                }
            }
        }
        Ok(())
    }
}

/// V-representation: the vertex list of a polytope, lexicographically sorted
/// with every entry an extreme point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    ambient_dim: usize,
    vertices: Vec<RationalVector>,
}

impl VRep {
    /// Canonicalizes an arbitrary nonempty point list: duplicates and points in
    /// the convex hull of the others are dropped, the rest sorted.
    pub fn new(ambient_dim: usize, points: Vec<RationalVector>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Input("ambient dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        for p in &points {
            check_dim(ambient_dim, p.len())?;
        }
        let mut points = points;
        points.sort();
        points.dedup();
        let mut keep = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let others: Vec<&RationalVector> =
                points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
            if !in_convex_hull(p, &others)? {
                keep.push(p.clone());
            }
        }
        Ok(Self { ambient_dim, vertices: keep })
    }

    /// Trusted constructor for lists already known to be extreme points.
    pub(crate) fn from_extreme_points(ambient_dim: usize, mut vertices: Vec<RationalVector>) -> Self {
        vertices.sort();
        vertices.dedup();
        Self { ambient_dim, vertices }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, point: &[Rational]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(point)).ok()
    }

    pub fn affine_dimension(&self) -> usize {
        linalg::affine_dimension(&self.vertices)
    }
}

/// Exact LP test for `p ∈ conv(others)`.
pub fn in_convex_hull(p: &[Rational], others: &[&RationalVector]) -> Result<bool> {
    if others.is_empty() {
        return Ok(false);
    }
    let n = others.len();
    let d = p.len();
    let mut ineqs = Vec::with_capacity(n);
    for i in 0..n {
        let mut normal = vec![zero(); n];
        normal[i] = -one();
        ineqs.push(Constraint::new(normal, zero()));
    }
    let mut eqs = Vec::with_capacity(d + 1);
    eqs.push(Constraint::new(vec![one(); n], one()));
    for k in 0..d {
        let normal: RationalVector = others.iter().map(|q| q[k].clone()).collect();
        if normal.iter().all(Zero::is_zero) {
            if p[k].is_zero() {
                continue;
            }
            return Ok(false);
        }
        eqs.push(Constraint::new(normal, p[k].clone()));
    }
    let h = HRep::new(n, ineqs, eqs)?;
    let status = solve_lp(&vec![zero(); n], Sense::Max, &h)?.status();
    Ok(status == LpStatus::Optimal)
}

pub fn affine_dimension(points: &[RationalVector]) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    Ok(linalg::affine_dimension(points))
}
