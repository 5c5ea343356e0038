use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::ratgeo::linalg;
use crate::ratgeo::rational::{int_vector, one, serde_vector, sub, zero, Rational, RationalVector};
use crate::ratgeo::{facet_enumeration, vertex_enumeration, HRep, VRep};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Polytopal { v: VRep, h: HRep },
    /// Unit ball in three dimensions; the qubit.
    Ball3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    label: String,
    kind: SpaceKind,
    parts: Option<(String, String)>,
}

impl StateSpace {
    /// Polytope given by its vertices; the H-representation is derived.
    pub fn from_vrep(label: impl Into<String>, v: VRep) -> Result<Self> {
        let h = facet_enumeration(&v)?;
        Ok(Self { label: label.into(), kind: SpaceKind::Polytopal { v, h }, parts: None })
    }

    /// Polytope given by constraints; the vertices are enumerated.
    pub fn from_hrep(label: impl Into<String>, h: HRep) -> Result<Self> {
        let v = vertex_enumeration(&h)?;
        Ok(Self { label: label.into(), kind: SpaceKind::Polytopal { v, h }, parts: None })
    }

    /// Both representations supplied; they must describe the same body.
    pub fn from_representations(label: impl Into<String>, v: VRep, h: HRep) -> Result<Self> {
        if vertex_enumeration(&h)? != v {
            return Err(Error::Input("V- and H-representation describe different polytopes".into()));
        }
        Ok(Self { label: label.into(), kind: SpaceKind::Polytopal { v, h }, parts: None })
    }

    /// Marks this space as the composite of two named subsystems.
    pub fn with_parts(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.parts = Some((a.into(), b.into()));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn parts(&self) -> Option<(&str, &str)> {
        self.parts.as_ref().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn is_polytopal(&self) -> bool {
        matches!(self.kind, SpaceKind::Polytopal { .. })
    }

    pub fn polytope(&self) -> Result<(&VRep, &HRep)> {
        match &self.kind {
            SpaceKind::Polytopal { v, h } => Ok((v, h)),
            SpaceKind::Ball3 => {
                Err(Error::Unsupported(format!("{} is not a polytopal state space", self.label)))
            }
        }
    }

    pub fn vrep(&self) -> Result<&VRep> {
        self.polytope().map(|(v, _)| v)
    }

    pub fn hrep(&self) -> Result<&HRep> {
        self.polytope().map(|(_, h)| h)
    }

    /// Dimension of the embedding vector space.
    pub fn ambient_dim(&self) -> usize {
        match &self.kind {
            SpaceKind::Polytopal { v, .. } => v.ambient_dim(),
            SpaceKind::Ball3 => 3,
        }
    }

    pub fn affine_dimension(&self) -> usize {
        match &self.kind {
            SpaceKind::Polytopal { v, .. } => v.affine_dimension(),
            SpaceKind::Ball3 => 3,
        }
    }

    /// Dimension of the linear span of the state cone (affine dimension + 1).
    pub fn linear_dimension(&self) -> usize {
        self.affine_dimension() + 1
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        match &self.kind {
            SpaceKind::Polytopal { h, .. } => h.contains(x),
            SpaceKind::Ball3 => {
                x.len() == 3 && x.iter().fold(zero(), |acc, c| acc + c * c) <= one()
            }
        }
    }
}

/// The four pure gbit states in the order ω1 = (0,1), ω2 = (1,1),
/// ω3 = (1,0), ω4 = (0,0). Coordinates are `(p(↑|0), p(↑|1))`.
pub fn gbit_pure_states() -> [RationalVector; 4] {
    [int_vector(&[0, 1]), int_vector(&[1, 1]), int_vector(&[1, 0]), int_vector(&[0, 0])]
}

/// The unit square.
pub fn make_gbit() -> StateSpace {
    let v = VRep::new(2, gbit_pure_states().to_vec()).expect("square corners are extreme");
    StateSpace::from_vrep("gbit", v).expect("square has a facet description")
}

/// Probability vectors with `n` entries: the standard `(n-1)`-simplex.
pub fn make_classical(n: usize) -> Result<StateSpace> {
    if n < 1 {
        return Err(Error::Input("classical system needs at least one outcome".into()));
    }
    let points = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one() } else { zero() }).collect())
        .collect();
    StateSpace::from_vrep(format!("classical-{n}"), VRep::new(n, points)?)
}

pub fn make_ball3() -> StateSpace {
    StateSpace { label: "ball3".into(), kind: SpaceKind::Ball3, parts: None }
}

/// A convex decomposition `s = Σ weights[i] · vertex[vertices[i]]` with all
/// weights strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(with = "serde_vector")]
    pub weights: RationalVector,
    pub vertices: Vec<usize>,
}

/// All decompositions of `s` into affinely independent sets of pure states.
///
/// Every convex decomposition of `s` refines to one of these, so the state
/// has a unique decomposition exactly when a single one is returned. The
/// search runs over subsets of the vertices of the smallest face containing
/// `s` and is exponential in that face's vertex count.
pub fn decompose_state(s: &[Rational], space: &StateSpace) -> Result<Vec<Decomposition>> {
    decompose_state_limited(s, space, None)
}

/// As [`decompose_state`], stopping after `limit` decompositions.
pub fn decompose_state_limited(
    s: &[Rational],
    space: &StateSpace,
    limit: Option<usize>,
) -> Result<Vec<Decomposition>> {
    let (v, h) = space.polytope()?;
    check_dim(v.ambient_dim(), s.len())?;
    if !h.contains(s) {
        return Err(Error::Input("point lies outside the state space".into()));
    }
    let active = h.active_set(s);
    let face: Vec<usize> = (0..v.len())
        .filter(|&i| active.iter().all(|&k| h.inequalities()[k].slack(&v.vertices()[i]).is_zero()))
        .collect();
    let face_points: Vec<RationalVector> = face.iter().map(|&i| v.vertices()[i].clone()).collect();
    let max_size = linalg::affine_dimension(&face_points) + 1;

    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search(s, v.vertices(), &face, 0, max_size, &mut chosen, &mut out, limit);
    out.sort_by(|a, b| (a.vertices.len(), &a.vertices).cmp(&(b.vertices.len(), &b.vertices)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    s: &[Rational],
    vertices: &[RationalVector],
    face: &[usize],
    start: usize,
    max_size: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Decomposition>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    if !chosen.is_empty() {
        if let Some(weights) = barycentric(s, vertices, chosen) {
            if weights.iter().all(Signed::is_positive) {
                out.push(Decomposition { weights, vertices: chosen.clone() });
            }
        }
    }
    if chosen.len() == max_size {
        return;
    }
    for pos in start..face.len() {
        let candidate = face[pos];
        chosen.push(candidate);
        let pts: Vec<RationalVector> = chosen.iter().map(|&i| vertices[i].clone()).collect();
        if linalg::affine_dimension(&pts) + 1 == chosen.len() {
            search(s, vertices, face, pos + 1, max_size, chosen, out, limit);
        }
        chosen.pop();
    }
}

/// Weights expressing `s` in the affinely independent set `support`, if `s`
/// lies in its affine hull.
fn barycentric(s: &[Rational], vertices: &[RationalVector], support: &[usize]) -> Option<RationalVector> {
    let base = &vertices[support[0]];
    let cols: Vec<RationalVector> = support[1..].iter().map(|&i| sub(&vertices[i], base)).collect();
    let target = sub(s, base);
    let rows = linalg::transpose(&cols, s.len());
    let tail = linalg::solve(&rows, &target, cols.len())?;
    let first = tail.iter().fold(one(), |acc, w| acc - w);
    let mut weights = vec![first];
    weights.extend(tail);
    Some(weights)
}
