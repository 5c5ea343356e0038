//! Affine symmetry groups of polytopal state spaces, orbits, and the
//! reversibility questions built on them.
//!
//! Symmetries are found combinatorially first: images of an affine basis of
//! vertices are searched with pruning by vertex signatures (edge degree,
//! number of incident facets) and pairwise invariants (adjacency, shared
//! facets). Each complete assignment determines at most one affine map,
//! which is then checked exactly on every vertex.
//!
//! An affine map is only pinned down on the affine hull of the polytope. Off
//! the hull we extend by fixing a canonical complement of coordinate
//! directions, so each vertex permutation corresponds to exactly one matrix
//! and group operations on matrices agree with those on permutations.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpt_core::bloch::{apply3, det3, norm3, rotation_about, BlochState, Rotation3};
use crate::gpt_core::{AffineMap, SpaceKind, StateSpace};
use crate::ratgeo::linalg::{self, Matrix};
use crate::ratgeo::rational::{dot, sub, Rational, RationalVector};
use crate::ratgeo::{facet_enumeration, vertex_adjacency, Graph, HRep, VRep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryElement {
    #[serde(flatten)]
    pub map: AffineMap,
    pub perm: Vec<usize>,
}

/// Elements sorted by induced vertex permutation; the identity comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    elements: Vec<SymmetryElement>,
    generators: Vec<usize>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SymmetryElement] {
        &self.elements
    }

    /// Indices into [`Self::elements`].
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn permutations(&self) -> impl Iterator<Item = &[usize]> {
        self.elements.iter().map(|e| e.perm.as_slice())
    }

    pub fn vertex_count(&self) -> usize {
        self.elements.first().map_or(0, |e| e.perm.len())
    }

    pub fn index_of_perm(&self, perm: &[usize]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.perm.as_slice().cmp(perm)).ok()
    }

    /// Identity, inverses and the full closure table, on permutations.
    pub fn satisfies_group_axioms(&self) -> bool {
        let n = self.vertex_count();
        let identity: Vec<usize> = (0..n).collect();
        if self.index_of_perm(&identity).is_none() {
            return false;
        }
        for g in self.permutations() {
            let mut inv = vec![0; n];
            for (i, &j) in g.iter().enumerate() {
                inv[j] = i;
            }
            if self.index_of_perm(&inv).is_none() {
                return false;
            }
            for h in self.permutations() {
                if self.index_of_perm(&compose_perms(g, h)).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix products agree with permutation products, for every
    /// generator against every element.
    pub fn maps_compose_consistently(&self) -> bool {
        self.generators.iter().all(|&gi| {
            let g = &self.elements[gi];
            self.elements.iter().all(|h| {
                let product = g.map.compose(&h.map);
                match self.index_of_perm(&compose_perms(&g.perm, &h.perm)) {
                    Some(k) => self.elements[k].map == product,
                    None => false,
                }
            })
        })
    }
}

/// `(g ∘ h)(i) = g(h(i))`.
pub fn compose_perms(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&i| g[i]).collect()
}

impl Serialize for SymmetryGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

/// Combinatorial data shared by symmetry search and invariant checks.
struct Structure {
    graph: Graph,
    incidence: Vec<Vec<usize>>,
}

impl Structure {
    fn new(v: &VRep) -> Result<Self> {
        let facets = facet_enumeration(v)?;
        let graph = vertex_adjacency(v, &facets)?;
        let incidence = v.vertices().iter().map(|x| facets.active_set(x)).collect();
        Ok(Self { graph, incidence })
    }

    fn signature(&self, i: usize) -> (usize, usize) {
        (self.graph.degree(i), self.incidence[i].len())
    }

    fn pair(&self, i: usize, j: usize) -> (bool, usize) {
        let shared = self.incidence[i].iter().filter(|f| self.incidence[j].binary_search(f).is_ok()).count();
        (self.graph.are_adjacent(i, j), shared)
    }
}

pub fn affine_automorphisms(space: &StateSpace) -> Result<SymmetryGroup> {
    let v = match space.kind() {
        SpaceKind::Polytopal { v, .. } => v,
        SpaceKind::Ball3 => {
            return Err(Error::Unsupported(
                "the Bloch ball has a continuous symmetry group; see check_continuous_reversibility".into(),
            ))
        }
    };
    let d = v.ambient_dim();
    let n = v.len();
    let points = v.vertices();

    let basis = affine_basis(points);
    let k = basis.len() - 1;
    let directions: Matrix = basis[1..].iter().map(|&i| sub(&points[i], &points[basis[0]])).collect();
    let complement = complement_directions(&directions, d);
    let frame = columns_to_matrix(directions.iter().chain(&complement), d);
    let frame_inv = linalg::inverse(&frame).expect("basis directions plus complement span the space");

    let structure = if n > 1 { Some(Structure::new(v)?) } else { None };
    let mut elements = Vec::new();
    let mut assignment: Vec<usize> = Vec::with_capacity(k + 1);
    let mut used = vec![false; n];
    let mut on_complete = |images: &[usize]| {
        let image_dirs: Matrix = images[1..].iter().map(|&i| sub(&points[i], &points[images[0]])).collect();
        let target = columns_to_matrix(image_dirs.iter().chain(&complement), d);
        let matrix = linalg::mat_mul(&target, &frame_inv);
        let moved = linalg::mat_vec(&matrix, &points[basis[0]]);
        let shift = sub(&points[images[0]], &moved);
        let map = AffineMap { matrix, shift };
        if let Some(perm) = permutation_of(&map, v) {
            elements.push(SymmetryElement { map, perm });
        }
    };
    search(&basis, structure.as_ref(), &mut assignment, &mut used, &mut on_complete);

    elements.sort_by(|a, b| a.perm.cmp(&b.perm));
    let generators = generating_set(&elements);
    Ok(SymmetryGroup { elements, generators })
}

fn search(
    basis: &[usize],
    structure: Option<&Structure>,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    on_complete: &mut dyn FnMut(&[usize]),
) {
    let depth = assignment.len();
    if depth == basis.len() {
        on_complete(assignment);
        return;
    }
    let src = basis[depth];
    for cand in 0..used.len() {
        if used[cand] {
            continue;
        }
        if let Some(s) = structure {
            if s.signature(cand) != s.signature(src) {
                continue;
            }
            let consistent =
                (0..depth).all(|prev| s.pair(basis[prev], src) == s.pair(assignment[prev], cand));
            if !consistent {
                continue;
            }
        }
        used[cand] = true;
        assignment.push(cand);
        search(basis, structure, assignment, used, on_complete);
        assignment.pop();
        used[cand] = false;
    }
}

/// Vertex indices forming an affine basis of the hull, chosen greedily.
fn affine_basis(points: &[RationalVector]) -> Vec<usize> {
    let mut basis = vec![0];
    let mut dirs: Matrix = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        dirs.push(sub(p, &points[0]));
        if linalg::rank(&dirs) == dirs.len() {
            basis.push(i);
        } else {
            dirs.pop();
        }
    }
    basis
}

/// Standard basis vectors completing `dirs` to a basis, chosen greedily.
fn complement_directions(dirs: &[RationalVector], d: usize) -> Matrix {
    let mut all: Matrix = dirs.to_vec();
    let mut out = Vec::new();
    for j in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[j] = num_traits::One::one();
        all.push(e.clone());
        if linalg::rank(&all) == all.len() {
            out.push(e);
        } else {
            all.pop();
        }
    }
    out
}

fn columns_to_matrix<'a>(cols: impl Iterator<Item = &'a RationalVector>, d: usize) -> Matrix {
    let cols: Vec<&RationalVector> = cols.collect();
    (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

fn permutation_of(map: &AffineMap, v: &VRep) -> Option<Vec<usize>> {
    let mut seen = vec![false; v.len()];
    let mut perm = Vec::with_capacity(v.len());
    for x in v.vertices() {
        let j = v.index_of(&map.apply(x))?;
        if seen[j] {
            return None;
        }
        seen[j] = true;
        perm.push(j);
    }
    Some(perm)
}

fn generating_set(elements: &[SymmetryElement]) -> Vec<usize> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let n = first.perm.len();
    let mut span: std::collections::BTreeSet<Vec<usize>> = [(0..n).collect()].into();
    let mut generators = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if span.contains(&e.perm) {
            continue;
        }
        generators.push(i);
        // closure of span under the enlarged generator set
        let gens: Vec<&Vec<usize>> = generators.iter().map(|&g| &elements[g].perm).collect();
        let mut frontier: Vec<Vec<usize>> = span.iter().cloned().collect();
        while let Some(p) = frontier.pop() {
            for g in &gens {
                let q = compose_perms(g, &p);
                if span.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
    }
    generators
}

/// Every inequality of `h`, pulled back through `g`, agrees on the vertices
/// with some inequality of `h` (up to positive scaling). Independent of the
/// vertex-permutation test.
pub fn preserves_hrep(g: &AffineMap, v: &VRep, h: &HRep) -> bool {
    let Some(inv) = g.inverse() else {
        return false;
    };
    let slack_profile = |normal: &[Rational], offset: &Rational| -> RationalVector {
        let s: RationalVector = v.vertices().iter().map(|x| offset - dot(normal, x)).collect();
        crate::ratgeo::rational::normalize_leading(&s)
    };
    let mut own: Vec<RationalVector> =
        h.inequalities().iter().map(|c| slack_profile(&c.normal, &c.offset)).collect();
    own.sort();
    // a·x <= b on P  <=>  (M⁻ᵀ a)·y <= b + a·M⁻¹ s on g(P)
    let mut pulled: Vec<RationalVector> = h
        .inequalities()
        .iter()
        .map(|c| {
            let normal = linalg::mat_vec(&linalg::transpose(&inv.matrix, g.dim()), &c.normal);
            let offset = &c.offset - dot(&c.normal, &inv.shift);
            slack_profile(&normal, &offset)
        })
        .collect();
    pulled.sort();
    own == pulled
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn class_of(&self, vertex: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&vertex))
    }
}

pub fn orbits(g: &SymmetryGroup, space: &StateSpace) -> Result<OrbitPartition> {
    let v = space.vrep()?;
    let n = v.len();
    if g.vertex_count() != n {
        return Err(Error::Input(format!(
            "group acts on {} vertices but {} has {n}",
            g.vertex_count(),
            space.label()
        )));
    }
    for &gi in g.generators() {
        let e = &g.elements()[gi];
        if e.map.dim() != v.ambient_dim() || permutation_of(&e.map, v).as_ref() != Some(&e.perm) {
            return Err(Error::Input(format!("group is not a symmetry group of {}", space.label())));
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if class[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members: Vec<usize> = g.permutations().map(|p| p[start]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class[m] = id;
        }
        classes.push(members);
    }
    Ok(OrbitPartition { classes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ReversibilityVerdict {
    Pass,
    /// Two pure states that no symmetry connects.
    Fail { witness: (usize, usize) },
}

pub fn check_reversibility(space: &StateSpace) -> Result<ReversibilityVerdict> {
    let g = affine_automorphisms(space)?;
    let partition = orbits(&g, space)?;
    Ok(match partition.classes.as_slice() {
        [_] | [] => ReversibilityVerdict::Pass,
        [first, second, ..] => ReversibilityVerdict::Fail { witness: (first[0], second[0]) },
    })
}

/// `G(t)`: rotation by `t · angle` about `axis`, `t ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RotationPath {
    pub axis: [f64; 3],
    pub angle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathCheck {
    pub samples: usize,
    pub initial_error: f64,
    pub endpoint_error: f64,
    pub orthogonality_error: f64,
    pub determinant_error: f64,
    /// Largest `‖G(t_{i+1}) − G(t_i)‖_max / (t_{i+1} − t_i)`; bounded by the
    /// rotation angle for a continuous path.
    pub max_step_rate: f64,
}

impl PathCheck {
    pub fn passes(&self, tol: f64, angle: f64) -> bool {
        self.initial_error < tol
            && self.endpoint_error < tol
            && self.orthogonality_error < tol
            && self.determinant_error < tol
            && self.max_step_rate <= angle.abs() + tol
    }
}

impl RotationPath {
    /// Rotation carrying `from` onto `to` about their common normal. Both
    /// vectors must have the same length.
    pub fn between(from: &BlochState, to: &BlochState) -> Result<Self> {
        let (a, b) = (from.vector(), to.vector());
        let (na, nb) = (norm3(&a), norm3(&b));
        if (na - nb).abs() > 1e-9 {
            return Err(Error::Input("rotations preserve |a|; endpoints differ in length".into()));
        }
        if na < 1e-12 {
            return Ok(Self { axis: [0.0, 0.0, 1.0], angle: 0.0 });
        }
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let sin = norm3(&cross);
        let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        if sin < 1e-12 * na * nb {
            if cos > 0.0 {
                return Ok(Self { axis: [0.0, 0.0, 1.0], angle: 0.0 });
            }
            // antipodal: any axis orthogonal to a
            let pick = if a[0].abs() < 0.9 * na { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let c = [a[1] * pick[2] - a[2] * pick[1], a[2] * pick[0] - a[0] * pick[2], a[0] * pick[1] - a[1] * pick[0]];
            let nc = norm3(&c);
            return Ok(Self { axis: [c[0] / nc, c[1] / nc, c[2] / nc], angle: std::f64::consts::PI });
        }
        Ok(Self { axis: [cross[0] / sin, cross[1] / sin, cross[2] / sin], angle: sin.atan2(cos) })
    }

    pub fn at(&self, t: f64) -> Rotation3 {
        rotation_about(&self.axis, t * self.angle)
    }

    pub fn is_constant(&self) -> bool {
        self.angle == 0.0
    }

    pub fn check(&self, from: &BlochState, to: &BlochState, samples: usize) -> PathCheck {
        let samples = samples.max(2);
        let id = rotation_about(&[0.0, 0.0, 1.0], 0.0);
        let max_diff = |p: &Rotation3, q: &Rotation3| {
            let mut m: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    m = m.max((p[i][j] - q[i][j]).abs());
                }
            }
            m
        };
        let end = apply3(&self.at(1.0), &from.vector());
        let target = to.vector();
        let endpoint_error = (0..3).map(|i| (end[i] - target[i]).abs()).fold(0.0, f64::max);
        let mut orthogonality_error: f64 = 0.0;
        let mut determinant_error: f64 = 0.0;
        let mut max_step_rate: f64 = 0.0;
        let mut prev = self.at(0.0);
        for s in 1..samples {
            let t = s as f64 / (samples - 1) as f64;
            let r = self.at(t);
            let mut rtr = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    rtr[i][j] = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                }
            }
            orthogonality_error = orthogonality_error.max(max_diff(&rtr, &id));
            determinant_error = determinant_error.max((det3(&r) - 1.0).abs());
            max_step_rate = max_step_rate.max(max_diff(&r, &prev) * (samples - 1) as f64);
            prev = r;
        }
        PathCheck {
            samples,
            initial_error: max_diff(&self.at(0.0), &id),
            endpoint_error,
            orthogonality_error,
            determinant_error,
            max_step_rate,
        }
    }
}

/// How continuous paths are produced for a space that passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathConstructor {
    /// Only one pure state: the constant identity path.
    ConstantIdentity,
    /// Great-circle rotations of the Bloch ball, see [`RotationPath::between`].
    BlochRotation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason")]
pub enum ContinuityFailure {
    /// A finite group is discrete, so the only continuous path through it
    /// starting at the identity is constant and cannot move any vertex.
    FiniteSymmetryGroup { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ContinuityVerdict {
    Pass { constructor: PathConstructor },
    Fail { failure: ContinuityFailure },
}

pub fn check_continuous_reversibility(space: &StateSpace) -> Result<ContinuityVerdict> {
    match space.kind() {
        SpaceKind::Ball3 => Ok(ContinuityVerdict::Pass { constructor: PathConstructor::BlochRotation }),
        SpaceKind::Polytopal { v, .. } if v.len() < 2 => {
            Ok(ContinuityVerdict::Pass { constructor: PathConstructor::ConstantIdentity })
        }
        SpaceKind::Polytopal { .. } => {
            let order = affine_automorphisms(space)?.order();
            Ok(ContinuityVerdict::Fail { failure: ContinuityFailure::FiniteSymmetryGroup { order } })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum InteractionVerdict {
    /// Symmetry `element` sends the locally preparable `vertex` to `image`,
    /// which is not locally preparable.
    Interacting { element: usize, vertex: usize, image: usize },
    NonInteracting,
}

pub fn check_interaction(space_ab: &StateSpace, product_vertices: &[usize]) -> Result<InteractionVerdict> {
    if space_ab.parts().is_none() {
        return Err(Error::Input(format!("{} is not a composite of two systems", space_ab.label())));
    }
    let n = space_ab.vrep()?.len();
    let mut covered = vec![false; n];
    for &i in product_vertices {
        if i >= n {
            return Err(Error::Input("vertex indices do not match the state space".into()));
        }
        covered[i] = true;
    }
    // bijections of the vertex set cannot leave it
    if covered.iter().all(|&c| c) {
        return Ok(InteractionVerdict::NonInteracting);
    }
    let group = affine_automorphisms(space_ab)?;
    check_interaction_with_group(space_ab, &group, product_vertices)
}

pub fn check_interaction_with_group(
    space_ab: &StateSpace,
    group: &SymmetryGroup,
    product_vertices: &[usize],
) -> Result<InteractionVerdict> {
    if space_ab.parts().is_none() {
        return Err(Error::Input(format!("{} is not a composite of two systems", space_ab.label())));
    }
    let n = space_ab.vrep()?.len();
    if group.vertex_count() != n || product_vertices.iter().any(|&i| i >= n) {
        return Err(Error::Input("vertex indices do not match the state space".into()));
    }
    let mut local = vec![false; n];
    for &i in product_vertices {
        local[i] = true;
    }
    for (element, e) in group.elements().iter().enumerate() {
        for &vertex in product_vertices {
            let image = e.perm[vertex];
            if !local[image] {
                return Ok(InteractionVerdict::Interacting { element, vertex, image });
            }
        }
    }
    Ok(InteractionVerdict::NonInteracting)
}
