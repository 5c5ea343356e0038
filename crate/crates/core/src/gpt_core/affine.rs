use serde::{Deserialize, Serialize};

use super::space::StateSpace;
use crate::error::{check_dim, Error, Result};
use crate::ratgeo::linalg::{self, Matrix};
use crate::ratgeo::rational::{add, serde_matrix, serde_vector, zero, Rational, RationalVector};

/// `x ↦ matrix · x + shift` on the embedding space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "serde_matrix")]
    pub matrix: Matrix,
    #[serde(with = "serde_vector")]
    pub shift: RationalVector,
}

impl AffineMap {
    pub fn new(matrix: Matrix, shift: RationalVector) -> Result<Self> {
        let d = shift.len();
        check_dim(d, matrix.len())?;
        for row in &matrix {
            check_dim(d, row.len())?;
        }
        if d == 0 {
            return Err(Error::Input("affine map on a zero-dimensional space".into()));
        }
        Ok(Self { matrix, shift })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: linalg::identity(dim), shift: vec![zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, x: &[Rational]) -> RationalVector {
        add(&linalg::mat_vec(&self.matrix, x), &self.shift)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            matrix: linalg::mat_mul(&self.matrix, &other.matrix),
            shift: self.apply(&other.shift),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = linalg::inverse(&self.matrix)?;
        let shift = linalg::mat_vec(&inv, &self.shift).into_iter().map(|x| -x).collect();
        Some(AffineMap { matrix: inv, shift })
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity(self.dim())
    }
}

/// Whether `t` is an invertible affine map permuting the pure states of
/// `space`, hence mapping the polytope onto itself.
pub fn is_reversible_transformation(t: &AffineMap, space: &StateSpace) -> Result<bool> {
    let v = space.vrep()?;
    check_dim(v.ambient_dim(), t.dim())?;
    if linalg::inverse(&t.matrix).is_none() {
        return Ok(false);
    }
    Ok(vertex_permutation(t, space)?.is_some())
}

/// The permutation `π` of canonical vertex indices with `t(v_i) = v_π(i)`, if
/// `t` maps the vertex set bijectively onto itself.
pub fn vertex_permutation(t: &AffineMap, space: &StateSpace) -> Result<Option<Vec<usize>>> {
    let v = space.vrep()?;
    check_dim(v.ambient_dim(), t.dim())?;
    let mut perm = Vec::with_capacity(v.len());
    let mut seen = vec![false; v.len()];
    for x in v.vertices() {
        match v.index_of(&t.apply(x)) {
            Some(j) if !seen[j] => {
                seen[j] = true;
                perm.push(j);
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(perm))
}
