//! Double description method and the two representation conversions built
//! on it.
//!
//! Both conversions reduce to one primitive: the extreme rays of a pointed
//! cone `{y : M y >= 0}`. Vertices of a bounded polytope are the rays of its
//! homogenization; facets of a point set are the rays of the cone of valid
//! inequalities.

use num_traits::{Signed, Zero};

use super::linalg::{self, Matrix};
use super::polytope::{Constraint, HRep, VRep};
use super::rational::{dot, normalize_leading, one, scale, sub, zero, Rational, RationalVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    dir: RationalVector,
    zeros: BitSet,
}

/// Extreme rays of the pointed cone `{y in Q^n : row · y >= 0 for all rows}`,
/// each scaled so its first nonzero entry is `±1`. Rows are inserted in index
/// order. Returns `None` if the cone is not pointed.
pub(crate) fn extreme_rays(rows: &[RationalVector], n: usize) -> Option<Vec<RationalVector>> {
    let initial = linalg::independent_rows(rows);
    if initial.len() < n {
        return None;
    }
    let basis: Matrix = initial.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&basis).expect("independent rows form an invertible matrix");
    let mut rays: Vec<Ray> = (0..n)
        .map(|j| {
            let dir: RationalVector = inv.iter().map(|row| row[j].clone()).collect();
            let mut zeros = BitSet::new(rows.len());
            for (k, &i) in initial.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            Ray { dir: normalize_leading(&dir), zeros }
        })
        .collect();

    for (idx, row) in rows.iter().enumerate() {
        if initial.contains(&idx) {
            continue;
        }
        let values: Vec<Rational> = rays.iter().map(|r| dot(row, &r.dir)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.zeros.insert(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.count() + 2 < n {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(r, ray)| {
                    r != p && r != q && ray.zeros.is_superset(&common)
                });
                if blocked {
                    continue;
                }
                let dir: RationalVector = scale(&rays[q].dir, &values[p])
                    .iter()
                    .zip(scale(&rays[p].dir, &values[q]))
                    .map(|(a, b)| a - b)
                    .collect();
                let mut zeros = common;
                zeros.insert(idx);
                fresh.push(Ray { dir: normalize_leading(&dir), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut ray, v) in rays.into_iter().zip(&values) {
            if v.is_zero() {
                ray.zeros.insert(idx);
                next.push(ray);
            } else if v.is_positive() {
                next.push(ray);
            }
        }
        next.extend(fresh);
        rays = next;
    }
    Some(rays.into_iter().map(|r| r.dir).collect())
}

/// Affine parametrization `x = origin + Σ t_i dirs_i` of the solution set of
/// the equalities of `h`.
fn equality_chart(h: &HRep) -> (RationalVector, Matrix) {
    let d = h.ambient_dim();
    if h.equalities().is_empty() {
        return (vec![zero(); d], linalg::identity(d));
    }
    let a: Matrix = h.equalities().iter().map(|c| c.normal.clone()).collect();
    let b: RationalVector = h.equalities().iter().map(|c| c.offset.clone()).collect();
    let origin = linalg::solve(&a, &b, d).unwrap_or_else(|| vec![zero(); d]);
    (origin, linalg::nullspace(&a, d))
}

/// Exact vertex list of a bounded nonempty polytope.
pub fn vertex_enumeration(h: &HRep) -> Result<VRep> {
    h.check_bounded_nonempty()?;
    let d = h.ambient_dim();
    let (origin, dirs) = equality_chart(h);
    let k = dirs.len();
    if k == 0 {
        return Ok(VRep::from_extreme_points(d, vec![origin]));
    }
    // cone over the polytope in chart coordinates y = (t0, t)
    let mut rows: Vec<RationalVector> = Vec::with_capacity(h.inequalities().len() + 1);
    let mut lift = vec![zero(); k + 1];
    lift[0] = one();
    rows.push(lift);
    for c in h.inequalities() {
        let mut row = Vec::with_capacity(k + 1);
        row.push(c.slack(&origin));
        row.extend(dirs.iter().map(|dir| -dot(&c.normal, dir)));
        rows.push(row);
    }
    let rays = extreme_rays(&rows, k + 1).expect("cone over a bounded polytope is pointed");
    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        assert!(ray[0].is_positive(), "bounded polytope produced a ray at infinity");
        let t0 = ray[0].clone();
        let mut x = origin.clone();
        for (ti, dir) in ray[1..].iter().zip(&dirs) {
            if ti.is_zero() {
                continue;
            }
            let w = ti / &t0;
            for (xi, di) in x.iter_mut().zip(dir) {
                *xi += &w * di;
            }
        }
        assert!(h.is_vertex(&x), "enumerated point failed the extremality check");
        vertices.push(x);
    }
    Ok(VRep::from_extreme_points(d, vertices))
}

/// Irredundant facet description of `conv(v)` relative to its affine hull,
/// together with a canonical (reduced echelon) system of hull equalities.
pub fn facet_enumeration(v: &VRep) -> Result<HRep> {
    let d = v.ambient_dim();
    let points = v.vertices();
    let base = points.first().ok_or(Error::Empty)?;

    // hull equalities: (c, c0) with c · p = c0 for every p
    let homogenized: Matrix = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(-one());
            r
        })
        .collect();
    let null = linalg::nullspace(&homogenized, d + 1);
    let (reduced, _) = linalg::rref(&null, d + 1);
    let equalities: Vec<Constraint> = reduced
        .into_iter()
        .map(|mut row| {
            let offset = row.pop().expect("row has offset column");
            Constraint::new(row, offset)
        })
        .collect();

    let diffs: Matrix = points.iter().map(|p| sub(p, base)).collect();
    let chosen = linalg::independent_rows(&diffs);
    let k = chosen.len();
    if k == 0 {
        return HRep::new(d, Vec::new(), equalities);
    }
    let basis: Matrix = chosen.iter().map(|&i| diffs[i].clone()).collect();
    let (_, pivots) = linalg::rref(&basis, d);
    // local coordinates: t = chart · (x - base)[pivots]
    let square: Matrix = pivots.iter().map(|&c| basis.iter().map(|b| b[c].clone()).collect()).collect();
    let chart = linalg::inverse(&square).expect("pivot columns of an independent basis");

    let rows: Matrix = diffs
        .iter()
        .map(|diff| {
            let local: RationalVector = pivots.iter().map(|&c| diff[c].clone()).collect();
            let mut row = vec![one()];
            row.extend(linalg::mat_vec(&chart, &local));
            row
        })
        .collect();
    let rays = extreme_rays(&rows, k + 1).expect("valid-inequality cone of a polytope is pointed");

    let mut inequalities: Vec<Constraint> = rays
        .into_iter()
        .map(|ray| {
            // c0 + c · t >= 0  <=>  (-cᵀ chart) · (x - base)[pivots] <= c0
            let c = &ray[1..];
            let mut normal = vec![zero(); d];
            for (col, &p) in pivots.iter().enumerate() {
                let g: Rational = (0..k).fold(zero(), |acc, i| acc - &c[i] * &chart[i][col]);
                normal[p] = g;
            }
            let offset = &ray[0] + dot(&normal, base);
            normalize_constraint(Constraint::new(normal, offset))
        })
        .collect();
    inequalities.sort();
    inequalities.dedup();
    HRep::new(d, inequalities, equalities)
}

fn normalize_constraint(c: Constraint) -> Constraint {
    match c.normal.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            Constraint::new(scale(&c.normal, &s), &c.offset * &s)
        }
        None => c,
    }
}
