//! Independent oracles shared by the integration and acceptance tests. Only
//! plain `BigRational` arithmetic is used here, none of the library's
//! linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use gpt_workbench::ratgeo::{Constraint, HRep};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(n.into(), d.into())
}

fn random_coeff<R: Rng>(rng: &mut R) -> Q {
    q(rng.random_range(-10..=10), rng.random_range(1..=10))
}

/// Box `[-lo, hi]^d` with random rational bounds in (0, 10], plus up to
/// `10 - 2d` further random inequalities, and sometimes one equality.
/// Offsets of the extras are nonnegative about half the time so most
/// instances stay nonempty.
pub fn random_hrep<R: Rng>(rng: &mut R, d: usize) -> HRep {
    let mut ineqs = Vec::new();
    for i in 0..d {
        for sign in [1, -1] {
            let mut normal = vec![Q::zero(); d];
            normal[i] = q(sign, 1);
            let bound = q(rng.random_range(1..=10), rng.random_range(1..=10));
            ineqs.push(Constraint::new(normal, bound));
        }
    }
    let extras = rng.random_range(0..=10 - 2 * d);
    for _ in 0..extras {
        let normal: Vec<Q> = (0..d).map(|_| random_coeff(rng)).collect();
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let mut offset = random_coeff(rng);
        if rng.random_bool(0.5) {
            offset = offset.abs();
        }
        ineqs.push(Constraint::new(normal, offset));
    }
    let mut eqs = Vec::new();
    if d >= 2 && rng.random_bool(0.2) {
        let normal: Vec<Q> = (0..d).map(|_| random_coeff(rng)).collect();
        if !normal.iter().all(Zero::is_zero) {
            eqs.push(Constraint::new(normal, q(rng.random_range(-2..=2), rng.random_range(1..=5))));
        }
    }
    HRep::new(d, ineqs, eqs).expect("random constraints are well formed")
}

/// Unique solution of the square system `rows · x = rhs`, if any.
pub fn solve_square(rows: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn satisfies(h: &HRep, x: &[Q]) -> bool {
    let dot = |a: &[Q], b: &[Q]| a.iter().zip(b).fold(Q::zero(), |acc, (p, q)| acc + p * q);
    h.inequalities().iter().all(|c| dot(&c.normal, x) <= c.offset)
        && h.equalities().iter().all(|c| dot(&c.normal, x) == c.offset)
}

/// Vertices by brute force: every choice of `d` hyperplanes (all equalities
/// plus inequality hyperplanes) with a unique intersection point that
/// satisfies every constraint. Sorted, deduplicated.
pub fn oracle_vertices(h: &HRep) -> Vec<Vec<Q>> {
    let d = h.ambient_dim();
    let eqs = h.equalities();
    let ineqs = h.inequalities();
    let mut out = Vec::new();
    if eqs.len() > d {
        return out;
    }
    let k = d - eqs.len();
    for subset in combinations(ineqs.len(), k) {
        let chosen: Vec<&Constraint> = eqs.iter().chain(subset.iter().map(|&i| &ineqs[i])).collect();
        let rows: Vec<Vec<Q>> = chosen.iter().map(|c| c.normal.clone()).collect();
        let rhs: Vec<Q> = chosen.iter().map(|c| c.offset.clone()).collect();
        if let Some(x) = solve_square(&rows, &rhs) {
            if satisfies(h, &x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub mod qubit {
    use nalgebra::{Complex, Matrix2};
    use rand::Rng;

    pub type C = Complex<f64>;

    pub fn to_na(m: &[[C; 2]; 2]) -> Matrix2<C> {
        Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn from_na(m: &Matrix2<C>) -> [[C; 2]; 2] {
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
    }

    /// Density matrix built entry by entry from the coordinate convention
    /// `ρ = ½ (1 + a1 σz + a2 σx + a3 σy)`.
    pub fn density(a: [f64; 3]) -> Matrix2<C> {
        let sz = Matrix2::new(C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0));
        let sx = Matrix2::new(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0));
        let sy = Matrix2::new(C::new(0.0, 0.0), C::new(0.0, -1.0), C::new(0.0, 1.0), C::new(0.0, 0.0));
        (Matrix2::identity() + sz * C::new(a[0], 0.0) + sx * C::new(a[1], 0.0) + sy * C::new(a[2], 0.0))
            * C::new(0.5, 0.0)
    }

    /// Inverse of [`density`]: `a1 = ρ00 − ρ11`, `a2 = 2 Re ρ10`, `a3 = 2 Im ρ10`.
    pub fn bloch_vector(rho: &Matrix2<C>) -> [f64; 3] {
        [(rho[(0, 0)] - rho[(1, 1)]).re, 2.0 * rho[(1, 0)].re, 2.0 * rho[(1, 0)].im]
    }

    /// Haar-ish random SU(2) element times a random global phase.
    pub fn random_unitary<R: Rng>(rng: &mut R) -> Matrix2<C> {
        let mut v = [0.0f64; 4];
        loop {
            for x in v.iter_mut() {
                *x = rng.random_range(-1.0..1.0);
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                v.iter_mut().for_each(|x| *x /= n);
                break;
            }
        }
        let a = C::new(v[0], v[1]);
        let b = C::new(v[2], v[3]);
        let phase = C::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        Matrix2::new(a, -b.conj(), b, a.conj()) * phase
    }

    pub fn random_ball_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
        loop {
            let a = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            if a.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
                return a;
            }
        }
    }
}
