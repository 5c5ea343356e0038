//! The qubit in floating point: Bloch vectors, density matrices and the
//! rotation induced by a unitary.
//!
//! Coordinates follow `ρ = ½ [[1 + a1, a2 − i a3], [a2 + i a3, 1 − a1]]`,
//! i.e. `ρ = ½ (1 + a1 σz + a2 σx + a3 σy)`.

pub use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Complex2x2 = [[Complex64; 2]; 2];
pub type Rotation3 = [[f64; 3]; 3];

pub const STATE_TOLERANCE: f64 = 1e-12;
pub const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochState {
    a: [f64; 3],
}

impl BlochState {
    pub fn new(a: [f64; 3]) -> Result<Self> {
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("Bloch vector has non-finite entries".into()));
        }
        let norm = norm3(&a);
        if norm > 1.0 + STATE_TOLERANCE {
            return Err(Error::Input(format!("|a| = {norm} exceeds 1; not a state")));
        }
        Ok(Self { a })
    }

    pub fn vector(&self) -> [f64; 3] {
        self.a
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.a)
    }

    /// `½ (1 ± |a|)`, larger first.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.norm();
        [0.5 * (1.0 + r), 0.5 * (1.0 - r)]
    }
}

pub fn norm3(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Pauli matrices in Bloch-coordinate order: σz, σx, σy.
pub fn bloch_basis() -> [Complex2x2; 3] {
    let o = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    [[[r(1.0), o], [o, r(-1.0)]], [[o, r(1.0)], [r(1.0), o]], [[o, i(-1.0)], [i(1.0), o]]]
}

pub fn bloch_density(state: &BlochState) -> Complex2x2 {
    let [a1, a2, a3] = state.a;
    [
        [Complex64::new(0.5 * (1.0 + a1), 0.0), Complex64::new(0.5 * a2, -0.5 * a3)],
        [Complex64::new(0.5 * a2, 0.5 * a3), Complex64::new(0.5 * (1.0 - a1), 0.0)],
    ]
}

pub fn mul2(a: &Complex2x2, b: &Complex2x2) -> Complex2x2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn dagger2(a: &Complex2x2) -> Complex2x2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn max_abs_diff2(a: &Complex2x2, b: &Complex2x2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn is_unitary(u: &Complex2x2, tol: f64) -> bool {
    let id = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
    u.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
        && max_abs_diff2(&mul2(u, &dagger2(u)), &id) <= tol
}

/// The rotation `R` with `ρ(R a) = U ρ(a) U†`, read off from the conjugated
/// Pauli basis: `R_jk = ½ tr(σ_j U σ_k U†)`.
pub fn unitary_to_rotation(u: &Complex2x2) -> Result<Rotation3> {
    if !is_unitary(u, UNITARY_TOLERANCE) {
        return Err(Error::Input("matrix is not unitary".into()));
    }
    let basis = bloch_basis();
    let ud = dagger2(u);
    let mut r = [[0.0; 3]; 3];
    for k in 0..3 {
        let conj = mul2(&mul2(u, &basis[k]), &ud);
        for j in 0..3 {
            let prod = mul2(&basis[j], &conj);
            r[j][k] = 0.5 * (prod[0][0] + prod[1][1]).re;
        }
    }
    Ok(r)
}

pub fn apply3(r: &Rotation3, a: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = r[i][0] * a[0] + r[i][1] * a[1] + r[i][2] * a[2];
    }
    out
}

pub fn det3(r: &Rotation3) -> f64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// Rodrigues' formula for rotation by `angle` about the unit vector `axis`.
pub fn rotation_about(axis: &[f64; 3], angle: f64) -> Rotation3 {
    let [x, y, z] = *axis;
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

/// Row-major `[[re, im], ...]` as used on the wire.
pub fn complex_to_pairs(m: &Complex2x2) -> Vec<[f64; 2]> {
    m.iter().flatten().map(|z| [z.re, z.im]).collect()
}
