//! Two gbits under the no-signalling composite: probability tables
//! `p(a,b|x,y)`, the constraint system, vertex classification, PR boxes and
//! CHSH.
//!
//! Outcomes are encoded ↑ = 0, ↓ = 1 and table entries are stored at index
//! `a + 2b + 4x + 8y`.

use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt_core::StateSpace;
use crate::ratgeo::linalg;
use crate::ratgeo::rational::{half, int, one, parse_vector, serde_vector, zero, Rational, RationalVector};
use crate::ratgeo::{Constraint, HRep};

pub const TABLE_LEN: usize = 16;

pub fn index(a: usize, b: usize, x: usize, y: usize) -> usize {
    a + 2 * b + 4 * x + 8 * y
}

fn bits() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..TABLE_LEN).map(|i| (i & 1, (i >> 1) & 1, (i >> 2) & 1, (i >> 3) & 1))
}

/// A violated no-signalling equality: the marginal of `party` for
/// `outcome` at `setting` differs between the other party's two settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignallingViolation {
    pub party: char,
    pub outcome: usize,
    pub setting: usize,
    #[serde(with = "serde_vector")]
    pub marginals: RationalVector,
}

impl fmt::Display for SignallingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let other = if self.party == 'A' { 'y' } else { 'x' };
        write!(
            f,
            "marginal of party {} for outcome {} at setting {} is {} for {other}=0 but {} for {other}=1",
            self.party, self.outcome, self.setting, self.marginals[0], self.marginals[1]
        )
    }
}

/// `p(a,b|x,y)`: nonnegative, normalized for every setting pair and
/// no-signalling.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProbabilityTable {
    p: RationalVector,
}

impl ProbabilityTable {
    pub fn new(p: RationalVector) -> Result<Self> {
        if p.len() != TABLE_LEN {
            return Err(Error::DimensionMismatch { expected: TABLE_LEN, got: p.len() });
        }
        if let Some(i) = p.iter().position(Signed::is_negative) {
            return Err(Error::Input(format!("entry {i} is negative")));
        }
        for x in 0..2 {
            for y in 0..2 {
                let total: Rational = (0..4).map(|ab| &p[index(ab & 1, ab >> 1, x, y)]).sum();
                if !total.is_one() {
                    return Err(Error::Input(format!("p(·,·|{x},{y}) sums to {total}, not 1")));
                }
            }
        }
        let t = Self { p };
        t.marginals()?;
        Ok(t)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.p
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.p[index(a, b, x, y)]
    }

    /// `E(x,y) = Σ_{a,b} (−1)^{a⊕b} p(a,b|x,y)`.
    pub fn correlator(&self, x: usize, y: usize) -> Rational {
        (0..4).fold(zero(), |acc, ab| {
            let (a, b) = (ab & 1, ab >> 1);
            let v = self.get(a, b, x, y);
            if a == b { acc + v } else { acc - v }
        })
    }

    /// Returns `(pA, pB)` with `pA[x][a] = p(a|x)` and `pB[y][b] = p(b|y)`.
    pub fn marginals(&self) -> Result<(Marginal, Marginal)> {
        marginals_of(&self.p)
    }
}

pub type Marginal = [[Rational; 2]; 2];

fn marginals_of(p: &[Rational]) -> Result<(Marginal, Marginal)> {
    let mut alice: Marginal = Default::default();
    let mut bob: Marginal = Default::default();
    for x in 0..2 {
        for a in 0..2 {
            let m: Vec<Rational> =
                (0..2).map(|y| &p[index(a, 0, x, y)] + &p[index(a, 1, x, y)]).collect();
            if m[0] != m[1] {
                return Err(Error::Signalling(SignallingViolation {
                    party: 'A',
                    outcome: a,
                    setting: x,
                    marginals: m,
                }));
            }
            alice[x][a] = m[0].clone();
        }
    }
    for y in 0..2 {
        for b in 0..2 {
            let m: Vec<Rational> =
                (0..2).map(|x| &p[index(0, b, x, y)] + &p[index(1, b, x, y)]).collect();
            if m[0] != m[1] {
                return Err(Error::Signalling(SignallingViolation {
                    party: 'B',
                    outcome: b,
                    setting: y,
                    marginals: m,
                }));
            }
            bob[y][b] = m[0].clone();
        }
    }
    Ok((alice, bob))
}

/// Marginals of a raw 16-entry table, reporting signalling as an error.
pub fn marginals(t: &[Rational]) -> Result<(Marginal, Marginal)> {
    if t.len() != TABLE_LEN {
        return Err(Error::DimensionMismatch { expected: TABLE_LEN, got: t.len() });
    }
    marginals_of(t)
}

#[derive(Serialize, Deserialize)]
pub struct TableJson {
    pub p: Vec<String>,
}

impl Serialize for ProbabilityTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson { p: self.p.iter().map(crate::ratgeo::rational::format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProbabilityTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TableJson::deserialize(d)?;
        let p = parse_vector(&j.p).map_err(serde::de::Error::custom)?;
        ProbabilityTable::new(p).map_err(serde::de::Error::custom)
    }
}

/// Nonnegativity, normalization and a rank-reduced set of no-signalling
/// equalities in the raw 16-dimensional embedding.
pub fn build_ns_hrep() -> HRep {
    let unit = |i: usize| {
        let mut v = vec![zero(); TABLE_LEN];
        v[i] = one();
        v
    };
    let inequalities = (0..TABLE_LEN).map(|i| Constraint::new(unit(i).iter().map(|x| -x).collect(), zero())).collect();

    let mut candidates: Vec<Constraint> = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            let mut n = vec![zero(); TABLE_LEN];
            for ab in 0..4 {
                n[index(ab & 1, ab >> 1, x, y)] = one();
            }
            candidates.push(Constraint::new(n, one()));
        }
    }
    for x in 0..2 {
        for a in 0..2 {
            let mut n = vec![zero(); TABLE_LEN];
            for b in 0..2 {
                n[index(a, b, x, 0)] += one();
                n[index(a, b, x, 1)] -= one();
            }
            candidates.push(Constraint::new(n, zero()));
        }
    }
    for y in 0..2 {
        for b in 0..2 {
            let mut n = vec![zero(); TABLE_LEN];
            for a in 0..2 {
                n[index(a, b, 0, y)] += one();
                n[index(a, b, 1, y)] -= one();
            }
            candidates.push(Constraint::new(n, zero()));
        }
    }
    let rows: Vec<RationalVector> = candidates
        .iter()
        .map(|c| {
            let mut r = c.normal.clone();
            r.push(c.offset.clone());
            r
        })
        .collect();
    let equalities = linalg::independent_rows(&rows).into_iter().map(|i| candidates[i].clone()).collect();
    HRep::new(TABLE_LEN, inequalities, equalities).expect("no-signalling system is well formed")
}

/// `p(a,b|x,y) = pA(a|x) · pB(b|y)` for gbit states `(p(↑|0), p(↑|1))`.
pub fn product_table(alice: &[Rational], bob: &[Rational]) -> Result<ProbabilityTable> {
    for (name, w) in [("A", alice), ("B", bob)] {
        if w.len() != 2 || w.iter().any(|q| q.is_negative() || *q > one()) {
            return Err(Error::Input(format!("state of {name} is not in the unit square")));
        }
    }
    let local = |w: &[Rational], outcome: usize, setting: usize| {
        if outcome == 0 { w[setting].clone() } else { one() - &w[setting] }
    };
    let p = bits().map(|(a, b, x, y)| local(alice, a, x) * local(bob, b, y)).collect();
    ProbabilityTable::new(p)
}

/// The PR box with `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`, indexed `α + 2β + 4γ`.
pub fn pr_box(relabelling: usize) -> ProbabilityTable {
    assert!(relabelling < 8, "PR boxes are indexed 0..8");
    let (alpha, beta, gamma) = (relabelling & 1, (relabelling >> 1) & 1, (relabelling >> 2) & 1);
    let p = bits()
        .map(|(a, b, x, y)| {
            let parity = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
            if a ^ b == parity { half() } else { zero() }
        })
        .collect();
    ProbabilityTable::new(p).expect("PR boxes are valid tables")
}

/// Correlated at `(x,y) = (0,0)`, anticorrelated at the other three
/// setting pairs.
pub fn canonical_pr_box() -> ProbabilityTable {
    pr_box(3)
}

/// `p(a,b|x,y) = 1` iff `a = a_x` and `b = b_y`.
pub fn local_deterministic(a_of_x: [usize; 2], b_of_y: [usize; 2]) -> ProbabilityTable {
    let p = bits()
        .map(|(a, b, x, y)| if a == a_of_x[x] && b == b_of_y[y] { one() } else { zero() })
        .collect();
    ProbabilityTable::new(p).expect("deterministic tables are valid")
}

pub fn uniform_table() -> ProbabilityTable {
    ProbabilityTable::new(vec![Rational::new(1.into(), 4.into()); TABLE_LEN]).expect("uniform table is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "class")]
pub enum VertexClass {
    /// Outcome `a_of_x[x]` for Alice's setting `x`, `b_of_y[y]` for Bob's.
    LocalDeterministic { a_of_x: [usize; 2], b_of_y: [usize; 2] },
    PRBox { index: usize },
}

impl VertexClass {
    pub fn is_local(&self) -> bool {
        matches!(self, VertexClass::LocalDeterministic { .. })
    }
}

pub fn classify_vertex(t: &[Rational]) -> Result<VertexClass> {
    let h = build_ns_hrep();
    if t.len() != TABLE_LEN || !h.is_vertex(t) {
        return Err(Error::NotAVertex("table is not a vertex of the no-signalling polytope".into()));
    }
    let table = ProbabilityTable::new(t.to_vec())?;
    let (alice, bob) = table.marginals()?;
    let deterministic = |m: &Marginal| -> Option<[usize; 2]> {
        let pick = |s: usize| {
            if m[s][0].is_one() {
                Some(0)
            } else if m[s][1].is_one() {
                Some(1)
            } else {
                None
            }
        };
        Some([pick(0)?, pick(1)?])
    };
    if let (Some(a_of_x), Some(b_of_y)) = (deterministic(&alice), deterministic(&bob)) {
        if local_deterministic(a_of_x, b_of_y) == table {
            return Ok(VertexClass::LocalDeterministic { a_of_x, b_of_y });
        }
    }
    (0..8)
        .find(|&k| pr_box(k) == table)
        .map(|index| VertexClass::PRBox { index })
        .ok_or_else(|| Error::NotAVertex("vertex is neither local deterministic nor a PR box".into()))
}

/// Signs of `E(0,0), E(1,0), E(0,1), E(1,1)` (index `x + 2y`) with an odd
/// number of minus signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChshVariant {
    signs: [i8; 4],
}

impl ChshVariant {
    pub fn new(signs: [i8; 4]) -> Result<Self> {
        if signs.iter().any(|s| s.abs() != 1) || signs.iter().map(|&s| s as i32).product::<i32>() != -1 {
            return Err(Error::Input("CHSH signs must be ±1 with product −1".into()));
        }
        Ok(Self { signs })
    }

    /// All eight variants, in lexicographic order of their sign vectors.
    pub fn all() -> Vec<ChshVariant> {
        let mut out: Vec<ChshVariant> = (0..16u8)
            .map(|m| std::array::from_fn(|k| if m >> k & 1 == 1 { -1 } else { 1 }))
            .filter_map(|signs| ChshVariant::new(signs).ok())
            .collect();
        out.sort_by_key(|v| v.signs);
        out
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    pub fn sign(&self, x: usize, y: usize) -> i8 {
        self.signs[x + 2 * y]
    }

    /// Coefficients of the CHSH expression as a linear functional on tables.
    pub fn functional(&self) -> RationalVector {
        bits()
            .map(|(a, b, x, y)| {
                let s = self.sign(x, y) as i64 * if a == b { 1 } else { -1 };
                int(s)
            })
            .collect()
    }
}

pub fn chsh_value(t: &ProbabilityTable, v: &ChshVariant) -> Rational {
    let mut total = zero();
    for x in 0..2 {
        for y in 0..2 {
            let e = t.correlator(x, y);
            if v.sign(x, y) > 0 { total += e } else { total -= e }
        }
    }
    total
}

pub fn chsh_max(t: &ProbabilityTable) -> Rational {
    ChshVariant::all()
        .iter()
        .map(|v| chsh_value(t, v).abs())
        .max()
        .expect("eight variants")
}

/// Born-rule statistics of the singlet measured along equatorial Bloch
/// directions; floating point only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumTable {
    pub p_float: [f64; TABLE_LEN],
    pub inexact: bool,
}

impl QuantumTable {
    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p_float[index(a, b, x, y)]
    }

    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        (0..4)
            .map(|ab| {
                let (a, b) = (ab & 1, ab >> 1);
                let v = self.get(a, b, x, y);
                if a == b { v } else { -v }
            })
            .sum()
    }

    pub fn chsh_value(&self, v: &ChshVariant) -> f64 {
        let mut total = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                total += v.sign(x, y) as f64 * self.correlator(x, y);
            }
        }
        total
    }

    pub fn chsh_max(&self) -> f64 {
        ChshVariant::all().iter().map(|v| self.chsh_value(v).abs()).fold(0.0, f64::max)
    }

    /// Largest deviation between a party's marginals across the other
    /// party's settings.
    pub fn signalling_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for s in 0..2 {
            for o in 0..2 {
                let alice: Vec<f64> = (0..2).map(|y| self.get(o, 0, s, y) + self.get(o, 1, s, y)).collect();
                let bob: Vec<f64> = (0..2).map(|x| self.get(0, o, x, s) + self.get(1, o, x, s)).collect();
                gap = gap.max((alice[0] - alice[1]).abs()).max((bob[0] - bob[1]).abs());
            }
        }
        gap
    }
}

/// `E(x,y) = −cos(θA_x − θB_y)`, with uniform marginals:
/// `p(a,b|x,y) = ¼ (1 + (−1)^{a⊕b} E(x,y))`.
pub fn quantum_chsh_table(theta_a: [f64; 2], theta_b: [f64; 2]) -> QuantumTable {
    let mut p = [0.0; TABLE_LEN];
    for (i, (a, b, x, y)) in bits().enumerate() {
        let e = -(theta_a[x] - theta_b[y]).cos();
        let s = if a == b { 1.0 } else { -1.0 };
        p[i] = 0.25 * (1.0 + s * e);
    }
    QuantumTable { p_float: p, inexact: true }
}

/// Locally preparable pure states of two gbits: the sixteen products of
/// square corners.
pub fn product_vertices() -> Vec<ProbabilityTable> {
    let corners = crate::gpt_core::gbit_pure_states();
    let mut out: Vec<ProbabilityTable> = corners
        .iter()
        .flat_map(|a| corners.iter().map(move |b| product_table(a, b).expect("corners are states")))
        .collect();
    out.sort();
    out
}

/// The composite of two gbits whose states are all no-signalling tables.
pub fn make_boxworld2() -> StateSpace {
    StateSpace::from_hrep("boxworld2", build_ns_hrep())
        .expect("no-signalling polytope is bounded and nonempty")
        .with_parts("gbit", "gbit")
}
