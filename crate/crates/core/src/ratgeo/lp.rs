//! Exact two-phase simplex over the rationals.
//!
//! Problems are posed on an [`HRep`]: optimize `c · x` subject to
//! `A x <= b`, `E x = f`, with `x` free. Pivoting follows Bland's rule, so
//! degenerate problems terminate and identical inputs yield identical
//! witnesses. Infeasible problems come back with a Farkas certificate and
//! optimal ones can be paired with a dual certificate; both are checked
//! with plain exact arithmetic, independent of the tableau.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::polytope::{Constraint, HRep};
use super::rational::{dot, serde_rational, serde_vector, Rational, RationalVector};
use crate::error::{check_dim, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Multipliers `y >= 0` (inequalities) and `z` (equalities) with
/// `Aᵀy + Eᵀz = 0` and `b·y + f·z < 0`, proving `{A x <= b, E x = f}` empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarkasCertificate {
    #[serde(with = "serde_vector")]
    pub inequality_multipliers: RationalVector,
    #[serde(with = "serde_vector")]
    pub equality_multipliers: RationalVector,
}

impl FarkasCertificate {
    pub fn verify(&self, h: &HRep) -> bool {
        if self.inequality_multipliers.len() != h.inequalities().len()
            || self.equality_multipliers.len() != h.equalities().len()
            || self.inequality_multipliers.iter().any(Signed::is_negative)
        {
            return false;
        }
        let (combo, rhs) = combine(h, &self.inequality_multipliers, &self.equality_multipliers);
        combo.iter().all(Zero::is_zero) && rhs.is_negative()
    }
}

/// Dual solution for the maximization form of a problem: `y >= 0`,
/// `Aᵀy + Eᵀz = c` and `b·y + f·z` equal to the optimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    #[serde(with = "serde_vector")]
    pub inequality_multipliers: RationalVector,
    #[serde(with = "serde_vector")]
    pub equality_multipliers: RationalVector,
}

impl DualCertificate {
    pub fn verify(&self, h: &HRep, objective: &[Rational], sense: Sense, optimum: &Rational) -> bool {
        if self.inequality_multipliers.len() != h.inequalities().len()
            || self.equality_multipliers.len() != h.equalities().len()
            || self.inequality_multipliers.iter().any(Signed::is_negative)
        {
            return false;
        }
        let (c, opt) = max_form(objective, sense, optimum);
        let (combo, rhs) = combine(h, &self.inequality_multipliers, &self.equality_multipliers);
        combo == c && rhs == opt
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum LpResult {
    Optimal {
        #[serde(with = "serde_rational")]
        optimum: Rational,
        #[serde(with = "serde_vector")]
        point: RationalVector,
    },
    Infeasible { certificate: FarkasCertificate },
    Unbounded {
        #[serde(with = "serde_vector")]
        point: RationalVector,
        #[serde(with = "serde_vector")]
        ray: RationalVector,
    },
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible { .. } => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { optimum, .. } => Some(optimum),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&RationalVector> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&FarkasCertificate> {
        match self {
            LpResult::Infeasible { certificate } => Some(certificate),
            _ => None,
        }
    }
}

pub fn solve_lp(objective: &[Rational], sense: Sense, constraints: &HRep) -> Result<LpResult> {
    check_dim(constraints.ambient_dim(), objective.len())?;
    let c = match sense {
        Sense::Max => objective.to_vec(),
        Sense::Min => objective.iter().map(|x| -x).collect(),
    };
    Ok(match solve_max(&c, constraints) {
        Raw::Optimal(point) => {
            let optimum = dot(objective, &point);
            LpResult::Optimal { optimum, point }
        }
        Raw::Unbounded(point, ray) => LpResult::Unbounded { point, ray },
        Raw::Infeasible => LpResult::Infeasible { certificate: farkas_certificate(constraints) },
    })
}

/// Some point of the polyhedron, if it is nonempty.
pub fn feasible_point(h: &HRep) -> Option<RationalVector> {
    match solve_max(&vec![Rational::zero(); h.ambient_dim()], h) {
        Raw::Optimal(p) | Raw::Unbounded(p, _) => Some(p),
        Raw::Infeasible => None,
    }
}

/// Solves the dual problem. `None` unless the primal has a finite optimum.
pub fn dual_certificate(
    objective: &[Rational],
    sense: Sense,
    constraints: &HRep,
) -> Result<Option<DualCertificate>> {
    check_dim(constraints.ambient_dim(), objective.len())?;
    let (c, _) = max_form(objective, sense, &Rational::zero());
    let m1 = constraints.inequalities().len();
    let m2 = constraints.equalities().len();
    let n = m1 + m2;
    if n == 0 {
        return Ok(c.iter().all(Zero::is_zero).then(|| DualCertificate {
            inequality_multipliers: vec![],
            equality_multipliers: vec![],
        }));
    }
    // minimize b·y + f·z  s.t.  Aᵀy + Eᵀz = c, y >= 0
    let mut ineqs = Vec::with_capacity(m1);
    for i in 0..m1 {
        let mut normal = vec![Rational::zero(); n];
        normal[i] = -Rational::one();
        ineqs.push(Constraint::new(normal, Rational::zero()));
    }
    let eqs = (0..constraints.ambient_dim())
        .map(|k| Constraint::new(column(constraints, k), c[k].clone()))
        .collect();
    let dual = HRep::new(n, ineqs, eqs)?;
    let neg_rhs: RationalVector = constraints
        .inequalities()
        .iter()
        .chain(constraints.equalities())
        .map(|c| -c.offset.clone())
        .collect();
    Ok(match solve_max(&neg_rhs, &dual) {
        Raw::Optimal(y) => Some(DualCertificate {
            inequality_multipliers: y[..m1].to_vec(),
            equality_multipliers: y[m1..].to_vec(),
        }),
        _ => None,
    })
}

fn max_form(objective: &[Rational], sense: Sense, optimum: &Rational) -> (RationalVector, Rational) {
    match sense {
        Sense::Max => (objective.to_vec(), optimum.clone()),
        Sense::Min => (objective.iter().map(|x| -x).collect(), -optimum.clone()),
    }
}

/// Column `k` of the stacked constraint matrix `[A; E]`.
fn column(h: &HRep, k: usize) -> RationalVector {
    h.inequalities()
        .iter()
        .chain(h.equalities())
        .map(|c| c.normal[k].clone())
        .collect()
}

/// `(Aᵀy + Eᵀz, b·y + f·z)`.
fn combine(h: &HRep, y: &[Rational], z: &[Rational]) -> (RationalVector, Rational) {
    let mut combo = vec![Rational::zero(); h.ambient_dim()];
    let mut rhs = Rational::zero();
    for (c, w) in h.inequalities().iter().zip(y).chain(h.equalities().iter().zip(z)) {
        if w.is_zero() {
            continue;
        }
        for (acc, a) in combo.iter_mut().zip(&c.normal) {
            *acc += w * a;
        }
        rhs += w * &c.offset;
    }
    (combo, rhs)
}

fn farkas_certificate(h: &HRep) -> FarkasCertificate {
    let m1 = h.inequalities().len();
    let m2 = h.equalities().len();
    let n = m1 + m2;
    let mut ineqs = Vec::with_capacity(m1);
    for i in 0..m1 {
        let mut normal = vec![Rational::zero(); n];
        normal[i] = -Rational::one();
        ineqs.push(Constraint::new(normal, Rational::zero()));
    }
    let mut eqs: Vec<Constraint> = (0..h.ambient_dim())
        .map(|k| Constraint::new(column(h, k), Rational::zero()))
        .collect();
    let rhs: RationalVector =
        h.inequalities().iter().chain(h.equalities()).map(|c| c.offset.clone()).collect();
    eqs.push(Constraint::new(rhs, -Rational::one()));
    let system = HRep::new(n, ineqs, eqs).expect("Farkas system is well formed");
    let y = feasible_point(&system).expect("an infeasible primal has a Farkas certificate");
    FarkasCertificate {
        inequality_multipliers: y[..m1].to_vec(),
        equality_multipliers: y[m1..].to_vec(),
    }
}

enum Raw {
    Optimal(RationalVector),
    Unbounded(RationalVector, RationalVector),
    Infeasible,
}

/// Maximizes `c · x` over `h` without building certificates.
fn solve_max(c: &[Rational], h: &HRep) -> Raw {
    let n = h.ambient_dim();
    let m1 = h.inequalities().len();
    let m2 = h.equalities().len();
    // columns: x+ (n), x- (n), slacks (m1), artificials (one per row that needs one)
    let structural = 2 * n + m1;
    let mut rows: Vec<RationalVector> = Vec::with_capacity(m1 + m2);
    let mut rhs: RationalVector = Vec::with_capacity(m1 + m2);
    let mut basis: Vec<Option<usize>> = Vec::with_capacity(m1 + m2);
    for (i, con) in h.inequalities().iter().chain(h.equalities()).enumerate() {
        let mut row = vec![Rational::zero(); structural];
        for (k, a) in con.normal.iter().enumerate() {
            row[k] = a.clone();
            row[n + k] = -a.clone();
        }
        if i < m1 {
            row[2 * n + i] = Rational::one();
        }
        let mut b = con.offset.clone();
        if b.is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
            b = -b;
        }
        let slack_basic = i < m1 && row[2 * n + i].is_positive();
        basis.push(slack_basic.then_some(2 * n + i));
        rows.push(row);
        rhs.push(b);
    }
    let needs_artificial: Vec<usize> = (0..rows.len()).filter(|&i| basis[i].is_none()).collect();
    let total = structural + needs_artificial.len();
    for row in rows.iter_mut() {
        row.resize(total, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        rows[i][structural + k] = Rational::one();
        basis[i] = Some(structural + k);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: basis.into_iter().map(|b| b.expect("every row has a basic column")).collect(),
    };

    if !needs_artificial.is_empty() {
        let mut phase1 = vec![Rational::zero(); total];
        phase1[structural..].fill(Rational::one());
        let allowed = vec![true; total];
        match tab.run(&phase1, &allowed) {
            Phase::Optimal => {}
            Phase::Unbounded(_) => unreachable!("phase one objective is bounded below"),
        }
        if tab.objective(&phase1).is_positive() {
            return Raw::Infeasible;
        }
        tab.drive_out_artificials(structural);
    }

    let mut cost = vec![Rational::zero(); total];
    for k in 0..n {
        cost[k] = -c[k].clone();
        cost[n + k] = c[k].clone();
    }
    let allowed: Vec<bool> = (0..total).map(|j| j < structural).collect();
    let outcome = tab.run(&cost, &allowed);
    let x = tab.solution(total);
    let point: RationalVector = (0..n).map(|k| &x[k] - &x[n + k]).collect();
    match outcome {
        Phase::Optimal => Raw::Optimal(point),
        Phase::Unbounded(col) => {
            let mut dir = vec![Rational::zero(); total];
            dir[col] = Rational::one();
            for (row, &b) in tab.rows.iter().zip(&tab.basis) {
                dir[b] = -row[col].clone();
            }
            let ray = (0..n).map(|k| &dir[k] - &dir[n + k]).collect();
            Raw::Unbounded(point, ray)
        }
    }
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    rows: Vec<RationalVector>,
    rhs: RationalVector,
    basis: Vec<usize>,
}

impl Tableau {
    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).fold(Rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }

    fn solution(&self, ncols: usize) -> RationalVector {
        let mut x = vec![Rational::zero(); ncols];
        for (&b, v) in self.basis.iter().zip(&self.rhs) {
            x[b] = v.clone();
        }
        x
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !row[j].is_zero() && !cost[b].is_zero() {
                r -= &cost[b] * &row[j];
            }
        }
        r
    }

    /// Minimizes `cost` with Bland's rule over the allowed columns.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> Phase {
        loop {
            let entering = (0..cost.len()).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative()
            });
            let Some(col) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Phase::Unbounded(col),
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// After a successful phase one, pivots artificial columns out of the
    /// basis; rows where that is impossible are redundant and dropped.
    fn drive_out_artificials(&mut self, structural: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < structural {
                i += 1;
                continue;
            }
            match (0..structural).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
