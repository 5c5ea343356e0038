//! Checkers for the four reconstruction postulates on concrete state
//! spaces, and a report runner that collects them with witnesses.
//!
//! Every failing verdict carries data that can be re-checked without the
//! code path that produced it: encoding witnesses are re-evaluated
//! directly, LP infeasibility comes with a Farkas certificate, and symmetry
//! verdicts name the group element and vertices involved.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::boxworld::{classify_vertex, make_boxworld2};
use crate::error::{Error, Result};
use crate::gpt_core::bloch::BlochState;
use crate::gpt_core::effect::{Effect, Measurement};
use crate::gpt_core::{gbit_pure_states, make_ball3, make_classical, make_gbit, StateSpace};
use crate::ratgeo::rational::{serde_matrix, sub, Rational, RationalVector};
use crate::ratgeo::{feasible_point, solve_lp, Constraint, HRep, LpResult, LpStatus, Sense, VRep};
use crate::symmetry::{
    affine_automorphisms, check_continuous_reversibility, check_interaction_with_group, ContinuityVerdict,
    InteractionVerdict, PathCheck, RotationPath,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TomographyReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_ab: usize,
    pub pass: bool,
}

/// Linear dimensions (affine dimension + 1); passes iff `dim_ab = dim_a · dim_b`.
pub fn check_tomographic_locality(a: &StateSpace, b: &StateSpace, ab: &StateSpace) -> Result<TomographyReport> {
    for s in [a, b, ab] {
        s.polytope()?;
    }
    let (dim_a, dim_b, dim_ab) = (a.linear_dimension(), b.linear_dimension(), ab.linear_dimension());
    Ok(TomographyReport { dim_a, dim_b, dim_ab, pass: dim_ab == dim_a * dim_b })
}

/// Four states `ω_{bb'}`, stored in the order 00, 01, 10, 11, with `M`
/// reading `b` and `M'` reading `b'`. Outcome `k` of each measurement
/// announces bit value `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingWitness {
    pub vertex_indices: [usize; 4],
    #[serde(with = "serde_matrix")]
    pub states: Vec<RationalVector>,
    pub m: Measurement,
    pub m_prime: Measurement,
}

impl EncodingWitness {
    pub fn state(&self, b: usize, b_prime: usize) -> &RationalVector {
        &self.states[2 * b + b_prime]
    }

    /// Direct evaluation: both measurements are valid on every vertex of
    /// `space` and read their bit with probability exactly one.
    pub fn verify(&self, space: &StateSpace) -> Result<bool> {
        let v = space.vrep()?;
        if self.states.len() != 4 {
            return Ok(false);
        }
        for m in [&self.m, &self.m_prime] {
            if m.effects.len() != 2 || m.effects.iter().any(|e| e.dim() != v.ambient_dim()) {
                return Ok(false);
            }
            for x in v.vertices() {
                let p = m.probabilities(x);
                let total: Rational = p.iter().sum();
                if !total.is_one() || p.iter().any(|q| *q < Rational::zero() || *q > Rational::one()) {
                    return Ok(false);
                }
            }
        }
        for b in 0..2 {
            for bp in 0..2 {
                let s = self.state(b, bp);
                if !space.contains(s) || !self.m.effects[b].eval(s).is_one() || !self.m_prime.effects[bp].eval(s).is_one() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum EncodingVerdict {
    /// No vertex quadruple carries two perfectly readable bits.
    Pass { vertices: usize, quadruples_examined: usize },
    Fail { witness: EncodingWitness },
}

/// Lexicographic search over vertex quadruples and pairs of 2+2 splits. In
/// each split the side holding the lower vertex index encodes bit value 0.
pub fn check_no_simultaneous_encoding(space: &StateSpace) -> Result<EncodingVerdict> {
    let v = space.vrep()?;
    let n = v.len();
    let mut separator_cache = std::collections::HashMap::new();
    let mut separator = |s0: [usize; 2], s1: [usize; 2]| -> Option<Effect> {
        separator_cache.entry((s0, s1)).or_insert_with(|| perfect_effect(v, &s0, &s1)).clone()
    };
    let mut examined = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    examined += 1;
                    let q = [i, j, k, l];
                    let splits = [([i, j], [k, l]), ([i, k], [j, l]), ([i, l], [j, k])];
                    for (a, b_) in [(0, 1), (0, 2), (1, 2)] {
                        let Some(e) = separator(splits[a].0, splits[a].1) else { continue };
                        let Some(e2) = separator(splits[b_].0, splits[b_].1) else { continue };
                        let bit = |split: &([usize; 2], [usize; 2]), x: usize| usize::from(split.1.contains(&x));
                        let mut order = [0usize; 4];
                        for &x in &q {
                            order[2 * bit(&splits[a], x) + bit(&splits[b_], x)] = x;
                        }
                        let witness = EncodingWitness {
                            vertex_indices: order,
                            states: order.iter().map(|&x| v.vertices()[x].clone()).collect(),
                            m: Measurement::binary(e),
                            m_prime: Measurement::binary(e2),
                        };
                        return Ok(EncodingVerdict::Fail { witness });
                    }
                }
            }
        }
    }
    Ok(EncodingVerdict::Pass { vertices: n, quadruples_examined: examined })
}

/// An effect equal to 1 on `one`, 0 on `zero`, and within [0, 1] on every
/// vertex, if one exists. Variables are `(l, c)` with `e(x) = l·x + c`.
fn perfect_effect(v: &VRep, one: &[usize], zero: &[usize]) -> Option<Effect> {
    let d = v.ambient_dim();
    let row = |x: &RationalVector, sign: i64| -> RationalVector {
        let s = Rational::from_integer(sign.into());
        x.iter().map(|c| c * &s).chain([s.clone()]).collect()
    };
    let mut ineqs = Vec::new();
    for x in v.vertices() {
        ineqs.push(Constraint::new(row(x, -1), Rational::zero()));
        ineqs.push(Constraint::new(row(x, 1), Rational::one()));
    }
    let mut eqs = Vec::new();
    for &i in one {
        eqs.push(Constraint::new(row(&v.vertices()[i], 1), Rational::one()));
    }
    for &i in zero {
        eqs.push(Constraint::new(row(&v.vertices()[i], 1), Rational::zero()));
    }
    let h = HRep::new(d + 1, ineqs, eqs).ok()?;
    let z = feasible_point(&h)?;
    Some(Effect::new(z[..d].to_vec(), z[d].clone()))
}

/// Feasibility system for one four-outcome measurement with
/// `e_k(ω_j) = δ_kj` on the witness states. Variables are the four effects
/// `(l_k, c_k)` laid out consecutively.
pub fn joint_readout_system(w: &EncodingWitness, space: &StateSpace) -> Result<HRep> {
    let v = space.vrep()?;
    let d = v.ambient_dim();
    let width = 4 * (d + 1);
    let effect_row = |k: usize, x: &[Rational], sign: i64| -> RationalVector {
        let mut r = vec![Rational::zero(); width];
        let s = Rational::from_integer(sign.into());
        for (c, xc) in x.iter().enumerate() {
            r[k * (d + 1) + c] = xc * &s;
        }
        r[k * (d + 1) + d] = s;
        r
    };
    let mut ineqs = Vec::new();
    for k in 0..4 {
        for x in v.vertices() {
            ineqs.push(Constraint::new(effect_row(k, x, -1), Rational::zero()));
        }
    }
    let mut eqs = Vec::new();
    for k in 0..4 {
        for (j, s) in w.states.iter().enumerate() {
            let target = if j == k { Rational::one() } else { Rational::zero() };
            eqs.push(Constraint::new(effect_row(k, s, 1), target));
        }
    }
    // Σ_k e_k is the unit effect
    for c in 0..=d {
        let mut r = vec![Rational::zero(); width];
        for k in 0..4 {
            r[k * (d + 1) + c] = Rational::one();
        }
        let target = if c == d { Rational::one() } else { Rational::zero() };
        eqs.push(Constraint::new(r, target));
    }
    HRep::new(width, ineqs, eqs)
}

pub fn check_joint_readout(w: &EncodingWitness, space: &StateSpace) -> Result<LpResult> {
    let h = joint_readout_system(w, space)?;
    solve_lp(&vec![Rational::zero(); h.ambient_dim()], Sense::Max, &h)
}

/// `(b, largest change, smallest change)`.
type DisturbanceRange = (usize, Option<Rational>, Option<Rational>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum DisturbanceVerdict {
    /// For the inputs `ω_{b0}, ω_{b1}` every repeatable instrument for `M`
    /// leaves `M'` with the same statistics on both.
    Confirmed { b: usize },
    NotConfirmed,
    NotApplicable { reason: String },
}

/// Instruments for `M` are modelled as affine maps `ω ↦ A_k ω + t_k` into
/// the cone of unnormalized states, with norm `e_k(ω)` and repeatability
/// `e_k(post-state) = 1`. For each input pair differing only in `b'` and
/// told apart by `M'`, the largest and smallest possible change in the
/// `M'` statistics after measuring `M` are computed exactly.
pub fn check_disturbance(space: &StateSpace, w: &EncodingWitness) -> Result<DisturbanceVerdict> {
    let Ok((v, h)) = space.polytope() else {
        return Ok(not_gbit());
    };
    let mut gbit: Vec<RationalVector> = gbit_pure_states().to_vec();
    gbit.sort();
    if v.ambient_dim() != 2 || v.vertices() != gbit.as_slice() {
        return Ok(not_gbit());
    }
    for (b, hi, lo) in disturbance_ranges(v, h, w)? {
        if let (Some(hi), Some(lo)) = (hi, lo) {
            if hi.is_zero() && lo.is_zero() {
                return Ok(DisturbanceVerdict::Confirmed { b });
            }
        }
    }
    Ok(DisturbanceVerdict::NotConfirmed)
}

/// For each `b` whose pair `ω_{b0}, ω_{b1}` is told apart by `M'`, the
/// largest and smallest change in `p(M' = 0)` between the two post-states
/// over all admissible instruments. `None` when that LP has no optimum.
pub(crate) fn disturbance_ranges(
    v: &VRep,
    h: &HRep,
    w: &EncodingWitness,
) -> Result<Vec<DisturbanceRange>> {
    if w.states.len() != 4 || w.m.effects.len() != 2 || w.m_prime.effects.len() != 2 {
        return Err(Error::Input("encoding witness needs four states and two binary measurements".into()));
    }
    let d = v.ambient_dim();
    let block = d * d + d;
    let width = 2 * block;
    // coefficient row for the linear form Σ_r a_r y_k(x)_r
    let y_form = |k: usize, a: &[Rational], x: &[Rational]| -> RationalVector {
        let mut r = vec![Rational::zero(); width];
        for (rr, ar) in a.iter().enumerate() {
            for (c, xc) in x.iter().enumerate() {
                r[k * block + rr * d + c] = ar * xc;
            }
            r[k * block + d * d + rr] = ar.clone();
        }
        r
    };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for k in 0..2 {
        let e = &w.m.effects[k];
        for x in v.vertices() {
            let s = e.eval(x);
            for c in h.inequalities() {
                ineqs.push(Constraint::new(y_form(k, &c.normal, x), &c.offset * &s));
            }
            for c in h.equalities() {
                eqs.push(Constraint::new(y_form(k, &c.normal, x), &c.offset * &s));
            }
            eqs.push(Constraint::new(y_form(k, &e.linear, x), &s * (Rational::one() - &e.constant)));
        }
    }
    let system = HRep::new(width, ineqs, eqs)?;
    let probe = &w.m_prime.effects[0];
    let mut out = Vec::new();
    for b in 0..2 {
        let (s0, s1) = (w.state(b, 0), w.state(b, 1));
        if probe.eval(s0) == probe.eval(s1) {
            continue;
        }
        let delta = sub(s0, s1);
        let objective = y_form(b, &probe.linear, &delta);
        // drop the t_b part: it cancels in the difference
        let objective: RationalVector = objective
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i >= b * block + d * d && i < (b + 1) * block { Rational::zero() } else { c })
            .collect();
        let hi = solve_lp(&objective, Sense::Max, &system)?.optimum().cloned();
        let lo = solve_lp(&objective, Sense::Min, &system)?.optimum().cloned();
        out.push((b, hi, lo));
    }
    Ok(out)
}


fn not_gbit() -> DisturbanceVerdict {
    DisturbanceVerdict::NotApplicable { reason: "the disturbance claim concerns the gbit only".into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NotApplicableReason {
    /// The encode/decode clause quantifies over all numbers of units.
    UnboundedSearch,
    NoComposite,
    NotPolytopal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    Continuity { verdict: ContinuityVerdict, sample: Option<SamplePath> },
    Dimensions(TomographyReport),
    FiniteDimension { linear_dimension: usize },
    Interaction { verdict: InteractionVerdict, group_order: usize, product_vertices: Vec<usize> },
    Encoding { witness: EncodingWitness, joint_readout: LpStatus },
    NoEncoding { vertices: usize, quadruples_examined: usize },
}

/// A Bloch-ball rotation path between two fixed pure states, with its
/// sampled checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplePath {
    pub from: [f64; 3],
    pub to: [f64; 3],
    pub path: RotationPath,
    pub check: PathCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome")]
pub enum PostulateResult {
    Pass { witness: Witness },
    Fail { witness: Witness },
    NotApplicable { reason: NotApplicableReason },
}

impl PostulateResult {
    pub fn is_pass(&self) -> bool {
        matches!(self, Self::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Self::Fail { .. })
    }

    fn from_bool(pass: bool, witness: Witness) -> Self {
        if pass {
            Self::Pass { witness }
        } else {
            Self::Fail { witness }
        }
    }
}

/// Results in fixed postulate order.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct PostulateResults {
    pub ContinuousReversibility: PostulateResult,
    pub TomographicLocality: PostulateResult,
    pub InformationUnit_Tomography: PostulateResult,
    pub InformationUnit_Interaction: PostulateResult,
    pub InformationUnit_Encoding: PostulateResult,
    pub NoSimultaneousEncoding: PostulateResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PostulateReport {
    pub subject: Vec<String>,
    pub results: PostulateResults,
}

/// A unit system and optionally its two-party composite, by registered label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub unit: String,
    pub composite: Option<String>,
}

impl ReportConfig {
    pub fn new(unit: impl Into<String>, composite: Option<&str>) -> Self {
        Self { unit: unit.into(), composite: composite.map(Into::into) }
    }
}

/// `gbit`, `classical-N`, `boxworld2` or `ball3`.
pub fn registered_space(label: &str) -> Result<StateSpace> {
    match label {
        "gbit" => Ok(make_gbit()),
        "boxworld2" => Ok(make_boxworld2()),
        "ball3" => Ok(make_ball3()),
        _ => match label.strip_prefix("classical-").map(str::parse::<usize>) {
            Some(Ok(n)) if n >= 1 => make_classical(n),
            _ => Err(Error::Input(format!("unknown state space {label:?}"))),
        },
    }
}

/// Composite of two copies of `unit` together with its locally preparable
/// vertices. Registered composites are `boxworld2` for the gbit and
/// `classical-(n²)` for `classical-n`.
pub fn registered_composite(unit: &str, composite: &str) -> Result<(StateSpace, Vec<usize>)> {
    let mismatch = || Error::Input(format!("{composite:?} is not a registered composite of {unit:?}"));
    if unit == "gbit" && composite == "boxworld2" {
        let space = make_boxworld2();
        let mut local = Vec::new();
        for (i, x) in space.vrep()?.vertices().iter().enumerate() {
            if classify_vertex(x)?.is_local() {
                local.push(i);
            }
        }
        return Ok((space, local));
    }
    let n = unit.strip_prefix("classical-").and_then(|s| s.parse::<usize>().ok()).ok_or_else(mismatch)?;
    if composite != format!("classical-{}", n * n) {
        return Err(mismatch());
    }
    let space = make_classical(n * n)?.with_parts(unit, unit);
    // every deterministic joint outcome is a product of local ones
    Ok((space, (0..n * n).collect()))
}

pub fn run_report(config: &ReportConfig) -> Result<PostulateReport> {
    let unit = registered_space(&config.unit)?;
    let composite = match &config.composite {
        Some(label) => Some(registered_composite(&config.unit, label)?),
        None => None,
    };
    let mut subject = vec![unit.label().to_string()];
    if let Some((c, _)) = &composite {
        subject.push(c.label().to_string());
    }

    let continuity = check_continuous_reversibility(&unit)?;
    let sample = if unit.is_polytopal() { None } else { Some(sample_path()?) };
    let continuous_reversibility = PostulateResult::from_bool(
        matches!(continuity, ContinuityVerdict::Pass { .. }),
        Witness::Continuity { verdict: continuity, sample },
    );

    let (tomographic_locality, interaction) = match &composite {
        None => (
            PostulateResult::NotApplicable { reason: NotApplicableReason::NoComposite },
            PostulateResult::NotApplicable { reason: NotApplicableReason::NoComposite },
        ),
        Some((c, product)) => {
            let t = check_tomographic_locality(&unit, &unit, c)?;
            let group = affine_automorphisms(c)?;
            let verdict = check_interaction_with_group(c, &group, product)?;
            (
                PostulateResult::from_bool(t.pass, Witness::Dimensions(t)),
                PostulateResult::from_bool(
                    matches!(verdict, InteractionVerdict::Interacting { .. }),
                    Witness::Interaction { verdict, group_order: group.order(), product_vertices: product.clone() },
                ),
            )
        }
    };

    let tomography =
        PostulateResult::Pass { witness: Witness::FiniteDimension { linear_dimension: unit.linear_dimension() } };

    let encoding = if unit.is_polytopal() {
        match check_no_simultaneous_encoding(&unit)? {
            EncodingVerdict::Pass { vertices, quadruples_examined } => {
                PostulateResult::Pass { witness: Witness::NoEncoding { vertices, quadruples_examined } }
            }
            EncodingVerdict::Fail { witness } => {
                let joint_readout = check_joint_readout(&witness, &unit)?.status();
                PostulateResult::Fail { witness: Witness::Encoding { witness, joint_readout } }
            }
        }
    } else {
        PostulateResult::NotApplicable { reason: NotApplicableReason::NotPolytopal }
    };

    Ok(PostulateReport {
        subject,
        results: PostulateResults {
            ContinuousReversibility: continuous_reversibility,
            TomographicLocality: tomographic_locality,
            InformationUnit_Tomography: tomography,
            InformationUnit_Interaction: interaction,
            InformationUnit_Encoding: PostulateResult::NotApplicable { reason: NotApplicableReason::UnboundedSearch },
            NoSimultaneousEncoding: encoding,
        },
    })
}

fn sample_path() -> Result<SamplePath> {
    let (from, to) = ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
    let (a, b) = (BlochState::new(from)?, BlochState::new(to)?);
    let path = RotationPath::between(&a, &b)?;
    let check = path.check(&a, &b, 100);
    Ok(SamplePath { from, to, path, check })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_instruments_need_not_disturb() {
        // on the tetrahedron, measuring b and leaving the state alone is
        // repeatable, so the M' statistics can survive
        let c4 = make_classical(4).unwrap();
        let (v, h) = c4.polytope().unwrap();
        let EncodingVerdict::Fail { witness } = check_no_simultaneous_encoding(&c4).unwrap() else {
            panic!("tetrahedron encodes two bits");
        };
        let ranges = disturbance_ranges(v, h, &witness).unwrap();
        assert_eq!(ranges.len(), 2);
        for (_, hi, lo) in ranges {
            assert!(hi.unwrap() != lo.unwrap());
        }
    }
}
