use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::space::StateSpace;
use crate::error::{check_dim, Error, Result};
use crate::ratgeo::rational::{add, dot, one, serde_rational, serde_vector, zero, Rational, RationalVector};
use crate::ratgeo::{solve_lp, LpResult, Sense};

/// Affine functional `e(ω) = linear · ω + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effect {
    #[serde(with = "serde_vector")]
    pub linear: RationalVector,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
}

impl Effect {
    pub fn new(linear: RationalVector, constant: Rational) -> Self {
        Self { linear, constant }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(vec![zero(); dim], one())
    }

    /// `ω ↦ ω_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut linear = vec![zero(); dim];
        linear[i] = one();
        Self::new(linear, zero())
    }

    /// `1 - e`.
    pub fn complement(&self) -> Self {
        Self::new(self.linear.iter().map(|x| -x).collect(), one() - &self.constant)
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, state: &[Rational]) -> Rational {
        dot(&self.linear, state) + &self.constant
    }
}

/// `0 <= e <= 1` on the whole space, decided by minimizing and maximizing
/// `e` with two exact LPs.
pub fn validate_effect(e: &Effect, space: &StateSpace) -> Result<bool> {
    let h = space.hrep()?;
    check_dim(h.ambient_dim(), e.dim())?;
    let extreme = |sense| -> Result<Rational> {
        match solve_lp(&e.linear, sense, h)? {
            LpResult::Optimal { optimum, .. } => Ok(optimum + &e.constant),
            other => Err(Error::Input(format!("effect LP on {} returned {:?}", space.label(), other.status()))),
        }
    };
    Ok(!extreme(Sense::Min)?.is_negative() && extreme(Sense::Max)? <= one())
}

/// A finite list of effects summing to the unit effect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub effects: Vec<Effect>,
}

impl Measurement {
    /// Requires the effects to sum to the unit effect as functionals: zero
    /// linear part, constant one.
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let (linear, constant) = sum_effects(&effects)?;
        if !linear.iter().all(Zero::is_zero) || !constant.is_one() {
            return Err(Error::Input("effects do not sum to the unit effect".into()));
        }
        Ok(Self { effects })
    }

    /// Requires the effects to sum to one on every state of `space` only;
    /// this admits effects such as the coordinate functionals of a simplex
    /// embedded in a higher-dimensional space.
    pub fn on_space(effects: Vec<Effect>, space: &StateSpace) -> Result<Self> {
        let v = space.vrep()?;
        let (linear, constant) = sum_effects(&effects)?;
        check_dim(v.ambient_dim(), linear.len())?;
        if v.vertices().iter().any(|x| dot(&linear, x) + &constant != one()) {
            return Err(Error::Input("effects do not sum to one on the state space".into()));
        }
        Ok(Self { effects })
    }

    /// Two-outcome measurement `{e, 1 - e}`.
    pub fn binary(e: Effect) -> Self {
        let c = e.complement();
        Self { effects: vec![e, c] }
    }

    pub fn probabilities(&self, state: &[Rational]) -> RationalVector {
        self.effects.iter().map(|e| e.eval(state)).collect()
    }

    pub fn is_valid_on(&self, space: &StateSpace) -> Result<bool> {
        for e in &self.effects {
            if !validate_effect(e, space)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn sum_effects(effects: &[Effect]) -> Result<(RationalVector, Rational)> {
    let first = effects.first().ok_or_else(|| Error::Input("measurement needs an effect".into()))?;
    let mut linear = first.linear.clone();
    let mut constant = first.constant.clone();
    for e in &effects[1..] {
        check_dim(linear.len(), e.dim())?;
        linear = add(&linear, &e.linear);
        constant += &e.constant;
    }
    Ok((linear, constant))
}
