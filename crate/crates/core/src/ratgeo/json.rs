//! Wire formats: `{"dim", "ineqs", "eqs"}` for H-representations and
//! `{"dim", "vertices"}` for V-representations, all scalars as `"n/d"`.

use serde::{Deserialize, Serialize};

use super::polytope::{Constraint, HRep, VRep};
use super::rational::{format_rational, format_vector, parse_rational, parse_vector};
use crate::error::{Error, Result};

type ConstraintJson = (Vec<String>, String);

#[derive(Serialize, Deserialize)]
pub struct HRepJson {
    pub dim: usize,
    pub ineqs: Vec<ConstraintJson>,
    #[serde(default)]
    pub eqs: Vec<ConstraintJson>,
}

#[derive(Serialize, Deserialize)]
pub struct VRepJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

fn constraint_to_json(c: &Constraint) -> ConstraintJson {
    (format_vector(&c.normal), format_rational(&c.offset))
}

fn constraint_from_json((normal, offset): &ConstraintJson) -> Result<Constraint> {
    Ok(Constraint::new(parse_vector(normal)?, parse_rational(offset)?))
}

impl From<&HRep> for HRepJson {
    fn from(h: &HRep) -> Self {
        HRepJson {
            dim: h.ambient_dim(),
            ineqs: h.inequalities().iter().map(constraint_to_json).collect(),
            eqs: h.equalities().iter().map(constraint_to_json).collect(),
        }
    }
}

impl TryFrom<HRepJson> for HRep {
    type Error = Error;

    fn try_from(j: HRepJson) -> Result<Self> {
        let ineqs = j.ineqs.iter().map(constraint_from_json).collect::<Result<_>>()?;
        let eqs = j.eqs.iter().map(constraint_from_json).collect::<Result<_>>()?;
        HRep::new(j.dim, ineqs, eqs)
    }
}

impl From<&VRep> for VRepJson {
    fn from(v: &VRep) -> Self {
        VRepJson {
            dim: v.ambient_dim(),
            vertices: v.vertices().iter().map(|p| format_vector(p)).collect(),
        }
    }
}

impl TryFrom<VRepJson> for VRep {
    type Error = Error;

    fn try_from(j: VRepJson) -> Result<Self> {
        let points = j.vertices.iter().map(|p| parse_vector(p)).collect::<Result<_>>()?;
        VRep::new(j.dim, points)
    }
}

impl Serialize for HRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HRepJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HRep::try_from(HRepJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for VRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VRepJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        VRep::try_from(VRepJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratgeo::rational::{int, rat};

    #[test]
    fn hrep_wire_format() {
        let h = HRep::new(1, vec![Constraint::new(vec![rat(1, 2)], int(1))], vec![]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"dim":1,"ineqs":[[["1/2"],"1/1"]],"eqs":[]}"#);
        let back: HRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn vrep_deserialize_canonicalizes() {
        let v: VRep =
            serde_json::from_str(r#"{"dim":1,"vertices":[["1"],["1/2"],["0/1"]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"dim":1,"vertices":[["0/1"],["1/1"]]}"#);
    }

    #[test]
    fn malformed_rational_rejected() {
        assert!(serde_json::from_str::<VRep>(r#"{"dim":1,"vertices":[["0.5"]]}"#).is_err());
        assert!(serde_json::from_str::<HRep>(r#"{"dim":1,"ineqs":[[["1/0"],"1"]]}"#).is_err());
    }
}
