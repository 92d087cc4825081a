//! JSON formats for surfaces and group actions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{standard_lattice, DivisorClass, KindSelector, LatticeMap, PicardLattice};
use crate::pairs::{self, GroupAction};
use crate::surface::SurfaceSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub degree: i64,
    pub kind: String,
    #[serde(default)]
    pub minus_two_curves: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GeneratorSpec {
    Word(Vec<String>),
    Perm5(Vec<usize>),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub degree: i64,
    pub kind: String,
    pub generators: Vec<GeneratorSpec>,
}

fn lattice_of(degree: i64, kind: &str) -> Result<PicardLattice> {
    let selector = KindSelector::from_name(kind).ok_or_else(|| Error::KindMismatch {
        kind: kind.to_string(),
        degree,
    })?;
    standard_lattice(degree, selector)
}

impl SurfaceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_spec(spec: &SurfaceSpec) -> Self {
        SurfaceFile {
            degree: spec.degree().into(),
            kind: spec.lattice().kind().selector().name().to_string(),
            minus_two_curves: spec.minus_two_curves().iter().map(|c| c.0.clone()).collect(),
        }
    }

    /// Builds the surface without validating it.
    pub fn to_spec(&self) -> Result<SurfaceSpec> {
        let lat = lattice_of(self.degree, &self.kind)?;
        let curves = self.minus_two_curves.iter().cloned().map(DivisorClass::new).collect();
        Ok(SurfaceSpec::new(lat, curves))
    }
}

impl ActionFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// Generators are written as matrices.
    pub fn from_action(action: &GroupAction) -> Self {
        let lat = action.lattice();
        ActionFile {
            degree: lat.degree().into(),
            kind: lat.kind().selector().name().to_string(),
            generators: action
                .generators()
                .iter()
                .map(|g| GeneratorSpec::Matrix(g.rows()))
                .collect(),
        }
    }

    pub fn to_action(&self) -> Result<GroupAction> {
        let lat = lattice_of(self.degree, &self.kind)?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let m = match g {
                GeneratorSpec::Word(letters) => {
                    let word = letters
                        .iter()
                        .map(|l| pairs::parse_reflection(&lat, l))
                        .collect::<Result<Vec<_>>>()?;
                    pairs::action_from_words(&lat, &[word])?.generators()[0].clone()
                }
                GeneratorSpec::Perm5(p) => {
                    if lat != PicardLattice::of_kind(crate::lattice::SurfaceKind::Blowup(5)) {
                        return Err(Error::Format("perm5 generators need a degree 5 blowup".into()));
                    }
                    pairs::s5_matrix(p)?
                }
                GeneratorSpec::Matrix(rows) => {
                    if rows.len() != lat.rank() || rows.iter().any(|r| r.len() != lat.rank()) {
                        return Err(Error::DimensionMismatch {
                            expected: lat.rank(),
                            got: rows.len(),
                        });
                    }
                    LatticeMap::from_rows(rows)
                }
            };
            gens.push(m);
        }
        GroupAction::generated_by(&lat, gens)
    }
}
