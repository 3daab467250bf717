//! JSON input files: groups, Galois contexts and Brauer models.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::csa::{models_from_json, BrauerModel, ModelRegistry};
use crate::group::{named_group, FiniteGroup, Subgroup};
use crate::motive::{make_context, FieldNames, GaloisContext};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// `{"table": [[..]]}`, `{"named": {"family": "S", "n": 3}}`,
/// `{"permutations": [[..]]}` or `{"product": [g, h, ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    Named { family: String, n: usize },
    Permutations(Vec<Vec<usize>>),
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, Error> {
        Ok(match self {
            GroupSpec::Table(t) => FiniteGroup::from_table(t)?,
            GroupSpec::Named { family, n } => named_group(family, *n)?,
            GroupSpec::Permutations(p) => FiniteGroup::from_permutations(p)?,
            GroupSpec::Product(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::Schema("empty product".into()))?;
                let mut acc = first.build()?;
                for p in it {
                    acc = FiniteGroup::direct_product(&acc, &p.build()?)?;
                }
                acc
            }
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextFile {
    pub schema_version: u32,
    pub group: GroupSpec,
    /// Members of `H`.
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    #[serde(default)]
    pub names: FieldNames,
    #[serde(default)]
    pub field_names: BTreeMap<String, String>,
}

impl ContextFile {
    pub fn build(&self) -> Result<GaloisContext, Error> {
        check_version(self.schema_version)?;
        let g = self.group.build()?;
        let h = Subgroup::new(&g, self.h.clone())?;
        Ok(make_context(g, h, self.names.clone())?.with_field_names(self.field_names.clone()))
    }
}

fn check_version(v: u32) -> Result<(), Error> {
    if v != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

pub fn context_from_json(value: Value) -> Result<GaloisContext, Error> {
    let file: ContextFile = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    file.build()
}

pub fn group_from_json(value: Value) -> Result<FiniteGroup, Error> {
    let spec: GroupSpec = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    spec.build()
}

/// Built-in models plus those in `value`, with all links re-checked.
pub fn registry_from_json(value: Option<Value>) -> Result<ModelRegistry, Error> {
    let mut reg = ModelRegistry::builtin();
    if let Some(v) = value {
        let models: Vec<BrauerModel> = models_from_json(v).map_err(Error::Schema)?;
        for m in models {
            reg.insert(m);
        }
        reg.validate()?;
    }
    Ok(reg)
}
