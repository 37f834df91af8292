use serde::{Deserialize, Serialize};
use serde_json::Value;

use essmod::algebra::{AlgebraElement, RightIdeal};
use essmod::field::{FieldModuleSpec, SymbolicSubset};
use essmod::module::Submodule;

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "essmod/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    RightIdeal,
    ModuleSubmodule,
    Field,
}

/// Ground truth planted by the generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub essential: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<SymbolicSubset>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub schema: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightIdealPayload {
    pub ideal: RightIdeal,
    /// Elements `x` whose ideals `xA` the witness command works with.
    #[serde(default)]
    pub generators: Vec<AlgebraElement>,
}

/// A parsed payload.
#[derive(Clone, Debug)]
pub enum Payload {
    RightIdeal(RightIdealPayload),
    ModuleSubmodule(Submodule),
    Field(FieldModuleSpec),
}

impl Instance {
    pub fn new(kind: Kind, seed: Option<u64>, payload: Value, expected: Option<Expected>) -> Self {
        Self { schema: SCHEMA.to_string(), kind, seed, payload, expected }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let inst: Instance = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if inst.schema != SCHEMA {
            return Err(CliError::Schema(format!("unsupported schema '{}'", inst.schema)));
        }
        Ok(inst)
    }

    /// Validates the payload against the schema of its kind.
    pub fn parse_payload(&self) -> CliResult<Payload> {
        let schema = |e: serde_json::Error| CliError::Schema(format!("{:?} payload: {e}", self.kind));
        Ok(match self.kind {
            Kind::RightIdeal => {
                let p: RightIdealPayload = serde_json::from_value(self.payload.clone()).map_err(schema)?;
                if p.generators.iter().any(|g| g.shape() != p.ideal.shape()) {
                    return Err(CliError::Schema("generator over a different algebra".into()));
                }
                Payload::RightIdeal(p)
            }
            Kind::ModuleSubmodule => Payload::ModuleSubmodule(serde_json::from_value(self.payload.clone()).map_err(schema)?),
            Kind::Field => Payload::Field(serde_json::from_value(self.payload.clone()).map_err(schema)?),
        })
    }
}
