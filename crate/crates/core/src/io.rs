//! Problem files.
//!
//! A problem is a JSON document:
//!
//! ```json
//! {
//!   "actions": [{ "name": "A", "modes": ["a1", "a2"] }],
//!   "strategic_state": { "amplitudes": [[0.6, 0.0], [0.0, 0.8]], "normalize": false },
//!   "prospects": [
//!     { "name": "first", "amplitudes": [[1, 0], [0, 0]] },
//!     { "name": "either", "support": { "A": ["a1", "a2"] }, "phases": [[1, 0], [-1, 0]] }
//!   ],
//!   "machine": { "shots": 0, "seed": 0 }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Amplitude lists follow the basis
//! order of [`crate::action_algebra`]. A prospect gives `amplitudes`,
//! `support`, or both (then the amplitudes must vanish off the support); with
//! only a support it becomes the uniform superposition over it. Actions left
//! out of a support map keep all their modes. `normalize` and `machine` are
//! optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action_algebra::{prospect_support, Action, ActionRing};
use crate::decision::ProspectLattice;
use crate::hilbert::{make_strategic, MindSpace, StrategicState};
use crate::machine::MachineConfig;
use crate::prospects::{prospect_from_amplitudes, prospect_from_support_uniform, ProspectState};
use crate::{Error, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    /// Malformed JSON.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON that does not describe a valid problem.
    #[error("invalid `{path}`: {message}")]
    Semantic { path: String, message: String },
}

impl ProblemError {
    fn semantic(path: impl Into<String>, err: impl ToString) -> Self {
        ProblemError::Semantic {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            ProblemError::Semantic { path, .. } => Some(path),
            ProblemError::Syntax { .. } => None,
        }
    }
}

pub type Complex = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub actions: Vec<ActionSpec>,
    pub strategic_state: StrategicSpec,
    pub prospects: Vec<ProspectSpec>,
    #[serde(default)]
    pub machine: MachineSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub name: String,
    pub modes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategicSpec {
    pub amplitudes: Vec<Complex>,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProspectSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Complex>>,
    /// Action name to selected mode names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<BTreeMap<String, Vec<String>>>,
    /// One unit-modulus phase per support member, in basis order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<Complex>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineSpec {
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub report_raw: bool,
}

/// A fully validated problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub ring: ActionRing,
    pub space: MindSpace,
    pub strategic: StrategicState,
    pub lattice: ProspectLattice,
    pub machine: MachineConfig,
}

pub fn to_complex(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn from_complex(z: &C64) -> Complex {
    [z.re, z.im]
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    parse_document(text)?.validate()
}

/// Parses without semantic validation.
pub fn parse_document(text: &str) -> Result<ProblemDocument, ProblemError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ProblemDocument = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => ProblemError::semantic(path, inner),
            _ => ProblemError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            },
        }
    })?;
    Ok(doc)
}

fn msg(err: Error) -> String {
    match err {
        Error::Validation(m) | Error::Mismatch(m) | Error::DegenerateLattice(m) => m,
    }
}

impl ProblemDocument {
    pub fn validate(&self) -> Result<Problem, ProblemError> {
        for (i, a) in self.actions.iter().enumerate() {
            if a.modes.is_empty() {
                return Err(ProblemError::semantic(
                    format!("actions[{i}].modes"),
                    "an action needs at least one mode",
                ));
            }
        }
        let ring = ActionRing::new(
            self.actions
                .iter()
                .map(|a| Action {
                    name: a.name.clone(),
                    modes: a.modes.clone(),
                })
                .collect(),
        )
        .map_err(|e| ProblemError::semantic("actions", msg(e)))?;
        let space = MindSpace::from_ring(&ring);

        let amps: Vec<C64> = self
            .strategic_state
            .amplitudes
            .iter()
            .map(to_complex)
            .collect();
        let strategic = make_strategic(&space, amps, self.strategic_state.normalize)
            .map_err(|e| ProblemError::semantic("strategic_state.amplitudes", msg(e)))?;

        if self.prospects.is_empty() {
            return Err(ProblemError::semantic(
                "prospects",
                "at least one prospect is required",
            ));
        }
        let prospects = self
            .prospects
            .iter()
            .enumerate()
            .map(|(j, p)| build_prospect(&ring, &space, j, p))
            .collect::<Result<Vec<_>, _>>()?;
        let lattice = ProspectLattice::new(prospects)
            .map_err(|e| ProblemError::semantic("prospects", msg(e)))?;

        Ok(Problem {
            ring,
            space,
            strategic,
            lattice,
            machine: MachineConfig {
                shots: self.machine.shots,
                seed: self.machine.seed,
                report_raw: self.machine.report_raw,
            },
        })
    }
}

fn build_prospect(
    ring: &ActionRing,
    space: &MindSpace,
    j: usize,
    spec: &ProspectSpec,
) -> Result<ProspectState, ProblemError> {
    let at = |field: &str| format!("prospects[{j}].{field}");
    if spec.name.is_empty() {
        return Err(ProblemError::semantic(
            at("name"),
            "prospect names must be nonempty",
        ));
    }

    let support = match &spec.support {
        None => None,
        Some(map) => {
            let mut subsets: Vec<Vec<usize>> =
                ring.dims().iter().map(|&m| (1..=m).collect()).collect();
            for (action, modes) in map {
                let path = format!("prospects[{j}].support.{action}");
                let i = ring
                    .action_index(action)
                    .map_err(|e| ProblemError::semantic(&path, msg(e)))?;
                if modes.is_empty() {
                    return Err(ProblemError::semantic(&path, "mode subset is empty"));
                }
                subsets[i] = modes
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        ring.mode_index(i, m)
                            .map_err(|e| ProblemError::semantic(format!("{path}[{k}]"), msg(e)))
                    })
                    .collect::<Result<_, _>>()?;
            }
            Some(
                prospect_support(ring, &subsets)
                    .map_err(|e| ProblemError::semantic(at("support"), msg(e)))?,
            )
        }
    };

    match (&spec.amplitudes, support) {
        (Some(amps), support) => {
            if spec.phases.is_some() {
                return Err(ProblemError::semantic(
                    at("phases"),
                    "phases only apply to support-only prospects",
                ));
            }
            let amps: Vec<C64> = amps.iter().map(to_complex).collect();
            prospect_from_amplitudes(space, &spec.name, amps, support)
                .map_err(|e| ProblemError::semantic(at("amplitudes"), msg(e)))
        }
        (None, Some(event)) => {
            let phases: Option<Vec<C64>> = spec
                .phases
                .as_ref()
                .map(|p| p.iter().map(to_complex).collect());
            prospect_from_support_uniform(space, &spec.name, &event, phases.as_deref())
                .map_err(|e| ProblemError::semantic(at("phases"), msg(e)))
        }
        (None, None) => Err(ProblemError::semantic(
            format!("prospects[{j}]"),
            "a prospect needs `amplitudes` or `support`",
        )),
    }
}
