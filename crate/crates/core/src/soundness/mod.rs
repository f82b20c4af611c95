//! Semantic soundness harness: every axiom instance must be valid, and every
//! rule must carry validity of its premises to its conclusion, in each
//! frame-valid model.

mod generate;
mod pool;
mod schema;

use thiserror::Error;

use crate::checker;
use crate::frames::validate_model;
use crate::kernel::{EvalError, Model};

pub use generate::{
    cluster_model, cluster_temporal, f3_fixture, generate_frame_valid_models, kd45_cluster, principal_filter, Family,
    GenError, LabelledModel,
};
pub use pool::{base_formulas, binding_pool};
pub use schema::{
    instantiate, pointwise, Bindings, Instance, InstantiateError, MetaVar, RuleObligation, SchemaId, SchemaKind,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid,
    Counterexample { state: usize, name: String },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchemaInstance {
    pub schema: SchemaId,
    pub model_id: String,
    pub binding_id: String,
    pub bindings: Bindings,
    pub verdict: Verdict,
    /// For rules: whether every premise was valid, i.e. the obligation was live.
    pub premises_hold: Option<bool>,
}

impl SchemaInstance {
    pub fn line(&self) -> String {
        let verdict = match &self.verdict {
            Verdict::Valid => "VALID".to_string(),
            Verdict::Counterexample { name, .. } => format!("CEX:{name}"),
        };
        format!("{} {} {} {}", self.schema, self.model_id, self.binding_id, verdict)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SuiteError {
    #[error("model {id} is not frame-valid:\n{report}")]
    Rejected { id: String, report: String },
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("binding {binding} on model {model}: {source}")]
    Eval {
        model: String,
        binding: String,
        source: EvalError,
    },
}

pub fn binding_id(index: usize) -> String {
    format!("b{index:03}")
}

/// Decides one instance in one model.
pub fn decide(m: &Model, instance: &Instance) -> Result<(Verdict, Option<bool>), EvalError> {
    let verdict_of = |f| {
        checker::counterexample(m, f).map(|cex| match cex {
            None => Verdict::Valid,
            Some(state) => Verdict::Counterexample {
                state,
                name: m.state_name(state).to_string(),
            },
        })
    };
    match instance {
        Instance::Axiom(f) => Ok((verdict_of(f)?, None)),
        Instance::Rule(r) => {
            for p in &r.premises {
                if !checker::is_valid(m, p)? {
                    return Ok((Verdict::Valid, Some(false)));
                }
            }
            Ok((verdict_of(&r.conclusion)?, Some(true)))
        }
    }
}

/// Runs every schema under every binding on every model, in (model, schema,
/// binding) order. Models must validate with nothing skipped.
pub fn run_suite(models: &[LabelledModel], pool: &[Bindings]) -> Result<Vec<SchemaInstance>, SuiteError> {
    for lm in models {
        let report = validate_model(&lm.model);
        if !report.passed() {
            return Err(SuiteError::Rejected {
                id: lm.id.clone(),
                report: report.render(&lm.model),
            });
        }
    }
    let mut out = Vec::with_capacity(models.len() * SchemaId::ALL.len() * pool.len());
    for lm in models {
        for schema in SchemaId::ALL {
            for (i, b) in pool.iter().enumerate() {
                let instance = instantiate(schema, b)?;
                let (verdict, premises_hold) = decide(&lm.model, &instance).map_err(|source| SuiteError::Eval {
                    model: lm.id.clone(),
                    binding: binding_id(i),
                    source,
                })?;
                out.push(SchemaInstance {
                    schema,
                    model_id: lm.id.clone(),
                    binding_id: binding_id(i),
                    bindings: b.clone(),
                    verdict,
                    premises_hold,
                });
            }
        }
    }
    Ok(out)
}
