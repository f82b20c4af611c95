//! Frame-condition validation.
//!
//! Each condition is checked literally, with its set quantifiers ranging over
//! the full powerset of states (the finite-model reading of `D_a`). A
//! condition is a universally quantified implication; the validator
//! enumerates bindings of the outer universal variables and evaluates the
//! remaining body at each. Bindings that make the hypothesis vacuous are
//! skipped only where a hypothesis forces a set to be a stored neighbourhood
//! member. Every reported [`Violation`] carries its binding so the body can be
//! re-evaluated on it.

mod conditions;
mod da;

use std::fmt;

use thiserror::Error;

use crate::kernel::{Agent, Model, StateSet};

pub use conditions::Condition;
pub use da::{check_da_closure, DaCondition, DaFamily, FamilyTooLarge, FAMILY_CAP};

/// Values of the universally quantified variables that falsify a condition.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Binding {
    pub x: Option<usize>,
    pub y: Option<usize>,
    pub z: Option<usize>,
    pub u: Option<usize>,
    pub q1: Option<StateSet>,
    pub q2: Option<StateSet>,
}

impl Binding {
    pub(crate) fn at(x: usize) -> Self {
        Binding {
            x: Some(x),
            ..Default::default()
        }
    }

    pub fn render(&self, m: &Model) -> String {
        let mut parts = Vec::new();
        for (name, state) in [("x", self.x), ("y", self.y), ("z", self.z), ("u", self.u)] {
            if let Some(s) = state {
                parts.push(format!("{name}={}", m.state_name(s)));
            }
        }
        for (name, set) in [("Q1", &self.q1), ("Q2", &self.q2)] {
            if let Some(q) = set {
                parts.push(format!("{name}={}", m.render_set(q)));
            }
        }
        parts.join(" ")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ConditionId {
    Frame(Condition),
    Da(DaCondition),
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::Frame(c) => f.write_str(c.name()),
            ConditionId::Da(c) => f.write_str(c.name()),
        }
    }
}

/// A failed condition with the binding that falsifies it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub condition: ConditionId,
    pub agent: Agent,
    pub witness: Binding,
    pub note: String,
}

impl Violation {
    /// Re-evaluates the condition body at the witness binding; `true` means
    /// the body is false there, i.e. the violation is genuine.
    pub fn reproduces(&self, m: &Model) -> bool {
        self.reproduces_in(m, &DaFamily::Powerset)
    }

    pub fn reproduces_in(&self, m: &Model, da: &DaFamily) -> bool {
        let Ok(frame) = m.agent_frame(&self.agent) else {
            return false;
        };
        let agent = m.agent_index(frame.agent().name()).expect("frame exists");
        match self.condition {
            ConditionId::Frame(c) => !conditions::Ctx::new(m, agent).body(c, &self.witness),
            ConditionId::Da(c) => !da::body(m, agent, da, c, &self.witness),
        }
    }

    pub fn render(&self, m: &Model) -> String {
        format!(
            "{} agent={} {}: {}",
            self.condition,
            self.agent,
            self.witness.render(m),
            self.note
        )
    }
}

/// Enumeration limits for conditions quantifying over sets of states.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Caps {
    /// Largest model checked for conditions with one set quantifier.
    pub one_set: usize,
    /// Largest model checked for conditions with two set quantifiers.
    pub two_sets: usize,
    /// Stop after this many violations per condition and agent.
    pub first_k: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            one_set: 16,
            two_sets: 10,
            first_k: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{states} states exceed the cap of {cap} for conditions with {quantifiers} set quantifier(s)")]
pub struct CapExceeded {
    pub states: usize,
    pub cap: usize,
    pub quantifiers: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Skipped {
    pub condition: ConditionId,
    pub agent: Agent,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub skipped: Vec<Skipped>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.skipped.is_empty()
    }

    /// Distinct violated condition names, in catalog order of first appearance.
    pub fn violated(&self) -> Vec<ConditionId> {
        let mut out: Vec<ConditionId> = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.condition) {
                out.push(v.condition);
            }
        }
        out
    }

    pub fn render(&self, m: &Model) -> String {
        let mut out = String::from(if self.passed() { "PASSED\n" } else { "FAILED\n" });
        for v in &self.violations {
            out.push_str("VIOLATION ");
            out.push_str(&v.render(m));
            out.push('\n');
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIPPED {} agent={}: {}\n", s.condition, s.agent, s.reason));
        }
        out
    }
}

/// Checks one condition for every agent.
pub fn check_condition(c: Condition, m: &Model) -> Result<Vec<Violation>, CapExceeded> {
    check_condition_with(c, m, Caps::default())
}

pub fn check_condition_with(c: Condition, m: &Model, caps: Caps) -> Result<Vec<Violation>, CapExceeded> {
    let cap = match c.set_quantifiers() {
        0 => None,
        1 => Some(caps.one_set),
        _ => Some(caps.two_sets),
    };
    if let Some(cap) = cap {
        if m.len() > cap {
            return Err(CapExceeded {
                states: m.len(),
                cap,
                quantifiers: c.set_quantifiers(),
            });
        }
    }
    let mut out = Vec::new();
    for agent in 0..m.agents().len() {
        out.extend(conditions::Ctx::new(m, agent).violations(c, caps.first_k));
    }
    Ok(out)
}

/// Runs every condition in catalog order, then the `D_a` closure check with
/// `D_a` the full powerset.
pub fn validate_model(m: &Model) -> ValidationReport {
    validate_model_with(m, Caps::default())
}

pub fn validate_model_with(m: &Model, caps: Caps) -> ValidationReport {
    let mut report = ValidationReport::default();
    for c in Condition::ALL {
        match check_condition_with(c, m, caps) {
            Ok(vs) => report.violations.extend(vs),
            Err(cap) => {
                for frame in m.agents() {
                    report.skipped.push(Skipped {
                        condition: ConditionId::Frame(c),
                        agent: frame.agent().clone(),
                        reason: cap.to_string(),
                    });
                }
            }
        }
    }
    match check_da_closure(m, &DaFamily::Powerset) {
        Ok(vs) => report.violations.extend(vs),
        Err(cap) => unreachable!("powerset closure never enumerates: {cap}"),
    }
    report
}

#[cfg(test)]
mod tests;
