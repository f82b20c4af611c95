//! Reference denotational evaluator.
//!
//! Every clause is computed by quantifying over states and relation pairs
//! directly, and the temporal fixpoints by plain Kleene iteration. It shares no
//! code with [`crate::checker`] beyond the model and set types, so the two can
//! be compared against each other.

use crate::kernel::{EvalError, Formula, HoodKind, Model, StateSet};

/// The denotation of a formula in a model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Denotation {
    pub formula: Formula,
    pub value: StateSet,
}

/// `[[f]]_M`.
pub fn denote(m: &Model, f: &Formula) -> Result<StateSet, EvalError> {
    m.check_symbols(f)?;
    eval_core(m, &f.rewrite_derived())
}

pub fn denotation(m: &Model, f: &Formula) -> Result<Denotation, EvalError> {
    let core = f.rewrite_derived();
    m.check_symbols(&core)?;
    let value = eval_core(m, &core)?;
    Ok(Denotation { formula: core, value })
}

fn select(m: &Model, pred: impl Fn(usize) -> bool) -> StateSet {
    StateSet::from_indices(m.len(), (0..m.len()).filter(|&s| pred(s)))
}

fn all_successors_in(m: &Model, rel: &crate::kernel::Relation, target: &StateSet) -> StateSet {
    select(m, |s| (0..m.len()).all(|t| !rel.contains(s, t) || target.contains(t)))
}

/// `{s | ∃t. (s,t) ∈ R^X ∧ t ∈ target}`.
fn some_successor_in(m: &Model, target: &StateSet) -> StateSet {
    select(m, |s| {
        (0..m.len()).any(|t| m.temporal().contains(s, t) && target.contains(t))
    })
}

fn hood_contains(
    m: &Model,
    kind: HoodKind,
    agent: &crate::kernel::Agent,
    target: &StateSet,
) -> Result<StateSet, EvalError> {
    let frame = m.agent_frame(agent)?;
    Ok(select(m, |s| frame.hood(kind, s).iter().any(|q| q == target)))
}

fn eval_core(m: &Model, f: &Formula) -> Result<StateSet, EvalError> {
    use Formula::*;
    Ok(match f {
        Atom(p) => {
            let ext = m.extension(p)?;
            select(m, |s| ext.contains(s))
        }
        True => select(m, |_| true),
        Not(g) => {
            let inner = eval_core(m, g)?;
            select(m, |s| !inner.contains(s))
        }
        And(a, b) => {
            let (a, b) = (eval_core(m, a)?, eval_core(m, b)?);
            select(m, |s| a.contains(s) && b.contains(s))
        }
        Or(a, b) => {
            let (a, b) = (eval_core(m, a)?, eval_core(m, b)?);
            select(m, |s| a.contains(s) || b.contains(s))
        }
        B(agent, g) => {
            let inner = eval_core(m, g)?;
            all_successors_in(m, m.agent_frame(agent)?.belief(), &inner)
        }
        P(agent, g) => hood_contains(m, HoodKind::Preference, agent, &eval_core(m, g)?)?,
        I(agent, g) => hood_contains(m, HoodKind::Intention, agent, &eval_core(m, g)?)?,
        AX(g) => {
            let inner = eval_core(m, g)?;
            all_successors_in(m, m.temporal(), &inner)
        }
        EX(g) => some_successor_in(m, &eval_core(m, g)?),
        EF(g) => least_until(m, &m.all_states(), &eval_core(m, g)?),
        EU(a, b) => least_until(m, &eval_core(m, a)?, &eval_core(m, b)?),
        EG(g) => greatest_globally(m, &eval_core(m, g)?),
        Imp(..) | Iff(..) | D(..) | AG(_) | AF(_) | AU(..) => {
            return eval_core(m, &f.rewrite_derived());
        }
    })
}

/// Least `X` with `X = goal ∪ (hold ∩ preEX(X))`, iterated upward from `∅`.
fn least_until(m: &Model, hold: &StateSet, goal: &StateSet) -> StateSet {
    let mut x = m.no_states();
    for _ in 0..=m.len() + 1 {
        let pre = some_successor_in(m, &x);
        let next = select(m, |s| goal.contains(s) || (hold.contains(s) && pre.contains(s)));
        if next == x {
            return x;
        }
        x = next;
    }
    unreachable!("monotone iteration over {} states must stabilise", m.len())
}

/// Greatest `X` with `X = hold ∩ preEX(X)`, iterated downward from `hold`.
fn greatest_globally(m: &Model, hold: &StateSet) -> StateSet {
    let mut x = hold.clone();
    for _ in 0..=m.len() + 1 {
        let pre = some_successor_in(m, &x);
        let next = select(m, |s| hold.contains(s) && pre.contains(s));
        if next == x {
            return x;
        }
        x = next;
    }
    unreachable!("monotone iteration over {} states must stabilise", m.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{example_model, Agent};
    use crate::textio::parse_formula;

    fn on_example(text: &str) -> Vec<usize> {
        denote(&example_model(), &parse_formula(text).unwrap())
            .unwrap()
            .iter()
            .collect()
    }

    #[test]
    fn example_model_denotations() {
        assert_eq!(on_example("B{a} p"), Vec::<usize>::new());
        assert_eq!(on_example("P{a} true"), vec![0, 1]);
        assert_eq!(on_example("I{a} p"), Vec::<usize>::new());
        assert_eq!(on_example("EG p"), vec![0]);
        assert_eq!(on_example("EX p"), vec![0]);
    }

    #[test]
    fn preference_is_exact_membership() {
        // {S} is the only preferred set, so P{a}p (denoting {s0}) fails everywhere.
        assert!(on_example("P{a} p").is_empty());
        assert_eq!(on_example("P{a} (p | !p)"), vec![0, 1]);
    }

    #[test]
    fn deadlock_states() {
        let mut m = Model::new(["s0", "s1"], ["p"], ["a"]).unwrap();
        m.set_label(0, 0, true);
        m.set_label(1, 0, true);
        m.temporal_mut().insert(0, 1);
        let eval = |t: &str| denote(&m, &parse_formula(t).unwrap()).unwrap();
        assert!(eval("EG p").is_empty());
        assert_eq!(eval("AX !true").iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(eval("EX true").iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn unknown_symbols_are_named() {
        let m = example_model();
        assert_eq!(
            denote(&m, &Formula::atom("zz")),
            Err(EvalError::UnknownAtom("zz".into()))
        );
        assert_eq!(
            denote(&m, &Formula::intends(&Agent::new("b"), Formula::True)),
            Err(EvalError::UnknownAgent("b".into()))
        );
    }
}
