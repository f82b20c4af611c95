//! Labelling model checker.
//!
//! Subformulas of the core rewrite are processed innermost first. Each state
//! carries the set of subformulas found true there; modal clauses go through
//! the `pre_modal` primitives, `EF` and `E[_ U _]` grow backwards from their
//! goal states over temporal predecessors, and `EG` seeds from the nontrivial
//! strongly connected components of its operand's states.

mod scc;

use std::collections::{BTreeSet, HashMap};

pub use scc::{tarjan_scc, Component, SccPartition};

use crate::kernel::{Agent, EvalError, Formula, HoodKind, Model, Relation, StateSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PreKind {
    B,
    P,
    I,
    AX,
    EX,
}

impl PreKind {
    fn name(self) -> &'static str {
        match self {
            PreKind::B => "B",
            PreKind::P => "P",
            PreKind::I => "I",
            PreKind::AX => "AX",
            PreKind::EX => "EX",
        }
    }
}

/// Predecessor-style primitive for one modal operator.
///
/// `B` and `AX` are universal over the belief/temporal successors, `EX` is
/// existential, and `P`/`I` test exact membership of `rho` in the state's
/// neighbourhood family.
pub fn pre_modal(kind: PreKind, m: &Model, agent: Option<&Agent>, rho: &StateSet) -> Result<StateSet, EvalError> {
    let n = m.len();
    let frame = match kind {
        PreKind::B | PreKind::P | PreKind::I => {
            let agent = agent.ok_or(EvalError::MissingAgent(kind.name()))?;
            Some(m.agent_frame(agent)?)
        }
        PreKind::AX | PreKind::EX => None,
    };
    let keep = |s: usize| match (kind, frame) {
        (PreKind::B, Some(f)) => f.belief().successors(s).is_subset(rho),
        (PreKind::P, Some(f)) => f.hood(HoodKind::Preference, s).contains(rho),
        (PreKind::I, Some(f)) => f.hood(HoodKind::Intention, s).contains(rho),
        (PreKind::AX, _) => m.temporal().successors(s).is_subset(rho),
        (PreKind::EX, _) => !m.temporal().successors(s).is_disjoint(rho),
        _ => unreachable!(),
    };
    Ok(StateSet::from_indices(n, (0..n).filter(|&s| keep(s))))
}

/// Per-state sets of subformulas known to hold. Stored column-wise: one state
/// set per subformula. Labels can only be added.
#[derive(Clone, Debug)]
pub struct LabelMap {
    formulas: Vec<Formula>,
    ids: HashMap<Formula, usize>,
    columns: Vec<StateSet>,
    universe: usize,
}

impl LabelMap {
    fn new(universe: usize) -> Self {
        Self {
            formulas: Vec::new(),
            ids: HashMap::new(),
            columns: Vec::new(),
            universe,
        }
    }

    fn intern(&mut self, f: &Formula) -> (usize, bool) {
        if let Some(&id) = self.ids.get(f) {
            return (id, false);
        }
        let id = self.formulas.len();
        self.formulas.push(f.clone());
        self.ids.insert(f.clone(), id);
        self.columns.push(StateSet::empty(self.universe));
        (id, true)
    }

    /// Adds `formulas[id]` to `label(state)`; returns whether it was new.
    fn mark(&mut self, id: usize, state: usize) -> bool {
        self.columns[id].insert(state)
    }

    fn mark_all(&mut self, id: usize, states: &StateSet) {
        self.columns[id].union_with(states);
    }

    fn has(&self, id: usize, state: usize) -> bool {
        self.columns[id].contains(state)
    }

    /// `{s | f ∈ label(s)}`, if `f` was processed.
    pub fn states_of(&self, f: &Formula) -> Option<&StateSet> {
        self.ids.get(f).map(|&id| &self.columns[id])
    }

    /// `label(s)`, in processing order.
    pub fn label(&self, state: usize) -> impl Iterator<Item = &Formula> {
        self.formulas
            .iter()
            .zip(&self.columns)
            .filter(move |(_, col)| col.contains(state))
            .map(|(f, _)| f)
    }

    /// Subformulas in the order they were processed (children first).
    pub fn processed(&self) -> &[Formula] {
        &self.formulas
    }
}

struct Run<'m> {
    model: &'m Model,
    predecessors: Relation,
    labels: LabelMap,
}

impl Run<'_> {
    /// Post-order over the core syntax tree. Returns the id of `f`.
    fn process(&mut self, f: &Formula) -> Result<usize, EvalError> {
        if let Some(&id) = self.labels.ids.get(f) {
            return Ok(id);
        }
        let child_ids = f
            .children()
            .into_iter()
            .map(|c| self.process(c))
            .collect::<Result<Vec<_>, _>>()?;
        let (id, fresh) = self.labels.intern(f);
        debug_assert!(fresh);
        let n = self.model.len();
        let col = |labels: &LabelMap, i: usize| labels.columns[child_ids[i]].clone();

        use Formula::*;
        match f {
            Atom(p) => {
                let ext = self.model.extension(p)?.clone();
                self.labels.mark_all(id, &ext);
            }
            True => self.labels.mark_all(id, &StateSet::full(n)),
            Not(_) => {
                let t = col(&self.labels, 0);
                self.labels.mark_all(id, &t.complement());
            }
            And(..) => {
                let t = col(&self.labels, 0).intersection(&col(&self.labels, 1));
                self.labels.mark_all(id, &t);
            }
            Or(..) => {
                let t = col(&self.labels, 0).union(&col(&self.labels, 1));
                self.labels.mark_all(id, &t);
            }
            B(agent, _) | P(agent, _) | I(agent, _) => {
                let kind = match f {
                    B(..) => PreKind::B,
                    P(..) => PreKind::P,
                    _ => PreKind::I,
                };
                let t = pre_modal(kind, self.model, Some(agent), &col(&self.labels, 0))?;
                self.labels.mark_all(id, &t);
            }
            AX(_) | EX(_) => {
                let kind = if matches!(f, AX(_)) { PreKind::AX } else { PreKind::EX };
                let t = pre_modal(kind, self.model, None, &col(&self.labels, 0))?;
                self.labels.mark_all(id, &t);
            }
            EF(_) => {
                let seed = col(&self.labels, 0);
                self.backward(id, &seed, &StateSet::full(n));
            }
            EU(..) => {
                let hold = col(&self.labels, 0);
                let goal = col(&self.labels, 1);
                self.backward(id, &goal, &hold);
            }
            EG(_) => {
                let inside = col(&self.labels, 0);
                let sccs = tarjan_scc(&inside, self.model.temporal());
                let seed = sccs.nontrivial_states(n);
                self.backward(id, &seed, &inside);
            }
            Imp(..) | Iff(..) | D(..) | AG(_) | AF(_) | AU(..) => {
                unreachable!("derived operators are rewritten before labelling")
            }
        }
        Ok(id)
    }

    /// Labels `seed`, then keeps labelling temporal predecessors that lie in
    /// `allowed` until no new state is reached. Lowest index is popped first.
    fn backward(&mut self, id: usize, seed: &StateSet, allowed: &StateSet) {
        let mut work: BTreeSet<usize> = BTreeSet::new();
        for s in seed {
            if self.labels.mark(id, s) {
                work.insert(s);
            }
        }
        while let Some(s) = work.pop_first() {
            for t in self.predecessors.successors(s) {
                if !self.labels.has(id, t) && allowed.contains(t) {
                    self.labels.mark(id, t);
                    work.insert(t);
                }
            }
        }
    }
}

/// Labels every subformula of the core rewrite of `f` and returns the final
/// label map alongside `Eval(M, f)`.
pub fn eval_with_labels(m: &Model, f: &Formula) -> Result<(StateSet, LabelMap), EvalError> {
    m.check_symbols(f)?;
    let core = f.rewrite_derived();
    let mut run = Run {
        model: m,
        predecessors: m.temporal().reversed(),
        labels: LabelMap::new(m.len()),
    };
    let id = run.process(&core)?;
    let result = run.labels.columns[id].clone();
    Ok((result, run.labels))
}

/// `Eval(M, f)`: the states satisfying `f`.
pub fn eval(m: &Model, f: &Formula) -> Result<StateSet, EvalError> {
    eval_with_labels(m, f).map(|(states, _)| states)
}

/// `f` holds at every state of `m`.
pub fn is_valid(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    Ok(eval(m, f)?.is_full())
}

/// `f` holds at some state of `m`.
pub fn is_satisfiable_in(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    Ok(!eval(m, f)?.is_empty())
}

/// The lowest-index state where `f` fails, if any.
pub fn counterexample(m: &Model, f: &Formula) -> Result<Option<usize>, EvalError> {
    Ok(eval(m, f)?.complement().first())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::example_model;
    use crate::textio::parse_formula;

    fn states(m: &Model, text: &str) -> Vec<usize> {
        eval(m, &parse_formula(text).unwrap()).unwrap().iter().collect()
    }

    #[test]
    fn pre_examples() {
        let mut m = Model::new(["s0", "s1"], Vec::<String>::new(), ["a"]).unwrap();
        m.temporal_mut().insert(0, 1);
        let ex = pre_modal(PreKind::EX, &m, None, &StateSet::singleton(2, 1)).unwrap();
        assert_eq!(ex, StateSet::singleton(2, 0));
        let ax = pre_modal(PreKind::AX, &m, None, &StateSet::empty(2)).unwrap();
        assert_eq!(ax, StateSet::singleton(2, 1));

        let a = Agent::new("a");
        m.add_to_hood(HoodKind::Preference, 0, 0, StateSet::full(2));
        let hit = pre_modal(PreKind::P, &m, Some(&a), &StateSet::full(2)).unwrap();
        assert_eq!(hit, StateSet::singleton(2, 0));
        let miss = pre_modal(PreKind::P, &m, Some(&a), &StateSet::singleton(2, 0)).unwrap();
        assert!(miss.is_empty());
    }

    #[test]
    fn mental_pre_needs_an_agent() {
        let m = example_model();
        assert_eq!(
            pre_modal(PreKind::B, &m, None, &m.all_states()),
            Err(EvalError::MissingAgent("B"))
        );
        assert_eq!(
            pre_modal(PreKind::I, &m, Some(&Agent::new("zz")), &m.all_states()),
            Err(EvalError::UnknownAgent("zz".into()))
        );
    }

    #[test]
    fn example_model_evaluations() {
        let m = example_model();
        assert_eq!(states(&m, "EG p"), vec![0]);
        assert_eq!(states(&m, "E[true U p]"), vec![0]);
        assert_eq!(states(&m, "B{a} true"), vec![0, 1]);
    }

    #[test]
    fn always_globally_when_atom_holds_everywhere() {
        let mut m = Model::new(["s0", "s1", "s2"], ["p"], ["a"]).unwrap();
        for s in 0..3 {
            m.set_label(s, 0, true);
        }
        m.temporal_mut().insert(0, 1);
        m.temporal_mut().insert(1, 2);
        assert_eq!(states(&m, "AG p"), vec![0, 1, 2]);
    }

    #[test]
    fn validity_and_satisfiability() {
        let m = example_model();
        assert!(is_valid(&m, &Formula::True).unwrap());
        assert!(!is_valid(&m, &Formula::atom("p")).unwrap());
        assert!(is_satisfiable_in(&m, &Formula::atom("p")).unwrap());
        assert_eq!(counterexample(&m, &Formula::atom("p")).unwrap(), Some(1));
    }

    #[test]
    fn eg_reaches_cycles_through_its_operand() {
        // 0 -> 1 -> 2 -> 2, p at 0,1,2; 3 -> 0 but p fails at 3.
        let mut m = Model::new(["s0", "s1", "s2", "s3"], ["p"], ["a"]).unwrap();
        for s in 0..3 {
            m.set_label(s, 0, true);
        }
        for (x, y) in [(0, 1), (1, 2), (2, 2), (3, 0)] {
            m.temporal_mut().insert(x, y);
        }
        assert_eq!(states(&m, "EG p"), vec![0, 1, 2]);
        let mut no_loop = m.clone();
        let mut t = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        no_loop.set_temporal(t.clone());
        assert!(states(&no_loop, "EG p").is_empty());
        t.insert(1, 0);
        no_loop.set_temporal(t);
        assert_eq!(states(&no_loop, "EG p"), vec![0, 1]);
    }

    #[test]
    fn labels_hold_every_processed_subformula() {
        let m = example_model();
        let f = parse_formula("B{a} EX p | EG !p").unwrap();
        let (result, labels) = eval_with_labels(&m, &f).unwrap();
        assert_eq!(labels.states_of(&f.rewrite_derived()), Some(&result));
        assert_eq!(labels.processed().last(), Some(&f.rewrite_derived()));
        let at_s0: Vec<String> = labels.label(0).map(ToString::to_string).collect();
        assert!(at_s0.contains(&"p".to_string()));
        assert!(at_s0.contains(&"EX p".to_string()));
    }
}
