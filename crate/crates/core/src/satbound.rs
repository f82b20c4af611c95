//! Bounded satisfiability by exhaustive search over small frame-valid models.
//!
//! For each size `n` the search walks labelings, then temporal relations, then
//! one KD45 belief relation per agent (generated directly, so B3 to B5 hold),
//! keeping only belief/temporal pairs that pass BX1 and BX2. If the formula
//! mentions preference or intention, neighbourhood families are enumerated
//! too. Two frame conditions make those families constant on each belief
//! class, so one family per class is chosen. Otherwise the empty families
//! are used: they satisfy every neighbourhood condition and the formula
//! cannot observe them anyway. A candidate counts against the budget when
//! it is assembled, and any hit is re-validated before it is returned.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::checker;
use crate::frames::{check_condition_with, validate_model, Caps, Condition};
use crate::kernel::{Formula, HoodKind, Model, Neighbourhood, Relation, StateSet};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_MAX_STATES: usize = 3;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SatVerdict {
    Sat { model: Model, witness: usize },
    UnsatUpTo(usize),
    Aborted { budget: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SatResult {
    pub verdict: SatVerdict,
    pub explored: u64,
    /// `|Sub*(f)|`; the state bound is two to this power.
    pub bound_exponent: usize,
    pub theoretical_bound: Option<u128>,
}

impl SatResult {
    /// UNSAT-UP-TO is a proof of unsatisfiability only once the search
    /// reached the finite-model bound.
    pub fn is_certificate(&self) -> bool {
        match (&self.verdict, self.theoretical_bound) {
            (SatVerdict::UnsatUpTo(k), Some(bound)) => (*k as u128) >= bound,
            _ => false,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SatError {
    #[error("max_states must be at least 1")]
    ZeroStates,
    #[error("internal error: a candidate failed re-verification")]
    ReverifyFailed,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureBound {
    pub formulas: BTreeSet<Formula>,
    pub exponent: usize,
    pub bound: Option<u128>,
}

pub fn closure_bound(f: &Formula) -> ClosureBound {
    let closure = f.subformula_closure();
    ClosureBound {
        exponent: closure.bound_exponent(),
        bound: closure.bound(),
        formulas: closure.formulas,
    }
}

/// Agent used when the formula names none; the model format needs one.
pub const DEFAULT_AGENT: &str = "a";

pub fn sat_search(f: &Formula, max_states: usize, budget: u64) -> Result<SatResult, SatError> {
    if max_states == 0 {
        return Err(SatError::ZeroStates);
    }
    let bound = closure_bound(f);
    let atoms: Vec<String> = f.atoms().into_iter().map(String::from).collect();
    let mut agents: Vec<String> = f.agents().into_iter().map(|a| a.name().to_string()).collect();
    if agents.is_empty() {
        agents.push(DEFAULT_AGENT.into());
    }
    let core = f.rewrite_derived();
    let mut search = Search {
        formula: f,
        closure: bound.formulas.iter().cloned().collect(),
        hoods: mentions_hoods(&core),
        atoms,
        agents,
        budget,
        explored: 0,
    };
    let finish = |search: &Search, verdict| SatResult {
        verdict,
        explored: search.explored,
        bound_exponent: bound.exponent,
        theoretical_bound: bound.bound,
    };
    for n in 1..=max_states {
        match search.size(n)? {
            Step::Found(model, witness) => return Ok(finish(&search, SatVerdict::Sat { model, witness })),
            Step::OutOfBudget => return Ok(finish(&search, SatVerdict::Aborted { budget })),
            Step::Exhausted => {}
        }
    }
    Ok(finish(&search, SatVerdict::UnsatUpTo(max_states)))
}

fn mentions_hoods(f: &Formula) -> bool {
    matches!(f, Formula::P(..) | Formula::I(..)) || f.children().into_iter().any(mentions_hoods)
}

enum Step {
    Found(Model, usize),
    Exhausted,
    OutOfBudget,
}

/// Agent, belief class and the (preference, intention) pairs allowed on it.
type Slot = (usize, StateSet, Vec<(Neighbourhood, Neighbourhood)>);

struct Search<'f> {
    formula: &'f Formula,
    closure: Vec<Formula>,
    hoods: bool,
    atoms: Vec<String>,
    agents: Vec<String>,
    budget: u64,
    explored: u64,
}

/// Binary odometer over `len` bits, starting from all false.
struct Bits {
    bits: Vec<bool>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits { bits: vec![false; len] }
    }

    fn advance(&mut self) -> bool {
        for b in self.bits.iter_mut() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return true;
            }
        }
        false
    }
}

/// Mixed-radix odometer.
fn advance_digits(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every KD45 relation on `n` states: disjoint nonempty clusters pointing
/// into themselves, and every other state pointing into one cluster.
pub fn kd45_relations(n: usize) -> Vec<Relation> {
    // role[s] = Some(c): s lies in cluster c; None: s lies outside all clusters.
    fn roles(s: usize, n: usize, clusters: usize, role: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Option<usize>>>) {
        if s == n {
            if clusters > 0 {
                out.push(role.clone());
            }
            return;
        }
        for c in 0..=clusters {
            role.push(Some(c));
            roles(s + 1, n, clusters.max(c + 1), role, out);
            role.pop();
        }
        role.push(None);
        roles(s + 1, n, clusters, role, out);
        role.pop();
    }
    let mut assignments = Vec::new();
    roles(0, n, 0, &mut Vec::new(), &mut assignments);
    let mut out = Vec::new();
    for role in assignments {
        let clusters = role.iter().flatten().max().map_or(0, |&c| c + 1);
        let members: Vec<StateSet> = (0..clusters)
            .map(|c| StateSet::from_indices(n, (0..n).filter(|&s| role[s] == Some(c))))
            .collect();
        let outside: Vec<usize> = (0..n).filter(|&s| role[s].is_none()).collect();
        let mut choice = vec![0; outside.len()];
        let radix = vec![clusters; outside.len()];
        loop {
            let mut succ: Vec<StateSet> = (0..n)
                .map(|s| role[s].map_or_else(|| StateSet::empty(n), |c| members[c].clone()))
                .collect();
            for (&s, &c) in outside.iter().zip(&choice) {
                succ[s] = members[c].clone();
            }
            out.push(Relation::from_successors(succ));
            if !advance_digits(&mut choice, &radix) {
                break;
            }
        }
    }
    out
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        if self.explored >= self.budget {
            return false;
        }
        self.explored += 1;
        true
    }

    fn size(&mut self, n: usize) -> Result<Step, SatError> {
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let base = Model::new(names, self.atoms.clone(), self.agents.clone()).expect("distinct generated names");
        let beliefs = kd45_relations(n);
        let mut labels = Bits::new(n * self.atoms.len());
        loop {
            let mut labelled = base.clone();
            for (i, &bit) in labels.bits.iter().enumerate() {
                labelled.set_label(i / self.atoms.len(), i % self.atoms.len(), bit);
            }
            let mut temporal = Bits::new(n * n);
            loop {
                let pairs = (0..n * n).filter(|&i| temporal.bits[i]).map(|i| (i / n, i % n));
                let mut timed = labelled.clone();
                timed.set_temporal(Relation::from_pairs(n, pairs));
                let step = self.beliefs(&timed, &beliefs)?;
                if !matches!(step, Step::Exhausted) {
                    return Ok(step);
                }
                if !temporal.advance() {
                    break;
                }
            }
            if !labels.advance() {
                return Ok(Step::Exhausted);
            }
        }
    }

    fn beliefs(&mut self, timed: &Model, beliefs: &[Relation]) -> Result<Step, SatError> {
        let agents = self.agents.len();
        let mut digits = vec![0; agents];
        let radix = vec![beliefs.len(); agents];
        let single = Caps {
            first_k: Some(1),
            ..Caps::default()
        };
        loop {
            if !self.tick() {
                return Ok(Step::OutOfBudget);
            }
            let mut m = timed.clone();
            for (a, &d) in digits.iter().enumerate() {
                m.set_belief(a, beliefs[d].clone());
            }
            let fits = [Condition::BX1, Condition::BX2]
                .into_iter()
                .all(|c| check_condition_with(c, &m, single).is_ok_and(|v| v.is_empty()));
            if fits {
                let step = if self.hoods {
                    self.families(&m)?
                } else {
                    self.try_model(&m)?
                };
                if !matches!(step, Step::Exhausted) {
                    return Ok(step);
                }
            }
            if !advance_digits(&mut digits, &radix) {
                return Ok(Step::Exhausted);
            }
        }
    }

    fn try_model(&self, m: &Model) -> Result<Step, SatError> {
        let hits = checker::eval(m, self.formula).expect("model declares the formula's symbols");
        let Some(witness) = hits.first() else {
            return Ok(Step::Exhausted);
        };
        if !validate_model(m).passed() {
            return Ok(Step::Exhausted);
        }
        if !checker::eval(m, self.formula).is_ok_and(|s| s.contains(witness)) {
            return Err(SatError::ReverifyFailed);
        }
        Ok(Step::Found(m.clone(), witness))
    }

    /// Member sets for neighbourhood families: denotations of the closure in
    /// the hood-free model first, then the rest of the powerset while it is
    /// small enough to enumerate families over.
    fn members(&self, m: &Model) -> Vec<StateSet> {
        let n = m.len();
        let mut out: Vec<StateSet> = Vec::new();
        for g in &self.closure {
            if let Ok(s) = checker::eval(m, g) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        if n <= 4 {
            for s in StateSet::powerset(n) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out.truncate(16);
        out
    }

    fn families(&mut self, m: &Model) -> Result<Step, SatError> {
        let n = m.len();
        let members = self.members(m);
        // Per agent and per belief class, families passing the conditions that
        // only look at that class.
        let mut slots: Vec<Slot> = Vec::new();
        for a in 0..m.agents().len() {
            let belief = m.frame(a).belief();
            let mut classes: Vec<StateSet> = Vec::new();
            for x in 0..n {
                let class = StateSet::from_indices(n, (0..n).filter(|&y| belief.successors(y) == belief.successors(x)));
                if !classes.contains(&class) {
                    classes.push(class);
                }
            }
            for class in classes {
                let Some(prefs) = self.local_families(m, a, &class, HoodKind::Preference, &members) else {
                    return Ok(Step::OutOfBudget);
                };
                let Some(intents) = self.local_families(m, a, &class, HoodKind::Intention, &members) else {
                    return Ok(Step::OutOfBudget);
                };
                let mut pairs = Vec::new();
                for i in &intents {
                    for p in &prefs {
                        if i.is_subset(p) {
                            pairs.push((p.clone(), i.clone()));
                        }
                    }
                }
                slots.push((a, class, pairs));
            }
        }
        if slots.iter().any(|s| s.2.is_empty()) {
            return Ok(Step::Exhausted);
        }
        let radix: Vec<usize> = slots.iter().map(|s| s.2.len()).collect();
        let mut digits = vec![0; slots.len()];
        loop {
            if !self.tick() {
                return Ok(Step::OutOfBudget);
            }
            let mut candidate = m.clone();
            for ((a, class, pairs), &d) in slots.iter().zip(&digits) {
                let (p, i) = &pairs[d];
                for x in class {
                    candidate.set_hood(HoodKind::Preference, *a, x, p.clone());
                    candidate.set_hood(HoodKind::Intention, *a, x, i.clone());
                }
            }
            let step = self.try_model(&candidate)?;
            if !matches!(step, Step::Exhausted) {
                return Ok(step);
            }
            if !advance_digits(&mut digits, &radix) {
                return Ok(Step::Exhausted);
            }
        }
    }

    /// `None` once the budget runs out; every probed family is one candidate.
    fn local_families(
        &mut self,
        m: &Model,
        agent: usize,
        class: &StateSet,
        kind: HoodKind,
        members: &[StateSet],
    ) -> Option<Vec<Neighbourhood>> {
        let local: &[Condition] = match kind {
            HoodKind::Preference => &[Condition::P1, Condition::P2, Condition::BP1],
            HoodKind::Intention => &[Condition::BI1, Condition::BPIEF1b, Condition::BPIEF1c],
        };
        let single = Caps {
            first_k: Some(1),
            ..Caps::default()
        };
        let mut out = Vec::new();
        let mut pick = Bits::new(members.len());
        loop {
            if !self.tick() {
                return None;
            }
            let family: Neighbourhood = members
                .iter()
                .zip(&pick.bits)
                .filter(|(_, &b)| b)
                .map(|(s, _)| s.clone())
                .collect();
            let mut probe = m.clone();
            for x in class {
                probe.set_hood(kind, agent, x, family.clone());
            }
            let ok = local
                .iter()
                .all(|&c| check_condition_with(c, &probe, single).is_ok_and(|v| v.is_empty()));
            if ok {
                out.push(family);
            }
            if !pick.advance() {
                return Some(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::check_condition;
    use crate::textio::parse_formula;

    fn search(text: &str, k: usize) -> SatResult {
        sat_search(&parse_formula(text).unwrap(), k, DEFAULT_BUDGET).unwrap()
    }

    fn assert_sat(r: &SatResult, text: &str) -> (Model, usize) {
        let SatVerdict::Sat { model, witness } = &r.verdict else {
            panic!("{text}: expected SAT, got {:?}", r.verdict);
        };
        assert!(validate_model(model).passed());
        assert!(checker::eval(model, &parse_formula(text).unwrap())
            .unwrap()
            .contains(*witness));
        (model.clone(), *witness)
    }

    #[test]
    fn kd45_generation_matches_filtering() {
        for n in 1..=3 {
            let mut expect = BTreeSet::new();
            for mask in 0u64..(1 << (n * n)) {
                let rel = Relation::from_pairs(n, (0..n * n).filter(|i| mask >> i & 1 == 1).map(|i| (i / n, i % n)));
                let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
                let mut m = Model::new(names, Vec::<String>::new(), ["a"]).unwrap();
                m.set_belief(0, rel.clone());
                let ok = [Condition::B3, Condition::B4, Condition::B5]
                    .into_iter()
                    .all(|c| check_condition(c, &m).unwrap().is_empty());
                if ok {
                    expect.insert(format!("{:?}", rel.pairs().collect::<Vec<_>>()));
                }
            }
            let got: Vec<String> = kd45_relations(n)
                .iter()
                .map(|r| format!("{:?}", r.pairs().collect::<Vec<_>>()))
                .collect();
            let unique: BTreeSet<String> = got.iter().cloned().collect();
            assert_eq!(unique.len(), got.len(), "duplicates at n={n}");
            assert_eq!(unique, expect, "n={n}");
        }
    }

    #[test]
    fn truth_needs_one_state() {
        let r = search("true", 3);
        let (m, _) = assert_sat(&r, "true");
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn contradiction_is_unsat_up_to_the_bound() {
        let r = search("p & !p", 2);
        assert_eq!(r.verdict, SatVerdict::UnsatUpTo(2));
        assert!(!r.is_certificate());
        assert!(r.explored > 0);
    }

    #[test]
    fn false_belief_needs_two_states() {
        let r = search("B{a}p & !p", 2);
        let (m, w) = assert_sat(&r, "B{a}p & !p");
        assert_eq!(m.len(), 2);
        assert!(!m.extension("p").unwrap().contains(w));
    }

    #[test]
    fn preference_is_satisfiable() {
        let r = search("P{a}p", 2);
        assert_sat(&r, "P{a}p");
    }

    #[test]
    fn intention_has_no_small_frame_valid_model() {
        assert_eq!(search("I{a}p", 2).verdict, SatVerdict::UnsatUpTo(2));
    }

    #[test]
    fn tiny_budget_aborts() {
        let r = sat_search(&parse_formula("p & !p").unwrap(), 3, 10).unwrap();
        assert_eq!(r.verdict, SatVerdict::Aborted { budget: 10 });
        assert_eq!(r.explored, 10);
    }

    #[test]
    fn zero_states_is_rejected() {
        assert_eq!(sat_search(&Formula::True, 0, 10), Err(SatError::ZeroStates));
    }

    #[test]
    fn search_is_deterministic() {
        assert_eq!(search("B{a}p & !p", 2), search("B{a}p & !p", 2));
    }

    #[test]
    fn closure_bounds() {
        for (text, bound) in [("p", 4u128), ("B{a}p", 16), ("EG p", 16)] {
            assert_eq!(
                closure_bound(&parse_formula(text).unwrap()).bound,
                Some(bound),
                "{text}"
            );
        }
    }

    #[test]
    fn full_bound_makes_a_certificate() {
        // |Sub*(p & !p)| = 4, so the bound is 16; a search that far is a proof.
        let r = SatResult {
            verdict: SatVerdict::UnsatUpTo(16),
            explored: 0,
            bound_exponent: 4,
            theoretical_bound: Some(16),
        };
        assert!(r.is_certificate());
    }
}
