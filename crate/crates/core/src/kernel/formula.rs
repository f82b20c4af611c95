use std::collections::BTreeSet;
use std::fmt;

/// An agent name, compared by exact string equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "agent names are non-empty");
        Agent(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Formulas over atoms, agent-indexed mental modalities and CTL operators.
///
/// Equality is structural. The core fragment is `Atom`, `True`, `Not`, `And`,
/// `Or`, `B`, `P`, `I`, `AX`, `EX`, `EF`, `EG` and `EU`; everything else is an
/// abbreviation eliminated by [`Formula::rewrite_derived`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(String),
    True,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Belief.
    B(Agent, Box<Formula>),
    /// Preference.
    P(Agent, Box<Formula>),
    /// Intention.
    I(Agent, Box<Formula>),
    /// Desire, `P_a φ ∧ B_a ¬φ`.
    D(Agent, Box<Formula>),
    AX(Box<Formula>),
    EX(Box<Formula>),
    EF(Box<Formula>),
    EG(Box<Formula>),
    AG(Box<Formula>),
    AF(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn falsum() -> Formula {
        Formula::True.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn imp(self, rhs: Formula) -> Formula {
        Formula::Imp(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn believes(agent: &Agent, f: Formula) -> Formula {
        Formula::B(agent.clone(), Box::new(f))
    }

    pub fn prefers(agent: &Agent, f: Formula) -> Formula {
        Formula::P(agent.clone(), Box::new(f))
    }

    pub fn intends(agent: &Agent, f: Formula) -> Formula {
        Formula::I(agent.clone(), Box::new(f))
    }

    pub fn desires(agent: &Agent, f: Formula) -> Formula {
        Formula::D(agent.clone(), Box::new(f))
    }

    pub fn ax(self) -> Formula {
        Formula::AX(Box::new(self))
    }

    pub fn ex(self) -> Formula {
        Formula::EX(Box::new(self))
    }

    pub fn ef(self) -> Formula {
        Formula::EF(Box::new(self))
    }

    pub fn eg(self) -> Formula {
        Formula::EG(Box::new(self))
    }

    pub fn ag(self) -> Formula {
        Formula::AG(Box::new(self))
    }

    pub fn af(self) -> Formula {
        Formula::AF(Box::new(self))
    }

    pub fn eu(self, until: Formula) -> Formula {
        Formula::EU(Box::new(self), Box::new(until))
    }

    pub fn au(self, until: Formula) -> Formula {
        Formula::AU(Box::new(self), Box::new(until))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True => vec![],
            Not(f) | B(_, f) | P(_, f) | I(_, f) | D(_, f) | AX(f) | EX(f) | EF(f) | EG(f) | AG(f) | AF(f) => vec![f],
            And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | EU(a, b) | AU(a, b) => vec![a, b],
        }
    }

    pub fn is_core(&self) -> bool {
        use Formula::*;
        let here = !matches!(self, Imp(..) | Iff(..) | D(..) | AG(_) | AF(_) | AU(..));
        here && self.children().into_iter().all(Formula::is_core)
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children().into_iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(name) = f {
                out.insert(name.as_str());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<&Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Some(agent) = f.agent() {
                out.insert(agent);
            }
        });
        out
    }

    /// The agent index of a mental modality, if this node is one.
    pub fn agent(&self) -> Option<&Agent> {
        match self {
            Formula::B(a, _) | Formula::P(a, _) | Formula::I(a, _) | Formula::D(a, _) => Some(a),
            _ => None,
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    /// Eliminates every abbreviation bottom-up, yielding a core formula.
    ///
    /// `φ→ψ` becomes `¬φ∨ψ`, `φ↔ψ` the conjunction of both implications,
    /// `D_a φ` becomes `P_a φ ∧ B_a ¬φ`, `AG φ` becomes `¬EF¬φ`,
    /// `A[φ U ψ]` becomes `¬E[¬ψ U (¬φ∧¬ψ)] ∧ ¬EG¬ψ` and `AF φ` is `A[true U φ]`.
    pub fn rewrite_derived(&self) -> Formula {
        use Formula::*;
        match self {
            Atom(_) | True => self.clone(),
            Not(f) => f.rewrite_derived().not(),
            And(a, b) => a.rewrite_derived().and(b.rewrite_derived()),
            Or(a, b) => a.rewrite_derived().or(b.rewrite_derived()),
            Imp(a, b) => implication(a.rewrite_derived(), b.rewrite_derived()),
            Iff(a, b) => {
                let (a, b) = (a.rewrite_derived(), b.rewrite_derived());
                implication(a.clone(), b.clone()).and(implication(b, a))
            }
            B(ag, f) => B(ag.clone(), Box::new(f.rewrite_derived())),
            P(ag, f) => P(ag.clone(), Box::new(f.rewrite_derived())),
            I(ag, f) => I(ag.clone(), Box::new(f.rewrite_derived())),
            D(ag, f) => {
                let f = f.rewrite_derived();
                Formula::prefers(ag, f.clone()).and(Formula::believes(ag, f.not()))
            }
            AX(f) => f.rewrite_derived().ax(),
            EX(f) => f.rewrite_derived().ex(),
            EF(f) => f.rewrite_derived().ef(),
            EG(f) => f.rewrite_derived().eg(),
            AG(f) => f.rewrite_derived().not().ef().not(),
            AF(f) => all_until(True, f.rewrite_derived()),
            EU(a, b) => a.rewrite_derived().eu(b.rewrite_derived()),
            AU(a, b) => all_until(a.rewrite_derived(), b.rewrite_derived()),
        }
    }

    /// `Sub(f)`: every subformula of `f`, including `f` itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            out.insert(f.clone());
        });
        out
    }

    /// `Sub*(f) = Sub(f) ∪ {¬ψ | ψ ∈ Sub(f)}` together with the finite-model bound `2^|Sub*(f)|`.
    pub fn subformula_closure(&self) -> Closure {
        let sub = self.subformulas();
        let mut formulas = sub.clone();
        formulas.extend(sub.into_iter().map(Formula::not));
        Closure { formulas }
    }
}

fn implication(a: Formula, b: Formula) -> Formula {
    a.not().or(b)
}

fn all_until(hold: Formula, until: Formula) -> Formula {
    let escape = until.clone().not().eu(hold.not().and(until.clone().not()));
    escape.not().and(until.not().eg().not())
}

/// The negation-closed subformula set of a formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Closure {
    pub formulas: BTreeSet<Formula>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// `log2` of the state bound, i.e. `|Sub*|`.
    pub fn bound_exponent(&self) -> usize {
        self.formulas.len()
    }

    /// `2^|Sub*|`, or `None` once it no longer fits in 128 bits.
    pub fn bound(&self) -> Option<u128> {
        1u128.checked_shl(self.formulas.len() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn desire_unfolds_to_preference_and_disbelief() {
        let a = Agent::new("a");
        assert_eq!(
            Formula::desires(&a, p()).rewrite_derived(),
            Formula::prefers(&a, p()).and(Formula::believes(&a, p().not()))
        );
    }

    #[test]
    fn atoms_are_unchanged() {
        assert_eq!(p().rewrite_derived(), p());
    }

    #[test]
    fn always_globally_unfolds() {
        assert_eq!(p().ag().rewrite_derived(), p().not().ef().not());
    }

    #[test]
    fn always_finally_unfolds_through_all_until() {
        let expected = p()
            .not()
            .eu(Formula::True.not().and(p().not()))
            .not()
            .and(p().not().eg().not());
        assert_eq!(p().af().rewrite_derived(), expected);
    }

    #[test]
    fn implication_and_biconditional() {
        assert_eq!(p().imp(q()).rewrite_derived(), p().not().or(q()));
        assert_eq!(p().iff(q()).rewrite_derived(), p().not().or(q()).and(q().not().or(p())));
    }

    #[test]
    fn closure_of_belief() {
        let a = Agent::new("a");
        let f = Formula::believes(&a, p());
        let c = f.subformula_closure();
        let expected: BTreeSet<_> = [f.clone(), p(), f.clone().not(), p().not()].into();
        assert_eq!(c.formulas, expected);
        assert_eq!(c.bound(), Some(16));
    }

    #[test]
    fn closure_of_atom_and_conjunction() {
        assert_eq!(p().subformula_closure().bound(), Some(4));
        let c = p().and(q()).subformula_closure();
        assert_eq!(c.len(), 6);
        assert_eq!(c.bound(), Some(64));
    }

    #[test]
    fn closure_does_not_double_count_existing_negations() {
        // Sub(¬p) = {¬p, p}; adding negations contributes only ¬¬p.
        assert_eq!(p().not().subformula_closure().len(), 3);
    }

    #[test]
    fn huge_closure_bound_saturates() {
        let mut f = p();
        for _ in 0..70 {
            f = f.ex();
        }
        assert_eq!(f.subformula_closure().bound(), None);
        assert_eq!(f.subformula_closure().bound_exponent(), 142);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            prop_oneof![Just("p"), Just("q")].prop_map(Formula::atom),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            let a = Agent::new("a");
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| x.and(y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| x.imp(y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| x.iff(y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| x.au(y)),
                inner.clone().prop_map(move |x| Formula::desires(&a, x)),
                inner.clone().prop_map(Formula::ag),
                inner.clone().prop_map(Formula::af),
                inner.clone().prop_map(Formula::eg),
                (inner.clone(), inner).prop_map(|(x, y)| x.eu(y)),
            ]
        })
    }

    proptest! {
        #[test]
        fn rewrite_is_idempotent_and_core(f in arb_formula()) {
            let once = f.rewrite_derived();
            prop_assert!(once.is_core());
            prop_assert_eq!(once.rewrite_derived(), once);
        }

        #[test]
        fn closure_contains_subformulas_of_positive_members(f in arb_formula()) {
            let sub = f.subformulas();
            let c = f.subformula_closure();
            prop_assert!(c.len() <= 2 * sub.len());
            for g in &c.formulas {
                if sub.contains(g) {
                    for child in g.children() {
                        prop_assert!(c.formulas.contains(child));
                    }
                } else {
                    let Formula::Not(inner) = g else {
                        return Err(TestCaseError::fail("non-subformula member is not a negation"));
                    };
                    prop_assert!(sub.contains(inner.as_ref()));
                }
            }
        }
    }
}
