//! Formulas, finite models, state sets and relation utilities.

mod formula;
mod model;
mod relation;
mod stateset;

pub use formula::{Agent, Closure, Formula};
pub use model::{AgentFrame, EvalError, HoodKind, Model, ModelError, Neighbourhood};
pub use relation::Relation;
pub use stateset::StateSet;

/// See [`Formula::rewrite_derived`].
pub fn rewrite_derived(f: &Formula) -> Formula {
    f.rewrite_derived()
}

/// See [`Formula::subformula_closure`].
pub fn subformula_closure(f: &Formula) -> Closure {
    f.subformula_closure()
}

/// See [`Relation::reflexive_transitive_closure`].
pub fn reflexive_transitive_closure(rel: &Relation) -> Relation {
    rel.reflexive_transitive_closure()
}

/// See [`Relation::compose`].
pub fn compose(first: &Relation, then: &Relation) -> Relation {
    first.compose(then)
}

/// The two-state example model: full belief relation, self-loop temporal
/// relation, preference `{S}` everywhere, no intentions, `p` true only at `s0`.
pub fn example_model() -> Model {
    let mut m = Model::new(["s0", "s1"], ["p"], ["a"]).expect("fixed declarations");
    m.set_label(0, 0, true);
    m.set_temporal(Relation::identity(2));
    m.set_belief(0, Relation::full(2));
    for s in 0..2 {
        m.add_to_hood(HoodKind::Preference, 0, s, StateSet::full(2));
    }
    m
}
