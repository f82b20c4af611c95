use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::{Agent, Formula, Relation, StateSet};

/// A neighbourhood family: a set of state sets.
pub type Neighbourhood = BTreeSet<StateSet>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum HoodKind {
    Preference,
    Intention,
}

/// Per-agent accessibility data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AgentFrame {
    agent: Agent,
    belief: Relation,
    pref: Vec<Neighbourhood>,
    intent: Vec<Neighbourhood>,
}

impl AgentFrame {
    fn new(agent: Agent, n: usize) -> Self {
        Self {
            agent,
            belief: Relation::empty(n),
            pref: vec![Neighbourhood::new(); n],
            intent: vec![Neighbourhood::new(); n],
        }
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    pub fn belief(&self) -> &Relation {
        &self.belief
    }

    pub fn pref(&self, state: usize) -> &Neighbourhood {
        &self.pref[state]
    }

    pub fn intent(&self, state: usize) -> &Neighbourhood {
        &self.intent[state]
    }

    pub fn hood(&self, kind: HoodKind, state: usize) -> &Neighbourhood {
        match kind {
            HoodKind::Preference => &self.pref[state],
            HoodKind::Intention => &self.intent[state],
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("empty symbol name")]
    EmptyName,
}

/// A formula mentions a symbol the model does not declare.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("undeclared atom `{0}`")]
    UnknownAtom(String),
    #[error("undeclared agent `{0}`")]
    UnknownAgent(String),
    #[error("modality {0} needs an agent")]
    MissingAgent(&'static str),
}

/// A finite model: states, labelling, one temporal relation, and per-agent
/// belief relations and preference/intention neighbourhoods.
///
/// The set family `D_a` is always the full powerset and is not stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    states: Vec<String>,
    atoms: Vec<String>,
    extension: Vec<StateSet>,
    temporal: Relation,
    agents: Vec<AgentFrame>,
}

fn check_unique<'a>(
    names: impl IntoIterator<Item = &'a String>,
    dup: fn(String) -> ModelError,
) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for name in names {
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if !seen.insert(name.as_str()) {
            return Err(dup(name.clone()));
        }
    }
    Ok(())
}

impl Model {
    /// A model with the given symbols, an empty labelling and empty relations.
    pub fn new<S, A, G>(states: S, atoms: A, agents: G) -> Result<Model, ModelError>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
        G: IntoIterator,
        G::Item: Into<String>,
    {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        let agents: Vec<String> = agents.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        check_unique(&states, ModelError::DuplicateState)?;
        check_unique(&atoms, ModelError::DuplicateAtom)?;
        check_unique(&agents, ModelError::DuplicateAgent)?;
        let n = states.len();
        Ok(Model {
            extension: vec![StateSet::empty(n); atoms.len()],
            temporal: Relation::empty(n),
            agents: agents.into_iter().map(|a| AgentFrame::new(Agent::new(a), n)).collect(),
            states,
            atoms,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn agents(&self) -> impl ExactSizeIterator<Item = &AgentFrame> {
        self.agents.iter()
    }

    pub fn agent_index(&self, agent: &str) -> Option<usize> {
        self.agents.iter().position(|f| f.agent.name() == agent)
    }

    pub fn agent_frame(&self, agent: &Agent) -> Result<&AgentFrame, EvalError> {
        self.agents
            .iter()
            .find(|f| &f.agent == agent)
            .ok_or_else(|| EvalError::UnknownAgent(agent.name().to_string()))
    }

    pub fn frame(&self, agent_index: usize) -> &AgentFrame {
        &self.agents[agent_index]
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.len())
    }

    pub fn no_states(&self) -> StateSet {
        StateSet::empty(self.len())
    }

    /// `{s | atom ∈ π(s)}`.
    pub fn extension(&self, atom: &str) -> Result<&StateSet, EvalError> {
        self.atom_index(atom)
            .map(|i| &self.extension[i])
            .ok_or_else(|| EvalError::UnknownAtom(atom.to_string()))
    }

    pub fn extension_of(&self, atom_index: usize) -> &StateSet {
        &self.extension[atom_index]
    }

    /// Atoms true at `state`, in declared order.
    pub fn label(&self, state: usize) -> impl Iterator<Item = &str> {
        self.atoms
            .iter()
            .zip(&self.extension)
            .filter(move |(_, ext)| ext.contains(state))
            .map(|(a, _)| a.as_str())
    }

    pub fn temporal(&self) -> &Relation {
        &self.temporal
    }

    pub fn set_label(&mut self, state: usize, atom_index: usize, holds: bool) {
        if holds {
            self.extension[atom_index].insert(state);
        } else {
            self.extension[atom_index].remove(state);
        }
    }

    pub fn set_extension(&mut self, atom_index: usize, ext: StateSet) {
        assert_eq!(ext.universe(), self.len());
        self.extension[atom_index] = ext;
    }

    pub fn set_temporal(&mut self, rel: Relation) {
        assert_eq!(rel.len_states(), self.len());
        self.temporal = rel;
    }

    pub fn temporal_mut(&mut self) -> &mut Relation {
        &mut self.temporal
    }

    pub fn set_belief(&mut self, agent_index: usize, rel: Relation) {
        assert_eq!(rel.len_states(), self.len());
        self.agents[agent_index].belief = rel;
    }

    pub fn belief_mut(&mut self, agent_index: usize) -> &mut Relation {
        &mut self.agents[agent_index].belief
    }

    pub fn set_hood(&mut self, kind: HoodKind, agent_index: usize, state: usize, hood: Neighbourhood) {
        assert!(hood.iter().all(|q| q.universe() == self.len()));
        let frame = &mut self.agents[agent_index];
        match kind {
            HoodKind::Preference => frame.pref[state] = hood,
            HoodKind::Intention => frame.intent[state] = hood,
        }
    }

    pub fn add_to_hood(&mut self, kind: HoodKind, agent_index: usize, state: usize, set: StateSet) {
        assert_eq!(set.universe(), self.len());
        let frame = &mut self.agents[agent_index];
        match kind {
            HoodKind::Preference => frame.pref[state].insert(set),
            HoodKind::Intention => frame.intent[state].insert(set),
        };
    }

    /// Fails on the first atom or agent of `f` that the model does not declare.
    pub fn check_symbols(&self, f: &Formula) -> Result<(), EvalError> {
        for atom in f.atoms() {
            self.extension(atom)?;
        }
        for agent in f.agents() {
            self.agent_frame(agent)?;
        }
        Ok(())
    }

    pub fn render_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.iter().map(|s| self.state_name(s)).collect();
        format!("{{{}}}", names.join(", "))
    }
}
