//! Seeded random models and formulas for differential testing.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kernel::{Agent, Formula, HoodKind, Model, Relation, StateSet};

#[derive(Clone, Debug)]
pub struct ModelShape {
    pub states: RangeInclusive<usize>,
    pub agents: RangeInclusive<usize>,
    pub atoms: RangeInclusive<usize>,
    /// Probability of each temporal or belief edge.
    pub density: f64,
    /// Most sets stored in one neighbourhood.
    pub hood_size: usize,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            states: 1..=6,
            agents: 1..=2,
            atoms: 1..=3,
            density: 0.35,
            hood_size: 3,
        }
    }
}

const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "t"];
const AGENT_NAMES: [&str; 3] = ["a", "b", "c"];

fn random_relation(rng: &mut impl Rng, n: usize, density: f64) -> Relation {
    let mut rel = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(density) {
                rel.insert(x, y);
            }
        }
    }
    rel
}

fn random_set(rng: &mut impl Rng, n: usize) -> StateSet {
    match rng.gen_range(0..6) {
        0 => StateSet::empty(n),
        1 => StateSet::full(n),
        _ => StateSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))),
    }
}

/// An arbitrary model: no frame conditions are imposed.
pub fn random_model(rng: &mut impl Rng, shape: &ModelShape) -> Model {
    let n = rng.gen_range(shape.states.clone());
    let atoms = rng.gen_range(shape.atoms.clone()).min(ATOM_NAMES.len());
    let agents = rng.gen_range(shape.agents.clone()).clamp(1, AGENT_NAMES.len());
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = Model::new(
        names,
        ATOM_NAMES[..atoms].iter().copied(),
        AGENT_NAMES[..agents].iter().copied(),
    )
    .expect("fixed distinct names");
    for s in 0..n {
        for p in 0..atoms {
            m.set_label(s, p, rng.gen_bool(0.5));
        }
    }
    m.set_temporal(random_relation(rng, n, shape.density));
    for a in 0..agents {
        m.set_belief(a, random_relation(rng, n, shape.density));
        for s in 0..n {
            for kind in [HoodKind::Preference, HoodKind::Intention] {
                for _ in 0..rng.gen_range(0..=shape.hood_size) {
                    m.add_to_hood(kind, a, s, random_set(rng, n));
                }
            }
        }
    }
    m
}

/// A formula of depth at most `depth` over the given symbols, using every
/// connective including the derived ones.
pub fn random_formula(rng: &mut impl Rng, atoms: &[String], agents: &[Agent], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.15) {
        return match atoms.choose(rng) {
            Some(p) if rng.gen_bool(0.9) => Formula::atom(p.clone()),
            _ => Formula::True,
        };
    }
    let sub = |rng: &mut _| random_formula(rng, atoms, agents, depth - 1);
    let agent = agents.choose(rng).cloned();
    let choice = rng.gen_range(0..if agent.is_some() { 17 } else { 13 });
    match choice {
        0 => sub(rng).not(),
        1 => sub(rng).and(sub(rng)),
        2 => sub(rng).or(sub(rng)),
        3 => sub(rng).imp(sub(rng)),
        4 => sub(rng).iff(sub(rng)),
        5 => sub(rng).ax(),
        6 => sub(rng).ex(),
        7 => sub(rng).ef(),
        8 => sub(rng).eg(),
        9 => sub(rng).ag(),
        10 => sub(rng).af(),
        11 => sub(rng).eu(sub(rng)),
        12 => sub(rng).au(sub(rng)),
        13 => Formula::believes(agent.as_ref().expect("agent"), sub(rng)),
        14 => Formula::prefers(agent.as_ref().expect("agent"), sub(rng)),
        15 => Formula::intends(agent.as_ref().expect("agent"), sub(rng)),
        _ => Formula::desires(agent.as_ref().expect("agent"), sub(rng)),
    }
}

/// A random formula over the symbols `m` declares.
pub fn random_formula_for(rng: &mut impl Rng, m: &Model, depth: usize) -> Formula {
    let agents: Vec<Agent> = m.agents().map(|f| f.agent().clone()).collect();
    random_formula(rng, m.atoms(), &agents, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let shape = ModelShape::default();
        for _ in 0..200 {
            let m = random_model(&mut rng, &shape);
            assert!(shape.states.contains(&m.len()));
            assert!(shape.atoms.contains(&m.atoms().len()));
            assert!(shape.agents.contains(&m.agents().len()));
            let f = random_formula_for(&mut rng, &m, 4);
            assert!(f.depth() <= 4, "{f}");
            assert!(m.check_symbols(&f).is_ok());
        }
    }

    #[test]
    fn same_seed_same_output() {
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_model(&mut rng, &ModelShape::default());
            let f = random_formula_for(&mut rng, &m, 3);
            (m, f)
        };
        assert_eq!(gen(9), gen(9));
    }
}
