use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schema::{Bindings, MetaVar};
use crate::kernel::{Agent, Formula};

/// Base formulas over the given atoms and agents: atoms, negated atoms,
/// constants, one-modality wrappings of atoms and small boolean combinations.
pub fn base_formulas(atoms: &[&str], agents: &[Agent]) -> Vec<Formula> {
    let lits: Vec<Formula> = atoms.iter().map(|&p| Formula::atom(p)).collect();
    let mut out = Vec::new();
    out.extend(lits.iter().cloned());
    out.extend(lits.iter().map(|p| p.clone().not()));
    out.push(Formula::True);
    out.push(Formula::falsum());
    for p in &lits {
        for a in agents {
            out.push(Formula::believes(a, p.clone()));
            out.push(Formula::prefers(a, p.clone()));
            out.push(Formula::intends(a, p.clone()));
            out.push(Formula::desires(a, p.clone()));
        }
        out.push(p.clone().ax());
        out.push(p.clone().ex());
        out.push(p.clone().ef());
        out.push(p.clone().eg());
        out.push(p.clone().ag());
        out.push(p.clone().af());
    }
    for (i, p) in lits.iter().enumerate() {
        let q = &lits[(i + 1) % lits.len()];
        out.push(p.clone().or(p.clone().not()));
        out.push(p.clone().and(q.clone().not()));
        out.push(p.clone().or(q.clone()));
        out.push(p.clone().imp(q.clone()));
        out.push(p.clone().iff(q.clone()));
        out.push(p.clone().eu(q.clone()));
        out.push(p.clone().au(q.clone()));
        if let Some(a) = agents.first() {
            out.push(Formula::believes(a, p.clone()).and(q.clone().not()));
            out.push(Formula::prefers(a, p.clone().or(q.clone())));
        }
    }
    out
}

/// `size` deterministic bindings of every metavariable. Some bindings are
/// shaped so that rule premises hold: equivalent pairs for the congruence
/// rules and fixpoint formulas for the induction rules.
pub fn binding_pool(seed: u64, atoms: &[&str], agents: &[Agent], size: usize) -> Vec<Bindings> {
    assert!(
        !atoms.is_empty() && !agents.is_empty(),
        "pool needs an atom and an agent"
    );
    let base = base_formulas(atoms, agents);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|k| {
            let phi = base[k % base.len()].clone();
            let other = base.choose(&mut rng).expect("nonempty").clone();
            let phi2 = match k % 3 {
                0 => phi.clone().not().not(),
                1 => phi.clone().and(Formula::True),
                _ => other.clone(),
            };
            let psi = match k % 4 {
                0 => phi.clone().eg(),
                1 => phi.clone().eu(phi2.clone()),
                _ => base.choose(&mut rng).expect("nonempty").clone(),
            };
            let agent = agents[rng.gen_range(0..agents.len())].clone();
            Bindings::new(agent)
                .with(MetaVar::Phi, phi.clone())
                .with(MetaVar::Phi1, phi)
                .with(MetaVar::Phi2, phi2)
                .with(MetaVar::Psi, psi)
        })
        .collect()
}
