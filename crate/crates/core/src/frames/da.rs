use std::collections::BTreeSet;

use thiserror::Error;

use super::{Binding, ConditionId, Violation};
use crate::kernel::{HoodKind, Model, Relation, StateSet};

/// Closure requirements on an agent's family of admissible sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DaCondition {
    Nonempty,
    Atoms,
    Complement,
    Intersection,
    EvB,
    EvP,
    EvI,
    EvEX,
    EvEG,
    EvEU,
}

impl DaCondition {
    pub const ALL: [DaCondition; 10] = [
        DaCondition::Nonempty,
        DaCondition::Atoms,
        DaCondition::Complement,
        DaCondition::Intersection,
        DaCondition::EvB,
        DaCondition::EvP,
        DaCondition::EvI,
        DaCondition::EvEX,
        DaCondition::EvEG,
        DaCondition::EvEU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DaCondition::Nonempty => "Da-nonempty",
            DaCondition::Atoms => "Da-a",
            DaCondition::Complement => "Da-b",
            DaCondition::Intersection => "Da-c",
            DaCondition::EvB => "Da-d",
            DaCondition::EvP => "Da-e",
            DaCondition::EvI => "Da-f",
            DaCondition::EvEX => "Da-g",
            DaCondition::EvEG => "Da-h",
            DaCondition::EvEU => "Da-i",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DaFamily {
    Powerset,
    Explicit(BTreeSet<StateSet>),
}

impl DaFamily {
    pub fn contains(&self, set: &StateSet) -> bool {
        match self {
            DaFamily::Powerset => true,
            DaFamily::Explicit(family) => family.contains(set),
        }
    }
}

pub const FAMILY_CAP: usize = 1 << 10;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("explicit family of {size} sets exceeds the cap of {cap}")]
pub struct FamilyTooLarge {
    pub size: usize,
    pub cap: usize,
}

/// Checks the closure conditions on `da` for every agent. The powerset is
/// closed under everything, so it is accepted without enumeration.
pub fn check_da_closure(m: &Model, da: &DaFamily) -> Result<Vec<Violation>, FamilyTooLarge> {
    let DaFamily::Explicit(family) = da else {
        return Ok(Vec::new());
    };
    if family.len() > FAMILY_CAP {
        return Err(FamilyTooLarge {
            size: family.len(),
            cap: FAMILY_CAP,
        });
    }
    let mut out = Vec::new();
    for agent in 0..m.agents().len() {
        let name = m.frame(agent).agent().clone();
        let mut report = |c: DaCondition, w: Binding| {
            if !body(m, agent, da, c, &w) {
                out.push(Violation {
                    condition: ConditionId::Da(c),
                    agent: name.clone(),
                    note: note(m, agent, c, &w),
                    witness: w,
                });
            }
        };
        report(DaCondition::Nonempty, Binding::default());
        for atom in 0..m.atoms().len() {
            let w = Binding {
                q1: Some(m.extension_of(atom).clone()),
                ..Default::default()
            };
            report(DaCondition::Atoms, w);
        }
        for c in [
            DaCondition::Complement,
            DaCondition::EvB,
            DaCondition::EvP,
            DaCondition::EvI,
            DaCondition::EvEX,
            DaCondition::EvEG,
        ] {
            for a in family {
                report(c, one(a));
            }
        }
        for c in [DaCondition::Intersection, DaCondition::EvEU] {
            for a1 in family {
                for a2 in family {
                    report(
                        c,
                        Binding {
                            q1: Some(a1.clone()),
                            q2: Some(a2.clone()),
                            ..Default::default()
                        },
                    );
                }
            }
        }
    }
    Ok(out)
}

fn one(a: &StateSet) -> Binding {
    Binding {
        q1: Some(a.clone()),
        ..Default::default()
    }
}

/// The image a condition requires to be in the family, if its premise holds.
fn image(m: &Model, agent: usize, c: DaCondition, w: &Binding) -> Option<StateSet> {
    let n = m.len();
    let a = w.q1.as_ref();
    let frame = m.frame(agent);
    let select = |pred: &dyn Fn(usize) -> bool| StateSet::from_indices(n, (0..n).filter(|&s| pred(s)));
    Some(match c {
        DaCondition::Nonempty => return None,
        DaCondition::Atoms => a?.clone(),
        DaCondition::Complement => a?.complement(),
        DaCondition::Intersection => a?.intersection(w.q2.as_ref()?),
        DaCondition::EvB => {
            let a = a?;
            select(&|s| frame.belief().successors(s).is_subset(a))
        }
        DaCondition::EvP => {
            let a = a?;
            select(&|s| frame.hood(HoodKind::Preference, s).contains(a))
        }
        DaCondition::EvI => {
            let a = a?;
            select(&|s| frame.hood(HoodKind::Intention, s).contains(a))
        }
        DaCondition::EvEX => {
            let a = a?;
            select(&|s| !m.temporal().successors(s).is_disjoint(a))
        }
        DaCondition::EvEG => infinite_trace_within(m.temporal(), a?),
        DaCondition::EvEU => reach_through(m.temporal(), a?, w.q2.as_ref()?),
    })
}

pub(crate) fn body(m: &Model, agent: usize, da: &DaFamily, c: DaCondition, w: &Binding) -> bool {
    let family = match da {
        DaFamily::Powerset => return true,
        DaFamily::Explicit(f) => f,
    };
    match c {
        DaCondition::Nonempty => !family.is_empty(),
        DaCondition::Atoms => {
            let ext = w.q1.as_ref().expect("binding has the extension");
            let is_ext = (0..m.atoms().len()).any(|p| m.extension_of(p) == ext);
            !is_ext || family.contains(ext)
        }
        _ => {
            let premise =
                w.q1.as_ref().is_some_and(|a| family.contains(a)) && w.q2.as_ref().is_none_or(|a| family.contains(a));
            !premise || image(m, agent, c, w).is_some_and(|img| family.contains(&img))
        }
    }
}

fn note(m: &Model, agent: usize, c: DaCondition, w: &Binding) -> String {
    match c {
        DaCondition::Nonempty => "family is empty".into(),
        _ => match image(m, agent, c, w) {
            Some(img) => format!("required set {} is not in the family", m.render_set(&img)),
            None => "required set is not in the family".into(),
        },
    }
}

/// States with an infinite temporal path staying inside `a`.
fn infinite_trace_within(rel: &Relation, a: &StateSet) -> StateSet {
    let mut x = a.clone();
    loop {
        let next = StateSet::from_indices(a.universe(), x.iter().filter(|&s| !rel.successors(s).is_disjoint(&x)));
        if next == x {
            return x;
        }
        x = next;
    }
}

/// States with a temporal path through `hold` reaching `goal`.
fn reach_through(rel: &Relation, hold: &StateSet, goal: &StateSet) -> StateSet {
    let mut x = goal.clone();
    loop {
        let mut next = x.clone();
        for s in hold.iter() {
            if !rel.successors(s).is_disjoint(&x) {
                next.insert(s);
            }
        }
        if next == x {
            return x;
        }
        x = next;
    }
}
