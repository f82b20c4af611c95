use std::cell::OnceCell;

use super::{Binding, ConditionId, Violation};
use crate::kernel::{compose, reflexive_transitive_closure, HoodKind, Model, Neighbourhood, Relation, StateSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Condition {
    B3,
    B4,
    B5,
    P1,
    P2,
    P3,
    P4,
    BP1,
    BP2,
    BP3,
    BP4,
    BP5,
    BI1,
    BI2,
    BI3,
    BI4,
    BI5,
    BPIEF1a,
    BPIEF1b,
    BPIEF1c,
    BX1,
    BX2,
}

impl Condition {
    pub const ALL: [Condition; 22] = [
        Condition::B3,
        Condition::B4,
        Condition::B5,
        Condition::P1,
        Condition::P2,
        Condition::P3,
        Condition::P4,
        Condition::BP1,
        Condition::BP2,
        Condition::BP3,
        Condition::BP4,
        Condition::BP5,
        Condition::BI1,
        Condition::BI2,
        Condition::BI3,
        Condition::BI4,
        Condition::BI5,
        Condition::BPIEF1a,
        Condition::BPIEF1b,
        Condition::BPIEF1c,
        Condition::BX1,
        Condition::BX2,
    ];

    pub fn name(self) -> &'static str {
        use Condition::*;
        match self {
            B3 => "B3",
            B4 => "B4",
            B5 => "B5",
            P1 => "P1",
            P2 => "P2",
            P3 => "P3",
            P4 => "P4",
            BP1 => "BP1",
            BP2 => "BP2",
            BP3 => "BP3",
            BP4 => "BP4",
            BP5 => "BP5",
            BI1 => "BI1",
            BI2 => "BI2",
            BI3 => "BI3",
            BI4 => "BI4",
            BI5 => "BI5",
            BPIEF1a => "BPIEF1a",
            BPIEF1b => "BPIEF1b",
            BPIEF1c => "BPIEF1c",
            BX1 => "BX1",
            BX2 => "BX2",
        }
    }

    pub fn from_name(name: &str) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Number of quantifiers ranging over sets of states.
    pub fn set_quantifiers(self) -> usize {
        use Condition::*;
        match self {
            B3 | B4 | B5 | BPIEF1b | BX1 => 0,
            P1 | P2 | P4 | BP1 | BI1 => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One agent's relations plus the derived relations some conditions need.
pub(crate) struct Ctx<'m> {
    m: &'m Model,
    agent: usize,
    n: usize,
    ef: OnceCell<Relation>,
    bx: OnceCell<Relation>,
    bxb: OnceCell<Relation>,
}

impl<'m> Ctx<'m> {
    pub(crate) fn new(m: &'m Model, agent: usize) -> Self {
        Ctx {
            m,
            agent,
            n: m.len(),
            ef: OnceCell::new(),
            bx: OnceCell::new(),
            bxb: OnceCell::new(),
        }
    }

    fn b(&self) -> &Relation {
        self.m.frame(self.agent).belief()
    }

    fn hood(&self, kind: HoodKind, x: usize) -> &Neighbourhood {
        self.m.frame(self.agent).hood(kind, x)
    }

    fn rp(&self, x: usize, q: &StateSet) -> bool {
        self.hood(HoodKind::Preference, x).contains(q)
    }

    fn ri(&self, x: usize, q: &StateSet) -> bool {
        self.hood(HoodKind::Intention, x).contains(q)
    }

    fn has(&self, kind: HoodKind, x: usize, q: &StateSet) -> bool {
        self.hood(kind, x).contains(q)
    }

    fn ef(&self) -> &Relation {
        self.ef.get_or_init(|| reflexive_transitive_closure(self.m.temporal()))
    }

    fn bx(&self) -> &Relation {
        self.bx.get_or_init(|| compose(self.b(), self.m.temporal()))
    }

    fn bxb(&self) -> &Relation {
        self.bxb.get_or_init(|| compose(self.bx(), self.b()))
    }

    fn states(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    fn powerset(&self) -> impl Iterator<Item = StateSet> {
        StateSet::powerset(self.n)
    }

    /// The condition's matrix below its outer universal quantifiers.
    pub(crate) fn body(&self, c: Condition, w: &Binding) -> bool {
        use Condition::*;
        let x = || w.x.expect("binding has x");
        let y = || w.y.expect("binding has y");
        let z = || w.z.expect("binding has z");
        let u = || w.u.expect("binding has u");
        let q1 = || w.q1.as_ref().expect("binding has Q1");
        let q2 = || w.q2.as_ref().expect("binding has Q2");
        let b = self.b();
        match c {
            B3 => !(b.contains(x(), y()) && b.contains(y(), z())) || b.contains(x(), z()),
            B4 => !(b.contains(x(), y()) && b.contains(x(), z())) || b.contains(y(), z()),
            B5 => self.states().any(|y| b.contains(x(), y)),
            P1 => !(self.rp(x(), q1()) && self.rp(x(), q2())) || self.rp(x(), &q1().intersection(q2())),
            P2 => !(self.rp(x(), q1()) && self.rp(x(), &q1().complement().union(q2()))) || self.rp(x(), q2()),
            P3 => {
                let ev = StateSet::from_indices(self.n, self.states().filter(|&y| self.rp(y, q1())));
                !self.rp(x(), &ev) || self.rp(x(), q1())
            }
            P4 => {
                !self.rp(x(), q1())
                    || self
                        .states()
                        .any(|y| !self.rp(x(), q2()) || (q2().contains(y) && self.rp(y, q1())))
            }
            BP1 | BI1 => {
                let kind = if c == BP1 {
                    HoodKind::Preference
                } else {
                    HoodKind::Intention
                };
                let agree = q1()
                    .intersection(q2())
                    .union(&q1().complement().intersection(&q2().complement()));
                !(self.has(kind, x(), q1()) && b.successors(x()).is_subset(&agree)) || self.has(kind, x(), q2())
            }
            BP2 | BI2 => {
                let kind = if c == BP2 {
                    HoodKind::Preference
                } else {
                    HoodKind::Intention
                };
                !self.has(kind, x(), q1()) || !b.contains(x(), y()) || self.has(kind, y(), q1())
            }
            BP3 | BI3 => {
                let kind = if c == BP3 {
                    HoodKind::Preference
                } else {
                    HoodKind::Intention
                };
                !self.states().any(|y| b.contains(x(), y) && self.has(kind, y, q1())) || self.has(kind, x(), q1())
            }
            BP4 | BI4 => {
                let kind = if c == BP4 {
                    HoodKind::Preference
                } else {
                    HoodKind::Intention
                };
                !self.states().all(|y| !b.contains(x(), y) || self.has(kind, y, q1())) || self.has(kind, x(), q1())
            }
            BP5 | BI5 => {
                let kind = if c == BP5 {
                    HoodKind::Preference
                } else {
                    HoodKind::Intention
                };
                !self.has(kind, x(), q1()) || self.states().any(|y| b.contains(x(), y) && self.has(kind, y, q1()))
            }
            BPIEF1a => !self.ri(x(), q1()) || self.rp(x(), q1()),
            BPIEF1b => {
                let mut union = StateSet::empty(self.n);
                for q in self.hood(HoodKind::Intention, x()) {
                    union.union_with(q);
                }
                union.is_disjoint(b.successors(x()))
            }
            BPIEF1c => {
                !(b.contains(x(), y()) && self.ri(x(), q1()))
                    || self.states().any(|z| self.ef().contains(y(), z) && q1().contains(z))
            }
            BX1 => !self.bxb().contains(x(), y()) || self.bx().contains(x(), y()),
            BX2 => {
                let rx = self.m.temporal();
                let q = q1();
                let hyp = self.states().all(|y| {
                    self.states()
                        .any(|z| !b.contains(x(), y) || (rx.contains(y, z) && q.contains(z)))
                });
                let concl = self.states().any(|v| {
                    self.states()
                        .all(|w| !b.contains(x(), u()) || (rx.contains(u(), v) && (!b.contains(v, w) || q.contains(w))))
                });
                !hyp || concl
            }
        }
    }

    /// Bindings of the outer universal variables, pruned only where a
    /// hypothesis forces membership in a stored family or relation.
    fn bindings(&self, c: Condition) -> Vec<Binding> {
        use Condition::*;
        let b = self.b();
        let mut out = Vec::new();
        let kind_of = |c: Condition| match c {
            BP1 | BP2 | BP3 | BP4 | BP5 | P1 | P2 | P3 | P4 => HoodKind::Preference,
            _ => HoodKind::Intention,
        };
        for x in self.states() {
            let at = Binding::at(x);
            match c {
                B3 => {
                    for y in b.successors(x) {
                        for z in b.successors(y) {
                            out.push(Binding {
                                y: Some(y),
                                z: Some(z),
                                ..at.clone()
                            });
                        }
                    }
                }
                B4 => {
                    for y in b.successors(x) {
                        for z in b.successors(x) {
                            out.push(Binding {
                                y: Some(y),
                                z: Some(z),
                                ..at.clone()
                            });
                        }
                    }
                }
                B5 | BPIEF1b => out.push(at),
                P1 => {
                    let hood = self.hood(HoodKind::Preference, x);
                    for q1 in hood {
                        for q2 in hood {
                            out.push(Binding {
                                q1: Some(q1.clone()),
                                q2: Some(q2.clone()),
                                ..at.clone()
                            });
                        }
                    }
                }
                P2 | P4 | BP1 | BI1 => {
                    for q1 in self.hood(kind_of(c), x) {
                        for q2 in self.powerset() {
                            out.push(Binding {
                                q1: Some(q1.clone()),
                                q2: Some(q2),
                                ..at.clone()
                            });
                        }
                    }
                }
                P3 => {
                    for q in self.powerset() {
                        out.push(Binding {
                            q1: Some(q),
                            ..at.clone()
                        });
                    }
                }
                BP2 | BI2 => {
                    for q in self.hood(kind_of(c), x) {
                        for y in b.successors(x) {
                            out.push(Binding {
                                y: Some(y),
                                q1: Some(q.clone()),
                                ..at.clone()
                            });
                        }
                    }
                }
                BP3 | BI3 => {
                    let mut seen = Neighbourhood::new();
                    for y in b.successors(x) {
                        seen.extend(self.hood(kind_of(c), y).iter().cloned());
                    }
                    for q in seen {
                        out.push(Binding {
                            q1: Some(q),
                            ..at.clone()
                        });
                    }
                }
                BP4 | BI4 => match b.successors(x).first() {
                    None => {
                        for q in self.powerset() {
                            out.push(Binding {
                                q1: Some(q),
                                ..at.clone()
                            });
                        }
                    }
                    Some(y) => {
                        for q in self.hood(kind_of(c), y) {
                            out.push(Binding {
                                q1: Some(q.clone()),
                                ..at.clone()
                            });
                        }
                    }
                },
                BP5 | BI5 | BPIEF1a => {
                    let kind = if c == BP5 {
                        HoodKind::Preference
                    } else {
                        HoodKind::Intention
                    };
                    for q in self.hood(kind, x) {
                        out.push(Binding {
                            q1: Some(q.clone()),
                            ..at.clone()
                        });
                    }
                }
                BPIEF1c => {
                    for y in b.successors(x) {
                        for q in self.hood(HoodKind::Intention, x) {
                            out.push(Binding {
                                y: Some(y),
                                q1: Some(q.clone()),
                                ..at.clone()
                            });
                        }
                    }
                }
                BX1 => {
                    for y in self.bxb().successors(x) {
                        out.push(Binding {
                            y: Some(y),
                            ..at.clone()
                        });
                    }
                }
                BX2 => {
                    for q in self.powerset() {
                        for u in b.successors(x) {
                            out.push(Binding {
                                u: Some(u),
                                q1: Some(q.clone()),
                                ..at.clone()
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub(crate) fn violations(&self, c: Condition, first_k: Option<usize>) -> Vec<Violation> {
        let agent = self.m.frame(self.agent).agent().clone();
        let mut out = Vec::new();
        for w in self.bindings(c) {
            if first_k.is_some_and(|k| out.len() >= k) {
                break;
            }
            if !self.body(c, &w) {
                let note = self.note(c, &w);
                out.push(Violation {
                    condition: ConditionId::Frame(c),
                    agent: agent.clone(),
                    witness: w,
                    note,
                });
            }
        }
        out
    }

    fn note(&self, c: Condition, w: &Binding) -> String {
        use Condition::*;
        let m = self.m;
        let s = |i: Option<usize>| m.state_name(i.expect("bound")).to_string();
        let set = |q: &Option<StateSet>| m.render_set(q.as_ref().expect("bound"));
        match c {
            B3 => format!(
                "({0},{1}) and ({1},{2}) in RB but not ({0},{2})",
                s(w.x),
                s(w.y),
                s(w.z)
            ),
            B4 => format!(
                "({0},{1}) and ({0},{2}) in RB but not ({1},{2})",
                s(w.x),
                s(w.y),
                s(w.z)
            ),
            B5 => format!("{} has no belief successor", s(w.x)),
            P1 => format!(
                "{} and {} preferred at {} but not their intersection",
                set(&w.q1),
                set(&w.q2),
                s(w.x)
            ),
            P2 => format!(
                "{} and its implication to {} preferred at {} but not {}",
                set(&w.q1),
                set(&w.q2),
                s(w.x),
                set(&w.q2)
            ),
            P3 => format!(
                "states preferring {0} are preferred at {1} but {0} is not",
                set(&w.q1),
                s(w.x)
            ),
            P4 => format!(
                "{} preferred at {} with no witness for {}",
                set(&w.q1),
                s(w.x),
                set(&w.q2)
            ),
            BP1 | BI1 => format!(
                "{} in the family at {}, agrees with {} on belief successors, {} absent",
                set(&w.q1),
                s(w.x),
                set(&w.q2),
                set(&w.q2)
            ),
            BP2 | BI2 => format!("{} at {} is missing at belief successor {}", set(&w.q1), s(w.x), s(w.y)),
            BP3 | BI3 => format!("{} at some belief successor of {} is missing there", set(&w.q1), s(w.x)),
            BP4 | BI4 => format!(
                "{} at every belief successor of {} is missing there",
                set(&w.q1),
                s(w.x)
            ),
            BP5 | BI5 => format!("{} at {} is at no belief successor", set(&w.q1), s(w.x)),
            BPIEF1a => format!("{} intended at {} but not preferred", set(&w.q1), s(w.x)),
            BPIEF1b => format!("intentions at {} meet its belief successors", s(w.x)),
            BPIEF1c => format!("{} intended at {} is unreachable from {}", set(&w.q1), s(w.x), s(w.y)),
            BX1 => format!("{} reached by RB;RX;RB from {} but not by RB;RX", s(w.y), s(w.x)),
            BX2 => format!(
                "every belief successor of {} steps into {} but {} does not",
                s(w.x),
                set(&w.q1),
                s(w.u)
            ),
        }
    }
}
