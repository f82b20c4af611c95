use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::kernel::{example_model, HoodKind, Relation};

fn two_states() -> Model {
    Model::new(["s0", "s1"], ["p"], ["a"]).unwrap()
}

fn names(vs: &[Violation]) -> BTreeSet<String> {
    vs.iter().map(|v| v.condition.to_string()).collect()
}

#[test]
fn example_model_passes_everything() {
    let m = example_model();
    for c in Condition::ALL {
        assert_eq!(check_condition(c, &m).unwrap(), vec![], "{c}");
    }
    assert!(validate_model(&m).passed());
}

#[test]
fn serial_failure_names_the_state() {
    let mut m = two_states();
    m.set_belief(0, Relation::from_pairs(2, [(0, 0)]));
    let vs = check_condition(Condition::B5, &m).unwrap();
    assert_eq!(vs.len(), 1);
    assert_eq!(vs[0].witness.x, Some(1));
    assert!(vs[0].reproduces(&m));
}

#[test]
fn intention_meeting_belief() {
    let mut m = Model::new(["s0"], ["p"], ["a"]).unwrap();
    m.set_belief(0, Relation::identity(1));
    m.add_to_hood(HoodKind::Intention, 0, 0, StateSet::singleton(1, 0));
    let vs = check_condition(Condition::BPIEF1b, &m).unwrap();
    assert_eq!(vs.len(), 1);
    assert_eq!(vs[0].witness.x, Some(0));
    assert!(vs[0].reproduces(&m));
}

#[test]
fn empty_time_with_kd45_belief_passes() {
    let mut m = two_states();
    m.set_belief(0, Relation::from_pairs(2, [(0, 1), (1, 1)]));
    let report = validate_model(&m);
    assert!(report.passed(), "{}", report.render(&m));
}

#[test]
fn report_is_deterministic() {
    let mut m = two_states();
    m.set_belief(0, Relation::from_pairs(2, [(0, 0)]));
    m.add_to_hood(HoodKind::Preference, 0, 1, StateSet::singleton(2, 0));
    assert_eq!(validate_model(&m), validate_model(&m));
}

#[test]
fn oversized_models_are_skipped_not_passed() {
    let n = 11;
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = Model::new(names, ["p"], ["a"]).unwrap();
    m.set_belief(0, Relation::full(n));
    assert!(check_condition(Condition::P1, &m).is_err());
    assert!(check_condition(Condition::P3, &m).is_ok());
    let report = validate_model(&m);
    assert!(!report.passed());
    assert!(report.violations.is_empty());
    let skipped: BTreeSet<String> = report.skipped.iter().map(|s| s.condition.to_string()).collect();
    let expect: BTreeSet<String> = ["P1", "P2", "P4", "BP1", "BI1"].map(String::from).into();
    assert_eq!(skipped, expect);
}

#[test]
fn first_k_limits_output() {
    let n = 3;
    let mut m = Model::new(["s0", "s1", "s2"], ["p"], ["a"]).unwrap();
    m.set_belief(0, Relation::empty(n));
    let caps = Caps {
        first_k: Some(1),
        ..Caps::default()
    };
    assert_eq!(check_condition_with(Condition::B5, &m, caps).unwrap().len(), 1);
    assert_eq!(check_condition(Condition::B5, &m).unwrap().len(), 3);
}

#[test]
fn names_round_trip() {
    for c in Condition::ALL {
        assert_eq!(Condition::from_name(c.name()), Some(c));
    }
    assert_eq!(Condition::from_name("B6"), None);
}

#[test]
fn powerset_family_is_closed() {
    let mut m = two_states();
    m.set_label(0, 0, true);
    assert!(check_da_closure(&m, &DaFamily::Powerset).unwrap().is_empty());
}

#[test]
fn family_missing_an_atom_extension() {
    let mut m = two_states();
    m.set_label(0, 0, true);
    let da = DaFamily::Explicit([StateSet::empty(2)].into());
    let vs = check_da_closure(&m, &da).unwrap();
    assert!(vs.iter().any(|v| v.condition == ConditionId::Da(DaCondition::Atoms)));
    assert!(vs.iter().all(|v| v.reproduces_in(&m, &da)));
}

#[test]
fn trivial_family_without_atoms() {
    // Belief and time are identities, so every image of ∅ and S is ∅ or S,
    // except the preference images, which are ∅ here.
    let mut m = Model::new(["s0", "s1"], Vec::<&str>::new(), ["a"]).unwrap();
    m.set_belief(0, Relation::identity(2));
    m.set_temporal(Relation::identity(2));
    let da = DaFamily::Explicit([StateSet::empty(2), StateSet::full(2)].into());
    assert_eq!(check_da_closure(&m, &da).unwrap(), vec![]);

    // A preferred singleton makes the preference image a singleton.
    m.add_to_hood(HoodKind::Preference, 0, 0, StateSet::full(2));
    let vs = check_da_closure(&m, &da).unwrap();
    assert_eq!(names(&vs), ["Da-e".to_string()].into());
    assert!(vs.iter().all(|v| v.reproduces_in(&m, &da)));
}

#[test]
fn empty_family_is_reported() {
    let m = two_states();
    let vs = check_da_closure(&m, &DaFamily::Explicit(BTreeSet::new())).unwrap();
    assert!(vs.iter().any(|v| v.condition == ConditionId::Da(DaCondition::Nonempty)));
}

// An independent, unpruned reading of every condition over bitmask sets, for
// models of at most three states.
mod brute {
    use super::*;

    pub struct Raw {
        pub n: usize,
        pub b: Vec<Vec<bool>>,
        pub x: Vec<Vec<bool>>,
        pub rp: Vec<BTreeSet<u32>>,
        pub ri: Vec<BTreeSet<u32>>,
    }

    impl Raw {
        pub fn of(m: &Model) -> Raw {
            let n = m.len();
            let f = m.frame(0);
            let rel = |r: &Relation| (0..n).map(|i| (0..n).map(|j| r.contains(i, j)).collect()).collect();
            let hood = |k: HoodKind| {
                (0..n)
                    .map(|s| f.hood(k, s).iter().map(|q| q.mask() as u32).collect())
                    .collect()
            };
            Raw {
                n,
                b: rel(f.belief()),
                x: rel(m.temporal()),
                rp: hood(HoodKind::Preference),
                ri: hood(HoodKind::Intention),
            }
        }
    }

    fn imp(a: bool, b: bool) -> bool {
        !a || b
    }

    pub fn holds(r: &Raw, c: Condition) -> bool {
        let n = r.n;
        let st = || 0..n;
        let sets = || 0u32..(1 << n);
        let full = (1u32 << n) - 1;
        let mem = |q: u32, y: usize| q >> y & 1 == 1;
        let bset = |x: usize| st().filter(|&y| r.b[x][y]).fold(0u32, |a, y| a | 1 << y);
        let ef = {
            let mut e = r.x.clone();
            for i in st() {
                e[i][i] = true;
            }
            for k in st() {
                for i in st() {
                    for j in st() {
                        if e[i][k] && e[k][j] {
                            e[i][j] = true;
                        }
                    }
                }
            }
            e
        };
        let bx = |x: usize, y: usize| st().any(|m| r.b[x][m] && r.x[m][y]);
        let bxb = |x: usize, y: usize| st().any(|m| bx(x, m) && r.b[m][y]);
        use Condition::*;
        let fam = |c: Condition| match c {
            BP1 | BP2 | BP3 | BP4 | BP5 => &r.rp,
            _ => &r.ri,
        };
        match c {
            B3 => st().all(|x| st().all(|y| st().all(|z| imp(r.b[x][y] && r.b[y][z], r.b[x][z])))),
            B4 => st().all(|x| st().all(|y| st().all(|z| imp(r.b[x][y] && r.b[x][z], r.b[y][z])))),
            B5 => st().all(|x| st().any(|y| r.b[x][y])),
            P1 => st().all(|x| {
                sets().all(|a| {
                    sets().all(|b| imp(r.rp[x].contains(&a) && r.rp[x].contains(&b), r.rp[x].contains(&(a & b))))
                })
            }),
            P2 => st().all(|x| {
                sets().all(|a| {
                    sets().all(|b| {
                        imp(
                            r.rp[x].contains(&a) && r.rp[x].contains(&((full & !a) | b)),
                            r.rp[x].contains(&b),
                        )
                    })
                })
            }),
            P3 => st().all(|x| {
                sets().all(|q| {
                    let ev = st().filter(|&y| r.rp[y].contains(&q)).fold(0u32, |a, y| a | 1 << y);
                    imp(r.rp[x].contains(&ev), r.rp[x].contains(&q))
                })
            }),
            P4 => st().all(|x| {
                sets().all(|a| {
                    imp(
                        r.rp[x].contains(&a),
                        sets().all(|b| st().any(|y| imp(r.rp[x].contains(&b), mem(b, y) && r.rp[y].contains(&a)))),
                    )
                })
            }),
            BP1 | BI1 => {
                let f = fam(if c == BP1 { BP2 } else { BI2 });
                st().all(|x| {
                    sets().all(|a| {
                        sets().all(|b| {
                            let agree = (a & b) | (full & !a & !b);
                            imp(f[x].contains(&a) && bset(x) & !agree == 0, f[x].contains(&b))
                        })
                    })
                })
            }
            BP2 | BI2 => {
                let f = fam(c);
                st().all(|x| sets().all(|q| imp(f[x].contains(&q), st().all(|y| imp(r.b[x][y], f[y].contains(&q))))))
            }
            BP3 | BI3 => {
                let f = fam(c);
                st().all(|x| sets().all(|q| imp(st().any(|y| r.b[x][y] && f[y].contains(&q)), f[x].contains(&q))))
            }
            BP4 | BI4 => {
                let f = fam(c);
                st().all(|x| sets().all(|q| imp(st().all(|y| imp(r.b[x][y], f[y].contains(&q))), f[x].contains(&q))))
            }
            BP5 | BI5 => {
                let f = fam(c);
                st().all(|x| sets().all(|q| imp(f[x].contains(&q), st().any(|y| r.b[x][y] && f[y].contains(&q)))))
            }
            BPIEF1a => st().all(|x| sets().all(|q| imp(r.ri[x].contains(&q), r.rp[x].contains(&q)))),
            BPIEF1b => st().all(|x| r.ri[x].iter().fold(0u32, |a, q| a | q) & bset(x) == 0),
            BPIEF1c => st().all(|x| {
                st().all(|y| {
                    sets().all(|q| imp(r.b[x][y] && r.ri[x].contains(&q), st().any(|z| ef[y][z] && mem(q, z))))
                })
            }),
            BX1 => st().all(|x| st().all(|y| imp(bxb(x, y), bx(x, y)))),
            BX2 => st().all(|x| {
                sets().all(|q| {
                    let hyp = st().all(|y| st().any(|z| imp(r.b[x][y], r.x[y][z] && mem(q, z))));
                    let concl = st()
                        .all(|u| st().any(|v| st().all(|w| imp(r.b[x][u], r.x[u][v] && imp(r.b[v][w], mem(q, w))))));
                    imp(hyp, concl)
                })
            }),
        }
    }
}

fn arb_model() -> impl Strategy<Value = Model> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let sets = 1u32 << n;
            let rel = proptest::collection::vec(proptest::bool::weighted(0.4), n * n);
            let hood = proptest::collection::vec(proptest::collection::btree_set(0..sets, 0..3), n);
            (Just(n), rel.clone(), rel, hood.clone(), hood, any::<bool>())
        })
        .prop_map(|(n, b, x, rp, ri, closed)| {
            let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let mut m = Model::new(names, ["p"], ["a"]).unwrap();
            let pairs = |v: &[bool]| Relation::from_pairs(n, (0..n * n).filter(|&i| v[i]).map(|i| (i / n, i % n)));
            let mut belief = pairs(&b);
            if closed {
                // Push belief towards KD45 so the interaction conditions are exercised.
                belief = Relation::full(n);
            }
            m.set_belief(0, belief);
            m.set_temporal(pairs(&x));
            for s in 0..n {
                let to_set = |fam: &BTreeSet<u32>| fam.iter().map(|&q| StateSet::from_mask(n, q as u64)).collect();
                m.set_hood(HoodKind::Preference, 0, s, to_set(&rp[s]));
                m.set_hood(HoodKind::Intention, 0, s, to_set(&ri[s]));
            }
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn verdicts_match_unpruned_evaluation(m in arb_model()) {
        let raw = brute::Raw::of(&m);
        for c in Condition::ALL {
            let vs = check_condition(c, &m).unwrap();
            prop_assert_eq!(vs.is_empty(), brute::holds(&raw, c), "{}", c);
            for v in &vs {
                prop_assert!(v.reproduces(&m), "{}", v.render(&m));
            }
        }
    }

    #[test]
    fn explicit_family_violations_reproduce(m in arb_model(), masks in proptest::collection::btree_set(0u64..8, 0..5)) {
        let n = m.len();
        let family: BTreeSet<StateSet> = masks.into_iter().map(|q| StateSet::from_mask(n, q & ((1 << n) - 1))).collect();
        let da = DaFamily::Explicit(family.clone());
        let vs = check_da_closure(&m, &da).unwrap();
        for v in &vs {
            prop_assert!(v.reproduces_in(&m, &da));
        }
        // The full powerset as an explicit family is closed.
        let all = DaFamily::Explicit(StateSet::powerset(n).collect());
        prop_assert!(check_da_closure(&m, &all).unwrap().is_empty());
    }
}
